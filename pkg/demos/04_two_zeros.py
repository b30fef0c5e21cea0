"""
A theory that needs an infinitary step
======================================

Take the unit interval with a second copy 0' of zero.  0 and 0' are within
every positive distance of each other but are not equal.  Every finitary
rule is respected on a finite grid of distances, so the step from "close at
every eps > 0" to "close at 0" can only come from the infinitary rule.
"""

from liftcert.theories import default_grid, model_respects_finitary_rules, two_zeros_model

model = two_zeros_model(default_grid(10))
print("carrier:", ", ".join(model.carrier))
for line in model_respects_finitary_rules(model).lines():
    print(line)
