"""List-recovery parameter planning.

Run: python demos/06_parameter_plan.py
"""

from fractions import Fraction

from code_forge import recovery_parameter_plan

for ell, R, eps in [(2, Fraction(1, 2), Fraction(1, 2)), (3, Fraction(1, 4), Fraction(1, 2)),
                    (4, Fraction(1, 3), Fraction(1, 5))]:
    print(recovery_parameter_plan(ell, R, eps).summary)
