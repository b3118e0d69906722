"""kappastar: an exact symbolic workbench for kappa-Minkowski star products.

Everything is computed over the Gaussian rationals with the deformation
parameter theta kept formal, so every identity the package verifies is an
exact polynomial equality.
"""

__version__ = "0.1.0"

from .scalars import IMAG, ONE, ZERO, GaussianRational
from .poly import (AlgebraError, Poly, RationalFn, SubstitutionError,
                   TableMismatchError, UnknownVariableError, VarTable)
from .series import ThetaSeries
from .diffop import (BiDiffOp, DiffOp, OneForm, TwoForm, VectorField,
                     lie_derivative, wedge)
from .star import (StarProduct, build_star, poisson_bracket, star_apply,
                   star_commutator, verify_associativity)
from .realization import (FockRep, Realization, compare_moyal_reduction, fock_check,
                          kappa_realization, left_right_realizations, su2_realization,
                          verify_reduction_kappa, verify_reduction_su2)
from .twist import (TwistSeries, TwistStarProduct, build_twist, expand_rs_product,
                    falling_factorial_op, pure_falling_op, rs_theta2_diff,
                    star_from_twist, twist_star_product, verify_falling_factorial,
                    verify_lemma2, wedge_star, wedge_star_is_undeformed)
from .cyclicity import (Condition, ConditionSet, IBPExpression, PowerMeasure,
                        RationalMeasure, box_integral, check_candidate,
                        commutator_integrand, extract_conditions, first_order_rules,
                        ibp_normalize, reduce_with_rules, standard_candidates)
from .parser import ParseError, parse

__all__ = [
    "AlgebraError", "BiDiffOp", "Condition", "ConditionSet", "DiffOp", "FockRep",
    "GaussianRational", "IBPExpression", "IMAG", "ONE", "OneForm", "ParseError",
    "Poly", "PowerMeasure", "RationalFn", "RationalMeasure", "Realization",
    "StarProduct", "SubstitutionError", "TableMismatchError", "ThetaSeries",
    "TwistSeries", "TwistStarProduct", "TwoForm", "UnknownVariableError",
    "VarTable", "VectorField", "ZERO", "box_integral", "build_star", "build_twist",
    "check_candidate", "commutator_integrand", "compare_moyal_reduction",
    "expand_rs_product", "extract_conditions", "falling_factorial_op", "fock_check",
    "first_order_rules", "ibp_normalize", "kappa_realization",
    "left_right_realizations", "lie_derivative", "parse", "poisson_bracket",
    "pure_falling_op", "reduce_with_rules", "rs_theta2_diff", "standard_candidates",
    "star_apply", "star_commutator", "star_from_twist", "su2_realization",
    "twist_star_product", "verify_associativity", "verify_falling_factorial",
    "verify_lemma2", "verify_reduction_kappa", "verify_reduction_su2", "wedge",
    "wedge_star", "wedge_star_is_undeformed",
]
