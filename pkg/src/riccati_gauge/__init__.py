"""Riccati equations under the gauge group of SL(2, R)-valued curves."""

from .expr import (T, Const, DomainError, Expr, Integral, Interval,
                   antiderivative_from, count_integrals, differentiate,
                   eval_at, simplify)
from .parser import ParseError, parse_expr
from .quadrature import QuadratureConfig, QuadratureError
from .reduction import (KnownSolutions, coshift_by_solution, murphy_X,
                        scale_normalize_a1, shift_by_solution,
                        shift_normalize_a1, three_solution_element,
                        two_solution_element)
from .riccati import (ConstRiccati, RiccatiEquation, casimir,
                      constant_solutions, criterion_constant_ratio,
                      criterion_strelchenya, criterion_sum,
                      guess_particular_solution, residual_max, rhs_at,
                      transform, transform_constant)
from .sl2 import (INF, GroupElement, Sl2Vector, adjoint_matrix_at,
                  check_unimodular, cocycle_theta, compose, inverse,
                  mobius_apply, mobius_expr, sl2_bracket)
from .solver import (Trajectory, cross_ratio, pullback_solution, quadrature,
                     rk4_integrate, solve_linear, solve_one_known,
                     solve_two_known, superposition_eval,
                     superposition_expr)

__version__ = "0.1.0"
