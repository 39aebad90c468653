"""Integer invariants, integrability verdicts and Hamiltonian dynamics on homogeneous spaces."""

from .catalog import (figure1_metric, heisenberg, heisenberg_space, sec4_algebra, sec4_space,
                      sec5_algebra, sec5_space)
from .dynamics import figure1_report, integrate_coalgebra, integrate_geodesic, lie_poisson_rhs
from .homspace import SubalgebraSpec, classify, metric_admissibility
from .lie_core import (LieAlgebra, algebra_index, annihilator, coadjoint_pairing_matrix,
                       lie_poisson_bracket, validate_algebra)
from .realization import PolyVectorField, realization_check

__all__ = [
    "LieAlgebra", "validate_algebra", "coadjoint_pairing_matrix", "annihilator", "algebra_index",
    "lie_poisson_bracket", "SubalgebraSpec", "classify", "metric_admissibility",
    "PolyVectorField", "realization_check", "lie_poisson_rhs", "integrate_coalgebra",
    "integrate_geodesic", "figure1_report", "sec4_algebra", "sec5_algebra", "heisenberg",
    "sec4_space", "sec5_space", "heisenberg_space", "figure1_metric",
]
