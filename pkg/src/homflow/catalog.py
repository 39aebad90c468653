"""Built-in algebras, isotropy subalgebras and metrics used throughout the package.

``sec4`` is the 5-dimensional unsolvable algebra with isotropy ``h = <e5>``;
``sec5`` is the wild solvable algebra (irrational parameter ``alpha``) with
isotropy ``h = <e1>``.
"""

from __future__ import annotations

import math
from fractions import Fraction

import numpy as np

from .lie_core import LieAlgebra

SQRT2 = math.sqrt(2.0)


def sec4_algebra() -> LieAlgebra:
    return LieAlgebra.from_brackets(5, [
        (1, 4, 1, -1), (1, 5, 2, 1), (2, 3, 1, 1), (2, 4, 2, 1),
        (3, 4, 3, -2), (3, 5, 4, 1), (4, 5, 5, -2),
    ], name="sec4")


def sec5_algebra(alpha=SQRT2) -> LieAlgebra:
    """``[e1,e2]=e3, [e1,e3]=-e2, [e1,e4]=alpha^2 e5, [e1,e5]=-e4``.

    Exact when ``alpha`` is an int or Fraction, floating otherwise.
    """
    a2 = alpha * alpha
    one = 1 if isinstance(alpha, (int, Fraction)) else 1.0
    return LieAlgebra.from_brackets(5, [
        (1, 2, 3, one), (1, 3, 2, -one), (1, 4, 5, a2), (1, 5, 4, -one),
    ], name="sec5")


def heisenberg() -> LieAlgebra:
    return LieAlgebra.from_brackets(3, [(1, 2, 3, 1)], name="heisenberg")


def unit_vector(n: int, i: int) -> list[Fraction]:
    """``e_i`` (1-based) as an exact coefficient vector."""
    v = [Fraction(0)] * n
    v[i - 1] = Fraction(1)
    return v


def sec4_space():
    from .homspace import SubalgebraSpec
    return SubalgebraSpec(sec4_algebra(), [unit_vector(5, 5)])


def sec5_space(alpha=SQRT2):
    from .homspace import SubalgebraSpec
    return SubalgebraSpec(sec5_algebra(alpha), [unit_vector(5, 1)])


def heisenberg_space():
    from .homspace import SubalgebraSpec
    return SubalgebraSpec(heisenberg(), [unit_vector(3, 3)])


def figure1_metric() -> np.ndarray:
    """``G`` of ``H = (P1^2 + 2 P1 P3 + 2 P1 P4 - P4^2 + P5^2) / 2``."""
    G = np.zeros((5, 5))
    G[0, 0] = 1.0
    G[0, 2] = G[2, 0] = 1.0
    G[0, 3] = G[3, 0] = 1.0
    G[3, 3] = -1.0
    G[4, 4] = 1.0
    return G


FIGURE1_P0 = (1.0, 1 / 2, 1 / 3, 1 / 4, 1 / 5)

SPACES = {"sec4": sec4_space, "sec5": sec5_space, "heisenberg": heisenberg_space}
