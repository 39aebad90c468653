from fractions import Fraction

import numpy as np
import pytest

from homflow import linalg


def test_rref_identity_and_pivots():
    rows, piv = linalg.rref([[2, 4], [1, 3]])
    assert rows == [[1, 0], [0, 1]]
    assert piv == [0, 1]


def test_exact_rank_sees_tiny_rational_entries():
    M = [[1, 0], [0, Fraction(1, 10**30)]]
    assert linalg.matrix_rank(M, exact=True) == 2
    # the floating path truncates it, as documented
    assert linalg.matrix_rank(np.array(M, dtype=float), exact=False) == 1


def test_exact_nullspace_is_annihilated():
    M = [[1, 2, 3], [2, 4, 6], [1, 0, -1]]
    ker = linalg.nullspace(M, exact=True)
    assert len(ker) == 1
    for v in ker:
        assert all(sum(Fraction(a) * b for a, b in zip(row, v)) == 0 for row in M)


def test_float_nullspace_matches_exact():
    M = [[1, 2, 3], [2, 4, 6], [1, 0, -1]]
    ker = linalg.nullspace(np.array(M, dtype=float), exact=False)
    assert len(ker) == 1
    assert np.allclose(np.array(M, dtype=float) @ ker[0], 0.0, atol=1e-12)


@pytest.mark.parametrize("exact", [True, False])
def test_independent(exact):
    assert linalg.independent([[1, 0, 0], [0, 1, 0]], exact)
    assert not linalg.independent([[1, 2, 0], [2, 4, 0]], exact)
    assert linalg.independent([], exact)


def test_empty_matrix_rank_is_zero():
    assert linalg.matrix_rank(np.zeros((0, 3)), exact=False) == 0
    assert linalg.matrix_rank([[0, 0], [0, 0]], exact=True) == 0
