import math
from fractions import Fraction

import numpy as np
from hypothesis import given, settings
from hypothesis import strategies as st

from homflow.catalog import heisenberg, sec4_algebra, sec5_algebra
from homflow.dynamics import QuadraticHamiltonian, from_polar, lie_poisson_rhs, to_polar
from homflow.lie_core import (LieAlgebra, algebra_index, annihilator, coordinate_function,
                              lie_poisson_bracket, pairing_rank, validate_algebra)
from homflow.linalg import matrix_rank

ALGEBRAS = {"sec4": sec4_algebra(), "sec5": sec5_algebra(), "sec5q": sec5_algebra(Fraction(5, 3)),
            "heisenberg": heisenberg()}
ALPHA = math.sqrt(2.0)

rationals = st.fractions(min_value=-97, max_value=97, max_denominator=97)
moderate = st.floats(min_value=-3, max_value=3, allow_nan=False)


@settings(max_examples=60, deadline=None)
@given(name=st.sampled_from(sorted(ALGEBRAS)), data=st.data())
def test_pairing_rank_is_even_and_complements_annihilator(name, data):
    alg = ALGEBRAS[name]
    lam = data.draw(st.lists(rationals, min_size=alg.n, max_size=alg.n))
    r = pairing_rank(alg, lam)
    assert r % 2 == 0
    assert r + len(annihilator(alg, lam)) == alg.n


@settings(max_examples=40, deadline=None)
@given(P=st.lists(st.floats(min_value=0.2, max_value=3), min_size=5, max_size=5),
       signs=st.lists(st.sampled_from([-1, 1]), min_size=5, max_size=5))
def test_wild_casimir_gradients_annihilate(P, signs):
    P = np.array(P) * np.array(signs)
    alg = sec5_algebra()
    Ks = [lambda Q: math.hypot(Q[1], Q[2]), lambda Q: math.hypot(Q[3], ALPHA * Q[4]),
          lambda Q: math.atan2(Q[3], ALPHA * Q[4]) - ALPHA * math.atan2(Q[1], Q[2])]
    for K in Ks:
        for b in range(5):
            assert abs(lie_poisson_bracket(alg, K, coordinate_function(5, b), P)) < 1e-7


@settings(max_examples=100, deadline=None)
@given(P=st.lists(moderate, min_size=5, max_size=5))
def test_polar_round_trip(P):
    if math.hypot(P[1], P[2]) < 1e-6 or math.hypot(P[3], P[4]) < 1e-6:
        return
    assert np.allclose(from_polar(to_polar(P, ALPHA), ALPHA), P, atol=1e-12)


@settings(max_examples=50, deadline=None)
@given(P=st.lists(moderate, min_size=5, max_size=5), c=moderate)
def test_rhs_scales_quadratically(P, c):
    H = QuadraticHamiltonian(np.diag([1.0, 2.0, 0.5, -1.0, 3.0]))
    P = np.array(P)
    for alg in (sec4_algebra(), sec5_algebra()):
        lhs = lie_poisson_rhs(alg, H, c * P)
        assert np.allclose(lhs, c * c * lie_poisson_rhs(alg, H, P), atol=1e-9)


@settings(max_examples=30, deadline=None)
@given(coeffs=st.lists(st.integers(-4, 4), min_size=9, max_size=9))
def test_derivation_on_abelian_ideal_always_satisfies_jacobi(coeffs):
    # [e1, e_i] = sum_k D_ik e_k on the abelian ideal <e2, e3, e4>
    rel = [(1, i + 2, k + 2, coeffs[3 * i + k]) for i in range(3) for k in range(3)]
    assert validate_algebra(LieAlgebra.from_brackets(4, rel)).ok


@settings(max_examples=15, deadline=None)
@given(M=st.lists(st.lists(st.integers(-3, 3), min_size=3, max_size=3), min_size=3, max_size=3))
def test_index_invariant_under_basis_change(M):
    if matrix_rank(M, exact=True) < 3:
        return
    alg = heisenberg().change_basis(M)
    assert validate_algebra(alg).ok
    assert algebra_index(alg) == 1
