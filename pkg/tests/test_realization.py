import math
from fractions import Fraction

import numpy as np
import pytest

from homflow.catalog import sec4_algebra, sec5_algebra
from homflow.lie_core import LieAlgebra, coordinate_function, lie_poisson_bracket
from homflow.poly import Polynomial
from homflow.realization import (CentralHamiltonian, InvariantHamiltonian, PolyVectorField,
                                 abelian_fields, canonical_bracket, central_hamiltonian,
                                 moment_map, numeric_grad, realization_check, sec4_casimir,
                                 sec4_casimir_poly, sec4_fields, sec4_invariants, sec4_relations,
                                 sec5_fields)

RNG_POINTS = 100


def points(seed, n=RNG_POINTS, dim=8):
    rng = np.random.default_rng(seed)
    return [rng.uniform(-1.0, 1.0, dim) for _ in range(n)]


def test_sec4_realization_exact():
    rep = realization_check(sec4_fields(), sec4_algebra())
    assert rep.ok and rep.exact and rep.max_residual == 0.0


def test_sec5_realization_floating():
    rep = realization_check(sec5_fields(), sec5_algebra(), tol=1e-12)
    assert rep.ok and not rep.exact
    assert rep.max_residual < 1e-12


def test_sec5_realization_exact_for_rational_alpha():
    a = Fraction(3, 2)
    rep = realization_check(sec5_fields(a), sec5_algebra(a))
    assert rep.ok and rep.exact


def test_mismatched_parameter_is_caught():
    rep = realization_check(sec5_fields(1.5), sec5_algebra())
    assert not rep.ok
    assert rep.failures == ((1, 4),)


def test_abelian_realization():
    assert realization_check(abelian_fields(3), LieAlgebra.abelian(3)).ok


def test_fields_must_be_linear_in_momenta():
    x, p = Polynomial.var(2, 0), Polynomial.var(2, 1)
    with pytest.raises(ValueError):
        PolyVectorField(1, [p * p])
    with pytest.raises(ValueError):
        PolyVectorField(1, [x])


def test_from_components_roundtrip():
    # X = x p_x on the line
    f = PolyVectorField.from_components(1, [[[((1,), 1)]]])
    assert f.functions[0] == Polynomial.var(2, 0) * Polynomial.var(2, 1)


def test_invariants_commute_with_generators():
    L = sec4_invariants()
    X = sec4_fields().functions
    worst = 0.0
    for z in points(0):
        for l in L.functions:
            for x in X:
                worst = max(worst, abs(canonical_bracket(l, x, z)))
    assert worst < 1e-9


def test_hand_gradients_of_invariants():
    L = sec4_invariants()
    for z in points(1, 10):
        for l in L.functions:
            assert np.allclose(l.grad(z), numeric_grad(l, z), atol=1e-7)


def test_invariant_relations_as_computed():
    # {L1, L2} = L1, {L1, L3} = 0, {L2, L3} = L3
    L = sec4_invariants()
    worst = 0.0
    for z in points(2):
        a = L.values(z)
        R = sec4_relations(a)
        for i in range(3):
            for k in range(3):
                got = canonical_bracket(L.functions[i], L.functions[k], z)
                worst = max(worst, abs(got - R[i, k]))
    assert worst < 1e-9


def test_printed_relation_l1_l2_does_not_hold():
    L = sec4_invariants()
    errs = [abs(canonical_bracket(L.functions[0], L.functions[1], z) - L.values(z)[2])
            for z in points(3, 20)]
    assert max(errs) > 1e-2


def test_sheet_casimir_is_minus_orbit_casimir():
    L = sec4_invariants()
    X = sec4_fields()
    for z in points(4):
        l1, _, l3 = L.values(z)
        assert abs(l1 * l3 + sec4_casimir(X.values(z))) < 1e-9


def test_sheet_casimir_commutes_with_invariants():
    L = sec4_invariants()
    L1, L3 = L.functions[0], L.functions[2]
    from homflow.realization import PhaseFunction
    Z = PhaseFunction(lambda z: L1(z) * L3(z), lambda z: L1.grad(z) * L3(z) + L1(z) * L3.grad(z))
    for z in points(5, 20):
        for l in L.functions:
            assert abs(canonical_bracket(Z, l, z)) < 1e-9


@pytest.mark.parametrize("alg,K", [
    (sec4_algebra(), sec4_casimir_poly()),
])
def test_casimir_gradient_annihilation_exact(alg, K):
    rng = np.random.default_rng(6)
    for _ in range(20):
        P = [Fraction(int(v), 7) for v in rng.integers(-20, 20, 5)]
        for a in range(alg.n):
            assert lie_poisson_bracket(alg, K, coordinate_function(alg.n, a), P) == 0


def test_wild_casimirs_annihilate():
    alg = sec5_algebra()
    a = math.sqrt(2.0)
    Ks = [lambda P: math.hypot(P[1], P[2]), lambda P: math.hypot(P[3], a * P[4]),
          lambda P: math.atan2(P[3], a * P[4]) - a * math.atan2(P[1], P[2])]
    rng = np.random.default_rng(7)
    for _ in range(50):
        P = rng.uniform(0.3, 1.0, 5)
        for K in Ks:
            for b in range(5):
                assert abs(lie_poisson_bracket(alg, K, coordinate_function(5, b), P)) < 1e-8


def test_moment_map_and_central_hamiltonian():
    f = sec5_fields()
    G = np.diag([1.0, 2.0, 3.0, 4.0, 5.0])
    z = np.array([0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8])
    P = moment_map(f, z)
    assert np.allclose(P[1:], [0.6, 0.7, 0.8, 0.5])
    assert central_hamiltonian(f, G, z) == pytest.approx(0.5 * P @ G @ P)
    H = CentralHamiltonian(f, G)
    assert np.allclose(H.grad(z), numeric_grad(H, z), atol=1e-8)


def test_invariant_hamiltonian_gradient():
    H = InvariantHamiltonian(sec4_invariants(), (1.0, 0.5, -0.3, 2.0))
    for z in points(8, 5):
        assert np.allclose(H.grad(z), numeric_grad(H, z), atol=1e-7)
    with pytest.raises(ValueError):
        InvariantHamiltonian(sec4_invariants(), (1.0, 2.0))
