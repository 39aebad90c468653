import math
from fractions import Fraction

import numpy as np
import pytest

from homflow.catalog import FIGURE1_P0, figure1_metric, sec4_algebra, sec5_algebra
from homflow.dynamics import (AngleLiftingError, DegenerateRadiusError, IntegrationError,
                              LiePoissonSystem, QuadraticHamiltonian, attribute_jump,
                              casimir_values, find_jumps, from_polar, integrate_coalgebra,
                              integrate_fixed, lift_angles,
                              lie_poisson_rhs, sec5_casimir_monitors, to_polar,
                              triangular_residual)
from homflow.lie_core import LieAlgebra
from homflow.realization import sec5_fields

ALPHA = math.sqrt(2.0)
SEC4 = [(1, 4, 1, -1), (1, 5, 2, 1), (2, 3, 1, 1), (2, 4, 2, 1),
        (3, 4, 3, -2), (3, 5, 4, 1), (4, 5, 5, -2)]


def so3():
    return LieAlgebra.from_brackets(3, [(1, 2, 3, 1), (2, 3, 1, 1), (3, 1, 2, 1)])


def rhs_oracle(n, relations, G, P):
    """dP_A/dt = sum C_EA^C P_C (G P)_E, expanded from the relation list."""
    GP = [sum(G[e][b] * P[b] for b in range(n)) for e in range(n)]
    out = [0] * n
    for a, b, c, v in relations:
        # C_ab^c = v and C_ba^c = -v
        out[b - 1] += v * P[c - 1] * GP[a - 1]
        out[a - 1] -= v * P[c - 1] * GP[b - 1]
    return out


def oscillator(y):
    return np.array([y[1], -y[0]])


@pytest.mark.parametrize("method,order", [("rk4", 4), ("midpoint", 2)])
def test_integrator_order(method, order):
    errs = []
    for dt in (0.1, 0.05):
        tr = integrate_fixed(oscillator, [1.0, 0.0], dt, 2.0, method)
        errs.append(abs(tr.states[-1, 0] - math.cos(2.0)))
    assert 0.7 * 2 ** order < errs[0] / errs[1] < 1.3 * 2 ** order


def test_integrator_errors():
    with pytest.raises(ValueError):
        integrate_fixed(oscillator, [1.0, 0.0], -0.1, 1.0)
    with pytest.raises(ValueError):
        integrate_fixed(oscillator, [1.0, 0.0], 0.1, 1.0, "euler")
    with pytest.raises(IntegrationError) as exc, np.errstate(over="ignore", invalid="ignore"):
        integrate_fixed(lambda y: y * y, [1.0], 0.1, 20.0)
    # y' = y^2 from y = 1 blows up at t = 1
    assert exc.value.last_time < 2.0
    assert len(exc.value.trajectory.times) >= 1


def test_rhs_against_oracle_exact():
    alg = sec4_algebra()
    G = [[Fraction(int(i == k) * (i + 1)) for k in range(5)] for i in range(5)]
    H = QuadraticHamiltonian(G)
    P = [Fraction(1), Fraction(-2, 3), Fraction(5, 7), Fraction(1, 2), Fraction(3)]
    got = lie_poisson_rhs(alg, H, P)
    assert list(got) == rhs_oracle(5, SEC4, G, P)


def test_compiled_rhs_matches_oracle():
    rng = np.random.default_rng(0)
    S = rng.uniform(-1, 1, (5, 5))
    G = S + S.T
    sys_ = LiePoissonSystem(sec4_algebra(), QuadraticHamiltonian(G))
    for _ in range(20):
        P = rng.uniform(-1, 1, 5)
        assert np.allclose(sys_(P), rhs_oracle(5, SEC4, G, list(P)), atol=1e-13)


def test_rhs_is_quadratic():
    rng = np.random.default_rng(1)
    H = QuadraticHamiltonian(figure1_metric())
    alg = sec5_algebra()
    for _ in range(10):
        P, c = rng.uniform(-1, 1, 5), rng.uniform(-3, 3)
        assert np.allclose(lie_poisson_rhs(alg, H, c * P), c * c * lie_poisson_rhs(alg, H, P))


def test_rigid_body_euler_equations():
    inertia = np.array([1.0, 2.0, 3.0])
    H = QuadraticHamiltonian(np.diag(1 / inertia))
    M = np.array([0.3, -0.4, 0.8])
    # dM/dt = M x omega with omega = M / I in this bracket orientation
    assert np.allclose(lie_poisson_rhs(so3(), H, M), np.cross(M, M / inertia))
    tr = integrate_coalgebra(so3(), H, M, 0.01, 10.0, casimirs={
        "C": lambda S: np.sum(S * S, axis=1)})
    assert tr.drift("C") < 1e-8
    assert tr.drift("H") < 1e-8


def test_casimir_drift_is_fourth_order():
    drifts = []
    for dt in (0.04, 0.02):
        tr = integrate_coalgebra(sec5_algebra(), figure1_metric(), FIGURE1_P0, dt, 20.0,
                                 casimirs=sec5_casimir_monitors(ALPHA))
        drifts.append(tr.drift("K3_unwrapped"))
    assert 8 <= drifts[0] / drifts[1] <= 32


def test_polar_round_trip():
    rng = np.random.default_rng(2)
    for _ in range(100):
        P = rng.uniform(-2, 2, 5)
        c = to_polar(P, ALPHA)
        assert -math.pi <= c.phi < math.pi and -math.pi <= c.psi < math.pi
        assert np.allclose(from_polar(c, ALPHA), P, atol=1e-12)


def test_degenerate_radius():
    with pytest.raises(DegenerateRadiusError):
        to_polar([1.0, 0.0, 0.0, 1.0, 1.0])
    with pytest.raises(DegenerateRadiusError):
        casimir_values([1.0, 1.0, 1.0, 0.0, 0.0])


def test_lift_angles():
    t = np.linspace(0, 20, 2001)
    wrapped = np.angle(np.exp(1j * t))
    assert np.allclose(lift_angles(wrapped), t)
    with pytest.raises(AngleLiftingError):
        lift_angles([0.0, 2.0, 4.0])


def test_casimir_values_single_point():
    P = [0.5, 1.0, 0.0, 0.0, 1.0]
    v = casimir_values(P, ALPHA)
    assert v["K1"] == pytest.approx(1.0)
    assert v["K2"] == pytest.approx(ALPHA)
    assert v["K3_unwrapped"] == pytest.approx(-ALPHA * math.pi / 2)
    assert v["K3_wrapped"] == pytest.approx((-ALPHA * math.pi / 2) % (2 * math.pi))


def test_attribute_jump():
    n, m, r = attribute_jump(2 * math.pi * (-2 + ALPHA), ALPHA)
    assert (n, m) == (-2, -1) and r < 1e-12
    n, m, r = attribute_jump(2 * math.pi * (3 - 2 * ALPHA), ALPHA)
    assert (n, m) == (3, 2)


def test_find_jumps_on_synthetic_series():
    t = np.arange(6.0)
    d = 2 * math.pi * (1 - ALPHA)
    k = np.array([1.0, 1.01, 1.02, 1.03 + d, 1.04 + d, 1.05 + d])
    jumps = find_jumps(t, k, ALPHA)
    assert len(jumps) == 1
    assert (jumps[0].n, jumps[0].m, jumps[0].time) == (1, 1, 3.0)


def test_triangular_residual_short_run():
    rng = np.random.default_rng(3)
    S = rng.uniform(-0.5, 0.5, (5, 5))
    G = np.eye(5) + S + S.T
    z0 = rng.uniform(-0.5, 0.5, 8)
    assert triangular_residual(sec5_algebra(), sec5_fields(), G, z0, dt=1e-4, T=0.2) < 1e-6
