"""Canonical coordinates on coadjoint orbits and symplectic sheets.

Two built-in worked examples are encoded in closed form and then verified:

* ``sec4``: the unsolvable algebra with isotropy ``<e5>`` and a G-invariant
  Hamiltonian ``H(L(x, p))``.  Orbit chart ``(q1, q2, pi1, pi2, j)``, sheet
  chart ``(u, v, j)``.
* ``sec5``: the wild algebra with isotropy ``<e1>`` and an arbitrary central
  metric.  Orbit chart ``(q, pi, j1, j2, j3)``.

Conjugacy conventions follow the global bracket orientation
``{f, g} = f_p g_x - f_x g_p``: momenta ``pi, v, j`` pair with coordinates
``q, u, tau`` through ``{pi, q} = {v, u} = {j, tau} = 1``.  In this
orientation the transition functions must satisfy ``{j_k, T^m} = delta``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np

from .catalog import SQRT2, sec4_algebra, sec5_algebra
from .dynamics import (QuadraticHamiltonian, integrate_fixed, integrate_hamiltonian,
                       lift_angles)
from .homspace import MetricForm
from .lie_core import LieAlgebra
from .poly import Polynomial, poisson_pairs
from .realization import (CentralHamiltonian, InvariantHamiltonian, PhaseFunction,
                          canonical_bracket, sec4_casimir, sec4_fields,
                          sec4_invariants, sec4_relations, sec5_fields)


class ChartDomainError(ValueError):
    """The point lies outside the domain of the chart or transition function."""


# Orbit charts -----------------------------------------------------------------

@dataclass
class OrbitChart:
    """Map ``(q, pi, j) -> P`` with its Jacobian and the attached Casimirs.

    ``jacobian`` returns ``dP/d(q, pi, j)`` with columns ordered
    ``q_1..q_k, pi_1..pi_k, j_1..j_r``.
    """

    name: str
    algebra: LieAlgebra
    dim_q: int
    n_j: int
    P: Callable
    jacobian: Callable
    casimirs: list
    kappa: Callable
    polys: list | None = None

    def __call__(self, q, pi, j):
        return self.P(np.atleast_1d(q), np.atleast_1d(pi), np.atleast_1d(j))

    def bracket_matrix(self, q, pi, j) -> np.ndarray:
        """``{P_A, P_B}`` in the canonical ``(q, pi)`` structure."""
        J = self.jacobian(np.atleast_1d(q), np.atleast_1d(pi), np.atleast_1d(j))
        k = self.dim_q
        dq, dpi = J[:, :k], J[:, k:2 * k]
        return dpi @ dq.T - dq @ dpi.T

    def intertwining_error(self, q, pi, j) -> float:
        P = self(q, pi, j)
        expected = self.algebra.float_tensor() @ P
        return float(np.max(np.abs(self.bracket_matrix(q, pi, j) - expected)))


def _sec4_chart_polys() -> list[Polynomial]:
    q1, q2, pi1, pi2, j = (Polynomial.var(5, i) for i in range(5))
    return [q1, -q2, q1 * pi2, -q2 * pi2 + q1 * pi1, q2 * pi1 + j * q1 ** -2]


def sec4_orbit_chart() -> OrbitChart:
    """Polarization ``<e1, e2, e5>`` at ``lam = (1, 0, 0, 0, j)``; one Casimir ``K = j``."""
    polys = _sec4_chart_polys()

    def check(q):
        if q[0] == 0:
            raise ChartDomainError("sec4 orbit chart needs q1 != 0")

    def P(q, pi, j):
        check(q)
        pt = [q[0], q[1], pi[0], pi[1], j[0]]
        return np.array([float(p(pt)) for p in polys])

    def jac(q, pi, j):
        check(q)
        pt = [q[0], q[1], pi[0], pi[1], j[0]]
        return np.array([[float(p.diff(k)(pt)) for k in range(5)] for p in polys])

    return OrbitChart("sec4", sec4_algebra(), 2, 1, P, jac, [sec4_casimir],
                      lambda j: np.array([j[0]]), polys)


def sec4_chart_symbolic_checks() -> dict:
    """Exact identities of the sec4 chart as polynomials in ``(q1, q2, pi1, pi2, j)``."""
    polys = _sec4_chart_polys()
    alg = sec4_algebra()
    P1, P2, P3, P4, P5 = polys
    casimir_residual = P1 * P2 * P4 + P1 ** 2 * P5 - P2 ** 2 * P3 - Polynomial.var(5, 4)
    failures = []
    for a in range(5):
        for b in range(a + 1, 5):
            rhs = Polynomial.zero(5)
            for c in range(5):
                cab = alg.constant(a, b, c)
                if cab:
                    rhs = rhs + polys[c] * cab
            if not (poisson_pairs(polys[a], polys[b], (0, 1), (2, 3)) - rhs).is_zero():
                failures.append((a + 1, b + 1))
    return {"casimir_exact": casimir_residual.is_zero(), "intertwining_failures": failures}


def sec5_orbit_chart(alpha: float = SQRT2) -> OrbitChart:
    """Polarization ``<e2, e3, e4, e5>``; Casimirs ``(gamma, rho, psi - alpha phi)``."""

    def check(j):
        if j[0] == 0 or j[1] == 0:
            raise ChartDomainError("sec5 orbit chart excludes orbits with j1 = 0 or j2 = 0")

    def P(q, pi, j):
        check(j)
        th = j[2] + alpha * q[0]
        return np.array([pi[0], j[0] * math.sin(q[0]), j[0] * math.cos(q[0]),
                         alpha * j[1] * math.sin(th), j[1] * math.cos(th)])

    def jac(q, pi, j):
        check(j)
        q0, (j1, j2, j3) = q[0], j
        th = j3 + alpha * q0
        s, c, st, ct = math.sin(q0), math.cos(q0), math.sin(th), math.cos(th)
        return np.array([
            # q, pi, j1, j2, j3
            [0.0, 1.0, 0.0, 0.0, 0.0],
            [j1 * c, 0.0, s, 0.0, 0.0],
            [-j1 * s, 0.0, c, 0.0, 0.0],
            [alpha ** 2 * j2 * ct, 0.0, 0.0, alpha * st, alpha * j2 * ct],
            [-alpha * j2 * st, 0.0, 0.0, ct, -j2 * st],
        ])

    casimirs = [lambda P: math.hypot(P[1], P[2]), lambda P: math.hypot(P[3], alpha * P[4])]
    return OrbitChart("sec5", sec5_algebra(alpha), 1, 3, P, jac, casimirs,
                      lambda j: np.array([j[0], alpha * j[1], j[2]]))


def sec5_lifted_k3(chart: OrbitChart, q: float, pi: float, j, alpha: float = SQRT2,
                   steps: int = 256) -> float:
    """``psi - alpha phi`` continued along the chart path ``q' = 0 -> q``.

    At ``q' = 0`` the principal angles are ``phi = 0`` and ``psi = j3`` when
    ``j1, j2 > 0`` and ``|j3| < pi``.
    """
    path = np.linspace(0.0, q, steps + 1)
    pts = np.array([chart(t, pi, j) for t in path])
    phi = lift_angles(np.arctan2(pts[:, 1], pts[:, 2]))
    psi = lift_angles(np.arctan2(pts[:, 3], alpha * pts[:, 4]))
    return float(psi[-1] - alpha * phi[-1])


def kappa_jacobian_det(chart: OrbitChart, j, h: float = 1e-6) -> float:
    j = np.asarray(j, dtype=float)
    cols = []
    for k in range(j.size):
        e = np.zeros_like(j)
        e[k] = h
        cols.append((chart.kappa(j + e) - chart.kappa(j - e)) / (2 * h))
    return float(np.linalg.det(np.array(cols).T))


# Sheet charts -------------------------------------------------------------------

@dataclass
class SheetChart:
    """Map ``(u, v, j) -> a`` on a symplectic sheet of the invariant-function algebra."""

    name: str
    a: Callable
    jacobian: Callable  # da/d(u, v)
    casimir: Callable
    relations: Callable

    def bracket_matrix(self, u, v, j) -> np.ndarray:
        J = self.jacobian(u, v, j)
        du, dv = J[:, :1], J[:, 1:2]
        return dv @ du.T - du @ dv.T

    def relation_error(self, u, v, j) -> float:
        a = self.a(u, v, j)
        return float(np.max(np.abs(self.bracket_matrix(u, v, j) - self.relations(a))))


def sec4_sheet_chart() -> SheetChart:
    """``a = (u, -u v, j / u)`` on the sheet ``a1 a3 = j``."""

    def check(u):
        if u == 0:
            raise ChartDomainError("sec4 sheet chart needs u != 0")

    def a(u, v, j):
        check(u)
        return np.array([u, -u * v, j / u])

    def jac(u, v, j):
        check(u)
        return np.array([[1.0, 0.0], [-v, -u], [-j / u ** 2, 0.0]])

    return SheetChart("sec4", a, jac, lambda a: a[0] * a[2], sec4_relations)


# Transition functions ---------------------------------------------------------------

@dataclass
class TransitionFunctions:
    """Functions ``T^m(x, p)`` with the implicit chart variables they must be conjugate to.

    ``T`` maps a label to ``(function, index into conjugates)``; ``vanishing``
    holds the chart coordinates that must Poisson-commute with every ``T^m``.
    """

    name: str
    T: dict
    conjugates: dict
    vanishing: dict
    sampler: Callable
    notes: dict = field(default_factory=dict)


@dataclass(frozen=True)
class BracketRow:
    T: str
    other: str
    expected: float
    max_error: float
    tol: float

    @property
    def passed(self) -> bool:
        return self.max_error < self.tol


def transition_table(tf: TransitionFunctions, npoints: int = 100, seed: int = 0,
                     tol: float = 1e-6) -> list[BracketRow]:
    """``{j_k, T^m} = delta_k^m`` and ``{y, T^m} = 0`` for chart coordinates ``y``."""
    rng = np.random.default_rng(seed)
    pts = [tf.sampler(rng) for _ in range(npoints)]
    conj_names = list(tf.conjugates)
    rows = []
    for tname, (T, k_own) in tf.T.items():
        for k, jname in enumerate(conj_names):
            expected = 1.0 if k == k_own else 0.0
            err = max(abs(canonical_bracket(tf.conjugates[jname], T, z) - expected) for z in pts)
            rows.append(BracketRow(tname, jname, expected, err, tol))
        for yname, y in tf.vanishing.items():
            err = max(abs(canonical_bracket(y, T, z)) for z in pts)
            rows.append(BracketRow(tname, yname, 0.0, err, tol))
    return rows


def format_table(rows: Sequence[BracketRow]) -> str:
    lines = [f"{'T':<14}{'with':<8}{'expect':>7}{'max_err':>12}{'tol':>9}  result"]
    for r in rows:
        lines.append(f"{r.T:<14}{r.other:<8}{r.expected:>7.0f}{r.max_error:>12.3e}"
                     f"{r.tol:>9.0e}  {'pass' if r.passed else 'FAIL'}")
    return "\n".join(lines)


def _reciprocal(D: Polynomial, name: str, guard: Callable | None = None) -> PhaseFunction:
    """``1 / D`` with gradient ``-grad D / D^2``."""

    def value(z):
        if guard:
            guard(z)
        d = float(D(z))
        if d == 0:
            raise ChartDomainError(f"{name}: denominator vanishes")
        return 1.0 / d

    def grad(z):
        if guard:
            guard(z)
        d = float(D(z))
        if d == 0:
            raise ChartDomainError(f"{name}: denominator vanishes")
        return -D.grad(z) / d ** 2

    return PhaseFunction(value, grad, name)


def _sec4_guard(z):
    p1, p2, x3 = z[4], z[5], z[2]
    if p1 == 0 or p1 * x3 + p2 == 0:
        raise ChartDomainError("sec4 transition needs p1 != 0 and p1 x3 + p2 != 0")


def _sec4_v():
    def value(z):
        x3, x4, p1, p2, p4 = z[2], z[3], z[4], z[5], z[7]
        return -p4 * math.exp(-x4) / (x3 * p1 + p2)

    def grad(z):
        x3, x4, p1, p2, p4 = z[2], z[3], z[4], z[5], z[7]
        s, e = x3 * p1 + p2, math.exp(-x4)
        g = np.zeros(8)
        g[2] = p4 * e * p1 / s ** 2
        g[3] = p4 * e / s
        g[4] = p4 * e * x3 / s ** 2
        g[5] = p4 * e / s ** 2
        g[7] = -e / s
        return g

    return PhaseFunction(value, grad, "v")


def sec4_implicit_variables() -> dict:
    """Closed-form inversion ``(x, p) -> (q1, q2, pi1, pi2, j, u, v)`` and sheet ``j = L1 L3``."""
    X = sec4_fields().functions
    z = [Polynomial.var(8, i) for i in range(8)]
    p1, p2 = z[4], z[5]
    p1inv = p1 ** -1
    pi2 = X[2] * p1inv
    pi1 = (X[3] - p2 * pi2) * p1inv
    K = X[0] * X[1] * X[3] + X[0] ** 2 * X[4] - X[1] ** 2 * X[2]
    L = sec4_invariants()
    L1, L3 = L.functions[0], L.functions[2]
    sheet_j = PhaseFunction(lambda w: L1(w) * L3(w),
                            lambda w: L1.grad(w) * L3(w) + L1(w) * L3.grad(w), "j_sheet")
    return {"q1": p1, "q2": -p2, "pi1": pi1, "pi2": pi2, "j": K,
            "u": L.functions[0], "v": _sec4_v(), "j_sheet": sheet_j}


def _sec4_sampler(rng):
    while True:
        z = rng.uniform(-1.0, 1.0, 8)
        x3, x4, p1, p2 = z[2], z[3], z[4], z[5]
        if abs(p1) > 0.2 and abs(p1 * x3 + p2) > 0.2:
            return z


def sec4_transition() -> TransitionFunctions:
    """``T = [p1^2 (p1 x3 + p2)]^-1`` as printed, plus the rescaled ``p1 T``.

    Only ``p1 T = [p1 (p1 x3 + p2)]^-1`` is conjugate to ``j = K(X(x, p))``:
    for the printed form ``{j, T} = 1/p1`` and ``{pi1, T} != 0``.
    """
    z = [Polynomial.var(8, i) for i in range(8)]
    x3, p1, p2 = z[2], z[4], z[5]
    V = sec4_implicit_variables()
    T = _reciprocal(p1 ** 2 * (p1 * x3 + p2), "T", _sec4_guard)
    T_fix = _reciprocal(p1 * (p1 * x3 + p2), "T_rescaled", _sec4_guard)
    vanishing = {k: V[k] for k in ("q1", "q2", "pi1", "pi2", "u", "v")}
    return TransitionFunctions("sec4", {"T": (T, 0), "T_rescaled": (T_fix, 0)},
                               {"j": V["j"]}, vanishing, _sec4_sampler,
                               notes={"T": "as printed", "T_rescaled": "p1 * T"})


def sec5_implicit_variables(alpha: float = SQRT2) -> dict:
    """``q = atan2(p2, p3)``, ``pi = X1``, ``j1 = |(p2, p3)|``, ``j2 = rho / alpha``, ``j3 = psi - alpha phi``."""
    X1 = sec5_fields(alpha).functions[0]
    a2 = alpha * alpha

    def radii(z):
        p1, p2, p3, p4 = z[4:]
        g2 = p2 * p2 + p3 * p3
        r2 = p4 * p4 + a2 * p1 * p1
        if g2 == 0 or r2 == 0:
            raise ChartDomainError("sec5 variables need p2^2 + p3^2 > 0 and p1^2 + p4^2 > 0")
        return g2, r2

    def q_grad(z):
        g2, _ = radii(z)
        g = np.zeros(8)
        g[5], g[6] = z[6] / g2, -z[5] / g2
        return g

    def j1_grad(z):
        g2, _ = radii(z)
        g = np.zeros(8)
        g[5:7] = z[5:7] / math.sqrt(g2)
        return g

    def j2_value(z):
        _, r2 = radii(z)
        return math.sqrt(r2) / alpha

    def j2_grad(z):
        _, r2 = radii(z)
        j2 = math.sqrt(r2) / alpha
        g = np.zeros(8)
        g[4], g[7] = z[4] / j2, z[7] / (a2 * j2)
        return g

    def j3_value(z):
        radii(z)
        return math.atan2(z[7], alpha * z[4]) - alpha * math.atan2(z[5], z[6])

    def j3_grad(z):
        g2, r2 = radii(z)
        p1, p2, p3, p4 = z[4:]
        g = np.zeros(8)
        g[4], g[7] = -alpha * p4 / r2, alpha * p1 / r2
        g[5], g[6] = -alpha * p3 / g2, alpha * p2 / g2
        return g

    return {
        "q": PhaseFunction(lambda z: (radii(z), math.atan2(z[5], z[6]))[1], q_grad, "q"),
        "pi": X1,
        "j1": PhaseFunction(lambda z: math.sqrt(radii(z)[0]), j1_grad, "j1"),
        "j2": PhaseFunction(j2_value, j2_grad, "j2"),
        "j3": PhaseFunction(j3_value, j3_grad, "j3"),
    }


def _ratio_function(N: Polynomial, r: PhaseFunction, name: str) -> PhaseFunction:
    """``N / r`` for a polynomial numerator and a radius-like denominator."""

    def value(z):
        return float(N(z)) / r(z)

    def grad(z):
        rv = r(z)
        return N.grad(z) / rv - float(N(z)) * r.grad(z) / rv ** 2

    return PhaseFunction(value, grad, name)


def _sec5_sampler(alpha):
    def sample(rng):
        while True:
            z = rng.uniform(-1.0, 1.0, 8)
            if math.hypot(z[5], z[6]) > 0.2 and math.hypot(z[4], z[7] / alpha) > 0.2:
                return z
    return sample


def sec5_transition(alpha: float = SQRT2) -> TransitionFunctions:
    """``T1``, ``T2``, ``T3`` as printed, plus ``T3`` with ``x4`` in place of ``x4^2``."""
    V = sec5_implicit_variables(alpha)
    z = [Polynomial.var(8, i) for i in range(8)]
    x1, x2, x3, x4, p1, p2, p3, p4 = z
    j1 = V["j1"]
    j2_scaled = V["j2"]
    T1 = _ratio_function(x2 * p2 + x3 * p3, j1, "T1")
    T2 = _ratio_function(x1 * p1 + x4 * p4, j2_scaled, "T2")
    T3 = alpha * x4 ** 2 * p1 - x1 * p4 * (1.0 / alpha)
    T3_lin = alpha * x4 * p1 - x1 * p4 * (1.0 / alpha)
    return TransitionFunctions(
        "sec5", {"T1": (T1, 0), "T2": (T2, 1), "T3": (T3, 2), "T3_linear": (T3_lin, 2)},
        {"j1": V["j1"], "j2": V["j2"], "j3": V["j3"]}, {"q": V["q"], "pi": V["pi"]},
        _sec5_sampler(alpha),
        notes={"T3": "as printed", "T3_linear": "alpha x4 p1 - x1 p4 / alpha"})


# Reduced Hamiltonians -------------------------------------------------------------

def sec4_reduced_hamiltonian(u: float, v: float, j: float, c: Sequence[float]) -> float:
    """``(c1 u^2 + c2 u^2 v^2 - c3 u^2 v + c4 j / u) / 2``."""
    if u == 0:
        raise ChartDomainError("reduced Hamiltonian needs u != 0")
    c1, c2, c3, c4 = c
    return 0.5 * (c1 * u * u + c2 * u * u * v * v - c3 * u * u * v + c4 * j / u)


def sec4_reduced_gradient(u: float, v: float, j: float, c: Sequence[float]) -> tuple:
    """``(dH/du, dH/dv, dH/dj)``."""
    if u == 0:
        raise ChartDomainError("reduced Hamiltonian needs u != 0")
    c1, c2, c3, c4 = c
    return (c1 * u + c2 * u * v * v - c3 * u * v - 0.5 * c4 * j / u ** 2,
            c2 * u * u * v - 0.5 * c3 * u * u,
            0.5 * c4 / u)


def _g(G):
    return G.array if isinstance(G, MetricForm) else np.asarray(G, dtype=float)


def sec5_A(q: float, j, G, alpha: float = SQRT2, form: str = "corrected") -> float:
    """Coefficient of ``pi`` in the reduced Hamiltonian.

    ``form="printed"`` drops the factor ``alpha`` on the ``G^14`` term, as in
    the displayed formula; ``"corrected"`` keeps it.
    """
    G = _g(G)
    j1, j2, j3 = j
    th = j3 + alpha * q
    k14 = 1.0 if form == "printed" else alpha
    return (j1 * (G[0, 2] * math.cos(q) + G[0, 1] * math.sin(q))
            + j2 * (G[0, 4] * math.cos(th) + k14 * G[0, 3] * math.sin(th)))


def sec5_B(q: float, j, G, alpha: float = SQRT2, form: str = "corrected") -> float:
    """The ``pi``-free part, twice.

    ``form="printed"`` reproduces the displayed sum term by term, including
    its ``G^24`` term ``cos(th - q) + cos(th + q)``; the correct combination
    is ``cos(th - q) - cos(th + q)``.
    """
    G = _g(G)
    j1, j2, j3 = j
    th = j3 + alpha * q
    s24 = 1.0 if form == "printed" else -1.0
    return (0.5 * j2 ** 2 * alpha ** 2 * G[3, 3] * (1 - math.cos(2 * th))
            + alpha * j1 * j2 * G[2, 3] * (math.sin(th + q) + math.sin(th - q))
            + j1 ** 2 * G[1, 2] * math.sin(2 * q)
            + alpha * j1 * j2 * G[1, 3] * (math.cos(th - q) + s24 * math.cos(th + q))
            + 0.5 * j1 ** 2 * (G[1, 1] + G[2, 2])
            - 0.5 * j1 ** 2 * (G[1, 1] - G[2, 2]) * math.cos(2 * q)
            + 0.5 * j2 ** 2 * G[4, 4] * (1 + math.cos(2 * th))
            + alpha * j2 ** 2 * G[3, 4] * math.sin(2 * th)
            + j1 * j2 * G[1, 4] * (math.sin(th + q) - math.sin(th - q))
            + j1 * j2 * G[2, 4] * (math.cos(th + q) + math.cos(th - q)))


def sec5_B_oracle(q: float, j, G, alpha: float = SQRT2) -> float:
    """``P'^T G P'`` with ``P' = P(q, 0, j)``: the definition of ``B``."""
    P = sec5_orbit_chart(alpha)(q, 0.0, j)
    return float(P @ _g(G) @ P)


def sec5_reduced_hamiltonian(q: float, pi: float, j, G, alpha: float = SQRT2,
                             a_form: str = "corrected", b_form: str = "corrected") -> float:
    """``G^11 pi^2 / 2 + A(q, j) pi + B(q, j) / 2``."""
    G = _g(G)
    return (0.5 * G[0, 0] * pi * pi + sec5_A(q, j, G, alpha, a_form) * pi
            + 0.5 * sec5_B(q, j, G, alpha, b_form))


def sec5_defining_hamiltonian(q: float, pi: float, j, G, alpha: float = SQRT2) -> float:
    """``1/2 P^T G P`` at ``P = P(q, pi, j)``."""
    P = sec5_orbit_chart(alpha)(q, pi, j)
    return 0.5 * float(P @ _g(G) @ P)


def sec5_coefficient_discrepancies(alpha: float = SQRT2, npoints: int = 50, seed: int = 0,
                                   tol: float = 1e-9) -> list[tuple[str, tuple[int, int], float]]:
    """Metric entries whose printed ``A`` or ``B`` contribution disagrees with the definition.

    Each symmetric unit metric ``E_ik`` is substituted in turn, isolating one
    term of the displayed sums.
    """
    rng = np.random.default_rng(seed)
    pts = [(rng.uniform(-3, 3), rng.uniform(0.3, 2), rng.uniform(0.3, 2), rng.uniform(-3, 3))
           for _ in range(npoints)]
    out = []
    for i in range(5):
        for k in range(i, 5):
            E = np.zeros((5, 5))
            E[i, k] = E[k, i] = 1.0
            err_a = err_b = 0.0
            for q, j1, j2, j3 in pts:
                j = (j1, j2, j3)
                P = sec5_orbit_chart(alpha)(q, 1.0, j)
                a_true = float(E[0] @ P) - E[0, 0]  # coefficient of pi in 1/2 P^T E P
                err_a = max(err_a, abs(sec5_A(q, j, E, alpha, "printed") - a_true))
                err_b = max(err_b, abs(sec5_B(q, j, E, alpha, "printed")
                                       - sec5_B_oracle(q, j, E, alpha)))
            if err_a > tol:
                out.append(("A", (i + 1, k + 1), float(err_a)))
            if err_b > tol:
                out.append(("B", (i + 1, k + 1), float(err_b)))
    return out


# End-to-end flow comparison ---------------------------------------------------------

SEC4_DEFAULT_C = (1.0, 1.0, 0.5, 1.0)
SEC4_DEFAULT_Z0 = (0.1, -0.2, 0.3, 0.1, 0.8, 0.3, -0.5, 0.4)
SEC5_DEFAULT_Z0 = (0.3, -0.4, 0.5, 0.2, 0.7, 0.6, -0.5, 0.4)


def default_sec5_metric(seed: int = 1) -> np.ndarray:
    """A fixed random symmetric metric near the identity."""
    rng = np.random.default_rng(seed)
    S = rng.uniform(-0.3, 0.3, (5, 5))
    return np.eye(5) + 0.5 * (S + S.T)


@dataclass
class ReducedFlowReport:
    example: str
    dt: float
    T: float
    conserved_drift: dict
    reduced_vs_full: dict
    tau_deviation: dict
    H_drift_full: float
    H_drift_reduced: float
    series: dict = field(default_factory=dict, repr=False)

    def lines(self) -> list[str]:
        out = [f"{self.example} reduced-flow check dt={self.dt:g} T={self.T:g}"]
        for k, v in self.conserved_drift.items():
            out.append(f"  drift {k:<10} {v:.3e}")
        for k, v in self.reduced_vs_full.items():
            out.append(f"  reduced-vs-full {k:<10} {v:.3e}")
        for k, v in self.tau_deviation.items():
            out.append(f"  tau {k:<14} {v:.3e}")
        out.append(f"  H drift full {self.H_drift_full:.3e} reduced {self.H_drift_reduced:.3e}")
        return out


def _sec4_flow(c, z0, dt, T, method):
    V = sec4_implicit_variables()
    L = sec4_invariants()
    H = InvariantHamiltonian(L, c)
    names = ("q1", "q2", "pi1", "pi2", "j_sheet", "u", "v")
    mons = {k: V[k] for k in names}
    T_fix = sec4_transition().T["T_rescaled"][0]
    # conjugate of the sheet parameter j_sheet = L1 L3 = -K is -p1 T
    mons["tau"] = lambda z: -T_fix(z)
    full = integrate_hamiltonian(H, z0, dt, T, method, monitors=mons)
    m = full.monitors
    j = float(m["j_sheet"][0])

    def rhs(y):
        u, v, _ = y
        du_, dv_, dj_ = sec4_reduced_gradient(u, v, j, c)
        return np.array([dv_, -du_, dj_])

    red = integrate_fixed(rhs, [m["u"][0], m["v"][0], 0.0], dt, T, method)
    Hred = np.array([sec4_reduced_hamiltonian(u, v, j, c) for u, v, _ in red.states])
    conserved = {k: float(np.max(np.abs(m[k] - m[k][0]))) for k in
                 ("q1", "q2", "pi1", "pi2", "j_sheet")}
    korb = np.array([float(V["j"](z)) for z in full.states])
    conserved["j_orbit"] = float(np.max(np.abs(korb - korb[0])))
    return ReducedFlowReport(
        "sec4", dt, T, conserved,
        {"u": float(np.max(np.abs(red.states[:, 0] - m["u"]))),
         "v": float(np.max(np.abs(red.states[:, 1] - m["v"])))},
        {"tau": float(np.max(np.abs(red.states[:, 2] - (m["tau"] - m["tau"][0]))))},
        full.drift("H"), float(np.max(np.abs(Hred - Hred[0]))),
        {"t": full.times, "u_full": m["u"], "u_reduced": red.states[:, 0],
         "v_full": m["v"], "v_reduced": red.states[:, 1], "tau_full": m["tau"] - m["tau"][0],
         "tau_reduced": red.states[:, 2], "j_sheet": m["j_sheet"], "H_full": m["H"],
         "H_reduced": Hred})


def _sec5_flow(G, z0, dt, T, method, alpha):
    fields = sec5_fields(alpha)
    H = CentralHamiltonian(fields, G)
    V = sec5_implicit_variables(alpha)
    tf = sec5_transition(alpha)
    mons = {"j1": V["j1"], "j2": V["j2"], "pi": V["pi"]}
    for name in ("T1", "T2", "T3", "T3_linear"):
        mons[name] = tf.T[name][0]
    full = integrate_hamiltonian(H, z0, dt, T, method, monitors=mons)
    S = full.states
    phi = lift_angles(np.arctan2(S[:, 5], S[:, 6]))
    psi = lift_angles(np.arctan2(S[:, 7], alpha * S[:, 4]))
    m = full.monitors
    m["q"] = phi
    m["j3"] = psi - alpha * phi
    j = np.array([m["j1"][0], m["j2"][0], m["j3"][0]])
    chart = sec5_orbit_chart(alpha)
    Gm = _g(G)

    def rhs(y):
        q, pi = y[0], y[1]
        P = chart(q, pi, j)
        J = chart.jacobian(np.array([q]), np.array([pi]), j)
        grad = J.T @ (Gm @ P)  # dH~/d(q, pi, j1, j2, j3)
        return np.array([grad[1], -grad[0], grad[2], grad[3], grad[4]])

    red = integrate_fixed(rhs, [m["q"][0], m["pi"][0], 0.0, 0.0, 0.0], dt, T, method)
    Hred = np.array([sec5_defining_hamiltonian(y[0], y[1], j, Gm, alpha) for y in red.states])
    tau = {}
    for name, col in (("T1", 2), ("T2", 3), ("T3", 4), ("T3_linear", 4)):
        tau[name] = float(np.max(np.abs(red.states[:, col] - (m[name] - m[name][0]))))
    return ReducedFlowReport(
        "sec5", dt, T,
        {k: float(np.max(np.abs(m[k] - m[k][0]))) for k in ("j1", "j2", "j3")},
        {"q": float(np.max(np.abs(red.states[:, 0] - m["q"]))),
         "pi": float(np.max(np.abs(red.states[:, 1] - m["pi"])))},
        tau, full.drift("H"), float(np.max(np.abs(Hred - Hred[0]))),
        {"t": full.times, "q_full": m["q"], "q_reduced": red.states[:, 0],
         "pi_full": m["pi"], "pi_reduced": red.states[:, 1],
         "j1": m["j1"], "j2": m["j2"], "j3": m["j3"], "H_full": m["H"], "H_reduced": Hred})


def series_csv(series: dict, every: int = 1) -> str:
    """CSV text of equal-length columns, full double precision."""
    names = list(series)
    rows = [",".join(names)]
    for i in range(0, len(series[names[0]]), every):
        rows.append(",".join(repr(float(series[k][i])) for k in names))
    return "\n".join(rows) + "\n"


def reduced_flow_check(example: str, G=None, c=None, z0=None, dt: float = 1e-3,
                       T: float = 10.0, method: str = "rk4",
                       alpha: float = SQRT2) -> ReducedFlowReport:
    """Integrate the full phase-space flow and the reduced chart flow side by side."""
    if example == "sec4":
        return _sec4_flow(SEC4_DEFAULT_C if c is None else c,
                          SEC4_DEFAULT_Z0 if z0 is None else z0, dt, T, method)
    if example == "sec5":
        return _sec5_flow(default_sec5_metric() if G is None else G,
                          SEC5_DEFAULT_Z0 if z0 is None else z0, dt, T, method, alpha)
    raise ValueError(f"unknown example {example!r}")
