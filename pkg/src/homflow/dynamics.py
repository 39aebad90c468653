"""Lie-Poisson dynamics on the dual algebra and geodesic flows on ``T*M``.

Integration is fixed-step explicit RK4 (or explicit midpoint).  Nothing here
is structure preserving; conservation laws are checked through drift and its
convergence under step halving.
"""

from __future__ import annotations

import csv
import io
import itertools
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Mapping, Sequence

import numpy as np

from .catalog import FIGURE1_P0, SQRT2, figure1_metric, sec5_algebra
from .homspace import MetricForm
from .lie_core import LieAlgebra, coadjoint_pairing_matrix, is_exact_scalar

TWO_PI = 2.0 * math.pi


class IntegrationError(RuntimeError):
    """Raised when the state stops being finite; carries the partial trajectory."""

    def __init__(self, message: str, last_time: float, trajectory: "Trajectory"):
        super().__init__(message)
        self.last_time = last_time
        self.trajectory = trajectory


class DegenerateRadiusError(ValueError):
    pass


class AngleLiftingError(ValueError):
    """Consecutive samples are too far apart to lift an angle continuously."""


@dataclass
class Trajectory:
    times: np.ndarray
    states: np.ndarray
    monitors: dict = field(default_factory=dict)

    def __post_init__(self):
        if len(self.times) != len(self.states):
            raise ValueError("times and states differ in length")
        if len(self.times) > 1 and np.any(np.diff(self.times) <= 0):
            raise ValueError("times must be strictly increasing")

    def drift(self, name: str, relative: bool = False) -> float:
        v = np.asarray(self.monitors[name], dtype=float)
        d = float(np.max(np.abs(v - v[0])))
        if relative:
            d /= abs(float(v[0]))
        return float(d)


def _rk4_step(f, y, dt):
    k1 = f(y)
    k2 = f(y + 0.5 * dt * k1)
    k3 = f(y + 0.5 * dt * k2)
    k4 = f(y + dt * k3)
    return y + (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)


def _midpoint_step(f, y, dt):
    return y + dt * f(y + 0.5 * dt * f(y))


STEPPERS = {"rk4": _rk4_step, "midpoint": _midpoint_step}


def integrate_fixed(rhs: Callable, y0, dt: float, T: float, method: str = "rk4") -> Trajectory:
    """Fixed-step integration of ``dy/dt = rhs(y)`` over ``[0, T]``."""
    if dt <= 0 or T <= 0:
        raise ValueError("dt and T must be positive")
    try:
        step = STEPPERS[method]
    except KeyError:
        raise ValueError(f"unknown method {method!r}; choose from {sorted(STEPPERS)}") from None
    nsteps = int(round(T / dt))
    y = np.array(y0, dtype=float)
    states = np.empty((nsteps + 1, y.size))
    states[0] = y
    for i in range(1, nsteps + 1):
        y = step(rhs, y, dt)
        if not np.all(np.isfinite(y)):
            t_last = (i - 1) * dt
            part = Trajectory(np.arange(i) * dt, states[:i].copy())
            raise IntegrationError(f"state became nonfinite after t = {t_last:g}", t_last, part)
        states[i] = y
    return Trajectory(np.arange(nsteps + 1) * dt, states)


# Coalgebra ------------------------------------------------------------------

class QuadraticHamiltonian:
    """``H(P) = 1/2 G^{AB} P_A P_B``."""

    def __init__(self, G):
        self.metric = G if isinstance(G, MetricForm) else MetricForm(G)
        self.G = self.metric.array

    def __call__(self, P):
        P = np.asarray(P, dtype=float)
        if P.ndim == 2:
            return 0.5 * np.einsum("ta,ab,tb->t", P, self.G, P)
        return 0.5 * float(P @ self.G @ P)

    def grad(self, P):
        if self.metric.exact and all(is_exact_scalar(v) for v in P):
            n = len(P)
            return [sum(Fraction(self.metric.matrix[a][b]) * P[b] for b in range(n))
                    for a in range(n)]
        return self.G @ np.asarray(P, dtype=float)


def lie_poisson_rhs(alg: LieAlgebra, H, P) -> np.ndarray:
    """``dP_A/dt = {H, P_A} = C_EA^C P_C dH/dP_E``."""
    B = coadjoint_pairing_matrix(alg, P)
    dH = H.grad(P) if hasattr(H, "grad") else H(P)
    if B.dtype == object and all(isinstance(v, Fraction) for v in dH):
        return B.T @ np.asarray(dH, dtype=object)
    return np.asarray(B, dtype=float).T @ np.asarray(dH, dtype=float)


class LiePoissonSystem:
    """Precomputed float right-hand side for a quadratic Hamiltonian."""

    def __init__(self, alg: LieAlgebra, H: QuadraticHamiltonian):
        C = alg.float_tensor()
        # rhs_A = sum_{C,D} M[A, C, D] P_C P_D with M[A, C, D] = sum_E C[E, A, C] G[E, D]
        self.M = np.einsum("eac,ed->acd", C, H.G).reshape(alg.n, -1)

    def __call__(self, P):
        return self.M @ np.outer(P, P).ravel()


def integrate_coalgebra(alg: LieAlgebra, H, P0, dt: float, T: float, method: str = "rk4",
                        casimirs: Mapping[str, Callable] | None = None) -> Trajectory:
    """Integrate the Lie-Poisson equations; monitors ``H`` and every registered Casimir.

    Casimir callables receive the whole ``(N, n)`` state array.
    """
    H = H if isinstance(H, QuadraticHamiltonian) else QuadraticHamiltonian(H)
    traj = integrate_fixed(LiePoissonSystem(alg, H), P0, dt, T, method)
    traj.monitors["H"] = H(traj.states)
    for name, K in (casimirs or {}).items():
        traj.monitors[name] = np.asarray(K(traj.states), dtype=float)
    return traj


# Phase space ------------------------------------------------------------------

def hamiltonian_vector_field(H) -> Callable:
    """``dz/dt = {H, z}``: ``dx = dH/dp``, ``dp = -dH/dx``."""

    def rhs(z):
        g = H.grad(z)
        m = g.size // 2
        return np.concatenate([g[m:], -g[:m]])

    return rhs


def integrate_hamiltonian(H, z0, dt: float, T: float, method: str = "rk4",
                          monitors: Mapping[str, Callable] | None = None) -> Trajectory:
    traj = integrate_fixed(hamiltonian_vector_field(H), z0, dt, T, method)
    traj.monitors["H"] = np.array([H(z) for z in traj.states])
    for name, f in (monitors or {}).items():
        traj.monitors[name] = np.array([f(z) for z in traj.states])
    return traj


def integrate_geodesic(fields, G, z0, dt: float, T: float, method: str = "rk4") -> Trajectory:
    """Geodesic flow of the central metric; monitors ``H`` and the moment values ``P_A``."""
    from .realization import CentralHamiltonian

    H = CentralHamiltonian(fields, G)
    traj = integrate_fixed(hamiltonian_vector_field(H), z0, dt, T, method)
    P = np.array([fields.values(z) for z in traj.states])
    traj.monitors["H"] = 0.5 * np.einsum("ta,ab,tb->t", P, H.G, P)
    for a in range(P.shape[1]):
        traj.monitors[f"P{a + 1}"] = P[:, a]
    return traj


def triangular_residual(alg: LieAlgebra, fields, G, z0, dt: float = 1e-4,
                        T: float = 1.0) -> float:
    """Max deviation between ``dP/dt`` along the geodesic flow and the Lie-Poisson vector field.

    ``P(t)`` is the moment map along the phase-space trajectory; its time
    derivative is taken by second-order central differences.
    """
    traj = integrate_geodesic(fields, G, z0, dt, T)
    P = np.stack([traj.monitors[f"P{a + 1}"] for a in range(alg.n)], axis=1)
    dP = (P[2:] - P[:-2]) / (2 * dt)
    H = QuadraticHamiltonian(G)
    lp = np.array([lie_poisson_rhs(alg, H, Pt) for Pt in P[1:-1]])
    return float(np.max(np.abs(dP - lp)))


# Polar coordinates of the wild algebra ------------------------------------------

@dataclass(frozen=True)
class PolarCoordinates:
    sigma: float
    gamma: float
    phi: float
    rho: float
    psi: float


def _principal(theta):
    """Reduce to ``[-pi, pi)``."""
    return (np.asarray(theta) + math.pi) % TWO_PI - math.pi


def to_polar(P, alpha: float = SQRT2, tol: float = 1e-14) -> PolarCoordinates:
    P1, P2, P3, P4, P5 = (float(v) for v in P)
    gamma = math.hypot(P2, P3)
    rho = math.hypot(P4, alpha * P5)
    if gamma <= tol or rho <= tol:
        raise DegenerateRadiusError(f"polar radius below {tol:g} (gamma={gamma:g}, rho={rho:g})")
    return PolarCoordinates(P1, gamma, float(_principal(math.atan2(P2, P3))), rho,
                            float(_principal(math.atan2(P4, alpha * P5))))


def from_polar(c: PolarCoordinates, alpha: float = SQRT2) -> np.ndarray:
    return np.array([c.sigma, c.gamma * math.sin(c.phi), c.gamma * math.cos(c.phi),
                     c.rho * math.sin(c.psi), c.rho / alpha * math.cos(c.psi)])


def lift_angles(theta, max_step: float = math.pi / 2) -> np.ndarray:
    """Continuous lift of sampled angles; consecutive samples must differ by ``< max_step``."""
    lifted = np.unwrap(np.asarray(theta, dtype=float))
    if lifted.size > 1:
        worst = float(np.max(np.abs(np.diff(lifted))))
        if worst >= max_step:
            raise AngleLiftingError(
                f"consecutive angle samples differ by {worst:.3g} >= {max_step:.3g}; reduce dt")
    return lifted


def casimir_values(P, alpha: float = SQRT2, tol: float = 1e-14) -> dict:
    """``K1 = gamma``, ``K2 = rho``, ``K3 = psi - alpha phi`` (wrapped and lifted).

    ``P`` is one covector or an ``(N, 5)`` trajectory; for a trajectory the
    lifted ``K3`` uses continuously lifted ``phi`` and ``psi``.
    """
    P = np.asarray(P, dtype=float)
    single = P.ndim == 1
    Q = P[None, :] if single else P
    gamma = np.hypot(Q[:, 1], Q[:, 2])
    rho = np.hypot(Q[:, 3], alpha * Q[:, 4])
    if np.any(gamma <= tol) or np.any(rho <= tol):
        raise DegenerateRadiusError("polar radius vanishes along the input")
    phi = np.arctan2(Q[:, 1], Q[:, 2])
    psi = np.arctan2(Q[:, 3], alpha * Q[:, 4])
    wrapped = (psi - alpha * phi) % TWO_PI
    if single:
        unwrapped = psi - alpha * phi
    else:
        unwrapped = lift_angles(psi) - alpha * lift_angles(phi)
    out = {"K1": gamma, "K2": rho, "K3_wrapped": wrapped, "K3_unwrapped": unwrapped}
    if single:
        out = {k: float(v[0]) for k, v in out.items()}
    return out


def sec5_casimir_monitors(alpha: float = SQRT2) -> dict:
    return {
        "K1": lambda S: np.hypot(S[:, 1], S[:, 2]),
        "K2": lambda S: np.hypot(S[:, 3], alpha * S[:, 4]),
        "K3_wrapped": lambda S: casimir_values(S, alpha)["K3_wrapped"],
        "K3_unwrapped": lambda S: casimir_values(S, alpha)["K3_unwrapped"],
    }


@dataclass(frozen=True)
class Jump:
    time: float
    delta: float
    n: int
    m: int
    residual: float


def attribute_jump(delta: float, alpha: float, max_nm: int = 5) -> tuple[int, int, float]:
    """Best ``(n, m)`` with ``delta ≈ 2 pi (n - alpha m)`` over ``|n|, |m| <= max_nm``."""
    best = None
    for n, m in itertools.product(range(-max_nm, max_nm + 1), repeat=2):
        r = abs(delta - TWO_PI * (n - alpha * m))
        if best is None or r < best[2]:
            best = (n, m, r)
    return best


def find_jumps(times, k3_wrapped, alpha: float, threshold: float = 0.1,
               max_nm: int = 5) -> list[Jump]:
    """Discontinuities of the wrapped ``K3`` series, each attributed to a branch change."""
    k = np.asarray(k3_wrapped, dtype=float)
    d = np.diff(k)
    jumps = []
    for i in np.nonzero(np.abs(d) > threshold)[0]:
        n, m, r = attribute_jump(float(d[i]), alpha, max_nm)
        jumps.append(Jump(float(times[i + 1]), float(d[i]), n, m, r))
    return jumps


@dataclass
class Figure1Result:
    alpha: float
    dt: float
    T: float
    P0: tuple
    trajectory: Trajectory
    jumps: list
    drifts: dict

    def series(self) -> dict:
        return {k: self.trajectory.monitors[k]
                for k in ("K1", "K2", "K3_wrapped", "K3_unwrapped")}

    def csv_text(self, every: int = 1) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["t", "K1", "K2", "K3_wrapped", "K3_unwrapped"])
        s = self.series()
        for i in range(0, len(self.trajectory.times), every):
            w.writerow([repr(float(self.trajectory.times[i]))]
                       + [repr(float(s[k][i])) for k in ("K1", "K2", "K3_wrapped", "K3_unwrapped")])
        return buf.getvalue()

    def summary(self) -> str:
        lines = [f"figure1 alpha={self.alpha!r} dt={self.dt!r} T={self.T!r} P0={list(self.P0)}",
                 f"K1 relative drift {self.drifts['K1']:.3e}",
                 f"K2 relative drift {self.drifts['K2']:.3e}",
                 f"K3_unwrapped absolute drift {self.drifts['K3_unwrapped']:.3e}",
                 f"H drift {self.drifts['H']:.3e}",
                 f"jumps: {len(self.jumps)}"]
        for j in self.jumps:
            lines.append(f"  t={j.time:.6f} delta={j.delta:+.10f} = 2pi(n - alpha m),"
                         f" n={j.n} m={j.m}"
                         f" residual={j.residual:.2e}")
        return "\n".join(lines)


def default_figure1_P0(seed: int | None = None) -> tuple:
    if seed is None:
        return FIGURE1_P0
    rng = np.random.default_rng(seed)
    while True:
        P = rng.uniform(-1.0, 1.0, 5)
        if math.hypot(P[1], P[2]) > 0.1 and math.hypot(P[3], P[4]) > 0.1:
            return tuple(float(v) for v in P)


def figure1_report(alpha: float = SQRT2, G=None, P0=None, dt: float = 1e-3, T: float = 100.0,
                   method: str = "rk4", seed: int | None = None) -> Figure1Result:
    """Integrate the wild-algebra Lie-Poisson system and track the three Casimirs."""
    alg = sec5_algebra(alpha)
    G = figure1_metric() if G is None else G
    P0 = default_figure1_P0(seed) if P0 is None else tuple(float(v) for v in P0)
    to_polar(P0, alpha)
    traj = integrate_coalgebra(alg, G, P0, dt, T, method, casimirs=sec5_casimir_monitors(alpha))
    drifts = {"K1": traj.drift("K1", relative=True), "K2": traj.drift("K2", relative=True),
              "K3_unwrapped": traj.drift("K3_unwrapped"), "H": traj.drift("H")}
    jumps = find_jumps(traj.times, traj.monitors["K3_wrapped"], alpha)
    return Figure1Result(alpha, dt, T, P0, traj, jumps, drifts)
