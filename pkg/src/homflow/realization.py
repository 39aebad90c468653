"""Realizations of ``g`` by vector fields on ``M`` and functions on ``T*M``.

Phase points are flat arrays ``z = (x_1..x_m, p_1..p_m)``.  The canonical
bracket is oriented as ``{f, g} = f_p g_x - f_x g_p`` so that Hamilton's
equations read ``dz/dt = {H, z}`` and the momenta ``X_A(x, p)`` satisfy
``{X_A, X_B} = C_AB^C X_C`` with a plus sign.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Sequence

import numpy as np

from .homspace import MetricForm
from .lie_core import LieAlgebra, is_exact_scalar
from .poly import CompiledPolys, Polynomial, canonical_poisson


class PhaseFunction:
    """A function on phase space with a hand-supplied gradient."""

    def __init__(self, value: Callable, grad: Callable, name: str = ""):
        self._value = value
        self._grad = grad
        self.name = name

    def __call__(self, z):
        return self._value(np.asarray(z, dtype=float))

    value = __call__

    def grad(self, z) -> np.ndarray:
        return np.asarray(self._grad(np.asarray(z, dtype=float)), dtype=float)

    def __repr__(self):
        return f"PhaseFunction({self.name})"


def numeric_grad(f: Callable, z, h: float = 1e-6) -> np.ndarray:
    z = np.asarray(z, dtype=float)
    out = np.empty_like(z)
    for i in range(z.size):
        e = np.zeros_like(z)
        e[i] = h
        out[i] = (f(z + e) - f(z - e)) / (2 * h)
    return out


def _grad_of(f, z) -> np.ndarray:
    if hasattr(f, "grad"):
        return np.asarray(f.grad(z), dtype=float)
    return numeric_grad(f, z)


def canonical_bracket(f, g, pt) -> float:
    """``{f, g}`` at ``pt``; exact when both are exact polynomials and ``pt`` is rational."""
    if (isinstance(f, Polynomial) and isinstance(g, Polynomial)
            and all(is_exact_scalar(v) for v in pt)):
        return canonical_poisson(f, g)([Fraction(v) for v in pt])
    z = np.asarray(pt, dtype=float)
    m = z.size // 2
    df, dg = _grad_of(f, z), _grad_of(g, z)
    return float(df[m:] @ dg[:m] - df[:m] @ dg[m:])


class PolyVectorField:
    """Vector fields ``X_A = X_A^a(x) d/dx_a`` stored as ``X_A(x, p) = X_A^a(x) p_a``."""

    def __init__(self, dim_m: int, functions: Sequence[Polynomial], name: str = ""):
        self.dim_m = dim_m
        self.functions = list(functions)
        self.name = name
        p_idx = range(dim_m, 2 * dim_m)
        for A, f in enumerate(self.functions):
            if f.nvars != 2 * dim_m:
                raise ValueError(f"X_{A + 1} is not a function of {2 * dim_m} phase variables")
            if any(sum(e[i] for i in p_idx) != 1 for e in f.terms):
                raise ValueError(f"X_{A + 1} is not linear homogeneous in the momenta")
        self._compiled = None

    @classmethod
    def from_components(cls, dim_m: int, components, name: str = "") -> "PolyVectorField":
        """``components[A][a]`` is a list of ``(multi_index, coeff)`` monomials in ``x``."""
        fns = []
        for comp in components:
            terms = {}
            for a, monos in enumerate(comp):
                for idx, c in monos:
                    e = list(idx) + [0] * dim_m
                    e[dim_m + a] = 1
                    terms[tuple(e)] = terms.get(tuple(e), 0) + c
            fns.append(Polynomial(2 * dim_m, terms))
        return cls(dim_m, fns, name)

    def __len__(self):
        return len(self.functions)

    @property
    def exact(self) -> bool:
        return all(f.is_exact() for f in self.functions)

    def components(self) -> list[list[Polynomial]]:
        """``X_A^a(x)`` as polynomials in the ``m`` base coordinates."""
        m = self.dim_m
        out = []
        for f in self.functions:
            row = []
            for a in range(m):
                terms = {e[:m]: c for e, c in f.terms.items() if e[m + a] == 1}
                row.append(Polynomial(m, terms))
            out.append(row)
        return out

    def _compile(self):
        if self._compiled is None:
            n, d = len(self.functions), 2 * self.dim_m
            vals = CompiledPolys(self.functions)
            jac = CompiledPolys([f.diff(k) for f in self.functions for k in range(d)])
            self._compiled = (vals, jac, n, d)
        return self._compiled

    def values(self, z) -> np.ndarray:
        return self._compile()[0](np.asarray(z, dtype=float))

    def jacobian(self, z) -> np.ndarray:
        """``J[A, k] = dX_A / dz_k``."""
        _, jac, n, d = self._compile()
        return jac(np.asarray(z, dtype=float)).reshape(n, d)


@dataclass(frozen=True)
class RealizationReport:
    ok: bool
    failures: tuple[tuple[int, int], ...]
    max_residual: float
    exact: bool


def realization_check(fields: PolyVectorField, alg: LieAlgebra, tol: float = 1e-12) -> RealizationReport:
    """Verify ``{X_A, X_B} = C_AB^C X_C`` as polynomial identities."""
    if len(fields) != alg.n:
        raise ValueError("number of fields differs from the algebra dimension")
    exact = fields.exact and alg.exact
    failures, worst = [], 0.0
    X = fields.functions
    for a in range(alg.n):
        for b in range(a + 1, alg.n):
            rhs = Polynomial.zero(X[0].nvars)
            for c in range(alg.n):
                cab = alg.constant(a, b, c)
                if cab != 0:
                    rhs = rhs + X[c] * cab
            resid = canonical_poisson(X[a], X[b]) - rhs
            size = resid.max_abs_coeff()
            worst = max(worst, size)
            if (not resid.is_zero()) if exact else size >= tol:
                failures.append((a + 1, b + 1))
    return RealizationReport(ok=not failures, failures=tuple(failures), max_residual=worst,
                             exact=exact)


def moment_map(fields: PolyVectorField, pt) -> np.ndarray:
    """``P_A = X_A(x, p)``."""
    if all(is_exact_scalar(v) for v in pt) and fields.exact:
        return np.array([f([Fraction(v) for v in pt]) for f in fields.functions], dtype=object)
    return fields.values(pt)


def _metric_array(G) -> np.ndarray:
    return G.array if isinstance(G, MetricForm) else np.asarray(G, dtype=float)


def central_hamiltonian(fields: PolyVectorField, G, pt) -> float:
    """``H = 1/2 G^{AB} X_A X_B``."""
    P = fields.values(pt)
    return 0.5 * float(P @ _metric_array(G) @ P)


class CentralHamiltonian(PhaseFunction):
    """``H(x, p) = 1/2 G^{AB} X_A(x, p) X_B(x, p)`` with its gradient."""

    def __init__(self, fields: PolyVectorField, G):
        self.fields = fields
        self.G = _metric_array(G)
        super().__init__(self._h, self._dh, "H_central")

    def _h(self, z):
        P = self.fields.values(z)
        return 0.5 * float(P @ self.G @ P)

    def _dh(self, z):
        P = self.fields.values(z)
        return self.fields.jacobian(z).T @ (self.G @ P)


# Built-in realizations ------------------------------------------------------

def _phase_vars(m: int):
    xs = [Polynomial.var(2 * m, i) for i in range(m)]
    ps = [Polynomial.var(2 * m, m + i) for i in range(m)]
    return xs, ps


def sec4_fields() -> PolyVectorField:
    (x1, x2, x3, x4), (p1, p2, p3, p4) = _phase_vars(4)
    return PolyVectorField(4, [
        p1,
        p2,
        x2 * p1 + p3,
        -x1 * p1 + x2 * p2 - 2 * x3 * p3 + p4,
        x1 * p2 - x3 ** 2 * p3 + x3 * p4,
    ], name="sec4")


def sec5_fields(alpha=math.sqrt(2.0)) -> PolyVectorField:
    (x1, x2, x3, x4), (p1, p2, p3, p4) = _phase_vars(4)
    a2 = alpha * alpha
    return PolyVectorField(4, [
        x3 * p2 - x2 * p3 + x1 * p4 - a2 * x4 * p1,
        p2,
        p3,
        p4,
        p1,
    ], name="sec5")


def abelian_fields(n: int) -> PolyVectorField:
    _, ps = _phase_vars(n)
    return PolyVectorField(n, ps, name=f"abelian-{n}")


# Invariant functions ---------------------------------------------------------

@dataclass
class InvariantFunctionSet:
    """Basis ``L_mu(x, p)`` of invariant functions with optional relations ``Omega(L)``."""

    functions: list
    relations: Callable | None = None
    name: str = ""

    def values(self, z) -> np.ndarray:
        return np.array([f(z) for f in self.functions])

    def __len__(self):
        return len(self.functions)


def _sec4_L(z):
    x1, x2, x3, x4, p1, p2, p3, p4 = z
    e = math.exp(x4)
    return (-e * (x3 * p1 + p2), -p4, (p1 * p4 - x3 * p1 * p3 - p2 * p3) / e)


def _sec4_dL1(z):
    x1, x2, x3, x4, p1, p2, p3, p4 = z
    e = math.exp(x4)
    return [0.0, 0.0, -e * p1, -e * (x3 * p1 + p2), -e * x3, -e, 0.0, 0.0]


def _sec4_dL2(z):
    return [0.0] * 7 + [-1.0]


def _sec4_dL3(z):
    x1, x2, x3, x4, p1, p2, p3, p4 = z
    ei = math.exp(-x4)
    core = p1 * p4 - x3 * p1 * p3 - p2 * p3
    return [0.0, 0.0, -ei * p1 * p3, -ei * core,
            ei * (p4 - x3 * p3), -ei * p3, -ei * (x3 * p1 + p2), ei * p1]


def sec4_relations(a) -> np.ndarray:
    """Brackets ``{L1, L2} = L1``, ``{L1, L3} = 0``, ``{L2, L3} = L3`` as a matrix."""
    a1, a2, a3 = a
    return np.array([[0.0, a1, 0.0], [-a1, 0.0, a3], [0.0, -a3, 0.0]])


def sec4_invariants() -> InvariantFunctionSet:
    return InvariantFunctionSet([
        PhaseFunction(lambda z: _sec4_L(z)[0], _sec4_dL1, "L1"),
        PhaseFunction(lambda z: _sec4_L(z)[1], _sec4_dL2, "L2"),
        PhaseFunction(lambda z: _sec4_L(z)[2], _sec4_dL3, "L3"),
    ], relations=sec4_relations, name="sec4")


def sec4_casimir(P):
    """``K = P1 P2 P4 + P1^2 P5 - P2^2 P3``."""
    P1, P2, P3, P4, P5 = P
    return P1 * P2 * P4 + P1 ** 2 * P5 - P2 ** 2 * P3


def sec4_casimir_poly() -> Polynomial:
    P = [Polynomial.var(5, i) for i in range(5)]
    return P[0] * P[1] * P[3] + P[0] ** 2 * P[4] - P[1] ** 2 * P[2]


class InvariantHamiltonian(PhaseFunction):
    """``H = 1/2 (c1 L1^2 + c2 L2^2 + c3 L1 L2 + c4 L3)`` for a three-element invariant set."""

    def __init__(self, L: InvariantFunctionSet, coeffs: Sequence[float]):
        if len(L) != 3 or len(coeffs) != 4:
            raise ValueError("expected three invariants and four coefficients")
        self.L = L
        self.c = tuple(float(c) for c in coeffs)
        super().__init__(self._h, self._dh, "H_invariant")

    def of_values(self, l1, l2, l3):
        c1, c2, c3, c4 = self.c
        return 0.5 * (c1 * l1 ** 2 + c2 * l2 ** 2 + c3 * l1 * l2 + c4 * l3)

    def _h(self, z):
        return self.of_values(*self.L.values(z))

    def _dh(self, z):
        c1, c2, c3, c4 = self.c
        l1, l2, l3 = self.L.values(z)
        g1, g2, g3 = (f.grad(z) for f in self.L.functions)
        return 0.5 * ((2 * c1 * l1 + c3 * l2) * g1 + (2 * c2 * l2 + c3 * l1) * g2 + c4 * g3)


def invariant_hamiltonian(L: InvariantFunctionSet, coeffs: Sequence[float], pt) -> float:
    return InvariantHamiltonian(L, coeffs)(pt)
