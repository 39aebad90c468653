"""Structure-constant Lie algebras and the Lie-Poisson structure on the dual.

Indices are 0-based internally.  Anything user-facing (reports, files,
violation tuples) is 1-based to match the usual ``e_1..e_n`` labelling.

Scalars are either ``fractions.Fraction`` (exact algebras) or ``float``
(floating algebras, compared with the algebra's ``tol``).  An algebra is
never a mix of the two.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Mapping, Sequence, Union

import numpy as np

from . import linalg
from .poly import Polynomial

Scalar = Union[Fraction, float]

RANK_RTOL = 1e-10
SAMPLE_RANGE = 97


def is_exact_scalar(v) -> bool:
    return isinstance(v, (int, Fraction)) and not isinstance(v, bool)


def scalars_equal(a: Scalar, b: Scalar, tol: float = 0.0) -> bool:
    if is_exact_scalar(a) and is_exact_scalar(b):
        return a == b
    return abs(float(a) - float(b)) <= tol


@dataclass(frozen=True)
class LieAlgebra:
    """Finite-dimensional Lie algebra given by its structure constants.

    ``brackets`` maps ``(A, B)`` with ``A < B`` to ``{C: C_AB^C}``; the
    ``A > B`` half follows from antisymmetry and is never stored.
    """

    n: int
    brackets: Mapping[tuple[int, int], Mapping[int, Scalar]]
    exact: bool = True
    tol: float = RANK_RTOL
    name: str = ""
    _dense: np.ndarray = field(default=None, repr=False, compare=False)

    @classmethod
    def from_brackets(cls, n: int, relations, one_based: bool = True,
                      tol: float = RANK_RTOL, name: str = "") -> "LieAlgebra":
        """Build from ``{(A, B): {C: value}}`` or an iterable of ``(A, B, C, value)``."""
        if n <= 0:
            raise ValueError("dimension must be positive")
        if isinstance(relations, Mapping):
            flat = [(a, b, c, v) for (a, b), out in relations.items() for c, v in out.items()]
        else:
            flat = list(relations)
        off = 1 if one_based else 0
        values = [v for *_, v in flat]
        exact = all(is_exact_scalar(v) for v in values)
        store: dict[tuple[int, int], dict[int, Scalar]] = {}
        seen: dict[tuple[int, int, int], Scalar] = {}
        for a, b, c, v in flat:
            a, b, c = a - off, b - off, c - off
            for k in (a, b, c):
                if not 0 <= k < n:
                    raise ValueError(f"index {k + off} outside 1..{n}")
            v = Fraction(v) if exact else float(v)
            if a == b:
                if v != 0:
                    raise ValueError(f"[e{a + off}, e{a + off}] must vanish")
                continue
            if a > b:
                a, b, v = b, a, -v
            key = (a, b, c)
            if key in seen and seen[key] != v:
                raise ValueError(f"conflicting values for C_{{{a + off}{b + off}}}^{c + off}")
            seen[key] = v
            if v != 0:
                store.setdefault((a, b), {})[c] = v
        return cls(n=n, brackets=store, exact=exact, tol=tol, name=name)

    @classmethod
    def abelian(cls, n: int) -> "LieAlgebra":
        return cls(n=n, brackets={}, exact=True, name=f"abelian-{n}")

    def constant(self, a: int, b: int, c: int) -> Scalar:
        zero = Fraction(0) if self.exact else 0.0
        if a == b:
            return zero
        if a < b:
            return self.brackets.get((a, b), {}).get(c, zero)
        return -self.brackets.get((b, a), {}).get(c, zero)

    def structure_tensor(self) -> np.ndarray:
        """Dense ``C[A, B, C]`` (object dtype of Fractions when exact)."""
        if self._dense is None:
            dt = object if self.exact else float
            zero = Fraction(0) if self.exact else 0.0
            T = np.full((self.n,) * 3, zero, dtype=dt)
            for (a, b), out in self.brackets.items():
                for c, v in out.items():
                    T[a, b, c] = v
                    T[b, a, c] = -v
            object.__setattr__(self, "_dense", T)
        return self._dense

    def float_tensor(self) -> np.ndarray:
        return np.asarray(self.structure_tensor(), dtype=float)

    def bracket(self, x: Sequence, y: Sequence) -> list:
        """``[x, y]`` for vectors given in the basis ``e_A``."""
        T = self.structure_tensor()
        return [sum(x[a] * y[b] * T[a, b, c] for a in range(self.n) for b in range(self.n)
                    if x[a] and y[b]) for c in range(self.n)]

    def change_basis(self, M) -> "LieAlgebra":
        """Algebra in the basis ``f_i = sum_j M[j][i] e_j`` (columns of M)."""
        n = self.n
        exact = self.exact and all(is_exact_scalar(v) for row in M for v in row)
        if exact:
            aug = [[Fraction(M[i][j]) for j in range(n)] + [Fraction(int(i == k)) for k in range(n)]
                   for i in range(n)]
            rows, piv = linalg.rref(aug)
            if piv[:n] != list(range(n)):
                raise ValueError("change-of-basis matrix is singular")
            Minv = [row[n:] for row in rows]
        else:
            Minv = np.linalg.inv(np.asarray(M, dtype=float)).tolist()
        cols = [[M[j][i] for j in range(n)] for i in range(n)]
        rel = {}
        for i, k in itertools.combinations(range(n), 2):
            br = self.bracket(cols[i], cols[k])
            coords = [sum(Minv[l][c] * br[c] for c in range(n)) for l in range(n)]
            out = {l + 1: (v if exact else float(v)) for l, v in enumerate(coords)
                   if (v != 0 if exact else abs(float(v)) > 0)}
            if out:
                rel[(i + 1, k + 1)] = out
        alg = LieAlgebra.from_brackets(n, rel, tol=self.tol, name=self.name + "'")
        if not exact and alg.exact:
            alg = LieAlgebra(n=n, brackets={k: {c: float(v) for c, v in o.items()}
                                            for k, o in alg.brackets.items()},
                             exact=False, tol=self.tol, name=alg.name)
        return alg


@dataclass(frozen=True)
class ValidationReport:
    ok: bool
    antisymmetry_violations: tuple[tuple[int, int, int], ...] = ()
    jacobi_violations: tuple[tuple[int, int, int, int], ...] = ()

    def __bool__(self):
        return self.ok


def validate_algebra(alg: LieAlgebra, tol: float | None = None) -> ValidationReport:
    """Check antisymmetry and the Jacobi identity over every index tuple (1-based)."""
    tol = alg.tol if tol is None else tol
    T = alg.structure_tensor()
    n = alg.n

    def nonzero(v):
        return v != 0 if alg.exact else abs(v) > tol

    anti = tuple((a + 1, b + 1, c + 1)
                 for a, b, c in itertools.product(range(n), repeat=3)
                 if nonzero(T[a, b, c] + T[b, a, c]))
    jac = []
    for a, b, c in itertools.combinations(range(n), 3):
        for e in range(n):
            s = sum(T[a, b, d] * T[d, c, e] + T[b, c, d] * T[d, a, e] + T[c, a, d] * T[d, b, e]
                    for d in range(n))
            if nonzero(s):
                jac.append((a + 1, b + 1, c + 1, e + 1))
    return ValidationReport(ok=not anti and not jac, antisymmetry_violations=anti,
                            jacobi_violations=tuple(jac))


def _covector(alg: LieAlgebra, lam: Sequence) -> list:
    if len(lam) != alg.n:
        raise ValueError(f"covector has length {len(lam)}, expected {alg.n}")
    if alg.exact and all(is_exact_scalar(v) for v in lam):
        return [Fraction(v) for v in lam]
    return [float(v) for v in lam]


def coadjoint_pairing_matrix(alg: LieAlgebra, lam: Sequence) -> np.ndarray:
    """``B[A, B] = sum_C C_AB^C lam_C``; object dtype when everything is exact."""
    lam = _covector(alg, lam)
    exact = alg.exact and all(isinstance(v, Fraction) for v in lam)
    if exact:
        B = np.full((alg.n, alg.n), Fraction(0), dtype=object)
        for (a, b), out in alg.brackets.items():
            v = sum((c_ab * lam[c] for c, c_ab in out.items()), Fraction(0))
            B[a, b] = v
            B[b, a] = -v
        return B
    return alg.float_tensor() @ np.asarray(lam, dtype=float)


def _is_exact_matrix(B) -> bool:
    return getattr(B, "dtype", None) == object


def pairing_rank(alg: LieAlgebra, lam: Sequence) -> int:
    B = coadjoint_pairing_matrix(alg, lam)
    return linalg.matrix_rank(B.tolist() if _is_exact_matrix(B) else B,
                              _is_exact_matrix(B), alg.tol)


def annihilator(alg: LieAlgebra, lam: Sequence) -> list:
    """Basis of ``g^lam = ker B(lam)``."""
    B = coadjoint_pairing_matrix(alg, lam)
    exact = _is_exact_matrix(B)
    return linalg.nullspace(B.tolist() if exact else B, exact, alg.tol, ncols=alg.n)


def random_rational(rng: random.Random) -> Fraction:
    den = rng.randint(1, SAMPLE_RANGE)
    return Fraction(rng.randint(-SAMPLE_RANGE, SAMPLE_RANGE), den)


def random_covector(alg: LieAlgebra, rng: random.Random) -> list:
    lam = [random_rational(rng) for _ in range(alg.n)]
    return lam if alg.exact else [float(v) for v in lam]


def algebra_index(alg: LieAlgebra, samples: int = 8, seed: int = 0) -> int:
    """``ind g = n - max rank B(lam)`` over ``samples`` seeded random covectors."""
    rng = random.Random(seed)
    best = max(pairing_rank(alg, random_covector(alg, rng)) for _ in range(samples))
    return alg.n - best


def gradient(f, P: Sequence, h: float = 1e-6, exact: bool = False) -> list:
    """Gradient of ``f`` at ``P``.

    Polynomials are differentiated exactly; objects exposing ``grad`` use it;
    plain callables fall back to central differences with step ``h``.
    """
    if isinstance(f, Polynomial):
        if exact:
            return [f.diff(i)(P) for i in range(len(P))]
        return [float(f.diff(i)([float(v) for v in P])) for i in range(len(P))]
    if hasattr(f, "grad"):
        return list(np.asarray(f.grad(np.asarray(P, dtype=float)), dtype=float))
    x = np.asarray(P, dtype=float)
    out = []
    for i in range(len(x)):
        e = np.zeros_like(x)
        e[i] = h
        out.append((f(x + e) - f(x - e)) / (2 * h))
    return out


def lie_poisson_bracket(alg: LieAlgebra, phi: Callable, psi: Callable, P: Sequence,
                        h: float = 1e-6) -> Scalar:
    """``{phi, psi}(P) = C_AB^C P_C dphi/dP_A dpsi/dP_B``."""
    P = _covector(alg, P)
    exact = (alg.exact and all(isinstance(v, Fraction) for v in P)
             and isinstance(phi, Polynomial) and isinstance(psi, Polynomial)
             and phi.is_exact() and psi.is_exact())
    B = coadjoint_pairing_matrix(alg, P)
    dphi = gradient(phi, P, h, exact)
    dpsi = gradient(psi, P, h, exact)
    if exact:
        return sum((dphi[a] * B[a, b] * dpsi[b] for a in range(alg.n) for b in range(alg.n)),
                   Fraction(0))
    return float(np.asarray(dphi, float) @ np.asarray(B, float) @ np.asarray(dpsi, float))


def coordinate_function(n: int, a: int) -> Polynomial:
    """The linear function ``P -> P_a`` (0-based) on the dual."""
    return Polynomial.var(n, a)
