"""Integer invariants of a homogeneous space ``M = G/H`` from structure constants.

Given ``g`` and the isotropy subalgebra ``h`` this computes the annihilator
``h^perp``, a generic covector in it, the degree of degeneracy ``s_M``, the
space index ``i_M``, the dimension and index of the algebra of invariant
functions, the defect ``d(M)``, and the resulting integrability verdicts
for invariant and central metrics.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

import numpy as np

from . import linalg
from .lie_core import (LieAlgebra, algebra_index, annihilator, is_exact_scalar, pairing_rank,
                       random_rational)


class ParityError(ValueError):
    """``dim g^lam - ind g`` came out odd: the covector was not generic or the rank tolerance failed."""


class SubalgebraSpec:
    """Isotropy subalgebra ``h`` spanned by ``basis`` (coefficient vectors in ``e_A``)."""

    def __init__(self, parent: LieAlgebra, basis: Sequence[Sequence]):
        self.parent = parent
        n = parent.n
        vecs = []
        for v in basis:
            if len(v) != n:
                raise ValueError(f"subalgebra vector has length {len(v)}, expected {n}")
            if parent.exact and all(is_exact_scalar(c) for c in v):
                vecs.append([Fraction(c) for c in v])
            else:
                vecs.append([float(c) for c in v])
        self.exact = parent.exact and all(isinstance(c, Fraction) for v in vecs for c in v)
        self.basis = vecs
        if not linalg.independent(vecs, self.exact, parent.tol):
            raise ValueError("subalgebra basis is linearly dependent")
        for i in range(len(vecs)):
            for k in range(i + 1, len(vecs)):
                br = parent.bracket(vecs[i], vecs[k])
                if linalg.matrix_rank(vecs + [br], self.exact, parent.tol) != len(vecs):
                    raise ValueError(f"[h_{i + 1}, h_{k + 1}] leaves the subalgebra")

    @property
    def dim(self) -> int:
        return len(self.basis)

    @property
    def codim(self) -> int:
        return self.parent.n - self.dim


@dataclass(frozen=True)
class SpaceInvariantsReport:
    ind_g: int
    s_M: int
    i_M: int
    dim_F: int
    ind_F: int
    defect: int
    dim_orbit: int
    commutative: bool
    thm1_integrable: bool
    thm2_integrable: bool
    dim_g: int = 0
    dim_M: int = 0
    defect_from_quotients: int = 0
    generic_covector: tuple = field(default=(), compare=False)

    def invariant_tuple(self) -> tuple[int, ...]:
        return (self.ind_g, self.s_M, self.i_M, self.dim_F, self.ind_F, self.defect)

    def as_dict(self) -> dict:
        return {
            "dim_g": self.dim_g, "dim_M": self.dim_M, "ind_g": self.ind_g, "s_M": self.s_M,
            "i_M": self.i_M, "dim_F": self.dim_F, "ind_F": self.ind_F, "defect": self.defect,
            "dim_orbit": self.dim_orbit, "commutative": self.commutative,
            "thm1": "integrable" if self.thm1_integrable else "nonintegrable",
            "thm2": "integrable" if self.thm2_integrable else "nonintegrable",
        }


def hperp_basis(h: SubalgebraSpec) -> list:
    """Covectors spanning ``h^perp = {lam : <lam, h> = 0}``."""
    n = h.parent.n
    if h.dim == 0:
        return [[Fraction(int(i == k)) for k in range(n)] for i in range(n)] if h.exact \
            else list(np.eye(n))
    return linalg.nullspace(h.basis, h.exact, h.parent.tol, ncols=n)


def intersection_dim(h: SubalgebraSpec, subspace: list) -> int:
    """``dim(h ∩ V) = dim h + dim V - rank[h; V]``."""
    if not subspace or h.dim == 0:
        return 0
    exact = h.exact and all(isinstance(c, Fraction) for v in subspace for c in v)
    basis = h.basis if exact else [[float(c) for c in v] for v in h.basis]
    stacked = basis + [list(v) for v in subspace]
    return h.dim + len(subspace) - linalg.matrix_rank(stacked, exact, h.parent.tol)


def covector_profile(h: SubalgebraSpec, lam: Sequence) -> tuple[int, int]:
    """``(dim g^lam, dim h^lam)`` at ``lam``."""
    g_lam = annihilator(h.parent, lam)
    return len(g_lam), intersection_dim(h, g_lam)


def _draw(h: SubalgebraSpec, basis: list, rng: random.Random) -> list:
    n = h.parent.n
    coeffs = [random_rational(rng) for _ in basis]
    if h.exact:
        return [sum((c * v[i] for c, v in zip(coeffs, basis)), Fraction(0)) for i in range(n)]
    return list(np.asarray([float(c) for c in coeffs]) @ np.asarray(basis, dtype=float)) \
        if basis else [0.0] * n


def generic_hperp_covector(h: SubalgebraSpec, seed: int = 0, samples: int = 8) -> list:
    """A covector in ``h^perp`` of maximal ``rank B`` and, among those, minimal ``dim h^lam``."""
    basis = hperp_basis(h)
    rng = random.Random(seed)
    best, best_key = None, None
    for _ in range(samples):
        lam = _draw(h, basis, rng)
        dg, dh = covector_profile(h, lam)
        key = (dg, dh)
        if best_key is None or key < best_key:
            best, best_key = lam, key
    return best


def is_generic(h: SubalgebraSpec, lam: Sequence, seed: int = 0, samples: int = 8) -> bool:
    """Whether ``lam`` attains the generic ``(dim g^lam, dim h^lam)`` of ``h^perp``."""
    ref = covector_profile(h, generic_hperp_covector(h, seed, samples))
    return covector_profile(h, lam) == ref


def degeneracy_degree(h: SubalgebraSpec, ind_g: int | None = None, seed: int = 0,
                      samples: int = 8, lam: Sequence | None = None) -> int:
    """``s_M = (dim g^lam - ind g) / 2`` at a generic ``lam`` in ``h^perp``."""
    if ind_g is None:
        ind_g = algebra_index(h.parent, samples, seed)
    if lam is None:
        lam = generic_hperp_covector(h, seed, samples)
    excess = len(annihilator(h.parent, lam)) - ind_g
    if excess < 0 or excess % 2:
        raise ParityError(f"dim g^lam - ind g = {excess} is not a nonnegative even integer")
    return excess // 2


def space_index(h: SubalgebraSpec, seed: int = 0, samples: int = 8,
                lam: Sequence | None = None) -> int:
    """``i_M = dim(h ∩ g^lam)`` at a generic ``lam`` in ``h^perp``."""
    if lam is None:
        lam = generic_hperp_covector(h, seed, samples)
    return covector_profile(h, lam)[1]


def classify(h: SubalgebraSpec, seed: int = 0, samples: int = 8) -> SpaceInvariantsReport:
    alg = h.parent
    n = alg.n
    ind_g = algebra_index(alg, samples, seed)
    lam = generic_hperp_covector(h, seed, samples)
    dim_g_lam, i_M = covector_profile(h, lam)
    s_M = degeneracy_degree(h, ind_g=ind_g, lam=lam)
    dim_M = h.codim
    dim_F = i_M + 2 * dim_M - n
    ind_F = ind_g + 2 * s_M - i_M
    if (dim_F - ind_F) % 2:
        raise ParityError(f"dim F - ind F = {dim_F - ind_F} is odd")
    defect = (dim_F - ind_F) // 2
    # (1/2) dim g/g^lam - dim h/h^lam, computed independently of dim F and ind F
    twice = (n - dim_g_lam) - 2 * (h.dim - i_M)
    dim_orbit = n - ind_g - 2 * s_M
    return SpaceInvariantsReport(
        ind_g=ind_g, s_M=s_M, i_M=i_M, dim_F=dim_F, ind_F=ind_F, defect=defect,
        dim_orbit=dim_orbit, commutative=defect == 0, thm1_integrable=defect < 2,
        thm2_integrable=dim_orbit // 2 < 2, dim_g=n, dim_M=dim_M,
        defect_from_quotients=twice // 2, generic_covector=tuple(lam),
    )


@dataclass(frozen=True)
class MetricForm:
    """Symmetric ``G^{AB}`` on the dual of ``g``."""

    matrix: tuple

    def __init__(self, matrix):
        rows = tuple(tuple(r) for r in (matrix.tolist() if hasattr(matrix, "tolist") else matrix))
        n = len(rows)
        if any(len(r) != n for r in rows):
            raise ValueError("metric must be square")
        for i in range(n):
            for k in range(i + 1, n):
                if rows[i][k] != rows[k][i] and abs(float(rows[i][k]) - float(rows[k][i])) > 1e-14:
                    raise ValueError(f"metric is not symmetric at ({i + 1}, {k + 1})")
        object.__setattr__(self, "matrix", rows)

    @property
    def exact(self) -> bool:
        return all(is_exact_scalar(v) for r in self.matrix for v in r)

    @property
    def array(self) -> np.ndarray:
        return np.asarray(self.matrix, dtype=float)

    def __len__(self):
        return len(self.matrix)


@dataclass(frozen=True)
class AdmissibilityReport:
    rank_ok: bool
    adH_invariant: bool
    restricted_rank: int
    max_invariance_residual: float


def coadjoint_action_matrix(alg: LieAlgebra, X: Sequence) -> np.ndarray:
    """Matrix of ``ad*_X`` on covectors: ``(ad*_X lam)_B = -sum X_A C_AB^C lam_C``."""
    T = alg.structure_tensor()
    dt = object if T.dtype == object and all(is_exact_scalar(c) for c in X) else float
    Xv = np.asarray(list(X), dtype=dt)
    return -np.tensordot(Xv, T.astype(dt), axes=(0, 0))


def metric_admissibility(h: SubalgebraSpec, G) -> AdmissibilityReport:
    """Rank of ``G`` restricted to ``h^perp`` and infinitesimal ``Ad*_H`` invariance."""
    G = G if isinstance(G, MetricForm) else MetricForm(G)
    alg = h.parent
    exact = h.exact and G.exact
    dt = object if exact else float
    Gm = np.asarray([[Fraction(v) if exact else float(v) for v in r] for r in G.matrix], dtype=dt)
    L = np.asarray(hperp_basis(h), dtype=dt).reshape(-1, alg.n).T  # columns span h^perp
    R = L.T @ Gm @ L
    rank = linalg.matrix_rank(R.tolist() if exact else R, exact, alg.tol) if R.size else 0
    worst = 0.0
    for X in h.basis:
        M = coadjoint_action_matrix(alg, X)
        M = M.astype(dt)
        S = L.T @ (M.T @ Gm + Gm @ M) @ L
        if S.size:
            worst = max(worst, float(np.max(np.abs(S.astype(float)))))
    tol = 0.0 if exact else alg.tol * max(1.0, float(np.max(np.abs(G.array))))
    return AdmissibilityReport(rank_ok=rank == h.codim, adH_invariant=worst <= tol,
                               restricted_rank=rank, max_invariance_residual=worst)
