"""Sparse multivariate (Laurent) polynomials with exact or float coefficients.

A polynomial is a map from exponent tuples to coefficients.  Negative
exponents are allowed so chart maps such as ``j / q1**2`` stay in the same
representation.  Coefficients may be ``Fraction`` (exact identities) or
``float``.
"""

from __future__ import annotations

from fractions import Fraction
from numbers import Number
from typing import Iterable, Mapping

import numpy as np

Exponent = tuple[int, ...]


class Polynomial:
    __slots__ = ("nvars", "terms")

    def __init__(self, nvars: int, terms: Mapping[Exponent, object] | None = None):
        self.nvars = nvars
        clean: dict[Exponent, object] = {}
        for e, c in (terms or {}).items():
            e = tuple(int(k) for k in e)
            if len(e) != nvars:
                raise ValueError(f"exponent {e} has wrong length for {nvars} variables")
            if c != 0:
                clean[e] = clean.get(e, 0) + c
                if clean[e] == 0:
                    del clean[e]
        self.terms = clean

    # constructors
    @classmethod
    def zero(cls, nvars: int) -> "Polynomial":
        return cls(nvars)

    @classmethod
    def constant(cls, nvars: int, c) -> "Polynomial":
        return cls(nvars, {(0,) * nvars: c})

    @classmethod
    def var(cls, nvars: int, i: int, coeff=1) -> "Polynomial":
        e = [0] * nvars
        e[i] = 1
        return cls(nvars, {tuple(e): Fraction(coeff) if isinstance(coeff, int) else coeff})

    @classmethod
    def monomial(cls, exps: Iterable[int], coeff=1) -> "Polynomial":
        e = tuple(exps)
        return cls(len(e), {e: coeff})

    # arithmetic
    def _coerce(self, other) -> "Polynomial":
        if isinstance(other, Polynomial):
            if other.nvars != self.nvars:
                raise ValueError("polynomials live in different variable sets")
            return other
        if isinstance(other, Number):
            return Polynomial.constant(self.nvars, other)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        terms = dict(self.terms)
        for e, c in other.terms.items():
            terms[e] = terms.get(e, 0) + c
        return Polynomial(self.nvars, terms)

    __radd__ = __add__

    def __neg__(self):
        return Polynomial(self.nvars, {e: -c for e, c in self.terms.items()})

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, Number):
            return Polynomial(self.nvars, {e: c * other for e, c in self.terms.items()})
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        terms: dict[Exponent, object] = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                terms[e] = terms.get(e, 0) + c1 * c2
        return Polynomial(self.nvars, terms)

    __rmul__ = __mul__

    def __pow__(self, k: int):
        if k < 0:
            if len(self.terms) != 1:
                raise ValueError("only monomials can be raised to negative powers")
            (e, c), = self.terms.items()
            return Polynomial(self.nvars, {tuple(k * a for a in e): Fraction(1) / c ** -k
                                           if isinstance(c, (int, Fraction)) else c ** k})
        out = Polynomial.constant(self.nvars, Fraction(1))
        for _ in range(k):
            out = out * self
        return out

    def __eq__(self, other):
        if not isinstance(other, Polynomial):
            other = self._coerce(other)
            if other is NotImplemented:
                return False
        return (self - other).is_zero()

    def __hash__(self):
        return hash((self.nvars, frozenset(self.terms.items())))

    # calculus
    def diff(self, i: int) -> "Polynomial":
        terms = {}
        for e, c in self.terms.items():
            k = e[i]
            if k != 0:
                ne = list(e)
                ne[i] -= 1
                terms[tuple(ne)] = c * k
        return Polynomial(self.nvars, terms)

    def __call__(self, point):
        total = 0
        for e, c in self.terms.items():
            term = c
            for v, k in zip(point, e):
                if k:
                    term = term * v ** k
            total = total + term
        return total

    value = __call__

    def grad(self, point) -> np.ndarray:
        return np.array([float(self.diff(i)(point)) for i in range(self.nvars)])

    # inspection
    def is_zero(self, tol: float = 0.0) -> bool:
        if tol == 0.0:
            return not self.terms
        return all(abs(c) <= tol for c in self.terms.values())

    def max_abs_coeff(self) -> float:
        return max((abs(float(c)) for c in self.terms.values()), default=0.0)

    def degree_in(self, indices: Iterable[int]) -> int:
        idx = list(indices)
        return max((sum(e[i] for i in idx) for e in self.terms), default=0)

    def is_exact(self) -> bool:
        return all(isinstance(c, (int, Fraction)) for c in self.terms.values())

    def to_float(self) -> "Polynomial":
        return Polynomial(self.nvars, {e: float(c) for e, c in self.terms.items()})

    def __repr__(self):
        if not self.terms:
            return "0"
        parts = []
        for e, c in sorted(self.terms.items()):
            mono = "*".join(f"z{i}" + (f"^{k}" if k != 1 else "") for i, k in enumerate(e) if k)
            parts.append(f"{c}" + (f"*{mono}" if mono else ""))
        return " + ".join(parts)


def poisson_pairs(f: Polynomial, g: Polynomial, coords, momenta) -> Polynomial:
    """``sum_k df/dmom_k dg/dcoord_k - df/dcoord_k dg/dmom_k`` over paired variable indices."""
    out = Polynomial.zero(f.nvars)
    for c, m in zip(coords, momenta):
        out = out + f.diff(m) * g.diff(c) - f.diff(c) * g.diff(m)
    return out


def canonical_poisson(f: Polynomial, g: Polynomial) -> Polynomial:
    """Exact canonical bracket on variables ``(x_1..x_m, p_1..p_m)``.

    Orientation: ``{f, g} = sum_a df/dp_a dg/dx_a - df/dx_a dg/dp_a`` so that
    ``{H, x_a} = dH/dp_a``.
    """
    if f.nvars != g.nvars or f.nvars % 2:
        raise ValueError("canonical bracket needs matching, even variable counts")
    m = f.nvars // 2
    return poisson_pairs(f, g, range(m), range(m, 2 * m))


class CompiledPolys:
    """Vectorized evaluation of a fixed list of polynomials at float points."""

    def __init__(self, polys: list[Polynomial]):
        exps, coeffs, owner = [], [], []
        for k, p in enumerate(polys):
            for e, c in p.terms.items():
                exps.append(e)
                coeffs.append(float(c))
                owner.append(k)
        nvars = polys[0].nvars if polys else 0
        self.count = len(polys)
        self.exps = np.array(exps, dtype=float).reshape(-1, nvars)
        self.coeffs = np.array(coeffs, dtype=float)
        self.owner = np.array(owner, dtype=int)

    def __call__(self, z: np.ndarray) -> np.ndarray:
        if self.coeffs.size == 0:
            return np.zeros(self.count)
        terms = self.coeffs * np.prod(np.power(z, self.exps), axis=1)
        return np.bincount(self.owner, weights=terms, minlength=self.count)
