"""Verification batteries for the two built-in worked examples.

Each check yields a :class:`Check` row carrying the measured value, the
tolerance it was held to and a short note.  Rows for formulas transcribed
literally from the source are labelled ``printed``; when such a row fails,
a companion row checks the repaired formula.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import charts
from .catalog import SQRT2, sec4_algebra, sec5_algebra
from .realization import (InvariantHamiltonian, realization_check, sec4_casimir,
                          sec4_fields, sec4_invariants, sec5_fields)


@dataclass(frozen=True)
class Check:
    name: str
    value: float
    tol: float
    passed: bool
    note: str = ""

    def line(self) -> str:
        status = "pass" if self.passed else "FAIL"
        extra = f"  ({self.note})" if self.note else ""
        return f"{self.name:<40} {self.value:>11.3e}  tol={self.tol:.0e}  {status}{extra}"


def _below(name, value, tol, note=""):
    value = float(value)
    return Check(name, value, tol, value < tol, note)


def _exact(name, ok, note="exact"):
    return Check(name, 0.0 if ok else 1.0, 0.0, bool(ok), note)


def sec4_reduced_consistency(npoints: int = 100, seed: int = 0,
                             c=(0.7, -1.3, 0.4, 2.1)) -> float:
    """Max ``|H~(u, v, j) - H(L(x, p))|`` with ``u = L1, v = -L2/L1, j = L1 L3``."""
    rng = np.random.default_rng(seed)
    L = sec4_invariants()
    H = InvariantHamiltonian(L, c)
    worst = 0.0
    for _ in range(npoints):
        z = rng.uniform(-1.0, 1.0, 8)
        l1, l2, l3 = L.values(z)
        if abs(l1) < 1e-3:
            continue
        Ht = charts.sec4_reduced_hamiltonian(l1, -l2 / l1, l1 * l3, c)
        worst = max(worst, abs(Ht - H(z)))
    return worst


def sec4_casimir_sign(npoints: int = 100, seed: int = 0) -> tuple[float, float]:
    """``(max |L1 L3 + K(X)|, max |L1 L3 - K(X)|)`` over random phase points."""
    rng = np.random.default_rng(seed)
    L = sec4_invariants()
    X = sec4_fields()
    plus = minus = 0.0
    for _ in range(npoints):
        z = rng.uniform(-1.0, 1.0, 8)
        l1, _, l3 = L.values(z)
        K = sec4_casimir(X.values(z))
        plus = max(plus, abs(l1 * l3 + K))
        minus = max(minus, abs(l1 * l3 - K))
    return plus, minus


def sec5_reduced_consistency(a_form: str = "printed", b_form: str = "corrected",
                             nmetrics: int = 20, npoints: int = 100, seed: int = 0,
                             alpha: float = SQRT2) -> float:
    """Max ``|H~(q, pi, j) - P^T G P / 2|`` over random symmetric metrics and chart points."""
    rng = np.random.default_rng(seed)
    worst = 0.0
    for _ in range(nmetrics):
        S = rng.uniform(-1.0, 1.0, (5, 5))
        G = 0.5 * (S + S.T)
        for _ in range(npoints):
            q, pi = rng.uniform(-math.pi, math.pi), rng.uniform(-2, 2)
            j = (rng.uniform(0.2, 2), rng.uniform(0.2, 2), rng.uniform(-math.pi, math.pi))
            Ht = charts.sec5_reduced_hamiltonian(q, pi, j, G, alpha, a_form, b_form)
            worst = max(worst, abs(Ht - charts.sec5_defining_hamiltonian(q, pi, j, G, alpha)))
    return worst


def sec5_b_validation(nmetrics: int = 20, npoints: int = 100, seed: int = 0,
                      alpha: float = SQRT2, form: str = "corrected") -> float:
    """Max ``|B(q, j) - B_oracle(q, j)|``."""
    rng = np.random.default_rng(seed)
    worst = 0.0
    for _ in range(nmetrics):
        S = rng.uniform(-1.0, 1.0, (5, 5))
        G = 0.5 * (S + S.T)
        for _ in range(npoints):
            q = rng.uniform(-math.pi, math.pi)
            j = (rng.uniform(0.2, 2), rng.uniform(0.2, 2), rng.uniform(-math.pi, math.pi))
            worst = max(worst, abs(charts.sec5_B(q, j, G, alpha, form)
                                   - charts.sec5_B_oracle(q, j, G, alpha)))
    return worst


def chart_intertwining(chart, npoints: int = 100, seed: int = 0) -> float:
    rng = np.random.default_rng(seed)
    worst = 0.0
    k = chart.dim_q
    for _ in range(npoints):
        q = rng.uniform(0.3, 2.0, k) * rng.choice([-1, 1], k)
        pi = rng.uniform(-2, 2, k)
        j = np.concatenate([rng.uniform(0.3, 2.0, min(chart.n_j, 2)),
                            rng.uniform(-2.0, 2.0, chart.n_j - min(chart.n_j, 2))])
        worst = max(worst, chart.intertwining_error(q, pi, j))
    return worst


def sec5_kappa_error(npoints: int = 100, seed: int = 0, alpha: float = SQRT2) -> float:
    """Max ``|kappa(P(q, pi, j)) - (j1, alpha j2, j3)|`` with ``K3`` from lifted angles."""
    chart = charts.sec5_orbit_chart(alpha)
    rng = np.random.default_rng(seed)
    worst = 0.0
    for _ in range(npoints):
        q, pi = rng.uniform(-6, 6), rng.uniform(-2, 2)
        j = np.array([rng.uniform(0.2, 2), rng.uniform(0.2, 2), rng.uniform(-3, 3)])
        P = chart(q, pi, j)
        got = np.array([chart.casimirs[0](P), chart.casimirs[1](P),
                        charts.sec5_lifted_k3(chart, q, pi, j, alpha)])
        worst = max(worst, float(np.max(np.abs(got - chart.kappa(j)))))
    return worst


def sec4_battery(npoints: int = 100, seed: int = 0) -> list[Check]:
    rows = []
    rep = realization_check(sec4_fields(), sec4_algebra())
    rows.append(_exact("realization {X_A, X_B} = C X", rep.ok and rep.exact))
    sym = charts.sec4_chart_symbolic_checks()
    rows.append(_exact("chart K(P(q, pi, j)) = j", sym["casimir_exact"]))
    rows.append(_exact("chart intertwining (symbolic)", not sym["intertwining_failures"]))
    rows.append(_below("chart intertwining (100 points)",
                       chart_intertwining(charts.sec4_orbit_chart(), npoints, seed), 1e-9))
    d = charts.kappa_jacobian_det(charts.sec4_orbit_chart(), [1.0])
    rows.append(_below("det dkappa/dj - 1", abs(d - 1.0), 1e-9))
    sheet = charts.sec4_sheet_chart()
    rng = np.random.default_rng(seed)
    err = max(sheet.relation_error(rng.uniform(0.3, 2) * rng.choice([-1, 1]),
                                   rng.uniform(-2, 2), rng.uniform(-2, 2)) for _ in range(npoints))
    rows.append(_below("sheet chart relations", err, 1e-9, "{L1, L2} = L1"))
    plus, minus = sec4_casimir_sign(npoints, seed)
    rows.append(_below("L1 L3 = -K(X)", plus, 1e-9))
    for r in charts.transition_table(charts.sec4_transition(), npoints, seed):
        note = "printed" if r.T == "T" else "p1 * printed T"
        rows.append(Check(f"bracket {{{r.other}, {r.T}}} = {r.expected:.0f}",
                          r.max_error, r.tol, r.passed, note))
    rows.append(_below("H~(u, v, j) = H(L) (100 points)",
                       sec4_reduced_consistency(npoints, seed), 1e-9))
    return rows


def sec5_battery(npoints: int = 100, seed: int = 0, alpha: float = SQRT2) -> list[Check]:
    rows = []
    rep = realization_check(sec5_fields(alpha), sec5_algebra(alpha), tol=1e-12)
    rows.append(_below("realization {X_A, X_B} = C X", rep.max_residual, 1e-12,
                       "floating alpha^2"))
    chart = charts.sec5_orbit_chart(alpha)
    rows.append(_below("chart kappa(j) = (j1, alpha j2, j3)",
                       sec5_kappa_error(npoints, seed, alpha), 1e-12))
    rows.append(_below("chart intertwining (100 points)", chart_intertwining(chart, npoints, seed),
                       1e-9))
    d = charts.kappa_jacobian_det(chart, [1.0, 1.0, 0.5])
    rows.append(_below("det dkappa/dj - alpha", abs(d - alpha), 1e-6))
    for r in charts.transition_table(charts.sec5_transition(alpha), npoints, seed):
        note = {"T3": "printed", "T3_linear": "x4 in place of x4^2"}.get(r.T, "printed")
        rows.append(Check(f"bracket {{{r.other}, {r.T}}} = {r.expected:.0f}", r.max_error, r.tol,
                          r.passed, note))
    rows.append(_below("B printed = P'^T G P'", sec5_b_validation(5, 20, seed, alpha, "printed"),
                       1e-9, "printed"))
    rows.append(_below("B corrected = P'^T G P'", sec5_b_validation(20, npoints, seed, alpha),
                       1e-9, "G24 term sign repaired"))
    rows.append(_below("H~ printed A, validated B",
                       sec5_reduced_consistency("printed", "corrected", 20, npoints, seed, alpha),
                       1e-9, "printed"))
    rows.append(_below("H~ corrected A, validated B",
                       sec5_reduced_consistency("corrected", "corrected", 20, npoints, seed, alpha),
                       1e-9, "alpha on G14 term"))
    return rows


def run_battery(example: str, npoints: int = 100, seed: int = 0,
                alpha: float = SQRT2) -> list[Check]:
    if example == "sec4":
        return sec4_battery(npoints, seed)
    if example == "sec5":
        return sec5_battery(npoints, seed, alpha)
    raise ValueError(f"unknown example {example!r}")
