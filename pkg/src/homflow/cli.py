"""Command-line front end.

Exit status: 0 when every check passes, 1 when a check fails (failing items
are listed), 2 on input errors.
"""

from __future__ import annotations

import argparse
import math
import sys
from pathlib import Path

import numpy as np

from . import battery, charts
from .catalog import FIGURE1_P0, SPACES, figure1_metric, heisenberg, sec4_algebra, sec5_algebra
from .dynamics import (IntegrationError, figure1_report, integrate_coalgebra, integrate_geodesic,
                       sec5_casimir_monitors, triangular_residual)
from .homspace import SubalgebraSpec, classify, metric_admissibility
from .lie_core import algebra_index, validate_algebra
from .realization import sec4_casimir, sec4_fields, sec5_fields
from .specfile import (SpecError, evaluate, load_document, parse_algebra, parse_metric,
                       parse_realization, parse_subalgebra)

EXAMPLES = ("sec4", "sec5", "heisenberg")


class InputError(ValueError):
    pass


def kv_line(pairs: dict) -> str:
    def fmt(v):
        if isinstance(v, bool):
            return "true" if v else "false"
        if isinstance(v, float):
            return repr(v)
        return str(v)
    return " ".join(f"{k}={fmt(v)}" for k, v in pairs.items())


def parse_kv(line: str) -> dict:
    """Inverse of :func:`kv_line` (values come back as strings)."""
    return dict(item.split("=", 1) for item in line.split())


def _vector_arg(text: str, where: str) -> list:
    try:
        return [evaluate(t.strip(), {}, where) for t in text.split(",")]
    except SpecError as exc:
        raise InputError(str(exc)) from exc


def _subalgebra_arg(text: str) -> list:
    return [_vector_arg(v, "--subalgebra") for v in text.split(";") if v.strip()]


def _alpha(args):
    return math.sqrt(2.0) if args.alpha is None else args.alpha


def load_problem(args) -> dict:
    """Algebra, subalgebra, metric and realization from ``--example`` or ``--algebra``."""
    if args.example and args.algebra:
        raise InputError("give either --example or --algebra, not both")
    sub_override = _subalgebra_arg(args.subalgebra) if args.subalgebra else None
    if args.algebra:
        doc = load_document(args.algebra)
        alg = parse_algebra(doc, name=Path(args.algebra).stem)
        return {"name": alg.name, "alg": alg,
                "h": parse_subalgebra(doc, alg, sub_override),
                "G": parse_metric(doc, alg.n),
                "fields": parse_realization(doc, alg.n)}
    ex = args.example or "sec4"
    if ex not in EXAMPLES:
        raise InputError(f"unknown example {ex!r}; choose from {', '.join(EXAMPLES)}")
    alpha = _alpha(args)
    if ex == "sec4":
        alg, fields, G = sec4_algebra(), sec4_fields(), np.eye(5)
        h = SPACES["sec4"]()
    elif ex == "sec5":
        alg, fields, G = sec5_algebra(alpha), sec5_fields(alpha), figure1_metric()
        h = SPACES["sec5"](alpha)
    else:
        alg, fields, G = heisenberg(), None, np.eye(3)
        h = SPACES["heisenberg"]()
    if sub_override is not None:
        try:
            h = SubalgebraSpec(alg, sub_override)
        except ValueError as exc:
            raise InputError(f"--subalgebra: {exc}") from exc
    return {"name": ex, "alg": alg, "h": h, "G": G, "fields": fields}


def _emit(args, text_lines: list[str], kv: dict):
    if args.format == "kv":
        print(kv_line(kv))
    else:
        print("\n".join(text_lines))
        print(kv_line(kv))


def _write(args, filename: str, content: str) -> str:
    out = Path(args.output_dir)
    out.mkdir(parents=True, exist_ok=True)
    path = out / filename
    path.write_text(content)
    return str(path)


def _check_lines(rows) -> list[str]:
    return [r.line() for r in rows]


def _float_list(text, where):
    return [float(v) for v in _vector_arg(text, where)]


# Commands ---------------------------------------------------------------------

def cmd_analyze(args) -> int:
    prob = load_problem(args)
    alg, h = prob["alg"], prob["h"]
    tol = alg.tol
    rep = validate_algebra(alg)
    lines = [f"algebra {prob['name']}: dim {alg.n}, "
             f"{'exact' if alg.exact else 'floating'} mode, rank tolerance {tol:g}"]
    if not rep.ok:
        lines.append("structure constants FAIL validation")
        for v in rep.antisymmetry_violations:
            lines.append(f"  antisymmetry violated at {v}")
        for a, b, c, e in rep.jacobi_violations:
            lines.append(f"  Jacobi violated for triple ({a}, {b}, {c}) in component e{e}")
        triples = sorted({t[:3] for t in rep.jacobi_violations})
        kv = {"jacobi": "fail", "violations": ";".join(",".join(map(str, t)) for t in triples)}
        _emit(args, lines, kv)
        return 1
    lines.append(f"Jacobi and antisymmetry: pass (tol={'exact' if alg.exact else f'{tol:g}'})")
    if h is None:
        ind = algebra_index(alg, seed=args.seed)
        lines.append(f"ind g = {ind} (no subalgebra given)")
        _emit(args, lines, {"ind_g": ind, "jacobi": "ok"})
        return 0
    r = classify(h, seed=args.seed)
    lines += [
        f"isotropy subalgebra: dim {h.dim}; dim M = {r.dim_M}",
        f"ind g = {r.ind_g}",
        f"s_M = {r.s_M} (degree of degeneracy)",
        f"i_M = {r.i_M} (index of the space)",
        f"dim F = {r.dim_F}, ind F = {r.ind_F}",
        f"defect = {r.defect} (quotient formula gives {r.defect_from_quotients})",
        f"defect criterion: defect < 2 -> {'integrable' if r.thm1_integrable else 'not integrable in quadratures'}",
        f"orbit criterion: (n - ind g)/2 - s_M = {r.dim_orbit // 2} < 2 -> "
        f"{'integrable' if r.thm2_integrable else 'not integrable in quadratures'}",
        f"commutative: {'yes' if r.commutative else 'no'}",
    ]
    kv = {"ind_g": r.ind_g, "s_M": r.s_M, "i_M": r.i_M, "dim_F": r.dim_F, "ind_F": r.ind_F,
          "defect": r.defect, "thm1": "integrable" if r.thm1_integrable else "nonintegrable",
          "commutative": r.commutative,
          "thm2": "integrable" if r.thm2_integrable else "nonintegrable",
          "dim_g": r.dim_g, "dim_M": r.dim_M, "dim_orbit": r.dim_orbit, "jacobi": "ok"}
    if prob["G"] is not None and args.algebra:
        adm = metric_admissibility(h, prob["G"])
        lines.append(f"metric: rank on h-perp {adm.restricted_rank} "
                     f"({'ok' if adm.rank_ok else 'degenerate'}), Ad*_H invariant: "
                     f"{'yes' if adm.adH_invariant else 'no'} "
                     f"(residual {adm.max_invariance_residual:.3e})")
        kv["metric_rank_ok"] = adm.rank_ok
        kv["metric_invariant"] = adm.adH_invariant
    _emit(args, lines, kv)
    return 0


def cmd_integrate_coalgebra(args) -> int:
    prob = load_problem(args)
    alg = prob["alg"]
    if not validate_algebra(alg).ok:
        raise InputError("structure constants fail Jacobi; run analyze for details")
    G = prob["G"] if prob["G"] is not None else np.eye(alg.n)
    G = G.array if hasattr(G, "array") else np.asarray(G, dtype=float)
    if args.P0:
        P0 = _float_list(args.P0, "--P0")
    elif prob["name"] == "sec5":
        P0 = list(FIGURE1_P0)
    else:
        P0 = list(np.random.default_rng(args.seed).uniform(-1, 1, alg.n))
    if len(P0) != alg.n:
        raise InputError(f"--P0 needs {alg.n} components")
    casimirs = {}
    if prob["name"] == "sec5":
        casimirs = sec5_casimir_monitors(_alpha(args))
    elif prob["name"] == "sec4":
        casimirs = {"K": lambda S: sec4_casimir(S.T)}
    traj = integrate_coalgebra(alg, G, P0, args.dt, args.T, args.method, casimirs=casimirs)
    names = [f"P{a + 1}" for a in range(alg.n)]
    series = {"t": traj.times, **{k: traj.states[:, a] for a, k in enumerate(names)},
              **traj.monitors}
    path = _write(args, "coalgebra.csv", charts.series_csv(series, args.every))
    lines = [f"integrate-coalgebra {prob['name']} dt={args.dt!r} T={args.T!r} "
             f"method={args.method} P0={[float(v) for v in P0]}", f"wrote {path}"]
    kv, ok = {}, True
    for k in traj.monitors:
        if k == "K3_wrapped":
            continue
        d = traj.drift(k)
        passed = d < args.tol
        ok &= passed
        lines.append(f"drift {k:<14} {d:.3e}  tol={args.tol:.0e}  {'pass' if passed else 'FAIL'}")
        kv[f"drift_{k}"] = d
    _emit(args, lines, kv)
    return 0 if ok else 1


def cmd_integrate_geodesic(args) -> int:
    prob = load_problem(args)
    alg, fields = prob["alg"], prob["fields"]
    if fields is None:
        raise InputError("integrate-geodesic needs a realization (built-in sec4/sec5 or file)")
    G = prob["G"] if prob["G"] is not None else np.eye(alg.n)
    G = G.array if hasattr(G, "array") else np.asarray(G, dtype=float)
    m = fields.dim_m
    if args.z0:
        z0 = _float_list(args.z0, "--z0")
    else:
        z0 = list(np.random.default_rng(args.seed).uniform(-0.5, 0.5, 2 * m))
    if len(z0) != 2 * m:
        raise InputError(f"--z0 needs {2 * m} components")
    traj = integrate_geodesic(fields, G, z0, args.dt, args.T, args.method)
    cols = [f"x{i + 1}" for i in range(m)] + [f"p{i + 1}" for i in range(m)]
    series = {"t": traj.times, **{k: traj.states[:, i] for i, k in enumerate(cols)},
              **traj.monitors}
    path = _write(args, "geodesic.csv", charts.series_csv(series, args.every))
    dH = traj.drift("H")
    resid = triangular_residual(alg, fields, G, z0, dt=1e-4, T=min(args.T, 1.0))
    rows = [battery._below("H drift", dH, args.tol),
            battery._below("Lie-Poisson residual of P(t)", resid, 1e-6,
                           "central differences, step 1e-4")]
    lines = [f"integrate-geodesic {prob['name']} dt={args.dt!r} T={args.T!r} "
             f"method={args.method} z0={[float(v) for v in z0]}", f"wrote {path}"]
    lines += _check_lines(rows)
    _emit(args, lines, {"drift_H": dH, "lie_poisson_residual": resid})
    return 0 if all(r.passed for r in rows) else 1


def cmd_check_transform(args) -> int:
    ex = args.example or "sec4"
    if ex not in ("sec4", "sec5"):
        raise InputError("check-transform supports --example sec4 or sec5")
    rows = battery.run_battery(ex, args.points, args.seed, _alpha(args))
    failed = [r for r in rows if not r.passed]
    lines = [f"check-transform {ex}: {len(rows)} checks, {len(failed)} failed"]
    lines += _check_lines(rows)
    if failed:
        lines.append("failing checks:")
        lines += [f"  {r.name} ({r.note})" if r.note else f"  {r.name}" for r in failed]
    _emit(args, lines, {"checks": len(rows), "failed": len(failed)})
    return 1 if failed else 0


def cmd_reproduce(args) -> int:
    target = args.target
    if target == "figure1":
        res = figure1_report(_alpha(args), dt=args.dt, T=args.T, method=args.method,
                             seed=None if args.seed == 0 else args.seed)
        path = _write(args, "figure1.csv", res.csv_text(args.every))
        rows = [battery._below("K1 relative drift", res.drifts["K1"], 1e-6),
                battery._below("K2 relative drift", res.drifts["K2"], 1e-6),
                battery._below("K3 unwrapped drift", res.drifts["K3_unwrapped"], 1e-6),
                battery.Check("K3 wrapped jumps", float(len(res.jumps)), 1.0,
                              len(res.jumps) >= 1, "count, need >= 1")]
        if res.jumps:
            worst = max(j.residual for j in res.jumps)
            rows.append(battery._below("jump attribution 2pi(n - alpha m)", worst, 1e-4))
        lines = [res.summary(), f"wrote {path}"] + _check_lines(rows)
        kv = {"jumps": len(res.jumps), **{f"drift_{k}": v for k, v in res.drifts.items()}}
    elif target in ("sec4-flow", "sec5-flow"):
        ex = target.split("-")[0]
        rep = charts.reduced_flow_check(ex, dt=args.dt, T=args.T, method=args.method,
                                        alpha=_alpha(args))
        path = _write(args, f"{ex}_flow.csv", charts.series_csv(rep.series, args.every))
        rows = [battery._below(f"drift {k}", v, 1e-6) for k, v in rep.conserved_drift.items()]
        rows += [battery._below(f"reduced vs full {k}", v, 1e-6)
                 for k, v in rep.reduced_vs_full.items()]
        for k, v in rep.tau_deviation.items():
            rows.append(battery._below(f"tau via {k}", v, 1e-6,
                                       "printed" if k in ("T3",) else ""))
        rows.append(battery._below("H drift full flow", rep.H_drift_full, 1e-8))
        rows.append(battery._below("H~ drift reduced flow", rep.H_drift_reduced, 1e-8))
        lines = rep.lines() + [f"wrote {path}"] + _check_lines(rows)
        kv = {**{f"drift_{k}": v for k, v in rep.conserved_drift.items()},
              "drift_H": rep.H_drift_full}
    else:
        raise InputError(f"unknown target {target!r}")
    failed = [r for r in rows if not r.passed]
    if failed:
        lines.append("failing checks:")
        lines += [f"  {r.name}" for r in failed]
    _emit(args, lines, kv)
    return 1 if failed else 0


COMMANDS = {
    "analyze": cmd_analyze,
    "integrate-coalgebra": cmd_integrate_coalgebra,
    "integrate-geodesic": cmd_integrate_geodesic,
    "check-transform": cmd_check_transform,
    "reproduce": cmd_reproduce,
}


def _positive(text):
    v = float(text)
    if not v > 0:
        raise argparse.ArgumentTypeError(f"expected a positive number, got {text}")
    return v


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--example", help="built-in example: sec4, sec5 or heisenberg")
    common.add_argument("--algebra", help="YAML/JSON algebra file")
    common.add_argument("--subalgebra",
                        help="isotropy basis, vectors separated by ';', entries by ','")
    common.add_argument("--output-dir", default=".", help="directory for CSV artifacts")
    common.add_argument("--format", choices=("text", "kv"), default="text")
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--alpha", type=_positive, default=None,
                        help="wild-algebra parameter (default sqrt 2)")
    common.add_argument("--method", choices=("rk4", "midpoint"), default="rk4")
    common.add_argument("--tol", type=_positive, default=1e-6,
                        help="tolerance for conservation checks")
    common.add_argument("--every", type=int, default=1, help="write every k-th sample to CSV")

    p = argparse.ArgumentParser(prog="homflow", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)
    sub.add_parser("analyze", parents=[common], help="classify a homogeneous space")
    for name, dt, T in (("integrate-coalgebra", 1e-3, 10.0), ("integrate-geodesic", 1e-3, 10.0)):
        sp = sub.add_parser(name, parents=[common])
        sp.add_argument("--dt", type=_positive, default=dt)
        sp.add_argument("--T", type=_positive, default=T)
        if name == "integrate-coalgebra":
            sp.add_argument("--P0", help="initial momenta, comma separated")
        else:
            sp.add_argument("--z0", help="initial phase point (x, p), comma separated")
    sp = sub.add_parser("check-transform", parents=[common],
                        help="verify charts, transition functions and reduced Hamiltonians")
    sp.add_argument("--points", type=int, default=100)
    sp = sub.add_parser("reproduce", parents=[common], help="end-to-end reproductions with CSV")
    sp.add_argument("--target", required=True, choices=("sec4-flow", "sec5-flow", "figure1"))
    sp.add_argument("--dt", type=_positive, default=1e-3)
    sp.add_argument("--T", type=_positive, default=None,
                    help="final time (default 100 for figure1, 10 otherwise)")
    return p


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code) if exc.code is not None else 0
    if getattr(args, "T", 0) is None:
        args.T = 100.0 if args.target == "figure1" else 10.0
    if args.every < 1:
        print("error: --every must be >= 1", file=sys.stderr)
        return 2
    try:
        return COMMANDS[args.command](args)
    except (SpecError, InputError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except IntegrationError as exc:
        print(f"error: {exc} (stopped at t={exc.last_time:g})", file=sys.stderr)
        return 1
    except charts.ChartDomainError as exc:
        print(f"error: left the chart domain: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
