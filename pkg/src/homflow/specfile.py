"""Reading algebra, subalgebra, metric and realization descriptions from YAML/JSON files.

Example::

    dim: 5
    params: {alpha: sqrt(2)}
    brackets:
      - [1, 2, 3, "1"]
      - [1, 4, 5, "alpha^2"]
    subalgebra: [[1, 0, 0, 0, 0]]
    metric: [[1, 0, 0, 0, 0], ...]

Values are rational literals (``p/q``, decimals) or arithmetic expressions in
the declared parameters.  The algebra runs in exact mode iff every value
evaluates to a rational number.
"""

from __future__ import annotations

import ast
import math
import operator
from fractions import Fraction
from pathlib import Path

import yaml

from .homspace import MetricForm, SubalgebraSpec
from .lie_core import LieAlgebra
from .poly import Polynomial
from .realization import PolyVectorField


class SpecError(ValueError):
    """Malformed input file; the message names the offending field."""


_BINOPS = {ast.Add: operator.add, ast.Sub: operator.sub, ast.Mult: operator.mul,
           ast.Div: operator.truediv, ast.Pow: operator.pow}


def _sqrt(x):
    if isinstance(x, (int, Fraction)) and x >= 0:
        x = Fraction(x)
        n, d = math.isqrt(x.numerator), math.isqrt(x.denominator)
        if n * n == x.numerator and d * d == x.denominator:
            return Fraction(n, d)
    return math.sqrt(x)


_FUNCS = {"sqrt": _sqrt}


def evaluate(expr, params: dict | None = None, where: str = "value"):
    """Evaluate a scalar expression; rational inputs stay ``Fraction``.

    ``^`` means power.  Only numbers, declared names, ``+ - * / ^`` and
    ``sqrt`` are accepted.
    """
    params = params or {}
    if isinstance(expr, bool):
        raise SpecError(f"{where}: boolean is not a number")
    if isinstance(expr, int):
        return Fraction(expr)
    if isinstance(expr, float):
        return Fraction(repr(expr))
    if not isinstance(expr, str):
        raise SpecError(f"{where}: expected a number or expression, got {expr!r}")
    src = expr.replace("^", "**")
    try:
        tree = ast.parse(src, mode="eval")
    except SyntaxError as exc:
        raise SpecError(f"{where}: cannot parse {expr!r}") from exc

    def ev(node):
        if isinstance(node, ast.Expression):
            return ev(node.body)
        if isinstance(node, ast.Constant) and isinstance(node.value, (int, float)) \
                and not isinstance(node.value, bool):
            return Fraction(ast.get_source_segment(src, node) or repr(node.value))
        if isinstance(node, ast.Name):
            if node.id not in params:
                raise SpecError(f"{where}: unknown name {node.id!r}")
            return params[node.id]
        if isinstance(node, ast.UnaryOp) and isinstance(node.op, (ast.USub, ast.UAdd)):
            v = ev(node.operand)
            return -v if isinstance(node.op, ast.USub) else v
        if isinstance(node, ast.BinOp) and type(node.op) in _BINOPS:
            a, b = ev(node.left), ev(node.right)
            if isinstance(node.op, ast.Pow) and isinstance(b, Fraction):
                b = int(b) if b.denominator == 1 else float(b)
            try:
                return _BINOPS[type(node.op)](a, b)
            except ZeroDivisionError as exc:
                raise SpecError(f"{where}: division by zero in {expr!r}") from exc
        if (isinstance(node, ast.Call) and isinstance(node.func, ast.Name)
                and node.func.id in _FUNCS and len(node.args) == 1 and not node.keywords):
            return _FUNCS[node.func.id](ev(node.args[0]))
        raise SpecError(f"{where}: unsupported syntax in {expr!r}")

    return ev(tree)


def load_document(path) -> dict:
    path = Path(path)
    try:
        text = path.read_text()
    except OSError as exc:
        raise SpecError(f"{path}: {exc.strerror}") from exc
    try:
        doc = yaml.safe_load(text)
    except yaml.YAMLError as exc:
        mark = getattr(exc, "problem_mark", None)
        loc = f" line {mark.line + 1}" if mark else ""
        raise SpecError(f"{path}:{loc} not valid YAML/JSON") from exc
    if not isinstance(doc, dict):
        raise SpecError(f"{path}: top level must be a mapping")
    return doc


def parse_params(doc: dict) -> dict:
    raw = doc.get("params") or {}
    if not isinstance(raw, dict):
        raise SpecError("params: expected a mapping of names to values")
    params = {}
    for name, value in raw.items():
        params[str(name)] = evaluate(value, params, f"params.{name}")
    return params


def parse_algebra(doc: dict, name: str = "") -> LieAlgebra:
    if "dim" not in doc:
        raise SpecError("dim: missing")
    n = doc["dim"]
    if not isinstance(n, int) or isinstance(n, bool) or n <= 0:
        raise SpecError(f"dim: expected a positive integer, got {n!r}")
    params = parse_params(doc)
    records = doc.get("brackets") or []
    if not isinstance(records, list):
        raise SpecError("brackets: expected a list of [A, B, C, value] records")
    flat = []
    for k, rec in enumerate(records):
        where = f"brackets[{k}]"
        if isinstance(rec, dict):
            try:
                rec = [rec["A"], rec["B"], rec["C"], rec["value"]]
            except KeyError as exc:
                raise SpecError(f"{where}: missing field {exc.args[0]}") from exc
        if not isinstance(rec, (list, tuple)) or len(rec) != 4:
            raise SpecError(f"{where}: expected [A, B, C, value]")
        a, b, c, v = rec
        for label, idx in (("A", a), ("B", b), ("C", c)):
            if not isinstance(idx, int) or isinstance(idx, bool) or not 1 <= idx <= n:
                raise SpecError(f"{where}.{label}: index {idx!r} outside 1..{n}")
        flat.append((a, b, c, evaluate(v, params, f"{where}.value")))
    try:
        return LieAlgebra.from_brackets(n, flat, name=name)
    except ValueError as exc:
        raise SpecError(f"brackets: {exc}") from exc


def _vector(v, n, params, where):
    if not isinstance(v, list) or len(v) != n:
        raise SpecError(f"{where}: expected a list of {n} numbers")
    return [evaluate(c, params, f"{where}[{i}]") for i, c in enumerate(v)]


def parse_subalgebra(doc: dict, alg: LieAlgebra, override=None) -> SubalgebraSpec | None:
    raw = override if override is not None else doc.get("subalgebra")
    if raw is None:
        return None
    params = parse_params(doc)
    vecs = [_vector(v, alg.n, params, f"subalgebra[{i}]") for i, v in enumerate(raw)]
    try:
        return SubalgebraSpec(alg, vecs)
    except ValueError as exc:
        raise SpecError(f"subalgebra: {exc}") from exc


def parse_metric(doc: dict, n: int) -> MetricForm | None:
    raw = doc.get("metric")
    if raw is None:
        return None
    params = parse_params(doc)
    if not isinstance(raw, list) or len(raw) != n:
        raise SpecError(f"metric: expected {n} rows")
    rows = [_vector(r, n, params, f"metric[{i}]") for i, r in enumerate(raw)]
    try:
        return MetricForm(rows)
    except ValueError as exc:
        raise SpecError(f"metric: {exc}") from exc


def parse_realization(doc: dict, n: int) -> PolyVectorField | None:
    """``realization: {dim_m: m, fields: [[[[multi-index], coeff], ...] per coordinate] per generator]}``."""
    raw = doc.get("realization")
    if raw is None:
        return None
    params = parse_params(doc)
    m = raw.get("dim_m")
    comps = raw.get("fields")
    if not isinstance(m, int) or not isinstance(comps, list) or len(comps) != n:
        raise SpecError(f"realization: need integer dim_m and {n} generator entries")
    out = []
    for A, gen in enumerate(comps):
        if not isinstance(gen, list) or len(gen) != m:
            raise SpecError(f"realization.fields[{A}]: expected {m} coordinate lists")
        coords = []
        for a, monos in enumerate(gen):
            terms = []
            for k, item in enumerate(monos):
                where = f"realization.fields[{A}][{a}][{k}]"
                if not isinstance(item, list) or len(item) != 2 or len(item[0]) != m:
                    raise SpecError(f"{where}: expected [[{m} exponents], coefficient]")
                terms.append((tuple(item[0]), evaluate(item[1], params, where)))
            coords.append(terms)
        out.append(coords)
    try:
        return PolyVectorField.from_components(m, out)
    except ValueError as exc:
        raise SpecError(f"realization: {exc}") from exc


__all__ = ["SpecError", "evaluate", "load_document", "parse_algebra", "parse_subalgebra",
           "parse_metric", "parse_realization", "Polynomial"]
