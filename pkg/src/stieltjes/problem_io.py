"""Problem files: a declarative JSON schema for whole solver runs.

One document defines named derivators, the initial value problem (initial
state, per-component derivator name and right-hand-side expression, and the
optional ball radius / modulus / weight declarations), solver settings, and
output paths.  Keeping problems declarative makes fixtures diffable and
runs reproducible; there is no scripting in the format.

Schema sketch::

    {
      "version": 1,
      "derivators": {
        "g": {"window": [0, 2], "anchor": 0.0,
               "breakpoints": [0, 2], "slopes": [1], "jumps": [[1, 1]]}
      },
      "problem": {
        "t0": 0.0, "T": 2.0, "x0": [1.0],
        "components": [{"derivator": "g", "rhs": "x1"}],
        "ball_radius": 10.0,                  # optional
        "modulus": {"builtin": "omega_k", "k": 1},   # or {"expr": "t"}
        "phi": "1"                             # optional, expression in t
      },
      "solver": {"method": "euler", "n_steps": 1000,
                  "tol": 1e-10, "max_iter": 100},
      "output": {"trace_csv": "trace.csv", "summary_json": "summary.json"}
    }

Expressions use the `expr` grammar; the rhs sees ``t`` and ``x1..xn``,
while ``phi`` and an expression-defined modulus are unary maps written in
the variable ``t``.  Trace CSV columns are ``t, post_jump, x_1..x_n`` with
one extra ``post_jump = 1`` row per grid point where any component jumps;
floats are written with 17 significant digits so identical runs produce
byte-identical files.
"""

import json
import math
from dataclasses import dataclass

import numpy as np

from .derivator import Derivator
from .errors import ConfigurationError, ExprParseError, ProblemFileError
from .expr import eval_expr, parse
from .moduli import OsgoodModulus, omega_k_modulus
from .solver import IVProblem

__all__ = [
    "LoadedProblem",
    "load_problem_file",
    "load_derivators",
    "parse_modulus_spec",
    "write_trace_csv",
    "trace_csv_text",
]

_SOLVER_DEFAULTS = {"method": "euler", "n_steps": 1000, "tol": 1e-10, "max_iter": 100}


@dataclass
class LoadedProblem:
    problem: IVProblem
    derivators_by_name: dict
    method: str
    n_steps: int
    tol: float
    max_iter: int
    trace_csv: str | None
    summary_json: str | None
    source_path: str


def _fail(where, message):
    raise ProblemFileError(f"{where}: {message}")


def _require(data, key, where, kind=None):
    if key not in data:
        _fail(where, f"missing required key {key!r}")
    value = data[key]
    if kind is not None and not isinstance(value, kind):
        _fail(f"{where}.{key}", f"expected {kind.__name__}, got {type(value).__name__}")
    return value


def _number(data, key, where):
    value = _require(data, key, where)
    if not isinstance(value, (int, float)) or isinstance(value, bool):
        _fail(f"{where}.{key}", "expected a number")
    if not math.isfinite(float(value)):
        _fail(f"{where}.{key}", "must be finite")
    return float(value)


def load_derivators(doc, where="derivators"):
    block = _require(doc, "derivators", "document", dict)
    out = {}
    for name, spec in block.items():
        if not isinstance(spec, dict):
            _fail(f"{where}.{name}", "expected an object")
        try:
            out[name] = Derivator.from_dict(spec)
        except (ConfigurationError, KeyError, TypeError, ValueError) as exc:
            _fail(f"{where}.{name}", str(exc))
    if not out:
        _fail(where, "at least one derivator must be defined")
    return out


def parse_modulus_spec(spec, where="problem.modulus"):
    """Accepts {"builtin": "omega_k", "k": int} or {"expr": "<unary in t>"}."""
    if isinstance(spec, dict) and spec.get("builtin") == "omega_k":
        k = spec.get("k")
        if not isinstance(k, int) or k < 1:
            _fail(where, "omega_k needs an integer k >= 1")
        return omega_k_modulus(k)
    if isinstance(spec, dict) and "expr" in spec:
        try:
            tree = parse(spec["expr"], 0)
        except ExprParseError as exc:
            _fail(where, f"bad modulus expression: {exc}")
        return OsgoodModulus(
            evaluator=lambda s, tree=tree: eval_expr(tree, s, ()),
            name=spec["expr"],
        )
    _fail(where, 'expected {"builtin": "omega_k", "k": ...} or {"expr": "..."}')


def _unary_in_t(src, where):
    try:
        tree = parse(src, 0)
    except ExprParseError as exc:
        _fail(where, f"bad expression: {exc}")
    return lambda t, tree=tree: eval_expr(tree, t, ())


def load_problem_file(path):
    try:
        with open(path, "r", encoding="utf-8") as fh:
            doc = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise ProblemFileError(f"{path}: {exc}") from exc
    if not isinstance(doc, dict):
        raise ProblemFileError(f"{path}: top level must be an object")
    version = doc.get("version", 1)
    if version != 1:
        _fail("version", f"unsupported version {version!r}")

    derivators = load_derivators(doc)

    pb = _require(doc, "problem", "document", dict)
    t0 = _number(pb, "t0", "problem")
    horizon = _number(pb, "T", "problem")
    x0 = _require(pb, "x0", "problem", list)
    if not x0 or not all(isinstance(v, (int, float)) and not isinstance(v, bool) for v in x0):
        _fail("problem.x0", "expected a nonempty list of numbers")
    n = len(x0)

    components = _require(pb, "components", "problem", list)
    if len(components) != n:
        _fail("problem.components", f"expected {n} components to match x0, got {len(components)}")
    comp_derivators = []
    comp_rhs = []
    for i, comp in enumerate(components):
        where = f"problem.components[{i}]"
        if not isinstance(comp, dict):
            _fail(where, "expected an object")
        gname = _require(comp, "derivator", where, str)
        if gname not in derivators:
            _fail(f"{where}.derivator", f"unknown derivator name {gname!r}")
        comp_derivators.append(derivators[gname])
        src = _require(comp, "rhs", where, str)
        try:
            tree = parse(src, n)
        except ExprParseError as exc:
            _fail(f"{where}.rhs", str(exc))
        comp_rhs.append(lambda t, x, tree=tree: eval_expr(tree, t, x))

    ball = pb.get("ball_radius")
    if ball is not None:
        if not isinstance(ball, (int, float)) or isinstance(ball, bool) or ball <= 0:
            _fail("problem.ball_radius", "expected a positive number")
        ball = float(ball)

    modulus = None
    if "modulus" in pb:
        modulus = parse_modulus_spec(pb["modulus"])
    phi = None
    if "phi" in pb:
        if not isinstance(pb["phi"], str):
            _fail("problem.phi", "expected an expression string")
        phi = _unary_in_t(pb["phi"], "problem.phi")

    try:
        problem = IVProblem(
            t0=t0, horizon=horizon, x0=x0,
            derivators=comp_derivators, rhs=comp_rhs,
            ball_radius=ball, modulus=modulus, phi=phi,
        )
    except ConfigurationError as exc:
        raise ProblemFileError(f"problem: {exc}") from exc

    sv = dict(_SOLVER_DEFAULTS)
    sv.update(doc.get("solver", {}))
    method = sv.get("method")
    if method not in ("euler", "picard"):
        _fail("solver.method", f"expected 'euler' or 'picard', got {method!r}")
    n_steps = sv.get("n_steps")
    if not isinstance(n_steps, int) or n_steps < 1:
        _fail("solver.n_steps", "expected an integer >= 1")
    tol = sv.get("tol")
    if not isinstance(tol, (int, float)) or tol <= 0:
        _fail("solver.tol", "expected a positive number")
    max_iter = sv.get("max_iter")
    if not isinstance(max_iter, int) or max_iter < 1:
        _fail("solver.max_iter", "expected an integer >= 1")

    out = doc.get("output", {})
    if not isinstance(out, dict):
        _fail("output", "expected an object")

    return LoadedProblem(
        problem=problem,
        derivators_by_name=derivators,
        method=method,
        n_steps=n_steps,
        tol=float(tol),
        max_iter=max_iter,
        trace_csv=out.get("trace_csv"),
        summary_json=out.get("summary_json"),
        source_path=str(path),
    )


def _fmt(v):
    return format(float(v), ".17g")


def trace_csv_text(trace, problem):
    """Render a trace as CSV: t, post_jump, x_1..x_n.

    Every grid point yields one ``post_jump = 0`` row; grid points where
    any component derivator jumps yield an extra ``post_jump = 1`` row with
    the post-impulse state, immediately after.
    """
    n = problem.n
    jumps_here = np.zeros(trace.grid.size, dtype=bool)
    for g in problem.derivators:
        jumps_here[:-1] |= g.jump(trace.grid[:-1]) > 0.0
    lines = ["t,post_jump," + ",".join(f"x_{i + 1}" for i in range(n))]
    for k, t in enumerate(trace.grid):
        row = ",".join(_fmt(v) for v in trace.values[k])
        lines.append(f"{_fmt(t)},0,{row}")
        if jumps_here[k]:
            row = ",".join(_fmt(v) for v in trace.right_values[k])
            lines.append(f"{_fmt(t)},1,{row}")
    return "\n".join(lines) + "\n"


def write_trace_csv(trace, problem, path):
    text = trace_csv_text(trace, problem)
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(text)
