"""Command-line front end.

Exit codes: 0 success, 1 a verification failed, 2 unparsable input,
3 precondition or dimension violation, 4 numerical failure.
"""
from __future__ import annotations

import argparse
import json
import math
import os
import sys
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Callable, Sequence

import numpy as np

from .betti_combinatorics import (
    verify_grassmann_split,
    verify_group_decomposition,
    verify_symmetric_space_decompositions,
)
from .errors import (
    ConvergenceError,
    DimensionError,
    IndeterminateError,
    PreconditionError,
    SingularityError,
)
from .group_flow import closed_flow, numeric_flow, polar_via_flow
from .matrix_core import (
    Field,
    GroupSpec,
    Mat,
    as_field,
    mat_from_obj,
    mat_to_obj,
    random_element,
)
from .morse_analysis import critical_sweep
from .schubert_cells import CellID, classify, flow_limit
from .sphere_volterra import SpherePoint, integrate_sphere_flow, random_sphere_point
from .tolerances import DEFAULT_TOL, Tolerances

EXIT_OK, EXIT_FAIL, EXIT_PARSE, EXIT_PRECONDITION, EXIT_NUMERICAL = 0, 1, 2, 3, 4
SEED_ENV = "MORSEFLOW_SEED"
_GROUP_FIELD = {"O": Field.R, "U": Field.C, "Sp": Field.H}


class InputError(Exception):
    """Unparsable command-line input (exit code 2)."""


@dataclass
class RunConfig:
    seed: int = 0
    tol: Tolerances = DEFAULT_TOL
    output: str | None = None
    format: str = "json"
    overrides: dict[str, float] = field(default_factory=dict)


# --------------------------------------------------------------------------
# output

def _fmt(v: float) -> str:
    if not math.isfinite(v):
        raise InputError(f"refusing to emit non-finite number {v!r}")
    return format(v, ".17g")


def dumps(obj: Any) -> str:
    """JSON with every float written to 17 significant digits."""
    if isinstance(obj, bool) or obj is None:
        return json.dumps(obj)
    if isinstance(obj, (int, np.integer)):
        return str(int(obj))
    if isinstance(obj, (float, np.floating)):
        return _fmt(float(obj))
    if isinstance(obj, str):
        return json.dumps(obj)
    if isinstance(obj, dict):
        return "{" + ", ".join(f"{json.dumps(str(k))}: {dumps(v)}" for k, v in obj.items()) + "}"
    if isinstance(obj, (list, tuple, np.ndarray)):
        return "[" + ", ".join(dumps(v) for v in obj) + "]"
    raise TypeError(f"cannot serialize {type(obj).__name__}")


def _emit(text: str, cfg: RunConfig) -> None:
    if not text.endswith("\n"):
        text += "\n"
    if cfg.output:
        Path(cfg.output).write_text(text)
    else:
        sys.stdout.write(text)


def _records_csv(records: list[dict], columns: list[str]) -> str:
    lines = [",".join(columns)]
    for r in records:
        cells = []
        for c in columns:
            v = r[c]
            if isinstance(v, (list, tuple)):
                cells.append('"' + " ".join(_cell(x) for x in v) + '"')
            else:
                cells.append(_cell(v))
        lines.append(",".join(cells))
    return "\n".join(lines) + "\n"


def _cell(v: Any) -> str:
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, (float, np.floating)):
        return _fmt(float(v))
    return str(v)


# --------------------------------------------------------------------------
# input

def _read_text(spec: str) -> str:
    if spec.startswith("@"):
        try:
            return Path(spec[1:]).read_text()
        except OSError as exc:
            raise InputError(f"cannot read {spec[1:]}: {exc}") from None
    return spec


def parse_matrix(spec: str, field_hint: Field | None = None) -> Mat:
    """Matrix JSON text, @path to a JSON file, or the shorthand diag:a,b,c."""
    if spec.startswith("diag:"):
        try:
            values = [float(v) for v in spec[5:].split(",") if v.strip()]
        except ValueError:
            raise InputError(f"bad diagonal shorthand {spec!r}") from None
        if not values or not all(math.isfinite(v) for v in values):
            raise InputError(f"bad diagonal shorthand {spec!r}")
        return Mat.diag(field_hint or Field.R, values)
    text = _read_text(spec)
    try:
        obj = json.loads(text, parse_constant=_reject)
        if not isinstance(obj, dict):
            raise ValueError("matrix JSON must be an object")
        m = mat_from_obj(obj)
    except (ValueError, TypeError) as exc:
        raise InputError(f"cannot parse matrix: {exc}") from None
    if field_hint is not None and m.field != field_hint:
        raise DimensionError(f"matrix is over {m.field.value}, expected {field_hint.value}")
    return m


def _reject(name: str) -> float:
    raise ValueError(f"non-finite number {name}")


def _parse_tol(items: Sequence[str]) -> dict[str, float]:
    out = {}
    for item in items:
        name, sep, value = item.partition("=")
        if not sep:
            raise InputError(f"--tol expects NAME=VALUE, got {item!r}")
        try:
            out[name.strip()] = float(value)
        except ValueError:
            raise InputError(f"tolerance {name!r} has non-numeric value {value!r}") from None
    return out


def build_config(args: argparse.Namespace) -> RunConfig:
    """Defaults, then the environment seed, then --config, then flags."""
    cfg = RunConfig()
    env = os.environ.get(SEED_ENV)
    if env is not None:
        try:
            cfg.seed = int(env)
        except ValueError:
            raise InputError(f"{SEED_ENV} must be an integer") from None
    overrides: dict[str, float] = {}
    if args.config:
        try:
            obj = json.loads(Path(args.config).read_text())
        except (OSError, ValueError) as exc:
            raise InputError(f"cannot read config {args.config}: {exc}") from None
        if not isinstance(obj, dict):
            raise InputError("config file must hold a JSON object")
        unknown = set(obj) - {"seed", "tol", "output", "format"}
        if unknown:
            raise InputError(f"unknown config keys: {', '.join(sorted(unknown))}")
        cfg.seed = int(obj.get("seed", cfg.seed))
        cfg.output = obj.get("output", cfg.output)
        cfg.format = obj.get("format", cfg.format)
        overrides.update({k: float(v) for k, v in obj.get("tol", {}).items()})
    if args.seed is not None:
        cfg.seed = args.seed
    if args.output is not None:
        cfg.output = args.output
    if args.format is not None:
        cfg.format = args.format
    if cfg.format not in ("json", "csv"):
        raise InputError(f"unknown format {cfg.format!r}")
    overrides.update(_parse_tol(args.tol or []))
    try:
        cfg.tol = DEFAULT_TOL.with_overrides(overrides)
    except KeyError as exc:
        raise InputError(str(exc.args[0])) from None
    cfg.overrides = overrides
    return cfg


# --------------------------------------------------------------------------
# commands

def _field_of(args: argparse.Namespace) -> Field | None:
    if getattr(args, "group", None):
        return _GROUP_FIELD[args.group]
    if getattr(args, "field", None):
        return as_field(args.field)
    return None


def cmd_flow(args: argparse.Namespace, cfg: RunConfig) -> int:
    hint = _field_of(args)
    a = parse_matrix(args.A, hint)
    x0 = parse_matrix(args.X0, a.field) if args.X0 else random_element(
        GroupSpec.for_field(a.field, a.rows), cfg.seed)
    if args.method == "closed":
        x = closed_flow(a, x0, args.t, cfg.tol)
    else:
        x = numeric_flow(a, x0, args.t, args.steps, cfg.tol)
    _emit(dumps(mat_to_obj(x)), cfg)
    return EXIT_OK


def cmd_polar(args: argparse.Namespace, cfg: RunConfig) -> int:
    a = parse_matrix(args.A, _field_of(args))
    j, q = polar_via_flow(a, cfg.tol)
    _emit(dumps({"J": mat_to_obj(j), "Q": mat_to_obj(q),
                 "residual": (j @ q - a).norm()}), cfg)
    return EXIT_OK


def cmd_morse(args: argparse.Namespace, cfg: RunConfig) -> int:
    f = _GROUP_FIELD[args.group]
    a = parse_matrix(args.A, f) if args.A else Mat.diag(f, range(1, args.n + 1))
    if a.rows != args.n:
        raise DimensionError(f"A is {a.rows}x{a.cols}, expected n = {args.n}")
    records = [r.to_obj() for r in critical_sweep(a, cfg.tol)]
    mismatches = sum(1 for r in records
                     if r["signature"][1] != r["index_formula"] or r["signature"][2] != 0)
    if cfg.format == "csv":
        _emit(_records_csv(records, ["eps", "index_formula", "signature", "height_value"]), cfg)
    else:
        _emit(dumps({"group": f"{args.group}({args.n})", "records": records,
                     "mismatches": mismatches}), cfg)
    return EXIT_OK if mismatches == 0 else EXIT_FAIL


def cmd_cells(args: argparse.Namespace, cfg: RunConfig) -> int:
    f = _GROUP_FIELD[args.group]
    a = parse_matrix(args.A, f) if args.A else Mat.diag(f, range(1, args.n + 1))
    if args.X:
        x = parse_matrix(args.X, f)
        _emit(dumps(classify(x, a, cfg.tol).to_obj()), cfg)
        return EXIT_OK
    spec = GroupSpec(args.group, args.n)
    rng = np.random.default_rng(cfg.seed)
    records, mismatches, ambiguous = [], 0, 0
    for _ in range(args.samples):
        x = random_element(spec, int(rng.integers(2**62)))
        try:
            cell = classify(x, a, cfg.tol)
        except IndeterminateError:
            ambiguous += 1
            continue
        lim = flow_limit(a, x, args.t, cfg.tol)
        limit_cell = CellID.of_critical_point(lim.eps) if lim.eps else None
        ok = limit_cell == cell
        mismatches += not ok
        records.append({"cell": cell.to_obj(),
                        "limit": limit_cell.to_obj() if limit_cell else None,
                        "match": ok})
    _emit(dumps({"group": str(spec), "samples": args.samples, "ambiguous": ambiguous,
                 "mismatches": mismatches, "records": records}), cfg)
    return EXIT_OK if mismatches == 0 else EXIT_FAIL


def cmd_homology(args: argparse.Namespace, cfg: RunConfig) -> int:
    if args.check == "group":
        reports = [verify_group_decomposition(args.n, args.field or "R")]
    elif args.check == "symspace":
        reports = verify_symmetric_space_decompositions(args.n)
    else:
        f = args.field or "R"
        pairs = ([(args.n1, args.k)] if args.n1 is not None and args.k is not None else
                 [(n1, k) for n1 in range(args.n + 1) for k in range(args.n + 1)])
        reports = [verify_grassmann_split(args.n, n1, args.n - n1, k, f) for n1, k in pairs]
    failed = [r for r in reports if not r.passed]
    payload = {"check": args.check, "passed": not failed,
               "reports": sorted((r.to_obj() for r in reports), key=lambda o: o["name"])}
    if failed:
        payload["diff"] = {r.name: r.diff().to_obj() for r in failed}
    _emit(dumps(payload), cfg)
    return EXIT_OK if not failed else EXIT_FAIL


def cmd_sphere(args: argparse.Namespace, cfg: RunConfig) -> int:
    f = as_field(args.field)
    if args.X0:
        p0 = SpherePoint(parse_matrix(args.X0, f))
    else:
        p0 = random_sphere_point(args.n, f, cfg.seed)
    traj = integrate_sphere_flow(p0, args.t, args.steps, args.record_every)
    text = traj.to_csv()
    if args.emit:
        Path(args.emit).write_text(text)
    if cfg.format == "csv" or not args.emit:
        _emit(text, cfg)
    else:
        monotone = bool(np.all(np.diff(traj.f) >= -1e-12))
        _emit(dumps({"rows": len(traj.times), "emit": args.emit, "f_monotone": monotone,
                     "final_eigenvalues": traj.eigenvalues[-1]}), cfg)
    return EXIT_OK


# --------------------------------------------------------------------------
# parser

def _common(p: argparse.ArgumentParser) -> None:
    p.add_argument("--seed", type=int, default=None,
                   help=f"random seed (default: ${SEED_ENV} or 0)")
    p.add_argument("--tol", action="append", metavar="NAME=VALUE",
                   help="override a named tolerance; repeatable")
    p.add_argument("--output", default=None, help="write output here instead of stdout")
    p.add_argument("--format", choices=("json", "csv"), default=None)
    p.add_argument("--config", default=None, help="JSON file with seed/tol/output/format")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="morseflow", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("flow", help="flow of a height function on a classical group")
    p.add_argument("--A", required=True, help="matrix JSON, @file, or diag:a,b,...")
    p.add_argument("--X0", help="start point (default: seeded random group element)")
    p.add_argument("--t", type=float, required=True)
    p.add_argument("--method", choices=("closed", "rk4"), default="closed")
    p.add_argument("--steps", type=int, default=2000)
    p.add_argument("--field", choices=("R", "C", "H"))
    p.set_defaults(func=cmd_flow)

    p = sub.add_parser("polar", help="polar decomposition A = JQ via the flow from 0")
    p.add_argument("--A", required=True)
    p.add_argument("--field", choices=("R", "C", "H"))
    p.set_defaults(func=cmd_polar)

    p = sub.add_parser("morse", help="critical points, index formula and Hessian signatures")
    p.add_argument("--group", choices=tuple(_GROUP_FIELD), required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--A", help="height matrix (default diag(1..n))")
    p.set_defaults(func=cmd_morse)

    p = sub.add_parser("cells", help="Schubert cell of a point, or a sampled consistency check")
    p.add_argument("--group", choices=tuple(_GROUP_FIELD), required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--A", help="Morse height matrix (default diag(1..n))")
    p.add_argument("--X", help="classify this point")
    p.add_argument("--samples", type=int, default=100)
    p.add_argument("--t", type=float, default=60.0)
    p.set_defaults(func=cmd_cells)

    p = sub.add_parser("homology", help="exact cell-count identities")
    p.add_argument("--check", choices=("group", "symspace", "split"), required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--field", choices=("R", "C", "H"))
    p.add_argument("--n1", type=int)
    p.add_argument("--k", type=int)
    p.set_defaults(func=cmd_homology)

    p = sub.add_parser("sphere", help="cubic flow on the matrix sphere, CSV trajectory")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--field", choices=("R", "C", "H"), default="R")
    p.add_argument("--t", type=float, required=True)
    p.add_argument("--steps", type=int, default=None, help="default: 100 per unit time")
    p.add_argument("--record-every", type=int, default=1)
    p.add_argument("--X0")
    p.add_argument("--emit", help="write the CSV trajectory here")
    p.set_defaults(func=cmd_sphere)

    for action in sub.choices.values():
        _common(action)
    return parser


_NUMERICAL = (SingularityError, IndeterminateError, ConvergenceError)
_PRECONDITION = (PreconditionError, DimensionError)


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    if getattr(args, "steps", 0) is None:
        args.steps = max(1, int(math.ceil(100 * abs(args.t))))
    handlers: list[tuple[tuple[type, ...], int]] = [
        ((InputError,), EXIT_PARSE),
        (_PRECONDITION, EXIT_PRECONDITION),
        (_NUMERICAL, EXIT_NUMERICAL),
    ]
    func: Callable[[argparse.Namespace, RunConfig], int] = args.func
    try:
        cfg = build_config(args)
        return func(args, cfg)
    except tuple(t for ts, _ in handlers for t in ts) as exc:
        for types, code in handlers:
            if isinstance(exc, types):
                print(f"morseflow: error: {exc}", file=sys.stderr)
                return code
        raise
