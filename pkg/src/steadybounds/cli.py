"""Command-line front end.

Verbs::

    bound       bounds for a list of observables
    sweep       bounds over a parameter grid
    verify      compare bounds with exact steady states of small systems
    export-sdp  write one relaxation in SDPA sparse format
    fixtures    regenerate CSV files of exact expectations

Every CSV starts with a ``# steadybounds <verb> v<CSV_VERSION>`` line followed
by a fixed header.  Floats are written with 12 significant digits so that
identical inputs give byte-identical files.

Exit codes: 0 success, 1 usage or schema error, 2 numerical failure,
3 verification violation, 4 verification inconclusive (oracle failure).
"""
from __future__ import annotations

import argparse
import csv
import io
import math
import os
import sys
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from typing import Dict, List, Optional, Sequence

import numpy as np

from . import __version__
from .lattice import SQUARE_TI, parse_cluster
from .model import ModelSchemaError, builtin_model, load_model, model_from_dict
from .oracle import (OPEN, RING, TORUS, OracleError, exact_steady_states, extremal_expectation, fixture_number,
                     fixture_rows, mean_field_steady, write_fixtures)
from .relaxation import build_cluster_2d, build_nonti_chain, build_ti_1d, observable_from_label, write_sdpa
from .solver import FAILURE, INFEASIBLE, SolverOptions, bound_observable

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_NUMERICAL = 2
EXIT_VIOLATION = 3
EXIT_INCONCLUSIVE = 4

CSV_VERSION = 1
BOUND_HEADER = ["observable", "lower", "upper", "width", "status", "residuals", "gap"]
SWEEP_HEADER = ["parameter", "value"] + BOUND_HEADER + ["message"]
VERIFY_HEADER = ["size", "observable", "exact_lower", "exact_upper", "lower", "upper", "report_margin", "kernel_dim",
                 "result"]
ERROR_STATUS = "error"


class UsageError(Exception):
    """Bad command-line input; reported with exit code 1."""


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


# --------------------------------------------------------------------------
# formatting
# --------------------------------------------------------------------------

def fmt(value) -> str:
    """12 significant digits, no negative zero, ``nan`` for missing values."""
    if value is None:
        return ""
    if isinstance(value, str):
        return value
    v = float(value)
    if not math.isfinite(v):
        return "nan" if math.isnan(v) else ("inf" if v > 0 else "-inf")
    return f"{v + 0.0:.12g}"


def _csv_text(verb: str, header: Sequence[str], rows: Sequence[Sequence]) -> str:
    buf = io.StringIO()
    buf.write(f"# steadybounds {verb} v{CSV_VERSION}\n")
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for r in rows:
        w.writerow([fmt(v) for v in r])
    return buf.getvalue()


def _emit(text: str, out: Optional[str]) -> None:
    if out:
        with open(out, "w", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


# --------------------------------------------------------------------------
# inputs
# --------------------------------------------------------------------------

def parse_params(items: Sequence[str]) -> tuple:
    """``name=value`` items to a dict; bare names are returned separately."""
    fixed: Dict[str, float] = {}
    bare: List[str] = []
    for item in items or []:
        for part in item.split(","):
            part = part.strip()
            if not part:
                continue
            if "=" not in part:
                bare.append(part)
                continue
            name, val = part.split("=", 1)
            try:
                fixed[name.strip()] = float(val)
            except ValueError:
                raise UsageError(f"parameter {name!r}: {val!r} is not a number") from None
    return fixed, bare


def parse_range(text: str) -> List[float]:
    """``a:b:s`` to the inclusive grid ``a, a+s, ...`` up to ``b``."""
    parts = text.split(":")
    if len(parts) != 3:
        raise UsageError(f"--range must look like start:stop:step, got {text!r}")
    try:
        start, stop, step = (float(p) for p in parts)
    except ValueError:
        raise UsageError(f"--range entries must be numbers, got {text!r}") from None
    if step <= 0:
        raise UsageError("--range step must be positive")
    n = math.floor((stop - start) / step + 1e-9) + 1
    return [round(start + i * step, 12) for i in range(max(n, 0))]


def parse_values(text: str) -> List[float]:
    try:
        return [float(v) for v in text.split(",") if v.strip()]
    except ValueError:
        raise UsageError(f"--values must be comma-separated numbers, got {text!r}") from None


def parse_sizes(text: str) -> list:
    out = []
    for tok in text.split(","):
        tok = tok.strip().lower()
        if not tok:
            continue
        try:
            out.append(tuple(int(v) for v in tok.split("x")) if "x" in tok else int(tok))
        except ValueError:
            raise UsageError(f"sizes must be integers or RxC, got {tok!r}") from None
    if not out:
        raise UsageError("no system sizes given")
    return out


def _labels(text: str) -> List[str]:
    labels = [t.strip() for t in text.split(",") if t.strip()]
    if not labels:
        raise UsageError("no observables given")
    return labels


def model_spec(source: str, params: Dict[str, float], jump_coeff: Optional[str] = None) -> dict:
    """Model definition dict from a built-in name or a JSON file."""
    if source.endswith(".json") or os.path.sep in source or os.path.exists(source):
        if jump_coeff:
            raise UsageError("--jump-coeff applies to built-in models only")
        model = load_model(source)
        if params:
            model = model.with_parameters(**params)
        return model.spec
    return builtin_model(source, jump_coeff, **params).spec


@dataclass(frozen=True)
class Relaxation:
    k: Optional[int] = None
    cluster: Optional[str] = None
    open_length: Optional[int] = None

    def describe(self) -> str:
        if self.cluster:
            return f"cluster {self.cluster}"
        if self.open_length:
            return f"open chain N={self.open_length}, k={self.k}"
        return f"k={self.k}"


def _relaxation(args, model) -> Relaxation:
    cluster = getattr(args, "cluster", None)
    open_length = getattr(args, "open", None)
    if model.lattice.kind == SQUARE_TI:
        if not cluster:
            raise UsageError(f"{model.name} is two-dimensional; pass --cluster RxC")
        parse_cluster(cluster)
        return Relaxation(cluster=cluster)
    if cluster:
        raise UsageError("--cluster needs a square-lattice model")
    if not args.k or args.k < 1:
        raise UsageError("pass --k with a positive window size")
    if open_length is not None and open_length < args.k:
        raise UsageError(f"--open {open_length} is shorter than --k {args.k}")
    return Relaxation(k=args.k, open_length=open_length)


def build_problem(model, relax: Relaxation, label: str, site: Optional[int] = None, sense: str = "max"):
    if relax.cluster:
        obs = observable_from_label(label, 2, model.qudit_dim)
        return build_cluster_2d(model, parse_cluster(relax.cluster), obs, label, sense)
    obs = observable_from_label(label, 1, model.qudit_dim)
    if len(obs.support) > relax.k:
        raise ValueError(f"observable {label!r} does not fit in a window of {relax.k} sites")
    if relax.open_length:
        return build_nonti_chain(model, relax.k, relax.open_length, obs, site or 0, _site_label(label, site or 0),
                                 sense)
    return build_ti_1d(model, relax.k, obs, label, sense)


def _site_label(label: str, site: int) -> str:
    return f"{label}@{site}"


def _targets(relax: Relaxation, labels: Sequence[str], sites: Optional[List[int]]) -> List[tuple]:
    if not relax.open_length:
        return [(lab, None) for lab in labels]
    out = []
    for lab in labels:
        last = relax.open_length - len(lab)
        chosen = sites if sites is not None else list(range(last + 1))
        for s in chosen:
            if not 0 <= s <= last:
                raise UsageError(f"site {s} out of range for {lab!r} on {relax.open_length} sites")
            out.append((lab, s))
    return out


# --------------------------------------------------------------------------
# bound rows (picklable task)
# --------------------------------------------------------------------------

@dataclass(frozen=True)
class _Task:
    spec: dict
    relax: Relaxation
    targets: tuple
    tol: float
    backend: str
    strict: bool  # re-raise input errors instead of recording them


def _run_task(task: _Task) -> List[dict]:
    model = model_from_dict(task.spec)
    options = SolverOptions(tol=task.tol, backend=task.backend)
    rows = []
    for label, site in task.targets:
        name = label if site is None else _site_label(label, site)
        t0 = time.perf_counter()
        try:
            res = bound_observable(build_problem(model, task.relax, label, site), options, name)
        except (np.linalg.LinAlgError, ArithmeticError, RuntimeError) as exc:
            # LinAlgError subclasses ValueError, so it is caught first
            rows.append(_error_row(name, f"{type(exc).__name__}: {exc}", time.perf_counter() - t0, FAILURE))
            continue
        except ValueError as exc:
            if task.strict:
                raise
            rows.append(_error_row(name, str(exc), time.perf_counter() - t0))
            continue
        diags = list(res.diagnostics.values())
        resid = max(max(d.primal_residual, d.dual_residual) for d in diags)
        rows.append({
            "observable": name, "lower": res.lower, "upper": res.upper, "width": res.width, "status": res.status,
            "residuals": resid, "gap": max(d.gap for d in diags), "wall_time": time.perf_counter() - t0,
            "message": "", "report_margin": res.report_margin,
        })
    return rows


def _error_row(name: str, message: str, wall: float, status: str = ERROR_STATUS) -> dict:
    nan = float("nan")
    return {"observable": name, "lower": nan, "upper": nan, "width": nan, "status": status, "residuals": nan,
            "gap": nan, "wall_time": wall, "message": message, "report_margin": nan}


def _run_all(tasks: Sequence[_Task], jobs: int) -> List[List[dict]]:
    if jobs > 1 and len(tasks) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            return list(pool.map(_run_task, tasks))
    return [_run_task(t) for t in tasks]


def _exit_for(rows: Sequence[dict]) -> int:
    return EXIT_NUMERICAL if any(r["status"] in (FAILURE, INFEASIBLE) for r in rows) else EXIT_OK


def _bound_cells(row: dict, timing: bool) -> list:
    cells = [row[h] for h in BOUND_HEADER]
    return cells + [row["wall_time"]] if timing else cells


# --------------------------------------------------------------------------
# verbs
# --------------------------------------------------------------------------

def cmd_bound(args) -> int:
    params, bare = parse_params(args.param)
    if bare:
        raise UsageError(f"--param needs name=value, got {bare}")
    spec = model_spec(args.model, params, args.jump_coeff)
    model = model_from_dict(spec)
    relax = _relaxation(args, model)
    targets = _targets(relax, _labels(args.obs), _site_list(args.site))
    chunks = [tuple(targets)] if args.jobs <= 1 else [(t,) for t in targets]
    tasks = [_Task(spec, relax, c, args.tol, args.backend, True) for c in chunks]
    try:
        rows = [r for part in _run_all(tasks, args.jobs) for r in part]
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    header = BOUND_HEADER + (["wall_time"] if args.timing else [])
    _emit(_csv_text("bound", header, [_bound_cells(r, args.timing) for r in rows]), args.out)
    return _exit_for(rows)


def _site_list(text: Optional[str]) -> Optional[List[int]]:
    if text is None:
        return None
    try:
        return [int(v) for v in text.split(",") if v.strip()]
    except ValueError:
        raise UsageError(f"--site must be comma-separated integers, got {text!r}") from None


def cmd_sweep(args) -> int:
    params, bare = parse_params(args.param)
    if len(bare) != 1:
        raise UsageError("sweep needs exactly one bare --param NAME to vary (others as name=value)")
    name = bare[0]
    if (args.range is None) == (args.values is None):
        raise UsageError("give exactly one of --range a:b:s or --values v1,v2,...")
    grid = parse_range(args.range) if args.range is not None else parse_values(args.values)
    if not grid:
        raise UsageError("empty parameter grid")
    labels = _labels(args.obs)
    base = model_from_dict(model_spec(args.model, params, args.jump_coeff))
    if name not in base.parameters:
        raise UsageError(f"model {base.name} has no parameter {name!r}; known: {sorted(base.parameters)}")
    relax = _relaxation(args, base)
    targets = tuple(_targets(relax, labels, _site_list(args.site)))
    tasks = []
    for v in grid:
        spec = model_spec(args.model, {**params, name: v}, args.jump_coeff)
        tasks.append(_Task(spec, relax, targets, args.tol, args.backend, False))
    results = _run_all(tasks, args.jobs)
    rows = []
    for v, part in zip(grid, results):
        for r in part:
            cells = [name, v] + [r[h] for h in BOUND_HEADER] + [r["message"]]
            if args.timing:
                cells.insert(len(cells) - 1, r["wall_time"])
            rows.append(cells)
    header = SWEEP_HEADER[:-1] + (["wall_time"] if args.timing else []) + ["message"]
    _emit(_csv_text("sweep", header, rows), args.out)
    if args.widths:
        names = [r["observable"] for r in results[0]]
        wrows = [[v] + [r["width"] for r in part] for v, part in zip(grid, results)]
        with open(args.widths, "w", newline="") as fh:
            fh.write(_csv_text("widths", [name] + [f"width_{n}" for n in names], wrows))
    flat = [r for part in results for r in part]
    failed = [r for r in flat if r["status"] in (ERROR_STATUS, FAILURE, INFEASIBLE)]
    for r in failed:
        print(f"warning: {r['observable']}: {r['status']} {r['message']}".rstrip(), file=sys.stderr)
    code = _exit_for(flat)
    if code == EXIT_OK and failed:
        return EXIT_USAGE
    return code


def cmd_verify(args) -> int:
    params, bare = parse_params(args.param)
    if bare:
        raise UsageError(f"--param needs name=value, got {bare}")
    spec = model_spec(args.model, params, args.jump_coeff)
    model = model_from_dict(spec)
    labels = _labels(args.obs)
    sizes = parse_sizes(args.N)
    two_d = model.lattice.kind == SQUARE_TI
    geometry = TORUS if two_d else (args.geometry or RING)
    if two_d and args.geometry not in (None, TORUS):
        raise UsageError("square-lattice models are verified on tori")
    if not two_d and geometry == TORUS:
        raise UsageError("chains are verified on rings or open chains")
    args.open = None
    relax = _relaxation(args, model)
    options_tol = args.tol
    ti_cache: Dict[str, dict] = {}
    out_rows, codes = [], set()
    for size in sizes:
        if two_d != isinstance(size, tuple):
            raise UsageError(f"size {size!r} does not match the model's dimension")
        skip = _too_small(size, relax)
        if skip:
            print(f"notice: skipping size {fmt_size(size)}: {skip}", file=sys.stderr)
            for lab in labels:
                out_rows.append([fmt_size(size), lab, "", "", "", "", "", "", "skipped"])
            continue
        try:
            sset = exact_steady_states(model, size, geometry)
        except (OracleError, np.linalg.LinAlgError, RuntimeError) as exc:
            print(f"warning: oracle failed for size {fmt_size(size)}: {exc}", file=sys.stderr)
            codes.add(EXIT_INCONCLUSIVE)
            for lab in labels:
                out_rows.append([fmt_size(size), lab, "", "", "", "", "", "", "inconclusive"])
            continue
        if geometry == OPEN:
            srelax = Relaxation(k=relax.k, open_length=size)
            targets = _targets(srelax, labels, None)
            bounds = _run_task(_Task(spec, srelax, tuple(targets), options_tol, args.backend, True))
        else:
            missing = [lab for lab in labels if lab not in ti_cache]
            if missing:
                got = _run_task(_Task(spec, relax, tuple((lab, None) for lab in missing), options_tol, args.backend,
                                      True))
                ti_cache.update({lab: r for lab, r in zip(missing, got)})
            targets = [(lab, None) for lab in labels]
            bounds = [ti_cache[lab] for lab in labels]
        for (lab, site), b in zip(targets, bounds):
            op = observable_from_label(lab, 2 if two_d else 1, model.qudit_dim)
            if site is None:
                lo, hi = extremal_expectation(sset, op)
            else:
                lo, hi = extremal_expectation(sset, op, averaged=False, anchor=site)
            if b["status"] in (ERROR_STATUS, FAILURE, INFEASIBLE):
                result = "numerical_failure"
                codes.add(EXIT_NUMERICAL)
            elif b["lower"] <= lo and hi <= b["upper"]:
                result = "contained"
            else:
                result = "violation"
                codes.add(EXIT_VIOLATION)
            out_rows.append([fmt_size(size), b["observable"], lo, hi, b["lower"], b["upper"], b["report_margin"],
                             sset.kernel_dim, result])
    _emit(_csv_text("verify", VERIFY_HEADER, out_rows), args.out)
    for code in (EXIT_VIOLATION, EXIT_NUMERICAL, EXIT_INCONCLUSIVE):
        if code in codes:
            return code
    return EXIT_OK


def fmt_size(size) -> str:
    return "x".join(str(v) for v in size) if isinstance(size, tuple) else str(size)


def _too_small(size, relax: Relaxation) -> str:
    if relax.cluster:
        rows, cols = (len({s[0] for s in parse_cluster(relax.cluster)}), len({s[1] for s in parse_cluster(relax.cluster)}))
        if size[0] < rows or size[1] < cols:
            return f"torus smaller than the {relax.cluster} cluster"
        return ""
    if size < relax.k:
        return f"N={size} < k={relax.k}; the bounds only apply for N >= k"
    return ""


def cmd_export(args) -> int:
    params, bare = parse_params(args.param)
    if bare:
        raise UsageError(f"--param needs name=value, got {bare}")
    model = model_from_dict(model_spec(args.model, params, args.jump_coeff))
    relax = _relaxation(args, model)
    labels = _labels(args.obs)
    if len(labels) != 1:
        raise UsageError("export-sdp writes one observable at a time")
    try:
        problem = build_problem(model, relax, labels[0], args.site_index, args.sense)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    write_sdpa(problem, args.out)
    print(f"wrote {args.out}: {problem.n_rows} rows, blocks {[b.dim for b in problem.blocks]}", file=sys.stderr)
    return EXIT_OK


# standard fixture set consumed by the test suite
STANDARD_FIXTURES = [
    ("ising_1d", {}, RING, [4, 5, 6, 7, 8], "X,Y,Z", False),
    ("ising_1d", {}, OPEN, [6], "X,Y,Z", True),
    ("dicke_1d", {"g": 0.25}, RING, [6, 7, 8], "X,Y,Z", False),
    ("dicke_1d", {"g": 1.0}, RING, [6, 7, 8], "X,Y,Z", False),
    ("dicke_1d", {"g": 1.75}, RING, [6, 7, 8], "X,Y,Z", False),
    ("dicke_1d", {"g": 0.0}, RING, [4, 6], "X,Y,Z", False),
    ("dicke_2d", {"g": 1.0}, TORUS, [(3, 2)], "X,Y,Z", False),
]
MEAN_FIELD_G = [0.0, 0.2, 0.6, 1.0, 1.4, 1.8]


def _fixture_job(job) -> list:
    name, params, geometry, sizes, obs, site_resolved = job
    model = builtin_model(name, **params)
    ndim = 2 if model.lattice.kind == SQUARE_TI else 1
    ops = {lab: observable_from_label(lab, ndim, model.qudit_dim) for lab in _labels(obs)}
    return fixture_rows(model, sizes, ops, geometry, site_resolved)


def _mean_field_rows() -> list:
    rows = []
    for g in MEAN_FIELD_G:
        res = mean_field_steady(builtin_model("dicke_2d", g=g))
        for lab, v in zip("XYZ", res.bloch):
            rows.append(["dicke_2d", f"g={g:g};gamma=1", "mean_field", "1", lab, fixture_number(v), fixture_number(v),
                         "1" if res.converged else "0"])
    return rows


def cmd_fixtures(args) -> int:
    if args.model:
        params, bare = parse_params(args.param)
        if bare:
            raise UsageError(f"--param needs name=value, got {bare}")
        if not args.N:
            raise UsageError("--N is required with --model")
        model = model_from_dict(model_spec(args.model, params, args.jump_coeff))
        ndim = 2 if model.lattice.kind == SQUARE_TI else 1
        ops = {lab: observable_from_label(lab, ndim, model.qudit_dim) for lab in _labels(args.obs)}
        geometry = args.geometry if ndim == 1 else TORUS
        rows = fixture_rows(model, parse_sizes(args.N), ops, geometry, geometry == OPEN)
    else:
        if args.jobs > 1:
            with ProcessPoolExecutor(max_workers=args.jobs) as pool:
                parts = list(pool.map(_fixture_job, STANDARD_FIXTURES))
        else:
            parts = [_fixture_job(job) for job in STANDARD_FIXTURES]
        rows = [r for p in parts for r in p] + _mean_field_rows()
    write_fixtures(args.out, rows)
    print(f"wrote {len(rows)} rows to {args.out}", file=sys.stderr)
    return EXIT_OK


# --------------------------------------------------------------------------
# argument parsing
# --------------------------------------------------------------------------

def _common(p: argparse.ArgumentParser, relaxation: bool = True) -> None:
    p.add_argument("--model", required=True, help="built-in name (ising_1d, dicke_1d, dicke_2d) or JSON file")
    p.add_argument("--param", action="append", default=[], metavar="NAME=VALUE",
                   help="parameter override; repeatable or comma-separated")
    p.add_argument("--jump-coeff", default=None, metavar="EXPR", help="jump prefactor for built-in models")
    p.add_argument("--obs", default="X,Y,Z", help="comma-separated Pauli-letter observables (default X,Y,Z)")
    if relaxation:
        p.add_argument("--k", type=int, default=None, help="window size for chains")
        p.add_argument("--cluster", default=None, metavar="RxC", help="cluster for square lattices")
    p.add_argument("--tol", type=float, default=1e-8, help="solver tolerance (default 1e-8)")
    p.add_argument("--backend", choices=["ipm", "cvxpy"], default="ipm")
    p.add_argument("--out", default=None, help="output file (default stdout)")


def make_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="steadybounds", description="Semidefinite bounds on steady-state observables.")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="verb", required=True, parser_class=_Parser)

    p = sub.add_parser("bound", help="bounds for a list of observables")
    _common(p)
    p.add_argument("--open", type=int, default=None, metavar="N", help="open chain of N sites (site-resolved)")
    p.add_argument("--site", default=None, help="sites for --open (default all)")
    p.add_argument("--jobs", type=int, default=1)
    p.add_argument("--timing", action="store_true", help="add a wall_time column")
    p.set_defaults(func=cmd_bound)

    p = sub.add_parser("sweep", help="bounds over a parameter grid")
    _common(p)
    p.add_argument("--range", default=None, metavar="a:b:s", help="inclusive grid for the swept parameter")
    p.add_argument("--values", default=None, help="explicit comma-separated grid")
    p.add_argument("--open", type=int, default=None, metavar="N")
    p.add_argument("--site", default=None)
    p.add_argument("--widths", default=None, metavar="FILE", help="companion CSV of interval widths")
    p.add_argument("--jobs", type=int, default=1)
    p.add_argument("--timing", action="store_true")
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("verify", help="check exact small-system values against the bounds")
    _common(p)
    p.add_argument("--N", required=True, help="sizes, e.g. 5,6,7 or 3x2 for tori")
    p.add_argument("--geometry", choices=[RING, OPEN, TORUS], default=None)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("export-sdp", help="write a relaxation in SDPA sparse format")
    _common(p)
    p.add_argument("--open", type=int, default=None, metavar="N")
    p.add_argument("--site", dest="site_index", type=int, default=0)
    p.add_argument("--sense", choices=["max", "min"], default="max")
    p.set_defaults(func=cmd_export)

    p = sub.add_parser("fixtures", help="regenerate exact-expectation fixtures")
    p.add_argument("--out", required=True)
    p.add_argument("--model", default=None, help="single model instead of the standard set")
    p.add_argument("--param", action="append", default=[])
    p.add_argument("--jump-coeff", default=None)
    p.add_argument("--obs", default="X,Y,Z")
    p.add_argument("--N", default=None)
    p.add_argument("--geometry", choices=[RING, OPEN], default=RING)
    p.add_argument("--jobs", type=int, default=1)
    p.set_defaults(func=cmd_fixtures)
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = make_parser()
    args = parser.parse_args(argv)
    if getattr(args, "verb", None) == "export-sdp" and not args.out:
        parser.error("export-sdp needs --out")
    if getattr(args, "jobs", 1) < 1:
        parser.error("--jobs must be positive")
    try:
        return args.func(args)
    except (UsageError, ModelSchemaError, ValueError, FileNotFoundError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
