"""Command-line front end: measures, relation checks, sweeps, sampling, BSA.

Every command accepts ``--seed``, ``--tol``, ``--format json|csv``, ``--out``
and ``--workers``. Numbers are written with 15 significant digits in
lowercase scientific notation, and work items are emitted in input order, so
a run is byte-for-byte reproducible for any worker count.

Exit status is 0 when every input validates and every check passes, 1 when a
check fails and 2 for invalid input.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
import warnings
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass

import numpy as np

from .lewenstein_sanpera import best_separable_approximation, verify_ls
from .measures import NumericalNoiseWarning, measure_set
from .relations import summarize, verify_mems, verify_state
from .states import (
    MAX_QUBITS,
    Form15Params,
    StateValidationError,
    form15_state,
    load_state,
    mems,
    named_state,
    random_mixed,
    random_pure,
    simplex_grid,
    werner,
    werner_grid,
)

EXIT_OK, EXIT_FAILED, EXIT_INVALID = 0, 1, 2


class InputError(Exception):
    """Bad command-line input; reported with exit status 2."""


@dataclass(frozen=True)
class RunConfig:
    seed: int = 0
    tolerance: float | None = None
    output_format: str = "json"
    output_path: str | None = None
    sample_count: int = 1
    worker_count: int = 1

    def __post_init__(self):
        if self.sample_count < 1:
            raise InputError(f"--count must be at least 1, got {self.sample_count}")
        if self.tolerance is not None and not self.tolerance > 0:
            raise InputError(f"--tol must be positive, got {self.tolerance}")
        if self.worker_count < 1:
            raise InputError(f"--workers must be at least 1, got {self.worker_count}")
        if self.output_format not in ("json", "csv"):
            raise InputError(f"unknown format {self.output_format!r}")


# --- number formatting and emitters ----------------------------------------

def fmt_num(x) -> str:
    if isinstance(x, (bool, np.bool_)):
        return "true" if x else "false"
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    x = float(x)
    if not math.isfinite(x):
        raise ValueError(f"cannot serialize non-finite value {x}")
    return f"{x:.14e}"


def _json(o, level: int = 0) -> str:
    pad, inner = "  " * level, "  " * (level + 1)
    if o is None:
        return "null"
    if isinstance(o, str):
        return json.dumps(o)
    if isinstance(o, dict):
        if not o:
            return "{}"
        items = [f"{inner}{json.dumps(str(k))}: {_json(v, level + 1)}" for k, v in o.items()]
        return "{\n" + ",\n".join(items) + "\n" + pad + "}"
    if isinstance(o, (list, tuple)):
        if not o:
            return "[]"
        if all(not isinstance(v, (dict, list, tuple)) for v in o):
            return "[" + ", ".join(_json(v) for v in o) + "]"
        return "[\n" + ",\n".join(inner + _json(v, level + 1) for v in o) + "\n" + pad + "]"
    return fmt_num(o)


def render_json(doc: dict) -> str:
    return _json(doc) + "\n"


def _csv_cell(v) -> str:
    if isinstance(v, str):
        return v
    if isinstance(v, (bool, np.bool_)):
        return "1" if v else "0"
    return fmt_num(v)


def render_csv(columns: list[str], rows: list[list]) -> str:
    lines = [",".join(columns)]
    for row in rows:
        lines.append(",".join(_csv_cell(v) for v in row))
    return "\n".join(lines) + "\n"


@dataclass
class Output:
    doc: dict
    columns: list[str]
    rows: list[list]
    exit_code: int = EXIT_OK
    note: str = ""


def _records_table(records: list[dict]) -> tuple[list[str], list[list]]:
    columns: list[str] = []
    for r in records:
        columns += [k for k in r if k not in columns]
    return columns, [[r.get(c, "") for c in columns] for r in records]


# --- state sources ---------------------------------------------------------

def _floats(args: str, count: int, name: str) -> list[float]:
    parts = [p for p in args.split(",") if p != ""]
    if len(parts) != count:
        raise InputError(f"{name} needs {count} parameter(s), got {args!r}")
    try:
        return [float(p) for p in parts]
    except ValueError:
        raise InputError(f"{name}: could not parse parameters {args!r}") from None


def parse_family(spec: str):
    """State for a ``name:param1[,param2]`` family spec.

    Families: ``werner:lam[,bell]``, ``mems:x1,x2``,
    ``form15:w1,w2,w3,w4,a,e,f`` (``a``, ``e``, ``f`` as Python complex
    literals), ``bell:which``, ``ghz:n``, ``w:n`` and ``basis:bits``.
    """
    name, _, args = spec.partition(":")
    name = name.strip().lower()
    if name == "werner":
        lam, _, which = args.partition(",")
        (lam_v,) = _floats(lam, 1, "werner")
        return werner(lam_v, which or "phi+")
    if name == "mems":
        x1, x2 = _floats(args, 2, "mems")
        return mems(x1, x2)
    if name == "form15":
        parts = args.split(",")
        if len(parts) != 7:
            raise InputError("form15 needs w1,w2,w3,w4,a,e,f")
        try:
            omega = tuple(float(p) for p in parts[:4])
            a, e, f = (complex(p) for p in parts[4:])
        except ValueError:
            raise InputError(f"form15: could not parse parameters {args!r}") from None
        return form15_state(Form15Params(omega, a, e, f))
    try:
        return named_state(spec)
    except ValueError as err:
        raise InputError(str(err)) from None


def _build(item: tuple):
    kind = item[0]
    if kind == "family":
        return parse_family(item[1])
    if kind == "file":
        return load_state(item[1])
    if kind == "random-pure":
        _, n, seed, i = item
        return random_pure(n, (seed, i))
    if kind == "random-mixed":
        _, n, rank, seed, i = item
        return random_mixed(n, rank, (seed, i))
    raise ValueError(f"unknown source {kind!r}")


def _label(item: tuple) -> str:
    if item[0] in ("family", "file"):
        return item[1]
    return f"{item[0]}:{','.join(str(v) for v in item[1:])}"


def _pmap(func, items: list, workers: int) -> list:
    if workers <= 1 or len(items) <= 1:
        return [func(x) for x in items]
    chunk = max(1, len(items) // (8 * workers))
    with ProcessPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(func, items, chunksize=chunk))


# --- measure ---------------------------------------------------------------

def _flat_measures(state) -> dict:
    d = measure_set(state).as_dict()
    per_qubit = d.pop("per_qubit")
    for k, q in enumerate(per_qubit):
        for key, val in q.items():
            d[f"{key}_{k}"] = val
    return d


def cmd_measure(item: tuple, cfg: RunConfig) -> Output:
    state = _build(item)
    flat = _flat_measures(state)
    columns, rows = _records_table([flat])
    return Output({"source": _label(item), "measures": flat}, columns, rows)


# --- verify ----------------------------------------------------------------

@dataclass(frozen=True)
class _VerifyTask:
    item: tuple
    tol: float | None
    relations: tuple[str, ...]
    mems_check: bool

    def __call__(self):
        state = _build(self.item)
        reports = verify_state(state, self.tol)
        if self.mems_check:
            reports.append(verify_mems(state) if self.tol is None else verify_mems(state, self.tol))
        if self.relations:
            reports = [r for r in reports if r.base_id in self.relations]
        return reports


def _run_task(task):
    return task()


def cmd_verify(items: list[tuple], cfg: RunConfig, relations=(), mems_check=False) -> Output:
    tasks = [_VerifyTask(it, cfg.tolerance, tuple(relations), mems_check) for it in items]
    results = _pmap(_run_task, tasks, cfg.worker_count)
    records, flat = [], []
    for i, (item, reps) in enumerate(zip(items, results)):
        for r in reps:
            records.append({"index": i, "source": _label(item)} | r.as_dict())
            flat.append(r)
    summary = summarize(flat)
    columns = ["index", "relation_id", "lhs", "rhs", "residual", "tolerance", "pass"]
    rows = [[rec["index"], rec["relation_id"], rec["lhs"], rec["rhs"], rec["residual"],
             rec["tolerance"], rec["pass"]] for rec in records]
    code = EXIT_OK if summary["passed"] == summary["total"] else EXIT_FAILED
    note = f"{summary['passed']}/{summary['total']} checks passed, max |residual| {fmt_num(summary['max_abs_residual'])}"
    return Output({"reports": records, "summary": summary}, columns, rows, code, note)


# --- sweep -----------------------------------------------------------------

def _sweep_row(params: tuple) -> dict:
    family, values = params
    state = werner(values[0]) if family == "werner" else mems(*values)
    ms = measure_set(state)
    names = ("lambda",) if family == "werner" else ("x1", "x2")
    row = dict(zip(names, values))
    row |= {
        "M": ms.mixedness,
        "tr_rho_rhotilde": ms.tr_rho_rhotilde,
        "I": ms.indistinguishability,
        "tau": ms.tangle,
        "eta": ms.separable_uncertainty,
        "s2bar_1": ms.per_qubit[0].s2bar,
        "s2bar_2": ms.per_qubit[1].s2bar,
        "ppt_min_eig": ms.ppt_min_eig,
    }
    return row


def cmd_sweep(family: str, step: float, cfg: RunConfig) -> Output:
    try:
        if family == "werner":
            grid = [(lam,) for lam in werner_grid(step)]
        elif family == "mems":
            grid = simplex_grid(step)
        else:
            raise InputError(f"sweep supports werner and mems, got {family!r}")
    except ValueError as err:
        raise InputError(str(err)) from None
    rows = _pmap(_sweep_row, [(family, g) for g in grid], cfg.worker_count)
    columns, table = _records_table(rows)
    return Output({"family": family, "step": step, "rows": rows}, columns, table)


# --- sample ----------------------------------------------------------------

@dataclass(frozen=True)
class _SampleTask:
    item: tuple
    tol: float | None

    def __call__(self):
        state = _build(self.item)
        ms = measure_set(state)
        row = {
            "M": ms.mixedness,
            "tr_rho_rhotilde": ms.tr_rho_rhotilde,
            "I": ms.indistinguishability,
        }
        if ms.tangle is not None:
            row |= {"tau": ms.tangle, "eta": ms.separable_uncertainty}
        for k, q in enumerate(ms.per_qubit):
            row[f"s2bar_{k}"] = q.s2bar
        reports = verify_state(state, self.tol)
        for r in reports:
            row[f"{r.relation_id}_residual"] = r.residual
        return row, reports


def cmd_sample(n: int, count: int, rank: int | None, pure: bool, cfg: RunConfig) -> Output:
    if not 1 <= n <= MAX_QUBITS:
        raise InputError(f"--n must be in 1..{MAX_QUBITS}, got {n}")
    if pure:
        items = [("random-pure", n, cfg.seed, i) for i in range(count)]
    else:
        r = 2**n if rank is None else rank
        if not 1 <= r <= 2**n:
            raise InputError(f"--rank must be in 1..{2**n}, got {r}")
        items = [("random-mixed", n, r, cfg.seed, i) for i in range(count)]
    results = _pmap(_run_task, [_SampleTask(it, cfg.tolerance) for it in items], cfg.worker_count)
    rows, reports = [], []
    for i, (row, reps) in enumerate(results):
        rows.append({"index": i} | row)
        reports += reps
    summary = summarize(reports)
    per_relation: dict[str, dict] = {}
    for r in reports:
        s = per_relation.setdefault(r.relation_id, {"max_abs_residual": 0.0, "min_residual": r.residual})
        s["max_abs_residual"] = max(s["max_abs_residual"], abs(r.residual))
        s["min_residual"] = min(s["min_residual"], r.residual)
    summary["per_relation"] = per_relation
    columns, table = _records_table(rows)
    code = EXIT_OK if summary["passed"] == summary["total"] else EXIT_FAILED
    note = f"{summary['passed']}/{summary['total']} checks passed, max |residual| {fmt_num(summary['max_abs_residual'])}"
    return Output({"samples": rows, "summary": summary}, columns, table, code, note)


# --- bsa -------------------------------------------------------------------

def cmd_bsa(item: tuple, budget: int, method: str, cfg: RunConfig) -> Output:
    state = _build(item)
    if state.n_qubits != 2:
        raise InputError(f"bsa needs a two-qubit state, got {state.n_qubits} qubits")
    lsd = best_separable_approximation(state, budget=budget, seed=cfg.seed, method=method)
    kw = {} if cfg.tolerance is None else {"tol": cfg.tolerance, "optimality_tol": cfg.tolerance}
    reports = verify_ls(state, lsd, **kw)
    summary = summarize(reports)
    row = {"lambda": lsd.lam} | dict(lsd.certificates) | {"converged": lsd.converged}
    for r in reports:
        row[f"{r.relation_id}_residual"] = r.residual
    columns, table = _records_table([row])
    code = EXIT_OK if summary["passed"] == summary["total"] else EXIT_FAILED
    doc = {
        "source": _label(item),
        "decomposition": lsd.as_dict(),
        "reports": [r.as_dict() for r in reports],
        "summary": summary,
    }
    return Output(doc, columns, table, code)


# --- argument parsing ------------------------------------------------------

def _common() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(add_help=False)
    p.add_argument("--seed", type=int, default=0, help="base seed for random streams")
    p.add_argument("--tol", type=float, default=None, help="override check tolerances")
    p.add_argument("--format", choices=("json", "csv"), default="json")
    p.add_argument("--out", default=None, help="write output here instead of stdout")
    p.add_argument("--workers", type=int, default=1, help="worker processes")
    return p


def _add_source(p: argparse.ArgumentParser, required: bool = True) -> None:
    g = p.add_mutually_exclusive_group(required=required)
    g.add_argument("--family", help="family spec such as werner:0.5 or bell:phi+")
    g.add_argument("--file", help="state file (JSON)")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="complementarity",
        description="Complementarity measures and relations for qubit states.",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    common = _common()

    p = sub.add_parser("measure", parents=[common], help="every measure for one state")
    _add_source(p)

    p = sub.add_parser("verify", parents=[common], help="check relations on states")
    g = p.add_mutually_exclusive_group(required=True)
    g.add_argument("--family", help="family spec, or werner/mems together with --grid")
    g.add_argument("--file", help="state file (JSON)")
    g.add_argument("--random-pure", type=int, metavar="N", help="random pure states of N qubits")
    g.add_argument("--random-mixed", type=int, metavar="N", help="random mixed states of N qubits")
    p.add_argument("--grid", type=float, help="grid step for a werner or mems sweep")
    p.add_argument("--count", type=int, default=1, help="number of random states")
    p.add_argument("--rank", type=int, help="rank for --random-mixed (default full)")
    p.add_argument("--relation", action="append", default=[], help="restrict to a relation id")

    p = sub.add_parser("sweep", parents=[common], help="tabulate a family over a grid")
    p.add_argument("--family", required=True, choices=("werner", "mems"))
    p.add_argument("--step", type=float, default=0.05)

    p = sub.add_parser("sample", parents=[common], help="Monte Carlo relation residuals")
    p.add_argument("--n", type=int, required=True, help="qubit count")
    p.add_argument("--count", type=int, default=100)
    g = p.add_mutually_exclusive_group()
    g.add_argument("--rank", type=int, help="rank of the random density matrices")
    g.add_argument("--pure", action="store_true", help="sample pure states")

    p = sub.add_parser("bsa", parents=[common], help="best separable approximation")
    _add_source(p)
    p.add_argument("--budget", type=int, default=64, help="restarts for the search method")
    p.add_argument("--method", choices=("barrier", "search"), default="barrier")
    return parser


def _verify_items(args) -> tuple[list[tuple], bool]:
    if args.grid is not None:
        if args.family not in ("werner", "mems"):
            raise InputError("--grid needs --family werner or --family mems")
        try:
            if args.family == "werner":
                specs = [f"werner:{lam!r}" for lam in werner_grid(args.grid)]
            else:
                specs = [f"mems:{x1!r},{x2!r}" for x1, x2 in simplex_grid(args.grid)]
        except ValueError as err:
            raise InputError(str(err)) from None
        return [("family", s) for s in specs], args.family == "mems"
    if args.family is not None:
        return [("family", args.family)], args.family.startswith("mems:")
    if args.file is not None:
        return [("file", args.file)], False
    if args.random_pure is not None:
        n = args.random_pure
        if not 1 <= n <= MAX_QUBITS:
            raise InputError(f"--random-pure must be in 1..{MAX_QUBITS}")
        return [("random-pure", n, args.seed, i) for i in range(args.count)], False
    n = args.random_mixed
    if not 1 <= n <= MAX_QUBITS:
        raise InputError(f"--random-mixed must be in 1..{MAX_QUBITS}")
    rank = 2**n if args.rank is None else args.rank
    if not 1 <= rank <= 2**n:
        raise InputError(f"--rank must be in 1..{2**n}")
    return [("random-mixed", n, rank, args.seed, i) for i in range(args.count)], False


def run(argv=None) -> int:
    args = build_parser().parse_args(argv)
    # clipping is reported through the eta_clipped field instead
    warnings.simplefilter("ignore", NumericalNoiseWarning)
    try:
        cfg = RunConfig(
            seed=args.seed,
            tolerance=args.tol,
            output_format=args.format,
            output_path=args.out,
            sample_count=getattr(args, "count", 1),
            worker_count=args.workers,
        )
        source = None
        if args.command in ("measure", "bsa"):
            source = ("family", args.family) if args.family else ("file", args.file)
        if args.command == "measure":
            out = cmd_measure(source, cfg)
        elif args.command == "verify":
            items, mems_check = _verify_items(args)
            out = cmd_verify(items, cfg, args.relation, mems_check)
        elif args.command == "sweep":
            out = cmd_sweep(args.family, args.step, cfg)
        elif args.command == "sample":
            out = cmd_sample(args.n, cfg.sample_count, args.rank, args.pure, cfg)
        else:
            out = cmd_bsa(source, args.budget, args.method, cfg)
    except StateValidationError as err:
        print(f"error: invalid state: {err}", file=sys.stderr)
        return EXIT_INVALID
    except (InputError, ValueError, OSError) as err:
        print(f"error: {err}", file=sys.stderr)
        return EXIT_INVALID

    text = render_json(out.doc) if cfg.output_format == "json" else render_csv(out.columns, out.rows)
    if cfg.output_path:
        with open(cfg.output_path, "w", newline="\n") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    if out.note:
        print(out.note, file=sys.stderr)
    return out.exit_code


def main() -> None:
    sys.exit(run())
