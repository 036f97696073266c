"""Command-line front end: run, certify, plotdata, compare.

Manifests are TOML files declaring instances and solver configurations:

    output_dir = "runs"
    seed = 7

    [[instances]]
    name = "logistic_small"
    kind = "logistic"
    reference = "solve"          # optional: pin F*/x* by a tight solve
    [instances.params]
    m = 120
    n = 25
    ridge = 1e-3

    [[solvers]]
    name = "basic_auto"
    mode = "basic"               # basic | line_search | accelerated
    H = "auto"
    grad_tolerance = 1e-9
    max_iterations = 500

Exit codes: 0 success, 1 solver numeric error (or failing armed
certificate for ``certify``), 2 manifest/trace parse error, 3 failing
armed certificate under ``run --strict``.
"""

from __future__ import annotations

import argparse
import os
import sys
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path

try:
    import tomllib
except ModuleNotFoundError:  # Python 3.10
    import tomli as tomllib

import numpy as np

from .benchmarks import build_instance
from .certificates import FAIL, certify_trace, format_table, write_report
from .exceptions import GRNewtonError, InvalidInputError, NumericError, ParseError
from .problems import CompositeProblem
from .solvers import (
    GradRegNewton,
    GradRegNewtonAccelerated,
    GradRegNewtonLineSearch,
    reference_solve,
)
from .trace import Trace

OUTPUT_DIR_ENV = "GRNEWTON_OUT"

EXIT_OK = 0
EXIT_NUMERIC = 1
EXIT_PARSE = 2
EXIT_CERT = 3


@dataclass
class ManifestInstance:
    name: str
    kind: str
    params: dict = field(default_factory=dict)
    x0: list[float] | None = None
    reference: object = None  # "solve" | [F_star, x_star] | None


@dataclass
class ManifestSolver:
    name: str
    mode: str
    options: dict = field(default_factory=dict)


@dataclass
class Manifest:
    instances: list[ManifestInstance]
    solvers: list[ManifestSolver]
    output_dir: str | None = None
    seed: int = 0


def load_manifest(path: str | os.PathLike) -> Manifest:
    path = Path(path)
    if not path.exists():
        raise ParseError(f"manifest not found: {path}")
    try:
        with open(path, "rb") as fh:
            raw = tomllib.load(fh)
    except tomllib.TOMLDecodeError as exc:
        raise ParseError(f"manifest is not valid TOML: {exc}") from exc
    instances = []
    for i, entry in enumerate(raw.get("instances", [])):
        if "kind" not in entry:
            raise ParseError(f"instance #{i} is missing 'kind'")
        params = dict(entry.get("params", {}))
        dataset = params.get("dataset")
        if dataset is not None:
            dataset_path = (path.parent / dataset).resolve()
            if not dataset_path.exists():
                raise ParseError(f"dataset path does not exist: {dataset}")
            params["dataset"] = str(dataset_path)
        instances.append(
            ManifestInstance(
                name=entry.get("name", entry["kind"]),
                kind=entry["kind"],
                params=params,
                x0=entry.get("x0"),
                reference=entry.get("reference"),
            )
        )
    if not instances:
        raise ParseError("manifest declares no instances")
    solvers = []
    for i, entry in enumerate(raw.get("solvers", [])):
        entry = dict(entry)
        mode = entry.pop("mode", "basic")
        name = entry.pop("name", mode)
        solvers.append(ManifestSolver(name=name, mode=mode, options=entry))
    if not solvers:
        solvers = [ManifestSolver(name="basic", mode="basic", options={})]
    return Manifest(
        instances=instances,
        solvers=solvers,
        output_dir=raw.get("output_dir"),
        seed=int(raw.get("seed", 0)),
    )


_SOLVER_CLASSES = {
    "basic": GradRegNewton,
    "line_search": GradRegNewtonLineSearch,
    "accelerated": GradRegNewtonAccelerated,
}

_FLAG_TO_OPTION = {
    "H": "H",
    "H0": "H0",
    "delta": "grad_tolerance",
    "eps": "f_gap_tolerance",
}


def _build_problem(
    inst: ManifestInstance, seed: int, mu: float | None = None, sigma3: float | None = None
) -> CompositeProblem:
    params = dict(inst.params)
    params.setdefault("seed", seed)
    overrides = {}
    for key in ("mu", "sigma3"):
        if key in params:
            overrides[key] = params.pop(key)
    if mu is not None:
        overrides["mu"] = mu
    if sigma3 is not None:
        overrides["sigma3"] = sigma3
    problem = build_instance(inst.kind, **params)
    problem.name = inst.name
    if "mu" in overrides:
        problem.smooth.strong_convexity_mu = float(overrides["mu"])
    if "sigma3" in overrides:
        problem.smooth.uniform_convexity_sigma3 = float(overrides["sigma3"])
    x0 = np.zeros(problem.dim) if inst.x0 is None else np.asarray(inst.x0, float)
    if inst.reference == "solve":
        F_star, x_star = reference_solve(problem, x0=x0)
        problem = problem.with_reference(F_star, x_star)
    elif isinstance(inst.reference, (list, tuple)) and len(inst.reference) == 2:
        problem = problem.with_reference(
            float(inst.reference[0]), np.asarray(inst.reference[1], float)
        )
    return problem


def _make_solver(spec: ManifestSolver, overrides: dict):
    cls = _SOLVER_CLASSES.get(spec.mode)
    if cls is None:
        raise ParseError(f"unknown solver mode {spec.mode!r}")
    options = dict(spec.options)
    for flag, value in overrides.items():
        option = _FLAG_TO_OPTION.get(flag, flag)
        if value is not None and option in cls().get_params():
            options[option] = value
    valid = cls().get_params()
    unknown = set(options) - set(valid)
    if unknown:
        raise ParseError(f"solver {spec.name!r} has unknown options: {sorted(unknown)}")
    if spec.mode == "basic" and options.get("H") not in (None, "auto"):
        options["H"] = float(options["H"])
    return cls(**options)


def _run_single(problem: CompositeProblem, inst: ManifestInstance, spec: ManifestSolver, overrides: dict):
    solver = _make_solver(spec, overrides)
    x0 = np.zeros(problem.dim) if inst.x0 is None else np.asarray(inst.x0, float)
    solver.fit(problem, x0=x0)
    trace = solver.trace_
    certs = certify_trace(trace)
    trace.summary["certificates"] = [c.to_json_dict() for c in certs]
    return trace, certs


def _trace_filename(inst_name: str, solver_name: str) -> str:
    return f"{inst_name}__{solver_name}.trace.jsonl"


def cmd_run(args) -> int:
    try:
        manifest = load_manifest(args.manifest)
    except ParseError as exc:
        print(f"manifest error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    out_dir = Path(
        args.out or manifest.output_dir or os.environ.get(OUTPUT_DIR_ENV, "runs")
    )
    out_dir.mkdir(parents=True, exist_ok=True)
    solver_specs = manifest.solvers
    if args.mode and args.mode != "compare":
        solver_specs = [s for s in manifest.solvers if s.mode == args.mode]
        if not solver_specs:
            solver_specs = [ManifestSolver(name=args.mode, mode=args.mode, options={})]
    compare_mode = args.mode == "compare"
    if compare_mode:
        solver_specs = [
            ManifestSolver(name="basic", mode="basic", options={"max_iterations": 3000}),
            ManifestSolver(
                name="line_search", mode="line_search", options={"max_iterations": 3000}
            ),
            ManifestSolver(
                name="accelerated", mode="accelerated", options={"max_iterations": 600}
            ),
        ]
    overrides = {
        "H": args.H,
        "H0": args.H0,
        "delta": args.delta,
        "eps": args.eps,
    }
    jobs = []
    try:
        for spec in solver_specs:
            _make_solver(spec, overrides)  # fail fast on bad options
        problems = {
            inst.name: _build_problem(inst, manifest.seed, mu=args.mu, sigma3=args.sigma3)
            for inst in manifest.instances
        }
    except (GRNewtonError, ValueError) as exc:
        print(f"manifest error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    for inst in manifest.instances:
        for spec in solver_specs:
            jobs.append((inst, spec))

    def _job(pair):
        inst, spec = pair
        try:
            return _run_single(problems[inst.name], inst, spec, overrides)
        except InvalidInputError as exc:
            # In comparison mode an inapplicable variant (e.g. the
            # accelerated scheme on an instance with L2 = 0) is reported,
            # not fatal; an explicitly requested run still fails.
            if compare_mode:
                return ("skipped", exc)
            return exc
        except (GRNewtonError, np.linalg.LinAlgError) as exc:
            return exc

    results = {}
    failures = []
    with ThreadPoolExecutor(max_workers=max(1, args.workers)) as pool:
        for (inst, spec), outcome in zip(jobs, pool.map(_job, jobs)):
            results[(inst.name, spec.name)] = outcome
            if isinstance(outcome, Exception):
                failures.append((inst.name, spec.name, outcome))
    rows = [("instance", "solver", "iters", "stop", "final |F'|", "armed fails")]
    any_cert_fail = False
    for inst, spec in jobs:
        outcome = results[(inst.name, spec.name)]
        if isinstance(outcome, tuple) and outcome[0] == "skipped":
            rows.append((inst.name, spec.name, "-", f"skipped: {outcome[1]}", "-", "-"))
            continue
        if isinstance(outcome, Exception):
            rows.append((inst.name, spec.name, "-", f"error: {outcome}", "-", "-"))
            continue
        trace, certs = outcome
        n_fail = sum(1 for c in certs if c.verdict == FAIL)
        any_cert_fail = any_cert_fail or n_fail > 0
        trace.write_jsonl(out_dir / _trace_filename(inst.name, spec.name))
        rows.append(
            (
                inst.name,
                spec.name,
                str(trace.summary["n_iterations"]),
                trace.summary["stop_reason"],
                f"{trace.summary['final_g_norm']:.3e}",
                str(n_fail),
            )
        )
    _print_table(rows)
    print(f"traces written to {out_dir}")
    if failures:
        for name, sname, exc in failures:
            print(f"run failed for {name}/{sname}: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    if args.strict and any_cert_fail:
        print("armed certificate failures present (--strict)", file=sys.stderr)
        return EXIT_CERT
    return EXIT_OK


def _print_table(rows) -> None:
    widths = [max(len(str(r[i])) for r in rows) for i in range(len(rows[0]))]
    for i, row in enumerate(rows):
        print("  ".join(str(cell).ljust(widths[j]) for j, cell in enumerate(row)))
        if i == 0:
            print("-" * (sum(widths) + 2 * (len(widths) - 1)))


def cmd_certify(args) -> int:
    target = Path(args.trace)
    if target.is_dir():
        paths = sorted(target.glob("*.trace.jsonl"))
    else:
        paths = [target]
    if not paths:
        print("no trace files found", file=sys.stderr)
        return EXIT_PARSE
    any_fail = False
    for path in paths:
        try:
            trace = Trace.read_jsonl(path)
        except (ParseError, OSError) as exc:
            print(f"cannot read trace {path}: {exc}", file=sys.stderr)
            return EXIT_PARSE
        certs = certify_trace(trace)
        report_path = Path(args.report) if args.report else path.with_suffix(".report.jsonl")
        write_report(certs, report_path)
        print(f"== {path.name}")
        print(format_table(certs))
        print(f"report written to {report_path}")
        recorded = trace.summary.get("certificates")
        if recorded is not None:
            fresh = [c.to_json_dict() for c in certs]
            if fresh != recorded:
                print("warning: recomputed verdicts differ from the recorded run", file=sys.stderr)
        any_fail = any_fail or any(c.verdict == FAIL for c in certs)
    return EXIT_NUMERIC if any_fail else EXIT_OK


_QUANTITIES = ("f_gap", "grad_norm", "A", "H", "i_k")


def cmd_plotdata(args) -> int:
    try:
        trace = Trace.read_jsonl(args.trace)
    except (ParseError, OSError) as exc:
        print(f"cannot read trace: {exc}", file=sys.stderr)
        return EXIT_PARSE
    if args.quantity not in _QUANTITIES:
        print(f"unknown quantity {args.quantity!r}; choose from {_QUANTITIES}", file=sys.stderr)
        return EXIT_PARSE
    lines = [f"# k\t{args.quantity}"]
    F_star = trace.F_star
    for rec in trace.records:
        if args.quantity == "f_gap":
            if F_star is None:
                print("trace has no reference optimum for f_gap", file=sys.stderr)
                return EXIT_PARSE
            value = rec.F_value - F_star
        elif args.quantity == "grad_norm":
            value = rec.g_norm
        elif args.quantity == "A":
            value = rec.A
        elif args.quantity == "H":
            value = rec.H_used
        else:
            value = rec.i_k
        if value is None:
            continue
        lines.append(f"{rec.k}\t{value!r}")
    text = "\n".join(lines) + "\n"
    if args.out:
        Path(args.out).write_text(text, encoding="ascii")
    else:
        sys.stdout.write(text)
    return EXIT_OK


def cmd_compare(args) -> int:
    args.mode = "compare"
    args.strict = False
    return cmd_run(args)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="grnewton",
        description="Gradient-regularized Newton solvers with convergence certificates",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    run_p = sub.add_parser("run", help="run manifest instances and write traces")
    run_p.add_argument("--manifest", required=True)
    run_p.add_argument("--mode", choices=["basic", "line_search", "accelerated", "compare"])
    run_p.add_argument("--H", default=None, help="curvature estimate for basic mode ('auto' allowed)")
    run_p.add_argument("--H0", type=float, default=None, help="line-search floor")
    run_p.add_argument("--delta", type=float, default=None, help="subgradient-norm stop")
    run_p.add_argument("--eps", type=float, default=None, help="objective-gap stop")
    run_p.add_argument("--mu", type=float, default=None, help="override the declared strong-convexity modulus")
    run_p.add_argument("--sigma3", type=float, default=None, help="override the declared cubic lower-growth modulus")
    run_p.add_argument("--out", default=None, help=f"output directory (default: ${OUTPUT_DIR_ENV} or ./runs)")
    run_p.add_argument("--workers", type=int, default=1)
    run_p.add_argument("--strict", action="store_true", help="exit 3 on armed certificate failure")
    run_p.set_defaults(func=cmd_run)

    cert_p = sub.add_parser("certify", help="re-check certificates on stored traces")
    cert_p.add_argument("trace", help="trace file or directory of *.trace.jsonl")
    cert_p.add_argument("--report", default=None)
    cert_p.set_defaults(func=cmd_certify)

    plot_p = sub.add_parser("plotdata", help="emit two-column (k, quantity) data")
    plot_p.add_argument("trace")
    plot_p.add_argument("--quantity", required=True)
    plot_p.add_argument("--out", default=None)
    plot_p.set_defaults(func=cmd_plotdata)

    comp_p = sub.add_parser("compare", help="run basic vs line-search vs accelerated")
    comp_p.add_argument("--manifest", required=True)
    comp_p.add_argument("--H", default=None)
    comp_p.add_argument("--H0", type=float, default=None)
    comp_p.add_argument("--delta", type=float, default=None)
    comp_p.add_argument("--eps", type=float, default=None)
    comp_p.add_argument("--mu", type=float, default=None)
    comp_p.add_argument("--sigma3", type=float, default=None)
    comp_p.add_argument("--out", default=None)
    comp_p.add_argument("--workers", type=int, default=1)
    comp_p.set_defaults(func=cmd_compare)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except NumericError as exc:
        print(f"numeric error: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    except (InvalidInputError, ParseError) as exc:
        print(f"input error: {exc}", file=sys.stderr)
        return EXIT_PARSE


if __name__ == "__main__":
    sys.exit(main())
