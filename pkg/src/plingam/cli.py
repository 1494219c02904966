"""Command-line entry point: simulate | discover | var-discover | metrics | bench.

Exit codes: 0 success, 1 usage, 2 data or I/O error, 3 numeric failure.
"""
from __future__ import annotations

import argparse
import json
import sys
from dataclasses import asdict, dataclass, field
from pathlib import Path


from . import __version__, csvio
from .bench import sweep
from .direct import DirectLingamConfig, fit, to_edges
from .errors import DataError, DimensionMismatchError, LingamError, NumericError
from .metrics import compare_graphs
from .ordering import default_workers
from .preprocess import preprocess
from .simulate import SimSpec, gen_two_level_dag, sample_lingam
from .types import DataMatrix, EdgeSet
from .var import TimeSeries, degree_distribution, fit_varlingam, influence_ranking

EXIT_OK, EXIT_USAGE, EXIT_DATA, EXIT_NUMERIC = 0, 1, 2, 3


class UsageError(Exception):
    """Flags that parse but make no sense together."""


@dataclass
class RunManifest:
    command: str
    config: dict
    input_digest: str | dict | None = None
    artifact_version: str = __version__

    def as_dict(self) -> dict:
        return asdict(self)


@dataclass
class _Report:
    path: Path
    lines: list = field(default_factory=list)

    def add(self, record: dict) -> None:
        self.lines.append(json.dumps(record, sort_keys=True))

    def write(self) -> None:
        self.path.write_text("".join(line + "\n" for line in self.lines), encoding="utf-8")


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _out_dir(path: str) -> Path:
    p = Path(path)
    p.mkdir(parents=True, exist_ok=True)
    return p


def _workers(args) -> int:
    return args.workers if args.workers is not None else default_workers()


def _fit_config(args) -> DirectLingamConfig:
    return DirectLingamConfig(parallel=args.parallel, workers=_workers(args), edge_threshold=args.threshold)


def cmd_simulate(args) -> int:
    if args.dims < 2:
        raise UsageError("--dims must be >= 2 (a causal graph needs two variables)")
    try:
        spec = SimSpec(args.dims, args.samples, args.seed, args.edge_prob, args.noise_low, args.noise_high)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    dag = gen_two_level_dag(spec)
    X = sample_lingam(dag, spec)
    out = _out_dir(args.out_dir)
    csvio.write_table(out / "data.csv", X.var_names, X.values)
    csvio.write_adjacency(out / "truth.csv", X.var_names, dag.weights)
    csvio.write_order(out / "truth_order.txt", dag.order.order)
    report = _Report(out / "manifest.jsonl")
    report.add({"manifest": RunManifest("simulate", asdict(spec)).as_dict()})
    report.write()
    return EXIT_OK


def cmd_discover(args) -> int:
    cfg = _fit_config(args)
    names, values, _ = csvio.read_table(args.input)
    timings: dict = {}
    dag = fit(DataMatrix(values, tuple(names)), cfg, timings=timings)
    out = _out_dir(args.out_dir)
    csvio.write_adjacency(out / "adjacency.csv", names, dag.weights)
    csvio.write_order(out / "order.txt", dag.order.order)
    report = _Report(out / "report.jsonl")
    manifest = RunManifest("discover", asdict(cfg), csvio.file_digest(args.input))
    report.add({
        "manifest": manifest.as_dict(),
        "order": list(dag.order.order),
        "order_names": [names[i] for i in dag.order.order],
        "n_edges": len(to_edges(dag, cfg.edge_threshold)),
        "warnings": list(dag.warnings),
        "timings": timings,
    })
    report.write()
    return EXIT_OK


def cmd_var_discover(args) -> int:
    if args.lag < 1 or args.top < 1:
        raise UsageError("--lag and --top must be >= 1")
    cfg = _fit_config(args)
    names, values, stamps = csvio.read_table(args.input, allow_missing=True, time_column=True)
    values, names, log = preprocess(values, names, stamps, args.interpolate, args.difference)
    ts = TimeSeries(values, var_names=tuple(names))
    model = fit_varlingam(ts, args.lag, cfg)

    out = _out_dir(args.out_dir)
    for tau, B in enumerate(model.matrices()):
        csvio.write_adjacency(out / f"b{tau}.csv", names, B)
    for tau, M in enumerate(model.m_raw, start=1):
        csvio.write_adjacency(out / f"m{tau}.csv", names, M)
    csvio.write_order(out / "order.txt", model.b0.order.order)

    indeg, outdeg = degree_distribution(model.b0, args.threshold)
    deg_lines = ["var,name,in_degree,out_degree\n"]
    deg_lines += [f"{j},{names[j]},{indeg[j]},{outdeg[j]}\n" for j in range(len(names))]
    (out / "degrees.csv").write_text("".join(deg_lines), encoding="utf-8")

    exerting, receiving = influence_ranking(model, args.threshold, args.top, names)
    inf_lines = ["kind,rank,var,name,lag,tag,score\n"]
    for kind, items in (("exerting", exerting), ("receiving", receiving)):
        inf_lines += [
            f"{kind},{r},{it.var},{it.name},{it.lag},{it.tag},{it.score!r}\n"
            for r, it in enumerate(items, start=1)
        ]
    (out / "influence.csv").write_text("".join(inf_lines), encoding="utf-8")

    config = {**asdict(cfg), "lag": args.lag, "threshold": args.threshold, "top": args.top,
              "interpolate": args.interpolate, "difference": args.difference}
    report = _Report(out / "report.jsonl")
    report.add({
        "manifest": RunManifest("var-discover", config, csvio.file_digest(args.input)).as_dict(),
        "preprocessing": asdict(log),
        "variables": names,
        "order": list(model.b0.order.order),
        "in_degree": indeg.tolist(),
        "out_degree": outdeg.tolist(),
        "exerting": [it.tag for it in exerting],
        "receiving": [it.tag for it in receiving],
        "warnings": list(model.b0.warnings),
    })
    report.write()
    return EXIT_OK


def cmd_metrics(args) -> int:
    _, est = csvio.read_adjacency(args.est)
    _, truth = csvio.read_adjacency(args.truth)
    if est.shape != truth.shape:
        raise DimensionMismatchError(
            f"estimate has {est.shape[0]} variables, truth has {truth.shape[0]}"
        )
    rep = compare_graphs(
        EdgeSet.from_weights(est, args.threshold),
        EdgeSet.from_weights(truth, args.truth_threshold),
        est.shape[0],
        args.reversal_cost,
    )
    config = {"threshold": args.threshold, "truth_threshold": args.truth_threshold,
              "reversal_cost": args.reversal_cost}
    digest = {"est": csvio.file_digest(args.est), "truth": csvio.file_digest(args.truth)}
    record = {**rep.as_dict(), "manifest": RunManifest("metrics", config, digest).as_dict()}
    print(json.dumps(record, sort_keys=True))
    return EXIT_OK


def cmd_bench(args) -> int:
    reports = sweep(args.dims, args.samples, args.workers, args.seeds, args.repeats, args.warmup, args.seed)
    lines = []
    for r in reports:
        rec = r.as_record()
        config = {"dims": r.dims, "samples": r.samples, "workers": r.workers, "seed": args.seed,
                  "seeds": args.seeds, "repeats": args.repeats, "warmup": args.warmup}
        rec["manifest"] = RunManifest("bench", config).as_dict()
        lines.append(json.dumps(rec, sort_keys=True) + "\n")
    if args.out:
        Path(args.out).write_text("".join(lines), encoding="utf-8")
    else:
        sys.stdout.write("".join(lines))
    return EXIT_OK


def _add_fit_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--parallel", action="store_true", help="thread-parallel ordering search")
    p.add_argument("--workers", type=int, default=None,
                   help="thread count (default: $PLINGAM_WORKERS or core count)")
    p.add_argument("--threshold", type=float, default=0.05, help="edge threshold on |weight|")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="plingam", description="Linear non-Gaussian causal discovery.")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("simulate", help="two-level DAG data with uniform noise")
    p.add_argument("--dims", type=int, default=10)
    p.add_argument("--samples", type=int, default=10000)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--edge-prob", type=float, default=0.5)
    p.add_argument("--noise-low", type=float, default=0.0)
    p.add_argument("--noise-high", type=float, default=1.0)
    p.add_argument("--out-dir", default=".")
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("discover", help="DirectLiNGAM on a CSV table")
    p.add_argument("input")
    _add_fit_flags(p)
    p.add_argument("--out-dir", default=".")
    p.set_defaults(func=cmd_discover)

    p = sub.add_parser("var-discover", help="VarLiNGAM on a CSV time series")
    p.add_argument("input")
    p.add_argument("--lag", type=int, default=1)
    p.add_argument("--interpolate", action="store_true", help="fill interior gaps linearly in time")
    p.add_argument("--difference", action="store_true", help="take first differences")
    p.add_argument("--top", type=int, default=5)
    _add_fit_flags(p)
    p.add_argument("--out-dir", default=".")
    p.set_defaults(func=cmd_var_discover)

    p = sub.add_parser("metrics", help="compare an estimated adjacency with the truth")
    p.add_argument("est")
    p.add_argument("truth")
    p.add_argument("--threshold", type=float, default=0.05)
    p.add_argument("--truth-threshold", type=float, default=0.0)
    p.add_argument("--reversal-cost", type=int, choices=(1, 2), default=1)
    p.set_defaults(func=cmd_metrics)

    p = sub.add_parser("bench", help="time sequential against parallel fits")
    p.add_argument("--dims", type=int, nargs="+", default=[10])
    p.add_argument("--samples", type=int, nargs="+", default=[10000])
    p.add_argument("--workers", type=int, nargs="+", default=None)
    p.add_argument("--seeds", type=int, default=1)
    p.add_argument("--seed", type=int, default=0, help="first dataset seed")
    p.add_argument("--repeats", type=int, default=5)
    p.add_argument("--warmup", type=int, default=3)
    p.add_argument("--out", default=None, help="write records here instead of stdout")
    p.set_defaults(func=cmd_bench)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.command == "bench" and args.workers is None:
        args.workers = [default_workers()]
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"plingam {args.command}: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except NumericError as exc:
        print(f"plingam {args.command}: numeric failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    except (DataError, LingamError, OSError) as exc:
        print(f"plingam {args.command}: {exc}", file=sys.stderr)
        return EXIT_DATA
    except ValueError as exc:
        print(f"plingam {args.command}: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
