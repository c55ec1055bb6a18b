"""
Command-line interface.

Usage::

    tseqclust dist seqs.jsonl --id-a s1 --id-b s2 --p-e 1 --p-t 0.111 --delta 1 --tau 3.5
    tseqclust average seqs.jsonl --tau 7 --t-max 16 --out center.json
    tseqclust cluster seqs.jsonl --method kmeans --k 5 --tau 7 --t-max 16 --out-dir run/
    tseqclust synth --scenario extra --seed 0 --out extra.jsonl
    tseqclust eval --pred run/assignments.csv --truth extra.labels.csv --merge 1=3
    tseqclust hist seqs.jsonl --assignments run/assignments.csv --bin-width 3 --out hist.csv
    tseqclust repro --experiment extra

Exit codes: 0 success, 1 unreadable input, 2 invalid arguments or failed
precondition, 3 a reproduction did not show the expected outcome.
"""
from __future__ import annotations

import argparse
import logging
import math
import sys
from pathlib import Path

from . import files
from .averaging import TsrConfig, tsr_average
from .clustering import ClusterParams, hac_cluster, kmeans_cluster
from .core import ParseError, ValidationError, barycenter_to_json, embed, parse_sequences, write_sequences
from .evaluation import AGREEMENT, SIZE, confusion_and_kappa, histogram_export, merge_labels
from .experiments import CONVENTIONS, EXPERIMENTS, STANDARD, run_experiment
from .metric import DropDtwParams, Weights, align
from .params import suggest_parameters
from .synth import SCENARIOS, generate

logger = logging.getLogger("tseqclust")

EXIT_INPUT, EXIT_USAGE, EXIT_EXPECTATION = 1, 2, 3


class UsageError(Exception):
    pass


class InputError(Exception):
    pass


def _float(text: str) -> float:
    """Parse a float; ``inf`` is accepted."""
    value = float(text)
    if math.isnan(value):
        raise argparse.ArgumentTypeError("nan is not allowed")
    return value


def _add_metric_flags(p: argparse.ArgumentParser):
    g = p.add_argument_group("metric")
    g.add_argument("--tau", type=_float, help="indifference delay in days; also the matching threshold")
    g.add_argument("--t-max", type=_float, help="largest delay worth pairing; with --tau derives p_e, p_t, delta")
    g.add_argument("--p-e", type=_float, help="weight of the event-type term")
    g.add_argument("--p-t", type=_float, help="weight of the time term")
    g.add_argument("--delta", type=_float, help="drop cost ('inf' disables drops)")
    g.add_argument("--sigma", type=_float, default=math.inf, help="Sakoe-Chiba band width (default: none)")


def resolve_metric(args) -> DropDtwParams:
    """Explicit --p-e/--p-t/--delta win over the values derived from --tau/--t-max."""
    p_e, p_t, delta = 1.0, 1.0, math.inf
    tau = args.tau if args.tau is not None else math.inf
    if args.t_max is not None:
        if args.tau is None:
            raise UsageError("--t-max requires --tau")
        try:
            s = suggest_parameters(args.tau, args.t_max)
        except ValueError as exc:
            raise UsageError(str(exc)) from None
        p_e, p_t, delta = s.p_e, s.p_t, s.delta
    elif args.p_e is None and args.p_t is None and args.delta is None and args.tau is None:
        raise UsageError("give --tau and --t-max, or explicit --p-e/--p-t/--delta")
    if args.p_e is not None:
        p_e = args.p_e
    if args.p_t is not None:
        p_t = args.p_t
    if args.delta is not None:
        delta = args.delta
    try:
        return DropDtwParams(Weights(p_e=p_e, p_t=p_t), delta=delta, sigma=args.sigma, tau=tau)
    except ValueError as exc:
        raise UsageError(str(exc)) from None


def metric_json(m: DropDtwParams) -> dict:
    return {"p_e": m.weights.p_e, "p_t": m.weights.p_t, "delta": m.delta, "sigma": m.sigma, "tau": m.tau}


def _load(path):
    try:
        with open(path, "rb") as fh:
            return parse_sequences(fh)
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc.strerror}") from None
    except (ParseError, ValidationError) as exc:
        raise InputError(f"{path}: {exc}") from None


def _by_id(seqs):
    return {s.id: s for s in seqs}


# --- commands ----------------------------------------------------------------


def cmd_dist(args):
    alphabet, seqs = _load(args.input)
    index = _by_id(seqs)
    for sid in (args.id_a, args.id_b):
        if sid not in index:
            raise UsageError(f"sequence {sid!r} not found in {args.input}")
    metric = resolve_metric(args)
    x, z = embed(index[args.id_a], alphabet), embed(index[args.id_b], alphabet)
    cost, alignment = align(x, z, metric)
    out = {"cost": cost, **alignment.to_json()}
    sys.stdout.write(files.dumps_json(out))
    return 0


def cmd_average(args):
    alphabet, seqs = _load(args.input)
    if args.ids:
        index = _by_id(seqs)
        missing = [i for i in args.ids if i not in index]
        if missing:
            raise UsageError(f"unknown ids: {missing}")
        seqs = [index[i] for i in args.ids]
    if not seqs:
        raise UsageError("no sequence to average")
    metric = resolve_metric(args)
    cfg = TsrConfig(maxit=args.maxit, rng_seed=args.seed)
    res = tsr_average(seqs, alphabet, metric, cfg)
    out = {
        **barycenter_to_json(res.center, alphabet),
        "inertia_trace": res.inertia_trace,
        "iterations_run": res.iterations_run,
        "metric": metric_json(metric),
        "seed": args.seed,
    }
    text = files.dumps_json(out)
    if args.out:
        files.atomic_write_text(args.out, text)
    else:
        sys.stdout.write(text)
    return 0


def _svg_histogram(rows, path):
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    matplotlib.rcParams["svg.hashsalt"] = "tseqclust"
    clusters = sorted({r[0] for r in rows}, key=str)
    types = sorted({r[1] for r in rows})
    fig, axes = plt.subplots(len(clusters), 1, figsize=(8, 2.2 * len(clusters)), squeeze=False, sharex=True)
    for ax, c in zip(axes[:, 0], clusters):
        sub = [r for r in rows if r[0] == c]
        starts = sorted({r[2] for r in sub})
        bottom = {b: 0 for b in starts}
        for t in types:
            counts = {r[2]: r[3] for r in sub if r[1] == t}
            if not counts:
                continue
            xs = sorted(counts)
            ax.bar(xs, [counts[b] for b in xs], bottom=[bottom[b] for b in xs], align="edge", label=t)
            for b in xs:
                bottom[b] += counts[b]
        ax.set_ylabel(f"cluster {c}")
    axes[0, 0].legend(ncol=min(len(types), 6), fontsize="small")
    fig.tight_layout()
    fig.savefig(path, format="svg", metadata={"Date": None})
    plt.close(fig)


def cmd_cluster(args):
    alphabet, seqs = _load(args.input)
    if args.k < 1 or args.k > len(seqs):
        raise UsageError(f"--k must be in [1, {len(seqs)}], got {args.k}")
    metric = resolve_metric(args)
    params = ClusterParams(
        k=args.k,
        metric=metric,
        tsr=TsrConfig(maxit=args.maxit),
        kmeans_max_rounds=args.max_rounds,
        restarts=args.restarts,
        rng_seed=args.seed,
        threads=args.threads,
    )
    algo = hac_cluster if args.method == "hac" else kmeans_cluster
    result = algo(seqs, alphabet, params)

    by_cluster = {c: [] for c in range(result.k)}
    for s in seqs:
        by_cluster[result.assignments[s.id]].append(s)
    hist = histogram_export(by_cluster, alphabet, args.bin_width)
    metrics = {
        "method": args.method,
        "k": args.k,
        "seed": args.seed,
        "restarts": args.restarts,
        "metric": metric_json(metric),
        "total_inertia": result.total_inertia,
        "inertia_trace": result.inertia_trace,
        "cluster_sizes": result.sizes(),
        "n_sequences": len(seqs),
    }
    outputs = {
        "assignments.csv": files.assignments_csv(result.assignments),
        "centroids.json": files.dumps_json([barycenter_to_json(c, alphabet) for c in result.centroids]),
        "metrics.json": files.dumps_json(metrics),
        "histogram.csv": files.histogram_csv(hist),
    }
    out_dir = Path(args.out_dir)
    for name, text in outputs.items():
        files.atomic_write_text(out_dir / name, text)
    if args.svg:
        _svg_histogram(hist, out_dir / "histogram.svg")
    sys.stdout.write(files.dumps_json({"total_inertia": result.total_inertia, "cluster_sizes": result.sizes()}))
    return 0


def cmd_synth(args):
    ds = generate(args.scenario, args.seed, args.n_per_model)
    out = Path(args.out)
    labels_path = Path(args.labels) if args.labels else out.with_suffix(".labels.csv")
    import io

    buf = io.StringIO()
    write_sequences(buf, ds.sequences, ds.alphabet)
    files.atomic_write_text(out, buf.getvalue())
    files.atomic_write_text(labels_path, files.labels_csv(ds.labels))
    return 0


def _parse_merge(items):
    merge = {}
    for item in items or ():
        if "=" not in item:
            raise UsageError(f"--merge expects A=B, got {item!r}")
        a, b = item.split("=", 1)
        # fold the second class into the first
        merge[b.strip()] = a.strip()
    return merge


def cmd_eval(args):
    try:
        pred = files.read_two_column_csv(args.pred, "id", "cluster")
        truth = files.read_two_column_csv(args.truth, "id", "label")
    except OSError as exc:
        raise InputError(str(exc)) from None
    except ValueError as exc:
        raise InputError(str(exc)) from None
    if set(pred) != set(truth):
        raise UsageError("prediction and truth cover different ids")
    truth = merge_labels(truth, _parse_merge(args.merge))
    cm, kappa = confusion_and_kappa(truth, pred, matching=args.matching)
    metrics = {
        "kappa": kappa,
        "matching": args.matching,
        "confusion": cm.counts.tolist(),
        "classes": [str(c) for c in cm.classes],
        "clusters": [None if c is None else str(c) for c in cm.columns],
        "n": cm.total,
    }
    if args.out_dir:
        out_dir = Path(args.out_dir)
        files.atomic_write_text(out_dir / "eval_metrics.json", files.dumps_json(metrics))
        files.atomic_write_text(out_dir / "confusion.csv", files.confusion_csv(cm))
    sys.stdout.write(files.dumps_json(metrics))
    return 0


def cmd_hist(args):
    alphabet, seqs = _load(args.input)
    if args.assignments:
        try:
            assignments = files.read_two_column_csv(args.assignments, "id", "cluster")
        except (OSError, ValueError) as exc:
            raise InputError(str(exc)) from None
        missing = [s.id for s in seqs if s.id not in assignments]
        if missing:
            raise UsageError(f"{len(missing)} sequences have no cluster, e.g. {missing[0]!r}")
    else:
        assignments = {s.id: "0" for s in seqs}
    if not args.bin_width > 0:
        raise UsageError("--bin-width must be positive")
    by_cluster = {}
    for s in seqs:
        by_cluster.setdefault(assignments[s.id], []).append(s)
    rows = histogram_export(by_cluster, alphabet, args.bin_width)
    text = files.histogram_csv(rows)
    if args.out:
        files.atomic_write_text(args.out, text)
    else:
        sys.stdout.write(text)
    if args.svg:
        _svg_histogram(rows, args.svg)
    return 0


def cmd_repro(args):
    summary = run_experiment(args.experiment, args.seed, args.threads, args.convention)
    text = files.dumps_json(summary)
    if args.out:
        files.atomic_write_text(args.out, text)
    sys.stdout.write(text)
    return 0 if summary["passed"] else EXIT_EXPECTATION


# --- parser --------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="tseqclust", description="Drop-DTW clustering of timed sequences.")
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, seed=True, threads=False):
        if seed:
            p.add_argument("--seed", type=int, default=0)
        if threads:
            p.add_argument("--threads", type=int, default=1, help="worker threads for distance computations")

    p = sub.add_parser("dist", help="drop-DTW cost and alignment between two sequences")
    p.add_argument("input")
    p.add_argument("--id-a", required=True)
    p.add_argument("--id-b", required=True)
    _add_metric_flags(p)
    p.set_defaults(func=cmd_dist)

    p = sub.add_parser("average", help="TSR average of a set of sequences")
    p.add_argument("input")
    p.add_argument("--ids", nargs="*", help="restrict to these ids")
    p.add_argument("--maxit", type=int, default=10)
    p.add_argument("--out")
    _add_metric_flags(p)
    common(p)
    p.set_defaults(func=cmd_average)

    p = sub.add_parser("cluster", help="cluster sequences (hac or kmeans)")
    p.add_argument("input")
    p.add_argument("--method", choices=("hac", "kmeans"), default="kmeans")
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--maxit", type=int, default=10, help="TSR iterations per average")
    p.add_argument("--max-rounds", type=int, default=20, help="K-means rounds")
    p.add_argument("--restarts", type=int, default=1, help="K-means restarts, best inertia kept")
    p.add_argument("--bin-width", type=_float, default=1.0, help="histogram bin width in days")
    p.add_argument("--out-dir", required=True)
    p.add_argument("--svg", action="store_true", help="also write histogram.svg")
    _add_metric_flags(p)
    common(p, threads=True)
    p.set_defaults(func=cmd_cluster)

    p = sub.add_parser("synth", help="write a synthetic labeled dataset")
    p.add_argument("--scenario", choices=SCENARIOS, required=True)
    p.add_argument("--n-per-model", type=int, default=15)
    p.add_argument("--out", required=True, help="JSON Lines output")
    p.add_argument("--labels", help="labels CSV (default: <out>.labels.csv)")
    common(p)
    p.set_defaults(func=cmd_synth)

    p = sub.add_parser("eval", help="confusion matrix and Cohen's kappa")
    p.add_argument("--pred", required=True, help="assignments CSV (id,cluster)")
    p.add_argument("--truth", required=True, help="labels CSV (id,label)")
    p.add_argument("--merge", action="append", help="A=B folds true class B into A; repeatable")
    p.add_argument("--matching", choices=(SIZE, AGREEMENT), default=SIZE)
    p.add_argument("--out-dir")
    p.set_defaults(func=cmd_eval)

    p = sub.add_parser("hist", help="event histogram per cluster")
    p.add_argument("input")
    p.add_argument("--assignments", help="assignments CSV; default puts everything in cluster 0")
    p.add_argument("--bin-width", type=_float, default=1.0)
    p.add_argument("--out")
    p.add_argument("--svg")
    p.set_defaults(func=cmd_hist)

    p = sub.add_parser("repro", help="reproduce a synthetic experiment")
    p.add_argument("--experiment", choices=sorted(EXPERIMENTS), required=True)
    p.add_argument(
        "--convention",
        choices=CONVENTIONS,
        default=STANDARD,
        help="how the published p_t/p_e map onto the time and type weights",
    )
    p.add_argument("--out")
    common(p, threads=True)
    p.set_defaults(func=cmd_repro)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING, format="%(levelname)s %(name)s: %(message)s")
    if getattr(args, "threads", 1) < 1:
        parser.error("--threads must be >= 1")
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"tseqclust: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except InputError as exc:
        print(f"tseqclust: error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
