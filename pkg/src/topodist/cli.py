"""Command-line interface.

Exit codes: 0 success, 2 malformed input, 3 metric precondition violated,
4 capacity exceeded.  Set ``TOPODIST_WORKERS`` to parallelise the batch
commands (``matrix``, ``sweep``, ``manipulate``).
"""

import argparse
import csv
import json
import math
import sys
import time
from pathlib import Path

import numpy as np
from scipy.stats import spearmanr

from topodist import __version__, _backend
from topodist.datagen import DEFAULT_DIM, DEFAULT_OFFSET, MixtureSpec, make_rng, sample_gaussian, sample_matched_mixture
from topodist.errors import InputFormatError, TopoDistError
from topodist.experiments import (
    PAIRED_GROUP_SIZE,
    PAIRED_GROUPS,
    GROUP_COUNT,
    GROUP_SIZE,
    MATRIX_METRICS,
    SEVERITIES,
    MetricConfig,
    block_summary,
    gs_subsets,
    manipulation_scores,
    score_matrix,
    severity_sweep,
)
from topodist.geometry import pairwise_distances
from topodist.io import file_sha256, read_diagram, read_features, write_diagram, write_features, write_report
from topodist.metrics import (
    DEFAULT_I_MAX,
    InfinityPolicy,
    ScoreReport,
    diagram_bottleneck,
    diagram_wasserstein,
    fid_from_features,
    gs,
    inception_score_std,
    kid,
    td,
)
from topodist.persistence import DEFAULT_MAX_POINTS_DIM1, diagram_dim0, persistence_dim1


def _load(path, fmt):
    return read_features(path, fmt)


def _pair_meta(args, a, b):
    return {
        "a": {"path": Path(args.a).name, "sha256": file_sha256(args.a), "n": a.shape[0], "m": a.shape[1]},
        "b": {"path": Path(args.b).name, "sha256": file_sha256(args.b), "n": b.shape[0], "m": b.shape[1]},
        "seed": args.seed,
    }


def _finish(args, report: ScoreReport):
    print(f"{report.metric} {report.value!r}")
    if args.out:
        write_report(report, args.out)
    return 0


def cmd_td(args):
    a, b = _load(args.a, args.format), _load(args.b, args.format)
    value = td(a, b, InfinityPolicy(args.inf_factor))
    meta = _pair_meta(args, a, b) | {"inf_factor": args.inf_factor}
    return ScoreReport("td", value, meta)


def cmd_fid(args):
    a, b = _load(args.a, args.format), _load(args.b, args.format)
    return ScoreReport("fid", fid_from_features(a, b), _pair_meta(args, a, b))


def cmd_kid(args):
    a, b = _load(args.a, args.format), _load(args.b, args.format)
    return ScoreReport("kid", kid(a, b), _pair_meta(args, a, b))


def cmd_is(args):
    probs = _load(args.probs, args.format)
    mean, std = inception_score_std(probs, args.splits)
    meta = {
        "probs": {"path": Path(args.probs).name, "sha256": file_sha256(args.probs)},
        "n": probs.shape[0],
        "classes": probs.shape[1],
        "splits": args.splits,
        "std": std,
        "seed": args.seed,
    }
    return ScoreReport("is", mean, meta)


def cmd_gs(args):
    a, b = _load(args.a, args.format), _load(args.b, args.format)
    clouds_a = gs_subsets(a, args.gs_subsets, args.gs_points, make_rng(args.seed, 0))
    clouds_b = gs_subsets(b, args.gs_subsets, args.gs_points, make_rng(args.seed, 1))
    value = gs(clouds_a, clouds_b, args.i_max)
    meta = _pair_meta(args, a, b) | {
        "i_max": args.i_max,
        "gs_subsets": args.gs_subsets,
        "gs_points": args.gs_points,
    }
    return ScoreReport("gs", value, meta)


def _diagram_of(path, args):
    if Path(path).suffix.lower() == ".json":
        diagram, _ = read_diagram(path)
        return diagram
    x = _load(path, args.format)
    if args.hom_dim == 0:
        return diagram_dim0(x)
    dist = pairwise_distances(x)
    scale = args.max_scale if args.max_scale is not None else float(dist.max())
    return persistence_dim1(dist, scale, max_points=args.max_points)


def _diagram_meta(args, d1, d2):
    return {
        "a": {"path": Path(args.a).name, "sha256": file_sha256(args.a), "pairs": len(d1)},
        "b": {"path": Path(args.b).name, "sha256": file_sha256(args.b), "pairs": len(d2)},
        "dimension": d1.dim,
        "q": args.q,
        "seed": args.seed,
    }


def cmd_bottleneck(args):
    d1, d2 = _diagram_of(args.a, args), _diagram_of(args.b, args)
    return ScoreReport("bottleneck", diagram_bottleneck(d1, d2, args.q), _diagram_meta(args, d1, d2))


def cmd_wasserstein(args):
    d1, d2 = _diagram_of(args.a, args), _diagram_of(args.b, args)
    value = diagram_wasserstein(d1, d2, args.p, args.q)
    return ScoreReport("wasserstein", value, _diagram_meta(args, d1, d2) | {"p": args.p})


def cmd_diagram(args):
    x = _load(args.a, args.format)
    if args.hom_dim == 0:
        diagram = diagram_dim0(x)
    else:
        dist = pairwise_distances(x)
        scale = args.max_scale if args.max_scale is not None else float(dist.max())
        diagram = persistence_dim1(dist, scale, max_points=args.max_points)
    write_diagram(diagram, args.out, {"seed": args.seed, "source_sha256": file_sha256(args.a)})
    print(f"wrote {len(diagram)} pairs to {args.out}")
    return 0


def _config(args):
    return MetricConfig(
        inf_factor=args.inf_factor,
        i_max=args.i_max,
        gs_subsets=args.gs_subsets,
        gs_points=args.gs_points,
        seed=args.seed,
    )


def cmd_matrix(args):
    if len(args.a) < 2 and len(args.b) < 2:
        raise InputFormatError("matrix needs at least two groups on one side")
    files = list(args.a) + list(args.b)
    groups = [_load(f, args.format) for f in files]
    matrix = score_matrix(args.metric, groups, _config(args))
    labels = [f"A{i + 1}" for i in range(len(args.a))] + [f"B{i + 1}" for i in range(len(args.b))]
    with open(args.out, "w", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(["group", *labels])
        for label, row in zip(labels, matrix):
            writer.writerow([label, *(repr(float(v)) for v in row)])
    summary = block_summary(matrix, len(args.a))
    meta = {
        "groups": [{"label": lab, "path": Path(f).name, "sha256": file_sha256(f)} for lab, f in zip(labels, files)],
        "summary": summary,
        "seed": args.seed,
        "inf_factor": args.inf_factor,
    }
    for key, val in summary.items():
        print(f"{key} {val!r}")
    report = ScoreReport(f"matrix:{args.metric}", summary["cross_within_ratio"], meta)
    if args.summary:
        write_report(report, args.summary)
    return 0


def cmd_sweep(args):
    rows = severity_sweep(
        args.metric,
        args.severities,
        seed=args.seed,
        groups=args.groups,
        group_size=args.group_size,
        dim=args.dim,
        perturbation=args.perturbation,
        constant_level=args.constant_level,
        cfg=_config(args),
    )
    with open(args.out, "w", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(["severity", "mean", "std"])
        for s, mean, std in rows:
            writer.writerow([repr(s), repr(mean), repr(std)])
    means = [r[1] for r in rows]
    rho = float(spearmanr([r[0] for r in rows], means).statistic) if np.ptp(means) > 0 else float("nan")
    print(f"spearman {rho!r}")
    return 0


def cmd_manipulate(args):
    rows = manipulation_scores(
        seed=args.seed,
        groups=args.groups,
        group_size=args.group_size,
        height=args.height,
        width=args.width,
        channels=args.channels,
        metrics=args.metrics,
        cfg=_config(args),
    )
    with open(args.out, "w", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(["manipulation", "metric", "mean", "std"])
        for kind, metric, mean, std in rows:
            writer.writerow([kind, metric, repr(mean), repr(std)])
    for kind, metric, mean, _ in rows:
        print(f"{kind} {metric} {mean!r}")
    return 0


def cmd_generate(args):
    ext = ".csv" if args.format == "csv" else ".tdf"
    if args.kind == "paired":
        spec = MixtureSpec.along_first_axis(args.dim, args.offset)
        mean, cov = spec.matched_gaussian()
        out = Path(args.out)
        out.mkdir(parents=True, exist_ok=True)
        for g in range(args.groups):
            write_features(sample_gaussian(mean, cov, args.n, make_rng(args.seed, 0, g)), out / f"A{g + 1}{ext}", args.format)
            write_features(sample_matched_mixture(spec, args.n, make_rng(args.seed, 1, g)), out / f"B{g + 1}{ext}", args.format)
        print(f"wrote {2 * args.groups} groups to {out}")
        return 0
    if args.kind == "gaussian":
        mean = np.zeros(args.dim)
        mean[0] = args.shift
        x = sample_gaussian(mean, np.eye(args.dim), args.n, make_rng(args.seed))
    else:
        x = sample_matched_mixture(MixtureSpec.along_first_axis(args.dim, args.offset), args.n, make_rng(args.seed))
    write_features(x, args.out, args.format)
    print(f"wrote {x.shape[0]}x{x.shape[1]} features to {args.out}")
    return 0


SCORE_COMMANDS = {
    "td": cmd_td,
    "fid": cmd_fid,
    "kid": cmd_kid,
    "is": cmd_is,
    "gs": cmd_gs,
    "bottleneck": cmd_bottleneck,
    "wasserstein": cmd_wasserstein,
}


def _float_list(text):
    return [float(tok) for tok in text.split(",") if tok.strip()]


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="topodist", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__} ({_backend.BACKEND} kernels)")
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=["binary", "csv"], default=None, help="feature file format (default: by extension)")
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--inf-factor", type=float, default=1.05)
    common.add_argument("--i-max", type=int, default=DEFAULT_I_MAX)
    common.add_argument("--gs-subsets", type=int, default=10, help="random subsets averaged per cloud for gs")
    common.add_argument("--gs-points", type=int, default=64, help="points per gs subset")
    common.add_argument("--out", default=None)

    sub = parser.add_subparsers(dest="command", required=True)
    for name in ("td", "fid", "kid", "gs"):
        p = sub.add_parser(name, parents=[common], help=f"{name} between two feature files")
        p.add_argument("--a", required=True)
        p.add_argument("--b", required=True)
    p = sub.add_parser("is", parents=[common], help="inception score of a probability matrix")
    p.add_argument("--probs", required=True)
    p.add_argument("--splits", type=int, default=1)

    diag = argparse.ArgumentParser(add_help=False)
    diag.add_argument("--hom-dim", type=int, choices=[0, 1], default=0)
    diag.add_argument("--max-scale", type=float, default=None, help="dim-1 cutoff (default: largest distance)")
    diag.add_argument("--max-points", type=int, default=DEFAULT_MAX_POINTS_DIM1)
    for name in ("bottleneck", "wasserstein"):
        p = sub.add_parser(name, parents=[common, diag], help=f"{name} distance between diagrams (feature or .json files)")
        p.add_argument("--a", required=True)
        p.add_argument("--b", required=True)
        p.add_argument("-q", type=float, default=math.inf, help="ground norm order (default inf)")
        if name == "wasserstein":
            p.add_argument("-p", type=float, default=1.0)
    p = sub.add_parser("diagram", parents=[common, diag], help="write the persistence diagram of a feature file")
    p.add_argument("--a", required=True)

    p = sub.add_parser("matrix", parents=[common], help="group-vs-group score matrix (heatmap csv)")
    p.add_argument("--metric", choices=MATRIX_METRICS, default="td")
    p.add_argument("--a", nargs="+", required=True, help="first side group files")
    p.add_argument("--b", nargs="+", default=[], help="second side group files")
    p.add_argument("--summary", default=None, help="block-summary report path")

    p = sub.add_parser("sweep", parents=[common], help="score vs perturbation severity")
    p.add_argument("--metric", choices=["td", "fid", "kid"], default="td")
    p.add_argument("--severities", type=_float_list, default=list(SEVERITIES))
    p.add_argument("--groups", type=int, default=GROUP_COUNT)
    p.add_argument("--group-size", type=int, default=GROUP_SIZE)
    p.add_argument("--dim", type=int, default=DEFAULT_DIM)
    p.add_argument("--perturbation", choices=["gaussian", "constant"], default="gaussian")
    p.add_argument("--constant-level", type=float, default=0.3)

    p = sub.add_parser("manipulate", parents=[common], help="pixel noise / patch mask / patch exchange on synthetic images")
    p.add_argument("--groups", type=int, default=GROUP_COUNT)
    p.add_argument("--group-size", type=int, default=GROUP_SIZE)
    p.add_argument("--height", type=int, default=16)
    p.add_argument("--width", type=int, default=16)
    p.add_argument("--channels", type=int, default=3)
    p.add_argument("--metrics", type=lambda s: s.split(","), default=["td", "fid", "kid"])

    p = sub.add_parser("generate", parents=[common], help="write seeded synthetic feature files")
    p.add_argument("kind", choices=["gaussian", "mixture", "paired"])
    p.add_argument("--n", "--group-size", dest="n", type=int, default=PAIRED_GROUP_SIZE)
    p.add_argument("--dim", type=int, default=DEFAULT_DIM)
    p.add_argument("--offset", type=float, default=DEFAULT_OFFSET, help="mixture component offset along the first axis")
    p.add_argument("--shift", type=float, default=0.0, help="gaussian mean along the first axis")
    p.add_argument("--groups", type=int, default=PAIRED_GROUPS)
    return parser


REQUIRES_OUT = {"matrix", "sweep", "manipulate", "generate", "diagram"}


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.command in REQUIRES_OUT and not args.out:
        parser.error(f"{args.command} needs --out")
    try:
        if args.command in SCORE_COMMANDS:
            start = time.perf_counter()
            report = SCORE_COMMANDS[args.command](args)
            report.wall_time = time.perf_counter() - start
            return _finish(args, report)
        handler = {
            "matrix": cmd_matrix,
            "sweep": cmd_sweep,
            "manipulate": cmd_manipulate,
            "generate": cmd_generate,
            "diagram": cmd_diagram,
        }[args.command]
        return handler(args)
    except TopoDistError as exc:
        print(f"error [{exc.code}]: {exc}", file=sys.stderr)
        return exc.exit_code


if __name__ == "__main__":
    sys.exit(main())
