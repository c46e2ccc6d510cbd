"""Command-line front end: ``netchange {detect,simulate,similarity,export-graph}``.

Exit codes: 0 success, 2 configuration error, 3 input parse/shape error,
4 numerical or degeneracy error. Every output file embeds the resolved
configuration and is written atomically.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import logging
import os
import sys
import tempfile
from pathlib import Path

from . import __version__, _rng
from .config import BootstrapConfig, DetectionConfig, KMeansConfig
from .criterion import network_expansion, similarity_matrix
from .data import Segment, load_matrix
from .detection import binary_segment
from .errors import ConfigError, DimensionError, NetChangeError
from .graph import DEFAULT_THRESHOLD, community_graph, to_dot
from .simulation import run_simulation

log = logging.getLogger("netchange")

THREADS_ENV = "NETCHANGE_THREADS"


def atomic_write(path: Path, text: str) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=f".{path.name}.", suffix=".tmp")
    try:
        with os.fdopen(fd, "w", newline="") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        Path(tmp).unlink(missing_ok=True)
        raise


def _csv_text(header: list[str], rows, config: dict) -> str:
    buf = io.StringIO()
    buf.write("# config: " + json.dumps(config, sort_keys=True) + "\n")
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    w.writerows(rows)
    return buf.getvalue()


def _json_text(obj) -> str:
    return json.dumps(obj, indent=2) + "\n"


def _parse_range(text: str) -> Segment:
    try:
        a, b = text.split("-", 1)
        return Segment(int(a), int(b))
    except ValueError as exc:
        raise ConfigError(f"bad segment {text!r}; expected START-END") from exc


def _parse_network(spec: str):
    """``[LABEL=]PATH[:START-END]``."""
    label = None
    if "=" in spec:
        label, spec = spec.split("=", 1)
    path, seg = spec, None
    head, sep, tail = spec.rpartition(":")
    if sep and tail and tail[0].isdigit() and "-" in tail:
        path, seg = head, _parse_range(tail)
    if label is None:
        label = Path(path).stem + (f"[{seg.start}-{seg.end}]" if seg else "")
    return label, path, seg


def _detection_config(args) -> DetectionConfig:
    return DetectionConfig(
        k=args.k,
        n_min=args.n_min,
        absolute_weights=args.absolute_weights,
        seed=args.seed,
        kmeans=KMeansConfig(n_init=args.restarts),
    )


def _bootstrap_config(args) -> BootstrapConfig:
    return BootstrapConfig(
        n_resamples=args.resamples,
        alpha=args.alpha,
        mode=args.mode,
        mean_block_length=args.block_len,
        block_fraction=args.block_frac if args.block_frac is not None else 0.2,
        seed=args.seed,
    )


def _echo(args, **extra) -> dict:
    keep = {k: v for k, v in vars(args).items() if k not in ("func", "verbose", "threads", "output_dir")}
    return {"version": __version__, **keep, **extra}


def _load(args, path):
    return load_matrix(path, delimiter=args.delimiter, header=args.header)


def cmd_detect(args) -> int:
    det = _detection_config(args)
    boot = _bootstrap_config(args)
    Y = _load(args, args.input)
    if Y.shape[0] < det.stop_length:
        raise ConfigError(f"series length {Y.shape[0]} is shorter than 2 * n_min = {det.stop_length}")
    report = binary_segment(Y, det, boot)
    out = Path(args.output_dir)
    echo = _echo(args, T=int(Y.shape[0]), p=int(Y.shape[1]))
    doc = report.to_dict()
    doc["config"] = {**doc["config"], "run": echo}
    if args.format == "csv":
        rows = [
            [t["position"], repr(t["gamma"]), repr(t["c_alpha"]), int(t["significant"]), *t["segment"], t["resamples"], int(t["near_edge"])]
            for t in doc["tests"]
        ]
        atomic_write(
            out / "report.csv",
            _csv_text(["position", "gamma", "c_alpha", "significant", "segment_start", "segment_end", "resamples", "near_edge"], rows, doc["config"]),
        )
    else:
        atomic_write(out / "report.json", _json_text(doc))
    trace_rows = []
    for s in report.traces:
        for pos, g, e, m in zip(s.positions.tolist(), s.gammas.tolist(), s.eta.tolist(), s.outlier_mask.tolist()):
            trace_rows.append([s.segment.start, s.segment.end, pos, repr(g), repr(e), int(m)])
    atomic_write(
        out / "gamma_trace.csv",
        _csv_text(["segment_start", "segment_end", "position", "gamma", "eta", "outlier"], trace_rows, doc["config"]),
    )
    print(f"change points: {report.change_points}")
    return 0


def cmd_simulate(args) -> int:
    det = _detection_config(args)
    boot = _bootstrap_config(args)
    res = run_simulation(args.setting, det, boot, reps=args.reps, p=args.p, T=args.t, seed=args.seed, n_jobs=args.threads)
    out = Path(args.output_dir)
    echo = {**res.config, "run": _echo(args)}
    m = res.metrics
    ntrue = len(res.true_change_points)

    rep_rows = []
    for i, (run, tested) in enumerate(zip(res.runs, res.significance)):
        rep_rows.append([
            i,
            " ".join(map(str, run.detections)),
            " ".join(f"{pos}:{int(sig)}" for pos, sig in tested),
            run.tp, run.fp, run.mod_fp,
        ])
    atomic_write(out / "repetitions.csv", _csv_text(["rep", "detected", "tested", "tp", "fp", "mod_fp"], rep_rows, echo))

    header = ["setting", "p", "T", "k"]
    row = [res.setting_id, res.p, res.T, det.k]
    for j in range(ntrue):
        header.append(f"tp{j + 1}_true")
        row.append(res.true_change_points[j])
        header.append(f"tp{j + 1}_mean")
        row.append("" if m.tp_mean[j] is None else f"{m.tp_mean[j]:.2f}")
        header.append(f"tp{j + 1}_sd")
        row.append("" if m.tp_sd[j] is None else f"{m.tp_sd[j]:.2f}")
    header += ["tp_freq", "fp_freq", "mod_fp_freq", "reps"]
    row += [f"{m.tp_freq:.2f}", f"{m.fp_freq:.2f}", f"{m.mod_fp_freq:.2f}", m.n_reps]
    atomic_write(out / "summary.csv", _csv_text(header, [row], echo))

    kde_rows = [[f"{x:.6g}", repr(float(y))] for x, y in zip(res.kde.grid, res.kde.density)]
    atomic_write(out / "kde.csv", _csv_text(["t", "density"], kde_rows, {**echo, "bandwidth": res.kde.bandwidth, "empty": res.kde.empty}))
    print(f"TP freq {m.tp_freq:.2f}  FP freq {m.fp_freq:.2f}  mod FP freq {m.mod_fp_freq:.2f}")
    return 0


def cmd_similarity(args) -> int:
    specs = [_parse_network(s) for s in args.network]
    if len(specs) < 2:
        raise ConfigError("similarity needs at least two --network specifications")
    kcfg = KMeansConfig(n_init=args.restarts)
    cache = {}
    labels, expansions, p = [], [], None
    for idx, (label, path, seg) in enumerate(specs):
        if path not in cache:
            cache[path] = _load(args, path)
        Y = cache[path]
        if p is None:
            p = Y.shape[1]
        elif Y.shape[1] != p:
            raise DimensionError(f"{path} has {Y.shape[1]} nodes, expected {p}")
        X = seg.rows(Y) if seg else Y
        rng = _rng.stream(args.seed, _rng.SIMILARITY, idx)
        expansions.append(network_expansion(X, args.k, rng, kcfg, args.absolute_weights))
        labels.append(label)
    S = similarity_matrix(expansions)
    rows = []
    for i, lab in enumerate(labels):
        rows.append([lab] + ["" if j <= i else f"{S[i, j]:.6f}" for j in range(len(labels))])
    atomic_write(Path(args.output_dir) / "similarity.csv", _csv_text(["network", *labels], rows, _echo(args)))
    print(f"{len(labels)} networks, {len(labels) * (len(labels) - 1) // 2} pairs")
    return 0


def cmd_export_graph(args) -> int:
    Y = _load(args, args.input)
    seg = _parse_range(args.segment) if args.segment else Segment(1, Y.shape[0])
    if seg.end > Y.shape[0]:
        raise ConfigError(f"segment {seg} exceeds series length {Y.shape[0]}")
    g = community_graph(Y, seg, args.k, args.threshold, args.seed, KMeansConfig(n_init=args.restarts), args.absolute_weights)
    out = Path(args.output_dir)
    if args.format == "dot":
        atomic_write(out / "graph.dot", f"// config: {json.dumps(_echo(args), sort_keys=True)}\n" + to_dot(g))
    else:
        atomic_write(out / "graph.json", _json_text({**g, "config": _echo(args)}))
    print(f"{len(g['nodes'])} nodes, {len(g['edges'])} edges")
    return 0


def _positive_int(text):
    v = int(text)
    if v < 1:
        raise argparse.ArgumentTypeError("must be >= 1")
    return v


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="netchange", description="Change points in community structure of multivariate time series.")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--output-dir", "-o", default=".", help="directory for result files")
    common.add_argument("--k", type=int, default=3, help="number of communities")
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--restarts", type=_positive_int, default=10, help="k-means restarts")
    common.add_argument("--absolute-weights", action="store_true", help="use |correlation| as edge weights")
    common.add_argument("--delimiter", default=None, help="field separator (default: tab for .tsv, else comma)")
    common.add_argument("--header", action="store_true", help="input files have a header row")
    common.add_argument("--threads", type=_positive_int, default=int(os.environ.get(THREADS_ENV, "1")),
                        help=f"worker processes (default ${THREADS_ENV} or 1)")
    common.add_argument("-v", "--verbose", action="count", default=0)

    infer = argparse.ArgumentParser(add_help=False)
    infer.add_argument("--n-min", type=int, default=50, help="minimum rows on each side of a split")
    infer.add_argument("--alpha", type=float, default=0.05)
    infer.add_argument("--resamples", type=_positive_int, default=1000)
    blk = infer.add_mutually_exclusive_group()
    blk.add_argument("--block-len", type=float, default=None, help="mean bootstrap block length (rows)")
    blk.add_argument("--block-frac", type=float, default=None, help="mean block length as a fraction of the segment (default 0.2)")
    infer.add_argument("--mode", choices=["stationary", "permutation"], default="stationary")

    p = sub.add_parser("detect", parents=[common, infer], help="detect change points in a data file")
    p.add_argument("--input", "-i", required=True)
    p.add_argument("--format", choices=["json", "csv"], default="json")
    p.set_defaults(func=cmd_detect)

    p = sub.add_parser("simulate", parents=[common, infer], help="run a simulation scenario")
    p.add_argument("--setting", type=int, choices=[1, 2, 3], required=True)
    p.add_argument("--reps", type=_positive_int, default=100)
    p.add_argument("--p", type=int, default=None, help="node count override")
    p.add_argument("--t", type=int, default=None, help="series length override")
    p.add_argument("--format", choices=["csv"], default="csv")
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("similarity", parents=[common], help="pairwise similarity of networks")
    p.add_argument("--network", "-n", action="append", default=[], metavar="[LABEL=]PATH[:START-END]")
    p.add_argument("--format", choices=["csv"], default="csv")
    p.set_defaults(func=cmd_similarity)

    p = sub.add_parser("export-graph", parents=[common], help="thresholded community graph of a segment")
    p.add_argument("--input", "-i", required=True)
    p.add_argument("--segment", default=None, metavar="START-END")
    p.add_argument("--threshold", type=float, default=DEFAULT_THRESHOLD)
    p.add_argument("--format", choices=["json", "dot"], default="json")
    p.set_defaults(func=cmd_export_graph)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.WARNING - 10 * args.verbose, format="%(levelname)s %(name)s: %(message)s")
    try:
        return args.func(args)
    except NetChangeError as exc:
        print(f"netchange: error: {exc}", file=sys.stderr)
        return exc.exit_code


if __name__ == "__main__":
    sys.exit(main())
