"""Command-line front end.

Subcommands wire the library end to end: ``synth`` writes a synthetic
union-of-subspaces dataset, ``select`` picks exemplars, ``cluster`` and
``classify`` produce label files plus a metrics report, ``eval`` scores a
prediction against ground truth, and ``oracle`` runs the geometry
self-checks.  Every JSON output embeds the invoking configuration, and all
commands are deterministic functions of their inputs, flags and seed.
"""

from __future__ import annotations

import argparse
import json
import os
import sys


def _set_thread_cap(argv: list[str]) -> None:
    # honored only if numpy has not been imported yet in this process
    if "--threads" in argv:
        i = argv.index("--threads")
        if i + 1 < len(argv):
            n = argv[i + 1]
            for var in ("OMP_NUM_THREADS", "OPENBLAS_NUM_THREADS", "MKL_NUM_THREADS"):
                os.environ.setdefault(var, n)


def _parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="subspace-exemplars",
        description="Exemplar selection, clustering and classification in a union of subspaces",
    )
    p.add_argument("--threads", type=int, default=None, help="cap BLAS threads")
    sub = p.add_subparsers(dest="command", required=True)

    sp = sub.add_parser("synth", help="generate a synthetic union-of-subspaces dataset")
    sp.add_argument("--D", type=int, required=True, help="ambient dimension")
    sp.add_argument("--dims", required=True, help="comma-separated subspace dimensions, e.g. 3,3")
    sp.add_argument("--counts", required=True, help="comma-separated samples per subspace")
    sp.add_argument("--sigma", type=float, default=0.0, help="noise std before normalization")
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--coefficients", choices=("sphere", "nonneg"), default="sphere")
    sp.add_argument("--out", required=True, help="output CSV path")

    def common(q, with_first=True):
        q.add_argument("--data", required=True, help="input CSV (rows are samples)")
        q.add_argument("--with-labels", action="store_true", help="CSV has a final label column")
        q.add_argument("--lambda", dest="lam", type=float, default=100.0)
        q.add_argument("--k", type=int, required=True, help="number of exemplars")
        q.add_argument("--seed", type=int, default=0)
        q.add_argument("--tol", type=float, default=1e-8)
        q.add_argument("--method", choices=("ffs", "ffs-naive", "random"), default="ffs")
        if with_first:
            q.add_argument("--first-index", type=int, default=None,
                           help="override the seeded random first exemplar")

    sel = sub.add_parser("select", help="select exemplars, write a selection JSON")
    common(sel)
    sel.add_argument("--out", required=True, help="output selection JSON path")

    cl = sub.add_parser("cluster", help="exemplar-based subspace clustering")
    common(cl)
    cl.add_argument("--t", type=int, default=3, help="code graph neighbors")
    cl.add_argument("--n-clusters", type=int, required=True)
    cl.add_argument("--labels-out", required=True, help="output labels CSV (one integer per line)")
    cl.add_argument("--metrics-out", required=True, help="output metrics JSON")

    cf = sub.add_parser("classify", help="classify from labeled exemplars")
    common(cf)
    cf.add_argument("--exemplar-labels", default=None,
                    help='JSON file {"index": class, ...}; default reads the data label column')
    cf.add_argument("--labels-out", required=True)
    cf.add_argument("--metrics-out", required=True)

    ev = sub.add_parser("eval", help="score predicted labels against ground truth")
    ev.add_argument("--truth", required=True, help="labels CSV, one integer per line")
    ev.add_argument("--pred", required=True)
    ev.add_argument("--out", default=None, help="metrics JSON path (stdout when omitted)")

    orc = sub.add_parser("oracle", help="run geometry self-checks")
    orc.add_argument("--check", choices=("eq15", "chain"), required=True)
    orc.add_argument("--trials", type=int, default=100)
    orc.add_argument("--seed", type=int, default=0)
    orc.add_argument("--resolution", type=float, default=1e-3)
    orc.add_argument("--out", default=None, help="audit JSON path (stdout when omitted)")
    return p


def _config_dict(args) -> dict:
    cfg = {k: v for k, v in vars(args).items() if k != "command"}
    return {"command": args.command, **{k: cfg[k] for k in sorted(cfg)}}


def _write_json(doc: dict, path) -> None:
    text = json.dumps(doc, indent=2, sort_keys=True)
    if path is None:
        print(text)
    else:
        with open(path, "w") as fh:
            fh.write(text + "\n")


def _read_label_file(path):
    import numpy as np

    vals = []
    with open(path) as fh:
        for line in fh:
            line = line.strip()
            if line:
                vals.append(int(float(line)))
    return np.asarray(vals, dtype=int)


def _write_label_file(labels, path) -> None:
    with open(path, "w") as fh:
        for v in labels:
            fh.write(f"{int(v)}\n")


def _load_data(args):
    from .dataset import load_csv

    return load_csv(args.data, with_labels=args.with_labels)


def _select(data, args):
    from .ffs import ffs_lazy, ffs_naive, select_random

    if args.method == "ffs":
        return ffs_lazy(data, args.lam, args.k, args.seed, args.tol,
                        first_index=args.first_index)
    if args.method == "ffs-naive":
        return ffs_naive(data, args.lam, args.k, args.seed, args.tol,
                         first_index=args.first_index)
    return select_random(data, args.k, args.seed)


def _cmd_synth(args) -> int:
    from .dataset import SubspaceSpec, save_csv, synth_union_of_subspaces

    dims = tuple(int(v) for v in args.dims.split(","))
    counts = tuple(int(v) for v in args.counts.split(","))
    spec = SubspaceSpec(args.D, dims, counts, args.sigma, args.seed, args.coefficients)
    data = synth_union_of_subspaces(spec)
    save_csv(data, args.out, with_labels=True)
    return 0


def _cmd_select(args) -> int:
    data = _load_data(args)
    result = _select(data, args)
    doc = json.loads(result.to_json())
    doc["config"] = _config_dict(args)
    _write_json(doc, args.out)
    return 0


def _metrics_report(truth, pred, imbalance_counts=None, codes=None,
                    exemplar_labels=None):
    from .metrics import (
        clustering_accuracy,
        clustering_fscore,
        imbalance,
        subspace_preserving_rate,
    )

    report = {"accuracy": None, "fscore": None, "imbalance": None, "sp_rate": None}
    if truth is not None:
        report["accuracy"] = clustering_accuracy(truth, pred)
        report["fscore"] = clustering_fscore(truth, pred)
        if imbalance_counts is not None:
            report["imbalance"] = imbalance(imbalance_counts)
        if codes is not None and exemplar_labels is not None:
            report["sp_rate"] = subspace_preserving_rate(codes, exemplar_labels, truth)
    return report


def _cmd_cluster(args) -> int:
    import numpy as np

    from .cluster import esc_pipeline

    data = _load_data(args)
    assignment, exemplars, codes = esc_pipeline(
        data, args.lam, args.k, args.t, args.n_clusters, args.seed, args.tol,
        selection=args.method, first_index=args.first_index, return_details=True,
    )
    _write_label_file(assignment.labels, args.labels_out)
    report = {"accuracy": None, "fscore": None, "imbalance": None, "sp_rate": None}
    if data.labels is not None:
        sel = list(exemplars.indices)
        counts = np.bincount(data.labels[sel], minlength=int(data.labels.max()) + 1)
        report = _metrics_report(
            data.labels, assignment.labels, counts, codes, data.labels[sel]
        )
    doc = {"config": _config_dict(args), "metrics": report,
           "exemplars": list(exemplars.indices)}
    _write_json(doc, args.metrics_out)
    return 0


def _cmd_classify(args) -> int:
    import numpy as np

    from .classify import LabeledExemplars, src_classify

    data = _load_data(args)
    exemplar_set = _select(data, args)
    if args.exemplar_labels is not None:
        with open(args.exemplar_labels) as fh:
            raw = json.load(fh)
        labels_map = {int(i): int(c) for i, c in raw.items()}
        lab = LabeledExemplars.from_labels(list(exemplar_set.indices), labels_map)
    else:
        if data.labels is None:
            print("error: no label column and no --exemplar-labels file", file=sys.stderr)
            return 2
        lab = LabeledExemplars.from_data(exemplar_set, data)
    assignment = src_classify(data, lab, args.lam, args.tol)
    _write_label_file(assignment.labels, args.labels_out)
    report = {"accuracy": None, "fscore": None, "imbalance": None, "sp_rate": None}
    if data.labels is not None:
        sel = list(exemplar_set.indices)
        counts = np.bincount(data.labels[sel], minlength=int(data.labels.max()) + 1)
        report = _metrics_report(data.labels, assignment.labels, counts)
    doc = {"config": _config_dict(args), "metrics": report,
           "exemplars": list(exemplar_set.indices)}
    _write_json(doc, args.metrics_out)
    return 0


def _cmd_eval(args) -> int:
    truth = _read_label_file(args.truth)
    pred = _read_label_file(args.pred)
    report = _metrics_report(truth, pred)
    doc = {"config": _config_dict(args), "metrics": report}
    _write_json(doc, args.out)
    return 0


def _cmd_oracle(args) -> int:
    import numpy as np

    from .geometry import (
        SymmetricHull,
        covering_radius,
        inradius,
        l1_min_exact,
        minkowski_functional,
        sup_l1_cost_on_sphere,
    )

    rng = np.random.default_rng(args.seed)
    if args.check == "eq15":
        # Minkowski functional of conv(+-X0) must equal the exact L1 cost
        worst = 0.0
        for _ in range(args.trials):
            m = int(rng.integers(3, 8))
            pts = rng.standard_normal((3, m))
            pts /= np.linalg.norm(pts, axis=0)
            coeff = rng.standard_normal(m)
            x = pts @ coeff
            n = np.linalg.norm(x)
            if n < 1e-9:
                continue
            x /= n
            hull = SymmetricHull.from_points(pts)
            gauge = minkowski_functional(hull, x)
            lp, _ = l1_min_exact(pts, x)
            worst = max(worst, abs(gauge - lp))
        doc = {"check": "eq15", "trials": args.trials, "max_deviation": float(worst),
               "tolerance": 1e-8, "pass": bool(worst <= 1e-8)}
    else:
        # worst-case cost vs inradius vs covering radius on the circle
        worst = 0.0
        for _ in range(args.trials):
            m = int(rng.integers(2, 9))
            ang = rng.uniform(0.0, np.pi, m)
            pts = np.vstack([np.cos(ang), np.sin(ang)])
            hull = SymmetricHull.from_points(pts)
            f_sup = sup_l1_cost_on_sphere(pts, args.resolution)
            inv_r = 1.0 / inradius(hull, args.resolution)
            gamma = covering_radius(hull.generators, args.resolution)
            inv_cos = 1.0 / np.cos(gamma)
            worst = max(worst, abs(f_sup - inv_r), abs(f_sup - inv_cos), abs(inv_r - inv_cos))
        doc = {"check": "chain", "trials": args.trials, "max_deviation": float(worst),
               "tolerance": 2e-3, "pass": bool(worst <= 2e-3)}
    doc["config"] = _config_dict(args)
    _write_json(doc, args.out)
    return 0 if doc["pass"] else 1


_HANDLERS = {
    "synth": _cmd_synth,
    "select": _cmd_select,
    "cluster": _cmd_cluster,
    "classify": _cmd_classify,
    "eval": _cmd_eval,
    "oracle": _cmd_oracle,
}


def main(argv: list[str] | None = None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    _set_thread_cap(argv)
    args = _parser().parse_args(argv)
    try:
        return _HANDLERS[args.command](args)
    except (ValueError, OSError, RuntimeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    raise SystemExit(main())
