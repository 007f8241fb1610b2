"""Command-line interface.

Subcommands: fit (train a pipeline on a corpus or embedding file), detect
(compare reference vs current and flag drift), experiment (run the full
drift-injection grid from a JSON config), convert (.dlem <-> numeric CSV).

Exit codes: 0 success / no drift, 1 drift detected (detect only),
2 usage or config error, 3 data error.
"""

import argparse
import json
import sys

from .dataio import (
    document_text,
    load_agnews_csv,
    read_embeddings,
    write_embeddings,
    write_report,
)
from .detect import (
    DEFAULT_PERMUTATIONS,
    KernelSpec,
    MEDIAN_HEURISTIC,
    SignificanceConfig,
    ks_multivariate,
    mmd_permutation_test,
)
from .errors import ConfigError, DataError, ParameterError
from .harness import build_splits, load_spec, run_experiment, write_train_indices
from .pipeline import fit_pca_pipeline, fit_tfidf_lsa, load_pipeline, save_pipeline
from .reduction import DEFAULT_LSA_COMPONENTS, DEFAULT_PCA_COMPONENTS

_EMBED_MAGIC = b"DLEM"


def _is_embedding_file(path):
    try:
        with open(path, "rb") as fh:
            return fh.read(4) == _EMBED_MAGIC
    except OSError as exc:
        raise DataError(f"cannot read {path}: {exc}") from exc


def _sigma_arg(value):
    if value == MEDIAN_HEURISTIC:
        return value
    try:
        return float(value)
    except ValueError:
        raise argparse.ArgumentTypeError(
            f"sigma must be a number or {MEDIAN_HEURISTIC!r}"
        ) from None


def cmd_fit(args):
    components = args.components
    if components is None:
        components = (
            DEFAULT_LSA_COMPONENTS if args.pipeline == "tfidf-lsa" else DEFAULT_PCA_COMPONENTS
        )
    if components < 1:
        raise ParameterError(f"--components must be >= 1, got {components}")
    if args.pipeline == "tfidf-lsa":
        if _is_embedding_file(args.input):
            raise ParameterError("tfidf-lsa fits on a text CSV, not an embedding file")
        dataset = load_agnews_csv(args.input)
        texts = [document_text(r) for r in dataset.records]
        pipe = fit_tfidf_lsa(
            texts,
            n_components=components,
            seed=args.seed,
            max_features=args.max_features,
        )
    else:
        if not _is_embedding_file(args.input):
            raise ParameterError("pca fits on a .dlem embedding file")
        matrix, _ = read_embeddings(args.input)
        pipe = fit_pca_pipeline(matrix, n_components=components, seed=args.seed)
    save_pipeline(pipe, args.out)
    print(f"fitted {pipe.kind} d={pipe.input_width} k={pipe.n_components}")
    return 0


def _load_detector_input(path, pipe):
    if pipe.kind == "tfidf-lsa":
        if _is_embedding_file(path):
            raise DataError(f"{path}: tfidf-lsa models take text CSVs, got an embedding file")
        dataset = load_agnews_csv(path)
        return pipe.transform_docs([document_text(r) for r in dataset.records])
    matrix, _ = read_embeddings(path)
    if matrix.shape[1] != pipe.input_width:
        raise DataError(
            f"width mismatch: model expects d={pipe.input_width}, "
            f"{path} has d={matrix.shape[1]}"
        )
    return pipe.transform_matrix(matrix)


def cmd_detect(args):
    pipe = load_pipeline(args.model)
    reference = _load_detector_input(args.reference, pipe)
    current = _load_detector_input(args.current, pipe)
    cfg = SignificanceConfig(alpha=args.alpha)
    results = {}
    if args.detector in ("ks", "both"):
        results["ks"] = ks_multivariate(reference, current, cfg)
    if args.detector in ("mmd", "both"):
        results["mmd"] = mmd_permutation_test(
            reference,
            current,
            KernelSpec(sigma=args.sigma),
            permutations=args.permutations,
            seed=args.seed,
            cfg=cfg,
            subsample_cap=args.mmd_subsample_cap or None,
        )
    if args.json:
        print(json.dumps({name: r.as_dict() for name, r in results.items()}, indent=2))
    else:
        ks = results.get("ks")
        if ks is not None:
            print(
                f"ks: statistic={ks.overall_statistic:.4f} adjusted_p={ks.adjusted_p:.6g} "
                f"dims={ks.dims} drift={'yes' if ks.drift_detected else 'no'}"
            )
        mmd = results.get("mmd")
        if mmd is not None:
            print(
                f"mmd: statistic={mmd.statistic:.6g} p={mmd.p_value:.6g} "
                f"sigma={mmd.sigma_used:.6g} permutations={mmd.permutations} "
                f"drift={'yes' if mmd.drift_detected else 'no'}"
            )
    return 1 if any(r.drift_detected for r in results.values()) else 0


def cmd_experiment(args):
    if not args.out and not args.emit_train_indices:
        raise ParameterError("nothing to do: pass --out and/or --emit-train-indices")
    spec = load_spec(args.config)
    if args.emit_train_indices:
        dataset = load_agnews_csv(spec.dataset)
        splits = build_splits(dataset, spec.train_size, seed=spec.master_seed)
        write_train_indices(splits, args.emit_train_indices)
        print(f"wrote {splits.train_idx.size} train indices to {args.emit_train_indices}")
        if not args.out:
            return 0

    def progress(rho, rep, ks_p, mmd_p):
        print(f"level={rho:.2f} repeat={rep} ks_p={ks_p:.4f} mmd_p={mmd_p:.4f}")

    report = run_experiment(spec, progress=progress)
    for rho, rep, message in report.errors:
        print(f"cell level={rho:.2f} repeat={rep} failed: {message}", file=sys.stderr)
    if all(r.n_repeats == 0 for r in report.rows):
        print("every cell failed, no report written", file=sys.stderr)
        return 3
    write_report(report, "csv", args.out)
    print(f"wrote {len(report.rows)} report rows to {args.out}")
    if args.markdown:
        write_report(report, "markdown", args.markdown)
        print(f"wrote markdown table to {args.markdown}")
    return 0


def cmd_convert(args):
    import csv as _csv

    import numpy as np

    if _is_embedding_file(args.input):
        matrix, labels = read_embeddings(args.input)
        with open(args.out, "w", newline="", encoding="utf-8") as fh:
            writer = _csv.writer(fh, lineterminator="\n")
            for i in range(matrix.shape[0]):
                row = [repr(float(v)) for v in matrix[i]]
                if labels is not None:
                    row.insert(0, str(int(labels[i])))
                writer.writerow(row)
        print(f"wrote {matrix.shape[0]}x{matrix.shape[1]} matrix to {args.out}")
    else:
        rows = []
        labels = [] if args.labels else None
        with open(args.input, newline="", encoding="utf-8") as fh:
            for rownum, row in enumerate(_csv.reader(fh), start=1):
                if not row:
                    continue
                try:
                    if args.labels:
                        labels.append(int(row[0]))
                        rows.append([float(v) for v in row[1:]])
                    else:
                        rows.append([float(v) for v in row])
                except ValueError as exc:
                    raise DataError(f"{args.input}: row {rownum}: {exc}") from None
        if not rows:
            raise DataError(f"{args.input}: no numeric rows")
        matrix = np.array(rows, dtype=np.float64)
        write_embeddings(matrix, labels, args.out)
        print(f"wrote {matrix.shape[0]}x{matrix.shape[1]} embedding file to {args.out}")
    return 0


def build_parser():
    parser = argparse.ArgumentParser(
        prog="docdrift",
        description="Covariate drift detection for document-vector data",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_fit = sub.add_parser("fit", help="fit a pipeline and save it as .dlpm")
    p_fit.add_argument("--input", required=True, help="AG-News CSV or .dlem embeddings")
    p_fit.add_argument("--pipeline", required=True, choices=["tfidf-lsa", "pca"])
    p_fit.add_argument("--components", type=int, default=None)
    p_fit.add_argument("--seed", type=int, default=0)
    p_fit.add_argument("--max-features", type=int, default=20_000)
    p_fit.add_argument("--out", required=True)
    p_fit.set_defaults(func=cmd_fit)

    p_det = sub.add_parser("detect", help="compare reference vs current samples")
    p_det.add_argument("--model", required=True)
    p_det.add_argument("--reference", required=True)
    p_det.add_argument("--current", required=True)
    p_det.add_argument("--detector", choices=["ks", "mmd", "both"], default="both")
    p_det.add_argument("--alpha", type=float, default=0.05)
    p_det.add_argument("--permutations", type=int, default=DEFAULT_PERMUTATIONS)
    p_det.add_argument("--seed", type=int, default=0)
    p_det.add_argument("--sigma", type=_sigma_arg, default=MEDIAN_HEURISTIC)
    p_det.add_argument(
        "--mmd-subsample-cap", type=int, default=2000,
        help="per-sample row cap before the MMD test; 0 disables the guard",
    )
    p_det.add_argument("--json", action="store_true")
    p_det.set_defaults(func=cmd_detect)

    p_exp = sub.add_parser("experiment", help="run the drift-injection grid")
    p_exp.add_argument("--config", required=True, help="ExperimentSpec JSON file")
    p_exp.add_argument("--out", help="report CSV path")
    p_exp.add_argument("--markdown", help="also write a markdown table here")
    p_exp.add_argument(
        "--emit-train-indices",
        help="write the train split as row indices (for the embedding exporter)",
    )
    p_exp.set_defaults(func=cmd_experiment)

    p_con = sub.add_parser("convert", help="convert .dlem <-> numeric CSV")
    p_con.add_argument("--input", required=True)
    p_con.add_argument("--out", required=True)
    p_con.add_argument(
        "--labels", action="store_true",
        help="numeric CSV input carries a leading label column",
    )
    p_con.set_defaults(func=cmd_convert)
    return parser


def main(argv=None):
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except ConfigError as exc:
        print(f"config error at {exc.field}: {exc}", file=sys.stderr)
        return 2
    except ParameterError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except DataError as exc:
        print(f"data error: {exc}", file=sys.stderr)
        return 3
    except OSError as exc:
        print(f"data error: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
