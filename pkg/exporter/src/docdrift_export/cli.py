"""Command line: docdrift-export export --model {doc2vec|bert} ..."""

import argparse
import sys

from .bert import DEFAULT_MODEL_PATH
from .errors import ExportError
from .jobs import ExportJob, run_export


def build_parser():
    parser = argparse.ArgumentParser(
        prog="docdrift-export",
        description="Compute Doc2Vec/BERT document vectors as .dlem files",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    p = sub.add_parser("export", help="export reference + corpus embedding files")
    p.add_argument("--model", required=True, choices=["doc2vec", "bert"])
    p.add_argument("--input", required=True, help="AG-News style 3-column CSV")
    p.add_argument("--train-indices",
                   help="file with one 0-based row index per line (the reference split)")
    p.add_argument("--out-ref", required=True, help="reference .dlem path")
    p.add_argument("--out-cur", required=True, help="corpus-wide .dlem path")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--model-path", default=DEFAULT_MODEL_PATH,
                   help="local checkpoint dir or model id (bert only)")
    p.add_argument("--batch-size", type=int, default=32, help="bert encode batch size")
    return parser


def main(argv=None):
    args = build_parser().parse_args(argv)
    try:
        job = ExportJob(
            input_csv=args.input,
            model=args.model,
            out_reference=args.out_ref,
            out_current=args.out_cur,
            seed=args.seed,
            train_indices=args.train_indices,
            model_path=args.model_path,
            batch_size=args.batch_size,
        )
        run_export(job)
    except ExportError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3
    return 0


if __name__ == "__main__":
    sys.exit(main())
