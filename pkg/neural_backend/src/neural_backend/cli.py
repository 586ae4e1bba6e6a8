"""Training and serving entry points."""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from .captioner import CaptionModelConfig, train_captioner
from .datasets import load_caption_dataset, load_path_corpus
from .errors import NeuralBackendError
from .path_model import PathModelConfig, train_path_model
from .serve import serve

DATA_DIR = Path(__file__).resolve().parents[2] / "data"


def build_parser():
    parser = argparse.ArgumentParser(prog="neural-backend")
    sub = parser.add_subparsers(dest="command", required=True)

    cap = sub.add_parser("train-captioner",
                         help="train the widget-image captioner")
    cap.add_argument("--data", default=str(DATA_DIR / "captions"))
    cap.add_argument("--out", default="artifacts")
    cap.add_argument("--epochs", type=int, default=None)

    paths = sub.add_parser("train-paths",
                           help="train the AST-path summarizer")
    paths.add_argument("--data", default=str(DATA_DIR / "paths/corpus.json"))
    paths.add_argument("--out", default="artifacts")
    paths.add_argument("--epochs", type=int, default=None)

    srv = sub.add_parser("serve", help="speak the backend protocol on stdio")
    srv.add_argument("--artifacts", default="artifacts")
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        if args.command == "train-captioner":
            config = CaptionModelConfig()
            if args.epochs:
                config.epochs = args.epochs
            out, manifest = train_captioner(
                load_caption_dataset(args.data), config,
                Path(args.out) / "captioner")
            print(f"captioner -> {out} (final loss "
                  f"{manifest['losses'][-1]:.4f})")
        elif args.command == "train-paths":
            config = PathModelConfig()
            if args.epochs:
                config.epochs = args.epochs
            out, manifest = train_path_model(
                load_path_corpus(args.data), config,
                Path(args.out) / "path_model")
            print(f"path model -> {out} (final loss "
                  f"{manifest['losses'][-1]:.4f})")
        else:
            return serve(args.artifacts)
    except NeuralBackendError as e:
        print(f"error: {e}", file=sys.stderr)
        return 2
    return 0


if __name__ == "__main__":
    sys.exit(main())
