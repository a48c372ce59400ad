"""CLI: turn a job spec into FMX1 feature files and a zoo manifest."""

from __future__ import annotations

import argparse
import sys

from .errors import ExtractorError
from .images import extract_image_features
from .job import ExtractionJob
from .text import extract_features


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="zooextract",
        description="Extract aligned probing features from published checkpoints",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    for name, help_text in (
        ("text", "contextual word features from text checkpoints"),
        ("images", "pooled features from image checkpoints under rotations"),
    ):
        p = sub.add_parser(name, help=help_text)
        p.add_argument("--job", required=True, help="job spec JSON")
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        job = ExtractionJob.load(args.job)
        if args.command == "text":
            manifest = extract_features(job)
        else:
            manifest = extract_image_features(job)
    except ExtractorError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    print(f"manifest written to {manifest}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
