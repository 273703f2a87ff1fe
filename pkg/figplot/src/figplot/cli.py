"""figplot command: sweep CSV in, figure file out."""

from __future__ import annotations

import argparse
import sys

from .curves import CsvFormatError
from .render import render


def main(argv: list[str] | None = None) -> int:
    parser = argparse.ArgumentParser(
        prog="figplot",
        description="Render fidelity-vs-spread curves from a qclone sweep CSV.",
    )
    parser.add_argument("csv", help="input CSV produced by 'qclone sweep'")
    parser.add_argument(
        "out_image", help="output figure path; format inferred from the extension"
    )
    parser.add_argument("--title", default=None, help="optional figure title")
    args = parser.parse_args(argv)
    try:
        render(args.csv, args.out_image, title=args.title)
    except CsvFormatError as exc:
        print(f"figplot: error: {exc}", file=sys.stderr)
        return 1
    except OSError as exc:
        print(f"figplot: error: {exc}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
