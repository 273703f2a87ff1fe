"""Plotting companion for qclone sweep output."""

from .curves import EXPECTED_HEADER, CsvFormatError, CurveSet, parse_csv
from .render import make_figure, render

__version__ = "0.1.0"

__all__ = [
    "EXPECTED_HEADER",
    "CsvFormatError",
    "CurveSet",
    "parse_csv",
    "make_figure",
    "render",
    "__version__",
]
