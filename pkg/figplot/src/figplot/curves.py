"""Strict reader for the sweep CSV contract.

The input format is fixed: header ``phi,n_states,fidelity,eta,xi,c,c_sign``,
rows grouped by n_states (integers ascending, then ``cont``) with phi
strictly increasing inside each group.  Anything else is rejected with the
offending line number; a plotting tool that silently reorders or drops rows
could fabricate the very curve shapes it is supposed to show.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from pathlib import Path

EXPECTED_HEADER = "phi,n_states,fidelity,eta,xi,c,c_sign"


class CsvFormatError(ValueError):
    """Malformed sweep CSV; carries the 1-based offending line number."""

    def __init__(self, line: int, message: str) -> None:
        super().__init__(f"line {line}: {message}")
        self.line = line


@dataclass(frozen=True)
class CurveSet:
    """Ordered (phi, fidelity) points per n_states label.

    Labels are decimal integers or ``cont``, in file order, which the
    parser guarantees to be integers ascending followed by the continuum.
    """

    curves: dict[str, tuple[tuple[float, float], ...]]

    def labels(self) -> list[str]:
        return list(self.curves)

    def points(self, label: str) -> tuple[tuple[float, float], ...]:
        return self.curves[label]


def _parse_float(token: str, line: int, column: str) -> float:
    if token != token.strip() or token == "":
        raise CsvFormatError(line, f"{column}: malformed value {token!r}")
    try:
        value = float(token)
    except ValueError:
        raise CsvFormatError(line, f"{column}: {token!r} is not a number") from None
    if not math.isfinite(value):
        raise CsvFormatError(line, f"{column}: {token!r} is not finite")
    return value


def parse_csv(path: str | Path) -> CurveSet:
    """Read and validate a sweep CSV, preserving values exactly."""
    text = Path(path).read_text(encoding="utf-8")
    lines = text.splitlines()
    if not lines or lines[0] != EXPECTED_HEADER:
        raise CsvFormatError(1, f"header must be exactly {EXPECTED_HEADER!r}")
    if len(lines) == 1:
        raise CsvFormatError(2, "no data rows")

    curves: dict[str, list[tuple[float, float]]] = {}
    current: str | None = None
    last_int_group: int | None = None
    seen_cont = False
    for lineno, raw in enumerate(lines[1:], start=2):
        tokens = raw.split(",")
        if len(tokens) != 7:
            raise CsvFormatError(lineno, f"expected 7 columns, got {len(tokens)}")
        phi = _parse_float(tokens[0], lineno, "phi")
        label = tokens[1]
        fidelity = _parse_float(tokens[2], lineno, "fidelity")
        for column, token in zip(("eta", "xi", "c"), tokens[3:6]):
            _parse_float(token, lineno, column)
        if tokens[6] not in ("1", "-1"):
            raise CsvFormatError(lineno, f"c_sign must be 1 or -1, got {tokens[6]!r}")
        if not 0.0 <= fidelity <= 1.0:
            raise CsvFormatError(lineno, f"fidelity {fidelity!r} outside [0, 1]")
        if phi < 0.0:
            raise CsvFormatError(lineno, f"phi {phi!r} is negative")

        if label != "cont":
            try:
                n_states = int(label)
            except ValueError:
                raise CsvFormatError(
                    lineno, f"n_states must be an integer or 'cont', got {label!r}"
                ) from None
            if n_states < 2:
                raise CsvFormatError(lineno, f"n_states {n_states} is below 2")

        if label != current:
            if label in curves:
                raise CsvFormatError(lineno, f"rows for n_states={label} are not contiguous")
            if label == "cont":
                seen_cont = True
            else:
                if seen_cont:
                    raise CsvFormatError(lineno, "integer group after the cont group")
                if last_int_group is not None and int(label) < last_int_group:
                    raise CsvFormatError(lineno, "n_states groups are not ascending")
                last_int_group = int(label)
            current = label
            curves[label] = []
        else:
            if phi <= curves[label][-1][0]:
                raise CsvFormatError(
                    lineno, f"phi {phi!r} does not increase within n_states={label}"
                )
        curves[label].append((phi, fidelity))

    return CurveSet({label: tuple(points) for label, points in curves.items()})
