"""
Console output of the command-line interface. Results go to stdout, failures to stderr.
"""

import sys
from typing import Any, Optional, Sequence

from mahbf.cli.terminal import ANSIEscapeSequence, paint


def new_line(n=1):
    print("\n" * n, end="")


def default(text: str):
    print(text if text else "")


def inform(text: str):
    print(paint(ANSIEscapeSequence.OKBLUE, text))


def success(text: str):
    print(paint(ANSIEscapeSequence.OKGREEN, text))


def warn(text: str):
    print(paint(ANSIEscapeSequence.WARNING, text))


def fail(text: str):
    print(paint(ANSIEscapeSequence.FAIL, text), file=sys.stderr)


def heading(text: str):
    new_line()
    print(paint(ANSIEscapeSequence.BOLD, text))


def verdict(name: str, passed: bool, detail: str, elapsed: Optional[float] = None):
    label = (
        paint(ANSIEscapeSequence.OKGREEN, "PASS")
        if passed
        else paint(ANSIEscapeSequence.FAIL, "FAIL")
    )
    timing = f" ({elapsed:.2f} s)" if elapsed is not None else ""
    print(f"{label} {name}{timing}: {detail}")


def _format(value: Any) -> str:
    if value is None:
        return "-"
    if isinstance(value, float):
        return f"{value:.4g}"
    return str(value)


def table(columns: Sequence[str], rows: Sequence[dict[str, Any]]):
    """Left-aligned plain-text table of ``columns`` taken from each row."""
    cells = [[_format(row.get(column)) for column in columns] for row in rows]
    widths = [
        max([len(column)] + [len(line[i]) for line in cells])
        for i, column in enumerate(columns)
    ]
    print("  ".join(c.ljust(w) for c, w in zip(columns, widths)).rstrip())
    for line in cells:
        print("  ".join(c.ljust(w) for c, w in zip(line, widths)).rstrip())
