import os
import sys


class ANSIEscapeSequence:
    OKBLUE = "\033[94m"
    OKGREEN = "\033[92m"
    WARNING = "\033[93m"  # (e.g. Orange)
    FAIL = "\033[91m"  # (e.g. Red)
    ENDC = "\033[0m"  # Reset to default
    BOLD = "\033[1m"


def supports_color() -> bool:
    """Colour only on an interactive terminal, and never when NO_COLOR is set."""
    return sys.stdout.isatty() and "NO_COLOR" not in os.environ


def paint(code: str, text: str) -> str:
    if not supports_color():
        return text
    return f"{code}{text}{ANSIEscapeSequence.ENDC}"
