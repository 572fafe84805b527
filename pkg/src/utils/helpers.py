import math
import os
import re
from typing import List, Optional, Sequence, TextIO, Tuple

from src.models import Vec3

# Constants
NUMBER = r"[-+]?(?:\d+\.?\d*|\.\d+)(?:[eE][-+]?\d+)?"
VECTOR_PATTERN = re.compile(
    r"^\s*[\(\[]?\s*(%s)\s*[,\s]\s*(%s)\s*[,\s]\s*(%s)\s*[\)\]]?\s*$" % (NUMBER, NUMBER, NUMBER)
)
ANSI_COLORS = {
    "red": "\033[31m",
    "green": "\033[32m",
    "bold": "\033[1m",
}
ANSI_RESET = "\033[0m"


def parse_vector(text: str) -> Vec3:
    """
    Parse a Bloch vector given on the command line.

    Args:
        text: Three numbers, e.g. "(0,0,1)", "[0, 0, 1]", "0,0,1" or "0 0 1"

    Returns:
        Vec3: The parsed vector

    Raises:
        ValueError: If the text is not three finite numbers
    """
    match = VECTOR_PATTERN.match(text)
    if not match:
        raise ValueError(f"expected three numbers like (x,y,z), got {text!r}")
    values = [float(g) for g in match.groups()]
    if not all(math.isfinite(x) for x in values):
        raise ValueError(f"coordinates must be finite, got {text!r}")
    return Vec3.of(values)


def parse_plane(text: str) -> Tuple[Vec3, Vec3]:
    """
    Parse a projection plane "h;w" given as two vectors separated by ';'.

    Returns:
        Tuple of (horizontal, vertical) axis vectors
    """
    parts = text.split(";")
    if len(parts) != 2:
        raise ValueError(f"expected two axis vectors separated by ';', got {text!r}")
    return parse_vector(parts[0]), parse_vector(parts[1])


def to_radians(angle: float, degrees: bool = False) -> float:
    return math.radians(angle) if degrees else angle


def use_color(stream: TextIO) -> bool:
    """Color only interactive output, and never when NO_COLOR is set."""
    if os.environ.get("NO_COLOR"):
        return False
    isatty = getattr(stream, "isatty", None)
    return bool(isatty and isatty())


def colorize(text: str, color: str, enabled: bool) -> str:
    if not enabled:
        return text
    return f"{ANSI_COLORS[color]}{text}{ANSI_RESET}"


def format_number(value: Optional[float], digits: int = 6) -> str:
    if value is None:
        return "-"
    return f"{value:.{digits}f}"


def format_table(headers: Sequence[str], rows: Sequence[Sequence[str]]) -> str:
    """
    Render rows as a plain left-aligned text table.

    Args:
        headers: Column titles
        rows: Cell strings, one sequence per row

    Returns:
        str: Table with a dashed rule under the header
    """
    widths = [len(h) for h in headers]
    for row in rows:
        for i, cell in enumerate(row):
            widths[i] = max(widths[i], len(cell))

    def fmt(cells: Sequence[str]) -> str:
        return "  ".join(c.ljust(w) for c, w in zip(cells, widths)).rstrip()

    lines: List[str] = [fmt(headers), fmt(["-" * w for w in widths])]
    lines.extend(fmt(row) for row in rows)
    return "\n".join(lines)


def format_vector(v: Vec3, digits: int = 6) -> str:
    return "(" + ", ".join(format_number(c, digits) for c in v.as_tuple()) + ")"
