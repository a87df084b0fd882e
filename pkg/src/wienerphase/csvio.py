"""CSV output: one header row, LF endings, reals with 17 significant digits."""
from __future__ import annotations

import csv
import io
import math
import numbers


def format_cell(x):
    if x is None:
        return ""
    if isinstance(x, bool):
        return "true" if x else "false"
    if isinstance(x, numbers.Integral):
        return str(int(x))
    if isinstance(x, numbers.Real):
        x = float(x)
        if math.isnan(x):
            return "nan"
        return f"{x:.17g}"
    return str(x)


def render(columns, rows) -> str:
    """CSV text for ``rows`` (mappings keyed by ``columns``)."""
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(columns)
    for row in rows:
        w.writerow([format_cell(row.get(c)) for c in columns])
    return buf.getvalue()


def write(columns, rows, path=None, stream=None):
    text = render(columns, rows)
    if path is None or path == "-":
        stream.write(text)
    else:
        with open(path, "w", newline="") as fh:
            fh.write(text)
    return text
