"""Matrix and dimension-table file formats, scalar rendering, JSON reports."""

from __future__ import annotations

import csv
import io as _io
import json
import re
from fractions import Fraction

import numpy as np

from .exceptions import MatrixParseError
from .kernels import DimensionTable, snap_rational

_REAL = r"[+-]?(?:\d+(?:\.\d*)?|\.\d+)(?:[eE][+-]?\d+)?"
_COMPLEX_RE = re.compile(
    rf"^(?:(?P<re>{_REAL})(?P<im>[+-](?:\d+(?:\.\d*)?|\.\d+)?(?:[eE][+-]?\d+)?)[ij]"
    rf"|(?P<pure>[+-]?(?:\d+(?:\.\d*)?|\.\d+)?(?:[eE][+-]?\d+)?)[ij])$"
)
_RATIONAL_RE = re.compile(rf"^{_REAL}(?:/\d+)?$")


def _imag_part(text: str) -> float:
    if text in ("", "+"):
        return 1.0
    if text == "-":
        return -1.0
    return float(text)


def parse_scalar(token: str):
    """Parse ``3``, ``-2.5e-3``, ``1/2``, ``1+2i``, ``3-4.5i``, ``i`` or ``-2j``.

    Returns a float or a complex.
    """
    tok = token.strip()
    if not tok:
        raise MatrixParseError("empty entry", token=token)
    if _RATIONAL_RE.match(tok):
        try:
            return float(Fraction(tok))
        except ZeroDivisionError:
            raise MatrixParseError(f"zero denominator in {tok!r}", token=tok) from None
    m = _COMPLEX_RE.match(tok)
    if m:
        if m.group("pure") is not None:
            return complex(0.0, _imag_part(m.group("pure")))
        return complex(float(m.group("re")), _imag_part(m.group("im")))
    raise MatrixParseError(f"malformed scalar {tok!r}", token=tok)


def _split_row(line: str):
    if "," in line:
        return [t.strip() for t in line.rstrip(",").split(",")]
    return line.split()


def parse_matrix(text: str) -> np.ndarray:
    """Parse a matrix: one row per line, comma or whitespace separated.

    Blank lines and lines starting with ``#`` are skipped.  The result is
    complex if any entry has an imaginary part, else float.
    """
    rows, width, first_line = [], None, None
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        tokens = _split_row(line)
        try:
            values = [parse_scalar(t) for t in tokens]
        except MatrixParseError as exc:
            raise MatrixParseError(f"malformed scalar {exc.token!r}", line=lineno, token=exc.token) from None
        if width is None:
            width, first_line = len(values), lineno
        elif len(values) != width:
            raise MatrixParseError(
                f"row has {len(values)} entries but line {first_line} has {width}", line=lineno
            )
        rows.append(values)
    if not rows:
        raise MatrixParseError("no matrix rows found")
    is_complex = any(isinstance(x, complex) for row in rows for x in row)
    return np.array(rows, dtype=complex if is_complex else float)


def read_matrix(path) -> np.ndarray:
    with open(path, encoding="utf-8") as fh:
        return parse_matrix(fh.read())


def parse_dimension_table(text: str) -> DimensionTable:
    """CSV with a blank first header cell, quantity names across, one row per
    dimension (name first, then exponents)."""
    reader = csv.reader(_io.StringIO(text))
    lines = [(i, [c.strip() for c in row]) for i, row in enumerate(reader, start=1)
             if row and any(c.strip() for c in row) and not row[0].lstrip().startswith("#")]
    if not lines:
        raise MatrixParseError("empty dimension table")
    _, header = lines[0]
    quantities = header[1:]
    if header[0] or not quantities or any(not q for q in quantities):
        raise MatrixParseError("header must list quantity names after a blank first cell", line=lines[0][0])
    dims, exps = [], []
    for lineno, row in lines[1:]:
        if len(row) != len(header):
            raise MatrixParseError(f"expected {len(header)} cells, got {len(row)}", line=lineno)
        values = []
        for tok in row[1:]:
            try:
                val = parse_scalar(tok)
            except MatrixParseError:
                raise MatrixParseError(f"malformed exponent {tok!r}", line=lineno, token=tok) from None
            if isinstance(val, complex):
                raise MatrixParseError(f"complex exponent {tok!r}", line=lineno, token=tok)
            values.append(val)
        dims.append(row[0])
        exps.append(values)
    if not dims:
        raise MatrixParseError("dimension table has no dimension rows")
    return DimensionTable(dims, quantities, np.array(exps, dtype=float))


def read_dimension_table(path) -> DimensionTable:
    with open(path, encoding="utf-8", newline="") as fh:
        return parse_dimension_table(fh.read())


# -- rendering ----------------------------------------------------------------

def format_real(x: float) -> str:
    x = float(x)
    if x == 0.0:
        return "0"
    if x.is_integer() and abs(x) < 1e16:
        return str(int(x))
    return repr(x)


def format_scalar(x) -> str:
    """Full-precision text that :func:`parse_scalar` reads back exactly."""
    if isinstance(x, (complex, np.complexfloating)):
        z = complex(x)
        if z.imag == 0.0:
            return format_real(z.real)
        im = format_real(abs(z.imag))
        sign = "-" if z.imag < 0 else "+"
        if z.real == 0.0:
            return f"{'-' if sign == '-' else ''}{im}i"
        return f"{format_real(z.real)}{sign}{im}i"
    return format_real(x)


def format_snapped(x, max_den: int = 64) -> str:
    """Display-only rendering: fractions where an entry snaps, else full precision."""
    z = complex(x)
    re_q = snap_rational(z.real, max_den)
    re_txt = str(re_q) if re_q is not None else format_real(z.real)
    if z.imag == 0.0:
        return re_txt
    im_q = snap_rational(abs(z.imag), max_den)
    im_txt = str(im_q) if im_q is not None else format_real(abs(z.imag))
    sign = "-" if z.imag < 0 else "+"
    if re_q == 0:
        return f"{'-' if sign == '-' else ''}{im_txt}i"
    return f"{re_txt}{sign}{im_txt}i"


def format_matrix(M: np.ndarray, snap: int | None = None) -> str:
    cells = [[format_snapped(x, snap) if snap else format_scalar(x) for x in row] for row in M]
    if not cells:
        return ""
    widths = [max(len(r[j]) for r in cells) for j in range(len(cells[0]))]
    return "\n".join("  ".join(c.rjust(w) for c, w in zip(row, widths)) for row in cells)


def matrix_to_json(M: np.ndarray) -> list:
    """Nested lists; real entries as JSON numbers, complex ones as ``a+bi`` strings."""
    M = np.asarray(M)
    if np.iscomplexobj(M):
        return [[format_scalar(complex(x)) for x in row] for row in M]
    return [[float(x) + 0.0 for x in row] for row in M]


def matrix_from_json(data) -> np.ndarray:
    if any(isinstance(x, str) for row in data for x in row):
        return np.array([[complex(parse_scalar(x)) if isinstance(x, str) else complex(x) for x in row]
                         for row in data])
    return np.array(data, dtype=float)


def normal_form_report(result, wall_time: float | None = None) -> dict:
    stats = result.stats.as_dict()
    if wall_time is not None:
        stats["wall_time"] = wall_time
    return {
        "columns": matrix_to_json(result.columns),
        "zero_patterns": [str(p) for p in result.patterns],
        "theta": [k.as_dict() for k in result.keys],
        "algorithm": result.algorithm,
        "stats": stats,
    }


def dumps(report: dict) -> str:
    return json.dumps(report, indent=2)
