"""Text formats for matrices and states, and text/JSON result output.

Matrix and state files::

    # comment to end of line
    2 3                 header: rows cols (or dim_a dim_b)
    scale 0.5           optional, multiplies every entry
    1 1 i
    1 -1 i              entries, row-major, any whitespace layout

Complex literals are ``[sign]real``, ``[sign][imag]i`` or
``[sign]real(+|-)[imag]i``; a missing imaginary magnitude means 1.
All numbers are written with 17 significant digits so that text and JSON
output reparse to the same doubles.
"""

from __future__ import annotations

import cmath
import json
import re
from typing import Iterator

import numpy as np

from .errors import DimensionError, ParseError
from .linalg_core import frozen
from .phase_svd import SvdFactorization
from .schmidt import BipartiteState, SchmidtDecomposition

_FLOAT = r"(?:[0-9]+\.?[0-9]*|\.[0-9]+)(?:[eE][+-]?[0-9]+)?"
_COMPLEX_RE = re.compile(
    rf"(?P<re>[+-]?{_FLOAT})"
    rf"|(?P<isign>[+-]?)(?P<imag>{_FLOAT})?i"
    rf"|(?P<re2>[+-]?{_FLOAT})(?P<isign2>[+-])(?P<imag2>{_FLOAT})?i"
)
_SIGNED_FLOAT_RE = re.compile(rf"[+-]?{_FLOAT}")
_SIZE_RE = re.compile(r"[1-9][0-9]*")

SVD_KEYS = ("U", "sigma", "V", "d", "phase_u", "phase_v", "residual", "convention")
SCHMIDT_KEYS = ("coefficients", "basis_a", "basis_b", "rank", "entropy_bits")


def _imag_part(sign: str, magnitude: str | None) -> float:
    value = float(magnitude) if magnitude else 1.0
    return -value if sign == "-" else value


def parse_complex(token: str, *, line: int | None = None, column: int | None = None) -> complex:
    m = _COMPLEX_RE.fullmatch(token)
    if m is None:
        raise ParseError(f"malformed complex literal {token!r}", line, column)
    if m["re"] is not None:
        z = complex(float(m["re"]), 0.0)
    elif m["re2"] is not None:
        z = complex(float(m["re2"]), _imag_part(m["isign2"], m["imag2"]))
    else:
        z = complex(0.0, _imag_part(m["isign"], m["imag"]))
    if not cmath.isfinite(z):
        raise ParseError(f"literal {token!r} overflows a double", line, column)
    return z


def format_real(x: float) -> str:
    return format(float(x), ".17g")


def format_complex(z: complex) -> str:
    """17-digit literal in the same grammar ``parse_complex`` reads."""
    z = complex(z)
    return f"{format_real(z.real)}{format(z.imag, '+.17g')}i"


def _tokens(text: str) -> Iterator[tuple[int, list[tuple[int, str]]]]:
    """Yield (line number, [(column, token), ...]) for non-blank lines."""
    for lineno, raw in enumerate(text.splitlines(), start=1):
        body = raw.split("#", 1)[0]
        toks = [(m.start() + 1, m.group()) for m in re.finditer(r"\S+", body)]
        if toks:
            yield lineno, toks


def _parse_body(lines, count: int, what: str) -> np.ndarray:
    scale = None
    scale_line = None
    values: list[complex] = []
    last_line = 0
    for lineno, toks in lines:
        last_line = lineno
        if toks[0][1] == "scale":
            if values or scale is not None:
                raise ParseError("'scale' must appear once, before the entries", lineno, toks[0][0])
            if len(toks) != 2 or not _SIGNED_FLOAT_RE.fullmatch(toks[1][1]):
                raise ParseError("expected 'scale FLOAT'", lineno, toks[0][0])
            scale = float(toks[1][1])
            scale_line = lineno
            if not np.isfinite(scale):
                raise ParseError("scale overflows a double", lineno, toks[1][0])
            continue
        for col, tok in toks:
            if len(values) == count:
                raise ParseError(f"too many entries for {what}, expected {count}", lineno, col)
            values.append(parse_complex(tok, line=lineno, column=col))
    if len(values) != count:
        raise ParseError(f"{what} needs {count} entries, found {len(values)}", last_line or None)
    out = np.array(values, dtype=np.complex128)
    if scale is not None:
        with np.errstate(over="ignore", invalid="ignore"):
            out = out * scale
        if not np.all(np.isfinite(out)):
            raise ParseError("scaled entries overflow a double", scale_line)
    return out


def _parse_header(lines) -> tuple[int, int, int]:
    try:
        lineno, toks = next(lines)
    except StopIteration:
        raise ParseError("empty input: missing header") from None
    if len(toks) != 2 or not all(_SIZE_RE.fullmatch(t) for _, t in toks):
        raise ParseError("header must be two positive integers", lineno, toks[0][0])
    return lineno, int(toks[0][1]), int(toks[1][1])


def parse_matrix(text: str) -> np.ndarray:
    lines = _tokens(text)
    _, rows, cols = _parse_header(lines)
    entries = _parse_body(lines, rows * cols, f"a {rows}x{cols} matrix")
    return frozen(entries.reshape(rows, cols))


def parse_state(text: str, dims: tuple[int, int] | None = None) -> BipartiteState:
    """Read a state file.

    Without ``dims`` the file must start with a ``dim_a dim_b`` header. With
    ``dims`` the file is read headerless and must hold exactly
    ``dim_a * dim_b`` amplitudes.
    """
    lines = _tokens(text)
    if dims is None:
        _, dim_a, dim_b = _parse_header(lines)
    else:
        dim_a, dim_b = (int(x) for x in dims)
        if dim_a < 1 or dim_b < 1:
            raise ParseError(f"dims must be positive, got {dims}")
    amps = _parse_body(lines, dim_a * dim_b, f"a {dim_a}x{dim_b} state")
    try:
        return BipartiteState(dim_a, dim_b, amps)
    except DimensionError as exc:
        raise ParseError(str(exc)) from exc


def emit_matrix(a) -> str:
    a = np.asarray(a, dtype=np.complex128)
    rows = [" ".join(format_complex(z) for z in row) for row in a]
    return f"{a.shape[0]} {a.shape[1]}\n" + "\n".join(rows) + "\n"


def emit_state(psi: BipartiteState) -> str:
    return emit_matrix(psi.amplitudes.reshape(psi.dim_a, psi.dim_b))


# -- results -----------------------------------------------------------------


def _json_value(v) -> str:
    if isinstance(v, str):
        return json.dumps(v)
    if isinstance(v, (bool, np.bool_)):
        raise TypeError("booleans are not part of the result schema")
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    if isinstance(v, (complex, np.complexfloating)):
        return f"[{format_real(v.real)},{format_real(v.imag)}]"
    if isinstance(v, (float, np.floating)):
        return format_real(v)
    return "[" + ",".join(_json_value(x) for x in v) + "]"


def result_fields(result) -> dict:
    if isinstance(result, SvdFactorization):
        return {
            "U": result.U,
            "sigma": result.sigma,
            "V": result.V,
            "d": result.d,
            "phase_u": result.phase_u,
            "phase_v": result.phase_v,
            "residual": float(result.residual),
            "convention": str(result.convention),
        }
    if isinstance(result, SchmidtDecomposition):
        return {
            "coefficients": result.coefficients,
            "basis_a": result.basis_a,
            "basis_b": result.basis_b,
            "rank": int(result.schmidt_rank),
            "entropy_bits": float(result.entropy_bits),
        }
    raise TypeError(f"cannot emit {type(result).__name__}")


def _emit_json(fields: dict) -> str:
    body = ",\n".join(f"  {json.dumps(k)}: {_json_value(v)}" for k, v in fields.items())
    return "{\n" + body + "\n}\n"


def _text_row(values) -> str:
    return "  ".join(format_complex(z) if np.iscomplexobj(values) else format_real(z) for z in values)


def _emit_text(fields: dict) -> str:
    out = []
    for key, v in fields.items():
        if isinstance(v, np.ndarray) and v.ndim == 2:
            out.append(f"{key} ({v.shape[0]}x{v.shape[1]}):")
            out.extend("  " + _text_row(row) for row in v)
        elif isinstance(v, np.ndarray):
            out.append(f"{key}: {_text_row(v)}")
        elif isinstance(v, float):
            out.append(f"{key}: {format_real(v)}")
        else:
            out.append(f"{key}: {v}")
    return "\n".join(out) + "\n"


def emit_result(result, fmt: str = "text") -> str:
    """Serialize an SVD or Schmidt result.

    JSON keys come in a fixed order and complex numbers are ``[re, im]``
    pairs. The text form lists the same fields, one per line, with matrices
    row by row.
    """
    fields = result_fields(result)
    if fmt == "json":
        return _emit_json(fields)
    if fmt == "text":
        return _emit_text(fields)
    raise ValueError(f"unknown output format {fmt!r}")


def _complex_array(v) -> np.ndarray:
    a = np.asarray(v, dtype=float)
    out = np.empty(a.shape[:-1], dtype=np.complex128)
    # assign parts separately: arithmetic with 1j would lose signed zeros
    out.real = a[..., 0]
    out.imag = a[..., 1]
    return out


_COMPLEX_KEYS = {"U", "V", "d", "phase_u", "phase_v", "basis_a", "basis_b"}


def load_result(text: str) -> dict:
    """Parse JSON emitted by ``emit_result`` back into numpy values."""
    # parse_int=float keeps "-0" as -0.0
    raw = json.loads(text, parse_int=float)
    out = {}
    for key, v in raw.items():
        if key in _COMPLEX_KEYS:
            out[key] = _complex_array(v)
        elif key in ("sigma", "coefficients"):
            out[key] = np.asarray(v, dtype=float)
        elif key == "rank":
            out[key] = int(v)
        else:
            out[key] = v
    return out
