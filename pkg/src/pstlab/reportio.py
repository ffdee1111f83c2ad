"""Chain spec parsing and deterministic report serialization.

Specs and reports are JSON documents.  Floats are written with 17
significant digits so that every value round-trips exactly.
"""

import csv
import io
import json
import math
import os
import tempfile

import numpy as np

from .errors import ValidationError
from .orthopoly import KrawtchoukParams, RecurrenceCoefficients, krawtchouk_coefficients
from .spectral import JacobiMatrix, eigendecompose, jacobi_from_spectrum, mirror_weights
from .surgery import surgery_chain

VARIANTS = ("explicit", "krawtchouk", "spectrum", "surgery", "xkrawtchouk")


def _fmt_float(v):
    if not math.isfinite(v):
        raise ValueError(f"cannot serialize non-finite float {v!r}")
    s = f"{v:.17g}"
    if s.lstrip("-").isdigit():
        s += ".0"
    return s


def _plain(obj):
    if isinstance(obj, np.ndarray):
        return [_plain(v) for v in obj.tolist()]
    if isinstance(obj, np.generic):
        return obj.item()
    if isinstance(obj, dict):
        return {str(k): _plain(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_plain(v) for v in obj]
    return obj


def dumps(obj, indent=2):
    """JSON text with fixed float formatting and insertion-ordered keys."""

    def enc(o, level):
        pad = " " * (indent * (level + 1))
        end = " " * (indent * level)
        if o is None:
            return "null"
        if o is True:
            return "true"
        if o is False:
            return "false"
        if isinstance(o, int):
            return str(o)
        if isinstance(o, float):
            return _fmt_float(o)
        if isinstance(o, str):
            return json.dumps(o)
        if isinstance(o, list):
            if not o:
                return "[]"
            if all(not isinstance(v, (list, dict)) for v in o):
                return "[" + ", ".join(enc(v, level + 1) for v in o) + "]"
            return "[\n" + ",\n".join(pad + enc(v, level + 1) for v in o) + "\n" + end + "]"
        if isinstance(o, dict):
            if not o:
                return "{}"
            items = (pad + json.dumps(k) + ": " + enc(v, level + 1) for k, v in o.items())
            return "{\n" + ",\n".join(items) + "\n" + end + "}"
        raise TypeError(f"cannot serialize {type(o).__name__}")

    return enc(_plain(obj), 0) + "\n"


def write_atomic(path, text):
    """Write ``text`` to ``path`` via a temporary file and rename."""
    directory = os.path.dirname(os.path.abspath(path))
    fd, tmp = tempfile.mkstemp(dir=directory, prefix=".pstlab-", suffix=".tmp")
    try:
        with os.fdopen(fd, "w", newline="") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def csv_text(header, rows):
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    for row in rows:
        writer.writerow([_fmt_float(float(v)) if isinstance(v, (float, np.floating)) else v
                         for v in row])
    return buf.getvalue()


def load_spec(path):
    """Parse a chain spec file, reporting JSON errors with line and column."""
    try:
        with open(path) as fh:
            text = fh.read()
    except OSError as exc:
        raise ValidationError(f"{path}: cannot read spec ({exc.strerror})") from exc
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ValidationError(f"{path}:{exc.lineno}:{exc.colno}: {exc.msg}") from exc
    validate_spec(doc)
    return doc


def _numbers(block, key, where, length=None):
    if key not in block:
        raise ValidationError(f"{where}.{key}: missing field")
    vals = block[key]
    if not isinstance(vals, list):
        raise ValidationError(f"{where}.{key}: expected a list of numbers")
    for i, v in enumerate(vals):
        if isinstance(v, bool) or not isinstance(v, (int, float)) or not math.isfinite(v):
            raise ValidationError(f"{where}.{key}[{i}]: not a finite number")
    if length is not None and len(vals) != length:
        raise ValidationError(f"{where}.{key}: expected {length} entries, got {len(vals)}")
    return [float(v) for v in vals]


def _number(block, key, where):
    if key not in block:
        raise ValidationError(f"{where}.{key}: missing field")
    v = block[key]
    if isinstance(v, bool) or not isinstance(v, (int, float)) or not math.isfinite(v):
        raise ValidationError(f"{where}.{key}: not a finite number")
    return v


def validate_spec(doc, where="spec"):
    if not isinstance(doc, dict):
        raise ValidationError(f"{where}: expected an object")
    present = [k for k in VARIANTS if k in doc]
    unknown = [k for k in doc if k not in VARIANTS]
    if unknown:
        raise ValidationError(f"{where}: unknown field(s) {', '.join(unknown)}")
    if len(present) != 1:
        raise ValidationError(f"{where}: exactly one of {', '.join(VARIANTS)} is required")
    kind = present[0]
    block = doc[kind]
    here = f"{where}.{kind}"
    if not isinstance(block, dict):
        raise ValidationError(f"{here}: expected an object")
    if kind == "explicit":
        diag = _numbers(block, "diag", here)
        if "offdiag" in block or len(diag) != 1:
            _numbers(block, "offdiag", here, len(diag) - 1)
    elif kind == "krawtchouk":
        _number(block, "p", here)
        M = _number(block, "M", here)
        if int(M) != M:
            raise ValidationError(f"{here}.M: expected an integer")
        norm = block.get("normalization", "orthonormal")
        if norm not in ("monic", "orthonormal"):
            raise ValidationError(f"{here}.normalization: expected 'monic' or 'orthonormal'")
    elif kind == "spectrum":
        ev = _numbers(block, "eigenvalues", here)
        w = block.get("weights", "mirror")
        if w != "mirror":
            _numbers(block, "weights", here, len(ev))
    elif kind == "surgery":
        if "base" not in block:
            raise ValidationError(f"{here}.base: missing field")
        validate_spec(block["base"], f"{here}.base")
        rm = block.get("remove", [])
        if not isinstance(rm, list) or any(isinstance(i, bool) or not isinstance(i, int) for i in rm):
            raise ValidationError(f"{here}.remove: expected a list of integers")
    elif kind == "xkrawtchouk":
        N = _number(block, "N", here)
        if int(N) != N:
            raise ValidationError(f"{here}.N: expected an integer")
        _number(block, "p", here)


def spec_kind(doc):
    return next(k for k in VARIANTS if k in doc)


def build_chain(doc):
    """JacobiMatrix described by a (non-exceptional) chain spec."""
    kind = spec_kind(doc)
    block = doc[kind]
    if kind == "explicit":
        return JacobiMatrix(RecurrenceCoefficients(tuple(block.get("offdiag", [])), tuple(block["diag"])))
    if kind == "krawtchouk":
        return JacobiMatrix(krawtchouk_coefficients(KrawtchoukParams(block["p"], block["M"])))
    if kind == "spectrum":
        ev = np.array(block["eigenvalues"], dtype=float)
        w = block.get("weights", "mirror")
        w = mirror_weights(ev) if w == "mirror" else np.array(w, dtype=float)
        return jacobi_from_spectrum(ev, w)
    if kind == "surgery":
        chain, _ = surgery_chain(build_chain(block["base"]), block.get("remove", []))
        return chain
    raise ValidationError(f"spec variant '{kind}' does not describe a Jacobi chain")


def chain_block(J):
    d = eigendecompose(J)
    return (
        {"size": J.size, "offdiag": J.offdiag, "diag": J.diag},
        {"eigenvalues": d.eigenvalues, "weights": d.weights},
        d,
    )
