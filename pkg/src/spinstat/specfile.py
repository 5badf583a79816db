"""TOML spec files describing a free field.

Example::

    two_j = 1
    m_plus = "m0"
    m_minus = "2*y"

    [params]
    m0 = 4          # ints, decimals or "p/q" strings; all kept exact

    [options]       # optional
    tol = 1e-10
    samples = 8
    seed = 0
"""
from __future__ import annotations

import re
from fractions import Fraction
from pathlib import Path

try:
    import tomllib as tomli
except ImportError:  # Python 3.10
    import tomli

from .config import RunConfig
from .field_model import FieldSpec
from .ratfunc import ExpressionError, parse_expr


class SpecFileError(ValueError):
    def __init__(self, message: str, line: int = 0, column: int = 0):
        where = f"line {line}, column {column}: " if line else ""
        super().__init__(where + message)
        self.line = line
        self.column = column


def _as_fraction(name, value) -> Fraction:
    if isinstance(value, bool):
        raise SpecFileError(f"parameter {name!r} must be a number")
    if isinstance(value, (int, float)):
        return Fraction(repr(value)) if isinstance(value, float) else Fraction(value)
    if isinstance(value, str):
        try:
            return Fraction(value.strip())
        except ValueError:
            pass
    raise SpecFileError(f"parameter {name!r} is not a rational number: {value!r}")


def _locate(text: str, key: str):
    """(line, column of first char inside the quoted value) for ``key = "..."``."""
    for i, line in enumerate(text.splitlines(), start=1):
        m = re.match(rf'\s*{re.escape(key)}\s*=\s*(["\'])', line)
        if m:
            return i, m.end() + 1
    return 0, 0


def parse_spec_text(text: str, name: str = "custom"):
    """Parse spec-file text into (FieldSpec, RunConfig)."""
    try:
        data = tomli.loads(text)
    except tomli.TOMLDecodeError as exc:
        m = re.search(r"line (\d+), column (\d+)", str(exc))
        line, col = (int(m.group(1)), int(m.group(2))) if m else (0, 0)
        raise SpecFileError(f"TOML syntax error: {exc}", line, col) from None

    for key in ("two_j", "m_plus", "m_minus"):
        if key not in data:
            raise SpecFileError(f"missing required key {key!r}")
    two_j = data["two_j"]
    if not isinstance(two_j, int) or isinstance(two_j, bool) or two_j < 0:
        raise SpecFileError("two_j must be a nonnegative integer", *_locate(text, "two_j"))
    params = {k: _as_fraction(k, v) for k, v in data.get("params", {}).items()}

    funcs = {}
    for key in ("m_plus", "m_minus"):
        expr = data[key]
        if not isinstance(expr, str):
            expr = str(expr)
        try:
            funcs[key] = parse_expr(expr, params)
        except ExpressionError as exc:
            line, col = _locate(text, key)
            raise SpecFileError(f"{key}: {exc.message}", line, col + exc.pos if line else exc.pos + 1) from None

    opts = data.get("options", {})
    config = RunConfig(
        tol=float(opts.get("tol", RunConfig.tol)),
        samples=int(opts.get("samples", RunConfig.samples)),
        seed=int(opts.get("seed", RunConfig.seed)),
    )
    spec = FieldSpec(
        two_j,
        funcs["m_plus"],
        funcs["m_minus"],
        params,
        bool(data.get("neutral", False)),
        str(data.get("name", name)),
    )
    return spec, config


def load_spec_file(path) -> tuple:
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise SpecFileError(f"cannot read {path}: {exc}") from None
    return parse_spec_text(text, name=path.stem)
