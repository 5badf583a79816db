"""Exact rational functions in x = p^2 and y = p*sigma.

Coefficients are :class:`fractions.Fraction` throughout; the only floating
point operation is :meth:`RationalFunc2.evaluate`. Polynomials are sparse
dicts mapping an exponent pair ``(i, k)`` (for ``x**i * y**k``) to a nonzero
coefficient.
"""
from __future__ import annotations

import re
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, Mapping, Tuple, Union

import numpy as np

Monomial = Tuple[int, int]
Poly2 = Dict[Monomial, Fraction]
Number = Union[int, Fraction]

POLE_TOL = 1e-12


class ExpressionError(ValueError):
    """Malformed expression; ``pos`` is the 0-based character offset."""

    def __init__(self, message: str, pos: int = 0):
        super().__init__(f"{message} (at column {pos + 1})")
        self.message = message
        self.pos = pos


class PoleError(ArithmeticError):
    pass


# ---------------------------------------------------------------------------
# sparse bivariate polynomials


def _clean(p: Mapping[Monomial, Fraction]) -> Poly2:
    return {m: Fraction(c) for m, c in p.items() if c != 0}


def _padd(a: Poly2, b: Poly2, sign: int = 1) -> Poly2:
    out = dict(a)
    for m, c in b.items():
        out[m] = out.get(m, Fraction(0)) + sign * c
    return _clean(out)


def _pmul(a: Poly2, b: Poly2) -> Poly2:
    out: Poly2 = {}
    for (i1, k1), c1 in a.items():
        for (i2, k2), c2 in b.items():
            m = (i1 + i2, k1 + k2)
            out[m] = out.get(m, Fraction(0)) + c1 * c2
    return _clean(out)


def _pscale(a: Poly2, c: Fraction) -> Poly2:
    return _clean({m: c * v for m, v in a.items()})


def _grlex_key(m: Monomial) -> Tuple[int, int]:
    # total degree first, then x-degree
    return (m[0] + m[1], m[0])


def _leading(p: Poly2) -> Monomial:
    return max(p, key=_grlex_key)


def _pdivexact(a: Poly2, b: Poly2):
    """Return a / b if b divides a exactly (grlex division), else None."""
    q: Poly2 = {}
    r = dict(a)
    lb = _leading(b)
    cb = b[lb]
    while r:
        lr = _leading(r)
        if lr[0] < lb[0] or lr[1] < lb[1]:
            return None
        mono = (lr[0] - lb[0], lr[1] - lb[1])
        coef = r[lr] / cb
        q[mono] = coef
        r = _padd(r, _pmul({mono: coef}, b), -1)
    return q


def _is_const(p: Poly2) -> bool:
    return not p or set(p) == {(0, 0)}


def _fmt_coef(c: Fraction) -> str:
    return str(c.numerator) if c.denominator == 1 else f"{c.numerator}/{c.denominator}"


def _fmt_poly(p: Poly2) -> str:
    if not p:
        return "0"
    parts = []
    for m in sorted(p, key=_grlex_key, reverse=True):
        c = p[m]
        factors = []
        if m[0]:
            factors.append("x" if m[0] == 1 else f"x^{m[0]}")
        if m[1]:
            factors.append("y" if m[1] == 1 else f"y^{m[1]}")
        mag = abs(c)
        if not factors:
            body = _fmt_coef(mag)
        elif mag == 1:
            body = "*".join(factors)
        else:
            body = "*".join([_fmt_coef(mag)] + factors)
        sign = "-" if c < 0 else "+"
        parts.append((sign, body))
    first_sign, first = parts[0]
    out = ("-" if first_sign == "-" else "") + first
    for sign, body in parts[1:]:
        out += f" {sign} {body}"
    return out


# ---------------------------------------------------------------------------
# bivariate rational function


@dataclass(frozen=True)
class RationalFunc2:
    """A real rational function of (x, y) with exact rational coefficients.

    Construct through :func:`parse_expr`, :meth:`const`, :meth:`x`, :meth:`y`
    and arithmetic operators; the constructor normalizes so that the
    denominator's grlex-leading coefficient is 1. Common polynomial factors
    are only cancelled when one side divides the other exactly.
    """

    num: Poly2
    den: Poly2 = field(default_factory=lambda: {(0, 0): Fraction(1)})

    def __post_init__(self):
        num = _clean(self.num)
        den = _clean(self.den)
        if not den:
            raise ZeroDivisionError("denominator is the zero polynomial")
        if not num:
            den = {(0, 0): Fraction(1)}
        elif not _is_const(den):
            q = _pdivexact(num, den)
            if q is not None:
                num, den = q, {(0, 0): Fraction(1)}
            elif not _is_const(num):
                q = _pdivexact(den, num)
                if q is not None:
                    num, den = {(0, 0): Fraction(1)}, q
        lead = den[_leading(den)]
        object.__setattr__(self, "num", _pscale(num, 1 / lead))
        object.__setattr__(self, "den", _pscale(den, 1 / lead))

    # constructors
    @classmethod
    def const(cls, c: Number) -> "RationalFunc2":
        return cls({(0, 0): Fraction(c)})

    @classmethod
    def x(cls) -> "RationalFunc2":
        return cls({(1, 0): Fraction(1)})

    @classmethod
    def y(cls) -> "RationalFunc2":
        return cls({(0, 1): Fraction(1)})

    # structure
    def is_zero(self) -> bool:
        return not self.num

    def is_polynomial(self) -> bool:
        return self.den == {(0, 0): Fraction(1)}

    def constant_value(self):
        """The Fraction value if the function is constant, else None."""
        if _is_const(self.num) and _is_const(self.den):
            return self.num.get((0, 0), Fraction(0)) / self.den[(0, 0)]
        return None

    def degree(self) -> Tuple[int, int]:
        """Total degrees (numerator, denominator)."""
        deg = lambda p: max((i + k for i, k in p), default=0)
        return deg(self.num), deg(self.den)

    # arithmetic
    def _coerce(self, other) -> "RationalFunc2":
        if isinstance(other, RationalFunc2):
            return other
        if isinstance(other, (int, Fraction)):
            return RationalFunc2.const(other)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        if self.den == other.den:
            return RationalFunc2(_padd(self.num, other.num), self.den)
        return RationalFunc2(
            _padd(_pmul(self.num, other.den), _pmul(other.num, self.den)),
            _pmul(self.den, other.den),
        )

    __radd__ = __add__

    def __neg__(self):
        return RationalFunc2(_pscale(self.num, Fraction(-1)), self.den)

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return RationalFunc2(_pmul(self.num, other.num), _pmul(self.den, other.den))

    __rmul__ = __mul__

    def __truediv__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        if other.is_zero():
            raise ZeroDivisionError("division by the zero function")
        if self.den == other.den:
            return RationalFunc2(self.num, other.num)
        return RationalFunc2(_pmul(self.num, other.den), _pmul(self.den, other.num))

    def __rtruediv__(self, other):
        return self._coerce(other) / self

    def __pow__(self, n: int):
        if not isinstance(n, int) or n < 0:
            raise ValueError("only nonnegative integer powers are supported")
        out = RationalFunc2.const(1)
        for _ in range(n):
            out = out * self
        return out

    def __eq__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        # cross-multiplied so that uncancelled common factors do not matter
        return not _padd(_pmul(self.num, other.den), _pmul(other.num, self.den), -1)

    def __hash__(self):
        return hash((tuple(sorted(self.num.items())), tuple(sorted(self.den.items()))))

    # evaluation
    def evaluate(self, x: complex, y: complex, tol: float = POLE_TOL) -> complex:
        n = _peval(self.num, x, y)
        d = _peval(self.den, x, y)
        scale = _pscale_abs(self.den, x, y)
        if abs(d) <= tol * max(scale, 1.0):
            raise PoleError(f"pole of {self} at x={x}, y={y}")
        return n / d

    def restrict_to_ray(self, sigma: Number) -> "RationalFunc1":
        """Substitute x -> p**2, y -> sigma*p."""
        sigma = Fraction(sigma)
        return RationalFunc1(_restrict(self.num, sigma), _restrict(self.den, sigma))

    def __str__(self):
        if self.is_polynomial():
            return _fmt_poly(self.num)
        return f"({_fmt_poly(self.num)})/({_fmt_poly(self.den)})"

    def __repr__(self):
        return f"RationalFunc2({str(self)!r})"


def _peval(p: Poly2, x: complex, y: complex) -> complex:
    return sum(complex(c) * x**i * y**k for (i, k), c in p.items()) + 0j


def _pscale_abs(p: Poly2, x: complex, y: complex) -> float:
    return float(sum(abs(float(c)) * abs(x) ** i * abs(y) ** k for (i, k), c in p.items()))


def _restrict(p: Poly2, sigma: Fraction) -> list:
    deg = max((2 * i + k for i, k in p), default=0)
    coeffs = [Fraction(0)] * (deg + 1)
    for (i, k), c in p.items():
        coeffs[2 * i + k] += c * sigma**k
    return coeffs


def combine(a, b, op: str):
    """Exact arithmetic ``a <op> b`` for two rational functions of the same kind."""
    if op == "add":
        return a + b
    if op == "sub":
        return a - b
    if op == "mul":
        return a * b
    if op == "div":
        return a / b
    raise ValueError(f"unknown op {op!r}")


def is_zero(f) -> bool:
    return f.is_zero()


def evaluate(f: RationalFunc2, x: complex, y: complex, tol: float = POLE_TOL) -> complex:
    return f.evaluate(x, y, tol)


def restrict_to_ray(f: RationalFunc2, sigma: Number) -> "RationalFunc1":
    return f.restrict_to_ray(sigma)


# ---------------------------------------------------------------------------
# univariate polynomials (ascending coefficient lists of Fractions)


def _trim(a: list) -> list:
    a = list(a)
    while a and a[-1] == 0:
        a.pop()
    return a


def upoly_add(a: list, b: list, sign: int = 1) -> list:
    n = max(len(a), len(b))
    a = list(a) + [Fraction(0)] * (n - len(a))
    b = list(b) + [Fraction(0)] * (n - len(b))
    return _trim([u + sign * v for u, v in zip(a, b)])


def upoly_mul(a: list, b: list) -> list:
    if not a or not b:
        return []
    out = [Fraction(0)] * (len(a) + len(b) - 1)
    for i, u in enumerate(a):
        for k, v in enumerate(b):
            out[i + k] += u * v
    return _trim(out)


def upoly_divmod(a: list, b: list):
    a, b = _trim(a), _trim(b)
    if not b:
        raise ZeroDivisionError("polynomial division by zero")
    q = [Fraction(0)] * max(len(a) - len(b) + 1, 1)
    r = list(a)
    while len(r) >= len(b) and r:
        shift = len(r) - len(b)
        c = r[-1] / b[-1]
        q[shift] = c
        for i, v in enumerate(b):
            r[i + shift] -= c * v
        r = _trim(r)
    return _trim(q), r


def upoly_monic(a: list) -> list:
    a = _trim(a)
    return [c / a[-1] for c in a] if a else []


def upoly_gcd(a: list, b: list) -> list:
    a, b = _trim(a), _trim(b)
    while b:
        _, r = upoly_divmod(a, b)
        a, b = b, r
    return upoly_monic(a)


def upoly_deriv(a: list) -> list:
    return _trim([i * c for i, c in enumerate(a)][1:])


def squarefree_decomposition(a: list) -> list:
    """Yun's algorithm: monic a = prod_i f_i**i, returned as [(f_i, i), ...].

    Only nonconstant factors are returned. Exact over the rationals.
    """
    a = upoly_monic(a)
    if len(a) <= 1:
        return []
    out = []
    da = upoly_deriv(a)
    g = upoly_gcd(a, da)
    b = upoly_divmod(a, g)[0]
    c = upoly_divmod(da, g)[0]
    d = upoly_add(c, upoly_deriv(b), -1)
    i = 1
    while len(b) > 1:
        f = upoly_gcd(b, d)
        if len(f) > 1:
            out.append((f, i))
        b = upoly_divmod(b, f)[0]
        c = upoly_divmod(d, f)[0]
        d = upoly_add(c, upoly_deriv(b), -1)
        i += 1
    return out


@dataclass(frozen=True)
class RationalFunc1:
    """Univariate rational function in p, reduced by the exact polynomial GCD.

    ``num`` and ``den`` are ascending coefficient lists; ``den`` is monic.
    """

    num: list
    den: list

    def __post_init__(self):
        num = _trim([Fraction(c) for c in self.num])
        den = _trim([Fraction(c) for c in self.den])
        if not den:
            raise ZeroDivisionError("denominator is the zero polynomial")
        if not num:
            den = [Fraction(1)]
        else:
            g = upoly_gcd(num, den)
            if len(g) > 1:
                num = upoly_divmod(num, g)[0]
                den = upoly_divmod(den, g)[0]
        lead = den[-1]
        object.__setattr__(self, "num", [c / lead for c in num])
        object.__setattr__(self, "den", [c / lead for c in den])

    @classmethod
    def poly(cls, coeffs) -> "RationalFunc1":
        return cls(list(coeffs), [Fraction(1)])

    def is_zero(self) -> bool:
        return not self.num

    def degree(self) -> Tuple[int, int]:
        return len(self.num) - 1, len(self.den) - 1

    def evaluate(self, p: complex) -> complex:
        n = np.polyval([complex(c) for c in reversed(self.num)], p) if self.num else 0j
        d = np.polyval([complex(c) for c in reversed(self.den)], p)
        return complex(n / d)

    def num_array(self) -> np.ndarray:
        """Numerator coefficients, highest power first, as floats."""
        return np.array([float(c) for c in reversed(self.num)])

    def den_array(self) -> np.ndarray:
        return np.array([float(c) for c in reversed(self.den)])

    def __add__(self, other: "RationalFunc1"):
        return RationalFunc1(
            upoly_add(upoly_mul(self.num, other.den), upoly_mul(other.num, self.den)),
            upoly_mul(self.den, other.den),
        )

    def __neg__(self):
        return RationalFunc1([-c for c in self.num], self.den)

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other: "RationalFunc1"):
        return RationalFunc1(upoly_mul(self.num, other.num), upoly_mul(self.den, other.den))

    def __truediv__(self, other: "RationalFunc1"):
        if other.is_zero():
            raise ZeroDivisionError("division by the zero function")
        return RationalFunc1(upoly_mul(self.num, other.den), upoly_mul(self.den, other.num))

    def __eq__(self, other):
        if not isinstance(other, RationalFunc1):
            return NotImplemented
        return self.num == other.num and self.den == other.den

    def __hash__(self):
        return hash((tuple(self.num), tuple(self.den)))

    def __str__(self):
        def fmt(a):
            p = {(i, 0): c for i, c in enumerate(a) if c}
            return _fmt_poly(p).replace("x", "p")

        if self.den == [Fraction(1)]:
            return fmt(self.num)
        return f"({fmt(self.num)})/({fmt(self.den)})"


# ---------------------------------------------------------------------------
# expression parser

_TOKEN = re.compile(r"\s*(?:(\d+(?:\.\d*)?|\.\d+)|([A-Za-z_][A-Za-z_0-9]*)|(\*\*|[-+*/^()]))")


def _tokenize(text: str):
    pos = 0
    tokens = []
    while pos < len(text):
        if text[pos:].strip() == "":
            break
        m = _TOKEN.match(text, pos)
        if not m:
            start = pos + len(text[pos:]) - len(text[pos:].lstrip())
            raise ExpressionError(f"unexpected character {text[start]!r}", start)
        start = m.start(m.lastindex)
        kind = ("num", "name", "op")[m.lastindex - 1]
        value = m.group(m.lastindex)
        if value == "**":
            value = "^"
        tokens.append((kind, value, start))
        pos = m.end()
    tokens.append(("end", "", len(text)))
    return tokens


class _Parser:
    """Recursive descent; ``^`` binds tighter than unary minus and is right-associative."""

    def __init__(self, text: str, params: Mapping[str, Number]):
        self.tokens = _tokenize(text)
        self.i = 0
        self.params = params

    def peek(self):
        return self.tokens[self.i]

    def take(self):
        tok = self.tokens[self.i]
        self.i += 1
        return tok

    def parse(self) -> RationalFunc2:
        out = self.expr()
        kind, value, pos = self.peek()
        if kind != "end":
            raise ExpressionError(f"unexpected {value!r}", pos)
        return out

    def expr(self):
        out = self.term()
        while self.peek()[1] in ("+", "-") and self.peek()[0] == "op":
            _, op, _ = self.take()
            rhs = self.term()
            out = out + rhs if op == "+" else out - rhs
        return out

    def term(self):
        out = self.unary()
        while self.peek()[1] in ("*", "/") and self.peek()[0] == "op":
            _, op, pos = self.take()
            rhs = self.unary()
            if op == "*":
                out = out * rhs
            else:
                if rhs.is_zero():
                    raise ExpressionError("division by zero", pos)
                out = out / rhs
        return out

    def unary(self):
        kind, value, _ = self.peek()
        if kind == "op" and value in ("+", "-"):
            self.take()
            inner = self.unary()
            return -inner if value == "-" else inner
        return self.power()

    def power(self):
        base = self.atom()
        kind, value, pos = self.peek()
        if kind == "op" and value == "^":
            self.take()
            exp_pos = self.peek()[2]
            exponent = self.unary()
            n = exponent.constant_value()
            if n is None or n.denominator != 1 or n < 0:
                raise ExpressionError("exponent must be a nonnegative integer", exp_pos)
            return base ** int(n)
        return base

    def atom(self):
        kind, value, pos = self.take()
        if kind == "num":
            return RationalFunc2.const(Fraction(value))
        if kind == "name":
            if value == "x":
                return RationalFunc2.x()
            if value == "y":
                return RationalFunc2.y()
            if value not in self.params:
                raise ExpressionError(f"unknown parameter {value!r}", pos)
            return RationalFunc2.const(Fraction(self.params[value]))
        if kind == "op" and value == "(":
            inner = self.expr()
            k2, v2, p2 = self.take()
            if v2 != ")":
                raise ExpressionError("expected ')'", p2)
            return inner
        if kind == "end":
            raise ExpressionError("unexpected end of expression", pos)
        raise ExpressionError(f"unexpected {value!r}", pos)


def parse_expr(text: str, params: Mapping[str, Number] | None = None) -> RationalFunc2:
    """Parse an expression in x, y and named parameters into a RationalFunc2.

    >>> str(parse_expr("x/(2*m0) + mu", {"m0": 1, "mu": 0}))
    '1/2*x'
    """
    params = {k: Fraction(v) for k, v in (params or {}).items()}
    return _Parser(text, params).parse()
