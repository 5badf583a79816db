"""Random low-degree field specifications for property tests and sweeps.

M- is a random polynomial of total degree <= 2 in (x, y). For integer spin,
M+ is built to dominate it on the real axis: every monomial of degree <= 2
obeys |x^i y^k| <= j^k (1 + p^4), so M+ = (C + 1)(1 + x^2) + ... with C the
weighted coefficient sum of M- keeps M+^2 - M-^2 > 0 and M+ > 0.
"""
from __future__ import annotations

from fractions import Fraction

import numpy as np

from .field_model import FieldSpec
from .ratfunc import RationalFunc2

MONOMIALS = [(0, 0), (1, 0), (0, 1), (2, 0), (1, 1), (0, 2)]


def _coef(rng, lo=-3, hi=3, den=4) -> Fraction:
    return Fraction(int(rng.integers(lo * den, hi * den + 1)), den)


def random_poly(rng, density: float = 0.6) -> RationalFunc2:
    terms = {m: _coef(rng) for m in MONOMIALS if rng.random() < density}
    return RationalFunc2(terms)


def _bound(f: RationalFunc2, two_j: int) -> Fraction:
    j = Fraction(two_j, 2)
    return sum((abs(c) * max(j, 1) ** k for (i, k), c in f.num.items()), Fraction(0))


def random_spec(rng, two_j: int, zero_m_minus: bool = False) -> FieldSpec:
    """A spectrally real, gapped spec with M+ dominating M-."""
    if zero_m_minus:
        m_minus = RationalFunc2.const(0)
    else:
        # redraw until M- is nonzero on some helicity ray (y-only terms vanish for spin 0)
        m_minus = random_poly(rng)
        while FieldSpec(two_j, RationalFunc2.const(1), m_minus).m_minus_vanishes():
            m_minus = random_poly(rng)
    y_part = RationalFunc2({m: _coef(rng) for m in ((0, 1), (1, 1), (0, 2)) if rng.random() < 0.5})
    bound = _bound(m_minus, two_j) + _bound(y_part, two_j) + 1 + Fraction(int(rng.integers(0, 4)), 2)
    x_coef = Fraction(int(rng.integers(0, 9)), 4)
    m_plus = bound * (1 + RationalFunc2.x() ** 2) + x_coef * RationalFunc2.x() + y_part
    return FieldSpec(two_j, m_plus, m_minus, name=f"random-2j{two_j}")


def random_specs(n: int, seed: int = 0, max_two_j: int = 6, zero_m_minus: bool = False):
    rng = np.random.default_rng(seed)
    return [random_spec(rng, int(rng.integers(0, max_two_j + 1)), zero_m_minus) for _ in range(n)]
