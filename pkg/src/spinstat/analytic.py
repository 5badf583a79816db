"""Branch points of E(p) in the complex momentum plane.

E^2 restricted to a ray is an exact rational function Q(p). Its zeros and
poles of odd multiplicity are the finite branch points of E = sqrt(Q);
monodromy of sqrt(Q) around each candidate confirms them numerically.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import List, Optional

import numpy as np

from .field_model import FieldSpec
from .ratfunc import RationalFunc1, squarefree_decomposition
from .spin_algebra import sigma_values

CLUSTER_TOL = 1e-7


class AnalyticError(ArithmeticError):
    pass


def find_roots(poly, tol: float = CLUSTER_TOL) -> List[tuple]:
    """Roots of a polynomial (coefficients highest power first) with multiplicities.

    Companion-matrix eigenvalues; eigenvalues within tol*(1+|r|) of a cluster's
    running mean are merged into it and the cluster mean is reported.
    """
    coeffs = np.trim_zeros(np.asarray(poly, dtype=complex), "f")
    if len(coeffs) < 2:
        raise AnalyticError("root finding needs a polynomial of degree >= 1")
    raw = np.roots(coeffs)
    clusters: List[list] = []
    for r in sorted(raw, key=lambda z: (z.real, z.imag)):
        for c in clusters:
            centre = np.mean(c)
            if abs(r - centre) <= tol * (1 + abs(centre)):
                c.append(r)
                break
        else:
            clusters.append([r])
    return [(complex(np.mean(c)), len(c)) for c in clusters]


def _exact_roots(coeffs_ascending) -> List[tuple]:
    """(root, multiplicity) using exact square-free factors, each solved numerically."""
    out = []
    for factor, mult in squarefree_decomposition(coeffs_ascending):
        poly = [complex(c) for c in reversed(factor)]
        for root, m in find_roots(poly):
            out.append((root, mult * m))
    return out


@dataclass
class BranchPoint:
    location: complex
    multiplicity: int
    kind: str  # "zero" or "pole"
    monodromy_confirmed: bool = False

    def to_dict(self) -> dict:
        return {
            "re": self.location.real,
            "im": self.location.imag,
            "multiplicity": self.multiplicity,
            "kind": self.kind,
            "monodromy_confirmed": self.monodromy_confirmed,
        }


@dataclass
class BranchPointReport:
    sigma_two: int
    direction: np.ndarray
    e_squared: RationalFunc1
    finite_branch_points: List[BranchPoint]
    branch_at_infinity: bool
    even_points: List[tuple] = field(default_factory=list)
    ambiguous: bool = False

    @property
    def has_branch_points(self) -> bool:
        return bool(self.finite_branch_points) or self.branch_at_infinity

    @property
    def monodromy_confirmed(self) -> List[bool]:
        return [b.monodromy_confirmed for b in self.finite_branch_points]

    def to_dict(self) -> dict:
        return {
            "sigma_two": self.sigma_two,
            "e_squared": str(self.e_squared),
            "finite": [b.to_dict() for b in sorted(self.finite_branch_points, key=_sort_key)],
            "at_infinity": self.branch_at_infinity,
            "ambiguous": self.ambiguous,
        }


def _sort_key(b: BranchPoint):
    z = b.location
    return (round(z.real, 6), round(z.imag, 6))


def e_squared_on_ray(spec: FieldSpec, sigma_two: int) -> RationalFunc1:
    s = Fraction(sigma_two, 2)
    mp = spec.m_plus.restrict_to_ray(s)
    mm = spec.m_minus.restrict_to_ray(s)
    if spec.two_j % 2:
        return mp * mp + mm * mm
    return mp * mp - mm * mm


def monodromy_check(q: RationalFunc1, center: complex, radius: Optional[float] = None, n_points: int = 64) -> bool:
    """Continue sqrt(q) once around a circle about ``center``; True if it changes sign.

    The radius defaults to half the distance to the nearest other zero or pole
    of q (or 1 if there is none).
    """
    center = complex(center)
    if radius is None:
        others = []
        for arr in (q.num_array(), q.den_array()):
            if len(np.trim_zeros(arr, "f")) > 1:
                others.extend(np.roots(arr))
        dists = [abs(z - center) for z in others if abs(z - center) > 1e-6 * (1 + abs(center))]
        radius = 0.5 * min(dists) if dists else 1.0
    if radius < 1e-10 * (1 + abs(center)):
        raise AnalyticError(f"monodromy contour radius underflow at {center}")
    theta = 2 * np.pi * np.arange(n_points + 1) / n_points
    values = [q.evaluate(center + radius * np.exp(1j * t)) for t in theta]
    root = np.sqrt(complex(values[0]))
    start = root
    for val in values[1:]:
        cand = np.sqrt(complex(val))
        root = cand if abs(cand - root) <= abs(cand + root) else -cand
    scale = abs(start)
    if abs(root + start) < 1e-6 * scale:
        return True
    if abs(root - start) < 1e-6 * scale:
        return False
    raise AnalyticError(f"monodromy continuation around {center} did not close")


def branch_points(spec: FieldSpec, sigma_two: int, direction=(0.0, 0.0, 1.0), tol: float = CLUSTER_TOL) -> BranchPointReport:
    """Odd-multiplicity zeros/poles of E^2 on the ray of helicity sigma."""
    q = e_squared_on_ray(spec, sigma_two)
    if q.is_zero():
        raise AnalyticError("E^2 restricted to the ray is identically zero")
    points, even = [], []
    for coeffs, kind in ((q.num, "zero"), (q.den, "pole")):
        for root, mult in _exact_roots(coeffs):
            if mult % 2:
                points.append(BranchPoint(root, mult, kind))
            else:
                even.append((root, mult, kind))
    locs = [b.location for b in points] + [e[0] for e in even]
    ambiguous = any(
        abs(a - b) <= tol * (1 + abs(a)) for i, a in enumerate(locs) for b in locs[i + 1:]
    )
    for b in points:
        try:
            b.monodromy_confirmed = monodromy_check(q, b.location)
        except AnalyticError:
            b.monodromy_confirmed = False
            ambiguous = True
    deg_n, deg_d = q.degree()
    return BranchPointReport(
        sigma_two,
        np.asarray(direction, dtype=float),
        q,
        points,
        (deg_n - deg_d) % 2 == 1,
        even,
        ambiguous,
    )


def all_branch_points(spec: FieldSpec, direction=(0.0, 0.0, 1.0)) -> List[BranchPointReport]:
    return [branch_points(spec, s, direction) for s in sigma_values(spec.two_j)]


# ---------------------------------------------------------------------------
# corollary: branch points force the spin-statistics connection


@dataclass
class Link:
    name: str
    antecedent: bool
    consequent: bool

    @property
    def holds(self) -> bool:
        return (not self.antecedent) or self.consequent

    def to_dict(self) -> dict:
        return {"name": self.name, "antecedent": self.antecedent, "consequent": self.consequent, "holds": self.holds}


@dataclass
class CorollaryReport:
    links: List[Link]
    verdict: str
    lambda_dimension: int
    branch_reports: List[BranchPointReport]
    perfect_square_ok: bool

    @property
    def has_branch_points(self) -> bool:
        return any(r.has_branch_points for r in self.branch_reports)

    @property
    def vacuous(self) -> bool:
        return not self.has_branch_points

    @property
    def holds(self) -> bool:
        return all(link.holds for link in self.links) and self.perfect_square_ok

    def to_dict(self) -> dict:
        return {
            "holds": self.holds,
            "vacuous": self.vacuous,
            "verdict": self.verdict,
            "lambda_dimension": self.lambda_dimension,
            "perfect_square_ok": self.perfect_square_ok,
            "links": [link.to_dict() for link in self.links],
        }


def verify_corollary(spec: FieldSpec, seed: int = 0, verdict=None) -> CorollaryReport:
    """Check branch points => M- nonzero => unique Lambda => Bose iff integer spin."""
    from .quantization import BOSE, decide_statistics

    if verdict is None:
        verdict = decide_statistics(spec, seed=seed)
    reports = all_branch_points(spec)
    has_bp = any(r.has_branch_points for r in reports)
    m_nonzero = not spec.m_minus_vanishes()
    dim1 = verdict.lambda_space.dimension == 1
    parity_ok = (verdict.kind == BOSE) == (spec.two_j % 2 == 0) and verdict.kind != "arbitrary"
    links = [
        Link("branch_points => M- nonzero", has_bp, m_nonzero),
        Link("M- nonzero => Lambda unique", m_nonzero, dim1),
        Link("Lambda unique => spin-statistics", dim1, parity_ok),
    ]
    perfect_square_ok = m_nonzero or not has_bp
    return CorollaryReport(links, verdict.kind, verdict.lambda_space.dimension, reports, perfect_square_ok)
