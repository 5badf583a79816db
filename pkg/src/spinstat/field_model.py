"""Canonical spin-j bispinor field: Omega, S_T, S_C, J and M(p), plus symmetry checks."""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, List, Optional

import numpy as np

from .ratfunc import RationalFunc2
from .spin_algebra import SpinRep, r2_matrix, scalar_func_of_pdotS, spin_matrices


class SpecError(ValueError):
    """A field specification that cannot describe a physical free field."""


@dataclass(frozen=True)
class FieldSpec:
    two_j: int
    m_plus: RationalFunc2
    m_minus: RationalFunc2
    params: Dict[str, Fraction] = field(default_factory=dict)
    neutral: bool = False
    name: str = "custom"

    @property
    def j(self) -> float:
        return self.two_j / 2

    @property
    def integer_spin(self) -> bool:
        return self.two_j % 2 == 0

    def m_minus_vanishes(self) -> bool:
        """M- is zero at every (p^2, p*sigma) the spin allows, not just as a formula.

        For spin 0 the y argument is always 0, so e.g. M- = x*y counts as zero.
        """
        from .spin_algebra import sigma_values

        return all(self.m_minus.restrict_to_ray(Fraction(s, 2)).is_zero() for s in sigma_values(self.two_j))

    def validate(self) -> None:
        if self.two_j < 0:
            raise SpecError("two_j must be nonnegative")
        if self.m_plus.is_zero():
            raise SpecError("M+ is the zero function: the particle has no dynamics")

    def scaled(self, c: Fraction) -> "FieldSpec":
        return FieldSpec(self.two_j, self.m_plus * c, self.m_minus * c, dict(self.params), self.neutral, self.name)

    def to_dict(self) -> dict:
        return {
            "name": self.name,
            "two_j": self.two_j,
            "m_plus": str(self.m_plus),
            "m_minus": str(self.m_minus),
            "params": {k: str(v) for k, v in sorted(self.params.items())},
            "neutral": self.neutral,
        }


def trig(two_j: int) -> tuple:
    """(cos j*pi, sin j*pi) as exact integers."""
    if two_j % 2 == 0:
        return (1 if (two_j // 2) % 2 == 0 else -1), 0
    return 0, (1 if ((two_j - 1) // 2) % 2 == 0 else -1)


def block_rotation(two_j: int) -> np.ndarray:
    """The 2x2 factor [[cos j pi, sin j pi], [-sin j pi, -cos j pi]]."""
    c, s = trig(two_j)
    return np.array([[c, s], [-s, -c]], dtype=float)


def _blocks(small: np.ndarray, inner: np.ndarray) -> np.ndarray:
    # block matrix whose (a, b) block is small[a, b] * inner
    return np.kron(small, inner)


@dataclass(frozen=True)
class CanonicalField:
    spec: FieldSpec
    rep: SpinRep
    omega: np.ndarray
    s_t: np.ndarray
    s_c: np.ndarray
    j_matrix: np.ndarray

    @property
    def dim(self) -> int:
        return 2 * (self.spec.two_j + 1)

    @property
    def cos_sin(self) -> tuple:
        return trig(self.spec.two_j)

    def bispinor_spin(self) -> tuple:
        eye2 = np.eye(2)
        return tuple(np.kron(eye2, s) for s in self.rep.vector)

    def m_blocks(self, p_vec) -> tuple:
        """(M+(p^2, p.S), M-(p^2, p.S)) as (2j+1) matrices."""
        mp = scalar_func_of_pdotS(self.spec.m_plus, p_vec, self.rep)
        mm = scalar_func_of_pdotS(self.spec.m_minus, p_vec, self.rep)
        return mp, mm

    def m_matrix(self, p_vec) -> np.ndarray:
        return m_matrix(self, p_vec)


def build(spec: FieldSpec) -> CanonicalField:
    spec.validate()
    rep = spin_matrices(spec.two_j)
    n = spec.two_j + 1
    eye = np.eye(n, dtype=complex)
    r2 = r2_matrix(spec.two_j)
    jt = block_rotation(spec.two_j)
    omega = _blocks(np.array([[0.0, 1.0], [1.0, 0.0]]), eye)
    s_t = _blocks(np.eye(2), r2)
    s_c = _blocks(jt, r2)
    j_matrix = _blocks(jt, eye)
    return CanonicalField(spec, rep, omega, s_t, s_c, j_matrix)


def m_matrix(field: CanonicalField, p_vec) -> np.ndarray:
    """M(p) = M+(p^2, p.S) (x) 1 + M-(p^2, p.S) (x) J in the 2x2 block sense."""
    mp, mm = field.m_blocks(p_vec)
    jt = block_rotation(field.spec.two_j)
    return np.kron(np.eye(2), mp) + np.kron(jt, mm)


def default_samples(n: int = 8, seed: int = 0, pmin: float = 0.1, pmax: float = 10.0) -> List[np.ndarray]:
    """Deterministic momenta: random directions, magnitudes uniform in [pmin, pmax]."""
    rng = np.random.default_rng(seed)
    out = []
    for _ in range(n):
        d = rng.normal(size=3)
        d /= np.linalg.norm(d)
        out.append(d * rng.uniform(pmin, pmax))
    return out


@dataclass
class SymmetryReport:
    residuals: Dict[str, float]
    tol: float
    n_samples: int

    @property
    def passed(self) -> bool:
        return all(v < self.tol for v in self.residuals.values())

    @property
    def max_residual(self) -> float:
        return max(self.residuals.values())

    def to_dict(self) -> dict:
        return {"passed": self.passed, "tol": self.tol, "n_samples": self.n_samples, "residuals": dict(self.residuals)}


def _dag(a):
    return a.conj().T


def _norm(a) -> float:
    return float(np.max(np.abs(a))) if a.size else 0.0


def verify_symmetries(
    field: CanonicalField,
    p_samples: Optional[List[np.ndarray]] = None,
    tol: float = 1e-10,
    s_c: Optional[np.ndarray] = None,
    s_t: Optional[np.ndarray] = None,
) -> SymmetryReport:
    """Max residuals of the C/T invariance conditions over sampled momenta.

    ``s_c``/``s_t`` override the field's matrices (used for negative controls).
    """
    if p_samples is None:
        p_samples = default_samples()
    sc = field.s_c if s_c is None else s_c
    st = field.s_t if s_t is None else s_t
    om = field.omega
    res: Dict[str, float] = {}
    res["T_omega"] = _norm(_dag(st) @ om.conj() @ st - om)
    res["C_omega"] = _norm(_dag(sc) @ om @ sc + om.conj())
    bs = field.bispinor_spin()
    res["T_spin"] = max(_norm(_dag(st) @ s.conj() @ st + s) for s in bs)
    res["C_spin"] = max(_norm(_dag(sc) @ s @ sc + s.conj()) for s in bs)
    res["C_squared"] = _norm(sc @ sc.conj() - np.eye(field.dim))
    t_m = c_m = 0.0
    for p in p_samples:
        p = np.asarray(p, dtype=float)
        mp = m_matrix(field, p)
        mn = m_matrix(field, -p)
        # absolute for O(1) matrices, relative once entries grow past 1
        scale = max(1.0, _norm(mp), _norm(mn))
        t_m = max(t_m, _norm(_dag(st) @ mn.conj() @ st - mp) / scale)
        c_m = max(c_m, _norm(_dag(sc) @ mp @ sc - mn.conj()) / scale)
    res["T_mass"] = t_m
    res["C_mass"] = c_m
    return SymmetryReport(res, tol, len(p_samples))
