"""Closed-form energies and mode vectors, with a generalized-eigenproblem oracle."""
from __future__ import annotations

import warnings
from dataclasses import dataclass, field
from typing import List

import numpy as np
import scipy.linalg

from .field_model import CanonicalField, FieldSpec, m_matrix, trig
from .spin_algebra import helicity_spinor


class SpectrumError(ArithmeticError):
    pass


class GaplessModeWarning(UserWarning):
    pass


GAP_TOL = 1e-8


@dataclass
class ModeSolution:
    p_vec: np.ndarray
    sigma_two: int
    energy: float
    u: np.ndarray
    v: np.ndarray
    normalization: float


def _mpm(spec: FieldSpec, p: float, sigma_two: int) -> tuple:
    x, y = p * p, p * sigma_two / 2
    mp = spec.m_plus.evaluate(x, y).real
    mm = spec.m_minus.evaluate(x, y).real
    return mp, mm


def energy_squared(spec: FieldSpec, p: float, sigma_two: int) -> float:
    mp, mm = _mpm(spec, p, sigma_two)
    sign = 1 if spec.two_j % 2 else -1  # (-1)^(2j+1)
    return mp * mp + sign * mm * mm


def energy(spec: FieldSpec, p: float, sigma_two: int, tol: float = 1e-12) -> float:
    """Positive branch sqrt(M+^2 + (-1)^(2j+1) M-^2) at (p^2, p*sigma)."""
    e2 = energy_squared(spec, p, sigma_two)
    mp, mm = _mpm(spec, p, sigma_two)
    if e2 < -tol * max(1.0, mp * mp + mm * mm):
        raise SpectrumError(f"E^2 = {e2:g} < 0 at p={p}, sigma={sigma_two}/2: spectrum is not real")
    return float(np.sqrt(max(e2, 0.0)))


def eigenvectors(field: CanonicalField, p_vec, sigma_two: int, gap_tol: float = GAP_TOL) -> ModeSolution:
    """Positive-energy u and its C-partner v = J u for momentum p_vec, helicity sigma.

    The printed radicals sqrt(R -/+ M-) hold as-is for j = 0, 1/2 mod 2; for the
    other residues the block rotation flips the effective sign of M-, so M- is
    multiplied by eps = cos j pi + sin j pi. A negative M+ flips the cos part
    of eps (the diagonal M- blocks) and puts its own sign on the lower block.
    """
    p_vec = np.asarray(p_vec, dtype=float)
    p = float(np.linalg.norm(p_vec))
    if p == 0.0:
        raise SpectrumError("mode vectors need a nonzero momentum (helicity undefined at p=0)")
    spec = field.spec
    e = energy(spec, p, sigma_two)
    mp, mm = _mpm(spec, p, sigma_two)
    if e < gap_tol * max(1.0, abs(mp), abs(mm)):
        raise SpectrumError(f"gapless mode at p={p}, sigma={sigma_two}/2")
    c, s = trig(spec.two_j)
    sign = 1.0 if mp >= 0 else -1.0
    eps = c * sign + s
    root = np.sqrt(mp * mp + (mm * s) ** 2)
    upper = np.sqrt(max(root - eps * mm, 0.0))
    lower = np.sqrt(max(root + eps * mm, 0.0)) * sign
    n = np.sqrt(2 * e)
    xi = helicity_spinor(spec.two_j, sigma_two, p_vec).components
    u = np.concatenate([upper * xi, lower * xi]) / n
    v = field.j_matrix @ u
    return ModeSolution(p_vec, sigma_two, e, u, v, n)


def mode_residual(field: CanonicalField, mode: ModeSolution) -> float:
    """Max of the relative residuals |M u - E Omega u| and |M v + E Omega v|."""
    m = m_matrix(field, mode.p_vec)
    om = field.omega
    ru = np.linalg.norm(m @ mode.u - mode.energy * om @ mode.u)
    rv = np.linalg.norm(m @ mode.v + mode.energy * om @ mode.v)
    scale = max(mode.energy, 1e-300) * max(np.linalg.norm(mode.u), 1e-300)
    return float(max(ru, rv) / scale)


def solve_generalized_eigenproblem(field: CanonicalField, p_vec, check_tol: float = 1e-6) -> List[tuple]:
    """Eigenpairs of the pencil (M(p), Omega), sorted by descending real energy."""
    m = m_matrix(field, np.asarray(p_vec, dtype=float))
    w, vecs = scipy.linalg.eig(m, field.omega)
    out = []
    scale = max(1.0, float(np.max(np.abs(m))))
    for k in range(len(w)):
        vec = vecs[:, k] / np.linalg.norm(vecs[:, k])
        r = np.linalg.norm(m @ vec - w[k] * field.omega @ vec)
        if r > check_tol * scale:
            raise SpectrumError(f"eigensolver residual {r:g} exceeds tolerance")
        energy_k = w[k].real if abs(w[k].imag) < 1e-9 * scale else w[k]
        out.append((energy_k, vec))
    out.sort(key=lambda t: -np.real(t[0]))
    return out


@dataclass
class ValidationReport:
    passed: bool
    violations: List[tuple] = field(default_factory=list)
    poles: List[tuple] = field(default_factory=list)

    def to_dict(self) -> dict:
        return {
            "passed": self.passed,
            "violations": [[float(p), int(s)] for p, s in self.violations],
            "poles": [[float(p), int(s)] for p, s in self.poles],
        }


def validate_spectrum(spec: FieldSpec, p_grid=None) -> ValidationReport:
    """Check E^2 >= 0 on a momentum grid for every helicity.

    Violations are listed as (p, sigma_two); half-odd spins always pass since
    E^2 is then a sum of squares.
    """
    from .ratfunc import PoleError
    from .spin_algebra import sigma_values

    if p_grid is None:
        p_grid = np.linspace(0.0, 10.0, 201)
    violations, poles = [], []
    for sigma_two in sigma_values(spec.two_j):
        for p in p_grid:
            try:
                e2 = energy_squared(spec, float(p), sigma_two)
            except PoleError:
                poles.append((p, sigma_two))
                continue
            mp, mm = _mpm(spec, float(p), sigma_two)
            if e2 < -1e-12 * max(1.0, mp * mp + mm * mm):
                violations.append((p, sigma_two))
    return ValidationReport(not violations and not poles, violations, poles)


def sample_modes(field: CanonicalField, p_samples, gap_tol: float = GAP_TOL) -> List[ModeSolution]:
    """Mode solutions for every helicity at every momentum, skipping gapless ones."""
    from .spin_algebra import sigma_values

    modes = []
    for p_vec in p_samples:
        for sigma_two in sigma_values(field.spec.two_j):
            try:
                modes.append(eigenvectors(field, p_vec, sigma_two, gap_tol))
            except SpectrumError as exc:
                if "gapless" not in str(exc):
                    raise
                warnings.warn(str(exc), GaplessModeWarning, stacklevel=2)
    return modes
