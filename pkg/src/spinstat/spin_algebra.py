"""SU(2) spin-j matrices, the pi-rotation R2, helicity spinors, and f(p^2, p.S).

Basis ordering is m = j, j-1, ..., -j everywhere.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np
from scipy.linalg import expm

from .ratfunc import RationalFunc2


@dataclass(frozen=True)
class SpinRep:
    two_j: int
    s1: np.ndarray
    s2: np.ndarray
    s3: np.ndarray

    @property
    def j(self) -> float:
        return self.two_j / 2

    @property
    def dim(self) -> int:
        return self.two_j + 1

    @property
    def vector(self):
        return (self.s1, self.s2, self.s3)

    def dot(self, p_vec) -> np.ndarray:
        """p . S as a (2j+1) square matrix."""
        return p_vec[0] * self.s1 + p_vec[1] * self.s2 + p_vec[2] * self.s3


@dataclass(frozen=True)
class HelicitySpinor:
    sigma_two: int
    direction: np.ndarray
    components: np.ndarray

    @property
    def sigma(self) -> float:
        return self.sigma_two / 2


def _m_values(two_j: int) -> np.ndarray:
    return (two_j - 2 * np.arange(two_j + 1)) / 2


@lru_cache(maxsize=None)
def spin_matrices(two_j: int) -> SpinRep:
    """Ladder-operator construction of S1, S2, S3 for spin j = two_j/2."""
    if two_j < 0:
        raise ValueError("two_j must be nonnegative")
    j = two_j / 2
    m = _m_values(two_j)
    n = two_j + 1
    s_plus = np.zeros((n, n), dtype=complex)
    for k in range(1, n):
        s_plus[k - 1, k] = np.sqrt(j * (j + 1) - m[k] * (m[k] + 1))
    s_minus = s_plus.conj().T
    s1 = (s_plus + s_minus) / 2
    s2 = (s_plus - s_minus) / 2j
    s3 = np.diag(m).astype(complex)
    for a in (s1, s2, s3):
        a.setflags(write=False)
    return SpinRep(two_j, s1, s2, s3)


@lru_cache(maxsize=None)
def _r2(two_j: int) -> np.ndarray:
    n = two_j + 1
    r = np.zeros((n, n), dtype=complex)
    for k in range(n):
        # column m = (two_j - 2k)/2 maps to row m' = -m, sign (-1)^(j+m)
        j_plus_m = two_j - k
        r[n - 1 - k, k] = -1 if j_plus_m % 2 else 1
    r.setflags(write=False)
    return r


def r2_matrix(two_j: int) -> np.ndarray:
    """[R2]_{m'm} = (-1)^(j+m) delta_{m',-m}.

    Equal to (-1)^(2j) * expm(-i pi S2) for the standard S2; the two differ by
    an overall sign when j is half-odd.
    """
    return _r2(two_j).copy()


def r2_from_exponential(two_j: int) -> np.ndarray:
    return expm(-1j * np.pi * spin_matrices(two_j).s2)


def _angles(direction) -> tuple:
    n = np.asarray(direction, dtype=float)
    norm = np.linalg.norm(n)
    if norm == 0:
        raise ValueError("helicity is undefined for a zero direction vector")
    n = n / norm
    theta = np.arctan2(np.hypot(n[0], n[1]), n[2])
    phi = np.arctan2(n[1], n[0])
    return n, theta, phi


def rotation_operator(two_j: int, theta: float, phi: float) -> np.ndarray:
    """exp(-i phi S3) exp(-i theta S2)."""
    rep = spin_matrices(two_j)
    m = _m_values(two_j)
    return np.diag(np.exp(-1j * phi * m)) @ expm(-1j * theta * rep.s2)


def helicity_spinor(two_j: int, sigma_two: int, direction) -> HelicitySpinor:
    """Eigenvector of n.S with eigenvalue sigma, phase fixed by the z-y-z rotation."""
    if abs(sigma_two) > two_j or (two_j - sigma_two) % 2:
        raise ValueError(f"sigma_two={sigma_two} not allowed for two_j={two_j}")
    n, theta, phi = _angles(direction)
    e = np.zeros(two_j + 1, dtype=complex)
    e[(two_j - sigma_two) // 2] = 1.0
    xi = rotation_operator(two_j, theta, phi) @ e
    return HelicitySpinor(sigma_two, n, xi)


def helicity_basis(two_j: int, direction) -> dict:
    """All helicity spinors for one direction, keyed by sigma_two."""
    n, theta, phi = _angles(direction)
    u = rotation_operator(two_j, theta, phi)
    return {two_j - 2 * k: u[:, k] for k in range(two_j + 1)}


def sigma_values(two_j: int) -> list:
    """Allowed helicities as twice-sigma integers, descending."""
    return [two_j - 2 * k for k in range(two_j + 1)]


def scalar_func_of_pdotS(f: RationalFunc2, p_vec, rep: SpinRep, tol: float = 1e-12) -> np.ndarray:
    """f(p^2 I, p.S) built from the spectral decomposition of p.S."""
    p_vec = np.asarray(p_vec, dtype=float)
    p = float(np.linalg.norm(p_vec))
    x = p * p
    if p == 0.0:
        return f.evaluate(0.0, 0.0, tol) * np.eye(rep.dim, dtype=complex)
    basis = helicity_basis(rep.two_j, p_vec)
    out = np.zeros((rep.dim, rep.dim), dtype=complex)
    for sigma_two, xi in basis.items():
        out += f.evaluate(x, p * sigma_two / 2, tol) * np.outer(xi, xi.conj())
    return out
