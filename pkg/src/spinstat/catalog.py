"""Built-in field specifications: the familiar free equations in canonical form."""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Dict, Optional

import numpy as np

from .field_model import FieldSpec, build, default_samples, m_matrix, verify_symmetries
from .ratfunc import parse_expr

NAMES = ("klein-gordon", "dirac", "proca", "schroedinger", "bdg")
DEFAULTS = {"m0": Fraction(1), "mu": Fraction(0), "delta": Fraction(1)}

_PAULI = (
    np.array([[0, 1], [1, 0]], dtype=complex),
    np.array([[0, -1j], [1j, 0]]),
    np.array([[1, 0], [0, -1]], dtype=complex),
)


@dataclass(frozen=True)
class CatalogEntry:
    name: str
    spec: FieldSpec
    table1_m: Optional[Callable[[np.ndarray], np.ndarray]]
    notes: str


def _kg_ref(m0):
    def ref(p):
        return np.diag([float(p @ p) + m0**2, 1.0]).astype(complex)

    return ref


def _dirac_ref(m0):
    def ref(p):
        ps = sum(p[a] * _PAULI[a] for a in range(3))
        return np.block([[m0 * np.eye(2), ps], [-ps, m0 * np.eye(2)]])

    return ref


def _proca_ref(m0):
    def ref(p):
        e = np.eye(3, dtype=complex)
        z = np.zeros((3, 3))
        return np.block([[(float(p @ p) + m0**2) * e, z], [z, e]])

    return ref


def _schroedinger_ref(m0, mu, two_j):
    def ref(p):
        return (float(p @ p) / (2 * m0) + mu) * np.eye(2 * (two_j + 1), dtype=complex)

    return ref


def get(name: str, two_j: Optional[int] = None, **overrides) -> CatalogEntry:
    """Catalog entry by name; numeric parameters m0, mu, delta default to 1, 0, 1."""
    params = dict(DEFAULTS)
    for k, v in overrides.items():
        if v is not None:
            params[k] = Fraction(v)
    m0, mu = float(params["m0"]), float(params["mu"])

    if name == "klein-gordon":
        spec = FieldSpec(0, parse_expr("(x + m0^2 + 1)/2", params), parse_expr("(x + m0^2 - 1)/2", params), params, name=name)
        return CatalogEntry(name, spec, _kg_ref(m0), "psi = (phi, i dphi/dt)")
    if name == "dirac":
        spec = FieldSpec(1, parse_expr("m0", params), parse_expr("2*y", params), params, name=name)
        return CatalogEntry(name, spec, _dirac_ref(m0), "psi = Dirac spinor; M- = 2 p.S = p.sigma")
    if name == "proca":
        # cos(pi) = -1 swaps the diagonal blocks, hence the sign of M- relative to Klein-Gordon
        spec = FieldSpec(2, parse_expr("(x + m0^2 + 1)/2", params), parse_expr("(1 - x - m0^2)/2", params), params, name=name)
        return CatalogEntry(
            name, spec, _proca_ref(m0),
            "psi = (A^1..A^3, i dA^1/dt..i dA^3/dt); extra variable A^0 = i d/dt (p.A)/(p^2+m0^2) eliminated, not re-derived",
        )
    if name == "schroedinger":
        tj = 1 if two_j is None else int(two_j)
        spec = FieldSpec(tj, parse_expr("x/(2*m0) + mu", params), parse_expr("0", params), params, name=name)
        return CatalogEntry(
            name, spec, _schroedinger_ref(m0, mu, tj),
            "Nambu-doubled: psi = (psi_S + R2 psi_S*, psi_S - R2 psi_S*); component map not implemented",
        )
    if name == "bdg":
        spec = FieldSpec(1, parse_expr("x/(2*m0) + mu", params), parse_expr("delta", params), params, name=name)
        return CatalogEntry(name, spec, None, "mean-field pairing amplitude delta enters as M-")
    raise KeyError(f"unknown catalog entry {name!r}; choose from {', '.join(NAMES)}")


def verify_table1(name: str, p_samples=None, **kwargs) -> dict:
    """Max |M(p) - printed M(p)| over samples plus the symmetry residuals."""
    entry = get(name, **kwargs)
    if entry.table1_m is None:
        raise ValueError(f"{name} has no tabulated M(p)")
    if p_samples is None:
        p_samples = default_samples()
    field = build(entry.spec)
    resid = 0.0
    for p in p_samples:
        p = np.asarray(p, dtype=float)
        resid = max(resid, float(np.max(np.abs(m_matrix(field, p) - entry.table1_m(p)))))
    sym = verify_symmetries(field, p_samples)
    return {"name": name, "table_residual": resid, "symmetry": sym.to_dict(), "notes": entry.notes}
