"""Lagrangian matrix, Hamiltonian mode coefficients, statistics and causality.

The field is quantized as

    psi = sum_sigma a u(p, sigma) e^{i(p.r - E t)} + b^dag v(-p, -sigma) e^{-i(p.r - E t)}

and the Lagrangian is psi^dag Lambda [i Omega d_t - M] psi. Everything here
works at a single momentum; integrals over p are never taken.
"""
from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field
from typing import List, Optional

import numpy as np

from .field_model import CanonicalField, FieldSpec, build, default_samples, trig
from .spectrum import GaplessModeWarning, ModeSolution, SpectrumError, eigenvectors, sample_modes
from .spin_algebra import sigma_values

BOSE, FERMI, ARBITRARY = "bose", "fermi", "arbitrary"


class InconsistencyError(RuntimeError):
    """Internal contradiction between the positivity, Fock and causality routes."""


# ---------------------------------------------------------------------------
# Lambda


@dataclass
class LambdaSpace:
    basis: List[np.ndarray]
    small_basis: List[np.ndarray]
    dimension: int
    canonical: List[np.ndarray]
    singular_values: np.ndarray
    alignment_residual: float = 0.0

    def to_dict(self) -> dict:
        return {
            "dimension": self.dimension,
            "canonical_blocks": [_small(c, len(c) // 2).real.round(12).tolist() for c in self.canonical],
            "alignment_residual": self.alignment_residual,
        }


def _small(lam: np.ndarray, n: int) -> np.ndarray:
    # 2x2 block coefficients of a matrix whose blocks are multiples of the identity
    return np.array([[lam[a * n, b * n] for b in range(2)] for a in range(2)])


def block_lambda(small: np.ndarray, n: int) -> np.ndarray:
    return np.kron(np.asarray(small, dtype=complex), np.eye(n))


def lambda_bose(two_j: int) -> np.ndarray:
    return block_lambda(np.eye(2), two_j + 1)


def lambda_fermi(two_j: int) -> np.ndarray:
    return block_lambda(np.array([[0, 1], [1, 0]]), two_j + 1)


def lambda_unique(two_j: int) -> np.ndarray:
    """[[cos^2 j pi, sin^2 j pi], [sin^2 j pi, cos^2 j pi]] (x) I."""
    c, s = trig(two_j)
    return block_lambda(np.array([[c * c, s * s], [s * s, c * c]]), two_j + 1)


def _generic_momenta(field: CanonicalField, count: int, rng, tol: float = 1e-8) -> List[np.ndarray]:
    """Sample momenta where M+ and M- are not (numerically) the zero matrix.

    One nonzero eigenvalue is enough: the constraints act on the 2x2 block
    coefficients, which are shared by every helicity sector.
    """
    out = []
    m_zero = field.spec.m_minus_vanishes()
    attempts = 0
    while len(out) < count:
        attempts += 1
        if attempts > 1000:
            raise RuntimeError("could not find generic sample momenta")
        d = rng.normal(size=3)
        p = d / np.linalg.norm(d) * rng.uniform(0.3, 3.0)
        try:
            mp, mm = field.m_blocks(p)
        except ArithmeticError:
            continue
        if not m_zero and np.max(np.abs(np.linalg.eigvalsh(mm))) < tol:
            continue
        if np.max(np.abs(np.linalg.eigvalsh(mp))) < tol:
            continue
        out.append(p)
    return out


def _hermiticity_rows(field: CanonicalField, lam: np.ndarray, momenta) -> np.ndarray:
    def anti(x):
        return (x - x.conj().T).ravel()

    n = field.spec.two_j + 1
    eye2 = np.eye(2)
    rows = [anti(lam @ field.omega), (lam - lam.conj()).ravel()]
    for p in momenta:
        mp, mm = field.m_blocks(p)
        mp_full = np.kron(eye2, mp) / max(1.0, np.max(np.abs(mp)))
        mm_full = np.kron(eye2, mm) / max(1.0, np.max(np.abs(mm)))
        rows.append(anti(mp_full @ lam))
        rows.append(anti(mm_full @ lam @ field.j_matrix))
    v = np.concatenate(rows)
    return np.concatenate([v.real, v.imag]) / math.sqrt(n)


def solve_lambda(field: CanonicalField, n_momenta: int = 4, seed: int = 0, tol: float = 1e-10) -> LambdaSpace:
    """Null space of the Hermiticity and reality constraints on block-scalar Lambda.

    Lambda = sum over the 4 blocks of (re + i im) * I, i.e. 8 real unknowns.
    """
    n = field.spec.two_j + 1
    rng = np.random.default_rng(seed)
    momenta = _generic_momenta(field, n_momenta, rng)
    unknowns = []
    for a in range(2):
        for b in range(2):
            for phase in (1.0, 1j):
                e = np.zeros((2, 2), dtype=complex)
                e[a, b] = phase
                unknowns.append(e)
    cols = [_hermiticity_rows(field, block_lambda(e, n), momenta) for e in unknowns]
    a_mat = np.stack(cols, axis=1)
    _, sv, vh = np.linalg.svd(a_mat)
    null = vh[sv < tol * sv[0]] if sv[0] > 0 else vh
    # trailing rows of vh beyond len(sv) cannot occur: a_mat has more rows than columns
    small_basis = [sum(c * e for c, e in zip(vec, unknowns)) for vec in null]
    basis = [block_lambda(s, n) for s in small_basis]
    dim = len(basis)
    if dim == 0:
        raise InconsistencyError("no Lambda satisfies the Hermiticity constraints")

    two_j = field.spec.two_j
    if dim == 1:
        s = small_basis[0]
        k = np.unravel_index(np.argmax(np.abs(s)), s.shape)
        s = s / s[k]
        canonical = [block_lambda(s, n)]
        align = float(np.max(np.abs(canonical[0] - lambda_unique(two_j))))
    else:
        # orthonormal basis of the span (as 8-vectors), then project the two reference matrices
        q = np.array([[*s.real.ravel(), *s.imag.ravel()] for s in small_basis]).T
        q, _ = np.linalg.qr(q)
        canonical, align = [], 0.0
        for ref in (np.eye(2), np.array([[0.0, 1.0], [1.0, 0.0]])):
            r = np.concatenate([ref.ravel(), np.zeros(4)])
            proj = q @ (q.T @ r)
            align = max(align, float(np.max(np.abs(proj - r))))
            canonical.append(block_lambda((proj[:4] + 1j * proj[4:]).reshape(2, 2), n))
    return LambdaSpace(basis, small_basis, dim, canonical, sv, align)


# ---------------------------------------------------------------------------
# Hamiltonian


def partner_mode(field: CanonicalField, mode: ModeSolution) -> ModeSolution:
    """The mode at (-p, -sigma) whose v multiplies b^dag in the expansion."""
    return eigenvectors(field, -mode.p_vec, -mode.sigma_two)


def hamiltonian_coefficients(field: CanonicalField, lam: np.ndarray, mode: ModeSolution, tol: float = 1e-10):
    """(A, B) in H = A a^dag a + B b b^dag for one (p, sigma).

    A = E u^dag Lambda Omega u and B = -E w^dag Lambda Omega w with w = v(-p, -sigma).
    The a^dag b^dag pairing integrates to momentum +p on the b side, so the
    cross term checked is u(p, sigma)^dag Lambda Omega v(p, sigma') for every
    sigma'. Raises InconsistencyError if A or B is not real or a cross term
    survives.
    """
    lo = lam @ field.omega
    w_mode = partner_mode(field, mode)
    w = w_mode.v
    a_c = mode.energy * (mode.u.conj() @ lo @ mode.u)
    b_c = -w_mode.energy * (w.conj() @ lo @ w)
    scale = max(1.0, mode.energy)
    if abs(a_c.imag) > tol * scale or abs(b_c.imag) > tol * scale:
        raise InconsistencyError(f"complex Hamiltonian coefficient: A={a_c}, B={b_c}")
    for s2 in sigma_values(field.spec.two_j):
        try:
            w2 = eigenvectors(field, mode.p_vec, s2).v
        except SpectrumError:
            continue
        cross = abs(mode.u.conj() @ lo @ w2)
        if cross > tol * scale:
            raise InconsistencyError(f"a^dag b^dag cross term {cross:g} at sigma'={s2}/2")
    return float(a_c.real), float(b_c.real)


def normalization_residual(field: CanonicalField, lam: np.ndarray, mode: ModeSolution) -> float:
    """|u^dag Lambda Omega u - 1|."""
    return float(abs(mode.u.conj() @ lam @ field.omega @ mode.u - 1.0))


# ---------------------------------------------------------------------------
# Fock-space oracle


@dataclass
class FockResult:
    bounded_below: bool
    min_eigenvalues: tuple

    def to_dict(self) -> dict:
        return {"bounded_below": self.bounded_below, "min_eigenvalues": list(self.min_eigenvalues)}


def _bose_pair_ops(cutoff: int):
    # built one level higher, then compressed, so that b b^dag = b^dag b + 1 holds on the kept states
    dim = cutoff + 2
    lower = np.diag(np.sqrt(np.arange(1, dim)), 1)
    number = (lower.T @ lower)[: cutoff + 1, : cutoff + 1]
    anti_number = (lower @ lower.T)[: cutoff + 1, : cutoff + 1]
    return number, anti_number


def _fermi_pair_ops():
    lower = np.array([[0.0, 1.0], [0.0, 0.0]])
    z = np.diag([1.0, -1.0])
    a = np.kron(lower, np.eye(2))
    b = np.kron(z, lower)
    return a.T @ a, b @ b.T


def _fock_min(a_coef: float, b_coef: float, statistics: str, cutoff: int) -> float:
    if statistics == BOSE:
        number, anti_number = _bose_pair_ops(cutoff)
        eye = np.eye(cutoff + 1)
        h = a_coef * np.kron(number, eye) + b_coef * np.kron(eye, anti_number)
    elif statistics == FERMI:
        n_a, bb = _fermi_pair_ops()
        h = a_coef * n_a + b_coef * bb
    else:
        raise ValueError(f"statistics must be {BOSE!r} or {FERMI!r}")
    return float(np.linalg.eigvalsh(h)[0])


def fock_oracle(a_coef: float, b_coef: float, statistics: str, cutoff: int = 8, tol: float = 1e-9) -> FockResult:
    """Is H = A a^dag a + B b b^dag bounded below? Compared between cutoff and 2*cutoff."""
    if cutoff < 2:
        raise ValueError("cutoff must be >= 2")
    lo = _fock_min(a_coef, b_coef, statistics, cutoff)
    hi = _fock_min(a_coef, b_coef, statistics, 2 * cutoff)
    bounded = not (hi < lo - tol * max(1.0, abs(a_coef), abs(b_coef)))
    return FockResult(bounded, (lo, hi))


# ---------------------------------------------------------------------------
# causality


@dataclass
class CausalityResult:
    passed: bool
    max_residual: float
    residuals: List[float]

    def to_dict(self) -> dict:
        return {"passed": self.passed, "max_residual": self.max_residual}


def causality_matrix(field: CanonicalField, lam: np.ndarray, statistics: str, p_vec) -> np.ndarray:
    """sum_sigma [u u^dag + s v v^dag] Lambda Omega at one momentum.

    s = +1 (fermi, anticommutator) or -1 (bose, commutator). The b-term of the
    equal-time bracket carries e^{-ip(r-r')} with v(-p, -sigma); after p -> -p
    the integrand at momentum p pairs u(p, sigma) with v(p, sigma).
    """
    sign = {FERMI: 1.0, BOSE: -1.0}[statistics]
    p_vec = np.asarray(p_vec, dtype=float)
    acc = np.zeros((field.dim, field.dim), dtype=complex)
    for s2 in sigma_values(field.spec.two_j):
        u = eigenvectors(field, p_vec, s2).u
        w = eigenvectors(field, p_vec, s2).v
        acc += np.outer(u, u.conj()) + sign * np.outer(w, w.conj())
    return acc @ lam @ field.omega


def check_causality(field: CanonicalField, lam: np.ndarray, statistics: str, p_samples=None, tol: float = 1e-9) -> CausalityResult:
    if p_samples is None:
        p_samples = default_samples()
    res = []
    for p in p_samples:
        try:
            c = causality_matrix(field, lam, statistics, p)
        except SpectrumError:
            continue
        res.append(float(np.max(np.abs(c - np.eye(field.dim)))))
    worst = max(res) if res else float("nan")
    return CausalityResult(bool(res) and worst < tol, worst, res)


# ---------------------------------------------------------------------------
# statistics decision


@dataclass
class StatisticsVerdict:
    kind: str
    mode_coefficients: List[tuple]
    lambda_space: LambdaSpace
    causality: dict = field(default_factory=dict)
    fock: dict = field(default_factory=dict)
    notes: List[str] = field(default_factory=list)

    def to_dict(self) -> dict:
        return {
            "verdict": self.kind,
            "lambda": self.lambda_space.to_dict(),
            "mode_coefficients": [
                {"p": [float(x) for x in p], "sigma_two": s, "A": a, "B": b} for p, s, a, b in self.mode_coefficients
            ],
            "causality": {k: v.to_dict() for k, v in self.causality.items()},
            "fock": {k: v.to_dict() for k, v in self.fock.items()},
            "notes": list(self.notes),
        }


SIGN_NOTE = (
    "b b^dag coefficient computed directly from u, v, Lambda, Omega equals (-1)^(2j) E; "
    "statistics is decided from this computed sign"
)


def _mode_momenta(two_j: int, seed: int, min_modes: int = 20) -> List[np.ndarray]:
    n = max(8, math.ceil(min_modes / (two_j + 1)))
    return default_samples(n, seed=seed + 1)


def _coefficients(field, lam, modes):
    return [(m.p_vec, m.sigma_two, *hamiltonian_coefficients(field, lam, m)) for m in modes]


def _cross_check(field, lam, kind, coeffs, samples, cutoff, tol):
    """Fock and causality evidence for one (Lambda, statistics) pairing."""
    fock = [fock_oracle(a, b, kind, cutoff) for _, _, a, b in coeffs]
    worst = min(fock, key=lambda f: f.min_eigenvalues[1])
    bounded = FockResult(all(f.bounded_below for f in fock), worst.min_eigenvalues)
    caus = check_causality(field, lam, kind, samples, tol)
    return bounded, caus


def decide_statistics(
    spec_or_field,
    seed: int = 0,
    cutoff: int = 8,
    causality_tol: float = 1e-9,
) -> StatisticsVerdict:
    """Bose, Fermi or Arbitrary, cross-checked by the Fock and causality routes."""
    field = spec_or_field if isinstance(spec_or_field, CanonicalField) else build(spec_or_field)
    two_j = field.spec.two_j
    space = solve_lambda(field, seed=seed)
    samples = _mode_momenta(two_j, seed)
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always", GaplessModeWarning)
        modes = sample_modes(field, samples)
    notes = [str(w.message) for w in caught]
    if not modes:
        raise SpectrumError("every sampled mode is gapless")
    c_samples = [m.p_vec for m in modes[:: two_j + 1]][:8]

    if space.dimension == 2:
        if not field.spec.m_minus_vanishes():
            raise InconsistencyError("two-dimensional Lambda space with nonzero M-")
        verdict = StatisticsVerdict(ARBITRARY, [], space, notes=notes)
        for kind, lam in ((BOSE, space.canonical[0]), (FERMI, space.canonical[1])):
            coeffs = _coefficients(field, lam, modes)
            signs_ok = all((b > 0) == (kind == BOSE) for *_, b in coeffs)
            fock, caus = _cross_check(field, lam, kind, coeffs, c_samples, cutoff, causality_tol)
            if not (signs_ok and fock.bounded_below and caus.passed):
                raise InconsistencyError(f"Lambda_{kind[0]} does not support {kind} statistics")
            verdict.mode_coefficients.extend(coeffs if kind == BOSE else [])
            verdict.fock[kind] = fock
            verdict.causality[kind] = caus
        return verdict

    if field.spec.m_minus_vanishes():
        raise InconsistencyError("unique Lambda but M- is the zero function")
    lam = space.canonical[0]
    coeffs = _coefficients(field, lam, modes)
    b_signs = {b > 0 for *_, b in coeffs}
    if len(b_signs) != 1:
        raise InconsistencyError("b b^dag coefficient changes sign across modes")
    kind = BOSE if b_signs.pop() else FERMI
    wrong = FERMI if kind == BOSE else BOSE
    fock, caus = _cross_check(field, lam, kind, coeffs, c_samples, cutoff, causality_tol)
    fock_wrong, caus_wrong = _cross_check(field, lam, wrong, coeffs, c_samples, cutoff, causality_tol)
    if not fock.bounded_below:
        raise InconsistencyError(f"{kind} Hamiltonian unbounded in the Fock oracle")
    if not caus.passed:
        raise InconsistencyError(f"causality fails for the positivity-selected {kind} statistics")
    if caus_wrong.passed:
        raise InconsistencyError(f"causality also holds for {wrong} statistics")
    notes.append(SIGN_NOTE)
    return StatisticsVerdict(
        kind,
        coeffs,
        space,
        causality={kind: caus, wrong: caus_wrong},
        fock={kind: fock, wrong: fock_wrong},
        notes=notes,
    )
