import warnings

import numpy as np
import pytest
from hypothesis import given, settings
import hypothesis.strategies as st

from spinstat import catalog
from spinstat.field_model import FieldSpec, build, m_matrix
from spinstat.random_specs import random_spec
from spinstat.ratfunc import parse_expr
from spinstat.spectrum import (
    GaplessModeWarning,
    SpectrumError,
    eigenvectors,
    energy,
    mode_residual,
    sample_modes,
    solve_generalized_eigenproblem,
    validate_spectrum,
)
from spinstat.spin_algebra import helicity_spinor, sigma_values


def oracle_energies(field, p):
    # Omega^-1 = Omega, so det(E Omega - M) = 0 <=> E in eig(Omega M)
    w = np.linalg.eigvals(field.omega @ m_matrix(field, p))
    return sorted(w.real, reverse=True)


def test_dirac_energy_is_five():
    spec = catalog.get("dirac", m0=4).spec
    assert abs(energy(spec, 3.0, 1) - 5) < 1e-9
    assert abs(energy(spec, 3.0, -1) - 5) < 1e-9
    assert np.allclose(oracle_energies(build(spec), (0, 0, 3)), [5, 5, -5, -5], atol=1e-9)


def test_klein_gordon_energy_is_five():
    spec = catalog.get("klein-gordon", m0=4).spec
    assert abs(energy(spec, 3.0, 0) - 5) < 1e-9
    assert np.allclose(oracle_energies(build(spec), (3, 0, 0)), [5, -5], atol=1e-9)


def test_zero_m_minus_energy_is_abs_m_plus():
    spec = FieldSpec(2, parse_expr("y - 3"), parse_expr("0"))
    assert energy(spec, 2.0, 2) == 1.0
    assert energy(spec, 2.0, -2) == 5.0


def test_pencil_dirac():
    got = [e for e, _ in solve_generalized_eigenproblem(build(catalog.get("dirac", m0=4).spec), (0, 0, 3))]
    assert np.allclose(got, [5, 5, -5, -5], atol=1e-9)


def test_pencil_schroedinger():
    f = build(catalog.get("schroedinger", two_j=1, m0=1, mu=0).spec)
    got = [e for e, _ in solve_generalized_eigenproblem(f, (0, 2, 0))]
    assert np.allclose(got, [2, 2, -2, -2], atol=1e-9)


def test_pencil_constant_scalar():
    f = build(FieldSpec(0, parse_expr("7/2"), parse_expr("0")))
    got = [e for e, _ in solve_generalized_eigenproblem(f, (1, 1, 1))]
    assert np.allclose(got, [3.5, -3.5])


def test_closed_form_matches_oracle_over_catalog():
    rng = np.random.default_rng(7)
    worst = 0.0
    for _ in range(100):
        name = rng.choice(catalog.NAMES)
        two_j = int(rng.integers(0, 5)) if name == "schroedinger" else None
        spec = catalog.get(name, two_j=two_j, m0=rng.choice([1, 2, 4])).spec
        f = build(spec)
        p = rng.normal(size=3) * rng.uniform(0.2, 4)
        s2 = int(rng.choice(sigma_values(spec.two_j)))
        e = energy(spec, float(np.linalg.norm(p)), s2)
        oracle = oracle_energies(f, p)
        worst = max(worst, min(abs(e - o) for o in oracle) / max(1, e))
    assert worst < 1e-9


@settings(max_examples=25)
@given(st.integers(0, 2**32 - 1), st.integers(0, 6))
def test_energies_pair_up(seed, two_j):
    rng = np.random.default_rng(seed)
    f = build(random_spec(rng, two_j))
    es = [np.real(e) for e, _ in solve_generalized_eigenproblem(f, rng.normal(size=3))]
    assert np.allclose(sorted(es), sorted(-x for x in es), rtol=1e-9, atol=1e-9 * max(1, max(es)))
    assert sum(e > 0 for e in es) == two_j + 1


@pytest.mark.parametrize("name", catalog.NAMES)
def test_mode_residuals_catalog(name):
    f = build(catalog.get(name, m0=4).spec)
    for p in [(0, 0, 3), (1.2, -0.4, 2.0), (-2, 1, 0.1)]:
        for s2 in sigma_values(f.spec.two_j):
            mode = eigenvectors(f, p, s2)
            assert mode_residual(f, mode) < 1e-9
            assert mode.normalization == pytest.approx(np.sqrt(2 * mode.energy))


@settings(max_examples=30)
@given(st.integers(0, 2**32 - 1), st.integers(0, 6))
def test_mode_residuals_random(seed, two_j):
    rng = np.random.default_rng(seed)
    f = build(random_spec(rng, two_j))
    p = rng.normal(size=3)
    for s2 in sigma_values(two_j):
        assert mode_residual(f, eigenvectors(f, p, s2)) < 1e-9


def test_integer_spin_structure():
    f = build(catalog.get("klein-gordon", m0=2).spec)
    mode = eigenvectors(f, (0, 0, 1.5), 0)
    x = 1.5**2
    mp, mm = (x + 5) / 2, (x + 3) / 2
    want = np.array([np.sqrt(mp - mm), np.sqrt(mp + mm)]) / np.sqrt(2 * mode.energy)
    assert np.allclose(mode.u, want)


def test_half_odd_v_swaps_blocks(dirac4):
    mode = eigenvectors(dirac4, (0.3, 1.0, -2.0), 1)
    n = 2
    _, s = dirac4.cos_sin
    assert np.allclose(mode.v[:n], s * mode.u[n:])
    assert np.allclose(mode.v[n:], -s * mode.u[:n])


def test_dirac_mode_residual_example(dirac4):
    assert mode_residual(dirac4, eigenvectors(dirac4, (0, 0, 3), 1)) < 1e-9


def test_printed_radicals_need_sign_for_spin_one():
    # the unmodified (sqrt(R - M-), sqrt(R + M-)) form solves the wrong equation for j = 1
    f = build(catalog.get("proca", m0=2).spec)
    p = np.array([0.0, 0.0, 1.0])
    mode = eigenvectors(f, p, 2)
    x, mp = 1.0, (1.0 + 4 + 1) / 2
    mm = (1 - x - 4) / 2
    xi = helicity_spinor(2, 2, p).components
    printed = np.concatenate([np.sqrt(mp - mm) * xi, np.sqrt(mp + mm) * xi])
    m = m_matrix(f, p)
    assert np.linalg.norm(m @ printed - mode.energy * f.omega @ printed) > 0.1
    assert mode_residual(f, mode) < 1e-12


@pytest.mark.parametrize("two_j", range(5))
def test_negative_m_plus_handled(two_j):
    f = build(FieldSpec(two_j, parse_expr("-3 - x"), parse_expr("1 + y")))
    for s2 in sigma_values(two_j):
        mode = eigenvectors(f, (0.2, 0, 1), s2)
        assert mode_residual(f, mode) < 1e-12


def test_gapless_mode_error_and_warning():
    f = build(FieldSpec(0, parse_expr("x"), parse_expr("0")))
    with pytest.raises(SpectrumError, match="nonzero momentum"):
        eigenvectors(f, (0, 0, 0), 0)
    g = build(FieldSpec(0, parse_expr("x - 1"), parse_expr("0")))
    with pytest.raises(SpectrumError, match="gapless"):
        eigenvectors(g, (0, 1, 0), 0)
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always")
        modes = sample_modes(g, [(0, 1, 0), (0, 2, 0)])
    assert len(modes) == 1
    assert any(issubclass(w.category, GaplessModeWarning) for w in caught)


def test_negative_energy_squared_raises():
    spec = FieldSpec(0, parse_expr("1"), parse_expr("x"))
    with pytest.raises(SpectrumError, match="not real"):
        energy(spec, 2.0, 0)


def test_validate_klein_gordon_passes():
    assert validate_spectrum(catalog.get("klein-gordon", m0=4).spec).passed


def test_validate_flags_artificial_spec():
    report = validate_spectrum(FieldSpec(0, parse_expr("1"), parse_expr("x")))
    assert not report.passed
    ps = [p for p, _ in report.violations]
    assert min(ps) > 1 and max(ps) == 10


@settings(max_examples=20)
@given(st.integers(0, 2**32 - 1), st.sampled_from([1, 3, 5]))
def test_validate_half_odd_always_passes(seed, two_j):
    rng = np.random.default_rng(seed)
    spec = FieldSpec(two_j, parse_expr("1"), parse_expr(f"{rng.integers(1, 9)}*x*x - y"))
    assert validate_spectrum(spec).passed


def test_validate_reports_poles():
    report = validate_spectrum(FieldSpec(0, parse_expr("1/(x - 4)"), parse_expr("0")))
    assert not report.passed and report.poles == [(2.0, 0)]


@pytest.mark.parametrize("name", catalog.NAMES)
def test_direction_reversal_with_helicity_flip(name):
    spec = catalog.get(name, m0=3).spec
    f = build(spec)
    p = np.array([0.4, -1.0, 0.8])
    for s2 in sigma_values(spec.two_j):
        a = eigenvectors(f, p, s2).energy
        b = eigenvectors(f, -p, s2).energy
        assert a == b
