import cmath
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
import hypothesis.strategies as st

from spinstat import catalog
from spinstat.analytic import (
    AnalyticError,
    all_branch_points,
    branch_points,
    e_squared_on_ray,
    find_roots,
    monodromy_check,
    verify_corollary,
)
from spinstat.field_model import FieldSpec
from spinstat.quantization import ARBITRARY, BOSE, FERMI
from spinstat.random_specs import random_spec
from spinstat.ratfunc import RationalFunc1, parse_expr


def as_set(roots, digits=9):
    return sorted((round(r.real, digits) + 0.0, round(r.imag, digits) + 0.0, m) for r, m in roots)


def locations(report):
    return [b.location for b in report.finite_branch_points]


def same_points(got, want, atol):
    # order-free comparison; sorting is unstable for real parts at +-1e-16
    got, want = list(got), list(want)
    return len(got) == len(want) and all(min(abs(g - w) for g in got) <= atol for w in want)


QUARTER_ROOTS = [cmath.exp(1j * np.pi * (2 * k + 1) / 4) for k in range(4)]


# --- find_roots -----------------------------------------------------------


def test_find_roots_quadratic():
    assert as_set(find_roots([1, 0, 16])) == [(0.0, -4.0, 1), (0.0, 4.0, 1)]


def test_find_roots_double_root():
    # (p - 1)^2 (p + 2) = p^3 - 3p + 2
    assert as_set(find_roots([1, 0, -3, 2]), 6) == [(-2.0, 0.0, 1), (1.0, 0.0, 2)]


def test_find_roots_quartic():
    roots = find_roots([1, 0, 0, 0, 1])
    assert len(roots) == 4 and all(m == 1 for _, m in roots)
    for r, _ in roots:
        assert abs(r**4 + 1) < 1e-9
    assert same_points([r for r, _ in roots], QUARTER_ROOTS, 1e-12)


@pytest.mark.parametrize("poly", [[3], [0, 0, 5], []])
def test_find_roots_degree_zero(poly):
    with pytest.raises(AnalyticError):
        find_roots(poly)


@given(st.lists(st.integers(-5, 5), min_size=2, max_size=7).filter(lambda c: c[0] != 0))
def test_find_roots_multiplicities_sum_to_degree(coeffs):
    roots = find_roots(coeffs)
    assert sum(m for _, m in roots) == len(coeffs) - 1


# --- monodromy ------------------------------------------------------------


def test_monodromy_flips_at_simple_zero():
    q = RationalFunc1.poly([16, 0, 1])
    assert monodromy_check(q, 4j)
    assert monodromy_check(q, -4j)


def test_monodromy_perfect_square():
    assert not monodromy_check(RationalFunc1.poly([1, -2, 1]), 1)


def test_monodromy_sqrt_p():
    assert monodromy_check(RationalFunc1.poly([0, 1]), 0)


def test_monodromy_simple_pole():
    q = RationalFunc1([1], [-2, 1])
    assert monodromy_check(q, 2)


def test_monodromy_regular_point():
    assert not monodromy_check(RationalFunc1.poly([16, 0, 1]), 1 + 1j)


def test_monodromy_radius_underflow():
    q = RationalFunc1.poly([0, 1])
    with pytest.raises(AnalyticError, match="underflow"):
        monodromy_check(q, 0, radius=1e-14)


def test_monodromy_contour_through_singularity():
    # a contour of radius 1 around 0 passes through the zero at p = 1
    q = RationalFunc1.poly([0, -1, 1])
    with pytest.raises(AnalyticError):
        monodromy_check(q, 0, radius=1.0, n_points=4)


# --- branch points --------------------------------------------------------


@pytest.mark.parametrize("name", ["dirac", "klein-gordon", "proca"])
def test_massive_fields_branch_at_pm_4i(name):
    spec = catalog.get(name, m0=4).spec
    for report in all_branch_points(spec):
        if report.e_squared == RationalFunc1.poly([16, 0, 1]):
            assert same_points(locations(report), [-4j, 4j], 1e-6)
            assert all(report.monodromy_confirmed)
            assert not report.branch_at_infinity
    assert any(r.has_branch_points for r in all_branch_points(spec))


def test_dirac_energy_squared_on_ray():
    spec = catalog.get("dirac", m0=4).spec
    assert e_squared_on_ray(spec, 1) == RationalFunc1.poly([16, 0, 1])
    assert e_squared_on_ray(spec, -1) == RationalFunc1.poly([16, 0, 1])


@pytest.mark.parametrize("two_j", range(5))
def test_schroedinger_no_branch_points(two_j):
    spec = catalog.get("schroedinger", two_j=two_j, mu=Fraction(1, 3)).spec
    for report in all_branch_points(spec):
        assert report.finite_branch_points == []
        assert not report.branch_at_infinity
        assert all(m % 2 == 0 for _, m, _ in report.even_points)


def test_bdg_four_branch_points():
    spec = catalog.get("bdg", m0=Fraction(1, 2), mu=0, delta=1).spec
    report = branch_points(spec, 1)
    assert report.e_squared == RationalFunc1.poly([1, 0, 0, 0, 1])
    assert same_points(locations(report), QUARTER_ROOTS, 1e-9)
    assert all(report.monodromy_confirmed) and len(report.monodromy_confirmed) == 4


def test_pole_and_zero_branch_points():
    # Q = ((x+2)^2 - 1)/(x+1)^2 = (x+3)/(x+1) on the ray: zeros +-i sqrt3, poles +-i
    spec = FieldSpec(0, parse_expr("(x + 2)/(x + 1)"), parse_expr("1/(x + 1)"))
    report = branch_points(spec, 0)
    assert report.e_squared == RationalFunc1([3, 0, 1], [1, 0, 1])
    kinds = {(round(b.location.imag, 9), b.kind) for b in report.finite_branch_points}
    s3 = round(np.sqrt(3), 9)
    assert kinds == {(s3, "zero"), (-s3, "zero"), (1.0, "pole"), (-1.0, "pole")}
    assert all(report.monodromy_confirmed)
    assert not report.branch_at_infinity


def test_branch_at_infinity():
    # even degree: Q = (p^2 + 1)^2 - p^4 = 2 p^2 + 1
    report = branch_points(FieldSpec(0, parse_expr("x + 1"), parse_expr("x")), 0)
    assert report.e_squared == RationalFunc1.poly([1, 0, 2])
    assert not report.branch_at_infinity
    # odd degree: Q = (3 + p^3)^2 - p^6 = 9 + 6 p^3 on the sigma = 1 ray
    report = branch_points(FieldSpec(2, parse_expr("3 + y*x"), parse_expr("y*x")), 2)
    assert report.e_squared == RationalFunc1.poly([9, 0, 0, 6])
    assert report.branch_at_infinity
    assert len(report.finite_branch_points) == 3


def test_identically_zero_energy_rejected():
    spec = FieldSpec(0, parse_expr("x"), parse_expr("x"))
    with pytest.raises(AnalyticError, match="identically zero"):
        branch_points(spec, 0)


def test_sigma_zero_sector_of_y_only_m_minus():
    # M- = x*y vanishes on the sigma = 0 ray, leaving a perfect square there
    spec = FieldSpec(2, parse_expr("2 + x"), parse_expr("x*y"))
    assert not branch_points(spec, 0).has_branch_points


def specs_for_property():
    specs = [catalog.get(n, m0=4).spec for n in ("dirac", "klein-gordon", "proca")]
    specs.append(catalog.get("bdg", m0=Fraction(1, 2)).spec)
    rng = np.random.default_rng(99)
    specs += [random_spec(rng, int(rng.integers(0, 7))) for _ in range(20)]
    return specs


def test_parity_and_monodromy_agree():
    for spec in specs_for_property():
        for report in all_branch_points(spec):
            for b in report.finite_branch_points:
                assert b.multiplicity % 2 == 1
                assert b.monodromy_confirmed, (spec.name, b)
            for root, _, _ in report.even_points:
                if not report.ambiguous:
                    assert not monodromy_check(report.e_squared, root)


def test_branch_set_closed_under_conjugation():
    for spec in specs_for_property():
        for report in all_branch_points(spec):
            locs = [b.location for b in report.finite_branch_points]
            for z in locs:
                assert min(abs(z.conjugate() - w) for w in locs) < 1e-6 * (1 + abs(z))


@settings(max_examples=20)
@given(st.integers(0, 2**32 - 1), st.integers(0, 6))
def test_perfect_square_detection(seed, two_j):
    spec = random_spec(np.random.default_rng(seed), two_j, zero_m_minus=True)
    for report in all_branch_points(spec):
        assert not report.has_branch_points


def test_report_to_dict_sorted():
    d = branch_points(catalog.get("dirac", m0=4).spec, 1).to_dict()
    got = [complex(p["re"], p["im"]) for p in d["finite"]]
    assert np.allclose(got, [-4j, 4j], atol=1e-9)
    assert d["e_squared"] == str(RationalFunc1.poly([16, 0, 1]))


# --- corollary ------------------------------------------------------------


def test_corollary_dirac():
    rep = verify_corollary(catalog.get("dirac").spec)
    assert rep.verdict == FERMI
    assert rep.holds and not rep.vacuous
    assert all(link.antecedent and link.consequent for link in rep.links)


def test_corollary_schroedinger_vacuous():
    rep = verify_corollary(catalog.get("schroedinger").spec)
    assert rep.verdict == ARBITRARY
    assert rep.holds and rep.vacuous
    assert rep.lambda_dimension == 2


def test_corollary_klein_gordon():
    rep = verify_corollary(catalog.get("klein-gordon").spec)
    assert rep.verdict == BOSE and rep.holds and not rep.vacuous


def test_corollary_links_named():
    rep = verify_corollary(catalog.get("bdg").spec)
    assert [link.name for link in rep.links] == [
        "branch_points => M- nonzero",
        "M- nonzero => Lambda unique",
        "Lambda unique => spin-statistics",
    ]
    assert rep.to_dict()["holds"]
