from fractions import Fraction

import numpy as np
import pytest

from spinstat import catalog
from spinstat.analytic import all_branch_points
from spinstat.field_model import FieldSpec, build, default_samples, m_matrix
from spinstat.quantization import decide_statistics
from spinstat.ratfunc import RationalFunc2, parse_expr


def test_unknown_name():
    with pytest.raises(KeyError, match="unknown catalog entry"):
        catalog.get("maxwell")


def test_defaults():
    spec = catalog.get("bdg").spec
    assert spec.params == {"m0": 1, "mu": 0, "delta": 1}
    assert spec.m_plus == RationalFunc2.x() / 2
    assert spec.m_minus == RationalFunc2.const(1)


def test_dirac_matches_table(dirac4):
    m = m_matrix(dirac4, (0, 0, 3))
    ref = catalog.get("dirac", m0=4).table1_m(np.array([0.0, 0.0, 3.0]))
    assert np.allclose(m, ref, atol=1e-12)


def test_schroedinger_has_zero_m_minus():
    e = catalog.get("schroedinger", two_j=1)
    assert e.spec.m_minus.is_zero()
    assert e.spec.two_j == 1
    assert catalog.get("schroedinger", two_j=3).spec.two_j == 3


def test_klein_gordon_block_inversion():
    # M+ = (M11 + M22)/2 and M- = (M11 - M22)/2 for diag(p^2 + m0^2, 1)
    spec = catalog.get("klein-gordon", m0=3).spec
    m11, m22 = parse_expr("x + 9"), parse_expr("1")
    assert spec.m_plus == (m11 + m22) / 2
    assert spec.m_minus == (m11 - m22) / 2


def test_proca_sign_of_m_minus():
    # with cos(pi) = -1 the literal Klein-Gordon-like M- puts p^2 + m0^2 on the lower block
    literal = FieldSpec(2, parse_expr("(x + 1 + 1)/2"), parse_expr("(x + 1 - 1)/2"))
    p = np.array([0.3, -1.2, 0.5])
    m = m_matrix(build(literal), p)
    x = float(p @ p)
    assert np.allclose(np.diag(m).real, [1, 1, 1, x + 1, x + 1, x + 1])
    ref = catalog.get("proca").table1_m(p)
    assert np.allclose(m_matrix(build(catalog.get("proca").spec), p), ref, atol=1e-12)


@pytest.mark.parametrize("name", ["klein-gordon", "dirac", "proca", "schroedinger"])
@pytest.mark.parametrize("m0", [1, 4, Fraction(1, 2)])
def test_verify_table1(name, m0):
    report = catalog.verify_table1(name, m0=m0)
    assert report["table_residual"] < 1e-12
    assert report["symmetry"]["passed"]


def test_verify_table1_without_reference():
    with pytest.raises(ValueError):
        catalog.verify_table1("bdg")


def test_proca_notes_record_extra_variable():
    assert "A^0" in catalog.get("proca").notes


@pytest.mark.parametrize("name", catalog.NAMES)
def test_entries_are_valid(name):
    entry = catalog.get(name)
    entry.spec.validate()
    assert entry.spec.name == name


GOLDEN = {
    "klein-gordon": ("bose", 1),
    "dirac": ("fermi", 1),
    "proca": ("bose", 1),
    "schroedinger": ("arbitrary", 2),
    "bdg": ("fermi", 1),
}


@pytest.mark.parametrize("name", catalog.NAMES)
def test_pipeline_regression(name):
    spec = catalog.get(name, m0=4).spec
    verdict = decide_statistics(spec)
    assert (verdict.kind, verdict.lambda_space.dimension) == GOLDEN[name]
    points = {complex(round(b.location.real, 6), round(b.location.imag, 6)) + 0j
              for r in all_branch_points(spec) for b in r.finite_branch_points}
    if name == "schroedinger":
        assert points == set()
    elif name == "bdg":
        # Q = (p^2/8)^2 + 1: four points on |p| = 8^(1/2)
        assert len(points) == 4
        assert all(abs(abs(z) - np.sqrt(8)) < 1e-6 for z in points)
    else:
        assert {round(z.imag, 6) for z in points} == {4.0, -4.0}
        assert all(abs(z.real) < 1e-6 for z in points)


@pytest.mark.parametrize("name", ["klein-gordon", "dirac", "proca", "schroedinger"])
def test_table_reference_many_samples(name):
    entry = catalog.get(name, m0=2)
    f = build(entry.spec)
    for p in default_samples(16, seed=5):
        assert np.allclose(m_matrix(f, p), entry.table1_m(p), atol=1e-10)
