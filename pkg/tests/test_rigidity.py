import cmath
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from linrec import rigidity as rg
from linrec.density import longest_ap
from linrec.seqspace import SparseVector, eval_functional, norm


@pytest.fixture(scope="module")
def op():
    return rg.RigidityOperator.build()


def test_construction_checks(op):
    checks = op.validate()
    assert all(checks.values()), checks
    assert op.m(1) == op.m(2) == 1
    assert [op.class_of(k) for k in range(3, 9)] == [3, 4, 5, 6, 3, 4]


def test_m_is_exact_and_grows(op):
    assert isinstance(op.m(25), int)
    assert op.m(25) > 10**100
    assert all(op.m(k + 1) >= 2 * op.m(k) for k in range(2, 25))


def test_projection_examples():
    assert rg.project_P(SparseVector({1: 1, 7: 5})) == SparseVector({1: 1})
    assert rg.project_P(SparseVector()) == SparseVector()
    assert rg.project_P(SparseVector({1: 2, 2: 3, 3: 1})) == SparseVector({1: 2, 2: 3})


@given(st.integers(1, 10**6), st.integers(0, 3000))
def test_geometric_sum_matches_quotient(m, n):
    g = rg.geometric_sum(m, n)
    if m == 1:
        assert g == n
        return
    lam = cmath.exp(2j * math.pi / m)
    ref = (lam**n - 1) / (lam - 1)
    assert abs(g - ref) <= 1e-7 * max(1.0, abs(ref)) * max(1, n)


@settings(max_examples=50)
@given(st.integers(2, 400), st.integers(0, 400))
def test_geometric_sum_matches_direct_sum(m, n):
    assert abs(rg.geometric_sum(m, n) - rg.geometric_sum_direct(m, n)) <= 1e-9 * max(1, n)


def test_geometric_sum_near_one_and_huge_m():
    m = 10**40
    # lam - 1 is ~1e-39: the naive quotient is meaningless but the sum is ~n
    assert rg.geometric_sum(m, 1000) == pytest.approx(1000, rel=1e-12)
    assert rg.geometric_sum(m, m) == 0
    assert abs(rg.geometric_sum(m, m // 2)) == pytest.approx(m / math.pi, rel=1e-12)
    arr = rg.geometric_sum_abs_array(m, np.arange(1, 50))
    assert np.allclose(arr, np.arange(1, 50))
    with pytest.raises(ValueError):
        rg.geometric_sum(5, -1)


def test_lambda_examples(op):
    assert all(rg.lambda_kn(op, k, 1) == 1 for k in range(3, 12))
    assert rg.lambda_kn(op, 3, op.m(4)) == 0
    for n in (1, 5, 100, 5000):
        k = rg.first_level(op, n)
        assert abs(rg.lambda_kn(op, k, n)) >= 2 * n / math.pi - 1e-9
        assert abs(rg.lambda_kn(op, k, n)) > op.m(k - 1) / math.pi


def test_root_power_exact_residue():
    assert rg.root_power(10**30, 10**30) == 1
    assert rg.root_power(10**30, 5 * 10**29) == -1
    assert rg.root_power(4, 1) == pytest.approx(1j)


def test_power_coeff_examples(op):
    x = SparseVector({5: 1.0, 9: 2j})
    for n in (1, 7, 100):
        for k in range(1, 12):
            assert rg.power_coeff(op, x, n, k) == pytest.approx(rg.root_power(op.m(k), n) * x[k])
    y = SparseVector({1: 0.3, 2: -0.4j})
    for k in (1, 2):
        assert rg.power_coeff(op, y, 17, k) == y[k]


def test_apply_T_examples(op):
    y, tb = rg.apply_T(op, SparseVector({7: 1.0}), k_max=10)
    assert tb == 0 and y == SparseVector({7: op.lam(7)})
    y, tb = rg.apply_T(op, op.z)
    assert tb < 1e-6
    for k in range(3, op.k_max + 1):
        expected = eval_functional(op.w(k), op.z) / op.m(k - 1)
        assert y[k] == pytest.approx(expected, rel=1e-12)
    with pytest.raises(ValueError):
        rg.apply_T(op, SparseVector({40: 1.0}), k_max=10)


def test_power_agrees_with_iteration(op):
    x = SparseVector({1: 0.7, 2: 0.1j, 4: 1.0, 11: -0.5})
    y = rg.iterate_T(op, x, 40)
    z, _ = rg.power(op, x, 40)
    assert norm(y - z) <= 1e-10 * norm(y)


def test_brackets(op):
    zero = rg.orbit_distance_trace(op, SparseVector(), 5)
    assert all(b.lower == b.upper == 0 for b in zero)
    b = rg.distance_bracket(op, op.z, 1)
    assert 0 < b.lower <= b.upper


def test_certificate_examples(op):
    x = SparseVector({5: 3.0})
    cert = rg.recurrence_certificate(op, x, 1e-6)
    assert cert.k_j == 6 and cert.time == op.m(5) and cert.upper == 0
    rng = np.random.default_rng(0)
    x = op.x0_vector(4, rng)
    assert rg.kernel_classes(op, x) == [4]
    cert = rg.recurrence_certificate(op, x, 1e-4)
    assert op.class_of(cert.k_j) == 4 and cert.upper < 1e-4
    assert cert.upper <= cert.bound + 1e-15
    again = rg.recurrence_certificate(op, x, 2 * cert.upper)
    assert again.time <= cert.time


def test_certificate_not_found(op):
    with pytest.raises(ValueError, match="annihilated"):
        rg.recurrence_certificate(op, op.z, 1e-3)
    x = op.x0_vector(3, np.random.default_rng(2))
    with pytest.raises(rg.CertificateNotFound) as info:
        rg.recurrence_certificate(op, x, 1e-300)
    assert info.value.best > 1e-300


def test_ap_witness(op):
    rng = np.random.default_rng(1)
    x = op.x0_vector(5, rng)
    w1 = rg.ap_witness(op, x, 1e-3, 1)
    assert w1.times == (w1.step,)
    w = rg.ap_witness(op, x, 1e-3, 5)
    assert len(w.times) == 5 and all(b.upper < 1e-3 for b in w.brackets)
    assert longest_ap(w.return_set()) >= 5
    w0 = rg.ap_witness(op, SparseVector({4: 1.0}), 1e-3, 5)
    assert all(b.upper == 0 for b in w0.brackets)


def test_floor(op):
    fr = rg.nonrecurrence_floor(op, op.z)
    assert fr.floor >= fr.target - 0.02
    assert fr.horizon == op.m(op.cfg.j_max - 1)
    assert rg.distance_bracket(op, op.z, 1).lower > 0
    pert = rg.nonrecurrence_floor(op, op.z + SparseVector({7: 1e-3}))
    assert fr.floor - pert.floor <= 2e-3 + 1e-12
    with pytest.raises(ValueError):
        rg.nonrecurrence_floor(op, SparseVector({1: 1.0}))


def test_floor_band_matches_enumeration(op):
    # bands computed analytically must lower-bound the exact brackets they cover
    fr = rg.nonrecurrence_floor(op, op.z, horizon=6000, enumerate_upto=100)
    for k, lo, hi, f in fr.bands:
        for n in {lo, (lo + hi) // 2, hi}:
            assert rg.distance_bracket(op, op.z, n).lower >= f - 1e-12


def test_config_errors():
    with pytest.raises(ValueError):
        rg.RigidityConfig(j_max=2)


@pytest.mark.parametrize("n,m", [(1, 1), (3, 5), (17, 40)])
def test_semigroup(op, n, m):
    x = SparseVector({1: 0.2 - 0.1j, 2: 0.9, 6: 1.0})
    y, _ = rg.power(op, x, n)
    lhs, _ = rg.power(op, y, m)
    rhs, _ = rg.power(op, x, n + m)
    assert norm(lhs - rhs) <= 1e-12 * max(1.0, norm(rhs))
