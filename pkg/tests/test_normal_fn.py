import math

import numpy as np
import pytest

from zhongvar import (
    DivergenceError,
    DomainError,
    MalformedInputError,
    check_integral_properties,
    check_normality,
    integrate_b,
    normal_function,
    quadrature_B,
    reparametrization_gap,
    sample_property_triples,
)
from zhongvar.normal_fn import NormalFunction

ONE = normal_function("one")
INV1P = normal_function("inv1p")
INVSQRT = normal_function("invsqrt1p")
HALF = normal_function("const", c=0.5)
SHIPPED = (ONE, INV1P, INVSQRT, HALF)

TABLE = normal_function("table", samples=[[0, 1.0], [1, 0.5], [3, 0.25]])


# --- pointwise profile values -------------------------------------------------

def test_profile_values():
    assert ONE.b(7.0) == 1.0
    assert INV1P.b(1.0) == 0.5
    assert INVSQRT.b(3.0) == 0.5
    assert HALF.b(10.0) == 0.5
    assert TABLE.b(0.5) == 0.75          # linear interpolation
    assert TABLE.b(10.0) == 0.25         # constant continuation


def test_negative_abscissa_rejected():
    for f in (*SHIPPED, TABLE):
        with pytest.raises(DomainError):
            f.b(-1.0)
        with pytest.raises(DomainError):
            f.B(-0.5)
        with pytest.raises(DomainError):
            f.B_inv(-0.5)


# --- running integral ---------------------------------------------------------

def test_integral_closed_forms():
    assert ONE.B(5.0) == 5.0
    assert abs(INV1P.B(2.0) - math.log(3.0)) < 1e-12
    assert abs(INVSQRT.B(3.0) - 2.0) < 1e-12   # 2 (sqrt(4) - 1)
    assert HALF.B(4.0) == 2.0
    assert all(f.B(0.0) == 0.0 for f in (*SHIPPED, TABLE))


def test_table_integral_is_exact_trapezoid():
    # areas: [0,1]: (1+0.5)/2 = 0.75; [1,3]: 2*(0.5+0.25)/2 = 0.75; then flat
    assert TABLE.B(1.0) == 0.75
    assert TABLE.B(3.0) == 1.5
    assert TABLE.B(5.0) == 2.0
    assert abs(TABLE.B(0.5) - (0.5 * (1.0 + 0.75) / 2)) < 1e-15


def test_closed_forms_agree_with_quadrature():
    for f in SHIPPED:
        for t in (0.5, 1.0, 2.0, 5.0, 20.0):
            assert abs(f.B(t) - quadrature_B(f, t)) <= 1e-8
    assert abs(quadrature_B(INV1P, 2.0) - math.log(3.0)) <= 1e-8


def test_table_integral_agrees_with_quadrature():
    for t in (0.5, 1.0, 2.5, 7.0):
        assert abs(TABLE.B(t) - quadrature_B(TABLE, t)) <= 1e-8


def test_segment_integral():
    assert abs(integrate_b(INV1P, 1.0, 3.0) - math.log(2.0)) <= 1e-8
    assert integrate_b(ONE, 2.0, 2.0) == 0.0
    with pytest.raises(DomainError):
        integrate_b(ONE, 3.0, 1.0)


def test_reparametrization_identity():
    rng = np.random.default_rng(11)
    for f in (*SHIPPED, TABLE):
        for _ in range(5):
            p = float(rng.uniform(0, 4))
            q = p + float(rng.uniform(0.01, 4))
            assert reparametrization_gap(f, p, q) <= 1e-8
    # closed-form spot check: int_1^3 of 1/(1+t) is log 2
    assert reparametrization_gap(INV1P, 1.0, 3.0) <= 1e-8


# --- inversion -----------------------------------------------------------------

def test_inverse_closed_forms():
    assert ONE.B_inv(4.0) == 4.0
    assert abs(INV1P.B_inv(math.log(3.0)) - 2.0) < 1e-12
    assert HALF.B_inv(2.0) == 4.0
    assert abs(INVSQRT.B_inv(2.0) - 3.0) < 1e-12


def test_inverse_round_trips():
    rng = np.random.default_rng(5)
    for f in (*SHIPPED, TABLE):
        for t in rng.uniform(0.0, 100.0, 40):
            assert abs(f.B_inv(f.B(t)) - t) <= 1e-7
        for s in rng.uniform(0.0, 30.0, 40):
            assert abs(f.B(f.B_inv(s)) - s) <= 1e-8


def test_divergence_error_when_integral_cannot_reach():
    # direct construction bypasses the factory: a profile this flat never
    # integrates up to 1 within the doubling budget
    flat = NormalFunction("table", samples=np.array([[0.0, 1e-300]]))
    with pytest.raises(DivergenceError):
        flat.B_inv(1.0)


# --- factory validation ---------------------------------------------------------

def test_factory_rejects_bad_specs():
    with pytest.raises(MalformedInputError):
        normal_function("nope")
    with pytest.raises(MalformedInputError):
        normal_function("const", c=0.0)
    with pytest.raises(MalformedInputError):
        normal_function("const", c=-1.0)
    with pytest.raises(MalformedInputError):
        normal_function("one", samples=[[0, 1]])
    with pytest.raises(MalformedInputError):
        normal_function("table", samples=[[0, 1], [1, 2]])      # increasing
    with pytest.raises(MalformedInputError):
        normal_function("table", samples=[[0, 1], [1, 0.0]])    # hits zero
    with pytest.raises(MalformedInputError):
        normal_function("table", samples=[[0, 1], [0, 0.5]])    # duplicate t
    with pytest.raises(MalformedInputError):
        normal_function("table", samples=[[-1, 1], [1, 0.5]])   # negative t


def test_factory_prepends_zero_sample():
    f = normal_function("table", samples=[[1, 0.5], [2, 0.25]])
    assert f.samples[0, 0] == 0.0
    assert f.b(0.0) == 0.5
    assert f.B(1.0) == 0.5


# --- normality reports ------------------------------------------------------------

def test_normality_passes_for_shipped_profiles():
    grid = [0.0, 1.0, 10.0]
    for f in SHIPPED:
        report = check_normality(f, grid, growth_bound=20.0)
        assert report.passed, report.summary()


def test_normality_flags_increase():
    rising = NormalFunction("table", samples=np.array([[0.0, 1.0], [1.0, 2.0]]))
    report = check_normality(rising, [0.0, 1.0])
    assert not report.passed
    assert any(v.axiom == "decreasing" for v in report.violations)


def test_normality_flags_unreachable_growth():
    slow = NormalFunction("table", samples=np.array([[0.0, 1e-6]]))
    report = check_normality(slow, [0.0, 1.0], growth_bound=1e30)
    assert not report.passed
    assert any(v.axiom == "divergence" for v in report.violations)


def test_normality_grid_must_be_sorted_nonnegative():
    with pytest.raises(MalformedInputError):
        check_normality(ONE, [1.0, 0.0])
    with pytest.raises(DomainError):
        check_normality(ONE, [-1.0, 0.0])


# --- calculus suite -----------------------------------------------------------------

def test_mean_value_sandwich_derived_value():
    # for the reciprocal profile on (0, 1): b(1)=1/2 <= log 2 <= b(0)=1
    q = (INV1P.B(1.0) - INV1P.B(0.0)) / 1.0
    assert INV1P.b(1.0) <= q <= INV1P.b(0.0)
    assert abs(q - math.log(2.0)) < 1e-12


def test_calculus_suite_passes_for_all_shipped():
    rng = np.random.default_rng(17)
    triples = sample_property_triples(rng, 2000)
    for f in (*SHIPPED, TABLE):
        report = check_integral_properties(f, triples, tol=1e-6)
        assert report.passed, f"{f.kind}: {report.summary()}"


def test_identity_profile_hits_equalities():
    # linear B: the sandwich and concavity collapse to equalities; the suite
    # must accept zero slack
    triples = np.array([[0.0, 1.0, 0.5], [1.0, 4.0, 0.25]])
    assert check_integral_properties(ONE, triples, tol=0.0).passed


def test_subadditivity_against_algebraic_oracle():
    # log(1+t+s) <= log(1+t) + log(1+s) iff 1+t+s <= (1+t)(1+s) iff 0 <= t s
    rng = np.random.default_rng(23)
    for _ in range(200):
        t, s = rng.uniform(0, 20, 2)
        assert (1 + t + s) <= (1 + t) * (1 + s) + 1e-12
        assert INV1P.B(t + s) <= INV1P.B(t) + INV1P.B(s) + 1e-12


def test_shifted_increment_and_concavity_consistency():
    # the two concavity formulations hold or fail together for these profiles;
    # cross-checked, not proved
    rng = np.random.default_rng(29)
    triples = sample_property_triples(rng, 500)
    for f in (*SHIPPED, TABLE):
        report = check_integral_properties(f, triples, tol=1e-6)
        shifted = [v for v in report.violations if v.axiom == "shifted_increment"]
        concave = [v for v in report.violations if v.axiom == "concave"]
        assert bool(shifted) == bool(concave) == False


def test_calculus_suite_input_validation():
    with pytest.raises(MalformedInputError):
        check_integral_properties(ONE, [[0.0, 1.0]])
    with pytest.raises(DomainError):
        check_integral_properties(ONE, [[1.0, 0.5, 0.5]])
