import math

import mpmath
import pytest
from hypothesis import given, settings, strategies as st

from reunion.errors import PrecisionLossError
from reunion.exact_sums import (
    Group, Method, ModelKind, ReunionQuery, brute_force_reunion, build_moment_table,
    g1_poisson_dual, hankel_reunion, partition_function, reunion, reunion_via_partition,
)

MODELS = list(ModelKind)


def test_first_absorbing_moment_frozen():
    # sum_{n>=1} n^2 exp(-pi^2 n^2 / 2)
    table = build_moment_table("absorbing", 1, 1.0)
    assert abs(float(table.moments[0]) - 0.00719189405697833) < 1e-16


def test_frozen_values():
    assert reunion("periodic", 1, 2.0) == pytest.approx(1.2713415221890152, rel=1e-13)
    assert reunion("absorbing", 1, 2.0) == pytest.approx(0.989936121161329, rel=1e-13)
    assert reunion("reflecting", 1, 2.0) == pytest.approx(1.0006709252558303, rel=1e-13)
    assert reunion("absorbing", 2, 1.0) == pytest.approx(6.882453336441365e-06, rel=1e-12)


def test_periodic_single_walker_is_theta():
    # Poisson dual of the one-walker sum: sum_k exp(-k^2 L^2 / 2)
    L = 1.3
    expected = mpmath.nsum(lambda k: mpmath.exp(-k * k * L * L / 2), [-mpmath.inf, mpmath.inf])
    assert float(hankel_reunion(ReunionQuery("periodic", 1, L)).value) == pytest.approx(
        float(expected), rel=1e-14)


@pytest.mark.parametrize("model", MODELS)
@pytest.mark.parametrize("N", [1, 2, 3])
def test_hankel_matches_brute_force(model, N):
    for L in (0.7, 2.5):
        h = float(hankel_reunion(ReunionQuery(model, N, L)).value)
        b = float(brute_force_reunion(ReunionQuery(model, N, L)).value)
        assert abs(h / b - 1) < 1e-10


def test_result_metadata():
    r = hankel_reunion(ReunionQuery("absorbing", 2, 1.5))
    assert r.method is Method.HANKEL_DETERMINANT
    assert 0 <= r.truncation_error_estimate < 1e-20
    assert float(r) == float(r.value)
    assert brute_force_reunion(ReunionQuery("absorbing", 2, 1.5)).method is Method.BRUTE_FORCE


@pytest.mark.parametrize("bad", [
    dict(model="absorbing", num_walkers=0, length=1.0),
    dict(model="absorbing", num_walkers=2, length=-1.0),
    dict(model="absorbing", num_walkers=2, length=float("nan")),
    dict(model="torus", num_walkers=2, length=1.0),
    dict(model="absorbing", num_walkers=2, length=1.0, digits=5),
])
def test_query_validation(bad):
    with pytest.raises(ValueError):
        ReunionQuery(**bad)


def test_explicit_low_digits_raise_instead_of_escalating():
    with pytest.raises(PrecisionLossError):
        hankel_reunion(ReunionQuery("absorbing", 12, 0.5, digits=15))


def test_adaptive_precision_recovers():
    v = hankel_reunion(ReunionQuery("absorbing", 12, 0.5)).value
    assert v > 0


@pytest.mark.parametrize("model", MODELS)
def test_normalization(model):
    for N in (1, 3, 6):
        assert abs(reunion(model, N, 20 * math.sqrt(N)) - 1) < 1e-6


def test_theta_duality():
    for L in (0.5, 1.0, 3.0, 7.5):
        a = hankel_reunion(ReunionQuery("periodic", 1, L)).value
        b = g1_poisson_dual(L).value
        assert abs(float(a) - float(b)) < 1e-12


@pytest.mark.parametrize("model", MODELS)
def test_correspondence_with_partition_function(model):
    for L in (0.8, 2.0):
        for N in (1, 2, 3):
            direct = float(hankel_reunion(ReunionQuery(model, N, L)).value)
            assert reunion_via_partition(model, N, L) == pytest.approx(direct, rel=1e-10)


def test_partition_function_groups_parse():
    assert Group.parse("U") is Group.U
    z = partition_function("Sp2N", 2, 5.0)
    assert float(z) > 0


@settings(max_examples=25, deadline=None)
@given(L1=st.floats(0.6, 6.0), dL=st.floats(0.05, 2.0), N=st.integers(1, 4))
def test_absorbing_is_a_cdf_in_L(L1, dL, N):
    """Absorbing values are probabilities and increase with the wall distance."""
    a = reunion("absorbing", N, L1)
    b = reunion("absorbing", N, L1 + dL)
    # values within rounding of 1 may tie after conversion to float
    assert 0 <= a <= b + 1e-15 and b <= 1 + 1e-12


@settings(max_examples=20, deadline=None)
@given(model=st.sampled_from(MODELS), N=st.integers(1, 4), L=st.floats(0.5, 5.0))
def test_truncation_consistency(model, N, L):
    """Doubling the cutoff changes nothing beyond the working precision."""
    q = ReunionQuery(model, N, L)
    base = hankel_reunion(q)
    n_max = build_moment_table(model, N, L).n_max
    wide = hankel_reunion(ReunionQuery(model, N, L, n_max=2 * n_max))
    assert abs(float(wide.value) / float(base.value) - 1) < 1e-20 + 1e-25


@settings(max_examples=20, deadline=None)
@given(L=st.floats(0.5, 10.0))
def test_theta_duality_property(L):
    a = float(hankel_reunion(ReunionQuery("periodic", 1, L)).value)
    b = float(g1_poisson_dual(L).value)
    assert abs(a - b) < 1e-12


@settings(max_examples=15, deadline=None)
@given(model=st.sampled_from(MODELS), N=st.integers(1, 3), L=st.floats(0.5, 4.0))
def test_values_are_positive(model, N, L):
    assert hankel_reunion(ReunionQuery(model, N, L)).value > 0


@pytest.mark.parametrize("model", MODELS)
def test_precision_not_capped_at_double(model):
    # the decay rate is evaluated in the working context, not rounded to a float
    v = hankel_reunion(ReunionQuery(model, 3, 20.0)).value
    assert abs(v - 1) < v.context.mpf(10) ** -30
