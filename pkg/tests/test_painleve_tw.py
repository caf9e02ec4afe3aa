
import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from scipy import special

from reunion.errors import InsufficientRangeError
from reunion.painleve_tw import (
    airy, f1_boundary, f1_substitution, painleve_residual, solve_hastings_mcleod, tail_sf, tw_cdf,
    tw_right_tail_exponent,
)


def test_airy_frozen():
    assert airy(0.0) == pytest.approx(0.355028053887817239, abs=1e-16)


@settings(max_examples=50, deadline=None)
@given(t=st.floats(-12.0, 12.0))
def test_airy_against_scipy(t):
    ref = special.airy(t)[0]
    assert abs(airy(t) - ref) <= 1e-13 * max(1.0, abs(ref)) + 1e-15 * abs(ref) + 1e-300


def test_airy_array():
    v = airy(np.array([[0.0, 1.0], [2.0, -3.0]]))
    assert v.shape == (2, 2)
    assert v[0, 0] == pytest.approx(airy(0.0))


def test_solution_quality(hm_solution):
    assert painleve_residual(hm_solution).max() < 1e-6
    q6 = hm_solution.value_at(6.0)
    assert abs(q6 / airy(6.0) - 1) < 1e-8
    assert np.all(hm_solution.q > 0)
    # left asymptotics q ~ sqrt(-t/2)
    assert hm_solution.q[-1] ** 2 / 5.0 == pytest.approx(1.0, abs=1e-3)


def test_solver_argument_checks():
    with pytest.raises(ValueError):
        solve_hastings_mcleod(-10.0, 5.0)
    with pytest.raises(ValueError):
        solve_hastings_mcleod(-8.0, 6.0)
    with pytest.raises(ValueError):
        solve_hastings_mcleod(-10.0, 6.0, step_tol=1e-4)


@pytest.mark.parametrize("beta", [1, 2])
def test_tw_table_is_cdf(beta, tw1, tw2):
    table = tw1 if beta == 1 else tw2
    g, c, p, sf = table.ascending()
    assert np.all(np.diff(c) >= 0)
    assert c[0] < 1e-6 and sf[-1] < 1e-6
    assert np.all(p >= 0)
    assert np.trapezoid(p, g) == pytest.approx(1.0, abs=1e-5)
    assert np.allclose(c + sf, 1.0, atol=1e-14)


def test_tw_medians(tw1, tw2):
    assert tw2.quantile(0.5) == pytest.approx(-1.805, abs=2e-3)
    assert tw1.quantile(0.5) == pytest.approx(-1.269, abs=2e-3)


def test_tw_known_moments(tw2):
    g, _, p, _ = tw2.ascending()
    mean = np.trapezoid(g * p, g)
    assert mean == pytest.approx(-1.7710868074, abs=1e-6)


def test_right_tail_exponent(tw2):
    assert tw_right_tail_exponent(tw2, 4.0, 6.0) == pytest.approx(4 / 3, rel=0.1)


def test_cdf_at_range(tw2):
    with pytest.raises(InsufficientRangeError):
        tw2.cdf_at(20.0)
    assert tw2.cdf_at(-1.8) == pytest.approx(float(np.interp(-1.8, *tw2.ascending()[:2])),
                                             abs=1e-6)


def test_beta_validation(hm_solution):
    with pytest.raises(ValueError):
        tw_cdf(hm_solution, 4)


def test_f1_substitution(hm_solution):
    x, f1, res = f1_substitution(hm_solution)
    assert np.max(np.abs(res)) < 1e-6
    i = np.argmin(np.abs(x - 4.0))
    assert f1[i] / f1_boundary(x[i]) == pytest.approx(1.0, rel=0.05)


def test_csv_format(tw2):
    lines = tw2.to_csv().splitlines()
    assert lines[0] == "t,cdf,pdf"
    assert len(lines) == len(tw2.grid) + 1


@pytest.mark.parametrize("beta", [1, 2])
def test_survival_tail_joins_table(beta, tw1, tw2):
    table = tw1 if beta == 1 else tw2
    assert table.sf_at(7.5) == pytest.approx(tail_sf(7.5, beta), rel=1e-6)
    assert table.sf_at(8.0) == pytest.approx(tail_sf(8.0 + 1e-9, beta), rel=1e-3)
    assert table.sf_at(12.0) < table.sf_at(9.0) < table.sf_at(8.0)
