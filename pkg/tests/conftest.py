import pytest

from reunion.painleve_tw import solve_hastings_mcleod, tw_cdf


@pytest.fixture(scope="session")
def hm_solution():
    # t_right = 8 so that 1 - F1 at the edge sits below 1e-6
    return solve_hastings_mcleod(-10.0, 8.0)


@pytest.fixture(scope="session")
def tw2(hm_solution):
    return tw_cdf(hm_solution, 2)


@pytest.fixture(scope="session")
def tw1(hm_solution):
    return tw_cdf(hm_solution, 1)
