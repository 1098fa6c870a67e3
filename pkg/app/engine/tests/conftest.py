import math

import pytest

from app.engine.bifurcation import find_tw_bifurcation
from app.engine.state import Branch, RadialGrid, RadialSteadyState, make_grid
from app.engine.steady import minimal_solution, solve_for_lambda, trace_branch


@pytest.fixture(scope="session")
def grid_r4() -> RadialGrid:
    return make_grid(4.0, 2048)


@pytest.fixture(scope="session")
def state_r4_a1(grid_r4: RadialGrid) -> RadialSteadyState:
    return solve_for_lambda(4.0, 1.0, grid=grid_r4)


@pytest.fixture(scope="session")
def branch_r4(grid_r4: RadialGrid) -> Branch:
    return trace_branch(4.0, 6.0, 64, grid_r4)


@pytest.fixture(scope="session")
def sampled_points(branch_r4: Branch) -> list:
    points = branch_r4['points']
    step = max(1, len(points) // 8)
    return points[::step][:8]


@pytest.fixture(scope="session")
def minimal_points(branch_r4: Branch) -> list:
    return branch_r4['points'][:branch_r4['minimal_index'] + 1]


@pytest.fixture(scope="session")
def tw_report_r4(branch_r4: Branch):
    return find_tw_bifurcation(4.0, branch_r4, beta=0.625)


@pytest.fixture(scope="session")
def minimal_at_inverse_e(branch_r4: Branch) -> RadialSteadyState:
    return minimal_solution(4.0, math.exp(-1.0), branch_r4)
