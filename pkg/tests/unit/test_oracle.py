# Copyright 2026 The bezreduce Authors. All Rights Reserved.
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#    http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.

"""
Unit tests for _oracle module.
"""


import pytest
import numpy as np
from numpy.testing import assert_allclose

from bezreduce import ParamGrid, Bounds, ContinuityOrders, DomainError, \
    RankDeficiencyError, gram_system, normal_equations_solve, \
    brute_force_box_solve, uniform_grid, bernstein_values, fixed_indices, \
    inner_indices

GRID3 = ParamGrid([0.0, 0.5, 1.0])


def test_gram_system_linear():
    """
    Test gram_system() on the linear Bernstein basis on three points.
    """
    phi = np.array([1.0, 2.0, 4.0])
    system = gram_system([0, 1], phi, 1, GRID3)
    assert_allclose(system.matrix, [[1.25, 0.25], [0.25, 1.25]])
    assert_allclose(system.rhs, [2.0, 5.0])


def test_normal_equations_solve_linear():
    """
    Test normal_equations_solve() on an exactly representable function.
    """
    phi = np.array([1.0, 1.5, 2.0])
    assert_allclose(normal_equations_solve([0, 1], phi, 1, GRID3), [1.0, 2.0])
    assert_allclose(normal_equations_solve([1, 0], phi, 1, GRID3), [2.0, 1.0])
    assert normal_equations_solve([], phi, 1, GRID3).size == 0


def test_normal_equations_solve_errors():
    """
    Test normal_equations_solve() with too many free indices and with a
    singular Gram matrix.
    """
    grid = ParamGrid([0.25, 0.75])
    with pytest.raises(DomainError):
        normal_equations_solve([0, 1, 2], np.zeros(2), 2, grid)
    # B_1^2 vanishes at t=0 and t=1
    with pytest.raises(RankDeficiencyError):
        normal_equations_solve([1], np.zeros(2), 2, ParamGrid([0.0, 1.0]))


def test_brute_force_inactive_box():
    """
    Test that a box that does not bind gives the unconstrained solution.
    """
    rng = np.random.default_rng(2)
    p = rng.uniform(-1.0, 1.0, size=8)
    n, m = 7, 5
    orders = ContinuityOrders(0, 0)
    grid = uniform_grid(2 * n)
    result = brute_force_box_solve(p, n, m, orders, Bounds(-1e6, 1e6), grid)

    fixed = fixed_indices(m, orders)
    inner = inner_indices(m, orders)
    assert_allclose(result[fixed], [p[0], p[-1]])
    basis = bernstein_values(m, grid)
    phi = bernstein_values(n, grid).T @ p - result[fixed] @ basis[fixed]
    assert_allclose(result[inner],
                    normal_equations_solve(inner, phi, m, grid), atol=1e-10)


def test_brute_force_single_variable_clamps():
    """
    Test that the solution of a single inner variable is the clamped
    unconstrained value.
    """
    p = np.array([0.0, 3.0, -1.0, 2.0, 0.5])
    n, m = 4, 2
    orders = ContinuityOrders(0, 0)
    grid = uniform_grid(8)
    free = brute_force_box_solve(p, n, m, orders, Bounds(-1e6, 1e6), grid)
    unconstrained = free[1]
    for lower, upper in ((unconstrained + 0.1, unconstrained + 1.0),
                         (unconstrained - 1.0, unconstrained - 0.2),
                         (unconstrained - 1.0, unconstrained + 1.0)):
        result = brute_force_box_solve(p, n, m, orders,
                                       Bounds(lower, upper), grid)
        assert result[1] == pytest.approx(
            min(max(unconstrained, lower), upper), abs=1e-12)


def test_brute_force_degenerate_box():
    """
    Test that a box with l = u pins all inner variables.
    """
    p = np.arange(10.0)
    result = brute_force_box_solve(p, 9, 7, ContinuityOrders(2, 1),
                                   Bounds(0.5, 0.5), uniform_grid(20))
    assert np.all(result[[3, 4, 5]] == 0.5)


def test_brute_force_too_many_variables():
    """
    Test that the exhaustive solve refuses large problems.
    """
    with pytest.raises(DomainError) as exc_info:
        brute_force_box_solve(np.zeros(13), 12, 11, ContinuityOrders(0, 0),
                              Bounds(-1.0, 1.0), uniform_grid(24))
    assert "Exhaustive solve refused for 10 inner variables" in \
        str(exc_info.value)
