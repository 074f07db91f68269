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
Unit tests for _bvls module.
"""


import re
import pytest
import numpy as np
from numpy.testing import assert_allclose

import bezreduce._bvls
from bezreduce import Backend, Bounds, ActivePartition, SubproblemState, \
    ContinuityOrders, DomainError, ConsistencyError, SolverError, \
    RankDeficiencyError, KKTViolation, initial_phi, first_subproblem, \
    transfer_to_free, transfer_to_bound, kkt_check, kkt_tolerance, \
    solve_component, brute_force_box_solve, normal_equations_solve, \
    bernstein_values, uniform_grid, project, expand, update_coeffs_expand, \
    fixed_indices, inner_indices, fixed_endpoint_coords, solve_components, \
    COORDINATES

BACKENDS = [Backend.DUAL_INCREMENTAL, Backend.NORMAL_EQUATIONS]

HUGE = Bounds(-1e9, 1e9)


def random_box_instance(seed):
    """
    Return (p, n, m, orders, bounds, grid) of a random box constrained
    problem with 1 to 6 inner variables and a box that binds.
    """
    rng = np.random.default_rng(seed)
    while True:
        n = int(rng.integers(4, 13))
        m = int(rng.integers(2, n))
        alpha = int(rng.integers(-1, 3))
        beta = int(rng.integers(-1, 3))
        k = m - alpha - beta - 1
        if alpha + beta < m - 1 and alpha < n and beta < n and k <= 6:
            break
    p = rng.uniform(-1.0, 1.0, size=n + 1)
    lower, upper = sorted(rng.uniform(-0.6, 0.6, size=2))
    return (p, n, m, ContinuityOrders(alpha, beta), Bounds(lower, upper),
            uniform_grid(2 * n))


def unconstrained(p, n, m, orders, grid):
    """
    Return the m+1 coordinates of the reduction without box constraints.
    """
    left, right = fixed_endpoint_coords(p, n, m, orders)
    fixed = fixed_indices(m, orders)
    inner = inner_indices(m, orders)
    result = np.zeros(m + 1)
    result[fixed] = np.concatenate([left, right])
    phi = initial_phi(p, n, m, dict(zip(fixed, result[fixed])), grid)
    result[inner] = normal_equations_solve(inner, phi, m, grid)
    return result


def make_state(free, m=7, N=20, seed=0):
    # pylint: disable=invalid-name
    """
    Return (state, basis, grid) of a first subproblem with a random target.
    """
    grid = uniform_grid(N)
    basis = bernstein_values(m, grid)
    phi = np.random.default_rng(seed).normal(size=len(grid))
    state = first_subproblem(phi, free, m, grid, basis,
                             Backend.DUAL_INCREMENTAL)
    return state, basis, grid


# Test cases for Bounds()
TESTCASES_BOUNDS_INVALID = [
    # lower, upper, exp_exc_msg
    (1.0, 0.0, "Lower bound 1.0 exceeds upper bound 0.0"),
    (float('nan'), 0.0, "Bounds must not be NaN"),
    (0.0, float('nan'), "Bounds must not be NaN"),
]


@pytest.mark.parametrize(
    "lower, upper, exp_exc_msg",
    TESTCASES_BOUNDS_INVALID)
def test_bounds_invalid(lower, upper, exp_exc_msg):
    """
    Test Bounds() with invalid values.
    """
    with pytest.raises(DomainError) as exc_info:
        Bounds(lower, upper)
    assert re.match(exp_exc_msg, str(exc_info.value))


def test_bounds():
    """
    Test the attributes and methods of Bounds.
    """
    bounds = Bounds(-1, 2)
    assert tuple(bounds) == (-1.0, 2.0)
    assert bounds == Bounds(-1.0, 2.0)
    assert bounds.contains([-1.0, 0.0, 2.0])
    assert not bounds.contains([2.5])
    assert Bounds(float('-inf'), float('inf')).contains([1e300])


def test_active_partition():
    """
    Test ActivePartition transfers and the partition check.
    """
    partition = ActivePartition(7, ContinuityOrders(2, 1))
    assert partition.as_dict() == {
        'fixed': [0, 1, 2, 6, 7], 'free': [3, 4, 5], 'lower': [],
        'upper': []}
    partition.to_bound(4, 'upper')
    partition.to_bound(3, 'lower')
    partition.check()
    assert partition.as_dict()['upper'] == [4]
    partition.to_free(4)
    partition.check()
    assert partition.as_dict()['free'] == [4, 5]
    partition.pin_all('upper')
    assert partition.as_dict()['upper'] == [4, 5]

    partition.lower_L.add(5)
    with pytest.raises(ConsistencyError):
        partition.check()


def test_first_subproblem_head_parameters():
    """
    Test the first subproblem of a reduction from degree 9 to 7 with
    alpha=2, beta=1 on 21 grid points.
    """
    state, _, _ = make_state(inner_indices(7, ContinuityOrders(2, 1)))
    assert state.free == (3, 4, 5)
    assert len(state.duals) == 3
    assert state.iteration == 0
    assert_allclose(state.coeffs, project(state.duals, state.phi))


def test_initial_phi_unconstrained():
    """
    Test that without continuity constraints the first target is the
    sampled original coordinate.
    """
    grid = uniform_grid(18)
    p = np.linspace(-1.0, 2.0, 10) ** 2
    phi = initial_phi(p, 9, 7, {}, grid)
    assert_allclose(phi, bernstein_values(9, grid).T @ p)


def test_first_subproblem_same_space():
    """
    Test that with m = n the first subproblem reproduces the original
    control points.
    """
    rng = np.random.default_rng(4)
    p = rng.normal(size=8)
    n = m = 7
    orders = ContinuityOrders(1, 0)
    grid = uniform_grid(14)
    fixed = fixed_indices(m, orders)
    left, right = fixed_endpoint_coords(p, n, m, orders)
    phi = initial_phi(p, n, m, dict(zip(fixed, np.concatenate([left, right]))),
                      grid)
    for backend in BACKENDS:
        state = first_subproblem(phi, inner_indices(m, orders), m, grid,
                                 bernstein_values(m, grid), backend)
        assert_allclose(state.coeffs, p[list(state.free)], atol=1e-10)


@pytest.mark.parametrize("s", [0.0, 0.7, -2.5])
def test_transfer_to_free(s):
    """
    Test that transfer_to_free() carries the coefficients to the projection
    of the new target onto the expanded basis.
    """
    state, basis, grid = make_state([2, 3, 5, 6])

    # The function to be tested
    new_state = transfer_to_free(state, 4, s, basis,
                                 Backend.DUAL_INCREMENTAL)

    assert new_state.free == (2, 3, 5, 6, 4)
    assert new_state.iteration == 1
    assert_allclose(new_state.phi, state.phi + s * basis[4])
    assert_allclose(new_state.coeffs,
                    project(new_state.duals, new_state.phi), atol=1e-10)

    normal = transfer_to_free(state, 4, s, basis, Backend.NORMAL_EQUATIONS,
                              7, grid)
    assert normal.free == new_state.free
    assert_allclose(normal.coeffs, new_state.coeffs, atol=1e-8)


def test_transfer_to_free_zero_shift():
    """
    Test that releasing a variable resting at 0 is a plain expansion.
    """
    state, basis, _ = make_state([1, 2, 5])
    new_state = transfer_to_free(state, 3, 0.0, basis,
                                 Backend.DUAL_INCREMENTAL)
    _, scratch = expand(state.duals, 3, basis[3])
    assert_allclose(new_state.coeffs,
                    update_coeffs_expand(state.coeffs, scratch,
                                         float(state.phi @ basis[3])))


@pytest.mark.parametrize("q", [1, 3, 6])
@pytest.mark.parametrize("s", [0.0, 1.3])
def test_transfer_to_bound(q, s):
    """
    Test that transfer_to_bound() carries the coefficients to the projection
    of the new target onto the contracted basis.
    """
    state, basis, grid = make_state([1, 2, 3, 4, 5, 6])

    # The function to be tested
    new_state = transfer_to_bound(state, q, s, basis,
                                  Backend.DUAL_INCREMENTAL)

    assert q not in new_state.free
    assert len(new_state.free) == 5
    assert_allclose(new_state.phi, state.phi - s * basis[q])
    assert_allclose(new_state.coeffs,
                    project(new_state.duals, new_state.phi), atol=1e-10)

    normal = transfer_to_bound(state, q, s, basis, Backend.NORMAL_EQUATIONS,
                               7, grid)
    assert normal.free == new_state.free
    assert_allclose(normal.coeffs, new_state.coeffs, atol=1e-8)


def test_transfer_to_bound_at_value():
    """
    Test that moving a variable to a bound equal to its current value does
    not change the other coefficients.
    """
    state, basis, _ = make_state([1, 2, 3, 4])
    pos = state.free.index(3)
    new_state = transfer_to_bound(state, 3, state.coeffs[pos], basis,
                                  Backend.DUAL_INCREMENTAL)
    assert_allclose(new_state.coeffs, np.delete(state.coeffs, pos),
                    atol=1e-12)


def test_transfer_to_bound_last():
    """
    Test that moving the last free variable to a bound leaves an empty
    subproblem.
    """
    state, basis, _ = make_state([4])
    new_state = transfer_to_bound(state, 4, 0.5, basis,
                                  Backend.DUAL_INCREMENTAL)
    assert new_state.free == ()
    assert new_state.coeffs.size == 0
    assert len(new_state.duals) == 0


def test_transfer_round_trips():
    """
    Test that releasing a variable and moving it back to the same bound
    restores the subproblem, and vice versa.
    """
    state, basis, _ = make_state([1, 2, 4, 5])
    freed = transfer_to_free(state, 3, 0.4, basis, Backend.DUAL_INCREMENTAL)
    back = transfer_to_bound(freed, 3, 0.4, basis, Backend.DUAL_INCREMENTAL)
    assert back.free == state.free
    assert_allclose(back.phi, state.phi, atol=1e-12)
    assert_allclose(back.coeffs, state.coeffs, atol=1e-9)
    assert_allclose(back.duals.duals, state.duals.duals, atol=1e-9)

    bound = transfer_to_bound(state, 2, -0.3, basis, Backend.DUAL_INCREMENTAL)
    again = transfer_to_free(bound, 2, -0.3, basis, Backend.DUAL_INCREMENTAL)
    assert sorted(again.free) == sorted(state.free)
    exp = state.solution()
    for index, value in again.solution().items():
        assert value == pytest.approx(exp[index], abs=1e-9)


def test_kkt_check_no_bound_variables():
    """
    Test that kkt_check() accepts a subproblem without bound variables.
    """
    state, basis, _ = make_state([1, 2, 3, 4, 5, 6])
    partition = ActivePartition(7, ContinuityOrders(0, 0))
    assert kkt_check(state, partition, basis, 1e-10) is None


def test_kkt_check_one_variable():
    """
    Test kkt_check() on a single variable whose unconstrained optimum lies
    above the box.
    """
    grid = uniform_grid(8)
    basis = bernstein_values(2, grid)
    z = 2.0
    phi1 = z * basis[1]
    partition = ActivePartition(2, ContinuityOrders(0, 0))
    tol = kkt_tolerance(phi1)

    # At the upper bound below z, the gradient points outward
    partition.to_bound(1, 'upper')
    state = SubproblemState(phi1 - 1.0 * basis[1], (), None, np.zeros(0))
    assert kkt_check(state, partition, basis, tol) is None

    # At the lower bound below z, the variable wants to move up
    partition.to_free(1)
    partition.to_bound(1, 'lower')
    violation = kkt_check(state, partition, basis, tol)
    assert isinstance(violation, KKTViolation)
    assert violation.index == 1
    assert violation.side == 'lower'
    assert violation.gradient < 0.0

    # An excluded index is not tested
    assert kkt_check(state, partition, basis, tol, exclude=(1,)) is None
    assert kkt_check(state, partition, basis, tol, exclude=(2,)) == \
        violation


def test_kkt_tolerance():
    """
    Test function for kkt_tolerance().
    """
    assert kkt_tolerance([0.0, -3.0, 1.0]) == pytest.approx(4e-10)
    assert kkt_tolerance([]) == pytest.approx(1e-10)


@pytest.mark.parametrize("backend", BACKENDS)
@pytest.mark.parametrize("bounds", [HUGE, Bounds(float('-inf'),
                                                 float('inf'))])
def test_solve_component_inactive_box(backend, bounds):
    """
    Test that a box that does not bind gives the traditional reduction after
    a single subproblem.
    """
    rng = np.random.default_rng(8)
    p = rng.uniform(-1.0, 1.0, size=10)
    orders = ContinuityOrders(2, 1)
    grid = uniform_grid(20)

    result, diagnostics = solve_component(p, 9, 7, orders, bounds, grid,
                                          backend=backend)

    assert_allclose(result, unconstrained(p, 9, 7, orders, grid),
                    atol=1e-10)
    assert diagnostics.iterations == 1
    assert diagnostics.case1_count == 0
    assert diagnostics.case2_count == 0
    assert diagnostics.partition.as_dict()['free'] == [3, 4, 5]


@pytest.mark.parametrize("backend", BACKENDS)
def test_solve_component_single_variable(backend):
    """
    Test that a single inner variable is clamped to the box.
    """
    p = np.array([0.0, 3.0, -1.0, 2.0, 0.5])
    orders = ContinuityOrders(0, 0)
    grid = uniform_grid(8)
    z = unconstrained(p, 4, 2, orders, grid)[1]
    for lower, upper in ((z + 0.1, z + 1.0), (z - 1.0, z - 0.2),
                         (z - 1.0, z + 1.0)):
        result, _ = solve_component(p, 4, 2, orders, Bounds(lower, upper),
                                    grid, backend=backend)
        assert result[1] == pytest.approx(min(max(z, lower), upper),
                                          abs=1e-12)


@pytest.mark.parametrize("backend", BACKENDS)
def test_solve_component_release_returns_to_bound(backend, monkeypatch):
    """
    Test that a released variable whose new solution lies beyond its bound
    at once is put back there without a step, and that the loop continues
    with an optimality test that leaves it out.
    """
    p = np.array([0.0, 3.0, -1.0, 2.0, 0.5])
    orders = ContinuityOrders(0, 0)
    grid = uniform_grid(8)
    z = unconstrained(p, 4, 2, orders, grid)[1]
    bounds = Bounds(z - 1.0, z - 0.2)
    calls = []
    real_kkt_check = bezreduce._bvls.kkt_check

    def kkt_check_releasing(state, partition, basis_values, tol,
                            exclude=()):
        calls.append(tuple(exclude))
        violation = real_kkt_check(state, partition, basis_values, tol,
                                   exclude)
        if violation is None and len(calls) == 1:
            # release the upper bound variable once, although it is optimal
            return KKTViolation(1, 'upper', 1.0)
        return violation

    monkeypatch.setattr(bezreduce._bvls, 'kkt_check', kkt_check_releasing)

    result, diagnostics = solve_component(p, 4, 2, orders, bounds, grid,
                                          backend=backend)

    assert calls == [(), (1,)]
    assert result[1] == bounds.upper
    assert diagnostics.case1_count == 1
    assert diagnostics.case2_count == 2
    assert diagnostics.iterations == 4
    assert diagnostics.partition.as_dict()['upper'] == [1]


@pytest.mark.parametrize("seed", range(60))
def test_solve_component_oracle(seed):
    """
    Test that both backends find the optimum of the exhaustive solve.
    """
    p, n, m, orders, bounds, grid = random_box_instance(seed)
    exp = brute_force_box_solve(p, n, m, orders, bounds, grid)
    target = bernstein_values(n, grid).T @ p
    basis = bernstein_values(m, grid)
    exp_error = np.linalg.norm(target - basis.T @ exp)
    for backend in BACKENDS:
        result, diagnostics = solve_component(p, n, m, orders, bounds, grid,
                                              backend=backend)
        assert_allclose(result, exp, rtol=0, atol=1e-7)
        error = np.linalg.norm(target - basis.T @ result)
        assert error == pytest.approx(exp_error, rel=1e-9, abs=1e-12)
        assert diagnostics.error_history[-1] == \
            pytest.approx(error ** 2, rel=1e-9, abs=1e-12)
        diagnostics.partition.check()


@pytest.mark.parametrize("seed", range(60))
def test_solve_component_invariants(seed):
    """
    Test feasibility, exact bound values, descent and the consistency of the
    maintained coefficients.
    """
    p, n, m, orders, bounds, grid = random_box_instance(seed)

    result, diagnostics = solve_component(p, n, m, orders, bounds, grid,
                                          audit=True, coordinate='x')

    inner = inner_indices(m, orders)
    assert bounds.contains(result[inner])
    for index in diagnostics.partition.lower_L:
        assert result[index] == bounds.lower
    for index in diagnostics.partition.upper_U:
        assert result[index] == bounds.upper

    history = diagnostics.error_history
    assert history
    slack = 1e-12 * (1.0 + history[0])
    for before, after in zip(history, history[1:]):
        assert after <= before + slack

    assert len(diagnostics.coeff_drift) == diagnostics.iterations
    assert max(diagnostics.coeff_drift) <= 1e-8
    assert max(diagnostics.dual_defect) <= 1e-8
    assert diagnostics.iterations <= 10 * (m + 1)
    assert diagnostics.as_dict()['backend'] == 'dual'


@pytest.mark.parametrize("backend", BACKENDS)
def test_solve_components(backend, monkeypatch):
    """
    Test that solve_components() gives the per-coordinate results of
    solve_component() and builds the first dual basis once for both.
    """
    calls = []
    real_build_dual = bezreduce._bvls.build_dual

    def counting_build_dual(indices, m, grid, basis_values=None):
        calls.append(tuple(indices))
        return real_build_dual(indices, m, grid, basis_values)

    monkeypatch.setattr(bezreduce._bvls, 'build_dual', counting_build_dual)
    rng = np.random.default_rng(21)
    points = rng.uniform(-1.0, 1.0, size=(10, 2))
    orders = ContinuityOrders(1, 1)
    grid = uniform_grid(20)
    box = (Bounds(-0.2, 0.3), Bounds(-0.3, 0.1))

    result, diagnostics = solve_components(points, 9, 7, orders, box, grid,
                                           backend=backend)

    if backend is Backend.DUAL_INCREMENTAL:
        assert calls == [(2, 3, 4, 5)]
    else:
        assert calls == []
    assert result.shape == (8, 2)
    assert list(diagnostics) == list(COORDINATES)
    for axis, coordinate in enumerate(COORDINATES):
        exp, exp_diagnostics = solve_component(
            points[:, axis], 9, 7, orders, box[axis], grid, backend=backend)
        assert_allclose(result[:, axis], exp, rtol=0, atol=1e-10)
        assert diagnostics[coordinate].iterations == \
            exp_diagnostics.iterations
        assert diagnostics[coordinate].partition.as_dict() == \
            exp_diagnostics.partition.as_dict()


def test_solve_components_degenerate_box(monkeypatch):
    """
    Test that no dual basis is built when both boxes are degenerate.
    """
    def fail_build_dual(*args, **kwargs):
        raise AssertionError("build_dual() called")

    monkeypatch.setattr(bezreduce._bvls, 'build_dual', fail_build_dual)
    points = np.linspace(0.0, 1.0, 20).reshape(10, 2)

    result, diagnostics = solve_components(
        points, 9, 7, ContinuityOrders(0, 0),
        (Bounds(0.5, 0.5), Bounds(0.25, 0.25)), uniform_grid(18))

    assert_allclose(result[1:7, 0], 0.5)
    assert_allclose(result[1:7, 1], 0.25)
    assert diagnostics['y'].iterations == 0


def test_solve_components_shape():
    """
    Test solve_components() with control points of the wrong shape.
    """
    with pytest.raises(DomainError) as exc_info:
        solve_components(np.zeros(10), 9, 7, ContinuityOrders(0, 0),
                         (HUGE, HUGE), uniform_grid(18))
    assert "Expected 10 control points of degree 9" in str(exc_info.value)


def test_solve_component_degenerate_box():
    """
    Test that a box with l = u pins all inner variables without running the
    active-set loop.
    """
    p = np.linspace(0.0, 1.0, 10)
    result, diagnostics = solve_component(
        p, 9, 7, ContinuityOrders(2, 1), Bounds(0.25, 0.25), uniform_grid(20))
    assert np.all(result[[3, 4, 5]] == 0.25)
    assert diagnostics.iterations == 0
    assert diagnostics.partition.as_dict()['lower'] == [3, 4, 5]


def test_solve_component_small_grid():
    """
    Test that solve_component() rejects a grid with fewer than m+1 points.
    """
    with pytest.raises(DomainError) as exc_info:
        solve_component(np.zeros(10), 9, 7, ContinuityOrders(0, 0), HUGE,
                        uniform_grid(6))
    assert "too small for degree 7" in str(exc_info.value)


def test_solve_component_iteration_cap(monkeypatch):
    """
    Test that reaching the iteration cap raises SolverError with the best
    iterate.
    """
    monkeypatch.setattr(bezreduce._bvls, 'ITERATION_CAP_FACTOR', 0)
    p = np.linspace(0.0, 1.0, 10)
    with pytest.raises(SolverError) as exc_info:
        solve_component(p, 9, 7, ContinuityOrders(0, 0), Bounds(0.2, 0.4),
                        uniform_grid(18), coordinate='y')
    exc = exc_info.value
    assert exc.coordinate == 'y'
    assert exc.iteration == 1
    assert exc.best_iterate.shape == (8,)
    assert re.match(r"y-coordinate: No optimum after 0 subproblems "
                    r"\(iteration 1\)", str(exc))


def test_solve_component_rank_deficiency(monkeypatch):
    """
    Test that a rank deficient subproblem is reported as SolverError.
    """
    def raise_rank_deficiency(*args, **kwargs):
        raise RankDeficiencyError("Basis function 3 is numerically in the "
                                  "span", index=3)

    monkeypatch.setattr(bezreduce._bvls, 'first_subproblem',
                        raise_rank_deficiency)
    with pytest.raises(SolverError) as exc_info:
        solve_component(np.zeros(10), 9, 7, ContinuityOrders(0, 0),
                        Bounds(-1.0, 1.0), uniform_grid(18), coordinate='x')
    assert isinstance(exc_info.value.__cause__, RankDeficiencyError)
    assert "First subproblem is rank deficient" in str(exc_info.value)
