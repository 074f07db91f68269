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
Active-set solver for the box constrained least squares reduction of one
coordinate.

The inner control point coordinates (those not fixed by continuity) are
partitioned into free variables F and variables resting at the lower (L) or
upper (U) bound. Each subproblem fits the free variables to

    phi = (original coordinate) - (continuity-fixed part) - (bound part)

over the sub-basis {B_j^m : j in F}. The loop follows Stark and Parker:
a subproblem solution outside the box causes one variable to be moved from
F to its bound (case 2, dual basis contraction), and at a feasible
subproblem optimum the gradient sign test either confirms optimality or
releases one bound variable into F (case 1, dual basis expansion). A
released variable whose new subproblem solution points straight back to
its bound is returned there and left out of the next sign test.

The subproblem solution coefficients are carried through both cases without
re-projecting (DUAL_INCREMENTAL backend), or recomputed from the normal
equations each time (NORMAL_EQUATIONS backend).
"""


import enum
import logging
from collections import namedtuple

import numpy as np

from ._constants import SOLVER_LOGGER_NAME, KKT_TOLERANCE, \
    ITERATION_CAP_FACTOR
from ._exceptions import DomainError, ConsistencyError, SolverError, \
    RankDeficiencyError
from ._bernstein import bernstein_values
from ._continuity import fixed_endpoint_coords, fixed_indices, inner_indices
from ._dual import build_dual, expand, contract, empty_dual, project, \
    update_coeffs_expand, update_coeffs_contract, biorthogonality_defect
from ._oracle import normal_equations_solve

__all__ = ['Backend', 'Bounds', 'ActivePartition', 'SubproblemState',
           'KKTViolation', 'ComponentDiagnostics', 'initial_phi',
           'first_subproblem', 'transfer_to_free', 'transfer_to_bound',
           'kkt_check', 'kkt_tolerance', 'solve_component',
           'solve_components', 'COORDINATES']

LOG = logging.getLogger(SOLVER_LOGGER_NAME)

#: Names of the coordinates of a planar curve, in column order.
COORDINATES = ('x', 'y')


class Backend(enum.Enum):
    """
    How the subproblems of the active-set loop are solved.
    """

    #: Incrementally updated dual bases and coefficients.
    DUAL_INCREMENTAL = 'dual'

    #: A Cholesky solve of the normal equations for every subproblem.
    NORMAL_EQUATIONS = 'normal'


class Bounds:
    """
    Lower and upper bound for the inner control point coordinates of one
    coordinate direction. Infinite bounds are allowed.
    """

    def __init__(self, lower, upper):
        lower = float(lower)
        upper = float(upper)
        if np.isnan(lower) or np.isnan(upper):
            raise DomainError(f"Bounds must not be NaN: [{lower}, {upper}]")
        if lower > upper:
            raise DomainError(
                f"Lower bound {lower} exceeds upper bound {upper}")
        self._lower = lower
        self._upper = upper

    @property
    def lower(self):
        """
        float: The lower bound.
        """
        return self._lower

    @property
    def upper(self):
        """
        float: The upper bound.
        """
        return self._upper

    def __repr__(self):
        return f"Bounds(lower={self._lower!r}, upper={self._upper!r})"

    def __eq__(self, other):
        if not isinstance(other, Bounds):
            return NotImplemented
        return (self._lower, self._upper) == (other.lower, other.upper)

    def __hash__(self):
        return hash((self._lower, self._upper))

    def __iter__(self):
        return iter((self._lower, self._upper))

    def contains(self, values):
        """
        Return whether all values lie in the closed interval.
        """
        values = np.asarray(values, dtype=float)
        return bool(np.all((values >= self._lower) &
                           (values <= self._upper)))


class ActivePartition:
    """
    The partition of the Bernstein indices 0..m into continuity-fixed (C),
    free (F), lower-bound (L) and upper-bound (U) indices.

    All inner indices start out free.
    """

    def __init__(self, m, orders):
        self.m = m
        self.fixed_C = frozenset(fixed_indices(m, orders))
        self.free_F = set(inner_indices(m, orders))
        self.lower_L = set()
        self.upper_U = set()

    def __repr__(self):
        return "ActivePartition(C={}, F={}, L={}, U={})".format(
            sorted(self.fixed_C), sorted(self.free_F), sorted(self.lower_L),
            sorted(self.upper_U))

    def check(self):
        """
        Raise ConsistencyError if the four sets do not partition 0..m.
        """
        sets = (self.fixed_C, self.free_F, self.lower_L, self.upper_U)
        total = sum(len(s) for s in sets)
        union = set().union(*sets)
        if total != self.m + 1 or union != set(range(self.m + 1)):
            raise ConsistencyError(f"Invalid active partition: {self!r}")

    def to_bound(self, index, side):
        """
        Move a free index to the 'lower' or 'upper' set.
        """
        self.free_F.remove(index)
        if side == 'lower':
            self.lower_L.add(index)
        else:
            self.upper_U.add(index)

    def to_free(self, index):
        """
        Move a bound index to the free set.
        """
        if index in self.lower_L:
            self.lower_L.remove(index)
        else:
            self.upper_U.remove(index)
        self.free_F.add(index)

    def pin_all(self, side='lower'):
        """
        Move all free indices to one bound.
        """
        for index in sorted(self.free_F):
            self.to_bound(index, side)

    def as_dict(self):
        """
        Return the partition as a dict of sorted index lists.
        """
        return {
            'fixed': sorted(self.fixed_C),
            'free': sorted(self.free_F),
            'lower': sorted(self.lower_L),
            'upper': sorted(self.upper_U),
        }


class SubproblemState:
    """
    One subproblem of the active-set loop.

    Attributes:

      phi (numpy.ndarray): The sampled target function of the subproblem.

      free (tuple of int): The free indices, in coefficient order.

      duals (DualBasis): The dual basis of the free indices, or `None` for
        the NORMAL_EQUATIONS backend.

      coeffs (numpy.ndarray): The subproblem solution coefficients, i.e.
        <phi, d_j> for the free indices j.

      iteration (int): Number of transfers since the first subproblem.
    """

    def __init__(self, phi, free, duals, coeffs, iteration=0):
        self.phi = phi
        self.free = tuple(free)
        self.duals = duals
        self.coeffs = coeffs
        self.iteration = iteration

    def __repr__(self):
        return "SubproblemState(free={}, iteration={})".format(
            self.free, self.iteration)

    def solution(self):
        """
        Return the subproblem solution as a dict index -> value.
        """
        return dict(zip(self.free, self.coeffs))


#: A bound variable whose gradient sign shows that releasing it decreases
#: the error. side is 'lower' or 'upper'.
KKTViolation = namedtuple('KKTViolation', ['index', 'side', 'gradient'])


class ComponentDiagnostics:
    """
    What happened while solving one coordinate.

    Attributes:

      backend (Backend): The subproblem backend.

      iterations (int): Number of subproblems solved.

      case1_count (int): Number of transfers from a bound into F.

      case2_count (int): Number of transfers from F to a bound.

      error_history (list of float): Squared error E^2 of the feasible
        iterate after each subproblem.

      coeff_drift (list of float): Per subproblem, max deviation of the
        maintained coefficients from a fresh projection (audit only).

      dual_defect (list of float): Per subproblem, biorthogonality defect of
        the maintained dual basis (audit only).

      partition (ActivePartition): The final partition.
    """

    def __init__(self, backend):
        self.backend = backend
        self.iterations = 0
        self.case1_count = 0
        self.case2_count = 0
        self.error_history = []
        self.coeff_drift = []
        self.dual_defect = []
        self.partition = None

    def __repr__(self):
        return ("ComponentDiagnostics(backend={}, iterations={}, case1={}, "
                "case2={})".format(self.backend.value, self.iterations,
                                   self.case1_count, self.case2_count))

    def as_dict(self):
        """
        Return the diagnostics as a JSON-serializable dict.
        """
        return {
            'backend': self.backend.value,
            'iterations': self.iterations,
            'case1_count': self.case1_count,
            'case2_count': self.case2_count,
            'error_history': list(self.error_history),
            'coeff_drift': list(self.coeff_drift),
            'dual_defect': list(self.dual_defect),
            'partition': self.partition.as_dict() if self.partition else None,
        }


def initial_phi(p_coord, n, m, fixed, grid, basis_values=None):
    """
    Return the sampled target function of the first subproblem: the original
    coordinate minus the continuity-fixed part of the reduced curve.

    Parameters:

      p_coord (array-like): The n+1 original coordinates, or an (n+1) x d
        array of control points for d coordinates at once.

      n (int): The original degree.

      m (int): The reduced degree.

      fixed (dict): Continuity-fixed coordinates (or coordinate rows), by
        Bernstein index.

      grid (ParamGrid): The grid.

      basis_values (numpy.ndarray): The sampled Bernstein basis of degree m,
        if already available.
    """
    if basis_values is None:
        basis_values = bernstein_values(m, grid)
    phi = bernstein_values(n, grid).T @ np.asarray(p_coord, dtype=float)
    if fixed:
        indices = list(fixed)
        values = np.array([fixed[i] for i in indices], dtype=float)
        phi = phi - basis_values[indices].T @ values
    return phi


def first_subproblem(phi, free, m, grid, basis_values, backend, duals=None):
    """
    Solve the subproblem with all given indices free.

    The dual basis of the free indices does not depend on phi, so the x and
    y coordinates of a curve can share one: pass it as duals. Otherwise it
    is built here. phi may also hold several target functions as columns.

    Raises:
      DomainError: duals belongs to other indices.
      RankDeficiencyError: The sampled sub-basis is numerically dependent.
    """
    free = tuple(free)
    if backend is Backend.DUAL_INCREMENTAL:
        if duals is None:
            duals = build_dual(free, m, grid, basis_values)
        elif duals.indices != free:
            raise DomainError(
                f"Dual basis of indices {duals.indices} does not belong to "
                f"the free indices {free}")
        coeffs = project(duals, phi)
    else:
        duals = None
        coeffs = normal_equations_solve(free, phi, m, grid, basis_values)
    return SubproblemState(phi, free, duals, coeffs, 0)


def transfer_to_free(state, q, s, basis_values, backend, m=None, grid=None):
    """
    Release the bound variable q, resting at value s, into the free set
    (case 1).

    The target function becomes phi + s B_q. With the DUAL_INCREMENTAL
    backend, the dual basis is expanded by q and the coefficients are
    carried over: first e_h + s w_h for the change of phi, then the
    expansion update with <phi_new, B_q> = <phi, B_q> + s <B_q, B_q>.

    Returns:
      SubproblemState: The new state, with q as the last free index.
    """
    b_q = basis_values[q]
    phi = state.phi + s * b_q
    if backend is Backend.DUAL_INCREMENTAL:
        duals, scratch = expand(state.duals, q, b_q)
        adjusted = state.coeffs + s * scratch.w
        phi_dot_bq = float(state.phi @ b_q) + s * float(scratch.v[-1])
        coeffs = update_coeffs_expand(adjusted, scratch, phi_dot_bq)
        free = duals.indices
    else:
        duals = None
        free = state.free + (q,)
        coeffs = normal_equations_solve(free, phi, m, grid, basis_values)
    return SubproblemState(phi, free, duals, coeffs, state.iteration + 1)


def transfer_to_bound(state, q, s, basis_values, backend, m=None, grid=None):
    """
    Move the free variable q to its bound value s (case 2).

    The target function becomes phi - s B_q. With the DUAL_INCREMENTAL
    backend, the dual basis is contracted at q and the coefficients become
    e_i + w_i (e_q - s), with w from the contraction.

    Returns:
      SubproblemState: The new state; the remaining free indices keep their
      order.
    """
    phi = state.phi - s * basis_values[q]
    if backend is Backend.DUAL_INCREMENTAL:
        if len(state.duals) == 1:
            duals = empty_dual(state.duals.m, state.duals.grid)
            coeffs = np.zeros(0)
        else:
            pos = state.duals.position(q)
            duals, w = contract(state.duals, q)
            coeffs = update_coeffs_contract(state.coeffs, w, pos)
            coeffs -= s * w
        free = duals.indices
    else:
        duals = None
        free = tuple(i for i in state.free if i != q)
        coeffs = normal_equations_solve(free, phi, m, grid, basis_values)
    return SubproblemState(phi, free, duals, coeffs, state.iteration + 1)


def kkt_tolerance(phi):
    """
    Return the absolute tolerance of the gradient sign test for a target
    function: KKT_TOLERANCE * (1 + max |phi(t_k)|).
    """
    phi = np.asarray(phi, dtype=float)
    scale = float(np.abs(phi).max()) if phi.size else 0.0
    return KKT_TOLERANCE * (1.0 + scale)


def kkt_check(state, partition, basis_values, tol, exclude=()):
    """
    Test the gradient signs of the bound variables at the subproblem
    optimum.

    The gradient of E^2 with respect to a bound variable j is
    g_j = -2 <phi - psi, B_j>, where psi is the subproblem solution. A lower
    bound variable violates optimality if g_j < -tol, an upper bound
    variable if g_j > tol. Indices in exclude are not tested.

    Returns:
      KKTViolation: The violating variable with the largest |g_j| (ties go
      to the lowest index), or `None` if the optimality conditions hold.
    """
    lower_L = partition.lower_L
    bound = sorted((lower_L | partition.upper_U).difference(exclude))
    if not bound:
        return None
    residual = state.phi
    if state.free:
        if state.duals is not None:
            rows = state.duals.basis
        else:
            rows = basis_values[list(state.free)]
        residual = residual - state.coeffs @ rows
    grads = (-2.0 * (basis_values[bound] @ residual)).tolist()
    violation = None
    for index, g in zip(bound, grads):
        if index in lower_L:
            side, violated = 'lower', g < -tol
        else:
            side, violated = 'upper', g > tol
        if violated and (violation is None or
                         abs(g) > abs(violation.gradient)):
            violation = KKTViolation(index, side, g)
    return violation


def _squared_errors(phi1, iterates, inner_rows):
    residuals = phi1 - np.array(iterates) @ inner_rows
    return np.einsum('ij,ij->i', residuals, residuals).tolist()


def _audit(state, diagnostics, audit):
    if state.duals is None:
        return
    if not (audit or LOG.isEnabledFor(logging.DEBUG)):
        return
    drift = 0.0
    if state.free:
        drift = float(np.max(np.abs(
            state.coeffs - project(state.duals, state.phi))))
    defect = biorthogonality_defect(state.duals)
    if audit:
        diagnostics.coeff_drift.append(drift)
        diagnostics.dual_defect.append(defect)
    LOG.debug("Subproblem %s: coefficient drift %.3e, biorthogonality "
              "defect %.3e", state.iteration, drift, defect)


def _check_sizes(n, m, orders, grid):
    orders.validate(n, m)
    if len(grid) < m + 1:
        raise DomainError(
            f"Grid with {len(grid)} points is too small for degree {m} "
            f"(N must be at least m)")


def _active_set_loop(phi1, x, m, orders, bounds, grid, basis, backend,
                     audit, coordinate, duals=None):
    """
    Run the active-set loop for one coordinate. x holds the m+1 reduced
    coordinates with the continuity-fixed entries set; it is updated in
    place and returned.
    """
    inner = inner_indices(m, orders)
    # the inner indices are the contiguous range alpha+1 .. m-beta-1
    lo, hi = inner[0], inner[-1] + 1
    inner_rows = basis[lo:hi]
    diagnostics = ComponentDiagnostics(backend)
    partition = ActivePartition(m, orders)
    diagnostics.partition = partition
    lower, upper = bounds.lower, bounds.upper

    if lower == upper:
        x[lo:hi] = lower
        partition.pin_all('lower')
        diagnostics.error_history = _squared_errors(
            phi1, [x[lo:hi]], inner_rows)
        LOG.debug("Degenerate box [%s, %s]: all %d inner variables pinned",
                  lower, upper, len(inner))
        return x, diagnostics

    tol = kkt_tolerance(phi1)
    cap = ITERATION_CAP_FACTOR * (m + 1)
    iterates = []
    just_freed = None
    excluded = ()

    def fail(message, exc=None):
        err = SolverError(message, coordinate=coordinate,
                          iteration=diagnostics.iterations,
                          best_iterate=x.copy())
        if exc is not None:
            raise err from exc
        raise err

    try:
        state = first_subproblem(phi1, inner, m, grid, basis, backend, duals)
    except RankDeficiencyError as exc:
        fail(f"First subproblem is rank deficient: {exc}", exc)
    x[lo:hi] = np.minimum(np.maximum(state.coeffs, lower), upper)

    while True:
        diagnostics.iterations += 1
        if diagnostics.iterations > cap:
            fail(f"No optimum after {cap} subproblems")
        _audit(state, diagnostics, audit)

        free = list(state.free)
        crossings = []
        for index, zi in zip(free, state.coeffs.tolist()):
            if zi > upper:
                target = upper
            elif zi < lower:
                target = lower
            else:
                continue
            xi = float(x[index])
            crossings.append(((target - xi) / (zi - xi), index, target))

        if crossings:
            ratio, q, s = min(crossings)
            side = 'lower' if s == lower else 'upper'
            back = q == just_freed and ratio <= 0.0
            if not back:
                x_free = x[free]
                x[free] = np.minimum(np.maximum(
                    x_free + ratio * (state.coeffs - x_free), lower), upper)
                x[q] = s
            try:
                state = transfer_to_bound(state, q, s, basis, backend, m,
                                          grid)
            except RankDeficiencyError as exc:
                fail(f"Transfer of index {q} to bound failed: {exc}", exc)
            partition.to_bound(q, side)
            diagnostics.case2_count += 1
            iterates.append(x[lo:hi].copy())
            just_freed = None
            if back:
                # skipped by the next optimality test only
                excluded = (q,)
                LOG.debug("Subproblem %s: released index %d returned to its "
                          "%s bound at once", state.iteration, q, side)
            else:
                excluded = ()
                LOG.debug("Subproblem %s: index %d to %s bound (step %.3e)",
                          state.iteration, q, side, ratio)
        else:
            x[free] = state.coeffs
            iterates.append(x[lo:hi].copy())
            violation = kkt_check(state, partition, basis, tol, excluded)
            if violation is None:
                break
            q = violation.index
            s = float(x[q])
            try:
                state = transfer_to_free(state, q, s, basis, backend, m,
                                         grid)
            except RankDeficiencyError as exc:
                fail(f"Release of index {q} from bound failed: {exc}", exc)
            partition.to_free(q)
            diagnostics.case1_count += 1
            just_freed = q
            excluded = ()
            LOG.debug("Subproblem %s: index %d released from %s bound "
                      "(gradient %.3e)", state.iteration, q, violation.side,
                      violation.gradient)
        if audit:
            partition.check()

    partition.check()
    diagnostics.error_history = _squared_errors(phi1, iterates, inner_rows)
    LOG.debug("Solved %s coordinate in %d subproblems (case 1: %d, case 2: "
              "%d), |F|=%d |L|=%d |U|=%d, E^2=%.6e", coordinate or 'a',
              diagnostics.iterations, diagnostics.case1_count,
              diagnostics.case2_count, len(partition.free_F),
              len(partition.lower_L), len(partition.upper_U),
              diagnostics.error_history[-1])
    return x, diagnostics


def solve_component(p_coord, n, m, orders, bounds, grid,
                    backend=Backend.DUAL_INCREMENTAL, audit=False,
                    coordinate=None):
    """
    Solve the box constrained degree reduction of one coordinate.

    Parameters:

      p_coord (array-like): The n+1 original coordinates.

      n (int): The original degree.

      m (int): The reduced degree.

      orders (ContinuityOrders): The continuity orders.

      bounds (Bounds): The box for the inner coordinates.

      grid (ParamGrid): The grid, with at least m+1 points.

      backend (Backend): How subproblems are solved.

      audit (bool): Record the coefficient drift and the biorthogonality
        defect of every subproblem in the diagnostics, and check the active
        partition after every transfer.

      coordinate (string): 'x' or 'y', used in error messages.

    Returns:
      tuple(numpy.ndarray, ComponentDiagnostics): The m+1 reduced
      coordinates and the diagnostics. Coordinates at a bound are exactly
      equal to that bound.

    Raises:
      DomainError: Invalid degrees, orders or grid size.
      SolverError: The sub-basis is numerically rank deficient on the grid,
        or the iteration cap was reached.
    """
    _check_sizes(n, m, orders, grid)
    basis = bernstein_values(m, grid)
    left, right = fixed_endpoint_coords(p_coord, n, m, orders)
    fixed = fixed_indices(m, orders)
    result = np.zeros(m + 1)
    result[fixed] = np.concatenate([left, right])
    phi1 = initial_phi(p_coord, n, m, dict(zip(fixed, result[fixed])), grid,
                       basis)
    return _active_set_loop(phi1, result, m, orders, bounds, grid, basis,
                            backend, audit, coordinate)


def solve_components(points, n, m, orders, box, grid,
                     backend=Backend.DUAL_INCREMENTAL, audit=False):
    """
    Solve the box constrained degree reduction of both coordinates of a
    curve.

    The target functions and continuity-fixed control points of x and y are
    computed together. With the DUAL_INCREMENTAL backend, the dual basis of
    the first subproblem is built once and shared by both coordinates.

    Parameters:

      points (array-like): The (n+1) x 2 original control points.

      box (tuple(Bounds, Bounds)): The bounds for x and y.

      See :func:`solve_component` for the other parameters.

    Returns:
      tuple(numpy.ndarray, dict): The (m+1) x 2 reduced control points and
      the ComponentDiagnostics by coordinate ('x', 'y').

    Raises:
      DomainError: Invalid degrees, orders, grid size or point shape.
      SolverError: The loop failed for a coordinate.
    """
    points = np.asarray(points, dtype=float)
    if points.shape != (n + 1, 2):
        raise DomainError(
            f"Expected {n + 1} control points of degree {n}, got shape "
            f"{points.shape}")
    _check_sizes(n, m, orders, grid)
    basis = bernstein_values(m, grid)
    left, right = fixed_endpoint_coords(points, n, m, orders)
    fixed = fixed_indices(m, orders)
    result = np.zeros((m + 1, 2))
    result[fixed] = np.concatenate((left, right))
    phi1 = bernstein_values(n, grid).T @ points - \
        basis[fixed].T @ result[fixed]

    duals = None
    if backend is Backend.DUAL_INCREMENTAL and \
            any(b.lower != b.upper for b in box):
        try:
            duals = build_dual(inner_indices(m, orders), m, grid, basis)
        except RankDeficiencyError:
            # reported with the coordinate by the loop
            duals = None

    diagnostics = {}
    for axis, coordinate in enumerate(COORDINATES):
        result[:, axis], diagnostics[coordinate] = _active_set_loop(
            phi1[:, axis], result[:, axis].copy(), m, orders, box[axis],
            grid, basis, backend, audit, coordinate, duals)
    return result, diagnostics
