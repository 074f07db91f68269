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
Slow, direct solvers used to verify the dual basis machinery and as the
normal equations arm of the benchmark.
"""


import logging
import itertools
from collections import namedtuple

import numpy as np
from scipy.linalg import cho_factor, cho_solve, LinAlgError

from ._constants import SOLVER_LOGGER_NAME, KKT_TOLERANCE, \
    MAX_ORACLE_VARIABLES
from ._exceptions import DomainError, RankDeficiencyError
from ._bernstein import bernstein_values
from ._continuity import fixed_endpoint_coords, fixed_indices, inner_indices

__all__ = ['GramSystem', 'gram_system', 'normal_equations_solve',
           'brute_force_box_solve']

LOG = logging.getLogger(SOLVER_LOGGER_NAME)

#: The normal equations of a least squares fit over a Bernstein sub-basis:
#: matrix[i, j] = <B_i, B_j> and rhs[i] = <phi, B_i> for the free indices.
GramSystem = namedtuple('GramSystem', ['matrix', 'rhs'])

# Assignment states of one variable in the exhaustive enumeration
_FREE = 'free'
_LOWER = 'lower'
_UPPER = 'upper'


def gram_system(free, phi, m, grid, basis_values=None):
    """
    Return the :class:`GramSystem` of the free indices for a sampled target
    function phi.
    """
    if basis_values is None:
        basis_values = bernstein_values(m, grid)
    rows = basis_values[list(free)]
    phi = np.asarray(phi, dtype=float)
    return GramSystem(rows @ rows.T, rows @ phi)


def normal_equations_solve(free, phi, m, grid, basis_values=None):
    """
    Return the least squares coefficients of phi over {B_j^m : j in free}
    by a Cholesky solve of the normal equations.

    Parameters:

      free (list of int): The free Bernstein indices, in coefficient order.

      phi (array-like): The sampled target function.

      m (int): The Bernstein degree.

      grid (ParamGrid): The grid.

      basis_values (numpy.ndarray): The sampled Bernstein basis of degree m,
        if already available.

    Returns:
      :class:`numpy.ndarray`: The coefficients, empty if free is empty.

    Raises:
      DomainError: More free indices than grid points.
      RankDeficiencyError: The Gram matrix is not positive definite.
    """
    free = list(free)
    if not free:
        return np.zeros(0)
    if len(free) > len(grid):
        raise DomainError(
            f"{len(free)} free indices exceed the {len(grid)} grid points")
    system = gram_system(free, phi, m, grid, basis_values)
    try:
        factor = cho_factor(system.matrix, lower=True, check_finite=False)
    except LinAlgError as exc:
        raise RankDeficiencyError(
            f"Gram matrix of indices {free} is not positive definite: {exc}")
    return cho_solve(factor, system.rhs, check_finite=False)


def brute_force_box_solve(p_coord, n, m, orders, bounds, grid):
    """
    Solve the box constrained reduction of one coordinate by enumerating
    every assignment of the inner variables to free, at lower bound or at
    upper bound.

    For each assignment, the free variables are solved from the reduced
    normal equations. The assignment whose free values lie strictly inside
    the box and whose bound variables have correctly signed gradients is
    the optimum of the convex problem; among several such (degenerate)
    assignments, the one with the smallest error wins. If rounding rejects
    all of them, the feasible candidate with the smallest error is returned.

    Parameters:

      p_coord (array-like): The n+1 original coordinates.

      n (int): The original degree.

      m (int): The reduced degree.

      orders (ContinuityOrders): The continuity orders.

      bounds (Bounds): The box for the inner variables.

      grid (ParamGrid): The grid.

    Returns:
      :class:`numpy.ndarray`: The m+1 reduced coordinates.

    Raises:
      DomainError: More than MAX_ORACLE_VARIABLES inner variables.
    """
    inner = inner_indices(m, orders)
    k = len(inner)
    if k > MAX_ORACLE_VARIABLES:
        raise DomainError(
            f"Exhaustive solve refused for {k} inner variables (at most "
            f"{MAX_ORACLE_VARIABLES} supported)")

    left, right = fixed_endpoint_coords(p_coord, n, m, orders)
    fixed = fixed_indices(m, orders)
    basis = bernstein_values(m, grid)
    result = np.zeros(m + 1)
    result[fixed] = np.concatenate([left, right])
    phi = bernstein_values(n, grid).T @ np.asarray(p_coord, dtype=float) - \
        result[fixed] @ basis[fixed]

    lower, upper = bounds.lower, bounds.upper
    if lower == upper:
        result[inner] = lower
        return result

    tol = KKT_TOLERANCE * (1.0 + float(np.max(np.abs(phi))))
    best_optimal = None
    best_feasible = None
    for assignment in itertools.product((_FREE, _LOWER, _UPPER), repeat=k):
        values = np.zeros(k)
        free_pos = [i for i, a in enumerate(assignment) if a == _FREE]
        bound_pos = [i for i, a in enumerate(assignment) if a != _FREE]
        for i in bound_pos:
            values[i] = lower if assignment[i] == _LOWER else upper
        if not np.all(np.isfinite(values[bound_pos])):
            continue
        bound_idx = [inner[i] for i in bound_pos]
        free_idx = [inner[i] for i in free_pos]
        target = phi - values[bound_pos] @ basis[bound_idx]
        try:
            values[free_pos] = normal_equations_solve(
                free_idx, target, m, grid, basis)
        except RankDeficiencyError:
            continue
        free_values = values[free_pos]
        if not np.all((free_values >= lower) & (free_values <= upper)):
            continue
        residual = target - free_values @ basis[free_idx]
        error2 = float(residual @ residual)
        if best_feasible is None or error2 < best_feasible[0]:
            best_feasible = (error2, values)

        strict = np.all((free_values > lower) & (free_values < upper))
        grads = -2.0 * (basis[bound_idx] @ residual)
        kkt = all(g >= -tol if assignment[i] == _LOWER else g <= tol
                  for i, g in zip(bound_pos, grads))
        if strict and kkt and \
                (best_optimal is None or error2 < best_optimal[0]):
            best_optimal = (error2, values)

    if best_optimal is None:
        LOG.debug("Exhaustive solve found no strict KKT point among %s "
                  "assignments; using the best feasible one", 3 ** k)
        best_optimal = best_feasible
    result[inner] = best_optimal[1]
    return result
