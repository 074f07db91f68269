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
Degree reduction of one Bezier curve with continuity and box constraints.

The problem decouples into the x and y coordinates, which are solved
independently by :func:`~bezreduce.solve_components`. The traditional
reduction (continuity constraints only) is a single projection onto the
inner sub-basis.
"""


import logging

import numpy as np

from ._constants import REDUCER_LOGGER_NAME, EINF_SAMPLES
from ._exceptions import DomainError, Error
from ._bernstein import BezierCurve, uniform_grid, curve_values, \
    eval_curve_many, bernstein_values
from ._continuity import ContinuityOrders, fixed_endpoint_coords, \
    fixed_indices, inner_indices, verify_continuity
from ._bvls import Backend, Bounds, solve_components, initial_phi, \
    first_subproblem

__all__ = ['ReductionRequest', 'ReductionReport', 'SegmentResult',
           'default_box', 'error_E', 'error_Einf', 'reduce_boxed',
           'reduce_traditional', 'reduce_segment']

LOG = logging.getLogger(REDUCER_LOGGER_NAME)


class ReductionRequest:
    """
    A degree reduction problem for one curve.

    Parameters:

      curve (BezierCurve): The curve P of degree n.

      m (int): The reduced degree, less than n.

      orders (ContinuityOrders): The continuity orders.

      box (tuple(Bounds, Bounds)): The box for the x and y coordinates of the
        inner control points, or `None` for the box spanned by the control
        points of the curve.

      N (int): The grid t_k = k/N has N+1 points; N >= m. Defaults to
        2n.

      allow_same_degree (bool): Admit m = n. Used for testing.

    Raises:
      DomainError: The parameters violate m < n, alpha + beta < m - 1 or
        N >= m.
    """

    def __init__(self, curve, m, orders, box=None, N=None,
                 allow_same_degree=False):
        # pylint: disable=invalid-name
        if not isinstance(curve, BezierCurve):
            curve = BezierCurve(curve)
        if not isinstance(orders, ContinuityOrders):
            orders = ContinuityOrders(*orders)
        n = curve.degree
        m = int(m)
        if m < 0 or m > n or (m == n and not allow_same_degree):
            raise DomainError(
                f"Reduced degree m={m} must be less than the original "
                f"degree n={n}")
        orders.validate(n, m)
        if N is None:
            N = 2 * n
        N = int(N)
        if N < m:
            raise DomainError(
                f"Grid parameter N={N} must be at least the reduced degree "
                f"m={m}")
        if box is not None:
            box = tuple(b if isinstance(b, Bounds) else Bounds(*b)
                        for b in box)
            if len(box) != 2:
                raise DomainError(
                    f"A box needs bounds for x and y, got {len(box)}")
        self.curve = curve
        self.m = m
        self.orders = orders
        self.box = box
        self.N = N
        self.allow_same_degree = allow_same_degree
        self.grid = uniform_grid(N)

    @property
    def n(self):
        """
        int: The original degree.
        """
        return self.curve.degree

    def __repr__(self):
        return ("ReductionRequest(n={}, m={}, alpha={}, beta={}, N={}, "
                "box={!r})".format(self.n, self.m, self.orders.alpha,
                                   self.orders.beta, self.N, self.box))


class ReductionReport:
    """
    The outcome of one reduction.

    Attributes:

      result (BezierCurve): The reduced curve R of degree m.

      E (float): The least squares error on the grid.

      E_inf (float): The maximum error on the uniform sample set of
        EINF_SAMPLES + 1 points.

      diagnostics (dict): ComponentDiagnostics by coordinate ('x', 'y');
        empty for the traditional reduction.

      continuity_defect (float): Largest deviation of the endpoint
        derivatives of R from those of P.

      box (tuple(Bounds, Bounds)): The box that was applied, or `None` for
        the traditional reduction.
    """

    def __init__(self, result, E, E_inf, diagnostics=None,
                 continuity_defect=0.0, box=None):
        # pylint: disable=invalid-name
        self.result = result
        self.E = E
        self.E_inf = E_inf
        self.diagnostics = diagnostics or {}
        self.continuity_defect = continuity_defect
        self.box = box

    def __repr__(self):
        return ("ReductionReport(m={}, E={:.3e}, E_inf={:.3e}, "
                "continuity_defect={:.3e})".format(
                    self.result.degree, self.E, self.E_inf,
                    self.continuity_defect))


class SegmentResult:
    """
    Both reductions of one segment. An arm that failed has its report set to
    `None` and its exception recorded.
    """

    def __init__(self, name, request, traditional=None, boxed=None,
                 traditional_error=None, boxed_error=None):
        self.name = name
        self.request = request
        self.traditional = traditional
        self.boxed = boxed
        self.traditional_error = traditional_error
        self.boxed_error = boxed_error

    @property
    def failed(self):
        """
        bool: Whether any arm that was run failed.
        """
        return self.traditional_error is not None or \
            self.boxed_error is not None

    def __repr__(self):
        return "SegmentResult(name={!r}, failed={})".format(
            self.name, self.failed)


def default_box(curve):
    """
    Return the box spanned by the control points of a curve:
    (Bounds(min x, max x), Bounds(min y, max y)).
    """
    points = curve.points
    return (Bounds(points[:, 0].min(), points[:, 0].max()),
            Bounds(points[:, 1].min(), points[:, 1].max()))


def error_E(P, R, grid):
    # pylint: disable=invalid-name
    """
    Return the least squares error sqrt(sum_k |P(t_k) - R(t_k)|^2).
    """
    diff = curve_values(P, grid) - curve_values(R, grid)
    return float(np.sqrt(np.sum(diff * diff)))


def error_Einf(P, R, M=EINF_SAMPLES):
    # pylint: disable=invalid-name
    """
    Return the maximum error max |P(t) - R(t)| over t = 0, 1/M, ..., 1,
    with both curves evaluated by the de Casteljau algorithm.
    """
    ts = np.arange(M + 1) / M
    diff = eval_curve_many(P, ts) - eval_curve_many(R, ts)
    return float(np.max(np.hypot(diff[:, 0], diff[:, 1])))


def _report(req, points, diagnostics, box):
    result = BezierCurve(points)
    report = ReductionReport(
        result, error_E(req.curve, result, req.grid),
        error_Einf(req.curve, result), diagnostics,
        verify_continuity(req.curve, result, req.orders), box)
    LOG.debug("Reduced degree %d to %d: %r", req.n, req.m, report)
    return report


def reduce_boxed(req, backend=Backend.DUAL_INCREMENTAL, audit=False):
    """
    Reduce a curve under continuity and box constraints.

    Parameters:

      req (ReductionRequest): The problem. Without a box, the box spanned by
        the control points of the curve is used.

      backend (Backend): How subproblems are solved.

      audit (bool): Record per-subproblem audit values in the diagnostics.

    Returns:
      ReductionReport: The reduced curve and its errors.

    Raises:
      SolverError: The active-set loop failed for a coordinate.
    """
    box = req.box if req.box is not None else default_box(req.curve)
    points, diagnostics = solve_components(
        req.curve.points, req.n, req.m, req.orders, box, req.grid,
        backend=backend, audit=audit)
    return _report(req, points, diagnostics, box)


def reduce_traditional(req, backend=Backend.DUAL_INCREMENTAL):
    """
    Reduce a curve under continuity constraints only, by a single projection
    of both coordinates onto the inner sub-basis. A box in the request is
    ignored.

    Raises:
      RankDeficiencyError: The inner sub-basis is numerically dependent on
        the grid.
    """
    basis = bernstein_values(req.m, req.grid)
    fixed = fixed_indices(req.m, req.orders)
    inner = inner_indices(req.m, req.orders)
    points = np.empty((req.m + 1, 2))
    left, right = fixed_endpoint_coords(req.curve.points, req.n, req.m,
                                        req.orders)
    points[fixed] = np.concatenate((left, right))
    phi = initial_phi(req.curve.points, req.n, req.m,
                      dict(zip(fixed, points[fixed])), req.grid, basis)
    state = first_subproblem(phi, inner, req.m, req.grid, basis, backend)
    points[list(state.free)] = state.coeffs
    return _report(req, points, {}, None)


def reduce_segment(req, backend=Backend.DUAL_INCREMENTAL,
                   traditional_only=False, audit=False, name=None):
    """
    Run the traditional and (unless traditional_only) the box constrained
    reduction of one segment. Library errors of an arm are recorded in the
    result instead of being raised.

    Returns:
      SegmentResult: The reports of both arms.
    """
    segment = SegmentResult(name, req)
    try:
        segment.traditional = reduce_traditional(req, backend)
    except Error as exc:
        LOG.warning("Traditional reduction of segment %s failed: %s",
                    name, exc)
        segment.traditional_error = exc
    if not traditional_only:
        try:
            segment.boxed = reduce_boxed(req, backend, audit)
        except Error as exc:
            LOG.warning("Box constrained reduction of segment %s failed: %s",
                        name, exc)
            segment.boxed_error = exc
    return segment
