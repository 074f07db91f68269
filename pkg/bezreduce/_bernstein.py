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
Bernstein and Bezier primitives: parameter grids, sampled Bernstein bases,
the discrete inner product, de Casteljau evaluation and finite differences.

A *sampled function* is a one-dimensional :class:`numpy.ndarray` of float
holding the values of a function of t at the points of a
:class:`ParamGrid`. The discrete inner product of two sampled functions is
the sum of their pointwise products.
"""


import functools

import numpy as np
from scipy.special import comb

from ._constants import MAX_BINOMIAL_DEGREE
from ._exceptions import DomainError

__all__ = ['ParamGrid', 'BezierCurve', 'binomial', 'falling_factorial',
           'bernstein_matrix', 'bernstein_values', 'as_sampled',
           'inner_product', 'eval_curve', 'eval_curve_many', 'curve_values',
           'forward_differences', 'uniform_grid', 'degree_elevate',
           'curve_derivative']


class ParamGrid:
    """
    A strictly increasing sequence of parameters t_0 < ... < t_N in [0, 1]
    that defines the discrete inner product.

    The grid is immutable; its points are a read-only numpy array. All
    validation happens here, so code that receives a ParamGrid never checks
    it again.
    """

    def __init__(self, points):
        """
        Parameters:

          points (iterable of float): The parameters t_k, at least two.

        Raises:
          DomainError: The points are not strictly increasing, not finite,
            outside of [0, 1], or fewer than two.
        """
        points = np.array(points, dtype=float)
        if points.ndim != 1 or points.size < 2:
            raise DomainError(
                "A parameter grid needs at least two points, got shape {}".
                format(points.shape))
        if not np.all(np.isfinite(points)):
            raise DomainError("Parameter grid contains non-finite values")
        if points[0] < 0.0 or points[-1] > 1.0:
            raise DomainError(
                "Parameter grid points must be in [0, 1], got range "
                "[{}, {}]".format(points[0], points[-1]))
        if np.any(np.diff(points) <= 0.0):
            raise DomainError(
                "Parameter grid points must be strictly increasing")
        points.setflags(write=False)
        self._points = points

    def __repr__(self):
        return "ParamGrid(N={}, points={!r})".format(
            self.N, self._points.tolist())

    def __len__(self):
        return self._points.size

    def __eq__(self, other):
        if not isinstance(other, ParamGrid):
            return NotImplemented
        return np.array_equal(self._points, other.points)

    def __hash__(self):
        return hash(self._points.tobytes())

    @property
    def points(self):
        """
        :class:`numpy.ndarray`: The read-only parameters t_0 .. t_N.
        """
        return self._points

    @property
    def N(self):
        # pylint: disable=invalid-name
        """
        int: The index of the last grid point (the grid has N+1 points).
        """
        return self._points.size - 1

    def mirrored(self):
        """
        Return the grid {1 - t_N, ..., 1 - t_0}.
        """
        return ParamGrid(1.0 - self._points[::-1])


class BezierCurve:
    """
    A planar Bezier curve of degree n, given by n+1 control points.

    The control points are stored as a read-only (n+1) x 2 numpy array.
    """

    def __init__(self, points):
        """
        Parameters:

          points (iterable of pairs of float): The control points p_0 .. p_n.

        Raises:
          DomainError: Not a non-empty list of planar points with finite
            coordinates.
        """
        points = np.array(points, dtype=float)
        if points.ndim != 2 or points.shape[0] < 1 or points.shape[1] != 2:
            raise DomainError(
                "Control points must be a non-empty list of (x, y) pairs, "
                "got shape {}".format(points.shape))
        if not np.all(np.isfinite(points)):
            raise DomainError("Control points contain non-finite coordinates")
        points.setflags(write=False)
        self._points = points

    def __repr__(self):
        return "BezierCurve(degree={}, points={!r})".format(
            self.degree, self._points.tolist())

    @property
    def degree(self):
        """
        int: The degree n of the curve.
        """
        return self._points.shape[0] - 1

    @property
    def points(self):
        """
        :class:`numpy.ndarray`: The read-only (n+1) x 2 control points.
        """
        return self._points

    @property
    def x(self):
        """
        :class:`numpy.ndarray`: The x coordinates of the control points.
        """
        return self._points[:, 0]

    @property
    def y(self):
        """
        :class:`numpy.ndarray`: The y coordinates of the control points.
        """
        return self._points[:, 1]


def binomial(n, i):
    """
    Return the exact binomial coefficient binom(n, i) as an int.

    Raises:
      DomainError: Unless 0 <= i <= n <= 64.
    """
    if not 0 <= i <= n <= MAX_BINOMIAL_DEGREE:
        raise DomainError(
            "Binomial coefficient requires 0 <= i <= n <= {}, got n={}, "
            "i={}".format(MAX_BINOMIAL_DEGREE, n, i))
    return int(comb(n, i, exact=True))


def falling_factorial(n, k):
    """
    Return n!/(n-k)! as an int, computed as a running product.

    For k > n the result is 0.
    """
    result = 1
    for j in range(k):
        result *= n - j
    return result


def bernstein_matrix(n, ts):
    """
    Return all Bernstein polynomials B_0^n .. B_n^n at the parameters ts,
    as an (n+1) x len(ts) array.

    The values are computed with the triangular recurrence
    B_i^j = (1-t) B_i^{j-1} + t B_{i-1}^{j-1}, which never forms large
    binomials or powers.
    """
    if n < 0:
        raise DomainError(f"Bernstein degree must be >= 0, got {n}")
    ts = np.asarray(ts, dtype=float)
    s = 1.0 - ts
    values = np.zeros((n + 1, ts.size))
    values[0] = 1.0
    for j in range(1, n + 1):
        values[1:j + 1] = s * values[1:j + 1] + ts * values[0:j]
        values[0] *= s
    return values


@functools.lru_cache(maxsize=256)
def bernstein_values(n, grid):
    """
    Return the Bernstein basis of degree n sampled on a grid.

    Results are cached per degree and grid.

    Parameters:

      n (int): The degree, n >= 0.

      grid (ParamGrid): The grid.

    Returns:
      :class:`numpy.ndarray`: Read-only (n+1) x (N+1) array; row i is the
      sampled function B_i^n.
    """
    values = bernstein_matrix(n, grid.points)
    values.setflags(write=False)
    return values


def as_sampled(values, grid=None):
    """
    Convert values into a sampled function (a 1-D float array), checking
    that all entries are finite and, if a grid is given, that the length
    matches the grid.
    """
    values = np.asarray(values, dtype=float)
    if values.ndim != 1:
        raise DomainError(
            f"A sampled function must be one-dimensional, got {values.shape}")
    if grid is not None and values.size != len(grid):
        raise DomainError(
            "Sampled function has {} values, but the grid has {} points".
            format(values.size, len(grid)))
    if not np.all(np.isfinite(values)):
        raise DomainError("Sampled function contains non-finite values")
    return values


def inner_product(f, g):
    """
    Return the discrete inner product sum_k f(t_k) g(t_k) of two sampled
    functions.

    Raises:
      DomainError: The functions have different lengths.
    """
    f = np.asarray(f, dtype=float)
    g = np.asarray(g, dtype=float)
    if f.shape != g.shape:
        raise DomainError(
            "Inner product of sampled functions with different lengths: "
            "{} and {}".format(f.shape, g.shape))
    return float(np.dot(f, g))


def _de_casteljau(points, ts):
    """
    Evaluate control points at all parameters ts; returns len(ts) x 2.
    """
    work = np.repeat(points[np.newaxis, :, :], ts.size, axis=0)
    t = ts[:, np.newaxis, np.newaxis]
    for _ in range(points.shape[0] - 1):
        work = (1.0 - t) * work[:, :-1] + t * work[:, 1:]
    return work[:, 0]


def _check_unit_interval(ts):
    if np.any(~np.isfinite(ts)) or np.any(ts < 0.0) or np.any(ts > 1.0):
        raise DomainError("Curve parameters must be in [0, 1]")


def eval_curve(curve, t):
    """
    Evaluate a Bezier curve at one parameter with de Casteljau's algorithm.

    Returns:
      :class:`numpy.ndarray`: The point (x, y).

    Raises:
      DomainError: t is outside of [0, 1].
    """
    ts = np.array([t], dtype=float)
    _check_unit_interval(ts)
    return _de_casteljau(curve.points, ts)[0]


def eval_curve_many(curve, ts):
    """
    Evaluate a Bezier curve at several parameters with de Casteljau's
    algorithm, returning a len(ts) x 2 array.
    """
    ts = np.asarray(ts, dtype=float).ravel()
    _check_unit_interval(ts)
    return _de_casteljau(curve.points, ts)


def curve_values(curve, grid):
    """
    Return the curve sampled on a grid as an (N+1) x 2 array, computed as
    sum_i p_i B_i^n(t_k).
    """
    return bernstein_values(curve.degree, grid).T @ curve.points


def forward_differences(points, order):
    """
    Return the forward difference of the given order of the leading entries.

    Delta^0 x_0 = x_0 and Delta^j x_0 = Delta^{j-1} x_1 - Delta^{j-1} x_0.
    The entries may be scalars or planar points (rows).

    Raises:
      DomainError: order is negative or not less than the number of entries.
    """
    values = np.asarray(points, dtype=float)
    if not 0 <= order < values.shape[0]:
        raise DomainError(
            "Forward difference of order {} needs more than {} entries".
            format(order, values.shape[0]))
    result = np.diff(values[:order + 1], n=order, axis=0)[0]
    if values.ndim == 1:
        return float(result)
    return result


def uniform_grid(N):
    # pylint: disable=invalid-name
    """
    Return the grid t_k = k/N, k = 0 .. N.

    Raises:
      DomainError: N < 1.
    """
    if int(N) != N or N < 1:
        raise DomainError(f"Uniform grid requires N >= 1, got {N}")
    N = int(N)
    return ParamGrid(np.arange(N + 1) / N)


def degree_elevate(curve, times=1):
    """
    Return the same curve represented with degree n + times.

    Each elevation step uses
    r_i = i/(n+1) p_{i-1} + (1 - i/(n+1)) p_i  (i = 0 .. n+1).
    """
    points = np.array(curve.points)
    for _ in range(times):
        n = points.shape[0] - 1
        ratio = (np.arange(n + 2) / (n + 1))[:, np.newaxis]
        padded_prev = np.vstack([points[:1] * 0.0, points])
        padded_this = np.vstack([points, points[:1] * 0.0])
        points = ratio * padded_prev + (1.0 - ratio) * padded_this
    return BezierCurve(points)


def curve_derivative(curve, order, at):
    """
    Return the derivative of the given order at an endpoint.

    P^(i)(0) = n!/(n-i)! Delta^i p_0 and P^(i)(1) = n!/(n-i)! nabla^i p_n,
    with nabla^i p_n the backward difference, which equals
    Delta^i p_{n-i}.

    Parameters:

      curve (BezierCurve): The curve.

      order (int): The derivative order, >= 0.

      at (int): 0 or 1, the endpoint.

    Returns:
      :class:`numpy.ndarray`: The derivative vector (x, y).
    """
    if at not in (0, 1):
        raise DomainError(f"Endpoint must be 0 or 1, got {at!r}")
    if order < 0:
        raise DomainError(f"Derivative order must be >= 0, got {order}")
    n = curve.degree
    if order > n:
        return np.zeros(2)
    if at == 0:
        diff = forward_differences(curve.points, order)
    else:
        diff = forward_differences(curve.points[n - order:], order)
    return float(falling_factorial(n, order)) * diff
