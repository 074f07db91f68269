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
Endpoint control points forced by C^(alpha,beta) continuity.

Matching the derivatives of orders 0..alpha at t=0 of a degree n curve P and
a degree m curve R gives

    R^(i)(0) = m!/(m-i)! * D^i r_0 = n!/(n-i)! * D^i p_0 = P^(i)(0),

where D^i is the forward difference of order i. The first alpha+1 control
points of R then follow from r_i = sum_j binom(i, j) D^j r_0. The control
points at t=1 are obtained the same way on the reversed control polygons.
"""


import functools
from fractions import Fraction

import numpy as np

from ._exceptions import DomainError
from ._bernstein import binomial, falling_factorial, curve_derivative

__all__ = ['ContinuityOrders', 'fixed_endpoint_coords', 'fixed_indices',
           'inner_indices', 'verify_continuity']


class ContinuityOrders:
    """
    The continuity orders at both ends of a reduced curve.

    An order of -1 means that the end is not constrained.
    """

    def __init__(self, alpha, beta):
        alpha = int(alpha)
        beta = int(beta)
        if alpha < -1 or beta < -1:
            raise DomainError(
                f"Continuity orders must be at least -1, got alpha={alpha}, "
                f"beta={beta}")
        self._alpha = alpha
        self._beta = beta

    @property
    def alpha(self):
        """
        int: The continuity order at t=0.
        """
        return self._alpha

    @property
    def beta(self):
        """
        int: The continuity order at t=1.
        """
        return self._beta

    def __repr__(self):
        return f"ContinuityOrders(alpha={self._alpha}, beta={self._beta})"

    def __eq__(self, other):
        if not isinstance(other, ContinuityOrders):
            return NotImplemented
        return (self._alpha, self._beta) == (other.alpha, other.beta)

    def __hash__(self):
        return hash((self._alpha, self._beta))

    def validate(self, n, m):
        """
        Check the orders against the degrees of a reduction from degree n to
        degree m.

        Raises:
          DomainError: alpha + beta >= m - 1, or an order is not below n.
        """
        if self._alpha + self._beta >= m - 1:
            raise DomainError(
                f"Continuity orders alpha={self._alpha}, beta={self._beta} "
                f"leave no inner control points for degree m={m} "
                f"(alpha + beta must be less than m - 1)")
        if self._alpha >= n or self._beta >= n:
            raise DomainError(
                f"Continuity orders alpha={self._alpha}, beta={self._beta} "
                f"must be less than the original degree n={n}")


def fixed_indices(m, orders):
    """
    Return the sorted Bernstein indices of degree m that are fixed by the
    continuity orders: {0..alpha} and {m-beta..m}.
    """
    return list(range(orders.alpha + 1)) + \
        list(range(m - orders.beta, m + 1))


def inner_indices(m, orders):
    """
    Return the Bernstein indices alpha+1 .. m-beta-1 of degree m that are not
    fixed by the continuity orders.
    """
    return list(range(orders.alpha + 1, m - orders.beta))


@functools.lru_cache(maxsize=None)
def _endpoint_weights(n, m, order):
    """
    Return the (order+1) x (order+1) matrix W with r_i = sum_l W[i, l] p_l
    for the control points fixed at t=0. The entries are exact rationals
    rounded once to floats.
    """
    weights = np.zeros((order + 1, order + 1))
    for i in range(order + 1):
        for l in range(i + 1):
            # r_i = sum_j binom(i, j) n!/(n-j)! (m-j)!/m! D^j p_0
            exact = sum(
                binomial(i, j) *
                Fraction(falling_factorial(n, j), falling_factorial(m, j)) *
                (-1) ** (j - l) * binomial(j, l)
                for j in range(l, i + 1))
            weights[i, l] = float(exact)
    weights.setflags(write=False)
    return weights


def _left_coords(p, n, m, order):
    if order < 0:
        return np.zeros((0,) + p.shape[1:])
    return _endpoint_weights(n, m, order) @ p[:order + 1]


def fixed_endpoint_coords(p, n, m, orders):
    """
    Return the control point coordinates of the reduced curve that are fixed
    by continuity at the endpoints, for one coordinate or for all
    coordinates at once.

    Parameters:

      p (array-like): The n+1 coordinates of the original control points,
        or an (n+1) x d array of control points.

      n (int): The original degree.

      m (int): The reduced degree.

      orders (ContinuityOrders): The continuity orders.

    Returns:
      tuple(numpy.ndarray, numpy.ndarray): r_0..r_alpha and r_(m-beta)..r_m,
      with the trailing shape of p. An order of -1 gives an empty array.

    Raises:
      DomainError: Invalid orders for the degrees, or len(p) != n+1.
    """
    p = np.asarray(p, dtype=float)
    if p.ndim not in (1, 2) or p.shape[0] != n + 1:
        raise DomainError(
            f"Expected {n + 1} coordinates for degree {n}, got shape "
            f"{p.shape}")
    orders.validate(n, m)
    left = _left_coords(p, n, m, orders.alpha)
    right = _left_coords(p[::-1], n, m, orders.beta)[::-1]
    return left, right


def verify_continuity(P, R, orders):
    """
    Return the largest distance between corresponding endpoint derivatives
    of two curves, over orders 0..alpha at t=0 and 0..beta at t=1.

    Derivatives are computed exactly from the control points, so the result
    is 0 for two curves that agree to the required orders up to rounding.
    """
    defect = 0.0
    for at, order in ((0.0, orders.alpha), (1.0, orders.beta)):
        for i in range(order + 1):
            diff = curve_derivative(P, i, at) - curve_derivative(R, i, at)
            defect = max(defect, float(np.linalg.norm(diff)))
    return defect
