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
Dual bases for subsets of the Bernstein basis with respect to the discrete
inner product <f, g>_T = sum_k f(t_k) g(t_k).

A :class:`DualBasis` for the index set F holds one dual function d_i per
index i in F, with <B_j^m, d_i>_T = delta_ij for all i, j in F and each d_i
in the span of {B_j^m : j in F}. Dual functions are stored sampled on the
grid, so every inner product is a dot product of length N+1, and expansion
(adding one basis function) and contraction (removing one) cost O(|F| N).

The added or removed element may be any index; it plays the role of the
distinguished "last" element of the update formulas, because duality does
not depend on the order of F.

Least squares coefficients with respect to the spanned subspace are inner
products with the dual functions (:func:`project`), and can be carried
through expansions and contractions without re-projecting
(:func:`update_coeffs_expand`, :func:`update_coeffs_contract`).
"""


import logging
from collections import namedtuple

import numpy as np

from ._constants import DUAL_LOGGER_NAME, RANK_TOLERANCE
from ._exceptions import DomainError, RankDeficiencyError, ConsistencyError
from ._bernstein import bernstein_values

__all__ = ['DualBasis', 'ExpansionScratch', 'empty_dual', 'dual_singleton',
           'expand', 'contract', 'iter_dual_bases', 'build_dual',
           'restrict_dual', 'project', 'update_coeffs_expand',
           'update_coeffs_contract', 'biorthogonality_defect', 'dual_gram']

LOG = logging.getLogger(DUAL_LOGGER_NAME)

#: Scratch values of one expansion, needed to update least squares
#: coefficients afterwards:
#:
#: * w: <d_i^old, b_new> for the old indices, in old order.
#: * v: <b_new, b_j> for the old indices, followed by <b_new, b_new>.
#: * c: coefficients of the new dual function in terms of the old dual
#:   functions, followed by the coefficient of b_new.
ExpansionScratch = namedtuple('ExpansionScratch', ['w', 'v', 'c'])

_TINY = np.finfo(float).tiny


class DualBasis:
    """
    The dual basis of {B_j^m : j in F} with respect to the discrete inner
    product on a grid.

    A DualBasis is a value: expansion and contraction return new objects,
    and the arrays it exposes are read-only. The order of
    :attr:`indices` defines the row order of :attr:`duals` and
    :attr:`basis`, and the order of coefficient vectors.
    """

    def __init__(self, indices, duals, basis, m=None, grid=None):
        """
        Parameters:

          indices (iterable of int): The distinct Bernstein indices F.

          duals (array-like): |F| x (N+1) sampled dual functions, row i
            belonging to indices[i].

          basis (array-like): |F| x (N+1) sampled basis functions, row i
            being B_{indices[i]}^m.

          m (int): The ambient Bernstein degree, or `None` if the basis
            functions are not Bernstein polynomials.

          grid (ParamGrid): The grid the functions are sampled on, or `None`.

        Raises:
          DomainError: Inconsistent sizes, duplicate indices, or indices out
            of range 0..m.
        """
        indices = tuple(int(i) for i in indices)
        if len(set(indices)) != len(indices):
            raise DomainError(f"Duplicate indices in dual basis: {indices}")
        if m is not None and any(not 0 <= i <= m for i in indices):
            raise DomainError(
                f"Dual basis indices {indices} not in range 0..{m}")
        duals = np.array(duals, dtype=float, ndmin=2)
        basis = np.array(basis, dtype=float, ndmin=2)
        if indices:
            if duals.shape[0] != len(indices) or basis.shape != duals.shape:
                raise DomainError(
                    "Dual basis with {} indices has duals of shape {} and "
                    "basis of shape {}".format(len(indices), duals.shape,
                                               basis.shape))
        self._init(indices, duals, basis, m, grid)

    def _init(self, indices, duals, basis, m, grid):
        duals.setflags(write=False)
        basis.setflags(write=False)
        self._indices = indices
        self._duals = duals
        self._basis = basis
        self._m = m
        self._grid = grid

    @classmethod
    def _make(cls, indices, duals, basis, m, grid):
        """
        Create a DualBasis from arrays that are already consistent.
        """
        obj = cls.__new__(cls)
        obj._init(indices, duals, basis, m, grid)
        return obj

    def __repr__(self):
        return "DualBasis(m={}, indices={!r}, N={})".format(
            self._m, self._indices, self._duals.shape[1] - 1)

    def __len__(self):
        return len(self._indices)

    @property
    def indices(self):
        """
        tuple of int: The index set F, in row order.
        """
        return self._indices

    @property
    def duals(self):
        """
        :class:`numpy.ndarray`: |F| x (N+1) read-only array of the sampled
        dual functions.
        """
        return self._duals

    @property
    def basis(self):
        """
        :class:`numpy.ndarray`: |F| x (N+1) read-only array of the sampled
        basis functions the duals belong to.
        """
        return self._basis

    @property
    def m(self):
        """
        int: The ambient Bernstein degree, or `None`.
        """
        return self._m

    @property
    def grid(self):
        """
        :class:`~bezreduce.ParamGrid`: The grid, or `None`.
        """
        return self._grid

    def position(self, index):
        """
        Return the row position of a Bernstein index.

        Raises:
          DomainError: The index is not in the basis.
        """
        try:
            return self._indices.index(index)
        except ValueError:
            raise DomainError(
                "Index {} is not in the dual basis {}".format(
                    index, self._indices))

    def dual(self, index):
        """
        Return the sampled dual function belonging to a Bernstein index.
        """
        return self._duals[self.position(index)]


def empty_dual(m, grid):
    """
    Return the dual basis of the empty index set on a grid.
    """
    width = len(grid)
    return DualBasis._make((), np.zeros((0, width)), np.zeros((0, width)),
                           m, grid)


def dual_singleton(b, index=0, m=None, grid=None):
    """
    Return the dual basis of a single function b, i.e. {b / <b, b>}.

    Parameters:

      b (array-like): The sampled basis function.

      index (int): The Bernstein index of b.

      m (int): The ambient Bernstein degree, or `None`.

      grid (ParamGrid): The grid, or `None`.

    Raises:
      RankDeficiencyError: b vanishes on the grid.
    """
    b = np.array(b, dtype=float)
    norm2 = float(b @ b)
    if not norm2 > _TINY:
        raise RankDeficiencyError(
            f"Basis function {index} vanishes on the grid", index=index)
    return DualBasis._make((int(index),), (b / norm2)[np.newaxis, :],
                           b[np.newaxis, :], m, grid)


def _span_error(index, span, denom, v_new):
    return RankDeficiencyError(
        "Basis function {} is numerically in the span of {} on the grid "
        "(denominator {:.3e}, squared norm {:.3e})".format(
            index, span, denom, v_new),
        index=index)


def expand(dual_basis, new_index, b_new):
    """
    Return the dual basis for F + {new_index}.

    With w_i = <d_i, b_new>, v_j = <b_new, b_j> and v_new = <b_new, b_new>,
    the new dual function is

        d_new = sum_h c_h d_h + c_new b_new,
        c_new = 1 / (v_new - sum_h v_h w_h),  c_h = -v_h c_new,

    and the old dual functions become d_i - w_i d_new.

    Parameters:

      dual_basis (DualBasis): The current dual basis.

      new_index (int): The Bernstein index to add, not in the basis.

      b_new (array-like): B_{new_index}^m sampled on the grid.

    Returns:
      tuple(DualBasis, ExpansionScratch): The expanded dual basis (new index
      last) and the scratch values for coefficient updates.

    Raises:
      DomainError: new_index is already in the basis.
      RankDeficiencyError: b_new lies numerically in the current span.
    """
    if new_index in dual_basis.indices:
        raise DomainError(
            "Index {} is already in the dual basis {}".format(
                new_index, dual_basis.indices))
    b_new = np.asarray(b_new, dtype=float)
    v_new = float(b_new @ b_new)
    if not dual_basis.indices:
        expanded = dual_singleton(b_new, new_index, dual_basis.m,
                                  dual_basis.grid)
        scratch = ExpansionScratch(np.zeros(0), np.array([v_new]),
                                   np.array([1.0 / v_new]))
        return expanded, scratch

    duals = dual_basis.duals
    basis = dual_basis.basis
    size = duals.shape[0]
    w = duals @ b_new
    v = basis @ b_new
    denom = v_new - float(v @ w)
    if not denom > RANK_TOLERANCE * v_new:
        raise _span_error(new_index, dual_basis.indices, denom, v_new)
    c_new = 1.0 / denom
    # sum_h c_h d_h = -c_new sum_h v_h d_h
    d_new = (b_new - v @ duals) * c_new

    new_duals = np.empty((size + 1, duals.shape[1]))
    np.subtract(duals, w[:, np.newaxis] * d_new, out=new_duals[:size])
    new_duals[size] = d_new
    new_basis = np.empty_like(new_duals)
    new_basis[:size] = basis
    new_basis[size] = b_new

    expanded = DualBasis._make(
        dual_basis.indices + (int(new_index),), new_duals, new_basis,
        dual_basis.m, dual_basis.grid)
    scratch = ExpansionScratch(w, np.concatenate((v, (v_new,))),
                               np.concatenate((v * -c_new, (c_new,))))
    return expanded, scratch


def _drop_row(array, pos):
    return np.concatenate((array[:pos], array[pos + 1:]))


def contract(dual_basis, remove_index):
    """
    Return the dual basis for F - {remove_index}, without solving any linear
    system.

    With q = remove_index, the surviving dual functions become
    d_i + w_i d_q, where w_i = -<d_i, d_q> / <d_q, d_q>.

    Parameters:

      dual_basis (DualBasis): The current dual basis, with at least two
        indices.

      remove_index (int): The Bernstein index to remove.

    Returns:
      tuple(DualBasis, numpy.ndarray): The contracted dual basis (remaining
      indices in their previous order) and the coefficients w for the
      remaining indices.

    Raises:
      DomainError: remove_index is not in the basis, or the basis has fewer
        than two indices.
      ConsistencyError: d_q vanishes, which cannot happen for a valid dual
        basis.
    """
    pos = dual_basis.position(remove_index)
    if len(dual_basis) < 2:
        raise DomainError(
            "Contraction requires at least two indices, got {}".format(
                dual_basis.indices))
    duals = dual_basis.duals
    d_q = duals[pos]
    norm2 = float(d_q @ d_q)
    if not norm2 > _TINY:
        raise ConsistencyError(
            "Dual function {} of {} has vanishing norm".format(
                remove_index, dual_basis.indices))
    rest = _drop_row(duals, pos)
    w = rest @ d_q
    w *= -1.0 / norm2
    rest += w[:, np.newaxis] * d_q
    indices = dual_basis.indices[:pos] + dual_basis.indices[pos + 1:]
    contracted = DualBasis._make(
        indices, rest, _drop_row(dual_basis.basis, pos), dual_basis.m,
        dual_basis.grid)
    return contracted, w


def _check_indices(indices, m):
    indices = [int(i) for i in indices]
    if len(set(indices)) != len(indices):
        raise DomainError(f"Duplicate indices: {indices}")
    for i in indices:
        if not 0 <= i <= m:
            raise DomainError(f"Index {i} not in range 0..{m}")
    return indices


def iter_dual_bases(indices, m, grid, basis_values=None):
    """
    Generate the dual bases for the leading sub-lists of indices: first the
    singleton for indices[0], then one expansion per further index.

    Parameters:

      indices (iterable of int): Distinct Bernstein indices in 0..m.

      m (int): The Bernstein degree.

      grid (ParamGrid): The grid.

      basis_values (numpy.ndarray): The sampled Bernstein basis of degree m
        on the grid, if already available.

    Raises:
      DomainError: Invalid indices.
      RankDeficiencyError: The sampled basis functions are numerically
        dependent on the grid.
    """
    indices = _check_indices(indices, m)
    if basis_values is None:
        basis_values = bernstein_values(m, grid)
    dual_basis = empty_dual(m, grid)
    for index in indices:
        dual_basis, _ = expand(dual_basis, index, basis_values[index])
        yield dual_basis


def build_dual(indices, m, grid, basis_values=None):
    """
    Return the dual basis of {B_j^m : j in indices} on a grid, built by
    repeated expansion. An empty index list gives the empty dual basis.

    The expansions run in place on one preallocated array and produce the
    same dual functions as :func:`iter_dual_bases`, without its
    intermediate :class:`DualBasis` objects.

    See :func:`iter_dual_bases` for the parameters and exceptions.
    """
    indices = _check_indices(indices, m)
    if basis_values is None:
        basis_values = bernstein_values(m, grid)
    if not indices:
        return empty_dual(m, grid)
    basis = basis_values[indices]
    # v_j = <b_new, b_j> of every expansion step
    gram = basis @ basis.T
    duals = np.empty_like(basis)
    v_first = float(gram[0, 0])
    if not v_first > _TINY:
        raise RankDeficiencyError(
            f"Basis function {indices[0]} vanishes on the grid",
            index=indices[0])
    duals[0] = basis[0] / v_first
    for size in range(1, len(indices)):
        b_new = basis[size]
        head = duals[:size]
        v = gram[size, :size]
        v_new = float(gram[size, size])
        w = head @ b_new
        denom = v_new - float(v @ w)
        if not denom > RANK_TOLERANCE * v_new:
            raise _span_error(indices[size], tuple(indices[:size]), denom,
                              v_new)
        d_new = (b_new - v @ head) * (1.0 / denom)
        head -= w[:, np.newaxis] * d_new
        duals[size] = d_new
    dual_basis = DualBasis._make(tuple(indices), duals, basis, m, grid)
    LOG.debug("Built dual basis of degree %s for indices %s on %s points",
              m, dual_basis.indices, len(grid))
    return dual_basis


def restrict_dual(dual_basis, keep):
    """
    Return the dual basis of a subset of the current indices, obtained by
    contracting each dropped index in turn.

    Parameters:

      dual_basis (DualBasis): A known dual basis.

      keep (iterable of int): The indices to keep; a subset of the current
        indices.

    Raises:
      DomainError: keep is not a subset of the current indices.
    """
    keep = set(int(i) for i in keep)
    unknown = keep.difference(dual_basis.indices)
    if unknown:
        raise DomainError(
            "Cannot restrict dual basis {} to unknown indices {}".format(
                dual_basis.indices, sorted(unknown)))
    if not keep:
        return DualBasis._make((), dual_basis.duals[:0], dual_basis.basis[:0],
                               dual_basis.m, dual_basis.grid)
    for index in [i for i in dual_basis.indices if i not in keep]:
        dual_basis, _ = contract(dual_basis, index)
    LOG.debug("Restricted dual basis to indices %s", dual_basis.indices)
    return dual_basis


def project(dual_basis, g):
    """
    Return the least squares coefficients e_i = <g, d_i> of a sampled
    function g with respect to the span of the basis, in index order.

    sum_i e_i B_i is the best approximation of g in that span with respect
    to the discrete norm.
    """
    return dual_basis.duals @ np.asarray(g, dtype=float)


def update_coeffs_expand(e, scratch, g_dot_bnew):
    """
    Carry least squares coefficients of a function g through an expansion.

    Parameters:

      e (array-like): <g, d_i> for the dual basis before the expansion.

      scratch (ExpansionScratch): Scratch values returned by :func:`expand`.

      g_dot_bnew (float): <g, b_new>.

    Returns:
      :class:`numpy.ndarray`: The coefficients for the expanded basis, the
      new index last.
    """
    e = np.asarray(e, dtype=float)
    c = scratch.c
    e_new = float(c[:-1] @ e) + float(c[-1]) * g_dot_bnew
    result = np.empty(e.size + 1)
    np.subtract(e, scratch.w * e_new, out=result[:-1])
    result[-1] = e_new
    return result


def update_coeffs_contract(e, w, removed_position):
    """
    Carry least squares coefficients through a contraction:
    e_i + w_i e_q for the remaining positions, where q is the removed one.

    Parameters:

      e (array-like): Coefficients for the dual basis before contraction.

      w (array-like): Coefficients returned by :func:`contract`.

      removed_position (int): Row position of the removed index.
    """
    e = np.asarray(e, dtype=float)
    e_q = e[removed_position]
    return _drop_row(e, removed_position) + np.asarray(w) * e_q


def biorthogonality_defect(dual_basis):
    """
    Return max |<B_j, d_i> - delta_ij| over the indices of the basis, or 0
    for an empty basis.
    """
    size = len(dual_basis)
    if size == 0:
        return 0.0
    products = dual_basis.duals @ dual_basis.basis.T
    return float(np.max(np.abs(products - np.eye(size))))


def dual_gram(dual_basis):
    """
    Return the matrix <d_i, d_j>, which is the inverse of the Gram matrix
    <B_i, B_j> of the basis.
    """
    return dual_basis.duals @ dual_basis.duals.T
