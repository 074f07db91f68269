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
Exceptions raised by the bezreduce library.

All exceptions raised on purpose by the library are derived from
:exc:`~bezreduce.Error`. The command line interface converts them into
click exceptions, using :meth:`Error.str_def` for the 'def' error format.
"""


__all__ = ['Error', 'DomainError', 'RankDeficiencyError', 'ConsistencyError',
           'SolverError', 'InputError', 'ParseError']


class Error(Exception):
    """
    Abstract base class for exceptions specific to bezreduce.

    Derived from :exc:`~py:exceptions.Exception`.
    """

    def str_def(self):
        """
        :term:`string`: The exception as a string in a Python definition-style
        format, e.g. for parsing by scripts:

        .. code-block:: text

            classname={}; message={}
        """
        return "classname={!r}; message={!r}".format(
            self.__class__.__name__, str(self))


class DomainError(Error, ValueError):
    """
    Indicates that an argument violates the precondition of an operation,
    or that a value violates the invariants of a type (e.g. an unsorted
    parameter grid, an out-of-range Bernstein index, or continuity orders
    that do not fit the degrees).
    """


class RankDeficiencyError(Error):
    """
    Indicates that a set of sampled basis functions is numerically linearly
    dependent on the parameter grid, so that a dual basis or a normal
    equations system cannot be formed.

    Attributes:

      index (int): The Bernstein index whose addition failed, or `None`.
    """

    def __init__(self, message, index=None):
        super().__init__(message)
        self.index = index


class ConsistencyError(Error):
    """
    Indicates that a dual basis is internally inconsistent, e.g. a dual
    function with vanishing norm was found during contraction. This cannot
    happen for a dual basis created by this package and signals corruption.
    """


class SolverError(Error):
    """
    Indicates that the box-constrained solve of one coordinate failed.

    Attributes:

      coordinate (string): 'x' or 'y', or `None` if not known.

      iteration (int): Number of the outer iteration in which the failure
        occurred.

      best_iterate (numpy.ndarray): The best feasible coordinate vector found
        before the failure, or `None`.
    """

    def __init__(self, message, coordinate=None, iteration=None,
                 best_iterate=None):
        super().__init__(message)
        self.coordinate = coordinate
        self.iteration = iteration
        self.best_iterate = best_iterate

    def __str__(self):
        msg = super().__str__()
        if self.coordinate is not None:
            msg = f"{self.coordinate}-coordinate: {msg}"
        if self.iteration is not None:
            msg = f"{msg} (iteration {self.iteration})"
        return msg


class InputError(Error):
    """
    Indicates a problem with a composite curve file.

    Attributes:

      source (string): Path name of the file, or another description of
        the input source.

      line (int): 1-based line number, or `None`.

      segment (string): Name or 1-based index of the segment, or `None`.
    """

    def __init__(self, message, source=None, line=None, segment=None):
        super().__init__(message)
        self.source = source
        self.line = line
        self.segment = segment

    def __str__(self):
        where = []
        if self.source is not None:
            where.append(str(self.source))
        if self.line is not None:
            where.append(f"line {self.line}")
        if self.segment is not None:
            where.append(f"segment {self.segment}")
        msg = super().__str__()
        if where:
            msg = "{}: {}".format(', '.join(where), msg)
        return msg


class ParseError(InputError):
    """
    Indicates a syntax error in a composite curve file.
    """
