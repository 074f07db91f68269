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
Public constants: logger names, numerical tolerances and defaults.
"""


__all__ = ['DUAL_LOGGER_NAME', 'SOLVER_LOGGER_NAME', 'REDUCER_LOGGER_NAME',
           'CLI_LOGGER_NAME', 'RANK_TOLERANCE', 'KKT_TOLERANCE',
           'ITERATION_CAP_FACTOR', 'MAX_BINOMIAL_DEGREE',
           'MAX_ORACLE_VARIABLES', 'EINF_SAMPLES', 'SERIAL_DIGITS']


#: Name of the logger for the dual basis engine (construction, expansion,
#: contraction).
DUAL_LOGGER_NAME = 'bezreduce.dual'

#: Name of the logger for the active-set solver. Debug level shows one line
#: per outer iteration.
SOLVER_LOGGER_NAME = 'bezreduce.solver'

#: Name of the logger for the per-curve reduction driver.
REDUCER_LOGGER_NAME = 'bezreduce.reducer'

#: Name of the logger for the command line interface.
CLI_LOGGER_NAME = 'bezreduce.cli'

#: Relative tolerance for the expansion denominator: the new basis function
#: is considered to lie in the current span if the denominator is at most
#: this fraction of its squared norm.
RANK_TOLERANCE = 1e-12

#: Relative tolerance for the sign test of the gradient at bound variables.
#: The absolute tolerance is this value times (1 + max |phi_1(t_k)|).
KKT_TOLERANCE = 1e-10

#: The active-set loop gives up after this factor times (m + 1) subproblems.
ITERATION_CAP_FACTOR = 10

#: Largest degree for which exact binomial coefficients are provided.
MAX_BINOMIAL_DEGREE = 64

#: Largest number of inner variables the brute-force oracle accepts.
MAX_ORACLE_VARIABLES = 8

#: Number of intervals of the uniform sample set for the maximum error.
EINF_SAMPLES = 500

#: Significant digits when serializing floats (binary64 round trip).
SERIAL_DIGITS = 17
