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
bezreduce - Degree reduction of Bezier curves under continuity and box
constraints, with subproblems solved through incrementally updated dual bases.
"""


from ._version import *        # noqa: F401
from ._exceptions import *     # noqa: F401
from ._constants import *      # noqa: F401
from ._bernstein import *      # noqa: F401
from ._dual import *           # noqa: F401
from ._continuity import *     # noqa: F401
from ._oracle import *         # noqa: F401
from ._bvls import *           # noqa: F401
from ._reducer import *        # noqa: F401
from ._composite import *      # noqa: F401
from ._svg import *            # noqa: F401
from ._bench import *          # noqa: F401

# Register the commands with the CLI
from . import _cmd_reduce      # noqa: F401
from . import _cmd_bench       # noqa: F401
from . import _cmd_validate    # noqa: F401
from . import _cmd_generate    # noqa: F401
