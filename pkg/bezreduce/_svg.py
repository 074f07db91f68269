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
SVG rendering of reduced composite curves.
"""


import io

import numpy as np
from matplotlib.figure import Figure
from matplotlib.backends.backend_svg import FigureCanvasSVG

from ._bernstein import eval_curve_many
from ._continuity import fixed_indices, inner_indices

__all__ = ['render_svg', 'ORIGINAL_COLOR', 'REDUCED_COLOR', 'FIXED_COLOR',
           'BOXED_COLOR']

ORIGINAL_COLOR = '#0000ff'
REDUCED_COLOR = '#ff0000'
FIXED_COLOR = '#008000'
BOXED_COLOR = '#ff0000'

# Size of the SVG viewport in points
VIEWPORT = 1000
MARGIN = 0.05
SAMPLES = 200


def _bounding_box(arrays):
    stacked = np.vstack(arrays)
    low = stacked.min(axis=0)
    high = stacked.max(axis=0)
    size = max(float(np.max(high - low)), 1e-12)
    center = (low + high) / 2.0
    half = size * (0.5 + MARGIN)
    return center - half, center + half


def render_svg(results):
    """
    Return an SVG image of reduced segments.

    Each original segment is drawn as a solid blue line and its reduced
    curve as a dashed red line. The control points of the reduced curve are
    green where they are fixed by continuity and red where they are subject
    to the box. The box constrained result is shown where available, the
    traditional one otherwise.

    Parameters:

      results (iterable of SegmentResult): The reduced segments.

    Returns:
      string: The SVG document.
    """
    fig = Figure(figsize=(VIEWPORT / 72.0, VIEWPORT / 72.0), dpi=72)
    FigureCanvasSVG(fig)
    ax = fig.add_axes([0.0, 0.0, 1.0, 1.0])
    ax.set_axis_off()
    ts = np.linspace(0.0, 1.0, SAMPLES + 1)
    drawn = []
    for res in results:
        req = res.request
        original = eval_curve_many(req.curve, ts)
        ax.plot(original[:, 0], original[:, 1], color=ORIGINAL_COLOR,
                linestyle='-', linewidth=1.5)
        drawn.append(original)
        report = res.boxed or res.traditional
        if report is None:
            continue
        reduced = eval_curve_many(report.result, ts)
        ax.plot(reduced[:, 0], reduced[:, 1], color=REDUCED_COLOR,
                linestyle='--', linewidth=1.5)
        points = report.result.points
        fixed = fixed_indices(req.m, req.orders)
        inner = inner_indices(req.m, req.orders)
        ax.plot(points[fixed, 0], points[fixed, 1], linestyle='none',
                marker='o', markersize=4, color=FIXED_COLOR)
        ax.plot(points[inner, 0], points[inner, 1], linestyle='none',
                marker='o', markersize=4, color=BOXED_COLOR)
        drawn.extend([reduced, points])
    if drawn:
        low, high = _bounding_box(drawn)
        ax.set_xlim(low[0], high[0])
        ax.set_ylim(low[1], high[1])
    ax.set_aspect('equal', adjustable='box')
    out = io.StringIO()
    fig.savefig(out, format='svg', metadata={'Date': None})
    return out.getvalue()
