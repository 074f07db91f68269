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
Composite curve files, the synthetic composite curve, and the reduction
report in CSV format.

Text format of a composite curve file::

    # comment
    segment <name> n=<int> m=<int> N=<int> alpha=<int> beta=<int> [box=<lx>,<ux>,<ly>,<uy>]
    <x> <y>
    ...   (n+1 control point lines)

    segment ...

Segments are separated by blank lines and '#' starts a comment. Files named
``*.yaml`` or ``*.yml`` use the YAML layout::

    segments:
      - name: <name>
        n: <int>
        ...
        points: [[<x>, <y>], ...]
        box: [<lx>, <ux>, <ly>, <uy>]   # optional

Both layouts are validated against :data:`SEGMENT_SCHEMA`.
"""


import io
import os
import csv
import math

import numpy as np
import yaml
import jsonschema

from ._constants import SERIAL_DIGITS
from ._exceptions import InputError, ParseError, DomainError
from ._bernstein import BezierCurve
from ._continuity import ContinuityOrders
from ._reducer import ReductionRequest

__all__ = ['SEGMENT_SCHEMA', 'COMPOSITE_SCHEMA', 'REPORT_COLUMNS',
           'SYNTHETIC_SEGMENTS', 'SegmentSpec', 'CompositeCurveFile',
           'parse_composite', 'parse_composite_yaml', 'load_composite',
           'dump_composite', 'dump_composite_yaml', 'synthetic_composite',
           'report_rows', 'write_report_csv', 'read_report_csv']

# pylint: disable=line-too-long
#: JSON schema for the definition of one segment.
SEGMENT_SCHEMA = {
    "$schema": "http://json-schema.org/draft-07/schema#",
    "title": "Segment of a composite Bezier curve",
    "type": "object",
    "required": ["name", "n", "m", "N", "alpha", "beta", "points"],
    "additionalProperties": False,
    "properties": {
        "name": {
            "description": "Name of the segment",
            "type": "string",
            "minLength": 1,
        },
        "n": {
            "description": "Degree of the segment",
            "type": "integer",
            "minimum": 1,
        },
        "m": {
            "description": "Reduced degree",
            "type": "integer",
            "minimum": 0,
        },
        "N": {
            "description": "Number of grid intervals",
            "type": "integer",
            "minimum": 1,
        },
        "alpha": {
            "description": "Continuity order at t=0 (-1 for none)",
            "type": "integer",
            "minimum": -1,
        },
        "beta": {
            "description": "Continuity order at t=1 (-1 for none)",
            "type": "integer",
            "minimum": -1,
        },
        "points": {
            "description": "Control points as [x, y] pairs",
            "type": "array",
            "minItems": 2,
            "items": {
                "type": "array",
                "minItems": 2,
                "maxItems": 2,
                "items": {"type": "number"},
            },
        },
        "box": {
            "description": "Box for the inner control points: lx, ux, ly, uy",
            "type": "array",
            "minItems": 4,
            "maxItems": 4,
            "items": {"type": "number"},
        },
    },
}

#: JSON schema for a composite curve in YAML layout.
COMPOSITE_SCHEMA = {
    "$schema": "http://json-schema.org/draft-07/schema#",
    "title": "Composite Bezier curve",
    "type": "object",
    "required": ["segments"],
    "additionalProperties": False,
    "properties": {
        "segments": {
            "type": "array",
            "minItems": 1,
            "items": SEGMENT_SCHEMA,
        },
    },
}
# pylint: enable=line-too-long

#: Columns of the reduction report, one row per segment.
REPORT_COLUMNS = ['name', 'n', 'm', 'N', 'alpha', 'beta', 'E_traditional',
                  'Einf_traditional', 'E_boxed', 'Einf_boxed']

_INT_FIELDS = ('n', 'm', 'N', 'alpha', 'beta')

#: Segment names and parameter tuples (n, m, N, alpha, beta) of the
#: synthetic composite curve.
SYNTHETIC_SEGMENTS = [
    ('head-left', 9, 7, 20, 2, 1),
    ('head-right', 9, 7, 20, 1, 0),
    ('arm1-part1', 15, 9, 23, 0, 0),
    ('arm1-part2', 17, 9, 28, 0, 1),
    ('arm2-part1', 14, 10, 26, 1, 0),
    ('arm2-part2', 14, 10, 26, 0, 1),
    ('arm3-part1', 13, 7, 25, 1, 1),
    ('arm3-part2', 11, 7, 23, 1, 0),
    ('arm4', 11, 7, 23, 0, 0),
    ('arm5', 18, 11, 23, 0, 0),
    ('arm6-part1', 12, 7, 28, 0, 0),
    ('arm6-part2', 17, 9, 29, 0, 2),
    ('arm7-part1', 15, 9, 29, 2, 0),
    ('arm7-part2', 11, 7, 25, 0, 2),
    ('arm8-part1', 16, 9, 29, 2, 0),
    ('arm8-part2', 9, 6, 18, 0, 2),
]


class SegmentSpec:
    """
    One segment of a composite curve together with its reduction parameters.
    """

    def __init__(self, name, points, m, alpha, beta, N, box=None):
        # pylint: disable=invalid-name
        self.name = name
        self.curve = points if isinstance(points, BezierCurve) \
            else BezierCurve(points)
        self.m = int(m)
        self.orders = ContinuityOrders(alpha, beta)
        self.N = int(N)
        self.box = None if box is None else tuple(float(v) for v in box)

    @property
    def n(self):
        """
        int: The degree of the segment.
        """
        return self.curve.degree

    @property
    def alpha(self):
        """
        int: The continuity order at t=0.
        """
        return self.orders.alpha

    @property
    def beta(self):
        """
        int: The continuity order at t=1.
        """
        return self.orders.beta

    def __repr__(self):
        return ("SegmentSpec(name={!r}, n={}, m={}, N={}, alpha={}, beta={}, "
                "box={!r})".format(self.name, self.n, self.m, self.N,
                                   self.alpha, self.beta, self.box))

    def __eq__(self, other):
        if not isinstance(other, SegmentSpec):
            return NotImplemented
        return (self.name, self.m, self.orders, self.N, self.box) == \
            (other.name, other.m, other.orders, other.N, other.box) and \
            np.array_equal(self.curve.points, other.curve.points)

    __hash__ = None

    def to_request(self, allow_same_degree=False):
        """
        Return the :class:`~bezreduce.ReductionRequest` of this segment.

        Raises:
          DomainError: The parameters are inconsistent.
        """
        box = None
        if self.box is not None:
            lx, ux, ly, uy = self.box
            box = ((lx, ux), (ly, uy))
        return ReductionRequest(self.curve, self.m, self.orders, box=box,
                                N=self.N, allow_same_degree=allow_same_degree)

    def as_dict(self):
        """
        Return the segment in the layout of :data:`SEGMENT_SCHEMA`.
        """
        data = {
            'name': self.name,
            'n': self.n,
            'm': self.m,
            'N': self.N,
            'alpha': self.alpha,
            'beta': self.beta,
            'points': self.curve.points.tolist(),
        }
        if self.box is not None:
            data['box'] = list(self.box)
        return data


class CompositeCurveFile:
    """
    The ordered segments of a composite curve.
    """

    def __init__(self, segments, source=None):
        segments = list(segments)
        if not segments:
            raise InputError("Composite curve has no segments", source=source)
        self.segments = segments
        self.source = source

    def __repr__(self):
        return "CompositeCurveFile(source={!r}, segments={})".format(
            self.source, len(self.segments))

    def __len__(self):
        return len(self.segments)

    def __iter__(self):
        return iter(self.segments)

    def __getitem__(self, index):
        return self.segments[index]

    def __eq__(self, other):
        if not isinstance(other, CompositeCurveFile):
            return NotImplemented
        return self.segments == other.segments

    __hash__ = None


def _validate(data, schema, what, source, line, segment):
    """
    Validate data against a JSON schema, raising InputError.
    """
    try:
        jsonschema.validate(data, schema)
    except jsonschema.exceptions.ValidationError as exc:
        raise InputError(
            "Validation of {what} failed: {msg}; "
            "Offending element: {elem}; "
            "Schema item: {schemaitem}; "
            "Validator: {valname}={valvalue}".
            format(what=what,
                   schemaitem='.'.join(str(e) for e in
                                       exc.absolute_schema_path),
                   msg=exc.message,
                   # need to convert to string, as when path contains a list,
                   # the list element is indicated as integer
                   elem='.'.join(str(e) for e in exc.absolute_path),
                   valname=exc.validator,
                   valvalue=exc.validator_value),
            source=source, line=line, segment=segment)


def _make_segment(data, source, line, label, allow_same_degree=False):
    """
    Create a SegmentSpec from validated data and check it semantically.
    """
    if len(data['points']) != data['n'] + 1:
        raise InputError(
            "Degree n={} requires {} control points, got {}".format(
                data['n'], data['n'] + 1, len(data['points'])),
            source=source, line=line, segment=label)
    try:
        spec = SegmentSpec(data['name'], data['points'], data['m'],
                           data['alpha'], data['beta'], data['N'],
                           data.get('box'))
        if spec.box is not None:
            lx, ux, ly, uy = spec.box
            if lx > ux or ly > uy:
                raise DomainError(
                    f"Box {list(spec.box)} has a lower bound above its "
                    f"upper bound")
        spec.to_request(allow_same_degree)
    except DomainError as exc:
        raise InputError(str(exc), source=source, line=line, segment=label)
    return spec


def _strip(line):
    return line.split('#', 1)[0].strip()


def _parse_number(token, source, lineno):
    try:
        value = float(token)
    except ValueError:
        raise ParseError(f"Invalid number: {token!r}", source=source,
                         line=lineno)
    if not math.isfinite(value):
        raise ParseError(f"Number is not finite: {token!r}", source=source,
                         line=lineno)
    return value


def _parse_header(line, source, lineno):
    tokens = line.split()
    if tokens[0] != 'segment':
        raise ParseError(
            f"Expected a segment header line, got {line!r}", source=source,
            line=lineno)
    if len(tokens) < 2 or '=' in tokens[1]:
        raise ParseError("Segment header line has no segment name",
                         source=source, line=lineno)
    data = {'name': tokens[1]}
    for token in tokens[2:]:
        key, sep, value = token.partition('=')
        if not sep or not value:
            raise ParseError(
                f"Invalid header field {token!r}, expected key=value",
                source=source, line=lineno, segment=tokens[1])
        if key in data:
            raise ParseError(f"Duplicate header field {key!r}",
                             source=source, line=lineno, segment=tokens[1])
        if key in _INT_FIELDS:
            try:
                data[key] = int(value)
            except ValueError:
                raise ParseError(
                    f"Header field {key} requires an integer, got {value!r}",
                    source=source, line=lineno, segment=tokens[1])
        elif key == 'box':
            data[key] = [_parse_number(v, source, lineno)
                         for v in value.split(',')]
        else:
            data[key] = value
    return data


def parse_composite(text, source=None, allow_same_degree=False):
    """
    Parse a composite curve in text format.

    Parameters:

      text (string): The file content.

      source (string): Description of the input for messages, e.g. the path.

      allow_same_degree (bool): Admit segments with m = n.

    Returns:
      CompositeCurveFile: The parsed segments, in file order.

    Raises:
      ParseError: Syntax error, with the line number.
      InputError: A segment violates the schema or the parameter
        invariants, with line number and segment.
    """
    lines = text.splitlines()
    segments = []
    i = 0
    while i < len(lines):
        line = _strip(lines[i])
        i += 1
        if not line:
            continue
        header_line = i
        data = _parse_header(line, source, header_line)
        label = "{} ({})".format(len(segments) + 1, data['name'])
        points = []
        while i < len(lines):
            line = _strip(lines[i])
            if not lines[i].strip():
                break
            i += 1
            if not line:
                continue
            if line.startswith('segment'):
                i -= 1
                break
            tokens = line.split()
            if len(tokens) != 2:
                raise ParseError(
                    f"Expected a control point 'x y', got {line!r}",
                    source=source, line=i, segment=label)
            points.append([_parse_number(t, source, i) for t in tokens])
        data['points'] = points
        _validate(data, SEGMENT_SCHEMA, "segment", source, header_line,
                  label)
        segments.append(_make_segment(data, source, header_line, label,
                                      allow_same_degree))
    return CompositeCurveFile(segments, source)


def parse_composite_yaml(text, source=None, allow_same_degree=False):
    """
    Parse a composite curve in YAML layout.

    Raises:
      ParseError: The text is not valid YAML.
      InputError: The content violates :data:`COMPOSITE_SCHEMA` or a segment
        violates the parameter invariants.
    """
    try:
        data = yaml.safe_load(text)
    except yaml.YAMLError as exc:
        line = None
        mark = getattr(exc, 'problem_mark', None)
        if mark is not None:
            line = mark.line + 1
        raise ParseError(f"Invalid YAML: {exc}", source=source, line=line)
    _validate(data, COMPOSITE_SCHEMA, "composite curve", source, None, None)
    segments = []
    for index, item in enumerate(data['segments'], 1):
        label = "{} ({})".format(index, item['name'])
        segments.append(_make_segment(item, source, None, label,
                                      allow_same_degree))
    return CompositeCurveFile(segments, source)


def load_composite(path, allow_same_degree=False):
    """
    Load a composite curve file, in YAML layout if the file name ends with
    .yaml or .yml, and in text format otherwise.

    Raises:
      InputError: The file cannot be read or is invalid.
    """
    try:
        with open(path, encoding='utf-8') as fp:
            text = fp.read()
    except OSError as exc:
        raise InputError(f"Cannot read file: {exc.strerror}", source=path)
    if os.path.splitext(path)[1].lower() in ('.yaml', '.yml'):
        return parse_composite_yaml(text, source=path,
                                    allow_same_degree=allow_same_degree)
    return parse_composite(text, source=path,
                           allow_same_degree=allow_same_degree)


def _fmt(value):
    return format(float(value), f'.{SERIAL_DIGITS}g')


def dump_composite(composite):
    """
    Return a composite curve in text format, with all numbers written to 17
    significant digits so that parsing the text gives identical values.
    """
    out = io.StringIO()
    for index, spec in enumerate(composite):
        if index:
            out.write('\n')
        header = "segment {} n={} m={} N={} alpha={} beta={}".format(
            spec.name, spec.n, spec.m, spec.N, spec.alpha, spec.beta)
        if spec.box is not None:
            header += " box=" + ','.join(_fmt(v) for v in spec.box)
        out.write(header + '\n')
        for x, y in spec.curve.points:
            out.write(f"{_fmt(x)} {_fmt(y)}\n")
    return out.getvalue()


def dump_composite_yaml(composite):
    """
    Return a composite curve in YAML layout.
    """
    data = {'segments': [spec.as_dict() for spec in composite]}
    return yaml.safe_dump(data, encoding=None, allow_unicode=True,
                          default_flow_style=None, indent=2, sort_keys=False)


def _smooth_polygon(rng, start, heading, count, step, turn):
    """
    Return count+1 control points starting at start, following a heading
    that turns smoothly by small random angles.
    """
    turns = np.cumsum(rng.normal(0.0, turn, size=count))
    headings = heading + turns
    lengths = step * rng.uniform(0.6, 1.4, size=count)
    steps = np.column_stack([lengths * np.cos(headings),
                             lengths * np.sin(headings)])
    return np.vstack([start, start + np.cumsum(steps, axis=0)]), headings[-1]


def synthetic_composite(seed=0):
    """
    Return a composite curve of 16 connected segments resembling a head
    with eight arms, with the parameter tuples of
    :data:`SYNTHETIC_SEGMENTS`.

    The head is a closed loop of two segments. Each arm starts on the head
    and consists of one or two consecutive segments.
    """
    rng = np.random.default_rng(seed)
    segments = []
    center = np.array([0.0, 0.0])
    head_start = center + np.array([-2.0, 0.0])
    arm_start = None
    heading = None
    for name, n, m, N, alpha, beta in SYNTHETIC_SEGMENTS:
        # pylint: disable=invalid-name
        if name == 'head-left':
            angles = np.linspace(np.pi, 0.0, n + 1)
            radius = 2.0 + rng.normal(0.0, 0.1, size=n + 1)
            radius[[0, -1]] = 2.0
            points = center + np.column_stack(
                [radius * np.cos(angles), 1.3 * radius * np.sin(angles)])
        elif name == 'head-right':
            angles = np.linspace(0.0, -np.pi, n + 1)
            radius = 2.0 + rng.normal(0.0, 0.1, size=n + 1)
            radius[[0, -1]] = 2.0
            points = center + np.column_stack(
                [radius * np.cos(angles), 1.3 * radius * np.sin(angles)])
            points[-1] = head_start
        else:
            if name.endswith('part2'):
                start = arm_start
            else:
                arm = int(name[3])
                angle = -np.pi * (arm - 0.5) / 8.0
                start = center + np.array([2.0 * np.cos(angle),
                                           2.6 * np.sin(angle)])
                heading = angle
            points, heading = _smooth_polygon(
                rng, start, heading, n, 0.5, 0.25)
        segments.append(SegmentSpec(name, points, m, alpha, beta, N))
        arm_start = points[-1]
    return CompositeCurveFile(segments, source=f"synthetic(seed={seed})")


def report_rows(results):
    """
    Return the report rows for reduced segments, as dicts with the keys
    :data:`REPORT_COLUMNS`. Errors of arms that failed or were not run are
    `None`.

    Parameters:

      results (iterable of SegmentResult): The reduced segments.
    """
    rows = []
    for res in results:
        req = res.request
        row = {
            'name': res.name,
            'n': req.n,
            'm': req.m,
            'N': req.N,
            'alpha': req.orders.alpha,
            'beta': req.orders.beta,
        }
        for arm, report in (('traditional', res.traditional),
                            ('boxed', res.boxed)):
            row[f'E_{arm}'] = report.E if report else None
            row[f'Einf_{arm}'] = report.E_inf if report else None
        rows.append(row)
    return rows


def write_report_csv(fp, rows):
    """
    Write report rows to an open text file in CSV format, with a header
    line. Missing errors are written as empty cells.
    """
    writer = csv.DictWriter(fp, fieldnames=REPORT_COLUMNS,
                            lineterminator='\n')
    writer.writeheader()
    for row in rows:
        writer.writerow({
            k: ('' if row[k] is None else
                _fmt(row[k]) if isinstance(row[k], float) else row[k])
            for k in REPORT_COLUMNS})


def read_report_csv(fp):
    """
    Read report rows written by :func:`write_report_csv`.

    Raises:
      InputError: The header does not match :data:`REPORT_COLUMNS`.
    """
    reader = csv.DictReader(fp)
    if reader.fieldnames != REPORT_COLUMNS:
        raise InputError(
            f"Unexpected report columns: {reader.fieldnames}")
    rows = []
    for row in reader:
        out = {'name': row['name']}
        for key in _INT_FIELDS:
            out[key] = int(row[key])
        for key in REPORT_COLUMNS[6:]:
            out[key] = float(row[key]) if row[key] else None
        rows.append(out)
    return rows
