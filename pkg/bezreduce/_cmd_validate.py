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
Command for validating a composite curve file.
"""


import click

from .bezreduce import cli
from ._helper import COMMAND_OPTIONS_METAVAR, print_dicts, add_options
from ._continuity import inner_indices
from ._composite import load_composite
from ._cmd_reduce import SEGMENT_OPTIONS

VALIDATE_COLUMNS = ['name', 'n', 'm', 'N', 'alpha', 'beta', 'inner', 'box']


@cli.command('validate', options_metavar=COMMAND_OPTIONS_METAVAR)
@click.argument('FILE', type=str, metavar='FILE')
@add_options(SEGMENT_OPTIONS)
@click.pass_obj
def validate(cmd_ctx, file, **options):
    """
    Validate a composite curve file and show its segments.

    The file is checked for syntax, for the number of control points of each
    segment, and for the parameter conditions m < n, alpha + beta < m - 1
    and N >= m. The first problem found is reported with its line number and
    segment, and the command ends with exit code 1.

    In addition to the command-specific options shown in this help text, the
    general options (see 'bezreduce --help') can also be specified before the
    command.
    """
    cmd_ctx.execute_cmd(lambda: cmd_validate(cmd_ctx, file, options))


def cmd_validate(cmd_ctx, file, options):
    # pylint: disable=missing-function-docstring

    composite = load_composite(
        file, allow_same_degree=options['allow_same_degree'])
    rows = []
    for spec in composite:
        rows.append({
            'name': spec.name,
            'n': spec.n,
            'm': spec.m,
            'N': spec.N,
            'alpha': spec.alpha,
            'beta': spec.beta,
            'inner': len(inner_indices(spec.m, spec.orders)),
            'box': ','.join(f'{v:g}' for v in spec.box) if spec.box
            else 'control points',
        })
    print_dicts(cmd_ctx, rows, cmd_ctx.output_format,
                show_list=VALIDATE_COLUMNS)
    if cmd_ctx.output_format != 'json':
        click.echo(f"{len(composite)} segments are valid.")
