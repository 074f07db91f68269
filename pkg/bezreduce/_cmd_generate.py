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
Command for generating the synthetic composite curve file.
"""


import os

import click

from .bezreduce import cli
from ._helper import COMMAND_OPTIONS_METAVAR, click_exception
from ._composite import synthetic_composite, dump_composite, \
    dump_composite_yaml


@cli.command('generate', options_metavar=COMMAND_OPTIONS_METAVAR)
@click.argument('FILE', type=str, metavar='FILE')
@click.option('--seed', type=int, default=0,
              help='Seed of the random control points. Default: 0.')
@click.option('--format', 'file_format', type=click.Choice(['text', 'yaml']),
              default=None,
              help='File format. Default: yaml for file names ending with '
              '.yaml or .yml, text otherwise.')
@click.pass_obj
def generate(cmd_ctx, file, **options):
    """
    Generate a composite curve file with 16 synthetic segments.

    The segments form a head and eight arms. Their degrees, reduced degrees,
    grid sizes and continuity orders are fixed; the control points are
    random but smooth and depend only on the seed. No boxes are written, so
    the box spanned by the control points of each segment applies.

    In addition to the command-specific options shown in this help text, the
    general options (see 'bezreduce --help') can also be specified before the
    command.
    """
    cmd_ctx.execute_cmd(lambda: cmd_generate(cmd_ctx, file, options))


def cmd_generate(cmd_ctx, file, options):
    # pylint: disable=missing-function-docstring

    file_format = options['file_format']
    if file_format is None:
        ext = os.path.splitext(file)[1].lower()
        file_format = 'yaml' if ext in ('.yaml', '.yml') else 'text'

    composite = synthetic_composite(options['seed'])
    if file_format == 'yaml':
        content = dump_composite_yaml(composite)
    else:
        content = dump_composite(composite)
    try:
        with open(file, 'w', encoding='utf-8') as fp:
            fp.write(content)
    except OSError as exc:
        raise click_exception(exc, cmd_ctx.error_format)

    cmd_ctx.spinner.stop()
    click.echo("Wrote synthetic composite curve with {n} segments to {f} "
               "in {ff} format.".format(n=len(composite), f=file,
                                        ff=file_format.upper()))
