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
Command for reducing the segments of a composite curve file.
"""


import logging
from concurrent.futures import ThreadPoolExecutor

import click
from click_option_group import optgroup

from .bezreduce import cli
from ._constants import CLI_LOGGER_NAME
from ._helper import COMMAND_OPTIONS_METAVAR, EXIT_SOLVER_ERROR, \
    SOLVER_ERRORS, print_dicts, click_exception, add_options
from ._bvls import Backend, COORDINATES
from ._reducer import reduce_segment
from ._composite import load_composite, report_rows, write_report_csv, \
    REPORT_COLUMNS
from ._svg import render_svg

LOG = logging.getLogger(CLI_LOGGER_NAME)

DEFAULT_JOBS = 1
DEFAULT_BACKEND = 'dual'

# Click options shared by commands that load composite curve files
SEGMENT_OPTIONS = [
    click.option('--allow-same-degree', is_flag=True, default=False,
                 hidden=True,
                 help='Admit segments whose reduced degree equals their '
                 'degree (for testing).'),
]

AUDIT_COLUMNS = ['name', 'arm', 'coordinate', 'iterations', 'case1',
                 'case2', 'max_coeff_drift', 'max_dual_defect',
                 'continuity_defect']


@cli.command('reduce', options_metavar=COMMAND_OPTIONS_METAVAR)
@click.argument('FILE', type=str, metavar='FILE')
@optgroup.group('Reduction options')
@optgroup.option('--traditional', is_flag=True, default=False,
                 help='Run only the traditional reduction (continuity '
                 'constraints, no box). The boxed columns stay empty.')
@optgroup.option('--backend', type=click.Choice(['dual', 'normal']),
                 envvar='BEZREDUCE_BACKEND', default=DEFAULT_BACKEND,
                 help='Subproblem solver: incrementally updated dual bases '
                 '(dual) or normal equations (normal). '
                 'Default: BEZREDUCE_BACKEND environment variable, or '
                 '{d}.'.format(d=DEFAULT_BACKEND))
@optgroup.option('-j', '--jobs', type=int, envvar='BEZREDUCE_JOBS',
                 default=DEFAULT_JOBS,
                 help='Number of segments reduced in parallel. '
                 'Default: BEZREDUCE_JOBS environment variable, or '
                 '{d}.'.format(d=DEFAULT_JOBS))
@optgroup.option('--audit', is_flag=True, default=False,
                 help='Check the maintained coefficients and dual bases '
                 'against fresh computations in every subproblem and show '
                 'the largest deviations.')
@optgroup.group('Output options')
@optgroup.option('--csv', 'csv_file', type=str, metavar='CSV-FILE',
                 help='Write the report to a CSV file.')
@optgroup.option('--svg', 'svg_file', type=str, metavar='SVG-FILE',
                 help='Write an SVG image of the original and reduced curves.')
@add_options(SEGMENT_OPTIONS)
@click.pass_obj
def reduce(cmd_ctx, file, **options):
    # pylint: disable=redefined-builtin
    """
    Reduce the degree of every segment in a composite curve file.

    Each segment is reduced twice: with continuity constraints only (the
    traditional reduction), and additionally with its box constraints on the
    inner control points (the box of the file, or the box spanned by the
    control points of the segment). The report shows one row per segment
    with the least squares error E on the grid of the segment and the
    maximum error Einf on 501 uniform samples, for both reductions.

    A segment that cannot be reduced is reported and the remaining segments
    are still processed; the command then ends with exit code 2.

    In addition to the command-specific options shown in this help text, the
    general options (see 'bezreduce --help') can also be specified before the
    command.
    """
    cmd_ctx.execute_cmd(lambda: cmd_reduce(cmd_ctx, file, options))


def _audit_rows(results):
    rows = []
    for res in results:
        for arm, report in (('traditional', res.traditional),
                            ('boxed', res.boxed)):
            if report is None:
                continue
            for coord in COORDINATES:
                diag = report.diagnostics.get(coord)
                rows.append({
                    'name': res.name,
                    'arm': arm,
                    'coordinate': coord,
                    'iterations': diag.iterations if diag else 1,
                    'case1': diag.case1_count if diag else 0,
                    'case2': diag.case2_count if diag else 0,
                    'max_coeff_drift':
                        max(diag.coeff_drift, default=0.0) if diag else None,
                    'max_dual_defect':
                        max(diag.dual_defect, default=0.0) if diag else None,
                    'continuity_defect': report.continuity_defect,
                })
    return rows


def cmd_reduce(cmd_ctx, file, options):
    # pylint: disable=missing-function-docstring

    jobs = options['jobs']
    if jobs < 1:
        raise click_exception(
            f"Number of jobs must be at least 1, got {jobs}",
            cmd_ctx.error_format)
    backend = Backend(options['backend'])
    traditional_only = options['traditional']
    audit = options['audit']
    allow_same_degree = options['allow_same_degree']

    composite = load_composite(file, allow_same_degree=allow_same_degree)
    LOG.info("Reducing %d segments from %s with backend %s, %d jobs",
             len(composite), file, backend.value, jobs)

    def reduce_one(spec):
        return reduce_segment(spec.to_request(allow_same_degree), backend,
                              traditional_only=traditional_only, audit=audit,
                              name=spec.name)

    with ThreadPoolExecutor(max_workers=jobs) as executor:
        results = list(executor.map(reduce_one, composite))

    rows = report_rows(results)
    try:
        if options['csv_file']:
            with open(options['csv_file'], 'w', encoding='utf-8',
                      newline='') as fp:
                write_report_csv(fp, rows)
        if options['svg_file']:
            svg = render_svg(results)
            with open(options['svg_file'], 'w', encoding='utf-8') as fp:
                fp.write(svg)
    except OSError as exc:
        raise click_exception(exc, cmd_ctx.error_format)

    print_dicts(cmd_ctx, rows, cmd_ctx.output_format, show_list=REPORT_COLUMNS)
    if audit:
        click.echo("")
        print_dicts(cmd_ctx, _audit_rows(results), cmd_ctx.output_format,
                    show_list=AUDIT_COLUMNS)

    failed = [res for res in results if res.failed]
    if failed:
        solver_failed = False
        for res in failed:
            for arm, exc in (('traditional', res.traditional_error),
                             ('boxed', res.boxed_error)):
                if exc is None:
                    continue
                solver_failed = solver_failed or isinstance(exc, SOLVER_ERRORS)
                click.echo("Segment {n}, {a} reduction: {e}: {m}".format(
                    n=res.name, a=arm, e=exc.__class__.__name__, m=exc),
                    err=True)
        exc = click_exception(
            "{f} of {t} segments could not be reduced".format(
                f=len(failed), t=len(results)),
            cmd_ctx.error_format)
        if solver_failed:
            exc.exit_code = EXIT_SOLVER_ERROR
        raise exc
