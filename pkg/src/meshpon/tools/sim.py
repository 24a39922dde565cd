#!/usr/bin/env python
#  meshpon - mesh PON fronthaul latency simulator.
#  Copyright (C) 2026  meshpon contributors
#
#  This program is free software: you can redistribute it and/or
#  modify it under the terms of the GNU General Public License as
#  published by the Free Software Foundation, either version 3 of the
#  License, or (at your option) any later version.
#
#  This program is distributed in the hope that it will be useful,
#  but WITHOUT ANY WARRANTY; without even the implied warranty of
#  MERCHANTABILITY or FITNESS FOR A PARTICULAR PURPOSE.  See the GNU
#  General Public License for more details.
#
#  You should have received a copy of the GNU General Public License
#  along with this program.  If not, see
#  <http://www.gnu.org/licenses/>.

"""Mesh PON fronthaul latency simulator.

``run`` sweeps a scenario over its loads, slot durations and seeds and
writes the results. ``compare`` prints the latency differences between
two ``summary.csv`` files. ``validate`` checks a scenario file without
running it.

Every scenario value can be set on the ``run`` command line as
``--<table>.<key>``, e.g. ``--mac.guard_time 2us``. Command line values
override the file.

"""

__all__ = ['main']
__docformat__ = 'restructuredtext en'

import argparse
import logging
import os
import sys

from meshpon.components.io.results import (
    GridMismatch, compare, read_summary, write_deltas)
from meshpon.core.experiment import ScenarioInvalid, run_scenario
from meshpon.core.scenario import Scenario, default_config

logger = logging.getLogger('meshpon-sim')

# shortcut options and the scenario values they set
SHORTCUTS = {
    'loads': 'experiment.loads',
    'dba': 'mac.dba',
    'seeds': 'experiment.seeds',
    'jobs': 'experiment.jobs',
    'output': 'experiment.output_dir',
    }


def _add_run_parser(subparsers):
    parser = subparsers.add_parser(
        'run', allow_abbrev=False, help='sweep a scenario',
        description='Sweep a scenario and write its results.')
    parser.add_argument('config', help='scenario TOML file')
    parser.add_argument('--loads', metavar='x,y,...',
                        help='PON loads, fractions or percentages')
    parser.add_argument('--slot', metavar='duration',
                        help='radio slot duration, e.g. 250us')
    parser.add_argument('--dba', metavar='policy',
                        help='DBA policy: sr, codba or codba_cgs')
    parser.add_argument('--seeds', type=int, metavar='n',
                        help='seeds per grid point')
    parser.add_argument('--jobs', type=int, metavar='n',
                        help='parallel runs')
    parser.add_argument('--cgs-occupancy-estimate', action='store_true',
                        help='size standing grants from measured CGS use')
    parser.add_argument('--trace', action='store_true',
                        help='write per packet timestamps')
    parser.add_argument('-o', '--output', metavar='dir',
                        help='results directory')
    group = parser.add_argument_group('scenario values')
    default_config().parser_add(group)
    return parser


def load_scenario(args):
    """Read the scenario file and apply the command line."""
    scenario = Scenario.from_file(args.config)
    scenario.config.parser_set(args)
    for option, key in SHORTCUTS.items():
        value = getattr(args, option, None)
        if value is not None:
            scenario[key] = value
    if args.slot is not None:
        scenario['radio.slot_duration'] = args.slot
        scenario['experiment.slots'] = args.slot
    if args.cgs_occupancy_estimate:
        scenario['estimator.enabled'] = True
    if args.trace:
        scenario['experiment.trace'] = True
    return scenario


def _report(violations):
    for violation in violations:
        print(violation, file=sys.stderr)
    return 2


def do_run(args):
    try:
        scenario = load_scenario(args)
    except (OSError, ValueError) as ex:
        print('{}: {}'.format(args.config, ex), file=sys.stderr)
        return 2
    try:
        directory = run_scenario(scenario)
    except ScenarioInvalid as ex:
        return _report(ex.violations)
    except Exception:
        logger.exception('run failed')
        return 1
    print(directory)
    return 0


def do_validate(args):
    try:
        scenario = Scenario.from_file(args.config)
    except (OSError, ValueError) as ex:
        print('{}: {}'.format(args.config, ex), file=sys.stderr)
        return 2
    violations = scenario.violations()
    if violations:
        return _report(violations)
    logger.info('%s is valid', args.config)
    return 0


def _stem(path):
    base, ext = os.path.splitext(os.path.basename(path))
    if base == 'summary':
        # name a results file after its directory
        base = os.path.basename(os.path.dirname(os.path.abspath(path)))
    return base


def do_compare(args):
    try:
        baseline = read_summary(args.baseline)
        candidate = read_summary(args.candidate)
    except (OSError, ValueError) as ex:
        print(ex, file=sys.stderr)
        return 1
    try:
        deltas = compare(baseline, candidate,
                         baseline_class=args.baseline_class,
                         candidate_class=args.candidate_class)
    except GridMismatch as ex:
        print(ex, file=sys.stderr)
        return 3
    output = args.output or '{}-vs-{}.csv'.format(
        _stem(args.candidate), _stem(args.baseline))
    write_deltas(output, deltas)
    print('load  slot_us  class  point  mean_us  p99_us  max_us')
    for row in deltas:
        print('{load:>4}  {slot_us:>7}  {class}  {point}  {mean_us:>7}'
              '  {p99_us:>6}  {max_us:>6}'.format(**row))
    return 0


def main(argv=None):
    parser = argparse.ArgumentParser(
        prog='meshpon-sim', description=__doc__,
        formatter_class=argparse.RawDescriptionHelpFormatter)
    parser.add_argument('-v', '--verbose', action='count', default=0,
                        help='increase verbosity of log messages')
    subparsers = parser.add_subparsers(dest='command', metavar='command')
    subparsers.required = True
    _add_run_parser(subparsers)
    compare_parser = subparsers.add_parser(
        'compare', help='latency deltas between two summary files')
    compare_parser.add_argument('baseline', help='baseline summary.csv')
    compare_parser.add_argument('candidate', help='candidate summary.csv')
    compare_parser.add_argument('--baseline-class', metavar='class',
                                help='use this class of the baseline')
    compare_parser.add_argument('--candidate-class', metavar='class',
                                help='use this class of the candidate')
    compare_parser.add_argument('-o', '--output', metavar='path',
                                help='deltas CSV file')
    validate_parser = subparsers.add_parser(
        'validate', help='check a scenario file')
    validate_parser.add_argument('config', help='scenario TOML file')
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.ERROR - (args.verbose * 10))
    return {
        'run': do_run,
        'compare': do_compare,
        'validate': do_validate,
        }[args.command](args)


if __name__ == '__main__':
    sys.exit(main())
