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

"""Load and slot duration sweeps.

A sweep runs every ``(load, slot, seed)`` point of a scenario and
writes the results into a new directory
``<output_dir>/<scenario name>/<timestamp>/``, with ``-2``, ``-3`` and
so on appended if that name is taken:

=====================  =================================================
``summary.csv``        latency statistics, see :py:mod:`.results`
``runs.csv``           event counts, audit figures and digest per run
``scenario.toml``      every scenario value used, defaults included
``fig2.svg``           latency bars
``fig3.svg``           URLLC latency against load
``traces/``            per packet timestamps, if ``experiment.trace`` is set
=====================  =================================================

Runs are independent, so they can be spread over worker processes.
The results do not depend on the number of workers.

"""

__all__ = ['ScenarioInvalid', 'sweep', 'results_directory', 'run_scenario']
__docformat__ = 'restructuredtext en'

from concurrent.futures import ProcessPoolExecutor
from datetime import datetime
import itertools
import logging
import os

from meshpon.components.io.charts import write_charts
from meshpon.components.io.results import write_runs, write_summary
from meshpon.core.scenario import run_once

logger = logging.getLogger(__name__)


class ScenarioInvalid(ValueError):
    """The scenario has configuration problems.

    :ivar list violations: The problems found.

    """
    def __init__(self, violations):
        super(ScenarioInvalid, self).__init__(
            '{} configuration problems'.format(len(violations)))
        self.violations = violations


def sweep(scenario, jobs=1, trace_dir=None):
    """Run every grid point of a scenario.

    :param Scenario scenario: The scenario.

    :param int jobs: Worker processes, 1 to run in this process.

    :param str trace_dir: Directory for packet traces, or ``None``.

    :return: ``(rows, runs)``, the ``summary.csv`` and ``runs.csv``
        rows.

    """
    data = scenario.to_dict()
    points = [(load, slot, seed)
              for slot in scenario.slots()
              for load in scenario.loads()
              for seed in scenario.seeds()]
    logger.info('%s: %d runs on %d workers', scenario.name, len(points), jobs)
    args = ([data] * len(points), [p[0] for p in points],
            [p[1] for p in points], [p[2] for p in points],
            [trace_dir] * len(points))
    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            results = list(pool.map(run_once, *args))
    else:
        results = list(map(run_once, *args))
    rows = []
    runs = []
    for result in results:
        rows += result['rows']
        runs.append(result['run'])
    return rows, runs


def results_directory(parent, stamp=None):
    """Create a new, empty results directory under ``parent``.

    :param str stamp: Directory name, default the current time to the
        second.

    :return: The directory's path.

    """
    stamp = stamp or datetime.now().strftime('%Y%m%d-%H%M%S')
    os.makedirs(parent, exist_ok=True)
    for n in itertools.count(1):
        directory = os.path.join(parent, stamp)
        if n > 1:
            directory += '-{}'.format(n)
        try:
            os.mkdir(directory)
        except FileExistsError:
            continue
        return directory


def run_scenario(scenario, output_dir=None, jobs=None):
    """Validate and sweep a scenario, then write its results.

    :param Scenario scenario: The scenario, overrides already applied.

    :param str output_dir: Parent of the results directory, default
        ``experiment.output_dir``.

    :param int jobs: Worker processes, default ``experiment.jobs``.

    :raises ScenarioInvalid: if the scenario has problems. Nothing is
        run or written.

    :return: The results directory.

    """
    violations = scenario.violations()
    if violations:
        raise ScenarioInvalid(violations)
    config = scenario.config
    output_dir = output_dir or str(config['experiment.output_dir'])
    jobs = jobs or int(config['experiment.jobs'])
    directory = results_directory(os.path.join(output_dir, scenario.name))
    trace_dir = None
    if config['experiment.trace']:
        trace_dir = os.path.join(directory, 'traces')
        os.makedirs(trace_dir, exist_ok=True)
    with open(os.path.join(directory, 'scenario.toml'), 'w') as f:
        f.write(scenario.to_toml())
    rows, runs = sweep(scenario, jobs=jobs, trace_dir=trace_dir)
    write_summary(os.path.join(directory, 'summary.csv'), rows)
    write_runs(os.path.join(directory, 'runs.csv'), runs)
    exceeded = sum(int(run['frames_exceeded']) for run in runs)
    if exceeded:
        logger.warning('%d upstream frames over capacity', exceeded)
    write_charts(rows, directory)
    logger.info('results in %s', directory)
    return directory
