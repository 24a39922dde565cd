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

"""Result files.

``summary.csv`` has one row per run, class and measurement point::

    load,slot_us,class,point,count,mean_us,p50_us,p95_us,p99_us,max_us,seed

Latencies are whole microseconds. Rows are sorted, so the same runs
always give the same file.

"""

__all__ = ['SUMMARY_FIELDS', 'DELTA_FIELDS', 'RUN_FIELDS', 'TRACE_FIELDS',
           'GridMismatch', 'summary_rows', 'write_summary', 'read_summary',
           'compare', 'write_deltas', 'write_runs', 'write_trace']
__docformat__ = 'restructuredtext en'

import csv
import logging

import numpy

from meshpon.core.units import PS_PER_US

logger = logging.getLogger(__name__)

SUMMARY_FIELDS = ('load', 'slot_us', 'class', 'point', 'count', 'mean_us',
                  'p50_us', 'p95_us', 'p99_us', 'max_us', 'seed')
STAT_FIELDS = ('mean_us', 'p50_us', 'p95_us', 'p99_us', 'max_us')
DELTA_FIELDS = ('load', 'slot_us', 'class', 'point') + STAT_FIELDS
RUN_FIELDS = ('load', 'slot_us', 'seed', 'events', 'created', 'delivered',
              'in_flight', 'frames_exceeded', 'late_cti', 'digest')
TRACE_FIELDS = ('id', 'ru', 'class', 'size', 't_created_ps',
                't_radio_tx_start_ps', 't_at_onu_ps', 't_at_du_ps',
                't_at_app_ps')


class GridMismatch(ValueError):
    pass


def _us(seconds):
    return int(round(seconds * 1e6))


def _format_load(load):
    return '{:g}'.format(load)


def summary_rows(summary):
    """Rows of ``summary.csv`` for one :py:class:`~.metrics.RunSummary`."""
    rows = []
    for (traffic_class, point), cell in summary.cells.items():
        rows.append({
            'load': _format_load(summary.load),
            'slot_us': summary.slot_duration // PS_PER_US,
            'class': traffic_class,
            'point': point,
            'count': cell.count,
            'mean_us': _us(cell.mean),
            'p50_us': _us(cell.p50),
            'p95_us': _us(cell.p95),
            'p99_us': _us(cell.p99),
            'max_us': _us(cell.max),
            'seed': summary.seed,
            })
    return rows


def _sort_key(row):
    return (float(row['load']), int(row['slot_us']), row['class'],
            row['point'], int(row['seed']))


def write_summary(path, rows):
    rows = sorted(rows, key=_sort_key)
    with open(path, 'w', newline='') as f:
        writer = csv.DictWriter(f, fieldnames=SUMMARY_FIELDS,
                                lineterminator='\n')
        writer.writeheader()
        writer.writerows(rows)


def read_summary(path):
    """Read a ``summary.csv`` file.

    :raises ValueError: if the header is wrong.

    """
    with open(path, newline='') as f:
        reader = csv.DictReader(f)
        if tuple(reader.fieldnames or ()) != SUMMARY_FIELDS:
            raise ValueError('{}: not a summary file'.format(path))
        rows = []
        for row in reader:
            row['load'] = float(row['load'])
            for key in ('slot_us', 'count', 'seed') + STAT_FIELDS:
                row[key] = int(row[key])
            rows.append(row)
    return rows


def _averages(rows, traffic_class=None):
    groups = {}
    for row in rows:
        if traffic_class is not None and row['class'] != traffic_class:
            continue
        key = (float(row['load']), int(row['slot_us']), row['point'])
        if traffic_class is None:
            key += (row['class'],)
        groups.setdefault(key, []).append(row)
    return dict(
        (key, dict((field, float(numpy.mean([r[field] for r in group])))
                   for field in STAT_FIELDS))
        for key, group in groups.items())


def compare(baseline, candidate, baseline_class=None, candidate_class=None):
    """Latency deltas, candidate minus baseline, averaged over seeds.

    With ``baseline_class`` and ``candidate_class`` two classes are
    compared, usually from the same run. Otherwise cells of the same
    class are compared.

    :param list baseline: Rows from :py:func:`read_summary`.

    :param list candidate: Rows from :py:func:`read_summary`.

    :raises GridMismatch: if the two sets of cells differ.

    :return: Rows with :py:data:`DELTA_FIELDS`.

    """
    base = _averages(baseline, baseline_class)
    cand = _averages(candidate, candidate_class)
    if not base or set(base) != set(cand):
        missing = sorted(set(base) ^ set(cand))
        raise GridMismatch('load/slot grids differ: {}'.format(
            ', '.join('/'.join(str(x) for x in key) for key in missing)
            or 'no common cells'))
    label = None
    if baseline_class is not None or candidate_class is not None:
        label = '{}-{}'.format(candidate_class, baseline_class)
    result = []
    for key in sorted(base):
        row = {
            'load': _format_load(key[0]),
            'slot_us': key[1],
            'point': key[2],
            'class': label or key[3],
            }
        for field in STAT_FIELDS:
            row[field] = '{:.1f}'.format(cand[key][field] - base[key][field])
        result.append(row)
    return result


def write_deltas(path, rows):
    with open(path, 'w', newline='') as f:
        writer = csv.DictWriter(f, fieldnames=DELTA_FIELDS,
                                lineterminator='\n')
        writer.writeheader()
        writer.writerows(rows)


def write_runs(path, runs):
    """Write ``runs.csv``, one row of run bookkeeping per run."""
    rows = sorted(runs, key=lambda r: (float(r['load']), int(r['slot_us']),
                                       int(r['seed'])))
    with open(path, 'w', newline='') as f:
        writer = csv.DictWriter(f, fieldnames=RUN_FIELDS,
                                lineterminator='\n')
        writer.writeheader()
        for row in rows:
            writer.writerow(dict((key, row[key]) for key in RUN_FIELDS))


def write_trace(path, packets):
    """Write per packet timestamps, picoseconds."""
    with open(path, 'w', newline='') as f:
        writer = csv.writer(f, lineterminator='\n')
        writer.writerow(TRACE_FIELDS)
        for p in sorted(packets, key=lambda p: p.id):
            writer.writerow((p.id, p.ru_id, p.traffic_class, p.size_bytes,
                             p.t_created, p.t_radio_tx_start, p.t_at_onu,
                             p.t_at_du, p.t_at_app))
