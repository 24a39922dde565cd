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

"""Static charts of a sweep's ``summary.csv`` rows.

``fig2.svg``
    Mean and maximum application latency per load, one pair of bars
    per traffic class.

``fig3.svg``
    Mean URLLC application latency against load, one line per slot
    duration.

"""

__all__ = ['latency_bars', 'latency_lines', 'write_charts']
__docformat__ = 'restructuredtext en'

import logging
import os

import numpy

# batch tool, never open a window
import matplotlib as mpl
mpl.use('Agg')
import matplotlib.pyplot as plt

from meshpon.components.io.metrics import APP
from meshpon.components.ran.radio import URLLC

logger = logging.getLogger(__name__)


def _mean_over_seeds(rows, field):
    groups = {}
    for row in rows:
        key = (float(row['load']), int(row['slot_us']), row['class'])
        groups.setdefault(key, []).append(float(row[field]))
    return dict((key, float(numpy.mean(values)))
                for key, values in groups.items())


def latency_bars(rows, path, slot_us=None):
    """Bar chart of mean and max APP latency per load and class."""
    rows = [r for r in rows if r['point'] == APP]
    if slot_us is None:
        slot_us = max(int(r['slot_us']) for r in rows)
    rows = [r for r in rows if int(r['slot_us']) == slot_us]
    means = _mean_over_seeds(rows, 'mean_us')
    maxes = _mean_over_seeds(rows, 'max_us')
    loads = sorted(set(key[0] for key in means))
    classes = sorted(set(key[2] for key in means))
    x = numpy.arange(len(loads))
    width = 0.8 / (2 * len(classes))
    fig, ax = plt.subplots(figsize=(7, 4))
    for i, traffic_class in enumerate(classes):
        for j, (values, kind) in enumerate(((means, 'mean'),
                                            (maxes, 'max'))):
            y = [values.get((load, slot_us, traffic_class), numpy.nan) / 1000
                 for load in loads]
            offset = (2 * i + j - len(classes) + 0.5) * width
            ax.bar(x + offset, y, width,
                   label='{} {}'.format(traffic_class, kind))
    ax.set_xticks(x)
    ax.set_xticklabels(['{:g}%'.format(load * 100) for load in loads])
    ax.set_xlabel('PON load')
    ax.set_ylabel('application latency (ms)')
    ax.set_title('slot {} µs'.format(slot_us))
    ax.grid(True, axis='y')
    ax.legend()
    fig.tight_layout()
    fig.savefig(path)
    plt.close(fig)


def latency_lines(rows, path, traffic_class=URLLC):
    """Line chart of mean APP latency against load per slot duration."""
    rows = [r for r in rows if r['point'] == APP
            and r['class'] == traffic_class]
    means = _mean_over_seeds(rows, 'mean_us')
    fig, ax = plt.subplots(figsize=(7, 4))
    for slot_us in sorted(set(key[1] for key in means)):
        loads = sorted(key[0] for key in means if key[1] == slot_us)
        ax.plot([load * 100 for load in loads],
                [means[(load, slot_us, traffic_class)] / 1000
                 for load in loads],
                'o-', label='slot {} µs'.format(slot_us))
    ax.set_xlabel('PON load (%)')
    ax.set_ylabel('mean {} application latency (ms)'.format(traffic_class))
    ax.grid(True)
    ax.legend()
    fig.tight_layout()
    fig.savefig(path)
    plt.close(fig)


def write_charts(rows, directory):
    """Write ``fig2.svg`` and ``fig3.svg`` into ``directory``.

    :return: Paths of the files written.

    """
    if not any(r['point'] == APP for r in rows):
        logger.warning('no application latency rows, no charts written')
        return []
    result = [os.path.join(directory, 'fig2.svg'),
              os.path.join(directory, 'fig3.svg')]
    latency_bars(rows, result[0])
    latency_lines(rows, result[1])
    return result
