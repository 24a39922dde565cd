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

"""Latency samples, run statistics and the end of run audit.

Latency is measured at two points:

==========  ==============================================
``RU_DU``   packet creation to arrival at its slice's OLT
``APP``     packet creation to delivery at the application
==========  ==============================================

"""

__all__ = ['RU_DU', 'APP', 'POINTS', 'LatencySample', 'CellStats',
           'RunSummary', 'IncompletePacket', 'EmptyWindow', 'record',
           'summarize', 'quantile', 'MetricsSink', 'PacketLedger']
__docformat__ = 'restructuredtext en'

import logging
import math

import numpy

from meshpon.core.base import Component
from meshpon.core.units import to_seconds

logger = logging.getLogger(__name__)

RU_DU = 'RU_DU'
APP = 'APP'
POINTS = (RU_DU, APP)


class IncompletePacket(ValueError):
    pass


class EmptyWindow(RuntimeError):
    pass


class LatencySample(object):
    """One latency measurement, in seconds."""
    __slots__ = ('packet_id', 'traffic_class', 'point', 'value', 't_created')

    def __init__(self, packet_id, traffic_class, point, value, t_created):
        if value < 0:
            raise ValueError('negative latency {} for packet {}'.format(
                value, packet_id))
        self.packet_id = packet_id
        self.traffic_class = traffic_class
        self.point = point
        self.value = value
        self.t_created = t_created

    def __repr__(self):
        return 'LatencySample({}, {}, {}, {!r})'.format(
            self.packet_id, self.traffic_class, self.point, self.value)


def record(p):
    """Latency samples of a delivered packet.

    :param AppPacket p: The packet.

    :return: ``(ru_du, app)`` samples.

    :raises IncompletePacket: if a timestamp needed is missing.

    """
    for name in ('t_created', 't_at_du', 't_at_app'):
        if getattr(p, name) is None:
            raise IncompletePacket('packet {} has no {}'.format(p.id, name))
    created = to_seconds(p.t_created)
    return (
        LatencySample(p.id, p.traffic_class, RU_DU,
                      to_seconds(p.t_at_du - p.t_created), created),
        LatencySample(p.id, p.traffic_class, APP,
                      to_seconds(p.t_at_app - p.t_created), created),
        )


def quantile(values, q):
    """Nearest rank quantile of sorted ``values``."""
    idx = max(0, int(math.ceil(q * len(values))) - 1)
    return float(values[idx])


class CellStats(object):
    """Statistics of one (class, point) cell, in seconds."""
    def __init__(self, values):
        values = numpy.sort(numpy.asarray(values, dtype=numpy.float64))
        self.count = len(values)
        self.mean = float(values.mean())
        self.p50 = quantile(values, 0.50)
        self.p95 = quantile(values, 0.95)
        self.p99 = quantile(values, 0.99)
        self.max = float(values[-1])

    def __repr__(self):
        return 'CellStats(n={}, mean={:.6g}, max={:.6g})'.format(
            self.count, self.mean, self.max)


class RunSummary(object):
    """Latency statistics of one run.

    :ivar dict cells: ``{(class, point): CellStats}``.

    """
    def __init__(self, cells, warmup, load=None, slot_duration=None,
                 seed=None):
        self.cells = cells
        self.warmup = warmup
        self.load = load
        self.slot_duration = slot_duration
        self.seed = seed

    def __getitem__(self, key):
        return self.cells[key]

    def __contains__(self, key):
        return key in self.cells


def summarize(samples, warmup, **kwds):
    """Summarise the samples created at or after ``warmup`` seconds.

    :raises EmptyWindow: if no sample is left.

    :rtype: RunSummary

    """
    groups = {}
    for sample in samples:
        if sample.t_created < warmup:
            continue
        groups.setdefault(
            (sample.traffic_class, sample.point), []).append(sample.value)
    if not groups:
        raise EmptyWindow('no samples after {} s warm up'.format(warmup))
    cells = dict((key, CellStats(values))
                 for key, values in sorted(groups.items()))
    return RunSummary(cells, warmup, **kwds)


class MetricsSink(Component):
    """Collect delivered packets.

    :ivar list samples: :py:class:`LatencySample` objects, two per
        packet.

    :ivar list packets: Delivered packets, if ``keep_packets`` is set.

    """
    inputs = ['delivered']  #:
    outputs = []            #:

    def __init__(self, sim, ledger=None, keep_packets=False, name=None,
                 **kwds):
        self.ledger = ledger
        self.keep_packets = keep_packets
        self.samples = []
        self.packets = []
        self.out_of_order = 0
        super(MetricsSink, self).__init__(sim, name=name, **kwds)

    def delivered(self, packet):
        if not packet.is_monotonic():
            self.out_of_order += 1
            self.logger.error('timestamps out of order: %s',
                              packet.timestamps())
        self.samples.extend(record(packet))
        if self.keep_packets:
            self.packets.append(packet)
        if self.ledger is not None:
            self.ledger.count('delivered', 1)


class PacketLedger(object):
    """Stage counters for the end of run conservation audit.

    Stages, in pipeline order, are ``created``, ``admitted`` (sent on
    the air), ``at_onu``, ``departed_onu``, ``at_du`` and
    ``delivered``.

    """
    stages = ('created', 'admitted', 'at_onu', 'departed_onu', 'at_du',
              'delivered')

    def __init__(self):
        self.counts = dict((stage, 0) for stage in self.stages)

    def count(self, stage, n):
        self.counts[stage] += n

    def audit(self, radio_units=(), onus=()):
        """Check the counters against the components' own state.

        :return: A list of problems, empty if all is well.

        """
        result = []
        counts = self.counts
        for before, after in zip(self.stages, self.stages[1:]):
            if counts[after] > counts[before]:
                result.append('{} {} > {} {}'.format(
                    after, counts[after], before, counts[before]))
        backlog = sum(ru.backlog_packets() for ru in radio_units)
        if counts['created'] - counts['admitted'] != backlog:
            result.append('{} packets not sent but {} in RU backlogs'.format(
                counts['created'] - counts['admitted'], backlog))
        queued = sum(onu.queue.packets_queued() for onu in onus)
        if counts['at_onu'] - counts['departed_onu'] != queued:
            result.append('{} packets not departed but {} in ONU queues'.format(
                counts['at_onu'] - counts['departed_onu'], queued))
        for onu in onus:
            queue = onu.queue
            if (queue.bytes_in != queue.bytes_out + queue.occupancy_bytes
                    or queue.occupancy_bytes != queue.remaining()):
                result.append('{}: {} B in, {} B out, {} B queued'.format(
                    onu.name, queue.bytes_in, queue.bytes_out,
                    queue.occupancy_bytes))
        return result

    def in_flight(self, radio_units=(), onus=()):
        """Packets created but neither delivered nor queued."""
        backlog = sum(ru.backlog_packets() for ru in radio_units)
        queued = sum(onu.queue.packets_queued() for onu in onus)
        return (self.counts['created'] - self.counts['delivered']
                - backlog - queued)
