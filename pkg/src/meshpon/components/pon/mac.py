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

"""PON MAC data types: CTI reports, CGS advertisements, grants, grant
maps and the ONU upstream queue.

All times are integer picoseconds, in the ranging-equalised ONU
timebase, except where a function says otherwise.

"""

__all__ = ['serialize_time', 'CTIReport', 'CGSAdvertisement', 'Grant',
           'GrantMap', 'OnuQueue', 'onu_transmit', 'STANDING', 'CTI', 'SR',
           'POLL']
__docformat__ = 'restructuredtext en'

from collections import deque

from meshpon.components.ran.radio import NORMAL, URLLC
from meshpon.core.kernel import InvalidRate
from meshpon.core.units import bytes_in_ps, ceil_div, serialize_ps

STANDING = 'standing'
CTI = 'cti'
SR = 'sr'
POLL = 'poll'


def serialize_time(nbytes, rate):
    """Time to send ``nbytes`` at ``rate`` bits/s.

    :rtype: float

    :return: Seconds.

    :raises InvalidRate: if ``rate`` is not positive.

    """
    if not rate > 0:
        raise InvalidRate('rate must be positive, got {!r}'.format(rate))
    return nbytes * 8.0 / rate


class CTIReport(object):
    """Schedule prediction sent by a DU/CU to its OLT.

    :param str onu_id: ONU that will receive the data.

    :param int slot_index: Radio slot the data was scheduled in.

    :param int expected_bytes: Section bytes expected at the ONU.

    :param int expected_arrival: Predicted arrival at the ONU.

    :param int emitted: Emission time of the report.

    """
    __slots__ = ('onu_id', 'slot_index', 'expected_bytes',
                 'expected_arrival', 'emitted')

    def __init__(self, onu_id, slot_index, expected_bytes, expected_arrival,
                 emitted=None):
        if emitted is not None and expected_arrival < emitted:
            raise ValueError('CTI report for {} describes the past'.format(
                onu_id))
        self.onu_id = onu_id
        self.slot_index = slot_index
        self.expected_bytes = expected_bytes
        self.expected_arrival = expected_arrival
        self.emitted = emitted

    def __repr__(self):
        return 'CTIReport({!r}, slot {}, {} B at {} ps)'.format(
            self.onu_id, self.slot_index, self.expected_bytes,
            self.expected_arrival)


class CGSAdvertisement(object):
    """Semi-static configured grant of one ONU, as seen by the OLT.

    Sections produced by the CGS occasions reach the ONU at
    ``active_from + slot_phase + k * period`` for k = 0, 1, ...

    :param str onu_id: The ONU.

    :param int bytes_per_slot: Section bytes of a full CGS occasion.

    :param int slot_phase: Arrival phase within the period.

    :param int period: Occasion period.

    :param int active_from: Start of the first period.

    """
    def __init__(self, onu_id, bytes_per_slot, slot_phase, period,
                 active_from=0):
        self.onu_id = onu_id
        self.bytes_per_slot = bytes_per_slot
        self.slot_phase = slot_phase
        self.period = period
        self.active_from = active_from

    def __repr__(self):
        return 'CGSAdvertisement({!r}, {} B, phase {} ps)'.format(
            self.onu_id, self.bytes_per_slot, self.slot_phase)

    def arrivals(self, start, end):
        """Expected ONU arrival instants in ``[start, end)``."""
        first = self.active_from + self.slot_phase
        k = max(0, ceil_div(start - first, self.period))
        t = first + k * self.period
        while t < end:
            yield t
            t += self.period


class Grant(object):
    """One upstream burst allocation.

    ``duration`` covers ``payload_bytes`` plus the burst overhead.

    """
    __slots__ = ('slice_id', 'onu_id', 'start', 'duration', 'frame_index',
                 'payload_bytes', 'kind', 'expected_arrival', 'used')

    def __init__(self, slice_id, onu_id, start, duration, frame_index,
                 payload_bytes=0, kind=SR, expected_arrival=None):
        self.slice_id = slice_id
        self.onu_id = onu_id
        self.start = start
        self.duration = duration
        self.frame_index = frame_index
        self.payload_bytes = payload_bytes
        self.kind = kind
        self.expected_arrival = expected_arrival
        self.used = False

    def __repr__(self):
        return 'Grant({!r}, {}, {}+{} ps, {} B)'.format(
            self.onu_id, self.kind, self.start, self.duration,
            self.payload_bytes)

    @property
    def end(self):
        return self.start + self.duration


class GrantMap(object):
    """The grants of one slice for one upstream frame.

    :ivar bool capacity_exceeded: More time was requested than the
        frame holds.

    """
    def __init__(self, slice_id, frame_index, frame_period):
        self.slice_id = slice_id
        self.frame_index = frame_index
        self.frame_period = frame_period
        self.grants = []
        self.capacity_exceeded = False

    def __repr__(self):
        return 'GrantMap({!r}, frame {}, {} grants)'.format(
            self.slice_id, self.frame_index, len(self.grants))

    def __iter__(self):
        return iter(self.grants)

    def __len__(self):
        return len(self.grants)

    @property
    def frame_start(self):
        return self.frame_index * self.frame_period

    @property
    def frame_end(self):
        return self.frame_start + self.frame_period

    def add(self, grant):
        self.grants.append(grant)
        self.grants.sort(key=lambda g: (g.start, g.onu_id))

    def for_onu(self, onu_id):
        return [g for g in self.grants if g.onu_id == onu_id]

    def total_time(self):
        return sum(g.duration for g in self.grants)

    def violations(self, guard_time):
        """Check the frame's grants against the framing rules.

        :return: A list of messages, empty if all is well.

        """
        result = []
        if self.total_time() > self.frame_period:
            result.append('{} frame {}: {} ps granted in a {} ps frame'.format(
                self.slice_id, self.frame_index, self.total_time(),
                self.frame_period))
        last = None
        for grant in self.grants:
            if grant.start < self.frame_start or grant.end > self.frame_end:
                result.append('{} frame {}: {!r} outside the frame'.format(
                    self.slice_id, self.frame_index, grant))
            if grant.slice_id != self.slice_id:
                result.append('{} frame {}: {!r} from slice {}'.format(
                    self.slice_id, self.frame_index, grant, grant.slice_id))
            if last is not None and grant.start < last.end + guard_time:
                result.append('{} frame {}: {!r} overlaps {!r}'.format(
                    self.slice_id, self.frame_index, grant, last))
            last = grant
        return result


class OnuQueue(object):
    """Upstream queue of one ONU.

    Entries are ``[section, remaining_bytes]``. URLLC sections are
    always sent before normal ones, each class in FIFO order.

    """
    def __init__(self, onu_id):
        self.onu_id = onu_id
        self.queues = {URLLC: deque(), NORMAL: deque()}
        self.occupancy_bytes = 0
        self.bytes_in = 0
        self.bytes_out = 0

    def __len__(self):
        return sum(len(q) for q in self.queues.values())

    def enqueue(self, section):
        key = URLLC if section.traffic_class == URLLC else NORMAL
        self.queues[key].append([section, section.size_bytes])
        self.occupancy_bytes += section.size_bytes
        self.bytes_in += section.size_bytes

    def class_bytes(self, traffic_class):
        return sum(entry[1] for entry in self.queues[traffic_class])

    def packets_queued(self):
        return sum(len(entry[0].packets)
                   for q in self.queues.values() for entry in q)

    def remaining(self):
        return sum(entry[1] for q in self.queues.values() for entry in q)

    def transmit(self, grant, rate, overhead):
        """Send as much as the grant allows.

        :return: ``[(section, departure)]`` for each section whose last
            byte was sent.

        """
        budget = bytes_in_ps(grant.duration, rate) - overhead
        sent = 0
        result = []
        for key in (URLLC, NORMAL):
            queue = self.queues[key]
            while queue and budget > 0:
                entry = queue[0]
                chunk = min(budget, entry[1])
                entry[1] -= chunk
                budget -= chunk
                sent += chunk
                if entry[1] == 0:
                    queue.popleft()
                    result.append((entry[0], grant.start + serialize_ps(
                        overhead + sent, rate)))
        self.occupancy_bytes -= sent
        self.bytes_out += sent
        return result


def onu_transmit(onu, g, rate, overhead=0):
    """Use grant ``g`` on queue ``onu``.

    Partial sections stay at the head of the queue and continue in a
    later grant. A packet departs with the last byte of its section.

    :param OnuQueue onu: The queue.

    :param Grant g: A grant for this ONU.

    :param int rate: Upstream rate, bits/s.

    :param int overhead: Burst overhead bytes.

    :return: ``[(packet, departure)]``.

    """
    if g.onu_id != onu.onu_id:
        raise ValueError('grant for {} used by {}'.format(
            g.onu_id, onu.onu_id))
    g.used = True
    result = []
    for section, departure in onu.transmit(g, rate, overhead):
        for packet in section.packets:
            result.append((packet, departure))
    return result
