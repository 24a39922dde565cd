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

"""Deterministic discrete event kernel.

Every simulation run owns one :py:class:`Simulator`. Events are held on
a :py:mod:`heapq` ordered by ``(fire_time, priority, seq)``, so two
runs with the same configuration and seed fire exactly the same events
in exactly the same order.

Priorities at equal fire time:

=================  ====  ==========================================
Name               Prio  Used for
=================  ====  ==========================================
``LINK_ARRIVAL``   0     data or reports arriving over a link
``MAC``            1     DBA frame builds, grant transmissions
``MAC_FOLLOW``     2     frame builds that plan around another slice
``TRAFFIC``        3     radio slot ticks, traffic generation
``METRICS``        4     sampling and end of run bookkeeping
=================  ====  ==========================================

A packet arriving exactly on a frame boundary is therefore seen by that
boundary's DBA pass.

Random numbers come from :py:class:`RngStream` objects. Each stream is
identified by a label, e.g. ``'RU-3/urllc/arrival'``, and is independent
of every other stream.

"""

__all__ = ['LINK_ARRIVAL', 'MAC', 'MAC_FOLLOW', 'TRAFFIC', 'METRICS',
           'SimEvent', 'Simulator', 'RngStream', 'exp_draw', 'exp_draw_ps',
           'SchedulingInPast', 'InvalidRate']
__docformat__ = 'restructuredtext en'

import hashlib
import heapq
import logging
import zlib

import numpy

from meshpon.core.units import PS_PER_SECOND, to_ps, to_seconds

logger = logging.getLogger(__name__)

LINK_ARRIVAL = 0
MAC = 1
MAC_FOLLOW = 2
TRAFFIC = 3
METRICS = 4


class SchedulingInPast(ValueError):
    pass


class InvalidRate(ValueError):
    pass


class SimEvent(object):
    """One unit of scheduled work.

    :param callable action: Called with ``*args`` when the event fires.

    :param int priority: Lower values fire first at equal time.

    :param str label: Name recorded in the event trace. Defaults to the
        action's qualified name.

    """
    __slots__ = ('fire_time', 'priority', 'seq', 'action', 'args', 'label',
                 'cancelled')

    def __init__(self, action, *args, priority=TRAFFIC, label=None):
        self.fire_time = None
        self.priority = priority
        self.seq = None
        self.action = action
        self.args = args
        self.label = label or getattr(action, '__qualname__', repr(action))
        self.cancelled = False

    def __repr__(self):
        return 'SimEvent({}, t={}, prio={}, seq={})'.format(
            self.label, self.fire_time, self.priority, self.seq)


class Simulator(object):
    """Single threaded event loop with a picosecond clock.

    :keyword bool digest: Keep a SHA-256 digest of the fired event
        trace, for replay determinism checks.

    """
    def __init__(self, digest=False):
        self._queue = []
        self._seq = 0
        self._now = 0
        self._fired = 0
        self._pending = {}
        self._digest = hashlib.sha256() if digest else None

    def now(self):
        """Current simulated time in seconds."""
        return to_seconds(self._now)

    @property
    def now_ps(self):
        return self._now

    @property
    def fired(self):
        return self._fired

    def schedule(self, t, ev):
        """Schedule ``ev`` at ``t`` seconds.

        :return: An event id for use with :py:meth:`cancel`.

        """
        return self.schedule_ps(to_ps(t), ev)

    def schedule_ps(self, t, ev):
        """Schedule ``ev`` at ``t`` picoseconds."""
        if t < self._now:
            raise SchedulingInPast(
                'cannot schedule {} at {} ps, now is {} ps'.format(
                    ev.label, t, self._now))
        ev.fire_time = t
        ev.seq = self._seq
        self._seq += 1
        heapq.heappush(self._queue, (t, ev.priority, ev.seq, ev))
        self._pending[ev.seq] = ev
        return ev.seq

    def call_at(self, t, priority, action, *args, label=None):
        """Convenience wrapper round :py:meth:`schedule_ps`."""
        return self.schedule_ps(
            t, SimEvent(action, *args, priority=priority, label=label))

    def call_later(self, delay, priority, action, *args, label=None):
        return self.call_at(self._now + delay, priority, action, *args,
                            label=label)

    def cancel(self, event_id):
        """Cancel a pending event. Returns ``False`` if it has already
        fired or been cancelled.

        """
        ev = self._pending.pop(event_id, None)
        if ev is None:
            return False
        ev.cancelled = True
        return True

    def pending(self):
        return len(self._pending)

    def run_until(self, t_end):
        """Run all events with fire time up to and including ``t_end``
        seconds, then advance the clock to ``t_end``.

        :return: Number of events fired.

        """
        return self.run_until_ps(to_ps(t_end))

    def run_until_ps(self, t_end):
        count = 0
        queue = self._queue
        while queue and queue[0][0] <= t_end:
            t, priority, seq, ev = heapq.heappop(queue)
            if ev.cancelled:
                continue
            del self._pending[seq]
            self._now = t
            if self._digest is not None:
                self._digest.update('{},{},{},{}\n'.format(
                    t, priority, seq, ev.label).encode('utf-8'))
            try:
                ev.action(*ev.args)
            except Exception as ex:
                logger.exception(ex)
                raise
            count += 1
        if t_end > self._now:
            self._now = t_end
        self._fired += count
        return count

    def trace_digest(self):
        """Hex digest of the fired event trace, or ``None``."""
        if self._digest is None:
            return None
        return self._digest.hexdigest()


class RngStream(object):
    """Independent, reproducible random number stream.

    The stream is a :py:class:`numpy.random.Generator` using PCG64,
    seeded from the run seed and a CRC-32 of ``stream_id``. The same
    ``(seed, stream_id)`` gives the same sequence on every platform.

    :param int seed: 64-bit run seed.

    :param str stream_id: Label of the traffic source.

    """
    def __init__(self, seed, stream_id):
        self.seed = int(seed)
        self.stream_id = str(stream_id)
        seq = numpy.random.SeedSequence(
            self.seed, spawn_key=(zlib.crc32(self.stream_id.encode('utf-8')),))
        self.generator = numpy.random.Generator(numpy.random.PCG64(seq))

    def __repr__(self):
        return 'RngStream({}, {!r})'.format(self.seed, self.stream_id)

    def exponential(self, scale):
        return float(self.generator.exponential(scale))

    def integers(self, low, high):
        """Uniform integer in ``[low, high]`` inclusive."""
        return int(self.generator.integers(low, high, endpoint=True))

    def uniform(self, low, high):
        return float(self.generator.uniform(low, high))


def exp_draw(stream, rate):
    """Exponentially distributed inter-arrival time.

    :param RngStream stream: Source of randomness.

    :param float rate: Mean events per second.

    :return: Seconds until the next event.

    """
    if not rate > 0:
        raise InvalidRate('rate must be positive, got {!r}'.format(rate))
    return stream.exponential(1.0 / rate)


def exp_draw_ps(stream, rate):
    return int(round(exp_draw(stream, rate) * PS_PER_SECOND))
