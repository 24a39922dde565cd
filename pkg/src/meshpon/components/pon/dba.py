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

"""Dynamic bandwidth allocation.

Three policies build the upstream grant map of a frame:

============  =========================================================
``sr``        Grants sized to the ONUs' status reports, one frame
              after the data was reported.
``codba``     Cooperative DBA. Grants placed at the arrival times the
              DU/CU predicts in its CTI reports.
``codba_cgs`` Cooperative DBA plus a standing grant for every CGS
              occasion, sized to the full CGS allocation (or to the
              occupancy estimate if enabled).
============  =========================================================

The cooperative policies finish with the same status report pass as
``sr``, to serve whatever the CTI reports did not announce.

"""

__all__ = ['DbaEngine', 'POLICIES']
__docformat__ = 'restructuredtext en'

import bisect
import itertools
import logging

from meshpon.components.pon.mac import (
    CTI, POLL, SR, STANDING, Grant, GrantMap)
from meshpon.core.units import bytes_in_ps, serialize_ps

logger = logging.getLogger(__name__)

POLICIES = ('sr', 'codba', 'codba_cgs')


class _Request(object):
    __slots__ = ('onu_id', 'payload', 'earliest', 'kind', 'expected_arrival',
                 'carried')

    def __init__(self, onu_id, payload, earliest, kind, expected_arrival):
        self.onu_id = onu_id
        self.payload = payload
        self.earliest = earliest
        self.kind = kind
        self.expected_arrival = expected_arrival
        self.carried = False


class _Packer(object):
    """Busy intervals of one frame.

    A burst may start at ``cand`` if the previous burst ended at least
    ``guard`` earlier and the next one starts at least ``guard`` after
    it ends. The last burst also leaves ``guard`` before the frame end.

    ``blocked`` intervals are times the ONU's transceiver is on another
    wavelength. A burst must not overlap them, but needs no guard.

    """
    def __init__(self, start, end, guard):
        self.start = start
        self.end = end
        self.guard = guard
        self.busy = []
        self.starts = []

    def find(self, earliest, duration, blocked=()):
        cand = max(earliest, self.start)
        while True:
            before = cand
            # bursts are disjoint, so ends are sorted too
            first = max(0, bisect.bisect_right(self.starts, cand) - 1)
            for s, e in itertools.islice(self.busy, first, None):
                if e + self.guard <= cand:
                    continue
                if cand + duration + self.guard <= s:
                    break
                cand = max(cand, e + self.guard)
            for s, e in blocked:
                if cand < e and s < cand + duration:
                    cand = e
            if cand == before:
                break
        if cand + duration + self.guard <= self.end:
            return cand
        return None

    def take(self, start, duration):
        i = bisect.bisect_right(self.starts, start)
        self.starts.insert(i, start)
        self.busy.insert(i, (start, start + duration))

    def gaps(self):
        """Free ``(start, usable length)`` pairs, in time order."""
        result = []
        cand = self.start
        for s, e in self.busy:
            if s - self.guard > cand:
                result.append((cand, s - self.guard - cand))
            cand = max(cand, e + self.guard)
        if self.end - self.guard > cand:
            result.append((cand, self.end - self.guard - cand))
        return result


class DbaEngine(object):
    """Grant map builder of one vPON slice.

    :param str slice_id: The slice.

    :param int frame_period: Upstream frame period, picoseconds.

    :param int us_rate: Upstream rate, bits/s.

    :param int guard_time: Minimum gap between bursts, picoseconds.

    :param int burst_overhead: Preamble and header bytes per burst.

    :param onus: ONU ids that take part in upstream DBA.

    :param bool polling: Give ONUs with no grant a polling grant.

    :ivar int yielded: Grants placed later than they could have been,
        to keep clear of the ONU's bursts on another slice.

    """
    def __init__(self, slice_id, frame_period, us_rate, guard_time=0,
                 burst_overhead=0, onus=(), polling=True):
        self.slice_id = slice_id
        self.frame_period = frame_period
        self.us_rate = us_rate
        self.guard_time = guard_time
        self.burst_overhead = burst_overhead
        self.onus = list(onus)
        self.polling = polling
        self.carried = []
        self.spilled = 0
        self.yielded = 0

    def duration(self, payload):
        return serialize_ps(payload + self.burst_overhead, self.us_rate)

    def sr_dba(self, reports, frame):
        """Status report DBA.

        :param dict reports: ``{onu_id: bytes}`` sampled at build time.

        :param int frame: Target frame index.

        :rtype: GrantMap

        """
        return self.allocate(frame, 'sr', requests=reports)

    def co_dba(self, cti, frame):
        """Cooperative DBA from CTI reports only.

        :param cti: :py:class:`~.mac.CTIReport` objects for the frame.

        :param int frame: Target frame index.

        """
        return self.allocate(frame, 'codba', cti=cti)

    def enhanced_co_dba(self, cti, cgs, frame, estimate=None):
        """Cooperative DBA with standing grants for CGS traffic.

        :param cti: :py:class:`~.mac.CTIReport` objects for the frame.

        :param cgs: :py:class:`~.mac.CGSAdvertisement` objects.

        :param int frame: Target frame index.

        :param callable estimate: ``estimate(onu_id, full)`` returns the
            standing grant payload. The full advertised size is used if
            this is ``None``.

        """
        return self.allocate(frame, 'codba_cgs', cti=cti, cgs=cgs,
                             estimate=estimate)

    def allocate(self, frame, policy, cti=(), cgs=(), requests=None,
                 estimate=None, reserved=None, busy=None):
        """Build the grant map of one frame.

        Standing grants are placed first, then grants carried over from
        the previous frame, then CTI grants in arrival order. The
        status report pass fills what is left. Standing, carried and
        CTI grants that do not fit are carried to the head of the next
        frame. Status report grants are scaled to fit and never
        carried.

        :param int frame: Target frame index.

        :param str policy: ``sr``, ``codba`` or ``codba_cgs``.

        :param dict requests: ``{onu_id: bytes}`` for the status report
            pass, or ``None`` to skip it (and polling).

        :param dict reserved: ``{onu_id: [(start, end)]}``, another
            slice's standing windows. New CTI and status report grants
            keep clear of them, carried grants do not.

        :param dict busy: ``{onu_id: [(start, end)]}``, bursts already
            booked on another slice. Every grant keeps clear of them.

        :rtype: GrantMap

        """
        if policy not in POLICIES:
            raise ValueError('unknown DBA policy {!r}'.format(policy))
        grant_map = GrantMap(self.slice_id, frame, self.frame_period)
        start = grant_map.frame_start
        packer = _Packer(start, grant_map.frame_end, self.guard_time)
        requested = 0
        fixed = []
        if policy == 'codba_cgs':
            standing = []
            for ad in cgs:
                for t in ad.arrivals(start, grant_map.frame_end):
                    payload = ad.bytes_per_slot
                    if estimate is not None:
                        payload = estimate(ad.onu_id, payload)
                    standing.append(_Request(ad.onu_id, payload, t, STANDING,
                                             t))
            standing.sort(key=lambda r: (r.earliest, r.onu_id))
            fixed += standing
        carried, self.carried = self.carried, []
        fixed += carried
        if policy != 'sr':
            reports = sorted(cti, key=lambda r: (r.expected_arrival, r.onu_id))
            fixed += [_Request(r.onu_id, r.expected_bytes,
                               r.expected_arrival + self.guard_time, CTI,
                               r.expected_arrival) for r in reports]
        for request in fixed:
            duration = self.duration(request.payload)
            requested += duration
            blocked = self._blocked(request.onu_id, reserved, busy,
                                    request.carried)
            t = self._find(packer, request.earliest, duration, blocked)
            payload = request.payload
            if t is None:
                # send what fits now, carry the rest
                fragment = self._fragment(packer, request.earliest, payload,
                                          blocked)
                request.carried = True
                self.carried.append(request)
                if fragment is None:
                    continue
                t, payload = fragment
                request.payload -= payload
                if request.payload <= 0:
                    self.carried.pop()
                duration = self.duration(payload)
            packer.take(t, duration)
            grant_map.add(Grant(
                self.slice_id, request.onu_id, t, duration, frame,
                payload_bytes=payload, kind=request.kind,
                expected_arrival=request.expected_arrival))
        if self.carried:
            # carried grants start at the next frame head
            for request in self.carried:
                request.earliest = grant_map.frame_end
            self.spilled += len(self.carried)
            logger.debug('%s frame %d: %d grants carried over',
                         self.slice_id, frame, len(self.carried))
        if requests is not None:
            requested += self._status_pass(grant_map, packer, requests,
                                           reserved, busy)
        if requested > self.frame_period:
            grant_map.capacity_exceeded = True
            logger.debug('%s frame %d: capacity exceeded, %d ps requested',
                         self.slice_id, frame, requested)
        return grant_map

    @staticmethod
    def _blocked(onu_id, reserved, busy, carried=False):
        result = []
        if busy:
            result += busy.get(onu_id, ())
        if reserved and not carried:
            result += reserved.get(onu_id, ())
        return sorted(result)

    def _find(self, packer, earliest, duration, blocked):
        t = packer.find(earliest, duration, blocked)
        if blocked and t != packer.find(earliest, duration):
            self.yielded += 1
        return t

    def _fragment(self, packer, earliest, payload, blocked=()):
        for start, length in packer.gaps():
            t = max(start, earliest)
            end = start + length
            for s, e in blocked:
                if s <= t < e:
                    t = e
                elif t < s:
                    end = min(end, s)
                    break
            usable = end - t
            part = min(payload, bytes_in_ps(usable, self.us_rate)
                       - self.burst_overhead)
            if part > 0 and packer.find(t, self.duration(part),
                                        blocked) == t:
                return t, part
        return None

    def _status_pass(self, grant_map, packer, requests, reserved=None,
                     busy=None):
        frame = grant_map.frame_index
        wanted = [(onu_id, requests[onu_id]) for onu_id in sorted(requests)
                  if requests[onu_id] > 0]
        requested = sum(self.duration(b) for _, b in wanted)
        needed = requested + self.guard_time * len(wanted)
        free = sum(length for _, length in packer.gaps())
        if needed > free:
            scale = free / needed
            wanted = [(onu_id, int(b * scale)) for onu_id, b in wanted]
        for onu_id, payload in wanted:
            if payload <= 0:
                continue
            blocked = self._blocked(onu_id, reserved, busy)
            duration = self.duration(payload)
            t = self._find(packer, grant_map.frame_start, duration, blocked)
            if t is None:
                # the first piece that fits
                fragment = self._fragment(packer, grant_map.frame_start,
                                          payload, blocked)
                if fragment is None:
                    continue
                t, payload = fragment
                duration = self.duration(payload)
            packer.take(t, duration)
            grant_map.add(Grant(self.slice_id, onu_id, t, duration, frame,
                                payload_bytes=payload, kind=SR))
        if self.polling:
            granted = set(g.onu_id for g in grant_map)
            for onu_id in self.onus:
                if onu_id in granted:
                    continue
                duration = self.duration(0)
                t = packer.find(grant_map.frame_start, duration)
                if t is None:
                    break
                packer.take(t, duration)
                grant_map.add(Grant(self.slice_id, onu_id, t, duration, frame,
                                    payload_bytes=0, kind=POLL))
        return requested
