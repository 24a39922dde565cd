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

__all__ = ['Olt']
__docformat__ = 'restructuredtext en'

from meshpon.components.pon.dba import POLICIES, DbaEngine
from meshpon.components.ran.radio import URLLC
from meshpon.core.base import Component
from meshpon.core.config import (
    ConfigBool, ConfigDuration, ConfigEnum, ConfigInt)
from meshpon.core.kernel import MAC, MAC_FOLLOW
from meshpon.core.units import serialize_ps


class Olt(Component):
    """Head end of one vPON slice.

    Builds the upstream grant map of every frame one frame ahead, with
    the slice's DBA policy, and broadcasts it to the ONUs. Sections
    received upstream are stamped with their arrival time and passed
    to the co-located DU/CU.

    CTI reports may arrive at any time before the build of the frame
    their data arrives in. A report that misses that build is used in
    the next one, and a warning is logged.

    Every grant map is checked before it is sent. A map with
    overlapping or out of frame grants stops the run.

    When the RU sites' transceivers are shared with another slice, a
    ``primary`` OLT keeps its new grants clear of the other slice's
    standing windows and books every burst it grants. A ``follower``
    OLT builds each frame after the primary has, and plans around the
    booked bursts. See :py:mod:`~.transceiver`.

    ==================  ========  ========================================
    Config
    ==================  ========  ========================================
    ``dba``             str       ``sr``, ``codba`` or ``codba_cgs``.
    ``guard_time``      duration  Minimum gap between upstream bursts.
    ``burst_overhead``  int       Preamble and header bytes per burst.
    ``polling``         bool      Poll ONUs that have no grant.
    ==================  ========  ========================================

    :param VPONSlice slice: The slice.

    :param list onus: The slice's :py:class:`~.onu.Onu` components,
        read for their status reports.

    :param OccupancyEstimator estimator: Sizes standing grants, or
        ``None`` to always use the full CGS allocation.

    :param SiteTransceivers transceivers: Shared transceiver ledger,
        or ``None`` if the slice has the RU sites to itself.

    :param str role: ``'primary'`` or ``'follower'``, with
        ``transceivers``.

    """
    inputs = ['upstream', 'cti', 'cgs']     #:
    outputs = ['grants', 'uplink']          #:

    def __init__(self, sim, slice, onus=(), estimator=None, ledger=None,
                 transceivers=None, role=None, name=None, **kwds):
        if transceivers is not None and role not in ('primary', 'follower'):
            raise ValueError('transceiver role must be primary or follower,'
                             ' not {!r}'.format(role))
        self.slice = slice
        self.transceivers = transceivers
        self.role = role if transceivers is not None else None
        self.onus = list(onus)
        self.estimator = estimator
        self.ledger = ledger
        self.pending_cti = []
        self.advertisements = []
        self.frames = 0
        self.frames_exceeded = 0
        self.late_cti = 0
        self.engine = None
        super(Olt, self).__init__(
            sim, name=name or 'OLT@{}'.format(slice.id), **kwds)

    def initialise(self):
        self.config['dba'] = ConfigEnum(choices=POLICIES, value='codba_cgs')
        self.config['guard_time'] = ConfigDuration('1us', min_value=0)
        self.config['burst_overhead'] = ConfigInt(50, min_value=0)
        self.config['polling'] = ConfigBool(True)

    def on_start(self):
        self.engine = DbaEngine(
            self.slice.id, self.slice.frame_period, self.slice.us_rate,
            guard_time=int(self.config['guard_time']),
            burst_overhead=int(self.config['burst_overhead']),
            onus=[onu.onu_id for onu in self.onus],
            polling=bool(self.config['polling']))
        self.sim.call_at(0, self._priority(), self.build, 0,
                         label='{}.build'.format(self.name))

    def on_stop(self):
        if self.engine is not None and self.engine.yielded:
            self.logger.debug('%d grants moved clear of other slices',
                              self.engine.yielded)

    def _priority(self):
        return MAC_FOLLOW if self.role == 'follower' else MAC

    def upstream(self, section):
        now = self.sim.now_ps
        for packet in section.packets:
            packet.t_at_du = now
        if self.ledger is not None:
            self.ledger.count('at_du', len(section.packets))
        self.send('uplink', section)

    def cti(self, report):
        self.pending_cti.append(report)

    def cgs(self, advertisements):
        advertisements = list(advertisements)
        self.advertisements += advertisements
        if self.role == 'follower' and self.config['dba'] == 'codba_cgs':
            overhead = int(self.config['burst_overhead'])
            rate = self.slice.us_rate
            self.transceivers.reserve(
                advertisements, lambda n: serialize_ps(n + overhead, rate))

    def build(self, frame):
        """Build, check and send the grant map of ``frame``."""
        period = self.slice.frame_period
        policy = self.config['dba']
        frame_end = (frame + 1) * period
        cti = []
        keep = []
        for report in self.pending_cti:
            if report.expected_arrival >= frame_end:
                keep.append(report)
                continue
            if report.expected_arrival < frame * period:
                self.late_cti += 1
                self.logger.warning(
                    'late CTI for %s slot %d, folded into frame %d',
                    report.onu_id, report.slot_index, frame)
            cti.append(report)
        self.pending_cti = keep
        requests = dict((onu.onu_id, onu.status_report()) for onu in self.onus)
        estimate = None
        if self.estimator is not None:
            estimate = self._estimate
        reserved = busy = None
        if self.role == 'primary':
            reserved = self.transceivers.reserved(frame * period, frame_end)
        elif self.role == 'follower':
            busy = self.transceivers.busy(frame * period, frame_end)
        grant_map = self.engine.allocate(
            frame, policy, cti=cti, cgs=self.advertisements,
            requests=requests, estimate=estimate, reserved=reserved,
            busy=busy)
        problems = grant_map.violations(self.engine.guard_time)
        if self.role == 'follower':
            problems += self.transceivers.conflicts(grant_map)
        if problems:
            for problem in problems:
                self.logger.error(problem)
            raise RuntimeError('{}: invalid grant map for frame {}'.format(
                self.name, frame))
        self.frames += 1
        if grant_map.capacity_exceeded:
            self.frames_exceeded += 1
        if self.role == 'primary':
            self.transceivers.book(grant_map)
        self.send('grants', grant_map)
        # frame f + 1 is built at the start of frame f
        self.sim.call_at(frame * period, self._priority(), self.build,
                         frame + 1,
                         label='{}.build'.format(self.name))

    def _estimate(self, onu_id, full):
        queued = 0
        for onu in self.onus:
            if onu.onu_id == onu_id:
                queued = onu.queued_bytes(URLLC)
        return self.estimator.predict(onu_id, full, queued)
