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

__all__ = ['RadioUnit']
__docformat__ = 'restructuredtext en'

from collections import deque
import itertools

from meshpon.components.ran.radio import (
    NORMAL, URLLC, arrival_at_onu, fronthaul_bytes, radio_tx_start)
from meshpon.components.ran.traffic import AppPacket, FronthaulSection
from meshpon.core.base import Component
from meshpon.core.kernel import TRAFFIC


class RadioUnit(Component):
    """A radio unit and the UEs it serves.

    The cell's slot grid runs at the phase of the RU's CGS allocation.
    URLLC packets are sent on the CGS occasions. Each occasion carries
    up to ``cfg.cgs_prbs`` PRBs, oldest packet first, and the rest wait
    for the next occasion. Its section covers the PRBs used, or all the
    CGS PRBs if ``cfg.cgs_section`` is ``'full'``. Normal packets are
    reported at each slot boundary and sent ``cfg.grant_loop_slots``
    slots later, up to ``cfg.dynamic_prbs`` PRBs per slot.

    Every occasion or slot that carries data produces one
    :py:class:`~.traffic.FronthaulSection` per class, delivered to the
    co-located ONU when the slot has been received and processed.
    Normal sections are also announced on the ``schedule`` output as
    soon as they are scheduled, which is what the DU/CU turns into CTI
    reports.

    :param str ru_id: The RU's node id.

    :param RadioConfig radio: Cell configuration.

    :param CGSAllocation cgs: The RU's configured grant.

    :param dict sources: ``{class: source}``. A source has a
        ``pull(t)`` method returning ``[(t_created, size_bytes)]``.

    :param packet_ids: Shared packet id counter.

    :param OccupancyEstimator estimator: Told the URLLC bytes of every
        occasion, or ``None``.

    :param PacketLedger ledger: Conservation audit, or ``None``.

    """
    inputs = []                                 #:
    outputs = ['urllc', 'normal', 'schedule']   #:

    def __init__(self, sim, ru_id, radio, cgs, sources, packet_ids=None,
                 estimator=None, ledger=None, name=None, **kwds):
        self.ru_id = ru_id
        self.radio = radio
        self.cgs = cgs
        self.sources = dict(sources)
        self.packet_ids = packet_ids or itertools.count()
        self.estimator = estimator
        self.ledger = ledger
        self.backlog = {URLLC: deque(), NORMAL: deque()}
        super(RadioUnit, self).__init__(sim, name=name or ru_id, **kwds)

    def on_start(self):
        if URLLC in self.sources:
            self.sim.call_at(self.cgs.occasion(0, self.radio), TRAFFIC,
                             self.occasion, 0,
                             label='{}.occasion'.format(self.name))
        if NORMAL in self.sources:
            self.sim.call_at(self.cgs.phase, TRAFFIC, self.slot_boundary, 0,
                             label='{}.bsr'.format(self.name))

    def backlog_packets(self):
        return sum(len(queue) for queue in self.backlog.values())

    def _pull(self, traffic_class):
        now = self.sim.now_ps
        queue = self.backlog[traffic_class]
        arrivals = self.sources[traffic_class].pull(now)
        for t_created, size in arrivals:
            queue.append(AppPacket(
                next(self.packet_ids), self.ru_id, traffic_class, size,
                t_created, prbs=self.radio.prbs_for(size)))
        if self.ledger is not None:
            self.ledger.count('created', len(arrivals))
        return queue

    @staticmethod
    def _admit(queue, capacity):
        admitted = []
        prbs = 0
        while queue and prbs + queue[0].prbs <= capacity:
            packet = queue.popleft()
            prbs += packet.prbs
            admitted.append(packet)
        return admitted, prbs

    def _section(self, traffic_class, packets, prbs, tx, slot_index):
        t_at_onu = None
        for packet in packets:
            packet.t_radio_tx_start = max(
                tx, radio_tx_start(packet, self.radio, self.cgs))
            t_at_onu = arrival_at_onu(packet, self.radio)
        if self.ledger is not None:
            self.ledger.count('admitted', len(packets))
        sent = prbs
        if traffic_class == URLLC and self.radio.cgs_section == 'full':
            sent = self.cgs.prbs_per_slot
        return FronthaulSection(
            self.ru_id, traffic_class, packets, prbs,
            fronthaul_bytes(sent, self.radio.symbols_per_slot, self.radio),
            tx, t_at_onu, slot_index)

    def occasion(self, k):
        """Transmit on CGS occasion ``k``."""
        now = self.sim.now_ps
        queue = self._pull(URLLC)
        packets, prbs = self._admit(queue, self.cgs.prbs_per_slot)
        nbytes = 0
        if packets:
            section = self._section(URLLC, packets, prbs, now, k)
            nbytes = section.size_bytes
            self.send('urllc', section, delay=section.t_at_onu - now)
        if self.estimator is not None:
            self.estimator.observe(self.ru_id, nbytes)
        self.sim.call_at(self.cgs.occasion(k + 1, self.radio), TRAFFIC,
                         self.occasion, k + 1,
                         label='{}.occasion'.format(self.name))

    def slot_boundary(self, k):
        """Buffer status report at the start of slot ``k``."""
        now = self.sim.now_ps
        queue = self._pull(NORMAL)
        packets, prbs = self._admit(queue, self.radio.dynamic_prbs)
        if packets:
            tx = now + self.radio.grant_loop_slots * self.radio.slot_duration
            section = self._section(
                NORMAL, packets, prbs, tx, k + self.radio.grant_loop_slots)
            self.send('schedule', section)
            self.send('normal', section, delay=section.t_at_onu - now)
        self.sim.call_at(now + self.radio.slot_duration, TRAFFIC,
                         self.slot_boundary, k + 1,
                         label='{}.bsr'.format(self.name))
