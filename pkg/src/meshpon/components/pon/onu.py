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

__all__ = ['Onu']
__docformat__ = 'restructuredtext en'

from meshpon.components.pon.mac import (
    CTI, POLL, SR, STANDING, OnuQueue)
from meshpon.core.base import Component
from meshpon.core.config import ConfigInt
from meshpon.core.kernel import MAC


class Onu(Component):
    """Upstream side of one ONU in one vPON slice.

    Fronthaul sections from the RU are queued, and sent upstream when
    the OLT's grants come round. Each section that completes is
    delivered to the OLT after the fibre propagation delay.

    ==================  ====  ============================================
    Config
    ==================  ====  ============================================
    ``burst_overhead``  int   Preamble and header bytes sent per burst.
    ==================  ====  ============================================

    :param str onu_id: ONU id, the same as the RU's node id.

    :param VPONSlice slice: The slice this logical ONU belongs to.

    :param int path_delay: ONU to OLT propagation delay, picoseconds.

    :param PacketLedger ledger: Conservation audit, or ``None``.

    """
    inputs = ['fronthaul', 'grants']    #:
    outputs = ['upstream']              #:

    def __init__(self, sim, onu_id, slice, path_delay, ledger=None,
                 name=None, **kwds):
        self.onu_id = onu_id
        self.slice = slice
        self.path_delay = path_delay
        self.ledger = ledger
        self.queue = OnuQueue(onu_id)
        self.pending_grants = []
        self.grants_used = 0
        self.grants_wasted = 0
        super(Onu, self).__init__(
            sim, name=name or '{}@{}'.format(onu_id, slice.id), **kwds)

    def initialise(self):
        self.config['burst_overhead'] = ConfigInt(50, min_value=0)

    def fronthaul(self, section):
        section.onu_id = self.onu_id
        for packet in section.packets:
            packet.t_at_onu = self.sim.now_ps
        self.queue.enqueue(section)
        if self.ledger is not None:
            self.ledger.count('at_onu', len(section.packets))

    def grants(self, grant_map):
        for grant in grant_map.for_onu(self.onu_id):
            if grant.kind == POLL or grant.payload_bytes <= 0:
                continue
            self.pending_grants.append(grant)
            self.sim.call_at(grant.start, MAC, self.transmit, grant,
                             label='{}.transmit'.format(self.name))

    def status_report(self):
        """Bytes requested in the next status report.

        Queued bytes not already covered by a grant that is still to
        come. Status report grants cover data that was queued when they
        were made. CTI and standing grants only cover data that has
        already arrived.

        """
        now = self.sim.now_ps
        outstanding = 0
        for grant in self.pending_grants:
            if grant.kind in (SR, POLL):
                outstanding += grant.payload_bytes
            elif grant.kind in (CTI, STANDING) and (
                    grant.expected_arrival is not None
                    and grant.expected_arrival <= now):
                outstanding += grant.payload_bytes
        return max(0, self.queue.occupancy_bytes - outstanding)

    def queued_bytes(self, traffic_class):
        return self.queue.class_bytes(traffic_class)

    def transmit(self, grant):
        self.pending_grants.remove(grant)
        grant.used = True
        now = self.sim.now_ps
        before = self.queue.occupancy_bytes
        done = self.queue.transmit(grant, self.slice.us_rate,
                                   self.config['burst_overhead'])
        if before == self.queue.occupancy_bytes:
            self.grants_wasted += 1
        else:
            self.grants_used += 1
        for section, departure in done:
            for packet in section.packets:
                packet.t_onu_depart = departure
            self.send('upstream', section,
                      delay=departure - now + self.path_delay)
            if self.ledger is not None:
                self.ledger.count('departed_onu', len(section.packets))
