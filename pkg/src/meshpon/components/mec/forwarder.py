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

"""Application delivery after DU/CU processing.

URLLC payloads processed at MEC-1 go on to the application at MEC-2 in
the next downlink frame of the same vPON slice. MEC-2's OLT is a
member of the slice and receives the broadcast downstream like an ONU,
so no upstream DBA round is involved. Normal traffic terminates at the
application co-located with its DU/CU.

All times are integer picoseconds.

"""

__all__ = ['ForwarderState', 'on_uplink_delivery', 'downlink_departure',
           'deliver_to_app', 'TwoTierForwarder', 'LocalDelivery']
__docformat__ = 'restructuredtext en'

from collections import deque

from meshpon.core.base import Component
from meshpon.core.config import ConfigDuration, ConfigInt
from meshpon.core.units import ceil_div, serialize_ps


def on_uplink_delivery(state, p, t_at_du, processing):
    """Start DU/CU processing of a packet received at ``t_at_du``.

    :return: The time the packet is ready to forward.

    """
    ready = t_at_du + processing
    p.t_ready = ready
    state.enqueue(p, ready)
    return ready


def downlink_departure(ready_time, frame_period, phase=0):
    """Start of the first downlink frame at or after ``ready_time``.

    Frames start at ``k * frame_period + phase``.

    """
    k = max(0, ceil_div(ready_time - phase, frame_period))
    return k * frame_period + phase


def deliver_to_app(p, departure, ds_rate, path_delay, overhead=0,
                   app_proc=0):
    """Set and return the packet's delivery time at the application.

    :param AppPacket p: The packet.

    :param int departure: Start of its downstream transmission.

    :param int ds_rate: Downstream rate, bits/s.

    :param int path_delay: Propagation to the application's site.

    :param int overhead: Framing bytes added to the payload.

    :param int app_proc: Application processing time.

    """
    p.t_at_app = (departure + serialize_ps(p.size_bytes + overhead, ds_rate)
                  + path_delay + app_proc)
    return p.t_at_app


class ForwarderState(object):
    """Downlink FIFO of the second tier of one slice.

    Packets go in the first frame at or after they are ready. Packets
    in the same frame are sent back to back, and a packet that would
    run past the end of a frame waits for the next one.

    :param str slice_id: The slice.

    :param int frame_period: Downlink frame period.

    :param int phase: Downlink frame phase.

    """
    def __init__(self, slice_id, frame_period, phase=0):
        self.slice_id = slice_id
        self.frame_period = frame_period
        self.phase = phase
        self.pending = deque()
        self.busy_until = 0
        self.last_ready = None

    def enqueue(self, packet, ready):
        """Queue a packet ready to forward at ``ready``.

        :raises ValueError: if an earlier packet was ready later.

        """
        if self.last_ready is not None and ready < self.last_ready:
            raise ValueError('{!r} ready before an earlier packet'.format(
                packet))
        self.last_ready = ready
        self.pending.append((packet, ready))

    def forward(self, ds_rate, overhead=0):
        """Schedule every pending packet.

        :return: ``[(packet, frame_start, tx_start)]`` in ready order.

        """
        result = []
        while self.pending:
            packet, ready = self.pending.popleft()
            duration = serialize_ps(packet.size_bytes + overhead, ds_rate)
            frame = downlink_departure(ready, self.frame_period, self.phase)
            start = max(frame, self.busy_until)
            frame = downlink_departure(
                start - self.frame_period + 1, self.frame_period, self.phase)
            if start + duration > frame + self.frame_period:
                frame += self.frame_period
                start = frame
            self.busy_until = start + duration
            packet.t_dl_depart = frame
            result.append((packet, frame, start))
        return result


class TwoTierForwarder(Component):
    """Second tier forwarder at MEC-1.

    ==================  ========  ========================================
    Config
    ==================  ========  ========================================
    ``dl_phase``        duration  Downlink frame phase.
    ``app_proc``        duration  Application processing at MEC-2.
    ``burst_overhead``  int       Downstream framing bytes per packet.
    ==================  ========  ========================================

    :param VPONSlice slice: The slice carrying both tiers.

    :param int processing: DU/CU processing time.

    :param int path_delay: MEC-1 to MEC-2 propagation delay.

    """
    inputs = ['uplink']         #:
    outputs = ['delivered']     #:

    def __init__(self, sim, slice, processing, path_delay, name=None, **kwds):
        self.slice = slice
        self.processing = processing
        self.path_delay = path_delay
        self.state = None
        super(TwoTierForwarder, self).__init__(
            sim, name=name or 'FWD@{}'.format(slice.id), **kwds)

    def initialise(self):
        self.config['dl_phase'] = ConfigDuration(0, min_value=0)
        self.config['app_proc'] = ConfigDuration(0, min_value=0)
        self.config['burst_overhead'] = ConfigInt(50, min_value=0)

    def on_start(self):
        self.state = ForwarderState(self.slice.id, self.slice.frame_period,
                                    int(self.config['dl_phase']))

    def uplink(self, packet):
        now = self.sim.now_ps
        on_uplink_delivery(self.state, packet, packet.t_at_du,
                           self.processing)
        overhead = int(self.config['burst_overhead'])
        for p, frame, start in self.state.forward(self.slice.ds_rate,
                                                  overhead):
            t_at_app = deliver_to_app(
                p, start, self.slice.ds_rate, self.path_delay,
                overhead=overhead, app_proc=int(self.config['app_proc']))
            self.send('delivered', p, delay=t_at_app - now)


class LocalDelivery(Component):
    """DU/CU processing and the application at the same site.

    ==============  ========  ============================================
    Config
    ==============  ========  ============================================
    ``app_proc``    duration  Application processing time.
    ==============  ========  ============================================

    """
    inputs = ['uplink']         #:
    outputs = ['delivered']     #:

    def __init__(self, sim, processing, name=None, **kwds):
        self.processing = processing
        super(LocalDelivery, self).__init__(sim, name=name, **kwds)

    def initialise(self):
        self.config['app_proc'] = ConfigDuration(0, min_value=0)

    def uplink(self, packet):
        packet.t_ready = packet.t_at_du + self.processing
        packet.t_at_app = packet.t_ready + int(self.config['app_proc'])
        self.send('delivered', packet,
                  delay=packet.t_at_app - self.sim.now_ps)
