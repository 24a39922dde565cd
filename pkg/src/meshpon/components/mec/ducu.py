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

__all__ = ['DuCu', 'cti_emission_time', 'cgs_advertisement']
__docformat__ = 'restructuredtext en'

from meshpon.components.pon.mac import CGSAdvertisement, CTIReport
from meshpon.components.ran.radio import fronthaul_bytes
from meshpon.core.base import Component
from meshpon.core.config import ConfigDuration
from meshpon.core.kernel import RngStream


def cti_emission_time(now, expected_arrival, frame_period):
    """When to send a CTI report: at the build of the frame the data
    arrives in, which is one frame ahead of it, or now if that has
    passed.

    """
    frame = expected_arrival // frame_period
    return max(now, (frame - 1) * frame_period)


def cgs_advertisement(allocation, radio):
    """The OLT's view of one RU's configured grant.

    Sections reach the ONU one slot plus RU processing after the
    occasion, so the arrival phase is the occasion phase shifted by
    the same amount.

    :param CGSAllocation allocation: The RU's configured grant.

    :param RadioConfig radio: Cell configuration.

    :rtype: CGSAdvertisement

    """
    period = allocation.period(radio)
    return CGSAdvertisement(
        allocation.ru_id,
        fronthaul_bytes(allocation.prbs_per_slot, radio.symbols_per_slot,
                        radio),
        (allocation.phase + radio.slot_duration + radio.ru_proc) % period,
        period, active_from=allocation.active_from_slot * radio.slot_duration)


class DuCu(Component):
    """DU/CU server at a slice's OLT site.

    At the start of the run it advertises the configured grants of the
    RUs whose URLLC traffic it serves. It turns every schedule notice
    from an RU into a CTI report, sent to the OLT in time for the build
    of the frame the data will arrive in. Sections received from the
    OLT are split into packets for the site's application path.

    ==============  ========  ============================================
    Config
    ==============  ========  ============================================
    ``cti_jitter``  duration  Reported arrival times are moved by a
                              uniform random amount in +/- this.
    ==============  ========  ============================================

    :param VPONSlice slice: The slice served.

    :param list advertisements: :py:class:`~.mac.CGSAdvertisement`
        objects to send at start up.

    :param int seed: Run seed, for the CTI jitter.

    """
    inputs = ['uplink', 'schedule']             #:
    outputs = ['cti', 'cgs', 'packets']         #:

    def __init__(self, sim, slice, advertisements=(), seed=0, name=None,
                 **kwds):
        self.slice = slice
        self.advertisements = list(advertisements)
        self.jitter_rng = RngStream(seed, 'cti/{}'.format(slice.id))
        self.reports = 0
        super(DuCu, self).__init__(
            sim, name=name or 'DUCU@{}'.format(slice.id), **kwds)

    def initialise(self):
        self.config['cti_jitter'] = ConfigDuration(0, min_value=0)

    def on_start(self):
        if self.advertisements:
            self.send('cgs', self.advertisements)

    def schedule(self, section):
        now = self.sim.now_ps
        arrival = section.t_at_onu
        jitter = int(self.config['cti_jitter'])
        if jitter:
            arrival += int(round(self.jitter_rng.uniform(-jitter, jitter)))
            arrival = max(now, arrival)
        emitted = cti_emission_time(now, arrival, self.slice.frame_period)
        report = CTIReport(section.ru_id, section.slot_index,
                           section.size_bytes, arrival, emitted=emitted)
        self.reports += 1
        self.send('cti', report, delay=emitted - now)

    def uplink(self, section):
        for packet in section.packets:
            self.send('packets', packet)
