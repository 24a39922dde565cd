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

"""Application packets, fronthaul sections and offered load.

"""

__all__ = ['AppPacket', 'FronthaulSection', 'TrafficConfig', 'InvalidLoad',
           'calibrate_rates', 'mean_prbs', 'PoissonSource', 'ScriptedSource']
__docformat__ = 'restructuredtext en'

from collections import deque

import numpy

from meshpon.components.ran.radio import NORMAL, URLLC, fronthaul_bytes
from meshpon.core.kernel import RngStream, exp_draw_ps


class InvalidLoad(ValueError):
    pass


class AppPacket(object):
    """One application datagram and its pipeline timestamps.

    Timestamps are integer picoseconds, ``None`` until the packet gets
    that far.

    ============================  =======================================
    ``t_created``                 generated at the UE
    ``t_radio_tx_start``          start of its radio slot
    ``t_at_onu``                  section queued at the ONU
    ``t_onu_depart``              last byte of its section left the ONU
    ``t_at_du``                   section received at the slice's OLT
    ``t_ready``                   DU/CU processing finished
    ``t_dl_depart``               tier-2 downlink frame start
    ``t_at_app``                  delivered to the application
    ============================  =======================================

    """
    __slots__ = ('id', 'ue_id', 'ru_id', 'traffic_class', 'size_bytes',
                 'prbs', 't_created', 't_radio_tx_start', 't_at_onu',
                 't_onu_depart', 't_at_du', 't_ready', 't_dl_depart',
                 't_at_app')

    pipeline = ('t_created', 't_radio_tx_start', 't_at_onu', 't_onu_depart',
                't_at_du', 't_ready', 't_dl_depart', 't_at_app')

    def __init__(self, id, ru_id, traffic_class, size_bytes, t_created,
                 ue_id=None, prbs=None):
        self.id = id
        self.ue_id = ue_id if ue_id is not None else '{}/{}'.format(
            ru_id, traffic_class)
        self.ru_id = ru_id
        self.traffic_class = traffic_class
        self.size_bytes = size_bytes
        self.prbs = prbs
        self.t_created = t_created
        for name in self.pipeline[1:]:
            setattr(self, name, None)

    def __repr__(self):
        return 'AppPacket({}, {}, {}, {} B)'.format(
            self.id, self.ru_id, self.traffic_class, self.size_bytes)

    def timestamps(self):
        return [(name, getattr(self, name)) for name in self.pipeline]

    def is_monotonic(self):
        """Timestamps that are set never decrease in pipeline order."""
        last = None
        for name, value in self.timestamps():
            if value is None:
                continue
            if last is not None and value < last:
                return False
            last = value
        return True


class FronthaulSection(object):
    """One U-plane section: all packets one RU sends in one class in
    one radio slot.

    :param str ru_id: Source RU.

    :param str traffic_class: ``urllc`` or ``normal``.

    :param list packets: The :py:class:`AppPacket` objects carried.

    :param int size_bytes: Fronthaul bytes, header included.

    :param int t_tx: Radio transmission start.

    :param int t_at_onu: Arrival at the ONU queue.

    :param int slot_index: Index of the radio occasion or slot.

    """
    __slots__ = ('ru_id', 'traffic_class', 'packets', 'prbs', 'size_bytes',
                 't_tx', 't_at_onu', 'slot_index', 'onu_id')

    def __init__(self, ru_id, traffic_class, packets, prbs, size_bytes, t_tx,
                 t_at_onu, slot_index, onu_id=None):
        self.ru_id = ru_id
        self.traffic_class = traffic_class
        self.packets = packets
        self.prbs = prbs
        self.size_bytes = size_bytes
        self.t_tx = t_tx
        self.t_at_onu = t_at_onu
        self.slot_index = slot_index
        self.onu_id = onu_id

    def __repr__(self):
        return 'FronthaulSection({}, {}, slot {}, {} B, {} packets)'.format(
            self.ru_id, self.traffic_class, self.slot_index, self.size_bytes,
            len(self.packets))


def mean_prbs(size_range, cfg):
    """Mean PRBs per packet for sizes uniform on ``size_range``
    (inclusive).

    """
    low, high = size_range
    sizes = numpy.arange(low, high + 1, dtype=numpy.float64)
    prbs = numpy.maximum(1, numpy.ceil(sizes / cfg.user_bytes_per_prb))
    return float(prbs.mean())


class TrafficConfig(object):
    """Arrival rates of every traffic source.

    :param dict rates: ``{ru_id: {class: packets per second}}``.

    :param tuple urllc_size: Inclusive packet size range, bytes.

    :param tuple normal_size: Inclusive packet size range, bytes.

    :param float load: Target PON load.

    :param float urllc_share: URLLC part of the offered load.

    """
    def __init__(self, rates, urllc_size=(32, 256), normal_size=(64, 1500),
                 load=None, urllc_share=0.10):
        self.rates = rates
        self.urllc_size = tuple(urllc_size)
        self.normal_size = tuple(normal_size)
        self.load = load
        self.urllc_share = urllc_share

    def size_range(self, traffic_class):
        if traffic_class == URLLC:
            return self.urllc_size
        return self.normal_size

    def rate(self, ru_id, traffic_class):
        return self.rates[ru_id][traffic_class]

    def violations(self):
        result = []
        for ru_id, rates in self.rates.items():
            for traffic_class, rate in rates.items():
                if rate < 0:
                    result.append('traffic: {} {} rate is negative'.format(
                        ru_id, traffic_class))
        if self.load is not None and not 0 < self.load < 1:
            result.append('traffic: load must be in (0, 1)')
        for name in ('urllc_size', 'normal_size'):
            low, high = getattr(self, name)
            if not 0 < low <= high:
                result.append('traffic.{}: bad range {}-{}'.format(
                    name, low, high))
        return result

    def offered_bps(self, cfg):
        """Aggregate mean fronthaul payload bit rate of all sources."""
        per_prb = fronthaul_bytes(1, cfg.symbols_per_slot, cfg, header=False)
        total = 0.0
        for rates in self.rates.values():
            for traffic_class, rate in rates.items():
                total += (rate * mean_prbs(self.size_range(traffic_class), cfg)
                          * per_prb * 8)
        return total


def calibrate_rates(load, cfg, slice, ru_ids=None, urllc_share=0.10,
                    urllc_size=(32, 256), normal_size=(64, 1500)):
    """Arrival rates giving a target PON load.

    The mean fronthaul bit rate offered by all RUs of the slice, both
    classes together, is ``load * slice.us_rate``, split evenly between
    RUs. Only the PRB payload counts as offered load. Section headers
    and burst overhead are transport overhead.

    :param float load: Fraction of upstream capacity, in (0, 1).

    :param RadioConfig cfg: Cell configuration.

    :param VPONSlice slice: Slice whose ``us_rate`` sets the scale.

    :param ru_ids: RUs sharing the load. Defaults to every slice member.

    :param float urllc_share: URLLC part of the offered load.

    :raises InvalidLoad: if ``load`` is outside (0, 1).

    :rtype: TrafficConfig

    """
    if not 0 < load < 1:
        raise InvalidLoad('load must be in (0, 1), got {!r}'.format(load))
    if ru_ids is None:
        ru_ids = slice.members
    ru_ids = list(ru_ids)
    per_ru_bps = load * slice.us_rate / len(ru_ids)
    per_prb = fronthaul_bytes(1, cfg.symbols_per_slot, cfg, header=False)
    shares = {URLLC: urllc_share, NORMAL: 1.0 - urllc_share}
    sizes = {URLLC: urllc_size, NORMAL: normal_size}
    rates = {}
    for ru_id in ru_ids:
        rates[ru_id] = {}
        for traffic_class in (URLLC, NORMAL):
            bits_per_packet = (mean_prbs(sizes[traffic_class], cfg)
                               * per_prb * 8)
            rates[ru_id][traffic_class] = (
                shares[traffic_class] * per_ru_bps / bits_per_packet)
    return TrafficConfig(rates, urllc_size=urllc_size,
                         normal_size=normal_size, load=load,
                         urllc_share=urllc_share)


class PoissonSource(object):
    """Poisson packet arrivals with uniform integer sizes.

    Arrivals are drawn lazily: :py:meth:`pull` returns every arrival up
    to a given time and draws no further ahead than one arrival.

    :param float rate: Mean packets per second.

    :param tuple size_range: Inclusive size range, bytes.

    :param int seed: Run seed.

    :param str stream_id: Names the source's random streams.

    """
    def __init__(self, rate, size_range, seed, stream_id):
        self.rate = rate
        self.size_range = tuple(size_range)
        self.arrivals = RngStream(seed, stream_id + '/arrival')
        self.sizes = RngStream(seed, stream_id + '/size')
        self.next_time = None
        if rate > 0:
            self.next_time = exp_draw_ps(self.arrivals, rate)

    def pull(self, t):
        """``[(t_created, size_bytes)]`` for arrivals at or before
        ``t``.

        """
        result = []
        while self.next_time is not None and self.next_time <= t:
            result.append((self.next_time, self.sizes.integers(
                *self.size_range)))
            self.next_time += exp_draw_ps(self.arrivals, self.rate)
        return result


class ScriptedSource(object):
    """Fixed list of ``(t_created, size_bytes)`` arrivals, e.g. for a
    hand checked timeline.

    """
    def __init__(self, arrivals):
        self.pending = deque(sorted(arrivals))

    def pull(self, t):
        result = []
        while self.pending and self.pending[0][0] <= t:
            result.append(self.pending.popleft())
        return result
