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

"""Radio side timing and the split 7.2 fronthaul payload model.

All times are integer picoseconds.

Each RU's cell runs its slot grid at a per-RU phase. URLLC traffic uses
configured grant scheduling (CGS): a fixed group of PRBs recurs every
slot, and a packet goes out at the first occasion at or after it is
created. Normal traffic uses the dynamic grant loop: a buffer status
report at the next slot boundary, then transmission ``grant_loop_slots``
(default 4) slots later.

A split 7.2 U-plane section carries frequency domain IQ samples for
every allocated PRB::

    bytes = ceil(prbs * symbols * 12 * 2 * iq_bitwidth * n_layers / 8)
            + header_bytes

"""

__all__ = ['URLLC', 'NORMAL', 'CGS_SECTIONS', 'RadioConfig',
           'CGSAllocation', 'InvalidPrbCount', 'radio_tx_start', 'bsr_time',
           'arrival_at_onu', 'fronthaul_bytes', 'du_cu_processing_delay']
__docformat__ = 'restructuredtext en'

import math

from meshpon.core.units import PS_PER_US, ceil_div

URLLC = 'urllc'
NORMAL = 'normal'
SUBCARRIERS_PER_PRB = 12
CGS_SECTIONS = ('used', 'full')


class InvalidPrbCount(ValueError):
    pass


class RadioConfig(object):
    """Cell configuration shared by every RU.

    :param float bandwidth_mhz: Channel bandwidth.

    :param int n_prb: PRBs in the channel (273 at 100 MHz, 30 kHz).

    :param int slot_duration: Picoseconds.

    :param int symbols_per_slot: OFDM symbols per slot. ``0`` selects
        14 per 0.5 ms, i.e. 7 at 250 µs, keeping bytes per second the
        same for every slot length.

    :param int n_layers: MIMO layers.

    :param int iq_bitwidth: Bits per I or Q component.

    :param float cgs_fraction: Share of PRBs reserved for CGS.

    :param int header_bytes: Per-section eCPRI and Ethernet overhead.

    :param float bits_per_re: Mean user bits carried per resource
        element per layer, sets how many PRBs a packet needs.

    :param int ru_proc: RU processing delay, picoseconds.

    :param int grant_loop_slots: Slots from BSR to dynamic grant
        transmission.

    :param str cgs_section: ``'used'`` sizes a CGS occasion's section
        to the PRBs its packets use, ``'full'`` to every CGS PRB.

    """
    def __init__(self, bandwidth_mhz=100.0, n_prb=273,
                 slot_duration=500 * PS_PER_US, symbols_per_slot=0, n_layers=4,
                 iq_bitwidth=9, cgs_fraction=0.10, header_bytes=50,
                 bits_per_re=2.0, ru_proc=0, grant_loop_slots=4,
                 cgs_section='used'):
        self.bandwidth_mhz = bandwidth_mhz
        self.n_prb = n_prb
        self.slot_duration = slot_duration
        if not symbols_per_slot:
            symbols_per_slot = max(
                1, int(round(14 * slot_duration / (500 * PS_PER_US))))
        self.symbols_per_slot = symbols_per_slot
        self.n_layers = n_layers
        self.iq_bitwidth = iq_bitwidth
        self.cgs_fraction = cgs_fraction
        self.header_bytes = header_bytes
        self.bits_per_re = bits_per_re
        self.ru_proc = ru_proc
        self.grant_loop_slots = grant_loop_slots
        self.cgs_section = cgs_section

    def violations(self):
        result = []
        if not 0 < self.cgs_fraction < 1:
            result.append('radio.cgs_fraction: must be in (0, 1)')
        if not self.n_prb > 0:
            result.append('radio.n_prb: must be positive')
        if not self.slot_duration > 0:
            result.append('radio.slot_duration: must be positive')
        if self.n_prb > 0 and self.cgs_prbs < 1:
            result.append('radio.cgs_fraction: reserves no PRBs')
        if self.cgs_section not in CGS_SECTIONS:
            result.append('radio.cgs_section: must be one of {}'.format(
                ', '.join(CGS_SECTIONS)))
        return result

    @property
    def cgs_prbs(self):
        return int(math.floor(self.cgs_fraction * self.n_prb + 1e-9))

    @property
    def dynamic_prbs(self):
        return self.n_prb - self.cgs_prbs

    @property
    def user_bytes_per_prb(self):
        return (SUBCARRIERS_PER_PRB * self.symbols_per_slot * self.n_layers
                * self.bits_per_re / 8)

    def prbs_for(self, size_bytes):
        """PRBs needed to carry ``size_bytes`` of user data."""
        return max(1, int(math.ceil(size_bytes / self.user_bytes_per_prb)))

    def cgs_allocation(self, ru_id, phase=0, active_from_slot=0):
        return CGSAllocation(ru_id, self.cgs_prbs, period_slots=1,
                             active_from_slot=active_from_slot, phase=phase)


class CGSAllocation(object):
    """Semi-static configured grant of one RU.

    :param str ru_id: The RU.

    :param int prbs_per_slot: PRBs per occasion.

    :param int period_slots: Slots between occasions.

    :param int active_from_slot: First slot index with an occasion.

    :param int phase: Offset of the occasions from the slot grid,
        picoseconds.

    """
    def __init__(self, ru_id, prbs_per_slot, period_slots=1,
                 active_from_slot=0, phase=0):
        self.ru_id = ru_id
        self.prbs_per_slot = prbs_per_slot
        self.period_slots = period_slots
        self.active_from_slot = active_from_slot
        self.phase = phase

    def __repr__(self):
        return 'CGSAllocation({!r}, {} PRBs, phase={})'.format(
            self.ru_id, self.prbs_per_slot, self.phase)

    def period(self, cfg):
        return self.period_slots * cfg.slot_duration

    def occasion(self, k, cfg):
        """Start time of the k-th occasion."""
        return ((self.active_from_slot + k * self.period_slots)
                * cfg.slot_duration + self.phase)

    def next_occasion(self, t, cfg):
        """Index and time of the first occasion at or after ``t``."""
        first = self.occasion(0, cfg)
        k = max(0, ceil_div(t - first, self.period(cfg)))
        return k, self.occasion(k, cfg)


def bsr_time(t_created, cfg, phase=0):
    """Slot boundary at or after ``t_created``, on a slot grid offset
    by ``phase``.

    """
    return (ceil_div(t_created - phase, cfg.slot_duration) * cfg.slot_duration
            + phase)


def radio_tx_start(p, cfg, cgs):
    """Earliest radio transmission start for a packet.

    URLLC packets go at the first CGS occasion at or after creation.
    Normal packets report at the next boundary of the cell's slot grid,
    which runs at the CGS phase, and are sent ``cfg.grant_loop_slots``
    slots later. Capacity limits are applied by the
    :py:class:`~.radiounit.RadioUnit`, which may defer a packet to a
    later occasion.

    :param AppPacket p: Packet with ``t_created`` set.

    :param RadioConfig cfg: Cell configuration.

    :param CGSAllocation cgs: The RU's configured grant.

    :rtype: int

    """
    if p.traffic_class == URLLC:
        return cgs.next_occasion(p.t_created, cfg)[1]
    return (bsr_time(p.t_created, cfg, cgs.phase)
            + cfg.grant_loop_slots * cfg.slot_duration)


def arrival_at_onu(p, cfg, ru_proc=None):
    """Time the packet's section is queued at the RU's ONU: one slot
    on the air plus RU processing.

    """
    if ru_proc is None:
        ru_proc = cfg.ru_proc
    return p.t_radio_tx_start + cfg.slot_duration + ru_proc


def fronthaul_bytes(prbs, symbols, cfg, header=True):
    """Size of a split 7.2 U-plane section.

    :param int prbs: Allocated PRBs.

    :param int symbols: OFDM symbols.

    :param RadioConfig cfg: Cell configuration.

    :param bool header: Include ``cfg.header_bytes``.

    :raises InvalidPrbCount: if ``prbs`` is negative or more than the
        channel has.

    """
    if prbs > cfg.n_prb or prbs < 0:
        raise InvalidPrbCount('{} PRBs, channel has {}'.format(
            prbs, cfg.n_prb))
    bits = (prbs * symbols * SUBCARRIERS_PER_PRB * 2 * cfg.iq_bitwidth
            * cfg.n_layers)
    result = ceil_div(bits, 8)
    if header:
        result += cfg.header_bytes
    return result


def du_cu_processing_delay(cfg):
    """DU/CU processing time, one slot."""
    return cfg.slot_duration
