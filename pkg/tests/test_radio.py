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

import pytest

from meshpon.components.ran.radio import (
    NORMAL, URLLC, InvalidPrbCount, RadioConfig, arrival_at_onu, bsr_time,
    du_cu_processing_delay, fronthaul_bytes, radio_tx_start)
from meshpon.components.ran.radiounit import RadioUnit
from meshpon.components.ran.traffic import AppPacket, ScriptedSource
from meshpon.core.kernel import Simulator

US = 10 ** 6
MS = 10 ** 9


@pytest.fixture
def cfg():
    return RadioConfig()


def test_reference_cell(cfg):
    assert cfg.symbols_per_slot == 14
    assert cfg.cgs_prbs == 27
    assert cfg.dynamic_prbs == 246
    assert cfg.user_bytes_per_prb == 168
    assert cfg.violations() == []


def test_short_slot_keeps_symbol_rate():
    cfg = RadioConfig(slot_duration=250 * US)
    assert cfg.symbols_per_slot == 7
    assert cfg.user_bytes_per_prb == 84


@pytest.mark.parametrize('size,prbs', [(1, 1), (100, 1), (168, 1), (169, 2),
                                       (256, 2), (1000, 6), (1500, 9)])
def test_prbs_for(cfg, size, prbs):
    assert cfg.prbs_for(size) == prbs


def test_fronthaul_bytes(cfg):
    # 1 PRB x 14 symbols x 12 subcarriers x 2 x 9 bits x 4 layers
    assert fronthaul_bytes(1, 14, cfg, header=False) == 1512
    assert fronthaul_bytes(1, 14, cfg) == 1562
    assert fronthaul_bytes(6, 14, cfg) == 9122
    assert fronthaul_bytes(0, 14, cfg) == 50
    assert fronthaul_bytes(273, 14, cfg) == 273 * 1512 + 50


@pytest.mark.parametrize('prbs', [-1, 274])
def test_fronthaul_bytes_bad_prbs(cfg, prbs):
    with pytest.raises(InvalidPrbCount):
        fronthaul_bytes(prbs, 14, cfg)


def test_violations():
    cfg = RadioConfig(cgs_fraction=0.001)
    assert cfg.violations() == ['radio.cgs_fraction: reserves no PRBs']
    cfg = RadioConfig(cgs_fraction=1.0)
    assert 'radio.cgs_fraction: must be in (0, 1)' in cfg.violations()


def test_urllc_timeline(cfg):
    p = AppPacket(0, 'RU-1', URLLC, 100, 200 * US)
    cgs = cfg.cgs_allocation('RU-1')
    p.t_radio_tx_start = radio_tx_start(p, cfg, cgs)
    assert p.t_radio_tx_start == 500 * US
    assert arrival_at_onu(p, cfg) == 1 * MS


def test_urllc_waits_for_its_phase(cfg):
    cgs = cfg.cgs_allocation('RU-3', phase=125 * US)
    p = AppPacket(0, 'RU-3', URLLC, 100, 200 * US)
    assert radio_tx_start(p, cfg, cgs) == 625 * US
    p = AppPacket(1, 'RU-3', URLLC, 100, 125 * US)
    assert radio_tx_start(p, cfg, cgs) == 125 * US
    p = AppPacket(2, 'RU-3', URLLC, 100, 0)
    assert radio_tx_start(p, cfg, cgs) == 125 * US
    assert cgs.next_occasion(700 * US, cfg) == (2, 1125 * US)


def test_normal_timeline(cfg):
    cgs = cfg.cgs_allocation('RU-1')
    p = AppPacket(0, 'RU-1', NORMAL, 1000, 200 * US)
    assert bsr_time(p.t_created, cfg) == 500 * US
    p.t_radio_tx_start = radio_tx_start(p, cfg, cgs)
    assert p.t_radio_tx_start == 2500 * US
    assert arrival_at_onu(p, cfg) == 3 * MS
    assert arrival_at_onu(p, cfg, ru_proc=10 * US) == 3010 * US


def test_boundary_is_inclusive(cfg):
    assert bsr_time(500 * US, cfg) == 500 * US
    assert bsr_time(500 * US + 1, cfg) == 1000 * US


def test_du_cu_processing(cfg):
    assert du_cu_processing_delay(cfg) == 500 * US
    assert du_cu_processing_delay(RadioConfig(slot_duration=250 * US)) == (
        250 * US)


def test_normal_follows_staggered_grid(cfg):
    cgs = cfg.cgs_allocation('RU-3', phase=125 * US)
    p = AppPacket(0, 'RU-3', NORMAL, 1000, 200 * US)
    assert bsr_time(p.t_created, cfg, cgs.phase) == 625 * US
    assert radio_tx_start(p, cfg, cgs) == 2625 * US
    p = AppPacket(1, 'RU-3', NORMAL, 1000, 100 * US)
    assert radio_tx_start(p, cfg, cgs) == 2125 * US


def test_cgs_section_choice():
    assert RadioConfig(cgs_section='full').violations() == []
    assert RadioConfig(cgs_section='all').violations() == [
        'radio.cgs_section: must be one of used, full']


@pytest.mark.parametrize('cgs_section,size', [('used', 1562),
                                              ('full', 27 * 1512 + 50)])
def test_urllc_section_size(cgs_section, size):
    sim = Simulator()
    radio = RadioConfig(cgs_section=cgs_section)
    sources = {URLLC: ScriptedSource([(200 * US, 100)])}
    unit = RadioUnit(sim, 'RU-1', radio, radio.cgs_allocation('RU-1'),
                     sources)
    sections = []
    unit.connect_to('urllc', sections.append)
    unit.start()
    sim.run_until_ps(2 * MS)
    section, = sections
    assert section.prbs == 1
    assert section.size_bytes == size
    assert section.t_at_onu == 1 * MS
