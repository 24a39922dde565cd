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

import numpy
import pytest

from meshpon.components.pon.dba import DbaEngine
from meshpon.components.pon.mac import (
    CTI, POLL, SR, STANDING, CGSAdvertisement, CTIReport)
from meshpon.core.units import serialize_ps

US = 10 ** 6
RATE = 10 ** 10
GUARD = 1 * US
ONUS = ['RU-1', 'RU-2', 'RU-3']


@pytest.fixture
def engine():
    return DbaEngine('tier1', 125 * US, RATE, guard_time=GUARD,
                     burst_overhead=50, onus=ONUS)


def test_sr(engine):
    grant_map = engine.sr_dba({'RU-1': 10000, 'RU-2': 0}, 8)
    grant, = grant_map.for_onu('RU-1')
    assert grant.kind == SR
    assert grant.start == 1000 * US
    assert grant.payload_bytes == 10000
    assert grant.duration == serialize_ps(10050, RATE)
    polls = [g for g in grant_map if g.kind == POLL]
    assert sorted(g.onu_id for g in polls) == ['RU-2', 'RU-3']
    assert all(g.payload_bytes == 0 for g in polls)
    assert not grant_map.capacity_exceeded
    assert grant_map.violations(GUARD) == []


def test_no_polling():
    engine = DbaEngine('main', 125 * US, RATE, guard_time=GUARD,
                       burst_overhead=50, onus=ONUS, polling=False)
    assert len(engine.sr_dba({}, 3)) == 0


def test_codba_places_grant_at_predicted_arrival(engine):
    report = CTIReport('RU-2', 5, 9122, 3000 * US, emitted=2875 * US)
    grant_map = engine.co_dba([report], 24)
    grant, = grant_map
    assert grant.kind == CTI
    assert grant.start == 3001 * US
    assert grant.payload_bytes == 9122
    assert grant.expected_arrival == 3000 * US


def test_codba_ignores_status_without_requests(engine):
    # no status pass, so no polling grants either
    assert len(engine.co_dba([], 24)) == 0


def test_standing_grants(engine):
    ads = [CGSAdvertisement('RU-1', 1562, 0, 500 * US),
           CGSAdvertisement('RU-2', 1562, 62500000, 500 * US)]
    grant_map = engine.enhanced_co_dba([], ads, 8)
    assert [(g.onu_id, g.start, g.kind) for g in grant_map] == [
        ('RU-1', 1000 * US, STANDING), ('RU-2', 1062500000, STANDING)]
    assert grant_map.grants[0].duration == serialize_ps(1612, RATE)
    # no occasion in the next frame
    assert len(engine.enhanced_co_dba([], ads, 9)) == 0


def test_standing_grants_from_estimate(engine):
    ads = [CGSAdvertisement('RU-1', 1562, 0, 500 * US)]
    grant_map = engine.enhanced_co_dba(
        [], ads, 8, estimate=lambda onu_id, full: full // 4)
    assert grant_map.grants[0].payload_bytes == 390


def test_cti_after_standing_grant(engine):
    ads = [CGSAdvertisement('RU-1', 1562, 0, 500 * US)]
    report = CTIReport('RU-2', 1, 9122, 1000 * US - GUARD)
    grant_map = engine.allocate(8, 'codba_cgs', cti=[report], cgs=ads)
    standing, cti = grant_map.grants
    assert standing.kind == STANDING and standing.start == 1000 * US
    assert cti.start == standing.end + GUARD
    assert grant_map.violations(GUARD) == []


def test_residual_status_pass(engine):
    report = CTIReport('RU-1', 1, 9122, 1000 * US)
    grant_map = engine.allocate(8, 'codba', cti=[report],
                                requests={'RU-3': 2000})
    kinds = dict((g.onu_id, g.kind) for g in grant_map)
    assert kinds == {'RU-1': CTI, 'RU-2': POLL, 'RU-3': SR}
    assert grant_map.violations(GUARD) == []


def test_overload_is_scaled(engine):
    requests = dict((onu_id, 100000) for onu_id in ONUS)
    grant_map = engine.sr_dba(requests, 1)
    assert grant_map.capacity_exceeded
    assert grant_map.violations(GUARD) == []
    assert grant_map.total_time() <= 125 * US
    granted = sum(g.payload_bytes for g in grant_map)
    assert 140000 < granted < 156250


def test_cti_spill_carries_over(engine):
    reports = [CTIReport(onu_id, 1, 60000, 1000 * US) for onu_id in ONUS]
    first = engine.co_dba(reports, 8)
    assert first.capacity_exceeded
    assert first.violations(GUARD) == []
    assert [g.payload_bytes for g in first] == [60000, 60000, 31100]
    assert len(engine.carried) == 1
    second = engine.co_dba([], 9)
    grant, = second
    assert grant.onu_id == 'RU-3'
    assert grant.start == 1125 * US
    assert grant.payload_bytes == 28900
    assert engine.carried == []
    assert engine.spilled == 1


def test_unknown_policy(engine):
    with pytest.raises(ValueError):
        engine.allocate(0, 'fifo')


def _timeline(grant_map):
    return ([(g.onu_id, g.start, g.duration, g.payload_bytes, g.kind,
              g.expected_arrival) for g in grant_map],
            grant_map.capacity_exceeded)


@pytest.mark.parametrize('seed', range(6))
def test_codba_is_enhanced_codba_without_cgs(seed):
    rng = numpy.random.default_rng(seed)
    plain = DbaEngine('main', 125 * US, RATE, guard_time=GUARD,
                      burst_overhead=50, onus=ONUS)
    enhanced = DbaEngine('main', 125 * US, RATE, guard_time=GUARD,
                         burst_overhead=50, onus=ONUS)
    for frame in range(8, 24):
        start = frame * 125 * US
        reports = [
            CTIReport(ONUS[int(rng.integers(0, len(ONUS)))], frame,
                      int(rng.integers(100, 80000)),
                      start + int(rng.integers(0, 125 * US)))
            for _ in range(int(rng.integers(0, 5)))]
        assert (_timeline(plain.co_dba(reports, frame))
                == _timeline(enhanced.enhanced_co_dba(reports, [], frame)))
    assert plain.spilled == enhanced.spilled


def test_busy_transceiver(engine):
    report = CTIReport('RU-2', 1, 9122, 1000 * US)
    grant_map = engine.allocate(8, 'codba', cti=[report],
                                busy={'RU-2': [(1000 * US, 1010 * US)]})
    grant, = grant_map
    # no guard time between wavelengths
    assert grant.start == 1010 * US
    assert engine.yielded == 1


def test_busy_transceiver_of_another_onu(engine):
    report = CTIReport('RU-2', 1, 9122, 1000 * US)
    grant_map = engine.allocate(8, 'codba', cti=[report],
                                busy={'RU-1': [(1000 * US, 1010 * US)]})
    grant, = grant_map
    assert grant.start == 1001 * US
    assert engine.yielded == 0


def test_status_grant_avoids_reserved_window(engine):
    grant_map = engine.allocate(8, 'sr', requests={'RU-1': 10000},
                                reserved={'RU-1': [(1000 * US, 1020 * US)]})
    grant, = grant_map.for_onu('RU-1')
    assert grant.kind == SR
    assert grant.start == 1020 * US
    assert grant.payload_bytes == 10000
    assert grant_map.violations(GUARD) == []


def test_status_grant_split_by_busy_window(engine):
    # 130000 B needs 104.04 us but RU-1 is on another slice from
    # 1050 us to 1060 us
    grant_map = engine.allocate(8, 'sr', requests={'RU-1': 130000},
                                busy={'RU-1': [(1050 * US, 1060 * US)]})
    grant, = grant_map.for_onu('RU-1')
    assert grant.start == 1000 * US
    assert grant.end <= 1050 * US
    assert grant_map.violations(GUARD) == []


def test_carried_grant_ignores_reserved_window(engine):
    reports = [CTIReport(onu_id, 1, 60000, 1000 * US) for onu_id in ONUS]
    engine.co_dba(reports, 8)
    late = CTIReport('RU-3', 2, 9122, 1130 * US)
    reserved = {'RU-3': [(1125 * US, 1150 * US)]}
    second = engine.allocate(9, 'codba', cti=[late], reserved=reserved)
    carried, cti = second.grants
    assert carried.start == 1125 * US
    assert carried.payload_bytes == 28900
    assert cti.start == 1150 * US
    assert second.violations(GUARD) == []
