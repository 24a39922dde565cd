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

from meshpon.components.pon.mac import (
    CGSAdvertisement, CTIReport, Grant, GrantMap, OnuQueue, onu_transmit,
    serialize_time)
from meshpon.components.ran.radio import NORMAL, URLLC
from meshpon.components.ran.traffic import AppPacket, FronthaulSection
from meshpon.core.kernel import InvalidRate
from meshpon.core.units import serialize_ps

US = 10 ** 6
RATE = 10 ** 10


def _section(traffic_class, size, n_packets=1, ru='RU-1'):
    packets = [AppPacket(i, ru, traffic_class, 100, 0)
               for i in range(n_packets)]
    return FronthaulSection(ru, traffic_class, packets, 1, size, 0, 0, 0)


def _grant(onu, start, payload, overhead=50):
    return Grant('tier1', onu, start, serialize_ps(payload + overhead, RATE),
                 0, payload_bytes=payload)


def test_serialize_time():
    assert serialize_time(1250, RATE) == pytest.approx(1e-6)
    with pytest.raises(InvalidRate):
        serialize_time(100, 0)


def test_cti_report_in_the_past():
    CTIReport('RU-1', 5, 9122, 3000 * US, emitted=2875 * US)
    with pytest.raises(ValueError):
        CTIReport('RU-1', 5, 9122, 3000 * US, emitted=3001 * US)


def test_cgs_arrivals():
    ad = CGSAdvertisement('RU-2', 1562, 62500000, 500 * US)
    assert list(ad.arrivals(0, 1000 * US)) == [62500000, 562500000]
    assert list(ad.arrivals(562500000, 562500001)) == [562500000]
    assert list(ad.arrivals(1000 * US, 1125 * US)) == [1062500000]
    assert list(ad.arrivals(1125 * US, 1250 * US)) == []


def test_urllc_goes_first():
    queue = OnuQueue('RU-1')
    normal = _section(NORMAL, 9122)
    urllc = _section(URLLC, 1562)
    queue.enqueue(normal)
    queue.enqueue(urllc)
    assert queue.occupancy_bytes == 10684
    assert queue.class_bytes(URLLC) == 1562
    grant = _grant('RU-1', 1000 * US, 1562)
    assert queue.transmit(grant, RATE, 50) == [
        (urllc, 1000 * US + serialize_ps(1612, RATE))]
    assert queue.occupancy_bytes == 9122
    assert queue.bytes_out == 1562


def test_partial_section_continues():
    queue = OnuQueue('RU-1')
    section = _section(NORMAL, 9122, n_packets=3)
    queue.enqueue(section)
    assert queue.packets_queued() == 3
    first = _grant('RU-1', 0, 5000)
    assert onu_transmit(queue, first, RATE, overhead=50) == []
    assert first.used
    assert queue.remaining() == 4122
    assert queue.packets_queued() == 3
    second = _grant('RU-1', 10 * US, 4122)
    departures = onu_transmit(queue, second, RATE, overhead=50)
    departure = 10 * US + serialize_ps(4172, RATE)
    assert departures == [(p, departure) for p in section.packets]
    assert len(queue) == 0
    assert queue.bytes_in == queue.bytes_out == 9122


def test_grant_for_another_onu():
    with pytest.raises(ValueError):
        onu_transmit(OnuQueue('RU-1'), _grant('RU-2', 0, 100), RATE)


def test_polling_grant_sends_nothing():
    queue = OnuQueue('RU-1')
    queue.enqueue(_section(URLLC, 1562))
    assert queue.transmit(_grant('RU-1', 0, 0), RATE, 50) == []
    assert queue.occupancy_bytes == 1562


def test_grant_map_violations():
    grant_map = GrantMap('tier1', 8, 125 * US)
    assert (grant_map.frame_start, grant_map.frame_end) == (
        1000 * US, 1125 * US)
    grant_map.add(_grant('RU-2', 1010 * US, 1000))
    grant_map.add(_grant('RU-1', 1000 * US, 1000))
    assert [g.onu_id for g in grant_map] == ['RU-1', 'RU-2']
    assert grant_map.violations(1 * US) == []
    # overlaps the guard after RU-2
    grant_map.add(_grant('RU-3', 1010 * US + serialize_ps(1050, RATE), 10))
    assert len(grant_map.violations(1 * US)) == 1
    assert len(grant_map.violations(0)) == 0
    grant_map.add(_grant('RU-4', 1124 * US, 10000))
    messages = grant_map.violations(0)
    assert len(messages) == 1 and 'outside the frame' in messages[0]
    assert len(grant_map.for_onu('RU-1')) == 1
