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

from meshpon.components.io.metrics import (
    APP, RU_DU, CellStats, EmptyWindow, IncompletePacket, LatencySample,
    MetricsSink, PacketLedger, quantile, record, summarize)
from meshpon.components.ran.radio import NORMAL, URLLC
from meshpon.components.ran.traffic import AppPacket
from meshpon.core.kernel import Simulator

US = 10 ** 6


def _delivered(n, traffic_class=URLLC, created=200 * US, at_du=1051289600,
               at_app=1675120000):
    p = AppPacket(n, 'RU-1', traffic_class, 100, created)
    p.t_at_du = at_du
    p.t_at_app = at_app
    return p


def test_record():
    ru_du, app = record(_delivered(3))
    assert (ru_du.point, app.point) == (RU_DU, APP)
    assert ru_du.value == pytest.approx(851.2896e-6)
    assert app.value == pytest.approx(1475.12e-6)
    assert app.t_created == pytest.approx(200e-6)


def test_record_incomplete():
    p = _delivered(0)
    p.t_at_app = None
    with pytest.raises(IncompletePacket):
        record(p)


def test_negative_latency():
    with pytest.raises(ValueError):
        LatencySample(0, URLLC, APP, -1e-6, 0.0)


def test_nearest_rank_quantiles():
    values = list(range(1, 101))
    assert quantile(values, 0.50) == 50
    assert quantile(values, 0.95) == 95
    assert quantile(values, 0.99) == 99
    assert quantile([7.0], 0.99) == 7.0
    stats = CellStats(list(reversed(values)))
    assert (stats.count, stats.mean, stats.max) == (100, 50.5, 100)
    assert (stats.p50, stats.p95, stats.p99) == (50, 95, 99)


def test_summarize_drops_warm_up():
    samples = [LatencySample(0, URLLC, APP, 5.0, 0.01),
               LatencySample(1, URLLC, APP, 1.0, 0.2),
               LatencySample(2, URLLC, APP, 3.0, 0.3),
               LatencySample(3, NORMAL, RU_DU, 2.0, 0.3)]
    summary = summarize(samples, 0.1, load=0.5, slot_duration=500 * US,
                        seed=1)
    assert summary[(URLLC, APP)].count == 2
    assert summary[(URLLC, APP)].mean == 2.0
    assert summary[(URLLC, APP)].max == 3.0
    assert (NORMAL, APP) not in summary
    assert summary.load == 0.5
    with pytest.raises(EmptyWindow):
        summarize(samples, 1.0)


def test_sink_counts_and_keeps():
    ledger = PacketLedger()
    sink = MetricsSink(Simulator(), ledger=ledger, keep_packets=True)
    sink.delivered(_delivered(0))
    bad = _delivered(1)
    bad.t_radio_tx_start = 2000 * US
    sink.delivered(bad)
    assert len(sink.samples) == 4
    assert sink.packets[1] is bad
    assert sink.out_of_order == 1
    assert ledger.counts['delivered'] == 2


class _Backlog(object):
    def __init__(self, n):
        self.n = n

    def backlog_packets(self):
        return self.n


def test_ledger_audit():
    ledger = PacketLedger()
    for stage, n in (('created', 10), ('admitted', 8), ('at_onu', 8),
                     ('departed_onu', 8), ('at_du', 8), ('delivered', 7)):
        ledger.count(stage, n)
    assert ledger.audit([_Backlog(2)]) == []
    assert ledger.in_flight([_Backlog(2)]) == 1
    problems = ledger.audit([_Backlog(1)])
    assert problems == ['2 packets not sent but 1 in RU backlogs']
    ledger.count('delivered', 2)
    assert 'delivered 9 > at_du 8' in ledger.audit([_Backlog(2)])
