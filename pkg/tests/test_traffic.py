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

from meshpon.components.ran.estimator import OccupancyEstimator
from meshpon.components.ran.radio import NORMAL, URLLC, RadioConfig
from meshpon.components.ran.traffic import (
    AppPacket, InvalidLoad, PoissonSource, ScriptedSource, calibrate_rates,
    mean_prbs)
from meshpon.components.topology.odn import reference_topology

MS = 10 ** 9


@pytest.fixture
def cfg():
    return RadioConfig()


@pytest.fixture
def main():
    return reference_topology().slices['main']


def test_mean_prbs(cfg):
    # 32..168 B take one PRB, 169..256 B take two
    assert mean_prbs((32, 256), cfg) == pytest.approx((137 + 2 * 88) / 225)
    assert mean_prbs((100, 100), cfg) == 1.0


@pytest.mark.parametrize('load', [0.25, 0.5, 0.95])
def test_calibrated_load(cfg, main, load):
    traffic = calibrate_rates(load, cfg, main)
    assert traffic.offered_bps(cfg) == pytest.approx(load * main.us_rate)
    assert traffic.violations() == []


def test_urllc_share(cfg, main):
    traffic = calibrate_rates(0.5, cfg, main, urllc_share=0.25)
    per_prb_bits = 1512 * 8
    urllc = sum(traffic.rate(ru, URLLC) for ru in main.members)
    assert (urllc * mean_prbs((32, 256), cfg) * per_prb_bits
            == pytest.approx(0.25 * 0.5 * main.us_rate))
    # every RU gets the same rates
    assert len(set(traffic.rate(ru, NORMAL) for ru in main.members)) == 1


@pytest.mark.parametrize('load', [0, 1, 1.2, -0.1])
def test_invalid_load(cfg, main, load):
    with pytest.raises(InvalidLoad):
        calibrate_rates(load, cfg, main)


def test_poisson_source_rate():
    source = PoissonSource(20000.0, (32, 256), 1, 'RU-1/urllc')
    arrivals = source.pull(1000 * MS)
    assert len(arrivals) == pytest.approx(20000, rel=0.05)
    times = [t for t, size in arrivals]
    assert times == sorted(times)
    assert all(32 <= size <= 256 for t, size in arrivals)
    assert times[-1] <= 1000 * MS < source.next_time


def test_poisson_source_is_lazy_and_reproducible():
    a = PoissonSource(5000.0, (64, 1500), 4, 'RU-2/normal')
    b = PoissonSource(5000.0, (64, 1500), 4, 'RU-2/normal')
    whole = a.pull(100 * MS)
    parts = []
    for n in range(1, 101):
        parts += b.pull(n * MS)
    assert whole == parts
    other = PoissonSource(5000.0, (64, 1500), 5, 'RU-2/normal')
    assert other.pull(100 * MS) != whole


def test_zero_rate_source():
    source = PoissonSource(0, (32, 256), 1, 'RU-1/urllc')
    assert source.pull(10 ** 15) == []


def test_scripted_source():
    source = ScriptedSource([(300, 100), (100, 50), (300, 60)])
    assert source.pull(99) == []
    assert source.pull(100) == [(100, 50)]
    assert source.pull(1000) == [(300, 60), (300, 100)]


def test_packet_monotonic():
    p = AppPacket(7, 'RU-1', URLLC, 100, 200)
    assert p.ue_id == 'RU-1/urllc'
    p.t_radio_tx_start = 500
    p.t_at_du = 1000
    assert p.is_monotonic()
    p.t_at_onu = 1001
    assert not p.is_monotonic()


def test_estimator():
    estimator = OccupancyEstimator(alpha=0.5, safety_factor=1.25)
    assert estimator.predict('RU-1', 1000) == 1000
    estimator.observe('RU-1', 400)
    assert estimator.predict('RU-1', 1000) == 500
    estimator.observe('RU-1', 0)
    assert estimator.predict('RU-1', 1000) == 250
    # queued bytes raise the prediction, never above the full size
    assert estimator.predict('RU-1', 1000, queued=700) == 700
    assert estimator.predict('RU-1', 1000, queued=5000) == 1000
    assert estimator.predict('RU-2', 1000) == 1000
