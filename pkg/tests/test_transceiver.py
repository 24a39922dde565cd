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

from meshpon.components.pon.mac import (
    CTI, POLL, STANDING, CGSAdvertisement, Grant, GrantMap)
from meshpon.components.pon.transceiver import SiteTransceivers
from meshpon.core.units import serialize_ps

US = 10 ** 6
RATE = 10 ** 10
FRAME = 125 * US
WINDOW = 32739200


def _site():
    site = SiteTransceivers()
    site.reserve([CGSAdvertisement('RU-1', 40874, 0, 500 * US)],
                 lambda n: serialize_ps(n + 50, RATE))
    return site


def _main_map(frame=24):
    grant_map = GrantMap('main', frame, FRAME)
    start = frame * FRAME + WINDOW
    grant_map.add(Grant('main', 'RU-1', start, serialize_ps(9172, RATE),
                        frame, payload_bytes=9122, kind=CTI))
    grant_map.add(Grant('main', 'RU-2', start + 10 * US,
                        serialize_ps(50, RATE), frame, kind=POLL))
    return grant_map


def test_window_length():
    # 40874 B section + 50 B burst overhead at 10G
    assert serialize_ps(40924, RATE) == WINDOW


def test_reserved():
    site = _site()
    assert site.reserved(3000 * US, 3125 * US) == {
        'RU-1': [(3000 * US, 3000 * US + WINDOW)]}
    # a window that started before the frame still counts
    assert site.reserved(3010 * US, 3125 * US) == {
        'RU-1': [(3000 * US, 3000 * US + WINDOW)]}
    assert site.reserved(3040 * US, 3125 * US) == {}


def test_book_and_busy():
    site = _site()
    main = _main_map()
    site.book(main)
    grant = main.for_onu('RU-1')[0]
    # polls carry nothing and are not booked
    assert site.busy(3000 * US, 3125 * US) == {
        'RU-1': [(grant.start, grant.end)]}
    assert site.busy(3125 * US, 3250 * US) == {}


def test_old_bursts_dropped():
    site = _site()
    site.book(_main_map(24))
    site.book(GrantMap('main', 26, FRAME))
    assert site.booked == {}


def test_conflicts():
    site = _site()
    site.book(_main_map())
    follower = GrantMap('tier1', 24, FRAME)
    follower.add(Grant('tier1', 'RU-1', 3035 * US, 1 * US, 24,
                       payload_bytes=1000, kind=STANDING))
    follower.add(Grant('tier1', 'RU-1', 3036 * US, 1 * US, 24, kind=POLL))
    follower.add(Grant('tier1', 'RU-2', 3035 * US, 1 * US, 24,
                       payload_bytes=1000, kind=STANDING))
    problems = site.conflicts(follower)
    assert len(problems) == 1
    assert 'RU-1' in problems[0]


def test_back_to_back_is_not_a_conflict():
    site = _site()
    site.book(_main_map())
    follower = GrantMap('tier1', 24, FRAME)
    follower.add(Grant('tier1', 'RU-1', 3000 * US, WINDOW, 24,
                       payload_bytes=40874, kind=STANDING))
    assert site.conflicts(follower) == []
