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

"""Tunable transceivers shared by the slices of an RU site.

An RU site has one tunable ONU. Each slice it belongs to sees a
logical ONU with its own queue, but only one burst can be on the fibre
at a time, on any wavelength. Two slices share a site this way:

* The **primary** slice (normal traffic) keeps its new CTI and status
  report grants clear of the follower's standing windows, which are
  semi-static and known in advance. Grants it carries over from an
  overloaded frame go to the head of the next frame regardless.
* The **follower** slice (URLLC) builds each frame after the primary
  and plans all its grants around the bursts the primary has booked
  for the same ONU.

Wavelength tuning time is not modelled, so a burst on one slice may
start the instant one on the other slice ends.

"""

__all__ = ['SiteTransceivers']
__docformat__ = 'restructuredtext en'

from meshpon.components.pon.mac import POLL


def _overlaps(a_start, a_end, b_start, b_end):
    return a_start < b_end and b_start < a_end


class SiteTransceivers(object):
    """Booking ledger of the RU sites' transceivers."""
    def __init__(self):
        self.windows = []
        self.booked = {}

    def reserve(self, advertisements, length):
        """Record the follower's standing windows.

        :param advertisements: :py:class:`~.mac.CGSAdvertisement`
            objects.

        :param callable length: ``length(bytes)`` gives the window
            length in picoseconds.

        """
        for ad in advertisements:
            self.windows.append((ad, length(ad.bytes_per_slot)))

    def reserved(self, start, end):
        """Standing windows touching ``[start, end)``.

        :rtype: dict

        :return: ``{onu_id: [(start, end)]}``

        """
        result = {}
        for ad, length in self.windows:
            for t in ad.arrivals(start - length, end):
                result.setdefault(ad.onu_id, []).append((t, t + length))
        return result

    def book(self, grant_map):
        """Record the bursts of a primary grant map."""
        start = grant_map.frame_start
        for onu_id in list(self.booked):
            # older bursts cannot block a later frame
            kept = [b for b in self.booked[onu_id]
                    if b[1] > start - grant_map.frame_period]
            if kept:
                self.booked[onu_id] = kept
            else:
                del self.booked[onu_id]
        for grant in grant_map:
            if grant.kind == POLL or grant.payload_bytes <= 0:
                continue
            self.booked.setdefault(grant.onu_id, []).append(
                (grant.start, grant.end))

    def busy(self, start, end):
        """Booked bursts touching ``[start, end)``, ``{onu_id:
        [(start, end)]}``.

        """
        result = {}
        for onu_id, bursts in self.booked.items():
            hits = [b for b in bursts if _overlaps(b[0], b[1], start, end)]
            if hits:
                result[onu_id] = sorted(hits)
        return result

    def conflicts(self, grant_map):
        """Follower grants that overlap a booked burst of the same ONU.

        :return: A list of messages, empty if all is well.

        """
        result = []
        for grant in grant_map:
            if grant.kind == POLL or grant.payload_bytes <= 0:
                continue
            for s, e in self.booked.get(grant.onu_id, ()):
                if _overlaps(grant.start, grant.end, s, e):
                    result.append(
                        '{} frame {}: {!r} overlaps a burst of {} on another'
                        ' slice at {}-{} ps'.format(
                            grant_map.slice_id, grant_map.frame_index, grant,
                            grant.onu_id, s, e))
        return result
