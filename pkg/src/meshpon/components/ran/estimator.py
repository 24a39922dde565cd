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

__all__ = ['OccupancyEstimator']
__docformat__ = 'restructuredtext en'

import logging

logger = logging.getLogger(__name__)


class OccupancyEstimator(object):
    """Track how much of each RU's CGS allocation is really used.

    The DU/CU sees the CGS PRBs of every occasion, used or not, and
    keeps an exponentially weighted moving average of the section bytes
    per occasion. Standing grants can then be sized to the measured
    traffic instead of the full allocation::

        payload = min(full, max(ewma * safety_factor, queued))

    Until the first observation the full allocation is used.

    :param float alpha: EWMA weight of the newest observation.

    :param float safety_factor: Headroom applied to the average.

    """
    def __init__(self, alpha=0.125, safety_factor=1.25):
        self.alpha = alpha
        self.safety_factor = safety_factor
        self.ewma = {}

    def observe(self, onu_id, nbytes):
        old = self.ewma.get(onu_id)
        if old is None:
            self.ewma[onu_id] = float(nbytes)
        else:
            self.ewma[onu_id] = old + self.alpha * (nbytes - old)

    def predict(self, onu_id, full, queued=0):
        """Standing grant payload for the next occasion, bytes."""
        ewma = self.ewma.get(onu_id)
        if ewma is None:
            return full
        return int(min(full, max(ewma * self.safety_factor, queued)))
