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

__all__ = ['Network']
__docformat__ = 'restructuredtext en'

import logging


class Network(object):
    """The wired set of components that make up one simulation run.

    Components are passed as keywords and wired by ``linkages``, which
    maps each ``(source, output)`` to a ``(dest, input)`` pair or a
    list of them::

        net = Network(
            sim,
            ru1 = RadioUnit(sim, ...),
            onu1 = Onu(sim, ...),
            olt = Olt(sim, ...),
            linkages = {
                ('ru1', 'urllc')     : ('onu1', 'fronthaul'),
                ('onu1', 'upstream') : ('olt', 'upstream'),
                ('olt', 'grants')    : [('onu1', 'grants'),
                                        ('onu2', 'grants')],
                },
            )

    :param Simulator sim: the run's event kernel.

    :keyword Component name: a child component, registered as ``name``.

    :keyword dict linkages: output to input wiring.

    """
    def __init__(self, sim, linkages={}, **kw):
        super(Network, self).__init__()
        self.logger = logging.getLogger(self.__class__.__name__)
        self.sim = sim
        self.children = kw
        for (src, outbox), targets in linkages.items():
            if isinstance(targets, tuple):
                targets = [targets]
            for dest, inbox in targets:
                self.link(src, outbox, dest, inbox)

    def add(self, name, child):
        """Register a child built after the network was created."""
        self.children[name] = child
        return child

    def link(self, src, outbox, dest, inbox):
        self.children[src].connect_to(
            outbox, getattr(self.children[dest], inbox))

    def start(self):
        for child in self.children.values():
            child.start()

    def stop(self):
        for child in self.children.values():
            child.stop()

    def run(self, t_end):
        """Start every child, run the kernel to ``t_end`` (ps) and stop
        them again.

        :return: number of events fired.

        """
        self.start()
        count = self.sim.run_until_ps(t_end)
        self.stop()
        self.logger.info('ran %d events to %d ps', count, t_end)
        return count
