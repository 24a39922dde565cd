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

__all__ = ['Component']
__docformat__ = 'restructuredtext en'

import logging

from meshpon.core.config import ConfigMixin
from meshpon.core.kernel import LINK_ARRIVAL

logger = logging.getLogger(__name__)


class Component(ConfigMixin):
    """A network element of one simulation run: a radio unit, an ONU,
    an OLT, a DU/CU server and so on.

    Components are driven entirely by the run's
    :py:class:`~meshpon.core.kernel.Simulator`. Nothing happens outside
    an event handler. An item sent from an output becomes one scheduled
    event per connected input, and the ``delay`` passed to
    :py:meth:`send` is the propagation delay of that link.

    Input and output names are listed in :py:attr:`~Component.inputs`
    and :py:attr:`~Component.outputs` so a network builder can wire
    components without knowing their types. An input named ``x`` is
    handled by the method ``x``.

    Each instance gets its own :py:class:`logging.Logger`, named after
    its class.

    Settings come from :py:class:`~.config.ConfigMixin`. Values passed
    to the constructor, either as a ``config`` :py:class:`dict` or as
    keywords, override whatever :py:meth:`initialise` sets up.

    :cvar list ~Component.inputs: Input names.

    :cvar list ~Component.outputs: Output names.

    :ivar logging.Logger logger: the component's logger.

    :param Simulator sim: the run this component takes part in.

    :param str name: instance name, shown in log messages and event
        labels.

    :param dict config: initial settings.

    """
    inputs = ['input']          #:
    outputs = ['output']        #:

    def __init__(self, sim, name=None, config={}, **kwds):
        super(Component, self).__init__()
        self.logger = logging.getLogger(self.__class__.__name__)    #:
        self.sim = sim
        self.name = name or self.__class__.__name__
        self.initialise()
        self.config.update(config)
        self.config.update(kwds)
        # output name -> connected input callables
        self._component_connections = {}
        for output in self.outputs:
            self._component_connections[output] = []

    def __repr__(self):
        return '<{} {}>'.format(self.__class__.__name__, self.name)

    def initialise(self):
        """Hook for subclasses: declare config items here."""
        pass

    def on_start(self):
        """Hook for subclasses: schedule the first events. Runs at
        simulated time zero.

        """
        pass

    def on_stop(self):
        """Hook for subclasses: end of run bookkeeping."""
        pass

    def start(self):
        self.logger.debug('start %s', self.name)
        self.on_start()

    def stop(self):
        self.logger.debug('stop %s', self.name)
        self.on_stop()

    def send(self, output_name, item, delay=0, priority=LINK_ARRIVAL):
        """Schedule delivery of ``item`` to every input wired to
        ``output_name``. An unconnected output drops the item.

        :param str output_name: one of :py:attr:`~Component.outputs`.

        :param object item: what to deliver.

        :param int delay: link delay (ps).

        :param int priority: kernel priority of the delivery event.

        """
        for input_method in self._component_connections[output_name]:
            self.sim.call_later(
                delay, priority, input_method, item,
                label='{}.{}'.format(self.name, output_name))

    def connect_to(self, output_name, input_method):
        """Wire an output to a callable.

        :param str output_name: one of :py:attr:`~Component.outputs`.

        :param callable input_method: receives each item sent on the
            output.

        """
        self.logger.debug('connect_to "%s"', output_name)
        self._component_connections[output_name].append(input_method)
