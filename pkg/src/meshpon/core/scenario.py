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

"""Scenario files and simulation runs.

A scenario is a TOML file. Every table and key is optional, missing
values take the defaults of :py:func:`default_config`. The ODN can be
given explicitly as arrays of tables::

    [[topology.node]]
    id = "SP1"
    kind = "SPLITTER"
    reflect = [1]

    [[topology.span]]
    a = "CO"
    b = "SP1"
    km = 45

    [[topology.slice]]
    id = "tier1"
    wavelength = 1
    olt = "MEC-1"
    members = ["RU-1", "RU-2", "MEC-2"]

Otherwise the reference two-slice tree is built from the
``topology`` lengths and ``n_ru``.

"""

__all__ = ['Scenario', 'Run', 'default_config', 'build_run', 'run_once',
           'parse_durations']
__docformat__ = 'restructuredtext en'

import itertools
import logging
import os

import toml

from meshpon.components.io.metrics import MetricsSink, PacketLedger, summarize
from meshpon.components.io.results import summary_rows, write_trace
from meshpon.components.mec.ducu import DuCu, cgs_advertisement
from meshpon.components.mec.forwarder import LocalDelivery, TwoTierForwarder
from meshpon.components.pon.dba import POLICIES
from meshpon.components.pon.olt import Olt
from meshpon.components.pon.onu import Onu
from meshpon.components.pon.transceiver import SiteTransceivers
from meshpon.components.ran.estimator import OccupancyEstimator
from meshpon.components.ran.radio import (
    CGS_SECTIONS, NORMAL, URLLC, RadioConfig, du_cu_processing_delay)
from meshpon.components.ran.radiounit import RadioUnit
from meshpon.components.ran.traffic import PoissonSource, calibrate_rates
from meshpon.components.topology.odn import (
    FiberSpan, OdnNode, TopologyConfig, VPONSlice,
    path_delay_ps, reference_topology, validate_topology)
from meshpon.core.compound import Network
from meshpon.core.config import (
    ConfigBool, ConfigDuration, ConfigEnum, ConfigFloat, ConfigFloatList,
    ConfigInt, ConfigParent, ConfigRate, ConfigStr)
from meshpon.core.kernel import Simulator
from meshpon.core.units import parse_duration, parse_rate, to_seconds

logger = logging.getLogger(__name__)

TABLES = ('node', 'span', 'slice')


def _parent(**items):
    result = ConfigParent()
    for key, value in items.items():
        result[key] = value
    return result


def _leaf(node, doc):
    node.doc = doc
    return node


def default_config():
    """The scenario configuration tree with its default values.

    :rtype: ConfigParent

    """
    cfg = ConfigParent()
    cfg['scenario'] = _parent(
        name=_leaf(ConfigStr('reference'), 'scenario name'),
        )
    cfg['experiment'] = _parent(
        loads=_leaf(ConfigFloatList(
            '0.25,0.5,0.75,0.9,0.95', min_value=0, max_value=1,
            exclusive=True, percent=True), 'PON loads to sweep'),
        slots=_leaf(ConfigStr(''),
                    'slot durations to sweep, default radio.slot_duration'),
        seeds=_leaf(ConfigInt(3, min_value=1), 'seeds per grid point'),
        base_seed=_leaf(ConfigInt(1, min_value=0), 'first seed'),
        duration=_leaf(ConfigDuration('10s', min_value=1),
                       'simulated time per run'),
        warmup_fraction=_leaf(ConfigFloat(0.05, min_value=0, max_value=1),
                              'share of each run left out of statistics'),
        jobs=_leaf(ConfigInt(1, min_value=1), 'parallel runs'),
        trace=_leaf(ConfigBool(False), 'write per packet traces'),
        output_dir=_leaf(ConfigStr('results'), 'results directory'),
        )
    cfg['radio'] = _parent(
        bandwidth_mhz=_leaf(ConfigFloat(100.0, min_value=0, exclusive=True),
                            'channel bandwidth, MHz'),
        n_prb=_leaf(ConfigInt(273, min_value=1), 'PRBs in the channel'),
        slot_duration=_leaf(ConfigDuration('500us', min_value=1),
                            'radio slot duration'),
        symbols_per_slot=_leaf(ConfigInt(0, min_value=0),
                               'OFDM symbols per slot, 0 for 14 per 0.5 ms'),
        n_layers=_leaf(ConfigInt(4, min_value=1), 'MIMO layers'),
        iq_bitwidth=_leaf(ConfigInt(9, min_value=1), 'bits per I or Q'),
        cgs_fraction=_leaf(ConfigFloat(0.10, min_value=0, max_value=1,
                                       exclusive=True),
                           'share of PRBs reserved for CGS'),
        header_bytes=_leaf(ConfigInt(50, min_value=0),
                           'fronthaul header bytes per section'),
        bits_per_re=_leaf(ConfigFloat(2.0, min_value=0, exclusive=True),
                          'user bits per resource element per layer'),
        ru_proc=_leaf(ConfigDuration(0, min_value=0), 'RU processing time'),
        grant_loop_slots=_leaf(ConfigInt(4, min_value=0),
                               'slots from BSR to dynamic grant'),
        cgs_stagger=_leaf(ConfigBool(True),
                          'stagger the slot grids and CGS occasions of'
                          ' the RUs'),
        cgs_section=_leaf(ConfigEnum(choices=CGS_SECTIONS, value='used'),
                          'CGS section size, PRBs used or all CGS PRBs'),
        )
    cfg['traffic'] = _parent(
        urllc_share=_leaf(ConfigFloat(0.10, min_value=0, max_value=1),
                          'URLLC share of the offered load'),
        urllc_min_bytes=_leaf(ConfigInt(32, min_value=1),
                              'smallest URLLC packet'),
        urllc_max_bytes=_leaf(ConfigInt(256, min_value=1),
                              'largest URLLC packet'),
        normal_min_bytes=_leaf(ConfigInt(64, min_value=1),
                               'smallest normal packet'),
        normal_max_bytes=_leaf(ConfigInt(1500, min_value=1),
                               'largest normal packet'),
        )
    cfg['traffic']['route'] = _parent(
        urllc=_leaf(ConfigStr('tier1'), 'slice carrying URLLC'),
        normal=_leaf(ConfigStr('main'), 'slice carrying normal traffic'),
        )
    cfg['mac'] = _parent(
        dba=_leaf(ConfigEnum(choices=POLICIES, value='codba_cgs'),
                  'DBA policy of every slice'),
        frame_period=_leaf(ConfigDuration('125us', min_value=1),
                           'upstream frame period'),
        us_rate=_leaf(ConfigRate('10G', min_value=1), 'upstream rate'),
        ds_rate=_leaf(ConfigRate('10G', min_value=1), 'downstream rate'),
        guard_time=_leaf(ConfigDuration('1us', min_value=0),
                         'gap between upstream bursts'),
        burst_overhead=_leaf(ConfigInt(50, min_value=0),
                             'overhead bytes per burst'),
        cti_jitter=_leaf(ConfigDuration(0, min_value=0),
                         'uniform error of CTI arrival predictions'),
        polling=_leaf(ConfigBool(True), 'poll ONUs with no grant'),
        shared_transceiver=_leaf(
            ConfigBool(True),
            'one tunable transceiver per RU site for all its slices'),
        )
    cfg['estimator'] = _parent(
        enabled=_leaf(ConfigBool(False), 'size standing grants by EWMA'),
        alpha=_leaf(ConfigFloat(0.125, min_value=0, max_value=1,
                                exclusive=True), 'EWMA weight'),
        safety_factor=_leaf(ConfigFloat(1.25, min_value=1),
                            'EWMA headroom'),
        )
    cfg['forwarder'] = _parent(
        dl_phase=_leaf(ConfigDuration(0, min_value=0),
                       'downlink frame phase'),
        app_proc=_leaf(ConfigDuration(0, min_value=0),
                       'application processing time'),
        )
    cfg['topology'] = _parent(
        propagation_delay_per_km=_leaf(ConfigDuration('5us', min_value=0),
                                       'fibre delay per km'),
        n_ru=_leaf(ConfigInt(8, min_value=1), 'RUs in the reference tree'),
        feeder_km=_leaf(ConfigFloat(45.0, min_value=0), 'CO to SP1'),
        drop_km=_leaf(ConfigFloat(5.0, min_value=0), 'SP1 to each RU'),
        mec1_km=_leaf(ConfigFloat(5.0, min_value=0), 'SP1 to MEC-1'),
        mec2_km=_leaf(ConfigFloat(5.0, min_value=0), 'SP1 to MEC-2'),
        )
    return cfg


def parse_durations(value):
    """Comma separated durations, e.g. ``'500us,250us'``, as
    picoseconds.

    """
    if isinstance(value, (list, tuple)):
        return [parse_duration(x) for x in value]
    return [parse_duration(x) for x in str(value).split(',') if x.strip()]


class Scenario(object):
    """A scenario: configuration tree plus optional ODN tables.

    :param dict data: Nested values, e.g. from a TOML file.

    :param str path: File the values came from, for messages.

    """
    def __init__(self, data={}, path=None):
        self.path = path
        self.config = default_config()
        data = dict(data)
        topology = dict(data.pop('topology', {}))
        self.tables = dict((name, topology.pop(name)) for name in TABLES
                           if name in topology)
        if topology:
            data['topology'] = topology
        traffic = data.get('traffic')
        if isinstance(traffic, dict) and isinstance(
                traffic.get('route'), list):
            # [[traffic.route]] tables map class to slice
            traffic = dict(traffic)
            traffic['route'] = dict((r.get('class'), r.get('slice'))
                                    for r in traffic['route'])
            data['traffic'] = traffic
        experiment = data.get('experiment')
        if isinstance(experiment, dict) and isinstance(
                experiment.get('slots'), list):
            experiment = dict(experiment)
            experiment['slots'] = ','.join(
                str(x) for x in experiment['slots'])
            data['experiment'] = experiment
        self.config.update(data)

    @classmethod
    def from_file(cls, path):
        with open(path) as f:
            data = toml.load(f)
        return cls(data, path=path)

    def copy(self):
        return Scenario(self.to_dict(), path=self.path)

    def __getitem__(self, key):
        return self.config[key]

    def __setitem__(self, key, value):
        self.config[key] = value

    @property
    def name(self):
        return str(self.config['scenario.name'])

    def to_dict(self):
        result = self.config.to_dict(all_values=True)
        if self.tables:
            result.setdefault('topology', {}).update(self.tables)
        return result

    def to_toml(self):
        return toml.dumps(self.to_dict())

    def loads(self):
        return list(self.config['experiment.loads'])

    def slots(self):
        value = str(self.config['experiment.slots'])
        if value.strip():
            return parse_durations(value)
        return [int(self.config['radio.slot_duration'])]

    def seeds(self):
        base = int(self.config['experiment.base_seed'])
        return list(range(base, base + int(self.config['experiment.seeds'])))

    def duration(self):
        return int(self.config['experiment.duration'])

    def warmup(self, duration=None):
        """Warm up time, seconds."""
        return (to_seconds(duration or self.duration())
                * float(self.config['experiment.warmup_fraction']))

    def routes(self):
        return {URLLC: str(self.config['traffic.route.urllc']),
                NORMAL: str(self.config['traffic.route.normal'])}

    def size_range(self, traffic_class):
        cfg = self.config['traffic']
        if traffic_class == URLLC:
            return (int(cfg['urllc_min_bytes']), int(cfg['urllc_max_bytes']))
        return (int(cfg['normal_min_bytes']), int(cfg['normal_max_bytes']))

    def radio(self, slot_duration=None):
        cfg = self.config['radio']
        if slot_duration is None:
            slot_duration = int(cfg['slot_duration'])
        return RadioConfig(
            bandwidth_mhz=float(cfg['bandwidth_mhz']),
            n_prb=int(cfg['n_prb']), slot_duration=slot_duration,
            symbols_per_slot=int(cfg['symbols_per_slot']),
            n_layers=int(cfg['n_layers']),
            iq_bitwidth=int(cfg['iq_bitwidth']),
            cgs_fraction=float(cfg['cgs_fraction']),
            header_bytes=int(cfg['header_bytes']),
            bits_per_re=float(cfg['bits_per_re']),
            ru_proc=int(cfg['ru_proc']),
            grant_loop_slots=int(cfg['grant_loop_slots']),
            cgs_section=str(cfg['cgs_section']))

    def topology(self):
        """Build the :py:class:`~.odn.TopologyConfig`.

        :raises ValueError: if an explicit table entry is malformed.

        """
        mac = self.config['mac']
        topo = self.config['topology']
        rates = dict(us_rate=int(mac['us_rate']), ds_rate=int(mac['ds_rate']),
                     frame_period=int(mac['frame_period']),
                     dba=str(mac['dba']))
        delay = int(topo['propagation_delay_per_km'])
        if not self.tables:
            return reference_topology(
                n_ru=int(topo['n_ru']), feeder_km=float(topo['feeder_km']),
                drop_km=float(topo['drop_km']),
                mec1_km=float(topo['mec1_km']),
                mec2_km=float(topo['mec2_km']),
                propagation_delay_per_km=delay, **rates)
        try:
            nodes = [OdnNode(n['id'], n['kind'], n.get('reflect', ()))
                     for n in self.tables.get('node', [])]
            spans = [FiberSpan(s['a'], s['b'], s['km'])
                     for s in self.tables.get('span', [])]
            slices = []
            for s in self.tables.get('slice', []):
                kw = dict(rates)
                if 'us_rate' in s:
                    kw['us_rate'] = parse_rate(s['us_rate'])
                if 'ds_rate' in s:
                    kw['ds_rate'] = parse_rate(s['ds_rate'])
                if 'frame_period' in s:
                    kw['frame_period'] = parse_duration(s['frame_period'])
                if 'dba' in s:
                    kw['dba'] = s['dba']
                slices.append(VPONSlice(s['id'], s['wavelength'], s['olt'],
                                        s['members'], **kw))
        except KeyError as ex:
            raise ValueError('topology table entry without {}'.format(ex))
        except TypeError as ex:
            raise ValueError('bad topology table entry: {}'.format(ex))
        return TopologyConfig(nodes, spans, slices, delay)

    def violations(self):
        """Every problem that stops the scenario running.

        :rtype: list(str)

        """
        result = self.config.violations()
        if result:
            return result
        try:
            self.slots()
        except ValueError as ex:
            result.append('experiment.slots: {}'.format(ex))
            return result
        try:
            topo = self.topology()
        except ValueError as ex:
            return result + ['topology: {}'.format(ex)]
        for s in topo.slice_list:
            if s.dba not in POLICIES:
                result.append('topology: slice {} has unknown DBA {}'.format(
                    s.id, s.dba))
        result += validate_topology(topo)
        routes = self.routes()
        for traffic_class, slice_id in sorted(routes.items()):
            if slice_id not in topo.slices:
                result.append('traffic.route.{}: no slice {}'.format(
                    traffic_class, slice_id))
        if result:
            return result
        rus = topo.ru_members(topo.slices[routes[NORMAL]])
        for ru in rus:
            if ru not in topo.slices[routes[URLLC]].members:
                result.append('traffic.route.urllc: {} not in slice {}'.format(
                    ru, routes[URLLC]))
        for slot in self.slots():
            radio = self.radio(slot)
            result += radio.violations()
            if radio.violations():
                continue
            for traffic_class, capacity in ((URLLC, radio.cgs_prbs),
                                            (NORMAL, radio.dynamic_prbs)):
                low, high = self.size_range(traffic_class)
                if low > high:
                    result.append('traffic: {} size range {}-{}'.format(
                        traffic_class, low, high))
                elif radio.prbs_for(high) > capacity:
                    result.append(
                        'traffic: {} B {} packet needs {} PRBs, {} per slot'
                        ' at {}'.format(high, traffic_class,
                                        radio.prbs_for(high), capacity,
                                        radio.slot_duration))
        return result


class Run(object):
    """One simulation run, built and ready to go.

    :ivar Simulator sim: The event kernel.

    :ivar Network network: Every component of the run.

    """
    def __init__(self, scenario, load, slot_duration, seed, sources=None,
                 keep_packets=False, duration=None):
        self.scenario = scenario
        self.load = load
        self.seed = seed
        self.duration = duration or scenario.duration()
        self.radio = scenario.radio(slot_duration)
        self.topology = scenario.topology()
        self.sim = Simulator(digest=True)
        self.ledger = PacketLedger()
        self.network = Network(self.sim)
        self.radio_units = []
        self.onus = []
        self.olts = []
        self.traffic = None
        self._build(sources, keep_packets)

    def _build(self, sources, keep_packets):
        cfg = self.scenario.config
        sim = self.sim
        radio = self.radio
        topo = self.topology
        routes = self.scenario.routes()
        rus = topo.ru_members(topo.slices[routes[NORMAL]])
        if sources is None:
            self.traffic = calibrate_rates(
                self.load, radio, topo.slices[routes[NORMAL]], ru_ids=rus,
                urllc_share=float(cfg['traffic.urllc_share']),
                urllc_size=self.scenario.size_range(URLLC),
                normal_size=self.scenario.size_range(NORMAL))
        estimator = None
        if cfg['estimator.enabled']:
            estimator = OccupancyEstimator(
                alpha=float(cfg['estimator.alpha']),
                safety_factor=float(cfg['estimator.safety_factor']))
        packet_ids = itertools.count()
        allocations = {}
        for i, ru in enumerate(rus):
            phase = 0
            if cfg['radio.cgs_stagger']:
                phase = i * radio.slot_duration // len(rus)
            allocations[ru] = radio.cgs_allocation(ru, phase=phase)
            if sources is not None:
                ru_sources = sources.get(ru, {})
            else:
                ru_sources = {}
                for traffic_class in (URLLC, NORMAL):
                    rate = self.traffic.rate(ru, traffic_class)
                    if rate > 0:
                        ru_sources[traffic_class] = PoissonSource(
                            rate, self.scenario.size_range(traffic_class),
                            self.seed, '{}/{}'.format(ru, traffic_class))
            unit = RadioUnit(sim, ru, radio, allocations[ru], ru_sources,
                             packet_ids=packet_ids, estimator=estimator,
                             ledger=self.ledger)
            self.radio_units.append(unit)
            self.network.add(unit.name, unit)
        overhead = int(cfg['mac.burst_overhead'])
        processing = du_cu_processing_delay(radio)
        self.sink = MetricsSink(sim, ledger=self.ledger,
                                keep_packets=keep_packets, name='metrics')
        self.network.add(self.sink.name, self.sink)
        self.transceivers = None
        if cfg['mac.shared_transceiver'] and routes[URLLC] != routes[NORMAL]:
            self.transceivers = SiteTransceivers()
        for slice_id in sorted(set(routes.values())):
            slice = topo.slices[slice_id]
            onus = {}
            for ru in rus:
                onu = Onu(sim, ru, slice,
                          path_delay_ps(ru, slice.olt, slice, topo),
                          ledger=self.ledger, burst_overhead=overhead)
                onus[ru] = onu
                self.onus.append(onu)
                self.network.add(onu.name, onu)
            advertisements = []
            if slice_id == routes[URLLC]:
                advertisements = [cgs_advertisement(allocations[ru], radio)
                                  for ru in rus]
            role = None
            if self.transceivers is not None:
                role = 'follower' if slice_id == routes[URLLC] else 'primary'
            olt = Olt(sim, slice, onus=onus.values(),
                      estimator=(estimator if slice_id == routes[URLLC]
                                 else None),
                      ledger=self.ledger, dba=slice.dba,
                      transceivers=self.transceivers, role=role,
                      guard_time=cfg['mac.guard_time'],
                      burst_overhead=overhead,
                      polling=bool(cfg['mac.polling']))
            self.olts.append(olt)
            ducu = DuCu(sim, slice, advertisements=advertisements,
                        seed=self.seed, cti_jitter=cfg['mac.cti_jitter'])
            pseudo = topo.pseudo_onus(slice)
            if slice_id == routes[URLLC] and pseudo:
                delivery = TwoTierForwarder(
                    sim, slice, processing,
                    path_delay_ps(slice.olt, pseudo[0], slice, topo),
                    dl_phase=cfg['forwarder.dl_phase'],
                    app_proc=cfg['forwarder.app_proc'],
                    burst_overhead=overhead)
            else:
                delivery = LocalDelivery(
                    sim, processing, name='APP@{}'.format(slice_id),
                    app_proc=cfg['forwarder.app_proc'])
            for child in (olt, ducu, delivery):
                self.network.add(child.name, child)
            for ru, onu in onus.items():
                self.network.link(olt.name, 'grants', onu.name, 'grants')
                self.network.link(onu.name, 'upstream', olt.name, 'upstream')
                for traffic_class in (URLLC, NORMAL):
                    if routes[traffic_class] == slice_id:
                        self.network.link(ru, traffic_class,
                                          onu.name, 'fronthaul')
            if routes[NORMAL] == slice_id:
                for ru in rus:
                    self.network.link(ru, 'schedule', ducu.name, 'schedule')
            self.network.link(olt.name, 'uplink', ducu.name, 'uplink')
            self.network.link(ducu.name, 'cti', olt.name, 'cti')
            self.network.link(ducu.name, 'cgs', olt.name, 'cgs')
            self.network.link(ducu.name, 'packets', delivery.name, 'uplink')
            self.network.link(delivery.name, 'delivered',
                              self.sink.name, 'delivered')

    def run(self):
        """Run to the end and audit the result.

        :raises RuntimeError: if the audit fails.

        :return: The number of events fired.

        """
        events = self.network.run(self.duration)
        problems = self.ledger.audit(self.radio_units, self.onus)
        if self.sink.out_of_order:
            problems.append('{} packets with timestamps out of order'.format(
                self.sink.out_of_order))
        if problems:
            for problem in problems:
                logger.error(problem)
            raise RuntimeError('conservation audit failed')
        in_flight = self.in_flight()
        if in_flight:
            logger.warning('%d packets still in flight at end of run',
                           in_flight)
        return events

    def in_flight(self):
        return self.ledger.in_flight(self.radio_units, self.onus)

    def summary(self):
        return summarize(self.sink.samples,
                         self.scenario.warmup(self.duration),
                         load=self.load,
                         slot_duration=self.radio.slot_duration,
                         seed=self.seed)


def build_run(scenario, load, slot_duration=None, seed=1, **kwds):
    """Build a :py:class:`Run` without starting it."""
    return Run(scenario, load, slot_duration, seed, **kwds)


def run_once(data, load, slot_duration, seed, trace_dir=None):
    """Run one grid point of a sweep.

    Takes and returns plain values only, so that it can run in a worker
    process.

    :param dict data: Scenario values, from :py:meth:`Scenario.to_dict`.

    :return: ``{'rows': [...], 'run': {...}}``, the ``summary.csv``
        rows and the ``runs.csv`` row.

    """
    scenario = Scenario(data)
    run = Run(scenario, load, slot_duration, seed,
              keep_packets=trace_dir is not None)
    logger.info('run load %g slot %d ps seed %d', load, slot_duration, seed)
    events = run.run()
    if trace_dir is not None:
        write_trace(os.path.join(trace_dir, 'trace-{:g}-{}-{}.csv'.format(
            load, slot_duration // 10 ** 6, seed)), run.sink.packets)
    return {
        'rows': summary_rows(run.summary()),
        'run': {
            'load': '{:g}'.format(load),
            'slot_us': slot_duration // 10 ** 6,
            'seed': seed,
            'events': events,
            'created': run.ledger.counts['created'],
            'delivered': run.ledger.counts['delivered'],
            'in_flight': run.in_flight(),
            'frames_exceeded': sum(olt.frames_exceeded for olt in run.olts),
            'late_cti': sum(olt.late_cti for olt in run.olts),
            'digest': run.sim.trace_digest(),
            },
        }
