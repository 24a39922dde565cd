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

"""Mesh ODN topology.

The fibre plant is a tree of :py:class:`FiberSpan` objects rooted at
the central office. Endpoints on different branches reach each other
by reflection at a splitter, so the optical path between two nodes is
the tree path through their lowest common ancestor. The path is only
usable by a slice if that ancestor is the slice's OLT, one of the two
endpoints, or a splitter that reflects the slice's wavelength.

The reference topology has eight RU sites and the MEC-1 node on one
splitter::

    CO ----45 km---- SP1 --5 km-- RU-1 .. RU-8
                      |---5 km--- MEC-1
                      `---5 km--- MEC-2

giving RU to MEC-1 = 10 km, MEC-1 to MEC-2 = 10 km and RU to CO =
50 km.

"""

__all__ = ['CO_OLT', 'MEC_OLT', 'RU_ONU', 'SPLITTER', 'OdnNode',
           'FiberSpan', 'VPONSlice', 'TopologyConfig', 'Unreachable',
           'path_delay', 'path_delay_ps', 'validate_topology',
           'reference_topology']
__docformat__ = 'restructuredtext en'

from decimal import Decimal
import logging

import networkx

from meshpon.core.units import PS_PER_US, to_seconds

logger = logging.getLogger(__name__)

CO_OLT = 'CO_OLT'
MEC_OLT = 'MEC_OLT'
RU_ONU = 'RU_ONU'
SPLITTER = 'SPLITTER'
NODE_KINDS = (CO_OLT, MEC_OLT, RU_ONU, SPLITTER)


class Unreachable(RuntimeError):
    pass


class OdnNode(object):
    """A node of the fibre tree.

    :param str id: Unique node name.

    :param str kind: One of ``CO_OLT``, ``MEC_OLT``, ``RU_ONU`` or
        ``SPLITTER``.

    :param reflect_wavelengths: Channels reflected back down the tree
        (splitters only).

    """
    def __init__(self, id, kind, reflect_wavelengths=()):
        self.id = id
        self.kind = kind
        self.reflect_wavelengths = frozenset(reflect_wavelengths)

    def __repr__(self):
        return 'OdnNode({!r}, {})'.format(self.id, self.kind)


class FiberSpan(object):
    def __init__(self, a, b, length_km):
        self.a = a
        self.b = b
        self.length_km = float(length_km)

    def __repr__(self):
        return 'FiberSpan({!r}, {!r}, {})'.format(self.a, self.b,
                                                   self.length_km)


class VPONSlice(object):
    """A virtual PON: one wavelength, one OLT and its member endpoints.

    Members are normally ``RU_ONU`` nodes. One ``MEC_OLT`` may be a
    member, acting as a pseudo-ONU that receives downstream traffic.

    :param str id: Slice name.

    :param int wavelength: Channel index.

    :param str olt: Node id of the slice's OLT.

    :param members: Node ids of the member endpoints.

    :param int us_rate: Upstream rate, bits/s.

    :param int ds_rate: Downstream rate, bits/s.

    :param int frame_period: Frame period, picoseconds.

    :param str dba: DBA policy, ``sr``, ``codba`` or ``codba_cgs``.

    """
    def __init__(self, id, wavelength, olt, members, us_rate=10 * 10 ** 9,
                 ds_rate=10 * 10 ** 9, frame_period=125 * PS_PER_US,
                 dba='codba_cgs'):
        self.id = id
        self.wavelength = wavelength
        self.olt = olt
        self.members = tuple(members)
        self.us_rate = us_rate
        self.ds_rate = ds_rate
        self.frame_period = frame_period
        self.dba = dba

    def __repr__(self):
        return 'VPONSlice({!r}, wavelength={}, olt={!r})'.format(
            self.id, self.wavelength, self.olt)


class TopologyConfig(object):
    """Complete ODN description.

    :param nodes: :py:class:`OdnNode` objects.

    :param spans: :py:class:`FiberSpan` objects.

    :param slices: :py:class:`VPONSlice` objects.

    :param int propagation_delay_per_km: Picoseconds per kilometre.

    """
    def __init__(self, nodes, spans, slices,
                 propagation_delay_per_km=5 * PS_PER_US):
        self.nodes = {node.id: node for node in nodes}
        self.node_list = list(nodes)
        self.spans = list(spans)
        self.slices = {slice.id: slice for slice in slices}
        self.slice_list = list(slices)
        self.propagation_delay_per_km = propagation_delay_per_km
        self._graph = None
        self._rooted_tree = None

    @property
    def graph(self):
        """Undirected :py:class:`networkx.Graph` of the fibre spans,
        weighted by ``length_km``.

        """
        if self._graph is None:
            graph = networkx.Graph()
            for node in self.node_list:
                graph.add_node(node.id, kind=node.kind)
            for span in self.spans:
                graph.add_edge(span.a, span.b, length_km=span.length_km)
            self._graph = graph
        return self._graph

    def root(self):
        """The central office node, root of the tree."""
        for node in self.node_list:
            if node.kind == CO_OLT:
                return node.id
        return None

    def tree_path(self, a, b):
        return networkx.shortest_path(self.graph, a, b)

    def path_km(self, path):
        graph = self.graph
        return sum(graph.edges[u, v]['length_km']
                   for u, v in zip(path, path[1:]))

    def turning_point(self, a, b):
        """Lowest common ancestor of ``a`` and ``b`` in the tree rooted
        at the central office.

        """
        return networkx.lowest_common_ancestor(
            self._rooted(), a, b)

    def _rooted(self):
        if self._rooted_tree is None:
            self._rooted_tree = networkx.bfs_tree(self.graph, self.root())
        return self._rooted_tree

    def slice_of(self, slice_id):
        return self.slices[slice_id]

    def ru_members(self, slice):
        return [m for m in slice.members
                if self.nodes[m].kind == RU_ONU]

    def pseudo_onus(self, slice):
        return [m for m in slice.members
                if self.nodes[m].kind == MEC_OLT]


def _check_path(cfg, a, b, slice):
    path = cfg.tree_path(a, b)
    if len(path) > 2:
        turn = cfg.turning_point(a, b)
        if turn not in (a, b, slice.olt):
            node = cfg.nodes[turn]
            if (node.kind != SPLITTER
                    or slice.wavelength not in node.reflect_wavelengths):
                raise Unreachable(
                    '{} to {}: {} does not reflect wavelength {}'.format(
                        a, b, turn, slice.wavelength))
    return path


def path_delay_ps(a, b, slice, cfg):
    """Propagation delay between two nodes of a slice, in picoseconds.

    :raises Unreachable: if a node is not part of the slice, or the
        path needs a reflection the slice's wavelength does not get.

    """
    members = set(slice.members) | {slice.olt}
    for node in (a, b):
        if node not in members:
            raise Unreachable('{} is not in slice {}'.format(node, slice.id))
    if a == b:
        return 0
    try:
        path = _check_path(cfg, a, b, slice)
    except (networkx.NetworkXNoPath, networkx.NodeNotFound) as ex:
        raise Unreachable(str(ex))
    return int(round(
        Decimal(repr(cfg.path_km(path))) * cfg.propagation_delay_per_km))


def path_delay(a, b, slice, cfg):
    """Propagation delay between two nodes of a slice, in seconds.

    The delay is the fibre length along the slice's optical path times
    ``cfg.propagation_delay_per_km``. Splitter reflection adds no
    delay.

    :param str a: Node id.

    :param str b: Node id.

    :param VPONSlice slice: The slice the path belongs to.

    :param TopologyConfig cfg: The topology.

    :rtype: float

    """
    return to_seconds(path_delay_ps(a, b, slice, cfg))


def validate_topology(cfg):
    """Check every topology invariant.

    :return: One message per violation. Empty if the topology is good.

    :rtype: list(str)

    """
    result = []
    ids = [node.id for node in cfg.node_list]
    for node_id in sorted(set(ids)):
        if ids.count(node_id) > 1:
            result.append('node {}: duplicate id'.format(node_id))
    for node in cfg.node_list:
        if node.kind not in NODE_KINDS:
            result.append('node {}: unknown kind {}'.format(node.id, node.kind))
    for span in cfg.spans:
        for end in (span.a, span.b):
            if end not in cfg.nodes:
                result.append('span {}-{}: unknown node {}'.format(
                    span.a, span.b, end))
        if span.length_km < 0:
            result.append('span {}-{}: negative length'.format(
                span.a, span.b))
    if result:
        return result
    graph = cfg.graph
    roots = [node.id for node in cfg.node_list if node.kind == CO_OLT]
    if len(roots) != 1:
        result.append('topology: expected one CO_OLT root, found {}'.format(
            len(roots)))
    if not networkx.is_tree(graph):
        result.append('topology: fibre spans do not form a tree')
        return result
    for node in cfg.node_list:
        if node.kind != RU_ONU:
            continue
        splitters = [n for n in graph.neighbors(node.id)
                     if cfg.nodes[n].kind == SPLITTER]
        if graph.degree(node.id) != 1 or len(splitters) != 1:
            result.append(
                'node {}: must attach to exactly one splitter port'.format(
                    node.id))
    if result:
        return result
    # spans used by each slice
    used = {}
    for slice in cfg.slice_list:
        prefix = 'slice {}: '.format(slice.id)
        if slice.olt not in cfg.nodes:
            result.append(prefix + 'unknown olt {}'.format(slice.olt))
            continue
        if cfg.nodes[slice.olt].kind not in (CO_OLT, MEC_OLT):
            result.append(prefix + 'olt {} is not an OLT'.format(slice.olt))
        if not slice.members:
            result.append(prefix + 'no members')
        if slice.olt in slice.members:
            result.append(prefix + 'olt {} is listed as a member'.format(
                slice.olt))
        pseudo = [m for m in slice.members if m in cfg.nodes
                  and m != slice.olt and cfg.nodes[m].kind == MEC_OLT]
        if len(pseudo) > 1:
            result.append(prefix + 'more than one pseudo-ONU')
        spans = set()
        for member in slice.members:
            if member not in cfg.nodes:
                result.append(prefix + 'unknown member {}'.format(member))
                continue
            if member == slice.olt:
                continue
            if cfg.nodes[member].kind not in (RU_ONU, MEC_OLT):
                result.append(prefix + 'member {} is a {}'.format(
                    member, cfg.nodes[member].kind))
                continue
            try:
                path = _check_path(cfg, slice.olt, member, slice)
            except Unreachable as ex:
                result.append(prefix + str(ex))
                continue
            spans.update(frozenset(edge) for edge in zip(path, path[1:]))
        used[slice.id] = spans
        for name in ('us_rate', 'ds_rate', 'frame_period'):
            if not getattr(slice, name) > 0:
                result.append(prefix + '{} must be positive'.format(name))
    slices = cfg.slice_list
    for i, first in enumerate(slices):
        for second in slices[i + 1:]:
            if first.wavelength != second.wavelength:
                continue
            shared = used.get(first.id, set()) & used.get(second.id, set())
            if shared:
                result.append(
                    'slices {} and {}: wavelength {} reused on shared'
                    ' span(s) {}'.format(
                        first.id, second.id, first.wavelength,
                        ', '.join(sorted('-'.join(sorted(edge))
                                         for edge in shared))))
    return result


def reference_topology(n_ru=8, feeder_km=45.0, drop_km=5.0, mec1_km=5.0,
                       mec2_km=5.0, propagation_delay_per_km=5 * PS_PER_US,
                       us_rate=10 * 10 ** 9, ds_rate=10 * 10 ** 9,
                       frame_period=125 * PS_PER_US, dba='codba_cgs'):
    """Build the reference two-slice topology.

    ``tier1`` (wavelength 1) joins the RUs to the OLT at MEC-1, with
    MEC-2 as pseudo-ONU. ``main`` (wavelength 2) joins the same RUs to
    the OLT at the central office.

    :rtype: TopologyConfig

    """
    rus = ['RU-{}'.format(i + 1) for i in range(n_ru)]
    nodes = [OdnNode('CO', CO_OLT),
             OdnNode('SP1', SPLITTER, reflect_wavelengths=(1,)),
             OdnNode('MEC-1', MEC_OLT), OdnNode('MEC-2', MEC_OLT)]
    nodes += [OdnNode(ru, RU_ONU) for ru in rus]
    spans = [FiberSpan('CO', 'SP1', feeder_km),
             FiberSpan('SP1', 'MEC-1', mec1_km),
             FiberSpan('SP1', 'MEC-2', mec2_km)]
    spans += [FiberSpan('SP1', ru, drop_km) for ru in rus]
    rates = dict(us_rate=us_rate, ds_rate=ds_rate, frame_period=frame_period,
                 dba=dba)
    slices = [VPONSlice('tier1', 1, 'MEC-1', rus + ['MEC-2'], **rates),
              VPONSlice('main', 2, 'CO', rus, **rates)]
    return TopologyConfig(nodes, spans, slices, propagation_delay_per_km)
