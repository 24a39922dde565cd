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

from meshpon.components.topology.odn import (
    CO_OLT, MEC_OLT, RU_ONU, SPLITTER, FiberSpan, OdnNode, TopologyConfig,
    Unreachable, VPONSlice, path_delay, path_delay_ps, reference_topology,
    validate_topology)

US = 10 ** 6


@pytest.fixture
def topo():
    return reference_topology()


def test_reference_is_valid(topo):
    assert validate_topology(topo) == []
    assert topo.ru_members(topo.slices['tier1']) == [
        'RU-{}'.format(i + 1) for i in range(8)]
    assert topo.pseudo_onus(topo.slices['tier1']) == ['MEC-2']
    assert topo.pseudo_onus(topo.slices['main']) == []


def test_path_delays(topo):
    tier1 = topo.slices['tier1']
    main = topo.slices['main']
    # RU -> SP1 -> MEC-1, reflected at SP1
    assert path_delay_ps('RU-1', 'MEC-1', tier1, topo) == 50 * US
    assert path_delay('RU-1', 'MEC-1', tier1, topo) == pytest.approx(50e-6)
    assert path_delay_ps('MEC-1', 'MEC-2', tier1, topo) == 50 * US
    assert path_delay_ps('RU-3', 'CO', main, topo) == 250 * US
    assert path_delay_ps('RU-3', 'RU-3', main, topo) == 0


def test_path_is_symmetric(topo):
    tier1 = topo.slices['tier1']
    assert (path_delay_ps('MEC-2', 'RU-5', tier1, topo)
            == path_delay_ps('RU-5', 'MEC-2', tier1, topo))


def test_unreachable(topo):
    main = topo.slices['main']
    # MEC-1 is not a member of main
    with pytest.raises(Unreachable):
        path_delay_ps('RU-1', 'MEC-1', main, topo)
    # wavelength 2 is not reflected at SP1
    with pytest.raises(Unreachable):
        path_delay_ps('RU-1', 'RU-2', main, topo)


def _tree(slices, reflect=(1,)):
    nodes = [OdnNode('CO', CO_OLT),
             OdnNode('SP1', SPLITTER, reflect_wavelengths=reflect),
             OdnNode('MEC-1', MEC_OLT),
             OdnNode('RU-1', RU_ONU), OdnNode('RU-2', RU_ONU)]
    spans = [FiberSpan('CO', 'SP1', 20), FiberSpan('SP1', 'MEC-1', 2),
             FiberSpan('SP1', 'RU-1', 1), FiberSpan('SP1', 'RU-2', 1)]
    return TopologyConfig(nodes, spans, slices)


def test_duplicate_wavelength_on_shared_span():
    topo = _tree([VPONSlice('a', 1, 'MEC-1', ['RU-1']),
                  VPONSlice('b', 1, 'CO', ['RU-1', 'RU-2'])])
    violations = validate_topology(topo)
    assert len(violations) == 1
    assert violations[0].startswith('slices a and b: wavelength 1 reused')
    assert 'RU-1-SP1' in violations[0]


def test_same_wavelength_on_disjoint_spans():
    topo = _tree([VPONSlice('a', 1, 'MEC-1', ['RU-1']),
                  VPONSlice('b', 1, 'CO', ['RU-2'])])
    assert validate_topology(topo) == []


def test_missing_reflection():
    topo = _tree([VPONSlice('a', 1, 'MEC-1', ['RU-1'])], reflect=())
    assert validate_topology(topo) == [
        'slice a: MEC-1 to RU-1: SP1 does not reflect wavelength 1']


def test_not_a_tree():
    topo = _tree([])
    topo.spans.append(FiberSpan('MEC-1', 'RU-1', 1))
    assert validate_topology(topo) == [
        'topology: fibre spans do not form a tree']


def test_structure_errors():
    topo = TopologyConfig(
        [OdnNode('CO', CO_OLT), OdnNode('RU-1', RU_ONU),
         OdnNode('X', 'ROUTER')],
        [FiberSpan('CO', 'RU-1', 1), FiberSpan('CO', 'Y', -1)], [])
    violations = validate_topology(topo)
    assert 'node X: unknown kind ROUTER' in violations
    assert 'span CO-Y: unknown node Y' in violations
    assert 'span CO-Y: negative length' in violations


def test_ru_must_hang_off_a_splitter():
    topo = TopologyConfig(
        [OdnNode('CO', CO_OLT), OdnNode('RU-1', RU_ONU)],
        [FiberSpan('CO', 'RU-1', 1)], [])
    assert validate_topology(topo) == [
        'node RU-1: must attach to exactly one splitter port']


def test_slice_errors():
    topo = _tree([VPONSlice('a', 1, 'RU-1', ['RU-2']),
                  VPONSlice('b', 2, 'CO', ['RU-1', 'NOPE'],
                            frame_period=0)])
    violations = validate_topology(topo)
    assert 'slice a: olt RU-1 is not an OLT' in violations
    assert 'slice b: unknown member NOPE' in violations
    assert 'slice b: frame_period must be positive' in violations
