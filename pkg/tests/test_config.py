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

import argparse

import pytest

from meshpon.core.config import (
    ConfigBool, ConfigDuration, ConfigEnum, ConfigFloat, ConfigFloatList,
    ConfigInt, ConfigParent, ConfigRate, ConfigStr)


@pytest.fixture
def tree():
    cfg = ConfigParent()
    cfg['mac'] = ConfigParent()
    cfg['mac']['frame_period'] = ConfigDuration('125us', min_value=1)
    cfg['mac']['us_rate'] = ConfigRate('10G')
    cfg['mac']['dba'] = ConfigEnum(choices=('sr', 'codba', 'codba_cgs'),
                                   value='codba_cgs')
    cfg['mac']['polling'] = ConfigBool(True)
    cfg['share'] = ConfigFloat(0.1, min_value=0, max_value=1, exclusive=True)
    cfg['seeds'] = ConfigInt(3, min_value=1)
    cfg['name'] = ConfigStr('reference')
    cfg['loads'] = ConfigFloatList('0.25,0.5', min_value=0, max_value=1,
                                   exclusive=True, percent=True)
    return cfg


def test_dotted_keys(tree):
    assert tree['mac.frame_period'] == 125 * 10 ** 6
    tree['mac.frame_period'] = '250us'
    assert tree['mac']['frame_period'] == 250 * 10 ** 6
    assert 'mac.dba' in tree
    assert 'mac.nothing' not in tree


def test_duration_units(tree):
    tree['mac.frame_period'] = 0.000125
    assert tree['mac.frame_period'] == 125 * 10 ** 6
    assert tree['mac.frame_period'].to_plain() == '125us'
    # plain int means seconds
    tree['mac.frame_period'] = 1
    assert tree['mac.frame_period'] == 10 ** 12


def test_rate(tree):
    tree['mac.us_rate'] = '2.5G'
    assert tree['mac.us_rate'] == 2500 * 10 ** 6
    assert tree['mac.us_rate'].to_plain() == '2500M'


def test_bounds_are_reported_not_clamped(tree):
    tree['share'] = 1.0
    tree['seeds'] = 0
    assert tree['share'] == 1.0
    assert tree['seeds'] == 0
    violations = tree.violations()
    assert len(violations) == 2
    assert violations[0].startswith('share: ')
    assert violations[1].startswith('seeds: ')


def test_enum_choice(tree):
    tree['mac.dba'] = 'fifo'
    assert tree.violations() == [
        "mac.dba: 'fifo' is not one of sr, codba, codba_cgs"]


def test_unknown_and_bad_values(tree):
    tree.update({'mac': {'colour': 'blue'}, 'seeds': 'many'})
    violations = tree.violations()
    assert 'mac.colour: unknown config item' in violations
    assert any(v.startswith('seeds: ') for v in violations)
    # bad value leaves the old one
    assert tree['seeds'] == 3


def test_load_list_percentages(tree):
    tree['loads'] = [25, 50, 95]
    assert tree['loads'] == (0.25, 0.5, 0.95)
    tree['loads'] = '0.5,1.0'
    assert tree.violations() == ['loads: 1.0 is above maximum 1']


def test_to_dict(tree):
    assert tree.to_dict() == {}
    tree['mac.polling'] = False
    assert tree.to_dict() == {'mac': {'polling': False}}
    full = tree.to_dict(all_values=True)
    assert full['mac']['frame_period'] == '125us'
    assert full['mac']['us_rate'] == '10G'
    assert full['loads'] == [0.25, 0.5]


def test_copy_is_independent(tree):
    copy = tree.copy()
    copy['mac.frame_period'] = '250us'
    assert tree['mac.frame_period'] == 125 * 10 ** 6


def test_parser(tree):
    parser = argparse.ArgumentParser()
    parser.add_argument('--other')
    tree.parser_add(parser)
    args = parser.parse_args(['--mac.frame_period', '250us',
                              '--mac.polling', 'off', '--other', 'x'])
    assert not hasattr(args, 'seeds')
    tree.parser_set(args)
    assert tree['mac.frame_period'] == 250 * 10 ** 6
    assert not tree['mac.polling']
    assert tree['seeds'] == 3
    assert tree.audit_string() == (
        '    mac.frame_period: 250us\n    mac.polling: False\n')
