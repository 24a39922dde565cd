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

import csv
import os

import pytest
import toml

from meshpon.components.io.results import read_summary
from meshpon.core.experiment import results_directory
from meshpon.tools.sim import main

HERE = os.path.dirname(os.path.abspath(__file__))
REFERENCE = os.path.join(os.path.dirname(HERE), 'scenarios', 'reference.toml')


def _write(path, data):
    with open(str(path), 'w') as f:
        toml.dump(data, f)
    return str(path)


@pytest.fixture(scope='module')
def results(tmp_path_factory):
    output = tmp_path_factory.mktemp('results')
    code = main(['run', REFERENCE, '--experiment.duration', '20ms',
                 '--loads', '0.25,0.5', '--seeds', '1', '-o', str(output)])
    assert code == 0
    (name,) = os.listdir(str(output))
    assert name == 'reference'
    (stamp,) = os.listdir(str(output / name))
    return str(output / name / stamp)


def test_validate_reference():
    assert main(['validate', REFERENCE]) == 0


def test_validate_problems(tmp_path, capsys):
    path = _write(tmp_path / 'bad.toml',
                  {'mac': {'dba': 'fifo', 'guard': '1us'}})
    assert main(['validate', path]) == 2
    err = capsys.readouterr().err
    assert 'mac.dba' in err
    assert 'mac.guard: unknown config item' in err


def test_validate_missing_file(tmp_path, capsys):
    assert main(['validate', str(tmp_path / 'none.toml')]) == 2
    assert 'none.toml' in capsys.readouterr().err


def test_run_rejects_bad_option(tmp_path, capsys):
    code = main(['run', REFERENCE, '--mac.guard_time', 'soon',
                 '-o', str(tmp_path)])
    assert code == 2
    assert 'mac.guard_time' in capsys.readouterr().err
    assert os.listdir(str(tmp_path)) == []


def test_run_files(results):
    assert sorted(os.listdir(results)) == [
        'fig2.svg', 'fig3.svg', 'runs.csv', 'scenario.toml',
        'summary.csv']
    used = toml.load(os.path.join(results, 'scenario.toml'))
    assert used['experiment']['loads'] == [0.25, 0.5]
    assert used['experiment']['seeds'] == 1
    rows = read_summary(os.path.join(results, 'summary.csv'))
    assert {row['load'] for row in rows} == {0.25, 0.5}
    with open(os.path.join(results, 'runs.csv')) as f:
        runs = list(csv.DictReader(f))
    assert len(runs) == 2
    assert all(int(run['delivered']) > 0 for run in runs)


def test_compare_identical(results, tmp_path, capsys):
    summary = os.path.join(results, 'summary.csv')
    output = str(tmp_path / 'deltas.csv')
    assert main(['compare', summary, summary, '-o', output]) == 0
    with open(output) as f:
        deltas = list(csv.DictReader(f))
    assert len(deltas) == 8
    for row in deltas:
        for field in ('mean_us', 'p99_us', 'max_us'):
            assert float(row[field]) == 0
    assert 'mean_us' in capsys.readouterr().out


def test_compare_classes(results, tmp_path):
    summary = os.path.join(results, 'summary.csv')
    output = str(tmp_path / 'classes.csv')
    assert main(['compare', summary, summary, '--baseline-class', 'normal',
                 '--candidate-class', 'urllc', '-o', output]) == 0
    with open(output) as f:
        deltas = list(csv.DictReader(f))
    assert {row['class'] for row in deltas} == {'urllc-normal'}
    app = [row for row in deltas if row['point'] == 'APP']
    assert all(float(row['mean_us']) < 0 for row in app)


def test_compare_grid_mismatch(results, tmp_path, capsys):
    summary = os.path.join(results, 'summary.csv')
    with open(summary) as f:
        lines = f.readlines()
    other = tmp_path / 'summary.csv'
    other.write_text(''.join(
        [lines[0]] + [line for line in lines[1:]
                      if not line.startswith('0.5,')]))
    assert main(['compare', summary, str(other),
                 '-o', str(tmp_path / 'x.csv')]) == 3
    assert 'grids differ' in capsys.readouterr().err


def test_compare_default_name(results, tmp_path, monkeypatch):
    summary = os.path.join(results, 'summary.csv')
    monkeypatch.chdir(tmp_path)
    assert main(['compare', summary, summary]) == 0
    stamp = os.path.basename(results)
    assert os.path.exists('{}-vs-{}.csv'.format(stamp, stamp))


def test_compare_missing_file(tmp_path):
    missing = str(tmp_path / 'none.csv')
    assert main(['compare', missing, missing]) == 1


def test_results_directory_never_reused(tmp_path):
    parent = str(tmp_path / 'reference')
    first = results_directory(parent, '20260101-120000')
    second = results_directory(parent, '20260101-120000')
    third = results_directory(parent, '20260101-120000')
    assert os.path.basename(first) == '20260101-120000'
    assert os.path.basename(second) == '20260101-120000-2'
    assert os.path.basename(third) == '20260101-120000-3'
    assert os.listdir(first) == []
