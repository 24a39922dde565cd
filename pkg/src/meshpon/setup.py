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
#  along with this program.  If not, see <http://www.gnu.org/licenses/>.

"""Build helpers shared by the meshpon distribution packages.

Every module in ``meshpon/tools`` that defines ``main`` becomes a
``meshpon-<module>`` command.

"""

import glob
import os

import toml


def find_console_scripts(src_dir=None):
    if src_dir is None:
        metadata = toml.load('pyproject.toml')
        src_dir = metadata['tool']['setuptools']['packages']['find']['where'][0]
    pattern = os.path.join(src_dir, 'meshpon', 'tools', '[!_]*.py')
    return ['meshpon-{0} = meshpon.tools.{0}:main'.format(
        os.path.splitext(os.path.basename(path))[0])
            for path in sorted(glob.glob(pattern))]


def get_setup_parameters():
    # pyproject.toml holds everything else, setuptools >= 61 reads it
    return {'entry_points': {'console_scripts': find_console_scripts()}}
