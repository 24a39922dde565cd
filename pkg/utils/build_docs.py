#  meshpon - mesh PON fronthaul latency simulator.
#  Copyright (C) 2026  meshpon contributors
#
#  This file is part of meshpon.
#
#  meshpon is free software: you can redistribute it and/or
#  modify it under the terms of the GNU General Public License as
#  published by the Free Software Foundation, either version 3 of the
#  License, or (at your option) any later version.
#
#  meshpon is distributed in the hope that it will be useful,
#  but WITHOUT ANY WARRANTY; without even the implied warranty of
#  MERCHANTABILITY or FITNESS FOR A PARTICULAR PURPOSE.  See the GNU
#  General Public License for more details.
#
#  You should have received a copy of the GNU General Public License
#  along with meshpon.  If not, see <http://www.gnu.org/licenses/>.

import argparse
import os
import shutil
import sys

from sphinx.application import Sphinx


def main(argv=None):
    parser = argparse.ArgumentParser(description='Build the documentation.')
    parser.add_argument('builders', nargs='*', default=['html'],
                        help='Sphinx builders, e.g. html man')
    parser.add_argument('--clean', action='store_true',
                        help='remove previous output first')
    args = parser.parse_args(argv)
    root = os.path.dirname(os.path.dirname(os.path.realpath(__file__)))
    src_dir = os.path.join(root, 'src', 'doc')
    # API stubs are regenerated by conf.py
    shutil.rmtree(os.path.join(src_dir, 'api'), ignore_errors=True)
    for builder in args.builders:
        dst_dir = os.path.join(root, 'doc', builder)
        doctree_dir = os.path.join(root, 'doctrees', builder)
        if args.clean:
            shutil.rmtree(dst_dir, ignore_errors=True)
        app = Sphinx(src_dir, src_dir, dst_dir, doctree_dir, builder,
                     freshenv=True)
        app.build()
        if app.statuscode:
            return app.statuscode
    return 0


if __name__ == "__main__":
    sys.exit(main())
