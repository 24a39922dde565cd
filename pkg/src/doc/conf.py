# meshpon - mesh PON fronthaul latency simulator.
# Copyright (C) 2026  meshpon contributors
#
# This file is part of meshpon.
#
# meshpon is free software: you can redistribute it and/or
# modify it under the terms of the GNU General Public License as
# published by the Free Software Foundation, either version 3 of the
# License, or (at your option) any later version.
#
# meshpon is distributed in the hope that it will be useful,
# but WITHOUT ANY WARRANTY; without even the implied warranty of
# MERCHANTABILITY or FITNESS FOR A PARTICULAR PURPOSE.  See the GNU
# General Public License for more details.
#
# You should have received a copy of the GNU General Public License
# along with meshpon.  If not, see <http://www.gnu.org/licenses/>.

import os
import site
import sys

import toml

site.addsitedir(os.path.abspath('..'))

# -- General configuration -----------------------------------------------------

extensions = ['sphinx.ext.autodoc', 'sphinx.ext.autosummary',
              'sphinx.ext.viewcode', 'sphinx.ext.intersphinx']

autoclass_content = 'class'
autodoc_member_order = 'bysource'
autodoc_default_options = {
    'members': True,
    'show-inheritance': True,
    }

intersphinx_mapping = {
    'python': ('https://docs.python.org/3', None),
    'numpy': ('https://numpy.org/doc/stable/', None),
    'networkx': ('https://networkx.org/documentation/stable/', None),
    }

keep_warnings = True

source_suffix = {'.rst': 'restructuredtext'}
master_doc = 'index'

project = u'meshpon'
copyright = u'2026, meshpon contributors'

release = toml.load('../../pyproject.toml')['project']['version']
version = '.'.join(release.split('.')[0:2])

# search installed package for modules to document
try:
    import meshpon
except ImportError:
    print("meshpon is not installed")
    sys.exit(1)
modules = []
# pkgutil.walk_packages doesn't work with namespace packages, so we do
# a simple file search instead
for path in meshpon.__path__:
    depth = len(path.split(os.path.sep)) - 1
    for root, dirs, files in os.walk(path):
        parts = root.split(os.path.sep)
        if parts[-1] == '__pycache__':
            continue
        parts = parts[depth:]
        if len(parts) > 1:
            module = {'name': '.'.join(parts), 'ispkg': True,
                      'depth': len(parts)}
            if module not in modules:
                modules.append(module)
        for name in files:
            base, ext = os.path.splitext(name)
            if base in ('__init__', 'setup') or ext != '.py':
                continue
            module = {'name': '.'.join(parts + [base]), 'ispkg': False,
                      'depth': len(parts) + 1}
            if module not in modules:
                modules.append(module)
modules.sort(key=lambda x: x['name'])


def update_file(path, new_contents):
    if os.path.exists(path):
        with open(path) as f:
            if f.read() == new_contents:
                return
    with open(path, 'w') as f:
        f.write(new_contents)


# one page per package, listing its modules
for package in [x for x in modules if x['ispkg']]:
    dir_name = os.path.join('api', package['name'].split('.')[1])
    os.makedirs(dir_name, exist_ok=True)
    title = '.'.join(package['name'].split('.')[1:])
    text = title + '\n' + ('=' * len(title)) + '\n\n'
    text += '.. toctree::\n   :maxdepth: 1\n\n'
    for module in modules:
        if (module['depth'] == package['depth'] + 1
                and module['name'].startswith(package['name'] + '.')):
            text += '   ' + module['name'] + '\n'
    update_file(os.path.join(dir_name, package['name'] + '.rst'), text)

# module stubs
for module in [x for x in modules if not x['ispkg']]:
    dir_name = os.path.join('api', module['name'].split('.')[1])
    os.makedirs(dir_name, exist_ok=True)
    title = '.'.join(module['name'].split('.')[1:])
    text = title + '\n' + ('=' * len(title)) + '\n\n'
    text += '.. automodule:: ' + module['name'] + '\n'
    if module['name'].startswith('meshpon.components'):
        text += '   :exclude-members: on_start, on_stop\n'
    update_file(os.path.join(dir_name, module['name'] + '.rst'), text + '\n')

exclude_patterns = []

add_function_parentheses = False
add_module_names = False

pygments_style = 'sphinx'

# -- Options for HTML output ---------------------------------------------------

html_theme = 'alabaster'

htmlhelp_basename = 'meshpondoc'

# -- Options for manual page output --------------------------------------------

man_pages = [
    ('manual/cli', 'meshpon-sim', u'mesh PON fronthaul latency simulator',
     [u'meshpon contributors'], 1)
]
