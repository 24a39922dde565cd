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

"""Scenario and component configuration classes.

A scenario is held in a hierarchical tree of named configuration
values. Each leaf node has a fixed type and may have constraints such
as maximum and minimum values. Leaves are created with a default
value::

    cfg = ConfigParent()
    cfg['frame_period'] = ConfigDuration('125us', min_value=1)
    cfg['dba'] = ConfigEnum(choices=('sr', 'codba', 'codba_cgs'))

After that the tree behaves much like a nested dictionary, and dotted
keys reach into child nodes::

    cfg['dba'] = 'codba'
    scenario['mac.frame_period'] = '250us'

Values that break a constraint are *not* silently corrected. They are
stored as given and reported by :py:meth:`ConfigParent.violations`, so
that a bad scenario file is rejected with a list of every problem in
it. Unknown keys are reported the same way.

Every leaf can be set from the command line with a ``--dotted.key``
option, see :py:meth:`ConfigParent.parser_add`.

.. autosummary::
   :nosignatures:

   ConfigMixin
   ConfigParent
   ConfigLeafNode
   BoundedConfigLeafNode
   ConfigInt
   ConfigFloat
   ConfigBool
   ConfigStr
   ChoicesConfigLeafNode
   ConfigEnum
   ConfigDuration
   ConfigRate
   ConfigFloatList

"""

__all__ = ['ConfigMixin', 'ConfigParent', 'ConfigLeafNode',
           'BoundedConfigLeafNode', 'ConfigInt', 'ConfigFloat', 'ConfigBool',
           'ConfigStr', 'ChoicesConfigLeafNode', 'ConfigEnum',
           'ConfigDuration', 'ConfigRate', 'ConfigFloatList']
__docformat__ = 'restructuredtext en'

import argparse
import logging

from meshpon.core.units import (
    format_duration, parse_duration, parse_rate)

logger = logging.getLogger(__name__)


class ConfigLeafNode(object):
    """Behaviour shared by all scenario settings.

    Each concrete setting combines this mixin with an immutable builtin
    (:py:class:`int`, :py:class:`float` or :py:class:`str`), so a
    setting compares and computes like a plain value while carrying
    its default, its limits and its help text.

    :param value: the starting value, also kept as ``default``.

    :param str doc: help text for the matching CLI option.

    :param kwds: extra attributes stored on the node.

    """
    has_default = True  #: ``default`` is meaningful.
    enabled = True      #: Setting is in use.
    doc = ''

    def __new__(cls, value, **kwds):
        self = super(ConfigLeafNode, cls).__new__(cls, value)
        self.default = value
        for key, value in kwds.items():
            setattr(self, key, value)
        return self

    def parser_add(self, parser, key):
        """Add an option to a :py:mod:`argparse` CLI parser.

        The default is suppressed, so only options given on the command
        line appear in the parsed :py:class:`argparse.Namespace`.

        """
        parser.add_argument(
            '--' + key, dest=key, default=argparse.SUPPRESS,
            help='{} (default: {})'.format(self.doc, self.to_plain()),
            **self._parser_kw())

    def check(self):
        """List of reasons why the current value is unacceptable."""
        return []

    def to_plain(self):
        """The value as a plain Python type, e.g. for TOML output."""
        return self

    def update(self, value):
        """Return a node of the same kind holding ``value``. Limits
        and the original default carry over.

        """
        kwds = dict(vars(self))
        default = kwds.pop('default')
        result = self.__class__(value, **kwds)
        result.default = default
        return result

    def copy(self):
        return self.update(self)


class BoundedConfigLeafNode(ConfigLeafNode):
    """A numeric setting with optional limits.

    Out of range values are stored as given. :py:meth:`check` reports
    them, so a scenario file shows every problem at once instead of
    silently clamping.

    :param value: starting value.
    :type value: int or float

    :param min_value: lowest acceptable value, or :py:obj:`None`.

    :param max_value: highest acceptable value, or :py:obj:`None`.

    :param bool exclusive: the limits themselves are not acceptable,
        e.g. a ratio in (0, 1).

    """
    def __new__(cls, value, min_value=None, max_value=None, exclusive=False,
                **kwds):
        return super(BoundedConfigLeafNode, cls).__new__(
            cls, value, min_value=min_value, max_value=max_value,
            exclusive=exclusive, **kwds)

    def check(self):
        result = []
        if self.min_value is not None:
            if self < self.min_value or (
                    self.exclusive and self == self.min_value):
                result.append('{} is below minimum {}'.format(
                    self.to_plain(), self._show(self.min_value)))
        if self.max_value is not None:
            if self > self.max_value or (
                    self.exclusive and self == self.max_value):
                result.append('{} is above maximum {}'.format(
                    self.to_plain(), self._show(self.max_value)))
        return result

    def _show(self, value):
        return value


class ConfigInt(BoundedConfigLeafNode, int):
    """Whole number setting. Floats are accepted only if integral."""
    def __new__(cls, value=0, **kwds):
        if isinstance(value, float) and not value.is_integer():
            raise ValueError('not an integer: {!r}'.format(value))
        return super(ConfigInt, cls).__new__(cls, int(value), **kwds)

    def to_plain(self):
        return int(self)

    @staticmethod
    def _parser_kw():
        return {'type' : int, 'metavar' : 'n'}


def _parse_bool(value):
    if isinstance(value, str):
        lower = value.lower()
        if lower in ('on', 'true', 'yes', '1'):
            return True
        if lower in ('off', 'false', 'no', '0'):
            return False
        raise ValueError('not a boolean: {!r}'.format(value))
    return bool(value)


class ConfigBool(ConfigLeafNode, int):
    """On/off setting.

    Strings such as ``'on'``, ``'no'`` or ``'true'`` are understood,
    anything else goes through :py:func:`bool`.

    """
    def __new__(cls, value=False, **kwds):
        return super(ConfigBool, cls).__new__(cls, _parse_bool(value), **kwds)

    def __repr__(self):
        return str(bool(self))

    def __str__(self):
        return str(bool(self))

    def to_plain(self):
        return bool(self)

    @staticmethod
    def _parser_kw():
        return {'type' : _parse_bool, 'metavar' : 'on|off'}


class ConfigFloat(BoundedConfigLeafNode, float):
    """Real valued setting."""
    def __new__(cls, value=0.0, **kwds):
        return super(ConfigFloat, cls).__new__(cls, float(value), **kwds)

    def to_plain(self):
        return float(self)

    @staticmethod
    def _parser_kw():
        return {'type' : float, 'metavar' : 'x'}


class ConfigStr(ConfigLeafNode, str):
    """Free text setting."""
    def __new__(cls, value='', **kwds):
        if not isinstance(value, str):
            raise ValueError('not a string: {!r}'.format(value))
        return super(ConfigStr, cls).__new__(cls, value, **kwds)

    def to_plain(self):
        return str(self)

    @staticmethod
    def _parser_kw():
        return {'metavar' : 'str'}


class ChoicesConfigLeafNode(ConfigLeafNode):
    """A setting restricted to a fixed set of values.

    :param list choices: the acceptable values. With no ``value`` the
        first choice becomes the default.

    """
    def __new__(cls, value=None, choices=[], **kwds):
        choices = list(choices)
        if choices and value is None:
            value = choices[0]
        return super(ChoicesConfigLeafNode, cls).__new__(
            cls, value, choices=choices, **kwds)

    def check(self):
        if self not in self.choices:
            return ['{!r} is not one of {}'.format(
                self.to_plain(), ', '.join(map(str, self.choices)))]
        return []


class ConfigEnum(ChoicesConfigLeafNode, str):
    """Policy names and similar keywords, e.g. ``dba = 'codba_cgs'``."""
    def to_plain(self):
        return str(self)

    def _parser_kw(self):
        return {'metavar' : 'str', 'choices': self.choices}


class ConfigDuration(BoundedConfigLeafNode, int):
    """Duration configuration node, stored as integer picoseconds.

    Accepts anything :py:func:`~meshpon.core.units.parse_duration`
    does, e.g. ``'500us'``, ``'0.5ms'`` or ``5e-4``. Bounds are given
    in the same way.

    """
    def __new__(cls, value=0, min_value=None, max_value=None, **kwds):
        if not isinstance(value, ConfigDuration):
            value = parse_duration(value)
        if min_value is not None:
            min_value = _as_duration(min_value)
        if max_value is not None:
            max_value = _as_duration(max_value)
        return super(ConfigDuration, cls).__new__(
            cls, int(value), min_value=min_value, max_value=max_value, **kwds)

    def __repr__(self):
        return format_duration(int(self))

    def __str__(self):
        return format_duration(int(self))

    def to_plain(self):
        return format_duration(int(self))

    def _show(self, value):
        return format_duration(value)

    @staticmethod
    def _parser_kw():
        return {'metavar' : 'duration'}


def _as_duration(value):
    if isinstance(value, int) and not isinstance(value, bool):
        # bounds given as int are already picoseconds
        return value
    return parse_duration(value)


class ConfigRate(BoundedConfigLeafNode, int):
    """Link rate configuration node, stored as integer bits/s.

    Accepts e.g. ``'10G'``, ``'2.5 Gb/s'`` or ``10e9``.

    """
    def __new__(cls, value=0, **kwds):
        return super(ConfigRate, cls).__new__(cls, parse_rate(value), **kwds)

    def to_plain(self):
        value = int(self)
        for scale, unit in ((10 ** 12, 'T'), (10 ** 9, 'G'),
                            (10 ** 6, 'M'), (10 ** 3, 'k')):
            if value and value % scale == 0:
                return '{}{}'.format(value // scale, unit)
        return value

    @staticmethod
    def _parser_kw():
        return {'metavar' : 'rate'}


class ConfigFloatList(ConfigLeafNode, tuple):
    """List of numbers, e.g. a load sweep.

    A comma separated string such as ``'0.25,0.5,0.75'`` is accepted.
    Values above 1 are read as percentages when ``percent`` is set.

    """
    def __new__(cls, value=(), min_value=None, max_value=None, percent=False,
                exclusive=False, **kwds):
        if isinstance(value, str):
            value = [x for x in value.replace(' ', '').split(',') if x]
        value = [float(x) for x in value]
        if percent and any(x > 1 for x in value):
            value = [x / 100.0 for x in value]
        return super(ConfigFloatList, cls).__new__(
            cls, tuple(value), min_value=min_value, max_value=max_value,
            percent=percent, exclusive=exclusive, **kwds)

    def check(self):
        result = []
        if not self:
            result.append('list is empty')
        for x in self:
            if self.min_value is not None and (
                    x < self.min_value or (
                        self.exclusive and x == self.min_value)):
                result.append('{} is below minimum {}'.format(
                    x, self.min_value))
            if self.max_value is not None and (
                    x > self.max_value or (
                        self.exclusive and x == self.max_value)):
                result.append('{} is above maximum {}'.format(
                    x, self.max_value))
        return result

    def to_plain(self):
        return list(self)

    @staticmethod
    def _parser_kw():
        return {'metavar' : 'x,y,...'}


class ConfigParent(object):
    """A named group of settings, such as ``[scenario.mac]``.

    Children are leaves or further groups, held in a :py:class:`dict`.
    Any leaf can be read or written from the top of the tree with a
    dotted key like ``'mac.guard_time'``.

    """
    _attributes = ('_value', 'default', 'has_default', '_errors', 'enabled')

    def __init__(self):
        super(ConfigParent, self).__init__()
        self._value = {}
        self._errors = []
        self.default = {}
        self.has_default = True
        self.enabled = True

    def __repr__(self):
        return repr(self._value)

    def __getattr__(self, name):
        if name not in self._attributes:
            try:
                return self[name]
            except KeyError:
                raise AttributeError(name)
        return super(ConfigParent, self).__getattr__(name)

    def __setattr__(self, name, value):
        if name not in self._attributes:
            self[name] = value
            return
        super(ConfigParent, self).__setattr__(name, value)

    def __len__(self):
        return len(self._value)

    def __contains__(self, key):
        try:
            self[key]
        except (KeyError, TypeError):
            return False
        return True

    def __getitem__(self, key):
        child, sep, grandchild = key.partition('.')
        if grandchild:
            return self[child][grandchild]
        return self._value[key]

    def __setitem__(self, key, value):
        if key in self._value:
            node = self._value[key]
            if isinstance(node, ConfigParent):
                if isinstance(value, ConfigParent):
                    self._value[key] = value
                elif isinstance(value, dict):
                    node.update(value)
                else:
                    self._errors.append((key, 'expected a table'))
                return
            try:
                self._value[key] = node.update(value)
            except (TypeError, ValueError) as ex:
                self._errors.append((key, str(ex)))
            return
        child, sep, grandchild = key.partition('.')
        if grandchild and isinstance(self._value.get(child), ConfigParent):
            self[child][grandchild] = value
            return
        if isinstance(value, (ConfigLeafNode, ConfigParent)):
            self._value[key] = value
            return
        logger.error('unknown config item: %s, %s', key, value)
        self._errors.append((key, 'unknown config item'))

    def __iter__(self):
        yield from self._value

    def items(self):
        for key in self:
            yield key, self[key]

    def values(self):
        for key in self:
            yield self[key]

    def keys(self):
        for key in self:
            yield key

    def violations(self, prefix=''):
        """Every unacceptable or unknown value in the tree.

        :return: ``'dotted.key: message'`` strings, in tree order.

        :rtype: list(str)

        """
        result = ['{}{}: {}'.format(prefix, key, msg)
                  for key, msg in self._errors]
        for key, value in self._value.items():
            if isinstance(value, ConfigParent):
                result += value.violations(prefix + key + '.')
            else:
                result += ['{}{}: {}'.format(prefix, key, msg)
                           for msg in value.check()]
        return result

    def leaves(self, prefix=''):
        """Yield ``(dotted_key, leaf)`` for every leaf in the tree."""
        for key, value in self._value.items():
            if isinstance(value, ConfigParent):
                yield from value.leaves(prefix + key + '.')
            else:
                yield prefix + key, value

    def to_dict(self, all_values=False):
        """Nested :py:class:`dict` of plain values.

        :keyword bool all_values: Include values equal to their
            default. Otherwise only the changed values are returned.

        """
        result = {}
        for key, value in self._value.items():
            if isinstance(value, ConfigParent):
                child_value = value.to_dict(all_values=all_values)
                if child_value:
                    result[key] = child_value
                continue
            if not value.enabled or (
                    not all_values and value.has_default
                    and value == value.default):
                continue
            result[key] = value.to_plain()
        return result

    def audit_string(self):
        """Generate a one line per item summary of the non-default
        settings, e.g. for the log or a results file header.

        """
        return ''.join('    {}: {}\n'.format(key, value.to_plain())
                       for key, value in self.leaves()
                       if not (value.has_default and value == value.default))

    def parser_add(self, parser, prefix=''):
        """Give ``parser`` one ``--group.item`` option per leaf.

        :param argparse.ArgumentParser parser: parser to extend.

        :keyword str prefix: dotted path of this group.

        """
        if prefix:
            prefix += '.'
        for key, value in self._value.items():
            value.parser_add(parser, prefix + key)

    def parser_set(self, args):
        """Copy command line overrides into the tree.

        Namespace attributes that are not settings, such as ``--loads``
        or ``-o``, are ignored.

        """
        for key, value in vars(args).items():
            if value is not None and key in self:
                self[key] = value

    def update(self, value):
        for key, value in value.items():
            self[key] = value
        return self

    def copy(self):
        copy = self.__class__()
        for key, value in self._value.items():
            copy._value[key] = value.copy()
        copy._errors = list(self._errors)
        return copy


class ConfigMixin(object):
    """Gives a component its own :py:attr:`config` tree."""
    def __init__(self, **kwds):
        super(ConfigMixin, self).__init__(**kwds)
        self.config = ConfigParent()

