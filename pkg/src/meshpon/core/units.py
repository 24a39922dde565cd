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

"""meshpon time and rate units.

Simulated time is held as an integer count of picoseconds. Frame
(125 µs) and slot (250 µs, 500 µs) boundaries are then exact integers
and compare without rounding ties. Seconds appear only at the edges of
the API, e.g. in scenario files and reports.

Durations in scenario files may be written with a unit suffix::

    >>> parse_duration('500us')
    500000000
    >>> parse_duration('0.125 ms')
    125000000

and link rates with an SI multiplier::

    >>> parse_rate('10G')
    10000000000

"""

__all__ = ['PS_PER_SECOND', 'PS_PER_US', 'to_ps', 'to_seconds', 'to_us',
           'parse_duration', 'format_duration', 'parse_rate',
           'serialize_ps', 'bytes_in_ps', 'ceil_div']
__docformat__ = 'restructuredtext en'

from decimal import Decimal, InvalidOperation
import re

PS_PER_SECOND = 10 ** 12
PS_PER_US = 10 ** 6

_duration_units = {
    's': 10 ** 12, 'ms': 10 ** 9, 'us': 10 ** 6, 'µs': 10 ** 6,
    'ns': 10 ** 3, 'ps': 1,
    }
_rate_units = {'': 1, 'k': 10 ** 3, 'M': 10 ** 6, 'G': 10 ** 9, 'T': 10 ** 12}
_number = r'\s*([-+]?[0-9]*\.?[0-9]+(?:[eE][-+]?[0-9]+)?)\s*'
_duration_re = re.compile(_number + r'(s|ms|us|µs|ns|ps)?\s*$')
_rate_re = re.compile(_number + r'([kMGT]?)(?:b/s|bps)?\s*$')


def ceil_div(a, b):
    return -(-a // b)


def to_ps(seconds):
    """Convert seconds to the nearest integer picosecond."""
    if isinstance(seconds, str):
        return parse_duration(seconds)
    return int(round(Decimal(repr(float(seconds))) * PS_PER_SECOND))


def to_seconds(ps):
    return ps / PS_PER_SECOND


def to_us(ps):
    return ps / PS_PER_US


def parse_duration(value):
    """Convert a duration to integer picoseconds.

    :param value: A number of seconds, or a string with an optional
        unit suffix (``s``, ``ms``, ``us``, ``ns`` or ``ps``). A bare
        number in a string is taken as seconds.

    :rtype: int

    """
    if isinstance(value, bool):
        raise ValueError('not a duration: {!r}'.format(value))
    if isinstance(value, int):
        return value * PS_PER_SECOND
    if isinstance(value, float):
        return to_ps(value)
    match = _duration_re.match(str(value))
    if not match:
        raise ValueError('not a duration: {!r}'.format(value))
    number, unit = match.groups()
    try:
        result = Decimal(number) * _duration_units[unit or 's']
    except InvalidOperation:
        raise ValueError('not a duration: {!r}'.format(value))
    return int(result.to_integral_value())


def format_duration(ps):
    """Inverse of :py:func:`parse_duration`, choosing a short unit."""
    for unit in ('s', 'ms', 'us', 'ns'):
        scale = _duration_units[unit]
        if ps and ps % scale == 0:
            return '{}{}'.format(ps // scale, unit)
    if ps % PS_PER_US == 0 or abs(ps) >= PS_PER_US:
        return '{}us'.format(Decimal(ps) / PS_PER_US)
    return '{}ps'.format(ps)


def parse_rate(value):
    """Convert a link rate to integer bits per second.

    :param value: A number, or a string such as ``'10G'`` or
        ``'2.5 Gb/s'``.

    :rtype: int

    """
    if isinstance(value, bool):
        raise ValueError('not a rate: {!r}'.format(value))
    if isinstance(value, (int, float)):
        return int(round(value))
    match = _rate_re.match(str(value))
    if not match:
        raise ValueError('not a rate: {!r}'.format(value))
    number, unit = match.groups()
    return int((Decimal(number) * _rate_units[unit]).to_integral_value())


def serialize_ps(nbytes, rate):
    """Time to send ``nbytes`` at ``rate`` bits/s, rounded up to a
    whole picosecond so that a transmission never ends early.

    """
    return ceil_div(int(nbytes) * 8 * PS_PER_SECOND, int(rate))


def bytes_in_ps(duration, rate):
    """Whole bytes that can be sent in ``duration`` picoseconds."""
    return (int(duration) * int(rate)) // (8 * PS_PER_SECOND)
