# -*- coding: utf-8 -*-
#
# Copyright (c) 2026 -- sidforge authors
# All rights reserved.
#
# License: BSD License
#
"""\
Utility functions shared by the tokenizer, evaluation and reassignment modules.

DOES NOT belong to the public API.
"""
import decimal
import numpy as np

__all__ = ('KahanSum', 'round_half_up', 'check_positive', 'check_non_negative',
           'check_probability', 'check_finite', 'l2_normalize_rows', 'parse_int_list')


class KahanSum:
    """\
    Compensated (Kahan) summation accumulator.

    The result of a sequence of :py:meth:`add` calls depends only on the order
    of the values, not on the magnitude drift of a plain float sum.
    """
    __slots__ = ('total', 'compensation', 'count')

    def __init__(self):
        self.total = 0.0
        self.compensation = 0.0
        self.count = 0

    def _add(self, value):
        y = value - self.compensation
        t = self.total + y
        self.compensation = (t - self.total) - y
        self.total = t

    def add(self, value):
        self._add(value)
        self.count += 1

    def merge(self, other):
        """\
        Adds the state of another accumulator. Merging partial sums in a fixed
        order keeps the result deterministic.

        :param KahanSum other: Accumulator to merge.
        """
        self._add(other.total)
        self._add(-other.compensation)
        self.count += other.count

    @property
    def value(self):
        return self.total

    def mean(self):
        """\
        Returns the mean of the added values or ``0.0`` if nothing was added.

        :rtype: float
        """
        return self.total / self.count if self.count else 0.0


def round_half_up(value, places=2):
    """\
    Rounds `value` to `places` decimals, ties away from zero.

    :param float value: The value to round.
    :param int places: Number of decimals (default: 2).
    :rtype: float
    """
    if value is None:
        return None
    quantum = decimal.Decimal(1).scaleb(-places)
    return float(decimal.Decimal(str(float(value))).quantize(quantum, rounding=decimal.ROUND_HALF_UP))


def check_positive(value, name):
    """\
    Raises a :py:exc:`ValueError` iff `value` is not a positive integer.

    :param int value: Value to check.
    :param str name: Parameter name used in the error message.
    """
    if int(value) != value or value < 1:
        raise ValueError('"{0}" must be a positive integer. Got: "{1}"'.format(name, value))


def check_non_negative(value, name):
    """\
    Raises a :py:exc:`ValueError` iff `value` is not a non-negative integer.

    :param int value: Value to check.
    :param str name: Parameter name used in the error message.
    """
    if int(value) != value or value < 0:
        raise ValueError('"{0}" must be a non-negative integer. Got: "{1}"'.format(name, value))


def check_probability(value, name):
    """\
    Raises a :py:exc:`ValueError` iff `value` is not in range [0, 1].

    :param float value: Value to check.
    :param str name: Parameter name used in the error message.
    """
    if not 0.0 <= value <= 1.0:
        raise ValueError('"{0}" must be in range [0, 1]. Got: "{1}"'.format(name, value))


def check_finite(array, name, exc=ValueError):
    """\
    Raises `exc` iff `array` contains NaN or infinite values.

    :param array: A numpy array.
    :param str name: Name used in the error message.
    :param exc: Exception class to raise (default: :py:exc:`ValueError`).
    """
    if not np.all(np.isfinite(array)):
        raise exc('"{0}" contains non-finite values'.format(name))


def l2_normalize_rows(matrix):
    """\
    Returns a float64 copy of `matrix` with unit L2 norm rows. All-zero rows
    stay zero.

    :param matrix: A 2-dimensional array.
    :rtype: numpy.ndarray
    """
    matrix = np.asarray(matrix, dtype=np.float64)
    norms = np.linalg.norm(matrix, axis=1, keepdims=True)
    return np.divide(matrix, norms, out=np.zeros_like(matrix), where=norms > 0)


def parse_int_list(value):
    """\
    Parses a comma separated list of integers, i.e. ``"5,10"``.

    :param str value: The string to parse.
    :rtype: tuple of int
    """
    try:
        res = tuple(int(v) for v in value.split(',') if v.strip())
    except ValueError:
        raise ValueError('Invalid integer list: "{0}"'.format(value))
    if not res:
        raise ValueError('Empty integer list: "{0}"'.format(value))
    return res
