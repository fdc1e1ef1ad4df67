# -*- coding: utf-8 -*-
#
# Copyright (c) 2026 -- sidforge authors
# All rights reserved.
#
# License: BSD License
#
"""\
Collision statistics, prefix-group analysis and the last-level capacity check.
"""
import logging
from collections import namedtuple, Counter
from . import consts
from .utils import round_half_up

__all__ = ('CollisionStats', 'PrefixGroupTable', 'CapacityResult', 'collision_stats',
           'coll_percent_from_histogram', 'prefix_groups', 'capacity_check',
           'EmptyIndex', 'SidTooShort')

logger = logging.getLogger(__name__)


class EmptyIndex(ValueError):
    """\
    Indicates that statistics were requested for an index without items.
    """


class SidTooShort(ValueError):
    """\
    Indicates that prefix groups were requested for SIDs of length < 2.
    """


CollisionStats = namedtuple('CollisionStats', 'coll_percent g_max histogram n_items')
"""\
``coll_percent``: percentage of items whose SID is shared with another item,
``g_max``: size of the largest collision group, ``histogram``: group size -> number
of groups (size 1 included), ``n_items``: N.
"""


class CapacityResult(namedtuple('CapacityResult', 'satisfied max_size mean_size violating_prefixes')):
    """\
    Result of :py:func:`capacity_check`.
    """
    __slots__ = ()

    @property
    def summary(self):
        """\
        Returns the ``"max (mean)"`` representation, i.e. ``"65 (1.02)"``.

        :rtype: str
        """
        return '{0} ({1:.2f})'.format(self.max_size, round_half_up(self.mean_size, consts.REPORT_PLACES))


def collision_stats(index):
    """\
    Computes the collision statistics of the provided index.

    :param core.SidIndex index: The index.
    :raises: :py:exc:`EmptyIndex` if the index has no items.
    :rtype: CollisionStats
    """
    n = index.n_items
    if not n:
        raise EmptyIndex('Cannot compute collision statistics of an empty index')
    shared = 0
    g_max = 0
    histogram = Counter()
    for _, items in index.groups():
        size = len(items)
        histogram[size] += 1
        if size > 1:
            shared += size
        g_max = max(g_max, size)
    stats = CollisionStats(shared / n * 100, g_max, dict(sorted(histogram.items())), n)
    logger.debug('Collision stats: %.4f%% of %d items shared, largest group %d',
                 stats.coll_percent, n, g_max)
    return stats


def coll_percent_from_histogram(histogram, n_items):
    """\
    Returns the collision percentage computed from a group size histogram.

    :param dict histogram: group size -> number of groups.
    :param int n_items: Number of items.
    :rtype: float
    """
    if not n_items:
        raise EmptyIndex('Cannot compute a collision rate for zero items')
    return sum(size * count for size, count in histogram.items() if size > 1) / n_items * 100


class PrefixGroupTable:
    """\
    Partition of the items by their first ``L - 1`` codes.

    ``groups`` maps each prefix to the ascending tuple of its items, iteration
    order is lexicographic by prefix. ``rho`` maps each prefix to the minimum
    number of last-level changes which make the last-level codes of the group
    distinct.
    """
    __slots__ = ('groups', 'rho', 'last_codes')

    def __init__(self, groups, rho, last_codes):
        self.groups = groups
        self.rho = rho
        self.last_codes = last_codes

    def __len__(self):
        return len(self.groups)

    @property
    def max_size(self):
        return max((len(items) for items in self.groups.values()), default=0)

    @property
    def mean_size(self):
        if not self.groups:
            return 0.0
        return sum(len(items) for items in self.groups.values()) / len(self.groups)

    @property
    def rho_total(self):
        return sum(self.rho.values())

    def colliding(self):
        """\
        Returns an iterator of ``(prefix, items)`` tuples of all groups with
        ``rho > 0``, in prefix order.
        """
        for prefix, items in self.groups.items():
            if self.rho[prefix]:
                yield prefix, items


def prefix_groups(index):
    """\
    Groups the items of `index` by their first ``L - 1`` codes.

    :param core.SidIndex index: The index.
    :raises: :py:exc:`SidTooShort` if ``L < 2``.
    :rtype: PrefixGroupTable
    """
    if index.sid_len < 2:
        raise SidTooShort('Prefix groups require SIDs of length >= 2. Got: "{0}"'.format(index.sid_len))
    by_prefix = {}
    for item, sid in enumerate(index):
        by_prefix.setdefault(sid[:-1], []).append(item)
    groups = {}
    rho = {}
    last_codes = {}
    for prefix in sorted(by_prefix):
        items = tuple(by_prefix[prefix])
        codes = tuple(index.sid(i)[-1] for i in items)
        groups[prefix] = items
        last_codes[prefix] = codes
        rho[prefix] = len(items) - len(set(codes))
    table = PrefixGroupTable(groups, rho, last_codes)
    logger.debug('%d prefix groups, max size %d, total rho %d', len(groups), table.max_size, table.rho_total)
    return table


def capacity_check(table, codebook_size):
    """\
    Checks the last-level capacity condition: every prefix group has at most
    `codebook_size` items.

    :param PrefixGroupTable table: The prefix groups.
    :param int codebook_size: Number of last-level codes (V).
    :rtype: CapacityResult
    """
    violating = [prefix for prefix, items in table.groups.items() if len(items) > codebook_size]
    if violating:
        logger.warning('%d prefix groups exceed the codebook size %d', len(violating), codebook_size)
    return CapacityResult(not violating, table.max_size, table.mean_size, violating)
