# -*- coding: utf-8 -*-
#
# Copyright (c) 2026 -- sidforge authors
# All rights reserved.
#
# License: BSD License
#
"""\
Semantic ID index: the item <-> SID lookup table shared by all other modules.

An item is a dense integer id in ``[0, N)``. A SID is a tuple of ``L`` codes,
each in ``[0, V)``. Codes are 0-based everywhere.
"""
from collections import namedtuple
import numpy as np

__all__ = ('SidIndex', 'BeamRecord', 'build_sid_index', 'collision_group',
           'make_beam_record', 'dedupe_beam', 'InteractionLog', 'DuplicateItem', 'MissingItem',
           'CodeOutOfRange', 'BadSidLength', 'UnknownItem')


class DuplicateItem(ValueError):
    """\
    Indicates that an item id was assigned more than one SID.
    """


class MissingItem(ValueError):
    """\
    Indicates a gap in the item id range ``[0, N)``.
    """


class CodeOutOfRange(ValueError):
    """\
    Indicates a code outside of ``[0, V)``.
    """


class BadSidLength(ValueError):
    """\
    Indicates a SID sequence which does not have exactly ``L`` codes.
    """


class UnknownItem(ValueError):
    """\
    Indicates an item id which is not part of the index.
    """


BeamRecord = namedtuple('BeamRecord', 'user target_item beams')
"""\
One test case: the user, the target item and the rank ordered (rank 1 first)
SID sequences generated for the user. Use :py:func:`make_beam_record` to
create records with deduplicated beams.
"""


class SidIndex:
    """\
    Immutable bidirectional mapping between items and SID sequences.

    ``forward`` maps each item to its SID, ``inverse`` maps each SID to the
    ascending list of items sharing it (the collision group).
    """
    __slots__ = ('sid_len', 'codebook_size', '_forward', '_inverse')

    def __init__(self, forward, sid_len, codebook_size):
        """\
        Initializes the index. Does not validate the input, use
        :py:func:`build_sid_index` to create validated instances.

        :param forward: Sequence of SID tuples, position ``i`` is the SID of item ``i``.
        :param int sid_len: Number of levels (L).
        :param int codebook_size: Number of codes per level (V).
        """
        self.sid_len = sid_len
        self.codebook_size = codebook_size
        self._forward = tuple(forward)
        inverse = {}
        for item, sid in enumerate(self._forward):
            inverse.setdefault(sid, []).append(item)
        self._inverse = {sid: tuple(items) for sid, items in inverse.items()}

    @property
    def n_items(self):
        """\
        Number of items (N).

        :rtype: int
        """
        return len(self._forward)

    def __len__(self):
        return len(self._forward)

    def __eq__(self, other):
        return self.__class__ == other.__class__ \
            and self.sid_len == other.sid_len \
            and self.codebook_size == other.codebook_size \
            and self._forward == other._forward

    __hash__ = None

    def __repr__(self):
        return 'SidIndex(n_items={0}, sid_len={1}, codebook_size={2})' \
            .format(self.n_items, self.sid_len, self.codebook_size)

    def sid(self, item):
        """\
        Returns the SID of the provided item.

        :param int item: Item id.
        :raises: :py:exc:`UnknownItem` if the item is not in ``[0, N)``.
        :rtype: tuple of int
        """
        if not 0 <= item < len(self._forward):
            raise UnknownItem('Unknown item "{0}". Valid range: [0, {1})'.format(item, len(self._forward)))
        return self._forward[item]

    def items_of(self, sid):
        """\
        Returns the ascending tuple of items with the provided SID or an empty
        tuple if no item uses it.

        :param sid: Sequence of codes.
        :rtype: tuple of int
        """
        return self._inverse.get(tuple(sid), ())

    def group_size(self, sid):
        """\
        Returns the size of the collision group of `sid` (``0`` for unknown SIDs).

        :rtype: int
        """
        return len(self._inverse.get(tuple(sid), ()))

    def __iter__(self):
        return iter(self._forward)

    def groups(self):
        """\
        Returns an iterator of ``(sid, items)`` tuples in lexicographic SID order.
        """
        for sid in sorted(self._inverse):
            yield sid, self._inverse[sid]

    def distinct_sids(self):
        """\
        Returns all SIDs in use, lexicographically sorted.

        :rtype: list of tuples
        """
        return sorted(self._inverse)

    def as_array(self):
        """\
        Returns the SIDs as ``N x L`` integer matrix.

        :rtype: numpy.ndarray
        """
        return np.array(self._forward, dtype=np.int64).reshape(len(self._forward), self.sid_len)

    def replace_last_codes(self, mapping):
        """\
        Returns a new index where the last-level code of each item in `mapping`
        is replaced by the mapped code. All other codes are kept.

        :param dict mapping: item -> new last-level code.
        :rtype: SidIndex
        """
        forward = list(self._forward)
        for item, code in mapping.items():
            if not 0 <= code < self.codebook_size:
                raise CodeOutOfRange('Code "{0}" of item {1} is out of range [0, {2})'
                                     .format(code, item, self.codebook_size))
            forward[item] = forward[item][:-1] + (int(code),)
        return SidIndex(forward, self.sid_len, self.codebook_size)


def build_sid_index(assignments, sid_len, codebook_size):
    """\
    Creates a validated :py:class:`SidIndex`.

    :param assignments: Iterable of ``(item, codes)`` tuples which must cover
            the items ``0 .. N-1`` exactly once.
    :param int sid_len: Number of levels (L).
    :param int codebook_size: Number of codes per level (V).
    :raises: :py:exc:`DuplicateItem`, :py:exc:`MissingItem`,
            :py:exc:`CodeOutOfRange`, :py:exc:`BadSidLength`
    :rtype: SidIndex
    """
    if sid_len < 1:
        raise BadSidLength('The SID length must be positive. Got: "{0}"'.format(sid_len))
    if codebook_size < 1:
        raise CodeOutOfRange('The codebook size must be positive. Got: "{0}"'.format(codebook_size))
    by_item = {}
    for item, codes in assignments:
        item = int(item)
        if item in by_item:
            raise DuplicateItem('Item "{0}" is assigned more than once'.format(item))
        if item < 0:
            raise MissingItem('Item ids must not be negative. Got: "{0}"'.format(item))
        sid = tuple(int(c) for c in codes)
        if len(sid) != sid_len:
            raise BadSidLength('SID of item {0} has length {1}, expected {2}'.format(item, len(sid), sid_len))
        for code in sid:
            if not 0 <= code < codebook_size:
                raise CodeOutOfRange('Code "{0}" of item {1} is out of range [0, {2})'
                                     .format(code, item, codebook_size))
        by_item[item] = sid
    n = len(by_item)
    if n and max(by_item) != n - 1:
        missing = next(i for i in range(n) if i not in by_item)
        raise MissingItem('Item "{0}" has no SID; items must cover 0 .. N-1'.format(missing))
    return SidIndex((by_item[i] for i in range(n)), sid_len, codebook_size)


def collision_group(index, sid):
    """\
    Returns the items sharing the provided SID, sorted ascending.

    Unknown SIDs result in an empty list; generated beams may contain
    sequences which are not assigned to any item.

    :param SidIndex index: The index.
    :param sid: Sequence of codes.
    :rtype: list of int
    """
    return list(index.items_of(sid))


def dedupe_beam(beams):
    """\
    Returns the beam as list of SID tuples with duplicates removed. The first
    occurrence wins, the rank order is kept.

    :param beams: Iterable of code sequences.
    :rtype: list of tuples
    """
    seen = set()
    res = []
    for sid in beams:
        sid = tuple(int(c) for c in sid)
        if sid not in seen:
            seen.add(sid)
            res.append(sid)
    return res


def make_beam_record(user, target_item, beams):
    """\
    Creates a :py:class:`BeamRecord` with a deduplicated beam.

    :param int user: User id.
    :param int target_item: The ground truth item.
    :param beams: Rank ordered SID sequences.
    :rtype: BeamRecord
    """
    return BeamRecord(int(user), int(target_item), tuple(dedupe_beam(beams)))


class InteractionLog:
    """\
    Chronologically ordered item sequences per user.
    """
    __slots__ = ('sequences', 'n_items')

    def __init__(self, sequences, n_items=None):
        """\
        :param dict sequences: user id -> chronologically ordered item ids.
        :param n_items: Number of items (N). If ``None`` (default), the
                largest referenced item id + 1 is used.
        :type n_items: int or None
        """
        seqs = {}
        for user, items in sorted(sequences.items()):
            items = tuple(int(i) for i in items)
            if not items:
                raise ValueError('User "{0}" has no interactions'.format(user))
            seqs[int(user)] = items
        max_item = max((max(items) for items in seqs.values()), default=-1)
        if n_items is None:
            n_items = max_item + 1
        if max_item >= n_items or min((min(items) for items in seqs.values()), default=0) < 0:
            raise UnknownItem('Item ids must be in range [0, {0})'.format(n_items))
        self.sequences = seqs
        self.n_items = n_items

    @classmethod
    def from_triples(cls, triples, n_items=None):
        """\
        Creates the log from ``(user, item, timestamp)`` triples. Interactions
        of a user are sorted by timestamp, ties keep the input order.

        :param triples: Iterable of ``(user, item, timestamp)`` tuples.
        :rtype: InteractionLog
        """
        by_user = {}
        for pos, (user, item, ts) in enumerate(triples):
            by_user.setdefault(int(user), []).append((ts, pos, int(item)))
        return cls({user: [item for _, _, item in sorted(events)] for user, events in by_user.items()},
                   n_items=n_items)

    def __len__(self):
        return len(self.sequences)

    def __eq__(self, other):
        return self.__class__ == other.__class__ and self.sequences == other.sequences \
            and self.n_items == other.n_items

    __hash__ = None

    @property
    def n_interactions(self):
        return sum(len(items) for items in self.sequences.values())
