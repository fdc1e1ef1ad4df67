# -*- coding: utf-8 -*-
#
# Copyright (c) 2026 -- sidforge authors
# All rights reserved.
#
# License: BSD License
#
"""\
Interaction preprocessing: k-core filtering, dense id mapping and the
leave-one-out split, plus importers for local review dumps.
"""
import gzip
import json
import logging
import calendar
from datetime import datetime
from collections import Counter, namedtuple
from . import consts
from .core import InteractionLog
from .formats import FormatError

__all__ = ('Interaction', 'SplitDataset', 'k_core_filter', 'preprocess',
           'import_amazon', 'import_yelp', 'AllFiltered')

logger = logging.getLogger(__name__)

# Minimum number of interactions per user for a train / validation / test split
_MIN_SPLIT_LENGTH = 3


class AllFiltered(ValueError):
    """\
    Indicates that the k-core filter removed every interaction.
    """


Interaction = namedtuple('Interaction', 'user item timestamp')
"""\
A raw interaction. ``user`` and ``item`` are the raw (string) ids.
"""


def k_core_filter(interactions, k_core=consts.DEFAULT_K_CORE):
    """\
    Iteratively removes users and items with less than `k_core` interactions
    until every remaining user and item has at least `k_core` interactions.

    :param interactions: Sequence of :py:class:`Interaction`.
    :param int k_core: Minimum degree (default: 5).
    :return: The remaining interactions in input order.
    :rtype: list
    """
    kept = list(interactions)
    rounds = 0
    while True:
        rounds += 1
        user_degree = Counter(i.user for i in kept)
        item_degree = Counter(i.item for i in kept)
        remaining = [i for i in kept if user_degree[i.user] >= k_core and item_degree[i.item] >= k_core]
        if len(remaining) == len(kept):
            break
        kept = remaining
    logger.debug('%d-core reached after %d rounds: %d interactions', k_core, rounds, len(kept))
    return kept


class SplitDataset:
    """\
    Leave-one-out split of a k-core filtered interaction set.

    Users and items get dense ids in the order of their sorted raw ids.
    Per user, the last interaction is the test item, the second to last the
    validation item and the rest forms the training sequence.
    """
    __slots__ = ('train', 'validation', 'test', 'user_ids', 'item_ids', 'interactions', 'filtered')

    def __init__(self, train, validation, test, user_ids, item_ids, interactions, filtered):
        self.train = train
        self.validation = validation
        self.test = test
        self.user_ids = user_ids
        self.item_ids = item_ids
        self.interactions = interactions
        self.filtered = filtered

    @property
    def n_users(self):
        return len(self.user_ids)

    @property
    def n_items(self):
        return len(self.item_ids)

    def __eq__(self, other):
        return self.__class__ == other.__class__ \
            and self.train == other.train \
            and self.validation == other.validation \
            and self.test == other.test \
            and self.user_ids == other.user_ids \
            and self.item_ids == other.item_ids \
            and self.interactions == other.interactions

    __hash__ = None

    def summary(self):
        """\
        Returns the dataset statistics.

        :rtype: dict
        """
        n = len(self.interactions)
        cells = self.n_users * self.n_items
        return {
            'n_users': self.n_users,
            'n_items': self.n_items,
            'n_interactions': n,
            'avg_length': n / self.n_users,
            'density': n / cells,
            'sparsity_percent': (1 - n / cells) * 100,
        }

    def test_pairs(self):
        """\
        Returns the ``(user, item)`` test pairs ordered by user.

        :rtype: list of tuples
        """
        return sorted(self.test.items())

    def validation_pairs(self):
        """\
        Returns the ``(user, item)`` validation pairs ordered by user.

        :rtype: list of tuples
        """
        return sorted(self.validation.items())


def preprocess(interactions, k_core=consts.DEFAULT_K_CORE):
    """\
    Applies the k-core filter, maps raw ids to dense ids and splits each
    user's chronological sequence by leave-one-out.

    Interactions of a user are ordered by timestamp; ties keep the input
    order. Running the function on its own filtered output yields the same
    dataset.

    :param interactions: Iterable of ``(user, item, timestamp)`` tuples.
    :param int k_core: Minimum user and item degree (default: 5, at least 3).
    :raises: :py:exc:`AllFiltered` if no interaction survives the filter.
    :rtype: SplitDataset
    """
    if k_core < _MIN_SPLIT_LENGTH:
        raise ValueError('k_core must be >= {0} for a leave-one-out split. Got: "{1}"'
                         .format(_MIN_SPLIT_LENGTH, k_core))
    raw = [Interaction(*i) for i in interactions]
    filtered = k_core_filter(raw, k_core)
    if not filtered:
        raise AllFiltered('No interactions left after {0}-core filtering of {1} interactions'
                          .format(k_core, len(raw)))
    user_ids = sorted({i.user for i in filtered})
    item_ids = sorted({i.item for i in filtered})
    user_map = {u: n for n, u in enumerate(user_ids)}
    item_map = {it: n for n, it in enumerate(item_ids)}
    events = {}
    for pos, i in enumerate(filtered):
        events.setdefault(user_map[i.user], []).append((i.timestamp, pos, item_map[i.item]))
    sequences, validation, test = {}, {}, {}
    interactions = []
    for user in sorted(events):
        ordered = sorted(events[user])
        items = [item for _, _, item in ordered]
        sequences[user] = items[:-2]
        validation[user] = items[-2]
        test[user] = items[-1]
        interactions.extend((user, item, ts) for ts, _, item in ordered)
    dataset = SplitDataset(InteractionLog(sequences, n_items=len(item_ids)), validation, test,
                           user_ids, item_ids, interactions, filtered)
    logger.info('Preprocessed %d raw interactions: %d users, %d items, %d interactions',
                len(raw), dataset.n_users, dataset.n_items, len(interactions))
    return dataset


def _open_text(path):
    if str(path).endswith('.gz'):
        return gzip.open(path, 'rt', encoding='utf-8')
    return open(path, 'rt', encoding='utf-8')


def _read_json_lines(path):
    with _open_text(path) as f:
        for lineno, line in enumerate(f, 1):
            line = line.strip()
            if not line:
                continue
            try:
                yield lineno, json.loads(line)
            except ValueError as ex:
                raise FormatError('{0}:{1}: invalid JSON: {2}'.format(path, lineno, ex))


def import_amazon(path):
    """\
    Reads an Amazon review dump (one JSON object per line, optionally
    gzipped) and returns ``(user, item, timestamp)`` tuples in file order.

    Both the ``reviewerID`` / ``asin`` / ``unixReviewTime`` and the
    ``user_id`` / ``parent_asin`` / ``timestamp`` field layouts are understood.

    :param str path: Path to the file.
    :raises: :py:exc:`formats.FormatError` if a record misses a field.
    :rtype: list
    """
    res = []
    for lineno, rec in _read_json_lines(path):
        try:
            if 'reviewerID' in rec:
                res.append(Interaction(rec['reviewerID'], rec['asin'], int(rec['unixReviewTime'])))
            else:
                res.append(Interaction(rec['user_id'], rec.get('parent_asin') or rec['asin'],
                                       int(rec['timestamp'])))
        except (KeyError, TypeError, ValueError) as ex:
            raise FormatError('{0}:{1}: invalid Amazon review record: {2}'.format(path, lineno, ex))
    logger.info('Imported %d Amazon reviews from %s', len(res), path)
    return res


def import_yelp(path):
    """\
    Reads a Yelp review dump (one JSON object per line, optionally gzipped)
    and returns ``(user, item, timestamp)`` tuples in file order. The
    business is the item, the review date is converted to UTC epoch seconds.

    :param str path: Path to the file.
    :raises: :py:exc:`formats.FormatError` if a record misses a field.
    :rtype: list
    """
    res = []
    for lineno, rec in _read_json_lines(path):
        try:
            date = datetime.strptime(rec['date'], '%Y-%m-%d %H:%M:%S')
            res.append(Interaction(rec['user_id'], rec['business_id'], calendar.timegm(date.timetuple())))
        except (KeyError, TypeError, ValueError) as ex:
            raise FormatError('{0}:{1}: invalid Yelp review record: {2}'.format(path, lineno, ex))
    logger.info('Imported %d Yelp reviews from %s', len(res), path)
    return res
