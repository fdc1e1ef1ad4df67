# -*- coding: utf-8 -*-
#
# Copyright (c) 2026 -- sidforge authors
# All rights reserved.
#
# License: BSD License
#
"""\
Collision-corrected evaluation of ranked SID beams.

A generated SID identifies a collision group, not an item. Replacing each SID
of a beam by its (unordered) collision group yields the expanded item ranking.
If the target SID is found at rank ``r``, its group occupies the expanded
positions ``p .. p + g - 1`` with ``p = 1 + sum of the group sizes of the SIDs
ranked before r``. Only ``m = min(g, max(0, K - p + 1))`` of the ``g`` items fit
into the top-K. Under a uniform prior over the group members:

* ItemHit@K  = m / g
* ItemNDCG@K = (1 / g) * sum(1 / log2(p + e) for e in 1 .. m)

Both reduce to the usual Hit@K / NDCG@K if ``g == 1``.
"""
import math
import logging
from collections import namedtuple
from concurrent.futures import ThreadPoolExecutor
from .core import UnknownItem
from .utils import KahanSum, check_positive

__all__ = ('ExpandedMatch', 'SidMetrics', 'MetricsReport', 'RankingComparison',
           'match_target', 'item_hit', 'item_ndcg', 'sid_metrics', 'evaluate',
           'inflation_percent', 'relative_change', 'rank_flips', 'EmptyEvaluation')

logger = logging.getLogger(__name__)

_METRICS = ('sid_hit', 'sid_ndcg', 'item_hit', 'item_ndcg')


class EmptyEvaluation(ValueError):
    """\
    Indicates that no records were provided for evaluation.
    """


ExpandedMatch = namedtuple('ExpandedMatch', 'r g p m')
"""\
``r``: first rank (1-based, <= K) of the target SID in the beam, ``0`` if absent.
``g``: size of the target's collision group. ``p``: start position of the
target group in the expanded item ranking (``0`` if absent). ``m``: number of
target group items within the top-K expanded positions.
"""

SidMetrics = namedtuple('SidMetrics', 'hit ndcg')

RankingComparison = namedtuple('RankingComparison', 'sid_ranking item_ranking flips')
"""\
``sid_ranking`` / ``item_ranking``: names ordered by SID-level Hit@K and by
ItemHit@K (best first). ``flips``: ``(a, b)`` pairs where ``a`` beats ``b`` at
SID level but ``b`` beats ``a`` at item level.
"""


def _gain(position):
    return 1.0 / math.log2(position + 1)


def match_target(beam, index, target, k):
    """\
    Locates the target item's SID in the top-K ranks of the beam and computes
    its position in the expanded item ranking.

    SIDs which are not part of the index contribute zero expanded positions.

    :param beam: Deduplicated, rank ordered SID sequences.
    :param core.SidIndex index: The index.
    :param int target: Target item.
    :param int k: Cutoff.
    :raises: :py:exc:`core.UnknownItem` if the target is not in the index.
    :rtype: ExpandedMatch
    """
    target_sid = index.sid(target)
    g = index.group_size(target_sid)
    p = 1
    for rank, sid in enumerate(beam[:k], 1):
        sid = tuple(sid)
        if sid == target_sid:
            return ExpandedMatch(rank, g, p, min(g, max(0, k - p + 1)))
        p += index.group_size(sid)
    return ExpandedMatch(0, g, 0, 0)


def item_hit(match):
    """\
    Returns ItemHit@K of the match: ``m / g``. A match with ``g == 0``
    (target outside of the index) scores ``0.0``.

    :param ExpandedMatch match: The match.
    :rtype: float
    """
    if not match.g:
        return 0.0
    return match.m / match.g


def item_ndcg(match):
    """\
    Returns ItemNDCG@K of the match. There is no IDCG normalization since a
    single target item has IDCG 1.

    :param ExpandedMatch match: The match.
    :rtype: float
    """
    if not match.g or not match.m:
        return 0.0
    return sum(_gain(match.p + e - 1) for e in range(1, match.m + 1)) / match.g


def sid_metrics(beam, target_sid, k):
    """\
    Returns the conventional SID-level Hit@K and NDCG@K.

    :param beam: Deduplicated, rank ordered SID sequences.
    :param target_sid: The SID of the target item.
    :param int k: Cutoff.
    :rtype: SidMetrics
    """
    target_sid = tuple(target_sid)
    for rank, sid in enumerate(beam[:k], 1):
        if tuple(sid) == target_sid:
            return SidMetrics(1, _gain(rank))
    return SidMetrics(0, 0.0)


def inflation_percent(sid_hit, item_hit):
    """\
    Returns the relative excess of SID-level Hit over ItemHit in percent or
    ``None`` if `item_hit` is zero.

    :rtype: float or None
    """
    if not item_hit:
        return None
    return (sid_hit / item_hit - 1) * 100


def relative_change(before, after):
    """\
    Returns the relative change from `before` to `after` in percent or
    ``None`` if `before` is zero.

    :rtype: float or None
    """
    if not before:
        return None
    return (after / before - 1) * 100


class MetricsReport:
    """\
    Mean SID-level and item-level metrics per cutoff K.
    """
    __slots__ = ('ks', 'sid_hit', 'sid_ndcg', 'item_hit', 'item_ndcg',
                 'n_records', 'skipped_targets', 'short_beams')

    def __init__(self, ks, sid_hit, sid_ndcg, item_hit, item_ndcg, n_records,
                 skipped_targets=0, short_beams=0):
        self.ks = tuple(ks)
        self.sid_hit = sid_hit
        self.sid_ndcg = sid_ndcg
        self.item_hit = item_hit
        self.item_ndcg = item_ndcg
        self.n_records = n_records
        self.skipped_targets = skipped_targets
        self.short_beams = short_beams

    def inflation_percent(self, k):
        """\
        Returns the inflation of SID-level Hit@K over ItemHit@K in percent.

        :rtype: float or None
        """
        return inflation_percent(self.sid_hit[k], self.item_hit[k])

    def as_dict(self):
        """\
        Returns a JSON serializable representation.

        :rtype: dict
        """
        metrics = {}
        for k in self.ks:
            metrics[str(k)] = {
                'sid_hit': self.sid_hit[k],
                'sid_ndcg': self.sid_ndcg[k],
                'item_hit': self.item_hit[k],
                'item_ndcg': self.item_ndcg[k],
                'inflation_percent': self.inflation_percent(k),
            }
        return {'n_records': self.n_records, 'skipped_targets': self.skipped_targets,
                'short_beams': self.short_beams, 'metrics': metrics}

    @classmethod
    def from_dict(cls, data):
        """\
        Creates a report from the output of :py:meth:`as_dict`.

        :param dict data: The dict.
        :rtype: MetricsReport
        """
        metrics = data['metrics']
        ks = sorted(int(k) for k in metrics)
        values = {name: {k: metrics[str(k)][name] for k in ks} for name in _METRICS}
        return cls(ks, n_records=data['n_records'], skipped_targets=data.get('skipped_targets', 0),
                   short_beams=data.get('short_beams', 0), **values)


class _Accumulator:
    """\
    Per-chunk compensated sums of all metrics for all cutoffs.
    """
    __slots__ = ('sums', 'n_records', 'skipped', 'short')

    def __init__(self, ks):
        self.sums = {(name, k): KahanSum() for name in _METRICS for k in ks}
        self.n_records = 0
        self.skipped = 0
        self.short = 0

    def merge(self, other):
        for key, acc in self.sums.items():
            acc.merge(other.sums[key])
        self.n_records += other.n_records
        self.skipped += other.skipped
        self.short += other.short


def _score_chunk(records, index, ks):
    acc = _Accumulator(ks)
    max_k = ks[-1]
    for record in records:
        acc.n_records += 1
        beam = record.beams
        if len(beam) < max_k:
            acc.short += 1
        try:
            target_sid = index.sid(record.target_item)
        except UnknownItem:
            acc.skipped += 1
            for key in acc.sums:
                acc.sums[key].add(0.0)
            continue
        for k in ks:
            match = match_target(beam, index, record.target_item, k)
            sid = sid_metrics(beam, target_sid, k)
            acc.sums['sid_hit', k].add(float(sid.hit))
            acc.sums['sid_ndcg', k].add(sid.ndcg)
            acc.sums['item_hit', k].add(item_hit(match))
            acc.sums['item_ndcg', k].add(item_ndcg(match))
    return acc


def _chunks(seq, num):
    size, rest = divmod(len(seq), num)
    start = 0
    for i in range(num):
        end = start + size + (1 if i < rest else 0)
        yield seq[start:end]
        start = end


def evaluate(records, index, ks, workers=None):
    """\
    Evaluates beam records at each cutoff in `ks`.

    Records are scored independently; with ``workers > 1`` contiguous chunks
    are scored concurrently and merged in chunk order, so the result only
    depends on the record order and the number of workers.

    Targets which are not part of the index score zero and are counted in
    ``skipped_targets``. Beams shorter than the largest K are scored with the
    available ranks and counted in ``short_beams``.

    :param records: Iterable of :py:class:`core.BeamRecord` with deduplicated beams.
    :param core.SidIndex index: The index.
    :param ks: Iterable of cutoffs.
    :param workers: Number of concurrent workers (default: ``None``, sequential).
    :type workers: int or None
    :raises: :py:exc:`EmptyEvaluation` if there are no records.
    :rtype: MetricsReport
    """
    ks = tuple(sorted(set(ks)))
    if not ks:
        raise ValueError('At least one cutoff K is required')
    for k in ks:
        check_positive(k, 'k')
    records = list(records)
    if not records:
        raise EmptyEvaluation('No beam records to evaluate')
    if workers and workers > 1:
        chunks = list(_chunks(records, min(workers, len(records))))
        with ThreadPoolExecutor(max_workers=workers) as pool:
            parts = list(pool.map(lambda chunk: _score_chunk(chunk, index, ks), chunks))
        acc = _Accumulator(ks)
        for part in parts:
            acc.merge(part)
    else:
        acc = _score_chunk(records, index, ks)
    if acc.skipped:
        logger.warning('%d of %d targets are not part of the index and score zero', acc.skipped, acc.n_records)
    if acc.short:
        logger.warning('%d of %d beams are shorter than K=%d', acc.short, acc.n_records, ks[-1])
    means = {name: {k: acc.sums[name, k].value / acc.n_records for k in ks} for name in _METRICS}
    logger.info('Evaluated %d records at K=%s', acc.n_records, ','.join(str(k) for k in ks))
    return MetricsReport(ks, n_records=acc.n_records, skipped_targets=acc.skipped,
                         short_beams=acc.short, **means)


def rank_flips(reports, k):
    """\
    Compares tokenizers at SID level and at item level.

    :param dict reports: name -> :py:class:`MetricsReport`.
    :param int k: Cutoff used for the comparison.
    :raises: :py:exc:`ValueError` if a report lacks the cutoff ``k``.
    :rtype: RankingComparison
    """
    names = sorted(reports)
    for name in names:
        if k not in reports[name].ks:
            raise ValueError('Cutoff {0} is not available in report "{1}", available: {2}'
                             .format(k, name, ', '.join(str(c) for c in reports[name].ks)))
    sid_ranking = sorted(names, key=lambda n: -reports[n].sid_hit[k])
    item_ranking = sorted(names, key=lambda n: -reports[n].item_hit[k])
    flips = []
    for a in sid_ranking:
        for b in sid_ranking:
            if reports[a].sid_hit[k] > reports[b].sid_hit[k] \
                    and reports[a].item_hit[k] < reports[b].item_hit[k]:
                flips.append((a, b))
    return RankingComparison(sid_ranking, item_ranking, flips)
