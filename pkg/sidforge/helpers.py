# -*- coding: utf-8 -*-
#
# Copyright (c) 2026 -- sidforge authors
# All rights reserved.
#
# License: BSD License
#
"""\
Synthetic beam factory.

Produces ranked SID beams with the target SID planted at a rank drawn from a
per-rank hit profile. Useful to exercise the evaluation without a trained
generator.
"""
import logging
import numpy as np
from . import consts
from .core import make_beam_record
from .utils import check_positive, check_probability

__all__ = ('SynthBeamConfig', 'synth_beams')

logger = logging.getLogger(__name__)


class SynthBeamConfig:
    """\
    Configuration of :py:func:`synth_beams`.

    ``hit_profile[r]`` is the probability to plant the target SID at rank
    ``r + 1``, given it was not planted at a better rank. Ranks beyond the
    profile get probability zero.
    """
    __slots__ = ('beam_width', 'hit_profile', 'seed')

    def __init__(self, beam_width=consts.DEFAULT_BEAM_WIDTH, hit_profile=consts.DEFAULT_HIT_PROFILE,
                 seed=consts.DEFAULT_SEED):
        """\
        :param int beam_width: Number of SIDs per beam (default: 20).
        :param hit_profile: Per-rank plant probabilities.
        :param int seed: Seed (default: 42).
        """
        check_positive(beam_width, 'beam_width')
        hit_profile = tuple(float(p) for p in hit_profile)
        if len(hit_profile) > beam_width:
            raise ValueError('The hit profile has {0} ranks, the beam width is {1}'
                             .format(len(hit_profile), beam_width))
        for p in hit_profile:
            check_probability(p, 'hit_profile')
        self.beam_width = beam_width
        self.hit_profile = hit_profile
        self.seed = seed

    def check_ks(self, ks):
        """\
        Raises a :py:exc:`ValueError` if a cutoff exceeds the beam width.
        """
        if max(ks) > self.beam_width:
            raise ValueError('Cutoff {0} exceeds the beam width {1}'.format(max(ks), self.beam_width))

    def as_dict(self):
        return {'beam_width': self.beam_width, 'hit_profile': list(self.hit_profile), 'seed': self.seed}

    def __eq__(self, other):
        return self.__class__ == other.__class__ and self.as_dict() == other.as_dict()

    __hash__ = None


def synth_beams(index, targets, cfg=None):
    """\
    Generates one :py:class:`core.BeamRecord` per target.

    Plant decisions and filler SIDs are drawn from two independent random
    streams, so indexes over the same items share the plant ranks for a given
    seed. Fillers are distinct SIDs of the index other than the target SID;
    if the index has too few of them, the beam is shorter than the width.

    :param core.SidIndex index: The index.
    :param targets: Iterable of item ids or ``(user, item)`` tuples. A bare
            item id uses its position in `targets` as user id.
    :param SynthBeamConfig cfg: The configuration (default: ``None``, defaults).
    :raises: :py:exc:`core.UnknownItem` if a target is not part of the index.
    :rtype: iterator of core.BeamRecord
    """
    cfg = cfg or SynthBeamConfig()
    width = cfg.beam_width
    profile = np.zeros(width, dtype=np.float64)
    profile[:len(cfg.hit_profile)] = cfg.hit_profile
    plant_rng = np.random.default_rng([cfg.seed, 0])
    fill_rng = np.random.default_rng([cfg.seed, 1])
    pool = index.distinct_sids()
    position = {sid: n for n, sid in enumerate(pool)}
    planted = count = 0
    for n, target in enumerate(targets):
        count += 1
        user, item = (n, target) if np.ndim(target) == 0 else target
        target_sid = index.sid(int(item))
        hits = np.flatnonzero(plant_rng.random(width) < profile)
        rank = int(hits[0]) if len(hits) else None
        n_fill = width - (1 if rank is not None else 0)
        candidates = np.delete(np.arange(len(pool)), position[target_sid])
        chosen = fill_rng.choice(candidates, size=min(n_fill, len(candidates)), replace=False)
        beam = [pool[j] for j in chosen]
        if rank is not None:
            beam.insert(min(rank, len(beam)), target_sid)
            planted += 1
        yield make_beam_record(user, item, beam)
    logger.info('Generated %d beams, target planted in %d', count, planted)
