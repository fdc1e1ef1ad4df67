# -*- coding: utf-8 -*-
#
# Copyright (c) 2026 -- sidforge authors
# All rights reserved.
#
# License: BSD License
#
"""\
Semantic ID collision toolkit.

Measures SID collisions, evaluates generated beams at item level
(collision-corrected evaluation), removes collisions by minimum-cost
reassignment of last-level codes, and provides the residual K-means tokenizer,
collaborative embeddings and dataset preprocessing around it.
"""
from .core import SidIndex, BeamRecord, InteractionLog, build_sid_index, collision_group, \
    make_beam_record, dedupe_beam, DuplicateItem, MissingItem, CodeOutOfRange, BadSidLength, UnknownItem
from .collision import CollisionStats, PrefixGroupTable, CapacityResult, collision_stats, \
    coll_percent_from_histogram, prefix_groups, capacity_check, EmptyIndex, SidTooShort
from .cce import ExpandedMatch, SidMetrics, MetricsReport, match_target, item_hit, item_ndcg, \
    sid_metrics, evaluate, inflation_percent, relative_change, rank_flips, EmptyEvaluation
from .zcr import QuantizationModel, ReassignmentReport, cost_matrix, solve_group, greedy_group, \
    greedy_reassign, reassign, verify_zero_collision, cost_reduction_percent, DimMismatch, \
    GroupExceedsCapacity, ModelMismatch, BadModel
# Keeps ``sidforge.zcr`` bound to the module
from .zcr import zcr as zero_collision_reassign
from .rkmeans import KMeansLevel, kmeans, tokenize, BadInput
from .collab import CollabEmbedding, build_ppmi, randomized_svd, truncated_svd, fuse, \
    EmptyCorpus, RankTooHigh, RowMismatch
from .dataset import SplitDataset, preprocess, k_core_filter, import_amazon, import_yelp, AllFiltered
from .helpers import SynthBeamConfig, synth_beams
from .formats import FormatError
from .utils import round_half_up

__version__ = '0.1.0.dev'

__all__ = ('SidIndex', 'BeamRecord', 'InteractionLog', 'build_sid_index', 'collision_group',
           'make_beam_record', 'dedupe_beam', 'CollisionStats', 'PrefixGroupTable', 'CapacityResult',
           'collision_stats', 'coll_percent_from_histogram', 'prefix_groups', 'capacity_check',
           'ExpandedMatch', 'SidMetrics', 'MetricsReport', 'match_target', 'item_hit', 'item_ndcg',
           'sid_metrics', 'evaluate', 'inflation_percent', 'relative_change', 'rank_flips',
           'QuantizationModel', 'ReassignmentReport', 'cost_matrix', 'solve_group', 'greedy_group',
           'zero_collision_reassign',
           'greedy_reassign', 'reassign', 'verify_zero_collision', 'cost_reduction_percent',
           'KMeansLevel', 'kmeans', 'tokenize', 'CollabEmbedding', 'build_ppmi', 'randomized_svd',
           'truncated_svd', 'fuse', 'SplitDataset', 'preprocess', 'k_core_filter', 'import_amazon',
           'import_yelp', 'SynthBeamConfig', 'synth_beams', 'round_half_up',
           'DuplicateItem', 'MissingItem', 'CodeOutOfRange', 'BadSidLength', 'UnknownItem',
           'EmptyIndex', 'SidTooShort', 'EmptyEvaluation', 'DimMismatch', 'GroupExceedsCapacity',
           'ModelMismatch', 'BadModel', 'BadInput', 'EmptyCorpus', 'RankTooHigh', 'RowMismatch',
           'AllFiltered', 'FormatError')
