# -*- coding: utf-8 -*-
#
# Copyright (c) 2026 -- sidforge authors
# All rights reserved.
#
# License: BSD License
#
"""\
Zero-collision reassignment of last-level codes.

Items which share the first ``L - 1`` codes form a prefix group. Within each
group with collisions, the last-level codes are reassigned so that all codes in
the group are distinct, using the minimum number of changes (``rho``) and, among
those, the minimum total increase of the squared distance between each item's
level ``L - 1`` residual and its last-level codeword. The prefixes never change,
so groups are independent subproblems.

The greedy baseline keeps, per occupied code, the item closest to the codeword
and moves the other items one after another to their nearest unused code.
"""
import logging
from collections import namedtuple
from concurrent.futures import ThreadPoolExecutor
import numpy as np
from scipy.optimize import linear_sum_assignment
from scipy.spatial.distance import cdist
from . import consts
from .collision import prefix_groups
from .utils import KahanSum, check_finite

__all__ = ('QuantizationModel', 'GroupResult', 'ChangedItem', 'ReassignmentReport',
           'cost_matrix', 'solve_group', 'greedy_group', 'zcr', 'greedy_reassign', 'reassign',
           'verify_zero_collision', 'cost_reduction_percent', 'DimMismatch',
           'GroupExceedsCapacity', 'ModelMismatch', 'BadModel')

logger = logging.getLogger(__name__)


class DimMismatch(ValueError):
    """\
    Indicates residuals and codewords of different dimensions.
    """


class GroupExceedsCapacity(ValueError):
    """\
    Indicates a prefix group with more items than last-level codes.
    """


class ModelMismatch(ValueError):
    """\
    Indicates a quantization model which does not fit to the SID index.
    """


class BadModel(ValueError):
    """\
    Indicates an invalid quantization model (wrong shape, non-finite values).
    """


class QuantizationModel:
    """\
    Codebooks of all levels plus the per-item residuals which are the input of
    the last-level quantization.
    """
    __slots__ = ('codebooks', 'residuals')

    def __init__(self, codebooks, residuals):
        """\
        :param codebooks: ``L x V x d`` array.
        :param residuals: ``N x d`` array.
        :raises: :py:exc:`BadModel` in case of invalid shapes or non-finite values.
        """
        codebooks = np.asarray(codebooks, dtype=np.float32)
        residuals = np.asarray(residuals, dtype=np.float32)
        if codebooks.ndim != 3:
            raise BadModel('Codebooks must be a L x V x d array. Got shape: {0}'.format(codebooks.shape))
        if residuals.ndim != 2:
            raise BadModel('Residuals must be a N x d array. Got shape: {0}'.format(residuals.shape))
        if codebooks.shape[2] != residuals.shape[1]:
            raise BadModel('Codeword dimension {0} != residual dimension {1}'
                           .format(codebooks.shape[2], residuals.shape[1]))
        check_finite(codebooks, 'codebooks', BadModel)
        check_finite(residuals, 'residuals', BadModel)
        self.codebooks = codebooks
        self.residuals = residuals

    @property
    def levels(self):
        return self.codebooks.shape[0]

    @property
    def codebook_size(self):
        return self.codebooks.shape[1]

    @property
    def dim(self):
        return self.codebooks.shape[2]

    @property
    def n_items(self):
        return self.residuals.shape[0]

    def __eq__(self, other):
        return self.__class__ == other.__class__ \
            and np.array_equal(self.codebooks, other.codebooks) \
            and np.array_equal(self.residuals, other.residuals)

    __hash__ = None

    def __repr__(self):
        return 'QuantizationModel(levels={0}, codebook_size={1}, dim={2}, n_items={3})' \
            .format(self.levels, self.codebook_size, self.dim, self.n_items)


ChangedItem = namedtuple('ChangedItem', 'item old_code new_code delta')

GroupResult = namedtuple('GroupResult', 'prefix rho changed')


class ReassignmentReport(namedtuple('ReassignmentReport', 'method n_reass delta_d_total groups skipped')):
    """\
    Outcome of a reassignment run.

    ``groups`` holds one :py:class:`GroupResult` per processed prefix group in
    prefix order, ``skipped`` the prefixes of colliding groups which are
    larger than the codebook.
    """
    __slots__ = ()

    def as_dict(self):
        """\
        Returns a JSON serializable representation.

        :rtype: dict
        """
        return {
            'method': self.method,
            'n_reass': self.n_reass,
            'delta_d_total': self.delta_d_total,
            'n_groups': len(self.groups),
            'skipped': [list(prefix) for prefix in self.skipped],
            'groups': [{'prefix': list(g.prefix), 'rho': g.rho,
                        'changed': [[c.item, c.old_code, c.new_code, c.delta] for c in g.changed]}
                       for g in self.groups],
        }


def cost_matrix(residuals, codebook):
    """\
    Returns the squared Euclidean distances between each residual and each
    codeword, computed in double precision.

    :param residuals: ``n x d`` array.
    :param codebook: ``V x d`` array.
    :raises: :py:exc:`DimMismatch` if the dimensions differ.
    :rtype: numpy.ndarray (``n x V``)
    """
    residuals = np.atleast_2d(np.asarray(residuals, dtype=np.float64))
    codebook = np.atleast_2d(np.asarray(codebook, dtype=np.float64))
    if residuals.shape[1] != codebook.shape[1]:
        raise DimMismatch('Residual dimension {0} != codeword dimension {1}'
                          .format(residuals.shape[1], codebook.shape[1]))
    return cdist(residuals, codebook, 'sqeuclidean')


def _check_group(items, native_codes, costs, codebook_size):
    if len(items) > codebook_size:
        raise GroupExceedsCapacity('Group of {0} items exceeds the codebook size {1}'
                                   .format(len(items), codebook_size))
    costs = np.asarray(costs, dtype=np.float64)
    if costs.shape != (len(items), codebook_size):
        raise DimMismatch('Cost matrix shape {0} != ({1}, {2})'.format(costs.shape, len(items), codebook_size))
    return costs, np.asarray(native_codes, dtype=np.int64)


def solve_group(items, native_codes, costs, codebook_size):
    """\
    Assigns distinct last-level codes to the items of one prefix group with
    the minimum number of changes and, among those, minimum total cost
    increase.

    Both objectives are folded into one rectangular assignment problem: moving
    an item costs a constant ``M`` plus its cost increase. ``M`` exceeds any
    possible difference of total cost increases, so fewer changes always win.

    :param items: Item ids of the group (ascending).
    :param native_codes: Native last-level code of each item.
    :param costs: ``len(items) x V`` cost matrix.
    :param int codebook_size: Number of last-level codes (V).
    :raises: :py:exc:`GroupExceedsCapacity` if the group has more than V items.
    :return: item -> new last-level code for every item of the group.
    :rtype: dict
    """
    costs, native = _check_group(items, native_codes, costs, codebook_size)
    if len(set(native.tolist())) == len(items):
        return {item: int(code) for item, code in zip(items, native)}
    rows = np.arange(len(items))
    delta = costs - costs[rows, native][:, None]
    big_m = 1.0 + 2.0 * np.abs(delta).max(axis=1).sum()
    weights = delta + big_m
    weights[rows, native] = 0.0
    row_ind, col_ind = linear_sum_assignment(weights)
    return {items[r]: int(c) for r, c in zip(row_ind, col_ind)}


def greedy_group(items, native_codes, costs, codebook_size):
    """\
    Greedy reassignment of one prefix group.

    Items are grouped by native code. Per code, the item with the smallest
    native cost keeps the code (ties: lowest item id); the others are moved,
    in order of native cost, to their nearest code unused within the group.

    See :py:func:`solve_group` for the parameters.

    :rtype: dict
    """
    costs, native = _check_group(items, native_codes, costs, codebook_size)
    assignment = {item: int(code) for item, code in zip(items, native)}
    buckets = {}
    for pos, code in enumerate(native.tolist()):
        buckets.setdefault(code, []).append(pos)
    used = np.zeros(codebook_size, dtype=bool)
    used[native] = True
    for code in sorted(buckets):
        positions = buckets[code]
        if len(positions) < 2:
            continue
        positions = sorted(positions, key=lambda j: (costs[j, code], items[j]))
        for j in positions[1:]:
            new_code = int(np.argmin(np.where(used, np.inf, costs[j])))
            used[new_code] = True
            assignment[items[j]] = new_code
    return assignment


def _check_model(index, model):
    if index.sid_len < 2:
        raise ModelMismatch('Reassignment requires SIDs of length >= 2. Got: "{0}"'.format(index.sid_len))
    if model.n_items != index.n_items:
        raise ModelMismatch('Model has residuals for {0} items, the index has {1} items'
                            .format(model.n_items, index.n_items))
    if model.levels != index.sid_len:
        raise ModelMismatch('Model has {0} levels, the index has SIDs of length {1}'
                            .format(model.levels, index.sid_len))
    if model.codebook_size != index.codebook_size:
        raise ModelMismatch('Model codebook size {0} != index codebook size {1}'
                            .format(model.codebook_size, index.codebook_size))


def _reassign(index, model, method, workers):
    _check_model(index, model)
    solver = {consts.METHOD_ZCR: solve_group, consts.METHOD_GREEDY: greedy_group}[method]
    table = prefix_groups(index)
    codebook_size = index.codebook_size
    codebook = np.asarray(model.codebooks[-1], dtype=np.float64)
    tasks = []
    skipped = []
    for prefix, items in table.colliding():
        if len(items) > codebook_size:
            skipped.append(prefix)
            continue
        tasks.append((prefix, items, table.last_codes[prefix], table.rho[prefix]))
    if skipped:
        logger.warning('Skipped %d prefix groups larger than the codebook size %d', len(skipped), codebook_size)

    def run(task):
        prefix, items, native, rho = task
        costs = cost_matrix(model.residuals[list(items)], codebook)
        assignment = solver(items, native, costs, codebook_size)
        changed = []
        for j, (item, old_code) in enumerate(zip(items, native)):
            new_code = assignment[item]
            if new_code != old_code:
                changed.append(ChangedItem(item, old_code, new_code, costs[j, new_code] - costs[j, old_code]))
        logger.debug('Prefix %s: rho=%d, %d items moved', prefix, rho, len(changed))
        return GroupResult(prefix, rho, tuple(changed))

    if workers and workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            groups = list(pool.map(run, tasks))
    else:
        groups = [run(task) for task in tasks]
    total = KahanSum()
    mapping = {}
    for group in groups:
        for change in group.changed:
            total.add(change.delta)
            mapping[change.item] = change.new_code
    report = ReassignmentReport(method, len(mapping), total.value, tuple(groups), tuple(skipped))
    logger.info('%s: %d groups processed, %d items reassigned, delta D = %.4f',
                method, len(groups), report.n_reass, report.delta_d_total)
    return index.replace_last_codes(mapping), report


def zcr(index, model, workers=None):
    """\
    Zero-collision reassignment: minimum-cost reassignment of last-level codes
    within each colliding prefix group.

    Groups without collisions and groups larger than the codebook stay
    untouched. The result is collision-free iff every prefix group has at
    most V items.

    :param core.SidIndex index: The native SID index.
    :param QuantizationModel model: The tokenizer's codebooks and residuals.
    :param workers: Number of threads solving groups concurrently
            (default: ``None``, sequential). The result does not depend on it.
    :type workers: int or None
    :raises: :py:exc:`ModelMismatch` if model and index do not fit.
    :return: The reassigned index and the report.
    :rtype: tuple(SidIndex, ReassignmentReport)
    """
    return _reassign(index, model, consts.METHOD_ZCR, workers)


def greedy_reassign(index, model, workers=None):
    """\
    Greedy nearest-unused-code reassignment baseline.

    See :py:func:`zcr` for the parameters.

    :rtype: tuple(SidIndex, ReassignmentReport)
    """
    return _reassign(index, model, consts.METHOD_GREEDY, workers)


def reassign(index, model, method=consts.METHOD_ZCR, workers=None):
    """\
    Runs the reassignment `method` ("zcr" or "greedy").

    :rtype: tuple(SidIndex, ReassignmentReport)
    """
    method = method.lower()
    if method not in consts.METHODS:
        raise ValueError('Unknown reassignment method "{0}". Supported: {1}'
                         .format(method, ', '.join(consts.METHODS)))
    return _reassign(index, model, method, workers)


def verify_zero_collision(index):
    """\
    Returns if every SID of the index identifies exactly one item.

    :param core.SidIndex index: The index.
    :rtype: bool
    """
    return all(len(items) == 1 for _, items in index.groups())


def cost_reduction_percent(greedy_report, zcr_report):
    """\
    Returns the relative reduction of the total reassignment cost of
    `zcr_report` against `greedy_report` in percent, or ``None`` if the
    greedy cost is zero.

    :rtype: float or None
    """
    if not greedy_report.delta_d_total:
        return None
    return (greedy_report.delta_d_total - zcr_report.delta_d_total) / greedy_report.delta_d_total * 100
