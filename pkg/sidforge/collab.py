# -*- coding: utf-8 -*-
#
# Copyright (c) 2026 -- sidforge authors
# All rights reserved.
#
# License: BSD License
#
"""\
Collaborative item embeddings (PPMI + truncated SVD) and their fusion with
textual embeddings.
"""
import logging
from collections import namedtuple
from concurrent.futures import ThreadPoolExecutor
import numpy as np
from scipy import linalg, sparse
from sklearn.utils import extmath
from . import consts
from .utils import check_positive, check_non_negative, l2_normalize_rows

__all__ = ('CollabEmbedding', 'cooccurrence', 'build_ppmi', 'randomized_svd',
           'truncated_svd', 'fuse', 'EmptyCorpus', 'RankTooHigh', 'RowMismatch')

logger = logging.getLogger(__name__)


class EmptyCorpus(ValueError):
    """\
    Indicates that no co-occurring item pair is left after the holdout.
    """


class RankTooHigh(ValueError):
    """\
    Indicates a requested rank or output dimension above the matrix dimension.
    """


class RowMismatch(ValueError):
    """\
    Indicates embedding matrices with different numbers of rows.
    """


CollabEmbedding = namedtuple('CollabEmbedding', 'vectors singular_values')
"""\
``vectors``: ``N x k`` array with L2-normalized (or all-zero) rows,
``singular_values``: the ``k`` singular values in non-increasing order.
"""


def _count_pairs(sequences, n_items, window, holdout_last):
    rows, cols = [], []
    for seq in sequences:
        if holdout_last:
            seq = seq[:-holdout_last]
        seq = np.asarray(seq, dtype=np.int64)
        for dist in range(1, min(window, len(seq) - 1) + 1):
            a, b = seq[:-dist], seq[dist:]
            keep = a != b
            rows.append(a[keep])
            cols.append(b[keep])
    if not rows:
        return sparse.csr_matrix((n_items, n_items), dtype=np.float64)
    rows = np.concatenate(rows)
    cols = np.concatenate(cols)
    counts = sparse.coo_matrix((np.ones(len(rows)), (rows, cols)), shape=(n_items, n_items)).tocsr()
    return counts + counts.T


def cooccurrence(log, window=consts.DEFAULT_WINDOW, holdout_last=consts.DEFAULT_HOLDOUT, workers=None):
    """\
    Returns the symmetric item co-occurrence counts.

    The last `holdout_last` items of each user are removed, then every
    unordered pair of positions at distance ``1 .. window`` counts once for
    both ``(i, j)`` and ``(j, i)``. Pairs of the same item are not counted.

    :param core.InteractionLog log: The interactions.
    :param int window: Maximum distance (default: 3).
    :param int holdout_last: Number of held out items per user (default: 2).
    :param workers: Number of threads counting disjoint user chunks.
    :type workers: int or None
    :rtype: scipy.sparse.csr_matrix
    """
    check_positive(window, 'window')
    check_non_negative(holdout_last, 'holdout_last')
    sequences = list(log.sequences.values())
    n = log.n_items
    if workers and workers > 1 and len(sequences) > 1:
        size = -(-len(sequences) // workers)
        chunks = [sequences[i:i + size] for i in range(0, len(sequences), size)]
        with ThreadPoolExecutor(max_workers=workers) as pool:
            parts = list(pool.map(lambda chunk: _count_pairs(chunk, n, window, holdout_last), chunks))
        counts = parts[0]
        for part in parts[1:]:
            counts = counts + part
    else:
        counts = _count_pairs(sequences, n, window, holdout_last)
    counts.sum_duplicates()
    return counts.tocsr()


def build_ppmi(log, window=consts.DEFAULT_WINDOW, holdout_last=consts.DEFAULT_HOLDOUT, workers=None):
    """\
    Returns the positive pointwise mutual information of the item
    co-occurrences: ``max(0, log(P(i, j) / (P(i) * P(j))))`` where all
    probabilities are derived from the co-occurrence counts.

    See :py:func:`cooccurrence` for the parameters.

    :raises: :py:exc:`EmptyCorpus` if no pair is counted.
    :rtype: scipy.sparse.csr_matrix (symmetric, ``N x N``)
    """
    counts = cooccurrence(log, window=window, holdout_last=holdout_last, workers=workers)
    if not counts.nnz:
        raise EmptyCorpus('No co-occurring item pairs (window={0}, holdout={1})'.format(window, holdout_last))
    total = counts.sum()
    marginals = np.asarray(counts.sum(axis=1)).ravel()
    coo = counts.tocoo()
    pmi = np.log(coo.data * total / (marginals[coo.row] * marginals[coo.col]))
    ppmi = sparse.coo_matrix((np.maximum(pmi, 0.0), (coo.row, coo.col)), shape=counts.shape).tocsr()
    ppmi.eliminate_zeros()
    logger.info('PPMI matrix: %d items, %d non-zero entries', counts.shape[0], ppmi.nnz)
    return ppmi


def randomized_svd(matrix, k, oversamples=consts.SVD_OVERSAMPLES, power_iters=consts.SVD_POWER_ITERS,
                   seed=consts.DEFAULT_SEED):
    """\
    Rank-`k` SVD by randomized subspace iteration (scikit-learn's
    ``randomized_svd`` with QR normalized power iterations).

    Falls back to a dense SVD if ``k + oversamples`` reaches
    ``SVD_DENSE_RATIO`` of the smaller matrix dimension. The largest absolute
    entry of each left singular vector is positive.

    :param matrix: Dense array or scipy sparse matrix (``m x n``).
    :param int k: Rank.
    :param int oversamples: Additional random samples (default: 8).
    :param int power_iters: Number of subspace iterations (default: 4).
    :param int seed: Seed of the random test matrix (default: 42).
    :raises: :py:exc:`RankTooHigh` if `k` exceeds the smaller dimension.
    :return: ``U`` (``m x k``), ``s`` (``k``), ``Vt`` (``k x n``).
    :rtype: tuple
    """
    check_positive(k, 'k')
    if not sparse.issparse(matrix):
        matrix = np.asarray(matrix, dtype=np.float64)
    m, n = matrix.shape
    if k > min(m, n):
        raise RankTooHigh('Rank {0} exceeds the matrix dimension {1}'.format(k, min(m, n)))
    samples = k + oversamples
    if samples >= consts.SVD_DENSE_RATIO * min(m, n):
        dense = matrix.toarray() if sparse.issparse(matrix) else matrix
        u, s, vt = linalg.svd(dense, full_matrices=False)
        u, s, vt = u[:, :k], s[:k], vt[:k]
    else:
        u, s, vt = extmath.randomized_svd(matrix, k, n_oversamples=oversamples, n_iter=power_iters,
                                          power_iteration_normalizer='QR', flip_sign=False, random_state=seed)
    u, vt = _flip_signs(u, vt)
    return u, s, vt


def _flip_signs(u, vt):
    """\
    Makes the largest absolute entry of each column of `u` positive.
    """
    signs = np.sign(u[np.argmax(np.abs(u), axis=0), np.arange(u.shape[1])])
    signs[signs == 0] = 1.0
    return u * signs, vt * signs[:, None]


def truncated_svd(ppmi, k=consts.DEFAULT_CF_DIM, seed=consts.DEFAULT_SEED,
                  oversamples=consts.SVD_OVERSAMPLES, power_iters=consts.SVD_POWER_ITERS):
    """\
    Factorizes the PPMI matrix and returns the item embeddings
    ``U_k * sqrt(S_k)`` with L2-normalized rows.

    :param ppmi: ``N x N`` PPMI matrix.
    :param int k: Embedding dimension (default: 256).
    :param int seed: Seed of the randomized SVD (default: 42).
    :raises: :py:exc:`RankTooHigh` if ``k > N``.
    :rtype: CollabEmbedding
    """
    n = ppmi.shape[0]
    if k > n:
        raise RankTooHigh('Embedding dimension {0} exceeds the number of items {1}'.format(k, n))
    u, s, _ = randomized_svd(ppmi, k, oversamples=oversamples, power_iters=power_iters, seed=seed)
    vectors = l2_normalize_rows(u * np.sqrt(s))
    logger.info('Collaborative embedding: %d items, dim %d, top singular value %.4f', n, k, s[0])
    return CollabEmbedding(vectors, s)


def fuse(text, cf, alpha=consts.DEFAULT_ALPHA, d_out=None):
    """\
    Fuses textual and collaborative embeddings.

    The text rows are L2-normalized, concatenated with ``alpha`` times the
    collaborative rows, mean-centered and projected onto the top `d_out`
    principal components (ordered by explained variance). If `d_out` exceeds
    the rank of the centered matrix, the remaining columns are zero.

    :param text: ``N x d_t`` array.
    :param cf: ``N x k`` array or :py:class:`CollabEmbedding`.
    :param float alpha: Weight of the collaborative part (default: 0.5).
    :param d_out: Output dimension (default: ``None``, i.e. ``d_t``).
    :type d_out: int or None
    :raises: :py:exc:`RowMismatch` if the row counts differ.
    :rtype: numpy.ndarray (``N x d_out``)
    """
    text = np.asarray(text, dtype=np.float64)
    cf = np.asarray(getattr(cf, 'vectors', cf), dtype=np.float64)
    if text.ndim != 2 or cf.ndim != 2:
        raise ValueError('Embeddings must be 2-dimensional')
    if text.shape[0] != cf.shape[0]:
        raise RowMismatch('Text embeddings have {0} rows, collaborative embeddings {1}'
                          .format(text.shape[0], cf.shape[0]))
    if d_out is None:
        d_out = text.shape[1]
    check_positive(d_out, 'd_out')
    width = text.shape[1] + cf.shape[1]
    if d_out > width:
        raise RankTooHigh('Output dimension {0} exceeds the fused dimension {1}'.format(d_out, width))
    fused = np.hstack([l2_normalize_rows(text), alpha * cf])
    fused -= fused.mean(axis=0)
    u, s, vt = linalg.svd(fused, full_matrices=False)
    _, vt = _flip_signs(u, vt)
    components = vt[:d_out]
    res = np.zeros((fused.shape[0], d_out), dtype=np.float64)
    res[:, :len(components)] = fused @ components.T
    logger.info('Fused %d items: %d + %d -> %d dims (alpha=%s)', fused.shape[0], text.shape[1],
                cf.shape[1], d_out, alpha)
    return res
