# -*- coding: utf-8 -*-
#
# Copyright (c) 2026 -- sidforge authors
# All rights reserved.
#
# License: BSD License
#
"""\
Non-parametric residual K-means tokenizer.

Level 0 clusters the raw embeddings, level ``l`` clusters the residuals left
by the levels before it. The SID of an item is the sequence of its per-level
cluster indices.
"""
import logging
from collections import namedtuple
import numpy as np
from scipy.sparse import csr_matrix
from scipy.spatial.distance import cdist
from . import consts
from .core import build_sid_index
from .zcr import QuantizationModel
from .utils import check_positive, check_non_negative, check_finite

__all__ = ('KMeansLevel', 'kmeans', 'tokenize', 'BadInput')

logger = logging.getLogger(__name__)

_CHUNK_SIZE = 4096


class BadInput(ValueError):
    """\
    Indicates invalid vectors (wrong shape, no rows, non-finite values).
    """


KMeansLevel = namedtuple('KMeansLevel', 'centroids assignments inertia history')
"""\
``centroids``: ``V x d`` float32 codebook, ``assignments``: code per vector,
``inertia``: total squared distance of the vectors to their centroids,
``history``: inertia after each assignment step.
"""


def _assign(vectors, centroids):
    """\
    Returns the nearest centroid of each vector (lowest index on ties) and the
    squared distance to it.
    """
    n = len(vectors)
    labels = np.empty(n, dtype=np.int64)
    dists = np.empty(n, dtype=np.float64)
    for start in range(0, n, _CHUNK_SIZE):
        d = cdist(vectors[start:start + _CHUNK_SIZE], centroids, 'sqeuclidean')
        lbl = np.argmin(d, axis=1)
        labels[start:start + _CHUNK_SIZE] = lbl
        dists[start:start + _CHUNK_SIZE] = d[np.arange(len(lbl)), lbl]
    return labels, dists


def _seed_centroids(vectors, k, rng):
    """\
    k-means++ seeding.
    """
    n = len(vectors)
    chosen = [int(rng.integers(n))]
    d2 = cdist(vectors, vectors[chosen], 'sqeuclidean')[:, 0]
    for _ in range(1, k):
        total = d2.sum()
        if total > 0:
            j = int(rng.choice(n, p=d2 / total))
        else:
            # Fewer distinct vectors than centroids
            j = int(rng.integers(n))
        chosen.append(j)
        d2 = np.minimum(d2, cdist(vectors, vectors[j:j + 1], 'sqeuclidean')[:, 0])
    return vectors[chosen].copy()


def _update(vectors, labels, dists, centroids):
    """\
    Moves each centroid to the mean of its vectors. Empty clusters are
    re-seeded to the vectors farthest from their current centroid.
    """
    n, k = len(vectors), len(centroids)
    onehot = csr_matrix((np.ones(n), (labels, np.arange(n))), shape=(k, n))
    sums = onehot @ vectors
    counts = np.bincount(labels, minlength=k)
    res = centroids.copy()
    filled = counts > 0
    res[filled] = sums[filled] / counts[filled][:, None]
    empty = np.flatnonzero(~filled)
    if len(empty):
        order = np.argsort(-dists, kind='stable')
        for c, j in zip(empty, order):
            res[c] = vectors[j]
        logger.debug('Re-seeded %d empty clusters', len(empty))
    return res


def kmeans(vectors, codebook_size, iters=consts.DEFAULT_KMEANS_ITERS, seed=consts.DEFAULT_SEED):
    """\
    Lloyd's algorithm with k-means++ seeding.

    Stops after `iters` update steps or as soon as no assignment changes.
    Centroid updates are accumulated in double precision, the returned
    codebook is float32 and the returned assignments and inertia refer to it.

    :param vectors: ``n x d`` array.
    :param int codebook_size: Number of centroids (V).
    :param int iters: Maximum number of update steps (default: 20).
    :param int seed: Seed of the k-means++ initialization (default: 42).
    :raises: :py:exc:`BadInput` in case of an empty or non-finite input.
    :rtype: KMeansLevel
    """
    check_positive(codebook_size, 'codebook_size')
    check_non_negative(iters, 'iters')
    vectors = np.asarray(vectors, dtype=np.float64)
    if vectors.ndim != 2 or not len(vectors):
        raise BadInput('Expected a non-empty n x d matrix. Got shape: {0}'.format(vectors.shape))
    check_finite(vectors, 'vectors', BadInput)
    rng = np.random.default_rng(seed)
    centroids = _seed_centroids(vectors, codebook_size, rng)
    labels, dists = _assign(vectors, centroids)
    history = [float(dists.sum())]
    for i in range(iters):
        centroids = _update(vectors, labels, dists, centroids)
        new_labels, dists = _assign(vectors, centroids)
        history.append(float(dists.sum()))
        converged = np.array_equal(new_labels, labels)
        labels = new_labels
        if converged:
            logger.debug('k-means converged after %d iterations', i + 1)
            break
    codebook = centroids.astype(np.float32)
    labels, dists = _assign(vectors, codebook.astype(np.float64))
    return KMeansLevel(codebook, labels, float(dists.sum()), tuple(history))


def tokenize(embeddings, levels=consts.DEFAULT_LEVELS, codebook_size=consts.DEFAULT_CODEBOOK_SIZE,
             iters=consts.DEFAULT_KMEANS_ITERS, seed=consts.DEFAULT_SEED):
    """\
    Assigns a SID of `levels` codes to each embedding row.

    Level ``l`` is clustered with seed ``seed + l``. The returned model holds
    the codebooks of all levels and the residuals which were the input of the
    last level; for ``levels == 1`` these are the embeddings themselves.

    :param embeddings: ``N x d`` array.
    :param int levels: SID length (L, default: 4).
    :param int codebook_size: Codes per level (V, default: 256).
    :param int iters: Lloyd iterations per level (default: 20).
    :param int seed: Base seed (default: 42).
    :raises: :py:exc:`BadInput` in case of invalid embeddings.
    :rtype: tuple(core.SidIndex, zcr.QuantizationModel)
    """
    check_positive(levels, 'levels')
    embeddings = np.asarray(embeddings, dtype=np.float64)
    if embeddings.ndim != 2 or not len(embeddings):
        raise BadInput('Expected a non-empty N x d matrix. Got shape: {0}'.format(embeddings.shape))
    check_finite(embeddings, 'embeddings', BadInput)
    residual = embeddings
    codebooks = []
    codes = []
    last_input = residual
    for level in range(levels):
        last_input = residual
        result = kmeans(residual, codebook_size, iters=iters, seed=seed + level)
        codebooks.append(result.centroids)
        codes.append(result.assignments)
        residual = residual - result.centroids.astype(np.float64)[result.assignments]
        logger.debug('Level %d: inertia %.6f after %d steps', level, result.inertia, len(result.history) - 1)
    sids = np.stack(codes, axis=1)
    index = build_sid_index(enumerate(sids.tolist()), levels, codebook_size)
    model = QuantizationModel(np.stack(codebooks), last_input)
    logger.info('Tokenized %d items into SIDs of length %d (V=%d)', len(embeddings), levels, codebook_size)
    return index, model
