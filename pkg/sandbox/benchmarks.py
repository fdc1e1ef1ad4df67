# -*- encoding: utf-8 -*-
"""\
Benchmarks of the reassignment methods on synthetic SID indexes.

Reports the run time, the number of reassigned items and the total cost
increase of the minimum-cost reassignment and the greedy baseline.
"""
import os
import csv
import timeit
import numpy as np
import sidforge
from sidforge import consts

# (items, SID length, codebook size, embedding dimension)
_SETTINGS = ((5000, 3, 32, 16), (20000, 4, 64, 32), (50000, 4, 256, 64))


def _output_dir():
    return os.path.join(os.path.abspath(os.path.dirname(__file__)), 'out')


def make_case(n, levels, codebook_size, dim, seed=42):
    """\
    Tokenizes random clustered embeddings and returns ``(index, model)``.
    """
    rng = np.random.default_rng(seed)
    centers = rng.normal(size=(max(2, n // 20), dim))
    embeddings = centers[rng.integers(0, len(centers), size=n)] + rng.normal(scale=0.1, size=(n, dim))
    return sidforge.tokenize(embeddings, levels=levels, codebook_size=codebook_size, iters=10, seed=seed)


def run_reassign_tests(number=3, table=None):
    for n, levels, codebook_size, dim in _SETTINGS:
        index, model = make_case(n, levels, codebook_size, dim)
        stats = sidforge.collision_stats(index)
        reports = {}
        for method in consts.METHODS:
            t = timeit.Timer(lambda: sidforge.reassign(index, model, method=method))
            time = t.timeit(number=number) / number
            reports[method] = sidforge.reassign(index, model, method=method)[1]
            name = '{0} N={1} L={2} V={3}'.format(method, n, levels, codebook_size)
            print('%-32s %10.2f ms  coll=%6.2f%%  n_reass=%6d  delta_d=%12.4f'
                  % (name, 1000 * time, stats.coll_percent, reports[method].n_reass,
                     reports[method].delta_d_total))
            if table is not None:
                table.append((name, '%.2f' % (1000 * time), reports[method].n_reass,
                              '%.4f' % reports[method].delta_d_total))
        reduction = sidforge.cost_reduction_percent(reports['greedy'], reports['zcr'])
        if reduction is not None:
            print('%-32s %10.2f %%' % ('cost reduction', reduction))


if __name__ == '__main__':
    table = []
    run_reassign_tests(table=table)
    out_dir = _output_dir()
    if not os.path.isdir(out_dir):
        os.makedirs(out_dir)
    with open(os.path.join(out_dir, 'results.csv'), 'w') as f:
        writer = csv.writer(f)
        writer.writerows(table)
