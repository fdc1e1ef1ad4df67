# -*- coding: utf-8 -*-
#
# Copyright (c) 2026 -- sidforge authors
# All rights reserved.
#
# License: BSD License
#
"""\
Tests against the preprocessing and the importers.
"""
import gzip
import json
from collections import Counter
import numpy as np
import pytest
from sidforge import dataset, FormatError


def _full_grid(n_users, n_items):
    return [('u{0}'.format(u), 'i{0}'.format(i), u * 100 + i) for u in range(n_users) for i in range(n_items)]


def _random_interactions(rng, n=3000, n_users=150, n_items=80):
    users = rng.integers(0, n_users, size=n)
    items = rng.integers(0, n_items, size=n)
    stamps = rng.integers(0, 50, size=n)
    return [('u{0}'.format(u), 'i{0}'.format(i), int(t)) for u, i, t in zip(users, items, stamps)]


def test_all_filtered():
    interactions = [('u', 'i{0}'.format(i), i) for i in range(5)]
    with pytest.raises(dataset.AllFiltered):
        dataset.preprocess(interactions)


def test_split_sizes():
    ds = dataset.preprocess(_full_grid(6, 6))
    assert 6 == ds.n_users
    assert 6 == ds.n_items
    for user in range(6):
        assert 4 == len(ds.train.sequences[user])
        assert user in ds.validation
        assert user in ds.test
    assert 36 == len(ds.interactions)


def test_split_order():
    ds = dataset.preprocess(_full_grid(5, 5))
    assert (0, 1, 2) == ds.train.sequences[0]
    assert 3 == ds.validation[0]
    assert 4 == ds.test[0]
    assert [(u, 4) for u in range(5)] == ds.test_pairs()
    assert [(u, 3) for u in range(5)] == ds.validation_pairs()


def test_dense_ids_sorted():
    ds = dataset.preprocess(_full_grid(5, 5))
    assert ['u0', 'u1', 'u2', 'u3', 'u4'] == ds.user_ids
    assert ['i0', 'i1', 'i2', 'i3', 'i4'] == ds.item_ids


def test_k_core_min_degree():
    rng = np.random.default_rng(1)
    kept = dataset.k_core_filter([dataset.Interaction(*i) for i in _random_interactions(rng)], 5)
    assert kept
    assert min(Counter(i.user for i in kept).values()) >= 5
    assert min(Counter(i.item for i in kept).values()) >= 5


def test_k_core_cascade():
    # Removing user "b" drops item "y" below the threshold
    interactions = [dataset.Interaction(u, i, 0) for u in 'ac' for i in 'xz'] \
        + [dataset.Interaction('b', 'y', 0), dataset.Interaction('a', 'y', 0)]
    kept = dataset.k_core_filter(interactions, 2)
    assert {'x', 'z'} == {i.item for i in kept}
    assert {'a', 'c'} == {i.user for i in kept}


def test_preprocess_idempotent():
    rng = np.random.default_rng(2)
    ds = dataset.preprocess(_random_interactions(rng))
    again = dataset.preprocess(ds.interactions)
    assert ds.train == again.train
    assert ds.validation == again.validation
    assert ds.test == again.test
    assert ds.interactions == again.interactions


def test_stable_ties():
    interactions = []
    for u in range(5):
        interactions.extend(('u{0}'.format(u), 'i{0}'.format(i), 7) for i in (4, 2, 0, 3, 1))
    ds = dataset.preprocess(interactions)
    assert (4, 2, 0) == ds.train.sequences[0]
    assert 3 == ds.validation[0]
    assert 1 == ds.test[0]


def test_summary():
    summary = dataset.preprocess(_full_grid(6, 5)).summary()
    assert 6 == summary['n_users']
    assert 5 == summary['n_items']
    assert 30 == summary['n_interactions']
    assert 5.0 == summary['avg_length']
    assert 1.0 == summary['density']
    assert 0.0 == summary['sparsity_percent']


@pytest.mark.parametrize('k_core', [0, 1, 2])
def test_k_core_too_small(k_core):
    with pytest.raises(ValueError):
        dataset.preprocess(_full_grid(6, 6), k_core=k_core)


def _write_json_lines(path, records, compress=False):
    data = ''.join(json.dumps(rec) + '\n' for rec in records).encode('utf-8')
    with (gzip.open if compress else open)(str(path), 'wb') as f:
        f.write(data)


def test_import_amazon(tmp_path):
    path = tmp_path / 'reviews.json'
    _write_json_lines(path, [{'reviewerID': 'A1', 'asin': 'B1', 'unixReviewTime': 1300000000, 'overall': 5},
                             {'user_id': 'A2', 'parent_asin': 'B2', 'timestamp': 1588687728923}])
    res = dataset.import_amazon(str(path))
    assert [('A1', 'B1', 1300000000), ('A2', 'B2', 1588687728923)] == res


def test_import_amazon_gzip(tmp_path):
    path = tmp_path / 'reviews.json.gz'
    _write_json_lines(path, [{'reviewerID': 'A1', 'asin': 'B1', 'unixReviewTime': 5}], compress=True)
    assert [('A1', 'B1', 5)] == dataset.import_amazon(str(path))


@pytest.mark.parametrize('record', [{'reviewerID': 'A1', 'asin': 'B1'},
                                    {'user_id': 'A1', 'timestamp': 1}])
def test_import_amazon_missing_field(tmp_path, record):
    path = tmp_path / 'reviews.json'
    _write_json_lines(path, [record])
    with pytest.raises(FormatError):
        dataset.import_amazon(str(path))


def test_import_invalid_json(tmp_path):
    path = tmp_path / 'reviews.json'
    path.write_text('{"reviewerID": \n')
    with pytest.raises(FormatError):
        dataset.import_amazon(str(path))


def test_import_yelp(tmp_path):
    path = tmp_path / 'yelp.json'
    _write_json_lines(path, [{'user_id': 'U', 'business_id': 'B', 'date': '1970-01-02 00:00:01', 'stars': 4}])
    assert [('U', 'B', 86401)] == dataset.import_yelp(str(path))


def test_import_yelp_bad_date(tmp_path):
    path = tmp_path / 'yelp.json'
    _write_json_lines(path, [{'user_id': 'U', 'business_id': 'B', 'date': 'yesterday'}])
    with pytest.raises(FormatError):
        dataset.import_yelp(str(path))


if __name__ == '__main__':
    pytest.main([__file__])
