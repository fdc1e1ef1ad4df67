# -*- coding: utf-8 -*-
#
# Copyright (c) 2026 -- sidforge authors
# All rights reserved.
#
# License: BSD License
#
"""\
Tests against the collision-corrected evaluation (``cce`` module).
"""
import math
import numpy as np
import pytest
from sidforge import cce, core, round_half_up
try:
    from .tutils import shared_target_fixture, random_index, random_beam, expanded_metrics, index_from_sids, \
        unused_sids
# Attempted relative import in non-package
except (ValueError, SystemError, ImportError):
    from tutils import shared_target_fixture, random_index, random_beam, expanded_metrics, index_from_sids, \
        unused_sids


def test_shared_target_match():
    index, beam, target = shared_target_fixture()
    assert (4, 3, 4, 2) == cce.match_target(beam, index, target, 5)


def test_shared_target_metrics():
    index, beam, target = shared_target_fixture()
    match = cce.match_target(beam, index, target, 5)
    assert abs(cce.item_hit(match) - 2 / 3) <= 1e-9
    assert abs(cce.item_ndcg(match) - 0.27254) <= 5e-4
    assert pytest.approx((1 / math.log2(5) + 1 / math.log2(6)) / 3, abs=1e-12) == cce.item_ndcg(match)
    sid = cce.sid_metrics(beam, index.sid(target), 5)
    assert 1 == sid.hit
    assert abs(sid.ndcg - 1 / math.log2(5)) <= 1e-9


def test_target_absent_from_beam():
    index, beam, target = shared_target_fixture()
    match = cce.match_target(beam[:3], index, target, 5)
    assert (0, 3, 0, 0) == match
    assert 0.0 == cce.item_hit(match)
    assert 0.0 == cce.item_ndcg(match)
    assert (0, 0.0) == cce.sid_metrics(beam[:3], index.sid(target), 5)


def test_target_beyond_k():
    index, beam, target = shared_target_fixture()
    assert 0 == cce.match_target(beam, index, target, 3).r
    assert (0, 0.0) == cce.sid_metrics(beam, index.sid(target), 3)


def test_unknown_target():
    index, beam, _ = shared_target_fixture()
    with pytest.raises(core.UnknownItem):
        cce.match_target(beam, index, 7, 5)


def test_perfect_prediction():
    index = index_from_sids([(0,), (1,), (2,)])
    match = cce.match_target([(1,), (0,)], index, 1, 1)
    assert (1, 1, 1, 1) == match
    assert 1.0 == cce.item_hit(match)
    assert 1.0 == cce.item_ndcg(match)
    assert (1, 1.0) == cce.sid_metrics([(1,), (0,)], (1,), 1)


def test_item_hit_zero_group():
    assert 0.0 == cce.item_hit(cce.ExpandedMatch(0, 0, 0, 0))


def test_oracle_equivalence():
    rng = np.random.default_rng(2026)
    for _ in range(1000):
        n = int(rng.integers(1, 51))
        sid_len = int(rng.integers(1, 4))
        codebook_size = int(rng.integers(1, 9))
        k = int(rng.integers(1, 11))
        index = random_index(rng, n, sid_len, codebook_size)
        target = int(rng.integers(0, n))
        beam = random_beam(rng, index, int(rng.integers(0, 12)))
        match = cce.match_target(beam, index, target, k)
        hit, ndcg = expanded_metrics(beam, index, target, k)
        assert abs(hit - cce.item_hit(match)) <= 1e-12
        assert abs(ndcg - cce.item_ndcg(match)) <= 1e-12
        sid = cce.sid_metrics(beam, index.sid(target), k)
        assert sid.hit >= cce.item_hit(match)
        assert sid.ndcg >= cce.item_ndcg(match)
        if all(len(items) == 1 for _, items in index.groups()):
            assert sid.hit == cce.item_hit(match)
            assert sid.ndcg == cce.item_ndcg(match)


def test_unknown_sids_add_no_positions():
    index, _, target = shared_target_fixture()
    beam = [(0, 0), (3, 3), (2, 2), (1, 0)]
    match = cce.match_target(beam, index, target, 5)
    assert (4, 3, 2, 3) == tuple(match)
    assert 1.0 == cce.item_hit(match)


def test_oracle_equivalence_unknown_sids():
    rng = np.random.default_rng(7)
    for _ in range(1000):
        n = int(rng.integers(1, 51))
        index = random_index(rng, n, int(rng.integers(1, 4)), int(rng.integers(2, 9)))
        k = int(rng.integers(1, 11))
        target = int(rng.integers(0, n))
        beam = random_beam(rng, index, int(rng.integers(0, 12)), unused_sids(rng, index, 4))
        match = cce.match_target(beam, index, target, k)
        hit, ndcg = expanded_metrics(beam, index, target, k)
        assert abs(hit - cce.item_hit(match)) <= 1e-12
        assert abs(ndcg - cce.item_ndcg(match)) <= 1e-12
        assert cce.sid_metrics(beam, index.sid(target), k).hit >= cce.item_hit(match)


def test_monotone_in_k():
    rng = np.random.default_rng(11)
    for _ in range(500):
        n = int(rng.integers(1, 51))
        index = random_index(rng, n, int(rng.integers(1, 4)), int(rng.integers(2, 9)))
        target = int(rng.integers(0, n))
        beam = random_beam(rng, index, int(rng.integers(0, 12)), unused_sids(rng, index, 3))
        hits, ndcgs = [], []
        for k in range(1, 12):
            match = cce.match_target(beam, index, target, k)
            hits.append(cce.item_hit(match))
            ndcgs.append(cce.item_ndcg(match))
        assert all(a <= b for a, b in zip(hits, hits[1:]))
        assert all(a <= b + 1e-15 for a, b in zip(ndcgs, ndcgs[1:]))


def test_evaluate_shared_target():
    index, beam, target = shared_target_fixture()
    report = cce.evaluate([core.make_beam_record(0, target, beam)], index, [5])
    assert 1.0 == report.sid_hit[5]
    assert 0.6667 == round_half_up(report.item_hit[5], 4)
    assert pytest.approx(50.0) == report.inflation_percent(5)
    assert 1 == report.n_records
    assert 0 == report.skipped_targets


def test_evaluate_collision_free_equal():
    rng = np.random.default_rng(3)
    sids = [(i // 8, i % 8) for i in range(40)]
    index = index_from_sids(sids)
    records = [core.make_beam_record(u, int(rng.integers(0, 40)), random_beam(rng, index, 10)) for u in range(200)]
    report = cce.evaluate(records, index, [1, 5, 10])
    for k in (1, 5, 10):
        assert report.sid_hit[k] == report.item_hit[k]
        assert report.sid_ndcg[k] == report.item_ndcg[k]
        assert report.inflation_percent(k) in (0.0, None)


def test_evaluate_workers_deterministic():
    rng = np.random.default_rng(4)
    index = random_index(rng, 50, 2, 4)
    records = [core.make_beam_record(u, int(rng.integers(0, 50)), random_beam(rng, index, 10)) for u in range(300)]
    first = cce.evaluate(records, index, [5, 10], workers=4)
    second = cce.evaluate(records, index, [5, 10], workers=4)
    sequential = cce.evaluate(records, index, [5, 10])
    assert first.as_dict() == second.as_dict()
    for k in (5, 10):
        assert pytest.approx(sequential.item_hit[k], abs=1e-12) == first.item_hit[k]
        assert sequential.item_hit[k] <= sequential.sid_hit[k]
        assert sequential.item_ndcg[k] <= sequential.sid_ndcg[k]


def test_evaluate_empty():
    index, _, _ = shared_target_fixture()
    with pytest.raises(cce.EmptyEvaluation):
        cce.evaluate([], index, [5])


def test_evaluate_invalid_k():
    index, beam, target = shared_target_fixture()
    with pytest.raises(ValueError):
        cce.evaluate([core.make_beam_record(0, target, beam)], index, [0])


def test_evaluate_skipped_and_short(caplog):
    index, beam, target = shared_target_fixture()
    records = [core.make_beam_record(0, target, beam), core.make_beam_record(1, 99, beam)]
    report = cce.evaluate(records, index, [5, 10])
    assert 1 == report.skipped_targets
    assert 2 == report.short_beams
    assert 0.5 == report.sid_hit[5]
    assert pytest.approx(1 / 3) == report.item_hit[5]
    assert 'not part of the index' in caplog.text


@pytest.mark.parametrize('sid_hit, item_hit, expected', [(0.1330, 0.0654, 103.36),
                                                         (0.1147, 0.0665, 72.48)])
def test_inflation_percent(sid_hit, item_hit, expected):
    assert abs(cce.inflation_percent(sid_hit, item_hit) - expected) <= 0.01


def test_inflation_percent_zero():
    assert cce.inflation_percent(0.5, 0.0) is None


def test_relative_change():
    assert pytest.approx(25.0) == cce.relative_change(0.04, 0.05)
    assert cce.relative_change(0.0, 0.05) is None


def test_report_dict_roundtrip():
    index, beam, target = shared_target_fixture()
    report = cce.evaluate([core.make_beam_record(0, target, beam)], index, [5, 10])
    data = report.as_dict()
    assert ['10', '5'] == sorted(data['metrics'])
    again = cce.MetricsReport.from_dict(data)
    assert data == again.as_dict()


def _report(sid_hit, item_hit):
    return cce.MetricsReport([10], {10: sid_hit}, {10: 0.0}, {10: item_hit}, {10: 0.0}, 1)


def test_rank_flips():
    reports = {'rkmeans': _report(0.0650, 0.0280), 'rqvae': _report(0.0600, 0.0420),
               'letter': _report(0.0550, 0.0450)}
    cmp = cce.rank_flips(reports, 10)
    assert ['rkmeans', 'rqvae', 'letter'] == cmp.sid_ranking
    assert ['letter', 'rqvae', 'rkmeans'] == cmp.item_ranking
    assert {('rkmeans', 'rqvae'), ('rkmeans', 'letter'), ('rqvae', 'letter')} == set(cmp.flips)


def test_rank_flips_none():
    cmp = cce.rank_flips({'a': _report(0.2, 0.2), 'b': _report(0.1, 0.1)}, 10)
    assert [] == cmp.flips


def test_rank_flips_missing_cutoff():
    with pytest.raises(ValueError) as ex:
        cce.rank_flips({'a': _report(0.2, 0.2)}, 5)
    assert 'Cutoff 5' in str(ex.value)


if __name__ == '__main__':
    pytest.main([__file__])
