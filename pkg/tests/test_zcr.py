# -*- coding: utf-8 -*-
#
# Copyright (c) 2026 -- sidforge authors
# All rights reserved.
#
# License: BSD License
#
"""\
Tests against the reassignment (``zcr`` module).
"""
import numpy as np
import pytest
from sidforge import zcr, collision
try:
    from .tutils import random_index, random_model, index_from_sids, brute_force_group, \
        assignment_delta, two_item_group_fixture
# Attempted relative import in non-package
except (ValueError, SystemError, ImportError):
    from tutils import random_index, random_model, index_from_sids, brute_force_group, \
        assignment_delta, two_item_group_fixture


def test_package_exposes_module():
    import types
    import sidforge
    assert isinstance(sidforge.zcr, types.ModuleType)
    assert sidforge.zcr.zcr is sidforge.zero_collision_reassign
    assert sidforge.zcr.verify_zero_collision is sidforge.verify_zero_collision


def test_cost_matrix_identity():
    assert 0.0 == zcr.cost_matrix([[1.0, 2.0]], [[1.0, 2.0]])[0, 0]


def test_cost_matrix_simple():
    assert 25.0 == zcr.cost_matrix([[3.0, 4.0]], [[0.0, 0.0]])[0, 0]


def test_cost_matrix_loop_reference():
    rng = np.random.default_rng(5)
    residuals = rng.normal(size=(7, 5))
    codebook = rng.normal(size=(9, 5))
    costs = zcr.cost_matrix(residuals, codebook)
    assert (7, 9) == costs.shape
    for i in range(7):
        for c in range(9):
            expected = sum((residuals[i, j] - codebook[c, j]) ** 2 for j in range(5))
            assert pytest.approx(expected, rel=1e-6) == costs[i, c]


def test_cost_matrix_dim_mismatch():
    with pytest.raises(zcr.DimMismatch):
        zcr.cost_matrix(np.zeros((2, 3)), np.zeros((4, 2)))


def test_two_item_group_zcr():
    items, native, costs, codebook_size = two_item_group_fixture()
    assignment = zcr.solve_group(items, native, costs, codebook_size)
    assert {14: 111, 1943: 206} == assignment
    delta, changes = assignment_delta(native, costs, [assignment[i] for i in items])
    assert 1 == changes
    assert abs(delta - 13.76) <= 0.01


def test_two_item_group_greedy():
    items, native, costs, codebook_size = two_item_group_fixture()
    assignment = zcr.greedy_group(items, native, costs, codebook_size)
    assert {14: 206, 1943: 111} == assignment
    delta, changes = assignment_delta(native, costs, [assignment[i] for i in items])
    assert 1 == changes
    assert abs(delta - 20.65) <= 0.01


def test_solve_group_no_collision():
    costs = np.arange(12, dtype=float).reshape(3, 4)
    assert {0: 0, 1: 1, 2: 3} == zcr.solve_group((0, 1, 2), (0, 1, 3), costs, 4)
    assert {0: 0, 1: 1, 2: 3} == zcr.greedy_group((0, 1, 2), (0, 1, 3), costs, 4)


def test_solve_group_capacity():
    with pytest.raises(zcr.GroupExceedsCapacity):
        zcr.solve_group((0, 1, 2), (0, 0, 0), np.zeros((3, 2)), 2)


def test_solve_group_negative_delta():
    # Native codes need not be the nearest codewords
    costs = np.array([[5.0, 0.0, 9.0], [5.0, 9.0, 0.5], [5.0, 9.0, 9.0]])
    assignment = zcr.solve_group((0, 1, 2), (0, 0, 0), costs, 3)
    delta, changes = assignment_delta((0, 0, 0), costs, [assignment[i] for i in (0, 1, 2)])
    assert 2 == changes
    assert pytest.approx(-9.5) == delta
    assert 0 == assignment[2]


def _random_group(rng):
    size = int(rng.integers(2, 7))
    codebook_size = int(rng.integers(size, 9))
    native = tuple(int(c) for c in rng.integers(0, max(1, size // 2 + 1), size=size))
    costs = rng.uniform(0, 100, size=(size, codebook_size))
    return tuple(range(size)), native, costs, codebook_size


def test_solve_group_brute_force():
    rng = np.random.default_rng(500)
    for _ in range(500):
        items, native, costs, codebook_size = _random_group(rng)
        assignment = zcr.solve_group(items, native, costs, codebook_size)
        codes = [assignment[i] for i in items]
        assert len(set(codes)) == len(codes)
        delta, changes = assignment_delta(native, costs, codes)
        best, rho = brute_force_group(native, costs, codebook_size)
        assert rho == changes
        assert abs(best - delta) <= 1e-9


def test_greedy_group_dominated():
    rng = np.random.default_rng(8)
    for _ in range(200):
        items, native, costs, codebook_size = _random_group(rng)
        optimal = zcr.solve_group(items, native, costs, codebook_size)
        greedy = zcr.greedy_group(items, native, costs, codebook_size)
        codes = [greedy[i] for i in items]
        assert len(set(codes)) == len(codes)
        greedy_delta, greedy_changes = assignment_delta(native, costs, codes)
        delta, changes = assignment_delta(native, costs, [optimal[i] for i in items])
        assert greedy_changes == changes
        assert delta <= greedy_delta + 1e-9


def test_zcr_collision_free_input():
    rng = np.random.default_rng(9)
    index = index_from_sids([(0, 1), (0, 2), (1, 1)])
    model = random_model(rng, index)
    new_index, report = zcr.zcr(index, model)
    assert index == new_index
    assert 0 == report.n_reass
    assert 0 == report.delta_d_total
    assert () == report.groups


def test_zcr_zero_collision_guarantee():
    rng = np.random.default_rng(10)
    for _ in range(100):
        index = random_index(rng, int(rng.integers(5, 60)), int(rng.integers(2, 4)), int(rng.integers(4, 9)))
        table = collision.prefix_groups(index)
        if not collision.capacity_check(table, index.codebook_size).satisfied:
            continue
        model = random_model(rng, index)
        new_index, report = zcr.zcr(index, model)
        assert zcr.verify_zero_collision(new_index)
        assert table.rho_total == report.n_reass
        assert () == report.skipped
        for item in range(index.n_items):
            assert index.sid(item)[:-1] == new_index.sid(item)[:-1]


def test_zcr_greedy_dominance():
    rng = np.random.default_rng(11)
    for _ in range(100):
        index = random_index(rng, 40, 2, 6)
        model = random_model(rng, index)
        zcr_index, zcr_report = zcr.zcr(index, model)
        greedy_index, greedy_report = zcr.greedy_reassign(index, model)
        assert zcr_report.n_reass == greedy_report.n_reass
        assert zcr_report.delta_d_total <= greedy_report.delta_d_total + 1e-9
        assert zcr.verify_zero_collision(zcr_index) == zcr.verify_zero_collision(greedy_index)


def test_zcr_group_order_independent():
    rng = np.random.default_rng(12)
    index = random_index(rng, 30, 3, 6)
    model = random_model(rng, index)
    _, report = zcr.zcr(index, model)
    table = collision.prefix_groups(index)
    codebook = model.codebooks[-1]
    total = 0.0
    for prefix, items in reversed(list(table.colliding())):
        if len(items) > index.codebook_size:
            continue
        costs = zcr.cost_matrix(model.residuals[list(items)], codebook)
        native = table.last_codes[prefix]
        assignment = zcr.solve_group(items, native, costs, index.codebook_size)
        total += assignment_delta(native, costs, [assignment[i] for i in items])[0]
    assert pytest.approx(report.delta_d_total, abs=1e-9) == total


def test_zcr_workers_identical():
    rng = np.random.default_rng(13)
    index = random_index(rng, 200, 3, 8)
    model = random_model(rng, index)
    new_index, report = zcr.zcr(index, model)
    new_index2, report2 = zcr.zcr(index, model, workers=4)
    assert new_index == new_index2
    assert report == report2


def test_sum_rho_fixture():
    rng = np.random.default_rng(14)
    sids = []
    for code in range(1574):
        sids.extend([divmod(code, 256) + (7,)] * 2)
    sids.extend((200, j, 0) for j in range(50))
    index = index_from_sids(sids, 256)
    model = random_model(rng, index, dim=3)
    new_index, report = zcr.zcr(index, model)
    assert 1574 == report.n_reass
    assert 1574 == len(report.groups)
    assert all(1 == g.rho and 1 == len(g.changed) for g in report.groups)
    assert zcr.verify_zero_collision(new_index)


def test_skipped_groups(caplog):
    rng = np.random.default_rng(15)
    index = index_from_sids([(0, 0)] * 3 + [(1, 0)] * 2, 2)
    model = random_model(rng, index)
    new_index, report = zcr.zcr(index, model)
    assert ((0,),) == report.skipped
    assert 1 == report.n_reass
    assert not zcr.verify_zero_collision(new_index)
    assert 'Skipped 1 prefix groups' in caplog.text


def test_model_mismatch():
    rng = np.random.default_rng(16)
    index = index_from_sids([(0, 0), (0, 0)])
    other = index_from_sids([(0, 0), (0, 0), (1, 1)])
    with pytest.raises(zcr.ModelMismatch):
        zcr.zcr(index, random_model(rng, other))
    with pytest.raises(zcr.ModelMismatch):
        zcr.zcr(index, zcr.QuantizationModel(np.zeros((3, 8, 2)), np.zeros((2, 2))))


def test_bad_model():
    with pytest.raises(zcr.BadModel):
        zcr.QuantizationModel(np.zeros((2, 8)), np.zeros((2, 2)))
    with pytest.raises(zcr.BadModel):
        zcr.QuantizationModel(np.zeros((2, 8, 3)), np.zeros((2, 2)))
    with pytest.raises(zcr.BadModel):
        zcr.QuantizationModel(np.full((2, 8, 2), np.nan), np.zeros((2, 2)))


def test_reassign_method():
    rng = np.random.default_rng(17)
    index = index_from_sids([(0, 0), (0, 0), (1, 1)])
    model = random_model(rng, index)
    assert 'greedy' == zcr.reassign(index, model, method='GREEDY')[1].method
    with pytest.raises(ValueError):
        zcr.reassign(index, model, method='hungarian')


def test_verify_zero_collision():
    assert zcr.verify_zero_collision(index_from_sids([(0, 0), (0, 1)]))
    assert not zcr.verify_zero_collision(index_from_sids([(0, 0), (0, 0)]))


def test_cost_reduction_percent():
    greedy = zcr.ReassignmentReport('greedy', 2, 41689.0, (), ())
    optimal = zcr.ReassignmentReport('zcr', 2, 38074.0, (), ())
    assert abs(zcr.cost_reduction_percent(greedy, optimal) - 8.67) <= 0.01
    assert zcr.cost_reduction_percent(zcr.ReassignmentReport('greedy', 0, 0.0, (), ()), optimal) is None


def test_report_as_dict():
    index = index_from_sids([(0, 206), (0, 206)], 256)
    codebooks = np.zeros((2, 256, 1))
    residuals = np.zeros((2, 1))
    _, report = zcr.zcr(index, zcr.QuantizationModel(codebooks, residuals))
    data = report.as_dict()
    assert 'zcr' == data['method']
    assert 1 == data['n_reass']
    assert [[0]] == [g['prefix'] for g in data['groups']]


if __name__ == '__main__':
    pytest.main([__file__])
