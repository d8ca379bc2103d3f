from math import comb

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from motifgrid import motifs
from motifgrid.masks import MaskError, MaskStack
from motifgrid.motifs import MOTIFS, MotifCensus, MotifKind, closed_form_full, count, count_all
from motifgrid.oracle import enumerate_all

from conftest import random_stack, stacks

K = MotifKind


def test_eight_kinds():
    assert len(MOTIFS) == 8
    assert {k.value for k in MOTIFS} == {
        "Chain2", "Converging2", "Diverging2", "Chain3", "Converging3", "Diverging3", "BiFan", "BiParallel"}


def test_chain2_worked_example(chain_example):
    assert motifs.count_chain2(chain_example) == 3


def test_chain2_trivial():
    assert motifs.count_chain2(MaskStack.full([3, 3])) == 0
    assert motifs.count_chain2(MaskStack.full([2, 3, 2])) == 12


def test_converging2():
    assert motifs.count_converging2(MaskStack.full([3, 3])) == 9
    assert motifs.count_converging2(MaskStack([np.eye(4)])) == 0


def test_diverging2():
    assert motifs.count_diverging2(MaskStack.full([3, 3])) == 9
    assert motifs.count_diverging2(MaskStack.empty([3, 4, 2])) == 0


def test_second_order_fans_chain_example(chain_example):
    # column counts (1,1,1),(2,1); row counts (1,2,0),(2,0,1)
    assert motifs.count_converging2(chain_example) == 1
    assert motifs.count_diverging2(chain_example) == 2


def test_chain3():
    assert motifs.count_chain3(MaskStack.full([2, 2, 2, 2])) == 16
    assert motifs.count_chain3(MaskStack.full([2, 2, 2])) == 0


def test_mask_list_example(mask_list_example):
    # frozen from the brute-force oracle; chain counts also checked by hand:
    # in-degree x out-degree per middle layer gives 4 + 4 + 4.
    c = count_all(mask_list_example)
    assert c[K.CHAIN2] == 12
    assert c[K.CHAIN3] == 10
    assert c[K.CONVERGING2] == 3
    assert c[K.DIVERGING2] == 4
    assert c[K.BIFAN] == c[K.BIPARALLEL] == 0


def test_converging3():
    assert motifs.count_converging3(MaskStack.full([4, 1])) == 4
    assert motifs.count_converging3(MaskStack.full([2, 5])) == 0


def test_diverging3():
    assert motifs.count_diverging3(MaskStack.full([1, 4])) == 4
    assert motifs.count_diverging3(MaskStack.full([5, 2])) == 0


RANDOM_5X5 = [[0, 1, 0, 1, 0], [1, 0, 0, 0, 0], [1, 0, 0, 0, 0], [0, 1, 0, 1, 1], [1, 1, 1, 1, 1]]
RANDOM_6X6 = [[1, 0, 1, 0, 0, 1], [0, 0, 0, 0, 0, 0], [1, 1, 1, 0, 0, 0],
              [1, 0, 0, 1, 1, 0], [0, 0, 0, 1, 0, 1], [1, 1, 0, 0, 1, 1]]


def test_random_masks_against_frozen_oracle_values():
    a = count_all(MaskStack([RANDOM_5X5]))
    assert sum(map(sum, RANDOM_5X5)) == 12
    assert (a[K.CONVERGING3], a[K.DIVERGING3], a[K.BIFAN]) == (3, 11, 5)
    b = count_all(MaskStack([RANDOM_6X6]))
    assert sum(map(sum, RANDOM_6X6)) == 15
    assert (b[K.CONVERGING3], b[K.DIVERGING3], b[K.BIFAN]) == (5, 7, 4)


def test_bifan():
    assert motifs.count_bifan(MaskStack.full([3, 3])) == 9
    assert motifs.count_bifan(MaskStack([[[1, 1], [1, 1], [0, 0]]])) == 1


def test_biparallel():
    assert motifs.count_biparallel(MaskStack.full([2, 3, 2])) == 12
    assert motifs.count_biparallel(MaskStack.full([4, 4])) == 0


def test_biparallel_chain_example(chain_example):
    assert motifs.count_biparallel(chain_example) == 0


def test_count_all_chain_example(chain_example):
    c = count_all(chain_example)
    assert c.counts == {
        K.CHAIN2: 3, K.CONVERGING2: 1, K.DIVERGING2: 2, K.CHAIN3: 0,
        K.CONVERGING3: 0, K.DIVERGING3: 0, K.BIFAN: 0, K.BIPARALLEL: 0,
    }
    assert c.label == "chain-example"
    assert c.sparsity == "0.6000"


def test_count_all_empty():
    c = count_all(MaskStack.empty([4, 5, 3, 2]))
    assert set(c.counts.values()) == {0}


def test_count_all_matches_dedicated_ops(mask_list_example):
    c = count_all(mask_list_example)
    for kind in MOTIFS:
        assert c[kind] == count(mask_list_example, kind)


def test_large_dense_closed_forms():
    dims = [10, 400, 400, 400, 16, 7]
    c = count_all(MaskStack.full(dims))
    assert c.counts == closed_form_full(dims)
    assert c[K.BIFAN] > 2**32  # well past 32-bit range, still exact


def test_closed_form_helper_by_hand():
    cf = closed_form_full([2, 3, 2])
    assert cf[K.CHAIN2] == 12
    assert cf[K.BIPARALLEL] == 2 * 2 * comb(3, 2)
    assert cf[K.BIFAN] == comb(2, 2) * comb(3, 2) + comb(3, 2) * comb(2, 2)


def test_invalid_stack_raises():
    with pytest.raises(MaskError):
        count_all(MaskStack([np.ones((2, 3)), np.ones((2, 2))]))


def test_census_requires_all_kinds():
    with pytest.raises(ValueError):
        MotifCensus({K.CHAIN2: 1})


@settings(max_examples=300, deadline=None)
@given(stacks(max_masks=5, max_width=5))
def test_engine_equals_oracle(s):
    assert count_all(s).counts == enumerate_all(s)


@pytest.mark.parametrize("seed", [11, 22, 33])
def test_engine_equals_oracle_seeded(seed):
    rng = np.random.default_rng(seed)
    for _ in range(25):
        s = random_stack(rng)
        assert count_all(s).counts == enumerate_all(s)


@settings(max_examples=60, deadline=None)
@given(st.lists(st.integers(1, 30), min_size=2, max_size=6))
def test_closed_forms(dims):
    assert count_all(MaskStack.full(dims)).counts == closed_form_full(dims)


@settings(max_examples=150, deadline=None)
@given(stacks(max_masks=4, max_width=5), st.data())
def test_adding_an_edge_never_decreases_counts(s, data):
    k = data.draw(st.integers(0, len(s) - 1))
    m = s.masks[k]
    r = data.draw(st.integers(0, m.shape[0] - 1))
    c = data.draw(st.integers(0, m.shape[1] - 1))
    masks = [x.copy() for x in s.masks]
    masks[k][r, c] = 1
    before = count_all(s).counts
    after = count_all(MaskStack(masks)).counts
    assert all(after[kind] >= before[kind] for kind in MOTIFS)


@pytest.mark.parametrize("seed", range(5))
def test_sparse_and_dense_paths_agree(seed, monkeypatch):
    rng = np.random.default_rng(seed)
    s = random_stack(rng, max_masks=4, max_width=40, min_masks=3)
    dense = count_all(s).counts
    monkeypatch.setattr(motifs, "DENSE_LIMIT", 0)
    assert count_all(s).counts == dense
