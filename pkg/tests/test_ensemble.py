import numpy as np
import pytest
from scipy import stats

from motifgrid import ensemble
from motifgrid.ensemble import NullSpec, NullSpecError, census_batch, generate, null_spec_of, sample_positions
from motifgrid.masks import MaskStack, dumps, sparsity_profile
from motifgrid.motifs import MotifKind, closed_form_full, count_all


def test_null_spec_of_chain_example(chain_example):
    spec = null_spec_of(chain_example, seed=5, sample_count=10)
    assert spec.layer_dims == (3, 3, 2)
    assert spec.per_layer_edges == (3, 3)
    assert (spec.seed, spec.sample_count) == (5, 10)


def test_null_spec_of_empty():
    assert null_spec_of(MaskStack.empty([4, 3, 2])).per_layer_edges == (0, 0)


@pytest.mark.parametrize(
    "kwargs",
    [
        dict(layer_dims=(3, 3), per_layer_edges=(10,)),
        dict(layer_dims=(3, 3), per_layer_edges=(1, 1)),
        dict(layer_dims=(3, 3), per_layer_edges=(1,), sample_count=1),
        dict(layer_dims=(3, 3), per_layer_edges=(1,), seed=-1),
    ],
)
def test_null_spec_rejects(kwargs):
    with pytest.raises(NullSpecError):
        NullSpec(**kwargs)


def test_generate_dense_is_unique():
    spec = NullSpec((3, 4, 2), (12, 8), seed=1, sample_count=3)
    for seed in (1, 2, 99):
        s = generate(NullSpec(spec.layer_dims, spec.per_layer_edges, seed, 3), 2)
        assert all(m.all() for m in s.masks)


def test_generate_empty():
    s = generate(NullSpec((3, 4, 2), (0, 0), sample_count=2), 0)
    assert sparsity_profile(s).total_edges == 0


def test_generate_is_deterministic():
    spec = NullSpec((3, 3, 2), (3, 3), seed=42, sample_count=10)
    a, b = generate(spec, 7), generate(spec, 7)
    assert dumps(a) == dumps(b)
    assert dumps(generate(spec, 6)) != dumps(a) or dumps(generate(spec, 5)) != dumps(a)


def test_generate_index_bounds():
    spec = NullSpec((3, 3), (3,), sample_count=2)
    with pytest.raises(IndexError):
        generate(spec, 2)


@pytest.mark.parametrize("n, k", [(100, 0), (100, 3), (100, 50), (100, 51), (100, 97), (100, 100), (1, 1)])
def test_sample_positions(n, k):
    rng = np.random.default_rng(0)
    pos = sample_positions(rng, n, k)
    assert len(pos) == k == len(set(pos.tolist()))
    assert np.all(np.diff(pos) > 0)
    assert pos.size == 0 or (pos.min() >= 0 and pos.max() < n)


def test_every_null_keeps_edge_counts():
    spec = NullSpec((5, 7, 6, 3), (9, 30, 2), seed=3, sample_count=200)
    for k in range(spec.sample_count):
        assert tuple(sparsity_profile(generate(spec, k)).per_layer_edges) == spec.per_layer_edges


def test_census_batch_order_and_parallel_agree():
    spec = NullSpec((4, 5, 4), (8, 9), seed=11, sample_count=12)
    serial = census_batch(spec)
    assert [c.counts for c in serial] == [count_all(generate(spec, k)).counts for k in range(12)]
    parallel = census_batch(spec, jobs=2)
    assert [c.counts for c in parallel] == [c.counts for c in serial]


def test_census_batch_dense_and_empty():
    dims = (3, 4, 2)
    dense = census_batch(NullSpec(dims, (12, 8), sample_count=4))
    assert all(c.counts == closed_form_full(dims) for c in dense)
    empty = census_batch(NullSpec(dims, (0, 0), sample_count=4))
    assert all(set(c.counts.values()) == {0} for c in empty)


def test_mean_chain2_matches_expectation():
    # Independent uniform placement per layer: E[Chain2] = sum over middle
    # nodes of E[in] * E[out] = 4 * (6/4) * (6/4) = 9.
    spec = NullSpec((4, 4, 4), (6, 6), seed=2024, sample_count=1000)
    chain = np.array([c[MotifKind.CHAIN2] for c in census_batch(spec)])
    stderr = chain.std(ddof=1) / np.sqrt(len(chain))
    assert abs(chain.mean() - 9.0) < 3 * stderr


def test_placement_is_uniform():
    spec = NullSpec((3, 3), (3,), seed=77, sample_count=10_000)
    freq = sum(generate(spec, k).masks[0] for k in range(spec.sample_count)).ravel()
    assert freq.sum() == 30_000
    assert stats.chisquare(freq).pvalue > 0.001


def test_rejection_sampler_first_draw_order_is_uniform():
    rng = np.random.default_rng(0)
    hits = np.zeros(10)
    for _ in range(5000):
        hits[ensemble._rejection_sample(rng, 10, 2)[0]] += 1
    assert stats.chisquare(hits).pvalue > 0.001
