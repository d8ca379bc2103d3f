import numpy as np
import pytest
from hypothesis import strategies as st

from motifgrid.masks import MaskStack

# Worked two-mask example: 3 inputs, 3 hidden, 2 outputs.
CHAIN_EXAMPLE = [
    [[0, 0, 1], [1, 1, 0], [0, 0, 0]],
    [[1, 1], [0, 0], [1, 0]],
]

# Four-mask example network (2-3-3-3-2).
MASK_LIST_EXAMPLE = [
    [[1, 1, 0], [1, 0, 0]],
    [[0, 0, 1], [1, 1, 0], [0, 0, 0]],
    [[1, 1, 0], [0, 0, 0], [1, 0, 1]],
    [[1, 0], [0, 1], [0, 1]],
]


@pytest.fixture
def chain_example():
    return MaskStack(CHAIN_EXAMPLE, "chain-example")


@pytest.fixture
def mask_list_example():
    return MaskStack(MASK_LIST_EXAMPLE, "mask-list-example")


def random_stack(rng, max_masks=5, max_width=8, min_masks=1, label=""):
    n_masks = int(rng.integers(min_masks, max_masks + 1))
    dims = rng.integers(1, max_width + 1, n_masks + 1)
    masks = []
    for a, b in zip(dims[:-1], dims[1:]):
        density = rng.uniform(0, 1)
        masks.append((rng.random((a, b)) < density).astype(int))
    return MaskStack(masks, label)


@st.composite
def stacks(draw, max_masks=4, max_width=6, min_masks=1):
    n = draw(st.integers(min_masks, max_masks))
    dims = draw(st.lists(st.integers(1, max_width), min_size=n + 1, max_size=n + 1))
    masks = []
    for a, b in zip(dims[:-1], dims[1:]):
        bits = draw(st.lists(st.integers(0, 1), min_size=a * b, max_size=a * b))
        masks.append(np.array(bits).reshape(a, b))
    return MaskStack(masks)
