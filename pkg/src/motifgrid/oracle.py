"""Brute-force motif enumeration over an explicit layered DAG.

Used as ground truth for the matrix engine. Every count is obtained by
walking the full tuple space of a motif's node roles and testing edge
membership, so it shares no arithmetic with :mod:`motifgrid.motifs`.
Only practical for a handful of nodes per layer.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from itertools import combinations, product
from math import comb

import numpy as np

from .masks import MaskStack, require_valid
from .motifs import MotifKind

DEFAULT_BUDGET = 10**8

Node = tuple[int, int]


class OracleBudgetError(RuntimeError):
    pass


@dataclass(frozen=True)
class ExplicitDag:
    layer_sizes: tuple[int, ...]
    nodes: tuple[Node, ...]
    edges: frozenset[tuple[Node, Node]]

    def layer(self, k: int) -> list[Node]:
        return [(k, i) for i in range(self.layer_sizes[k])]

    def successors(self, node: Node) -> list[Node]:
        return [v for (u, v) in self.edges if u == node]


def expand(stack: MaskStack) -> ExplicitDag:
    require_valid(stack)
    sizes = tuple(stack.layer_dims)
    nodes = tuple((k, i) for k, n in enumerate(sizes) for i in range(n))
    edges = set()
    for k, m in enumerate(stack.masks):
        for r in range(m.shape[0]):
            for c in range(m.shape[1]):
                if m[r, c] == 1:
                    edges.add(((k, r), (k + 1, c)))
    return ExplicitDag(sizes, nodes, frozenset(edges))


def tuple_space(dag: ExplicitDag, kind) -> int:
    """Number of candidate tuples :func:`enumerate_motif` will test."""
    kind = MotifKind(kind)
    n = dag.layer_sizes
    pairs = range(len(n) - 1)
    triples = range(len(n) - 2)
    if kind is MotifKind.CHAIN2:
        return sum(n[k] * n[k + 1] * n[k + 2] for k in triples)
    if kind is MotifKind.CHAIN3:
        return sum(n[k] * n[k + 1] * n[k + 2] * n[k + 3] for k in range(len(n) - 3))
    if kind is MotifKind.CONVERGING2:
        return sum(comb(n[k], 2) * n[k + 1] for k in pairs)
    if kind is MotifKind.DIVERGING2:
        return sum(n[k] * comb(n[k + 1], 2) for k in pairs)
    if kind is MotifKind.CONVERGING3:
        return sum(comb(n[k], 3) * n[k + 1] for k in pairs)
    if kind is MotifKind.DIVERGING3:
        return sum(n[k] * comb(n[k + 1], 3) for k in pairs)
    if kind is MotifKind.BIFAN:
        return sum(comb(n[k], 2) * comb(n[k + 1], 2) for k in pairs)
    return sum(n[k] * comb(n[k + 1], 2) * n[k + 2] for k in triples)


def enumerate_motif(dag: ExplicitDag, kind, budget: int = DEFAULT_BUDGET) -> int:
    """Exact count of ``kind`` in ``dag`` by exhaustive tuple testing.

    Roles that are interchangeable (fan nodes, bi-fan pairs, bi-parallel
    intermediates) are enumerated as index-ordered combinations so each
    sub-graph is seen once.
    """
    kind = MotifKind(kind)
    space = tuple_space(dag, kind)
    if space > budget:
        raise OracleBudgetError(f"{kind}: {space} tuples exceeds budget {budget}")
    E = dag.edges
    L = len(dag.layer_sizes)
    total = 0
    if kind is MotifKind.CHAIN2:
        for k in range(L - 2):
            for a, b, c in product(dag.layer(k), dag.layer(k + 1), dag.layer(k + 2)):
                total += (a, b) in E and (b, c) in E
    elif kind is MotifKind.CHAIN3:
        for k in range(L - 3):
            for a, b, c, d in product(dag.layer(k), dag.layer(k + 1), dag.layer(k + 2), dag.layer(k + 3)):
                total += (a, b) in E and (b, c) in E and (c, d) in E
    elif kind in (MotifKind.CONVERGING2, MotifKind.CONVERGING3):
        arity = 2 if kind is MotifKind.CONVERGING2 else 3
        for k in range(L - 1):
            for t in dag.layer(k + 1):
                for srcs in combinations(dag.layer(k), arity):
                    total += all((s, t) in E for s in srcs)
    elif kind in (MotifKind.DIVERGING2, MotifKind.DIVERGING3):
        arity = 2 if kind is MotifKind.DIVERGING2 else 3
        for k in range(L - 1):
            for s in dag.layer(k):
                for tgts in combinations(dag.layer(k + 1), arity):
                    total += all((s, t) in E for t in tgts)
    elif kind is MotifKind.BIFAN:
        for k in range(L - 1):
            for srcs in combinations(dag.layer(k), 2):
                for tgts in combinations(dag.layer(k + 1), 2):
                    total += all((s, t) in E for s in srcs for t in tgts)
    else:
        for k in range(L - 2):
            for s in dag.layer(k):
                for mids in combinations(dag.layer(k + 1), 2):
                    for t in dag.layer(k + 2):
                        total += all((s, m) in E and (m, t) in E for m in mids)
    return int(total)


def enumerate_all(stack: MaskStack, budget: int = DEFAULT_BUDGET) -> dict[MotifKind, int]:
    dag = expand(stack)
    return {kind: enumerate_motif(dag, kind, budget) for kind in MotifKind}


def reachable_from_inputs(dag: ExplicitDag) -> set[Node]:
    """Nodes reachable by a directed path from layer 0 (inputs included)."""
    adj: dict[Node, list[Node]] = {}
    for u, v in dag.edges:
        adj.setdefault(u, []).append(v)
    seen = set(dag.layer(0))
    queue = deque(seen)
    while queue:
        u = queue.popleft()
        for v in adj.get(u, ()):
            if v not in seen:
                seen.add(v)
                queue.append(v)
    return seen


def forward_live_mask(stack: MaskStack) -> MaskStack:
    """Reference result of forward dead-edge cleanup: keep exactly the
    edges whose source is reachable from the input layer."""
    dag = expand(stack)
    live = reachable_from_inputs(dag)
    masks = [np.zeros_like(m) for m in stack.masks]
    for (k, r), (_, c) in dag.edges:
        if (k, r) in live:
            masks[k][r, c] = 1
    return MaskStack(masks, stack.label)
