"""Layered binary connectivity masks: data model, validation, cleanup and I/O.

A mask is indexed ``(source, target)``: row ``i`` of ``masks[k]`` lists the
outgoing edges of node ``i`` in layer ``k`` towards layer ``k + 1``.
"""

from __future__ import annotations

import csv
import os
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np

HEADER = "motifgrid-mask v1"
MANIFEST_NAME = "manifest.csv"


class MaskError(ValueError):
    """Raised when an operation receives a stack that fails validation."""

    def __init__(self, violations):
        self.violations = list(violations)
        super().__init__("; ".join(str(v) for v in self.violations))


class MaskFormatError(ValueError):
    """Raised for malformed mask files."""


@dataclass(frozen=True)
class Violation:
    layer: int | tuple[int, int]
    rule: str

    def __str__(self):
        return f"layer {self.layer}: {self.rule}"


def _freeze(mask) -> np.ndarray:
    arr = np.array(mask, dtype=np.int64, copy=True)
    if arr.ndim != 2:
        raise MaskError([Violation(-1, f"mask must be 2-D, got shape {arr.shape}")])
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True, eq=False)
class MaskStack:
    """Ordered masks of one feed-forward network.

    Masks are stored as read-only int64 arrays. Construction never rejects
    non-binary or mis-chained input; use :func:`validate` for that.
    """

    masks: tuple[np.ndarray, ...]
    label: str = ""

    def __init__(self, masks: Iterable, label: str = ""):
        object.__setattr__(self, "masks", tuple(_freeze(m) for m in masks))
        object.__setattr__(self, "label", str(label))

    def __len__(self):
        return len(self.masks)

    def __iter__(self):
        return iter(self.masks)

    def __getitem__(self, i):
        return self.masks[i]

    def __eq__(self, other):
        if not isinstance(other, MaskStack):
            return NotImplemented
        return (
            self.label == other.label
            and len(self.masks) == len(other.masks)
            and all(a.shape == b.shape and np.array_equal(a, b) for a, b in zip(self.masks, other.masks))
        )

    __hash__ = None

    @property
    def layer_dims(self) -> list[int]:
        if not self.masks:
            return []
        return [m.shape[0] for m in self.masks] + [self.masks[-1].shape[1]]

    def relabel(self, label: str) -> "MaskStack":
        return MaskStack(self.masks, label)

    @classmethod
    def full(cls, dims: Sequence[int], label: str = "") -> "MaskStack":
        return cls([np.ones((a, b), dtype=np.int64) for a, b in zip(dims[:-1], dims[1:])], label)

    @classmethod
    def empty(cls, dims: Sequence[int], label: str = "") -> "MaskStack":
        return cls([np.zeros((a, b), dtype=np.int64) for a, b in zip(dims[:-1], dims[1:])], label)

    @classmethod
    def from_edges(cls, dims: Sequence[int], edges: Sequence[Sequence[tuple[int, int]]], label: str = ""):
        masks = []
        for (a, b), layer_edges in zip(zip(dims[:-1], dims[1:]), edges):
            m = np.zeros((a, b), dtype=np.int64)
            for r, c in layer_edges:
                m[r, c] = 1
            masks.append(m)
        return cls(masks, label)


@dataclass(frozen=True)
class SparsityProfile:
    per_layer_edges: list[int]
    total_edges: int
    total_possible: int
    global_sparsity: float = field(init=False)

    def __post_init__(self):
        object.__setattr__(self, "global_sparsity", float(self.exact_sparsity))

    @property
    def exact_sparsity(self) -> Fraction:
        if self.total_possible == 0:
            return Fraction(1)
        return 1 - Fraction(self.total_edges, self.total_possible)


def validate(stack: MaskStack) -> list[Violation]:
    """Return every invariant violation of ``stack``; an empty list means ok."""
    out = []
    if len(stack.masks) < 1:
        out.append(Violation(-1, "stack must contain at least one mask"))
    for i, m in enumerate(stack.masks):
        if m.shape[0] < 1 or m.shape[1] < 1:
            out.append(Violation(i, f"empty dimension {m.shape}"))
        if m.size and not ((m == 0) | (m == 1)).all():
            out.append(Violation(i, "non-binary entry"))
    for i in range(len(stack.masks) - 1):
        a, b = stack.masks[i], stack.masks[i + 1]
        if a.shape[1] != b.shape[0]:
            out.append(Violation((i, i + 1), f"dimension mismatch: {a.shape[1]} cols vs {b.shape[0]} rows"))
    return out


def is_valid(stack: MaskStack) -> bool:
    return not validate(stack)


def require_valid(stack: MaskStack) -> MaskStack:
    problems = validate(stack)
    if problems:
        raise MaskError(problems)
    return stack


def sparsity_profile(stack: MaskStack) -> SparsityProfile:
    require_valid(stack)
    edges = [int(m.sum()) for m in stack.masks]
    possible = sum(m.size for m in stack.masks)
    return SparsityProfile(edges, sum(edges), possible)


def _forward_pass(masks: list[np.ndarray]) -> int:
    removed = 0
    for k in range(1, len(masks)):
        dead = masks[k - 1].sum(axis=0) == 0
        if dead.any():
            removed += int(masks[k][dead].sum())
            masks[k][dead] = 0
    return removed


def _backward_pass(masks: list[np.ndarray]) -> int:
    removed = 0
    for k in range(len(masks) - 1, 0, -1):
        dead = masks[k].sum(axis=1) == 0
        if dead.any():
            removed += int(masks[k - 1][:, dead].sum())
            masks[k - 1][:, dead] = 0
    return removed


def clean_dead(stack: MaskStack, direction: str = "forward") -> tuple[MaskStack, int]:
    """Remove edges that can never carry signal.

    ``direction="forward"`` drops the outgoing edges of every non-input node
    with zero in-degree, cascading downstream. ``"both"`` also drops the
    incoming edges of every non-output node with zero out-degree, iterating
    both sweeps to a joint fixpoint. Returns the cleaned stack and the number
    of edges removed.
    """
    if direction not in ("forward", "both"):
        raise ValueError(f"unknown cleanup direction {direction!r}")
    require_valid(stack)
    masks = [m.copy() for m in stack.masks]
    total = 0
    while True:
        removed = _forward_pass(masks)
        if direction == "both":
            removed += _backward_pass(masks)
        total += removed
        if removed == 0:
            break
    return MaskStack(masks, stack.label), total


# -- serialization -----------------------------------------------------------


def dumps(stack: MaskStack) -> str:
    require_valid(stack)
    lines = [HEADER, f"layers {len(stack.masks)}"]
    for i, m in enumerate(stack.masks):
        rows, cols = np.nonzero(m)  # row-major order is already lexicographic
        lines.append(f"mask {i} {m.shape[0]} {m.shape[1]} {len(rows)}")
        lines.extend(f"{r} {c}" for r, c in zip(rows.tolist(), cols.tolist()))
    return "\n".join(lines) + "\n"


def loads(text: str, label: str = "") -> MaskStack:
    lines = [ln.strip() for ln in text.splitlines()]
    lines = [ln for ln in lines if ln]
    if not lines or lines[0] != HEADER:
        raise MaskFormatError(f"missing header {HEADER!r}")
    try:
        key, n = lines[1].split()
        if key != "layers":
            raise MaskFormatError(f"expected 'layers', got {key!r}")
        n_layers = int(n)
        pos = 2
        masks = []
        for i in range(n_layers):
            parts = lines[pos].split()
            if len(parts) != 5 or parts[0] != "mask" or int(parts[1]) != i:
                raise MaskFormatError(f"bad mask header line {lines[pos]!r}")
            rows, cols, count = (int(p) for p in parts[2:])
            pos += 1
            m = np.zeros((rows, cols), dtype=np.int64)
            for ln in lines[pos : pos + count]:
                r, c = (int(p) for p in ln.split())
                if not (0 <= r < rows and 0 <= c < cols):
                    raise MaskFormatError(f"edge {r} {c} outside {rows}x{cols} mask {i}")
                m[r, c] = 1
            if len(lines[pos : pos + count]) != count:
                raise MaskFormatError(f"mask {i}: truncated edge list")
            if int(m.sum()) != count:
                raise MaskFormatError(f"mask {i}: duplicate edges")
            pos += count
            masks.append(m)
    except (IndexError, ValueError) as exc:
        if isinstance(exc, MaskFormatError):
            raise
        raise MaskFormatError(str(exc)) from exc
    if pos != len(lines):
        raise MaskFormatError("trailing content after last mask")
    return require_valid(MaskStack(masks, label))


def save(stack: MaskStack, path: str | os.PathLike) -> Path:
    path = Path(path)
    path.write_text(dumps(stack))
    return path


def load(path: str | os.PathLike, label: str | None = None) -> MaskStack:
    path = Path(path)
    return loads(path.read_text(), path.stem if label is None else label)


def write_manifest(directory: str | os.PathLike, rows: list[dict]) -> Path:
    """Write ``manifest.csv``; every row needs at least ``label`` and ``file``."""
    directory = Path(directory)
    fields = ["label", "file", "sparsity"]
    for row in rows:
        fields.extend(k for k in row if k not in fields)
    path = directory / MANIFEST_NAME
    with path.open("w", newline="") as fh:
        writer = csv.DictWriter(fh, fieldnames=fields, lineterminator="\n")
        writer.writeheader()
        writer.writerows(rows)
    return path


def read_manifest(directory: str | os.PathLike) -> list[dict]:
    with (Path(directory) / MANIFEST_NAME).open(newline="") as fh:
        return list(csv.DictReader(fh))


def iter_collection(path: str | os.PathLike):
    """Yield ``(file, tag)`` for a mask file or a collection directory.

    Directories with a manifest are read in manifest order; otherwise every
    ``*.mask`` file is taken in sorted order. ``tag`` is the manifest sparsity
    tag, or ``None`` when none is recorded.
    """
    path = Path(path)
    if path.is_file():
        yield path, None
        return
    if (path / MANIFEST_NAME).exists():
        for row in read_manifest(path):
            yield path / row["file"], (row.get("sparsity") or None)
        return
    for f in sorted(path.glob("*.mask")):
        yield f, None
