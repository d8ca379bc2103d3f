"""Small masked MLPs trained on a synthetic regression task and sparsified by
iterative global magnitude pruning with retraining.

Weights use the same ``(source, target)`` orientation as masks, so a layer
computes ``arctan(h @ (W * M) + b)``. The activation is applied at every
layer, output included.
"""

from __future__ import annotations

import logging
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .masks import MaskStack, clean_dead

log = logging.getLogger(__name__)

DEFAULT_ARCH = (10, 128, 128, 16, 7)
DEFAULT_LEVELS = (0.25, 0.5, 0.75, 0.85, 0.9)


class TrainingDiverged(RuntimeError):
    pass


# -- task ---------------------------------------------------------------------


@dataclass
class Task:
    """Inputs, targets and the fixed teacher matrix that produced them."""

    x: np.ndarray
    y: np.ndarray
    teacher: np.ndarray
    n_train: int

    def target(self, x: np.ndarray) -> np.ndarray:
        return x @ self.teacher

    @property
    def train(self):
        return self.x[: self.n_train], self.y[: self.n_train]

    @property
    def val(self):
        return self.x[self.n_train :], self.y[self.n_train :]


def make_task(seed: int = 0, n_samples: int = 10_000, n_in: int = 10, n_out: int = 7,
              fan_in: int = 2, val_fraction: float = 0.2) -> Task:
    """Multi-output regression where every output is a fixed linear function
    of ``fan_in`` randomly chosen inputs, with inputs uniform on [-1, 1].

    Teacher columns are scaled so the largest sampled target magnitude is
    0.8, inside the range of the arctan output units. Because each output
    only reads a few inputs, pruned students develop separate pathways.
    """
    if not 1 <= fan_in <= n_in:
        raise ValueError(f"fan_in must be in [1, {n_in}], got {fan_in}")
    rng = np.random.default_rng(np.random.SeedSequence(seed, spawn_key=(0x7A5C,)))
    teacher = np.zeros((n_in, n_out))
    for j in range(n_out):
        teacher[rng.choice(n_in, fan_in, replace=False), j] = rng.normal(0, 1, fan_in)
    x = rng.uniform(-1, 1, (n_samples, n_in))
    teacher *= 0.8 / np.abs(x @ teacher).max(axis=0)
    return Task(x, x @ teacher, teacher, int(round(n_samples * (1 - val_fraction))))


# -- network ------------------------------------------------------------------


@dataclass
class DenseNet:
    layer_dims: tuple[int, ...]
    weights: list[np.ndarray]
    biases: list[np.ndarray]
    masks: list[np.ndarray]

    @classmethod
    def init(cls, layer_dims: Sequence[int], rng: np.random.Generator) -> "DenseNet":
        dims = tuple(int(d) for d in layer_dims)
        weights = [rng.normal(0, 1 / math.sqrt(a), (a, b)) for a, b in zip(dims[:-1], dims[1:])]
        biases = [np.zeros(b) for b in dims[1:]]
        masks = [np.ones((a, b)) for a, b in zip(dims[:-1], dims[1:])]
        return cls(dims, weights, biases, masks)

    def copy(self) -> "DenseNet":
        return DenseNet(self.layer_dims, [w.copy() for w in self.weights],
                        [b.copy() for b in self.biases], [m.copy() for m in self.masks])

    def mask_stack(self, label: str = "") -> MaskStack:
        return MaskStack([m.astype(np.int64) for m in self.masks], label)

    @property
    def n_weights(self) -> int:
        return sum(m.size for m in self.masks)

    @property
    def n_masked(self) -> int:
        return sum(int((m == 0).sum()) for m in self.masks)

    @property
    def sparsity(self) -> float:
        return self.n_masked / self.n_weights

    def forward(self, x: np.ndarray) -> tuple[np.ndarray, list[np.ndarray]]:
        """Return outputs and the per-layer (input activation, pre-activation) trace."""
        acts, pres = [x], []
        h = x
        for w, b, m in zip(self.weights, self.biases, self.masks):
            z = h @ (w * m) + b
            h = np.arctan(z)
            pres.append(z)
            acts.append(h)
        return h, (acts, pres)

    def predict(self, x):
        return self.forward(x)[0]


def mse(net: DenseNet, x, y) -> float:
    return float(np.mean((net.predict(x) - y) ** 2))


def loss_and_grads(net: DenseNet, x: np.ndarray, y: np.ndarray):
    """Mean squared error over samples and outputs with its gradients
    ``(loss, weight_grads, bias_grads)``; weight gradients are masked."""
    out, (acts, pres) = net.forward(x)
    diff = out - y
    loss = float(np.mean(diff**2))
    delta = 2 * diff / diff.size
    gw, gb = [], []
    for k in range(len(net.weights) - 1, -1, -1):
        delta = delta / (1 + pres[k] ** 2)
        gw.append((acts[k].T @ delta) * net.masks[k])
        gb.append(delta.sum(axis=0))
        if k:
            delta = delta @ (net.weights[k] * net.masks[k]).T
    return loss, gw[::-1], gb[::-1]


def numerical_grads(net: DenseNet, x, y, eps: float = 1e-6):
    """Central finite differences of :func:`mse` with respect to every weight and bias."""
    gw = []
    for w in net.weights:
        g = np.zeros_like(w)
        for idx in np.ndindex(w.shape):
            old = w[idx]
            w[idx] = old + eps
            up = mse(net, x, y)
            w[idx] = old - eps
            down = mse(net, x, y)
            w[idx] = old
            g[idx] = (up - down) / (2 * eps)
        gw.append(g)
    gb = []
    for b in net.biases:
        g = np.zeros_like(b)
        for i in range(b.size):
            old = b[i]
            b[i] = old + eps
            up = mse(net, x, y)
            b[i] = old - eps
            down = mse(net, x, y)
            b[i] = old
            g[i] = (up - down) / (2 * eps)
        gb.append(g)
    return gw, gb


@dataclass
class TrainConfig:
    steps: int = 4000
    lr: float = 0.002
    momentum: float = 0.9  # first-moment decay for adam
    batch_size: int = 128
    patience: int = 1000  # batches without improvement before stopping
    min_delta: float = 1e-5
    eval_every: int = 100
    optimizer: str = "adam"  # or "sgd" (heavy-ball momentum)
    beta2: float = 0.999


def train(net: DenseNet, task: Task, config: TrainConfig, rng: np.random.Generator) -> DenseNet:
    """Minibatch Adam (or SGD with momentum) on the masked weights.

    Validation loss is checked every ``eval_every`` batches; training stops
    once it has not improved by ``min_delta`` for ``patience`` batches, and
    the best validation snapshot is returned.
    """
    net = net.copy()
    xt, yt = task.train
    xv, yv = task.val
    params = [p for pair in zip(net.weights, net.biases) for p in pair]
    mom = [np.zeros_like(p) for p in params]
    sq = [np.zeros_like(p) for p in params]
    best = mse(net, xv, yv)
    best_net = net.copy()
    since = 0
    for step in range(1, config.steps + 1):
        idx = rng.integers(0, len(xt), config.batch_size)
        loss, gw, gb = loss_and_grads(net, xt[idx], yt[idx])
        if not math.isfinite(loss):
            raise TrainingDiverged(f"loss became {loss} at step {step}")
        grads = [g for pair in zip(gw, gb) for g in pair]
        for i, (p, g) in enumerate(zip(params, grads)):
            if config.optimizer == "adam":
                mom[i] = config.momentum * mom[i] + (1 - config.momentum) * g
                sq[i] = config.beta2 * sq[i] + (1 - config.beta2) * g * g
                m_hat = mom[i] / (1 - config.momentum**step)
                v_hat = sq[i] / (1 - config.beta2**step)
                p -= config.lr * m_hat / (np.sqrt(v_hat) + 1e-8)
            else:
                mom[i] = config.momentum * mom[i] - config.lr * g
                p += mom[i]
        for w, m in zip(net.weights, net.masks):
            w *= m
        if step % config.eval_every == 0:
            val = mse(net, xv, yv)
            if not math.isfinite(val):
                raise TrainingDiverged(f"validation loss became {val} at step {step}")
            if val < best - config.min_delta:
                best, best_net, since = val, net.copy(), 0
            else:
                since += config.eval_every
                if since >= config.patience:
                    break
    return best_net


def prune_step(net: DenseNet, target_sparsity: float, per_layer: bool = False) -> DenseNet:
    """Mask the smallest-magnitude surviving weights until
    ``floor(target * total)`` weights are masked.

    Ties are broken by ``(layer, row, col)``. With ``per_layer`` every layer
    is pruned to the target separately instead of globally.
    """
    if not 0 <= target_sparsity < 1:
        raise ValueError(f"target sparsity {target_sparsity} outside [0, 1)")
    net = net.copy()
    groups = [[k] for k in range(len(net.weights))] if per_layer else [list(range(len(net.weights)))]
    for layers in groups:
        total = sum(net.masks[k].size for k in layers)
        masked = sum(int((net.masks[k] == 0).sum()) for k in layers)
        goal = math.floor(target_sparsity * total + 1e-9)
        if goal < masked:
            raise ValueError(f"target {target_sparsity} is below current sparsity {masked / total:.4f}")
        if goal == masked:
            continue
        mags, lay, rows, cols = [], [], [], []
        for k in layers:
            r, c = np.nonzero(net.masks[k])
            mags.append(np.abs(net.weights[k][r, c]))
            lay.append(np.full(r.size, k))
            rows.append(r)
            cols.append(c)
        mags, lay, rows, cols = (np.concatenate(a) for a in (mags, lay, rows, cols))
        order = np.lexsort((cols, rows, lay, mags))[: goal - masked]
        for i in order:
            net.masks[lay[i]][rows[i], cols[i]] = 0
            net.weights[lay[i]][rows[i], cols[i]] = 0.0
    return net


# -- sweep --------------------------------------------------------------------


@dataclass(frozen=True)
class PruneSchedule:
    fractions: tuple[float, ...] = DEFAULT_LEVELS
    initial: TrainConfig = field(default_factory=lambda: TrainConfig(steps=6000))
    retrain: TrainConfig = field(default_factory=lambda: TrainConfig(steps=1500))
    per_layer: bool = False

    def __post_init__(self):
        f = tuple(float(x) for x in self.fractions)
        object.__setattr__(self, "fractions", f)
        if self.initial.optimizer not in ("adam", "sgd") or self.retrain.optimizer not in ("adam", "sgd"):
            raise ValueError("optimizer must be 'adam' or 'sgd'")
        if not f:
            raise ValueError("schedule needs at least one level")
        if any(not 0 <= x < 1 for x in f) or any(b <= a for a, b in zip(f, f[1:])):
            raise ValueError(f"levels must be strictly ascending in [0, 1): {f}")


@dataclass
class Snapshot:
    network_id: int
    level: float
    raw: MaskStack
    cleaned: MaskStack
    removed: int
    global_sparsity: float
    train_mse: float
    val_mse: float

    @property
    def tag(self) -> str:
        return f"{self.level:.2f}"


def run_network(network_id: int, schedule: PruneSchedule, seed: int,
                arch: Sequence[int] = DEFAULT_ARCH, task_seed: int | None = None,
                cleanup: str = "forward") -> list[Snapshot]:
    """Train one network and snapshot it after every pruning level."""
    task = make_task(seed if task_seed is None else task_seed, n_in=arch[0], n_out=arch[-1])
    rng = np.random.Generator(np.random.PCG64(np.random.SeedSequence(seed, spawn_key=(1, network_id))))
    net = DenseNet.init(arch, rng)
    net = train(net, task, schedule.initial, rng)
    snaps = []
    for level in schedule.fractions:
        if level > 0:
            net = prune_step(net, level, per_layer=schedule.per_layer)
            net = train(net, task, schedule.retrain, rng)
        label = f"net{network_id:03d}-s{level:.2f}"
        raw = net.mask_stack(label)
        cleaned, removed = clean_dead(raw, cleanup) if cleanup != "off" else (raw, 0)
        snaps.append(Snapshot(network_id, level, raw, cleaned, removed, net.sparsity,
                              mse(net, *task.train), mse(net, *task.val)))
        log.info("%s sparsity=%.4f val_mse=%.5f removed=%d", label, net.sparsity, snaps[-1].val_mse, removed)
    return snaps


def _run_safe(args):
    network_id, schedule, seed, arch, task_seed, cleanup = args
    try:
        return run_network(network_id, schedule, seed, arch, task_seed, cleanup)
    except TrainingDiverged as exc:
        log.warning("network %d skipped: %s", network_id, exc)
        return []


def sweep(population_size: int, schedule: PruneSchedule, seed: int = 0,
          arch: Sequence[int] = DEFAULT_ARCH, jobs: int = 1, task_seed: int | None = None,
          cleanup: str = "forward") -> list[Snapshot]:
    """Independently initialized networks sharing one task, each trained and
    pruned through ``schedule``. Snapshots are ordered by (network, level)."""
    tasks = [(i, schedule, seed, tuple(arch), task_seed, cleanup) for i in range(population_size)]
    if jobs <= 1:
        results = [_run_safe(t) for t in tasks]
    else:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            results = list(pool.map(_run_safe, tasks))
    return [s for snaps in results for s in snaps]
