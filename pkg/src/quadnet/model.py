"""Coupled quadratic-map networks and their escape-time iteration.

A network of n quadratic maps is described by an n x n real weight matrix W
(adjacency entries times edge weights).  One update step sends the state
vector z to

    z_k  ->  ( sum_j W[k, j] * z[j] )**2 + c_k

for every node k, where c is the per-node quadratic parameter.  States and
parameters are either all complex or all real.  Escape detection marks a
node the first time its magnitude crosses the test radius; that verdict is
permanent for the rest of the orbit.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import IntEnum

import numpy as np

# Magnitude cap: one more squaring stays below the float64 overflow
# threshold, so capped orbits never produce inf/nan inside the scan.
HARD_MAGNITUDE_CAP = 1e75


class DimensionError(ValueError):
    """Shapes, sizes or value modes of the inputs do not agree."""


class NodeStatus(IntEnum):
    BOUNDED = 0
    ESCAPED = 1
    UNDECIDED = 2


@dataclass(frozen=True)
class EscapeRecord:
    """Per-node boundedness verdicts for one multi-orbit.

    statuses[k] is the verdict for node k; escape_iterations[k] is the first
    step t with |z_k(t)| > radius (-1 when the node never crossed).  The seed
    counts as step 0.  Iteration halts at stop_iteration, the earliest of:
    the budget, the first step any magnitude exceeds HARD_MAGNITUDE_CAP, and
    the first step every node has escaped.  Nodes that never crossed the
    radius are BOUNDED when the scan ran the full budget and UNDECIDED when
    it was cut short.
    """

    statuses: tuple[NodeStatus, ...]
    escape_iterations: tuple[int, ...]
    stop_iteration: int
    budget: int
    radius: float

    @property
    def all_bounded(self) -> bool:
        return all(s is not NodeStatus.ESCAPED for s in self.statuses)

    def __str__(self) -> str:
        parts = []
        for s, t in zip(self.statuses, self.escape_iterations):
            parts.append(f"escaped@{t}" if s is NodeStatus.ESCAPED else s.name.lower())
        return f"[{', '.join(parts)}] stop={self.stop_iteration}/{self.budget}"


def as_weight_matrix(w) -> np.ndarray:
    """Validate and return a square, finite, real float64 weight matrix."""
    arr = np.asarray(w)
    if np.iscomplexobj(arr):
        raise DimensionError("weight matrix must be real")
    arr = arr.astype(np.float64)
    if arr.ndim != 2 or arr.shape[0] != arr.shape[1] or arr.shape[0] < 1:
        raise DimensionError(f"weight matrix must be square n>=1, got shape {arr.shape}")
    if not np.isfinite(arr).all():
        raise ValueError("weight matrix entries must be finite")
    return arr


def simple_dual(a: float) -> np.ndarray:
    """Two self-driven input nodes, cross-talk a into node 2, node 3 summed."""
    return feedback(a, 0.0, 0.0)


def self_drive(a: float, b: float) -> np.ndarray:
    """Simple dual plus a self-loop of weight b on the output node."""
    return feedback(a, b, 0.0)


def feedback(a: float, b: float, f: float) -> np.ndarray:
    """Full three-node coupling: cross-talk a, self-drive b, feedback f.

    Rows of the returned matrix are (1,0,0), (a,1,f), (1,1,b); setting f=0
    gives the self-drive model and b=f=0 the simple dual model.
    """
    for name, val in (("a", a), ("b", b), ("f", f)):
        if not np.isfinite(val):
            raise ValueError(f"model weight {name} must be finite, got {val!r}")
    return np.array([[1.0, 0.0, 0.0], [a, 1.0, f], [1.0, 1.0, b]])


def bipartite(m_block, a1_block, a2_block, g_xx, g_xy, g_yx, g_yy) -> np.ndarray:
    """Two cliques of equal size joined by directed cross blocks.

    Blocks are square 0/1 matrices of equal size N; the result is the
    2N x 2N matrix [[g_xx*M, g_xy*A1], [g_yx*A2, g_yy*M]].
    """
    blocks = [np.asarray(blk, dtype=np.float64) for blk in (m_block, a1_block, a2_block)]
    shape = blocks[0].shape
    if len(shape) != 2 or shape[0] != shape[1]:
        raise DimensionError(f"blocks must be square, got {shape}")
    for blk in blocks:
        if blk.shape != shape:
            raise DimensionError(f"block shapes differ: {blk.shape} vs {shape}")
        if not np.isin(blk, (0.0, 1.0)).all():
            raise ValueError("block entries must be 0 or 1")
    m, a1, a2 = blocks
    return np.block([[g_xx * m, g_xy * a1], [g_yx * a2, g_yy * m]])


def random_bipartite(n_half: int, edges_xy: int, edges_yx: int,
                     g_xx, g_xy, g_yx, g_yy, seed: int) -> np.ndarray:
    """Bipartite clique pair with randomly placed cross edges.

    The M blocks are all ones; A1 gets exactly edges_xy ones and A2 exactly
    edges_yx ones, at positions drawn without replacement from a splitmix64
    stream seeded with `seed`.  The same seed always yields the same matrix.
    """
    if n_half < 1:
        raise DimensionError(f"n_half must be >= 1, got {n_half}")
    total = n_half * n_half
    for name, cnt in (("edges_xy", edges_xy), ("edges_yx", edges_yx)):
        if not 0 <= cnt <= total:
            raise ValueError(f"{name} must be in [0, {total}], got {cnt}")
    stream = _splitmix64(seed)
    m = np.ones((n_half, n_half))
    a1 = _scatter_ones(n_half, edges_xy, stream)
    a2 = _scatter_ones(n_half, edges_yx, stream)
    return bipartite(m, a1, a2, g_xx, g_xy, g_yx, g_yy)


def _splitmix64(seed: int):
    """Infinite stream of 64-bit integers (splitmix64)."""
    mask = (1 << 64) - 1
    state = seed & mask
    while True:
        state = (state + 0x9E3779B97F4A7C15) & mask
        z = state
        z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & mask
        z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & mask
        yield z ^ (z >> 31)


def _scatter_ones(n: int, count: int, stream) -> np.ndarray:
    """0/1 matrix with `count` ones placed by a partial Fisher-Yates shuffle."""
    total = n * n
    cells = list(range(total))
    for i in range(count):
        j = i + next(stream) % (total - i)
        cells[i], cells[j] = cells[j], cells[i]
    block = np.zeros((n, n))
    for pos in cells[:count]:
        block[pos // n, pos % n] = 1.0
    return block


def weighted_inputs(weights: np.ndarray, states: np.ndarray) -> np.ndarray:
    """Row sums sum_j W[k, j] * states[j] for a (n, m) column batch.

    Accumulates in fixed j order so scalar calls and grid renders round
    identically.
    """
    out = weights[:, 0][:, None] * states[0][None, :]
    for j in range(1, weights.shape[0]):
        out = out + weights[:, j][:, None] * states[j][None, :]
    return out


def _check_vector(name: str, vec, n: int) -> np.ndarray:
    arr = np.asarray(vec)
    if arr.shape != (n,):
        raise DimensionError(f"{name} must have length {n}, got shape {arr.shape}")
    dtype = np.complex128 if np.iscomplexobj(arr) else np.float64
    return arr.astype(dtype)


def _joint_mode(c: np.ndarray, z: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Promote both vectors to complex when either is; real stays real."""
    if np.iscomplexobj(c) or np.iscomplexobj(z):
        return c.astype(np.complex128), z.astype(np.complex128)
    return c, z


def step(weights: np.ndarray, params, states) -> np.ndarray:
    """One network update: (W @ z) squared entrywise, plus c.

    Real inputs promote to complex when the other vector is complex; a
    non-finite entry in the result means the update overflowed.
    """
    w = as_weight_matrix(weights)
    n = w.shape[0]
    c, z = _joint_mode(_check_vector("parameter vector", params, n),
                       _check_vector("state vector", states, n))
    s = weighted_inputs(w, z[:, None])[:, 0]
    return s * s + c


def escape_scan(weights: np.ndarray, params: np.ndarray, seeds: np.ndarray,
                budget: int, radius: float) -> tuple[np.ndarray, np.ndarray]:
    """Escape bookkeeping for a batch of independent orbits.

    params and seeds are (n, m): one column per orbit.  Returns
    (escape_iterations (n, m) int32 with -1 for never-crossed,
    stop_iterations (m,) int32).  Columns whose cells have all escaped or
    whose magnitudes cross HARD_MAGNITUDE_CAP are retired early; the rest
    run the full budget.
    """
    if budget < 1:
        raise ValueError(f"iteration budget must be >= 1, got {budget}")
    if not radius > 0:
        raise ValueError(f"escape radius must be positive, got {radius}")
    n, m = params.shape
    esc = np.full((n, m), -1, np.int32)
    stop = np.full(m, -1, np.int32)

    state = np.array(seeds, dtype=params.dtype, copy=True)
    esc_a = np.full((n, m), -1, np.int32)
    active = np.arange(m)
    params_a = params

    def retire(done: np.ndarray) -> None:
        nonlocal active, state, params_a, esc_a
        esc[:, active[done]] = esc_a[:, done]
        keep = ~done
        active = active[keep]
        state = state[:, keep]
        params_a = params_a[:, keep]
        esc_a = esc_a[:, keep]

    esc_a[np.abs(state) > radius] = 0
    done = (esc_a >= 0).all(axis=0)
    stop[active[done]] = 0
    retire(done)

    t = 0
    while t < budget and active.size:
        over_cap = (np.abs(state) > HARD_MAGNITUDE_CAP).any(axis=0)
        if over_cap.any():
            stop[active[over_cap]] = t
            retire(over_cap)
            if not active.size:
                break
        s = weighted_inputs(weights, state)
        state = s * s + params_a
        t += 1
        newly = (np.abs(state) > radius) & (esc_a < 0)
        if newly.any():
            esc_a[newly] = t
            done = (esc_a >= 0).all(axis=0)
            if done.any():
                stop[active[done]] = t
                retire(done)

    if active.size:
        esc[:, active] = esc_a
        stop[active] = budget
    return esc, stop


def statuses_from_scan(esc: np.ndarray, stop: np.ndarray, budget: int) -> np.ndarray:
    """Map scan output to per-node status codes (same shape as esc)."""
    ran_out = (stop == budget)[None, :]
    return np.where(esc >= 0, np.uint8(NodeStatus.ESCAPED),
                    np.where(ran_out, np.uint8(NodeStatus.BOUNDED),
                             np.uint8(NodeStatus.UNDECIDED))).astype(np.uint8)


def iterate_escape(weights, params, seeds, budget: int, radius: float) -> EscapeRecord:
    """Run one multi-orbit with per-node escape detection.

    Node k is ESCAPED at the first step t (seed = step 0) with
    |z_k(t)| > radius.  Shares its arithmetic with the grid renderers, so a
    pixel verdict can always be reproduced from this entry point.
    """
    w = as_weight_matrix(weights)
    n = w.shape[0]
    c, z0 = _joint_mode(_check_vector("parameter vector", params, n),
                        _check_vector("seed vector", seeds, n))
    esc, stop = escape_scan(w, c[:, None], z0[:, None], budget, radius)
    codes = statuses_from_scan(esc, stop, budget)[:, 0]
    return EscapeRecord(
        statuses=tuple(NodeStatus(int(code)) for code in codes),
        escape_iterations=tuple(int(v) for v in esc[:, 0]),
        stop_iteration=int(stop[0]),
        budget=budget,
        radius=float(radius),
    )
