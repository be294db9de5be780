"""Grid renders of the four set families.

2-D fields sample a complex window (equi-parameter Mandelbrot-type slices
and uni-Julia slices, any node count); 3-D fields sample a real box for
three-node networks (full parameter or seed loci).  Sampling point is the
cell center.  A cell belongs to a node layer when that node never escaped
within the budget, so budget-truncated UNDECIDED cells count as bounded.

Cells are mutually independent, so renders are embarrassingly parallel: the
grid is cut into fixed-size column batches whose results are identical for
any worker count.
"""

from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from .model import (DimensionError, NodeStatus, as_weight_matrix, escape_scan,
                    statuses_from_scan)

DEFAULT_RADIUS = 10.0
DEFAULT_BUDGET_2D = 100
DEFAULT_BUDGET_3D = 50
EQUI_M_EXTENT = (-1.75, 1.25, -1.5, 1.5)
UNI_J_EXTENT = (-1.6, 1.6, -1.6, 1.6)
REAL_BOX_EXTENT = (-2.0, 2.0, -2.0, 2.0, -2.0, 2.0)

# Cells per work batch; fixed so outputs do not depend on the worker count.
_BATCH = 1 << 16


@dataclass(frozen=True)
class Window2D:
    """Axis-aligned complex window with its pixel resolution."""

    re_min: float
    re_max: float
    im_min: float
    im_max: float
    nx: int
    ny: int

    def __post_init__(self):
        if not (self.re_min < self.re_max and self.im_min < self.im_max):
            raise ValueError(f"degenerate window extents: {self}")
        if self.nx < 2 or self.ny < 2:
            raise ValueError(f"window resolution must be >= 2, got {self.nx}x{self.ny}")

    def centers(self) -> tuple[np.ndarray, np.ndarray]:
        xs = self.re_min + (np.arange(self.nx) + 0.5) * (self.re_max - self.re_min) / self.nx
        ys = self.im_min + (np.arange(self.ny) + 0.5) * (self.im_max - self.im_min) / self.ny
        return xs, ys

    def pixel_center(self, ix: int, iy: int) -> complex:
        xs, ys = self.centers()
        return complex(xs[ix], ys[iy])


@dataclass(frozen=True)
class Box3D:
    """Axis-aligned real box with its voxel resolution."""

    x_min: float
    x_max: float
    y_min: float
    y_max: float
    z_min: float
    z_max: float
    nx: int
    ny: int
    nz: int

    def __post_init__(self):
        if not (self.x_min < self.x_max and self.y_min < self.y_max and self.z_min < self.z_max):
            raise ValueError(f"degenerate box extents: {self}")
        if min(self.nx, self.ny, self.nz) < 2:
            raise ValueError(f"box resolution must be >= 2 per axis, got {self.nx}x{self.ny}x{self.nz}")

    def centers(self) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
        xs = self.x_min + (np.arange(self.nx) + 0.5) * (self.x_max - self.x_min) / self.nx
        ys = self.y_min + (np.arange(self.ny) + 0.5) * (self.y_max - self.y_min) / self.ny
        zs = self.z_min + (np.arange(self.nz) + 0.5) * (self.z_max - self.z_min) / self.nz
        return xs, ys, zs

    def voxel_center(self, ix: int, iy: int, iz: int) -> tuple[float, float, float]:
        xs, ys, zs = self.centers()
        return float(xs[ix]), float(ys[iy]), float(zs[iz])


@dataclass(eq=False)
class Field2D:
    """Per-node escape data over a complex window.

    statuses is (n, ny, nx) of NodeStatus codes, escape_iterations the
    matching first-crossing steps (-1 where the node never crossed).  Row iy
    corresponds to imaginary part centers()[1][iy], increasing with iy.
    """

    window: Window2D
    set_kind: str
    statuses: np.ndarray
    escape_iterations: np.ndarray
    budget: int
    radius: float

    @property
    def node_count(self) -> int:
        return self.statuses.shape[0]

    def node_layer(self, k: int) -> np.ndarray:
        """Boolean membership mask of node k (bounded or undecided)."""
        return self.statuses[k] != NodeStatus.ESCAPED

    def intersection(self) -> np.ndarray:
        """Cells belonging to every node layer."""
        return (self.statuses != NodeStatus.ESCAPED).all(axis=0)

    def left_set_at(self) -> np.ndarray:
        """Step each cell left the intersection (-1 where it never did)."""
        esc = np.where(self.escape_iterations < 0, np.iinfo(np.int32).max,
                       self.escape_iterations).min(axis=0)
        return np.where(self.intersection(), np.int32(-1), esc.astype(np.int32))


@dataclass(eq=False)
class Field3D:
    """Binary occupancy over a real box, plus the step each voxel left it.

    occupancy is indexed [iz, iy, ix] (C order, x fastest).  Node k of the
    network is tied to axis k: a voxel holds (x, y, z) = (v_1, v_2, v_3).
    """

    box: Box3D
    set_kind: str
    occupancy: np.ndarray
    exit_iterations: np.ndarray
    budget: int
    radius: float


def _scan_grid(weights: np.ndarray, params: np.ndarray, seeds: np.ndarray,
               budget: int, radius: float, threads: int | None):
    """Batched escape scan over (n, m) columns, optionally threaded."""
    n, m = params.shape
    esc = np.empty((n, m), np.int32)
    stop = np.empty(m, np.int32)
    spans = [(lo, min(lo + _BATCH, m)) for lo in range(0, m, _BATCH)]

    def run(span):
        lo, hi = span
        esc[:, lo:hi], stop[lo:hi] = escape_scan(
            weights, params[:, lo:hi], seeds[:, lo:hi], budget, radius)

    workers = threads if threads is not None else (os.cpu_count() or 1)
    if workers <= 1 or len(spans) == 1:
        for span in spans:
            run(span)
    else:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            list(pool.map(run, spans))
    return esc, stop


def _field2d(weights, window, params, seeds, budget, radius, threads, set_kind) -> Field2D:
    esc, stop = _scan_grid(weights, params, seeds, budget, radius, threads)
    n = weights.shape[0]
    statuses = statuses_from_scan(esc, stop, budget)
    return Field2D(
        window=window,
        set_kind=set_kind,
        statuses=statuses.reshape(n, window.ny, window.nx),
        escape_iterations=esc.reshape(n, window.ny, window.nx),
        budget=budget,
        radius=float(radius),
    )


def render_equi_m(weights, window: Window2D, budget: int = DEFAULT_BUDGET_2D,
                  radius: float = DEFAULT_RADIUS, threads: int | None = None) -> Field2D:
    """Equi-parameter Mandelbrot-type slice: per pixel center c, iterate the
    critical multi-orbit (origin seed) with parameter (c, ..., c)."""
    w = as_weight_matrix(weights)
    n = w.shape[0]
    xs, ys = window.centers()
    cells = (xs[None, :] + 1j * ys[:, None]).ravel()
    params = np.broadcast_to(cells, (n, cells.size))
    seeds = np.zeros((n, cells.size), np.complex128)
    return _field2d(w, window, params, seeds, budget, radius, threads, "equi-m")


def render_uni_j(weights, params, window: Window2D, budget: int = DEFAULT_BUDGET_2D,
                 radius: float = DEFAULT_RADIUS, threads: int | None = None) -> Field2D:
    """Uni-Julia slice: per pixel center z, iterate from the diagonal seed
    (z, ..., z) with a fixed (not necessarily equi) parameter vector."""
    w = as_weight_matrix(weights)
    n = w.shape[0]
    c = np.asarray(params, np.complex128)
    if c.shape != (n,):
        raise DimensionError(f"parameter vector must have length {n}, got shape {c.shape}")
    if not np.isfinite(c).all():
        raise ValueError("parameter vector must be finite")
    xs, ys = window.centers()
    cells = (xs[None, :] + 1j * ys[:, None]).ravel()
    seeds = np.broadcast_to(cells, (n, cells.size))
    grid_params = np.broadcast_to(c[:, None], seeds.shape)
    return _field2d(w, window, grid_params, seeds, budget, radius, threads, "uni-j")


def _real3_columns(box: Box3D) -> np.ndarray:
    xs, ys, zs = box.centers()
    # occupancy index [iz, iy, ix] -> column iz*ny*nx + iy*nx + ix
    gx = np.broadcast_to(xs[None, None, :], (box.nz, box.ny, box.nx)).ravel()
    gy = np.broadcast_to(ys[None, :, None], (box.nz, box.ny, box.nx)).ravel()
    gz = np.broadcast_to(zs[:, None, None], (box.nz, box.ny, box.nx)).ravel()
    return np.stack([gx, gy, gz])


def _field3d(weights, box, params, seeds, budget, radius, threads, set_kind) -> Field3D:
    esc, stop = _scan_grid(weights, params, seeds, budget, radius, threads)
    occupancy = (esc < 0).all(axis=0)
    first_exit = np.where(esc < 0, np.iinfo(np.int32).max, esc).min(axis=0).astype(np.int32)
    exit_at = np.where(occupancy, np.int32(-1), first_exit)
    return Field3D(
        box=box,
        set_kind=set_kind,
        occupancy=occupancy.reshape(box.nz, box.ny, box.nx),
        exit_iterations=exit_at.reshape(box.nz, box.ny, box.nx),
        budget=budget,
        radius=float(radius),
    )


def render_multi_m_real(weights, box: Box3D, budget: int = DEFAULT_BUDGET_3D,
                        radius: float = DEFAULT_RADIUS, threads: int | None = None) -> Field3D:
    """Real parameter locus: voxel (c1, c2, c3) is occupied when the critical
    multi-orbit from the origin keeps every node bounded."""
    w = as_weight_matrix(weights)
    if w.shape[0] != 3:
        raise DimensionError(f"3-D rendering needs a 3-node network, got n={w.shape[0]}")
    params = _real3_columns(box)
    seeds = np.zeros_like(params)
    return _field3d(w, box, params, seeds, budget, radius, threads, "multi-m-real")


def render_multi_j_real(weights, params, box: Box3D, budget: int = DEFAULT_BUDGET_3D,
                        radius: float = DEFAULT_RADIUS, threads: int | None = None) -> Field3D:
    """Real seed locus: voxel (x1, x2, x3) is occupied when the multi-orbit
    seeded there keeps every node bounded under the fixed real parameter."""
    w = as_weight_matrix(weights)
    if w.shape[0] != 3:
        raise DimensionError(f"3-D rendering needs a 3-node network, got n={w.shape[0]}")
    c = np.asarray(params)
    if np.iscomplexobj(c):
        raise DimensionError("3-D rendering is real mode; parameter vector must be real")
    c = c.astype(np.float64)
    if c.shape != (3,):
        raise DimensionError(f"parameter vector must have length 3, got shape {c.shape}")
    if not np.isfinite(c).all():
        raise ValueError("parameter vector must be finite")
    seeds = _real3_columns(box)
    grid_params = np.broadcast_to(c[:, None], seeds.shape)
    return _field3d(w, box, grid_params, seeds, budget, radius, threads, "multi-j-real")


def extract_boundary(mask: np.ndarray) -> np.ndarray:
    """Cells of a binary field with a face neighbor outside the set.

    Face adjacency means 4-neighborhood in 2-D and 6-neighborhood in 3-D;
    the grid edge counts as outside.
    """
    occ = np.asarray(mask, bool)
    if occ.ndim not in (2, 3):
        raise DimensionError(f"binary field must be 2-D or 3-D, got ndim={occ.ndim}")
    padded = np.pad(occ, 1, constant_values=False)
    interior = np.ones_like(occ)
    for axis in range(occ.ndim):
        lo = tuple(slice(1, -1) if ax != axis else slice(0, -2) for ax in range(occ.ndim))
        hi = tuple(slice(1, -1) if ax != axis else slice(2, None) for ax in range(occ.ndim))
        interior &= padded[lo] & padded[hi]
    return occ & ~interior
