"""Topology metrics for rendered sets.

Connected components of binary fields, directional subset / equality /
nesting relations with a violation tolerance, and a box-counting estimate
of boundary dimension.  All functions take plain boolean arrays, so they
compose with node layers, intersections and 3-D occupancies alike.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy import ndimage

from .model import DimensionError

DEFAULT_TOLERANCE = 0.001
_VIOLATION_SAMPLE = 16


@dataclass(eq=False)
class ComponentLabeling:
    """Component labels (0 = background, 1..component_count) of a field."""

    labels: np.ndarray
    component_count: int
    connectivity: int

    def sizes(self) -> np.ndarray:
        """Cell count per component, index 0 = component 1."""
        if self.component_count == 0:
            return np.zeros(0, np.int64)
        return np.bincount(self.labels.ravel(), minlength=self.component_count + 1)[1:]


@dataclass(frozen=True)
class RelationReport:
    """Outcome of one directional subset check A <= B."""

    holds: bool
    violation_count: int
    violation_fraction: float
    occupied_count: int
    tolerance: float
    sample_violations: tuple[tuple[int, ...], ...]


@dataclass(frozen=True)
class EqualityReport:
    """Both directional subset checks; holds only when both hold."""

    holds: bool
    forward: RelationReport
    backward: RelationReport


def _structure(ndim: int, connectivity: int) -> np.ndarray:
    valid = {2: {4: 1, 8: 2}, 3: {6: 1, 26: 3}}
    if ndim not in valid:
        raise DimensionError(f"binary field must be 2-D or 3-D, got ndim={ndim}")
    if connectivity not in valid[ndim]:
        raise ValueError(
            f"connectivity {connectivity} invalid for {ndim}-D "
            f"(choose from {sorted(valid[ndim])})")
    return ndimage.generate_binary_structure(ndim, valid[ndim][connectivity])


def default_connectivity(ndim: int) -> int:
    """8 neighbors in 2-D, 26 in 3-D: diagonal contact keeps finite-resolution
    sets from fragmenting spuriously along slanted boundaries."""
    return 8 if ndim == 2 else 26


def label_components(mask: np.ndarray, connectivity: int | None = None) -> ComponentLabeling:
    """Label connected components of occupied cells."""
    occ = np.asarray(mask, bool)
    if connectivity is None:
        connectivity = default_connectivity(occ.ndim)
    structure = _structure(occ.ndim, connectivity)
    labels, count = ndimage.label(occ, structure=structure)
    return ComponentLabeling(labels=labels.astype(np.int32), component_count=int(count),
                             connectivity=connectivity)


def _check_same_grid(a: np.ndarray, b: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    a = np.asarray(a, bool)
    b = np.asarray(b, bool)
    if a.shape != b.shape:
        raise DimensionError(f"fields live on different grids: {a.shape} vs {b.shape}")
    return a, b


def subset_relation(a: np.ndarray, b: np.ndarray,
                    tolerance: float = DEFAULT_TOLERANCE) -> RelationReport:
    """How nearly A is a subset of B.

    Violations are cells occupied in A but not in B; the relation holds when
    they make up at most `tolerance` of A's occupied cells.  The default
    0.1% absorbs escape-time truncation noise along set boundaries without
    masking real violations.
    """
    a, b = _check_same_grid(a, b)
    occupied = int(a.sum())
    bad = a & ~b
    count = int(bad.sum())
    fraction = count / occupied if occupied else 0.0
    sample = tuple(tuple(int(i) for i in idx) for idx in np.argwhere(bad)[:_VIOLATION_SAMPLE])
    return RelationReport(holds=fraction <= tolerance, violation_count=count,
                          violation_fraction=fraction, occupied_count=occupied,
                          tolerance=tolerance, sample_violations=sample)


def equality_relation(a: np.ndarray, b: np.ndarray,
                      tolerance: float = DEFAULT_TOLERANCE) -> EqualityReport:
    """Subset checks in both directions."""
    forward = subset_relation(a, b, tolerance)
    backward = subset_relation(b, a, tolerance)
    return EqualityReport(holds=forward.holds and backward.holds,
                          forward=forward, backward=backward)


def nesting_check(masks, tolerance: float = DEFAULT_TOLERANCE) -> list[RelationReport]:
    """Check each adjacent pair of an ordered family for later <= earlier."""
    fields = [np.asarray(m, bool) for m in masks]
    if len(fields) < 2:
        raise ValueError(f"nesting needs at least 2 fields, got {len(fields)}")
    return [subset_relation(later, earlier, tolerance)
            for earlier, later in zip(fields, fields[1:])]


@dataclass(frozen=True)
class DimensionEstimate:
    """Least-squares box-counting slope with its fit quality."""

    slope: float
    r_squared: float
    scales: tuple[int, ...]
    counts: tuple[int, ...]


def default_scales(shape) -> tuple[int, ...]:
    """Powers of two from 1 up to min(extent)/8 that divide every extent."""
    limit = min(shape) // 8
    scales = []
    s = 1
    while s <= max(limit, 1):
        if all(dim % s == 0 for dim in shape):
            scales.append(s)
        s *= 2
    return tuple(scales)


def box_counting_dim(mask: np.ndarray, scales=None) -> DimensionEstimate:
    """Slope of log(occupied box count) against log(1/scale).

    Needs at least 3 scales, each dividing every grid extent, so the box
    partitions tile the field exactly.
    """
    occ = np.asarray(mask, bool)
    if occ.ndim not in (2, 3):
        raise DimensionError(f"binary field must be 2-D or 3-D, got ndim={occ.ndim}")
    scales = tuple(int(s) for s in (default_scales(occ.shape) if scales is None else scales))
    if len(scales) < 3:
        raise ValueError(f"box counting needs >= 3 scales, got {scales}")
    for s in scales:
        if s < 1 or any(dim % s for dim in occ.shape):
            raise ValueError(f"scale {s} does not divide grid extents {occ.shape}")

    counts = []
    for s in scales:
        blocked = occ.reshape(tuple(x for dim in occ.shape for x in (dim // s, s)))
        axes = tuple(range(1, 2 * occ.ndim, 2))
        counts.append(int(blocked.any(axis=axes).sum()))

    log_counts = np.log(np.maximum(counts, 1))
    log_inv = -np.log(np.asarray(scales, float))
    design = np.vstack([log_inv, np.ones(len(scales))]).T
    (slope, intercept), *_ = np.linalg.lstsq(design, log_counts, rcond=None)
    fitted = design @ (slope, intercept)
    ss_res = float(((log_counts - fitted) ** 2).sum())
    ss_tot = float(((log_counts - log_counts.mean()) ** 2).sum())
    r_squared = 1.0 if ss_tot == 0.0 else 1.0 - ss_res / ss_tot
    return DimensionEstimate(slope=float(slope), r_squared=r_squared,
                             scales=scales, counts=tuple(counts))
