"""Independent reference implementations used as test oracles.

Everything here is deliberately coded apart from the package: plain loops
and recursion-free flood fill, so agreement with the library is meaningful.
"""

from __future__ import annotations

import numpy as np

CAP = 1e75


def classic_escape_scalar(c: complex, z0: complex, budget: int, radius: float):
    """Single-map escape test for z**2 + c; returns (escaped, step or None)."""
    z = z0
    if abs(z) > radius:
        return True, 0
    for t in range(1, budget + 1):
        z = z * z + c
        if abs(z) > radius:
            return True, t
    return False, None


def classic_mandelbrot_field(window, budget: int, radius: float) -> np.ndarray:
    """Membership mask of the classical Mandelbrot escape render."""
    xs, ys = window.centers()
    c = xs[None, :] + 1j * ys[:, None]
    z = np.zeros_like(c)
    member = np.ones(c.shape, bool)
    for _ in range(budget):
        z[member] = z[member] ** 2 + c[member]
        member &= ~(np.abs(z) > radius)
    return member


def classic_julia_field(cpar: complex, window, budget: int, radius: float) -> np.ndarray:
    """Membership mask of the classical filled Julia render for z**2 + cpar."""
    xs, ys = window.centers()
    z = (xs[None, :] + 1j * ys[:, None]).astype(complex)
    member = ~(np.abs(z) > radius)
    for _ in range(budget):
        z[member] = z[member] ** 2 + cpar
        member &= ~(np.abs(z) > radius)
    return member


def flood_fill_count(mask: np.ndarray, connectivity: int) -> int:
    """Component count by stack-based flood fill."""
    occ = np.asarray(mask, bool)
    if occ.ndim == 2:
        if connectivity == 4:
            offsets = [(-1, 0), (1, 0), (0, -1), (0, 1)]
        else:
            offsets = [(dy, dx) for dy in (-1, 0, 1) for dx in (-1, 0, 1)
                       if (dy, dx) != (0, 0)]
    else:
        if connectivity == 6:
            offsets = [(1, 0, 0), (-1, 0, 0), (0, 1, 0), (0, -1, 0), (0, 0, 1), (0, 0, -1)]
        else:
            offsets = [(dz, dy, dx) for dz in (-1, 0, 1) for dy in (-1, 0, 1)
                       for dx in (-1, 0, 1) if (dz, dy, dx) != (0, 0, 0)]
    seen = np.zeros_like(occ, bool)
    count = 0
    for start in np.argwhere(occ):
        start = tuple(start)
        if seen[start]:
            continue
        count += 1
        stack = [start]
        seen[start] = True
        while stack:
            cell = stack.pop()
            for off in offsets:
                nb = tuple(c + o for c, o in zip(cell, off))
                if any(v < 0 or v >= s for v, s in zip(nb, occ.shape)):
                    continue
                if occ[nb] and not seen[nb]:
                    seen[nb] = True
                    stack.append(nb)
    return count
