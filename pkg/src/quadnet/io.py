"""Artifact writers: binary PGM images, VOX1 voxel dumps, metrics CSV,
and SHA-256 manifests.

All formats are byte-deterministic: rerunning an identical job must yield
identical files, so numbers are serialized with 17 significant digits and
nothing records clocks, hosts or absolute paths.
"""

from __future__ import annotations

import csv
import hashlib
import json
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .config import format_real
from .render import Field2D, Field3D

METRICS_COLUMNS = ("job_id", "model", "a", "b", "f", "c", "L", "R", "resolution",
                   "component_count", "occupied_cells", "boxdim_slope", "boxdim_r2")

# Escape shading: in-set cells are black; escaped cells ramp with the
# crossing step so later escapes draw brighter.
_SHADE_BASE = 55
_SHADE_SPAN = 200


def escape_shading(escaped: np.ndarray, escape_step: np.ndarray, budget: int) -> np.ndarray:
    """uint8 image: 0 where in the set, 55 + floor(200*t/budget) at escapes."""
    ramp = _SHADE_BASE + (_SHADE_SPAN * escape_step.astype(np.int64)) // budget
    return np.where(escaped, ramp, 0).astype(np.uint8)


def write_pgm(pixels: np.ndarray, path) -> Path:
    """8-bit binary PGM (P5), rows in array order."""
    img = np.ascontiguousarray(pixels, dtype=np.uint8)
    if img.ndim != 2:
        raise ValueError(f"PGM needs a 2-D array, got shape {img.shape}")
    ny, nx = img.shape
    path = Path(path)
    with open(path, "wb") as handle:
        handle.write(f"P5 {nx} {ny} 255\n".encode("ascii"))
        handle.write(img.tobytes())
    return path


def write_image(field: Field2D, path, node: int | None = None) -> Path:
    """Escape-shaded PGM of one node layer, or of the intersection set."""
    if node is None:
        left = field.left_set_at()
        return write_pgm(escape_shading(left >= 0, left, field.budget), path)
    escaped = ~field.node_layer(node)
    return write_pgm(escape_shading(escaped, field.escape_iterations[node], field.budget),
                     path)


def write_voxels(field: Field3D, path) -> Path:
    """ASCII header `VOX1 nx ny nz` then nx*ny*nz occupancy bytes, x fastest."""
    occ = np.ascontiguousarray(field.occupancy, dtype=np.uint8)
    nz, ny, nx = occ.shape
    path = Path(path)
    with open(path, "wb") as handle:
        handle.write(f"VOX1 {nx} {ny} {nz}\n".encode("ascii"))
        handle.write(occ.tobytes())
    return path


def read_voxels(path) -> np.ndarray:
    """Inverse of write_voxels; returns the boolean occupancy grid."""
    data = Path(path).read_bytes()
    header, _, body = data.partition(b"\n")
    tag, *dims = header.decode("ascii").split()
    if tag != "VOX1" or len(dims) != 3:
        raise ValueError(f"not a VOX1 file: {path}")
    nx, ny, nz = (int(d) for d in dims)
    if len(body) != nx * ny * nz:
        raise ValueError(f"voxel payload has {len(body)} bytes, expected {nx * ny * nz}")
    return np.frombuffer(body, np.uint8).reshape(nz, ny, nx).astype(bool)


def format_cell(value) -> str:
    if value is None:
        return ""
    if isinstance(value, str):
        return value
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    return format_real(value)


def write_metrics(rows, path) -> Path:
    """CSV with the fixed metrics header; one row per finished render."""
    path = Path(path)
    with open(path, "w", newline="") as handle:
        writer = csv.writer(handle, lineterminator="\n")
        writer.writerow(METRICS_COLUMNS)
        for row in rows:
            writer.writerow([format_cell(row.get(col)) for col in METRICS_COLUMNS])
    return path


def sha256_of(path) -> str:
    digest = hashlib.sha256()
    with open(path, "rb") as handle:
        for chunk in iter(lambda: handle.read(1 << 20), b""):
            digest.update(chunk)
    return digest.hexdigest()


@dataclass(frozen=True)
class Manifest:
    """What a job produced: relative paths with content hashes."""

    job_id: str
    files: tuple[tuple[str, str], ...]
    verify_passed: bool | None = None

    def to_json(self) -> str:
        payload = {
            "job_id": self.job_id,
            "files": [{"path": rel, "sha256": digest} for rel, digest in self.files],
        }
        if self.verify_passed is not None:
            payload["verify_passed"] = self.verify_passed
        return json.dumps(payload, indent=2, sort_keys=True) + "\n"


def build_manifest(job_id: str, root, paths, verify_passed: bool | None = None) -> Manifest:
    root = Path(root)
    entries = sorted((str(Path(p).relative_to(root)).replace("\\", "/"), sha256_of(p))
                     for p in paths)
    return Manifest(job_id=job_id, files=tuple(entries), verify_passed=verify_passed)
