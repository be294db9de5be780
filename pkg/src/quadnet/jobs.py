"""Config-driven job execution.

run_job renders the scene a JobSpec describes, writes its artifacts under
the spec's output directory and returns a manifest of every file with a
content hash.  Sweep jobs expand their axes into a Cartesian product and
run one sub-job per point; verify jobs evaluate a named check and report
pass/fail.
"""

from __future__ import annotations

import itertools
from pathlib import Path

from . import verify as verify_mod
from .config import JobSpec, format_complex
from .io import Manifest, build_manifest, write_image, write_metrics, write_voxels
from .render import (extract_boundary, render_equi_m, render_multi_j_real,
                     render_multi_m_real, render_uni_j)
from .topology import box_counting_dim, default_scales, label_components


class JobError(RuntimeError):
    """A job could not run or write its artifacts."""


def _render_field(spec: JobSpec, threads):
    kind = spec.render_kind
    weights = spec.model.build()
    if kind == "equi-m":
        return render_equi_m(weights, spec.window, spec.iterations, spec.radius, threads)
    if kind == "uni-j":
        return render_uni_j(weights, spec.param, spec.window, spec.iterations,
                            spec.radius, threads)
    if kind == "multi-m-real":
        return render_multi_m_real(weights, spec.box, spec.iterations, spec.radius, threads)
    if kind == "multi-j-real":
        return render_multi_j_real(weights, spec.param, spec.box, spec.iterations,
                                   spec.radius, threads)
    raise JobError(f"job kind {spec.kind!r} does not render")


def _metrics_row(spec: JobSpec, mask, job_id: str) -> dict:
    desc = spec.model
    labeling = label_components(mask)
    boundary = extract_boundary(mask)
    scales = default_scales(mask.shape)
    if len(scales) >= 3:
        est = box_counting_dim(boundary, scales)
        slope, r2 = est.slope, est.r_squared
    else:
        slope = r2 = None
    if spec.window is not None:
        resolution = f"{spec.window.nx}x{spec.window.ny}"
    else:
        resolution = f"{spec.box.nx}x{spec.box.ny}x{spec.box.nz}"
    named = desc.type in ("simple-dual", "self-drive", "feedback")
    cparam = None
    if spec.param is not None:
        values = {format_complex(v) for v in spec.param}
        cparam = (values.pop() if len(values) == 1
                  else ";".join(format_complex(v) for v in spec.param))
    return {
        "job_id": job_id,
        "model": desc.type,
        "a": desc.a if named else None,
        "b": desc.b if named and desc.type != "simple-dual" else None,
        "f": desc.f if desc.type == "feedback" else None,
        "c": cparam,
        "L": spec.iterations,
        "R": spec.radius,
        "resolution": resolution,
        "component_count": labeling.component_count,
        "occupied_cells": int(mask.sum()),
        "boxdim_slope": slope,
        "boxdim_r2": r2,
    }


def _run_render(spec: JobSpec, out: Path, job_id: str, threads,
                write_artifacts: bool) -> tuple[list[Path], dict]:
    field = _render_field(spec, threads)
    paths = []
    if spec.render_kind in ("equi-m", "uni-j"):
        mask = field.intersection()
        if write_artifacts:
            for k in range(field.node_count):
                paths.append(write_image(field, out / f"node{k + 1}.pgm", node=k))
            paths.append(write_image(field, out / "intersection.pgm"))
    else:
        mask = field.occupancy
        if write_artifacts:
            paths.append(write_voxels(field, out / "voxels.vox"))
    return paths, _metrics_row(spec, mask, job_id)


def _axis_points(spec: JobSpec):
    names = [name for name, _ in spec.sweep_axes]
    for combo in itertools.product(*(values for _, values in spec.sweep_axes)):
        yield dict(zip(names, combo))


def _point_spec(spec: JobSpec, point: dict, job_id: str) -> JobSpec:
    model_updates = {k: v for k, v in point.items() if k in ("a", "b", "f")}
    desc = spec.model.with_params(**model_updates) if model_updates else spec.model
    param = spec.param
    if "c" in point:
        value = point["c"]
        param = (value,) * desc.node_count
    return JobSpec(kind=spec.target, job_id=job_id, model=desc,
                   output_dir=spec.output_dir, param=param, window=spec.window,
                   box=spec.box, iterations=spec.iterations, radius=spec.radius)


def run_job(spec: JobSpec, threads: int | None = None) -> Manifest:
    """Execute one job; returns the manifest written to its output directory."""
    out = Path(spec.output_dir)
    try:
        out.mkdir(parents=True, exist_ok=True)
    except OSError as err:
        raise JobError(f"cannot create output directory {out}: {err}") from err

    paths: list[Path] = []
    passed = None
    try:
        if spec.kind in ("equi-m", "uni-j", "multi-m-real", "multi-j-real", "analyze"):
            write_artifacts = spec.kind != "analyze"
            artifact_paths, row = _run_render(spec, out, spec.job_id, threads,
                                              write_artifacts)
            paths += artifact_paths
            paths.append(write_metrics([row], out / "metrics.csv"))
        elif spec.kind == "sweep":
            rows = []
            for index, point in enumerate(_axis_points(spec)):
                sub_id = f"{spec.job_id}-{index:03d}"
                sub_spec = _point_spec(spec, point, sub_id)
                sub_out = out / sub_id
                sub_out.mkdir(parents=True, exist_ok=True)
                artifact_paths, row = _run_render(sub_spec, sub_out, sub_id, threads, True)
                paths += artifact_paths
                rows.append(row)
            paths.append(write_metrics(rows, out / "metrics.csv"))
        elif spec.kind == "verify":
            result = verify_mod.run_check(spec.check, resolution=spec.resolution,
                                          iterations=spec.iterations, radius=spec.radius,
                                          threads=threads)
            passed = result.passed
            report_path = out / "verify.txt"
            report_path.write_text(result.report())
            paths.append(report_path)
        else:
            raise JobError(f"unknown job kind {spec.kind!r}")
    except OSError as err:
        raise JobError(f"while writing artifacts under {out}: {err}") from err

    manifest = build_manifest(spec.job_id, out, paths, verify_passed=passed)
    (out / "manifest.json").write_text(manifest.to_json())
    return manifest
