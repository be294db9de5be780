"""Line-oriented job configuration.

The format is deliberately dependency-free: `key = value` lines grouped
under `[job]`, `[model]`, `[render]`, `[sweep]` and `[output]` section
headers, with `#` comments and comma-separated lists.  Numbers accept
plain decimals, `p/q` rationals and complex literals like `-0.117-0.76i`
(i or j suffix).  parse_config applies documented defaults and validates
everything up front, naming the offending line in errors; serialize_config
writes a spec back out so that parsing it reproduces the spec exactly.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field

import numpy as np

from . import model as model_mod
from .render import (Box3D, DEFAULT_BUDGET_2D, DEFAULT_BUDGET_3D, DEFAULT_RADIUS,
                     EQUI_M_EXTENT, REAL_BOX_EXTENT, UNI_J_EXTENT, Window2D)

RENDER_KINDS = ("equi-m", "uni-j", "multi-m-real", "multi-j-real")
JOB_KINDS = RENDER_KINDS + ("sweep", "analyze", "verify")
MODEL_TYPES = ("simple-dual", "self-drive", "feedback", "general",
               "bipartite", "bipartite-random")
VERIFY_CHECKS = ("classical", "prop1", "prop2", "prop3", "nesting",
                 "conjecture1", "real-contrast", "dimension-trend")

DEFAULT_RESOLUTION_2D = (600, 600)
DEFAULT_RESOLUTION_3D = (200, 200, 200)

_SECTIONS = ("job", "model", "render", "sweep", "output")
_KEYS = {
    "job": {"kind", "id", "target", "check"},
    "model": {"type", "a", "b", "f", "n", "w", "n_half", "m_block", "a1_block",
              "a2_block", "gxx", "gxy", "gyx", "gyy", "n_xy", "n_yx", "seed"},
    "render": {"window", "box", "resolution", "iterations", "radius", "c"},
    "sweep": {"a", "b", "f", "c"},
    "output": {"dir"},
}
_ID_RE = re.compile(r"^[A-Za-z0-9._-]+$")


class ConfigError(ValueError):
    """Malformed or invalid job configuration."""

    def __init__(self, message: str, line: int | None = None):
        self.line = line
        super().__init__(f"line {line}: {message}" if line else message)


@dataclass(frozen=True)
class ModelDescriptor:
    """Serializable description of a network; build() yields its matrix."""

    type: str
    a: float = 0.0
    b: float = 0.0
    f: float = 0.0
    n: int = 3
    weights: tuple[float, ...] | None = None
    n_half: int = 0
    m_block: tuple[int, ...] | None = None
    a1_block: tuple[int, ...] | None = None
    a2_block: tuple[int, ...] | None = None
    gxx: float = 0.0
    gxy: float = 0.0
    gyx: float = 0.0
    gyy: float = 0.0
    n_xy: int = 0
    n_yx: int = 0
    seed: int = 0

    @property
    def node_count(self) -> int:
        if self.type in ("bipartite", "bipartite-random"):
            return 2 * self.n_half
        return self.n if self.type == "general" else 3

    def build(self) -> np.ndarray:
        if self.type == "simple-dual":
            return model_mod.simple_dual(self.a)
        if self.type == "self-drive":
            return model_mod.self_drive(self.a, self.b)
        if self.type == "feedback":
            return model_mod.feedback(self.a, self.b, self.f)
        if self.type == "general":
            rows = np.asarray(self.weights, float).reshape(self.n, self.n)
            return model_mod.as_weight_matrix(rows)
        if self.type == "bipartite":
            shape = (self.n_half, self.n_half)
            m = (np.ones(shape) if self.m_block is None
                 else np.asarray(self.m_block, float).reshape(shape))
            a1 = np.asarray(self.a1_block, float).reshape(shape)
            a2 = np.asarray(self.a2_block, float).reshape(shape)
            return model_mod.bipartite(m, a1, a2, self.gxx, self.gxy, self.gyx, self.gyy)
        if self.type == "bipartite-random":
            return model_mod.random_bipartite(self.n_half, self.n_xy, self.n_yx,
                                              self.gxx, self.gxy, self.gyx, self.gyy,
                                              self.seed)
        raise ConfigError(f"unknown model type {self.type!r}")

    def with_params(self, **updates) -> "ModelDescriptor":
        values = self.__dict__ | updates
        return ModelDescriptor(**values)


@dataclass(frozen=True)
class JobSpec:
    """Fully validated description of one job."""

    kind: str
    job_id: str
    model: ModelDescriptor | None
    output_dir: str
    target: str | None = None
    check: str | None = None
    param: tuple | None = None
    window: Window2D | None = None
    box: Box3D | None = None
    resolution: tuple[int, ...] | None = None
    iterations: int | None = None
    radius: float = DEFAULT_RADIUS
    sweep_axes: tuple[tuple[str, tuple], ...] = field(default=())

    @property
    def render_kind(self) -> str | None:
        if self.kind in RENDER_KINDS:
            return self.kind
        return self.target


def parse_real(text: str, line: int | None = None) -> float:
    """Decimal or p/q rational literal."""
    s = text.strip()
    try:
        if "/" in s:
            num, den = s.split("/")
            return float(num) / float(den)
        return float(s)
    except (ValueError, ZeroDivisionError):
        raise ConfigError(f"malformed number {text!r}", line) from None


def parse_complex(text: str, line: int | None = None) -> complex:
    """Complex literal: real part, imaginary part or both, i/j suffix."""
    s = text.strip().replace(" ", "")
    if not s:
        raise ConfigError("empty number", line)
    if s[-1] not in "ij":
        return complex(parse_real(s, line), 0.0)
    body = s[:-1]
    split = 0
    for pos in range(len(body) - 1, 0, -1):
        if body[pos] in "+-" and body[pos - 1] not in "eE/":
            split = pos
            break
    re_part, im_part = body[:split], body[split:]
    if im_part in ("", "+", "-"):
        im_part += "1"
    re_val = parse_real(re_part, line) if re_part else 0.0
    return complex(re_val, parse_real(im_part, line))


def _parse_int(text: str, line: int | None = None) -> int:
    try:
        return int(text.strip())
    except ValueError:
        raise ConfigError(f"malformed integer {text!r}", line) from None


def _split_list(text: str) -> list[str]:
    return [part for part in (p.strip() for p in text.split(",")) if part]


def _read_sections(text: str):
    """Raw section -> key -> (value, line) mapping, format errors only."""
    sections: dict[str, dict[str, tuple[str, int]]] = {}
    section_lines: dict[str, int] = {}
    current = None
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if line.startswith("["):
            if not line.endswith("]"):
                raise ConfigError(f"malformed section header {raw.strip()!r}", lineno)
            name = line[1:-1].strip().lower()
            if name not in _SECTIONS:
                raise ConfigError(f"unknown section [{name}]", lineno)
            current = sections.setdefault(name, {})
            section_lines.setdefault(name, lineno)
            continue
        if current is None:
            raise ConfigError("key outside any section", lineno)
        if "=" not in line:
            raise ConfigError(f"expected key = value, got {raw.strip()!r}", lineno)
        key, value = (part.strip() for part in line.split("=", 1))
        section = [s for s, d in sections.items() if d is current][0]
        if key not in _KEYS[section]:
            raise ConfigError(f"unknown key {key!r} in section [{section}]", lineno)
        if key in current:
            raise ConfigError(f"duplicate key {key!r}", lineno)
        current[key] = (value, lineno)
    return sections, section_lines


class _SectionView:
    def __init__(self, name: str, data: dict, header_line: int | None):
        self.name = name
        self.data = dict(data)
        self.header_line = header_line

    def take(self, key: str):
        return self.data.pop(key, (None, None))

    def require(self, key: str):
        value, line = self.take(key)
        if value is None:
            raise ConfigError(f"missing required key {key!r} in section [{self.name}]",
                              self.header_line)
        return value, line

    def finish(self, allowed_note: str = ""):
        for key, (_, line) in self.data.items():
            raise ConfigError(f"key {key!r} not allowed here{allowed_note}", line)


def _parse_model(view: _SectionView) -> ModelDescriptor:
    type_text, type_line = view.require("type")
    mtype = type_text.lower()
    if mtype not in MODEL_TYPES:
        raise ConfigError(f"unknown model type {type_text!r}", type_line)

    def real_of(key, default=0.0):
        value, line = view.take(key)
        return default if value is None else parse_real(value, line)

    def int_of(key, default=0):
        value, line = view.take(key)
        return default if value is None else _parse_int(value, line)

    def block_of(key, required, n_half):
        value, line = view.take(key)
        if value is None:
            if required:
                raise ConfigError(f"model type {mtype!r} needs key {key!r}", view.header_line)
            return None
        entries = tuple(_parse_int(part, line) for part in _split_list(value))
        if len(entries) != n_half * n_half:
            raise ConfigError(f"{key} needs {n_half * n_half} entries, got {len(entries)}", line)
        if any(e not in (0, 1) for e in entries):
            raise ConfigError(f"{key} entries must be 0 or 1", line)
        return entries

    if mtype in ("simple-dual", "self-drive", "feedback"):
        desc = ModelDescriptor(type=mtype, a=real_of("a"),
                               b=real_of("b") if mtype != "simple-dual" else 0.0,
                               f=real_of("f") if mtype == "feedback" else 0.0)
    elif mtype == "general":
        n = int_of("n", 3)
        if n < 1:
            raise ConfigError(f"general model needs n >= 1, got {n}", view.header_line)
        value, line = view.require("w")
        weights = tuple(parse_real(part, line) for part in _split_list(value))
        if len(weights) != n * n:
            raise ConfigError(f"w needs {n * n} entries for n={n}, got {len(weights)}", line)
        desc = ModelDescriptor(type=mtype, n=n, weights=weights)
    else:
        n_half = int_of("n_half")
        if n_half < 1:
            raise ConfigError("bipartite models need n_half >= 1", view.header_line)
        g = {key: real_of(key) for key in ("gxx", "gxy", "gyx", "gyy")}
        if mtype == "bipartite":
            desc = ModelDescriptor(
                type=mtype, n_half=n_half,
                m_block=block_of("m_block", False, n_half),
                a1_block=block_of("a1_block", True, n_half),
                a2_block=block_of("a2_block", True, n_half), **g)
        else:
            desc = ModelDescriptor(type=mtype, n_half=n_half,
                                   n_xy=int_of("n_xy"), n_yx=int_of("n_yx"),
                                   seed=int_of("seed"), **g)
            for name, cnt in (("n_xy", desc.n_xy), ("n_yx", desc.n_yx)):
                if not 0 <= cnt <= n_half * n_half:
                    raise ConfigError(f"{name} must be in [0, {n_half * n_half}]",
                                      view.header_line)
    view.finish(f" for model type {mtype!r}")
    return desc


def _parse_param(text: str, line: int | None, kind: str, n: int) -> tuple:
    values = [parse_complex(part, line) for part in _split_list(text)]
    if not values:
        raise ConfigError("empty parameter list", line)
    if len(values) == 1:
        values = values * n
    if len(values) != n:
        raise ConfigError(f"parameter vector needs 1 or {n} entries, got {len(values)}", line)
    if kind.endswith("-real"):
        if any(v.imag for v in values):
            raise ConfigError(f"{kind} is real mode; parameter must be real", line)
        return tuple(v.real for v in values)
    return tuple(values)


def _parse_resolution(text: str, line: int | None, dims: int) -> tuple[int, ...]:
    parts = [_parse_int(p, line) for p in _split_list(text)]
    if len(parts) == 1:
        parts = parts * dims
    if len(parts) != dims:
        raise ConfigError(f"resolution needs 1 or {dims} values, got {len(parts)}", line)
    if any(p < 2 for p in parts):
        raise ConfigError("resolution values must be >= 2", line)
    return tuple(parts)


def _parse_extent(text: str, line: int | None, count: int, what: str) -> tuple[float, ...]:
    parts = [parse_real(p, line) for p in _split_list(text)]
    if len(parts) != count:
        raise ConfigError(f"{what} needs {count} values, got {len(parts)}", line)
    return tuple(parts)


def parse_config(text: str) -> JobSpec:
    """Parse and validate one job configuration."""
    sections, section_lines = _read_sections(text)

    def section(name: str) -> _SectionView:
        return _SectionView(name, sections.get(name, {}), section_lines.get(name))

    job = section("job")
    if "job" not in sections:
        raise ConfigError("missing [job] section")
    kind_text, kind_line = job.require("kind")
    kind = kind_text.lower()
    if kind not in JOB_KINDS:
        raise ConfigError(f"unknown job kind {kind_text!r}", kind_line)

    id_text, id_line = job.take("id")
    job_id = kind if id_text is None else id_text
    if not _ID_RE.match(job_id):
        raise ConfigError(f"job id must match [A-Za-z0-9._-]+, got {job_id!r}", id_line)

    target = None
    if kind in ("sweep", "analyze"):
        target_text, target_line = job.require("target")
        target = target_text.lower()
        if target not in RENDER_KINDS:
            raise ConfigError(f"target must be one of {RENDER_KINDS}, got {target_text!r}",
                              target_line)
    check = None
    if kind == "verify":
        check_text, check_line = job.require("check")
        check = check_text.lower()
        if check not in VERIFY_CHECKS:
            raise ConfigError(f"unknown verify check {check_text!r} "
                              f"(choose from {', '.join(VERIFY_CHECKS)})", check_line)
    job.finish()

    render_kind = target if kind in ("sweep", "analyze") else (
        kind if kind in RENDER_KINDS else None)

    desc = None
    if kind == "verify":
        if "model" in sections:
            raise ConfigError("[model] is not used by verify jobs",
                              section_lines["model"])
    else:
        if "model" not in sections:
            raise ConfigError("missing [model] section")
        desc = _parse_model(section("model"))
        if render_kind in ("multi-m-real", "multi-j-real") and desc.node_count != 3:
            raise ConfigError(f"{render_kind} needs a 3-node model, got n={desc.node_count}",
                              section_lines["model"])

    render = section("render")
    window = box = None
    resolution = None
    param = None
    iterations = None
    radius = DEFAULT_RADIUS

    radius_text, radius_line = render.take("radius")
    if radius_text is not None:
        radius = parse_real(radius_text, radius_line)
        if not radius > 0:
            raise ConfigError(f"radius must be positive, got {radius_text}", radius_line)
    iter_text, iter_line = render.take("iterations")
    if iter_text is not None:
        iterations = _parse_int(iter_text, iter_line)
        if iterations < 1:
            raise ConfigError(f"iterations must be >= 1, got {iterations}", iter_line)

    if render_kind is not None:
        is_3d = render_kind.endswith("-real")
        if iterations is None:
            iterations = DEFAULT_BUDGET_3D if is_3d else DEFAULT_BUDGET_2D
        res_text, res_line = render.take("resolution")
        dims = 3 if is_3d else 2
        res = (_parse_resolution(res_text, res_line, dims) if res_text is not None
               else (DEFAULT_RESOLUTION_3D if is_3d else DEFAULT_RESOLUTION_2D))
        if is_3d:
            win_text, win_line = render.take("window")
            if win_text is not None:
                raise ConfigError(f"{render_kind} takes a box, not a window", win_line)
            box_text, box_line = render.take("box")
            extent = (REAL_BOX_EXTENT if box_text is None
                      else _parse_extent(box_text, box_line, 6, "box"))
            try:
                box = Box3D(*extent, nx=res[0], ny=res[1], nz=res[2])
            except ValueError as err:
                raise ConfigError(str(err), box_line) from None
        else:
            box_text, box_line = render.take("box")
            if box_text is not None:
                raise ConfigError(f"{render_kind} takes a window, not a box", box_line)
            win_text, win_line = render.take("window")
            default = EQUI_M_EXTENT if render_kind == "equi-m" else UNI_J_EXTENT
            extent = (default if win_text is None
                      else _parse_extent(win_text, win_line, 4, "window"))
            try:
                window = Window2D(*extent, nx=res[0], ny=res[1])
            except ValueError as err:
                raise ConfigError(str(err), win_line) from None

        c_text, c_line = render.take("c")
        needs_c = render_kind in ("uni-j", "multi-j-real")
        if needs_c:
            if c_text is None:
                raise ConfigError(f"{render_kind} needs key 'c' in [render]",
                                  render.header_line or section_lines.get("job"))
            param = _parse_param(c_text, c_line, render_kind, desc.node_count)
        elif c_text is not None:
            raise ConfigError(f"key 'c' is not used by {render_kind}", c_line)
    else:
        res_text, res_line = render.take("resolution")
        if res_text is not None:
            parts = [_parse_int(p, res_line) for p in _split_list(res_text)]
            if not 1 <= len(parts) <= 3 or any(p < 2 for p in parts):
                raise ConfigError(f"malformed resolution {res_text!r}", res_line)
            resolution = tuple(parts)
    render.finish()

    sweep_axes: tuple = ()
    if kind == "sweep":
        if "sweep" not in sections:
            raise ConfigError("sweep jobs need a [sweep] section")
        sweep = sections["sweep"]
        axes = []
        for key, (value, line) in sweep.items():
            if key == "c":
                if target not in ("uni-j", "multi-j-real"):
                    raise ConfigError(f"axis 'c' is not used by target {target!r}", line)
                values = tuple(parse_complex(p, line) for p in _split_list(value))
                if target == "multi-j-real":
                    if any(v.imag for v in values):
                        raise ConfigError("real-mode axis 'c' must be real", line)
                    values = tuple(v.real for v in values)
            else:
                has = {"simple-dual": ("a",), "self-drive": ("a", "b"),
                       "feedback": ("a", "b", "f")}.get(desc.type, ())
                if key not in has:
                    raise ConfigError(f"axis {key!r} is not a parameter of model type "
                                      f"{desc.type!r}", line)
                values = tuple(parse_real(p, line) for p in _split_list(value))
            if not values:
                raise ConfigError(f"axis {key!r} has no values", line)
            axes.append((key, values))
        sweep_axes = tuple(axes)
    elif "sweep" in sections:
        raise ConfigError("[sweep] section is only used by sweep jobs",
                          section_lines["sweep"])

    output = section("output")
    dir_text, _ = output.take("dir")
    output_dir = dir_text if dir_text is not None else f"out/{job_id}"
    output.finish()

    return JobSpec(kind=kind, job_id=job_id, model=desc, output_dir=output_dir,
                   target=target, check=check, param=param, window=window, box=box,
                   resolution=resolution, iterations=iterations, radius=radius,
                   sweep_axes=sweep_axes)


def format_real(value: float) -> str:
    return f"{float(value):.17g}"


def format_complex(value) -> str:
    c = complex(value)
    if c.imag == 0:
        return format_real(c.real)
    re_part = format_real(c.real) if c.real != 0 else ""
    sign = "+" if c.imag > 0 and re_part else ""
    return f"{re_part}{sign}{format_real(c.imag)}i"


def serialize_config(spec: JobSpec) -> str:
    """Canonical text for a JobSpec; parse_config inverts it exactly."""
    lines = ["[job]", f"kind = {spec.kind}", f"id = {spec.job_id}"]
    if spec.target is not None:
        lines.append(f"target = {spec.target}")
    if spec.check is not None:
        lines.append(f"check = {spec.check}")

    desc = spec.model
    if desc is not None:
        lines += ["", "[model]", f"type = {desc.type}"]
        if desc.type in ("simple-dual", "self-drive", "feedback"):
            lines.append(f"a = {format_real(desc.a)}")
            if desc.type != "simple-dual":
                lines.append(f"b = {format_real(desc.b)}")
            if desc.type == "feedback":
                lines.append(f"f = {format_real(desc.f)}")
        elif desc.type == "general":
            lines.append(f"n = {desc.n}")
            lines.append("w = " + ", ".join(format_real(w) for w in desc.weights))
        else:
            lines.append(f"n_half = {desc.n_half}")
            for key in ("gxx", "gxy", "gyx", "gyy"):
                lines.append(f"{key} = {format_real(getattr(desc, key))}")
            if desc.type == "bipartite":
                for key, blk in (("m_block", desc.m_block), ("a1_block", desc.a1_block),
                                 ("a2_block", desc.a2_block)):
                    if blk is not None:
                        lines.append(f"{key} = " + ", ".join(str(v) for v in blk))
            else:
                lines += [f"n_xy = {desc.n_xy}", f"n_yx = {desc.n_yx}",
                          f"seed = {desc.seed}"]

    render_lines = []
    if spec.window is not None:
        w = spec.window
        render_lines.append("window = " + ", ".join(
            format_real(v) for v in (w.re_min, w.re_max, w.im_min, w.im_max)))
        render_lines.append(f"resolution = {w.nx}, {w.ny}")
    if spec.box is not None:
        b = spec.box
        render_lines.append("box = " + ", ".join(
            format_real(v) for v in (b.x_min, b.x_max, b.y_min, b.y_max, b.z_min, b.z_max)))
        render_lines.append(f"resolution = {b.nx}, {b.ny}, {b.nz}")
    if spec.resolution is not None:
        render_lines.append("resolution = " + ", ".join(str(v) for v in spec.resolution))
    if spec.iterations is not None:
        render_lines.append(f"iterations = {spec.iterations}")
    render_lines.append(f"radius = {format_real(spec.radius)}")
    if spec.param is not None:
        render_lines.append("c = " + ", ".join(format_complex(v) for v in spec.param))
    if render_lines:
        lines += ["", "[render]"] + render_lines

    if spec.sweep_axes:
        lines += ["", "[sweep]"]
        for key, values in spec.sweep_axes:
            fmt = format_complex if key == "c" else format_real
            lines.append(f"{key} = " + ", ".join(fmt(v) for v in values))

    lines += ["", "[output]", f"dir = {spec.output_dir}", ""]
    return "\n".join(lines)


def apply_overrides(text: str, overrides) -> str:
    """Apply `section.key=value` override strings to raw config text."""
    for item in overrides:
        if "=" not in item:
            raise ConfigError(f"override must look like section.key=value, got {item!r}")
        path, value = item.split("=", 1)
        if "." not in path:
            raise ConfigError(f"override key must be section.key, got {path!r}")
        section, key = (part.strip().lower() for part in path.split(".", 1))
        if section not in _SECTIONS:
            raise ConfigError(f"unknown section {section!r} in override {item!r}")
        text = _set_key(text, section, key, value.strip())
    return text


def _set_key(text: str, section: str, key: str, value: str) -> str:
    lines = text.splitlines()
    out = []
    in_section = False
    replaced = False
    inserted_section = False
    for raw in lines:
        stripped = raw.split("#", 1)[0].strip()
        if stripped.startswith("[") and stripped.endswith("]"):
            if in_section and not replaced:
                out.append(f"{key} = {value}")
                replaced = True
            in_section = stripped[1:-1].strip().lower() == section
            inserted_section = inserted_section or in_section
        elif in_section and "=" in stripped:
            if stripped.split("=", 1)[0].strip() == key:
                out.append(f"{key} = {value}")
                replaced = True
                continue
        out.append(raw)
    if not replaced:
        if inserted_section:
            out.append(f"{key} = {value}")  # section was last; append at end
        else:
            out += [f"[{section}]", f"{key} = {value}"]
    return "\n".join(out)
