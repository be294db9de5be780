"""Config parsing, validation, serialization round-trips."""

import pytest
from hypothesis import given, settings, strategies as st

import quadnet as q
from quadnet.config import (ConfigError, JobSpec, ModelDescriptor, apply_overrides,
                            format_complex, format_real, parse_complex, parse_real,
                            serialize_config)
from quadnet.jobs import _axis_points
from quadnet.render import Box3D, Window2D


MINIMAL_EQUI_M = """\
[job]
kind = equi-m

[model]
type = simple-dual
a = 0
"""


def test_minimal_config_gets_documented_defaults():
    spec = q.parse_config(MINIMAL_EQUI_M)
    assert spec.kind == "equi-m"
    assert spec.job_id == "equi-m"
    assert spec.window == Window2D(-1.75, 1.25, -1.5, 1.5, nx=600, ny=600)
    assert spec.iterations == 100
    assert spec.radius == 10.0
    assert spec.output_dir == "out/equi-m"
    assert spec.model == ModelDescriptor(type="simple-dual", a=0.0)


def test_three_d_defaults():
    spec = q.parse_config("""
[job]
kind = multi-m-real
[model]
type = self-drive
a = 1/2
b = 1
""")
    assert spec.box == Box3D(-2, 2, -2, 2, -2, 2, nx=200, ny=200, nz=200)
    assert spec.iterations == 50
    assert spec.model.a == 0.5


def test_sweep_grid_job_count():
    spec = q.parse_config("""
[job]
kind = sweep
target = equi-m
[model]
type = self-drive
[render]
resolution = 100
[sweep]
a = -2/3, -1/3, 0, 1/3, 2/3
b = -1, -2/3, -1/3, 0, 1/3, 2/3, 1
""")
    points = list(_axis_points(spec))
    assert len(points) == 35
    assert points[0] == {"a": -2 / 3, "b": -1.0}
    assert points[-1] == {"a": 2 / 3, "b": 1.0}


def test_negative_radius_is_a_parse_error():
    bad = MINIMAL_EQUI_M + "\n[render]\nradius = -1\n"
    with pytest.raises(ConfigError) as err:
        q.parse_config(bad)
    assert "line 9" in str(err.value)


def test_unknown_key_names_line():
    bad = MINIMAL_EQUI_M.replace("a = 0", "a = 0\nzz = 1")
    with pytest.raises(ConfigError) as err:
        q.parse_config(bad)
    assert "zz" in str(err.value) and "line 7" in str(err.value)


def test_malformed_number_names_line():
    bad = MINIMAL_EQUI_M.replace("a = 0", "a = zero")
    with pytest.raises(ConfigError) as err:
        q.parse_config(bad)
    assert "line 6" in str(err.value)


def test_missing_required_key():
    with pytest.raises(ConfigError) as err:
        q.parse_config("[job]\nkind = uni-j\n[model]\ntype = simple-dual\n")
    assert "'c'" in str(err.value)
    with pytest.raises(ConfigError) as err:
        q.parse_config("[job]\nkind = equi-m\n")
    assert "model" in str(err.value)


def test_more_parse_errors():
    with pytest.raises(ConfigError):
        q.parse_config("kind = equi-m\n")  # key outside section
    with pytest.raises(ConfigError):
        q.parse_config("[nope]\n")
    with pytest.raises(ConfigError):
        q.parse_config(MINIMAL_EQUI_M.replace("kind = equi-m", "kind = equi-m\nkind = uni-j"))
    with pytest.raises(ConfigError):
        q.parse_config(MINIMAL_EQUI_M + "[render]\nc = -1\n")  # c not used by equi-m
    with pytest.raises(ConfigError):
        q.parse_config(MINIMAL_EQUI_M + "[render]\nwindow = 1, 2, 3\n")
    with pytest.raises(ConfigError):
        q.parse_config(MINIMAL_EQUI_M + "[sweep]\na = 1, 2\n")  # sweep section on non-sweep


def test_real_mode_rejects_complex_parameter():
    with pytest.raises(ConfigError) as err:
        q.parse_config("""
[job]
kind = multi-j-real
[model]
type = self-drive
a = 1/2
b = 1
[render]
c = -0.5, -0.7, -0.7i
""")
    assert "real" in str(err.value)


def test_complex_literals():
    assert parse_complex("-0.117-0.76i") == complex(-0.117, -0.76)
    assert parse_complex("i") == 1j
    assert parse_complex("-i") == -1j
    assert parse_complex("0.5j") == 0.5j
    assert parse_complex("1e-3i") == 1e-3j
    assert parse_complex("1e-3+2/3i") == complex(1e-3, 2 / 3)
    assert parse_complex("-2/3") == complex(-2 / 3, 0)
    assert parse_complex("3") == 3 + 0j
    with pytest.raises(ConfigError):
        parse_complex("1+2")
    with pytest.raises(ConfigError):
        parse_real("1//2")


def test_equi_parameter_broadcasts():
    spec = q.parse_config("""
[job]
kind = uni-j
[model]
type = self-drive
a = 0
b = -1
[render]
c = -1
""")
    assert spec.param == (-1 + 0j, -1 + 0j, -1 + 0j)
    assert spec.window == Window2D(-1.6, 1.6, -1.6, 1.6, nx=600, ny=600)


ROUND_TRIP_SPECS = [
    q.parse_config(MINIMAL_EQUI_M),
    q.parse_config("""
[job]
kind = uni-j
id = general-parameter
[model]
type = self-drive
a = 0
b = -1
[render]
c = -0.75, -0.117-0.76i, -0.62-0.432i
window = -1.6, 1.6, -1.6, 1.6
resolution = 320, 240
iterations = 64
radius = 10
[output]
dir = out/custom
"""),
    q.parse_config("""
[job]
kind = multi-j-real
[model]
type = self-drive
a = 1/2
b = 1
[render]
c = -0.5, -0.7, -0.6
resolution = 50
"""),
    q.parse_config("""
[job]
kind = sweep
target = uni-j
[model]
type = feedback
a = -0.05
b = -1
f = -0.75
[render]
c = -0.117-0.76i
[sweep]
a = -0.07, -0.05, 0, 0.05, 0.07
c = -1, -0.63, -0.11+0.7i
"""),
    q.parse_config("""
[job]
kind = verify
check = prop1
[render]
resolution = 300, 300
iterations = 80
"""),
    q.parse_config("""
[job]
kind = equi-m
id = clique-pair
[model]
type = bipartite
n_half = 2
gxx = 1/2
gxy = -1/2
gyx = -1/2
gyy = 1/2
a1_block = 0, 0, 1, 0
a2_block = 1, 0, 1, 1
"""),
    q.parse_config("""
[job]
kind = equi-m
id = random-clique
[model]
type = bipartite-random
n_half = 10
n_xy = 10
n_yx = 10
gxx = 0.1
gxy = -0.1
gyx = -0.1
gyy = 0.1
seed = 20260809
"""),
    q.parse_config("""
[job]
kind = analyze
target = equi-m
[model]
type = general
n = 3
w = 1, 0, 0, -2/3, 1, 0, 1, 1, 0
"""),
]


@pytest.mark.parametrize("spec", ROUND_TRIP_SPECS,
                         ids=[s.job_id for s in ROUND_TRIP_SPECS])
def test_serialize_parse_round_trip(spec):
    assert q.parse_config(serialize_config(spec)) == spec


@settings(max_examples=200, deadline=None)
@given(st.floats(allow_nan=False, allow_infinity=False, width=64))
def test_real_format_round_trips(value):
    assert parse_real(format_real(value)) == value


@settings(max_examples=200, deadline=None)
@given(st.complex_numbers(allow_nan=False, allow_infinity=False, width=128))
def test_complex_format_round_trips(value):
    assert parse_complex(format_complex(value)) == value


def test_apply_overrides():
    text = apply_overrides(MINIMAL_EQUI_M, ["model.a=0.25", "render.resolution=100",
                                            "output.dir=elsewhere"])
    spec = q.parse_config(text)
    assert spec.model.a == 0.25
    assert spec.window.nx == 100
    assert spec.output_dir == "elsewhere"
    with pytest.raises(ConfigError):
        apply_overrides(MINIMAL_EQUI_M, ["bogus"])
    with pytest.raises(ConfigError):
        apply_overrides(MINIMAL_EQUI_M, ["nosection.key=1"])


def test_override_of_missing_section_appends():
    text = apply_overrides("[job]\nkind = equi-m\n[model]\ntype = simple-dual\n",
                           ["render.iterations=25"])
    spec = q.parse_config(text)
    assert spec.iterations == 25
