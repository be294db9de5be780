"""Named verification checks runnable from the CLI.

Each check renders its fixed scene, evaluates the claimed relation at its
stated tolerance and reports one line per sub-assertion.  Resolution and
iteration budget can be overridden (smaller grids run faster but the shipped
defaults are the ones the claims are stated at).
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from . import model, oracle, topology
from .render import Box3D, EQUI_M_EXTENT, UNI_J_EXTENT, Window2D, extract_boundary, \
    render_equi_m, render_multi_j_real, render_uni_j
from .topology import box_counting_dim, equality_relation, label_components, \
    nesting_check, subset_relation

RELATION_TOLERANCE = 0.001


@dataclass(frozen=True)
class VerifyResult:
    check: str
    passed: bool
    lines: tuple[str, ...]

    def report(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        body = "\n".join(self.lines)
        return f"{body}\n{status}: {self.check}\n"


def _res2(resolution, default=(600, 600)):
    if resolution is None:
        return default
    if len(resolution) == 1:
        return (resolution[0], resolution[0])
    return tuple(resolution[:2])


def _window(extent, nx, ny) -> Window2D:
    return Window2D(*extent, nx=nx, ny=ny)


def classic_mandelbrot_field(window: Window2D, budget: int, radius: float) -> np.ndarray:
    """Independent single-map escape render, coded apart from the network path."""
    xs, ys = window.centers()
    c = xs[None, :] + 1j * ys[:, None]
    z = np.zeros_like(c)
    member = np.ones(c.shape, bool)
    for _ in range(budget):
        z[member] = z[member] ** 2 + c[member]
        member &= ~(np.abs(z) > radius)
    return member


def _line(ok: bool, text: str) -> str:
    return f"  [{'ok' if ok else 'violated'}] {text}"


def check_classical(resolution=None, iterations=None, radius=10.0, threads=None) -> VerifyResult:
    nx, ny = _res2(resolution)
    budget = iterations or 100
    window = _window(EQUI_M_EXTENT, nx, ny)
    field = render_equi_m(model.simple_dual(0.0), window, budget, radius, threads)
    layers = [field.node_layer(k) for k in range(3)]
    classic = classic_mandelbrot_field(window, budget, radius)
    d12 = int((layers[0] != layers[1]).sum())
    d13 = int((layers[0] != layers[2]).sum())
    dci = int((field.intersection() != classic).sum())
    lines = [
        _line(d12 == 0, f"node 1 vs node 2 layers: {d12} differing pixels"),
        _line(d13 == 0, f"node 1 vs node 3 layers: {d13} differing pixels"),
        _line(dci == 0, f"intersection vs independent single-map render: {dci} differing pixels"),
    ]
    return VerifyResult("classical", d12 == 0 and d13 == 0 and dci == 0, tuple(lines))


def _oracle_witness_prop1(lines: list[str]) -> bool:
    rec = oracle.classify_point_exact(
        [[1, 0, 0], [Fraction(-2, 3), 1, 0], [1, 1, 0]], [-2, -2, -2],
        budget=16, radius=10)
    want = ((model.NodeStatus.BOUNDED, -1), (model.NodeStatus.ESCAPED, 4),
            (model.NodeStatus.ESCAPED, 2))
    got = tuple(zip(rec.statuses, rec.escape_iterations))
    ok = got == want
    lines.append(_line(ok, f"exact orbit at c=-2: {rec}"))
    return ok


def check_prop1(resolution=None, iterations=None, radius=10.0, threads=None) -> VerifyResult:
    nx, ny = _res2(resolution)
    budget = iterations or 100
    field = render_equi_m(model.simple_dual(-2 / 3), _window(EQUI_M_EXTENT, nx, ny),
                          budget, radius, threads)
    eq = equality_relation(field.node_layer(1), field.node_layer(2), RELATION_TOLERANCE)
    sub = subset_relation(field.node_layer(1), field.node_layer(0), RELATION_TOLERANCE)
    lines = [
        _line(eq.holds, f"node 2 = node 3 layers: fractions "
                        f"{eq.forward.violation_fraction:.6f}/{eq.backward.violation_fraction:.6f}"),
        _line(sub.holds, f"node 2 subset of node 1: fraction {sub.violation_fraction:.6f}"),
    ]
    ok = _oracle_witness_prop1(lines)
    return VerifyResult("prop1", eq.holds and sub.holds and ok, tuple(lines))


def check_prop2(resolution=None, iterations=None, radius=10.0, threads=None) -> VerifyResult:
    nx, ny = _res2(resolution)
    budget = iterations or 100
    field = render_equi_m(model.self_drive(-2 / 3, 1 / 3), _window(EQUI_M_EXTENT, nx, ny),
                          budget, radius, threads)
    sub = subset_relation(field.node_layer(2), field.node_layer(1), RELATION_TOLERANCE)
    strict = subset_relation(field.node_layer(1), field.node_layer(2), RELATION_TOLERANCE)
    strict_ok = strict.violation_fraction >= 0.005
    lines = [
        _line(sub.holds, f"node 3 subset of node 2: fraction {sub.violation_fraction:.6f}"),
        _line(strict_ok, f"strictness: {strict.violation_fraction:.6f} of node 2 cells "
                         "outside node 3 (needs >= 0.005)"),
    ]

    w_exact = [[1, 0, 0], [Fraction(-2, 3), 1, 0], [1, 1, Fraction(1, 3)]]
    c_exact = [Fraction(-3, 4)] * 3
    orbit = oracle.exact_orbit(w_exact, c_exact, [0, 0, 0], steps=20)
    trapped_exact = all(-1 <= state[1].re <= 0 for state in orbit)
    rec = model.iterate_escape(model.self_drive(-2 / 3, 1 / 3), [-0.75] * 3, [0.0] * 3,
                               budget=100, radius=radius)
    float_orbit_ok = rec.statuses[1] is model.NodeStatus.BOUNDED
    z3_escaped = rec.statuses[2] is model.NodeStatus.ESCAPED
    lines += [
        _line(trapped_exact, "exact orbit of node 2 at c=-3/4 stays in [-1,0] for 20 steps"),
        _line(float_orbit_ok, f"float orbit of node 2 bounded over 100 steps: {rec}"),
        _line(z3_escaped, f"node 3 escaped at c=-3/4: {rec.statuses[2].name}"),
    ]
    passed = sub.holds and strict_ok and trapped_exact and float_orbit_ok and z3_escaped
    return VerifyResult("prop2", passed, tuple(lines))


def check_prop3(resolution=None, iterations=None, radius=10.0, threads=None) -> VerifyResult:
    nx, ny = _res2(resolution)
    budget = iterations or 100
    field = render_equi_m(model.feedback(-2 / 3, 1 / 3, -1.0), _window(EQUI_M_EXTENT, nx, ny),
                          budget, radius, threads)
    eq = equality_relation(field.node_layer(1), field.node_layer(2), RELATION_TOLERANCE)
    lines = [_line(eq.holds, f"node 2 = node 3 layers: fractions "
                             f"{eq.forward.violation_fraction:.6f}/{eq.backward.violation_fraction:.6f}")]
    return VerifyResult("prop3", eq.holds, tuple(lines))


def check_nesting(resolution=None, iterations=None, radius=10.0, threads=None) -> VerifyResult:
    nx, ny = _res2(resolution)
    budget = iterations or 100
    fields = [render_equi_m(model.simple_dual(a), _window(EQUI_M_EXTENT, nx, ny),
                            budget, radius, threads).intersection()
              for a in (0.0, 1 / 3, 2 / 3)]
    reports = nesting_check(fields, RELATION_TOLERANCE)
    lines = [
        _line(rep.holds, f"a={later} subset of a={earlier}: fraction "
                         f"{rep.violation_fraction:.6f} ({rep.violation_count} cells)")
        for rep, (earlier, later) in zip(reports, (("0", "1/3"), ("1/3", "2/3")))
    ]
    return VerifyResult("nesting", all(r.holds for r in reports), tuple(lines))


def check_conjecture1(resolution=None, iterations=None, radius=10.0, threads=None) -> VerifyResult:
    nx, ny = _res2(resolution, default=(800, 800))
    budget = iterations or 100
    w = model.self_drive(-2 / 3, -1 / 3)
    window = _window(UNI_J_EXTENT, nx, ny)
    counts = {}
    for cval in (-1.0, -0.63):
        field = render_uni_j(w, [cval] * 3, window, budget, radius, threads)
        counts[cval] = label_components(field.intersection(), 8).component_count
    inside_ok = counts[-1.0] == 1
    outside_ok = counts[-0.63] > 1
    lines = [
        _line(inside_ok, f"filled uni-J at c=-1 (inside the set): {counts[-1.0]} components "
                         "(claimed 1)"),
        _line(outside_ok, f"filled uni-J at c=-0.63 (outside the set): {counts[-0.63]} "
                          "components (claimed > 1)"),
    ]
    return VerifyResult("conjecture1", inside_ok and outside_ok, tuple(lines))


def check_real_contrast(resolution=None, iterations=None, radius=10.0, threads=None) -> VerifyResult:
    if resolution is None:
        res = (200, 200, 200)
    elif len(resolution) == 1:
        res = (resolution[0],) * 3
    else:
        res = tuple(resolution[:3]) if len(resolution) >= 3 else (resolution[0],) * 3
    budget = iterations or 50
    box = Box3D(-2.0, 2.0, -2.0, 2.0, -2.0, 2.0, nx=res[0], ny=res[1], nz=res[2])
    w = model.self_drive(0.5, 1.0)
    counts = {}
    for cvec in ((-0.5, -0.7, -0.6), (-0.5, -0.7, -0.7)):
        field = render_multi_j_real(w, cvec, box, budget, radius, threads)
        counts[cvec] = label_components(field.occupancy, 26).component_count
    one_ok = counts[(-0.5, -0.7, -0.6)] == 1
    many_ok = counts[(-0.5, -0.7, -0.7)] > 1
    lines = [
        _line(one_ok, f"filled multi-J at c=(-0.5,-0.7,-0.6): "
                      f"{counts[(-0.5, -0.7, -0.6)]} 26-connected components (claimed 1)"),
        _line(many_ok, f"filled multi-J at c=(-0.5,-0.7,-0.7): "
                       f"{counts[(-0.5, -0.7, -0.7)]} 26-connected components (claimed > 1)"),
    ]
    return VerifyResult("real-contrast", one_ok and many_ok, tuple(lines))


def _cantor_row(level: int) -> np.ndarray:
    row = np.ones(3 ** level, bool)
    segment = 3 ** level
    spans = [(0, segment)]
    for _ in range(level):
        spans = [piece for lo, hi in spans
                 for piece in ((lo, lo + (hi - lo) // 3), (hi - (hi - lo) // 3, hi))]
    row[:] = False
    for lo, hi in spans:
        row[lo:hi] = True
    return row


def estimator_fixtures_ok(lines: list[str]) -> bool:
    grid = np.zeros((256, 256), bool)
    grid[128, :] = True
    line_est = box_counting_dim(grid, (1, 2, 4, 8)).slope
    grid = np.zeros((256, 256), bool)
    grid[100, 37] = True
    point_est = box_counting_dim(grid, (1, 2, 4, 8)).slope
    grid = np.zeros((243, 243), bool)
    grid[0] = _cantor_row(5)
    cantor_est = box_counting_dim(grid, (1, 3, 9, 27, 81)).slope
    expected = np.log(2) / np.log(3)
    checks = [
        (abs(line_est - 1.0) <= 0.05, f"line fixture slope {line_est:.4f} (1.0 +- 0.05)"),
        (abs(point_est) <= 0.05, f"point fixture slope {point_est:.4f} (0.0 +- 0.05)"),
        (abs(cantor_est - expected) <= 0.05,
         f"middle-thirds fixture slope {cantor_est:.4f} ({expected:.4f} +- 0.05)"),
    ]
    for ok, text in checks:
        lines.append(_line(ok, text))
    return all(ok for ok, _ in checks)


def check_dimension_trend(resolution=None, iterations=None, radius=10.0, threads=None) -> VerifyResult:
    nx, ny = _res2(resolution, default=(1200, 1200))
    budget = iterations or 100
    lines: list[str] = []
    fixtures_ok = estimator_fixtures_ok(lines)
    slopes = []
    for a in (0.0, 1 / 3, 2 / 3):
        field = render_equi_m(model.simple_dual(a), _window(EQUI_M_EXTENT, nx, ny),
                              budget, radius, threads)
        est = box_counting_dim(extract_boundary(field.intersection()))
        slopes.append(est.slope)
        lines.append(f"  boundary slope at a={a:.4f}: {est.slope:.4f} (r2={est.r_squared:.4f})")
    trend_ok = all(s1 <= s2 for s1, s2 in zip(slopes, slopes[1:]))
    lines.append(_line(trend_ok, "slopes non-decreasing in a"))
    return VerifyResult("dimension-trend", fixtures_ok and trend_ok, tuple(lines))


CHECKS = {
    "classical": check_classical,
    "prop1": check_prop1,
    "prop2": check_prop2,
    "prop3": check_prop3,
    "nesting": check_nesting,
    "conjecture1": check_conjecture1,
    "real-contrast": check_real_contrast,
    "dimension-trend": check_dimension_trend,
}


def run_check(name: str, resolution=None, iterations=None, radius=10.0,
              threads=None) -> VerifyResult:
    try:
        fn = CHECKS[name]
    except KeyError:
        raise ValueError(f"unknown verify check {name!r}") from None
    return fn(resolution=resolution, iterations=iterations, radius=radius, threads=threads)
