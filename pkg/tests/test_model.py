"""Network builders, the update step, and escape iteration."""

import numpy as np
import pytest
from fractions import Fraction

from helpers import classic_escape_scalar

import quadnet as q
from quadnet.model import _splitmix64, escape_scan, weighted_inputs


# ---------------------------------------------------------------- builders

def test_simple_dual_zero_crosstalk_matrix():
    assert np.array_equal(q.simple_dual(0.0),
                          [[1, 0, 0], [0, 1, 0], [1, 1, 0]])


def test_feedback_matrix_rows():
    w = q.feedback(-2 / 3, 1 / 3, -1.0)
    assert np.allclose(w, [[1, 0, 0], [-2 / 3, 1, -1], [1, 1, 1 / 3]])


def test_self_drive_without_loop_reduces_to_dual():
    assert np.array_equal(q.self_drive(0.0, 0.0), q.simple_dual(0.0))
    assert np.array_equal(q.self_drive(-0.4, 0.0), q.simple_dual(-0.4))


def test_weight_matrix_validation():
    with pytest.raises(q.DimensionError):
        q.iterate_escape(np.ones((2, 3)), [0, 0], [0, 0], 10, 10.0)
    with pytest.raises(q.DimensionError):
        q.iterate_escape(np.eye(2) * 1j, [0, 0], [0, 0], 10, 10.0)
    with pytest.raises(ValueError):
        q.iterate_escape([[np.inf]], [0], [0], 10, 10.0)
    with pytest.raises(ValueError):
        q.feedback(np.nan, 0.0, 0.0)


def test_bipartite_small_blocks():
    m = np.ones((2, 2))
    a1 = [[0, 0], [1, 0]]
    a2 = [[1, 0], [1, 1]]
    w = q.bipartite(m, a1, a2, 0.5, -0.5, -0.5, 0.5)
    expected = [[0.5, 0.5, 0.0, 0.0],
                [0.5, 0.5, -0.5, 0.0],
                [-0.5, 0.0, 0.5, 0.5],
                [-0.5, -0.5, 0.5, 0.5]]
    assert np.array_equal(w, expected)


def test_bipartite_zero_cross_blocks_decouple():
    zero = np.zeros((3, 3))
    w = q.bipartite(np.ones((3, 3)), zero, zero, 0.25, -0.25, -0.25, 0.25)
    assert np.array_equal(w[:3, 3:], np.zeros((3, 3)))
    assert np.array_equal(w[3:, :3], np.zeros((3, 3)))


def test_bipartite_eight_nodes():
    a1 = [[1, 0, 1, 1], [1, 1, 1, 0], [1, 0, 0, 0], [0, 1, 0, 0]]
    a2 = [[0, 0, 0, 0], [0, 1, 1, 1], [1, 1, 0, 1], [0, 1, 1, 0]]
    w = q.bipartite(np.ones((4, 4)), a1, a2, 0.25, -0.25, -0.25, 0.25)
    assert w.shape == (8, 8)
    assert w[0, 4] == -0.25 and w[0, 5] == 0.0


def test_bipartite_errors():
    with pytest.raises(q.DimensionError):
        q.bipartite(np.ones((2, 2)), np.ones((3, 3)), np.ones((2, 2)), 1, 1, 1, 1)
    with pytest.raises(ValueError):
        q.bipartite(np.ones((2, 2)), np.full((2, 2), 2.0), np.ones((2, 2)), 1, 1, 1, 1)


def test_random_bipartite_counts_and_determinism():
    w1 = q.random_bipartite(10, 10, 10, 0.1, -0.1, -0.1, 0.1, seed=42)
    w2 = q.random_bipartite(10, 10, 10, 0.1, -0.1, -0.1, 0.1, seed=42)
    assert np.array_equal(w1, w2)
    a1 = w1[:10, 10:] / -0.1
    a2 = w1[10:, :10] / -0.1
    assert a1.sum() == 10 and a2.sum() == 10
    w3 = q.random_bipartite(10, 10, 10, 0.1, -0.1, -0.1, 0.1, seed=43)
    assert not np.array_equal(w1, w3)


def test_random_bipartite_saturated():
    w = q.random_bipartite(3, 9, 0, 1.0, 1.0, 1.0, 1.0, seed=7)
    assert np.array_equal(w[:3, 3:], np.ones((3, 3)))
    assert np.array_equal(w[3:, :3], np.zeros((3, 3)))


def test_random_bipartite_range_errors():
    with pytest.raises(ValueError):
        q.random_bipartite(3, 10, 0, 1, 1, 1, 1, seed=0)
    with pytest.raises(ValueError):
        q.random_bipartite(3, 0, -1, 1, 1, 1, 1, seed=0)


def test_splitmix64_reference_vector():
    stream = _splitmix64(0)
    assert next(stream) == 0xE220A8397B1DCDAF
    assert next(stream) == 0x6E789E6AA1B965F4


# ------------------------------------------------------------------- step

def test_step_simple_dual_imaginary_parameter():
    w = q.simple_dual(0.0)
    c = [1j, 1j, 1j]
    z1 = q.step(w, c, [0, 0, 0])
    assert np.array_equal(z1, [1j, 1j, 1j])
    z2 = q.step(w, c, z1)
    assert np.array_equal(z2, [-1 + 1j, -1 + 1j, -4 + 1j])


def test_step_zero_fixed_point():
    w = q.feedback(0.3, -0.7, 1.1)
    assert np.array_equal(q.step(w, [0.0] * 3, [0.0] * 3), [0.0] * 3)


def test_step_identity_matrix_decouples(rng):
    w = np.eye(3)
    c = rng.uniform(-1, 1, 3) + 1j * rng.uniform(-1, 1, 3)
    z = rng.uniform(-1, 1, 3) + 1j * rng.uniform(-1, 1, 3)
    assert np.allclose(q.step(w, c, z), z * z + c)


def test_step_errors():
    w = q.simple_dual(0.0)
    with pytest.raises(q.DimensionError):
        q.step(w, [0, 0], [0, 0, 0])
    with pytest.raises(q.DimensionError):
        q.step(w, [0j, 0j, 0j], [[0.0, 0.0], [0.0, 0.0], [0.0, 0.0]])


def test_step_promotes_real_seed_with_complex_parameter():
    out = q.step(q.simple_dual(0.0), [1j, 1j, 1j], [0, 0, 0])
    assert np.array_equal(out, [1j, 1j, 1j])


# --------------------------------------------------------- iterate_escape

def test_escape_zero_parameter_bounded():
    rec = q.iterate_escape(q.self_drive(0.5, 0.5), [0.0] * 3, [0.0] * 3, 100, 10.0)
    assert rec.statuses == (q.NodeStatus.BOUNDED,) * 3
    assert rec.stop_iteration == 100


def test_escape_witness_dual_crosstalk():
    # z2 orbit 0, -2, -14/9, 514/81, 151714/6561 ~ 23.12 first crosses 10 at 4
    rec = q.iterate_escape(q.simple_dual(-2 / 3), [-2.0] * 3, [0.0] * 3, 100, 10.0)
    assert rec.escape_iterations[1] == 4
    assert rec.escape_iterations[2] == 2
    assert rec.statuses[0] is not q.NodeStatus.ESCAPED
    # node 2 crosses the magnitude cap at step 10, so node 1 is undecided
    assert rec.stop_iteration == 10
    assert rec.statuses[0] is q.NodeStatus.UNDECIDED
    # with the budget inside the cap horizon, node 1 classifies as bounded
    rec10 = q.iterate_escape(q.simple_dual(-2 / 3), [-2.0] * 3, [0.0] * 3, 10, 10.0)
    assert rec10.statuses == (q.NodeStatus.BOUNDED, q.NodeStatus.ESCAPED,
                              q.NodeStatus.ESCAPED)


def test_escape_self_drive_trapped_node():
    rec = q.iterate_escape(q.self_drive(-2 / 3, 1 / 3), [-0.75] * 3, [0.0] * 3, 100, 10.0)
    assert rec.statuses[1] is q.NodeStatus.BOUNDED


def test_escape_self_drive_negative_loop_output_escapes():
    rec = q.iterate_escape(q.self_drive(-2 / 3, -1 / 3), [-0.75] * 3, [0.0] * 3, 100, 10.0)
    assert rec.statuses[2] is q.NodeStatus.ESCAPED
    assert rec.escape_iterations[2] == 17


def test_escape_seed_beyond_radius_marks_step_zero():
    rec = q.iterate_escape(q.simple_dual(0.0), [0j] * 3, [11.0 + 0j] * 3, 50, 10.0)
    assert rec.statuses == (q.NodeStatus.ESCAPED,) * 3
    assert rec.escape_iterations == (0, 0, 0)
    assert rec.stop_iteration == 0


def test_escape_argument_validation():
    w = q.simple_dual(0.0)
    with pytest.raises(ValueError):
        q.iterate_escape(w, [0.0] * 3, [0.0] * 3, 0, 10.0)
    with pytest.raises(ValueError):
        q.iterate_escape(w, [0.0] * 3, [0.0] * 3, 10, -1.0)
    with pytest.raises(q.DimensionError):
        q.iterate_escape(w, [0.0] * 2, [0.0] * 3, 10, 10.0)


# ------------------------------------------------------------- properties

def test_determinism_bit_identical(rng):
    w = q.feedback(-0.31, 0.22, 0.57)
    c = rng.uniform(-1, 1, 3) + 1j * rng.uniform(-1, 1, 3)
    z0 = rng.uniform(-1, 1, 3) + 1j * rng.uniform(-1, 1, 3)
    first = q.iterate_escape(w, c, z0, 200, 10.0)
    second = q.iterate_escape(w, c, z0, 200, 10.0)
    assert first == second


def test_escape_first_crossing_replay(rng):
    w = q.self_drive(0.8, -0.9)
    for _ in range(50):
        c = rng.uniform(-1.5, 0.5, 3) + 1j * rng.uniform(-0.5, 0.5, 3)
        z0 = rng.uniform(-0.5, 0.5, 3) + 1j * rng.uniform(-0.5, 0.5, 3)
        rec = q.iterate_escape(w, c, z0, 60, 10.0)
        state = np.asarray(z0, complex)
        for t in range(rec.stop_iteration + 1):
            if t > 0:
                state = q.step(w, c, state)
            for k, esc_t in enumerate(rec.escape_iterations):
                if esc_t < 0 or esc_t > rec.stop_iteration:
                    continue
                if t < esc_t:
                    assert abs(state[k]) <= 10.0
                elif t == esc_t:
                    assert abs(state[k]) > 10.0


def test_permutation_equivariance_exact_step():
    # dyadic inputs keep the one-step arithmetic exact, so equality is bitwise
    w = q.feedback(-0.5, 0.25, 0.75)
    c = np.array([0.25 + 0.5j, -0.75 + 0.125j, 0.5 - 0.25j])
    z = np.array([0.5 - 0.5j, 0.25 + 0.25j, -0.125 + 0.75j])
    for perm in ([1, 2, 0], [2, 1, 0], [0, 2, 1]):
        p = np.eye(3)[perm]
        left = q.step(p @ w @ p.T, p @ c, p @ z)
        right = p @ q.step(w, c, z)
        assert np.array_equal(left, right)


def test_permutation_equivariance_verdicts(rng):
    w = q.feedback(-0.6, 0.3, 0.2)
    for _ in range(25):
        c = rng.uniform(-1.2, 0.4, 3) + 1j * rng.uniform(-0.6, 0.6, 3)
        z0 = np.zeros(3, complex)
        base = q.iterate_escape(w, c, z0, 80, 10.0)
        perm = rng.permutation(3)
        p = np.eye(3)[perm]
        moved = q.iterate_escape(p @ w @ p.T, c[perm], z0[perm], 80, 10.0)
        assert tuple(base.statuses[k] for k in perm) == moved.statuses
        assert tuple(base.escape_iterations[k] for k in perm) == moved.escape_iterations


def test_decoupled_reduction_matches_classical(rng):
    w = np.eye(3)
    for _ in range(1000):
        c = rng.uniform(-2, 1, 3) + 1j * rng.uniform(-1.5, 1.5, 3)
        z0 = rng.uniform(-1.5, 1.5, 3) + 1j * rng.uniform(-1.5, 1.5, 3)
        rec = q.iterate_escape(w, c, z0, 40, 10.0)
        for k in range(3):
            if rec.statuses[k] is q.NodeStatus.ESCAPED:
                escaped, t = classic_escape_scalar(c[k], z0[k], 40, 10.0)
                assert escaped and t == rec.escape_iterations[k]
            else:
                # bounded means no crossing within the budget, undecided means
                # no crossing within the truncated horizon
                horizon = 40 if rec.statuses[k] is q.NodeStatus.BOUNDED \
                    else rec.stop_iteration
                escaped, t = classic_escape_scalar(c[k], z0[k], horizon, 10.0)
                assert not escaped


def test_conjugation_symmetry(rng):
    w = q.feedback(-0.45, 0.3, -0.85)
    for _ in range(30):
        c = rng.uniform(-1.2, 0.6, 3) + 1j * rng.uniform(-0.8, 0.8, 3)
        z0 = rng.uniform(-0.8, 0.8, 3) + 1j * rng.uniform(-0.8, 0.8, 3)
        plain = q.iterate_escape(w, c, z0, 100, 10.0)
        conj = q.iterate_escape(w, np.conj(c), np.conj(z0), 100, 10.0)
        assert plain == conj
        # orbits themselves conjugate exactly (while they stay finite)
        a, b = np.asarray(z0, complex), np.conj(z0)
        for _ in range(12):
            a = q.step(w, c, a)
            b = q.step(w, np.conj(c), b)
            assert np.array_equal(np.conj(a), b)
            if np.abs(a).max() > 1e30:
                break


def test_float_matches_exact_oracle_prefix(rng):
    # dyadic inputs; compare while the exact orbit stays under magnitude 10
    for trial in range(12):
        a, b, f = (int(rng.integers(-8, 9)) / 16 for _ in range(3))
        w = q.feedback(a, b, f)
        wq = [[1, 0, 0], [Fraction(a), 1, Fraction(f)], [1, 1, Fraction(b)]]
        c = [complex(int(rng.integers(-12, 4)) / 16, int(rng.integers(-8, 9)) / 16)
             for _ in range(3)]
        cq = [q.RationalComplex(Fraction(v.real), Fraction(v.imag)) for v in c]
        exact = q.exact_orbit(wq, cq, [0, 0, 0], steps=20)
        state = np.zeros(3, complex)
        for t in range(1, 21):
            state = q.step(w, c, state)
            mags = [e.abs_squared() for e in exact[t]]
            if any(m >= 100 for m in mags):
                break
            for k in range(3):
                assert abs(state[k] - complex(exact[t][k])) <= 1e-9


def test_scan_batch_matches_scalar(rng):
    # grid scans and one-column scans share arithmetic bit for bit
    w = q.self_drive(-0.7, 0.4)
    c = rng.uniform(-1.5, 0.5, 24) + 1j * rng.uniform(-1, 1, 24)
    params = np.vstack([c, c, c])
    seeds = np.zeros_like(params)
    esc, stop = escape_scan(w, params, seeds, 60, 10.0)
    for i in range(c.size):
        rec = q.iterate_escape(w, [c[i]] * 3, [0j] * 3, 60, 10.0)
        assert rec.escape_iterations == tuple(esc[:, i])
        assert rec.stop_iteration == stop[i]


def test_weighted_inputs_row_convention():
    w = np.array([[1.0, 2.0], [3.0, 4.0]])
    z = np.array([[1.0], [10.0]])
    assert np.array_equal(weighted_inputs(w, z), [[21.0], [43.0]])
