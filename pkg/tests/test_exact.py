"""Exact synthesizer: round trips, count bounds, depth lower bound."""

import math
import random
import time

import pytest

from mgsynth.errors import NotOrthogonalError
from mgsynth.exact import gate_count_bounds, synthesize, t_depth_lower_bound
from mgsynth.ring import MINUS_ONE, ONE, ZERO
from mgsynth.somat import GateKind, GeneratorId, TransferMatrix, eval_product, generator
from mgsynth.targets import random_ring_target, xx_target


def test_identity_gives_empty_circuit():
    rep = synthesize(TransferMatrix.identity(2))
    assert rep.circuit.depth == 0
    assert rep.circuit.t_count == 0


def test_stil_round_trip_clifford_only():
    q = generator(1, GeneratorId(GateKind.S, 1))
    rep = synthesize(q)
    assert rep.circuit.product() == q
    assert rep.circuit.t_count == 0


def test_ttil_round_trip_needs_t():
    q = generator(1, GeneratorId(GateKind.T, 1))
    rep = synthesize(q)
    assert rep.circuit.product() == q
    assert rep.circuit.t_count >= 1  # k_max = 1 forces a T somewhere
    assert rep.circuit.t_depth >= rep.t_depth_lb == 1


def test_rejects_non_orthogonal():
    rows = [[ONE, ONE], [ZERO, ONE]]
    with pytest.raises(NotOrthogonalError):
        synthesize(TransferMatrix(1, rows))
    rows = [[MINUS_ONE, ZERO], [ZERO, ONE]]  # det -1
    with pytest.raises(NotOrthogonalError):
        synthesize(TransferMatrix(1, rows))


def test_gate_count_bounds_closed_forms():
    assert gate_count_bounds(2, 1)["nt_bound"] == (32 + 36 - 14) // 6 == 9
    assert gate_count_bounds(4, 1)["nt_bound"] == (256 + 144 - 28) // 6 == 62
    for n in (1, 2, 5):
        assert gate_count_bounds(n, 0)["nt_bound"] == 0
        assert gate_count_bounds(n, 0)["nc_bound"] == n * (2 * n + 3)
    got = gate_count_bounds(3, 2)
    assert got["nt_bound"] == 2 * (4 * 27 + 9 * 9 - 21) // 6
    assert got["nc_bound"] == 2 * 2 * 3 * 2 * 5 * 5 // 3 + 3 * 9


def test_t_depth_lower_bound_values():
    assert t_depth_lower_bound(TransferMatrix.identity(2)) == 0
    assert t_depth_lower_bound(generator(1, GeneratorId(GateKind.T, 1))) == 1
    assert t_depth_lower_bound(xx_target(4).q_dis) <= 13


def test_round_trip_random_sample(corpus):
    for n, t_budget, q in corpus[:40]:
        rep = synthesize(q)
        assert rep.circuit.product() == q
        assert rep.circuit.t_count <= rep.nt_bound
        assert rep.circuit.clifford_count <= rep.nc_bound
        assert rep.circuit.t_depth >= rep.t_depth_lb


def test_deterministic_output():
    q = random_ring_target(3, 4, 99)
    a = synthesize(q).circuit
    b = synthesize(q).circuit
    assert a == b


def _dense_target(n: int, k: int, seed: int) -> TransferMatrix:
    """Layers of parallel T rotations separated by Clifford scrambles."""
    rng = random.Random(seed)
    word = []
    for _ in range(k):
        for q in range(1, n + 1):
            word.append(GeneratorId(GateKind.T, q))
        for _ in range(n):
            kind = rng.choice([GateKind.S, GateKind.SINV, GateKind.R, GateKind.RINV])
            hi = n if kind in (GateKind.S, GateKind.SINV) else n - 1
            word.append(GeneratorId(kind, rng.randint(1, hi)))
    return eval_product(n, word)


@pytest.mark.slow
def test_runtime_scaling():
    """Fitted log-log exponent against n^4 * k stays below twice linear."""
    xs, ys = [], []
    for n in (2, 4, 8):
        for k in (2, 4, 8):
            q = _dense_target(n, k, seed=n * 100 + k)
            k_actual = max(q.k_max(), 1)
            t0 = time.perf_counter()
            rep = synthesize(q)
            elapsed = time.perf_counter() - t0
            assert rep.circuit.product() == q
            xs.append(math.log(n**4 * k_actual))
            ys.append(math.log(max(elapsed, 1e-5)))
    mean_x = sum(xs) / len(xs)
    mean_y = sum(ys) / len(ys)
    slope = sum((x - mean_x) * (y - mean_y) for x, y in zip(xs, ys)) / sum(
        (x - mean_x) ** 2 for x in xs
    )
    assert slope <= 2.0, f"runtime grows like exponent {slope:.2f} vs budgeted 2.0"
