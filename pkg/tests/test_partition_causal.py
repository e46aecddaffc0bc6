"""Ring partitions and the causal-cone reduction."""

import math

import numpy as np
import pytest

from lrn_detect import (
    apply_brickwork,
    apply_reduction,
    build_partition,
    causal_cone_reduce,
    random_brickwork,
    reduced_density,
)
from lrn_detect.circuits import BrickworkCircuit
from lrn_detect.errors import PartitionTooSmall
from lrn_detect.families import dense_pattern_state
from lrn_detect.partition import Partition


def test_partition_geometry_depth1():
    p = build_partition(16, 1)
    sizes = p.region_sizes()
    assert sizes == {"a": 4, "c1": 4, "b": 4, "c2": 4}
    assert len(p.a) == len(p.b)
    assert 4 * 1 + 4 <= len(p.ab) <= 8 * 1
    assert p.min_region() >= 2 * 1 + 2


def test_partition_geometry_depth2():
    p = build_partition(26, 2)
    assert len(p.ab) == 12
    assert p.min_region() >= 6
    assert 4 * 2 + 4 <= len(p.ab) <= 8 * 2
    # C1 takes the odd site
    assert len(p.c1) == 7 and len(p.c2) == 7


def test_partition_start_offset_wraps():
    p = build_partition(16, 1, start=14)
    assert p.a == (14, 15, 0, 1)
    assert sorted(p.a + p.c1 + p.b + p.c2) == list(range(16))


def test_partition_rejects_small_rings():
    with pytest.raises(PartitionTooSmall):
        build_partition(12, 1)  # C regions would drop below 4
    with pytest.raises(PartitionTooSmall):
        build_partition(16, 1, ab_size=10)  # above the 8D bound
    with pytest.raises(PartitionTooSmall):
        build_partition(16, 1, ab_size=7)  # odd |A u B|
    with pytest.raises(PartitionTooSmall):
        Partition(8, a=(0, 1), c1=(2, 3), b=(5, 4), c2=(6, 7))  # not an arc


def test_depth0_reduction_is_plain_reduction():
    state = dense_pattern_state(["0", "1"], [0.6, 0.8], 12)
    p = build_partition(12, 0)
    circ = BrickworkCircuit(n_sites=12, local_dim=2, layers=())
    red = causal_cone_reduce(circ, p)
    assert all(c is None for c in red.channels.values())
    assert np.allclose(red.u_a, np.eye(2 ** len(p.a)))
    sigma = apply_reduction(red, state)
    assert np.allclose(sigma, reduced_density(state, p.a + p.b))


@pytest.mark.parametrize("seed", [0, 3, 4])
def test_depth1_channel_formula_matches_direct(seed):
    state = dense_pattern_state(["0", "1"], [math.sqrt(0.3), math.sqrt(0.7)], 16)
    circ = random_brickwork(16, 1, seed)
    p = build_partition(16, 1)
    red = causal_cone_reduce(circ, p)
    sigma = apply_reduction(red, state)
    rho_ab = reduced_density(apply_brickwork(state, circ), p.a + p.b)
    u = np.kron(red.u_a, red.u_b)
    assert np.linalg.norm(sigma - u @ rho_ab @ u.conj().T) < 1e-10
    for ch in red.channel_list():
        assert ch.cptp_defect() < 1e-12


def test_channels_preserve_trace_on_random_inputs():
    circ = random_brickwork(16, 1, seed=0, first_offset=1)
    p = build_partition(16, 1)
    red = causal_cone_reduce(circ, p)
    channels = red.channel_list()
    assert channels, "offset-1 bricks must straddle the aligned partition"
    rng = np.random.default_rng(7)
    for ch in channels:
        dim = ch.kraus[0].shape[1]
        for _ in range(10):
            m = rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))
            rho = m @ m.conj().T
            rho /= np.trace(rho).real
            out = ch.apply(rho)
            assert abs(np.trace(out).real - 1.0) < 1e-12


def test_reduction_rejects_small_partition():
    circ = random_brickwork(16, 2, seed=1)
    p = build_partition(16, 1)  # regions of 4 < 2*2+2
    with pytest.raises(PartitionTooSmall):
        causal_cone_reduce(circ, p)


def test_depth2_classification_structure():
    # Structure-only check at depth 2 (dense verification is desk-capped).
    circ = random_brickwork(24, 2, seed=5)
    p = build_partition(24, 2)
    red = causal_cone_reduce(circ, p)
    for ch in red.channel_list():
        assert ch.cptp_defect() < 1e-12
        assert set(ch.output_sites) <= set(p.a) | set(p.b)
        assert set(ch.input_sites) - set(ch.output_sites)
    covered = set()
    for key in ("a_core", "b_core", "c1_core", "c2_core"):
        covered |= set(red.cores[key])
    for ch in red.channel_list():
        covered |= set(ch.input_sites)
    assert covered == set(range(24))


def test_partition_depth2_max_band():
    p = build_partition(32, 2, ab_size=16)
    assert len(p.a) == len(p.b) == 8
    assert p.min_region() >= 6


@pytest.mark.parametrize("start,seed", [(13, 0), (13, 1), (5, 2)])
def test_wrapped_partition_channel_formula(start, seed):
    # A wraps through the ring origin: arc bookkeeping must still close.
    state = dense_pattern_state(["0", "1"], [math.sqrt(0.3), math.sqrt(0.7)], 16)
    p = build_partition(16, 1, start=start)
    circ = random_brickwork(16, 1, seed)
    red = causal_cone_reduce(circ, p)
    sigma = apply_reduction(red, state)
    rho_ab = reduced_density(apply_brickwork(state, circ), p.a + p.b)
    u = np.kron(red.u_a, red.u_b)
    assert np.linalg.norm(sigma - u @ rho_ab @ u.conj().T) < 1e-10
    for ch in red.channel_list():
        assert ch.cptp_defect() < 1e-12
