"""Dense reference engine: states, entropies, distances, flatness."""

import math

import numpy as np
import pytest

from lrn_detect import (
    DenseState,
    apply_brickwork,
    apply_local_gate,
    binary_entropy,
    fannes_check,
    flatness_check,
    materialize_mps,
    mutual_information,
    partial_transpose,
    random_brickwork,
    reduced_density,
    subsystem_entropy,
    trace_distance_mixed,
    trace_distance_pure,
    von_neumann_entropy,
)
from lrn_detect.circuits import BrickworkCircuit
from lrn_detect.errors import (
    BadFactorization,
    GeometryMismatch,
    NotPSD,
    SizeCap,
    ZeroState,
)
from lrn_detect.families import (
    counterexample_probs,
    counterexample_t_star,
    dense_pattern_state,
    ghz_tensor,
    phase_loop_tensor,
    product_tensor,
)


def random_density(dim, rng):
    m = rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))
    rho = m @ m.conj().T
    return rho / np.trace(rho).real


def test_materialize_product_state():
    psi = materialize_mps(product_tensor(), 5)
    expect = np.zeros(32)
    expect[0] = 1.0
    assert np.allclose(psi.amplitudes, expect)


def test_materialize_ghz4():
    psi = materialize_mps(ghz_tensor(), 4)
    expect = np.zeros(16, dtype=complex)
    expect[0] = expect[-1] = 1 / math.sqrt(2)
    assert np.allclose(psi.amplitudes, expect)


def test_materialize_phase_loop_n3():
    # |000> + 2 cos(3 phi) |111>, phi = pi/3: amplitude ratio -2.
    psi = materialize_mps(phase_loop_tensor(math.pi / 3), 3)
    amps = psi.amplitudes * math.sqrt(5)
    assert abs(amps[0] - 1.0) < 1e-12
    assert abs(amps[-1] + 2.0) < 1e-12
    assert np.max(np.abs(amps[1:-1])) < 1e-12


def test_materialize_caps_and_zero():
    with pytest.raises(SizeCap):
        materialize_mps(product_tensor(), 40)
    # phase pair that cancels at odd sizes: zero state
    from lrn_detect.families import pattern_tensor

    t = pattern_tensor([0, 0], [1.0, -1.0], d=2)
    with pytest.raises(ZeroState):
        materialize_mps(t, 3)


def test_reduced_density_ghz():
    psi = materialize_mps(ghz_tensor(), 4)
    rho = reduced_density(psi, (0, 1))
    assert np.allclose(rho, np.diag([0.5, 0, 0, 0.5]))
    # product state: rank-1 projector
    rho_p = reduced_density(materialize_mps(product_tensor(), 4), (1, 2))
    assert abs(np.trace(rho_p @ rho_p).real - 1.0) < 1e-12


def test_bell_reduced_is_maximally_mixed():
    amps = np.zeros(4, dtype=complex)
    amps[0] = amps[3] = 1 / math.sqrt(2)
    rho = reduced_density(DenseState(2, 2, amps), (0,))
    assert np.allclose(rho, np.eye(2) / 2)


def test_von_neumann_entropy_and_mi():
    psi = materialize_mps(ghz_tensor(), 8)
    rho = reduced_density(psi, (0, 1))
    assert abs(von_neumann_entropy(rho) - 1.0) < 1e-12
    assert abs(mutual_information(psi, {0, 1}, {4, 5}) - 1.0) < 1e-12
    # pure state entropy 0
    assert von_neumann_entropy(np.diag([1.0, 0.0])) == 0.0
    with pytest.raises(NotPSD):
        von_neumann_entropy(np.diag([1.1, -0.1]))


def test_mi_ghz_family_binary_entropy():
    state = dense_pattern_state(["0", "1"], [math.sqrt(0.3), math.sqrt(0.7)], 8)
    got = mutual_information(state, {0, 1}, {4, 5})
    assert abs(got - binary_entropy(0.3)) < 1e-12


def test_trace_distance_pure():
    psi = materialize_mps(ghz_tensor(), 4)
    # identical states: zero up to sqrt-of-roundoff amplification
    assert trace_distance_pure(psi, psi) < 1e-7
    a = DenseState(1, 2, np.array([1.0, 0.0], dtype=complex))
    b = DenseState(1, 2, np.array([0.0, 1.0], dtype=complex))
    assert abs(trace_distance_pure(a, b) - 1.0) < 1e-15
    c = DenseState(1, 2, np.array([1.0, 1.0], dtype=complex) / math.sqrt(2))
    assert abs(trace_distance_pure(a, c) - 1 / math.sqrt(2)) < 1e-12


def test_trace_distance_mixed_and_fannes_closed_form():
    rho = np.diag([1.0, 0.0]).astype(complex)
    sigma = np.diag([0.5, 0.5]).astype(complex)
    delta = trace_distance_mixed(rho, sigma)
    assert abs(delta - 0.5) < 1e-12
    # |dS| = 1 <= 0.5 * 1 + H_bin(0.5) = 1.5
    assert fannes_check(rho, sigma, n_qubits=1)


def test_fannes_random_sweep():
    rng = np.random.default_rng(11)
    for _ in range(200):
        k = int(rng.integers(1, 4))
        rho, sigma = random_density(2**k, rng), random_density(2**k, rng)
        assert fannes_check(rho, sigma, n_qubits=k)


def test_contractivity_of_partial_trace():
    rng = np.random.default_rng(5)
    for _ in range(50):
        a = rng.standard_normal(16) + 1j * rng.standard_normal(16)
        b = rng.standard_normal(16) + 1j * rng.standard_normal(16)
        psi = DenseState.from_amplitudes(a, 4, 2)
        phi = DenseState.from_amplitudes(b, 4, 2)
        full = trace_distance_pure(psi, phi)
        red = trace_distance_mixed(
            reduced_density(psi, (0, 1)), reduced_density(phi, (0, 1))
        )
        assert red <= full + 1e-10


def test_partial_transpose_and_flatness():
    # maximally mixed: flat
    rho = np.eye(4) / 4.0
    assert flatness_check(rho, 2)
    with pytest.raises(BadFactorization):
        partial_transpose(np.eye(6), 4)
    # Bell state: partial transpose has eigenvalues +-1/2: flat
    amps = np.zeros(4, dtype=complex)
    amps[0] = amps[3] = 1 / math.sqrt(2)
    rho_b = np.outer(amps, amps.conj())
    assert flatness_check(rho_b, 2)
    # non-stabilizer weights: not flat
    t = counterexample_t_star()
    state = dense_pattern_state(
        ["00", "01", "10", "11"], np.sqrt(counterexample_probs(t)), 12
    )
    rho_ab = reduced_density(state, (0, 1, 2, 3, 6, 7, 8, 9))
    assert not flatness_check(rho_ab, 16)


def test_flatness_matches_power_proportionality():
    rng = np.random.default_rng(23)
    for _ in range(40):
        rho = random_density(8, rng)
        pt = partial_transpose(rho, 2)
        flat = flatness_check(rho, 2)
        m2 = pt @ pt
        m4 = m2 @ m2
        nu = np.vdot(m4, m2).real / max(np.vdot(m4, m4).real, 1e-300)
        residual = np.linalg.norm(m2 - nu * m4) / max(np.linalg.norm(m2), 1e-300)
        assert flat == (residual < 1e-9)
    # and on a state where flatness holds exactly
    amps = np.zeros(4, dtype=complex)
    amps[0] = amps[3] = 1 / math.sqrt(2)
    rho_b = np.outer(amps, amps.conj())
    pt = partial_transpose(rho_b, 2)
    m2, m4 = pt @ pt, (pt @ pt) @ (pt @ pt)
    nu = np.vdot(m4, m2).real / np.vdot(m4, m4).real
    assert np.linalg.norm(m2 - nu * m4) < 1e-12


def test_brickwork_identity_and_inverse():
    state = dense_pattern_state(["0", "1"], [0.6, 0.8], 8)
    d2 = 4
    ident_layers = (((0, np.eye(d2, dtype=complex)), (2, np.eye(d2, dtype=complex)),
                     (4, np.eye(d2, dtype=complex)), (6, np.eye(d2, dtype=complex))),)
    circ_id = BrickworkCircuit(n_sites=8, local_dim=2, layers=ident_layers)
    out = apply_brickwork(state, circ_id)
    assert np.allclose(out.amplitudes, state.amplitudes)
    # CNOT-like permutation layer on |0...0>
    cnot = np.array([[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 0, 1], [0, 0, 1, 0]], dtype=complex)
    zeros = materialize_mps(product_tensor(), 8)
    perm_layers = (((0, cnot), (2, cnot), (4, cnot), (6, cnot)),)
    out = apply_brickwork(zeros, BrickworkCircuit(8, 2, perm_layers))
    assert np.allclose(out.amplitudes, zeros.amplitudes)
    # random circuit then its adjoint
    circ = random_brickwork(8, 3, seed=2)
    back = apply_brickwork(apply_brickwork(state, circ), circ.adjoint())
    assert np.max(np.abs(back.amplitudes - state.amplitudes)) < 1e-10


def test_brickwork_geometry_checks():
    circ = random_brickwork(8, 1, seed=0)
    with pytest.raises(GeometryMismatch):
        apply_brickwork(dense_pattern_state(["0"], [1.0], 6), circ)
    with pytest.raises(GeometryMismatch):
        BrickworkCircuit(4, 2, (((0, np.eye(4) * 2.0),),))  # not unitary


def test_apply_local_gate_wraps_ring():
    # swap across the ring boundary (sites 7, 0)
    swap = np.eye(4)[[0, 2, 1, 3]].astype(complex)
    amps = np.zeros(2**8, dtype=complex)
    amps[1] = 1.0  # site 7 set to |1>
    psi = DenseState(8, 2, amps)
    out = apply_local_gate(psi, swap, (7, 0))
    idx = np.argmax(np.abs(out.amplitudes))
    assert idx == 2**7  # now site 0 carries the excitation


def test_qudit_brickwork_and_mi():
    # native d = 3 sites: unitary layers keep the norm, MI well defined
    state = dense_pattern_state(["0", "2"], [0.6, 0.8], 6)
    assert state.local_dim == 3
    circ = random_brickwork(6, 2, seed=4, local_dim=3)
    out = apply_brickwork(state, circ)
    assert abs(np.linalg.norm(out.amplitudes) - 1.0) < 1e-12
    back = apply_brickwork(out, circ.adjoint())
    assert np.max(np.abs(back.amplitudes - state.amplitudes)) < 1e-10
    mi = mutual_information(state, {0}, {3})
    assert abs(mi - binary_entropy(0.36)) < 1e-12
