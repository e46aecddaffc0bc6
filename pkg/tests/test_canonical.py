"""Canonical decomposition, local orthogonality, gauge equivalence."""

import cmath
import math

import numpy as np
import pytest

from lrn_detect import (
    MpsTensor,
    canonical_decompose,
    gauge_equivalent,
    local_orthogonal,
    materialize_mps,
)
from lrn_detect.errors import DecompositionFailure, NotNormalInput
from lrn_detect.families import (
    alternating_tensor,
    ghz_tensor,
    pattern_tensor,
    phase_loop_tensor,
    product_tensor,
    random_normal_tensor,
)


def test_local_orthogonal_levels():
    zero, one = product_tensor(level=0), product_tensor(level=1)
    assert local_orthogonal(zero, one)
    assert not local_orthogonal(zero, zero)


def test_local_orthogonal_ghz_blocks():
    cf = canonical_decompose(ghz_tensor())
    b0, b1 = cf.blocks
    assert local_orthogonal(b0.tensor, b1.tensor)


def test_gauge_equivalent_pure_phase():
    t = random_normal_tensor(2, 2, seed=3)
    phi0 = 0.815
    rel = gauge_equivalent(MpsTensor(t.matrices * cmath.exp(1j * phi0)), t)
    assert rel is not None
    assert abs(rel.phase - phi0) < 1e-8
    assert np.allclose(rel.x, np.eye(2), atol=1e-6)


def test_gauge_equivalent_conjugation_recovered():
    t = random_normal_tensor(2, 2, seed=11)
    rng = np.random.default_rng(42)
    x = rng.standard_normal((2, 2)) + 1j * rng.standard_normal((2, 2))
    x += 2 * np.eye(2)  # keep it comfortably invertible
    conj = MpsTensor(np.einsum("ab,ibc,cd->iad", x, t.matrices, np.linalg.inv(x)))
    rel = gauge_equivalent(conj, t)
    assert rel is not None
    assert abs(rel.phase) < 1e-8
    # x recovered up to a complex scale
    ratio = rel.x / x
    assert np.max(np.abs(ratio - ratio.flat[0])) < 1e-6


def test_gauge_equivalent_none_for_orthogonal():
    assert gauge_equivalent(product_tensor(0), product_tensor(1)) is None


def test_gauge_equivalent_requires_normal():
    with pytest.raises(NotNormalInput):
        gauge_equivalent(ghz_tensor(), ghz_tensor())


def test_decompose_normal_single_block():
    t = random_normal_tensor(2, 3, seed=7)
    cf = canonical_decompose(t)
    assert len(cf.blocks) == 1
    assert abs(cf.blocks[0].mu - 1.0) < 1e-9
    assert cf.blocking == 1


def test_decompose_ghz():
    cf = canonical_decompose(ghz_tensor())
    assert len(cf.blocks) == 2
    assert all(abs(b.mu - 1.0) < 1e-9 for b in cf.blocks)
    assert all(b.tensor.bond_dim == 1 for b in cf.blocks)
    assert cf.num_groups == 2
    assert cf.gauge is not None


def test_decompose_phase_loop_mu_values():
    phi = 0.9
    cf = canonical_decompose(phase_loop_tensor(phi))
    mus = sorted(np.angle(b.mu) for b in cf.blocks)
    assert np.allclose(mus, sorted([0.0, phi, -phi]), atol=1e-8)
    # the two phased blocks are gauge-equivalent, merged into one group
    assert cf.num_groups == 2
    spectrum = cf.weight_spectrum
    assert spectrum.num_blocks == 2
    sizes = sorted(len(block) for block in spectrum.terms)
    assert sizes == [1, 2]
    # merged weight behaves as 2 cos(phi N) in modulus
    for n in range(1, 9):
        amp = spectrum.amplitudes(n)
        pair = amp[[len(b) == 2 for b in spectrum.terms].index(True)]
        assert abs(abs(pair) - abs(2 * math.cos(phi * n))) < 1e-10


def test_decompose_scrambled_ghz():
    # A gauge-scrambled GHZ must still split into two product blocks.
    rng = np.random.default_rng(5)
    x = rng.standard_normal((2, 2)) + 1j * rng.standard_normal((2, 2)) + 3 * np.eye(2)
    scr = MpsTensor(
        np.einsum("ab,ibc,cd->iad", np.linalg.inv(x), ghz_tensor().matrices, x)
    )
    cf = canonical_decompose(scr)
    assert len(cf.blocks) == 2
    assert cf.num_groups == 2
    assert all(abs(abs(b.mu) - 1.0) < 1e-8 for b in cf.blocks)
    # the family is unchanged: compare dense states
    for n in (3, 5):
        a = materialize_mps(scr, n)
        b = materialize_mps(ghz_tensor(), n)
        assert abs(abs(a.overlap(b)) - 1.0) < 1e-9


def test_decompose_alternating_needs_blocking():
    cf = canonical_decompose(alternating_tensor())
    assert cf.blocking == 2
    assert len(cf.blocks) == 2
    assert all(b.tensor.bond_dim == 1 for b in cf.blocks)


def test_decompose_drops_decaying_block():
    t = pattern_tensor([0, 1], [1.0, 0.5], d=2)
    cf = canonical_decompose(t)
    assert len(cf.blocks) == 2
    mags = sorted(abs(b.mu) for b in cf.blocks)
    assert abs(mags[0] - 0.5) < 1e-9 and abs(mags[1] - 1.0) < 1e-9
    # only the surviving block enters the weight spectrum
    assert cf.weight_spectrum.num_blocks == 1


def test_decompose_triangular_junk_same_family():
    # Junk above the diagonal never reaches the generated states.
    mats = np.zeros((2, 2, 2), dtype=complex)
    mats[0] = np.array([[1.0, 0.8], [0.0, 0.0]])
    mats[1] = np.array([[0.0, -0.3], [0.0, 1.0]])
    t = MpsTensor(mats)
    cf = canonical_decompose(t)
    assert len(cf.blocks) == 2
    assert cf.gauge is None  # triangular residue: no exact block-diagonal gauge
    clean = ghz_tensor()
    for n in (2, 4, 6):
        assert abs(abs(materialize_mps(t, n).overlap(materialize_mps(clean, n))) - 1) < 1e-9


def test_decompose_equal_copies_merge():
    # Two identical blocks: one group, weight 2 at every size.
    t = pattern_tensor([0, 0], [1.0, 1.0], d=2)
    cf = canonical_decompose(t)
    assert len(cf.blocks) == 2
    assert cf.num_groups == 1
    amp = cf.weight_spectrum.amplitudes(5)
    assert abs(amp[0] - 2.0) < 1e-9


def test_decompose_zero_family_fails():
    with pytest.raises(DecompositionFailure):
        canonical_decompose(MpsTensor(np.zeros((2, 2, 2))))


def test_gauge_field_block_diagonalizes():
    rng = np.random.default_rng(17)
    x = rng.standard_normal((2, 2)) + 1j * rng.standard_normal((2, 2)) + 3 * np.eye(2)
    scr = MpsTensor(
        np.einsum("ab,ibc,cd->iad", np.linalg.inv(x), ghz_tensor().matrices, x)
    )
    cf = canonical_decompose(scr)
    assert cf.gauge is not None
    xi = cf.gauge
    rot = np.einsum("ab,ibc,cd->iad", np.linalg.inv(xi), scr.matrices, xi)
    assert np.max(np.abs(rot[:, 0, 1])) < 1e-8
    assert np.max(np.abs(rot[:, 1, 0])) < 1e-8


def test_decompose_scrambled_alternating():
    # periodic tensor behind a random gauge: blocking still detected
    rng = np.random.default_rng(8)
    x = rng.standard_normal((2, 2)) + 1j * rng.standard_normal((2, 2)) + 3 * np.eye(2)
    scr = MpsTensor(
        np.einsum(
            "ab,ibc,cd->iad", np.linalg.inv(x), alternating_tensor().matrices, x
        )
    )
    cf = canonical_decompose(scr)
    assert cf.blocking == 2
    assert len(cf.blocks) == 2
    assert {round(abs(b.mu), 9) for b in cf.blocks} == {1.0}
