"""Brickwork circuits on a periodic chain.

A depth-D circuit is D layers of two-site gates on disjoint neighbor
pairs; consecutive layers alternate the pairing offset.  Gates are
arbitrary unitaries (no gate-set restriction).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .dense import DenseState, apply_local_gate
from .errors import GeometryMismatch

_UNITARY_TOL = 1e-12


@dataclass(frozen=True)
class BrickworkCircuit:
    """Layers of two-site gates; each entry is (left_site, gate matrix).

    A gate at ``s`` acts on sites ``(s, (s+1) % n)``.  Pairs within a layer
    are disjoint; every gate is unitary within 1e-12.
    """

    n_sites: int
    local_dim: int
    layers: tuple[tuple[tuple[int, np.ndarray], ...], ...]

    def __post_init__(self):
        d2 = self.local_dim**2
        for layer in self.layers:
            used = set()
            for s, gate in layer:
                a, b = s % self.n_sites, (s + 1) % self.n_sites
                if a == b or a in used or b in used:
                    raise GeometryMismatch("gates within a layer must be disjoint")
                used.update((a, b))
                if gate.shape != (d2, d2):
                    raise GeometryMismatch(f"gate shape {gate.shape}, expected {(d2, d2)}")
                if np.max(np.abs(gate.conj().T @ gate - np.eye(d2))) > _UNITARY_TOL:
                    raise GeometryMismatch("gate is not unitary within tolerance")

    @property
    def depth(self) -> int:
        return len(self.layers)

    def adjoint(self) -> "BrickworkCircuit":
        return BrickworkCircuit(
            n_sites=self.n_sites,
            local_dim=self.local_dim,
            layers=tuple(
                tuple((s, g.conj().T) for s, g in layer)
                for layer in reversed(self.layers)
            ),
        )


def haar_gate(dim: int, rng: np.random.Generator) -> np.ndarray:
    """Haar-like unitary: QR of a complex Gaussian with fixed phases."""
    z = rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))
    q, r = np.linalg.qr(z)
    ph = np.diag(r)
    return q * (ph / np.abs(ph))


def random_brickwork(
    n: int,
    depth: int,
    seed,
    local_dim: int = 2,
    first_offset: int | None = None,
) -> BrickworkCircuit:
    """Reproducible random brickwork circuit.

    ``first_offset`` fixes the pairing offset of the first layer (0 or 1);
    when None it is drawn from the seed, so sweeps over seeds exercise
    both alignments against any fixed partition.
    """
    rng = np.random.default_rng(seed)
    if first_offset is None:
        first_offset = int(rng.integers(0, 2))
    d2 = local_dim**2
    layers = []
    for layer_idx in range(depth):
        offset = (first_offset + layer_idx) % 2
        layer = []
        for k in range(n // 2):  # odd n leaves one site idle per layer
            s = (offset + 2 * k) % n
            layer.append((s, haar_gate(d2, rng)))
        layers.append(tuple(layer))
    return BrickworkCircuit(n_sites=n, local_dim=local_dim, layers=tuple(layers))


def apply_brickwork(psi: DenseState, circuit: BrickworkCircuit) -> DenseState:
    """Apply the layers in order; unitarity keeps the norm."""
    if (psi.n_sites, psi.local_dim) != (circuit.n_sites, circuit.local_dim):
        raise GeometryMismatch(
            f"circuit on {circuit.n_sites} sites of dim {circuit.local_dim} "
            f"does not match state on {psi.n_sites} of dim {psi.local_dim}"
        )
    out = psi
    for layer in circuit.layers:
        for s, gate in layer:
            out = apply_local_gate(out, gate, (s, (s + 1) % circuit.n_sites))
    return out
