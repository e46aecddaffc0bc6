"""Exact small-system reference engine.

Everything here is brute force on explicit amplitude vectors and density
matrices, capped at desk scale (2**24 amplitudes, 2**12-dimensional
reduced densities).  Site 0 owns the most significant digit of the
amplitude index, so ``amplitudes.reshape([d] * n)`` puts site i on axis i.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import reduce

import numpy as np

from .errors import (
    BadFactorization,
    DimensionMismatch,
    NotPSD,
    SizeCap,
    ZeroState,
)
from .rg import FixedPointState
from .tensor import MpsTensor

AMP_CAP = 2**24
RHO_CAP = 2**12

_EIG_FLOOR = 1e-12
_PSD_TOL = 1e-9


@dataclass(frozen=True)
class DenseState:
    """Normalized amplitude vector on a ring of qudits."""

    n_sites: int
    local_dim: int
    amplitudes: np.ndarray

    def __post_init__(self):
        amps = np.asarray(self.amplitudes, dtype=complex).reshape(-1)
        if amps.size != self.local_dim**self.n_sites:
            raise DimensionMismatch(
                f"expected {self.local_dim}**{self.n_sites} amplitudes, got {amps.size}"
            )
        nrm = np.linalg.norm(amps)
        if abs(nrm - 1.0) > 1e-10:
            raise ZeroState(f"amplitudes have norm {nrm}, expected 1")
        amps.setflags(write=False)
        object.__setattr__(self, "amplitudes", amps)

    @staticmethod
    def from_amplitudes(raw, n_sites: int, local_dim: int) -> "DenseState":
        raw = np.asarray(raw, dtype=complex).reshape(-1)
        nrm = np.linalg.norm(raw)
        if nrm < 1e-12:
            raise ZeroState("state vector has vanishing norm")
        return DenseState(n_sites, local_dim, raw / nrm)

    def overlap(self, other: "DenseState") -> complex:
        if (self.n_sites, self.local_dim) != (other.n_sites, other.local_dim):
            raise DimensionMismatch("states live on different lattices")
        return complex(np.vdot(self.amplitudes, other.amplitudes))


def materialize_mps(a: MpsTensor, n: int, amp_cap: int = AMP_CAP) -> DenseState:
    """Amplitudes ``tr(A[i1] ... A[iN])``, normalized.

    Raises:
        SizeCap: if the amplitude count exceeds the cap.
        ZeroState: if every trace vanishes at this N.
    """
    if n < 1:
        raise DimensionMismatch("need at least one site")
    d, chi = a.phys_dim, a.bond_dim
    if d**n > amp_cap:
        raise SizeCap(f"{d}**{n} amplitudes exceed the cap {amp_cap}")
    g = a.matrices
    for _ in range(n - 1):
        g = np.einsum("pab,jbc->pjac", g.reshape(-1, chi, chi), a.matrices).reshape(
            -1, chi, chi
        )
    amps = np.trace(g, axis1=1, axis2=2)
    return DenseState.from_amplitudes(amps, n, d)


def reduced_density(psi: DenseState, region, rho_cap: int = RHO_CAP) -> np.ndarray:
    """Partial trace down to ``region`` (row/column order follows ``region``)."""
    region = tuple(region)
    n, d = psi.n_sites, psi.local_dim
    if len(set(region)) != len(region) or any(not 0 <= r < n for r in region):
        raise DimensionMismatch(f"bad region {region}")
    if d ** len(region) > rho_cap:
        raise SizeCap(f"reduced density of dimension {d}**{len(region)} exceeds cap")
    rest = [q for q in range(n) if q not in region]
    arr = psi.amplitudes.reshape([d] * n).transpose(list(region) + rest)
    m = arr.reshape(d ** len(region), -1)
    return m @ m.conj().T


def von_neumann_entropy(rho: np.ndarray, floor: float = _EIG_FLOOR) -> float:
    """Base-2 entropy of a density matrix; eigenvalues below ``floor`` are dropped."""
    evals = np.linalg.eigvalsh((rho + rho.conj().T) / 2.0)
    if evals[0] < -_PSD_TOL:
        raise NotPSD(f"eigenvalue {evals[0]} below the PSD tolerance")
    pos = evals[evals > floor]
    return float(-np.sum(pos * np.log2(pos)))


def subsystem_entropy(psi: DenseState, region) -> float:
    """Entanglement entropy of a region of a pure state.

    Computed from the singular values of the bipartition matrix of the
    smaller side (pure states have equal entropy on both sides of a cut).
    """
    region = tuple(sorted(set(region)))
    n, d = psi.n_sites, psi.local_dim
    if any(not 0 <= r < n for r in region):
        raise DimensionMismatch(f"bad region {region}")
    if len(region) > n - len(region):
        region = tuple(q for q in range(n) if q not in region)
    rest = [q for q in range(n) if q not in region]
    arr = psi.amplitudes.reshape([d] * n).transpose(list(region) + rest)
    sv = np.linalg.svd(arr.reshape(d ** len(region), -1), compute_uv=False)
    p = sv * sv
    p = p[p > _EIG_FLOOR]
    return float(-np.sum(p * np.log2(p)))


def mutual_information(psi: DenseState, region_a, region_b) -> float:
    """I(A:B) assembled from three subsystem entropies."""
    a, b = set(region_a), set(region_b)
    if a & b:
        raise DimensionMismatch("regions overlap")
    return (
        subsystem_entropy(psi, a)
        + subsystem_entropy(psi, b)
        - subsystem_entropy(psi, a | b)
    )


def trace_distance_pure(psi: DenseState, phi: DenseState) -> float:
    ov = abs(psi.overlap(phi))
    return math.sqrt(max(0.0, 1.0 - min(ov, 1.0) ** 2))


def _check_density(rho: np.ndarray) -> np.ndarray:
    rho = np.asarray(rho, dtype=complex)
    evals = np.linalg.eigvalsh((rho + rho.conj().T) / 2.0)
    if evals[0] < -_PSD_TOL:
        raise NotPSD(f"eigenvalue {evals[0]} below the PSD tolerance")
    if abs(float(np.sum(evals)) - 1.0) > 1e-8:
        raise NotPSD(f"trace {float(np.sum(evals))} differs from 1")
    return rho


def trace_distance_mixed(rho: np.ndarray, sigma: np.ndarray) -> float:
    """Half the trace norm of the difference of two density matrices."""
    rho = _check_density(rho)
    sigma = _check_density(sigma)
    if rho.shape != sigma.shape:
        raise DimensionMismatch("density matrices differ in shape")
    diff = (rho - sigma + (rho - sigma).conj().T) / 2.0
    return float(0.5 * np.sum(np.abs(np.linalg.eigvalsh(diff))))


def binary_entropy(x: float) -> float:
    if x <= 0.0 or x >= 1.0:
        return 0.0
    return float(-x * math.log2(x) - (1.0 - x) * math.log2(1.0 - x))


def fannes_check(rho, sigma, n_qubits: int, slack: float = 1e-12) -> bool:
    """Entropy continuity bound: |S(rho) - S(sigma)| <= d*|R| + H_bin(d)."""
    delta = trace_distance_mixed(rho, sigma)
    gap = abs(von_neumann_entropy(rho) - von_neumann_entropy(sigma))
    return gap <= delta * n_qubits + binary_entropy(delta) + slack


def partial_transpose(rho_ab: np.ndarray, dim_a: int) -> np.ndarray:
    """Transpose the A factor of a bipartite density matrix."""
    dim = rho_ab.shape[0]
    if rho_ab.shape != (dim, dim) or dim % dim_a != 0:
        raise BadFactorization(
            f"dimension {rho_ab.shape} does not factor with dim_a={dim_a}"
        )
    dim_b = dim // dim_a
    t = rho_ab.reshape(dim_a, dim_b, dim_a, dim_b)
    return np.ascontiguousarray(t.transpose(2, 1, 0, 3)).reshape(dim, dim)


def flatness_check(rho_ab: np.ndarray, dim_a: int, tau: float = 1e-9) -> bool:
    """Do all significant partial-transpose eigenvalues share one modulus?

    Equivalent to the proportionality of the squared and fourth powers of
    the partial transpose; holds for every stabilizer-state reduction.
    """
    pt = partial_transpose(rho_ab, dim_a)
    evals = np.linalg.eigvalsh((pt + pt.conj().T) / 2.0)
    mags = np.abs(evals)
    sig = mags[mags > tau]
    if sig.size == 0:
        return True
    return float(np.max(sig) - np.min(sig)) <= tau


def apply_local_gate(psi: DenseState, gate: np.ndarray, sites) -> DenseState:
    """Apply a unitary acting on the listed sites (in the given order)."""
    sites = tuple(sites)
    n, d = psi.n_sites, psi.local_dim
    k = len(sites)
    if gate.shape != (d**k, d**k):
        raise DimensionMismatch(f"gate shape {gate.shape} does not fit {k} sites")
    arr = psi.amplitudes.reshape([d] * n)
    arr = np.moveaxis(arr, sites, range(k))
    arr = (gate @ arr.reshape(d**k, -1)).reshape([d] * n)
    arr = np.moveaxis(arr, range(k), sites)
    return DenseState(n, d, arr.reshape(-1))


def materialize_fixed_point(
    f: FixedPointState, n: int, amp_cap: int = AMP_CAP
) -> DenseState:
    """Dense fixed-point state from Schmidt links and site isometries.

    Builds, for every block, the product of link states
    ``sum_m sqrt(lambda_m) |m m>`` across neighboring site halves, then
    funnels each site's (left, right) pair through the isometry read off
    the converged block tensor; blocks are summed with their weights at
    this system size.  This path never multiplies bond matrices, so it is
    an independent oracle for the trace-product materialization.
    """
    if not f.blocks:
        raise ZeroState("fixed point has no surviving blocks")
    d = f.blocks[0].tensor.phys_dim
    if any(b.tensor.phys_dim != d for b in f.blocks):
        raise DimensionMismatch(
            "blocks converged to different physical dimensions; "
            "materialization needs a common site space"
        )
    if d**n > amp_cap:
        raise SizeCap(f"{d}**{n} amplitudes exceed the cap {amp_cap}")
    alpha = f.weights.amplitudes(n)
    total = np.zeros(d**n, dtype=complex)
    for weight, block in zip(alpha, f.blocks):
        total += weight * _materialize_block(block, n, amp_cap)
    return DenseState.from_amplitudes(total, n, d)


def _materialize_block(block, n: int, amp_cap: int) -> np.ndarray:
    t = block.tensor
    d, chi = t.phys_dim, t.bond_dim
    lam = np.asarray(block.schmidt_weights, dtype=float)
    if (chi * chi) ** n > amp_cap:
        raise SizeCap("link construction exceeds the amplitude cap")
    # Site isometry: in the CF II gauge the tensor factors as V (1 x sqrt(lam)).
    with np.errstate(divide="ignore"):
        inv_root = np.where(lam > 1e-14, 1.0 / np.sqrt(np.maximum(lam, 1e-300)), 0.0)
    v = (t.matrices * inv_root[None, None, :]).reshape(d, chi * chi)

    omega = np.diag(np.sqrt(lam)).astype(complex)  # link (R_i, L_{i+1})
    full = omega
    for _ in range(n - 1):
        full = np.multiply.outer(full, omega)
    # Axes currently (R_0, L_1, R_1, L_2, ..., R_{n-1}, L_0); reorder per site.
    perm = []
    for i in range(n):
        perm.append(2 * n - 1 if i == 0 else 2 * i - 1)  # L_i
        perm.append(2 * i)  # R_i
    arr = full.transpose(perm)

    # Consume one leading (L_i, R_i) pair per pass; finished site axes queue
    # up at the back, so the final order is (d_0, ..., d_{n-1}).
    for i in range(n):
        rest = [chi] * (2 * (n - 1 - i)) + [d] * i
        out = (v @ arr.reshape(chi * chi, -1)).reshape([d] + rest)
        arr = np.moveaxis(out, 0, -1)
    return arr.reshape(-1)
