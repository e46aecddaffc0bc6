"""Spectra of transfer operators: peripheral data, normality, correlation length."""

from __future__ import annotations

import hashlib
import math
import os
from dataclasses import dataclass

import numpy as np

from .errors import NonDiagonalizablePeripheral
from .tensor import MpsTensor, TransferOperator, transfer_matrix

DEFAULT_TAU_SPEC = 1e-9

CACHE_ENV_VAR = "LRN_DETECT_CACHE"


@dataclass(frozen=True)
class SpectralData:
    """Eigendata of a transfer operator.

    ``eigenvalues`` is the full spectrum sorted by descending modulus.
    ``peripheral`` collects the eigenvalues whose modulus lies within
    ``tau`` of the spectral radius; ``right_vecs``/``left_vecs`` hold one
    column per peripheral eigenvalue, scaled so the left-right pairing is
    the identity on the peripheral space.
    """

    eigenvalues: np.ndarray
    peripheral: np.ndarray
    right_vecs: np.ndarray
    left_vecs: np.ndarray
    tau: float

    @property
    def radius(self) -> float:
        return float(abs(self.eigenvalues[0])) if self.eigenvalues.size else 0.0

    @property
    def subleading_modulus(self) -> float:
        """Largest modulus outside the peripheral cluster (0 if none)."""
        k = len(self.peripheral)
        if k >= len(self.eigenvalues):
            return 0.0
        return float(abs(self.eigenvalues[k]))

    @property
    def multi_block(self) -> bool:
        return len(self.peripheral) > 1


def _cache_key(matrix: np.ndarray, tau: float) -> str:
    h = hashlib.sha256()
    h.update(np.ascontiguousarray(matrix).tobytes())
    h.update(repr((matrix.shape, tau)).encode())
    return h.hexdigest()


def _cache_load(path: str) -> SpectralData | None:
    try:
        with np.load(path) as f:
            return SpectralData(
                eigenvalues=f["eigenvalues"],
                peripheral=f["peripheral"],
                right_vecs=f["right_vecs"],
                left_vecs=f["left_vecs"],
                tau=float(f["tau"]),
            )
    except Exception:
        return None


def spectral(t: TransferOperator | np.ndarray, tau_spec: float = DEFAULT_TAU_SPEC) -> SpectralData:
    """Full eigendecomposition with a biorthonormalized peripheral block.

    Raises:
        NonDiagonalizablePeripheral: if the peripheral space carries a
            nontrivial Jordan block (left/right pairing is singular).
    """
    if not 0.0 < tau_spec < 0.5:
        raise ValueError("tau_spec must lie in (0, 0.5)")
    m = t.matrix if isinstance(t, TransferOperator) else np.asarray(t, dtype=complex)

    cache_dir = os.environ.get(CACHE_ENV_VAR)
    cache_path = None
    if cache_dir:
        os.makedirs(cache_dir, exist_ok=True)
        cache_path = os.path.join(cache_dir, _cache_key(m, tau_spec) + ".npz")
        if os.path.exists(cache_path):
            hit = _cache_load(cache_path)
            if hit is not None:
                return hit

    evals, rvecs = np.linalg.eig(m)
    order = np.argsort(-np.abs(evals), kind="stable")
    evals, rvecs = evals[order], rvecs[:, order]
    radius = abs(evals[0])

    k = int(np.sum(np.abs(evals) >= radius - tau_spec)) if radius > 0 else 1
    peripheral = evals[:k]

    # Left eigenvectors from the adjoint; eigenvalues there are conjugated.
    levals, lvecs = np.linalg.eig(m.conj().T)
    lorder = np.argsort(-np.abs(levals), kind="stable")
    levals, lvecs = levals[lorder], lvecs[:, lorder]
    kl = int(np.sum(np.abs(levals) >= radius - tau_spec)) if radius > 0 else 1
    if kl != k:
        raise NonDiagonalizablePeripheral(
            f"peripheral multiplicities disagree between sides ({k} vs {kl})"
        )

    r_per = rvecs[:, :k] / np.linalg.norm(rvecs[:, :k], axis=0)
    l_per = lvecs[:, :k] / np.linalg.norm(lvecs[:, :k], axis=0)
    # Sort left columns so their (conjugated) eigenvalues match the right ones.
    l_assigned = np.zeros_like(l_per)
    used = set()
    for i, lam in enumerate(peripheral):
        dists = np.abs(np.conj(levals[:k]) - lam)
        for j in np.argsort(dists):
            if j not in used:
                used.add(int(j))
                l_assigned[:, i] = l_per[:, j]
                break
    gram = l_assigned.conj().T @ r_per
    # A defective peripheral block leaves the unit-column pairing singular
    # (LAPACK hands back near-parallel or mutually orthogonal junk vectors).
    if k:
        sv = np.linalg.svd(gram, compute_uv=False)
        if sv[-1] < 1e-8:
            raise NonDiagonalizablePeripheral(
                "peripheral left/right pairing is numerically singular"
            )
    l_norm = l_assigned @ np.linalg.inv(gram).conj().T

    data = SpectralData(
        eigenvalues=evals,
        peripheral=peripheral,
        right_vecs=r_per,
        left_vecs=l_norm,
        tau=tau_spec,
    )
    if cache_path:
        try:
            np.savez(
                cache_path,
                eigenvalues=data.eigenvalues,
                peripheral=data.peripheral,
                right_vecs=data.right_vecs,
                left_vecs=data.left_vecs,
                tau=tau_spec,
            )
        except OSError:
            pass
    return data


def correlation_length(s: SpectralData) -> float:
    """Decay length set by the subleading transfer eigenvalue.

    Returns 0 when there is no subleading eigenvalue, a finite length for
    a unique peripheral eigenvalue, and ``inf`` for a degenerate peripheral
    space (multi-block tensor; the caller should report it as such).
    """
    if s.multi_block:
        return math.inf
    lam2 = s.subleading_modulus / s.radius if s.radius > 0 else 0.0
    if lam2 <= 0.0:
        return 0.0
    return -1.0 / math.log(lam2)


def rotate_to_hermitian(m: np.ndarray) -> np.ndarray | None:
    """Strip the global phase of a matrix proportional to a Hermitian one.

    Returns the Hermitian representative with nonnegative trace direction,
    or None if ``m`` is not proportional to any Hermitian matrix.  The
    tolerance is loose: eigenvectors of strongly non-normal transfer
    operators can carry sqrt(eps)-scale junk even when the underlying
    fixed point is exactly Hermitian, while genuinely unrotatable
    matrices miss by O(1).
    """
    hc = (m + m.conj().T) / 2.0
    ac = (m - m.conj().T) / 2.0j
    h = hc if np.linalg.norm(hc) >= np.linalg.norm(ac) else ac
    nh = np.linalg.norm(h)
    if nh == 0.0:
        return None
    coeff = np.vdot(h, m) / np.vdot(h, h)
    if np.linalg.norm(m - coeff * h) > 1e-6 * np.linalg.norm(m):
        return None
    ev = np.linalg.eigvalsh(h)
    if abs(ev[0]) > abs(ev[-1]):
        h = -h
    return h


@dataclass(frozen=True)
class NormalityWitness:
    """Outcome of a normality test, truthy iff the tensor is normal.

    The witness carries the positive fixed points of the transfer channel
    and of its adjoint (when they exist) and the peripheral eigenvalues.
    """

    normal: bool
    reason: str
    peripheral: np.ndarray
    right_fixed_point: np.ndarray | None = None
    left_fixed_point: np.ndarray | None = None

    def __bool__(self) -> bool:
        return self.normal


def is_normal(a: MpsTensor, tau: float = DEFAULT_TAU_SPEC) -> NormalityWitness:
    """Test irreducibility plus uniqueness of the peripheral eigenvalue.

    A tensor passes iff the transfer channel and its adjoint both have a
    full-support positive fixed point and the peripheral eigenvalue is
    unique.  Scale-invariant: the test is applied after normalizing the
    spectral radius to one.
    """
    s = spectral(transfer_matrix(a), tau)
    if s.radius == 0.0:
        return NormalityWitness(False, "zero spectral radius", s.peripheral)
    if s.multi_block:
        return NormalityWitness(
            False,
            f"{len(s.peripheral)} peripheral eigenvalues",
            s.peripheral,
        )
    chi = a.bond_dim
    fps = []
    for vec in (s.right_vecs[:, 0], s.left_vecs[:, 0]):
        h = rotate_to_hermitian(vec.reshape(chi, chi))
        if h is None:
            return NormalityWitness(
                False, "fixed point not proportional to a Hermitian matrix", s.peripheral
            )
        ev = np.linalg.eigvalsh(h)
        if ev[0] < -max(tau, 1e-12) * max(abs(ev[-1]), 1.0):
            return NormalityWitness(False, "fixed point indefinite", s.peripheral)
        if ev[0] <= max(tau, 1e-12) * abs(ev[-1]):
            return NormalityWitness(
                False, "fixed point lacks full support", s.peripheral,
                right_fixed_point=h if len(fps) == 0 else fps[0],
            )
        fps.append(h / np.trace(h).real)
    return NormalityWitness(
        True, "unique peripheral eigenvalue, full-support fixed points",
        s.peripheral, right_fixed_point=fps[0], left_fixed_point=fps[1],
    )
