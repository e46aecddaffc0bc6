"""Decomposition of a TI MPS tensor into weighted normal blocks.

The decomposition peels invariant subspaces off the bond space, read from
positive fixed points of the transfer channel:

* a rank-deficient right (left) fixed point exposes a subspace mapped into
  itself by the site matrices, splitting the tensor triangularly;
* once both fixed points have full support, the channel is gauged to a
  unital one whose fixed-point set is a *-algebra; spectral projectors of
  any non-scalar Hermitian fixed point then split the space into exactly
  reducing blocks;
* an irreducible piece whose peripheral spectrum is a nontrivial group of
  roots of unity is periodic and is resolved by grouping that many sites.

Surviving blocks (weight magnitude one) are grouped by gauge equivalence;
relative phases are mean-centered per group, so each group representative
is phase-free and the group weight is a plain sum of unit phase factors.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field

import numpy as np

from .errors import (
    DecompositionFailure,
    NonDiagonalizablePeripheral,
    NotNormalInput,
    SizeCap,
)
from .spectral import DEFAULT_TAU_SPEC, is_normal, spectral
from .tensor import (
    MpsTensor,
    block_tensor,
    mixed_transfer_matrix,
    spectral_radius,
    transfer_matrix,
)
from .weights import WeightSpectrum, wrap_phase

DEFAULT_TAU_BLOCK = 1e-10
DEFAULT_Q_MAX = 8

_SURVIVAL_TOL = 1e-8


def local_orthogonal(a: MpsTensor, b: MpsTensor, tau: float = 1e-10) -> bool:
    """True iff the mixed transfer operator vanishes in Frobenius norm.

    Local orthogonality of two site tensors makes the generated states
    orthogonal at every system size.
    """
    m = mixed_transfer_matrix(a, b)
    return float(np.linalg.norm(m)) < tau


@dataclass(frozen=True)
class GaugeRelation:
    """Witness that two normal tensors generate the same family up to phase.

    ``a == exp(i*phase) * x @ b @ inv(x)`` holds entrywise; the generated
    states then differ by ``exp(i*N*phase)``.
    """

    phase: float
    x: np.ndarray


def gauge_equivalent(
    a: MpsTensor,
    b: MpsTensor,
    tau: float = 1e-8,
    tau_detect: float = 1e-6,
) -> GaugeRelation | None:
    """Detect gauge equivalence of two normal tensors.

    The mixed transfer operator of two radius-one normal tensors has
    spectral radius one exactly when the tensors are related by a gauge
    transform with a phase; the top eigenvector then factors as
    ``x @ r_b`` with ``r_b`` the right fixed point of ``b``.

    Returns the phase and gauge matrix, or None when the families are
    inequivalent (or the reconstruction misses the tolerance).
    """
    wit_b = is_normal(b)
    if not (is_normal(a) and wit_b):
        raise NotNormalInput("gauge equivalence is defined for normal tensors only")
    if a.bond_dim != b.bond_dim:
        return None
    # Detection is scale-invariant: the mixed transfer operator of two
    # radius-one normal tensors has spectral radius one iff they are gauge
    # equivalent.  Verification below is against the unscaled equation.
    r_a = spectral_radius(transfer_matrix(a))
    r_b = spectral_radius(transfer_matrix(b))
    if r_a <= 0.0 or r_b <= 0.0:
        return None
    m = mixed_transfer_matrix(
        a.scaled(1.0 / math.sqrt(r_a)), b.scaled(1.0 / math.sqrt(r_b))
    )
    evals, evecs = np.linalg.eig(m)
    top = int(np.argmax(np.abs(evals)))
    lam = evals[top]
    if abs(lam) < 1.0 - tau_detect:
        return None
    phase = float(np.angle(lam))
    chi = a.bond_dim
    mat = evecs[:, top].reshape(chi, chi)
    x = mat @ np.linalg.inv(wit_b.right_fixed_point)
    # Fix the free scale of x: unit Frobenius density, dominant entry positive.
    x = x * (math.sqrt(chi) / np.linalg.norm(x))
    pivot = x.flat[int(np.argmax(np.abs(x)))]
    x = x * (abs(pivot) / pivot)
    recon = cmath.exp(1j * phase) * np.einsum(
        "ab,ibc,cd->iad", x, b.matrices, np.linalg.inv(x)
    )
    scale = max(float(np.max(np.abs(a.matrices))), 1.0)
    if np.max(np.abs(a.matrices - recon)) > tau * scale:
        return None
    return GaugeRelation(phase=phase, x=x)


@dataclass(frozen=True)
class CanonicalBlock:
    """One normal block: weight ``mu`` times a radius-one normal tensor."""

    mu: complex
    tensor: MpsTensor
    group: int

    @property
    def surviving(self) -> bool:
        return abs(abs(self.mu) - 1.0) < _SURVIVAL_TOL


@dataclass(frozen=True)
class CanonicalForm:
    """Weighted normal blocks generating the same family as the input.

    ``blocking`` records how many sites were grouped before the blocks
    could be extracted (weights then refer to the blocked family, i.e. to
    system sizes that are multiples of ``blocking``).  ``gauge`` is the
    bond-space change of basis to block-diagonal form when the split is
    exact, None when triangular junk had to be discarded.  Blocks sharing
    a ``group`` are gauge-equivalent and generate a common state family.
    """

    blocks: tuple[CanonicalBlock, ...]
    blocking: int
    gauge: np.ndarray | None
    input_tensor: MpsTensor = field(repr=False)

    @property
    def num_groups(self) -> int:
        return 1 + max((b.group for b in self.blocks), default=-1)

    def group_members(self, g: int) -> list[CanonicalBlock]:
        return [b for b in self.blocks if b.group == g]

    def group_representatives(self) -> dict[int, MpsTensor]:
        reps: dict[int, MpsTensor] = {}
        for b in self.blocks:
            reps.setdefault(b.group, b.tensor)
        return reps

    @property
    def weight_spectrum(self) -> WeightSpectrum:
        """Merged weights of the surviving groups.

        Decaying blocks (weight magnitude below one) do not reach the
        coarse-grained fixed point and are excluded.
        """
        terms = []
        labels = []
        for g in range(self.num_groups):
            members = [b for b in self.group_members(g) if b.surviving]
            if not members:
                continue
            terms.append(tuple((1.0 + 0.0j, float(np.angle(b.mu))) for b in members))
            labels.append(f"group{g}")
        return WeightSpectrum(terms=tuple(terms), labels=tuple(labels))


def _restrict(t: MpsTensor, basis: np.ndarray) -> MpsTensor:
    return MpsTensor(np.einsum("ab,ibc,cd->iad", basis.conj().T, t.matrices, basis))


def _leak(t: MpsTensor, basis: np.ndarray) -> float:
    """Mass mapped out of span(basis) by the site matrices."""
    p = basis @ basis.conj().T
    outside = np.einsum(
        "ab,ibc,cd->iad", np.eye(t.bond_dim) - p, t.matrices, p
    )
    return float(np.max(np.abs(outside)))


def _defective_split(t: MpsTensor, tn: MpsTensor, tau_spec: float, tau_block: float):
    """Split a tensor whose peripheral transfer space is defective.

    True fixed points (null vectors of E - 1, which exist on both sides
    even for a defective peripheral block) provide candidate invariant
    subspaces; every candidate is verified exactly before recursing, so a
    wrong guess can only fail loudly.
    """
    chi = t.bond_dim
    e = transfer_matrix(tn).matrix
    scale = max(float(np.max(np.abs(tn.matrices))), 1.0)
    candidates = []
    for mat in (e, e.conj().T):
        u, sv, vh = np.linalg.svd(mat - np.eye(chi * chi))
        null_dim = int(np.sum(sv < 1e-9 * max(sv[0], 1.0)))
        for j in range(null_dim):
            vec = vh[chi * chi - 1 - j].conj().reshape(chi, chi)
            for h in ((vec + vec.conj().T) / 2.0, (vec - vec.conj().T) / 2.0j):
                if np.linalg.norm(h) < 1e-12:
                    continue
                evals, evecs = np.linalg.eigh(h)
                mags = np.abs(evals)
                support = mags > 1e-7 * float(np.max(mags))
                if 0 < int(np.sum(support)) < chi:
                    candidates.append(
                        (evecs[:, support], evecs[:, ~support])
                    )
    for basis, comp in candidates:
        for inner, outer in ((basis, comp), (comp, basis)):
            if _leak(tn, inner) <= tau_block * scale * chi:
                parts = []
                for sub_basis in (inner, outer):
                    for sub, p, cmap in _split_parts(
                        _restrict(t, sub_basis), tau_spec, tau_block
                    ):
                        parts.append((sub, p, sub_basis @ cmap))
                return parts
    raise DecompositionFailure(
        "peripheral space is defective and no verified invariant support exists",
        spectrum=np.linalg.eigvals(e),
    )


def _split_parts(t: MpsTensor, tau_spec: float, tau_block: float):
    """Recursively split ``t`` into irreducible parts.

    Returns ``[(tensor, period, colmap)]``; ``period > 1`` marks a piece
    whose peripheral spectrum is a cyclic group and which needs blocking.
    ``colmap`` spans the part's bond subspace in the coordinates of ``t``.
    Parts keep the scale they inherit from ``t``.
    """
    chi = t.bond_dim
    radius = spectral_radius(transfer_matrix(t))
    if radius < 1e-24:
        return []  # nilpotent piece: generates the zero state for N >= chi
    tn = t.scaled(1.0 / math.sqrt(radius))
    if chi == 1:
        return [(t, 1, np.eye(1, dtype=complex))]
    try:
        s = spectral(transfer_matrix(tn), tau_spec)
    except NonDiagonalizablePeripheral:
        # Triangular junk can leave the peripheral space defective while a
        # canonical form still exists; peel off an exactly verified
        # invariant support read from the true fixed points.
        return _defective_split(t, tn, tau_spec, tau_block)
    ones_idx = [
        j for j, lam in enumerate(s.peripheral) if abs(lam - 1.0) <= 10 * tau_spec
    ]
    if not ones_idx:
        raise DecompositionFailure(
            "spectral radius is not an eigenvalue of the transfer channel",
            spectrum=s.eigenvalues,
        )
    vec_id = np.eye(chi, dtype=complex).reshape(-1)
    scale = max(float(np.max(np.abs(tn.matrices))), 1.0)

    # Support/kernel splits from the two one-sided fixed points.
    for adjoint in (False, True):
        x = np.zeros(chi * chi, dtype=complex)
        for j in ones_idx:
            if adjoint:
                x += s.left_vecs[:, j] * (s.right_vecs[:, j].conj() @ vec_id)
            else:
                x += s.right_vecs[:, j] * (s.left_vecs[:, j].conj() @ vec_id)
        h = x.reshape(chi, chi)
        h = (h + h.conj().T) / 2.0
        evals, evecs = np.linalg.eigh(h)
        if evals[-1] <= 0:
            raise DecompositionFailure(
                "fixed-point projection produced no positive component",
                spectrum=s.eigenvalues,
            )
        if evals[0] < -1e-7 * evals[-1]:
            raise DecompositionFailure(
                "peripheral fixed point is indefinite beyond tolerance",
                spectrum=evals,
            )
        support = evals > max(tau_spec, 1e-12) * evals[-1]
        if not np.all(support):
            keep = evecs[:, support]
            drop = evecs[:, ~support]
            # Right fixed point: matrices map supp(X) into itself.
            # Left fixed point: matrices map ker(Y) into itself.
            inner = drop if adjoint else keep
            outer = keep if adjoint else drop
            if _leak(tn, inner) > tau_block * scale * chi:
                raise DecompositionFailure(
                    "candidate invariant subspace leaks outside itself",
                    spectrum=s.eigenvalues,
                )
            parts = []
            for basis in (inner, outer):
                for sub, p, cmap in _split_parts(
                    _restrict(t, basis), tau_spec, tau_block
                ):
                    parts.append((sub, p, basis @ cmap))
            return parts

    if len(ones_idx) == 1:
        k = len(s.peripheral)
        if k == 1:
            return [(t, 1, np.eye(chi, dtype=complex))]
        # Irreducible but periodic: peripheral phases must be k-th roots of unity.
        args = [float(np.angle(lam)) for lam in s.peripheral]
        expected = [wrap_phase(2.0 * math.pi * j / k) for j in range(k)]
        if any(
            min(abs(wrap_phase(a - b)) for b in expected) > 1e-6 for a in args
        ):
            raise DecompositionFailure(
                "irreducible piece has peripheral phases that are not roots of unity",
                spectrum=s.peripheral,
            )
        return [(t, k, np.eye(chi, dtype=complex))]

    # Both fixed points have full support and the fixed space is degenerate:
    # gauge to a unital channel, whose fixed points form a *-algebra, and cut
    # along the spectral projectors of a non-scalar Hermitian fixed point.
    x = np.zeros(chi * chi, dtype=complex)
    for j in ones_idx:
        x += s.right_vecs[:, j] * (s.left_vecs[:, j].conj() @ vec_id)
    xh = x.reshape(chi, chi)
    xh = (xh + xh.conj().T) / 2.0
    xev, xvec = np.linalg.eigh(xh)
    g = xvec @ np.diag(np.sqrt(xev)) @ xvec.conj().T
    g_inv = xvec @ np.diag(1.0 / np.sqrt(xev)) @ xvec.conj().T
    tn_unital = tn.gauged(g, g_inv)  # right fixed point becomes the identity

    best = None
    best_dev = 0.0
    for j in ones_idx:
        z = g_inv @ s.right_vecs[:, j].reshape(chi, chi) @ g_inv
        for cand in ((z + z.conj().T) / 2.0, (z - z.conj().T) / 2.0j):
            dev = float(np.linalg.norm(cand - (np.trace(cand) / chi) * np.eye(chi)))
            if dev > best_dev:
                best, best_dev = cand, dev
    if best is None or best_dev < 1e-9:
        raise DecompositionFailure(
            "degenerate fixed space but no non-scalar Hermitian fixed point",
            spectrum=s.peripheral,
        )
    hev, hvec = np.linalg.eigh(best)
    spread = float(hev[-1] - hev[0])
    cuts = [i for i in range(1, chi) if hev[i] - hev[i - 1] > 1e-6 * max(spread, 1.0)]
    if not cuts:
        raise DecompositionFailure(
            "Hermitian fixed point has no resolvable eigenvalue clusters",
            spectrum=hev,
        )
    bounds = [0, *cuts, chi]
    uscale = max(float(np.max(np.abs(tn_unital.matrices))), 1.0)
    parts = []
    for lo, hi in zip(bounds[:-1], bounds[1:]):
        basis = hvec[:, lo:hi]
        comp = np.concatenate([hvec[:, :lo], hvec[:, hi:]], axis=1)
        if max(_leak(tn_unital, basis), _leak(tn_unital, comp)) > tau_block * uscale * chi:
            raise DecompositionFailure(
                "fixed-point algebra projector fails to reduce the matrices",
                spectrum=hev,
            )
        sub = _restrict(tn_unital, basis).scaled(math.sqrt(radius))
        for part, p, cmap in _split_parts(sub, tau_spec, tau_block):
            parts.append((part, p, g @ basis @ cmap))
    return parts


def canonical_decompose(
    a: MpsTensor,
    tau_block: float = DEFAULT_TAU_BLOCK,
    tau_spec: float = DEFAULT_TAU_SPEC,
    q_max: int = DEFAULT_Q_MAX,
    phys_dim_cap: int = 4096,
) -> CanonicalForm:
    """Extract the canonical form of a TI MPS tensor.

    Blocks sites as needed (up to ``q_max``), splits the bond space into
    certified-normal blocks with weights ``mu_k`` (``|mu_k| <= 1``, the
    largest exactly one), and groups gauge-equivalent blocks.

    Raises:
        DecompositionFailure: when block projectors cannot be extracted
            within ``tau_block``, a block fails its normality certificate,
            or the required blocking exceeds ``q_max``.
    """
    q = 1
    current = a
    for _ in range(q_max + 1):
        radius = spectral_radius(transfer_matrix(current))
        if radius < 1e-24:
            raise DecompositionFailure("tensor generates the zero family")
        scaled = current.scaled(1.0 / math.sqrt(radius))
        parts = _split_parts(scaled, tau_spec, tau_block)
        if not parts:
            raise DecompositionFailure("all parts are nilpotent")
        periods = {p for _, p, _ in parts}
        if periods == {1}:
            break
        q_new = q * math.lcm(*periods)
        if q_new > q_max:
            raise DecompositionFailure(
                f"blocking order {q_new} exceeds the cap {q_max}"
            )
        if a.phys_dim**q_new > phys_dim_cap:
            raise SizeCap(
                f"blocking to order {q_new} exceeds the physical-dimension cap"
            )
        q = q_new
        current = block_tensor(a, q, phys_dim_cap)
    else:
        raise DecompositionFailure("blocking did not stabilize the decomposition")

    # Normalize each part to spectral radius one and record its weight.
    colmaps = [cmap for _, _, cmap in parts]
    mags = []
    tensors = []
    for part, _, _ in parts:
        rho = spectral_radius(transfer_matrix(part))
        mags.append(math.sqrt(rho))
        tensors.append(part.scaled(1.0 / math.sqrt(rho)))
    mags = np.array(mags)
    top = float(np.max(mags))
    if abs(top - 1.0) > 1e-6:
        raise DecompositionFailure(
            f"largest block weight {top} deviates from one", spectrum=mags
        )
    mags = mags / top

    for tt in tensors:
        w = is_normal(tt, tau_spec)
        if not w:
            raise DecompositionFailure(
                f"extracted block failed the normality certificate: {w.reason}",
                spectrum=w.peripheral,
            )

    surviving = [k for k in range(len(tensors)) if mags[k] >= 1.0 - _SURVIVAL_TOL]
    group_of: dict[int, int] = {}
    rel_phase: dict[int, float] = {}
    group_seeds: list[int] = []
    for k in surviving:
        for gi, seed in enumerate(group_seeds):
            rel = gauge_equivalent(tensors[k], tensors[seed], tau=1e-7)
            if rel is not None:
                group_of[k] = gi
                rel_phase[k] = rel.phase
                break
        else:
            group_of[k] = len(group_seeds)
            rel_phase[k] = 0.0
            group_seeds.append(k)
    next_group = len(group_seeds)
    for k in range(len(tensors)):
        if k not in group_of:
            group_of[k] = next_group  # decaying blocks stay singleton groups
            next_group += 1

    # Mean-center phases within each group; the arbitrary overall phase of a
    # group is pushed into its representative tensor.
    centered: dict[int, float] = {}
    for gi in range(len(group_seeds)):
        members = [k for k in surviving if group_of[k] == gi]
        mean = sum(rel_phase[k] for k in members) / len(members)
        for k in members:
            centered[k] = wrap_phase(rel_phase[k] - mean)

    blocks = []
    for k, tt in enumerate(tensors):
        if k in centered:
            phi = centered[k]
            mu = cmath.exp(1j * phi)
            tensor_k = tt.scaled(cmath.exp(-1j * phi))
        else:
            mu = complex(mags[k])
            tensor_k = tt
        blocks.append(CanonicalBlock(mu=mu, tensor=tensor_k, group=group_of[k]))

    gauge = _assemble_gauge(current, blocks, colmaps, tau_block)
    return CanonicalForm(blocks=tuple(blocks), blocking=q, gauge=gauge, input_tensor=a)


def _assemble_gauge(current, blocks, colmaps, tau_block):
    """Build the change of basis to block-diagonal form, if it is exact.

    The column maps collected during splitting span the block subspaces in
    the (possibly blocked) input coordinates.  When they fill the bond
    space and conjugation leaves no off-block mass, the concatenation is
    the gauge; triangular splits leave residual junk and yield None.
    """
    chi = current.bond_dim
    if sum(c.shape[1] for c in colmaps) != chi:
        return None
    xi = np.concatenate(colmaps, axis=1)
    if np.linalg.cond(xi) > 1e10:
        return None
    rotated = np.einsum(
        "ab,ibc,cd->iad", np.linalg.inv(xi), current.matrices, xi
    )
    mask = np.zeros((chi, chi), dtype=bool)
    off = 0
    for b in blocks:
        sz = b.tensor.bond_dim
        mask[off : off + sz, off : off + sz] = True
        off += sz
    resid = float(np.max(np.abs(rotated[:, ~mask]))) if (~mask).any() else 0.0
    scale = max(float(np.max(np.abs(current.matrices))), 1.0)
    if resid > 1e3 * tau_block * scale * chi:
        return None
    return xi
