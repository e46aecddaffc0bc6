"""Size-dependent block weights of a decomposed MPS family.

Each surviving block carries a weight ``alpha_k(N) = sum_j c_j * exp(i*phi_j*N)``
built from unit-modulus block coefficients and relative gauge phases.  The
normalized squared moduli are the probabilities entering the entropy and
ratio criteria.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field

import numpy as np

from .errors import DegenerateNormalization

_NORM_FLOOR = 1e-14


def wrap_phase(phi: float) -> float:
    """Map a phase to the interval (-pi, pi]."""
    out = math.remainder(phi, 2.0 * math.pi)
    if out <= -math.pi:
        out += 2.0 * math.pi
    return out


@dataclass(frozen=True)
class WeightSpectrum:
    """Phase-sum representation of the per-block weights.

    ``terms[k]`` is the list of ``(coefficient, phase)`` pairs of block k;
    phases are stored in (-pi, pi].  ``labels`` names the blocks.
    """

    terms: tuple[tuple[tuple[complex, float], ...], ...]
    labels: tuple[str, ...] = field(default=())

    def __post_init__(self):
        norm_terms = tuple(
            tuple((complex(c), wrap_phase(float(p))) for c, p in block)
            for block in self.terms
        )
        object.__setattr__(self, "terms", norm_terms)
        if not self.labels:
            object.__setattr__(
                self, "labels", tuple(f"block{k}" for k in range(len(norm_terms)))
            )
        if len(self.labels) != len(norm_terms):
            raise ValueError("one label per block required")

    @property
    def num_blocks(self) -> int:
        return len(self.terms)

    def amplitudes(self, n: int) -> np.ndarray:
        """Unnormalized alpha_k(N)."""
        if n < 1:
            raise ValueError("system size must be >= 1")
        return np.array(
            [
                sum(c * cmath.exp(1j * p * n) for c, p in block)
                for block in self.terms
            ],
            dtype=complex,
        )

    def phases(self) -> list[float]:
        return [p for block in self.terms for _, p in block]

    @staticmethod
    def constant(weights) -> "WeightSpectrum":
        """Spectrum with N-independent coefficients (one phase-free term each)."""
        return WeightSpectrum(terms=tuple(((complex(w), 0.0),) for w in weights))

    def to_json(self) -> dict:
        return {
            "labels": list(self.labels),
            "terms": [
                [{"re": c.real, "im": c.imag, "phase": p} for c, p in block]
                for block in self.terms
            ],
        }

    @staticmethod
    def from_json(obj: dict) -> "WeightSpectrum":
        terms = tuple(
            tuple((complex(t["re"], t["im"]), float(t["phase"])) for t in block)
            for block in obj["terms"]
        )
        return WeightSpectrum(terms=terms, labels=tuple(obj.get("labels", ())))


def evaluate_weights(w: WeightSpectrum, n: int) -> np.ndarray:
    """Probabilities p_k(N), normalizing by the root-sum-square of weights.

    Blocks whose weight vanishes at this N are retained with p = 0.

    Raises:
        DegenerateNormalization: if every weight vanishes at this N.
    """
    alpha = w.amplitudes(n)
    c_sq = float(np.sum(np.abs(alpha) ** 2))
    if math.sqrt(c_sq) < _NORM_FLOOR:
        raise DegenerateNormalization(
            f"all block weights vanish at N={n}; the family has no state there"
        )
    return np.abs(alpha) ** 2 / c_sq
