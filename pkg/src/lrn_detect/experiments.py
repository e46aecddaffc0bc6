"""End-to-end invariance experiments on dense fixed-point states.

The headline check: the mutual information between the separated regions
of a coarse-grained fixed point equals the Shannon entropy of its block
weights, and a shallow random circuit cannot move it.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .circuits import BrickworkCircuit, apply_brickwork, random_brickwork
from .dense import DenseState, materialize_fixed_point, mutual_information
from .criteria import shannon_entropy
from .partition import Partition, build_partition
from .rg import FixedPointState
from .weights import evaluate_weights


@dataclass(frozen=True)
class InvarianceReport:
    """Mutual information before/after a shallow circuit vs weight entropy."""

    before: float
    after: float
    shannon: float
    n_sites: int
    depth: int
    seed: int
    partition: Partition
    tolerance: float

    @property
    def max_deviation(self) -> float:
        return max(abs(self.before - self.after), abs(self.before - self.shannon))

    @property
    def passed(self) -> bool:
        return self.max_deviation < self.tolerance

    def to_json(self) -> dict:
        return {
            "before": self.before,
            "after": self.after,
            "shannon": self.shannon,
            "partition": self.partition.to_json(),
            "seed": self.seed,
            "depth": self.depth,
            "passed": self.passed,
        }


def invariance_experiment(
    state: DenseState,
    probs,
    partition: Partition,
    circuit: BrickworkCircuit,
    seed: int = 0,
    tol: float = 1e-8,
) -> InvarianceReport:
    """Compare I(A:B) before and after a circuit with the weight entropy."""
    before = mutual_information(state, partition.a, partition.b)
    evolved = apply_brickwork(state, circuit)
    after = mutual_information(evolved, partition.a, partition.b)
    h = shannon_entropy(np.asarray(probs, dtype=float))
    return InvarianceReport(
        before=before,
        after=after,
        shannon=h,
        n_sites=state.n_sites,
        depth=circuit.depth,
        seed=seed,
        partition=partition,
        tolerance=tol,
    )


def fixed_point_invariance_experiment(
    f: FixedPointState,
    n: int,
    depth: int,
    seed: int,
    tol: float = 1e-8,
) -> InvarianceReport:
    """Materialize a fixed point, hit it with a random shallow circuit.

    The partition satisfies the depth-matched size constraints; the random
    circuit's layer alignment is drawn from the seed so sweeps cover both
    brick offsets.
    """
    state = materialize_fixed_point(f, n)
    probs = evaluate_weights(f.weights, n)
    partition = build_partition(n, depth)
    circuit = random_brickwork(n, depth, seed, local_dim=state.local_dim)
    return invariance_experiment(state, probs, partition, circuit, seed=seed, tol=tol)
