"""Verdicts on a weight spectrum: entropy criterion, ratio criterion,
GHZ-family classification, and the state-counting estimate.

The entropy criterion certifies long-range nonstabilizerness when the
Shannon entropy of the normalized block weights stays a definite distance
away from every integer; the ratio criterion excludes exact short-range
nonstabilizerness when some pair of fourth-power weights has a provably
irrational ratio.  Certificates of irrationality are only ever issued on
the symbolic path: floats cannot prove irrationality.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

import numpy as np

from .errors import NotNormalized, OutOfRange
from .exact import ExactWeight, best_rational, squared_ratio
from .weights import WeightSpectrum, evaluate_weights

LRN_CERTIFIED = "LRN_CERTIFIED"
EXACT_SRN_EXCLUDED = "EXACT_SRN_EXCLUDED"
INCONCLUSIVE = "INCONCLUSIVE"

DEFAULT_TAU_INT = 1e-6
DEFAULT_N_WINDOW = (1000, 2000)
DEFAULT_PHASE_Q_MAX = 10**4


@dataclass(frozen=True)
class Verdict:
    """Outcome of a criterion with its supporting numbers.

    ``residue_class`` qualifies verdicts for families whose weights cycle
    with period ``s``: it reports ``(s, r)`` with ``r`` the residue whose
    entropy sits farthest from the integers.
    """

    status: str
    evidence: dict = field(default_factory=dict)
    residue_class: tuple[int, int] | None = None


def shannon_entropy(p, tol_norm: float = 1e-9) -> float:
    """Base-2 Shannon entropy of a probability vector (0 log 0 := 0)."""
    arr = np.asarray(p, dtype=float)
    if arr.ndim != 1 or arr.size == 0:
        raise NotNormalized("probability vector must be one-dimensional and nonempty")
    if np.any(arr < -1e-12) or np.any(arr > 1.0 + 1e-12):
        raise NotNormalized("probabilities must lie in [0, 1]")
    if abs(float(np.sum(arr)) - 1.0) > tol_norm:
        raise NotNormalized(f"probabilities sum to {float(np.sum(arr))}, not 1")
    pos = arr[arr > 0.0]
    return float(-np.sum(pos * np.log2(pos)))


def _integer_distance(h: float) -> float:
    return abs(h - round(h))


def lrn_entropy_check(
    w: WeightSpectrum,
    n_window: tuple[int, int] = DEFAULT_N_WINDOW,
    tau_int: float = DEFAULT_TAU_INT,
    phase_q_max: int = DEFAULT_PHASE_Q_MAX,
    phase_tau: float = 1e-9,
) -> Verdict:
    """Sufficient criterion: non-integer weight entropy certifies LRN.

    When all phases are commensurate with 2*pi the weights cycle with a
    finite period ``s`` and the entropy is evaluated exactly on every
    residue class; certification requires every class to clear the
    integer-distance tolerance.  With incommensurate phases no limit
    exists; the entropy is swept over ``n_window`` and certification is
    granted only when the whole window clears the tolerance (a
    deliberately conservative reading).  Classes clearing the gap are
    reported either way, as subsequence metadata.
    """
    if w.num_blocks == 0:
        raise OutOfRange("weight spectrum has no blocks")
    if w.num_blocks == 1:
        return Verdict(
            status=INCONCLUSIVE,
            evidence={"entropy": 0.0, "distance": 0.0, "reason": "single block"},
        )

    phases = [p for p in w.phases() if abs(p) > 1e-15]
    fracs = [best_rational(p / (2 * math.pi), phase_q_max, phase_tau) for p in phases]

    if all(f is not None for f in fracs):
        s = 1
        for f in fracs:
            s = math.lcm(s, f.denominator)
        classes = []
        for r in range(s):
            n_rep = r if r >= 1 else s
            h = shannon_entropy(evaluate_weights(w, n_rep))
            classes.append({"residue": r, "n": n_rep, "entropy": h,
                            "distance": _integer_distance(h)})
        min_dist = min(c["distance"] for c in classes)
        best = max(classes, key=lambda c: c["distance"])
        evidence = {
            "mode": "commensurate",
            "period": s,
            "classes": classes,
            "min_distance": min_dist,
        }
        status = LRN_CERTIFIED if min_dist > tau_int else INCONCLUSIVE
        qualifier = (s, int(best["residue"])) if s > 1 else None
        return Verdict(status=status, evidence=evidence, residue_class=qualifier)

    lo, hi = n_window
    if lo < 1 or hi < lo:
        raise OutOfRange("invalid evaluation window")
    h_inf, h_sup = math.inf, -math.inf
    min_dist = math.inf
    first_fail = None
    for n in range(lo, hi + 1):
        h = shannon_entropy(evaluate_weights(w, n))
        h_inf, h_sup = min(h_inf, h), max(h_sup, h)
        d = _integer_distance(h)
        if d < min_dist:
            min_dist = d
        if d <= tau_int and first_fail is None:
            first_fail = n
    evidence = {
        "mode": "incommensurate",
        "window": [lo, hi],
        "entropy_inf": h_inf,
        "entropy_sup": h_sup,
        "min_distance": min_dist,
    }
    if first_fail is not None:
        evidence["first_integer_hit_n"] = first_fail
    status = LRN_CERTIFIED if min_dist > tau_int else INCONCLUSIVE
    return Verdict(status=status, evidence=evidence)


def srn_ratio_check(
    weights: Sequence[ExactWeight],
    q_max: int = 10**6,
    tau_rat: float = 1e-9,
) -> Verdict:
    """Necessary criterion for exact SRN: fourth-power ratios rational.

    ``weights`` are the squared block weights ``|alpha_k|**2``; the
    criterion inspects ``|alpha_i|**4 / |alpha_j|**4`` for every pair.
    Pairs of exact forms are decided symbolically; float pairs get a
    continued-fraction guess that is recorded as heuristic and never
    grounds an exclusion.
    """
    if len(weights) < 2:
        raise OutOfRange("ratio criterion needs at least two blocks")
    pairs = []
    offender = None
    for i in range(len(weights)):
        for j in range(i + 1, len(weights)):
            w_i, w_j = weights[i], weights[j]
            if w_i.value() == 0.0 or w_j.value() == 0.0:
                pairs.append({"pair": [i, j], "skipped": "vanishing weight"})
                continue
            if w_i.is_exact and w_j.is_exact:
                dec = squared_ratio(w_i, w_j)
                entry = {
                    "pair": [i, j],
                    "method": "symbolic",
                    "rational": dec.rational,
                    "ratio": dec.describe(),
                    "value": dec.value(),
                }
                if not dec.rational and offender is None:
                    offender = entry
            else:
                x = (w_i.value() ** 2) / (w_j.value() ** 2)
                approx = best_rational(x, q_max, tau_rat)
                entry = {
                    "pair": [i, j],
                    "method": "heuristic",
                    "value": x,
                    "rational": None if approx is None else True,
                }
                if approx is not None:
                    entry["approximation"] = [approx.numerator, approx.denominator]
            pairs.append(entry)
    evidence = {"pairs": pairs}
    if offender is not None:
        evidence["offending_pair"] = offender
        return Verdict(status=EXACT_SRN_EXCLUDED, evidence=evidence)
    return Verdict(status=INCONCLUSIVE, evidence=evidence)


def ghz_classify(alpha_sq, tol: float = 1e-12) -> str:
    """Classify the two-component product-state family by its weight.

    STABILIZER at weight 0 or 1, SRN at weight 1/2, LRN anywhere else.
    """
    if isinstance(alpha_sq, ExactWeight):
        x = alpha_sq.value()
        if alpha_sq.kind == "rational":
            if alpha_sq.rational in (0, 1):
                return "STABILIZER"
            if alpha_sq.rational == Fraction(1, 2):
                return "SRN"
            if not 0 <= alpha_sq.rational <= 1:
                raise OutOfRange("weight must lie in [0, 1]")
            return "LRN"
    else:
        x = float(alpha_sq)
    if not -tol <= x <= 1.0 + tol:
        raise OutOfRange(f"weight {x} outside [0, 1]")
    if min(abs(x), abs(x - 1.0)) <= tol:
        return "STABILIZER"
    if abs(x - 0.5) <= tol:
        return "SRN"
    return "LRN"


def typicality_log_ratio(
    n: int,
    depth_exponent: int = 2,
    depth_coeff: float = 1.0,
    polylog_exponent: int = 2,
    eps0: float = 0.01,
    alpha: float = 1.0,
    n_gates: int = 3,
) -> float:
    """Natural-log ratio of reachable states to distinguishable states.

    Counts circuits of polylog depth applied to stabilizer states against
    epsilon-balls in Hilbert space, all in log space: the result is
    ``ln(n_C) + ln(n_S) - ln(n_B)`` with ``ln(n_B) = (1 - eps**2) 2**(n-1)``,
    ``ln(n_S) = (n**2 / 2) ln 2`` and
    ``ln(n_C) = n D polylog(n D / eps) ln(n_gates)``.
    A negative value means typical states are out of reach.
    """
    if n < 2:
        raise OutOfRange("need at least two qubits")
    if eps0 <= 0 or n_gates < 2:
        raise OutOfRange("eps0 must be positive and the gate set nontrivial")
    eps = eps0 / n**alpha
    depth = depth_coeff * math.ceil(math.log2(n)) ** depth_exponent
    try:
        ln_balls = (1.0 - eps * eps) * 2.0 ** (n - 1)
    except OverflowError:
        return -math.inf
    ln_stab = 0.5 * n * n * math.log(2.0)
    ln_circ = n * depth * math.log(n * depth / eps) ** polylog_exponent * math.log(n_gates)
    return ln_circ + ln_stab - ln_balls
