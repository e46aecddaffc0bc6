"""Batch command-line front door.

One executable, one ``--pipeline`` switch:

* ``analyze``    tensor JSON -> canonical form, fixed point, verdicts
* ``rg``         tensor JSON -> per-iteration flow trace
* ``verify``     run the dense-oracle invariant suites
* ``stab``       tableau request -> exact entropies / mutual information
* ``ghz``        exact-weight JSON -> family label
* ``typicality`` counting estimate sweep over system sizes

Exit codes for verdict pipelines: 0 when long-range nonstabilizerness is
certified, 2 when only the exact-SRN exclusion fires, 3 when
inconclusive, 1 on errors.  All randomness flows from ``--seed``;
identical requests produce byte-identical reports.  Reports go to stdout
or ``--out``; stderr carries diagnostics only.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from . import families
from .causal import apply_reduction, causal_cone_reduce
from .circuits import apply_brickwork, random_brickwork
from .criteria import (
    EXACT_SRN_EXCLUDED,
    LRN_CERTIFIED,
    ghz_classify,
    lrn_entropy_check,
    srn_ratio_check,
    typicality_log_ratio,
)
from .dense import (
    DenseState,
    apply_local_gate,
    flatness_check,
    reduced_density,
    subsystem_entropy,
)
from .errors import LrnDetectError
from .exact import ExactWeight
from .experiments import fixed_point_invariance_experiment, invariance_experiment
from .io import dump_report, load_tensor, rows_to_csv
from .partition import build_partition
from .rg import rg_fixed_point
from .spectral import correlation_length, spectral
from .stabilizer import StabilizerTableau, random_clifford_circuit
from .tensor import transfer_matrix
from .weights import WeightSpectrum

PIPELINES = ("analyze", "rg", "verify", "stab", "ghz", "typicality")

_EXIT_OK = 0
_EXIT_ERROR = 1
_EXIT_EXCLUDED = 2
_EXIT_INCONCLUSIVE = 3

_CLIFFORD_DENSE = {
    "H": np.array([[1, 1], [1, -1]], dtype=complex) / math.sqrt(2),
    "S": np.diag([1, 1j]).astype(complex),
    "X": np.array([[0, 1], [1, 0]], dtype=complex),
    "Y": np.array([[0, -1j], [1j, 0]], dtype=complex),
    "Z": np.diag([1, -1]).astype(complex),
    "CNOT": np.array(
        [[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 0, 1], [0, 0, 1, 0]], dtype=complex
    ),
    "CZ": np.diag([1, 1, 1, -1]).astype(complex),
}


@dataclass
class AnalysisRequest:
    """One validated run: input path, pipeline, tolerances, output routing."""

    pipeline: str
    input_path: str | None
    out: str | None
    fmt: str
    seed: int
    jobs: int
    n_min: int
    n_max: int
    depth: int
    tol_int: float
    q_max: int
    options: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.pipeline not in PIPELINES:
            raise LrnDetectError(f"unknown pipeline {self.pipeline!r}")
        if self.pipeline in ("analyze", "rg", "stab", "ghz") and not self.input_path:
            raise LrnDetectError(f"pipeline {self.pipeline!r} requires --input")
        if self.fmt not in ("json", "csv"):
            raise LrnDetectError("--format must be json or csv")
        if self.jobs < 1:
            raise LrnDetectError("--jobs must be at least 1")
        if self.n_min < 1 or self.n_max < self.n_min:
            raise LrnDetectError("need 1 <= n-min <= n-max")


def _emit(req: AnalysisRequest, report: dict, rows: list[dict] | None = None) -> None:
    if req.fmt == "csv" and rows is not None:
        text = rows_to_csv(rows, req.out)
    else:
        text = dump_report(report, req.out)
    if not req.out:
        sys.stdout.write(text)


def _verdict_json(v) -> dict:
    out = {"status": v.status, "evidence": v.evidence}
    if v.residue_class is not None:
        out["residue_class"] = list(v.residue_class)
    return out


def _status_exit(statuses: list[str]) -> int:
    if LRN_CERTIFIED in statuses:
        return _EXIT_OK
    if EXACT_SRN_EXCLUDED in statuses:
        return _EXIT_EXCLUDED
    return _EXIT_INCONCLUSIVE


def cmd_analyze(req: AnalysisRequest) -> int:
    tensor, exact_weights = load_tensor(req.input_path)
    fp = rg_fixed_point(tensor)  # --qmax bounds rational denominators, not blocking
    cf = fp.canonical

    spectrum = fp.weights
    if exact_weights is not None:
        if len(exact_weights) != spectrum.num_blocks:
            raise LrnDetectError(
                f"{len(exact_weights)} exact weights for {spectrum.num_blocks} "
                "surviving block groups"
            )
        spectrum = WeightSpectrum.constant(
            [math.sqrt(max(w.value(), 0.0)) for w in exact_weights]
        )

    verdicts = {"entropy_criterion": lrn_entropy_check(spectrum, tau_int=req.tol_int)}
    if exact_weights is not None and len(exact_weights) >= 2:
        verdicts["ratio_criterion"] = srn_ratio_check(exact_weights, q_max=req.q_max)

    report = {
        "input": req.input_path,
        "canonical_form": {
            "blocking": cf.blocking,
            "num_blocks": len(cf.blocks),
            "num_groups": cf.num_groups,
            "blocks": [
                {
                    "mu": {"re": b.mu.real, "im": b.mu.imag},
                    "abs_mu": abs(b.mu),
                    "bond_dim": b.tensor.bond_dim,
                    "group": b.group,
                    "surviving": b.surviving,
                }
                for b in cf.blocks
            ],
        },
        "fixed_point": [
            {
                "label": b.label,
                "schmidt_weights": list(map(float, b.schmidt_weights)),
                "iterations": b.iterations,
                "final_lambda2": b.final_lambda2,
            }
            for b in fp.blocks
        ],
        "weight_spectrum": spectrum.to_json(),
        "verdicts": {k: _verdict_json(v) for k, v in verdicts.items()},
    }
    _emit(req, report)
    return _status_exit([v.status for v in verdicts.values()])


def cmd_rg(req: AnalysisRequest) -> int:
    tensor, _ = load_tensor(req.input_path)
    s = spectral(transfer_matrix(tensor))
    fp = rg_fixed_point(tensor)
    rows = []
    for b in fp.blocks:
        for it, (lam2, d_eff) in enumerate(b.history):
            rows.append(
                {"block": b.label, "iteration": it, "lambda2": lam2, "phys_dim": d_eff}
            )
    xi = correlation_length(s)
    report = {
        "input": req.input_path,
        "multi_block": bool(s.multi_block),
        "correlation_length": "multi-block" if s.multi_block else xi,
        "blocking": fp.canonical.blocking,
        "trace": rows,
        "fixed_point": [
            {
                "label": b.label,
                "iterations": b.iterations,
                "final_lambda2": b.final_lambda2,
                "schmidt_weights": list(map(float, b.schmidt_weights)),
            }
            for b in fp.blocks
        ],
    }
    _emit(req, report, rows=rows)
    return _EXIT_OK


def cmd_stab(req: AnalysisRequest) -> int:
    with open(req.input_path, encoding="utf-8") as f:
        raw = f.read()
    try:
        obj = json.loads(raw)
        tableau = StabilizerTableau.from_text(obj["tableau"])
        region_a = obj.get("region_a")
        region_b = obj.get("region_b")
    except json.JSONDecodeError:
        tableau = StabilizerTableau.from_text(raw)
        region_a = region_b = None
    canon = tableau.canonicalize()
    report = {
        "input": req.input_path,
        "n": tableau.n,
        "canonical": canon.to_text().split("\n"),
    }
    if region_a is not None:
        report["region_a"] = sorted(region_a)
        report["entropy_a"] = tableau.entropy(region_a)
        if region_b is not None:
            report["region_b"] = sorted(region_b)
            report["entropy_b"] = tableau.entropy(region_b)
            report["mutual_information"] = tableau.mutual_information(
                region_a, region_b
            )
    _emit(req, report)
    return _EXIT_OK


def cmd_ghz(req: AnalysisRequest) -> int:
    with open(req.input_path, encoding="utf-8") as f:
        weight = ExactWeight.from_json(json.load(f))
    label = ghz_classify(weight)
    report = {"input": req.input_path, "alpha_sq": weight.value(), "label": label}
    _emit(req, report)
    return _EXIT_OK if label == "LRN" else _EXIT_INCONCLUSIVE


def cmd_typicality(req: AnalysisRequest) -> int:
    rows = []
    for n in range(req.n_min, req.n_max + 1):
        val = typicality_log_ratio(n)
        rows.append({"n": n, "log_ratio": val, "reachable": val > 0})
    report = {"sweep": rows, "n_min": req.n_min, "n_max": req.n_max}
    _emit(req, report, rows=rows)
    return _EXIT_OK


# --- verify pipeline ---------------------------------------------------------


def _verify_clifford_quantization(seed: int, trials: int) -> dict:
    rng = np.random.default_rng(seed)
    worst = 0.0
    for t in range(trials):
        n = int(rng.integers(3, 9))
        circ = random_clifford_circuit(n, int(rng.integers(2, 13)), int(rng.integers(2**31)))
        tab = StabilizerTableau.zero_state(n).apply_circuit(circ)
        amps = np.zeros(2**n, dtype=complex)
        amps[0] = 1.0
        psi = DenseState(n, 2, amps)
        for g, targets in circ:
            psi = apply_local_gate(psi, _CLIFFORD_DENSE[g], targets)
        qubits = list(rng.permutation(n))
        cut = max(1, n // 3)
        a, b = qubits[:cut], qubits[cut : 2 * cut]
        mi_tab = tab.mutual_information(a, b)
        mi_dense = (
            subsystem_entropy(psi, a)
            + subsystem_entropy(psi, b)
            - subsystem_entropy(psi, a + b)
        )
        dev = abs(mi_tab - mi_dense)
        worst = max(worst, dev)
        if dev > 1e-9 or mi_tab != round(mi_tab):
            return {
                "suite": "clifford_quantization",
                "passed": False,
                "trial": t,
                "replay": {"n": n, "seed": seed, "regions": [a, b]},
            }
    return {"suite": "clifford_quantization", "passed": True, "trials": trials,
            "worst_deviation": worst}


def _verify_invariance(seed: int, seeds_per_fixture: int, jobs: int, depth: int) -> dict:
    n = 8 * depth + 8  # smallest ring hosting four regions of 2*depth + 2
    fixtures = [("ghz_half", families.ghz_tensor())]
    if depth == 1:
        fixtures.append(("phase_loop_pi3", families.phase_loop_tensor(math.pi / 3)))
    cases = []
    for name, tensor in fixtures:
        fp = rg_fixed_point(tensor)
        for k in range(seeds_per_fixture):
            cases.append((name, fp, seed + k))

    def run(case):
        name, fp, s = case
        rep = fixed_point_invariance_experiment(fp, n, depth, s)
        return name, s, rep

    results = []
    with ThreadPoolExecutor(max_workers=jobs) as pool:
        for name, s, rep in pool.map(run, cases):
            results.append({"fixture": name, "seed": s, **rep.to_json()})
    if depth == 1:
        t_star = families.counterexample_t_star()
        probs = families.counterexample_probs(t_star)
        state = families.dense_pattern_state(
            ["00", "01", "10", "11"], np.sqrt(probs), n
        )
        for k in range(seeds_per_fixture):
            part = build_partition(n, depth)
            circ = random_brickwork(n, depth, seed + k)
            rep = invariance_experiment(state, probs, part, circ, seed=seed + k)
            results.append(
                {"fixture": "four_component", "seed": seed + k, **rep.to_json()}
            )
    passed = all(r["passed"] for r in results)
    out = {"suite": "invariance", "passed": passed, "depth": depth, "cases": results}
    if not passed:
        out["replay"] = next(r for r in results if not r["passed"])
    return out


def _verify_causal_cone(seed: int, trials: int) -> dict:
    state = families.dense_pattern_state(["0", "1"], [math.sqrt(0.3), math.sqrt(0.7)], 16)
    worst = 0.0
    for k in range(trials):
        circ = random_brickwork(16, 1, seed + k)
        part = build_partition(16, 1)
        red = causal_cone_reduce(circ, part)
        sigma = apply_reduction(red, state)
        rho_ab = reduced_density(apply_brickwork(state, circ), part.a + part.b)
        u = np.kron(red.u_a, red.u_b)
        err = float(np.linalg.norm(sigma - u @ rho_ab @ u.conj().T))
        cptp = max((c.cptp_defect() for c in red.channel_list()), default=0.0)
        worst = max(worst, err, cptp)
        if err > 1e-10 or cptp > 1e-12:
            return {"suite": "causal_cone", "passed": False,
                    "replay": {"seed": seed + k}}
    return {"suite": "causal_cone", "passed": True, "trials": trials, "worst": worst}


def _verify_flatness(seed: int, trials: int) -> dict:
    rng = np.random.default_rng(seed)
    for t in range(trials):
        n = int(rng.integers(4, 9))
        circ = random_clifford_circuit(n, 8, int(rng.integers(2**31)))
        tab = StabilizerTableau.zero_state(n).apply_circuit(circ)
        psi = DenseState(n, 2, tab.dense_state())
        qubits = list(rng.permutation(n))
        a, b = sorted(qubits[:2]), sorted(qubits[2:4])
        rho = reduced_density(psi, tuple(a) + tuple(b))
        if not flatness_check(rho, 4):
            return {"suite": "flatness", "passed": False,
                    "replay": {"seed": seed, "trial": t, "n": n}}
    t_star = families.counterexample_t_star()
    probs = families.counterexample_probs(t_star)
    state = families.dense_pattern_state(["00", "01", "10", "11"], np.sqrt(probs), 12)
    rho = reduced_density(state, (0, 1, 2, 3, 6, 7, 8, 9))
    if flatness_check(rho, 16):
        return {"suite": "flatness", "passed": False,
                "replay": {"case": "four_component_should_fail"}}
    return {"suite": "flatness", "passed": True, "trials": trials}


def cmd_verify(req: AnalysisRequest) -> int:
    """Run the runtime invariant suites; sizes scale with the N window."""
    trials = max(4, req.n_max - req.n_min + 1)
    suites = [
        _verify_clifford_quantization(req.seed, trials * 4),
        _verify_invariance(req.seed, max(2, trials // 4), req.jobs, req.depth),
        _verify_flatness(req.seed, trials),
    ]
    if req.depth == 1:
        suites.append(_verify_causal_cone(req.seed, trials))
    else:
        # The dense channel comparison is desk-capped at depth 1; deeper
        # circuits are exercised through the invariance suite only.
        suites.append({"suite": "causal_cone", "passed": True,
                       "skipped": f"dense comparison capped at depth 1 (got {req.depth})"})
    passed = all(s["passed"] for s in suites)
    report = {"passed": passed, "suites": suites, "seed": req.seed, "depth": req.depth}
    _emit(req, report)
    return _EXIT_OK if passed else _EXIT_ERROR


_COMMANDS = {
    "analyze": cmd_analyze,
    "rg": cmd_rg,
    "verify": cmd_verify,
    "stab": cmd_stab,
    "ghz": cmd_ghz,
    "typicality": cmd_typicality,
}


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="lrn-detect",
        description="Detect long-range nonstabilizerness of TI MPS families.",
    )
    p.add_argument("--pipeline", required=True, choices=PIPELINES)
    p.add_argument("--input", help="tensor / weight / tableau input file")
    p.add_argument("--out", help="write the report here instead of stdout")
    p.add_argument("--format", default="json", choices=("json", "csv"))
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--jobs", type=int, default=1)
    p.add_argument("--n-min", type=int, default=20)
    p.add_argument("--n-max", type=int, default=40)
    p.add_argument("--depth", type=int, default=1)
    p.add_argument("--tol-int", type=float, default=1e-6)
    p.add_argument("--qmax", type=int, default=10**6)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        req = AnalysisRequest(
            pipeline=args.pipeline,
            input_path=args.input,
            out=args.out,
            fmt=args.format,
            seed=args.seed,
            jobs=args.jobs,
            n_min=args.n_min,
            n_max=args.n_max,
            depth=args.depth,
            tol_int=args.tol_int,
            q_max=args.qmax,
        )
        return _COMMANDS[req.pipeline](req)
    except (LrnDetectError, OSError, json.JSONDecodeError, KeyError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return _EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
