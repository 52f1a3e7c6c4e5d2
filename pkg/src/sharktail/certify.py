"""Self-contained JSON certificates and the end-to-end realization pipeline.

A certificate packages one verified claim: the subject, a payload of
numbers (rationals as "p/q" strings so nothing is lost to rounding),
the inequality transcript that was actually checked, and the provenance
needed to reproduce the run bit for bit.  Certificates carry no
timestamps or paths; rerunning the provenance must reproduce the JSON
byte-for-byte.

The realization pipeline stitches the stages together for a prescribed
head period: realization height, cycle selection (one hyperbolic
interior cycle per tracked period), neighborhood + index + budget
certification, noise clamped into the admissible class, and per-seed
minimal-period and fibre-geometry verdicts, with an optional unclamped
negative control expected to break.
"""

from __future__ import annotations

import csv
import json
import math
from dataclasses import dataclass, field
from fractions import Fraction
from importlib import metadata

from .conley import (IsolatingNeighborhood, RobustnessBudget, certify_tail,
                     conley_index, index_nontrivial, verify_isolating_block)
from .cycles import (Cycle, enumerate_truncated_cycles, realization_details,
                     realization_height)
from .errors import ConditionFailed, ItineraryBroken, SharktailError
from .maps import truncated_tent
from .numbers import Interval
from .random_cocycle import (NoiseModel, asymmetric_tent_noise,
                             check_R1_membership, cocycle_iterate,
                             detect_delta_k_orbit, max_admissible_halfwidth,
                             minimal_period_check, pullback_periodic_point)
from .sharkovskii import tail

SCHEMA_VERSION = "1"
DEFAULT_WINDOW = 300
DEFAULT_PULLBACK_GUARD = 40
NEGATIVE_CONTROL_FACTOR = 10


def tool_version() -> str:
    try:
        return metadata.version("sharktail")
    except metadata.PackageNotFoundError:
        return "0.0.0"


def to_jsonable(obj):
    """Recursively convert package values to JSON-safe structures."""
    if isinstance(obj, Fraction):
        return f"{obj.numerator}/{obj.denominator}"
    if isinstance(obj, Interval):
        return [to_jsonable(obj.lo), to_jsonable(obj.hi)]
    if isinstance(obj, Cycle):
        return {"points": [to_jsonable(p) for p in obj.points],
                "minimal_period": obj.minimal_period,
                "itinerary": obj.itinerary,
                "multiplier": to_jsonable(obj.multiplier),
                "branch_signs": list(obj.branch_signs)}
    if isinstance(obj, dict):
        return {str(k): to_jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [to_jsonable(v) for v in obj]
    if isinstance(obj, float):
        return obj
    if hasattr(obj, "value") and obj.__class__.__name__ == "Hyperbolicity":
        return obj.value
    if obj is None or isinstance(obj, (bool, int, str)):
        return obj
    return str(obj)


@dataclass(frozen=True)
class Certificate:
    subject: str
    payload: dict
    inequality_transcript: tuple = ()
    provenance: dict = field(default_factory=dict)
    schema_version: str = SCHEMA_VERSION

    def to_dict(self) -> dict:
        return {
            "schema_version": self.schema_version,
            "subject": self.subject,
            "payload": to_jsonable(self.payload),
            "inequality_transcript": to_jsonable(list(self.inequality_transcript)),
            "provenance": to_jsonable(self.provenance),
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True, indent=2) + "\n"

    @property
    def all_verdicts_true(self) -> bool:
        return all(line.get("verdict", False)
                   for line in self.to_dict()["inequality_transcript"])


def select_tail_cycles(height: Fraction, bound: int) -> dict[int, Cycle]:
    """One hyperbolic interior cycle per minimal period of the truncated map.

    Among the smooth cycles of each period, picks the one with the
    smallest orbit maximum (deepest inside the surviving region); the
    boundary fixed point 0 is never eligible.
    """
    chosen: dict[int, Cycle] = {}
    for c in enumerate_truncated_cycles(height, bound):
        if c.minimal_period == 1 and c.points[0] == 0:
            continue
        k = c.minimal_period
        if k not in chosen or c.max_point() < chosen[k].max_point():
            chosen[k] = c
    return chosen


def conley_certificate(mp, cycle: Cycle, nbhd: IsolatingNeighborhood,
                       budget: RobustnessBudget, map_desc: dict) -> Certificate:
    """The per-cycle certificate: neighborhood, margins, budget, index."""
    idx = conley_index(mp, cycle, nbhd)
    block = verify_isolating_block(mp, list(nbhd.components))
    transcript = list(budget.transcript) + [
        {"expression": "isolating block check f(N) & N & f^-1(N) in int N",
         "lhs": block.status, "rhs": "true", "verdict": block.status == "true"},
        {"expression": "index matrix invertible", "lhs": index_nontrivial(idx),
         "rhs": True, "verdict": index_nontrivial(idx)},
    ]
    payload = {
        "cycle": cycle,
        "neighborhoods": [c for c in nbhd.components],
        "beta": nbhd.beta,
        "eta": nbhd.eta,
        "epsilon": budget.epsilon,
        "delta": budget.delta,
        "index": {"degree": idx.degree, "matrix": [list(r) for r in idx.matrix]},
        "kind": nbhd.kind.value,
    }
    return Certificate("Neighborhood", payload, tuple(transcript),
                       {"map": map_desc, "tool_version": tool_version()})


@dataclass(frozen=True)
class RealizationResult:
    certificate: Certificate
    passed: bool
    failures: tuple


def _seed_run(noise: NoiseModel, k: int, nbhd: IsolatingNeighborhood,
              delta, window: int, guard: int) -> dict:
    """Pullback + verdicts for one (seed, period); failures become records."""
    m_steps = max(2, math.ceil((window + guard) / k))
    out = {"period": k, "seed": noise.seed, "pullback_steps": m_steps}
    try:
        est = pullback_periodic_point(noise, k, nbhd, m_steps)
    except ItineraryBroken as exc:
        out.update(status="fail", reason="ItineraryBroken",
                   detail={"step": exc.step, "component": exc.component})
        return out
    out["estimate"] = float(est.value)
    out["error_bound"] = float(est.error_bound)
    period_verdict = minimal_period_check(noise, est.value, k, nbhd, window)
    fibre_verdict = detect_delta_k_orbit(noise, est.value, k, delta, window)
    out["minimal_period_pass"] = period_verdict.passed
    out["delta_k_pass"] = fibre_verdict.passed
    out["max_fibre_diameter"] = float(fibre_verdict.max_diameter)
    if fibre_verdict.min_separation is not None:
        out["min_fibre_separation"] = float(fibre_verdict.min_separation)
    if period_verdict.passed and fibre_verdict.passed:
        out["status"] = "pass"
    else:
        out["status"] = "fail"
        out["reason"] = (fibre_verdict.violation or
                         f"itinerary witness {period_verdict.witness}")
    return out


def run_realization(tail_head: int, bound: int, xi, seeds,
                    window: int = DEFAULT_WINDOW,
                    pullback_guard: int = DEFAULT_PULLBACK_GUARD,
                    periodic_test_bound: int = 20,
                    clamp: bool = True,
                    negative_control: bool = False) -> RealizationResult:
    """Certify the realization of the finite tail of `tail_head` at desk scale.

    Runs the full pipeline against the truncated tent at the realization
    height: for every period in the truncated tail a certified
    neighborhood, index and budget, then per-seed pullback, minimal
    period and fibre-geometry verdicts under peak-displacement noise of
    halfwidth xi (clamped into the admissible class unless clamp=False).
    With negative_control=True an extra unclamped run at ten times the
    admissible halfwidth is recorded; it is expected to break.
    """
    if not 2 <= tail_head <= 8:
        raise ValueError("desk-scale realization supports head periods 2..8")
    if bound > 12:
        raise ValueError("tracked period bound capped at 12")
    seeds = list(seeds)
    details = realization_details(tail_head, periodic_test_bound)
    height = details["height"]
    base = truncated_tent(height)
    tracked = sorted(tail(tail_head, bound))
    chosen = select_tail_cycles(height, bound)
    if sorted(chosen) != tracked:
        raise SharktailError(
            f"period pattern mismatch: found {sorted(chosen)}, tail is {tracked}")
    nbhds, budget = certify_tail(base, chosen)
    indices = {k: conley_index(base, chosen[k], nbhds[k]) for k in tracked}
    all_components = [c for k in tracked for c in nbhds[k].components]
    xi_admissible = max_admissible_halfwidth(height, all_components, budget.epsilon)
    xi_requested = Fraction(xi)
    xi_used = min(xi_requested, xi_admissible) if clamp else xi_requested

    transcript = list(budget.transcript)
    membership_ok = True
    try:
        r1 = check_R1_membership(
            asymmetric_tent_noise(xi_used, seed=0, height=height),
            base, all_components, budget.epsilon)
        transcript.extend(r1.transcript)
    except ConditionFailed as exc:
        membership_ok = False
        transcript.append({"expression": f"R1 membership condition {exc.condition}",
                           "lhs": "violated", "rhs": "holds", "verdict": False})

    runs = []
    for seed in seeds:
        for k in tracked:
            noise = asymmetric_tent_noise(xi_used, seed=seed, height=height)
            runs.append(_seed_run(noise, k, nbhds[k], budget.delta,
                                  window, pullback_guard))
    failures = tuple(r for r in runs if r["status"] != "pass")

    control_runs = []
    if negative_control:
        xi_control = xi_admissible * NEGATIVE_CONTROL_FACTOR
        for seed in seeds:
            for k in tracked:
                noise = asymmetric_tent_noise(xi_control, seed=seed, height=height)
                rec = _seed_run(noise, k, nbhds[k], budget.delta, window,
                                pullback_guard)
                rec["control_xi"] = xi_control
                control_runs.append(rec)

    payload = {
        "head_period": tail_head,
        "tracked_periods": tracked,
        "height": height,
        "height_details": details,
        "cycles": {k: chosen[k] for k in tracked},
        "neighborhoods": {k: list(nbhds[k].components) for k in tracked},
        "margins": {k: {"beta": nbhds[k].beta, "eta": nbhds[k].eta}
                    for k in tracked},
        "indices": {k: {"degree": indices[k].degree,
                        "matrix": [list(r) for r in indices[k].matrix]}
                    for k in tracked},
        "budget": {"epsilon": budget.epsilon,
                   "chain_rule_constant": budget.chain_rule_constant,
                   "delta": budget.delta},
        "xi": {"requested": xi_requested, "admissible": xi_admissible,
               "used": xi_used, "clamped": clamp},
        "membership_ok": membership_ok,
        "runs": runs,
    }
    if control_runs:
        payload["negative_control"] = {
            "factor": NEGATIVE_CONTROL_FACTOR,
            "runs": control_runs,
            "any_failure": any(r["status"] != "pass" for r in control_runs),
        }
    provenance = {
        "tail_head": tail_head, "bound": bound, "xi": str(xi_requested),
        "seeds": seeds, "window": window, "pullback_guard": pullback_guard,
        "periodic_test_bound": periodic_test_bound, "clamp": clamp,
        "negative_control": negative_control,
        "map": {"family": "truncated_tent", "height": str(height)},
        "tool_version": tool_version(),
    }
    cert = Certificate("TailRealization", payload, tuple(transcript), provenance)
    passed = membership_ok and not failures
    return RealizationResult(cert, passed, failures)


# ---------------------------------------------------------------------------
# CSV emission
# ---------------------------------------------------------------------------

def _csv_value(x) -> str:
    if isinstance(x, Fraction):
        return f"{x.numerator}/{x.denominator}"
    return repr(x) if isinstance(x, float) else str(x)


def emit_trajectory_csv(records, path) -> str:
    """Write (index, state, fibre) rows; rationals as p/q strings."""
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["index", "state", "fibre"])
        for rec in records:
            writer.writerow([rec.base_index, _csv_value(rec.state),
                             "" if rec.fibre_label is None else rec.fibre_label])
    return str(path)


def emit_fibre_csv(records, k: int, directory, prefix: str = "fibre") -> list[str]:
    """One file per fibre with a running-diameter column."""
    import os
    paths = []
    by_label: dict[int, list] = {lab: [] for lab in range(k)}
    for rec in records:
        by_label[rec.base_index % k].append(rec)
    for lab in range(k):
        path = os.path.join(str(directory), f"{prefix}_{lab}.csv")
        with open(path, "w", newline="") as fh:
            writer = csv.writer(fh)
            writer.writerow(["sample", "index", "state", "diameter"])
            lo = hi = None
            for sample, rec in enumerate(by_label[lab]):
                lo = rec.state if lo is None else min(lo, rec.state)
                hi = rec.state if hi is None else max(hi, rec.state)
                writer.writerow([sample, rec.base_index, _csv_value(rec.state),
                                 _csv_value(hi - lo)])
        paths.append(path)
    return paths
