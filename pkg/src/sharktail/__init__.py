"""sharktail: certified periodic-orbit forcing for randomly perturbed interval maps.

Exact enumeration of tent-family periodic orbits, truncated-tent
critical heights sweeping out the Sharkovskii tails, quantified
isolating neighborhoods with closed-form Conley index matrices, and
seeded random cocycles whose random periodic points, orbits and
(delta, k)-orbits are constructed by pullback and verified over finite
windows, with self-contained JSON certificates throughout.
"""

from .cycles import (Cycle, HeightTable, Hyperbolicity, classify_hyperbolicity,
                     critical_height, enumerate_tent_cycles,
                     enumerate_truncated_cycles, height_successor,
                     logistic_cycles, minimal_periods, plateau_orbit,
                     realization_height)
from .conley import (BlockVerdict, ConleyIndexData, IsolatingNeighborhood,
                     RobustnessBudget, build_neighborhood, certify_tail,
                     conley_index, epsilon_budget, index_nontrivial,
                     verify_isolating_block)
from .certify import (Certificate, RealizationResult, emit_fibre_csv,
                      emit_trajectory_csv, run_realization, select_tail_cycles)
from .maps import asymmetric_tent, logistic_handle, tent_map, truncated_tent
from .numbers import (AffineBranch, DifferentiableMapHandle, Interval,
                      PiecewiseAffineMap, rational_from_str, rational_to_str)
from .random_cocycle import (DeltaKVerdict, NoiseModel, PeriodVerdict,
                             RandomPeriodicEstimate, TrajectoryRecord,
                             asymmetric_tent_noise, check_R1_membership,
                             cocycle_apply, cocycle_iterate,
                             detect_delta_k_orbit, deterministic_noise,
                             logistic_noise, max_admissible_halfwidth,
                             minimal_period_check, orbit_set,
                             pullback_periodic_point, sample_map,
                             verify_random_isolating_tent)
from .sharkovskii import (FiniteTail, SharkKey, is_finite_tail, shark_less,
                          shark_predecessor, shark_sort_key, shark_successor,
                          tail)

__version__ = "0.1.0"

__all__ = [
    "AffineBranch", "BlockVerdict", "Certificate", "ConleyIndexData", "Cycle",
    "DeltaKVerdict", "DifferentiableMapHandle", "FiniteTail", "HeightTable",
    "Hyperbolicity", "Interval", "IsolatingNeighborhood", "NoiseModel",
    "PeriodVerdict", "PiecewiseAffineMap", "RandomPeriodicEstimate",
    "RealizationResult", "RobustnessBudget", "SharkKey", "TrajectoryRecord",
    "asymmetric_tent", "asymmetric_tent_noise", "build_neighborhood",
    "certify_tail", "check_R1_membership", "classify_hyperbolicity",
    "cocycle_apply", "cocycle_iterate", "conley_index", "critical_height",
    "detect_delta_k_orbit", "deterministic_noise", "emit_fibre_csv",
    "emit_trajectory_csv", "enumerate_tent_cycles", "enumerate_truncated_cycles",
    "epsilon_budget", "height_successor", "index_nontrivial", "is_finite_tail",
    "logistic_cycles", "logistic_handle", "logistic_noise",
    "max_admissible_halfwidth", "minimal_period_check", "minimal_periods",
    "orbit_set", "plateau_orbit", "pullback_periodic_point",
    "rational_from_str", "rational_to_str", "realization_height",
    "run_realization", "sample_map", "select_tail_cycles", "shark_less",
    "shark_predecessor", "shark_sort_key", "shark_successor", "tail",
    "tent_map", "truncated_tent", "verify_isolating_block",
    "verify_random_isolating_tent",
]
