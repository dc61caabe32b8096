"""Error-probability toolkit and link simulator for a two-relay NOMA network.

Two sources' symbols are superposed in the power domain, broadcast to a pair
of decode-and-forward relays (no direct source-destination link), and the
relay decisions return to the destination as a second, uplink superposition.
The package provides the exact and approximate bit-error probabilities of
both hops, the non-equiprobable sign-agreement priori created by relay
errors, the high-SNR error floors, a deterministic Monte Carlo simulator of
the full chain, and CSV/PNG experiment reports tying them together.
"""

__version__ = "0.1.0"

from .analytic import (
    BepBreakdown,
    ErrorFloor,
    PhaseAbep,
    SecondPhaseTerms,
    abep_x1_dest_approx,
    abep_x1_dest_exact,
    abep_x1_relay1,
    abep_x2_dest_approx,
    abep_x2_dest_exact,
    abep_x2_relay2,
    combine_second_phase,
    e2e_abep,
    error_floor,
    first_phase_abep,
    q_function,
    rayleigh_avg_q,
    second_phase_abep_approx,
    second_phase_abep_exact,
    second_phase_pairs,
    second_phase_terms,
    two_hop_error,
)
from .experiments import (
    EXPERIMENT_KINDS,
    ExperimentError,
    ExperimentSpec,
    ExperimentSpecError,
    parse_snr_grid,
    run_floors,
    run_pa_grid,
    run_phase2_study,
    run_snr_sweep,
    run_table1,
)
from .model import (
    DistanceModel,
    EnergyLevels,
    ScenarioConfig,
    ScenarioValidationError,
    bundled_scenario,
    bundled_scenario_names,
    energy_levels,
    load_scenario,
    snr_db_to_linear,
    validate_scenario,
)
from .priori import (
    PrioriProbs,
    combine_relay_error_probs,
    estimate_priori_empirical,
    priori_second_phase,
)
from .rayleigh import (
    QuadratureError,
    RayleighPair,
    expect_q_over_diff,
    expect_q_over_diff_approx,
    expect_q_over_sum,
    pdf_diff,
    pdf_sum,
    sample_diff,
    sample_sum,
)
from .simlink import (
    BATCH_SIZE,
    SimConfig,
    SimReport,
    TrialBatch,
    run_trial,
    run_trials,
    simulate,
)
