"""Closed-form and quadrature bit-error probabilities for both hops.

First (broadcast) hop: each relay detects its own symbol from the NOMA
superposition over a Rayleigh channel, relay 2 running successive
interference cancellation.  Averaging the conditional Gaussian tails over the
exponential channel gain gives closed forms built from one radical kernel,
:func:`rayleigh_avg_q`.

Second (uplink) hop: the destination sees the coherently aligned sum of the
two relay amplitudes, so the conditional bit-error probabilities are Gaussian
tails of sum/difference Rayleigh variables; their exact averages come from
:mod:`noma_drn.rayleigh` quadrature and their high-SNR limits collapse to
amplitude-ratio floors.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import TYPE_CHECKING

import numpy as np
from scipy.special import erfc

from .model import ScenarioConfig, energy_levels
from .rayleigh import (
    RayleighPair,
    expect_q_over_diff,
    expect_q_over_diff_approx,
    expect_q_over_sum,
)

if TYPE_CHECKING:  # avoids a runtime cycle: priori builds on the first-phase forms
    from .priori import PrioriProbs

__all__ = [
    "BepBreakdown",
    "ErrorFloor",
    "PhaseAbep",
    "SecondPhaseTerms",
    "abep_x1_dest_approx",
    "abep_x1_dest_exact",
    "abep_x1_relay1",
    "abep_x2_dest_approx",
    "abep_x2_dest_exact",
    "abep_x2_relay2",
    "combine_second_phase",
    "e2e_abep",
    "error_floor",
    "first_phase_abep",
    "q_function",
    "rayleigh_avg_q",
    "second_phase_abep_approx",
    "second_phase_abep_exact",
    "second_phase_pairs",
    "second_phase_terms",
    "two_hop_error",
]

_SQRT2 = math.sqrt(2.0)
E2E_METHODS = ("exact-quadrature", "closed-approx", "floor")


def q_function(x):
    """Gaussian tail probability Q(x) = P(N(0,1) > x).

    Evaluated through erfc, so negative arguments return 1 - Q(|x|) exactly
    and large arguments underflow gracefully instead of being clamped.
    Accepts scalars or arrays.
    """
    return 0.5 * erfc(np.asarray(x, dtype=float) / _SQRT2)


def rayleigh_avg_q(eps: float, sigma2: float, n0: float) -> float:
    """Average of Q(sqrt(2 * eps * g)) over the exponential channel gain g.

    ``g = |h|^2 / n0`` with ``E[|h|^2] = sigma2``, giving the radical kernel
    ``0.5 * (1 - sqrt(x / (1 + x)))`` at ``x = eps * sigma2 / n0``.  Computed
    as ``0.5 / ((1 + x) * (1 + sqrt(x / (1 + x))))`` which is the same
    expression with the high-SNR cancellation removed.
    """
    if not (isinstance(eps, (int, float)) and math.isfinite(eps) and eps >= 0.0):
        raise ValueError(f"eps must be non-negative and finite, got {eps!r}")
    if sigma2 <= 0.0 or n0 <= 0.0:
        raise ValueError(f"sigma2 and n0 must be positive, got {sigma2!r}, {n0!r}")
    x = eps * sigma2 / n0
    return 0.5 / ((1.0 + x) * (1.0 + math.sqrt(x / (1.0 + x))))


@dataclass(frozen=True)
class PhaseAbep:
    """Average bit-error probabilities of one hop, with their anatomy.

    ``x1_event_*``/``x2_event_*`` condition on the symbol pair having equal
    (event a) or opposite (event b) signs at the hop input;
    ``x2_sic_correct``/``x2_sic_erroneous`` split the weak-symbol error by
    whether the cancellation stage removed the right strong symbol.  By
    construction ``p_x2 == x2_sic_correct + x2_sic_erroneous``.
    """

    p_x1: float
    p_x2: float
    x1_event_a: float
    x1_event_b: float
    x2_event_a: float
    x2_event_b: float
    x2_sic_correct: float
    x2_sic_erroneous: float


@dataclass(frozen=True)
class BepBreakdown:
    """Per-hop and end-to-end error probabilities for one operating point."""

    p1_sr1: float
    p2_sr2: float
    p1_r1d: float
    p2_r2d: float
    p1_e2e: float
    p2_e2e: float
    p_e2e: float
    method: str


@dataclass(frozen=True)
class ErrorFloor:
    """High-SNR limits of the end-to-end error probabilities."""

    floor_x1: float
    floor_x2: float
    floor_e2e: float


def first_phase_abep(scenario: ScenarioConfig, snr_db: float) -> PhaseAbep:
    """Broadcast-hop error probabilities at both relays (equiprobable symbols)."""
    n0 = scenario.n0_at(snr_db)
    lv = energy_levels(scenario.alpha1, scenario.p_s)

    def g1(eps: float) -> float:
        return rayleigh_avg_q(eps, scenario.sigma2_sr1, n0)

    def g2(eps: float) -> float:
        return rayleigh_avg_q(eps, scenario.sigma2_sr2, n0)

    x1_a = g1(lv.eps_a)
    x1_b = g1(lv.eps_b)
    # Relay 2 detects the strong symbol, cancels it, then detects its own.
    x2_a = g2(lv.eps_c) - g2(lv.eps_a) + g2(lv.eps_d)
    x2_b = g2(lv.eps_c) + g2(lv.eps_b) - g2(lv.eps_e)
    sic_correct = g2(lv.eps_c) - 0.5 * g2(lv.eps_a)
    sic_erroneous = 0.5 * g2(lv.eps_d) + 0.5 * (g2(lv.eps_b) - g2(lv.eps_e))
    return PhaseAbep(
        p_x1=0.5 * (x1_a + x1_b),
        p_x2=0.5 * (x2_a + x2_b),
        x1_event_a=x1_a,
        x1_event_b=x1_b,
        x2_event_a=x2_a,
        x2_event_b=x2_b,
        x2_sic_correct=sic_correct,
        x2_sic_erroneous=sic_erroneous,
    )


def abep_x1_relay1(scenario: ScenarioConfig, snr_db: float) -> float:
    """Average probability that relay 1 misdetects the strong symbol."""
    return first_phase_abep(scenario, snr_db).p_x1


def abep_x2_relay2(scenario: ScenarioConfig, snr_db: float) -> float:
    """Average probability that relay 2 misdetects the weak symbol after SIC."""
    return first_phase_abep(scenario, snr_db).p_x2


def second_phase_pairs(
    scenario: ScenarioConfig, snr_db: float
) -> tuple[RayleighPair, RayleighPair]:
    """Rayleigh scale pairs of the destination decision distances.

    First pair: aligned relay amplitudes (agree/disagree events).  Second
    pair: the same with the relay-1 amplitude doubled, as seen after a wrong
    cancellation at the destination.  Scales use |h| ~ Rayleigh(sigma/sqrt(2))
    for a tap with E[|h|^2] = sigma^2.
    """
    n0 = scenario.n0_at(snr_db)
    scale_x = math.sqrt(scenario.beta1 * scenario.p_r * scenario.sigma2_r1d / (2.0 * n0))
    scale_y = math.sqrt(scenario.beta2 * scenario.p_r * scenario.sigma2_r2d / (2.0 * n0))
    return RayleighPair(scale_x, scale_y), RayleighPair(2.0 * scale_x, scale_y)


@dataclass(frozen=True)
class SecondPhaseTerms:
    """Averaged Gaussian tails of the five destination decision distances.

    ``q_sum_a``/``q_diff_b`` integrate against the sum/difference densities of
    the aligned amplitudes, ``q_sum_d``/``q_diff_e`` against the pair with the
    relay-1 amplitude doubled, and ``q_c`` is the closed radical kernel of the
    weak amplitude alone.
    """

    q_c: float
    q_sum_a: float
    q_diff_b: float
    q_sum_d: float
    q_diff_e: float


def second_phase_terms(scenario: ScenarioConfig, snr_db: float) -> SecondPhaseTerms:
    """Quadrature building blocks of the uplink-hop error probabilities."""
    n0 = scenario.n0_at(snr_db)
    pair_ab, pair_de = second_phase_pairs(scenario, snr_db)
    return SecondPhaseTerms(
        q_c=rayleigh_avg_q(scenario.beta2 * scenario.p_r, scenario.sigma2_r2d, n0),
        q_sum_a=expect_q_over_sum(pair_ab),
        q_diff_b=expect_q_over_diff(pair_ab),
        q_sum_d=expect_q_over_sum(pair_de),
        q_diff_e=expect_q_over_diff(pair_de),
    )


def combine_second_phase(terms: SecondPhaseTerms, priori: PrioriProbs) -> PhaseAbep:
    """Weight the uplink tail expectations by the relay sign-agreement priori."""
    pa = priori.p_a_2nd
    pb = priori.p_b_2nd
    x1_a = terms.q_sum_a
    x1_b = terms.q_diff_b
    x2_a = terms.q_c - terms.q_sum_a + terms.q_sum_d
    x2_b = terms.q_c + terms.q_diff_b - terms.q_diff_e
    return PhaseAbep(
        p_x1=pa * x1_a + pb * x1_b,
        p_x2=pa * x2_a + pb * x2_b,
        x1_event_a=x1_a,
        x1_event_b=x1_b,
        x2_event_a=x2_a,
        x2_event_b=x2_b,
        x2_sic_correct=terms.q_c - pa * terms.q_sum_a,
        x2_sic_erroneous=pa * terms.q_sum_d + pb * (terms.q_diff_b - terms.q_diff_e),
    )


def second_phase_abep_exact(
    scenario: ScenarioConfig, snr_db: float, priori: PrioriProbs
) -> PhaseAbep:
    """Uplink-hop error probabilities by exact quadrature."""
    return combine_second_phase(second_phase_terms(scenario, snr_db), priori)


def second_phase_abep_approx(
    scenario: ScenarioConfig, snr_db: float, priori: PrioriProbs
) -> PhaseAbep:
    """Closed-form uplink approximation: keep the dominant difference tails.

    The sum-distance tails are dropped and the difference tails replaced by
    their amplitude-ratio limits, which is what the error floors inherit.
    """
    n0 = scenario.n0_at(snr_db)
    pair_ab, pair_de = second_phase_pairs(scenario, snr_db)
    ratio = expect_q_over_diff_approx(pair_ab)
    ratio4 = expect_q_over_diff_approx(pair_de)
    q_c = rayleigh_avg_q(scenario.beta2 * scenario.p_r, scenario.sigma2_r2d, n0)
    pb = priori.p_b_2nd
    return PhaseAbep(
        p_x1=pb * ratio,
        p_x2=q_c + pb * (ratio - ratio4),
        x1_event_a=0.0,
        x1_event_b=ratio,
        x2_event_a=q_c,
        x2_event_b=q_c + ratio - ratio4,
        x2_sic_correct=q_c,
        x2_sic_erroneous=pb * (ratio - ratio4),
    )


def abep_x1_dest_exact(scenario: ScenarioConfig, snr_db: float, priori: PrioriProbs) -> float:
    """Probability that the destination misdetects the strong symbol (exact)."""
    return second_phase_abep_exact(scenario, snr_db, priori).p_x1


def abep_x2_dest_exact(scenario: ScenarioConfig, snr_db: float, priori: PrioriProbs) -> float:
    """Probability that the destination misdetects the weak symbol (exact)."""
    return second_phase_abep_exact(scenario, snr_db, priori).p_x2


def abep_x1_dest_approx(scenario: ScenarioConfig, snr_db: float, priori: PrioriProbs) -> float:
    """Closed-form approximation of :func:`abep_x1_dest_exact`."""
    return second_phase_abep_approx(scenario, snr_db, priori).p_x1


def abep_x2_dest_approx(scenario: ScenarioConfig, snr_db: float, priori: PrioriProbs) -> float:
    """Closed-form approximation of :func:`abep_x2_dest_exact`."""
    return second_phase_abep_approx(scenario, snr_db, priori).p_x2


def two_hop_error(p_first: float, p_second: float) -> float:
    """Error probability after two independent detect-and-forward hops."""
    return p_first * (1.0 - p_second) + (1.0 - p_first) * p_second


def e2e_abep(
    phase1: PhaseAbep, phase2: PhaseAbep, method: str = "exact-quadrature"
) -> BepBreakdown:
    """Compose per-hop error probabilities into end-to-end figures.

    A forwarded bit arrives in error when exactly one of the two hops flips
    it, so the composition is symmetric in its arguments and never exceeds
    the sum of the hop probabilities.
    """
    if method not in E2E_METHODS:
        raise ValueError(f"method must be one of {E2E_METHODS}, got {method!r}")
    for label, value in (
        ("phase1.p_x1", phase1.p_x1),
        ("phase1.p_x2", phase1.p_x2),
        ("phase2.p_x1", phase2.p_x1),
        ("phase2.p_x2", phase2.p_x2),
    ):
        if not 0.0 <= value <= 1.0:
            raise ValueError(f"{label} must lie in [0, 1], got {value!r}")
    p1 = two_hop_error(phase1.p_x1, phase2.p_x1)
    p2 = two_hop_error(phase1.p_x2, phase2.p_x2)
    return BepBreakdown(
        p1_sr1=phase1.p_x1,
        p2_sr2=phase1.p_x2,
        p1_r1d=phase2.p_x1,
        p2_r2d=phase2.p_x2,
        p1_e2e=p1,
        p2_e2e=p2,
        p_e2e=0.5 * (p1 + p2),
        method=method,
    )


def error_floor(scenario: ScenarioConfig) -> ErrorFloor:
    """High-SNR error floors set by the relay power/channel imbalance.

    With equiprobable relay sign events in the limit, the strong symbol
    floors at half the probability that the weak relay amplitude dominates;
    the weak symbol keeps the residual between the ordinary and the
    doubled-amplitude dominance ratios.
    """
    strong = scenario.beta1 * scenario.sigma2_r1d
    weak = scenario.beta2 * scenario.sigma2_r2d
    ratio = weak / (strong + weak)
    ratio4 = weak / (4.0 * strong + weak)
    return ErrorFloor(
        floor_x1=0.5 * ratio,
        floor_x2=0.5 * (ratio - ratio4),
        floor_e2e=0.5 * (ratio - 0.5 * ratio4),
    )
