"""Priori probabilities of the relay sign-agreement events.

Decode-and-forward regenerates the symbol pair at the relays, so whether the
two forwarded symbols agree in sign is no longer a fair coin: it depends on
the source-side power split and on how often each relay errs.  The agreement
event occurs when both relays are right or both are wrong about their own
symbols, and its probability drifts from the error-free value toward one
half as errors accumulate or vanish asymmetrically.
"""

from __future__ import annotations

from dataclasses import dataclass

__all__ = [
    "PrioriProbs",
    "combine_relay_error_probs",
    "estimate_priori_empirical",
    "priori_second_phase",
]


@dataclass(frozen=True)
class PrioriProbs:
    """Sign-agreement probabilities before and after the relay hop."""

    p_a_1st: float
    p_a_2nd: float

    def __post_init__(self):
        for name, value in (("p_a_1st", self.p_a_1st), ("p_a_2nd", self.p_a_2nd)):
            if not (isinstance(value, (int, float)) and 0.0 <= value <= 1.0):
                raise ValueError(f"{name} must be a probability in [0, 1], got {value!r}")

    @property
    def p_b_1st(self) -> float:
        return 1.0 - self.p_a_1st

    @property
    def p_b_2nd(self) -> float:
        return 1.0 - self.p_a_2nd

    @classmethod
    def equiprobable(cls) -> "PrioriProbs":
        """Forced fair-coin events, useful as a what-if baseline."""
        return cls(p_a_1st=0.5, p_a_2nd=0.5)


def combine_relay_error_probs(
    err_x1_given_a: float,
    err_x1_given_b: float,
    err_x2_given_a: float,
    err_x2_given_b: float,
    p_a_1st: float = 0.5,
) -> float:
    """Forwarded sign-agreement probability from per-event relay BEPs.

    Conditioned on the source symbols agreeing, the forwarded pair agrees when
    both relays are correct or both err; conditioned on disagreement, when
    exactly one errs.  The relay decisions are conditionally independent given
    the source event because they ride disjoint channels and noises.
    """
    for name, value in (
        ("err_x1_given_a", err_x1_given_a),
        ("err_x1_given_b", err_x1_given_b),
        ("err_x2_given_a", err_x2_given_a),
        ("err_x2_given_b", err_x2_given_b),
        ("p_a_1st", p_a_1st),
    ):
        if not 0.0 <= value <= 1.0:
            raise ValueError(f"{name} must lie in [0, 1], got {value!r}")
    agree_given_a = (1.0 - err_x1_given_a) * (1.0 - err_x2_given_a) + (
        err_x1_given_a * err_x2_given_a
    )
    agree_given_b = err_x1_given_b * (1.0 - err_x2_given_b) + (
        (1.0 - err_x1_given_b) * err_x2_given_b
    )
    return p_a_1st * agree_given_a + (1.0 - p_a_1st) * agree_given_b


def priori_second_phase(scenario, snr_db: float, p_a_1st: float = 0.5) -> PrioriProbs:
    """Analytic sign-agreement priori of the forwarded symbol pair."""
    from .analytic import first_phase_abep

    ph1 = first_phase_abep(scenario, snr_db)
    p_a_2nd = combine_relay_error_probs(
        ph1.x1_event_a, ph1.x1_event_b, ph1.x2_event_a, ph1.x2_event_b, p_a_1st
    )
    return PrioriProbs(p_a_1st=p_a_1st, p_a_2nd=p_a_2nd)


def estimate_priori_empirical(source) -> PrioriProbs:
    """Empirical priori from simulation output.

    Accepts a :class:`~noma_drn.simlink.SimReport` (uses its event counters)
    or a :class:`~noma_drn.simlink.TrialBatch` (recounts the decisions).
    Refuses zero-trial input, where the fractions are undefined.
    """
    trials = getattr(source, "trials", None)
    if trials is None:
        trials = len(source.x1)
        if trials == 0:
            raise ValueError("cannot estimate priori from zero trials")
        agree_1st = int((source.x1 == source.x2).sum())
        agree_2nd = int((source.x1_r1 == source.x2_r2).sum())
    else:
        if trials == 0:
            raise ValueError("cannot estimate priori from zero trials")
        agree_1st = source.event_a_1st
        agree_2nd = source.event_a_2nd
    return PrioriProbs(p_a_1st=agree_1st / trials, p_a_2nd=agree_2nd / trials)
