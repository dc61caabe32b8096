"""Monte Carlo link-level simulator for the two-relay NOMA chain.

Each trial runs the full protocol: the source broadcasts the superposed BPSK
pair over complex Rayleigh channels, relay 1 detects the strong symbol
coherently, relay 2 detects-then-cancels the strong symbol before detecting
its own, and the destination receives the coherently aligned sum of the relay
amplitudes carrying whatever the relays decided, applying the same
detect-cancel-detect chain.  Real in-phase noise at the aligned stage has
variance n0/2, matching the matched-filter statistic of the complex stages.

Trials are generated in fixed-size batches whose substreams are keyed by
(seed, batch index) only, and results are aggregated by integer summation, so
a report is bit-identical for any worker count.
"""

from __future__ import annotations

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass

import numpy as np

from .model import ScenarioConfig

__all__ = ["BATCH_SIZE", "SimConfig", "SimReport", "TrialBatch", "run_trial", "run_trials", "simulate"]

BATCH_SIZE = 1 << 16

_COUNT_FIELDS = (
    "err_x1_sr1",
    "err_x2_sr2",
    "err_x1_r1d",
    "err_x2_r2d",
    "err_x1_e2e",
    "err_x2_e2e",
    "event_a_1st",
    "event_a_2nd",
)


@dataclass(frozen=True)
class SimConfig:
    """One simulation request: scenario, operating SNR and sampling budget."""

    scenario: ScenarioConfig
    snr_db: float
    trials: int
    seed: int = 0
    workers: int = 1

    def __post_init__(self):
        if not (isinstance(self.trials, int) and self.trials >= 1):
            raise ValueError(f"trials must be a positive integer, got {self.trials!r}")
        if not (isinstance(self.workers, int) and self.workers >= 1):
            raise ValueError(f"workers must be a positive integer, got {self.workers!r}")
        if not (isinstance(self.seed, int) and self.seed >= 0):
            raise ValueError(f"seed must be a non-negative integer, got {self.seed!r}")
        if not math.isfinite(self.snr_db):
            raise ValueError(f"snr_db must be finite, got {self.snr_db!r}")


@dataclass(frozen=True)
class TrialBatch:
    """Per-trial source bits and every intermediate decision (values +/-1)."""

    x1: np.ndarray
    x2: np.ndarray
    x1_r1: np.ndarray  # strong symbol as detected by relay 1
    x1_r2: np.ndarray  # strong symbol as detected (then cancelled) by relay 2
    x2_r2: np.ndarray  # weak symbol as detected by relay 2
    x1_d: np.ndarray   # strong symbol as detected by the destination
    x2_d: np.ndarray   # weak symbol as detected by the destination

    def __len__(self) -> int:
        return len(self.x1)


@dataclass(frozen=True)
class SimReport:
    """Aggregated error/event counts of one simulation run."""

    trials: int
    seed: int
    snr_db: float
    err_x1_sr1: int
    err_x2_sr2: int
    err_x1_r1d: int
    err_x2_r2d: int
    err_x1_e2e: int
    err_x2_e2e: int
    event_a_1st: int
    event_a_2nd: int

    # --- rates ---------------------------------------------------------
    @property
    def ber_x1_sr1(self) -> float:
        return self.err_x1_sr1 / self.trials

    @property
    def ber_x2_sr2(self) -> float:
        return self.err_x2_sr2 / self.trials

    @property
    def ber_x1_r1d(self) -> float:
        return self.err_x1_r1d / self.trials

    @property
    def ber_x2_r2d(self) -> float:
        return self.err_x2_r2d / self.trials

    @property
    def ber_x1_e2e(self) -> float:
        return self.err_x1_e2e / self.trials

    @property
    def ber_x2_e2e(self) -> float:
        return self.err_x2_e2e / self.trials

    @property
    def ber_e2e_avg(self) -> float:
        return 0.5 * (self.ber_x1_e2e + self.ber_x2_e2e)

    @property
    def ber_phase2_avg(self) -> float:
        return 0.5 * (self.ber_x1_r1d + self.ber_x2_r2d)

    @property
    def p_a_1st_emp(self) -> float:
        return self.event_a_1st / self.trials

    @property
    def p_a_2nd_emp(self) -> float:
        return self.event_a_2nd / self.trials

    def stderr(self, rate: float) -> float:
        """Binomial standard error of an estimated rate at this trial count."""
        return math.sqrt(max(rate * (1.0 - rate), 0.0) / self.trials)

    @property
    def low_confidence(self) -> tuple[str, ...]:
        """Error counters with fewer than 100 events; treat those BERs as noisy."""
        return tuple(
            name for name in _COUNT_FIELDS[:6] if getattr(self, name) < 100
        )


def _sign(values: np.ndarray) -> np.ndarray:
    # Decision device: ties resolve to +1.
    return np.where(values >= 0.0, 1, -1).astype(np.int8)


def run_trials(rng: np.random.Generator, scenario: ScenarioConfig, n0: float, n: int) -> TrialBatch:
    """Simulate ``n`` independent trials of the full chain with ``rng``."""
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n!r}")
    if n0 <= 0.0:
        raise ValueError(f"n0 must be positive, got {n0!r}")
    sc = scenario
    x1 = (rng.integers(0, 2, n, dtype=np.int8) * 2 - 1).astype(np.int8)
    x2 = (rng.integers(0, 2, n, dtype=np.int8) * 2 - 1).astype(np.int8)

    def tap(sigma2: float) -> np.ndarray:
        scale = math.sqrt(sigma2 / 2.0)
        return (rng.standard_normal(n) + 1j * rng.standard_normal(n)) * scale

    h_sr1 = tap(sc.sigma2_sr1)
    h_sr2 = tap(sc.sigma2_sr2)
    h_r1d = tap(sc.sigma2_r1d)
    h_r2d = tap(sc.sigma2_r2d)
    w_sr1 = tap(n0)
    w_sr2 = tap(n0)
    w_d = rng.standard_normal(n) * math.sqrt(n0 / 2.0)

    # Broadcast phase: superposed BPSK through each source-relay channel.
    s = math.sqrt(sc.alpha1 * sc.p_s) * x1 + math.sqrt(sc.alpha2 * sc.p_s) * x2
    t1 = (np.conj(h_sr1) * (s * h_sr1 + w_sr1)).real
    x1_r1 = _sign(t1)
    t2 = (np.conj(h_sr2) * (s * h_sr2 + w_sr2)).real
    x1_r2 = _sign(t2)
    # Cancelling c*x1_r2*h_sr2 from the waveform shifts the matched-filter
    # statistic by c*x1_r2*|h_sr2|^2.
    gain2 = (h_sr2 * np.conj(h_sr2)).real
    t2_sic = t2 - math.sqrt(sc.alpha1 * sc.p_s) * x1_r2 * gain2
    x2_r2 = _sign(t2_sic)

    # Uplink phase: amplitudes align coherently at the destination.
    amp1 = math.sqrt(sc.beta1 * sc.p_r) * np.abs(h_r1d)
    amp2 = math.sqrt(sc.beta2 * sc.p_r) * np.abs(h_r2d)
    y_d = amp1 * x1_r1 + amp2 * x2_r2 + w_d
    x1_d = _sign(y_d)
    x2_d = _sign(y_d - amp1 * x1_d)

    return TrialBatch(x1=x1, x2=x2, x1_r1=x1_r1, x1_r2=x1_r2, x2_r2=x2_r2, x1_d=x1_d, x2_d=x2_d)


def run_trial(rng: np.random.Generator, scenario: ScenarioConfig, n0: float) -> TrialBatch:
    """Single-trial convenience wrapper around :func:`run_trials`."""
    return run_trials(rng, scenario, n0, 1)


def batch_counts(batch: TrialBatch) -> np.ndarray:
    """Error/event counts of a batch, ordered as in :class:`SimReport`."""
    return np.array(
        [
            int((batch.x1_r1 != batch.x1).sum()),
            int((batch.x2_r2 != batch.x2).sum()),
            int((batch.x1_d != batch.x1_r1).sum()),
            int((batch.x2_d != batch.x2_r2).sum()),
            int((batch.x1_d != batch.x1).sum()),
            int((batch.x2_d != batch.x2).sum()),
            int((batch.x1 == batch.x2).sum()),
            int((batch.x1_r1 == batch.x2_r2).sum()),
        ],
        dtype=np.int64,
    )


def _batch_plan(trials: int) -> list[tuple[int, int]]:
    full, rest = divmod(trials, BATCH_SIZE)
    plan = [(i, BATCH_SIZE) for i in range(full)]
    if rest:
        plan.append((full, rest))
    return plan


def _run_batch(args: tuple[ScenarioConfig, float, int, int, int]) -> np.ndarray:
    scenario, n0, seed, index, size = args
    rng = np.random.default_rng(np.random.SeedSequence(entropy=seed, spawn_key=(index,)))
    return batch_counts(run_trials(rng, scenario, n0, size))


def simulate(config: SimConfig) -> SimReport:
    """Run the configured number of trials and aggregate the counts.

    Deterministic: the substream of batch ``i`` depends only on
    ``(config.seed, i)``, so identical seed/trials/scenario produce the same
    report for every worker count.
    """
    n0 = config.scenario.n0_at(config.snr_db)
    jobs = [
        (config.scenario, n0, config.seed, index, size)
        for index, size in _batch_plan(config.trials)
    ]
    totals = np.zeros(len(_COUNT_FIELDS), dtype=np.int64)
    if config.workers == 1 or len(jobs) == 1:
        for job in jobs:
            totals += _run_batch(job)
    else:
        with ProcessPoolExecutor(max_workers=config.workers) as pool:
            for counts in pool.map(_run_batch, jobs, chunksize=max(1, len(jobs) // (4 * config.workers))):
                totals += counts
    values = dict(zip(_COUNT_FIELDS, (int(v) for v in totals)))
    return SimReport(trials=config.trials, seed=config.seed, snr_db=config.snr_db, **values)
