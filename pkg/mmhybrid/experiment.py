"""Monte-Carlo sweeps of hybrid designs over SNR, array size or stream count.

Every (sweep point, trial) pair is an independent work item with its own
random stream derived from the base seed, and all algorithms of a work item
share one channel draw. Records are put in canonical order afterwards, so the
output does not depend on the number of workers.
"""
import dataclasses
import enum
import logging
import multiprocessing
import time
from dataclasses import dataclass
from functools import lru_cache, partial
from typing import List, Tuple

import numpy as np

from mmhybrid.beamdesign import full_digital_svd, greedy_no_deflation, joint_design
from mmhybrid.channel import ArrayConfig, ChannelParams, sample_channel
from mmhybrid.codebook import MAX_BITS, MIN_BITS, build_beamsteering_codebook
from mmhybrid.constants import defaults
from mmhybrid.exceptions import TRIAL_SKIP_ERRORS, ConfigError
from mmhybrid.metrics import LinkBudget, evaluate_design
from mmhybrid.utils.rng import trial_stream

logger = logging.getLogger(__name__)

MAX_SEED = 2 ** 64 - 1


class Algorithm(enum.Enum):
    JOINT = "joint"
    GREEDY_NO_DEFLATION = "greedy"
    FULL_DIGITAL = "full_digital"

    @classmethod
    def parse(cls, value):
        if isinstance(value, cls):
            return value
        try:
            return cls(str(value).strip().lower())
        except ValueError:
            raise ConfigError(
                "Unknown algorithm %r, expected one of %s"
                % (value, ", ".join(a.value for a in cls))
            )


class SweepAxis(enum.Enum):
    SNR_DB = "snr"
    NUM_ANTENNAS = "antennas"
    NUM_STREAMS = "streams"

    @classmethod
    def parse(cls, value):
        if isinstance(value, cls):
            return value
        try:
            return cls(str(value).strip().lower())
        except ValueError:
            raise ConfigError(
                "Unknown sweep axis %r, expected one of %s"
                % (value, ", ".join(a.value for a in cls))
            )


ALGORITHM_ORDER = {algorithm: i for i, algorithm in enumerate(Algorithm)}


@dataclass(frozen=True)
class SweepPoint:
    sweep_index: int
    sweep_value: object
    channel: ChannelParams
    n_streams: int
    budget: LinkBudget


@dataclass(frozen=True)
class ExperimentConfig:
    channel: ChannelParams
    codebook_bits_tx: int = defaults.CODEBOOK_BITS
    codebook_bits_rx: int = defaults.CODEBOOK_BITS
    n_streams: int = defaults.STREAMS
    algorithms: Tuple[Algorithm, ...] = tuple(Algorithm)
    sweep_axis: SweepAxis = SweepAxis.SNR_DB
    sweep_values: Tuple = defaults.SNR_DB_GRID
    # SNR of antenna and stream sweeps
    fixed_snr_db: float = defaults.FIXED_SNR_DB
    trials: int = defaults.TRIALS
    base_seed: int = defaults.SEED
    dedupe_codebook: bool = False
    workers: int = defaults.WORKERS
    timing: bool = False
    nats: bool = False

    def __post_init__(self):
        if not self.algorithms:
            raise ConfigError("At least one algorithm is required")
        if len(set(self.algorithms)) != len(self.algorithms):
            raise ConfigError("Algorithms must not repeat")
        values = list(self.sweep_values)
        if not values:
            raise ConfigError("Sweep values must not be empty")
        if any(b <= a for a, b in zip(values, values[1:])):
            raise ConfigError("Sweep values must be strictly increasing: %r" % values)
        if self.sweep_axis is not SweepAxis.SNR_DB and any(int(v) != v or v < 1 for v in values):
            raise ConfigError(
                "%s sweep needs positive integer values" % self.sweep_axis.value
            )
        for bits in (self.codebook_bits_tx, self.codebook_bits_rx):
            if not MIN_BITS <= bits <= MAX_BITS:
                raise ConfigError(
                    "Codebook bits must lie in [%d, %d], got %r" % (MIN_BITS, MAX_BITS, bits)
                )
        if self.trials < 1:
            raise ConfigError("Need at least one trial, got %r" % self.trials)
        if self.workers < 1:
            raise ConfigError("Need at least one worker, got %r" % self.workers)
        if not 0 <= self.base_seed <= MAX_SEED:
            raise ConfigError("Seed must be a 64-bit unsigned integer, got %r" % self.base_seed)
        for index in range(len(values)):
            point = self.point(index)
            if not 1 <= point.n_streams <= min(
                point.channel.n_tx.n_elements, point.channel.n_rx.n_elements
            ):
                raise ConfigError(
                    "%d streams do not fit %dx%d antennas"
                    % (point.n_streams, point.channel.n_tx.n_elements,
                       point.channel.n_rx.n_elements)
                )

    def point(self, sweep_index) -> SweepPoint:
        value = self.sweep_values[sweep_index]
        channel, n_streams, snr_db = self.channel, self.n_streams, self.fixed_snr_db
        if self.sweep_axis is SweepAxis.SNR_DB:
            snr_db = float(value)
        elif self.sweep_axis is SweepAxis.NUM_ANTENNAS:
            channel = dataclasses.replace(
                channel,
                n_tx=ArrayConfig(int(value), channel.n_tx.spacing_over_wavelength),
                n_rx=ArrayConfig(int(value), channel.n_rx.spacing_over_wavelength),
            )
        else:
            # RF chains track the stream count
            n_streams = int(value)
        return SweepPoint(
            sweep_index=sweep_index,
            sweep_value=value,
            channel=channel,
            n_streams=n_streams,
            budget=LinkBudget.from_snr_db(snr_db, n_streams),
        )


@dataclass(frozen=True)
class TrialRecord:
    sweep_axis: SweepAxis
    sweep_index: int
    sweep_value: object
    trial_index: int
    algorithm: Algorithm
    spectral_efficiency: float
    sum_rate: float
    min_sinr_db: float
    elapsed_seconds: float
    skipped: bool = False

    @property
    def sort_key(self):
        return self.sweep_index, self.trial_index, ALGORITHM_ORDER[self.algorithm]


@dataclass(frozen=True)
class SummaryRow:
    sweep_axis: SweepAxis
    sweep_index: int
    sweep_value: object
    algorithm: Algorithm
    trials: int
    se_mean: float
    se_std: float
    rate_mean: float
    rate_std: float
    skipped: int = 0


@lru_cache(maxsize=64)
def _codebook(bits, array, dedupe):
    return build_beamsteering_codebook(bits, array, dedupe=dedupe)


def point_codebooks(config: ExperimentConfig, point: SweepPoint):
    return (
        _codebook(config.codebook_bits_tx, point.channel.n_tx, config.dedupe_codebook),
        _codebook(config.codebook_bits_rx, point.channel.n_rx, config.dedupe_codebook),
    )


def design_for(algorithm, h, f_cb, w_cb, n_streams):
    if algorithm is Algorithm.JOINT:
        return joint_design(h, f_cb, w_cb, n_streams)
    if algorithm is Algorithm.GREEDY_NO_DEFLATION:
        return greedy_no_deflation(h, f_cb, w_cb, n_streams)
    return full_digital_svd(h, n_streams)


def sample_trial_channel(config: ExperimentConfig, sweep_index, trial_index):
    point = config.point(sweep_index)
    rng = trial_stream(config.base_seed, sweep_index, trial_index)
    return point, sample_channel(point.channel, rng)


def run_trial(config: ExperimentConfig, sweep_index, trial_index) -> List[TrialRecord]:
    point, realization = sample_trial_channel(config, sweep_index, trial_index)
    f_cb, w_cb = point_codebooks(config, point)
    record = partial(
        TrialRecord,
        sweep_axis=config.sweep_axis,
        sweep_index=sweep_index,
        sweep_value=point.sweep_value,
        trial_index=trial_index,
    )
    records = []
    for algorithm in config.algorithms:
        started = time.perf_counter()
        try:
            design = design_for(algorithm, realization.h, f_cb, w_cb, point.n_streams)
            metrics = evaluate_design(realization.h, design, point.budget, nats=config.nats)
        except TRIAL_SKIP_ERRORS as exc:
            logger.warning(
                "Skipping %s at %s=%s trial %d: %s",
                algorithm.value, config.sweep_axis.value, point.sweep_value, trial_index, exc,
            )
            records.append(
                record(
                    algorithm=algorithm,
                    spectral_efficiency=0.0,
                    sum_rate=0.0,
                    min_sinr_db=0.0,
                    elapsed_seconds=0.0,
                    skipped=True,
                )
            )
            continue
        elapsed = time.perf_counter() - started if config.timing else 0.0
        records.append(
            record(
                algorithm=algorithm,
                spectral_efficiency=metrics.spectral_efficiency,
                sum_rate=metrics.sum_rate,
                min_sinr_db=metrics.min_sinr_db,
                elapsed_seconds=elapsed,
            )
        )
    logger.debug(
        "Finished %s=%s trial %d", config.sweep_axis.value, point.sweep_value, trial_index
    )
    return records


def _run_work_item(config, item):
    return run_trial(config, *item)


def summarize(records, config: ExperimentConfig) -> List[SummaryRow]:
    grouped = {}
    for r in records:
        grouped.setdefault((r.sweep_index, r.algorithm), []).append(r)
    rows = []
    for sweep_index, value in enumerate(config.sweep_values):
        for algorithm in config.algorithms:
            group = grouped.get((sweep_index, algorithm), [])
            kept = [r for r in group if not r.skipped]
            se = np.array([r.spectral_efficiency for r in kept])
            rate = np.array([r.sum_rate for r in kept])
            rows.append(
                SummaryRow(
                    sweep_axis=config.sweep_axis,
                    sweep_index=sweep_index,
                    sweep_value=value,
                    algorithm=algorithm,
                    trials=len(kept),
                    se_mean=_mean(se),
                    se_std=_std(se),
                    rate_mean=_mean(rate),
                    rate_std=_std(rate),
                    skipped=len(group) - len(kept),
                )
            )
    return rows


def _mean(values):
    return float(np.mean(values)) if values.size else float("nan")


def _std(values):
    if values.size == 0:
        return float("nan")
    return float(np.std(values, ddof=1)) if values.size > 1 else 0.0


def paired_differences(records, first, second, metric="sum_rate"):
    """Per-trial ``first - second`` of a metric, over trials where neither skipped."""
    by_trial = {}
    for r in records:
        by_trial.setdefault((r.sweep_index, r.trial_index), {})[r.algorithm] = r
    diffs = []
    for key in sorted(by_trial):
        pair = by_trial[key]
        a, b = pair.get(first), pair.get(second)
        if a is None or b is None or a.skipped or b.skipped:
            continue
        diffs.append(getattr(a, metric) - getattr(b, metric))
    return np.array(diffs)


def run_sweep(config: ExperimentConfig):
    work = [
        (sweep_index, trial_index)
        for sweep_index in range(len(config.sweep_values))
        for trial_index in range(config.trials)
    ]
    logger.info(
        "Sweeping %s over %s: %d trials per point, %d worker(s)",
        config.sweep_axis.value, list(config.sweep_values), config.trials, config.workers,
    )
    task = partial(_run_work_item, config)
    if config.workers == 1:
        results = [task(item) for item in work]
    else:
        chunksize = max(1, len(work) // (4 * config.workers))
        with multiprocessing.Pool(config.workers) as pool:
            results = pool.map(task, work, chunksize=chunksize)

    records = sorted((r for trial in results for r in trial), key=lambda r: r.sort_key)
    summary = summarize(records, config)
    for row in summary:
        logger.info(
            "%s=%s %s: SE %.3f, sum-rate %.3f over %d trials",
            config.sweep_axis.value, row.sweep_value, row.algorithm.value,
            row.se_mean, row.rate_mean, row.trials,
        )
    skipped = sum(row.skipped for row in summary)
    if skipped:
        logger.warning("%d algorithm evaluations were skipped", skipped)
    return records, summary
