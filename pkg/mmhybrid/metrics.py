"""Link metrics of a precoder/combiner pair on a known channel.

All rates are in bits/s/Hz unless ``nats=True`` is asked for.
"""
import logging
import math
from dataclasses import dataclass

import numpy as np
import scipy.linalg
import scipy.optimize

from mmhybrid.constants import DEFAULT_TOLERANCES
from mmhybrid.exceptions import (
    ConfigError,
    DimensionMismatch,
    SingularCombiner,
    ZeroCombinerColumn,
)
from mmhybrid.linalg import as_complex_matrix, hermitian, svd
from mmhybrid.utils.parsing import db_to_linear, linear_to_db

logger = logging.getLogger(__name__)

LN2 = math.log(2.0)


@dataclass(frozen=True)
class LinkBudget:
    power: float
    noise_var: float
    n_streams: int

    def __post_init__(self):
        if not self.power > 0 or not self.noise_var > 0:
            raise ConfigError(
                "Power and noise variance must be positive, got P=%r, noise=%r"
                % (self.power, self.noise_var)
            )
        if self.n_streams < 1:
            raise ConfigError("Need at least one stream, got %r" % self.n_streams)

    @property
    def snr(self):
        return self.power / self.noise_var

    @property
    def snr_db(self):
        return linear_to_db(self.snr)

    @property
    def power_per_stream(self):
        return self.power / self.n_streams

    @classmethod
    def from_snr_db(cls, snr_db, n_streams, power=1.0):
        return cls(power=power, noise_var=power / db_to_linear(snr_db), n_streams=n_streams)


@dataclass(frozen=True)
class DesignMetrics:
    spectral_efficiency: float
    sinr: np.ndarray
    sum_rate: float

    @property
    def sinr_db(self):
        floor = DEFAULT_TOLERANCES.sinr_floor
        return np.array([linear_to_db(g, floor) for g in self.sinr])

    @property
    def min_sinr_db(self):
        return float(np.min(self.sinr_db))


def _effective_channel(h, precoder, combiner):
    h = as_complex_matrix(h)
    precoder = as_complex_matrix(precoder)
    combiner = as_complex_matrix(combiner)
    if h.shape != (combiner.shape[0], precoder.shape[0]):
        raise DimensionMismatch(
            "Channel %r does not match precoder %r and combiner %r"
            % (h.shape, precoder.shape, combiner.shape)
        )
    return hermitian(combiner) @ h @ precoder, combiner


def spectral_efficiency(h, precoder, combiner, budget: LinkBudget, tol=DEFAULT_TOLERANCES):
    """log2 det(I + P/Ns Rn^-1 W^H H F F^H H^H W), Rn = noise W^H W.

    Rn is never inverted: its Cholesky factor whitens W^H H F and the
    determinant comes from the Cholesky factor of the (Hermitian positive
    definite) whitened argument.
    """
    a, combiner = _effective_channel(h, precoder, combiner)
    gram = hermitian(combiner) @ combiner
    eig = np.linalg.eigvalsh(gram)
    if eig[0] <= tol.singular_combiner * max(1.0, eig[-1]):
        raise SingularCombiner("Combiner Gram matrix is singular (min eigenvalue %g)" % eig[0])
    noise_chol = math.sqrt(budget.noise_var) * scipy.linalg.cholesky(gram, lower=True)
    whitened = scipy.linalg.solve_triangular(noise_chol, a, lower=True)
    argument = np.eye(a.shape[0]) + budget.power_per_stream * (whitened @ hermitian(whitened))
    chol = scipy.linalg.cholesky(argument, lower=True)
    log_det = 2.0 * float(np.sum(np.log(np.real(np.diag(chol)))))
    return max(0.0, log_det / LN2)


def per_stream_sinr(h, precoder, combiner, budget: LinkBudget, tol=DEFAULT_TOLERANCES):
    a, combiner = _effective_channel(h, precoder, combiner)
    column_norms = np.sum(np.abs(combiner) ** 2, axis=0)
    if np.any(column_norms < tol.zero_combiner_column ** 2):
        raise ZeroCombinerColumn("Combiner has a zero column")
    power = np.abs(a) ** 2
    signal = np.diag(power).copy()
    np.fill_diagonal(power, 0.0)
    interference = np.sum(power, axis=1)
    scale = budget.power_per_stream
    return scale * signal / (scale * interference + budget.noise_var * column_norms)


def sum_rate(gammas, nats=False):
    """
    >>> round(sum_rate([1.0, 1.0]), 12)
    2.0
    >>> round(sum_rate([3.0]), 12)
    2.0
    """
    gammas = np.asarray(gammas, dtype=np.float64)
    if np.any(gammas < 0):
        raise ValueError("SINR values must be nonnegative")
    total = float(np.sum(np.log1p(gammas)))
    return total if nats else total / LN2


def waterfilling_capacity(h, budget: LinkBudget, tol=DEFAULT_TOLERANCES):
    """Capacity of ``h`` at total power P with optimal power over its modes."""
    _, s, _ = svd(h)
    gains = s ** 2 / budget.noise_var
    gains = gains[gains > 0]
    if gains.size == 0:
        return 0.0
    inverse = 1.0 / gains
    # the water level never rises above the level that puts all power on
    # the strongest mode, so weaker modes cannot receive power
    ceiling = inverse.min() + budget.power
    active = inverse < ceiling
    inverse, gains = inverse[active], gains[active]

    def excess(level):
        return np.sum(np.maximum(level - inverse, 0.0)) - budget.power

    if excess(ceiling) <= 0:
        # single active mode, up to rounding
        level = ceiling
    else:
        level = scipy.optimize.bisect(excess, inverse.min(), ceiling, xtol=tol.water_level)
    powers = np.maximum(level - inverse, 0.0)
    return float(np.sum(np.log1p(powers * gains)) / LN2)


def evaluate_design(h, design, budget: LinkBudget, nats=False, tol=DEFAULT_TOLERANCES):
    precoder, combiner = design.precoder, design.combiner
    gammas = per_stream_sinr(h, precoder, combiner, budget, tol)
    return DesignMetrics(
        spectral_efficiency=spectral_efficiency(h, precoder, combiner, budget, tol),
        sinr=gammas,
        sum_rate=sum_rate(gammas, nats=nats),
    )
