"""Clustered (Saleh-Valenzuela) narrowband channels between two ULAs.

    H = sqrt(Nt Nr / (Ncl Nray)) sum_i sum_l alpha_il a_r(aoa_il) a_t(aod_il)^H
"""
import enum
import logging
import math
from dataclasses import dataclass, field
from typing import List, Optional, Sequence

import numpy as np

from mmhybrid.constants import defaults
from mmhybrid.constants.defaults import TWO_PI
from mmhybrid.exceptions import ConfigError
from mmhybrid.linalg import ComplexMatrix

logger = logging.getLogger(__name__)


class PowerProfile(enum.Enum):
    UNIFORM = "uniform"
    EXPONENTIAL07 = "exponential07"

    @classmethod
    def parse(cls, value):
        if isinstance(value, cls):
            return value
        try:
            return cls(str(value).strip().lower())
        except ValueError:
            raise ConfigError(
                "Unknown power profile %r, expected one of %s"
                % (value, ", ".join(p.value for p in cls))
            )


@dataclass(frozen=True)
class ArrayConfig:
    n_elements: int
    spacing_over_wavelength: float = defaults.SPACING

    def __post_init__(self):
        if self.n_elements < 1:
            raise ConfigError("Array needs at least one element, got %r" % self.n_elements)
        if not self.spacing_over_wavelength > 0:
            raise ConfigError(
                "Element spacing must be positive, got %r" % self.spacing_over_wavelength
            )


@dataclass(frozen=True)
class AngleRange:
    """Interval ``[start, start + width)`` in radians.

    ``start=None`` draws the start uniformly in [0, 2pi) once per channel
    realization, which is how the receive-side sector is placed.
    """

    start: Optional[float]
    width: float

    def __post_init__(self):
        if not self.width >= 0:
            raise ConfigError("Angle range width must be nonnegative, got %r" % self.width)

    def resolve(self, rng):
        start = rng.uniform(0.0, TWO_PI) if self.start is None else self.start
        return start, start + self.width


@dataclass(frozen=True)
class ChannelParams:
    n_tx: ArrayConfig
    n_rx: ArrayConfig
    n_clusters: int = defaults.CLUSTERS
    n_rays: int = defaults.RAYS
    angle_spread_rad: float = math.radians(defaults.ANGLE_SPREAD_DEG)
    aod_mean_range: AngleRange = AngleRange(0.0, TWO_PI)
    aoa_mean_range: AngleRange = AngleRange(None, math.pi / 3.0)
    power_profile: PowerProfile = PowerProfile.EXPONENTIAL07

    def __post_init__(self):
        if self.n_clusters < 1 or self.n_rays < 1:
            raise ConfigError(
                "Need at least one cluster and one ray, got %r x %r"
                % (self.n_clusters, self.n_rays)
            )
        if not self.angle_spread_rad >= 0:
            raise ConfigError("Angle spread must be nonnegative, got %r" % self.angle_spread_rad)

    @classmethod
    def symmetric(cls, n_antennas, spacing=defaults.SPACING, **kwargs):
        array = ArrayConfig(n_antennas, spacing)
        return cls(n_tx=array, n_rx=array, **kwargs)


@dataclass(frozen=True)
class Ray:
    cluster: int
    gain: complex
    aod: float
    aoa: float


@dataclass(frozen=True)
class ChannelRealization:
    h: ComplexMatrix
    rays: List[Ray] = field(default_factory=list)


def steering_from_sine(cfg: ArrayConfig, sines) -> np.ndarray:
    """Array responses for the given ``sin(theta)`` values.

    Scalar input gives an ``(N,)`` vector, a sequence gives an ``(N, len)``
    matrix with one response per column. The per-element phase is reduced
    mod one cycle before scaling by 2 pi, so sines that alias onto the same
    beam give bit-identical responses.
    """
    sines = np.asarray(sines, dtype=np.float64)
    k = np.arange(cfg.n_elements, dtype=np.float64)
    cycles = np.mod(cfg.spacing_over_wavelength * np.multiply.outer(k, sines), 1.0)
    return np.exp(1j * TWO_PI * cycles) / math.sqrt(cfg.n_elements)


def ula_response(cfg: ArrayConfig, theta) -> np.ndarray:
    """Response of ``cfg`` toward ``theta``.

    A scalar angle gives a flat ``(N,)`` vector rather than an ``N x 1``
    column; ``ula_response(cfg, [theta])`` gives the column.
    """
    return steering_from_sine(cfg, np.sin(theta))


def cluster_powers(n_clusters, profile) -> np.ndarray:
    """Average cluster powers, normalized so they sum to ``n_clusters``.

    >>> cluster_powers(3, "uniform").tolist()
    [1.0, 1.0, 1.0]
    """
    profile = PowerProfile.parse(profile)
    if n_clusters < 1:
        raise ConfigError("Need at least one cluster, got %r" % n_clusters)
    if profile is PowerProfile.UNIFORM:
        return np.ones(n_clusters)
    weights = 0.7 ** np.arange(1, n_clusters + 1)
    return weights * (n_clusters / np.sum(weights))


def sample_laplacian_angle(mean, std_dev, rng, size=None):
    """Laplacian draw(s) with standard deviation ``std_dev``.

    Inverse CDF of one uniform variate per draw, scale ``std_dev / sqrt(2)``,
    no truncation or wrapping.
    """
    if std_dev < 0:
        raise ConfigError("Angle spread must be nonnegative, got %r" % std_dev)
    u = rng.random(size) - 0.5
    if std_dev == 0:
        return mean + np.zeros_like(u) if size is not None else float(mean)
    scale = std_dev / math.sqrt(2.0)
    tail = np.maximum(1.0 - 2.0 * np.abs(u), np.finfo(np.float64).tiny)
    draw = mean - scale * np.sign(u) * np.log(tail)
    return draw if size is not None else float(draw)


def _normalization(params: ChannelParams):
    return math.sqrt(
        params.n_tx.n_elements * params.n_rx.n_elements / (params.n_clusters * params.n_rays)
    )


def _compose(params, gains, aods, aoas) -> ComplexMatrix:
    a_t = steering_from_sine(params.n_tx, np.sin(aods))
    a_r = steering_from_sine(params.n_rx, np.sin(aoas))
    return _normalization(params) * (a_r * gains) @ np.conj(a_t).T


def realization_from_rays(params: ChannelParams, rays: Sequence[Ray]) -> ChannelRealization:
    if len(rays) != params.n_clusters * params.n_rays:
        raise ConfigError(
            "Expected %d rays, got %d" % (params.n_clusters * params.n_rays, len(rays))
        )
    gains = np.array([r.gain for r in rays], dtype=np.complex128)
    aods = np.array([r.aod for r in rays], dtype=np.float64)
    aoas = np.array([r.aoa for r in rays], dtype=np.float64)
    return ChannelRealization(h=_compose(params, gains, aods, aoas), rays=list(rays))


def sample_channel(params: ChannelParams, rng, gains=None) -> ChannelRealization:
    """Draw one channel realization.

    Draw order is fixed (receive sector, per-cluster mean AoD/AoA, per-ray
    AoD offsets, per-ray AoA offsets, gains) so a seeded generator gives
    bit-identical realizations. ``gains`` pins the complex ray gains.
    """
    n_cl, n_ray = params.n_clusters, params.n_rays
    aod_low, aod_high = params.aod_mean_range.resolve(rng)
    aoa_low, aoa_high = params.aoa_mean_range.resolve(rng)
    mean_aod = rng.uniform(aod_low, aod_high, size=n_cl)
    mean_aoa = rng.uniform(aoa_low, aoa_high, size=n_cl)

    spread = params.angle_spread_rad
    aods = sample_laplacian_angle(0.0, spread, rng, size=(n_cl, n_ray)) + mean_aod[:, None]
    aoas = sample_laplacian_angle(0.0, spread, rng, size=(n_cl, n_ray)) + mean_aoa[:, None]

    if gains is None:
        sigma = np.sqrt(cluster_powers(n_cl, params.power_profile) / 2.0)[:, None]
        gains = sigma * (
            rng.standard_normal((n_cl, n_ray)) + 1j * rng.standard_normal((n_cl, n_ray))
        )
    else:
        gains = np.broadcast_to(np.asarray(gains, dtype=np.complex128), (n_cl, n_ray))

    gains, aods, aoas = gains.ravel(), aods.ravel(), aoas.ravel()
    rays = [
        Ray(cluster=i // n_ray, gain=complex(g), aod=float(t), aoa=float(r))
        for i, (g, t, r) in enumerate(zip(gains, aods, aoas))
    ]
    return ChannelRealization(h=_compose(params, gains, aods, aoas), rays=rays)
