# -*- coding: utf-8 -*-
from .beamdesign import (
    exhaustive_joint_search,
    full_digital_svd,
    greedy_no_deflation,
    joint_design,
)
from .channel import ArrayConfig, ChannelParams, sample_channel, ula_response
from .codebook import build_beamsteering_codebook
from .experiment import Algorithm, ExperimentConfig, SweepAxis, run_sweep
from .metrics import (
    LinkBudget,
    per_stream_sinr,
    spectral_efficiency,
    sum_rate,
    waterfilling_capacity,
)

__all__ = [
    "Algorithm",
    "ArrayConfig",
    "ChannelParams",
    "ExperimentConfig",
    "LinkBudget",
    "SweepAxis",
    "build_beamsteering_codebook",
    "exhaustive_joint_search",
    "full_digital_svd",
    "greedy_no_deflation",
    "joint_design",
    "per_stream_sinr",
    "run_sweep",
    "sample_channel",
    "spectral_efficiency",
    "sum_rate",
    "ula_response",
    "waterfilling_capacity",
]

__version__ = "0.1.0"
