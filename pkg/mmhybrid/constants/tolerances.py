from dataclasses import dataclass


@dataclass(frozen=True)
class Tolerances:
    svd_reconstruction: float = 1e-10
    orthonormality: float = 1e-10
    span_collapse: float = 1e-10
    degenerate_gain: float = 1e-12
    singular_combiner: float = 1e-12
    zero_combiner_column: float = 1e-12
    interference: float = 1e-8
    duplicate_beam: float = 1e-9
    water_level: float = 1e-13
    # noise floor used when a SINR is reported in dB
    sinr_floor: float = 1e-30


DEFAULT_TOLERANCES = Tolerances()
