"""Sweep configuration: flat ``key = value`` files and their CLI flags.

Every key of ``CONFIG_KEYS`` is accepted in a config file and as
``--key-with-dashes`` on the command line. Values are layered: built-in
defaults, then the config file, then flags.
"""
import configparser
import math
from dataclasses import dataclass
from typing import Any, Callable, Optional

from mmhybrid.channel import AngleRange, ArrayConfig, ChannelParams, PowerProfile
from mmhybrid.constants import defaults
from mmhybrid.exceptions import ConfigError
from mmhybrid.experiment import MAX_SEED, Algorithm, ExperimentConfig, SweepAxis
from mmhybrid.utils.parsing import parse_bool, parse_float_list, parse_int_list, split_list

SECTION = "mmhybrid"

# Which subcommands accept a key
CHANNEL = "channel"
LINK = "link"
SWEEP = "sweep"


@dataclass(frozen=True)
class ConfigKey:
    name: str
    parse: Callable[[str], Any]
    default: Any
    help: str
    scope: str = SWEEP
    is_flag: bool = False
    default_text: Optional[str] = None

    @property
    def flag(self):
        return "--" + self.name.replace("_", "-")

    def describe_default(self):
        if self.default_text is not None:
            return self.default_text
        if isinstance(self.default, (tuple, list)):
            return ",".join(_format_value(v) for v in self.default)
        return _format_value(self.default)


def _format_value(value):
    if isinstance(value, bool):
        return "yes" if value else "no"
    if isinstance(value, float) and value.is_integer():
        return "%g" % value
    return str(value)


def _parse_algorithms(value):
    return tuple(Algorithm.parse(v) for v in split_list(value))


def _parse_seed(value):
    seed = int(value)
    if not 0 <= seed <= MAX_SEED:
        raise ValueError("expected an integer in [0, 2^64 - 1]")
    return seed


def _parse_range(value):
    bounds = parse_float_list(value)
    if len(bounds) != 2 or bounds[1] < bounds[0]:
        raise ValueError("expected 'low,high', got %r" % value)
    return tuple(bounds)


CONFIG_KEYS = (
    ConfigKey("antennas", int, defaults.ANTENNAS, "Antennas at both ends", CHANNEL),
    ConfigKey("tx_antennas", int, None, "Transmit antennas", CHANNEL,
              default_text="same as --antennas"),
    ConfigKey("rx_antennas", int, None, "Receive antennas", CHANNEL,
              default_text="same as --antennas"),
    ConfigKey("spacing", float, defaults.SPACING,
              "Element spacing in wavelengths", CHANNEL),
    ConfigKey("clusters", int, defaults.CLUSTERS, "Scattering clusters", CHANNEL),
    ConfigKey("rays", int, defaults.RAYS, "Rays per cluster", CHANNEL),
    ConfigKey("angle_spread_deg", float, defaults.ANGLE_SPREAD_DEG,
              "Per-cluster AoD/AoA standard deviation in degrees", CHANNEL),
    ConfigKey("power_profile", PowerProfile.parse, PowerProfile(defaults.POWER_PROFILE),
              "Cluster power profile: uniform or exponential07", CHANNEL,
              default_text=defaults.POWER_PROFILE),
    ConfigKey("aod_range_deg", _parse_range, defaults.AOD_RANGE_DEG,
              "Range of mean cluster AoDs in degrees, 'low,high'", CHANNEL),
    ConfigKey("aoa_sector_deg", float, defaults.AOA_SECTOR_DEG,
              "Width of the mean cluster AoA sector in degrees", CHANNEL),
    ConfigKey("aoa_sector_start_deg", float, None,
              "Start of the AoA sector in degrees", CHANNEL,
              default_text="uniform per realization"),
    ConfigKey("seed", _parse_seed, defaults.SEED, "Base seed (64-bit unsigned)", CHANNEL),
    ConfigKey("rf_chains", int, None, "RF chains per side, must equal --streams", LINK,
              default_text="same as --streams"),
    ConfigKey("streams", int, defaults.STREAMS, "Data streams", LINK),
    ConfigKey("bits", int, defaults.CODEBOOK_BITS, "Codebook bits at both ends", LINK),
    ConfigKey("bits_tx", int, None, "Transmit codebook bits", LINK,
              default_text="same as --bits"),
    ConfigKey("bits_rx", int, None, "Receive codebook bits", LINK,
              default_text="same as --bits"),
    ConfigKey("dedupe_codebook", parse_bool, False,
              "Drop aliased duplicate codewords", LINK, is_flag=True),
    ConfigKey("algorithms", _parse_algorithms, tuple(Algorithm),
              "Comma-separated algorithms: joint, greedy, full_digital", LINK,
              default_text=",".join(a.value for a in Algorithm)),
    ConfigKey("fixed_snr_db", float, defaults.FIXED_SNR_DB,
              "SNR of antenna and stream sweeps and of 'simulate', in dB", LINK),
    ConfigKey("nats", parse_bool, False, "Report sum-rates in nats", LINK, is_flag=True),
    ConfigKey("sweep", SweepAxis.parse, SweepAxis.SNR_DB,
              "Sweep axis: snr, antennas or streams", default_text=SweepAxis.SNR_DB.value),
    ConfigKey("snr_db", parse_float_list, defaults.SNR_DB_GRID, "SNR grid in dB"),
    ConfigKey("antenna_values", parse_int_list, defaults.ANTENNA_GRID,
              "Antenna counts of an antennas sweep"),
    ConfigKey("stream_values", parse_int_list, defaults.STREAM_GRID,
              "Stream counts of a streams sweep"),
    ConfigKey("trials", int, defaults.TRIALS, "Channel realizations per sweep point"),
    ConfigKey("workers", int, defaults.WORKERS, "Worker processes"),
    ConfigKey("timing", parse_bool, False,
              "Record wall-clock time per design (breaks byte-identical output)",
              is_flag=True),
    ConfigKey("out_dir", str, ".", "Directory for records.csv and summary.csv"),
    ConfigKey("xlsx", parse_bool, False, "Also write results.xlsx", is_flag=True),
)
KEYS_BY_NAME = {key.name: key for key in CONFIG_KEYS}
SCOPES = {
    CHANNEL: (CHANNEL,),
    LINK: (CHANNEL, LINK),
    SWEEP: (CHANNEL, LINK, SWEEP),
}


def keys_for(scope):
    return [key for key in CONFIG_KEYS if key.scope in SCOPES[scope]]


def parse_value(name, raw):
    try:
        key = KEYS_BY_NAME[name]
    except KeyError:
        raise ConfigError("Unknown config key %r" % name)
    try:
        return key.parse(raw)
    except ConfigError:
        raise
    except ValueError as exc:
        raise ConfigError("Invalid value %r for %s: %s" % (raw, name, exc))


def read_config_file(path):
    """Parse a flat ``key = value`` file into typed values.

    ``#`` and ``;`` start comment lines.
    """
    parser = configparser.ConfigParser(interpolation=None)
    try:
        with open(path, encoding="utf-8") as handle:
            parser.read_string("[%s]\n%s" % (SECTION, handle.read()), source=str(path))
    except (configparser.Error, UnicodeDecodeError) as exc:
        raise ConfigError("Cannot parse %s: %s" % (path, exc))
    return {name: parse_value(name, raw) for name, raw in parser.items(SECTION)}


def resolve_values(file_values=None, overrides=None):
    values = {key.name: key.default for key in CONFIG_KEYS}
    values.update(file_values or {})
    values.update(overrides or {})
    return values


def _fallback(values, name, other):
    return values[other] if values.get(name) is None else values[name]


def build_channel_params(values) -> ChannelParams:
    spacing = values["spacing"]
    aod_low, aod_high = values["aod_range_deg"]
    start = values["aoa_sector_start_deg"]
    return ChannelParams(
        n_tx=ArrayConfig(_fallback(values, "tx_antennas", "antennas"), spacing),
        n_rx=ArrayConfig(_fallback(values, "rx_antennas", "antennas"), spacing),
        n_clusters=values["clusters"],
        n_rays=values["rays"],
        angle_spread_rad=math.radians(values["angle_spread_deg"]),
        aod_mean_range=AngleRange(math.radians(aod_low), math.radians(aod_high - aod_low)),
        aoa_mean_range=AngleRange(
            None if start is None else math.radians(start),
            math.radians(values["aoa_sector_deg"]),
        ),
        power_profile=values["power_profile"],
    )


def build_experiment_config(values) -> ExperimentConfig:
    streams = values["streams"]
    rf_chains = values.get("rf_chains")
    axis = values["sweep"]
    if rf_chains is not None and rf_chains != streams and axis is not SweepAxis.NUM_STREAMS:
        raise ConfigError(
            "RF chains (%d) must equal the number of streams (%d)" % (rf_chains, streams)
        )
    sweep_values = {
        SweepAxis.SNR_DB: values["snr_db"],
        SweepAxis.NUM_ANTENNAS: values["antenna_values"],
        SweepAxis.NUM_STREAMS: values["stream_values"],
    }[axis]
    return ExperimentConfig(
        channel=build_channel_params(values),
        codebook_bits_tx=_fallback(values, "bits_tx", "bits"),
        codebook_bits_rx=_fallback(values, "bits_rx", "bits"),
        n_streams=streams,
        algorithms=tuple(values["algorithms"]),
        sweep_axis=axis,
        sweep_values=tuple(sweep_values),
        fixed_snr_db=values["fixed_snr_db"],
        trials=values["trials"],
        base_seed=values["seed"],
        dedupe_codebook=values["dedupe_codebook"],
        workers=values["workers"],
        timing=values["timing"],
        nats=values["nats"],
    )
