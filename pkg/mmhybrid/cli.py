"""Command line entry point.

    mmhybrid sweep [--config FILE] [overrides] [--out-dir DIR]
    mmhybrid simulate [overrides]
    mmhybrid codebook inspect --bits B --antennas N [--angles] [--dedupe]
    mmhybrid channel sample [overrides] [--out FILE]

Exit codes: 0 success, 1 configuration error, 2 runtime error.
"""
import argparse
import logging
import os
import sys

import numpy as np
import pandas as pd

from mmhybrid import __version__
from mmhybrid.channel import ArrayConfig, sample_channel
from mmhybrid.codebook import build_beamsteering_codebook, distinct_beam_count
from mmhybrid.config import (
    CHANNEL,
    LINK,
    SWEEP,
    build_channel_params,
    build_experiment_config,
    keys_for,
    parse_value,
    read_config_file,
    resolve_values,
)
from mmhybrid.constants import defaults
from mmhybrid.exceptions import TRIAL_SKIP_ERRORS, BitsOutOfRange, ConfigError, HybridError
from mmhybrid.experiment import SweepAxis, design_for, point_codebooks, run_sweep
from mmhybrid.metrics import evaluate_design, waterfilling_capacity
from mmhybrid.report import write_channel_csv, write_records_csv, write_summary_csv, write_workbook
from mmhybrid.utils.rng import trial_stream

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_CONFIG_ERROR = 1
EXIT_RUNTIME_ERROR = 2

LOG_FORMAT = "%(levelname)s - %(module)s - %(message)s"


class UsageError(ConfigError):
    def __init__(self, usage, message):
        super(UsageError, self).__init__(message)
        self.usage = usage


class ArgumentParser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(self.format_usage(), message)


def setup_logging(verbosity):
    level = logging.WARNING
    if verbosity == 1:
        level = logging.INFO
    elif verbosity > 1:
        level = logging.DEBUG
    root = logging.getLogger("mmhybrid")
    root.setLevel(level)
    while root.handlers:
        root.handlers.pop()
    handler = logging.StreamHandler(sys.stderr)
    handler.setLevel(level)
    handler.setFormatter(logging.Formatter(LOG_FORMAT))
    root.addHandler(handler)


def _add_config_flags(parser, scope):
    for key in keys_for(scope):
        help_text = "%s (default: %s)" % (key.help, key.describe_default())
        if key.is_flag:
            parser.add_argument(
                key.flag, dest=key.name, action="store_const", const=True,
                default=argparse.SUPPRESS, help=help_text,
            )
        else:
            parser.add_argument(
                key.flag, dest=key.name, type=str, metavar=key.name.upper(),
                default=argparse.SUPPRESS, help=help_text,
            )
    parser.add_argument(
        "--config", dest="config_path", default=None,
        help="Flat 'key = value' config file (default: none)",
    )


def _add_common(parser):
    parser.add_argument(
        "-v", "--verbose", action="count", default=0,
        help="Log progress (-v) or every trial (-vv) to stderr",
    )


def _values_from_args(args, scope):
    file_values = read_config_file(args.config_path) if args.config_path else {}
    overrides = {}
    for key in keys_for(scope):
        if not hasattr(args, key.name):
            continue
        raw = getattr(args, key.name)
        overrides[key.name] = raw if key.is_flag else parse_value(key.name, raw)
    return resolve_values(file_values, overrides)


def cmd_sweep(args, out=sys.stdout):
    values = _values_from_args(args, SWEEP)
    config = build_experiment_config(values)
    out_dir = values["out_dir"]
    os.makedirs(out_dir, exist_ok=True)
    records, summary = run_sweep(config)
    records_path = os.path.join(out_dir, "records.csv")
    summary_path = os.path.join(out_dir, "summary.csv")
    write_records_csv(records, records_path)
    write_summary_csv(summary, summary_path)
    print("records: %s" % records_path, file=out)
    print("summary: %s" % summary_path, file=out)
    if values["xlsx"]:
        workbook_path = write_workbook(records, summary, os.path.join(out_dir, "results.xlsx"))
        print("workbook: %s" % workbook_path, file=out)
    return EXIT_OK


def _format_list(values, fmt="%d"):
    return ", ".join(fmt % v for v in values)


def cmd_simulate(args, out=sys.stdout):
    values = _values_from_args(args, LINK)
    values["sweep"] = SweepAxis.SNR_DB
    values["snr_db"] = (values["fixed_snr_db"],)
    config = build_experiment_config(values)
    point = config.point(0)
    realization = sample_channel(point.channel, trial_stream(config.base_seed, 0, 0))
    h = realization.h
    f_cb, w_cb = point_codebooks(config, point)

    print(
        "channel: %dx%d, %d clusters x %d rays, seed %d, SNR %g dB, %d streams"
        % (h.shape[0], h.shape[1], point.channel.n_clusters, point.channel.n_rays,
           config.base_seed, config.fixed_snr_db, point.n_streams),
        file=out,
    )
    print("capacity_bps_hz: %.6f" % waterfilling_capacity(h, point.budget), file=out)
    unit = "nats" if config.nats else "bps_hz"
    for algorithm in config.algorithms:
        print("[%s]" % algorithm.value, file=out)
        try:
            design = design_for(algorithm, h, f_cb, w_cb, point.n_streams)
            metrics = evaluate_design(h, design, point.budget, nats=config.nats)
        except TRIAL_SKIP_ERRORS as exc:
            print("  skipped: %s" % exc, file=out)
            continue
        if hasattr(design, "tx_indices"):
            print("  tx_beams: %s" % _format_list(design.tx_indices), file=out)
            print("  rx_beams: %s" % _format_list(design.rx_indices), file=out)
        print("  sinr_db: %s" % _format_list(metrics.sinr_db, "%.3f"), file=out)
        print("  sum_rate_%s: %.6f" % (unit, metrics.sum_rate), file=out)
        print("  spectral_efficiency_bps_hz: %.6f" % metrics.spectral_efficiency, file=out)
    return EXIT_OK


def cmd_codebook_inspect(args, out=sys.stdout):
    cfg = ArrayConfig(args.antennas, args.spacing)
    codebook = build_beamsteering_codebook(args.bits, cfg, dedupe=args.dedupe)
    print("bits: %d" % codebook.bits, file=out)
    print("antennas: %d" % cfg.n_elements, file=out)
    print("size: %d" % len(codebook), file=out)
    print("distinct_beams: %d" % distinct_beam_count(codebook), file=out)
    if args.angles:
        frame = pd.DataFrame(
            {
                "index": codebook.grid_indices,
                "angle_rad": codebook.angles,
                "angle_deg": np.degrees(codebook.angles),
            }
        )
        frame.to_csv(out, index=False, float_format="%.17g")
    return EXIT_OK


def cmd_channel_sample(args, out=sys.stdout):
    values = _values_from_args(args, CHANNEL)
    params = build_channel_params(values)
    realization = sample_channel(params, trial_stream(values["seed"], 0, 0))
    write_channel_csv(realization, params, args.out or out)
    return EXIT_OK


def build_parser():
    parser = ArgumentParser(
        prog="mmhybrid",
        description="Joint hybrid precoder/combiner design for mmWave MIMO links",
    )
    parser.add_argument("--version", action="version", version="%(prog)s " + __version__)
    commands = parser.add_subparsers(dest="command", metavar="COMMAND")
    commands.required = True

    sweep = commands.add_parser("sweep", help="Monte-Carlo sweep written as CSV")
    _add_config_flags(sweep, SWEEP)
    _add_common(sweep)
    sweep.set_defaults(handler=cmd_sweep)

    simulate = commands.add_parser(
        "simulate", help="Designs and metrics for a single channel realization"
    )
    _add_config_flags(simulate, LINK)
    _add_common(simulate)
    simulate.set_defaults(handler=cmd_simulate)

    codebook = commands.add_parser("codebook", help="Codebook tools")
    codebook_commands = codebook.add_subparsers(dest="codebook_command", metavar="ACTION")
    codebook_commands.required = True
    inspect = codebook_commands.add_parser("inspect", help="Codebook size and aliasing")
    inspect.add_argument("--bits", type=int, default=defaults.CODEBOOK_BITS,
                         help="Codebook bits (default: %d)" % defaults.CODEBOOK_BITS)
    inspect.add_argument("--antennas", type=int, default=defaults.ANTENNAS,
                         help="Array elements (default: %d)" % defaults.ANTENNAS)
    inspect.add_argument("--spacing", type=float, default=defaults.SPACING,
                         help="Element spacing in wavelengths (default: %g)" % defaults.SPACING)
    inspect.add_argument("--dedupe", action="store_true",
                         help="Drop aliased duplicate codewords (default: no)")
    inspect.add_argument("--angles", action="store_true",
                         help="Print every codeword angle as CSV (default: no)")
    _add_common(inspect)
    inspect.set_defaults(handler=cmd_codebook_inspect)

    channel = commands.add_parser("channel", help="Channel tools")
    channel_commands = channel.add_subparsers(dest="channel_command", metavar="ACTION")
    channel_commands.required = True
    sample = channel_commands.add_parser("sample", help="Dump one realization as CSV")
    _add_config_flags(sample, CHANNEL)
    sample.add_argument("--out", default=None, help="Output file (default: stdout)")
    _add_common(sample)
    sample.set_defaults(handler=cmd_channel_sample)
    return parser


def main(argv=None):
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        setup_logging(args.verbose)
        return args.handler(args, out=sys.stdout)
    except SystemExit as exc:
        # --help and --version
        return exc.code if isinstance(exc.code, int) else EXIT_OK
    except UsageError as exc:
        sys.stderr.write(exc.usage)
        sys.stderr.write("mmhybrid: error: %s\n" % exc)
        return EXIT_CONFIG_ERROR
    except (ConfigError, BitsOutOfRange) as exc:
        sys.stderr.write(parser.format_usage())
        sys.stderr.write("mmhybrid: config error: %s\n" % exc)
        return EXIT_CONFIG_ERROR
    except (HybridError, OSError) as exc:
        logger.error("%s", exc)
        sys.stderr.write("mmhybrid: error: %s\n" % exc)
        return EXIT_RUNTIME_ERROR


if __name__ == "__main__":
    sys.exit(main())
