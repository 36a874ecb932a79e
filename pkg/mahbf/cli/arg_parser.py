import argparse
from typing import Callable, Optional, Sequence

from mahbf import version
from mahbf.cli.constants import DESCRIPTION, EPILOG
from mahbf.config import PRESET_ALIASES, Preset


def comma_list(cast: Callable[[str], float | int]) -> Callable[[str], list]:
    def parse(text: str) -> list:
        try:
            return [cast(item) for item in text.split(",") if item.strip()]
        except ValueError as e:
            raise argparse.ArgumentTypeError(f"invalid list '{text}': {e}") from e

    return parse


def _add_experiment_options(parser: argparse.ArgumentParser) -> None:
    parser.add_argument(
        "-c",
        "--config",
        metavar="FILE",
        help="YAML experiment file (default: <MAHBF_CONFIG_DIR>/experiment.yaml "
        "when present).",
    )
    parser.add_argument(
        "-p",
        "--preset",
        choices=[*(p.value for p in Preset), *PRESET_ALIASES],
        help="base configuration to start from (default: MAHBF_PRESET or 'desk'); "
        "'full' is an alias of 'paper'.",
    )
    parser.add_argument(
        "-s",
        "--seed",
        metavar="SEEDS",
        type=comma_list(int),
        help="comma-separated seeds, e.g. 0,1,2.",
    )
    parser.add_argument(
        "-o", "--out", metavar="DIR", help="directory the result files are written to."
    )
    parser.add_argument(
        "--snr",
        metavar="DB",
        type=comma_list(float),
        help="comma-separated SNR grid in dB.",
    )
    parser.add_argument(
        "-a",
        "--agents",
        metavar="Y",
        type=comma_list(int),
        help="comma-separated agent counts.",
    )
    parser.add_argument(
        "-w",
        "--workers",
        type=int,
        help="worker processes for independent points (timing always runs serially).",
    )


def get_args(argv: Optional[Sequence[str]] = None) -> argparse.Namespace:
    parser = argparse.ArgumentParser(
        prog="mahbf",
        description=f"{DESCRIPTION} v{version.__VERSION__}",
        epilog=EPILOG,
        formatter_class=argparse.RawDescriptionHelpFormatter,
    )
    subparsers = parser.add_subparsers(dest="command", metavar="COMMAND", required=True)

    sweep = subparsers.add_parser(
        "sweep", help="sum rate over the SNR grid and agent counts, with baselines."
    )
    _add_experiment_options(sweep)

    converge = subparsers.add_parser(
        "converge", help="convergence traces of the ablation cases."
    )
    _add_experiment_options(converge)

    timing = subparsers.add_parser(
        "timing", help="wall-clock cost per phase and agent count."
    )
    _add_experiment_options(timing)

    oracle = subparsers.add_parser(
        "oracle", help="run the brute-force verification suites."
    )
    oracle.add_argument(
        "-s", "--seed", metavar="SEED", type=int, default=0, help="root seed."
    )
    oracle.add_argument(
        "--scale",
        type=float,
        default=1.0,
        help="multiply every suite's instance count (default 1.0).",
    )
    oracle.add_argument(
        "--suite",
        action="append",
        metavar="NAME",
        help="run only this suite (repeatable): zero_forcing, water_filling, "
        "gradients, sum_tree.",
    )

    return parser.parse_args(argv)
