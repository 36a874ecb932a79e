import argparse
from pathlib import Path
from typing import Protocol

from mahbf.bench import (
    ExperimentSpec,
    resolve_spec,
    run_convergence,
    run_oracles,
    run_sweep,
    run_timing,
)
from mahbf.bench.oracle import SUITES
from mahbf.bench.timing import DISCLAIMER
from mahbf.cli import output
from mahbf.cli.constants import ORDERING
from mahbf.lib.exceptions import ConfigError


class Command(Protocol):
    """
    Command protocol for the subcommands.
    """

    def __call__(self, args: argparse.Namespace) -> int:
        """
        Run the command.

        :param args: Parsed command-line arguments.
        :return: Process exit code.
        """
        ...


def spec_from_args(args: argparse.Namespace) -> ExperimentSpec:
    """
    Resolve the experiment from the preset, the experiment file and the command line.
    """
    overrides = {
        "seeds": args.seed,
        "output_dir": args.out,
        "snr_grid": args.snr,
        "agent_counts": args.agents,
        "workers": args.workers,
    }
    return resolve_spec(args.preset, args.config, overrides)


def _written(paths: list[Path]) -> None:
    for path in paths:
        output.default(f"  {path}")


class Sweep(Command):
    """
    Sum rate of the trained precoders against the random-phase and full-digital
    references, per SNR and agent count.
    """

    def __call__(self, args: argparse.Namespace) -> int:
        spec = spec_from_args(args)
        report = run_sweep(spec)

        output.heading("Mean sum rate (bits/s/Hz)")
        output.table(
            [
                "snr_db",
                "n_agents",
                "case",
                "points",
                "failed",
                "mahbf_mean",
                "random_phase_mean",
                "full_digital_mean",
            ],
            report.summary,
        )
        output.heading("Files")
        _written(report.paths)
        if not report.ok:
            output.warn(f"{report.failures} of {len(report.rows)} points failed")
            return 1
        return 0


sweep: Command = Sweep()


class Converge(Command):
    """
    Convergence of the ablation cases on shared channels.
    """

    def __call__(self, args: argparse.Namespace) -> int:
        spec = spec_from_args(args)
        report = run_convergence(spec)
        medians = report.median_iterations()

        output.heading("Median iterations to the shared level")
        output.table(
            ["case", "median"],
            [{"case": case, "median": median} for case, median in medians.items()],
        )
        present = [case for case in ORDERING if medians.get(case) is not None]
        if len(present) > 1:
            values = [medians[case] for case in present]
            holds = all(a <= b for a, b in zip(values, values[1:]))
            output.inform(
                f"{' <= '.join(present)}: {'holds' if holds else 'does not hold'}"
            )
        output.heading("Files")
        _written(report.paths)
        if not report.ok:
            output.warn(f"{report.failures} of {len(report.rows)} runs failed")
            return 1
        return 0


converge: Command = Converge()


class Timing(Command):
    """
    Median wall-clock time per phase for each agent count.
    """

    def __call__(self, args: argparse.Namespace) -> int:
        spec = spec_from_args(args)
        report = run_timing(spec)

        output.heading(f"Timing at {spec.timing_snr_db} dB")
        output.default(report.hardware)
        output.warn(DISCLAIMER)
        output.table(
            [
                "n_agents",
                "runs",
                "act_s",
                "env_s",
                "update_s",
                "total_s",
                "iterations_to_convergence",
                "iterations_to_level",
            ],
            report.medians,
        )
        one, two = report.median_iterations(1), report.median_iterations(2)
        if one is not None and two is not None:
            output.inform(
                f"Median iterations to the shared level: Y=2 {two:g} vs Y=1 {one:g} "
                f"({'fewer' if two < one else 'not fewer'} with two agents)"
            )
        output.heading("Files")
        _written(report.paths)
        if not report.ok:
            output.warn(f"{report.failures} of {len(report.runs)} runs failed")
            return 1
        return 0


timing: Command = Timing()


class Oracle(Command):
    """
    Brute-force checks of zero forcing, water-filling, gradients and the sum-tree.
    """

    def __call__(self, args: argparse.Namespace) -> int:
        unknown = set(args.suite or []) - set(SUITES)
        if unknown:
            raise ConfigError(f"Unknown suite(s): {', '.join(sorted(unknown))}")
        if args.scale <= 0:
            raise ConfigError("--scale must be positive")

        results = run_oracles(seed=args.seed, scale=args.scale, names=args.suite)
        for result in results:
            output.verdict(result.name, result.passed, result.detail, result.elapsed)
        failed = [r.name for r in results if not r.passed]
        if failed:
            output.fail(f"Failed: {', '.join(failed)}")
            return 1
        output.success("All suites passed")
        return 0


oracle: Command = Oracle()


COMMAND_MAP: dict[str, Command] = {
    "sweep": sweep,
    "converge": converge,
    "timing": timing,
    "oracle": oracle,
}
