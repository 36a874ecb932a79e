from mahbf.bench.convergence import ConvergenceReport, run_convergence
from mahbf.bench.oracle import SuiteResult, run_oracles
from mahbf.bench.spec import ExperimentSpec, resolve_spec
from mahbf.bench.sweep import SweepReport, run_sweep
from mahbf.bench.timing import TimingReport, run_timing

__all__ = [
    "ConvergenceReport",
    "ExperimentSpec",
    "SuiteResult",
    "SweepReport",
    "TimingReport",
    "resolve_spec",
    "run_convergence",
    "run_oracles",
    "run_sweep",
    "run_timing",
]
