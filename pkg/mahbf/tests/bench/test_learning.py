import pytest

from mahbf.bench import resolve_spec
from mahbf.bench.sweep import SweepPoint, run_sweep_point
from mahbf.madrl import AblationCase

SEEDS = range(10)


@pytest.mark.slow
def test_desk_training_improves_on_start_and_random_phases(tmp_path):
    spec = resolve_spec("desk", overrides={"output_dir": tmp_path})
    assert spec.trainer.max_iters == 300
    rows = [
        run_sweep_point(spec, SweepPoint(seed, 5.0, 2, AblationCase.CASE3, seed, 0))[0]
        for seed in SEEDS
    ]
    assert all(row["status"] in ("converged", "max_iters") for row in rows)
    beats_start = sum(row["mahbf_rate"] > row["first_rate"] for row in rows)
    beats_random = sum(row["mahbf_rate"] > row["random_phase_rate"] for row in rows)
    assert beats_start >= 8, rows
    assert beats_random >= 8, rows
    assert all(row["mahbf_rate"] <= row["full_digital_rate"] + 1e-9 for row in rows)
