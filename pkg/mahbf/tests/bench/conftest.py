import pytest

from mahbf.bench import ExperimentSpec
from mahbf.channel import ChannelConfig
from mahbf.madrl import AblationCase, TrainerConfig
from mahbf.precoding import SystemConfig


@pytest.fixture(autouse=True)
def no_user_experiment_file(mocker, tmp_path):
    mocker.patch(
        "mahbf.bench.spec.DEFAULT_EXPERIMENT_FILE", tmp_path / "absent" / "x.yaml"
    )


@pytest.fixture
def small_spec(tmp_path):
    return ExperimentSpec(
        channel=ChannelConfig(n_tx=4, n_users=2, n_clusters=2, n_rays=3),
        system=SystemConfig(n_rf=2, snr_db=5.0),
        trainer=TrainerConfig(max_iters=3, hidden=(8, 6), minibatch=4, buffer_size=10),
        snr_grid=[0.0, 10.0],
        agent_counts=[1, 2],
        seeds=[0],
        output_dir=tmp_path / "out",
        baseline_draws=2,
        sweep_cases=[AblationCase.CASE3],
        cases=list(AblationCase),
        workers=1,
    )
