import sys
from unittest.mock import MagicMock, patch

import pytest

from mahbf.cli.cli import cli
from mahbf.lib.exceptions import ConfigError, OutputError

# `mahbf.cli.cli` resolves to the re-exported function on Python 3.10, so patch the
# submodule object directly.
cli_module = sys.modules["mahbf.cli.cli"]


@patch.object(cli_module, "output")
def test_cli_dispatches_to_command(mock_output):
    command = MagicMock(return_value=0)
    with patch.dict(cli_module.COMMAND_MAP, {"oracle": command}):
        cli(["oracle", "--scale", "0.5"])
    command.assert_called_once()
    args = command.call_args.args[0]
    assert args.command == "oracle" and args.scale == 0.5
    mock_output.fail.assert_not_called()


@patch.object(cli_module, "output")
def test_cli_exits_with_command_code(mock_output):
    with patch.dict(cli_module.COMMAND_MAP, {"sweep": MagicMock(return_value=1)}):
        with pytest.raises(SystemExit) as exit_info:
            cli(["sweep"])
    assert exit_info.value.code == 1


@pytest.mark.parametrize(
    "error",
    [ConfigError("Invalid configuration"), OutputError("Invalid configuration")],
)
@patch.object(cli_module, "output")
def test_cli_exits_on_config_or_output_error(mock_output, error):
    with patch.dict(
        cli_module.COMMAND_MAP, {"timing": MagicMock(side_effect=error)}
    ):
        with pytest.raises(SystemExit) as exit_info:
            cli(["timing"])
    assert exit_info.value.code == 1
    mock_output.fail.assert_called_once_with("Error: Invalid configuration")


@patch.object(cli_module, "output")
def test_cli_reports_interrupt(mock_output):
    command = MagicMock(side_effect=KeyboardInterrupt)
    with patch.dict(cli_module.COMMAND_MAP, {"converge": command}):
        with pytest.raises(SystemExit):
            cli(["converge"])
    mock_output.warn.assert_called_once_with("Interrupted; results are incomplete.")


def test_cli_requires_a_command():
    with pytest.raises(SystemExit):
        cli([])
