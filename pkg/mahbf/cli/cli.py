"""
The CLI module is the entry point for the workbench.
It parses the command line, dispatches to the subcommand and turns its outcome into the
process exit status.
"""

import sys
from typing import Optional, Sequence

from mahbf import version
from mahbf.cli import output
from mahbf.cli.arg_parser import get_args
from mahbf.cli.commands import COMMAND_MAP
from mahbf.lib.exceptions import ConfigError, OutputError


def cli(argv: Optional[Sequence[str]] = None):
    """
    Main function (entrypoint) for the workbench CLI.
    """

    # Parse command line arguments, if --help is passed, it will exit here
    args = get_args(argv)

    output.default(f"mahbf workbench v{version.__VERSION__}: {args.command}")

    try:
        code = COMMAND_MAP[args.command](args)
    except (ConfigError, OutputError) as e:
        output.fail(f"Error: {e}")
        sys.exit(1)
    except KeyboardInterrupt:
        output.warn("Interrupted; results are incomplete.")
        sys.exit(1)

    if code:
        sys.exit(code)
