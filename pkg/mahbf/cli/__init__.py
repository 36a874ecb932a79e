from mahbf.cli.cli import cli

__all__ = ["cli"]
