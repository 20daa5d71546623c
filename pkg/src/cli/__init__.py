from src.cli.commands import CommandResult, build_parser, run
from src.cli.logging import configure_logging

__all__ = ["CommandResult", "build_parser", "configure_logging", "run"]
