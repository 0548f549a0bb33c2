"""
Command-line frontend: run configuration, subcommand registry and runner.
"""

from .config import RunConfig, load_run_config, read_config_file
from .commands import COMMANDS, CommandResult, get_command
from .runner import build_parser, run

__all__ = [
    'RunConfig',
    'load_run_config',
    'read_config_file',
    'COMMANDS',
    'CommandResult',
    'get_command',
    'build_parser',
    'run',
]
