"""Command registry for the trainer CLI."""

import argparse
from typing import Dict, List

from .base import BaseCommand


class CommandRegistry:
    """Registry for managing and executing subcommands."""

    def __init__(self):
        self._commands: Dict[str, BaseCommand] = {}

    def register(self, command: BaseCommand) -> None:
        """Register a command."""
        self._commands[command.name] = command

    def get(self, name: str) -> BaseCommand:
        """Get a command by name."""
        if name not in self._commands:
            raise ValueError(f"Command '{name}' not found. Available: {list(self._commands.keys())}")
        return self._commands[name]

    def execute(self, name: str, args: argparse.Namespace) -> int:
        """Execute a command by name with parsed arguments."""
        return self.get(name).execute(args)

    def add_subparsers(self, parser: argparse.ArgumentParser) -> None:
        """Attach one subparser per registered command."""
        subparsers = parser.add_subparsers(dest="command", metavar="COMMAND")
        for command in self._commands.values():
            sub = subparsers.add_parser(command.name, help=command.description, description=command.description)
            command.add_arguments(sub)

    def list_commands(self) -> List[str]:
        """List all registered command names."""
        return list(self._commands.keys())

    def __len__(self) -> int:
        return len(self._commands)

    def __repr__(self) -> str:
        return f"<CommandRegistry: {self.list_commands()}>"
