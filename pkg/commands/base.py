"""Base class for all CLI subcommands."""

import argparse
from abc import ABC, abstractmethod


class BaseCommand(ABC):
    """Abstract base class for trainer subcommands."""

    name: str
    description: str

    @abstractmethod
    def add_arguments(self, parser: argparse.ArgumentParser) -> None:
        """
        Declare the subcommand's flags.

        Args:
            parser: Subparser created for this command
        """
        pass

    @abstractmethod
    def execute(self, args: argparse.Namespace) -> int:
        """
        Run the subcommand.

        Args:
            args: Parsed command-line arguments

        Returns:
            Process exit code
        """
        pass

    def __repr__(self) -> str:
        return f"<Command: {self.name}>"
