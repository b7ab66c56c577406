"""CLI subcommands for the trainer."""

from .base import BaseCommand
from .data import ManifestCommand, PreprocessCommand, SynthCommand
from .diagnostics import GradcheckCommand
from .registry import CommandRegistry
from .scoring import EvaluateCommand, ExportCurvesCommand, PredictCommand
from .training import AblateCommand, TrainCommand


def create_registry() -> CommandRegistry:
    """Create a registry with every subcommand."""
    registry = CommandRegistry()
    registry.register(ManifestCommand())
    registry.register(PreprocessCommand())
    registry.register(TrainCommand())
    registry.register(EvaluateCommand())
    registry.register(PredictCommand())
    registry.register(ExportCurvesCommand())
    registry.register(SynthCommand())
    registry.register(GradcheckCommand())
    registry.register(AblateCommand())
    return registry


__all__ = [
    "AblateCommand",
    "BaseCommand",
    "CommandRegistry",
    "EvaluateCommand",
    "ExportCurvesCommand",
    "GradcheckCommand",
    "ManifestCommand",
    "PredictCommand",
    "PreprocessCommand",
    "SynthCommand",
    "TrainCommand",
    "create_registry",
]
