"""Gradient-check diagnostic command."""

import argparse
import logging

from nn import GRADCHECK_CASES, run_gradcheck

from .base import BaseCommand

logger = logging.getLogger(__name__)

EXIT_NUMERIC = 3


class GradcheckCommand(BaseCommand):
    """Compare autodiff gradients with central differences for every op."""

    name = "gradcheck"
    description = "Run the finite-difference gradient checks"

    def add_arguments(self, parser: argparse.ArgumentParser) -> None:
        parser.add_argument("--seeds", type=int, default=10, help="Random draws per op (default: 10)")
        parser.add_argument(
            "--only", nargs="+", choices=list(GRADCHECK_CASES), default=None,
            help="Restrict to these ops",
        )

    def execute(self, args: argparse.Namespace) -> int:
        results = run_gradcheck(args.only, seeds=args.seeds)
        print("=" * 50)
        print("GRADIENT CHECK")
        print("=" * 50)
        for result in results:
            print(result)
        print("=" * 50)

        failed = [r for r in results if not r.passed]
        if failed:
            first = failed[0]
            print(f"FAILED: {first.name} (relative error {first.max_rel_error:.3e})")
            return EXIT_NUMERIC
        print(f"All {len(results)} checks passed")
        return 0
