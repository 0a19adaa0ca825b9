"""``sta-thermo-lab <command> --config <path> [--out DIR] [--seed N] [--steps N] [--grid N]``

Exit status 0 on success, 1 on a numerical failure, 2 on a configuration error.
"""

from __future__ import annotations

import argparse
import logging
import sys
from pathlib import Path

from .cdengine import FrameError
from .config import COMMANDS, ConfigError, load_scenario
from .frontier import ConvergenceError, InfeasibleTarget
from .propagator import EvolutionError
from .scenarios import VerificationFailed, run

EXIT_OK, EXIT_NUMERIC, EXIT_CONFIG = 0, 1, 2
NUMERICAL_ERRORS = (FrameError, EvolutionError, ConvergenceError, InfeasibleTarget, VerificationFailed,
                    FloatingPointError, ArithmeticError)

log = logging.getLogger("sta_thermo_lab")


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_CONFIG, f"{self.prog}: error: {message}\n")


def _u64(text: str) -> int:
    value = int(text)
    if not 0 <= value < 2**64:
        raise argparse.ArgumentTypeError("seed must fit in an unsigned 64-bit integer")
    return value


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="sta-thermo-lab", description="Shortcut-to-adiabaticity thermodynamics scenarios.")
    parser.add_argument("command", choices=COMMANDS)
    parser.add_argument("--config", required=True, type=Path, help="scenario file (INI)")
    parser.add_argument("--out", type=Path, default=Path("."), help="output directory (default: cwd)")
    parser.add_argument("--seed", type=_u64, help="override [run] seed")
    parser.add_argument("--steps", type=int, help="override [run] steps (propagator)")
    parser.add_argument("--grid", type=int, help="override [run] grid (eigenframe points)")
    parser.add_argument("-v", "--verbose", action="store_true")
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        scenario = load_scenario(args.config, args.command)
        if args.seed is not None:
            scenario.seed = args.seed
        if args.steps is not None:
            scenario.steps = args.steps
        if args.grid is not None:
            scenario.grid = args.grid
        if scenario.steps < 100:
            raise ConfigError(f"steps: need at least 100, got {scenario.steps}")
        if scenario.grid < 3 or scenario.grid % 2 == 0:
            raise ConfigError(f"grid: need an odd count >= 3, got {scenario.grid}")
        try:
            args.out.mkdir(parents=True, exist_ok=True)
        except OSError as exc:
            raise ConfigError(f"--out: cannot create {args.out}: {exc.strerror}") from None
        result = run(scenario, args.out)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except NUMERICAL_ERRORS as exc:
        print(f"numerical failure: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_NUMERIC

    print(f"csv  {result.csv_path}  ({len(result.rows)} rows)")
    if result.plot_path is not None:
        print(f"svg  {result.plot_path}")
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
