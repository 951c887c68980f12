#!/usr/bin/env python3
"""
gm - Gauss-Manin connection calculator

Computes the data attached to an isolated hypersurface singularity at the
origin: Milnor number, monomial basis of the Milnor algebra, the t-action
on the Brieskorn lattice, the Gauss-Manin connection and its residues and
monodromy in the quasi-homogeneous case, and first-order spectral data in
general.

Usage:
    gm <command> "<polynomial>" [--prec-s N] [--prec-x D] [--prec-t N]
       [--format json|table] [--no-stability-check]

Exit codes: 0 success, 1 usage or parse error, 2 mathematical verdict.
"""

import argparse
import logging
import sys

from config import Config
from errors import GaussManinError, UsageError
from gm_service import COMMANDS, FORMATS, GaussManinService, RunConfig
from report import render

logger = logging.getLogger(__name__)


def configure_logging():
    handlers = [logging.StreamHandler(sys.stderr)]
    if Config.LOG_FILE:
        handlers.append(logging.FileHandler(Config.LOG_FILE))
    logging.basicConfig(
        level=getattr(logging, Config.LOG_LEVEL, logging.WARNING),
        format='%(asctime)s - %(name)s - %(levelname)s - %(message)s',
        handlers=handlers,
    )


class ArgumentParser(argparse.ArgumentParser):
    """argparse reporting errors as UsageError instead of exiting with status 2"""

    def error(self, message):
        raise UsageError(message)


def build_parser() -> ArgumentParser:
    parser = ArgumentParser(prog="gm", description="Gauss-Manin data of an isolated hypersurface singularity")
    parser.add_argument("command", choices=COMMANDS)
    parser.add_argument("polynomial", help='polynomial in x, y, z, w or x0..x9, e.g. "x^2+y^3"')
    parser.add_argument("--prec-s", type=int, default=None, help="s-precision N (default from GM_DEFAULT_PREC)")
    parser.add_argument("--prec-x", type=int, default=None, help="x-degree bound D (default max(10, 3*deg f))")
    parser.add_argument("--prec-t", type=int, default=None, help="t-precision (default from GM_DEFAULT_PREC)")
    parser.add_argument("--format", choices=FORMATS, default="json")
    parser.add_argument("--no-stability-check", action="store_true",
                        help="skip the recomputation at (D + margin, N + margin)")
    return parser


class GaussManinApp:
    def __init__(self, argv=None):
        self.argv = argv
        self.service = None

    def run(self) -> int:
        """Parse arguments, run the pipeline and print the report"""
        try:
            Config.validate()
            args = build_parser().parse_args(self.argv)
            run_config = RunConfig(
                prec_s=args.prec_s if args.prec_s is not None else Config.DEFAULT_PREC,
                prec_x=args.prec_x if args.prec_x is not None else Config.PREC_X,
                prec_t=args.prec_t if args.prec_t is not None else Config.DEFAULT_PREC,
                format=args.format,
                stability_check=not args.no_stability_check,
            )
            self.service = GaussManinService(run_config)
            report = self.service.run(args.command, args.polynomial)
            print(render(report, run_config.format))
            return 0

        except GaussManinError as e:
            logger.error(f"{type(e).__name__}: {e}")
            return e.exit_code
        except ValueError as e:
            logger.error(f"Configuration error: {e}")
            return 1


def main(argv=None):
    """Main entry point"""
    configure_logging()
    app = GaussManinApp(argv)
    try:
        return app.run()
    except KeyboardInterrupt:
        logger.info("Interrupted by user")
        return 1


if __name__ == "__main__":
    sys.exit(main())
