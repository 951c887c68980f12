import logging
from dataclasses import dataclass
from typing import Optional, Tuple

from brieskorn import (
    ReductionContext,
    TMatrixResult,
    certified_t_matrix,
    gm_connection_qh,
    qh_exponents,
    singularity_context,
    spectral_first_order,
    stable_t_matrix,
)
from config import Config
from connection import Verdict, monodromy_orders, monodromy_rotation_numbers, residue, saturate
from errors import UnstableTruncation, UsageError
from poly_parser import parse_polynomial
from series_core import MultiPoly, char_poly, rational_roots

logger = logging.getLogger(__name__)

COMMANDS = ("milnor", "basis", "tmatrix", "connection", "saturate", "spectrum", "all")
FORMATS = ("json", "table")


@dataclass
class RunConfig:
    prec_s: int = Config.DEFAULT_PREC
    prec_x: Optional[int] = None
    prec_t: int = Config.DEFAULT_PREC
    format: str = "json"
    stability_check: bool = True

    def validate(self):
        """Validate precisions and output format"""
        for name in ("prec_s", "prec_t", "prec_x"):
            value = getattr(self, name)
            if value is None and name == "prec_x":
                continue
            if not isinstance(value, int) or value < 2:
                raise UsageError(f"--{name.replace('_', '-')} must be an integer >= 2, got {value!r}")
        if self.format not in FORMATS:
            raise UsageError(f"--format must be one of {', '.join(FORMATS)}, got {self.format!r}")
        return True


class GaussManinService:
    def __init__(self, run_config: RunConfig):
        run_config.validate()
        self.config = run_config
        self.margin = Config.STABILITY_MARGIN

    def run(self, command: str, text: str) -> dict:
        """Execute one pipeline and return the internal report"""
        if command not in COMMANDS:
            raise UsageError(f"unknown command {command!r}; expected one of {', '.join(COMMANDS)}")
        f = self._parse(text)
        logger.info(f"Running '{command}' on f = {f}")

        context, wide_context = self._context(f)
        report = self._base_report(context)

        if command == "milnor":
            return report

        report["basis"] = context.report.basis_strings()
        if command == "basis":
            return report

        if command in ("tmatrix", "spectrum", "all"):
            context, tmatrix = self._t_matrix(f, context, wide_context)
            report["t_matrix"] = tmatrix.matrix
            report["precisions"]["s"] = tmatrix.precision
            report["precisions"]["x"] = context.degree_bound
            if command in ("spectrum", "all"):
                self._add_spectrum(report, tmatrix)

        if command in ("connection", "saturate", "all"):
            if command == "connection" or context.report.weights is not None:
                self._add_connection(report, context, saturate_it=(command != "connection"))
            else:
                logger.info("f is not quasi-homogeneous; no t-connection matrix, verdict inconclusive")
                report["verdict"] = Verdict.INCONCLUSIVE.value

        return report

    def _parse(self, text: str) -> MultiPoly:
        f = parse_polynomial(text)
        if not f.variables:
            raise UsageError("the polynomial must involve at least one variable")
        return f

    def _context(self, f: MultiPoly) -> Tuple[ReductionContext, Optional[ReductionContext]]:
        """Context at D and, with the stability check on, the one at D + margin"""
        context = singularity_context(f, self.config.prec_x)
        if not self.config.stability_check:
            return context, None
        wide = singularity_context(f, context.degree_bound + self.margin)
        if wide.report.mu != context.report.mu:
            raise UnstableTruncation("mu", f"{context.report.mu} vs {wide.report.mu}")
        if wide.report.basis_monomials != context.report.basis_monomials:
            raise UnstableTruncation("basis")
        return context, wide

    def _t_matrix(self, f: MultiPoly, context: ReductionContext,
                  wide_context: Optional[ReductionContext]) -> TMatrixResult:
        if self.config.stability_check:
            return stable_t_matrix(f, context.degree_bound, self.config.prec_s, self.margin,
                                   context=context, wide_context=wide_context)
        return certified_t_matrix(f, context, self.config.prec_s)

    def _base_report(self, context: ReductionContext) -> dict:
        report = {
            "mu": context.report.mu,
            "precisions": {"s": self.config.prec_s, "x": context.degree_bound, "t": self.config.prec_t},
            "ranks": {"h0": 1, "hn": context.report.mu},
        }
        if context.report.weights is not None:
            report["weights"] = context.report.weights
        return report

    def _add_spectrum(self, report: dict, tmatrix):
        data = spectral_first_order(tmatrix)
        report["a0"] = data.a0
        report["a1"] = data.a1
        report["nilpotent_a0"] = data.nilpotent_a0
        if data.exponents is not None:
            report["exponents"] = data.exponents

    def _add_connection(self, report: dict, context: ReductionContext, saturate_it: bool):
        connection = gm_connection_qh(context.f, context, self.config.prec_t)
        report["connection"] = connection
        report.setdefault("exponents", sorted(qh_exponents(context.report)))
        if not saturate_it:
            return
        result = saturate(connection)
        report["verdict"] = result.verdict.value
        if result.verdict is Verdict.REGULAR:
            res = residue(connection, result.lattice)
            report["residues"], _ = rational_roots(char_poly(res))
            report["rotations"] = monodromy_rotation_numbers(res)
            report["orders"] = monodromy_orders(report["rotations"])
