"""
Exception hierarchy shared by every layer.

Each class carries the process exit code the command-line front end maps it
to: 1 for usage and contract errors, 2 for mathematical verdicts.
"""


class GaussManinError(Exception):
    exit_code = 1


# Usage layer

class UsageError(GaussManinError):
    exit_code = 1


class ParseError(UsageError):
    def __init__(self, position, expected, text=None):
        self.position = position
        self.expected = tuple(sorted(set(expected)))
        self.text = text
        found = ""
        if text is not None:
            raw = text.encode("utf-8")
            found = f", found {raw[position:position + 1].decode('utf-8', 'replace')!r}" if position < len(raw) else ", found end of input"
        super().__init__(f"parse error at byte {position}: expected one of {', '.join(self.expected)}{found}")


# Mathematical verdicts

class VerdictError(GaussManinError):
    exit_code = 2


class NonIsolated(VerdictError):
    def __init__(self, degree_bound):
        self.degree_bound = degree_bound
        super().__init__(
            f"standard monomials do not stabilize below degree {degree_bound}: "
            f"singularity is not isolated or the degree bound is too small"
        )


class UnstableTruncation(VerdictError):
    def __init__(self, field, detail=""):
        self.field = field
        super().__init__(f"result '{field}' changed when the truncation bounds were raised{': ' + detail if detail else ''}")


class NotQuasiHomogeneous(VerdictError):
    pass


class NotSingular(VerdictError):
    pass


# Library contract errors

class MixedVariable(GaussManinError, ValueError):
    pass


class NotInvertible(GaussManinError, ArithmeticError):
    pass


class NonSquare(GaussManinError, ValueError):
    pass


class TopDegree(GaussManinError, ValueError):
    pass


class DegreeOverflow(GaussManinError, ValueError):
    pass


class BasisMismatch(GaussManinError, ValueError):
    pass


class DegreeBoundExceeded(GaussManinError, ValueError):
    pass


class DimensionMismatch(GaussManinError, ValueError):
    pass


class NotSaturated(GaussManinError, ValueError):
    pass


class LatticeError(GaussManinError, ValueError):
    pass
