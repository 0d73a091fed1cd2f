"""
Exception hierarchy. The three families map onto the runner's exit codes.
"""

import config


class NeronkitError(Exception):
    exit_code = config.EXIT_CHECK_FAILED


# --- input errors (exit 3) ---

class InputError(NeronkitError):
    exit_code = config.EXIT_INPUT_ERROR


class PolySyntaxError(InputError):
    def __init__(self, message, offset, text=""):
        super().__init__(f"{message} at offset {offset}")
        self.offset = offset
        self.text = text


class UnknownVariable(InputError):
    def __init__(self, name, offset=None):
        where = f" at offset {offset}" if offset is not None else ""
        super().__init__(f"Unknown variable '{name}'{where}")
        self.name = name
        self.offset = offset


class InvalidSection(InputError):
    pass


class NotOnSpecialFiber(InputError):
    pass


class NotThroughCenter(InputError):
    pass


class PointOutsideWitness(InputError):
    pass


class AssertionMissing(InputError):
    pass


class JobError(InputError):
    pass


# --- resource guard (exit 4) ---

class ResourceCapExceeded(NeronkitError):
    exit_code = config.EXIT_RESOURCE_CAP


# --- mathematical failures (exit 2) ---

class MathError(NeronkitError):
    exit_code = config.EXIT_CHECK_FAILED


class NotIntegral(MathError, ArithmeticError):
    """Result of an operation in the valuation ring has negative valuation."""


class DivisionByZeroPoly(MathError, ZeroDivisionError):
    pass


class RankDeficient(MathError):
    pass


class EmptyWitness(MathError):
    pass


class NonDenseSlice(MathError):
    pass


class IterationCapExceeded(MathError):
    pass


class Unsupported(MathError):
    pass


class UnsupportedComponent(Unsupported):
    pass


class NotRegular(MathError):
    pass


class LemmaViolation(MathError):
    pass
