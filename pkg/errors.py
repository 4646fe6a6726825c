"""
Exceptions raised by the toolkit
Each class carries the exit code the command line reports for it
"""


class HnKacError(Exception):
    """Base class for every error the toolkit raises on purpose"""
    exit_code = 1


class InputError(HnKacError, ValueError):
    """Malformed or out-of-domain input (bad vector, loop arrow, theta.alpha != 0, ...)"""
    exit_code = 2


class GuardExceeded(HnKacError):
    """A configured size guard would be exceeded"""
    exit_code = 3

    def __init__(self, guard, value, bound):
        self.guard = guard
        self.value = value
        self.bound = bound
        super().__init__(f"{guard} exceeded: {value} > {bound}")


class ConsistencyError(HnKacError, ArithmeticError):
    """An identity that holds by theory failed; always an implementation bug"""
    exit_code = 4


class NonExactDivision(ConsistencyError):
    """exact_div was asked to divide by a polynomial that does not divide"""
