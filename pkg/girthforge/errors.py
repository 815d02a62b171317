"""Exception hierarchy.

Every error carries the process exit code the CLI reports for it:
1 validation, 2 resource, 3 I/O, 4 parse.
"""
from __future__ import annotations


class GirthforgeError(Exception):
    exit_code = 1


# --- validation (exit 1) ---

class NotPrimePower(GirthforgeError):
    def __init__(self, q: int):
        super().__init__(f"{q} is not a prime power")
        self.q = q


class OutOfRange(GirthforgeError):
    pass


class DivisionByZero(GirthforgeError, ZeroDivisionError):
    pass


class DimensionMismatch(GirthforgeError):
    pass


class BadParameters(GirthforgeError):
    pass


class SpecValidation(GirthforgeError):
    pass


class SelfDualityRequired(GirthforgeError):
    pass


class DualityNotVerified(GirthforgeError):
    pass


class TauParity(GirthforgeError):
    pass


class NotAMatchingOrdering(GirthforgeError):
    pass


class NoPerfectMatching(GirthforgeError):
    pass


class NoSuchEntry(GirthforgeError):
    pass


class WrongFieldCharacteristic(GirthforgeError):
    pass


# --- resource (exit 2) ---

class ResourceLimit(GirthforgeError):
    exit_code = 2


class BudgetExceeded(ResourceLimit):
    pass


class Overflow(GirthforgeError, OverflowError):
    exit_code = 2


# --- storage (exit 3) ---

class StorageError(GirthforgeError):
    exit_code = 3


# --- parse (exit 4) ---

class ParseError(GirthforgeError):
    exit_code = 4

    def __init__(self, message: str, line: int | None = None):
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)
        self.line = line
