"""Exception types shared across the package."""


class TdselectError(Exception):
    """Base class for all tdselect errors."""


class DataError(TdselectError):
    """Malformed or inconsistent input data: bad encoding, missing TAB,
    misaligned parallel sides. Maps to exit code 2 in the CLI."""


class TranslatorError(TdselectError):
    """A translator failed: nonzero exit, timeout, or an output that does
    not line up with its input. Maps to exit code 3 in the CLI.

    ``diagnostics`` carries captured stderr or other context, when available.
    """

    def __init__(self, message: str, diagnostics: str = ""):
        super().__init__(message)
        self.diagnostics = diagnostics
