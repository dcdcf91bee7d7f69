"""Exception types shared across the package."""


class RSPError(Exception):
    """Base class for all errors raised by this package."""


class PresentationSyntaxError(RSPError, ValueError):
    def __init__(self, message, line=0, column=0):
        self.line = line
        self.column = column
        super().__init__(f"line {line}, column {column}: {message}")


class PresentationValidationError(RSPError, ValueError):
    def __init__(self, violations):
        self.violations = list(violations)
        lines = "\n".join(str(v) for v in self.violations)
        super().__init__(f"{len(self.violations)} violation(s):\n{lines}")


class CollectionError(RSPError):
    """Collection could not produce a normal form."""


class StepLimitExceeded(CollectionError):
    def __init__(self, limit):
        self.limit = limit
        super().__init__(
            f"collection exceeded {limit} rewrite steps; the sub-presentation is "
            "likely inconsistent or inverse-conjugate entries are missing")


class MissingInverse(CollectionError):
    def __init__(self, x, y):
        self.pair = (x, y)
        super().__init__(f"no inverse conjugate relation for generator pair {(x, y)}")


class InverseDerivationError(RSPError):
    """Inverse conjugate relations could not be derived for some generator.

    ``det`` is set when the cause is a singular section matrix.
    """

    def __init__(self, message, z, section=None, det=None):
        self.z = z
        self.section = section
        self.det = det
        super().__init__(message)


class ExtensionError(RSPError, ValueError):
    """A cyclic extension was requested whose preconditions do not hold."""
