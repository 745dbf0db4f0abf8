"""Exception hierarchy. ``exit_code`` is what the CLI returns for each family."""


class TuringNetError(Exception):
    exit_code = 1


class InputError(TuringNetError):
    """Unreadable or unwritable input/output."""

    exit_code = 2


class ParseError(TuringNetError):
    exit_code = 3


class ValidationError(TuringNetError, ValueError):
    exit_code = 4


class NumericError(TuringNetError, ArithmeticError):
    exit_code = 5


class DblpParseError(ParseError):
    def __init__(self, message, byte_offset, line=None):
        super().__init__(f"{message} (byte offset {byte_offset}, line {line})")
        self.byte_offset = byte_offset
        self.line = line


class JsonlParseError(ParseError):
    def __init__(self, message, line_no, field=None):
        super().__init__(f"line {line_no}: {message}")
        self.line_no = line_no
        self.field = field


class GraphFormatError(ParseError):
    """Bad magic, version mismatch or checksum failure in a graph cache file."""


class LaureateResolutionError(ValidationError):
    def __init__(self, unresolved, ambiguous):
        parts = []
        if unresolved:
            parts.append("not found: " + ", ".join(unresolved))
        if ambiguous:
            parts.append(
                "ambiguous: "
                + ", ".join(f"{name} -> {keys}" for name, keys in ambiguous.items())
            )
        super().__init__("; ".join(parts))
        self.unresolved = list(unresolved)
        self.ambiguous = dict(ambiguous)


class ConvergenceError(NumericError):
    def __init__(self, iterations, residual):
        super().__init__(
            f"power iteration did not converge after {iterations} iterations "
            f"(last residual {residual:.3e})"
        )
        self.iterations = iterations
        self.residual = residual


class UndefinedCorrelationError(NumericError):
    pass
