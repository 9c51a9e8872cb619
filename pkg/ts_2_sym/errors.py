class SymbolizerError(Exception):
    """Base error of the ts_2_sym package. Every subclass carries the exit code the command line tools
    return when the error reaches them."""
    exit_code = 1


class SeriesError(SymbolizerError, ValueError):
    """Invalid time series (non-finite sample, too short, wrong shape)"""
    exit_code = 2


class SeriesFileError(SymbolizerError):
    exit_code = 2

    def __init__(self, path: str, line: int, column: int, reason: str):
        """Parse error inside a CSV, symbols or token file

        Args:
            path (str): file that failed to parse
            line (int): 1-based line number (0 when unknown)
            column (int): 1-based column number (0 when unknown)
            reason (str): what went wrong
        """
        self.path = path
        self.line = line
        self.column = column
        self.reason = reason
        super().__init__(f'{path}:{line}:{column}: {reason}')


class ModelError(SymbolizerError):
    """Unreadable or inconsistent model JSON"""
    exit_code = 2


class AlphabetError(SymbolizerError):
    """The alphabet cannot name every cluster"""
    exit_code = 3

    def __init__(self, required: int, available: int):
        self.required = required
        self.available = available
        super().__init__(f'Alphabet exhausted: {required} clusters require {required} symbols, '
                         f'alphabet has {available}')


class TokenError(SymbolizerError):
    """Duplicate, empty or whitespace-containing token in an external token list"""
    exit_code = 2


class DecodeError(SymbolizerError):
    exit_code = 4

    def __init__(self, symbol: str, position: int):
        """A symbol that the model does not know. This is how a predictor's hallucinated symbol is caught

        Args:
            symbol (str): offending symbol
            position (int): 0-based position inside the symbol sequence
        """
        self.symbol = symbol
        self.position = position
        super().__init__(f'Unknown symbol {symbol!r} at position {position}')


class BoundViolation(SymbolizerError):
    """A verified reconstruction or digitization bound failed"""
    exit_code = 5
