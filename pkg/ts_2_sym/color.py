import sys
from os import environ


class Color:
    def __init__(self, stream=None):
        """Console colouring for status messages and table headers. Colour is dropped when the stream is not a
        terminal or NO_COLOR is set, so redirected command output stays byte-identical between runs.

        Args:
            stream (TextIO, optional): stream the message is written to. Defaults to sys.stdout.
        """
        self.stream = stream or sys.stdout

    @property
    def colors(self) -> dict:
        """Foreground colour codes

        Returns:
            dict: color options
        """
        return {
            'red': '31m',
            'green': '32m',
            'yellow': '33m',
            'blue': '34m',
            'magenta': '35m',
            'cyan': '36m',
            'white': '37m',
        }

    @property
    def formatting(self) -> dict:
        """Formatting codes

        Returns:
            dict: formatting options
        """
        return {
            'reset': '00m',
            'default': '10m',
            'bold': '01m',
            'dim': '02m',
            'italic': '03m',
            'underline': '04m',
        }

    @property
    def statuses(self) -> dict:
        """Colour used for each bound report status

        Returns:
            dict: status to colour
        """
        return {'ok': 'green', 'violated': 'red', 'undefined': 'yellow'}

    @property
    def enabled(self) -> bool:
        """Whether escape codes should be written

        Returns:
            bool: True when the stream is a terminal and NO_COLOR is unset
        """
        if environ.get('NO_COLOR'):
            return False
        isatty = getattr(self.stream, 'isatty', None)
        return bool(isatty and isatty())

    @property
    def esc(self) -> str:
        return '\033['

    @property
    def reset(self) -> str:
        return f'{self.esc}{self.formatting["reset"]}'

    def __build_format(self, _format: str = 'default') -> str:
        try:
            return f'{self.esc}{self.formatting[_format]}'
        except KeyError:
            print(f'Failed to get formatting using key: {_format}', file=sys.stderr)
        return ''

    def __build_color(self, color: str) -> str:
        try:
            return f'{self.esc}{self.colors[color]}'
        except KeyError:
            print(f'Failed to get color format using key: {color}', file=sys.stderr)
        return ''

    def print_message(self, msg: str, color: str, _format: str = 'default'):
        """Print formatted message to the colour stream

        Args:
            msg (str): message to print to console
            color (str): color the message should be
            _format (str, optional): formatting options. Defaults to 'default'.
        """
        print(self.format_message(msg, color, _format), file=self.stream)

    def format_message(self, msg: str, color: str, _format: str = 'default') -> str:
        """Format message with color and formatting. Returns the message untouched when colour is disabled

        Args:
            msg (str): message to format
            color (str): color the message should be
            _format (str, optional): formatting options. Defaults to 'default'.

        Returns:
            str: formatted message
        """
        if not self.enabled:
            return msg
        return f'{self.__build_color(color)}{self.__build_format(_format)}{msg}{self.reset}'

    def format_status(self, status: str) -> str:
        """Colour a bound report status word

        Args:
            status (str): one of ok, violated, undefined

        Returns:
            str: formatted status
        """
        return self.format_message(status, self.statuses.get(status, 'white'), 'bold')
