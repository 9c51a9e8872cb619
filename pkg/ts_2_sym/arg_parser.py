from argparse import ArgumentParser, HelpFormatter

from ts_2_sym.color import Color


class CustomHelpFormatter(HelpFormatter):
    """Inherits argparse.HelpFormatter

    Args:
        HelpFormatter (class): argparse.HelpFormatter
    """
    def __init__(self, prog, indent_increment=2, max_help_position=28, width=110, color='cyan'):
        """Help output with coloured option entries separated by blank lines

        Args:
            prog (str): the name of the program.
            indent_increment (int, optional): indent space. Defaults to 2.
            max_help_position (int, optional): max help position. Defaults to 28.
            width (int, optional): width. Defaults to 110.
            color (str, optional): color to display the option arguments. Defaults to 'cyan'.
        """
        super().__init__(prog, indent_increment, max_help_position, width)
        self.color = color

    def _format_action(self, action):
        return Color().format_message(f'{super()._format_action(action)}\n', self.color, _format='italic')


class ArgParser(ArgumentParser):
    """Inherits argparse.ArgumentParser

    Args:
        ArgumentParser (class): argparse.ArgumentParser
    """
    def __init__(self, description='Arg Parser', parent_args: list = None, create_arguments: dict = None,
                 help_color='yellow'):
        """Argument parser built from a dict of long option name to add_argument keyword arguments. An optional
        'short' key gives the short option

        Args:
            description (str): Help description. Defaults to 'Arg Parser'
            parent_args (list, optional): arguments forwarded by the t2s dispatcher. Defaults to sys.argv.
            create_arguments (dict, optional): Arguments to create. Defaults to {}.
            help_color (str, optional): terminal color of help header. Defaults to 'yellow'.
        """
        super().__init__(formatter_class=CustomHelpFormatter, description=description)
        self.args = {}
        self.parent_args = parent_args
        self.create_arguments = create_arguments or {}
        self.help_color = help_color

    def format_help(self):
        return Color().format_message(super().format_help(), self.help_color)

    def set_arguments(self) -> dict:
        """Add every entry of create_arguments and parse the command line. argparse exits 2 on invalid flags

        Returns:
            dict: parsed arguments keyed by destination. Exits 1 when an entry cannot be added
        """
        for arg_name, arg_values in self.create_arguments.items():
            arg_values = dict(arg_values)
            short_name = self.__handle_arg_shortname(arg_values)
            if not self.__handle_adding_arg(short_name, self.__handle_arg_name(arg_name), arg_values):
                exit(1)
        self.args = vars(self.parse_args(self.parent_args))
        return self.args

    @staticmethod
    def __handle_arg_name(arg_name: str) -> str:
        """Long option for a dict key: spaces become hyphens and the -- prefix is added when missing

        Args:
            arg_name (str): name of the argument (Long name)

        Returns:
            str: long option
        """
        arg_name = arg_name.strip().replace(' ', '-')
        if arg_name.startswith('--'):
            return arg_name
        return f'--{arg_name.lstrip("-")}'

    @staticmethod
    def __handle_arg_shortname(arg_values: dict) -> str | None:
        """Pop the optional short option out of the argument values

        Args:
            arg_values (dict): arg values of argument

        Returns:
            str|None: short option or None when none was given
        """
        short_name = str(arg_values.pop('short', ''))
        if not short_name:
            return None
        return f'-{short_name.lstrip("-")}'

    def __handle_adding_arg(self, short_name: str, arg_name: str, arg_values: dict) -> bool:
        """Adds argument to argparse.ArgumentParser.add_argument

        Args:
            short_name (str): short name for argument. Example: '-m' for '--model'
            arg_name (str): arg name (long name)
            arg_values (dict): values for argument

        Returns:
            bool: True on success, False otherwise
        """
        try:
            if short_name:
                self.add_argument(short_name, arg_name, **arg_values)
            else:
                self.add_argument(arg_name, **arg_values)
            return True
        except Exception as error:
            print(f'Failed to add argument {arg_name}: {error}')
        return False
