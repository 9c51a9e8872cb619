import sys
from dataclasses import replace
from logging import Logger
from os import environ
from pathlib import Path
from typing import Callable, Sequence

import joblib
import yaml

from ts_2_sym.analysis import BoundReport
from ts_2_sym.color import Color
from ts_2_sym.compression import CompressionResult, compress, znormalize
from ts_2_sym.core import Alphabet, alphabet_ascii_extended, alphabet_default
from ts_2_sym.errors import SymbolizerError
from ts_2_sym.logger import get_logger
from ts_2_sym.series_file import SeriesFile, read_tokens


class Utils():
    def __init__(self, logger: Logger = None):
        """Shared plumbing of the command workflows: logging, defaults, console messages and exit codes

        Args:
            logger (Logger, optional): logging object to use. Defaults to None.
        """
        self.log = logger or get_logger('ts-2-sym')
        self.__defaults = None

    @property
    def template_dir(self) -> str:
        """Path to the template directory

        Returns:
            str: Path to the template directory
        """
        return f'{Path(__file__).parent}/templates'

    @property
    def builtin_defaults_file(self) -> str:
        return f'{self.template_dir}/defaults.yml'

    @property
    def defaults_file(self) -> str:
        """Defaults file, T2S_DEFAULTS when set

        Returns:
            str: path to the defaults YAML file
        """
        return environ.get('T2S_DEFAULTS') or self.builtin_defaults_file

    @property
    def defaults(self) -> dict:
        """Hyperparameter defaults loaded once. Keys of a T2S_DEFAULTS file override the packaged defaults section by
        section, an unreadable file leaves the packaged defaults in place

        Returns:
            dict: sections compression, digitization, forecast, analysis and output
        """
        if self.__defaults is None:
            defaults = self._load_yaml(self.builtin_defaults_file)
            if self.defaults_file != self.builtin_defaults_file:
                for section, values in self._load_yaml(self.defaults_file).items():
                    if isinstance(values, dict):
                        overrides = {key: value for key, value in values.items() if value is not None}
                        defaults.setdefault(section, {}).update(overrides)
                    else:
                        self.log.warning(f'Ignoring section {section!r} of {self.defaults_file}: not a mapping')
            self.__defaults = defaults
        return self.__defaults

    def setting(self, section: str, key: str, value=None):
        """Explicit value when given, otherwise the default of section.key

        Args:
            section (str): defaults section
            key (str): setting name
            value (optional): explicit value. Defaults to None.

        Returns:
            Any: the setting
        """
        if value is not None:
            return value
        return self.defaults.get(section, {}).get(key)

    @staticmethod
    def display_success_msg(msg: str):
        """Display success message

        Args:
            msg (str): message to display
        """
        Color().print_message(msg, 'green')
        return True

    @staticmethod
    def display_warning_msg(msg: str):
        """Display warning message

        Args:
            msg (str): message to display
        """
        Color(sys.stderr).print_message(msg, 'yellow')
        return True

    @staticmethod
    def display_info_msg(msg: str):
        """Display info message

        Args:
            msg (str): message to display
        """
        Color().print_message(msg, 'cyan')
        return True

    @staticmethod
    def display_fail_msg(msg: str):
        """Display fail message on stderr

        Args:
            msg (str): message to display
        """
        Color(sys.stderr).print_message(msg, 'red')
        return False

    def _load_yaml(self, path: str) -> dict:
        """Load a YAML mapping

        Args:
            path (str): YAML file

        Returns:
            dict: file content, empty on failure
        """
        try:
            with open(path, 'r') as file:
                content = yaml.safe_load(file) or {}
            if isinstance(content, dict):
                return content
            self.log.warning(f'Ignoring defaults in {path}: not a mapping')
        except Exception:
            self.log.exception(f'Failed to load defaults from {path}')
        return {}

    def _run(self, action: Callable[[], int], task: str) -> int:
        """Run a workflow step and turn its failure into an exit code

        Args:
            action (Callable[[], int]): step returning an exit code
            task (str): what the step does, used in messages

        Returns:
            int: exit code of the step, of the raised error, 2 for invalid values or 1 otherwise
        """
        try:
            return action()
        except SymbolizerError as error:
            self.log.error(f'Failed to {task}: {error}')
            self.display_fail_msg(str(error))
            return error.exit_code
        except ValueError as error:
            self.log.error(f'Failed to {task}: {error}')
            self.display_fail_msg(str(error))
            return 2
        except Exception:
            self.log.exception(f'Failed to {task}')
            self.display_fail_msg(f'Failed to {task}')
        return 1

    def _resolve_reports(self, reports: Sequence[BoundReport]) -> list[BoundReport]:
        """Apply the configured slack and absolute floor to bound reports"""
        slack = self.setting('analysis', 'slack')
        floor = self.setting('analysis', 'absolute_floor')
        resolved = []
        for report in reports:
            changes = {}
            if slack is not None:
                changes['slack'] = float(slack)
            if floor is not None and report.floor:
                changes['floor'] = float(floor)
            resolved.append(replace(report, **changes))
        return resolved

    def _alphabet(self, source: str) -> Alphabet | Callable[[int], Alphabet]:
        """Alphabet for the alphabet option: builtin, ascii-extended or a token file path

        Args:
            source (str): alphabet option

        Returns:
            Alphabet | Callable[[int], Alphabet]: token file alphabet or a builder taking the cluster count
        """
        if source in ('builtin', '', None):
            return alphabet_default
        if source == 'ascii-extended':
            return alphabet_ascii_extended
        return read_tokens(source)

    def _read_columns(self, path: str, normalize: bool = False) -> SeriesFile:
        """Read a series CSV, optionally z-normalising every column"""
        series_file = SeriesFile.read(path)
        self.log.info(f'Read {len(series_file)} series of {len(series_file.columns[0])} samples from {path}')
        if normalize:
            return SeriesFile(series_file.path, series_file.names,
                              tuple(znormalize(column) for column in series_file.columns))
        return series_file

    def _compress_columns(self, columns: Sequence, tol: float, variant: str) -> list[CompressionResult]:
        """Compress columns in worker threads, results in column order"""
        workers = int(self.setting('output', 'workers') or 1)
        return joblib.Parallel(n_jobs=workers, prefer='threads')(
            joblib.delayed(compress)(column, tol, variant) for column in columns)
