import json
import re
from logging import Logger
from pathlib import Path

import numpy as np

from ts_2_sym.analysis import (BoundReport, check_compression_bound, check_digitization_bounds,
                               check_piece_maximality, cumulative_error_profile, format_reports, metrics)
from ts_2_sym.color import Color
from ts_2_sym.core import AbbaModel, SymbolSequence
from ts_2_sym.digitization import FitInput, fit, scale_with, transform_many
from ts_2_sym.errors import BoundViolation, DecodeError
from ts_2_sym.inverse import inverse_symbolize
from ts_2_sym.series_file import SeriesFile, read_symbol_lines, write_series, write_symbols
from ts_2_sym.utils import Utils


class Symbolizer(Utils):
    def __init__(self, tol: float = None, alpha: float = None, scl: float = None, variant: str = None,
                 digitizer: str = None, k: int = None, seed: int = None, alphabet: str = None,
                 normalize: bool = None, logger: Logger = None):
        """Fit, transform, inverse and round trip workflows of the command line tools. Unset hyperparameters come
        from the defaults file

        Args:
            tol (float, optional): compression tolerance. Defaults to None.
            alpha (float, optional): greedy digitization radius. Defaults to None.
            scl (float, optional): length weight. Defaults to None.
            variant (str, optional): apca or fapca. Defaults to None.
            digitizer (str, optional): greedy or lloyd. Defaults to None.
            k (int, optional): lloyd cluster count. Defaults to None.
            seed (int, optional): lloyd random state. Defaults to None.
            alphabet (str, optional): builtin, ascii-extended or a token file. Defaults to None.
            normalize (bool, optional): z-normalise every column before compression. Defaults to None.
            logger (Logger, optional): logging object to use. Defaults to None.
        """
        super().__init__(logger)
        self.tol = float(self.setting('compression', 'tol', tol))
        self.variant = self.setting('compression', 'variant', variant)
        self.normalize = bool(self.setting('compression', 'normalize', normalize))
        self.alpha = self.setting('digitization', 'alpha', alpha)
        self.scl = float(self.setting('digitization', 'scl', scl))
        self.digitizer = self.setting('digitization', 'digitizer', digitizer)
        self.k = self.setting('digitization', 'k', k)
        self.seed = int(self.setting('digitization', 'seed', seed))
        self.alphabet = self.setting('digitization', 'alphabet', alphabet)

    @property
    def precision(self) -> int:
        return int(self.setting('output', 'precision') or 17)

    @property
    def workers(self) -> int:
        return int(self.setting('output', 'workers') or 1)

    def __fit_input(self, results: list) -> FitInput:
        return FitInput(results, scl=self.scl, digitizer=self.digitizer,
                        alpha=None if self.alpha is None else float(self.alpha),
                        k=None if self.k is None else int(self.k), seed=self.seed,
                        n_init=int(self.setting('digitization', 'n_init') or 10),
                        max_iter=int(self.setting('digitization', 'max_iter') or 300))

    def __fit_columns(self, series_file: SeriesFile) -> tuple[AbbaModel, list[SymbolSequence], list]:
        """Compress every column and fit one shared model

        Args:
            series_file (SeriesFile): input columns

        Returns:
            tuple[AbbaModel, list[SymbolSequence], list]: model, symbols per column and compression results
        """
        results = self._compress_columns(series_file.columns, self.tol, self.variant)
        model, sequences = fit(self.__fit_input(results), self._alphabet(self.alphabet))
        self.log.info(f'Fitted {model.k} symbols on {sum(len(result) for result in results)} pieces of '
                      f'{len(results)} series')
        return model, sequences, results

    @staticmethod
    def column_model_path(model_path: str, column: str) -> Path:
        """Model file of one column when every column gets its own model: <stem>.<column>.json

        Args:
            model_path (str): model path given on the command line
            column (str): column name

        Returns:
            Path: per-column model path
        """
        path = Path(model_path)
        name = re.sub(r'[^\w.-]', '_', column)
        return path.with_name(f'{path.stem}.{name}.json')

    def fit(self, input_file: str, model_file: str, symbols_file: str, independent: bool = False) -> int:
        """Fit a model on every column of a CSV and write the model JSON and the symbols file

        Args:
            input_file (str): series CSV
            model_file (str): model JSON to write
            symbols_file (str): symbols file to write, one line per column
            independent (bool, optional): one model per column. Defaults to False.

        Returns:
            int: exit code
        """
        return self._run(lambda: self.__fit(input_file, model_file, symbols_file, independent), 'fit model')

    def __fit(self, input_file: str, model_file: str, symbols_file: str, independent: bool) -> int:
        series_file = self._read_columns(input_file, self.normalize)
        if not independent:
            model, sequences, _ = self.__fit_columns(series_file)
            model.save(model_file)
            write_symbols(symbols_file, sequences, model.single_character)
            self.display_success_msg(f'Fitted {model.k} symbols: model {model_file}, symbols {symbols_file}')
            return 0
        models, sequences = [], []
        for name, column in zip(series_file.names, series_file.columns):
            model, column_sequences, _ = self.__fit_columns(SeriesFile(series_file.path, (name,), (column,)))
            path = model.save(self.column_model_path(model_file, name))
            self.log.info(f'Saved model of column {name} to {path}')
            models.append(model)
            sequences.extend(column_sequences)
        write_symbols(symbols_file, sequences, all(model.single_character for model in models))
        self.display_success_msg(f'Fitted {len(models)} column models, symbols {symbols_file}')
        return 0

    def transform(self, model_file: str, input_file: str, symbols_file: str, tol: float = None) -> int:
        """Symbolise every column of a CSV against a fitted model

        Args:
            model_file (str): model JSON
            input_file (str): series CSV
            symbols_file (str): symbols file to write
            tol (float, optional): compression tolerance. Defaults to the model tol.

        Returns:
            int: exit code
        """
        return self._run(lambda: self.__transform(model_file, input_file, symbols_file, tol), 'transform series')

    def __transform(self, model_file: str, input_file: str, symbols_file: str, tol: float = None) -> int:
        model = AbbaModel.load(model_file)
        series_file = self._read_columns(input_file, self.normalize)
        sequences = transform_many(model, series_file.columns, tol, self.workers)
        write_symbols(symbols_file, sequences, model.single_character)
        self.display_success_msg(f'Symbolised {len(sequences)} series to {symbols_file}')
        return 0

    def inverse(self, model_file: str, symbols_file: str, output_file: str, t0: float = None) -> int:
        """Reconstruct every line of a symbols file and write one CSV column per line

        Args:
            model_file (str): model JSON
            symbols_file (str): symbols file
            output_file (str): CSV to write
            t0 (float, optional): initial value of every line. Defaults to the values recorded by the model.

        Returns:
            int: exit code
        """
        return self._run(lambda: self.__inverse(model_file, symbols_file, output_file, t0), 'reconstruct symbols')

    def __line_t0(self, model: AbbaModel, t0: float | None, index: int) -> float:
        if t0 is not None:
            return float(t0)
        if index < len(model.t0):
            return model.t0[index]
        raise ValueError(f'No initial value for symbols line {index + 1}, pass --t0')

    def __inverse(self, model_file: str, symbols_file: str, output_file: str, t0: float = None) -> int:
        model = AbbaModel.load(model_file)
        lines = read_symbol_lines(symbols_file, model.single_character)
        columns = []
        for index, symbols in enumerate(lines):
            try:
                columns.append(inverse_symbolize(model, symbols, self.__line_t0(model, t0, index)))
            except DecodeError as error:
                self.log.error(f'{symbols_file}:{index + 1}: {error}')
                self.display_fail_msg(f'{symbols_file}:{index + 1}: {error}')
                return error.exit_code
        write_series(output_file, columns, precision=self.precision)
        self.display_success_msg(f'Reconstructed {len(columns)} series to {output_file}')
        return 0

    def roundtrip(self, input_file: str, report_file: str = None) -> int:
        """Fit, symbolise and reconstruct every column, print reconstruction metrics and the verified bounds

        Args:
            input_file (str): series CSV
            report_file (str, optional): JSON file receiving rows and bound reports. Defaults to None.

        Returns:
            int: 0, or 5 when a bound is violated
        """
        return self._run(lambda: self.__roundtrip(input_file, report_file), 'round trip series')

    def __bound_reports(self, model: AbbaModel, sequences: list, results: list, columns: tuple) -> list:
        """Compression bounds per series, digitization bounds over the shared codebook and the accumulated
        deviation bound per series"""
        reports = []
        for column, result in zip(columns, results):
            reports.append(check_compression_bound(column, result))
            reports.append(check_piece_maximality(column, result))
        codebook = model.codebook
        pieces = [piece for result in results for piece in result.pieces]
        tuples = scale_with(pieces, codebook.scl, codebook.sigma_len, codebook.sigma_second)
        lookup = model.symbol_to_center
        labels = np.array([lookup[symbol] for sequence in sequences for symbol in sequence], dtype=np.int64)
        reports.extend(check_digitization_bounds(tuples, codebook, labels, model.alpha))
        if model.alpha is not None:
            for sequence, result in zip(sequences, results):
                profile = cumulative_error_profile(model, sequence, result.pieces)
                reports.append(profile.bound_report(model.alpha))
                reports.append(profile.denormalized_bound_report(model.alpha))
        return self._resolve_reports(reports)

    @staticmethod
    def format_rows(rows: list[dict]) -> str:
        """Reconstruction table: one row per series with symbol count, MSE, MAE and correlation"""
        lines = [f'{"series":<20}{"symbols":>10}{"mse":>14}{"mae":>14}{"pearson":>10}']
        for row in rows:
            pearson = 'n/a' if row['pearson'] is None else f'{row["pearson"]:.3f}'
            lines.append(f'{row["series"]:<20}{row["symbols"]:>10}{row["mse"]:>14.6g}{row["mae"]:>14.6g}'
                         f'{pearson:>10}')
        return '\n'.join(lines)

    def __roundtrip(self, input_file: str, report_file: str = None) -> int:
        series_file = self._read_columns(input_file, self.normalize)
        model, sequences, results = self.__fit_columns(series_file)
        rows = []
        for index, (name, column, sequence) in enumerate(zip(series_file.names, series_file.columns, sequences)):
            reconstructed = inverse_symbolize(model, sequence, model.t0[index])
            rows.append({'series': name, 'symbols': len(sequence), **metrics(column, reconstructed)})
        reports = self.__bound_reports(model, sequences, results, series_file.columns)
        print(self.format_rows(rows))
        print()
        print(format_reports(reports, Color()))
        if report_file:
            self.__write_report(report_file, rows, reports)
        violated = [report.name for report in reports if not report.satisfied]
        if violated:
            error = BoundViolation(f'Violated bounds: {", ".join(sorted(set(violated)))}')
            self.log.error(str(error))
            self.display_fail_msg(str(error))
            return error.exit_code
        self.display_success_msg(f'All {len(reports)} bounds hold')
        return 0

    def __write_report(self, path: str, rows: list[dict], reports: list[BoundReport]):
        with open(path, 'w', encoding='utf-8') as file:
            json.dump({'series': rows, 'bounds': [report.as_dict() for report in reports]}, file, indent=2)
        self.log.info(f'Wrote round trip report to {path}')
