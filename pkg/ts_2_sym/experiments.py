"""Perturbation, rank-frequency and forecasting workflows, and the reproduction studies run by t2s-experiments."""
from logging import Logger
from pathlib import Path

import numpy as np
import pandas as pd

from ts_2_sym.analysis import (BoundReport, format_reports, hoeffding_exceedance, metrics, sample_deviation_windows,
                               tuple_deviations, write_zipf_csv, zipf_profile)
from ts_2_sym.color import Color
from ts_2_sym.compression import compress
from ts_2_sym.core import AbbaModel
from ts_2_sym.digitization import FitInput, fit, transform
from ts_2_sym.errors import BoundViolation, SeriesFileError
from ts_2_sym.forecast import evaluate_forecast, forecast, ngram_fit, persistence_forecast
from ts_2_sym.inverse import PerturbationReport, inverse_symbolize, perturb_and_compare
from ts_2_sym.series_file import SeriesFile, read_symbol_lines, write_series
from ts_2_sym.utils import Utils


STUDIES = ('perturbation', 'reconstruction', 'hoeffding', 'forecast')


def farthest_replacement(model: AbbaModel, symbol: str) -> str:
    """Symbol whose center lies farthest from the center of `symbol` in the second coordinate"""
    centers = model.codebook.centers
    rank = model.symbol_to_center[symbol]
    return model.symbols[int(np.argmax(np.abs(centers[:, 1] - centers[rank, 1])))]


def sine_series(n: int = 1000, periods: int = 8) -> np.ndarray:
    return np.sin(2 * periods * np.pi * np.arange(n) / (n - 1))


def synthetic_channels(n: int = 10000, channels: int = 7) -> list[np.ndarray]:
    """Noise-free mixtures of sines and trends, one array per channel, each with variance above 2"""
    t = np.linspace(0.0, 1.0, n)
    series = []
    for channel in range(channels):
        base = (3 + 0.75 * channel) * np.sin(2 * np.pi * (3 + 2 * channel) * t + channel)
        harmonic = 0.9 * np.cos(2 * np.pi * (11 + channel) * t)
        trend = (channel - channels // 2) * 1.5 * t
        series.append(base + harmonic + trend)
    return series


def perturbation_study(n: int = 1000, tol: float = 0.2, alpha: float = 0.5, scl: float = 1.0,
                       variants: tuple[str, ...] = ('apca', 'fapca')) -> list[PerturbationReport]:
    """Fit a sine with every variant, replace the middle symbol by the one farthest from it and measure how the
    later breakpoint values move

    Args:
        n (int, optional): sine length. Defaults to 1000.
        tol (float, optional): compression tolerance. Defaults to 0.2.
        alpha (float, optional): digitization radius. Defaults to 0.5.
        scl (float, optional): length weight. Defaults to 1.0.
        variants (tuple[str, ...], optional): variants to compare. Defaults to ('apca', 'fapca').

    Returns:
        list[PerturbationReport]: one report per variant
    """
    series = sine_series(n)
    reports = []
    for variant in variants:
        model, (sequence,) = fit(FitInput([compress(series, tol, variant)], scl=scl, alpha=alpha))
        position = len(sequence) // 2
        reports.append(perturb_and_compare(model, sequence, position, farthest_replacement(model, sequence[position])))
    return reports


def perturbation_frame(reports: list[PerturbationReport]) -> pd.DataFrame:
    """Drift per later breakpoint, one column per report"""
    return pd.DataFrame({f'{report.variant}_drift': pd.Series(report.drift, dtype=np.float64)
                         for report in reports}).rename_axis('breakpoint').reset_index()


def reconstruction_study(n: int = 10000, tol: float = 0.01, alpha: float = 0.01, scl: float = 3.0,
                         variant: str = 'fapca', channels: int = 7) -> pd.DataFrame:
    """Fit one shared model on the synthetic channels and score each channel's reconstruction

    Args:
        n (int, optional): samples per channel. Defaults to 10000.
        tol (float, optional): compression tolerance. Defaults to 0.01.
        alpha (float, optional): digitization radius. Defaults to 0.01.
        scl (float, optional): length weight. Defaults to 3.0.
        variant (str, optional): apca or fapca. Defaults to 'fapca'.
        channels (int, optional): number of channels. Defaults to 7.

    Returns:
        pd.DataFrame: channel, symbols, mse, mae, pearson and variance per channel
    """
    columns = synthetic_channels(n, channels)
    results = [compress(column, tol, variant) for column in columns]
    model, sequences = fit(FitInput(results, scl=scl, alpha=alpha))
    rows = []
    for index, (column, sequence) in enumerate(zip(columns, sequences)):
        scores = metrics(column, inverse_symbolize(model, sequence, model.t0[index]))
        rows.append({'channel': index, 'symbols': len(sequence), 'mse': scores['mse'], 'mae': scores['mae'],
                     'pearson': scores['pearson'], 'variance': float(np.var(column))})
    return pd.DataFrame(rows)


def hoeffding_study(series: int = 200, steps: int = 500, tol: float = 0.1, alpha: float = 0.1,
                    js: tuple[int, ...] = (2, 8, 32), multiples: tuple[float, ...] = (1.0, 2.0, 4.0),
                    samples: int = 10000, seed: int = 0) -> list[BoundReport]:
    """Monte Carlo check of the tail of accumulated deviations over random walks, each fitted on its own

    Args:
        series (int, optional): number of random walks. Defaults to 200.
        steps (int, optional): samples per walk. Defaults to 500.
        tol (float, optional): compression tolerance. Defaults to 0.1.
        alpha (float, optional): digitization radius. Defaults to 0.1.
        js (tuple[int, ...], optional): window lengths. Defaults to (2, 8, 32).
        multiples (tuple[float, ...], optional): thresholds as multiples of alpha. Defaults to (1.0, 2.0, 4.0).
        samples (int, optional): windows drawn per window length. Defaults to 10000.
        seed (int, optional): random seed. Defaults to 0.

    Returns:
        list[BoundReport]: one report per window length, threshold and coordinate
    """
    walks = np.random.default_rng(seed).standard_normal((series, steps)).cumsum(axis=1)
    deviations = []
    for walk in walks:
        result = compress(walk, tol, 'apca')
        model, (sequence,) = fit(FitInput([result], alpha=alpha))
        deviations.append(tuple_deviations(model, sequence, result.pieces))
    reports = []
    for j in js:
        window_sums = sample_deviation_windows(deviations, j, samples, seed)
        reports.extend(hoeffding_exceedance(window_sums, alpha, j, [multiple * alpha for multiple in multiples]))
    return reports


def forecast_study(history: int = 168, horizon: int = 24, period: int = 24, tol: float = 0.2, alpha: float = 0.5,
                   order: int = 3, variant: str = 'fapca') -> pd.DataFrame:
    """Forecast a noiseless cosine with an n-gram predictor and compare with persistence

    Args:
        history (int, optional): observed samples. Defaults to 168.
        horizon (int, optional): forecast samples. Defaults to 24.
        period (int, optional): cosine period. Defaults to 24.
        tol (float, optional): compression tolerance. Defaults to 0.2.
        alpha (float, optional): digitization radius. Defaults to 0.5.
        order (int, optional): n-gram order. Defaults to 3.
        variant (str, optional): apca or fapca. Defaults to 'fapca'.

    Returns:
        pd.DataFrame: method, mse, mae and the model's symbol count
    """
    values = np.cos(2 * np.pi * (np.arange(history + horizon) + 1) / period)
    observed, truth = values[:history], values[history:]
    model, sequences = fit(FitInput([compress(observed, tol, variant)], alpha=alpha))
    predicted = forecast(model, ngram_fit(sequences, order, alphabet=model.alphabet), observed, horizon)
    rows = [{'method': 'abba', **evaluate_forecast(truth, predicted), 'symbols': model.k},
            {'method': 'persistence', **evaluate_forecast(truth, persistence_forecast(observed, horizon)),
             'symbols': model.k}]
    return pd.DataFrame(rows)


class Experiments(Utils):
    def __init__(self, logger: Logger = None):
        """Perturbation, Zipf, forecasting and reproduction workflows

        Args:
            logger (Logger, optional): logging object to use. Defaults to None.
        """
        super().__init__(logger)

    @property
    def precision(self) -> int:
        return int(self.setting('output', 'precision') or 17)

    def perturb(self, model_files: list[str], symbols_files: list[str], position: int, replacement: str = None,
                t0: float = None, line: int = 1, csv_file: str = None) -> int:
        """Replace one symbol per model and print the drift of the later breakpoint values side by side

        Args:
            model_files (list[str]): model JSON files, typically one apca and one fapca model
            symbols_files (list[str]): symbols file of each model
            position (int): 0-based position of the replaced symbol
            replacement (str, optional): replacement symbol. Defaults to the symbol farthest in the second coordinate.
            t0 (float, optional): initial value. Defaults to the model's value for the line.
            line (int, optional): 1-based line of the symbols files. Defaults to 1.
            csv_file (str, optional): drift table CSV. Defaults to None.

        Returns:
            int: exit code
        """
        return self._run(lambda: self.__perturb(model_files, symbols_files, position, replacement, t0, line,
                                                csv_file), 'perturb symbols')

    def __perturb(self, model_files: list[str], symbols_files: list[str], position: int, replacement: str,
                  t0: float, line: int, csv_file: str) -> int:
        if len(model_files) != len(symbols_files):
            raise ValueError(f'{len(model_files)} models but {len(symbols_files)} symbols files')
        reports = []
        for model_file, symbols_file in zip(model_files, symbols_files):
            model = AbbaModel.load(model_file)
            lines = read_symbol_lines(symbols_file, model.single_character)
            if not 1 <= line <= len(lines):
                raise SeriesFileError(symbols_file, line, 0, f'file has {len(lines)} lines')
            symbols = lines[line - 1]
            if t0 is None and line <= len(model.t0):
                start = model.t0[line - 1]
            else:
                start = t0
            if not 0 <= position < len(symbols):
                raise ValueError(f'Position {position} is outside a sequence of {len(symbols)} symbols')
            chosen = replacement or farthest_replacement(model, symbols[position])
            if chosen == symbols[position]:
                self.display_warning_msg(f'{model_file}: replacement {chosen!r} equals the original symbol')
            report = perturb_and_compare(model, symbols, position, chosen, start)
            self.log.info(f'{model_file}: {report.original!r} -> {report.replacement!r}, max drift '
                          f'{report.max_drift:.6g}, max deviation {report.max_deviation:.6g}')
            reports.append(report)
        frame = perturbation_frame(reports)
        print(frame.to_string(index=False, na_rep=''))
        for report in reports:
            self.display_info_msg(f'{report.variant}: max drift {report.max_drift:.6g}, '
                                  f'max deviation {report.max_deviation:.6g}')
        if csv_file:
            frame.to_csv(csv_file, index=False, float_format=f'%.{self.precision}g', lineterminator='\n')
        return 0

    def zipf(self, symbols_files: list[str], csv_file: str = None) -> int:
        """Rank-frequency profile of the symbols in one or more symbols files

        Args:
            symbols_files (list[str]): symbols files, space separated or one symbol per character
            csv_file (str, optional): rank-frequency CSV. Defaults to None.

        Returns:
            int: exit code
        """
        return self._run(lambda: self.__zipf(symbols_files, csv_file), 'profile symbol frequencies')

    def __zipf(self, symbols_files: list[str], csv_file: str) -> int:
        corpus = []
        for path in symbols_files:
            text = Path(path).read_text(encoding='utf-8') if Path(path).is_file() else ''
            corpus.extend(read_symbol_lines(path, ' ' not in text))
        profile = zipf_profile(corpus)
        for (rank, frequency), symbol in zip(profile.rows, profile.symbols):
            print(f'{rank:>6}  {symbol:<12}{frequency:>10}')
        if csv_file:
            write_zipf_csv(profile, csv_file)
            self.display_success_msg(f'Wrote {len(profile.rows)} ranks to {csv_file}')
        return 0

    def forecast(self, model_file: str, history_file: str, horizon: int = None, order: int = None,
                 delta: float = None, mode: str = None, seed: int = None, truth_file: str = None,
                 corpus_file: str = None, output_file: str = None, column: int = 0) -> int:
        """Forecast a history column with an n-gram predictor trained on its symbols

        Args:
            model_file (str): model JSON
            history_file (str): history CSV
            horizon (int, optional): number of forecast values. Defaults to the defaults file.
            order (int, optional): n-gram order. Defaults to the defaults file.
            delta (float, optional): smoothing of sampled predictions. Defaults to the defaults file.
            mode (str, optional): greedy or sample. Defaults to the defaults file.
            seed (int, optional): seed of sampled predictions. Defaults to the defaults file.
            truth_file (str, optional): CSV holding the observed continuation. Defaults to None.
            corpus_file (str, optional): extra symbols file to train the predictor on. Defaults to None.
            output_file (str, optional): forecast CSV. Defaults to printing the values.
            column (int, optional): 0-based column of the history and truth files. Defaults to 0.

        Returns:
            int: exit code
        """
        settings = {'horizon': int(self.setting('forecast', 'horizon', horizon)),
                    'order': int(self.setting('forecast', 'order', order)),
                    'delta': float(self.setting('forecast', 'delta', delta)),
                    'mode': self.setting('forecast', 'mode', mode),
                    'seed': int(self.setting('forecast', 'seed', seed))}
        return self._run(lambda: self.__forecast(model_file, history_file, settings, truth_file, corpus_file,
                                                 output_file, column), 'forecast series')

    @staticmethod
    def __column(path: str, column: int) -> np.ndarray:
        series_file = SeriesFile.read(path, min_rows=1)
        if not 0 <= column < len(series_file):
            raise SeriesFileError(path, 1, column + 1, f'file has {len(series_file)} columns')
        return series_file.columns[column]

    def __forecast(self, model_file: str, history_file: str, settings: dict, truth_file: str, corpus_file: str,
                   output_file: str, column: int) -> int:
        model = AbbaModel.load(model_file)
        history = self.__column(history_file, column)
        corpus = [transform(model, history)]
        if corpus_file:
            corpus.extend(read_symbol_lines(corpus_file, model.single_character))
        predictor = ngram_fit(corpus, settings['order'], settings['delta'], model.alphabet, settings['mode'],
                              settings['seed'])
        values = forecast(model, predictor, history, settings['horizon'])
        if output_file:
            write_series(output_file, [values], ['forecast'], self.precision)
            self.display_success_msg(f'Wrote {len(values)} forecast values to {output_file}')
        else:
            for value in values:
                print(format(float(value), f'.{self.precision}g'))
        if truth_file:
            truth = self.__column(truth_file, column)[:settings['horizon']]
            scores = evaluate_forecast(truth, values)
            baseline = evaluate_forecast(truth, persistence_forecast(history, settings['horizon']))
            print(f'{"method":<14}{"mse":>14}{"mae":>14}')
            print(f'{"abba":<14}{scores["mse"]:>14.6g}{scores["mae"]:>14.6g}')
            print(f'{"persistence":<14}{baseline["mse"]:>14.6g}{baseline["mae"]:>14.6g}')
        return 0

    def studies(self, names: list[str], output_dir: str = None, samples: int = None) -> int:
        """Run reproduction studies and print their tables

        Args:
            names (list[str]): studies to run, see STUDIES
            output_dir (str, optional): directory receiving one <study>.csv per study. Defaults to None.
            samples (int, optional): Monte Carlo windows per window length. Defaults to 10000.

        Returns:
            int: 0, or 5 when a Monte Carlo bound is violated
        """
        return self._run(lambda: self.__studies(names, output_dir, samples), 'run studies')

    def __studies(self, names: list[str], output_dir: str, samples: int) -> int:
        unknown = [name for name in names if name not in STUDIES]
        if unknown:
            raise ValueError(f'Unknown studies: {", ".join(unknown)}')
        if output_dir:
            Path(output_dir).mkdir(parents=True, exist_ok=True)
        violated = []
        for name in names:
            self.display_info_msg(f'Running {name} study')
            if name == 'perturbation':
                frame = perturbation_frame(perturbation_study())
            elif name == 'reconstruction':
                frame = reconstruction_study()
            elif name == 'forecast':
                frame = forecast_study()
            else:
                reports = self._resolve_reports(hoeffding_study(samples=samples or 10000))
                print(format_reports(reports, Color()))
                violated.extend(report.name for report in reports if not report.satisfied)
                frame = pd.DataFrame([{**report.as_dict()['context'], 'name': report.name,
                                       'measured': report.measured, 'bound': report.bound,
                                       'status': report.status} for report in reports])
            if name != 'hoeffding':
                print(frame.to_string(index=False, na_rep=''))
            if output_dir:
                path = Path(output_dir) / f'{name}.csv'
                frame.to_csv(path, index=False, float_format=f'%.{self.precision}g', lineterminator='\n')
                self.log.info(f'Wrote {name} study to {path}')
        if violated:
            error = BoundViolation(f'Violated bounds: {", ".join(sorted(set(violated)))}')
            self.display_fail_msg(str(error))
            return error.exit_code
        return 0
