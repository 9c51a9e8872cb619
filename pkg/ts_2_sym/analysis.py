"""Reconstruction metrics, runtime checks of the compression and digitization error bounds, accumulated deviation
profiles with their Monte Carlo tail check, and rank-frequency analysis of symbol corpora."""
import logging
import math
from collections import Counter
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np
import pandas as pd
from numpy.typing import ArrayLike
from scipy.stats import pearsonr
from sklearn.metrics import mean_absolute_error, mean_squared_error

from ts_2_sym.compression import CompressionResult, reconstruct_chain, within_tolerance
from ts_2_sym.core import AbbaModel, Codebook, Piece, SymbolSequence, as_series
from ts_2_sym.digitization import Clustering, scale_with
from ts_2_sym.errors import DecodeError
from ts_2_sym.logger import DEFAULT_NAME


log = logging.getLogger(DEFAULT_NAME)

RELATIVE_SLACK = 1e-9
ABSOLUTE_FLOOR = 1e-12


@dataclass(frozen=True)
class BoundReport:
    """A measured quantity against its bound. A NaN bound or measurement means the bound does not apply"""
    name: str
    measured: float
    bound: float
    context: dict = field(default_factory=dict)
    slack: float = RELATIVE_SLACK
    floor: float = ABSOLUTE_FLOOR

    @property
    def status(self) -> str:
        if math.isnan(self.measured) or math.isnan(self.bound):
            return 'undefined'
        return 'ok' if self.satisfied else 'violated'

    @property
    def satisfied(self) -> bool:
        if math.isnan(self.measured) or math.isnan(self.bound):
            return True
        return self.measured <= self.bound * (1 + self.slack) + self.floor

    def as_dict(self) -> dict:
        def plain(value):
            return None if isinstance(value, float) and math.isnan(value) else value
        return {'name': self.name, 'measured': plain(self.measured), 'bound': plain(self.bound),
                'status': self.status, 'context': self.context}


def metrics(original: ArrayLike, reconstructed: ArrayLike) -> dict:
    """MSE, MAE and Pearson correlation over the common prefix of two series

    Args:
        original (ArrayLike): reference series
        reconstructed (ArrayLike): compared series

    Returns:
        dict: mse, mae, pearson (None when either side is constant) and length_gap
    """
    original = as_series(original, name='original series')
    reconstructed = as_series(reconstructed, name='reconstructed series')
    overlap = min(len(original), len(reconstructed))
    left, right = original[:overlap], reconstructed[:overlap]
    pearson = None
    if overlap >= 2 and np.ptp(left) > 0 and np.ptp(right) > 0:
        pearson = float(pearsonr(left, right).statistic)
    return {'mse': float(mean_squared_error(left, right)), 'mae': float(mean_absolute_error(left, right)),
            'pearson': pearson, 'length_gap': len(reconstructed) - len(original)}


def _context(result: CompressionResult) -> dict:
    return {'n': result.n, 'N': len(result), 'tol': result.tol}


def check_compression_bound(series: ArrayLike, result: CompressionResult) -> BoundReport:
    """Squared reconstruction error of the chain against (n - 1 - N) * tol**2"""
    series = as_series(series, min_length=2)
    measured = float(np.sum((series - reconstruct_chain(result)) ** 2))
    return BoundReport('compression_error', measured, (result.n - 1 - len(result)) * result.tol ** 2,
                       _context(result))


def check_piece_maximality(series: ArrayLike, result: CompressionResult) -> BoundReport:
    """Count of non-final pieces that could still be extended by one index, expected to be 0"""
    series = as_series(series, min_length=2)
    tol2 = result.tol ** 2
    indices = result.breakpoints
    extendable = sum(within_tolerance(series, int(start), int(end) + 1, tol2)
                     for start, end in zip(indices[:-2], indices[1:-1]))
    return BoundReport('piece_maximality', float(extendable), 0.0, _context(result), floor=0.0)


def check_digitization_bounds(tuples: ArrayLike, codebook: Codebook | Clustering | ArrayLike, labels: ArrayLike,
                              alpha: float | None) -> list[BoundReport]:
    """Bounds of a clustering of scaled tuples: maximal tuple deviation against (2 alpha)**2, the norm of the summed
    deviations against 1e-9 * N, the SSE against alpha**2 * (N - k) and the largest mean squared member distance
    within one cluster against alpha**2. Members lie within alpha of their group's starting point, hence within
    2 alpha of the group mean

    Args:
        tuples (ArrayLike): (N, 2) scaled tuples
        codebook (Codebook | Clustering | ArrayLike): centers
        labels (ArrayLike): center index of every tuple
        alpha (float | None): digitization radius, None when the clustering is not radius driven

    Returns:
        list[BoundReport]: max_tuple_deviation, centroid_sum, sse and cluster_spread reports
    """
    points = np.asarray(tuples, dtype=np.float64).reshape(-1, 2)
    centers = np.asarray(getattr(codebook, 'centers', codebook), dtype=np.float64).reshape(-1, 2)
    labels = np.asarray(labels, dtype=np.int64)
    deviations = centers[labels] - points
    squared = np.sum(deviations ** 2, axis=1)
    counts = np.bincount(labels, minlength=len(centers))
    occupied = counts > 0
    spread = np.bincount(labels, weights=squared, minlength=len(centers))[occupied] / counts[occupied]
    n, k = len(points), int(occupied.sum())
    alpha2 = math.nan if alpha is None else alpha * alpha
    context = {'N': n, 'k': k, 'alpha': alpha}
    return [
        BoundReport('max_tuple_deviation', float(squared.max(initial=0.0)), 4 * alpha2, context),
        BoundReport('centroid_sum', float(np.linalg.norm(deviations.sum(axis=0))), RELATIVE_SLACK * n, context),
        BoundReport('sse', float(squared.sum()), alpha2 * (n - k), context),
        BoundReport('cluster_spread', float(spread.max(initial=0.0)), alpha2, context),
    ]


def tuple_deviations(model: AbbaModel, symbols: SymbolSequence | Sequence[str],
                     original_pieces: Sequence[Piece]) -> np.ndarray:
    """Scaled center minus scaled true tuple for every piece"""
    if len(symbols) != len(original_pieces):
        raise ValueError(f'{len(symbols)} symbols but {len(original_pieces)} pieces')
    lookup = model.symbol_to_center
    codebook = model.codebook
    labels = []
    for position, symbol in enumerate(symbols):
        if symbol not in lookup:
            raise DecodeError(symbol, position)
        labels.append(lookup[symbol])
    tuples = scale_with(original_pieces, codebook.scl, codebook.sigma_len, codebook.sigma_second)
    return codebook.centers[np.array(labels, dtype=np.int64)].reshape(-1, 2) - tuples


@dataclass(frozen=True, eq=False)
class ErrorProfile:
    """Accumulated (length, second) deviations e_0 = 0, ..., e_N in scaled and in original units. `units` holds the
    original size of one scaled unit per coordinate, 0 when the coordinate is not clustered"""
    scaled: np.ndarray
    denormalized: np.ndarray
    units: tuple[float, float] = (1.0, 1.0)

    def __len__(self) -> int:
        return len(self.scaled) - 1

    def bound_report(self, alpha: float) -> BoundReport:
        """Largest |e_j| / j over both coordinates against 2 alpha"""
        steps = np.arange(1, len(self.scaled), dtype=np.float64)
        if not steps.size:
            return BoundReport('cumulative_deviation', 0.0, 2 * alpha, {'N': 0, 'alpha': alpha})
        ratio = np.abs(self.scaled[1:]) / steps[:, None]
        return BoundReport('cumulative_deviation', float(ratio.max()), 2 * alpha, {'N': len(self), 'alpha': alpha})

    def denormalized_bound_report(self, alpha: float) -> BoundReport:
        """Largest |e_j| / (j unit) of the original-unit profile over the clustered coordinates against 2 alpha"""
        name = 'cumulative_deviation_denormalized'
        context = {'N': len(self), 'alpha': alpha, 'length_unit': self.units[0], 'second_unit': self.units[1]}
        kept = [index for index, unit in enumerate(self.units) if unit > 0]
        steps = np.arange(1, len(self.denormalized), dtype=np.float64)
        if not steps.size or not kept:
            return BoundReport(name, 0.0, 2 * alpha, context)
        ratio = np.abs(self.denormalized[1:, kept]) / (steps[:, None] * np.array(self.units)[kept])
        return BoundReport(name, float(ratio.max()), 2 * alpha, context)


def cumulative_error_profile(model: AbbaModel, symbols: SymbolSequence | Sequence[str],
                             original_pieces: Sequence[Piece]) -> ErrorProfile:
    """Running sums of the center-minus-piece deviations along a symbol sequence

    Args:
        model (AbbaModel): fitted model
        symbols (SymbolSequence | Sequence[str]): symbols of the pieces
        original_pieces (Sequence[Piece]): pieces the symbols encode

    Returns:
        ErrorProfile: scaled and denormalized profiles
    """
    deviations = tuple_deviations(model, symbols, original_pieces)
    codebook = model.codebook
    lookup = model.symbol_to_center
    lengths, seconds = codebook.denormalize()
    labels = np.array([lookup[symbol] for symbol in symbols], dtype=np.int64)
    true_lengths = np.array([piece.length for piece in original_pieces], dtype=np.float64)
    true_seconds = np.array([piece.second for piece in original_pieces], dtype=np.float64)
    denormalized = np.column_stack((lengths[labels] - true_lengths, seconds[labels] - true_seconds)).reshape(-1, 2)
    zero = np.zeros((1, 2))
    length_unit = codebook.sigma_len / codebook.scl if codebook.scl > 0 else 0.0
    return ErrorProfile(np.concatenate((zero, np.cumsum(deviations, axis=0))),
                        np.concatenate((zero, np.cumsum(denormalized, axis=0))),
                        (length_unit, codebook.sigma_second))


def sample_deviation_windows(deviations: Sequence[np.ndarray], j: int, count: int, seed: int = 0) -> np.ndarray:
    """Sums of `count` random windows of j consecutive tuple deviations drawn across several series, each window
    position equally likely

    Args:
        deviations (Sequence[np.ndarray]): (N_i, 2) scaled deviations per series
        j (int): window length
        count (int): number of windows
        seed (int, optional): random generator seed. Defaults to 0.

    Returns:
        np.ndarray: (count, 2) window sums
    """
    eligible = [np.asarray(item, dtype=np.float64).reshape(-1, 2) for item in deviations if len(item) >= j]
    if not eligible:
        raise ValueError(f'No series holds {j} pieces')
    windows = np.array([len(item) - j + 1 for item in eligible], dtype=np.float64)
    rng = np.random.default_rng(seed)
    picks = rng.choice(len(eligible), size=count, p=windows / windows.sum())
    sums = np.empty((count, 2))
    for row, pick in enumerate(picks):
        start = rng.integers(0, int(windows[pick]))
        sums[row] = eligible[pick][start:start + j].sum(axis=0)
    return sums


def hoeffding_exceedance(window_sums: ArrayLike, alpha: float, j: int, hs: Iterable[float]) -> list[BoundReport]:
    """Empirical P(|e_j| >= h) per coordinate against exp(-h**2 / (2 j alpha**2)) plus three binomial standard
    errors

    Args:
        window_sums (ArrayLike): (M, 2) sampled e_j values
        alpha (float): digitization radius
        j (int): window length the sums were drawn with
        hs (Iterable[float]): thresholds

    Returns:
        list[BoundReport]: one report per threshold and coordinate
    """
    sums = np.abs(np.asarray(window_sums, dtype=np.float64).reshape(-1, 2))
    samples = len(sums)
    reports = []
    for h in hs:
        tail = math.exp(-h * h / (2 * j * alpha * alpha))
        margin = 3 * math.sqrt(tail * (1 - tail) / samples)
        for axis, coordinate in enumerate(('len', 'second')):
            exceedance = float(np.mean(sums[:, axis] >= h))
            reports.append(BoundReport(f'hoeffding_{coordinate}', exceedance, tail + margin,
                                       {'j': j, 'h': h, 'alpha': alpha, 'samples': samples}, floor=0.0))
    return reports


@dataclass(frozen=True)
class ZipfProfile:
    symbols: tuple[str, ...]
    frequencies: tuple[int, ...]

    @property
    def rows(self) -> list[tuple[int, int]]:
        """(rank, frequency) pairs, ranks from 1"""
        return [(rank, frequency) for rank, frequency in enumerate(self.frequencies, start=1)]

    def to_frame(self) -> pd.DataFrame:
        ranks = np.arange(1, len(self.frequencies) + 1)
        frequencies = np.array(self.frequencies, dtype=np.int64)
        return pd.DataFrame({'rank': ranks, 'frequency': frequencies, 'log_rank': np.log10(ranks),
                             'log_frequency': np.log10(frequencies)})


def zipf_profile(corpus: SymbolSequence | str | Iterable[SymbolSequence | str]) -> ZipfProfile:
    """Symbol frequencies in descending order, ties in order of first occurrence

    Args:
        corpus (SymbolSequence | str | Iterable[SymbolSequence | str]): one sequence or several

    Returns:
        ZipfProfile: ranked symbols and frequencies
    """
    if isinstance(corpus, (SymbolSequence, str)):
        corpus = [corpus]
    counts = Counter()
    for sequence in corpus:
        counts.update(sequence)
    if not counts:
        raise ValueError('Symbol corpus is empty')
    ranked = sorted(counts.items(), key=lambda item: -item[1])
    return ZipfProfile(tuple(symbol for symbol, _ in ranked), tuple(count for _, count in ranked))


def write_zipf_csv(profile: ZipfProfile, path: str | Path, precision: int = 6) -> Path:
    """Write rank, frequency, log_rank, log_frequency rows (base-10 logarithms)"""
    path = Path(path)
    profile.to_frame().to_csv(path, index=False, float_format=f'%.{precision}f', lineterminator='\n')
    return path


def format_reports(reports: Sequence[BoundReport], color=None) -> str:
    """Plain-text table of bound reports

    Args:
        reports (Sequence[BoundReport]): reports to show
        color (Color, optional): colours the status column when given. Defaults to None.

    Returns:
        str: table text
    """
    lines = [f'{"bound":<24}{"measured":>16}{"limit":>16}  status']
    for report in reports:
        status = color.format_status(report.status) if color else report.status
        lines.append(f'{report.name:<24}{report.measured:>16.6g}{report.bound:>16.6g}  {status}')
    return '\n'.join(lines)
