"""Adaptive piecewise linear continuous approximation. A series is cut greedily into chords whose interior residual
stays within (len - 1) * tol**2, giving (length, increment) pieces, or (length, endpoint value) pieces for the
fixed-point variant."""
import logging
from dataclasses import dataclass

import numpy as np
from numpy.typing import ArrayLike
from scipy.stats import zscore

from ts_2_sym.core import Piece, TimeSeries, as_series, check_variant
from ts_2_sym.errors import SeriesError
from ts_2_sym.logger import DEFAULT_NAME


log = logging.getLogger(DEFAULT_NAME)

INITIAL_WINDOW = 64


@dataclass(frozen=True)
class CompressionResult:
    """Pieces of one series. `anchors` holds the sample values at the breakpoints when they are known, so the chain
    can be rebuilt without accumulating increments"""
    pieces: tuple[Piece, ...]
    t0: float
    n: int
    tol: float
    variant: str = 'apca'
    anchors: tuple[float, ...] | None = None

    def __post_init__(self):
        object.__setattr__(self, 'pieces', tuple(self.pieces))
        check_variant(self.variant)
        if sum(piece.length for piece in self.pieces) != self.n - 1:
            raise SeriesError(f'Piece lengths sum to {sum(p.length for p in self.pieces)}, expected {self.n - 1}')
        if any(piece.variant != self.variant for piece in self.pieces):
            raise SeriesError('Every piece must share the result variant')
        if self.anchors is not None:
            object.__setattr__(self, 'anchors', tuple(float(value) for value in self.anchors))
            if len(self.anchors) != len(self.pieces) + 1:
                raise SeriesError('anchors must hold one value per breakpoint')

    def __len__(self) -> int:
        return len(self.pieces)

    @property
    def lengths(self) -> np.ndarray:
        return np.array([piece.length for piece in self.pieces], dtype=np.int64)

    @property
    def seconds(self) -> np.ndarray:
        return np.array([piece.second for piece in self.pieces], dtype=np.float64)

    @property
    def breakpoints(self) -> np.ndarray:
        """Breakpoint indices i_0 = 0, ..., i_N = n - 1"""
        return np.concatenate(([0], np.cumsum(self.lengths))).astype(np.int64)

    @property
    def breakpoint_values(self) -> np.ndarray:
        """Series values at the breakpoints"""
        if self.anchors is not None:
            return np.array(self.anchors, dtype=np.float64)
        if self.variant == 'fapca':
            return np.concatenate(([self.t0], self.seconds))
        return self.t0 + np.concatenate(([0.0], np.cumsum(self.seconds)))


def znormalize(series: ArrayLike) -> TimeSeries:
    """Zero mean, unit (population) standard deviation. A constant series is only centred

    Args:
        series (ArrayLike): samples

    Returns:
        TimeSeries: normalised copy
    """
    series = as_series(series)
    if np.ptp(series) == 0:
        return series - series.mean()
    return zscore(series)


def piece_residual(series: ArrayLike, start: int, end: int) -> float:
    """Sum of squared deviations of series[start:end + 1] from the chord joining its two ends

    Args:
        series (ArrayLike): samples
        start (int): first index of the piece
        end (int): last index of the piece

    Returns:
        float: residual
    """
    series = np.asarray(series, dtype=np.float64)
    length = end - start
    if length < 1:
        raise ValueError(f'end must come after start, got start={start} end={end}')
    steps = np.arange(length + 1, dtype=np.float64)
    chord = series[start] + (series[end] - series[start]) * steps / length
    return float(np.sum((series[start:end + 1] - chord) ** 2))


def within_tolerance(series: TimeSeries, start: int, end: int, tol2: float) -> bool:
    """Whether series[start:end + 1] satisfies the chord residual criterion for squared tolerance tol2"""
    if end - start <= 1:
        return True
    return piece_residual(series, start, end) <= (end - start - 1) * tol2


def _first_rejected_end(series: TimeSeries, start: int, tol2: float) -> int:
    """First end index failing the residual criterion, len(series) when every end up to the last sample passes.
    Residuals of all candidate ends in a window come from running sums relative to series[start]; the window
    doubles until a failure appears."""
    n = len(series)
    window = INITIAL_WINDOW
    while True:
        stop = min(n - 1, start + window)
        offsets = series[start:stop + 1] - series[start]
        steps = np.arange(len(offsets), dtype=np.float64)
        lengths = steps[1:]
        slopes = offsets[1:] / lengths
        sum_steps2 = lengths * (lengths + 1) * (2 * lengths + 1) / 6
        residuals = (slopes ** 2 * sum_steps2 - 2 * slopes * np.cumsum(steps * offsets)[1:]
                     + np.cumsum(offsets ** 2)[1:])
        failing = np.flatnonzero(residuals > (lengths - 1) * tol2)
        if failing.size:
            return start + int(failing[0]) + 1
        if stop == n - 1:
            return n
        window *= 2


def _piece_end(series: TimeSeries, start: int, tol2: float) -> int:
    """Last index of the maximal piece starting at `start`. The running-sum estimate is confirmed against the
    directly summed residual at the decision boundary"""
    n = len(series)
    end = _first_rejected_end(series, start, tol2) - 1
    while end > start + 1 and not within_tolerance(series, start, end, tol2):
        end -= 1
    while end < n - 1 and within_tolerance(series, start, end + 1, tol2):
        end += 1
    return end


def partition(series: ArrayLike, tol: float) -> np.ndarray:
    """Greedy breakpoint indices of a series

    Args:
        series (ArrayLike): at least two finite samples
        tol (float): positive tolerance

    Returns:
        np.ndarray: breakpoint indices from 0 to n - 1
    """
    series = as_series(series, min_length=2)
    if not tol > 0:
        raise ValueError(f'tol must be positive, got {tol}')
    tol2 = float(tol) ** 2
    breakpoints = [0]
    while breakpoints[-1] < len(series) - 1:
        breakpoints.append(_piece_end(series, breakpoints[-1], tol2))
    return np.array(breakpoints, dtype=np.int64)


def _compress(series: ArrayLike, tol: float, variant: str) -> CompressionResult:
    series = as_series(series, min_length=2)
    breakpoints = partition(series, tol)
    anchors = series[breakpoints]
    lengths = np.diff(breakpoints)
    seconds = np.diff(anchors) if variant == 'apca' else anchors[1:]
    pieces = tuple(Piece(int(length), float(second), variant) for length, second in zip(lengths, seconds))
    log.debug(f'Compressed {len(series)} samples into {len(pieces)} {variant} pieces at tol={tol}')
    return CompressionResult(pieces, float(series[0]), len(series), float(tol), variant, tuple(anchors))


def compress_apca(series: ArrayLike, tol: float) -> CompressionResult:
    """Compress into (length, increment) pieces

    Args:
        series (ArrayLike): at least two finite samples
        tol (float): positive tolerance

    Returns:
        CompressionResult: apca pieces
    """
    return _compress(series, tol, 'apca')


def compress_fapca(series: ArrayLike, tol: float) -> CompressionResult:
    """Compress into (length, endpoint value) pieces. Same partition as compress_apca

    Args:
        series (ArrayLike): at least two finite samples
        tol (float): positive tolerance

    Returns:
        CompressionResult: fapca pieces
    """
    return _compress(series, tol, 'fapca')


def compress(series: ArrayLike, tol: float, variant: str = 'apca') -> CompressionResult:
    return _compress(series, tol, check_variant(variant))


def reconstruct_chain(result: CompressionResult) -> TimeSeries:
    """Polygonal chain through the breakpoints of a compression result

    Args:
        result (CompressionResult): compressed series

    Returns:
        TimeSeries: n samples, equal to the original at every breakpoint
    """
    return np.interp(np.arange(result.n, dtype=np.float64), result.breakpoints, result.breakpoint_values)
