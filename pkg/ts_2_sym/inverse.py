"""Inverse symbolization: symbols to denormalized centers, integer lengths by carry-forward rounding, then the
polygonal chain through the resulting breakpoints."""
import logging
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from ts_2_sym.core import AbbaModel, SymbolSequence, TimeSeries, check_variant
from ts_2_sym.errors import DecodeError
from ts_2_sym.logger import DEFAULT_NAME


log = logging.getLogger(DEFAULT_NAME)


def inverse_digitize(model: AbbaModel, symbols: SymbolSequence | Iterable[str]) -> list[tuple[float, float]]:
    """Replace every symbol by its denormalized center

    Args:
        model (AbbaModel): fitted model
        symbols (SymbolSequence | Iterable[str]): symbols to decode

    Raises:
        DecodeError: a symbol the model does not use, with its position

    Returns:
        list[tuple[float, float]]: real-valued (length, second) pairs
    """
    lookup = model.symbol_to_center
    lengths, seconds = model.codebook.denormalize()
    pieces = []
    for position, symbol in enumerate(symbols):
        center = lookup.get(symbol)
        if center is None:
            raise DecodeError(symbol, position)
        pieces.append((float(lengths[center]), float(seconds[center])))
    return pieces


def round_lengths(real_lengths: Iterable[float]) -> list[int]:
    """Round lengths one at a time, carrying each rounding error into the next length. A length rounding to 0 is
    clamped to 1 and the clamp is charged to the carry. Halves round to even

    Args:
        real_lengths (Iterable[float]): positive lengths

    Returns:
        list[int]: positive integer lengths
    """
    carry = 0.0
    rounded = []
    for position, length in enumerate(real_lengths):
        if not length > 0:
            raise ValueError(f'Lengths must be positive, got {length} at position {position}')
        target = length + carry
        value = max(1, int(round(target)))
        carry = target - value
        rounded.append(value)
    return rounded


@dataclass(frozen=True)
class ReconstructedPieces:
    lengths: tuple[int, ...]
    seconds: tuple[float, ...]
    t0: float
    variant: str = 'apca'

    def __post_init__(self):
        check_variant(self.variant)
        if len(self.lengths) != len(self.seconds):
            raise ValueError('lengths and seconds must have the same size')
        if any(length < 1 for length in self.lengths):
            raise ValueError('Reconstructed lengths must be positive')

    def __len__(self) -> int:
        return len(self.lengths)

    @property
    def breakpoints(self) -> np.ndarray:
        return np.concatenate(([0], np.cumsum(self.lengths, dtype=np.int64))).astype(np.int64)

    @property
    def values(self) -> np.ndarray:
        """Value at every breakpoint: accumulated increments (apca) or the pinned endpoint values (fapca)"""
        seconds = np.array(self.seconds, dtype=np.float64)
        if self.variant == 'fapca':
            return np.concatenate(([self.t0], seconds))
        return self.t0 + np.concatenate(([0.0], np.cumsum(seconds)))


def _initial_value(model: AbbaModel, t0: float | None) -> float:
    if t0 is not None:
        return float(t0)
    if model.t0:
        return model.t0[0]
    raise ValueError('No initial value given and the model records none')


def reconstruct_pieces(model: AbbaModel, symbols: SymbolSequence | Iterable[str],
                       t0: float | None = None) -> ReconstructedPieces:
    """Decode symbols into integer-length pieces anchored at t0

    Args:
        model (AbbaModel): fitted model
        symbols (SymbolSequence | Iterable[str]): symbols to decode
        t0 (float, optional): initial value. Defaults to the first initial value recorded by the model.

    Returns:
        ReconstructedPieces: decoded pieces
    """
    pieces = inverse_digitize(model, symbols)
    lengths = round_lengths(length for length, _ in pieces)
    return ReconstructedPieces(tuple(lengths), tuple(second for _, second in pieces), _initial_value(model, t0),
                               model.variant)


def breakpoints(pieces: ReconstructedPieces) -> tuple[np.ndarray, np.ndarray]:
    """Breakpoint indices and values of decoded pieces"""
    return pieces.breakpoints, pieces.values


def chain(pieces: ReconstructedPieces) -> TimeSeries:
    indices, values = breakpoints(pieces)
    return np.interp(np.arange(indices[-1] + 1, dtype=np.float64), indices, values)


def inverse_symbolize(model: AbbaModel, symbols: SymbolSequence | Iterable[str],
                      t0: float | None = None) -> TimeSeries:
    """Numerical series represented by a symbol sequence

    Args:
        model (AbbaModel): fitted model
        symbols (SymbolSequence | Iterable[str]): symbols to decode
        t0 (float, optional): initial value. Defaults to the first initial value recorded by the model.

    Returns:
        TimeSeries: 1 + sum of the decoded lengths samples
    """
    return chain(reconstruct_pieces(model, symbols, t0))


@dataclass(frozen=True)
class PerturbationReport:
    """Effect of replacing one symbol. `drift` and `index_shift` cover the breakpoints that close the pieces after
    the replaced one"""
    variant: str
    position: int
    original: str
    replacement: str
    drift: tuple[float, ...]
    index_shift: tuple[int, ...]
    max_deviation: float

    @property
    def max_drift(self) -> float:
        return max(self.drift, default=0.0)

    def as_dict(self) -> dict:
        return {'variant': self.variant, 'position': self.position, 'original': self.original,
                'replacement': self.replacement, 'drift': list(self.drift), 'index_shift': list(self.index_shift),
                'max_drift': self.max_drift, 'max_deviation': self.max_deviation}


def perturb_and_compare(model: AbbaModel, symbols: SymbolSequence | Sequence[str], position: int,
                        replacement: str, t0: float | None = None) -> PerturbationReport:
    """Reconstruct a sequence with and without one replaced symbol and measure the breakpoint drift

    Args:
        model (AbbaModel): fitted model
        symbols (SymbolSequence | Sequence[str]): unperturbed symbols
        position (int): 0-based position of the replaced symbol
        replacement (str): symbol written at that position
        t0 (float, optional): initial value. Defaults to the first initial value recorded by the model.

    Returns:
        PerturbationReport: per-breakpoint drift after the replaced piece
    """
    symbols = list(symbols)
    if not 0 <= position < len(symbols):
        raise ValueError(f'Position {position} is outside a sequence of {len(symbols)} symbols')
    if replacement not in model.symbol_to_center:
        raise DecodeError(replacement, position)
    perturbed = symbols[:position] + [replacement] + symbols[position + 1:]
    before = reconstruct_pieces(model, symbols, t0)
    after = reconstruct_pieces(model, perturbed, t0)
    later = slice(position + 2, None)
    drift = np.abs(after.values[later] - before.values[later])
    shift = after.breakpoints[later] - before.breakpoints[later]
    original_series, perturbed_series = chain(before), chain(after)
    overlap = min(len(original_series), len(perturbed_series))
    deviation = float(np.max(np.abs(perturbed_series[:overlap] - original_series[:overlap])))
    log.debug(f'Replaced {symbols[position]!r} by {replacement!r} at {position}: max drift '
              f'{float(drift.max()) if drift.size else 0.0}')
    return PerturbationReport(model.variant, position, symbols[position], replacement,
                              tuple(float(value) for value in drift), tuple(int(value) for value in shift),
                              deviation)
