"""Symbolic forecasting: symbolise the history, predict symbols with a pluggable predictor, decode the predicted
suffix from the last observed value and score it."""
import logging
from abc import ABC, abstractmethod
from collections import Counter
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np
from numpy.typing import ArrayLike
from sklearn.metrics import mean_absolute_error, mean_squared_error

from ts_2_sym.core import AbbaModel, Alphabet, SymbolSequence, TimeSeries, as_series
from ts_2_sym.digitization import transform
from ts_2_sym.errors import DecodeError
from ts_2_sym.inverse import inverse_symbolize
from ts_2_sym.logger import DEFAULT_NAME


log = logging.getLogger(DEFAULT_NAME)

MODES = ('greedy', 'sample')


class SymbolPredictor(ABC):
    """Anything that continues a symbol prefix. Returned symbols are checked against the model alphabet by
    forecast, so an external predictor may return symbols the model does not know"""

    @abstractmethod
    def predict(self, prefix: Sequence[str], steps: int) -> list[str]:
        """Continue a prefix

        Args:
            prefix (Sequence[str]): observed symbols
            steps (int): number of symbols to produce

        Returns:
            list[str]: exactly `steps` symbols
        """


@dataclass(frozen=True, eq=False)
class NGramModel(SymbolPredictor):
    """Backoff n-gram counts. tables[m] maps a context of m symbols to the counts of the symbol following it,
    tables[0][()] holds the unigram counts"""
    order: int
    delta: float
    alphabet: Alphabet
    tables: tuple[dict[tuple[str, ...], Counter], ...]
    mode: str = 'greedy'
    seed: int = 0
    vocabulary: tuple[str, ...] = field(init=False)

    def __post_init__(self):
        if self.mode not in MODES:
            raise ValueError(f'Unknown prediction mode {self.mode!r}')
        seen = self.tables[0].get((), Counter()) if self.tables else Counter()
        vocabulary = sorted(seen, key=lambda symbol: (self._rank(symbol), symbol))
        object.__setattr__(self, 'vocabulary', tuple(vocabulary))

    def _rank(self, symbol: str) -> int:
        return self.alphabet.rank(symbol) if symbol in self.alphabet else len(self.alphabet)

    def counts(self, context: Sequence[str]) -> Counter:
        """Counts of the longest suffix of `context` seen in training, unigram counts when none was"""
        context = tuple(context)
        for width in range(min(self.order, len(context)), 0, -1):
            found = self.tables[width].get(context[len(context) - width:])
            if found:
                return found
        return self.tables[0][()]

    def next_symbol(self, context: Sequence[str], rng: np.random.Generator | None = None) -> str:
        counts = self.counts(context)
        if rng is None:
            return min(counts, key=lambda symbol: (-counts[symbol], self._rank(symbol), symbol))
        weights = np.array([counts.get(symbol, 0) + self.delta for symbol in self.vocabulary], dtype=np.float64)
        if weights.sum() <= 0:
            weights = np.array([counts.get(symbol, 0) for symbol in self.vocabulary], dtype=np.float64)
        return self.vocabulary[int(rng.choice(len(self.vocabulary), p=weights / weights.sum()))]

    def predict(self, prefix: Sequence[str], steps: int) -> list[str]:
        """Greedy or seeded sampled continuation. The random stream of each generated position depends only on the
        seed and the position, so predicting in one call or one symbol at a time gives the same symbols"""
        if steps < 1:
            raise ValueError(f'steps must be at least 1, got {steps}')
        if not self.vocabulary:
            raise ValueError('The n-gram model has no counts')
        context = list(prefix)
        for _ in range(steps):
            rng = np.random.default_rng([self.seed, len(context)]) if self.mode == 'sample' else None
            context.append(self.next_symbol(context, rng))
        return context[len(prefix):]


def ngram_fit(sequences: Iterable[SymbolSequence | Sequence[str]], order: int = 3, delta: float = 0.1,
              alphabet: Alphabet | None = None, mode: str = 'greedy', seed: int = 0) -> NGramModel:
    """Count next-symbol frequencies for every context width from 0 to `order`

    Args:
        sequences (Iterable[SymbolSequence | Sequence[str]]): training corpus
        order (int, optional): longest context. Defaults to 3.
        delta (float, optional): additive smoothing of sampled predictions. Defaults to 0.1.
        alphabet (Alphabet, optional): rank order for ties. Defaults to the first sequence's alphabet, or the order
            of first occurrence.
        mode (str, optional): greedy or sample. Defaults to 'greedy'.
        seed (int, optional): seed of sampled predictions. Defaults to 0.

    Returns:
        NGramModel: fitted counts
    """
    if order < 1:
        raise ValueError(f'order must be at least 1, got {order}')
    if delta < 0:
        raise ValueError(f'delta must be non-negative, got {delta}')
    tables = tuple({} for _ in range(order + 1))
    first_seen = {}
    for sequence in sequences:
        if alphabet is None and isinstance(sequence, SymbolSequence):
            alphabet = sequence.alphabet
        symbols = list(sequence)
        for position, symbol in enumerate(symbols):
            first_seen.setdefault(symbol, len(first_seen))
            for width in range(0, min(order, position) + 1):
                context = tuple(symbols[position - width:position])
                tables[width].setdefault(context, Counter())[symbol] += 1
    if not first_seen:
        raise ValueError('Symbol corpus is empty')
    if alphabet is None:
        alphabet = Alphabet(tuple(first_seen), 'builtin')
    log.debug(f'Fitted order {order} n-gram model on {sum(tables[0][()].values())} symbols')
    return NGramModel(order, delta, alphabet, tables, mode, seed)


def ngram_predict(model: NGramModel, prefix: SymbolSequence | Sequence[str], steps: int, mode: str = 'greedy',
                  seed: int = 0) -> SymbolSequence:
    """Continue a prefix by `steps` symbols

    Args:
        model (NGramModel): fitted counts
        prefix (SymbolSequence | Sequence[str]): observed symbols
        steps (int): number of symbols, at least 1
        mode (str, optional): greedy or sample. Defaults to 'greedy'.
        seed (int, optional): seed of sampled predictions. Defaults to 0.

    Returns:
        SymbolSequence: predicted symbols
    """
    predictor = NGramModel(model.order, model.delta, model.alphabet, model.tables, mode, seed)
    return SymbolSequence(tuple(predictor.predict(list(prefix), steps)), model.alphabet)


def forecast(model: AbbaModel, predictor: SymbolPredictor, history: ArrayLike, horizon: int,
             tol: float | None = None) -> TimeSeries:
    """Forecast `horizon` values after a history

    Args:
        model (AbbaModel): fitted model
        predictor (SymbolPredictor): symbol predictor
        history (ArrayLike): observed samples, at least two
        horizon (int): number of forecast values, at least 1
        tol (float, optional): compression tolerance of the history. Defaults to the model tol.

    Raises:
        DecodeError: the predictor produced a symbol the model does not use

    Returns:
        TimeSeries: exactly `horizon` values
    """
    if horizon < 1:
        raise ValueError(f'horizon must be at least 1, got {horizon}')
    history = as_series(history, min_length=2, name='history')
    context = list(transform(model, history, tol))
    known = model.symbol_to_center
    anchor = float(history[-1])
    predicted = []
    suffix = np.array([anchor])
    while len(suffix) - 1 < horizon:
        symbol = predictor.predict(context + predicted, 1)[0]
        if symbol not in known:
            raise DecodeError(symbol, len(context) + len(predicted))
        predicted.append(symbol)
        suffix = inverse_symbolize(model, predicted, anchor)
    log.debug(f'Forecast {horizon} values from {len(predicted)} predicted symbols')
    return suffix[1:horizon + 1]


def persistence_forecast(history: ArrayLike, horizon: int) -> TimeSeries:
    """Repeat the last observed value"""
    history = as_series(history, name='history')
    return np.full(horizon, history[-1], dtype=np.float64)


def evaluate_forecast(truth: ArrayLike, predicted: ArrayLike) -> dict:
    """MSE and MAE of a forecast

    Args:
        truth (ArrayLike): observed values
        predicted (ArrayLike): forecast values, same length

    Returns:
        dict: mse and mae
    """
    truth = as_series(truth, name='truth')
    predicted = as_series(predicted, name='forecast')
    if len(truth) != len(predicted):
        raise ValueError(f'truth has {len(truth)} values, forecast has {len(predicted)}')
    return {'mse': float(mean_squared_error(truth, predicted)), 'mae': float(mean_absolute_error(truth, predicted))}
