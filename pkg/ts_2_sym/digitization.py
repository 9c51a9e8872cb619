"""Digitization: pieces are scaled into (scl * len / sigma_len, second / sigma_second) tuples, clustered, and every
cluster is named by one alphabet symbol in order of descending cardinality."""
import logging
from dataclasses import dataclass
from typing import Callable, Iterable, Sequence

import joblib
import numpy as np
from numpy.typing import ArrayLike
from sklearn.cluster import KMeans

from ts_2_sym.compression import CompressionResult, compress
from ts_2_sym.core import (DIGITIZERS, AbbaModel, Alphabet, Codebook, Piece, ScaledTuple, SymbolSequence,
                           alphabet_default, nearest_centers)
from ts_2_sym.logger import DEFAULT_NAME


log = logging.getLogger(DEFAULT_NAME)

MAX_ITER = 300


def _as_tuples(tuples: ArrayLike | Iterable[ScaledTuple]) -> np.ndarray:
    if isinstance(tuples, np.ndarray):
        points = np.asarray(tuples, dtype=np.float64)
    else:
        points = np.array([(t.x, t.y) if isinstance(t, ScaledTuple) else tuple(t) for t in tuples],
                          dtype=np.float64)
    points = points.reshape(-1, 2)
    if not len(points):
        raise ValueError('At least one tuple is required')
    if not np.all(np.isfinite(points)):
        raise ValueError('Tuples must be finite')
    return points


def _population_std(values: np.ndarray) -> float:
    """Population standard deviation with 0 replaced by 1"""
    sigma = float(np.std(values))
    return sigma if sigma > 0 else 1.0


def scale_with(pieces: Sequence[Piece], scl: float, sigma_len: float, sigma_second: float) -> np.ndarray:
    """Scale pieces with given statistics

    Args:
        pieces (Sequence[Piece]): pieces to scale
        scl (float): weight of the length coordinate
        sigma_len (float): length standard deviation
        sigma_second (float): increment (or value) standard deviation

    Returns:
        np.ndarray: (N, 2) scaled tuples
    """
    lengths = np.array([piece.length for piece in pieces], dtype=np.float64)
    seconds = np.array([piece.second for piece in pieces], dtype=np.float64)
    return np.column_stack((scl * lengths / sigma_len, seconds / sigma_second)).reshape(-1, 2)


def scale_tuples(pieces: Sequence[Piece], scl: float) -> tuple[np.ndarray, float, float]:
    """Scale pieces by their own population standard deviations

    Args:
        pieces (Sequence[Piece]): non-empty list of pieces
        scl (float): non-negative weight of the length coordinate, 0 clusters on the second coordinate only

    Returns:
        tuple[np.ndarray, float, float]: (N, 2) tuples, sigma_len, sigma_second
    """
    if scl < 0:
        raise ValueError(f'scl must be non-negative, got {scl}')
    if not len(pieces):
        raise ValueError('At least one piece is required')
    sigma_len = _population_std(np.array([piece.length for piece in pieces], dtype=np.float64))
    sigma_second = _population_std(np.array([piece.second for piece in pieces], dtype=np.float64))
    return scale_with(pieces, scl, sigma_len, sigma_second), sigma_len, sigma_second


@dataclass(frozen=True, eq=False)
class Clustering:
    """Labels and mean centers of a clustering, clusters ranked by descending cardinality. `starts` holds the
    starting point of each greedy group"""
    centers: np.ndarray
    labels: np.ndarray
    cardinalities: tuple[int, ...]
    starts: np.ndarray | None = None

    @property
    def k(self) -> int:
        return len(self.centers)

    def sse(self, tuples: ArrayLike) -> float:
        points = _as_tuples(tuples)
        return float(np.sum((points - self.centers[self.labels]) ** 2))


def _ranked(points: np.ndarray, labels: np.ndarray, starts: np.ndarray | None = None) -> Clustering:
    """Means of the non-empty clusters, re-indexed by descending cardinality with ties kept in label order"""
    used, labels = np.unique(labels, return_inverse=True)
    counts = np.bincount(labels)
    centers = np.column_stack([np.bincount(labels, weights=points[:, axis]) for axis in range(2)])
    centers /= counts[:, None]
    order = np.lexsort((np.arange(len(counts)), -counts))
    rank_of = np.empty_like(order)
    rank_of[order] = np.arange(len(order))
    if starts is not None:
        starts = np.asarray(starts)[used][order]
    return Clustering(centers[order], rank_of[labels], tuple(int(count) for count in counts[order]), starts)


def aggregate_greedy(tuples: ArrayLike | Iterable[ScaledTuple], alpha: float, early_stop: bool = True) -> Clustering:
    """Sorting-based greedy aggregation. Points are visited by ascending norm; the first unassigned point starts a
    group that takes every unassigned point within alpha of it

    Args:
        tuples (ArrayLike | Iterable[ScaledTuple]): scaled tuples
        alpha (float): positive group radius
        early_stop (bool, optional): stop scanning once norms exceed the start norm by alpha. Defaults to True.

    Returns:
        Clustering: ranked groups with mean centers
    """
    if not alpha > 0:
        raise ValueError(f'alpha must be positive, got {alpha}')
    points = _as_tuples(tuples)
    norms = np.linalg.norm(points, axis=1)
    order = np.argsort(norms, kind='stable')
    sorted_norms = norms[order]
    labels = np.full(len(points), -1, dtype=np.int64)
    starts = []
    alpha2 = alpha * alpha
    for position, index in enumerate(order):
        if labels[index] >= 0:
            continue
        if early_stop:
            reach = sorted_norms[position] + alpha
            stop = np.searchsorted(sorted_norms, reach + 1e-9 * (reach + 1.0), side='right')
        else:
            stop = len(order)
        candidates = order[position:stop]
        candidates = candidates[labels[candidates] < 0]
        within = np.sum((points[candidates] - points[index]) ** 2, axis=1) <= alpha2
        labels[candidates[within]] = len(starts)
        starts.append(index)
    clustering = _ranked(points, labels, np.array(starts, dtype=np.int64))
    log.debug(f'Greedy aggregation of {len(points)} tuples at alpha={alpha}: {clustering.k} groups')
    return clustering


def aggregate_lloyd(tuples: ArrayLike | Iterable[ScaledTuple], k: int, seed: int = 0, n_init: int = 10,
                    max_iter: int = MAX_ITER) -> Clustering:
    """k-means with k-means++ seeding

    Args:
        tuples (ArrayLike | Iterable[ScaledTuple]): scaled tuples
        k (int): number of clusters, at most the number of distinct tuples
        seed (int, optional): random state. Defaults to 0.
        n_init (int, optional): seeded restarts, the lowest SSE is kept. Defaults to 10.
        max_iter (int, optional): iteration cap per restart. Defaults to 300.

    Returns:
        Clustering: ranked clusters with mean centers
    """
    points = _as_tuples(tuples)
    distinct = len(np.unique(points, axis=0))
    if not 1 <= k <= distinct:
        raise ValueError(f'k must be between 1 and the number of distinct tuples ({distinct}), got {k}')
    kmeans = KMeans(n_clusters=k, init='k-means++', n_init=n_init, max_iter=max_iter, random_state=seed)
    kmeans.fit(points)
    clustering = _ranked(points, kmeans.labels_.astype(np.int64))
    log.debug(f'Lloyd clustering of {len(points)} tuples into {clustering.k} clusters after {kmeans.n_iter_} '
              'iterations')
    return clustering


def assign_nearest(tuples: ArrayLike, clustering: Clustering, max_iter: int = MAX_ITER) -> Clustering:
    """Give every tuple the label of its nearest center, recompute the means and re-rank until the assignment is
    stable

    Args:
        tuples (ArrayLike): scaled tuples the clustering was built from
        clustering (Clustering): initial clustering
        max_iter (int, optional): round cap. Defaults to 300.

    Returns:
        Clustering: clustering whose labels are the nearest-center labels of its own centers
    """
    points = _as_tuples(tuples)
    current = _ranked(points, clustering.labels)
    for _ in range(max_iter):
        nearest = nearest_centers(points, current.centers)
        if np.array_equal(nearest, current.labels):
            return current
        current = _ranked(points, nearest)
    log.warning(f'Nearest-center assignment did not settle within {max_iter} rounds')
    return current


@dataclass(frozen=True)
class FitInput:
    results: tuple[CompressionResult, ...]
    scl: float = 1.0
    digitizer: str = 'greedy'
    alpha: float | None = None
    k: int | None = None
    seed: int = 0
    n_init: int = 10
    max_iter: int = MAX_ITER

    def __post_init__(self):
        object.__setattr__(self, 'results', tuple(self.results))
        if not self.results:
            raise ValueError('At least one compressed series is required')
        if len({result.variant for result in self.results}) != 1:
            raise ValueError('All series must be compressed with the same variant')
        if len({result.tol for result in self.results}) != 1:
            raise ValueError('All series must be compressed with the same tol')
        if self.scl < 0:
            raise ValueError(f'scl must be non-negative, got {self.scl}')
        if self.digitizer not in DIGITIZERS:
            raise ValueError(f'Unknown digitizer {self.digitizer!r}')
        if self.digitizer == 'greedy' and not (self.alpha and self.alpha > 0):
            raise ValueError('The greedy digitizer needs a positive alpha')
        if self.digitizer == 'lloyd' and not (self.k and self.k >= 1):
            raise ValueError('The lloyd digitizer needs k >= 1')

    @property
    def variant(self) -> str:
        return self.results[0].variant

    @property
    def pieces(self) -> list[Piece]:
        return [piece for result in self.results for piece in result.pieces]


def fit(fit_input: FitInput, alphabet: Alphabet | Callable[[int], Alphabet] = alphabet_default
        ) -> tuple[AbbaModel, list[SymbolSequence]]:
    """Cluster the pieces of every series together and symbolise each series with the shared codebook

    Args:
        fit_input (FitInput): compressed series and digitizer settings
        alphabet (Alphabet | Callable[[int], Alphabet], optional): symbols, at least as many as clusters, or a
            builder called with the cluster count. Defaults to the builtin alphabet.

    Raises:
        AlphabetError: more clusters than symbols

    Returns:
        tuple[AbbaModel, list[SymbolSequence]]: model and one symbol sequence per series
    """
    pieces = fit_input.pieces
    tuples, sigma_len, sigma_second = scale_tuples(pieces, fit_input.scl)
    if fit_input.digitizer == 'greedy':
        clustering = aggregate_greedy(tuples, fit_input.alpha)
    else:
        clustering = aggregate_lloyd(tuples, fit_input.k, fit_input.seed, fit_input.n_init, fit_input.max_iter)
    clustering = assign_nearest(tuples, clustering, fit_input.max_iter)
    if not isinstance(alphabet, Alphabet):
        alphabet = alphabet(clustering.k)
    alphabet.require(clustering.k)
    mean_lengths = None
    if fit_input.scl == 0:
        lengths = np.array([piece.length for piece in pieces], dtype=np.float64)
        mean_lengths = np.bincount(clustering.labels, weights=lengths) / np.array(clustering.cardinalities)
    codebook = Codebook(clustering.centers, clustering.cardinalities, sigma_len, sigma_second, fit_input.scl,
                        fit_input.variant, mean_lengths)
    model = AbbaModel(variant=fit_input.variant, tol=fit_input.results[0].tol,
                      alpha=fit_input.alpha if fit_input.digitizer == 'greedy' else None, scl=fit_input.scl,
                      codebook=codebook, alphabet=alphabet, digitizer=fit_input.digitizer,
                      t0=tuple(result.t0 for result in fit_input.results))
    bounds = np.concatenate(([0], np.cumsum([len(result) for result in fit_input.results])))
    sequences = [model.sequence(clustering.labels[start:stop]) for start, stop in zip(bounds[:-1], bounds[1:])]
    log.debug(f'Fitted {len(fit_input.results)} series, {len(pieces)} pieces, {model.k} symbols')
    return model, sequences


def digitize(model: AbbaModel, result: CompressionResult) -> SymbolSequence:
    """Symbolise already compressed pieces with a fitted model"""
    codebook = model.codebook
    tuples = scale_with(result.pieces, codebook.scl, codebook.sigma_len, codebook.sigma_second)
    return model.sequence(codebook.nearest(tuples))


def transform(model: AbbaModel, series: ArrayLike, tol: float | None = None) -> SymbolSequence:
    """Symbolise a series against a fitted model. Scaling uses the model statistics, the model is not changed

    Args:
        model (AbbaModel): fitted model
        series (ArrayLike): at least two finite samples
        tol (float, optional): compression tolerance. Defaults to the model tol.

    Returns:
        SymbolSequence: one symbol per piece
    """
    return digitize(model, compress(series, model.tol if tol is None else tol, model.variant))


def transform_many(model: AbbaModel, series_list: Sequence[ArrayLike], tol: float | None = None,
                   workers: int = 1) -> list[SymbolSequence]:
    """transform over many series with a thread pool, results in input order

    Args:
        model (AbbaModel): fitted model
        series_list (Sequence[ArrayLike]): series to symbolise
        tol (float, optional): compression tolerance. Defaults to the model tol.
        workers (int, optional): worker threads, -1 for one per core. Defaults to 1.

    Returns:
        list[SymbolSequence]: one sequence per input series
    """
    return joblib.Parallel(n_jobs=workers, prefer='threads')(
        joblib.delayed(transform)(model, series, tol) for series in series_list)
