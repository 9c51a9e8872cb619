"""Domain types shared by every stage of the symbolisation pipeline: series validation, pieces and their scaled
form, alphabets, codebooks, symbol sequences and the persistable model."""
import json
from dataclasses import dataclass, field
from itertools import islice, product
from pathlib import Path
from string import ascii_lowercase, ascii_uppercase
from typing import Iterable, Iterator

import numpy as np
from numpy.typing import ArrayLike, NDArray

from ts_2_sym.errors import AlphabetError, DecodeError, ModelError, SeriesError, TokenError


VARIANTS = ('apca', 'fapca')
DIGITIZERS = ('greedy', 'lloyd')
ALPHABET_SOURCES = ('builtin', 'ascii-extended', 'external-token-file')
MODEL_VERSION = 1

TimeSeries = NDArray[np.float64]


def as_series(values: ArrayLike, min_length: int = 1, name: str = 'series') -> TimeSeries:
    """Validate and copy samples into a 1-D float64 array

    Args:
        values (ArrayLike): samples
        min_length (int, optional): minimum number of samples. Defaults to 1.
        name (str, optional): name used in error messages. Defaults to 'series'.

    Raises:
        SeriesError: not one-dimensional, too short, not numeric or holding a non-finite sample

    Returns:
        TimeSeries: validated copy of the samples
    """
    try:
        array = np.array(values, dtype=np.float64)
    except (TypeError, ValueError) as error:
        raise SeriesError(f'{name} is not numeric: {error}') from error
    if array.ndim != 1:
        raise SeriesError(f'{name} must be one-dimensional, got shape {array.shape}')
    if array.size < min_length:
        raise SeriesError(f'{name} needs at least {min_length} samples, got {array.size}')
    bad = np.flatnonzero(~np.isfinite(array))
    if bad.size:
        raise SeriesError(f'{name} has a non-finite sample at index {bad[0]}')
    return array


def check_variant(variant: str) -> str:
    if variant not in VARIANTS:
        raise ValueError(f'Unknown variant {variant!r}, expected one of {", ".join(VARIANTS)}')
    return variant


@dataclass(frozen=True, slots=True)
class Piece:
    """One polygonal chain segment. `second` is the increment (apca) or the endpoint value (fapca)"""
    length: int
    second: float
    variant: str = 'apca'

    def __post_init__(self):
        if int(self.length) != self.length or self.length < 1:
            raise SeriesError(f'Piece length must be a positive integer, got {self.length}')
        check_variant(self.variant)


@dataclass(frozen=True, slots=True)
class ScaledTuple:
    x: float
    y: float


def scale_piece(piece: Piece, scl: float, sigma_len: float, sigma_second: float) -> ScaledTuple:
    """Map a piece into the scaled clustering space

    Args:
        piece (Piece): piece to scale
        scl (float): weight of the length coordinate
        sigma_len (float): length standard deviation
        sigma_second (float): increment (or value) standard deviation

    Returns:
        ScaledTuple: (scl * len / sigma_len, second / sigma_second)
    """
    return ScaledTuple(scl * piece.length / sigma_len, piece.second / sigma_second)


def unscale_tuple(point: ScaledTuple, scl: float, sigma_len: float, sigma_second: float,
                  variant: str = 'apca') -> Piece:
    """Inverse of scale_piece. Only defined for scl > 0, a zero weight erases the length

    Args:
        point (ScaledTuple): scaled tuple
        scl (float): weight of the length coordinate
        sigma_len (float): length standard deviation
        sigma_second (float): increment (or value) standard deviation
        variant (str, optional): piece variant. Defaults to 'apca'.

    Returns:
        Piece: the piece the tuple was scaled from
    """
    if scl <= 0:
        raise ValueError('A tuple scaled with scl = 0 carries no length information')
    return Piece(int(round(point.x * sigma_len / scl)), point.y * sigma_second, variant)


def _enumerate_symbols(characters: str, k: int) -> list[str]:
    """Single characters first, then every two-character combination in the given order, then three, ..."""
    def combinations() -> Iterator[str]:
        width = 1
        while True:
            for letters in product(characters, repeat=width):
                yield ''.join(letters)
            width += 1
    return list(islice(combinations(), k))


@dataclass(frozen=True)
class Alphabet:
    """Ordered, duplicate free symbol list. The symbol of rank r names the r-th most frequent cluster"""
    symbols: tuple[str, ...]
    source: str = 'builtin'
    _index: dict = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        symbols = tuple(self.symbols)
        object.__setattr__(self, 'symbols', symbols)
        if self.source not in ALPHABET_SOURCES:
            raise ValueError(f'Unknown alphabet source {self.source!r}')
        if not symbols:
            raise TokenError('Alphabet is empty')
        index = {}
        for rank, symbol in enumerate(symbols):
            if not isinstance(symbol, str) or not symbol:
                raise TokenError(f'Empty symbol at rank {rank}')
            if symbol in index:
                raise TokenError(f'Duplicate symbol {symbol!r} at ranks {index[symbol]} and {rank}')
            index[symbol] = rank
        object.__setattr__(self, '_index', index)

    def __len__(self) -> int:
        return len(self.symbols)

    def __iter__(self) -> Iterator[str]:
        return iter(self.symbols)

    def __contains__(self, symbol: object) -> bool:
        return symbol in self._index

    def __getitem__(self, rank: int) -> str:
        return self.symbols[rank]

    def rank(self, symbol: str) -> int:
        """Position of a symbol in the alphabet

        Raises:
            KeyError: symbol not in the alphabet
        """
        return self._index[symbol]

    def require(self, count: int) -> tuple[str, ...]:
        """First `count` symbols, the ones assigned to `count` ranked clusters

        Raises:
            AlphabetError: fewer than `count` symbols available

        Returns:
            tuple[str, ...]: assigned symbols
        """
        if count > len(self.symbols):
            raise AlphabetError(count, len(self.symbols))
        return self.symbols[:count]


def alphabet_default(k: int) -> Alphabet:
    """Builtin alphabet: a-z, A-Z, then two-character combinations of those 52 letters in that order, then three

    Args:
        k (int): number of symbols

    Returns:
        Alphabet: k distinct symbols
    """
    if k < 1:
        raise ValueError(f'Alphabet size must be positive, got {k}')
    return Alphabet(tuple(_enumerate_symbols(ascii_lowercase + ascii_uppercase, k)), 'builtin')


def alphabet_ascii_extended(k: int) -> Alphabet:
    """Printable non-whitespace ASCII (codes 33 to 126), then multi-character combinations

    Args:
        k (int): number of symbols

    Returns:
        Alphabet: k distinct symbols
    """
    if k < 1:
        raise ValueError(f'Alphabet size must be positive, got {k}')
    characters = ''.join(chr(code) for code in range(33, 127))
    return Alphabet(tuple(_enumerate_symbols(characters, k)), 'ascii-extended')


def alphabet_from_tokens(lines: Iterable[str]) -> Alphabet:
    """Alphabet from an external token list, one token per line, file order preserved

    Args:
        lines (Iterable[str]): token lines, trailing newlines are ignored

    Raises:
        TokenError: empty list, empty token, token with whitespace or duplicate token

    Returns:
        Alphabet: alphabet with source external-token-file
    """
    seen = {}
    tokens = []
    for number, line in enumerate(lines, start=1):
        token = line.rstrip('\r\n')
        if not token:
            raise TokenError(f'Empty token on line {number}')
        if any(char.isspace() for char in token):
            raise TokenError(f'Token {token!r} on line {number} contains whitespace')
        if token in seen:
            raise TokenError(f'Duplicate token {token!r} on lines {seen[token]} and {number}')
        seen[token] = number
        tokens.append(token)
    if not tokens:
        raise TokenError('Token list is empty')
    return Alphabet(tuple(tokens), 'external-token-file')


@dataclass(frozen=True, eq=False)
class Codebook:
    """Cluster centers in scaled space, ranked by descending cardinality, plus the statistics defining the space.
    `mean_lengths` holds each cluster's mean raw length and is only required when scl = 0"""
    centers: np.ndarray
    cardinalities: tuple[int, ...]
    sigma_len: float
    sigma_second: float
    scl: float
    variant: str = 'apca'
    mean_lengths: np.ndarray | None = None

    def __post_init__(self):
        centers = np.array(self.centers, dtype=np.float64).reshape(-1, 2)
        centers.flags.writeable = False
        object.__setattr__(self, 'centers', centers)
        object.__setattr__(self, 'cardinalities', tuple(int(count) for count in self.cardinalities))
        check_variant(self.variant)
        if len(self.cardinalities) != len(centers):
            raise ModelError(f'{len(centers)} centers but {len(self.cardinalities)} cardinalities')
        if not len(centers):
            raise ModelError('Codebook has no centers')
        if not np.all(np.isfinite(centers)):
            raise ModelError('Codebook centers must be finite')
        if self.sigma_len <= 0 or self.sigma_second <= 0:
            raise ModelError('Standard deviations must be positive')
        if self.scl < 0:
            raise ModelError(f'scl must be non-negative, got {self.scl}')
        if self.mean_lengths is not None:
            mean_lengths = np.array(self.mean_lengths, dtype=np.float64).reshape(-1)
            if len(mean_lengths) != len(centers):
                raise ModelError('mean_lengths must hold one value per center')
            mean_lengths.flags.writeable = False
            object.__setattr__(self, 'mean_lengths', mean_lengths)
        elif self.scl == 0:
            raise ModelError('A codebook built with scl = 0 needs mean_lengths')

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Codebook):
            return NotImplemented
        same_lengths = (self.mean_lengths is None and other.mean_lengths is None) or (
            self.mean_lengths is not None and other.mean_lengths is not None
            and np.array_equal(self.mean_lengths, other.mean_lengths))
        return (np.array_equal(self.centers, other.centers) and self.cardinalities == other.cardinalities
                and self.sigma_len == other.sigma_len and self.sigma_second == other.sigma_second
                and self.scl == other.scl and self.variant == other.variant and same_lengths)

    @property
    def k(self) -> int:
        return len(self.centers)

    def nearest(self, tuples: ArrayLike) -> np.ndarray:
        """Index of the closest center for every scaled tuple. Ties go to the lower ranked (more frequent) center

        Args:
            tuples (ArrayLike): (N, 2) scaled tuples

        Returns:
            np.ndarray: N center indices
        """
        return nearest_centers(tuples, self.centers)

    def denormalize(self) -> tuple[np.ndarray, np.ndarray]:
        """Centers mapped back to (length, second) units

        Returns:
            tuple[np.ndarray, np.ndarray]: real-valued lengths and seconds, one per center
        """
        if self.scl > 0:
            lengths = self.centers[:, 0] * self.sigma_len / self.scl
        else:
            lengths = self.mean_lengths
        return np.asarray(lengths, dtype=np.float64), self.centers[:, 1] * self.sigma_second


def nearest_centers(tuples: ArrayLike, centers: ArrayLike) -> np.ndarray:
    """Exact squared Euclidean nearest-center search in row chunks. np.argmin keeps the first of tied minima

    Args:
        tuples (ArrayLike): (N, 2) points
        centers (ArrayLike): (k, 2) centers

    Returns:
        np.ndarray: N indices into centers
    """
    points = np.asarray(tuples, dtype=np.float64).reshape(-1, 2)
    centers = np.asarray(centers, dtype=np.float64).reshape(-1, 2)
    labels = np.empty(len(points), dtype=np.int64)
    rows = max(1, (1 << 21) // max(len(centers), 1))
    for start in range(0, len(points), rows):
        chunk = points[start:start + rows]
        distances = ((chunk[:, None, :] - centers[None, :, :]) ** 2).sum(axis=2)
        labels[start:start + rows] = np.argmin(distances, axis=1)
    return labels


@dataclass(frozen=True)
class SymbolSequence:
    symbols: tuple[str, ...]
    alphabet: Alphabet

    def __post_init__(self):
        symbols = tuple(self.symbols)
        object.__setattr__(self, 'symbols', symbols)
        for position, symbol in enumerate(symbols):
            if symbol not in self.alphabet:
                raise DecodeError(symbol, position)

    def __len__(self) -> int:
        return len(self.symbols)

    def __iter__(self) -> Iterator[str]:
        return iter(self.symbols)

    def __getitem__(self, index):
        return self.symbols[index]

    def __str__(self) -> str:
        return self.to_text()

    def to_text(self, single: bool | None = None) -> str:
        """Whitespace-free string when `single`, single-space separated otherwise. `single` defaults to whether
        every symbol of the sequence is one character"""
        if single is None:
            single = all(len(symbol) == 1 for symbol in self.symbols)
        if single:
            return ''.join(self.symbols)
        return ' '.join(self.symbols)


def _number(value) -> str:
    """JSON number with 17 significant digits, null for None"""
    if value is None:
        return 'null'
    if isinstance(value, (int, np.integer)) and not isinstance(value, bool):
        return str(int(value))
    return format(float(value), '.17g')


def _number_list(values: Iterable) -> str:
    return '[' + ', '.join(_number(value) for value in values) + ']'


@dataclass(frozen=True)
class AbbaModel:
    """Fitted symbolisation: variant, hyperparameters, codebook, alphabet and the per-series initial values.
    Symbol alphabet[r] names codebook center r for r < k"""
    variant: str
    tol: float
    alpha: float | None
    scl: float
    codebook: Codebook
    alphabet: Alphabet
    digitizer: str = 'greedy'
    t0: tuple[float, ...] = ()

    def __post_init__(self):
        check_variant(self.variant)
        if self.digitizer not in DIGITIZERS:
            raise ModelError(f'Unknown digitizer {self.digitizer!r}')
        if self.codebook.variant != self.variant:
            raise ModelError('Codebook variant does not match the model variant')
        self.alphabet.require(self.codebook.k)
        object.__setattr__(self, 't0', tuple(float(value) for value in self.t0))

    @property
    def k(self) -> int:
        return self.codebook.k

    @property
    def symbols(self) -> tuple[str, ...]:
        """Symbols in use, one per center"""
        return self.alphabet.symbols[:self.k]

    @property
    def symbol_to_center(self) -> dict[str, int]:
        return {symbol: rank for rank, symbol in enumerate(self.symbols)}

    @property
    def single_character(self) -> bool:
        return all(len(symbol) == 1 for symbol in self.symbols)

    def sequence(self, labels: Iterable[int]) -> SymbolSequence:
        """Symbol sequence for center indices"""
        symbols = self.symbols
        return SymbolSequence(tuple(symbols[int(label)] for label in labels), self.alphabet)

    def to_json(self) -> str:
        """Serialize with a fixed field order and 17 significant digit numbers

        Returns:
            str: model JSON document
        """
        codebook = self.codebook
        fields = [
            ('version', str(MODEL_VERSION)),
            ('variant', json.dumps(self.variant)),
            ('tol', _number(self.tol)),
            ('alpha', _number(self.alpha)),
            ('scl', _number(float(self.scl))),
            ('sigma_len', _number(codebook.sigma_len)),
            ('sigma_second', _number(codebook.sigma_second)),
            ('digitizer', json.dumps(self.digitizer)),
            ('centers', '[' + ', '.join(f'[{_number(x)}, {_number(y)}]' for x, y in codebook.centers) + ']'),
            ('cardinalities', _number_list(codebook.cardinalities)),
            ('alphabet', json.dumps(list(self.alphabet.symbols), ensure_ascii=False)),
            ('alphabet_source', json.dumps(self.alphabet.source)),
            ('t0', _number_list(self.t0)),
        ]
        if codebook.mean_lengths is not None:
            fields.append(('mean_lengths', _number_list(codebook.mean_lengths)))
        return '{\n' + ',\n'.join(f'  "{name}": {value}' for name, value in fields) + '\n}\n'

    @classmethod
    def from_json(cls, text: str) -> 'AbbaModel':
        """Rebuild a model from its JSON document

        Raises:
            ModelError: malformed document or inconsistent fields

        Returns:
            AbbaModel: the model
        """
        try:
            data = json.loads(text)
        except json.JSONDecodeError as error:
            raise ModelError(f'Model JSON is malformed: {error}') from error
        if not isinstance(data, dict):
            raise ModelError('Model JSON must be an object')
        if data.get('version') != MODEL_VERSION:
            raise ModelError(f'Unsupported model version {data.get("version")!r}')
        try:
            alpha = data['alpha']
            codebook = Codebook(
                centers=np.array(data['centers'], dtype=np.float64).reshape(-1, 2),
                cardinalities=tuple(data['cardinalities']),
                sigma_len=float(data['sigma_len']),
                sigma_second=float(data['sigma_second']),
                scl=float(data['scl']),
                variant=data['variant'],
                mean_lengths=data.get('mean_lengths'))
            alphabet = Alphabet(tuple(data['alphabet']), data.get('alphabet_source', 'builtin'))
            return cls(variant=data['variant'], tol=float(data['tol']),
                       alpha=None if alpha is None else float(alpha), scl=float(data['scl']), codebook=codebook,
                       alphabet=alphabet, digitizer=data['digitizer'], t0=tuple(data.get('t0', ())))
        except (KeyError, TypeError, ValueError) as error:
            raise ModelError(f'Model JSON is missing or has invalid fields: {error}') from error
        except AlphabetError as error:
            raise ModelError(str(error)) from error

    def save(self, path: str | Path) -> Path:
        path = Path(path)
        path.write_text(self.to_json(), encoding='utf-8')
        return path

    @classmethod
    def load(cls, path: str | Path) -> 'AbbaModel':
        try:
            text = Path(path).read_text(encoding='utf-8')
        except OSError as error:
            raise ModelError(f'Unable to read model {path}: {error}') from error
        return cls.from_json(text)
