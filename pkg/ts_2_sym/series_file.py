"""CSV series files, symbols files and token lists."""
import re
from dataclasses import dataclass
from pathlib import Path
from typing import Sequence

import numpy as np
import pandas as pd
from pandas.errors import EmptyDataError, ParserError

from ts_2_sym.core import Alphabet, SymbolSequence, alphabet_from_tokens
from ts_2_sym.errors import SeriesFileError, TokenError


def _is_number(cell) -> bool:
    try:
        return np.isfinite(float(cell))
    except (TypeError, ValueError):
        return False


@dataclass(frozen=True, eq=False)
class SeriesFile:
    """One series per CSV column, optional single header row"""
    path: str
    names: tuple[str, ...]
    columns: tuple[np.ndarray, ...]

    def __len__(self) -> int:
        return len(self.columns)

    @classmethod
    def read(cls, path: str | Path, min_rows: int = 2) -> 'SeriesFile':
        """Parse a rectangular CSV of finite reals

        Args:
            path (str | Path): CSV file
            min_rows (int, optional): minimum number of samples per column. Defaults to 2.

        Raises:
            SeriesFileError: unreadable, ragged, empty or non-numeric cell, reported as file:line:col

        Returns:
            SeriesFile: parsed columns
        """
        path = str(path)
        try:
            frame = pd.read_csv(path, header=None, dtype=str, keep_default_na=False, skip_blank_lines=False)
        except FileNotFoundError:
            raise SeriesFileError(path, 0, 0, 'file not found')
        except EmptyDataError:
            raise SeriesFileError(path, 1, 1, 'file is empty')
        except ParserError as error:
            line = re.search(r'line (\d+)', str(error))
            raise SeriesFileError(path, int(line.group(1)) if line else 0, 0, f'ragged row: {error}')
        except (OSError, UnicodeDecodeError) as error:
            raise SeriesFileError(path, 0, 0, str(error))
        cells = frame.to_numpy(dtype=object)
        header = not all(_is_number(cell) for cell in cells[0])
        first = 1 if header else 0
        names = tuple(str(cell) for cell in cells[0]) if header else tuple(
            f'series_{i}' for i in range(cells.shape[1]))
        for row in range(first, len(cells)):
            for column, cell in enumerate(cells[row]):
                if cell is None or (isinstance(cell, float) and np.isnan(cell)) or cell == '':
                    raise SeriesFileError(path, row + 1, column + 1, 'missing value')
                if not _is_number(cell):
                    raise SeriesFileError(path, row + 1, column + 1, f'not a finite number: {cell!r}')
        values = cells[first:].astype(np.float64)
        if len(values) < min_rows:
            raise SeriesFileError(path, len(cells) + 1, 1, f'expected at least {min_rows} samples, got {len(values)}')
        return cls(path, names, tuple(values[:, column].copy() for column in range(values.shape[1])))


def write_series(path: str | Path, columns: Sequence[np.ndarray], names: Sequence[str] | None = None,
                 precision: int = 17) -> Path:
    """Write series as CSV columns with a header row. Shorter columns are padded with empty cells

    Args:
        path (str | Path): output file
        columns (Sequence[np.ndarray]): series to write
        names (Sequence[str], optional): header. Defaults to series_0, series_1, ...
        precision (int, optional): significant digits. Defaults to 17.

    Returns:
        Path: written file
    """
    path = Path(path)
    names = list(names) if names else [f'series_{i}' for i in range(len(columns))]
    frame = pd.DataFrame({name: pd.Series(column, dtype=np.float64) for name, column in zip(names, columns)})
    frame.to_csv(path, index=False, float_format=f'%.{precision}g', lineterminator='\n')
    return path


def read_symbol_lines(path: str | Path, split_characters: bool) -> list[list[str]]:
    """Symbols of every line of a symbols file

    Args:
        path (str | Path): symbols file
        split_characters (bool): one symbol per character, otherwise space separated symbols

    Raises:
        SeriesFileError: missing or empty file

    Returns:
        list[list[str]]: symbols per line
    """
    path = Path(path)
    try:
        lines = path.read_text(encoding='utf-8').splitlines()
    except FileNotFoundError:
        raise SeriesFileError(str(path), 0, 0, 'file not found')
    except (OSError, UnicodeDecodeError) as error:
        raise SeriesFileError(str(path), 0, 0, str(error))
    if not lines or not any(line.strip() for line in lines):
        raise SeriesFileError(str(path), 1, 1, 'symbols file is empty')
    if split_characters:
        return [list(line) for line in lines]
    return [line.split(' ') if line else [] for line in lines]


def write_symbols(path: str | Path, sequences: Sequence[SymbolSequence], single: bool) -> Path:
    """One sequence per line, whitespace free when `single` (every model symbol is one character), otherwise
    single-space separated"""
    path = Path(path)
    lines = [''.join(sequence) if single else ' '.join(sequence) for sequence in sequences]
    path.write_text(''.join(f'{line}\n' for line in lines), encoding='utf-8')
    return path


def read_tokens(path: str | Path) -> Alphabet:
    """Alphabet from a token list with one token per line

    Raises:
        TokenError: empty, whitespace-containing or duplicate token
    """
    path = Path(path)
    try:
        lines = path.read_text(encoding='utf-8').splitlines()
    except FileNotFoundError:
        raise SeriesFileError(str(path), 0, 0, 'file not found')
    except (OSError, UnicodeDecodeError) as error:
        raise SeriesFileError(str(path), 0, 0, str(error))
    try:
        return alphabet_from_tokens(lines)
    except TokenError as error:
        raise TokenError(f'{path}: {error}') from error
