import numpy as np
import pytest

from ts_2_sym.core import SymbolSequence, alphabet_default
from ts_2_sym.errors import SeriesFileError, TokenError
from ts_2_sym.series_file import SeriesFile, read_symbol_lines, read_tokens, write_series, write_symbols
from tests.conftest import write_csv


def test_read_with_header(tmp_path):
    path = tmp_path / 'series.csv'
    path.write_text('load,temp\n1,2.5\n3,4\n')
    series_file = SeriesFile.read(path)
    assert series_file.names == ('load', 'temp')
    assert series_file.columns[0].tolist() == [1.0, 3.0]
    assert series_file.columns[1].tolist() == [2.5, 4.0]


def test_read_without_header_names_columns(tmp_path):
    path = write_csv(tmp_path / 'series.csv', [[0.0, 1.0, 2.0], [5.0, 6.0, 7.0]], header=False)
    series_file = SeriesFile.read(path)
    assert series_file.names == ('series_0', 'series_1')
    assert len(series_file) == 2
    assert series_file.columns[1].tolist() == [5.0, 6.0, 7.0]


@pytest.mark.parametrize('text, line, column', [
    ('a,b\n1,2\n3,x\n', 3, 2),
    ('a\n1\nfoo\n', 3, 1),
    ('a,b\n1,2\n3,\n', 3, 2),
    ('a\n1\ninf\n', 3, 1),
])
def test_bad_cells_are_located(tmp_path, text, line, column):
    path = tmp_path / 'bad.csv'
    path.write_text(text)
    with pytest.raises(SeriesFileError) as error:
        SeriesFile.read(path)
    assert (error.value.line, error.value.column) == (line, column)
    assert str(error.value).startswith(f'{path}:{line}:{column}:')
    assert error.value.exit_code == 2


def test_empty_file(tmp_path):
    path = tmp_path / 'empty.csv'
    path.write_text('')
    with pytest.raises(SeriesFileError, match='empty'):
        SeriesFile.read(path)


def test_missing_file(tmp_path):
    with pytest.raises(SeriesFileError, match='not found'):
        SeriesFile.read(tmp_path / 'missing.csv')


def test_too_few_rows(tmp_path):
    path = tmp_path / 'short.csv'
    path.write_text('a\n1\n')
    with pytest.raises(SeriesFileError, match='at least 2'):
        SeriesFile.read(path)
    assert SeriesFile.read(path, min_rows=1).columns[0].tolist() == [1.0]


def test_write_series_pads_short_columns(tmp_path):
    path = write_series(tmp_path / 'out.csv', [np.array([1.0, 2.0, 3.0]), np.array([0.5])])
    assert path.read_text().splitlines() == ['series_0,series_1', '1,0.5', '2,', '3,']


def test_write_series_keeps_full_precision(tmp_path):
    value = 0.1 + 0.2
    path = write_series(tmp_path / 'out.csv', [np.array([value, 1.0 / 3.0])], ['x'])
    assert SeriesFile.read(path).columns[0].tolist() == [value, 1.0 / 3.0]


def test_symbols_round_trip_through_files(tmp_path):
    alphabet = alphabet_default(60)
    short = [SymbolSequence(('a', 'b'), alphabet), SymbolSequence(('c',), alphabet)]
    path = write_symbols(tmp_path / 'short.txt', short, single=True)
    assert path.read_text() == 'ab\nc\n'
    assert read_symbol_lines(path, True) == [['a', 'b'], ['c']]
    long = [SymbolSequence(('a', 'aa', 'H'), alphabet)]
    path = write_symbols(tmp_path / 'long.txt', long, single=False)
    assert path.read_text() == 'a aa H\n'
    assert read_symbol_lines(path, False) == [['a', 'aa', 'H']]


def test_blank_lines_are_empty_sequences(tmp_path):
    path = tmp_path / 'symbols.txt'
    path.write_text('ab\n\nba\n')
    assert read_symbol_lines(path, True) == [['a', 'b'], [], ['b', 'a']]
    assert read_symbol_lines(path, False) == [['ab'], [], ['ba']]


def test_empty_symbols_file(tmp_path):
    path = tmp_path / 'symbols.txt'
    path.write_text('\n')
    with pytest.raises(SeriesFileError, match='empty'):
        read_symbol_lines(path, True)


def test_read_tokens(tmp_path):
    path = tmp_path / 'tokens.txt'
    path.write_text('alpha\nbeta\n')
    alphabet = read_tokens(path)
    assert alphabet.symbols == ('alpha', 'beta')
    assert alphabet.source == 'external-token-file'


def test_duplicate_token_names_the_file(tmp_path):
    path = tmp_path / 'tokens.txt'
    path.write_text('alpha\nbeta\nalpha\n')
    with pytest.raises(TokenError, match='tokens.txt'):
        read_tokens(path)
