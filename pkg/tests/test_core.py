import json

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from ts_2_sym.core import (AbbaModel, Alphabet, Codebook, Piece, SymbolSequence, alphabet_ascii_extended,
                           alphabet_default, alphabet_from_tokens, as_series, nearest_centers, scale_piece,
                           unscale_tuple)
from ts_2_sym.errors import AlphabetError, DecodeError, ModelError, SeriesError, TokenError


def test_as_series_copies_to_float64():
    values = [1, 2, 3]
    series = as_series(values)
    assert series.dtype == np.float64
    assert series.tolist() == [1.0, 2.0, 3.0]


@pytest.mark.parametrize('values, min_length', [
    ([1.0, float('nan')], 1),
    ([1.0, float('inf')], 1),
    ([[1.0, 2.0], [3.0, 4.0]], 1),
    ([1.0], 2),
    (['a', 'b'], 1),
])
def test_as_series_rejects_invalid_input(values, min_length):
    with pytest.raises(SeriesError):
        as_series(values, min_length=min_length)


def test_series_error_is_a_value_error():
    assert issubclass(SeriesError, ValueError)
    assert SeriesError.exit_code == 2


def test_piece_requires_positive_integer_length():
    with pytest.raises(SeriesError):
        Piece(0, 1.0)
    with pytest.raises(ValueError):
        Piece(2, 1.0, 'other')


@given(length=st.integers(min_value=1, max_value=10_000),
       second=st.floats(min_value=-1e6, max_value=1e6, allow_nan=False),
       scl=st.floats(min_value=1e-3, max_value=1e3),
       sigma_len=st.floats(min_value=1e-3, max_value=1e3),
       sigma_second=st.floats(min_value=1e-3, max_value=1e3))
def test_unscale_inverts_scale(length, second, scl, sigma_len, sigma_second):
    piece = Piece(length, second)
    restored = unscale_tuple(scale_piece(piece, scl, sigma_len, sigma_second), scl, sigma_len, sigma_second)
    assert restored.length == length
    assert restored.second == pytest.approx(second, rel=1e-12, abs=1e-12)


def test_unscale_needs_positive_scl():
    with pytest.raises(ValueError):
        unscale_tuple(scale_piece(Piece(2, 1.0), 0.0, 1.0, 1.0), 0.0, 1.0, 1.0)


def test_alphabet_default_prefixes():
    assert alphabet_default(1).symbols == ('a',)
    assert alphabet_default(3).symbols == ('a', 'b', 'c')
    assert alphabet_default(52).symbols[-1] == 'Z'
    assert alphabet_default(53).symbols[-1] == 'aa'


def test_alphabet_default_continues_past_pairs():
    alphabet = alphabet_default(52 + 52 ** 2 + 1)
    assert alphabet.symbols[-2] == 'ZZ'
    assert alphabet.symbols[-1] == 'aaa'
    assert len(set(alphabet.symbols)) == len(alphabet)


def test_alphabet_ascii_extended_has_no_whitespace():
    alphabet = alphabet_ascii_extended(95)
    assert alphabet.symbols[0] == '!'
    assert alphabet.symbols[93] == '~'
    assert alphabet.symbols[94] == '!!'
    assert alphabet.source == 'ascii-extended'
    assert not any(char.isspace() for symbol in alphabet for char in symbol)


def test_alphabet_sizes_must_be_positive():
    with pytest.raises(ValueError):
        alphabet_default(0)


def test_alphabet_from_tokens():
    alphabet = alphabet_from_tokens(['tok1\n', 'tok2\n'])
    assert alphabet.symbols == ('tok1', 'tok2')
    assert alphabet.source == 'external-token-file'
    assert len(alphabet_from_tokens(f'token{i}' for i in range(2789))) == 2789


@pytest.mark.parametrize('lines, message', [
    (['a', 'a'], 'lines 1 and 2'),
    (['a', ''], 'line 2'),
    (['a b'], 'whitespace'),
    ([], 'empty'),
])
def test_alphabet_from_tokens_rejects(lines, message):
    with pytest.raises(TokenError, match=message):
        alphabet_from_tokens(lines)


def test_alphabet_require_reports_cluster_count():
    with pytest.raises(AlphabetError) as error:
        alphabet_default(2).require(3)
    assert error.value.required == 3
    assert error.value.exit_code == 3
    assert '3 clusters' in str(error.value)


def test_alphabet_rank():
    alphabet = Alphabet(('x', 'y', 'z'))
    assert alphabet.rank('z') == 2
    assert 'y' in alphabet
    assert 'w' not in alphabet


def test_symbol_sequence_rejects_unknown_symbol():
    with pytest.raises(DecodeError) as error:
        SymbolSequence(('a', 'z'), alphabet_default(2))
    assert error.value.position == 1
    assert error.value.exit_code == 4


def test_symbol_sequence_text():
    assert SymbolSequence(('a', 'b'), alphabet_default(2)).to_text() == 'ab'
    assert SymbolSequence(('a', 'aa'), alphabet_default(53)).to_text() == 'a aa'
    assert SymbolSequence(('a', 'b'), alphabet_default(53)).to_text(single=False) == 'a b'


def test_nearest_centers_ties_go_to_lower_rank():
    centers = np.array([[0.0, 0.0], [2.0, 0.0]])
    assert nearest_centers([[1.0, 0.0], [1.5, 0.0], [-3.0, 0.0]], centers).tolist() == [0, 1, 0]


def test_codebook_denormalize():
    codebook = Codebook([[2.0, 1.0], [4.0, -0.5]], (3, 1), sigma_len=2.0, sigma_second=4.0, scl=2.0)
    lengths, seconds = codebook.denormalize()
    assert lengths.tolist() == [2.0, 4.0]
    assert seconds.tolist() == [4.0, -2.0]


def test_codebook_without_length_weight_needs_mean_lengths():
    with pytest.raises(ModelError):
        Codebook([[0.0, 1.0]], (1,), 1.0, 1.0, 0.0)
    codebook = Codebook([[0.0, 1.0]], (1,), 1.0, 1.0, 0.0, mean_lengths=[3.5])
    assert codebook.denormalize()[0].tolist() == [3.5]


def test_codebook_centers_are_read_only():
    codebook = Codebook([[0.0, 1.0]], (1,), 1.0, 1.0, 1.0)
    with pytest.raises(ValueError):
        codebook.centers[0, 0] = 5.0


def test_model_json_layout(five_point_model):
    model, _ = five_point_model
    text = model.to_json()
    data = json.loads(text)
    assert list(data) == ['version', 'variant', 'tol', 'alpha', 'scl', 'sigma_len', 'sigma_second', 'digitizer',
                          'centers', 'cardinalities', 'alphabet', 'alphabet_source', 't0']
    assert data['version'] == 1
    assert data['centers'] == [[2.0, 1.0], [2.0, -1.0]]
    assert data['t0'] == [0.0]
    restored = AbbaModel.from_json(text)
    assert restored.codebook == model.codebook
    assert restored.to_json() == text


def test_model_json_keeps_mean_lengths_for_zero_length_weight():
    codebook = Codebook([[0.0, 1.0]], (1,), 1.0, 2.0, 0.0, mean_lengths=[3.0])
    model = AbbaModel('apca', 0.1, 0.5, 0.0, codebook, alphabet_default(1), t0=(1.5,))
    restored = AbbaModel.from_json(model.to_json())
    assert restored.codebook.mean_lengths.tolist() == [3.0]
    assert restored.t0 == (1.5,)


@pytest.mark.parametrize('text', ['{', '[]', '{"version": 2}', '{"version": 1, "variant": "apca"}'])
def test_model_json_errors(text):
    with pytest.raises(ModelError):
        AbbaModel.from_json(text)


def test_model_load_missing_file(tmp_path):
    with pytest.raises(ModelError):
        AbbaModel.load(tmp_path / 'missing.json')


def test_model_needs_symbol_per_center():
    codebook = Codebook([[0.0, 1.0], [1.0, 0.0]], (1, 1), 1.0, 1.0, 1.0)
    with pytest.raises(AlphabetError):
        AbbaModel('apca', 0.1, 0.5, 1.0, codebook, alphabet_default(1))
