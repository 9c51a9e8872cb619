import numpy as np
import pytest

from ts_2_sym.compression import compress
from ts_2_sym.digitization import FitInput, fit, transform
from ts_2_sym.errors import DecodeError
from ts_2_sym.experiments import forecast_study, sine_series
from ts_2_sym.forecast import (NGramModel, SymbolPredictor, evaluate_forecast, forecast, ngram_fit, ngram_predict,
                               persistence_forecast)
from tests.conftest import random_walk


class UnknownSymbolPredictor(SymbolPredictor):
    def predict(self, prefix, steps):
        return ['zz'] * steps


def test_greedy_continues_a_periodic_sequence():
    model = ngram_fit(['abcabcabc'], order=2)
    assert model.predict(list('ab'), 4) == ['c', 'a', 'b', 'c']
    assert ngram_predict(model, 'ca', 2).symbols == ('b', 'c')


def test_greedy_ties_follow_alphabet_rank():
    model = ngram_fit(['ab'], order=1)
    assert model.vocabulary == ('a', 'b')
    assert model.predict(list('ab'), 3) == ['a', 'b', 'a']


def test_unseen_context_backs_off_to_unigrams():
    model = ngram_fit(['aab'], order=2)
    assert model.counts(['x']) == model.tables[0][()]
    assert model.next_symbol(['x', 'y']) == 'a'


def test_shorter_context_is_used_when_longer_is_unseen():
    model = ngram_fit(['abab', 'cb'], order=2)
    assert model.counts(['c', 'a']) == model.tables[1][('a',)]
    assert model.next_symbol(['c', 'a']) == 'b'


def test_sampled_prediction_is_the_same_in_one_call_or_step_by_step():
    model = ngram_fit(['abcabcabcab', 'acb'], order=2, delta=0.5, mode='sample', seed=11)
    batch = model.predict(list('ab'), 6)
    context = list('ab')
    for _ in range(6):
        context += model.predict(context, 1)
    assert context[2:] == batch
    assert ngram_predict(model, 'ab', 6, 'sample', 11).symbols == tuple(batch)
    assert set(batch) <= set(model.vocabulary)


def test_sampling_without_smoothing_follows_deterministic_counts():
    model = ngram_fit(['abcabcabc'], order=2, delta=0.0)
    assert ngram_predict(model, 'ab', 5, 'sample', 3).symbols == ngram_predict(model, 'ab', 5).symbols


def test_ngram_validation():
    with pytest.raises(ValueError):
        ngram_fit(['abc'], order=0)
    with pytest.raises(ValueError):
        ngram_fit(['abc'], delta=-0.1)
    with pytest.raises(ValueError):
        ngram_fit([])
    with pytest.raises(ValueError):
        ngram_fit(['abc'], mode='beam')
    with pytest.raises(ValueError):
        ngram_fit(['abc']).predict(['a'], 0)


def test_ngram_model_keeps_the_symbol_sequence_alphabet():
    model, sequences = fit(FitInput([compress(random_walk(2), 0.3)], alpha=0.3))
    predictor = ngram_fit(sequences)
    assert isinstance(predictor, NGramModel)
    assert predictor.alphabet == model.alphabet


@pytest.fixture
def walk_model():
    history = random_walk(6)
    model, sequences = fit(FitInput([compress(history, 0.3)], alpha=0.3))
    return model, sequences, history


@pytest.mark.parametrize('horizon', [1, 7, 30])
def test_forecast_returns_exactly_horizon_values(walk_model, horizon):
    model, sequences, history = walk_model
    values = forecast(model, ngram_fit(sequences, alphabet=model.alphabet), history, horizon)
    assert values.shape == (horizon,)
    assert np.all(np.isfinite(values))


def test_forecast_rejects_unknown_predicted_symbols(walk_model):
    model, _, history = walk_model
    with pytest.raises(DecodeError) as error:
        forecast(model, UnknownSymbolPredictor(), history, 5)
    assert error.value.symbol == 'zz'
    assert error.value.position == len(transform(model, history))


def test_forecast_validation(walk_model):
    model, sequences, history = walk_model
    with pytest.raises(ValueError):
        forecast(model, ngram_fit(sequences), history, 0)
    with pytest.raises(ValueError):
        forecast(model, ngram_fit(sequences), history[:1], 3)


def test_persistence_forecast():
    assert persistence_forecast([1.0, 2.0, 3.0], 3).tolist() == [3.0, 3.0, 3.0]


def test_evaluate_forecast():
    assert evaluate_forecast([0.0, 1.0], [0.0, 2.0]) == {'mse': 0.5, 'mae': 0.5}
    with pytest.raises(ValueError):
        evaluate_forecast([0.0, 1.0], [0.0])


def test_forecast_study_beats_persistence_on_a_cosine():
    frame = forecast_study().set_index('method')
    assert frame.loc['abba', 'mse'] <= 0.5 * frame.loc['persistence', 'mse']
    assert frame.loc['persistence', 'mse'] == pytest.approx(1.5)


@pytest.mark.parametrize('variant', ['apca', 'fapca'])
def test_constant_history_forecasts_its_level(variant):
    history = np.full(50, 5.0)
    model, sequences = fit(FitInput([compress(history, 0.1, variant)], alpha=0.1))
    values = forecast(model, ngram_fit(sequences), history, 12)
    assert values.shape == (12,)
    assert np.allclose(values, 5.0)


def test_greedy_forecast_repeats_exactly(walk_model):
    model, sequences, history = walk_model
    first = forecast(model, ngram_fit(sequences), history, 40)
    second = forecast(model, ngram_fit(sequences), history, 40)
    assert np.array_equal(first, second)


def symbol_accuracy(sequence, start, stop):
    predictor = ngram_fit([sequence])
    symbols = list(sequence)
    hits = [predictor.next_symbol(symbols[:position]) == symbols[position] for position in range(start, stop)]
    return sum(hits) / len(hits)


def test_square_wave_symbols_are_predicted_after_one_period():
    square = np.tile(np.repeat([0.0, 1.0], 25), 8)
    _, (sequence,) = fit(FitInput([compress(square, 0.1)], alpha=0.1))
    assert len(sequence) == 31
    assert symbol_accuracy(sequence, 4, len(sequence)) == 1.0


def test_sine_symbols_are_predicted_after_one_period():
    _, (sequence,) = fit(FitInput([compress(sine_series(), 0.2, 'fapca')], alpha=0.5))
    # the last piece ends at the series boundary and has no periodic successor
    assert symbol_accuracy(sequence, 3, len(sequence) - 1) == 1.0
