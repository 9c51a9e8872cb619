import math

import numpy as np
import pandas as pd
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from ts_2_sym.analysis import (BoundReport, check_compression_bound, check_digitization_bounds,
                               cumulative_error_profile, format_reports, hoeffding_exceedance, metrics,
                               sample_deviation_windows, tuple_deviations, write_zipf_csv,
                               zipf_profile)
from ts_2_sym.compression import compress
from ts_2_sym.digitization import FitInput, aggregate_greedy, aggregate_lloyd, fit, scale_tuples
from ts_2_sym.experiments import hoeffding_study
from tests.conftest import FIVE_POINTS, random_walk


def test_metrics_identical_series():
    scores = metrics([1.0, 2.0, 4.0], [1.0, 2.0, 4.0])
    assert scores['mse'] == 0.0
    assert scores['mae'] == 0.0
    assert scores['pearson'] == pytest.approx(1.0)
    assert scores['length_gap'] == 0


def test_metrics_by_hand():
    scores = metrics([0.0, 1.0], [0.0, 2.0])
    assert scores['mse'] == 0.5
    assert scores['mae'] == 0.5


def test_metrics_constant_side_has_no_correlation():
    assert metrics([1.0, 1.0, 1.0], [0.0, 1.0, 2.0])['pearson'] is None


def test_metrics_compare_the_common_prefix():
    scores = metrics([0.0, 1.0, 2.0], [0.0, 1.0, 2.0, 3.0])
    assert scores['mse'] == 0.0
    assert scores['length_gap'] == 1


def test_compression_bound_examples():
    exact = check_compression_bound([0.0, 1.0, 2.0, 3.0], compress([0.0, 1.0, 2.0, 3.0], 0.1))
    assert exact.measured == 0.0 and exact.satisfied
    report = check_compression_bound(FIVE_POINTS, compress(FIVE_POINTS, 0.1))
    assert report.measured == 0.0
    assert report.bound == pytest.approx(0.02)
    assert report.status == 'ok'


def test_compression_bound_on_random_walk():
    series = random_walk(9, 1000)
    assert check_compression_bound(series, compress(series, 0.5)).satisfied


def test_bound_report_status():
    assert BoundReport('x', 1.0, 1.0).status == 'ok'
    assert BoundReport('x', 1.0 + 1e-12, 1.0).satisfied
    assert BoundReport('x', 1.1, 1.0).status == 'violated'
    assert BoundReport('x', 0.5, math.nan).status == 'undefined'
    assert BoundReport('x', 0.5, math.nan).as_dict()['bound'] is None


def test_digitization_bounds_singletons():
    tuples = np.array([[2.0, 1.0], [2.0, -1.0]])
    clustering = aggregate_greedy(tuples, 0.5)
    reports = check_digitization_bounds(tuples, clustering, clustering.labels, 0.5)
    assert [report.name for report in reports] == ['max_tuple_deviation', 'centroid_sum', 'sse', 'cluster_spread']
    assert all(report.measured == 0.0 for report in reports)


def test_digitization_bounds_one_cluster():
    tuples = np.array([[2.0, 1.0], [2.0, -1.0]])
    clustering = aggregate_greedy(tuples, 3.0)
    reports = {report.name: report for report in check_digitization_bounds(tuples, clustering, clustering.labels, 3.0)}
    assert reports['max_tuple_deviation'].measured == 1.0
    assert reports['sse'].measured == 2.0
    assert reports['sse'].bound == 9.0
    assert all(report.satisfied for report in reports.values())


def test_digitization_bounds_without_alpha_leave_radius_bounds_undefined():
    tuples = np.random.default_rng(0).standard_normal((50, 2))
    clustering = aggregate_lloyd(tuples, 4)
    reports = {report.name: report for report in check_digitization_bounds(tuples, clustering, clustering.labels, None)}
    assert reports['centroid_sum'].status == 'ok'
    assert reports['sse'].status == 'undefined'


@settings(max_examples=100, deadline=None)
@given(points=st.lists(st.tuples(st.floats(-50, 50), st.floats(-50, 50)), min_size=1, max_size=100),
       alpha=st.sampled_from([1e-2, 1e-1, 1.0]))
def test_greedy_digitization_bounds_hold(points, alpha):
    tuples = np.array(points, dtype=np.float64).reshape(-1, 2)
    clustering = aggregate_greedy(tuples, alpha)
    for report in check_digitization_bounds(tuples, clustering, clustering.labels, alpha):
        assert report.satisfied, report


@pytest.mark.slow
def test_digitization_bounds_on_compressed_corpus():
    rng = np.random.default_rng(77)
    for _ in range(100):
        series = rng.standard_normal(int(rng.integers(50, 2001))).cumsum()
        tuples, _, _ = scale_tuples(compress(series, 0.1).pieces, 1.0)
        for alpha in (1e-2, 1e-1, 1.0):
            clustering = aggregate_greedy(tuples, alpha)
            assert all(report.satisfied for report in
                       check_digitization_bounds(tuples, clustering, clustering.labels, alpha))


def test_cumulative_error_profile():
    result = compress(FIVE_POINTS, 0.1)
    model, (sequence,) = fit(FitInput([result], alpha=3.0))
    assert ''.join(sequence) == 'aa'
    profile = cumulative_error_profile(model, sequence, result.pieces)
    assert len(profile) == 2
    assert profile.scaled.tolist() == [[0.0, 0.0], [0.0, -1.0], [0.0, 0.0]]
    assert profile.denormalized.tolist() == [[0.0, 0.0], [0.0, -2.0], [0.0, 0.0]]
    assert profile.bound_report(3.0).satisfied


def test_cumulative_error_profile_in_original_units():
    result = compress(FIVE_POINTS, 0.1)
    model, (sequence,) = fit(FitInput([result], alpha=3.0))
    profile = cumulative_error_profile(model, sequence, result.pieces)
    assert profile.units == (1.0, 2.0)
    report = profile.denormalized_bound_report(3.0)
    assert report.name == 'cumulative_deviation_denormalized'
    assert (report.measured, report.bound) == (1.0, 6.0)
    assert report.context['second_unit'] == 2.0
    assert report.satisfied
    assert not profile.denormalized_bound_report(0.4).satisfied


def test_denormalized_profile_skips_unclustered_lengths():
    result = compress(FIVE_POINTS, 0.1)
    model, (sequence,) = fit(FitInput([result], scl=0.0, alpha=3.0))
    profile = cumulative_error_profile(model, sequence, result.pieces)
    assert profile.units == (0.0, 2.0)
    report = profile.denormalized_bound_report(3.0)
    assert report.measured == 1.0
    assert report.context['length_unit'] == 0.0


def test_cumulative_error_profile_of_lossless_model(five_point_model):
    model, sequence = five_point_model
    profile = cumulative_error_profile(model, sequence, compress(FIVE_POINTS, 0.1).pieces)
    assert not np.any(profile.scaled)
    assert profile.bound_report(0.5).measured == 0.0


def test_tuple_deviations_need_one_symbol_per_piece(five_point_model):
    model, sequence = five_point_model
    with pytest.raises(ValueError):
        tuple_deviations(model, sequence[:1], compress(FIVE_POINTS, 0.1).pieces)


def test_sample_deviation_windows():
    deviations = [np.ones((5, 2)), np.ones((1, 2))]
    sums = sample_deviation_windows(deviations, 3, 20, seed=4)
    assert sums.shape == (20, 2)
    assert np.all(sums == 3.0)
    assert np.array_equal(sums, sample_deviation_windows(deviations, 3, 20, seed=4))
    with pytest.raises(ValueError):
        sample_deviation_windows(deviations, 6, 10)


def test_hoeffding_exceedance():
    quiet = hoeffding_exceedance(np.zeros((1000, 2)), 0.1, 2, [0.1, 0.2])
    assert len(quiet) == 4
    assert all(report.satisfied and report.measured == 0.0 for report in quiet)
    loud = hoeffding_exceedance(np.full((1000, 2), 10.0), 0.1, 2, [0.4])
    assert not any(report.satisfied for report in loud)
    assert loud[0].bound == pytest.approx(math.exp(-4.0) + 3 * math.sqrt(math.exp(-4.0) * (1 - math.exp(-4.0)) / 1000))


def test_hoeffding_study_small():
    reports = hoeffding_study(series=20, steps=300, samples=2000)
    assert len(reports) == 18
    assert all(report.satisfied for report in reports)


@pytest.mark.slow
def test_hoeffding_study_full():
    assert all(report.satisfied for report in hoeffding_study())


def test_zipf_profile_example():
    profile = zipf_profile('aab')
    assert profile.rows == [(1, 2), (2, 1)]
    assert profile.symbols == ('a', 'b')


def test_zipf_ties_follow_first_occurrence():
    assert zipf_profile(['ba', 'ab']).symbols == ('b', 'a')


def test_zipf_empty_corpus():
    with pytest.raises(ValueError):
        zipf_profile([])


def test_zipf_frequencies_do_not_increase_with_rank():
    corpus = []
    for seed in range(5):
        result = compress(random_walk(seed, 2000), 0.3)
        corpus.append(result)
    model, sequences = fit(FitInput(corpus, alpha=0.2))
    profile = zipf_profile(sequences)
    assert list(profile.frequencies) == sorted(profile.frequencies, reverse=True)
    assert sum(profile.frequencies) == sum(len(sequence) for sequence in sequences)


def test_zipf_csv_schema(tmp_path):
    path = write_zipf_csv(zipf_profile('aab'), tmp_path / 'zipf.csv')
    frame = pd.read_csv(path)
    assert list(frame.columns) == ['rank', 'frequency', 'log_rank', 'log_frequency']
    assert frame[['rank', 'frequency']].values.tolist() == [[1, 2], [2, 1]]
    assert frame['log_frequency'].tolist() == pytest.approx([math.log10(2), 0.0], abs=1e-6)


def test_report_rendering():
    reports = [BoundReport('sse', 1.0, 2.0), BoundReport('centroid_sum', 3.0, 1.0)]
    table = format_reports(reports)
    assert 'sse' in table and 'violated' in table
    assert [report.as_dict()['status'] for report in reports] == ['ok', 'violated']
