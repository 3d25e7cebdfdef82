"""Availability drought detection: WINDOW, CBT, FMBT, VMBT, SPA."""

import numpy as np
import pytest

from shortfall import (
    Method,
    ParameterError,
    ThresholdSpec,
    detect_cbt,
    detect_fmbt,
    detect_spa_drought,
    detect_vmbt,
    detect_windows,
    moving_average,
    resolve_threshold,
)
from reference import (
    ref_cbt,
    ref_moving_average,
    ref_runs,
    ref_spa_events,
    ref_variable_windows,
    ref_windows,
)
from support import avail, event_tuples, random_avail, spa_tuples


class TestWindows:
    def test_packing_truncates_leftover(self):
        events = detect_windows(avail([0.05] * 5), 0.1, 2)
        assert event_tuples(events) == [(0, 1, 2), (2, 3, 2)]

    def test_exact_fit(self):
        events = detect_windows(avail([0.05] * 4), 0.1, 2)
        assert event_tuples(events) == [(0, 1, 2), (2, 3, 2)]

    def test_short_run_yields_nothing(self):
        events = detect_windows(avail([0.05, 0.3, 0.05]), 0.1, 2)
        assert events == []

    def test_window_deficit(self):
        events = detect_windows(avail([0.0, 0.0]), 0.1, 2)
        assert len(events) == 1
        assert events[0].energy_deficit == pytest.approx(0.2)
        assert events[0].method is Method.WINDOW

    @pytest.mark.parametrize("bad", [0, -2, 1.5])
    def test_window_len_validation(self, bad):
        with pytest.raises(ParameterError, match="positive integer"):
            detect_windows(avail([0.0, 0.0]), 0.1, bad)

    def test_window_len_longer_than_series(self):
        with pytest.raises(ParameterError, match="exceeds series length"):
            detect_windows(avail([0.0, 0.0]), 0.1, 3)

    def test_matches_reference_packing(self):
        rng = np.random.default_rng(31)
        for wl in (1, 2, 5):
            series = random_avail(rng, 300)
            got = [(e.start_index, e.end_index) for e in detect_windows(series, 0.4, wl)]
            assert got == ref_windows(series.values, 0.4, wl)

    def test_every_window_sits_inside_a_cbt_run(self):
        rng = np.random.default_rng(32)
        series = random_avail(rng, 500)
        runs = event_tuples(detect_cbt(series, 0.5))
        for w in detect_windows(series, 0.5, 3):
            host = [r for r in runs if r[0] <= w.start_index and w.end_index <= r[1]]
            assert len(host) == 1
            assert w.duration <= host[0][2]


class TestCbt:
    def test_two_runs(self):
        events = detect_cbt(avail([0.2, 0.05, 0.05, 0.3, 0.08]), 0.1)
        assert event_tuples(events) == [(1, 2, 2), (4, 4, 1)]
        assert events[0].energy_deficit == pytest.approx(0.1)
        assert events[1].energy_deficit == pytest.approx(0.02)

    def test_equality_is_not_a_drought(self):
        assert detect_cbt(avail([0.1, 0.1, 0.1]), 0.1) == []

    def test_whole_series_below(self):
        events = detect_cbt(avail([0.0] * 5), 0.1)
        assert event_tuples(events) == [(0, 4, 5)]
        assert events[0].energy_deficit == pytest.approx(0.5)

    def test_nothing_below(self):
        assert detect_cbt(avail([0.5, 0.6]), 0.1) == []

    def test_numeric_threshold_wrapped_as_absolute(self):
        series = avail([0.2, 0.05])
        events = detect_cbt(series, 0.1)
        assert events[0].threshold.kind == "absolute"
        assert events[0].threshold.value == 0.1
        assert events[0].threshold.series_id == "onshore@DE"

    def test_resolved_threshold_passed_through(self):
        series = avail([0.2, 0.05, 0.3, 0.4])
        rth = resolve_threshold(ThresholdSpec.mean_fraction(0.5), series)
        events = detect_cbt(series, rth)
        assert events and events[0].threshold is rth

    def test_threshold_type_checked(self):
        with pytest.raises(ParameterError, match="threshold"):
            detect_cbt(avail([0.2, 0.05]), "0.1")

    def test_partition_of_below_samples(self):
        rng = np.random.default_rng(33)
        series = random_avail(rng, 400)
        events = detect_cbt(series, 0.45)
        geometry = [(e.start_index, e.end_index) for e in events]
        assert geometry == ref_cbt(series.values, 0.45)
        covered = np.zeros(len(series), dtype=bool)
        for a, b in geometry:
            assert not covered[a : b + 1].any()
            covered[a : b + 1] = True
        assert np.array_equal(covered, series.values < 0.45)


class TestFmbt:
    def test_pools_interrupted_runs(self):
        series = avail([0.0, 0.0, 0.2, 0.0, 0.0])
        assert len(detect_cbt(series, 0.1)) == 2
        events = detect_fmbt(series, 0.1, intdur=3)
        assert event_tuples(events) == [(2, 4, 3)]
        assert events[0].source_span == (0, 4)
        assert events[0].intdur == 3

    def test_average_equal_to_threshold_is_not_a_drought(self):
        series = avail([0.05, 0.15, 0.05, 0.15])
        ma = moving_average(series, 2)
        assert np.all(ma.values == 0.1)
        assert detect_fmbt(series, 0.1, intdur=2) == []

    def test_intdur_one_reduces_to_cbt(self):
        rng = np.random.default_rng(34)
        series = random_avail(rng, 300)
        cbt = detect_cbt(series, 0.4)
        fmbt = detect_fmbt(series, 0.4, intdur=1)
        assert event_tuples(fmbt) == event_tuples(cbt)
        assert [e.energy_deficit for e in fmbt] == [e.energy_deficit for e in cbt]
        assert all(e.method is Method.FMBT and e.intdur == 1 for e in fmbt)

    def test_deficit_basis_moving_average(self):
        events = detect_fmbt(avail([0.0, 0.0, 0.2, 0.0, 0.0]), 0.1, intdur=3)
        ma = ref_moving_average([0.0, 0.0, 0.2, 0.0, 0.0], 3)
        assert events[0].energy_deficit == pytest.approx(float(np.sum(0.1 - ma)))

    def test_deficit_basis_original_sums_raw_shortfalls(self):
        events = detect_fmbt(
            avail([0.0, 0.0, 0.2, 0.0, 0.0]), 0.1, intdur=3, deficit_basis="original"
        )
        assert event_tuples(events) == [(2, 4, 3)]
        assert events[0].energy_deficit == pytest.approx(0.4)

    def test_deficit_basis_validated(self):
        with pytest.raises(ParameterError, match="deficit_basis"):
            detect_fmbt(avail([0.0, 0.0]), 0.1, intdur=2, deficit_basis="raw")

    def test_indices_are_window_ends(self):
        rng = np.random.default_rng(35)
        series = random_avail(rng, 200)
        for e in detect_fmbt(series, 0.5, intdur=6):
            assert e.start_index >= 5
            assert e.source_span[0] == e.start_index - 5

    def test_matches_reference_runs(self):
        rng = np.random.default_rng(36)
        for intdur in (2, 5, 24):
            series = random_avail(rng, 400)
            ma = ref_moving_average(series.values, intdur)
            expected = [
                (a + intdur - 1, b + intdur - 1) for a, b in ref_runs(ma < 0.5)
            ]
            got = [(e.start_index, e.end_index) for e in detect_fmbt(series, 0.5, intdur)]
            assert got == expected


class TestVmbt:
    def test_longest_window_claimed_first(self):
        events = detect_vmbt(avail([0.0, 0.0, 0.0, 0.0, 0.9, 0.9]), 0.1)
        assert event_tuples(events) == [(0, 3, 4)]
        assert events[0].intdur == 4
        assert events[0].deficit_is_informational

    def test_claimed_samples_excluded(self):
        events = detect_vmbt(avail([0.0, 0.2, 0.0, 0.0, 0.2, 0.9]), 0.15)
        assert event_tuples(events) == [(0, 4, 5)]

    def test_two_dips_split_by_high_plateau(self):
        events = detect_vmbt(avail([0.0, 0.0, 0.5, 0.0, 0.0]), 0.1)
        assert event_tuples(events) == [(0, 1, 2), (3, 4, 2)]

    def test_isolated_single_sample_dip(self):
        events = detect_vmbt(avail([0.9, 0.0, 0.9]), 0.1)
        assert event_tuples(events) == [(1, 1, 1)]

    def test_nothing_below(self):
        assert detect_vmbt(avail([0.9] * 4), 0.1) == []

    def test_default_start_rejected_when_whole_series_qualifies(self):
        with pytest.raises(ParameterError, match="too small"):
            detect_vmbt(avail([0.0, 0.0, 0.0]), 0.1)

    def test_explicit_start_rejected_when_a_window_qualifies(self):
        with pytest.raises(ParameterError, match="intdur_start=2"):
            detect_vmbt(avail([0.0, 0.0, 0.9]), 0.1, intdur_start=2)

    def test_start_beyond_series_length_is_vacuous(self):
        events = detect_vmbt(avail([0.0] * 5), 0.1, intdur_start=10)
        assert event_tuples(events) == [(0, 4, 5)]

    @pytest.mark.parametrize("bad", [0, -1, 2.5])
    def test_parameter_validation(self, bad):
        series = avail([0.0, 0.9])
        with pytest.raises(ParameterError):
            detect_vmbt(series, 0.1, intdur_start=bad)
        with pytest.raises(ParameterError):
            detect_vmbt(series, 0.1, step=bad)

    def test_events_never_overlap(self):
        rng = np.random.default_rng(37)
        series = random_avail(rng, 120)
        events = detect_vmbt(series, 0.3)
        claimed = np.zeros(len(series), dtype=bool)
        for e in events:
            assert e.duration == e.intdur == e.end_index - e.start_index + 1
            assert not claimed[e.start_index : e.end_index + 1].any()
            claimed[e.start_index : e.end_index + 1] = True

    @pytest.mark.parametrize("step", [1, 3])
    def test_matches_exhaustive_reference(self, step):
        rng = np.random.default_rng(38)
        for _ in range(20):
            series = random_avail(rng, 60)
            result = ref_variable_windows(series.values, 0.35, step=step)
            assert result[0] == "ok"
            got = event_tuples(detect_vmbt(series, 0.35, step=step))
            assert got == [(a, b, d) for a, b, d in result[1]]

    def test_reference_agreement_on_start_condition(self):
        rng = np.random.default_rng(39)
        for _ in range(20):
            series = random_avail(rng, 40)
            intdur_start = int(rng.integers(1, 50))
            result = ref_variable_windows(series.values, 0.5, intdur_start=intdur_start)
            if result[0] == "error":
                with pytest.raises(ParameterError):
                    detect_vmbt(series, 0.5, intdur_start=intdur_start)
            else:
                detect_vmbt(series, 0.5, intdur_start=intdur_start)


class TestSpaDrought:
    def test_single_dip(self):
        events = detect_spa_drought(avail([0.2, 0.0, 0.2]), 0.1)
        assert spa_tuples(events) == [(1, 1, 1, 0.1, 1, False)]

    def test_truncated_at_series_end(self):
        events = detect_spa_drought(avail([0.2, 0.0, 0.0]), 0.1)
        assert spa_tuples(events) == [(1, 2, 2, 0.2, None, True)]

    def test_bridges_partial_recovery(self):
        events = detect_spa_drought(avail([0.0, 0.15, 0.0]), 0.1)
        assert len(events) == 1
        assert events[0].start_index == 0
        assert events[0].end_index == 2
        assert events[0].energy_deficit == pytest.approx(0.15)

    def test_full_recovery_splits_events(self):
        events = detect_spa_drought(avail([0.0, 0.2, 0.0]), 0.1)
        assert [(e.start_index, e.end_index) for e in events] == [(0, 0), (2, 2)]
        assert events[0].recovery == 1
        assert events[1].truncated

    def test_duration_extends_to_last_peak(self):
        # deficit trace 0.1, 0.1, 0.2, 0.2, 0.1: the maximum is attained
        # twice and the event must end at the second attainment
        events = detect_spa_drought(avail([0.0, 0.1, 0.0, 0.1, 0.2]), 0.1)
        assert spa_tuples(events) == [(0, 3, 4, 0.2, None, True)]

    def test_no_events_when_never_below(self):
        assert detect_spa_drought(avail([0.5, 0.6, 0.7]), 0.1) == []
        assert detect_spa_drought(avail([0.0, 0.5]), 0.0) == []

    def test_matches_sequential_recomputation(self):
        rng = np.random.default_rng(40)
        for _ in range(10):
            series = random_avail(rng, 500)
            got = [
                (e.start_index, e.end_index, e.energy_deficit,
                 e.recovery, e.truncated)
                for e in detect_spa_drought(series, 0.35)
            ]
            expected = [
                (start, mx_i, mx, None if z is None else z - mx_i, z is None)
                for start, mx_i, mx, z in ref_spa_events(0.35 - series.values)
            ]
            assert got == expected

    def test_recovery_counts_to_exact_zero_return(self):
        rng = np.random.default_rng(41)
        series = random_avail(rng, 300)
        trace_events = ref_spa_events(0.4 - series.values)
        for ev, (start, mx_i, mx, zero_i) in zip(
            detect_spa_drought(series, 0.4), trace_events
        ):
            if zero_i is None:
                assert ev.truncated and ev.recovery is None
            else:
                assert ev.recovery == zero_i - mx_i
                assert ev.recovery >= 1


def test_methods_sorted_by_start_index():
    rng = np.random.default_rng(42)
    series = random_avail(rng, 250)
    for events in (
        detect_windows(series, 0.4, 2),
        detect_cbt(series, 0.4),
        detect_fmbt(series, 0.4, intdur=4),
        detect_vmbt(series, 0.4),
        detect_spa_drought(series, 0.4),
    ):
        starts = [e.start_index for e in events]
        assert starts == sorted(starts)
