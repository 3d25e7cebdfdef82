"""Portfolio composition and residual load construction."""

from datetime import timedelta

import numpy as np
import pytest

from shortfall import (
    AlignmentError,
    CapacityMap,
    ParameterError,
    PortfolioEntry,
    PortfolioSpec,
    SeriesLookupError,
    TimeSeries,
    compose_weighted,
    residual_load_from_profiles,
)
from support import T0, avail, hourly


def series_set(**named):
    """dict keyed by (technology, region) from tech@region=values kwargs."""
    out = {}
    for key, values in named.items():
        tech, region = key.split("__")
        out[(tech, region)] = avail(values, technology=tech, region=region)
    return out


class TestCompose:
    def test_even_mix_of_complements(self):
        pool = series_set(onshore__DE=[1.0, 0.0], solar__DE=[0.0, 1.0])
        spec = PortfolioSpec((("onshore", "DE", 0.5), ("solar", "DE", 0.5)))
        mixed = compose_weighted(pool, spec)
        assert mixed.values.tolist() == [0.5, 0.5]
        assert mixed.technology == "onshore+solar"
        assert mixed.region == "DE"

    def test_zero_weight_entry_is_inert(self):
        pool = series_set(onshore__DE=[1.0, 0.0], solar__DE=[0.0, 1.0])
        spec = PortfolioSpec((("onshore", "DE", 1.0), ("solar", "DE", 0.0)))
        mixed = compose_weighted(pool, spec)
        assert mixed.values.tolist() == [1.0, 0.0]

    def test_uneven_mix(self):
        pool = series_set(onshore__DE=[0.3, 0.1], solar__DE=[0.0, 0.4])
        spec = PortfolioSpec((("onshore", "DE", 0.75), ("solar", "DE", 0.25)))
        mixed = compose_weighted(pool, spec)
        assert mixed.values.tolist() == pytest.approx([0.225, 0.175])

    def test_weights_normalize_to_shares(self):
        pool = series_set(onshore__DE=[0.3, 0.1], solar__DE=[0.0, 0.4])
        by_share = compose_weighted(
            pool, PortfolioSpec((("onshore", "DE", 0.75), ("solar", "DE", 0.25)))
        )
        by_capacity = compose_weighted(
            pool, PortfolioSpec((("onshore", "DE", 3.0), ("solar", "DE", 1.0)))
        )
        assert np.array_equal(by_share.values, by_capacity.values)

    def test_result_is_convex(self):
        rng = np.random.default_rng(60)
        pool = {
            ("t1", "R"): avail(rng.random(200), technology="t1", region="R"),
            ("t2", "R"): avail(rng.random(200), technology="t2", region="R"),
            ("t3", "R"): avail(rng.random(200), technology="t3", region="R"),
        }
        spec = PortfolioSpec((("t1", "R", 0.2), ("t2", "R", 0.5), ("t3", "R", 0.3)))
        mixed = compose_weighted(pool, spec)
        stacked = np.stack([pool[k].values for k in pool])
        assert np.all(mixed.values <= stacked.max(axis=0) + 1e-15)
        assert np.all(mixed.values >= stacked.min(axis=0) - 1e-15)
        assert mixed.values.min() >= 0.0 and mixed.values.max() <= 1.0

    def test_single_entry_identity(self):
        pool = series_set(onshore__DE=[0.3, 0.7])
        mixed = compose_weighted(pool, PortfolioSpec((("onshore", "DE", 2.0),)))
        assert np.array_equal(mixed.values, pool[("onshore", "DE")].values)

    def test_entry_validation(self):
        with pytest.raises(ParameterError, match="negative weight"):
            PortfolioEntry("onshore", "DE", -0.1)
        with pytest.raises(ParameterError, match="at least one entry"):
            PortfolioSpec(())
        with pytest.raises(ParameterError, match="positive total"):
            PortfolioSpec((("onshore", "DE", 0.0), ("solar", "DE", 0.0)))

    def test_missing_series(self):
        pool = series_set(onshore__DE=[0.3, 0.7])
        spec = PortfolioSpec((("onshore", "DE", 0.5), ("solar", "ES", 0.5)))
        with pytest.raises(SeriesLookupError, match="technology='solar' region='ES'"):
            compose_weighted(pool, spec)

    def test_misaligned_series(self):
        pool = series_set(onshore__DE=[0.3, 0.7])
        pool[("solar", "DE")] = avail([0.1, 0.2, 0.3], technology="solar")
        spec = PortfolioSpec((("onshore", "DE", 0.5), ("solar", "DE", 0.5)))
        with pytest.raises(AlignmentError, match="not aligned"):
            compose_weighted(pool, spec)


class TestResidualLoad:
    def test_load_minus_scaled_availability(self):
        pool = series_set(onshore__DE=[1.0, 0.2])
        out = residual_load_from_profiles(
            hourly([100.0, 100.0]), pool, {("onshore", "DE"): 100.0}
        )
        assert out.values.tolist() == [0.0, 80.0]
        assert out.label == "residual_load"

    def test_multiple_technologies_sum(self):
        pool = series_set(onshore__DE=[0.5, 0.5], solar__DE=[1.0, 0.0])
        out = residual_load_from_profiles(
            hourly([50.0, 50.0]),
            pool,
            {("onshore", "DE"): 30.0, ("solar", "DE"): 20.0},
            label="DE",
        )
        assert out.values.tolist() == [15.0, 35.0]
        assert out.label == "DE"

    def test_zero_capacity_contributes_nothing(self):
        pool = series_set(onshore__DE=[1.0, 1.0])
        out = residual_load_from_profiles(
            hourly([10.0, 10.0]), pool, {("onshore", "DE"): 0.0}
        )
        assert out.values.tolist() == [10.0, 10.0]

    def test_matches_direct_formula(self):
        rng = np.random.default_rng(61)
        pool = {
            ("t1", "R"): avail(rng.random(150), technology="t1", region="R"),
            ("t2", "R"): avail(rng.random(150), technology="t2", region="R"),
        }
        load = hourly(rng.uniform(0.0, 2.0, size=150))
        out = residual_load_from_profiles(
            load, pool, {("t1", "R"): 0.8, ("t2", "R"): 0.6}
        )
        expected = load.values - (0.8 * pool[("t1", "R")].values + 0.6 * pool[("t2", "R")].values)
        assert np.array_equal(out.values, expected)

    def test_capacity_validation(self):
        with pytest.raises(ParameterError, match="negative capacity"):
            CapacityMap({("onshore", "DE"): -1.0})

    def test_missing_profile_for_capacity(self):
        pool = series_set(onshore__DE=[1.0, 1.0])
        with pytest.raises(SeriesLookupError):
            residual_load_from_profiles(
                hourly([10.0, 10.0]), pool, {("solar", "DE"): 5.0}
            )

    def test_load_must_align(self):
        pool = series_set(onshore__DE=[1.0, 1.0])
        bad_step = TimeSeries(start_time=T0, values=[10.0, 10.0], step=timedelta(hours=3))
        with pytest.raises(AlignmentError):
            residual_load_from_profiles(bad_step, pool, {("onshore", "DE"): 5.0})
