import json

import numpy as np
import pytest

from src.core.exceptions import InvalidArgumentError, NormalizationRequiredError, TailEscapeError
from src.dynamics import make_doubling, make_gauss
from src.markov import MarkovReport, markov_property_test, riesz_family, sample_path, stationarity_test
from src.measures import AtomicMeasure, HistogramMeasure, lebesgue
from src.transferop import density_operator, make_operator
from src.utils import read_binary


def cosine(y):
    return np.cos(2 * np.pi * np.asarray(y))


class TestSamplePath:
    """Test backward Markov paths"""

    def test_paths_satisfy_the_relation(self, half):
        sample = sample_path(riesz_family(half), start=0.6, steps=10, seed=1, n_paths=5)
        assert sample.chains.shape == (5, 11)
        np.testing.assert_array_equal(sample.chains[:, 0], 0.6)
        assert sample.relation_residual(half.sigma) < 1e-12
        assert sample.start == {"kind": "point", "x": 0.6}

    def test_output_does_not_depend_on_threads(self, cos2):
        family = riesz_family(cos2)
        serial = sample_path(family, steps=5, seed=9, n_paths=300, chunk_size=64)
        threaded = sample_path(family, steps=5, seed=9, n_paths=300, chunk_size=64, threads=4)
        np.testing.assert_array_equal(serial.chains, threaded.chains)

    def test_atomic_start(self, half):
        start = AtomicMeasure([0.25, 0.75], [0.5, 0.5])
        sample = sample_path(riesz_family(half), start=start, steps=2, n_paths=50)
        assert set(np.unique(sample.chains[:, 0])) <= {0.25, 0.75}

    def test_zero_steps(self, half):
        sample = sample_path(riesz_family(half), start=0.3, steps=0, n_paths=3)
        assert sample.steps == 0
        assert sample.relation_residual(half.sigma) == 0.0

    @pytest.mark.parametrize("start", [1.0, -0.1])
    def test_start_outside_unit_interval(self, half, start):
        with pytest.raises(InvalidArgumentError):
            sample_path(riesz_family(half), start=start, steps=3)

    def test_closed_form_start_must_be_discretized(self, half):
        with pytest.raises(InvalidArgumentError):
            sample_path(riesz_family(half), start=lebesgue(), steps=3)

    def test_truncated_kernel_escapes(self):
        gauss = make_gauss(10)
        R = density_operator(gauss, lambda y: 1.0 / ((1.0 + y) * np.log(2.0)), "gauss")
        with pytest.raises(TailEscapeError):
            sample_path(riesz_family(R), steps=20, n_paths=200)

    def test_uniform_weight_is_not_a_probability_kernel(self):
        family = riesz_family(make_operator(make_doubling(), "uniform"))
        with pytest.raises(NormalizationRequiredError):
            sample_path(family, start=0.3, steps=5, n_paths=10)

    def test_mass_deficit_on_a_full_map(self):
        family = riesz_family(make_operator(make_doubling(), "custom", "1/4"))
        with pytest.raises(NormalizationRequiredError):
            sample_path(family, start=0.3, steps=5, n_paths=10)

    def test_write_and_frame(self, half, tmp_path):
        sample = sample_path(riesz_family(half), start=0.5, steps=3, seed=4, n_paths=2)
        sample.write(tmp_path / "paths.bin")
        np.testing.assert_array_equal(read_binary(tmp_path / "paths.bin"), sample.chains.reshape(-1))
        manifest = json.loads((tmp_path / "paths.json").read_text())
        assert manifest["seed"] == 4
        assert manifest["layout"] == "path-major"
        frame = sample.to_frame()
        assert list(frame.columns) == ["path", "step", "x"]
        assert len(frame) == 8


class TestMarkovChecks:
    """Test the conditional-mean and stationarity checks"""

    def test_conditional_means_match_the_operator(self, cos2):
        report = markov_property_test(riesz_family(cos2), cosine, n_paths=2000, steps=20, seed=5, bins=16)
        assert report.counts.sum() == 2000 * 20
        assert report.passed, report.to_frame()
        assert report.to_check().name == "markov.property"

    def test_report_flags_large_z(self):
        report = MarkovReport(np.zeros(2), np.zeros(2), np.array([1.0, -5.0]), np.array([3, 0]))
        assert report.max_z == 5.0
        assert not report.passed
        assert report.empty_bins == 1

    def test_lebesgue_is_stationary_under_half(self, half):
        invariant = HistogramMeasure(np.full(64, 1.0 / 64))
        report = stationarity_test(riesz_family(half), invariant, steps=10, n_paths=5000, seed=3)
        assert report.samples == 5000
        assert report.pvalue > 1e-4
        assert report.to_check().name == "markov.stationarity"

    @pytest.mark.slow
    def test_conditional_means_at_full_size(self, half):
        report = markov_property_test(riesz_family(half), lambda y: np.asarray(y, dtype=float),
                                      n_paths=100_000, steps=20, seed=1)
        assert report.counts.sum() == 100_000 * 20
        assert report.passed, report.to_frame()
