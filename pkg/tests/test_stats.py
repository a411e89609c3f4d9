import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy.stats import chi2

from oracles import TRIO_VECTOR
from qweak.ddcore import from_dense
from qweak.ddsampler import sample_many
from qweak.densesim import DenseState, probabilities, sample_bitstrings
from qweak.errors import DegenerateDistributionError, DistributionError
from qweak.stats import Histogram, chi2_threshold, chi_squared, chi_squared_passes, empirical, tvd


def random_dist(rng, size):
    w = rng.random(size)
    return w / w.sum()


dists = st.integers(2, 32).flatmap(
    lambda k: st.lists(st.floats(0.01, 1.0), min_size=k, max_size=k).map(lambda xs: np.array(xs) / sum(xs))
)


# Histogram


def test_histogram_validation():
    assert Histogram.from_counts({"0": 3, "1": 1}).shots == 4
    with pytest.raises(DistributionError):
        Histogram({"0": 3}, 4)
    with pytest.raises(DistributionError):
        Histogram.from_counts({"0": 1, "10": 1})
    with pytest.raises(DistributionError):
        Histogram({}, 0)


def test_empirical():
    assert empirical({"00": 3, "11": 1}) == {"00": 0.75, "11": 0.25}


# tvd


def test_tvd_identical():
    assert tvd([0.2, 0.8], [0.2, 0.8]) == 0.0


def test_tvd_disjoint():
    assert tvd([1, 0, 0], [0, 0.5, 0.5]) == 1.0


def test_tvd_half():
    assert tvd([1, 0], [0.5, 0.5]) == 0.5


def test_tvd_mappings():
    assert tvd({"0": 1.0}, {"0": 0.5, "1": 0.5}) == 0.5


def test_tvd_errors():
    with pytest.raises(DistributionError):
        tvd([0.5, 0.4], [0.5, 0.5])
    with pytest.raises(DistributionError):
        tvd([1.0], [0.5, 0.5])
    with pytest.raises(DistributionError):
        tvd({"0": 1.0}, [1.0])


@settings(max_examples=200)
@given(st.integers(2, 32), st.integers(0, 2**32 - 1))
def test_tvd_symmetric_and_triangle(size, seed):
    rng = np.random.default_rng(seed)
    p, q, r = (random_dist(rng, size) for _ in range(3))
    assert tvd(p, q) == pytest.approx(tvd(q, p), abs=1e-15)
    assert tvd(p, r) <= tvd(p, q) + tvd(q, r) + 1e-12
    assert 0.0 <= tvd(p, q) <= 1.0


# chi-squared


def test_chi_squared_fair_coin():
    statistic, dof = chi_squared({"0": 510, "1": 490}, [0.5, 0.5])
    assert statistic == pytest.approx(0.4, abs=1e-12)
    assert dof == 1


def test_chi_squared_proportional_counts():
    statistic, dof = chi_squared({"00": 250, "01": 250, "10": 125, "11": 375}, [0.25, 0.25, 0.125, 0.375])
    assert statistic == 0.0 and dof == 3


def test_chi_squared_pools_small_bins():
    # expected counts 496, 496, 4, 4: the two small bins pool into one
    exact = [0.496, 0.496, 0.004, 0.004]
    statistic, dof = chi_squared({"00": 500, "01": 492, "10": 8}, exact)
    assert dof == 2
    assert statistic == pytest.approx(4**2 / 496 + 4**2 / 496 + 0.0, abs=1e-12)


def test_chi_squared_unexpected_outcome_is_infinite():
    statistic, _ = chi_squared({"00": 500, "01": 499, "11": 1}, [0.5, 0.5, 0, 0])
    assert statistic == float("inf")
    assert not chi_squared_passes({"00": 500, "01": 499, "11": 1}, [0.5, 0.5, 0, 0])


def test_chi_squared_degenerate():
    with pytest.raises(DegenerateDistributionError):
        chi_squared({"101": 1000}, np.eye(8)[5])
    assert chi_squared_passes({"101": 1000}, np.eye(8)[5])


def test_chi_squared_rejects_unnormalized():
    with pytest.raises(DistributionError):
        chi_squared({"0": 5, "1": 5}, [0.5, 0.4])


def test_threshold_matches_tables():
    # standard table values of the 99.9th percentile
    assert chi2_threshold(1) == pytest.approx(10.828, abs=1e-3)
    assert chi2_threshold(3) == pytest.approx(16.266, abs=1e-3)
    assert chi2_threshold(7) == pytest.approx(24.322, abs=1e-3)


def test_trio_million_shots_pass():
    p = probabilities(TRIO_VECTOR)
    p = p / p.sum()
    counts = sample_many(from_dense(np.sqrt(p)), 10**6, seed=21)
    statistic, dof = chi_squared(counts, p)
    assert dof == 3
    assert statistic < chi2.ppf(0.999, 3)


@settings(max_examples=50)
@given(dists, st.integers(0, 2**32 - 1))
def test_chi_squared_permutation_invariant(p, seed):
    rng = np.random.default_rng(seed)
    width = max(int(p.size - 1).bit_length(), 1)
    counts = rng.multinomial(1000, p)
    hist = {format(i, f"0{width}b"): int(c) for i, c in enumerate(counts) if c}
    perm = rng.permutation(p.size)
    # relabel outcome i as perm[i] in both the histogram and the distribution
    hist2 = {format(int(perm[int(k, 2)]), f"0{width}b"): c for k, c in hist.items()}
    p2 = np.zeros(p.size)
    p2[perm] = p
    try:
        a = chi_squared(hist, p)
    except DegenerateDistributionError:
        with pytest.raises(DegenerateDistributionError):
            chi_squared(hist2, p2)
        return
    b = chi_squared(hist2, p2)
    assert a[1] == b[1]
    assert a[0] == pytest.approx(b[0], rel=1e-12)


@pytest.mark.slow
def test_calibration():
    rng = np.random.default_rng(99)
    p = random_dist(rng, 16)
    state = DenseState.from_vector(np.sqrt(p))
    passes = sum(chi_squared_passes(sample_bitstrings(state, 10_000, seed=s), p) for s in range(1000))
    assert passes >= 990
