from fractions import Fraction

import numpy as np
import pytest

from src.chains import (
    BranchingParams,
    ChainSpec,
    branching_survival,
    expected_returns,
    extinction_cdf,
    hitting_oracle,
    hitting_probabilities,
    hitting_probability,
    invasion_branching,
    oracle_potential,
    simulate_extinction,
)
from src.exceptions import ChainSizeError, CriticalBranchingError, ParameterError


def test_symmetric_chain_is_linear():
    spec = ChainSpec.symmetric(0, 20)
    h = hitting_probabilities(spec)
    assert h == pytest.approx(np.arange(21) / 20)
    assert hitting_probability(spec, 5) == pytest.approx(0.25)
    assert hitting_oracle(spec, 5) == pytest.approx(0.25)


def test_shifted_symmetric_chain():
    spec = ChainSpec.symmetric(10, 30)
    assert hitting_probability(spec, 20) == pytest.approx(0.5)


def test_drifted_chain_matches_oracle():
    spec = ChainSpec.drifted(0, 50, c0=1.0, K=100)
    h = hitting_probabilities(spec)
    oracle = [hitting_oracle(spec, z) for z in range(51)]
    assert h == pytest.approx(oracle, rel=1e-8, abs=1e-14)
    assert np.all(np.diff(h) > 0)


def test_strong_drift_stays_finite():
    spec = ChainSpec.drifted(0, 2000, c0=1.0, K=4000)
    h = hitting_probabilities(spec)
    assert np.all(np.isfinite(h))
    assert h[0] == 0.0 and h[-1] == 1.0
    assert np.all(np.diff(h) >= 0)
    assert h[1] < 1e-100


def test_large_chain_only_analytic():
    spec = ChainSpec.symmetric(0, 10**6)
    assert hitting_probability(spec, 250_000) == pytest.approx(0.25)
    with pytest.raises(ChainSizeError):
        hitting_oracle(spec, 1)


def test_reflection_at_lo():
    spec = ChainSpec.symmetric(0, 10, reflect_at_lo=True)
    h = hitting_probabilities(spec)
    assert h[0] == h[1] == pytest.approx(0.1)
    assert hitting_oracle(spec, 0) == pytest.approx(0.1)
    assert expected_returns(spec) == pytest.approx(9.0)


@pytest.mark.parametrize("lo, hi", [(5, 5), (5, 2)])
def test_chain_needs_interval(lo, hi):
    with pytest.raises(ParameterError):
        hitting_probabilities(ChainSpec.symmetric(lo, hi))


def test_state_outside_chain():
    with pytest.raises(ParameterError):
        hitting_probability(ChainSpec.symmetric(0, 10), 11)


def test_up_probability_out_of_range():
    with pytest.raises(ParameterError):
        hitting_probabilities(ChainSpec.drifted(0, 100, c0=1.0, K=100))


def test_branching_survival():
    assert branching_survival(BranchingParams(b=4.0, d=3.7)) == pytest.approx(0.075)
    assert branching_survival(BranchingParams(b=4.0, d=3.7, n0=2)) == pytest.approx(1 - 0.925**2)
    assert branching_survival(BranchingParams(b=1.0, d=2.0)) == 0.0


def test_invasion_branching_gives_fixation_probability(params):
    bp = invasion_branching(params)
    assert bp.b == pytest.approx(4.0)
    assert bp.d == pytest.approx(3.7)
    assert branching_survival(bp) == pytest.approx(params.delta / params.f)


def test_extinction_cdf():
    bp = BranchingParams(b=4.0, d=1.0)
    assert extinction_cdf(bp, 1.0) == pytest.approx(0.240545, rel=1e-4)
    assert extinction_cdf(bp, 0.0) == pytest.approx(0.0)
    assert extinction_cdf(bp, 100.0) == pytest.approx(0.25)
    values = extinction_cdf(bp, np.array([0.5, 1.0, 2.0]))
    assert np.all(np.diff(values) > 0)


def test_extinction_cdf_subcritical_limit():
    assert extinction_cdf(BranchingParams(b=1.0, d=2.0), 100.0) == pytest.approx(1.0)


@pytest.mark.parametrize("b, d, t", [(1.0, 2.0, 1000.0), (0.0, 3.0, 400.0), (3.7, 4.0, 1e4)])
def test_extinction_cdf_subcritical_large_time(b, d, t):
    value = extinction_cdf(BranchingParams(b=b, d=d), t)
    assert np.isfinite(value)
    assert value == pytest.approx(1.0)
    values = extinction_cdf(BranchingParams(b=b, d=d), np.array([0.0, 1.0, t]))
    assert np.all(np.isfinite(values))
    assert values[0] == 0.0


def test_extinction_cdf_pure_death():
    assert extinction_cdf(BranchingParams(b=0.0, d=2.0), 0.5) == pytest.approx(1 - np.exp(-1.0))


def test_extinction_cdf_critical():
    with pytest.raises(CriticalBranchingError, match="critical case"):
        extinction_cdf(BranchingParams(b=2.0, d=2.0), 1.0)


def test_simulated_extinction_matches_formula():
    bp = BranchingParams(b=4.0, d=1.0)
    estimate, std_error = simulate_extinction(bp, 1.0, replicas=2000, seed=3)
    assert abs(estimate - extinction_cdf(bp, 1.0)) < 4 * std_error


def _random_spec(rng: np.random.Generator) -> ChainSpec:
    lo = int(rng.integers(0, 50))
    hi = lo + int(rng.integers(2, 200))
    probs = rng.uniform(0.05, 0.95, size=hi - lo - 1)
    return ChainSpec(lo, hi, lambda k: float(probs[k - lo - 1]), reflect_at_lo=bool(rng.integers(2)))


def _exact_potential(spec: ChainSpec) -> list[Fraction]:
    terms = [Fraction(1)]
    for k in range(spec.lo + 1, spec.hi):
        p = Fraction(spec.up_prob(k))
        terms.append(terms[-1] * (1 - p) / p)
    total = sum(terms)
    h = [Fraction(0)]
    running = Fraction(0)
    for term in terms:
        running += term
        h.append(running / total)
    if spec.reflect_at_lo:
        h[0] = h[1]
    return h


def test_random_chains_formula_matches_oracle():
    rng = np.random.default_rng(20240611)
    for _ in range(100):
        spec = _random_spec(rng)
        h = hitting_probabilities(spec)
        oracle = oracle_potential(spec)
        assert h.shape == oracle.shape
        assert np.max(np.abs(h - oracle)) < 1e-10
        assert h == pytest.approx(oracle, rel=1e-9, abs=1e-300)


def test_random_chains_against_exact_arithmetic():
    rng = np.random.default_rng(7)
    for _ in range(5):
        spec = _random_spec(rng)
        exact = np.array([float(v) for v in _exact_potential(spec)])
        assert hitting_probabilities(spec) == pytest.approx(exact, rel=1e-10, abs=1e-300)
        assert oracle_potential(spec) == pytest.approx(exact, rel=1e-10, abs=1e-300)


def test_oracle_on_steep_chain():
    spec = ChainSpec(0, 200, lambda k: 0.05)
    oracle = oracle_potential(spec)
    assert oracle[1] == pytest.approx(18.0 / (19.0**200 - 1.0), rel=1e-10)
    assert hitting_oracle(spec, 199) == pytest.approx(hitting_probability(spec, 199), rel=1e-12)
