"""Parameter validation and closed-form rate formulas.

All functions are pure. Empty populations have all rates equal to zero;
only ``allele_frequency`` refuses an empty state.
"""

import math

from .exceptions import ExtinctPopulationError, ParameterError
from .models import (
    AnalysisParams,
    DerivedQuantities,
    ModelParams,
    PopCount,
    RateBundle,
)


def validate_params(p: ModelParams, allow_neutral: bool = False) -> ModelParams:
    """Check the model invariants and return ``p`` unchanged.

    Args:
        p: Model parameters
        allow_neutral: Accept delta = 0 (neutral fixation runs)

    Returns:
        The same ModelParams

    Raises:
        ParameterError: Naming the first violated invariant
    """
    if not p.f > 0:
        raise ParameterError("f must be > 0")
    if not p.D >= 0:
        raise ParameterError("D must be >= 0")
    if not p.c > 0:
        raise ParameterError("c must be > 0")
    if p.K < 1:
        raise ParameterError("K must be >= 1")
    if not 0 <= p.mu <= 1:
        raise ParameterError("mu must be in [0, 1]")
    if not p.f - p.D > 0:
        raise ParameterError("f−D must be > 0")
    if not p.f - p.D - p.delta > 0:
        raise ParameterError("f−D−Δ must be > 0")
    if allow_neutral:
        if p.delta < 0:
            raise ParameterError("Δ must be >= 0")
    elif not p.delta > 0:
        raise ParameterError("Δ must be > 0")
    return p


def validate_analysis(a: AnalysisParams, p: ModelParams) -> AnalysisParams:
    """Check the analysis invariants against the model parameters."""
    if not 0 < a.eps < p.delta / 2 < a.theta < p.delta:
        raise ParameterError("need 0 < ε < Δ/2 < ϑ < Δ")
    if not 0 < a.alpha < 0.25:
        raise ParameterError("α must be in (0, 1/4)")
    rho = a.resolved_rho(p)
    if not 0 < rho < p.f * p.delta:
        raise ParameterError("ϱ must be in (0, fΔ)")
    if not 0 < a.delta_fix < p.nbar_A:
        raise ParameterError("δ must be in (0, n̄_A)")
    if not a.floor_scale > 0:
        raise ParameterError("floor_scale must be > 0")
    return a


def propensities(
    n_aa: int, n_aA: int, n_AA: int, p: ModelParams
) -> tuple[float, float, float, float, float, float]:
    """Six propensities from raw counts, in event-selection order."""
    total = n_aa + n_aA + n_AA
    if total == 0:
        return (0.0, 0.0, 0.0, 0.0, 0.0, 0.0)
    half = n_aA / 2
    a_alleles = n_aa + half
    A_alleles = n_AA + half
    b_aa = p.f * a_alleles * a_alleles / total
    b_aA = 2 * p.f * a_alleles * A_alleles / total
    b_AA = p.f * A_alleles * A_alleles / total
    crowding = p.c * total / p.K
    d_aa = n_aa * (p.D + p.delta + crowding)
    d_aA = n_aA * (p.death_aA + crowding)
    d_AA = n_AA * (p.D + crowding)
    return (b_aa, b_aA, b_AA, d_aa, d_aA, d_AA)


def birth_rates(n: PopCount, p: ModelParams) -> tuple[float, float, float]:
    """Hardy-Weinberg birth rates (b_aa, b_aA, b_AA)."""
    return propensities(n.n_aa, n.n_aA, n.n_AA, p)[:3]


def death_rates(n: PopCount, p: ModelParams) -> tuple[float, float, float]:
    """Natural plus competitive death rates (d_aa, d_aA, d_AA)."""
    return propensities(n.n_aa, n.n_aA, n.n_AA, p)[3:]


def rate_bundle(n: PopCount, p: ModelParams) -> RateBundle:
    """All six propensities as a RateBundle."""
    b_aa, b_aA, b_AA, d_aa, d_aA, d_AA = propensities(n.n_aa, n.n_aA, n.n_AA, p)
    return RateBundle(
        b_aa=b_aa, b_aA=b_aA, b_AA=b_AA, d_aa=d_aa, d_aA=d_aA, d_AA=d_AA
    )


def sum_and_mutant_rates(
    n: PopCount, p: ModelParams
) -> tuple[float, float, float, float]:
    """Jump rates of the total population and of the A-allele count.

    Returns:
        (b_Sigma, d_Sigma, b_A, d_A)
    """
    total = n.total
    sigma = total / p.K
    b_sigma = p.f * total
    d_sigma = p.D * total + p.c * total * sigma + p.delta * n.n_aa
    d_sigma += (p.death_aA - p.D) * n.n_aA
    b_A = p.f * n.mutant
    crowding = p.c * sigma
    d_A = 2 * n.n_AA * (p.D + crowding) + n.n_aA * (p.death_aA + crowding)
    return (b_sigma, d_sigma, b_A, d_A)


def allele_frequency(n: PopCount) -> float:
    """Relative frequency p_A of A alleles."""
    if n.is_empty:
        raise ExtinctPopulationError("allele frequency of an empty population")
    return (n.n_AA + n.n_aA / 2) / n.total


def mutation_rate_AA(n: PopCount, p: ModelParams) -> float:
    """Rate of new mutations produced by births into the AA population."""
    if n.is_empty:
        return 0.0
    return p.mu * p.f * allele_frequency(n) * n.n_AA


def derived(p: ModelParams, a: AnalysisParams) -> DerivedQuantities:
    """Compute equilibria, invasion fitnesses and center-manifold coefficients."""
    f, D, delta = p.f, p.D, p.delta
    nbar_A = p.nbar_A
    h1 = None
    if D > 0:
        h1 = f * delta * (2 * D + delta) / (4 * nbar_A * D * (f + delta) * (D + delta))
    return DerivedQuantities(
        nbar_a=p.nbar_a,
        nbar_A=nbar_A,
        S_mut_in_res=delta,
        S_res_in_mut=-delta,
        gamma_delta=(f + delta / 2) / (4 * nbar_A * (f + delta)),
        x_ladder=math.sqrt((f + a.theta) / (f + delta)),
        pfix=delta / f,
        h1=h1,
        h2=f / (4 * nbar_A * (f + delta)),
        flow_coeff=f * delta / (2 * nbar_A * (f + delta)),
    )
