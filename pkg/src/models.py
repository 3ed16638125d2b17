"""Pydantic models for the Mendelian diploid birth-death process."""

from enum import Enum
from typing import Optional

from pydantic import BaseModel, ConfigDict, Field


class Dominance(str, Enum):
    """Phenotype of the heterozygote aA."""
    DOMINANT = "dominant"
    CODOMINANT = "codominant"


class ModelParams(BaseModel):
    """Demographic parameters of the three-genotype process.

    ``delta`` is the extra death rate of aa individuals. With
    ``dominance=codominant`` the heterozygote carries half of it.
    """

    model_config = ConfigDict(frozen=True)

    f: float
    D: float
    delta: float
    c: float
    K: int
    mu: float = 0.0
    dominance: Dominance = Dominance.DOMINANT

    @property
    def nbar_a(self) -> float:
        """Equilibrium density of a monomorphic aa population."""
        return (self.f - self.D - self.delta) / self.c

    @property
    def nbar_A(self) -> float:
        """Equilibrium density of a monomorphic AA population."""
        return (self.f - self.D) / self.c

    @property
    def death_aA(self) -> float:
        """Natural death rate of the heterozygote."""
        if self.dominance == Dominance.CODOMINANT:
            return self.D + self.delta / 2
        return self.D


class AnalysisParams(BaseModel):
    """Knobs of the ladder, decay and fixation analyses."""

    model_config = ConfigDict(frozen=True)

    eps: float = 0.05
    theta: float = 0.2
    alpha: float = 0.05
    delta_fix: float = 0.1
    rho: Optional[float] = None
    # Survival floor is floor_scale * K^(-1/4 + alpha)
    floor_scale: float = 1.0

    def resolved_rho(self, p: ModelParams) -> float:
        """Decay-bound slack, defaulting to f*delta/2."""
        if self.rho is None:
            return p.f * p.delta / 2
        return self.rho

    def floor_level(self, K: int) -> float:
        """Terminal density level of the survival ladder."""
        return self.floor_scale * K ** (-0.25 + self.alpha)


class PopDensity(BaseModel):
    """Rescaled densities (x, y, z) of aa, aA and AA."""

    model_config = ConfigDict(frozen=True)

    x: float = Field(ge=0)
    y: float = Field(ge=0)
    z: float = Field(ge=0)

    @property
    def sigma(self) -> float:
        return self.x + self.y + self.z

    def as_tuple(self) -> tuple[float, float, float]:
        return (self.x, self.y, self.z)


class PopCount(BaseModel):
    """Integer counts of the three genotypes."""

    model_config = ConfigDict(frozen=True)

    n_aa: int = Field(ge=0)
    n_aA: int = Field(ge=0)
    n_AA: int = Field(ge=0)

    @property
    def total(self) -> int:
        return self.n_aa + self.n_aA + self.n_AA

    @property
    def mutant(self) -> int:
        """Number of A alleles, 2*N_AA + N_aA."""
        return 2 * self.n_AA + self.n_aA

    @property
    def is_empty(self) -> bool:
        return self.total == 0

    def sigma(self, K: int) -> float:
        return self.total / K

    def density(self, K: int) -> PopDensity:
        return PopDensity(x=self.n_aa / K, y=self.n_aA / K, z=self.n_AA / K)

    def as_tuple(self) -> tuple[int, int, int]:
        return (self.n_aa, self.n_aA, self.n_AA)

    @classmethod
    def from_density(cls, density: PopDensity, K: int) -> "PopCount":
        """Round a density to the nearest integer counts."""
        return cls(
            n_aa=round(density.x * K),
            n_aA=round(density.y * K),
            n_AA=round(density.z * K),
        )


class RateBundle(BaseModel):
    """Per-genotype birth and death propensities."""

    b_aa: float = 0.0
    b_aA: float = 0.0
    b_AA: float = 0.0
    d_aa: float = 0.0
    d_aA: float = 0.0
    d_AA: float = 0.0

    @property
    def birth_total(self) -> float:
        return self.b_aa + self.b_aA + self.b_AA

    @property
    def death_total(self) -> float:
        return self.d_aa + self.d_aA + self.d_AA

    @property
    def total(self) -> float:
        return self.birth_total + self.death_total

    def as_list(self) -> list[float]:
        """Propensities in event-selection order."""
        return [self.b_aa, self.b_aA, self.b_AA, self.d_aa, self.d_aA, self.d_AA]


class DerivedQuantities(BaseModel):
    """Closed-form quantities derived from the parameters."""

    nbar_a: float
    nbar_A: float
    S_mut_in_res: float
    S_res_in_mut: float
    gamma_delta: float
    x_ladder: float
    pfix: float
    # None when D = 0
    h1: Optional[float] = None
    h2: float
    flow_coeff: float
