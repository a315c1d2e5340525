"""
Pydantic models and schemas for dirac-steps
Validated configuration records and scattering results
"""

import math
from enum import Enum
from typing import Dict, List, Optional

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

from dirac_steps.core.config import settings


class _Frozen(BaseModel):
    model_config = ConfigDict(frozen=True)


# Enumerations

class StepKind(str, Enum):
    """Which four-potential component steps, and along which axis"""
    SCALAR_SPATIAL = "scalar_spatial"
    SCALAR_TEMPORAL = "scalar_temporal"
    VECTOR_SPATIAL = "vector_spatial"
    VECTOR_TEMPORAL = "vector_temporal"


class Regime(str, Enum):
    """Scattering regime of an outcome"""
    PROPAGATING = "propagating"
    KLEIN_GAP = "klein_gap"
    KLEIN_REGIME = "klein_regime"
    NO_BACKSCATTER = "no_backscatter"


class ScanMode(str, Enum):
    SHARP_SPATIAL = "sharp_spatial"
    SHARP_TEMPORAL = "sharp_temporal"
    EM_SPATIAL = "em_spatial"
    EM_TEMPORAL = "em_temporal"
    SMOOTH = "smooth"
    DISPERSION = "dispersion"
    ORACLE_COMPARE = "oracle_compare"


class OutputFormat(str, Enum):
    CSV = "csv"
    JSON = "json"


# Units

class NaturalUnits(_Frozen):
    """Mass and charge in natural units (hbar = c = 1)"""
    mass: float = Field(1.0, gt=0)
    # q = -e with e = sqrt(4 pi alpha) in Heaviside-Lorentz units
    charge: float = -math.sqrt(4.0 * math.pi / 137.035999084)


class SIConstants(_Frozen):
    """SI constants, 9 significant digits"""
    electron_mass_kg: float = 9.10938370e-31
    elementary_charge_C: float = 1.602176634e-19
    speed_of_light_mps: float = 299792458.0
    planck_Js: float = 6.62607015e-34
    hbar_Js: float = 6.62607015e-34 / (2.0 * math.pi)

    @model_validator(mode="before")
    @classmethod
    def _derive_hbar(cls, data):
        if isinstance(data, dict) and "planck_Js" in data and data.get("hbar_Js") is None:
            data = {**data, "hbar_Js": data["planck_Js"] / (2.0 * math.pi)}
        return data

    @model_validator(mode="after")
    def _reduced_planck(self) -> "SIConstants":
        if not math.isclose(self.hbar_Js, self.planck_Js / (2.0 * math.pi), rel_tol=1e-12):
            raise ValueError("hbar must equal planck / (2 pi)")
        return self

    @property
    def rest_energy_J(self) -> float:
        return self.electron_mass_kg * self.speed_of_light_mps ** 2


class IndexContrast(_Frozen):
    """Refractive index contrast N = n2 / n1 of an electromagnetic step"""
    n1: float = Field(..., gt=0)
    n2: float = Field(..., gt=0)

    @property
    def contrast(self) -> float:
        return self.n2 / self.n1

    @classmethod
    def from_contrast(cls, contrast: float) -> "IndexContrast":
        return cls(n1=1.0, n2=contrast)


class EnergyExampleReport(_Frozen):
    """Worked relativistic-regime energy example (SI, joules)"""
    v_over_c: float
    potential_volts: float
    rest_energy_J: float
    kinetic_energy_J: float
    potential_energy_J: float
    lorentz_factor: float
    momentum_kgmps: float
    energy_ratio: float
    nonrelativistic_total_J: float
    relativistic_total_J: float
    quoted_relative_error: float
    exact_relative_error: float


# Sharp steps

class StepConfig(_Frozen):
    """Sharp step of one potential component; values are stored already multiplied by q"""
    kind: StepKind
    before: float
    after: float
    location: float = 0.0

    @field_validator("before", "after", "location")
    @classmethod
    def _finite(cls, value: float) -> float:
        if not math.isfinite(value):
            raise ValueError("step values must be finite")
        return value


class ScatterOutcome(_Frozen):
    """
    Pair of amplitudes and probabilities of a scattering event

    Spatial steps report (t, r) / (T, R); temporal steps report (f, b) / (F, B).
    """
    amp_primary: complex
    amp_secondary: complex
    prob_primary: float = Field(..., ge=0)
    prob_secondary: float = Field(..., ge=0)
    regime: Regime
    gamma: complex = complex(1.0)
    energies: Dict[str, float] = Field(default_factory=dict)
    momenta: Dict[str, complex] = Field(default_factory=dict)
    # Electromagnetic temporal Poynting ratios are not a distribution
    is_probability: bool = True

    @model_validator(mode="after")
    def _conserved(self) -> "ScatterOutcome":
        if self.is_probability and abs(self.prob_primary + self.prob_secondary - 1.0) > 1e-9:
            raise ValueError(
                f"probabilities do not sum to one: {self.prob_primary} + {self.prob_secondary}"
            )
        return self


# Smooth step

class SmoothStepConfig(_Frozen):
    """Hyperbolic-tangent vector-potential step qA(t) from qa1 to qa2"""
    qa1: float
    qa2: float
    t0: float = 0.0
    tau: float = Field(..., gt=0)
    momentum: float
    mass: float = Field(default_factory=lambda: settings.mass, gt=0)

    @classmethod
    def from_energy(
        cls,
        energy: float,
        qa1: float,
        qa2: float,
        tau: float,
        mass: Optional[float] = None,
        t0: float = 0.0,
    ) -> "SmoothStepConfig":
        """Build a config for an incident electron of total energy `energy` in the earlier medium"""
        m = settings.mass if mass is None else mass
        if energy < m:
            raise ValueError("incident energy must be at least the rest mass")
        return cls(
            qa1=qa1, qa2=qa2, t0=t0, tau=tau,
            momentum=math.sqrt(energy * energy - m * m) + qa1, mass=m,
        )

    @property
    def delta(self) -> float:
        return self.qa2 - self.qa1

    @property
    def k1(self) -> float:
        return self.momentum - self.qa1

    @property
    def k2(self) -> float:
        return self.momentum - self.qa2

    @property
    def e1(self) -> float:
        return math.hypot(self.k1, self.mass)

    @property
    def e2(self) -> float:
        return math.hypot(self.k2, self.mass)


class IntegrationSettings(_Frozen):
    """Adaptive integration settings of the ODE oracle"""
    rel_tol: float = Field(default_factory=lambda: settings.ode_rel_tol, gt=0)
    abs_tol: float = Field(default_factory=lambda: settings.ode_abs_tol, gt=0)
    t_start_sigma: float = Field(default_factory=lambda: settings.ode_sigma, ge=5)
    t_end_sigma: float = Field(default_factory=lambda: settings.ode_sigma, ge=5)
    max_steps: int = Field(default_factory=lambda: settings.ode_max_steps, gt=0)
    check_second_order: bool = False


# CLI

class ScanRequest(BaseModel):
    """One CLI scan over a one-dimensional grid"""
    mode: ScanMode
    energy_ratio: float = Field(2.0, gt=0)
    grid_min: float = 0.0
    grid_max: float = 5.0
    grid_points: int = Field(501, ge=2, le=10_000_000)
    tau_list: List[float] = Field(default_factory=list)
    output_format: OutputFormat = OutputFormat.CSV
    output_path: Optional[str] = None
    threshold: float = Field(default_factory=lambda: settings.oracle_threshold, gt=0)
    jobs: int = Field(default_factory=lambda: settings.default_jobs, ge=1)
    grid_values: Optional[List[float]] = None

    @model_validator(mode="after")
    def _ordered_grid(self) -> "ScanRequest":
        if self.grid_values is None and not self.grid_min < self.grid_max:
            raise ValueError("grid_min must be smaller than grid_max")
        if any(tau <= 0 for tau in self.tau_list):
            raise ValueError("transition constants must be positive")
        return self

    def grid(self) -> np.ndarray:
        """Grid points in request order"""
        if self.grid_values is not None:
            return np.asarray(self.grid_values, dtype=float)
        return np.linspace(self.grid_min, self.grid_max, self.grid_points)


class OracleCompareSummary(_Frozen):
    """Max-norm summary of a closed-form versus oracle comparison"""
    points: int
    failures: int
    max_deviation: float
    threshold: float
    passed: bool
