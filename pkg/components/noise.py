"""
Noise configuration and single-qubit dynamical maps at the optimal point

Low-frequency 1/f noise is treated as a quasi-static Gaussian detuning
(adiabatic defocusing, no population transfer); high-frequency noise as a
Markovian bath (relaxation T1, secular dephasing T2 = 2 T1). Times may be
scalars or numpy arrays; every function broadcasts over them.
"""
import logging
import math
from dataclasses import dataclass
from enum import Enum
from typing import Optional, Tuple, Union

import numpy as np
from scipy import constants
from scipy.special import expit

from components.errors import UsageError
from config.settings import NOISE_CONFIG, ORACLE_CONFIG, TOLERANCE_CONFIG

logger = logging.getLogger(__name__)

TimeLike = Union[float, np.ndarray]

HBAR = constants.hbar          # 1.054571817e-34 J s
K_BOLTZMANN = constants.k      # 1.380649e-23 J/K


class NoiseMode(Enum):
    ADIABATIC = "adiabatic"
    QUANTUM = "quantum"
    BOTH = "both"


def sigma_from_spectrum(a1f: float, gamma_m: float, gamma_M: float) -> float:
    """r.m.s. amplitude of the low-frequency noise from its 1/f spectrum

    The spectrum is S(w) = a1f / w on [gamma_m, gamma_M] with
    a1f = pi Sigma^2 / ln(gamma_M / gamma_m), so
    Sigma = sqrt(a1f ln(gamma_M / gamma_m) / pi). This is the displayed
    normalization taken verbatim; whether it refers to a one-sided or a
    two-sided spectrum is left implicit, so convert a two-sided amplitude
    before passing it in.
    """
    if a1f <= 0 or gamma_m <= 0 or gamma_M <= 0:
        raise UsageError("a1f, gamma_m and gamma_M must be positive")
    if gamma_M <= gamma_m:
        raise UsageError(f"gamma_M ({gamma_M}) must exceed gamma_m ({gamma_m})")
    return math.sqrt(a1f * math.log(gamma_M / gamma_m) / math.pi)


@dataclass(frozen=True)
class NoiseParams:
    omega: float                      # rad/s
    sigma: float                      # rad/s
    sf: float                         # 1/s
    temperature: float                # K
    theta: float = math.pi / 2
    gamma_m: Optional[float] = None   # rad/s
    gamma_M: Optional[float] = None   # rad/s
    a1f: Optional[float] = None

    def __post_init__(self):
        if not self.omega > 0:
            raise UsageError(f"omega must be positive, got {self.omega}")
        if not self.sigma >= 0:
            raise UsageError(f"sigma must be nonnegative, got {self.sigma}")
        if not self.sf >= 0:
            raise UsageError(f"sf must be nonnegative, got {self.sf}")
        if not self.temperature > 0:
            raise UsageError(f"temperature must be positive, got {self.temperature}")
        if self.theta != math.pi / 2:
            raise UsageError(f"only the optimal point theta = pi/2 is supported, got {self.theta}")
        if self.gamma_m is not None or self.gamma_M is not None:
            if self.gamma_m is None or self.gamma_M is None:
                raise UsageError("gamma_m and gamma_M must be given together")
            if not self.gamma_M > self.gamma_m > 0:
                raise UsageError("band edges must satisfy gamma_M > gamma_m > 0")

    @classmethod
    def from_ratio(cls, sigma_ratio: float, omega: float = None, sf: float = None,
                   temperature: float = None) -> "NoiseParams":
        omega = NOISE_CONFIG["omega"] if omega is None else omega
        return cls(
            omega=omega,
            sigma=sigma_ratio * omega,
            sf=NOISE_CONFIG["sf"] if sf is None else sf,
            temperature=NOISE_CONFIG["temperature"] if temperature is None else temperature,
        )

    @classmethod
    def from_spectrum(cls, a1f: float, gamma_m: float, gamma_M: float, omega: float,
                      sf: float, temperature: float) -> "NoiseParams":
        return cls(
            omega=omega,
            sigma=sigma_from_spectrum(a1f, gamma_m, gamma_M),
            sf=sf,
            temperature=temperature,
            gamma_m=gamma_m,
            gamma_M=gamma_M,
            a1f=a1f,
        )

    @property
    def sigma_over_omega(self) -> float:
        return self.sigma / self.omega


def relaxation_rates(p: NoiseParams) -> Tuple[float, float, float]:
    """(T1, T2, p_eq) of the Markovian channel; T1 is +inf when sf = 0"""
    t1 = math.inf if p.sf == 0 else 2.0 / p.sf
    t2 = 2.0 * t1
    # Gibbs occupation of the excited level, 1 / (1 + exp(hbar Omega / k T))
    p_eq = float(expit(-HBAR * p.omega / (K_BOLTZMANN * p.temperature)))
    return t1, t2, p_eq


def _check_time(t: TimeLike) -> np.ndarray:
    arr = np.asarray(t, dtype=float)
    if np.any(arr < 0) or not np.all(np.isfinite(arr)):
        raise UsageError("time must be finite and nonnegative")
    return arr


def adiabatic_defocus(t: TimeLike, p: NoiseParams) -> Union[complex, np.ndarray]:
    """Static-path defocusing factor D(t) = (1 + i Sigma^2 t / Omega)^(-1/2)

    Gaussian average of exp(-i xi^2 t / 2 Omega), principal branch. The sign
    of the second-order shift only sets the phase of D; |D| is unaffected.
    """
    arr = _check_time(t)
    x = p.sigma ** 2 * arr / p.omega
    # np.float64 times 1j is a plain complex, so keep the result an array
    d = np.asarray((1.0 + 1j * x) ** -0.5)
    return complex(d) if d.ndim == 0 else d


def mc_defocus_oracle(t: float, p: NoiseParams, n_samples: int = None,
                      seed: int = None) -> Tuple[complex, float]:
    """Monte-Carlo estimate of D(t) over Gaussian static detunings

    Returns (mean of exp(-i xi^2 t / 2 Omega), standard error of the mean),
    with xi ~ Normal(0, Sigma^2) drawn from a seeded PCG64 generator.
    """
    n_samples = ORACLE_CONFIG["n_samples"] if n_samples is None else int(n_samples)
    seed = ORACLE_CONFIG["seed"] if seed is None else int(seed)
    if n_samples < ORACLE_CONFIG["min_samples"]:
        raise UsageError(f"n_samples must be at least {ORACLE_CONFIG['min_samples']}, got {n_samples}")
    t = float(_check_time(t))

    rng = np.random.Generator(np.random.PCG64(seed))
    xi = rng.normal(0.0, p.sigma, size=n_samples)
    samples = np.exp(-1j * xi ** 2 * t / (2.0 * p.omega))
    estimate = complex(samples.mean())
    variance = samples.real.var(ddof=1) + samples.imag.var(ddof=1)
    std_error = float(np.sqrt(variance / n_samples))
    logger.debug(f"MC defocus at t={t:.4e}s: {estimate:.6f} +/- {std_error:.2e} ({n_samples} samples)")
    return estimate, std_error


@dataclass(frozen=True)
class SingleQubitMap:
    """Single-qubit map at time t

    Excited population p_e(t) = p_eq + (p_e(0) - p_eq) pop_survival;
    the coherence <1|rho|0> is multiplied by coherence_factor; the ground
    population follows from the trace.
    """
    time: TimeLike
    pop_survival: TimeLike
    p_eq: float
    coherence_factor: Union[complex, np.ndarray]

    def __post_init__(self):
        gamma = np.asarray(self.pop_survival)
        if np.any(gamma < 0) or np.any(gamma > 1):
            raise UsageError("pop_survival must lie in [0, 1]")
        if not 0.0 <= self.p_eq <= 0.5:
            raise UsageError(f"p_eq must lie in [0, 1/2], got {self.p_eq}")
        if np.any(np.abs(self.coherence_factor) > 1.0 + TOLERANCE_CONFIG["coherence_bound"]):
            raise UsageError("|coherence_factor| must not exceed 1")


def single_qubit_map(t: TimeLike, p: NoiseParams, mode: NoiseMode) -> SingleQubitMap:
    arr = _check_time(t)
    free_phase = np.exp(-1j * p.omega * arr)

    if mode is NoiseMode.ADIABATIC:
        survival = np.ones_like(arr)
        p_eq = 0.0
        coherence = free_phase * adiabatic_defocus(arr, p)
    else:
        t1, t2, p_eq = relaxation_rates(p)
        survival = np.exp(-arr / t1)
        coherence = free_phase * np.exp(-arr / t2)
        if mode is NoiseMode.BOTH:
            coherence = coherence * adiabatic_defocus(arr, p)

    if arr.ndim == 0:
        return SingleQubitMap(float(arr), float(survival), p_eq, complex(coherence))
    return SingleQubitMap(arr, survival, p_eq, coherence)


def transfer_matrix(m: SingleQubitMap) -> np.ndarray:
    """4x4 transfer matrix on vec(rho) in the basis |0><0|, |0><1|, |1><0|, |1><1|"""
    if np.ndim(m.pop_survival) != 0:
        raise UsageError("transfer_matrix needs a map at a single time")
    gamma = float(m.pop_survival)
    decay = 1.0 - gamma
    q = m.p_eq
    c = complex(m.coherence_factor)
    t = np.zeros((4, 4), dtype=np.complex128)
    t[0, 0] = 1.0 - q * decay
    t[0, 3] = (1.0 - q) * decay
    t[3, 0] = q * decay
    t[3, 3] = gamma + q * decay
    t[1, 1] = np.conj(c)
    t[2, 2] = c
    return t
