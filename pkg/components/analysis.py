"""
Time sweeps, violation sudden death (VSD) times and B-versus-C traces

Time is always the dimensionless Omega t. Crossings are located by a
uniform scan for the first sign change followed by bisection inside the
bracketing grid cell.
"""
import dataclasses
import logging
from dataclasses import dataclass, field
from enum import Enum
from typing import Callable, Dict, List, Optional, Sequence, Tuple

import numpy as np
import pandas as pd
from scipy.optimize import bisect

from components.errors import AnalysisError, UsageError
from components.evolve import TwoQubitMap, apply_x
from components.measures import bell_max_x, concurrence_witness, concurrence_x
from components.noise import NoiseMode, NoiseParams
from components.qstate import EWLParams, XState, ewl_state
from config.settings import FIGURE_CONFIG, SWEEP_CONFIG

logger = logging.getLogger(__name__)

CLASSICAL_BOUND = 2.0


class CrossingFlag(Enum):
    FOUND = "found"
    NO_INITIAL_VIOLATION = "no-initial-violation"
    ASYMPTOTIC = "asymptotic"
    EXCEEDS_HORIZON = "exceeds-horizon"


@dataclass(frozen=True)
class CrossingResult:
    omega_t: Optional[float]
    flag: CrossingFlag

    @property
    def found(self) -> bool:
        return self.flag is CrossingFlag.FOUND


@dataclass(frozen=True)
class SweepConfig:
    ewl: EWLParams
    noise: NoiseParams
    mode: NoiseMode
    t_max: float = SWEEP_CONFIG["t_max"]
    n_steps: int = SWEEP_CONFIG["n_steps"]
    scan_resolution: int = SWEEP_CONFIG["scan_resolution"]

    def __post_init__(self):
        if not self.t_max > 0:
            raise UsageError(f"t_max must be positive, got {self.t_max}")
        if self.n_steps < 2:
            raise UsageError(f"n_steps must be at least 2, got {self.n_steps}")
        if self.scan_resolution < 100:
            raise UsageError(f"scan_resolution must be at least 100, got {self.scan_resolution}")

    def replace(self, **changes) -> "SweepConfig":
        return dataclasses.replace(self, **changes)

    def replace_ewl(self, **changes) -> "SweepConfig":
        return dataclasses.replace(self, ewl=dataclasses.replace(self.ewl, **changes))

    @property
    def effectively_adiabatic(self) -> bool:
        return self.mode is NoiseMode.ADIABATIC or self.noise.sf == 0

    @property
    def static(self) -> bool:
        """No channel of the selected mode acts, so the state never changes"""
        no_adiabatic = self.mode is NoiseMode.QUANTUM or self.noise.sigma == 0
        return self.effectively_adiabatic and no_adiabatic

    def to_dict(self) -> Dict:
        return {
            "family": self.ewl.family.value,
            "r": self.ewl.r,
            "a2": abs(self.ewl.a) ** 2,
            "phase": self.ewl.phase,
            "omega": self.noise.omega,
            "sigma": self.noise.sigma,
            "sf": self.noise.sf,
            "temperature": self.noise.temperature,
            "mode": self.mode.value,
            "t_max": self.t_max,
            "n_steps": self.n_steps,
            "scan_resolution": self.scan_resolution,
        }


SERIES_COLUMNS = ["omega_t", "b", "b1", "b2", "u1", "u2", "u3", "c",
                  "p11", "p22", "p33", "p44", "c14_abs", "c23_abs"]


@dataclass
class SweepSeries:
    """Tabulated sweep; every field is an array over the time grid"""
    omega_t: np.ndarray
    b: np.ndarray
    b1: np.ndarray
    b2: np.ndarray
    u1: np.ndarray
    u2: np.ndarray
    u3: np.ndarray
    c: np.ndarray
    populations: np.ndarray        # shape (n, 4): p11, p22, p33, p44
    c14_abs: np.ndarray
    c23_abs: np.ndarray

    def __post_init__(self):
        if np.any(np.diff(self.omega_t) <= 0):
            raise UsageError("sweep times must be strictly increasing")

    def __len__(self):
        return len(self.omega_t)

    def to_frame(self) -> pd.DataFrame:
        frame = pd.DataFrame({
            "omega_t": self.omega_t,
            "b": self.b, "b1": self.b1, "b2": self.b2,
            "u1": self.u1, "u2": self.u2, "u3": self.u3,
            "c": self.c,
        })
        for k, name in enumerate(["p11", "p22", "p33", "p44"]):
            frame[name] = self.populations[:, k]
        frame["c14_abs"] = self.c14_abs
        frame["c23_abs"] = self.c23_abs
        return frame[SERIES_COLUMNS]

    def records(self) -> List[Dict]:
        out = []
        for k in range(len(self)):
            out.append({
                "omega_t": float(self.omega_t[k]),
                "b": float(self.b[k]), "b1": float(self.b1[k]), "b2": float(self.b2[k]),
                "u1": float(self.u1[k]), "u2": float(self.u2[k]), "u3": float(self.u3[k]),
                "c": float(self.c[k]),
                "populations": [float(p) for p in self.populations[k]],
                "c14_abs": float(self.c14_abs[k]),
                "c23_abs": float(self.c23_abs[k]),
            })
        return out


def _ab(a: complex) -> float:
    modulus = abs(a)
    if modulus > 1.0 + 1e-15:
        raise UsageError(f"|a| must lie in [0, 1], got {modulus}")
    return modulus * np.sqrt(max(0.0, 1.0 - modulus ** 2))


def entanglement_threshold(a: complex) -> float:
    """r* = 1 / (1 + 4|ab|): EWL states are entangled for r > r*"""
    return 1.0 / (1.0 + 4.0 * _ab(a))


def violation_threshold(a: complex) -> float:
    """Purity above which EWL states violate CHSH at t = 0"""
    return 1.0 / np.sqrt(1.0 + 4.0 * _ab(a) ** 2)


def bell_ad_closed_form(omega_t, r: float, a: complex, sigma_over_omega: float):
    """B under adiabatic noise alone, identical for both EWL families"""
    if sigma_over_omega < 0:
        raise UsageError("sigma_over_omega must be nonnegative")
    ab = _ab(a)
    omega_t = np.asarray(omega_t, dtype=float)
    lorentz = 1.0 + sigma_over_omega ** 4 * omega_t ** 2
    value = np.asarray(2.0 * r * np.sqrt(1.0 + 4.0 * ab ** 2 / lorentz))
    return float(value) if value.ndim == 0 else value


def vsd_time_adiabatic_closed_form(r: float, a: complex, sigma_over_omega: float) -> CrossingResult:
    """Omega t where the adiabatic B reaches 2, solved exactly

    Omega t = (Omega/Sigma)^2 sqrt(4|ab|^2 r^2 / (1 - r^2) - 1). The variant
    with (1 - r)^2 in place of (1 - r^2) does not solve the adiabatic
    B(t) = 2; see vsd_time_adiabatic_squared_one_minus_r.
    """
    if not 0.0 <= r <= 1.0:
        raise UsageError(f"r must lie in [0, 1], got {r}")
    if r == 1.0:
        return CrossingResult(None, CrossingFlag.ASYMPTOTIC)
    radicand = 4.0 * _ab(a) ** 2 * r ** 2 / (1.0 - r ** 2) - 1.0
    if radicand <= 0:
        return CrossingResult(None, CrossingFlag.NO_INITIAL_VIOLATION)
    if sigma_over_omega == 0:
        return CrossingResult(None, CrossingFlag.ASYMPTOTIC)
    return CrossingResult(float(np.sqrt(radicand) / sigma_over_omega ** 2), CrossingFlag.FOUND)


def vsd_time_adiabatic_squared_one_minus_r(r: float, a: complex, sigma_over_omega: float) -> Optional[float]:
    """Closed form with (1 - r)^2 in place of (1 - r^2), reported beside the exact root"""
    if r >= 1.0 or sigma_over_omega <= 0:
        return None
    radicand = 4.0 * _ab(a) ** 2 * r ** 2 / (1.0 - r) ** 2 - 1.0
    if radicand <= 0:
        return None
    return float(np.sqrt(radicand) / sigma_over_omega ** 2)


def evolve_grid(cfg: SweepConfig, omega_t) -> XState:
    """Evolved X state at every Omega t of the grid (array-valued fields)"""
    t = np.asarray(omega_t, dtype=float) / cfg.noise.omega
    maps = TwoQubitMap.identical(t, cfg.noise, cfg.mode)
    return apply_x(maps, ewl_state(cfg.ewl))


def time_sweep(cfg: SweepConfig) -> SweepSeries:
    grid = np.linspace(0.0, cfg.t_max, cfg.n_steps)
    x = evolve_grid(cfg, grid)
    bell = bell_max_x(x)
    populations = np.column_stack([np.broadcast_to(p, grid.shape) for p in x.populations])
    logger.debug(f"Sweep {cfg.mode.value} r={cfg.ewl.r}: {cfg.n_steps} points up to Omega t={cfg.t_max}")
    return SweepSeries(
        omega_t=grid,
        b=bell.b, b1=bell.b1, b2=bell.b2,
        u1=bell.u1, u2=bell.u2, u3=bell.u3,
        c=concurrence_x(x),
        populations=populations,
        c14_abs=np.abs(x.c14),
        c23_abs=np.abs(x.c23),
    )


def _first_crossing(f: Callable[[np.ndarray], np.ndarray], t_max: float,
                    scan_resolution: int) -> Tuple[Optional[float], bool]:
    """(first root of f on [0, t_max] or None, f(0) > 0)"""
    grid = np.linspace(0.0, t_max, scan_resolution)
    values = f(grid)
    if values[0] <= 0:
        return None, False
    below = np.nonzero(values <= 0)[0]
    if below.size == 0:
        return None, True
    k = int(below[0])
    if values[k] == 0:
        return float(grid[k]), True
    xtol = SWEEP_CONFIG["bisection_xtol_fraction"] * t_max
    root = bisect(lambda s: float(f(np.atleast_1d(s))[0]), grid[k - 1], grid[k], xtol=xtol)
    return float(root), True


def vsd_time(cfg: SweepConfig) -> CrossingResult:
    """First Omega t where B falls to the classical bound 2"""
    def excess(omega_t):
        return bell_max_x(evolve_grid(cfg, omega_t)).b - CLASSICAL_BOUND

    root, violates = _first_crossing(excess, cfg.t_max, cfg.scan_resolution)
    if not violates:
        return CrossingResult(None, CrossingFlag.NO_INITIAL_VIOLATION)
    if root is None:
        if cfg.static or (cfg.effectively_adiabatic and cfg.ewl.r == 1.0):
            return CrossingResult(None, CrossingFlag.ASYMPTOTIC)
        return CrossingResult(None, CrossingFlag.EXCEEDS_HORIZON)
    logger.debug(f"VSD {cfg.mode.value} r={cfg.ewl.r}: Omega t = {root:.6f}")
    return CrossingResult(root, CrossingFlag.FOUND)


def esd_time(cfg: SweepConfig) -> CrossingResult:
    """First Omega t where the concurrence vanishes (entanglement sudden death)"""
    def witness(omega_t):
        return concurrence_witness(evolve_grid(cfg, omega_t))

    root, entangled = _first_crossing(witness, cfg.t_max, cfg.scan_resolution)
    if not entangled:
        return CrossingResult(None, CrossingFlag.NO_INITIAL_VIOLATION)
    if root is None:
        if cfg.static:
            return CrossingResult(None, CrossingFlag.ASYMPTOTIC)
        return CrossingResult(None, CrossingFlag.EXCEEDS_HORIZON)
    return CrossingResult(root, CrossingFlag.FOUND)


@dataclass(frozen=True)
class ThresholdResult:
    c: float
    omega_t: float
    flag: CrossingFlag


def c_threshold(cfg: SweepConfig) -> ThresholdResult:
    """Concurrence at the VSD crossing (C at B = 2)"""
    crossing = vsd_time(cfg)
    if crossing.flag is CrossingFlag.FOUND:
        omega_t = crossing.omega_t
    elif crossing.flag is CrossingFlag.ASYMPTOTIC:
        omega_t = cfg.t_max
    else:
        raise AnalysisError(f"no violation region ({crossing.flag.value}) for r={cfg.ewl.r}, mode={cfg.mode.value}")
    c = float(concurrence_x(evolve_grid(cfg, np.atleast_1d(omega_t)))[0])
    return ThresholdResult(c, float(omega_t), crossing.flag)


@dataclass(frozen=True)
class TracePoint:
    c: float
    b: float
    omega_t: float


@dataclass
class BvsCTrace:
    points: List[TracePoint] = field(default_factory=list)
    markers: List[TracePoint] = field(default_factory=list)


def b_vs_c_trace(cfg: SweepConfig, marker_times: Sequence[float] = None) -> BvsCTrace:
    """(C, B) pairs of the sweep in time order, plus markers at fixed Omega t"""
    if marker_times is None:
        marker_times = FIGURE_CONFIG["fig3"]["marker_times"]
    series = time_sweep(cfg)
    points = [TracePoint(float(c), float(b), float(t)) for c, b, t in zip(series.c, series.b, series.omega_t)]

    markers = []
    if len(marker_times):
        stamps = np.asarray(marker_times, dtype=float)
        x = evolve_grid(cfg, stamps)
        bell = bell_max_x(x)
        c = concurrence_x(x)
        markers = [TracePoint(float(ci), float(bi), float(ti)) for ci, bi, ti in zip(c, bell.b, stamps)]
    return BvsCTrace(points, markers)


def vsd_purity_curve(cfg: SweepConfig, r_values: Sequence[float], r_cap: float = None) -> pd.DataFrame:
    """VSD time against purity r; adiabatic rows above r_cap are reported as asymptotic"""
    if r_cap is None:
        r_cap = SWEEP_CONFIG["adiabatic_r_cap"]
    rows = []
    for r in r_values:
        r = float(r)
        if cfg.mode is NoiseMode.ADIABATIC and r > r_cap:
            result = CrossingResult(None, CrossingFlag.ASYMPTOTIC)
        else:
            result = vsd_time(cfg.replace_ewl(r=r))
        omega_t = np.nan if result.omega_t is None else result.omega_t
        rows.append({"r": r, "omega_t_vsd": omega_t, "flag": result.flag.value})
    return pd.DataFrame(rows, columns=["r", "omega_t_vsd", "flag"])
