"""
Command services: parameter resolution and the tables each command emits
"""
import logging
import math
import os
from typing import Dict, List, Optional, Tuple

import numpy as np
import pandas as pd
from dotenv import dotenv_values

from components.analysis import (
    SweepConfig,
    b_vs_c_trace,
    c_threshold,
    esd_time,
    time_sweep,
    vsd_purity_curve,
    vsd_time,
    vsd_time_adiabatic_closed_form,
    vsd_time_adiabatic_squared_one_minus_r,
)
from components.errors import UsageError
from components.noise import NoiseMode, NoiseParams, adiabatic_defocus, mc_defocus_oracle
from components.qstate import EWLFamily, EWLParams
from config.settings import FIGURE_CONFIG, NOISE_CONFIG, ORACLE_CONFIG, STATE_CONFIG, SWEEP_CONFIG

logger = logging.getLogger(__name__)

PARAMETER_TYPES = {
    "family": str,
    "r": float,
    "a2": float,
    "phase": float,
    "omega": float,
    "sigma": float,
    "sigma_ratio": float,
    "a1f": float,
    "gamma_m": float,
    "gamma_M": float,
    "sf": float,
    "temperature": float,
    "mode": str,
    "t_max": float,
    "n_steps": int,
    "scan_resolution": int,
    "seed": int,
    "n_samples": int,
}

CHOICES = {
    "family": [f.value for f in EWLFamily],
    "mode": [m.value for m in NoiseMode],
}

# ways of fixing the low-frequency amplitude; at most one per source
AMPLITUDE_KEYS = ("sigma", "sigma_ratio", "a1f")


def load_config_file(path: str) -> Dict[str, str]:
    """Read a flat key=value file; keys mirror the flag names

    Parsed with python-dotenv, which leaves os.environ alone; ${VAR}
    interpolation is off.
    """
    if not os.path.isfile(path):
        raise UsageError(f"config file not found: {path}")
    values = {}
    for raw_key, value in dotenv_values(path, interpolate=False).items():
        key = raw_key.lstrip("-").replace("-", "_")
        if key not in PARAMETER_TYPES:
            raise UsageError(f"{path}: unknown key {key!r}")
        if value is None or not value.strip():
            raise UsageError(f"{path}: {key} has no value")
        values[key] = value.strip()
    return values


def _convert(key: str, raw) -> object:
    try:
        value = PARAMETER_TYPES[key](raw)
    except (TypeError, ValueError):
        raise UsageError(f"{key}: cannot parse {raw!r} as {PARAMETER_TYPES[key].__name__}")
    if key in CHOICES and value not in CHOICES[key]:
        raise UsageError(f"{key}: {value!r} is not one of {CHOICES[key]}")
    if isinstance(value, float) and not math.isfinite(value):
        raise UsageError(f"{key}: value must be finite")
    return value


def _amplitude_source(values: Dict, origin: str) -> Optional[str]:
    given = [k for k in AMPLITUDE_KEYS if values.get(k) is not None]
    if len(given) > 1:
        flags = " and ".join("--" + k.replace("_", "-") for k in given)
        raise UsageError(f"conflicting {origin}: {flags}")
    return given[0] if given else None


def resolve_parameters(file_values: Dict, flag_values: Dict, defaults: Dict) -> Dict:
    """Merge defaults < config file < explicit flags into typed parameters"""
    flags = {k: v for k, v in flag_values.items() if v is not None}
    merged = dict(defaults)
    for layer, origin in ((file_values, "config keys"), (flags, "flags")):
        # an amplitude given in a later layer replaces whichever one came before
        if _amplitude_source(layer, origin) is not None:
            for key in AMPLITUDE_KEYS:
                merged.pop(key, None)
        merged.update(layer)
    return {k: _convert(k, v) for k, v in merged.items() if k in PARAMETER_TYPES}


def sweep_defaults(t_max: float) -> Dict:
    return {
        "family": STATE_CONFIG["family"],
        "r": STATE_CONFIG["r"],
        "a2": STATE_CONFIG["a2"],
        "phase": STATE_CONFIG["phase"],
        "omega": NOISE_CONFIG["omega"],
        "sigma_ratio": NOISE_CONFIG["sigma_ratio"],
        "sf": NOISE_CONFIG["sf"],
        "temperature": NOISE_CONFIG["temperature"],
        "mode": NoiseMode.BOTH.value,
        "t_max": t_max,
        "n_steps": SWEEP_CONFIG["n_steps"],
        "scan_resolution": SWEEP_CONFIG["scan_resolution"],
    }


def build_noise(params: Dict) -> NoiseParams:
    omega = params["omega"]
    if params.get("a1f") is not None:
        if params.get("gamma_m") is None or params.get("gamma_M") is None:
            raise UsageError("--a1f needs --gamma-m and --gamma-M")
        return NoiseParams.from_spectrum(params["a1f"], params["gamma_m"], params["gamma_M"],
                                         omega, params["sf"], params["temperature"])
    if params.get("sigma") is not None:
        sigma = params["sigma"]
    else:
        sigma = params["sigma_ratio"] * omega
    return NoiseParams(omega=omega, sigma=sigma, sf=params["sf"], temperature=params["temperature"],
                       gamma_m=params.get("gamma_m"), gamma_M=params.get("gamma_M"))


def build_sweep_config(params: Dict) -> SweepConfig:
    ewl = EWLParams.from_a2(EWLFamily(params["family"]), params["r"], params["a2"], params["phase"])
    return SweepConfig(
        ewl=ewl,
        noise=build_noise(params),
        mode=NoiseMode(params["mode"]),
        t_max=params["t_max"],
        n_steps=params["n_steps"],
        scan_resolution=params["scan_resolution"],
    )


def figure_noise() -> NoiseParams:
    return NoiseParams.from_ratio(NOISE_CONFIG["sigma_ratio"])


def fig1_frame(panel: str) -> Tuple[pd.DataFrame, Dict]:
    """B over (Omega t, |a|^2) at r = 0.9 (panel a) or (Omega t, r) at a = 1/sqrt(2) (panel b)"""
    settings = FIGURE_CONFIG["fig1"]
    if panel not in ("a", "b"):
        raise UsageError(f"panel must be 'a' or 'b', got {panel!r}")
    values = np.linspace(0.0, 1.0, settings["n_params"])
    noise = figure_noise()

    frames = []
    for value in values:
        if panel == "a":
            ewl = EWLParams.from_a2(EWLFamily.PHI, settings["r"], float(value))
        else:
            ewl = EWLParams.from_a2(EWLFamily.PHI, float(value), settings["a2"])
        cfg = SweepConfig(ewl, noise, NoiseMode.ADIABATIC, t_max=settings["t_max"], n_steps=settings["n_steps"])
        series = time_sweep(cfg)
        frames.append(pd.DataFrame({"omega_t": series.omega_t, "param": float(value), "b": series.b}))

    parameters = {
        "panel": panel,
        "param": "a2" if panel == "a" else "r",
        "fixed": {"r": settings["r"]} if panel == "a" else {"a2": settings["a2"]},
        "sigma_ratio": NOISE_CONFIG["sigma_ratio"],
        "mode": NoiseMode.ADIABATIC.value,
        "t_max": settings["t_max"],
        "n_steps": settings["n_steps"],
        "n_params": settings["n_params"],
    }
    return pd.concat(frames, ignore_index=True), parameters


def fig2_frame(family: str = "phi", inset: bool = False) -> Tuple[pd.DataFrame, Dict]:
    """VSD time against purity for the three noise modes"""
    settings = FIGURE_CONFIG["fig2"]
    if inset:
        r_values = np.linspace(settings["inset_r_min"], settings["inset_r_max"], settings["n_points"])
        t_max = settings["inset_t_max"]
    else:
        r_values = np.linspace(settings["r_min"], settings["r_max"], settings["n_points"])
        t_max = settings["t_max"]
    noise = figure_noise()
    base_ewl = EWLParams.from_a2(EWLFamily(family), settings["marked_r"], 0.5)

    frames = []
    for mode in NoiseMode:
        cfg = SweepConfig(base_ewl, noise, mode, t_max=t_max)
        curve = vsd_purity_curve(cfg, r_values)
        curve["point"] = ""
        marked = vsd_purity_curve(cfg, [settings["marked_r"]])
        marked["point"] = "experimental"
        frame = pd.concat([curve, marked], ignore_index=True)
        frame.insert(0, "mode", mode.value)
        frame.insert(1, "family", family)
        frames.append(frame)
        found = marked.iloc[0]
        logger.info(f"VSD curve {mode.value}: Omega t_VSD at r={settings['marked_r']} is {found['omega_t_vsd']}")

    parameters = {
        "family": family,
        "inset": inset,
        "a2": 0.5,
        "r_grid": [float(r_values[0]), float(r_values[-1]), len(r_values)],
        "marked_r": settings["marked_r"],
        "omega": noise.omega,
        "sigma": noise.sigma,
        "sf": noise.sf,
        "temperature": noise.temperature,
        "t_max": t_max,
        "adiabatic_r_cap": SWEEP_CONFIG["adiabatic_r_cap"],
    }
    return pd.concat(frames, ignore_index=True), parameters


def fig3_frame() -> Tuple[pd.DataFrame, Dict]:
    """Parametric (C, B) traces for the two Bell states under both noise channels"""
    settings = FIGURE_CONFIG["fig3"]
    noise = figure_noise()
    rows: List[Dict] = []
    for family in EWLFamily:
        ewl = EWLParams.from_a2(family, 1.0, 0.5)
        cfg = SweepConfig(ewl, noise, NoiseMode.BOTH, t_max=settings["t_max"], n_steps=settings["n_steps"])
        trace = b_vs_c_trace(cfg, settings["marker_times"])
        for point in trace.points:
            rows.append({"family": family.value, "kind": "trace", "label": "",
                         "omega_t": point.omega_t, "c": point.c, "b": point.b})
        for index, point in enumerate(trace.markers, start=1):
            rows.append({"family": family.value, "kind": "marker", "label": str(index),
                         "omega_t": point.omega_t, "c": point.c, "b": point.b})
        threshold = c_threshold(cfg.replace(t_max=settings["threshold_t_max"]))
        rows.append({"family": family.value, "kind": "threshold", "label": threshold.flag.value,
                     "omega_t": threshold.omega_t, "c": threshold.c, "b": 2.0})
        logger.info(f"B-C trace {family.value}: C at B=2 is {threshold.c:.4f} (Omega t = {threshold.omega_t:.2f})")

    parameters = {
        "r": 1.0,
        "a2": 0.5,
        "mode": NoiseMode.BOTH.value,
        "omega": noise.omega,
        "sigma": noise.sigma,
        "sf": noise.sf,
        "temperature": noise.temperature,
        "t_max": settings["t_max"],
        "n_steps": settings["n_steps"],
        "marker_times": settings["marker_times"],
    }
    frame = pd.DataFrame(rows, columns=["family", "kind", "label", "omega_t", "c", "b"])
    return frame, parameters


def vsd_record(cfg: SweepConfig) -> Dict:
    """VSD and ESD crossings, plus both adiabatic closed forms in adiabatic mode"""
    crossing = vsd_time(cfg)
    death = esd_time(cfg)
    closed_form = None
    if cfg.mode is NoiseMode.ADIABATIC:
        sigma_over_omega = cfg.noise.sigma_over_omega
        root = vsd_time_adiabatic_closed_form(cfg.ewl.r, cfg.ewl.a, sigma_over_omega)
        closed_form = {
            "one_minus_r_squared": root.omega_t,
            "squared_one_minus_r": vsd_time_adiabatic_squared_one_minus_r(cfg.ewl.r, cfg.ewl.a, sigma_over_omega),
        }
    return {
        "omega_t_vsd": crossing.omega_t,
        "flag": crossing.flag.value,
        "closed_form_value": closed_form,
        "omega_t_esd": death.omega_t,
        "esd_flag": death.flag.value,
    }


def vsd_frame(record: Dict) -> pd.DataFrame:
    closed = record["closed_form_value"] or {}
    row = {
        "omega_t_vsd": record["omega_t_vsd"],
        "flag": record["flag"],
        "closed_form_one_minus_r_squared": closed.get("one_minus_r_squared"),
        "closed_form_squared_one_minus_r": closed.get("squared_one_minus_r"),
        "omega_t_esd": record["omega_t_esd"],
        "esd_flag": record["esd_flag"],
    }
    frame = pd.DataFrame([row])
    for column in ("omega_t_vsd", "closed_form_one_minus_r_squared", "closed_form_squared_one_minus_r", "omega_t_esd"):
        frame[column] = frame[column].astype(float)
    return frame


def defocus_check_frame(noise: NoiseParams, omega_ts: List[float], n_samples: int,
                        seed: int) -> Tuple[pd.DataFrame, Dict]:
    """Monte-Carlo static-path average against the closed-form defocusing factor"""
    rows = []
    for omega_t in omega_ts:
        t = omega_t / noise.omega
        exact = adiabatic_defocus(t, noise)
        estimate, std_error = mc_defocus_oracle(t, noise, n_samples, seed)
        deviation = abs(estimate - exact)
        z_score = 0.0 if std_error == 0 else deviation / std_error
        rows.append({
            "omega_t": omega_t,
            "d_re": exact.real, "d_im": exact.imag,
            "mc_re": estimate.real, "mc_im": estimate.imag,
            "std_error": std_error,
            "z_score": z_score,
        })
    rng = {"algorithm": ORACLE_CONFIG["rng_algorithm"], "seed": seed, "n_samples": n_samples}
    return pd.DataFrame(rows), rng

