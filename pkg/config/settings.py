"""
Configuration settings for the two-qubit nonlocality decay simulator
"""
import math

# App Configuration
APP_CONFIG = {
    "name": "bell-decay",
    "version": "1.0.0",
    "basis": "11,01,10,00",  # index 1..4 of the two-qubit computational basis, qubit A first
}

# Noise Configuration (the experimental Josephson-qubit figures)
NOISE_CONFIG = {
    "omega": 1e11,            # rad/s
    "sigma_ratio": 0.02,      # Sigma / Omega
    "sf": 2e6,                # 1/s, high-frequency level S_f(Omega)
    "temperature": 0.04,      # K
    "theta": math.pi / 2,     # optimal working point, the only one supported
}

# Initial-state defaults
STATE_CONFIG = {
    "family": "phi",
    "r": 0.91,                # experimental purity
    "a2": 0.5,                # |a|^2
    "phase": 0.0,             # relative phase of b with respect to a
}

# Numerical tolerances
TOLERANCE_CONFIG = {
    "hermiticity": 1e-10,
    "trace": 1e-10,
    "min_eigenvalue": -1e-10,
    "x_structure": 1e-10,
    "block_positivity": 1e-12,
    "psd_clip": 1e-10,
    "jacobi_max_sweeps": 100,
    "jacobi_off_diagonal": 1e-15,     # relative to the Frobenius norm
    "concurrence_eigen_floor": 1e-13,
    "coherence_bound": 1e-12,
}

# Sweep / crossing Configuration
SWEEP_CONFIG = {
    "t_max": 1e4,             # in units of 1/Omega
    "n_steps": 101,
    "scan_resolution": 10000,
    "vsd_t_max": 1e5,
    "bisection_xtol_fraction": 1e-9,   # of t_max
    "adiabatic_r_cap": 0.9999,
}

# Figure reproduction Configuration
FIGURE_CONFIG = {
    "fig1": {
        "t_max": 1e4,
        "n_steps": 101,
        "r": 0.9,
        "a2": 0.5,
        "n_params": 51,       # grid over |a|^2 (panel a) or r (panel b)
    },
    "fig2": {
        "r_min": 0.72,
        "r_max": 0.999,
        "n_points": 200,
        "inset_r_min": 0.99,
        "inset_r_max": 0.9999,
        "marked_r": 0.91,
        "t_max": 1e5,
        "inset_t_max": 1e6,   # the adiabatic VSD time reaches ~1.8e5 at r = 0.9999
    },
    "fig3": {
        "t_max": 8000,
        "n_steps": 801,
        "marker_times": [1000, 2000, 3000, 4000, 5000],
        "threshold_t_max": 1e5,
    },
}

# Monte-Carlo defocusing oracle
ORACLE_CONFIG = {
    "rng_algorithm": "PCG64",
    "seed": 20110101,
    "n_samples": 1_000_000,
    "min_samples": 1000,
    "points": [0.0, 500.0, 1000.0, 2500.0, 5000.0],   # Omega t
}

# Output Configuration
OUTPUT_CONFIG = {
    "float_format": "%.12g",
    "line_terminator": "\n",
    "encoding": "utf-8",
    "manifest_suffix": ".manifest.json",
    "checksum_algorithm": "sha256",
}

# Logging Configuration
LOGGING_CONFIG = {
    "logger_name": "bell_decay",
    "level": "WARNING",
    "format": "%(asctime)s - %(levelname)s - %(message)s",
    "log_file": None,         # e.g. "logs/bell_decay.log"
}

# Process exit codes
EXIT_CODES = {
    "success": 0,
    "runtime_error": 1,
    "usage_error": 2,
}
