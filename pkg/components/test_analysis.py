import math

import numpy as np
import pytest
from numpy.testing import assert_allclose
from scipy.optimize import bisect

from components.analysis import (
    SERIES_COLUMNS,
    CrossingFlag,
    SweepConfig,
    b_vs_c_trace,
    bell_ad_closed_form,
    c_threshold,
    entanglement_threshold,
    esd_time,
    evolve_grid,
    time_sweep,
    violation_threshold,
    vsd_purity_curve,
    vsd_time,
    vsd_time_adiabatic_closed_form,
    vsd_time_adiabatic_squared_one_minus_r,
)
from components.errors import AnalysisError, UsageError
from components.measures import concurrence_witness
from components.noise import NoiseMode, NoiseParams, relaxation_rates
from components.qstate import EWLFamily, EWLParams, XState, ewl_state, to_dense, validate

HALF = 1.0 / np.sqrt(2.0)


def config(noise, mode, r=0.91, family=EWLFamily.PHI, a=HALF, **kwargs) -> SweepConfig:
    return SweepConfig(EWLParams(family, r, a), noise, mode, **kwargs)


def test_thresholds():
    assert entanglement_threshold(HALF) == pytest.approx(1.0 / 3.0)
    assert violation_threshold(HALF) == pytest.approx(HALF)
    assert entanglement_threshold(0.0) == 1.0


@pytest.mark.parametrize("a2", [0.5, 0.3, 0.1])
@pytest.mark.parametrize("family", list(EWLFamily))
def test_concurrence_dies_at_entanglement_threshold(a2, family):
    a = math.sqrt(a2)

    def witness(r):
        return float(concurrence_witness(ewl_state(EWLParams(family, r, a))))

    root = bisect(witness, 0.0, 1.0, xtol=1e-12)
    assert root == pytest.approx(entanglement_threshold(a), abs=1e-9)


def test_closed_form_bell_values():
    assert bell_ad_closed_form(0.0, 0.9, HALF, 0.02) == pytest.approx(1.8 * math.sqrt(2.0))
    assert bell_ad_closed_form(1e9, 0.9, HALF, 0.02) == pytest.approx(1.8, rel=1e-6)
    with pytest.raises(UsageError):
        bell_ad_closed_form(0.0, 0.9, HALF, -0.02)


def test_closed_form_vsd_time():
    result = vsd_time_adiabatic_closed_form(0.9, HALF, 0.02)
    assert result.found
    assert result.omega_t == pytest.approx(2500 * math.sqrt(0.62 / 0.19))
    assert result.omega_t == pytest.approx(4516, abs=1)
    assert vsd_time_adiabatic_squared_one_minus_r(0.9, HALF, 0.02) == pytest.approx(2500 * math.sqrt(80), rel=1e-12)


def test_closed_form_vsd_sentinels():
    assert vsd_time_adiabatic_closed_form(0.7, HALF, 0.02).flag is CrossingFlag.NO_INITIAL_VIOLATION
    assert vsd_time_adiabatic_closed_form(1.0, HALF, 0.02).flag is CrossingFlag.ASYMPTOTIC
    assert vsd_time_adiabatic_closed_form(0.9, HALF, 0.0).flag is CrossingFlag.ASYMPTOTIC
    assert vsd_time_adiabatic_squared_one_minus_r(1.0, HALF, 0.02) is None


def test_sweep_config_validation(experimental_noise):
    with pytest.raises(UsageError):
        config(experimental_noise, NoiseMode.BOTH, n_steps=1)
    with pytest.raises(UsageError):
        config(experimental_noise, NoiseMode.BOTH, t_max=0.0)


def test_time_sweep_schema(experimental_noise):
    series = time_sweep(config(experimental_noise, NoiseMode.BOTH, t_max=5000, n_steps=11))
    frame = series.to_frame()
    assert list(frame.columns) == SERIES_COLUMNS
    assert len(frame) == 11 and len(series.records()) == 11
    assert frame["omega_t"].iloc[-1] == 5000
    assert_allclose(frame[["p11", "p22", "p33", "p44"]].sum(axis=1), 1.0, atol=1e-12)


def test_adiabatic_sweep_matches_closed_form(rng):
    for _ in range(20):
        r = rng.uniform(0.0, 1.0)
        a = math.sqrt(rng.uniform(0.0, 1.0)) * np.exp(1j * rng.uniform(0, 2 * np.pi))
        ratio = rng.uniform(0.0, 0.05)
        noise = NoiseParams.from_ratio(ratio)
        cfg = config(noise, NoiseMode.ADIABATIC, r=r, a=a, t_max=1e4, n_steps=10_000)
        series = time_sweep(cfg)
        assert_allclose(series.b, bell_ad_closed_form(series.omega_t, r, a, ratio), rtol=0, atol=1e-12)


def test_adiabatic_families_coincide(experimental_noise):
    phi = time_sweep(config(experimental_noise, NoiseMode.ADIABATIC, family=EWLFamily.PHI, t_max=1e4, n_steps=1001))
    psi = time_sweep(config(experimental_noise, NoiseMode.ADIABATIC, family=EWLFamily.PSI, t_max=1e4, n_steps=1001))
    assert_allclose(phi.b, psi.b, rtol=0, atol=1e-12)


def test_combined_families_differ_at_second_order(experimental_noise):
    phi = time_sweep(config(experimental_noise, NoiseMode.BOTH, family=EWLFamily.PHI, t_max=5000, n_steps=501))
    psi = time_sweep(config(experimental_noise, NoiseMode.BOTH, family=EWLFamily.PSI, t_max=5000, n_steps=501))
    t1, _, _ = relaxation_rates(experimental_noise)
    relaxed = 1.0 - np.exp(-phi.omega_t / experimental_noise.omega / t1)
    inside = (phi.b > 2.0) & (psi.b > 2.0)
    gap = psi.b - phi.b

    assert inside.sum() > 100
    # the Psi state relaxes through |11>, which keeps <sigma_z sigma_z> larger by 2 eps^2
    assert np.all(gap[inside] >= -1e-12)
    assert np.all(gap[inside] <= 4 * relaxed[inside] ** 2 * (1 + relaxed[inside]) + 1e-7)
    early = inside & (phi.omega_t <= 2000)
    assert np.all(gap[early] <= 2e-3)


def test_vsd_experimental_point(experimental_noise):
    result = vsd_time(config(experimental_noise, NoiseMode.BOTH))
    assert result.flag is CrossingFlag.FOUND
    assert result.omega_t == pytest.approx(3350, rel=0.03)


def test_vsd_adiabatic_matches_closed_form(experimental_noise):
    result = vsd_time(config(experimental_noise, NoiseMode.ADIABATIC, r=0.9))
    expected = vsd_time_adiabatic_closed_form(0.9, HALF, 0.02).omega_t
    assert result.omega_t == pytest.approx(expected, rel=1e-6)


def test_vsd_below_violation_threshold(experimental_noise):
    result = vsd_time(config(experimental_noise, NoiseMode.BOTH, r=0.3))
    assert result.omega_t is None
    assert result.flag is CrossingFlag.NO_INITIAL_VIOLATION


def test_vsd_pure_state_adiabatic_asymptote(experimental_noise):
    cfg = config(experimental_noise, NoiseMode.ADIABATIC, r=1.0, t_max=1e6)
    assert vsd_time(cfg).flag is CrossingFlag.ASYMPTOTIC
    excess = time_sweep(cfg.replace(n_steps=2)).b[-1] - 2.0
    assert 0.0 < excess < 1e-2


def test_vsd_without_quantum_noise_is_adiabatic():
    quiet = NoiseParams(omega=1e11, sigma=0.02e11, sf=0.0, temperature=0.04)
    assert vsd_time(config(quiet, NoiseMode.BOTH, r=1.0)).flag is CrossingFlag.ASYMPTOTIC


def test_vsd_exceeds_horizon(experimental_noise):
    result = vsd_time(config(experimental_noise, NoiseMode.QUANTUM, t_max=100))
    assert result.flag is CrossingFlag.EXCEEDS_HORIZON


@pytest.mark.parametrize("r", [0.75, 0.85, 0.95])
def test_adiabatic_noise_dominates_at_low_purity(experimental_noise, r):
    adiabatic = vsd_time(config(experimental_noise, NoiseMode.ADIABATIC, r=r, t_max=1e5))
    quantum = vsd_time(config(experimental_noise, NoiseMode.QUANTUM, r=r, t_max=1e5))
    assert adiabatic.found and quantum.found
    assert adiabatic.omega_t < quantum.omega_t


def test_quantum_noise_dominates_near_purity_one(experimental_noise):
    adiabatic = vsd_time(config(experimental_noise, NoiseMode.ADIABATIC, r=0.9999, t_max=1e6))
    quantum = vsd_time(config(experimental_noise, NoiseMode.QUANTUM, r=0.9999, t_max=1e5))
    assert quantum.omega_t < adiabatic.omega_t


@pytest.mark.parametrize("family, expected", [(EWLFamily.PHI, 0.43), (EWLFamily.PSI, 0.38)])
def test_concurrence_threshold_of_bell_states(experimental_noise, family, expected):
    result = c_threshold(config(experimental_noise, NoiseMode.BOTH, r=1.0, family=family))
    assert result.flag is CrossingFlag.FOUND
    assert result.c == pytest.approx(expected, abs=0.02)


def test_concurrence_threshold_asymptotic(experimental_noise):
    result = c_threshold(config(experimental_noise, NoiseMode.ADIABATIC, r=1.0, t_max=1e4))
    assert result.flag is CrossingFlag.ASYMPTOTIC
    assert result.omega_t == 1e4


def test_concurrence_threshold_needs_violation(experimental_noise):
    with pytest.raises(AnalysisError):
        c_threshold(config(experimental_noise, NoiseMode.BOTH, r=0.5))


def test_b_vs_c_trace(experimental_noise):
    cfg = config(experimental_noise, NoiseMode.BOTH, r=1.0, t_max=8000, n_steps=801)
    trace = b_vs_c_trace(cfg, [1000, 2000, 3000, 4000, 5000])
    first = trace.points[0]
    assert (first.c, first.b) == pytest.approx((1.0, 2.0 * math.sqrt(2.0)))
    c = np.array([p.c for p in trace.points])
    b = np.array([p.b for p in trace.points])
    assert np.all(np.diff(c) < 0) and np.all(np.diff(b) < 0)
    assert [m.omega_t for m in trace.markers] == [1000, 2000, 3000, 4000, 5000]


def test_esd_outlives_vsd(experimental_noise):
    cfg = config(experimental_noise, NoiseMode.BOTH, t_max=1e5)
    death = esd_time(cfg)
    assert death.found
    assert death.omega_t > vsd_time(cfg).omega_t


def test_esd_flags(experimental_noise):
    assert esd_time(config(experimental_noise, NoiseMode.ADIABATIC, r=1.0)).flag is CrossingFlag.EXCEEDS_HORIZON
    assert esd_time(config(experimental_noise, NoiseMode.BOTH, r=0.2)).flag is CrossingFlag.NO_INITIAL_VIOLATION


def test_purity_curve(experimental_noise):
    cfg = config(experimental_noise, NoiseMode.ADIABATIC, t_max=1e5)
    curve = vsd_purity_curve(cfg, [0.7, 0.9, 0.99995])
    assert list(curve["flag"]) == ["no-initial-violation", "found", "asymptotic"]
    assert math.isnan(curve["omega_t_vsd"][0]) and math.isnan(curve["omega_t_vsd"][2])
    assert curve["omega_t_vsd"][1] == pytest.approx(4516, abs=1)


def scalar_states(x: XState):
    for k in range(len(x.p11)):
        yield XState(x.p11[k], x.p22[k], x.p33[k], x.p44[k], x.c14[k], x.c23[k])


@pytest.mark.parametrize("mode", list(NoiseMode))
@pytest.mark.parametrize("r, family", [(1.0, EWLFamily.PHI), (1.0, EWLFamily.PSI), (0.91, EWLFamily.PHI), (0.9, EWLFamily.PSI)])
def test_evolved_states_are_physical(experimental_noise, mode, r, family):
    cfg = config(experimental_noise, mode, r=r, family=family)
    for x in scalar_states(evolve_grid(cfg, np.linspace(0.0, 1e5, 60))):
        diagnostics = validate(to_dense(x).entries)
        assert diagnostics.trace_defect <= 1e-12
        assert diagnostics.hermiticity_defect <= 1e-12
        assert diagnostics.min_eigenvalue >= -1e-10


def test_vsd_adiabatic_matches_closed_form_randomly(rng):
    checked = 0
    while checked < 50:
        a = math.sqrt(rng.uniform(0.2, 0.8)) * np.exp(1j * rng.uniform(0, 2 * np.pi))
        r = rng.uniform(0.0, 0.98)
        if r <= violation_threshold(a) + 1e-3:
            continue
        ratio = rng.uniform(0.01, 0.05)
        expected = vsd_time_adiabatic_closed_form(r, a, ratio)
        result = vsd_time(config(NoiseParams.from_ratio(ratio), NoiseMode.ADIABATIC, r=r, a=a, t_max=1e5))
        assert result.flag is CrossingFlag.FOUND and expected.found
        assert result.omega_t == pytest.approx(expected.omega_t, abs=2e-4)
        checked += 1


def test_static_state_is_asymptotic_everywhere():
    still = NoiseParams(omega=1e11, sigma=0.0, sf=2e6, temperature=0.04)
    cfg = config(still, NoiseMode.ADIABATIC, r=0.95)
    assert cfg.static
    assert vsd_time(cfg).flag is CrossingFlag.ASYMPTOTIC
    assert vsd_time_adiabatic_closed_form(0.95, HALF, 0.0).flag is CrossingFlag.ASYMPTOTIC
    assert esd_time(cfg).flag is CrossingFlag.ASYMPTOTIC

    quiet = NoiseParams(omega=1e11, sigma=0.02e11, sf=0.0, temperature=0.04)
    assert config(quiet, NoiseMode.QUANTUM, r=0.95).static
    assert vsd_time(config(quiet, NoiseMode.QUANTUM, r=0.95)).flag is CrossingFlag.ASYMPTOTIC
    assert not config(quiet, NoiseMode.BOTH, r=0.95).static
