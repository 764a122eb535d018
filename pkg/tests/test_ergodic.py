"""Time averages, spread diagnostics, empirical components, AMS traces."""

import math

import numpy as np
import pytest

from wordsource import (
    CylinderFunction,
    DomainError,
    IIDSource,
    InducedMeasure,
    MarkovSource,
    MixtureSource,
    RangeError,
    ResourceError,
    WordFunction,
    ams_diagnostic,
    bellow_check,
    default_checkpoints,
    empirical_component,
    encode_stream,
    ergodicity_spread,
    time_average,
    variable_length_orbit,
    VariableLengthShiftSpec,
)

FAIR = IIDSource([0.5, 0.5])
CHAIN = MarkovSource([[0.9, 0.1], [0.5, 0.5]], [1, 0])
PERIODIC = MarkovSource([[0, 1], [1, 0]], [1, 0])
MIX = MixtureSource([0.5, 0.5], [IIDSource([0.5, 0.5]), IIDSource([0.9, 0.1])])
WF = WordFunction(2, 2, ((0,), (1, 0)))
IND_ZERO = CylinderFunction.indicator(2, [0])


def test_cylinder_function_validation():
    with pytest.raises(DomainError):
        CylinderFunction(alphabet_size=2, order=13, table=np.zeros(2**13))
    with pytest.raises(DomainError):
        CylinderFunction(alphabet_size=2, order=2, table=np.zeros(3))
    g = CylinderFunction.indicator(2, [1, 0])
    assert g.bound == 1.0
    assert list(g.values_along([1, 0, 0, 1, 0])) == [1.0, 0.0, 0.0, 1.0]


def test_time_average_periodic_sequence():
    w = np.tile([0, 1], 600)
    verdict = time_average(w, IND_ZERO, [10, 100, 1000])
    assert np.array_equal(verdict.partial_averages, [0.5, 0.5, 0.5])
    assert verdict.converged


def test_time_average_encoded_alternating_path():
    x = np.tile([0, 1], 700)
    y = encode_stream(WF, x).output
    verdict = time_average(y, IND_ZERO, [300, 600, 900, 1200])
    assert abs(verdict.final - 2 / 3) < 2e-3
    assert verdict.converged


def test_time_average_constant_function():
    g = CylinderFunction.constant(2, 3.25)
    w = FAIR.sample_path(500, seed=0).symbols
    verdict = time_average(w, g, [1, 10, 500])
    assert np.array_equal(verdict.partial_averages, [3.25, 3.25, 3.25])
    assert verdict.spread == 0.0


def test_time_average_window_overrun():
    g = CylinderFunction.indicator(2, [0, 1, 1])
    with pytest.raises(RangeError):
        time_average([0, 1, 0, 1], g, [3])


def test_ergodicity_spread_iid_small():
    sr = ergodicity_spread(FAIR, IND_ZERO, paths=100, horizon=10**4, seed=3)
    assert sr.spread < 0.02


def test_ergodicity_spread_mixture_bimodal():
    sr = ergodicity_spread(MIX, IND_ZERO, paths=100, horizon=10**4, seed=3)
    assert 0.15 < sr.spread < 0.25
    # finals cluster at the two component marginals
    near0 = np.abs(sr.finals - 0.5) < 0.05
    near1 = np.abs(sr.finals - 0.9) < 0.05
    assert np.all(near0 | near1)


def test_ergodicity_spread_deterministic_source():
    sr = ergodicity_spread(PERIODIC, IND_ZERO, paths=10, horizon=1000, seed=1)
    assert sr.spread == 0.0


def test_ams_diagnostic_periodic_vs_stationary():
    verdicts = ams_diagnostic(PERIODIC, [[0]], 1000)
    assert abs(verdicts[0].final - 0.5) <= 1e-3
    assert verdicts[0].converged
    # the per-step probabilities oscillate even though the Cesaro trace settles
    steps = [PERIODIC.shifted_cylinder_probability([0], i) for i in range(6)]
    assert steps == [1.0, 0.0, 1.0, 0.0, 1.0, 0.0]

    stationary = MarkovSource([[0.9, 0.1], [0.1, 0.9]], [0.5, 0.5])
    verdicts = ams_diagnostic(stationary, [[0]], 500)
    assert np.array_equal(verdicts[0].partial_averages,
                          np.full(verdicts[0].partial_averages.size, 0.5))


def test_ams_diagnostic_induced_ensemble():
    induced = InducedMeasure(FAIR, WF)
    verdict = ams_diagnostic(induced, [[0]], 1000, seed=11)[0]
    assert verdict.stderr2 is not None
    assert abs(verdict.final - 2 / 3) < 0.02 + 3 * verdict.stderr2


def test_ams_diagnostic_horizon_guard():
    with pytest.raises(DomainError):
        ams_diagnostic(FAIR, [[0]], 50)


def test_empirical_component_fair_coin_pairs():
    path = FAIR.sample_path(10**5 + 1, seed=5)
    emp = empirical_component(path.symbols, 2, 2, 10**5)
    for pattern in ([0, 0], [0, 1], [1, 0], [1, 1]):
        assert abs(emp.frequency(pattern) - 0.25) < 0.01


def test_empirical_component_mixture_path():
    path = None
    for seed in range(20):
        candidate = MIX.sample_path(10**4 + 1, seed)
        if candidate.component_index == 1:
            path = candidate
            break
    emp = empirical_component(path.symbols, 2, 1, 10**4)
    assert abs(emp.frequency([0]) - 0.9) < 0.01


def test_empirical_component_deterministic_alternation():
    w = np.tile([0, 1], 501)
    emp = empirical_component(w, 2, 1, 1000)
    assert emp.frequency([0]) == 0.5
    assert emp.frequency([1]) == 0.5


def test_empirical_component_marginal_consistency_exact():
    path = FAIR.sample_path(10**4 + 3, seed=9)
    emp = empirical_component(path.symbols, 2, 3, 10**4)
    for a in range(2):
        for b in range(2):
            assert emp.frequency([a, b]) == (
                emp.frequency([a, b, 0]) + emp.frequency([a, b, 1])
            )
        assert emp.frequency([a]) == emp.frequency([a, 0]) + emp.frequency([a, 1])


def test_empirical_component_guards():
    with pytest.raises(ResourceError):
        empirical_component([0, 1] * 10, 2, 2, 15)
    with pytest.raises(RangeError):
        empirical_component([0, 1] * 25, 2, 2, 50)


def test_negative_control_mixture_fails_spread_passes_ams():
    sr = ergodicity_spread(MIX, IND_ZERO, paths=100, horizon=10**4, seed=13)
    assert sr.spread > 0.1
    verdict = ams_diagnostic(MIX, [[0]], 10**4)[0]
    assert verdict.converged


def test_source_convergence_implies_output_convergence():
    # order <= 3 indicator battery on three paths per model
    cps = default_checkpoints(10**4)
    battery = [CylinderFunction.indicator(2, p) for p in
               ([0], [1], [0, 0], [1, 0], [0, 1, 1], [1, 1, 1])]
    for model in (FAIR, CHAIN):
        for seed in range(3):
            path = model.sample_path(10**4 + 3, seed)
            source_ok = all(
                time_average(path.symbols, g, cps, tol=0.02).converged for g in battery
            )
            y = encode_stream(WF, path.symbols).output[: 10**4 + 3]
            output_ok = all(
                time_average(y, g, cps, tol=0.02).converged for g in battery
            )
            assert source_ok
            assert output_ok


def test_orbit_averages_tie_to_weighted_full_averages():
    # Sampling an ergodic path along a variable-length orbit still converges,
    # and the density-weighted identity holds at the horizon. The sampled
    # positions are window-biased: for gamma(w) = 1 + w0 + w1 on a fair coin,
    # the stationary window chain gives pi(00) = pi(01) = 1/3 and
    # pi(10) = pi(11) = 1/6, so the orbit frequency of a leading 0 is 2/3 and
    # the orbit density is 1 / E[step] = 6/11.
    horizon = 10**4
    path = FAIR.sample_path(horizon + 10, seed=21).symbols
    spec = VariableLengthShiftSpec.from_function(2, 2, lambda w: 1 + w[0] + w[1])
    values = IND_ZERO.values_along(path)

    pos, steps = 0, 0
    while True:
        nxt = pos + spec.shift_at(path[pos:pos + 2])
        if nxt > horizon:
            break
        pos, steps = nxt, steps + 1
    orbit = variable_length_orbit(spec, path, steps)
    partials = bellow_check(values, orbit, horizon)
    assert abs(partials.lhs - partials.rhs) < 1e-12
    k = int(np.searchsorted(orbit.zeta, horizon))
    assert abs(k / horizon - 6 / 11) < 0.02
    sub_avg = values[orbit.zeta[:k]].mean()
    assert abs(sub_avg - 2 / 3) < 0.02
    a = max(2, k // 4)
    tail = [values[orbit.zeta[:m]].mean() for m in range(k - a, k)]
    assert max(tail) - min(tail) < 0.02
