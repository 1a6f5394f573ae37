import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from biasdyn import (
    BiasedDerivative,
    Constant,
    GridMismatchError,
    ProportionalToState,
    QuadraticInState,
    Tabulated,
    ValidationError,
    Zero,
    biased_derivative_series,
    biased_difference,
    biased_from_ordinary,
    forward_difference,
    positive_part_integral,
)
from biasdyn.signal import bias_values

from conftest import operand_scale, series

samples = arrays(np.float64, st.integers(2, 60), elements=st.floats(-1e3, 1e3))
steps = st.floats(1e-4, 1.0)
biases = st.one_of(
    st.just(Zero()),
    st.floats(-2, 2).map(Constant),
    st.floats(-2, 2).map(ProportionalToState),
    st.floats(-2, 2).map(QuadraticInState),
)


class TestBiasedDifference:
    def test_constant_signal(self):
        assert biased_difference(1.0, 1.0, 0.1, 0.6) == pytest.approx(0.6, rel=1e-14)

    def test_direct_evaluation(self):
        # (2.2 - 0.95*2) / 0.1
        assert biased_difference(2.0, 2.2, 0.1, 0.5) == pytest.approx(3.0, rel=1e-12)

    def test_zero_bias_constant_signal(self):
        assert biased_difference(5.0, 5.0, 0.1, 0.0) == 0.0

    @pytest.mark.parametrize("args", [(1, 1, 0, 0.1), (1, 1, -1, 0.1), (math.nan, 1, 0.1, 0), (1, math.inf, 0.1, 0)])
    def test_rejects(self, args):
        with pytest.raises(ValidationError):
            biased_difference(*args)


class TestBiasedFromOrdinary:
    def test_direct_evaluation(self):
        assert biased_from_ordinary(-0.5, 1.0, 0.6) == pytest.approx(0.1, abs=1e-15)

    @given(st.floats(-1e6, 1e6), st.floats(-1e6, 1e6), st.floats(-10, 10))
    def test_special_cases(self, ydot, y, eps):
        assert biased_from_ordinary(ydot, y, 0.0) == ydot
        assert biased_from_ordinary(0.0, y, eps) == eps * y

    def test_rejects_non_finite(self):
        with pytest.raises(ValidationError):
            biased_from_ordinary(math.nan, 1.0, 0.0)


class TestForwardDifference:
    def test_ramp(self):
        dt = 0.01
        t = np.arange(50) * dt
        assert np.allclose(forward_difference(series(2 * t, dt)).single(), 2.0, rtol=1e-12)

    def test_constant(self):
        assert np.all(forward_difference(series(np.full(10, 3.3))).single() == 0.0)

    def test_carrier_at_pi(self, carrier):
        i = round(math.pi / carrier.grid.dt)
        d = forward_difference(carrier).single()
        # analytic derivative -sin(t/2)/2 is -0.5 at pi; error O(dt)
        assert d[i] == pytest.approx(-0.5, abs=1e-3)

    def test_length_and_grid(self, carrier):
        d = forward_difference(carrier)
        assert d.n == carrier.n - 1
        assert d.grid.dt == carrier.grid.dt and d.grid.t0 == carrier.grid.t0

    def test_two_samples(self):
        assert forward_difference(series([1.0, 3.0], 0.5)).single().tolist() == [4.0]


class TestBiasedDerivativeSeries:
    def test_carrier_zero_bias_at_zero(self, carrier):
        dt = carrier.grid.dt
        expected = (math.cos(dt / 2) - 1.0) / dt  # exact forward difference, about -dt/8
        got = biased_derivative_series(carrier, Zero()).single()[0]
        assert got == pytest.approx(expected, rel=1e-9)
        assert got == pytest.approx(-1.25e-4, rel=1e-3)

    def test_carrier_constant_bias_at_zero(self, carrier):
        dt = carrier.grid.dt
        expected = (math.cos(dt / 2) - 1.0) / dt + 0.6
        got = biased_derivative_series(carrier, Constant(0.6)).single()[0]
        assert got == pytest.approx(expected, rel=1e-12)

    @given(st.floats(-100, 100), st.floats(-3, 3))
    def test_constant_series_state_bias(self, c, k):
        out = biased_derivative_series(series(np.full(7, c), 0.01), ProportionalToState(k)).single()
        assert np.allclose(out, k * c * c, rtol=1e-9, atol=1e-9)

    def test_output_channel(self, carrier):
        out = biased_derivative_series(carrier, Constant(0.6))
        assert out.channels == ("yodot",) and out.n == carrier.n - 1

    def test_tabulated_bias_uses_left_sample(self):
        y = series([1.0, 2.0, 4.0], dt=1.0)
        bias = Tabulated(series([0.5, -1.0, 9.0], dt=1.0, name="eps"))
        out = biased_derivative_series(y, bias).single()
        assert out.tolist() == [1.0 + 0.5 * 1.0, 2.0 - 1.0 * 2.0]

    def test_tabulated_grid_mismatch(self):
        bias = Tabulated(series([0.5, -1.0, 9.0], dt=2.0))
        with pytest.raises(GridMismatchError):
            biased_derivative_series(series([1.0, 2.0, 4.0], dt=1.0), bias)

    def test_single_sample_rejected(self):
        from biasdyn import TimeGrid, Trajectory

        with pytest.raises(ValidationError):
            biased_derivative_series(Trajectory(TimeGrid(0, 1, 1), ("y",), [1.0]), Zero())

    @settings(max_examples=200)
    @given(samples, steps, biases)
    def test_matches_ordinary_plus_bias(self, y, dt, bias):
        traj = series(y, dt)
        got = biased_derivative_series(traj, bias).single()
        eps = bias_values(bias, y[:-1])
        ref = forward_difference(traj).single() + eps * y[:-1]
        ulp = np.spacing(operand_scale(y[:-1], y[1:], dt, eps))
        assert np.all(np.abs(got - ref) <= 4 * ulp)

    @given(samples, steps)
    def test_zero_bias_is_forward_difference_bitwise(self, y, dt):
        traj = series(y, dt)
        a = biased_derivative_series(traj, Zero()).values
        b = forward_difference(traj).values
        assert a.tobytes() == b.tobytes()

    @settings(max_examples=200)
    @given(
        arrays(np.float64, 30, elements=st.floats(-10, 10)),
        arrays(np.float64, 30, elements=st.floats(-10, 10)),
        st.floats(-5, 5), st.floats(-5, 5), st.floats(-2, 2),
    )
    def test_linear_for_constant_bias(self, y1, y2, a, b, c):
        dt = 0.01
        op = lambda y: biased_derivative_series(series(y, dt), Constant(c)).single()
        lhs = op(a * y1 + b * y2)
        rhs = a * op(y1) + b * op(y2)
        scale = (np.abs(a) * np.abs(y1) + np.abs(b) * np.abs(y2)).max() / dt + 1.0
        assert np.all(np.abs(lhs - rhs) <= 1e-12 * scale)


class TestPositivePartIntegral:
    def test_unit(self):
        assert positive_part_integral(series(np.ones(201), 0.01)) == pytest.approx(2.0, rel=1e-12)

    def test_negative_discarded(self):
        assert positive_part_integral(series(-np.ones(50), 0.1)) == 0.0

    def test_half_wave(self):
        dt = 1e-4
        t = np.arange(math.ceil(4 * math.pi / dt) + 1) * dt
        v = series(-np.sin(t / 2) / 2, dt)
        # antiderivative cos(t/2) over (2pi, 4pi) gives exactly 2
        assert positive_part_integral(v) == pytest.approx(2.0, abs=1e-3)

    def test_mask_selects_periods(self):
        v = series([1.0, 1.0, 1.0, 1.0, 1.0], 1.0)
        mask = series([1.0, 1.0, 1.0, -1.0, -1.0], 1.0)
        # integrand 1,1,1,0,0
        assert positive_part_integral(v, mask) == 2.5

    def test_mask_grid_mismatch(self):
        with pytest.raises(GridMismatchError):
            positive_part_integral(series([1.0, 2.0], 1.0), series([1.0, 2.0], 2.0))

    def test_window_partial_intervals(self):
        v = series(np.ones(11), 1.0)
        assert positive_part_integral(v, window=(0.25, 7.5)) == pytest.approx(7.25, rel=1e-14)
        assert positive_part_integral(v, window=(3.2, 3.7)) == pytest.approx(0.5, rel=1e-12)
        ramp = series(np.arange(11.0), 1.0)
        assert positive_part_integral(ramp, window=(0.5, 2.5)) == pytest.approx(3.0, rel=1e-14)

    def test_window_outside_grid(self):
        with pytest.raises(ValidationError):
            positive_part_integral(series(np.ones(11), 1.0), window=(0.0, 10.5))

    @given(samples, steps)
    def test_non_negative(self, y, dt):
        assert positive_part_integral(series(y, dt)) >= 0.0

    @given(samples, arrays(np.float64, 60, elements=st.floats(0, 100)), steps)
    def test_monotone(self, y, bump, dt):
        low = series(y, dt)
        high = series(y + bump[: y.size], dt)
        assert positive_part_integral(high) >= positive_part_integral(low)


class TestBiasedDerivativeTransformer:
    def test_matches_function(self, carrier):
        est = BiasedDerivative(bias=Constant(0.6), dt=carrier.grid.dt)
        out = est.fit_transform(carrier.single())
        ref = biased_derivative_series(carrier, Constant(0.6)).single()
        assert out.tobytes() == ref.tobytes()

    def test_trajectory_input_and_columns(self, carrier):
        est = BiasedDerivative(bias=ProportionalToState(0.6))
        assert est.transform(carrier).channels == ("yodot",)
        X = np.column_stack([carrier.single(), 2 * carrier.single()])
        out = BiasedDerivative(bias=Zero(), dt=1e-3).transform(X)
        assert out.shape == (carrier.n - 1, 2)

    def test_params(self):
        est = BiasedDerivative(bias=Constant(0.2), dt=0.5)
        assert est.get_params() == {"bias": Constant(0.2), "dt": 0.5}
        est.set_params(dt=0.25)
        assert est.dt == 0.25

    def test_bad_dt(self):
        with pytest.raises(ValidationError):
            BiasedDerivative(dt=-1.0).fit([1.0, 2.0])
