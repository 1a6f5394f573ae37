import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from biasdyn import (
    Constant,
    ConstantValue,
    Harmonic,
    ProportionalToState,
    QuadraticInState,
    Step,
    Tabulated,
    TabulatedInput,
    TimeGrid,
    Trajectory,
    ValidationError,
    Zero,
    eval_bias,
    make_grid,
    sample_input,
)
from biasdyn.exceptions import GridMismatchError
from biasdyn.signal import bias_values

from conftest import series

finite = st.floats(-1e6, 1e6, allow_nan=False)


class TestMakeGrid:
    def test_four_pi_span(self):
        grid = make_grid(0, 0.001, 12567)
        assert (grid.t0, grid.dt, grid.n) == (0.0, 0.001, 12567)
        assert grid.t_end == pytest.approx(4 * math.pi, abs=1e-3)

    def test_minimal(self):
        assert list(make_grid(0, 0.5, 2).times) == [0.0, 0.5]

    @pytest.mark.parametrize(
        "t0, dt, n",
        [(0, -0.1, 10), (0, 0.0, 10), (0, 0.1, 1), (0, math.inf, 5), (math.nan, 0.1, 5), (0, 0.1, 2.5)],
    )
    def test_rejects(self, t0, dt, n):
        with pytest.raises(ValidationError):
            make_grid(t0, dt, n)

    @given(st.floats(-1e3, 1e3), st.floats(1e-6, 10), st.integers(2, 5000))
    def test_last_time_exact(self, t0, dt, n):
        grid = make_grid(t0, dt, n)
        assert grid.times[-1] == t0 + (n - 1) * dt
        assert grid.time(n - 1) == grid.times[-1]


class TestTrajectory:
    def test_shape_checked(self):
        with pytest.raises(ValidationError):
            Trajectory(make_grid(0, 1, 3), ("y",), [1.0, 2.0])

    def test_duplicate_and_empty_names(self):
        grid = make_grid(0, 1, 2)
        with pytest.raises(ValidationError):
            Trajectory(grid, ("y", "y"), np.zeros((2, 2)))
        with pytest.raises(ValidationError):
            Trajectory(grid, ("",), np.zeros(2))

    def test_non_finite_rejected(self):
        with pytest.raises(ValidationError):
            series([1.0, math.nan])

    def test_values_read_only(self):
        traj = series([1.0, 2.0])
        with pytest.raises(ValueError):
            traj.values[0, 0] = 5.0

    def test_channel_access(self):
        traj = Trajectory.from_channels(make_grid(0, 1, 3), a=[1, 2, 3], b=[4, 5, 6])
        assert list(traj["b"]) == [4, 5, 6]
        assert traj.select("b").single().tolist() == [4, 5, 6]
        with pytest.raises(KeyError):
            traj.channel("c")
        with pytest.raises(ValidationError):
            traj.single()


class TestSampleInput:
    def test_harmonic_carrier(self):
        grid = make_grid(0, math.pi, 2)
        u = sample_input(Harmonic(1, 0.5, 0), grid).single()
        assert u[0] == 1.0
        assert u[1] == pytest.approx(0.0, abs=1e-15)

    def test_step_inclusive_onset(self):
        u = sample_input(Step(1, 0), make_grid(0, 0.1, 20)).single()
        assert np.all(u == 1.0)
        u = sample_input(Step(2.5, 0.3), make_grid(0, 0.1, 6)).single()
        assert u.tolist() == [0, 0, 0, 2.5, 2.5, 2.5]

    def test_channel_name(self):
        assert sample_input(ConstantValue(3), make_grid(0, 1, 4)).channels == ("u",)

    def test_tabulated_grid_mismatch(self):
        sig = TabulatedInput(series([1, 2, 3], dt=0.5))
        assert sample_input(sig, make_grid(0, 0.5, 3)).single().tolist() == [1, 2, 3]
        with pytest.raises(GridMismatchError):
            sample_input(sig, make_grid(0, 0.25, 3))

    def test_harmonic_omega_nonzero(self):
        with pytest.raises(ValidationError):
            Harmonic(1, 0, 0)

    def test_deterministic(self):
        grid = make_grid(0.1, 0.003, 1000)
        a = sample_input(Harmonic(1.3, 0.7, 0.2), grid).values
        b = sample_input(Harmonic(1.3, 0.7, 0.2), grid).values
        assert a.tobytes() == b.tobytes()


class TestEvalBias:
    @pytest.mark.parametrize(
        "bias, y, expected",
        [
            (Constant(0.6), -3.2, 0.6),
            (ProportionalToState(0.6), 1.0, 0.6),
            (Zero(), 7.0, 0.0),
            (QuadraticInState(0.3), -2.0, 1.2),
        ],
    )
    def test_values(self, bias, y, expected):
        assert eval_bias(bias, y, 0) == pytest.approx(expected, rel=1e-15)

    def test_tabulated(self):
        bias = Tabulated(series([0.1, 0.2, 0.3]))
        assert eval_bias(bias, 99.0, 2) == 0.3
        with pytest.raises(IndexError):
            eval_bias(bias, 0.0, 3)

    def test_tabulated_grid_must_match(self):
        bias = Tabulated(series([0.1, 0.2, 0.3]))
        with pytest.raises(GridMismatchError):
            bias_values(bias, [1.0, 2.0], grid=make_grid(0, 2.0, 3))

    @given(finite)
    def test_zero_identically_zero(self, y):
        assert eval_bias(Zero(), y, 0) == 0.0

    @given(finite, st.floats(-10, 10))
    def test_quadratic_even(self, y, k):
        assert eval_bias(QuadraticInState(k), y, 0) == eval_bias(QuadraticInState(k), -y, 0)

    def test_vectorised_matches_scalar(self):
        y = np.linspace(-2, 2, 9)
        for bias in (Zero(), Constant(-0.4), ProportionalToState(0.7), QuadraticInState(1.1)):
            assert bias_values(bias, y).tolist() == [eval_bias(bias, v, i) for i, v in enumerate(y)]


def test_grid_is_hashable_value():
    assert TimeGrid(0, 0.1, 5) == make_grid(0.0, 0.1, 5)
    assert len({TimeGrid(0, 0.1, 5), make_grid(0.0, 0.1, 5)}) == 1
