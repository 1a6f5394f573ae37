"""Fixed-step simulation of biased models.

``simulate_biased`` advances a :class:`~biasdyn.models.ModelSpec` by solving
the discrete biased derivative for the next sample::

    y[i+1] = (1 - eps*dt) * y[i] + dt * rate

This coincides with explicit Euler on the ordinary form ``ẏ = rate - eps*y``.
``simulate_reference`` is a classical RK4 integrator for ordinary systems,
used to cross-check the biased scheme.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .exceptions import DivergenceError, GridMismatchError, ValidationError
from .signal import Tabulated, TabulatedInput, Trajectory, bias_values, eval_bias, sample_input

__all__ = [
    "OdeSystem",
    "biased_euler_step",
    "simulate_biased",
    "simulate_reference",
    "ordinary_form",
]


@dataclass(frozen=True)
class OdeSystem:
    """``ẏ = rhs(t, y, u)`` with state of length ``dimension``."""

    dimension: int
    rhs: Callable
    channels: tuple = None

    def __post_init__(self):
        if self.dimension < 1:
            raise ValidationError("dimension must be at least 1")
        if self.channels is None:
            names = ("y",) if self.dimension == 1 else tuple(
                f"y{j + 1}" for j in range(self.dimension)
            )
            object.__setattr__(self, "channels", names)


def _step(y, dt, eps, rate):
    return (1.0 - eps * dt) * y + dt * rate


def biased_euler_step(y, t, dt, eps_per_channel, rate):
    """One step of the inverted biased derivative.

    ``t`` is accepted for symmetry with rate functions and does not enter
    the update. Raises :class:`DivergenceError` (step 1) if the result is
    not finite.
    """
    y = np.asarray(y, dtype=float)
    eps = np.asarray(eps_per_channel, dtype=float)
    rate = np.asarray(rate, dtype=float)
    if not (y.shape == eps.shape == rate.shape) or y.ndim != 1:
        raise ValidationError(
            f"length mismatch: y{y.shape}, eps{eps.shape}, rate{rate.shape}"
        )
    if not (math.isfinite(dt) and dt > 0):
        raise ValidationError(f"dt must be positive and finite, got {dt!r}")
    if not (np.all(np.isfinite(y)) and np.all(np.isfinite(eps)) and np.all(np.isfinite(rate))):
        raise ValidationError("step inputs must be finite")
    with np.errstate(over="ignore", invalid="ignore"):
        out = _step(y, dt, eps, rate)
    if not np.all(np.isfinite(out)):
        raise DivergenceError(1)
    return out


def _input_values(sig, grid):
    return sample_input(sig, grid).single()


def _check_y0(y0, dimension):
    y0 = np.atleast_1d(np.asarray(y0, dtype=float))
    if y0.shape != (dimension,):
        raise ValidationError(f"y0 has {y0.size} entries, model has {dimension} channels")
    if not np.all(np.isfinite(y0)):
        raise ValidationError("y0 must be finite")
    return y0


def _check_tabulated_biases(model, grid):
    for bias in model.biases:
        if isinstance(bias, Tabulated) and bias.series.grid != grid:
            raise GridMismatchError(
                f"tabulated bias grid {bias.series.grid} differs from {grid}"
            )


def _eps_at(biases, y, index):
    return np.array([eval_bias(b, y[j], index) for j, b in enumerate(biases)])


def simulate_biased(model, input, grid, y0):
    """Simulate ``model`` on ``grid`` with the biased-Euler scheme.

    Bias and rate are evaluated at the left sample of each step. Raises
    :class:`DivergenceError` carrying the index of the first non-finite
    sample; no partial trajectory is returned.
    """
    y0 = _check_y0(y0, model.dimension)
    _check_tabulated_biases(model, grid)
    u = _input_values(input, grid)
    times = grid.times
    dt = grid.dt
    out = np.empty((grid.n, model.dimension))
    out[0] = y0
    with np.errstate(over="ignore", invalid="ignore"):
        for i in range(grid.n - 1):
            y = out[i]
            eps = _eps_at(model.biases, y, i)
            rate = np.asarray(model.rate(times[i], y, u[i]), dtype=float)
            nxt = _step(y, dt, eps, rate)
            if not np.all(np.isfinite(nxt)):
                raise DivergenceError(i + 1, f"biased-Euler state not finite at step {i + 1}")
            out[i + 1] = nxt
    return Trajectory(grid, model.channels, out)


def ordinary_form(model, grid=None):
    """The ordinary system ``ẏ = rate - eps*y`` equivalent to ``model``.

    Tabulated biases are interpolated linearly in time, which needs
    ``grid``.
    """
    biases = model.biases
    tabulated = [isinstance(b, Tabulated) for b in biases]
    if any(tabulated) and grid is None:
        raise ValidationError("a grid is required to interpolate tabulated biases")

    def rhs(t, y, u):
        eps = np.empty(len(biases))
        for j, b in enumerate(biases):
            if tabulated[j]:
                eps[j] = np.interp(t, b.series.times, b.series.single())
            else:
                eps[j] = bias_values(b, y[j : j + 1])[0]
        return np.asarray(model.rate(t, y, u), dtype=float) - eps * y

    return OdeSystem(model.dimension, rhs, model.channels)


def simulate_reference(system, input, grid, y0):
    """Classical fourth-order Runge-Kutta on ``system`` over ``grid``.

    The input is evaluated at stage times; tabulated inputs are linearly
    interpolated between samples.
    """
    y0 = _check_y0(y0, system.dimension)
    if isinstance(input, TabulatedInput) and input.series.grid != grid:
        raise GridMismatchError(f"tabulated input grid {input.series.grid} differs from {grid}")
    f = system.rhs
    dt = grid.dt
    half = 0.5 * dt
    out = np.empty((grid.n, system.dimension))
    out[0] = y0
    with np.errstate(over="ignore", invalid="ignore"):
        for i in range(grid.n - 1):
            t = grid.t0 + i * dt
            tm = t + half
            t1 = grid.t0 + (i + 1) * dt
            u0, um, u1 = (float(v) for v in input(np.array([t, tm, t1])))
            y = out[i]
            k1 = f(t, y, u0)
            k2 = f(tm, y + half * k1, um)
            k3 = f(tm, y + half * k2, um)
            k4 = f(t1, y + dt * k3, u1)
            nxt = y + (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
            if not np.all(np.isfinite(nxt)):
                raise DivergenceError(i + 1, f"reference state not finite at step {i + 1}")
            out[i + 1] = nxt
    return Trajectory(grid, system.channels, out)
