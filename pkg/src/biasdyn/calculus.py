"""Discrete biased derivative, ordinary forward difference and positive-part quadrature.

The biased derivative of a sampled signal is the forward difference with a
decay factor on the left sample::

    yodot[i] = (y[i+1] - (1 - eps[i]*dt) * y[i]) / dt

which equals ``(y[i+1] - y[i]) / dt + eps[i] * y[i]`` up to rounding. The
coefficient ``eps`` is always evaluated at the left sample.
"""

from __future__ import annotations

import math

import numpy as np
from sklearn.base import BaseEstimator, TransformerMixin

from .exceptions import GridMismatchError, ValidationError
from .signal import Trajectory, Zero, bias_values

__all__ = [
    "biased_difference",
    "biased_derivative_series",
    "biased_from_ordinary",
    "forward_difference",
    "positive_part_integral",
    "BiasedDerivative",
]


def _check_finite(**values):
    for name, v in values.items():
        if not math.isfinite(v):
            raise ValidationError(f"{name} must be finite, got {v!r}")


def biased_difference(y_now, y_next, dt, eps):
    """Biased derivative of one sample pair."""
    _check_finite(y_now=y_now, y_next=y_next, dt=dt, eps=eps)
    if dt <= 0:
        raise ValidationError(f"dt must be positive, got {dt!r}")
    return (y_next - (1.0 - eps * dt) * y_now) / dt


def biased_from_ordinary(ydot, y, eps):
    """Biased derivative from a known ordinary derivative: ``ydot + eps*y``."""
    _check_finite(ydot=ydot, y=y, eps=eps)
    return ydot + eps * y


def _single(traj, op):
    y = traj.single()
    if y.size < 2:
        raise ValidationError(f"{op} needs at least two samples")
    return y


def forward_difference(traj):
    """Ordinary forward difference ``(y[i+1] - y[i]) / dt``; length ``n - 1``."""
    y = _single(traj, "forward_difference")
    dt = traj.grid.dt
    return Trajectory(traj.grid.truncated(y.size - 1), ("ydot",), (y[1:] - y[:-1]) / dt)


def _biased_values(y, dt, eps):
    return (y[1:] - (1.0 - eps * dt) * y[:-1]) / dt


def biased_derivative_series(traj, bias):
    """Biased derivative of a single-channel trajectory.

    Returns channel ``"yodot"`` on the grid truncated by one sample. With
    :class:`~biasdyn.signal.Zero` bias the result is bitwise the ordinary
    forward difference.
    """
    y = _single(traj, "biased_derivative_series")
    eps = bias_values(bias, y[:-1], grid=traj.grid)
    values = _biased_values(y, traj.grid.dt, eps)
    return Trajectory(traj.grid.truncated(y.size - 1), ("yodot",), values)


def positive_part_integral(series, mask=None, window=None):
    """Trapezoidal integral of ``max(v, 0)``.

    With ``mask`` the integrand is additionally zeroed wherever
    ``mask <= 0``, i.e. only samples in the mask's positive periods
    contribute. Sign crossings are not refined; the error is O(dt).

    ``window=(a, b)`` restricts the integral to ``[a, b]``, which must lie
    inside the grid. Partial end intervals interpolate the integrand
    linearly, so the result does not depend on how the window aligns with
    the samples beyond O(dt**2).
    """
    v = series.single()
    integrand = np.maximum(v, 0.0)
    if mask is not None:
        if mask.grid != series.grid:
            raise GridMismatchError(f"mask grid {mask.grid} differs from {series.grid}")
        integrand = np.where(mask.single() > 0, integrand, 0.0)
    grid = series.grid
    if window is None:
        return float(np.trapezoid(integrand, dx=grid.dt))
    return float(_window_trapezoid(integrand, grid, *window))


def _window_trapezoid(w, grid, a, b):
    t0, dt = grid.t0, grid.dt
    slack = 1e-9 * dt
    if not (a < b and a >= t0 - slack and b <= grid.t_end + slack):
        raise ValidationError(
            f"window [{a}, {b}] outside grid [{t0}, {grid.t_end}]"
        )
    ia = max(0, math.ceil((a - t0) / dt - 1e-9))
    ib = min(grid.n - 1, math.floor((b - t0) / dt + 1e-9))
    if ib < ia:
        # window inside one interval
        wa, wb = np.interp([a, b], grid.times[ia - 1 : ia + 1], w[ia - 1 : ia + 1])
        return float(0.5 * (b - a) * (wa + wb))
    total = float(np.trapezoid(w[ia : ib + 1], dx=dt))
    ta, tb = t0 + ia * dt, t0 + ib * dt
    if ta > a and ia > 0:
        wa = w[ia - 1] + (w[ia] - w[ia - 1]) * (a - (ta - dt)) / dt
        total += 0.5 * (ta - a) * (wa + w[ia])
    if tb < b and ib < grid.n - 1:
        wb = w[ib] + (w[ib + 1] - w[ib]) * (b - tb) / dt
        total += 0.5 * (b - tb) * (w[ib] + wb)
    return total


class BiasedDerivative(TransformerMixin, BaseEstimator):
    """Biased-derivative transformer for uniformly sampled signals.

    Parameters
    ----------
    bias : BiasSpec, default=Zero()
        Bias coefficient applied at the left sample of each step.
    dt : float, default=1.0
        Sampling step used when ``transform`` receives a bare array.
        Ignored for :class:`~biasdyn.signal.Trajectory` input.

    Notes
    -----
    ``transform`` maps ``n`` samples to ``n - 1`` derivative values. A 2-D
    array is treated as independent columns sharing one step. No state is
    learned, so ``fit`` is optional.
    """

    def __init__(self, bias=None, dt=1.0):
        self.bias = bias
        self.dt = dt

    def _bias(self):
        if not (isinstance(self.dt, (int, float)) and math.isfinite(self.dt) and self.dt > 0):
            raise ValidationError(f"dt must be a positive finite number, got {self.dt!r}")
        return Zero() if self.bias is None else self.bias

    def __sklearn_tags__(self):
        tags = super().__sklearn_tags__()
        tags.requires_fit = False
        return tags

    def fit(self, X, y=None):
        """Validate parameters. The transform is stateless."""
        self._bias()
        return self

    def transform(self, X):
        bias = self._bias()
        if isinstance(X, Trajectory):
            return biased_derivative_series(X, bias)
        X = np.asarray(X, dtype=float)
        if X.ndim == 1:
            X = X[:, None]
            squeeze = True
        elif X.ndim == 2:
            squeeze = False
        else:
            raise ValidationError(f"expected 1-D or 2-D input, got shape {X.shape}")
        if X.shape[0] < 2:
            raise ValidationError("need at least two samples")
        if not np.all(np.isfinite(X)):
            raise ValidationError("input contains non-finite values")
        out = np.column_stack(
            [_biased_values(col, self.dt, bias_values(bias, col[:-1])) for col in X.T]
        )
        return out[:, 0] if squeeze else out
