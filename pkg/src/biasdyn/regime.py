"""Recover the bias coefficient from an observed trajectory and classify it.

Given samples of a signal ``y`` and of its biased derivative ``yodot``, the
pointwise coefficient estimate is::

    eps_hat[i] = (yodot[i] - (y[i+1] - y[i]) / dt) / y[i]

on samples with ``|y[i]| >= delta``. Three one-parameter hypotheses are then
fitted by least squares: ``eps = c``, ``eps = k*y`` and ``eps = k*y**2``.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field

import numpy as np
from sklearn.base import BaseEstimator

from .calculus import forward_difference
from .exceptions import InsufficientDataError, ValidationError
from .signal import Trajectory, make_grid

__all__ = [
    "RegimeLabel",
    "RegimeReport",
    "HYPOTHESES",
    "residual_bias_series",
    "fit_bias_regime",
    "classify",
    "BiasRegimeClassifier",
]

DEFAULT_DELTA = 1e-6
DEFAULT_DEADBAND = 1e-3
DEFAULT_MARGIN = 0.05
MIN_SAMPLES = 8

HYPOTHESES = ("constant", "state", "quadratic")


class RegimeLabel(enum.Enum):
    BIAS_FREE = "BiasFree"
    OVERESTIMATING = "Overestimating"
    UNDERESTIMATING = "Underestimating"
    BUBBLE = "Bubble"
    CHAOTIC = "Chaotic"

    def __str__(self):
        return self.value


@dataclass(frozen=True)
class RegimeReport:
    """Outcome of :func:`fit_bias_regime`.

    ``coefficient`` is the fitted ``c`` for the constant labels (0 for
    ``BiasFree``) or ``k`` for the state-dependent ones. ``sse`` and
    ``fits`` map each hypothesis name to its residual sum of squares and
    fitted parameter.
    """

    label: RegimeLabel
    coefficient: float
    hypothesis: str
    sse: dict = field(default_factory=dict)
    fits: dict = field(default_factory=dict)
    samples_used: int = 0
    samples_excluded: int = 0

    def summary(self):
        lines = [
            f"label: {self.label}",
            f"coefficient: {self.coefficient!r}",
            f"hypothesis: {self.hypothesis}",
            f"samples_used: {self.samples_used}",
            f"samples_excluded: {self.samples_excluded}",
            "hypothesis,parameter,sse",
        ]
        for name in HYPOTHESES:
            lines.append(f"{name},{self.fits[name]!r},{self.sse[name]!r}")
        return "\n".join(lines)


def _observed_channels(observed):
    for name in ("y", "yodot"):
        if name not in observed.channels:
            raise ValidationError(
                f"observed trajectory needs channels 'y' and 'yodot', has {list(observed.channels)}"
            )
    return observed.channel("y"), observed.channel("yodot")


def residual_bias_series(observed, delta=DEFAULT_DELTA):
    """Pointwise coefficient estimate from ``y`` and ``yodot`` channels.

    Returns channels ``eps_hat`` and ``used`` on the grid shortened by one
    sample. Samples with ``|y| < delta`` are flagged ``used = 0`` and carry
    ``eps_hat = 0``; they are not interpolated.
    """
    y, yodot = _observed_channels(observed)
    if not delta >= 0:
        raise ValidationError(f"delta must be non-negative, got {delta}")
    ydot = forward_difference(observed.select("y")).single()
    m = ydot.size
    y_left = y[:m]
    used = np.abs(y_left) >= delta
    if not used.any():
        raise InsufficientDataError(f"every sample has |y| < {delta}")
    eps_hat = np.zeros(m)
    eps_hat[used] = (yodot[:m][used] - ydot[used]) / y_left[used]
    if not np.all(np.isfinite(eps_hat)):
        raise ValidationError("coefficient estimate overflowed")
    return Trajectory(
        observed.grid.truncated(m), ("eps_hat", "used"),
        np.column_stack([eps_hat, used.astype(float)]),
    )


def _fit_hypotheses(e, y):
    fits, sse = {}, {}
    c = float(np.mean(e))
    fits["constant"], sse["constant"] = c, float(np.sum((e - c) ** 2))
    for name, x in (("state", y), ("quadratic", y * y)):
        xx = float(np.dot(x, x))
        if not (xx > 0 and math.isfinite(xx)):
            raise ValidationError(f"degenerate regressor for the {name} hypothesis")
        k = float(np.dot(x, e)) / xx
        fits[name], sse[name] = k, float(np.sum((e - k * x) ** 2))
    return fits, sse


def fit_bias_regime(eps_hat, y, deadband=DEFAULT_DEADBAND, margin=DEFAULT_MARGIN,
                    delta=DEFAULT_DELTA):
    """Fit the three coefficient hypotheses and label the regime.

    ``eps_hat`` is the output of :func:`residual_bias_series` (a bare
    ``eps_hat`` channel is also accepted, in which case samples are
    selected by ``|y| >= delta``). ``y`` may be longer than ``eps_hat``; it
    is aligned on the leading samples.

    The constant hypothesis wins unless a state-dependent one lowers the
    SSE by more than ``margin`` (relative).
    """
    e_all = eps_hat.channel("eps_hat")
    m = e_all.size
    y_all = y.single() if len(y.channels) == 1 else y.channel("y")
    if y_all.size < m:
        raise ValidationError(f"y has {y_all.size} samples, eps_hat has {m}")
    y_all = y_all[:m]
    if "used" in eps_hat.channels:
        used = eps_hat.channel("used") > 0
    else:
        used = np.abs(y_all) >= delta
    n_used = int(used.sum())
    if n_used < MIN_SAMPLES:
        raise InsufficientDataError(
            f"{n_used} usable samples, at least {MIN_SAMPLES} required"
        )
    fits, sse = _fit_hypotheses(e_all[used], y_all[used])
    best_state = min(("state", "quadratic"), key=lambda h: sse[h])
    if sse[best_state] < (1.0 - margin) * sse["constant"]:
        winner = best_state
        label = RegimeLabel.BUBBLE if winner == "state" else RegimeLabel.CHAOTIC
        coefficient = fits[winner]
    else:
        winner = "constant"
        c = fits["constant"]
        if abs(c) <= deadband:
            label, coefficient = RegimeLabel.BIAS_FREE, 0.0
        elif c > 0:
            label, coefficient = RegimeLabel.OVERESTIMATING, c
        else:
            label, coefficient = RegimeLabel.UNDERESTIMATING, c
    return RegimeReport(
        label=label,
        coefficient=coefficient,
        hypothesis=winner,
        sse=sse,
        fits=fits,
        samples_used=n_used,
        samples_excluded=m - n_used,
    )


def classify(observed, delta=DEFAULT_DELTA, deadband=DEFAULT_DEADBAND, margin=DEFAULT_MARGIN):
    """Estimate and classify the bias of an observed ``(y, yodot)`` trajectory."""
    eps_hat = residual_bias_series(observed, delta=delta)
    return fit_bias_regime(
        eps_hat, observed.select("y"), deadband=deadband, margin=margin, delta=delta
    )


class BiasRegimeClassifier(BaseEstimator):
    """Estimator wrapper around :func:`classify`.

    Parameters
    ----------
    delta : float, default=1e-6
        Samples with ``|y| < delta`` are excluded from the fit.
    deadband : float, default=1e-3
        A fitted constant within ``±deadband`` is labelled bias-free.
    margin : float, default=0.05
        Relative SSE improvement a state-dependent hypothesis needs over the
        constant one.
    dt : float, optional
        Sampling step for array input. Required unless ``fit`` receives a
        :class:`~biasdyn.signal.Trajectory`.

    Attributes
    ----------
    report_ : RegimeReport
    label_ : RegimeLabel
    coefficient_ : float
    """

    def __init__(self, delta=DEFAULT_DELTA, deadband=DEFAULT_DEADBAND,
                 margin=DEFAULT_MARGIN, dt=None):
        self.delta = delta
        self.deadband = deadband
        self.margin = margin
        self.dt = dt

    def _as_observed(self, X):
        if isinstance(X, Trajectory):
            return X
        X = np.asarray(X, dtype=float)
        if X.ndim != 2 or X.shape[1] != 2:
            raise ValidationError(f"expected an (n, 2) array of (y, yodot), got shape {X.shape}")
        if self.dt is None:
            raise ValidationError("dt is required for array input")
        return Trajectory(make_grid(0.0, self.dt, X.shape[0]), ("y", "yodot"), X)

    def fit(self, X, y=None):
        """Fit on an observed ``(y, yodot)`` trajectory or ``(n, 2)`` array."""
        self.report_ = classify(
            self._as_observed(X), delta=self.delta, deadband=self.deadband, margin=self.margin
        )
        self.label_ = self.report_.label
        self.coefficient_ = self.report_.coefficient
        self.hypothesis_ = self.report_.hypothesis
        return self

    def _coefficient_values(self, y):
        if not hasattr(self, "report_"):
            from sklearn.exceptions import NotFittedError

            raise NotFittedError("BiasRegimeClassifier is not fitted yet")
        k = self.coefficient_
        if self.hypothesis_ == "state":
            return k * y
        if self.hypothesis_ == "quadratic":
            return k * y * y
        return np.full_like(y, k)

    def predict(self, X):
        """Biased derivative of the signal ``X`` under the fitted regime.

        ``X`` is a single-channel trajectory (or a 1-D array with ``dt``
        set); the result has one sample fewer.
        """
        if not isinstance(X, Trajectory):
            X = np.asarray(X, dtype=float).ravel()
            if self.dt is None:
                raise ValidationError("dt is required for array input")
            X = Trajectory(make_grid(0.0, self.dt, X.size), ("y",), X)
        y = X.single() if len(X.channels) == 1 else X.channel("y")
        ydot = forward_difference(Trajectory(X.grid, ("y",), y)).single()
        return ydot + self._coefficient_values(y[:-1]) * y[:-1]
