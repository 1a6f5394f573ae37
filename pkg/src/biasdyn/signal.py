"""Time grids, trajectories, bias coefficients and input signals.

Everything here is an immutable value. Sample arrays are stored as
read-only numpy arrays so a :class:`Trajectory` can be shared freely.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Sequence, Union

import numpy as np

from .exceptions import GridMismatchError, SpecSyntaxError, ValidationError

__all__ = [
    "TimeGrid",
    "Trajectory",
    "make_grid",
    "Zero",
    "Constant",
    "ProportionalToState",
    "QuadraticInState",
    "Tabulated",
    "BiasSpec",
    "eval_bias",
    "bias_values",
    "Step",
    "Harmonic",
    "ConstantValue",
    "TabulatedInput",
    "InputSignal",
    "sample_input",
    "as_series",
]


def _finite(name, value):
    try:
        value = float(value)
    except (TypeError, ValueError):
        raise ValidationError(f"{name} must be a real number, got {value!r}") from None
    if not math.isfinite(value):
        raise ValidationError(f"{name} must be finite, got {value!r}")
    return value


def parse_real(token, context="value"):
    """Parse a finite real from text, raising :class:`SpecSyntaxError`."""
    try:
        value = float(token)
    except (TypeError, ValueError):
        raise SpecSyntaxError(token, f"malformed number {token!r} in {context}") from None
    if not math.isfinite(value):
        raise SpecSyntaxError(token, f"non-finite number {token!r} in {context}")
    return value


@dataclass(frozen=True)
class TimeGrid:
    """Uniform sampling lattice ``t0 + i*dt`` for ``0 <= i < n``."""

    t0: float
    dt: float
    n: int

    def __post_init__(self):
        object.__setattr__(self, "t0", _finite("t0", self.t0))
        object.__setattr__(self, "dt", _finite("dt", self.dt))
        if self.dt <= 0:
            raise ValidationError(f"dt must be positive, got {self.dt!r}")
        if isinstance(self.n, bool) or int(self.n) != self.n:
            raise ValidationError(f"n must be an integer, got {self.n!r}")
        object.__setattr__(self, "n", int(self.n))
        # derived series (one sample shorter) may hold a single sample
        if self.n < 1:
            raise ValidationError(f"n must be positive, got {self.n}")

    def time(self, i):
        if not 0 <= i < self.n:
            raise IndexError(f"sample index {i} outside grid of {self.n}")
        return self.t0 + i * self.dt

    @property
    def times(self):
        # one multiply-add per sample, never a running sum
        return self.t0 + np.arange(self.n) * self.dt

    @property
    def span(self):
        return (self.n - 1) * self.dt

    @property
    def t_end(self):
        return self.t0 + (self.n - 1) * self.dt

    def truncated(self, n):
        """The same lattice restricted to its first ``n`` samples."""
        return TimeGrid(self.t0, self.dt, n)


def make_grid(t0, dt, n):
    """Build a sampling grid of at least two samples.

    Raises ``ValidationError`` for non-positive or non-finite ``dt``,
    non-finite ``t0`` or ``n < 2``.
    """
    grid = TimeGrid(t0, dt, n)
    if grid.n < 2:
        raise ValidationError(f"n must be at least 2, got {grid.n}")
    return grid


@dataclass(frozen=True)
class Trajectory:
    """Named real-valued channels sampled on one :class:`TimeGrid`.

    ``values`` has shape ``(grid.n, len(channels))``.
    """

    grid: TimeGrid
    channels: tuple
    values: np.ndarray = field(repr=False)

    def __post_init__(self):
        channels = tuple(self.channels)
        if not channels:
            raise ValidationError("a trajectory needs at least one channel")
        for name in channels:
            if not isinstance(name, str) or not name:
                raise ValidationError(f"channel names must be non-empty strings, got {name!r}")
        if len(set(channels)) != len(channels):
            raise ValidationError(f"duplicate channel names in {channels}")
        values = np.array(self.values, dtype=float)
        if values.ndim == 1:
            values = values[:, None]
        if values.shape != (self.grid.n, len(channels)):
            raise ValidationError(
                f"values shape {values.shape} does not match "
                f"({self.grid.n}, {len(channels)})"
            )
        if not np.all(np.isfinite(values)):
            raise ValidationError("trajectory samples must be finite")
        values.setflags(write=False)
        object.__setattr__(self, "channels", channels)
        object.__setattr__(self, "values", values)

    @classmethod
    def from_channels(cls, grid, **channels):
        names = tuple(channels)
        return cls(grid, names, np.column_stack([np.asarray(channels[k], float) for k in names]))

    @property
    def times(self):
        return self.grid.times

    @property
    def n(self):
        return self.grid.n

    def __len__(self):
        return self.grid.n

    def __getitem__(self, name):
        return self.channel(name)

    def channel(self, name):
        try:
            j = self.channels.index(name)
        except ValueError:
            raise KeyError(f"no channel {name!r}; have {list(self.channels)}") from None
        return self.values[:, j]

    def single(self):
        """Samples of a one-channel trajectory."""
        if len(self.channels) != 1:
            raise ValidationError(
                f"expected a single-channel trajectory, got channels {list(self.channels)}"
            )
        return self.values[:, 0]

    def select(self, *names):
        return Trajectory(self.grid, names, np.column_stack([self.channel(k) for k in names]))

    def rename(self, *names):
        return Trajectory(self.grid, names, self.values)

    def head(self, n):
        return Trajectory(self.grid.truncated(n), self.channels, self.values[:n])


# -- bias coefficient ---------------------------------------------------------


@dataclass(frozen=True)
class Zero:
    """No bias: the ordinary derivative."""


@dataclass(frozen=True)
class Constant:
    c: float

    def __post_init__(self):
        object.__setattr__(self, "c", _finite("c", self.c))


@dataclass(frozen=True)
class ProportionalToState:
    """``eps(t) = k * y(t)``."""

    k: float

    def __post_init__(self):
        object.__setattr__(self, "k", _finite("k", self.k))


@dataclass(frozen=True)
class QuadraticInState:
    """``eps(t) = k * y(t)**2``."""

    k: float

    def __post_init__(self):
        object.__setattr__(self, "k", _finite("k", self.k))


@dataclass(frozen=True)
class Tabulated:
    """A prescribed coefficient series; must share the grid it is used on."""

    series: Trajectory

    def __post_init__(self):
        self.series.single()


BiasSpec = Union[Zero, Constant, ProportionalToState, QuadraticInState, Tabulated]


def eval_bias(bias, y, index=0):
    """Coefficient value for one sample with state ``y`` at grid ``index``."""
    y = _finite("y", y)
    if isinstance(bias, Tabulated):
        table = bias.series.single()
        if not 0 <= index < table.size:
            raise IndexError(f"index {index} outside tabulated bias of {table.size} samples")
        return float(table[index])
    if isinstance(bias, Zero):
        return 0.0
    if isinstance(bias, Constant):
        return bias.c
    if isinstance(bias, ProportionalToState):
        return bias.k * y
    if isinstance(bias, QuadraticInState):
        return bias.k * (y * y)
    raise TypeError(f"not a bias spec: {bias!r}")


def bias_values(bias, y, grid=None):
    """Vectorised :func:`eval_bias` over samples ``y[i]`` at indices ``0..len(y)-1``.

    For :class:`Tabulated` bias the table grid must equal ``grid`` (when
    given) and cover every sample.
    """
    y = np.asarray(y, dtype=float)
    if isinstance(bias, Tabulated):
        if grid is not None and bias.series.grid != grid:
            raise GridMismatchError(
                f"tabulated bias grid {bias.series.grid} differs from {grid}"
            )
        table = bias.series.single()
        if y.size > table.size:
            raise GridMismatchError(
                f"tabulated bias has {table.size} samples, need {y.size}"
            )
        return table[: y.size].copy()
    if isinstance(bias, Zero):
        return np.zeros_like(y)
    if isinstance(bias, Constant):
        return np.full_like(y, bias.c)
    if isinstance(bias, ProportionalToState):
        return bias.k * y
    if isinstance(bias, QuadraticInState):
        return bias.k * (y * y)
    raise TypeError(f"not a bias spec: {bias!r}")


# -- input signals ------------------------------------------------------------


@dataclass(frozen=True)
class Step:
    """``amplitude`` from ``onset`` on (inclusive), zero before."""

    amplitude: float = 1.0
    onset: float = 0.0

    def __post_init__(self):
        object.__setattr__(self, "amplitude", _finite("amplitude", self.amplitude))
        object.__setattr__(self, "onset", _finite("onset", self.onset))

    def __call__(self, t):
        t = np.asarray(t, dtype=float)
        return np.where(t >= self.onset, self.amplitude, 0.0)


@dataclass(frozen=True)
class Harmonic:
    """``amplitude * cos(omega*t + phase)``."""

    amplitude: float = 1.0
    omega: float = 1.0
    phase: float = 0.0

    def __post_init__(self):
        for name in ("amplitude", "omega", "phase"):
            object.__setattr__(self, name, _finite(name, getattr(self, name)))
        if self.omega == 0:
            raise ValidationError("harmonic omega must be non-zero")

    def __call__(self, t):
        return self.amplitude * np.cos(self.omega * np.asarray(t, dtype=float) + self.phase)


@dataclass(frozen=True)
class ConstantValue:
    value: float

    def __post_init__(self):
        object.__setattr__(self, "value", _finite("value", self.value))

    def __call__(self, t):
        return np.full_like(np.asarray(t, dtype=float), self.value)


@dataclass(frozen=True)
class TabulatedInput:
    """A sampled input. Off-grid times (Runge-Kutta stages) interpolate linearly."""

    series: Trajectory

    def __post_init__(self):
        self.series.single()

    def __call__(self, t):
        return np.interp(np.asarray(t, dtype=float), self.series.times, self.series.single())


InputSignal = Union[Step, Harmonic, ConstantValue, TabulatedInput]


def sample_input(sig, grid):
    """Evaluate ``sig`` on every grid time; returns a trajectory with channel ``"u"``."""
    if isinstance(sig, TabulatedInput):
        if sig.series.grid != grid:
            raise GridMismatchError(
                f"tabulated input grid {sig.series.grid} differs from {grid}"
            )
        return Trajectory(grid, ("u",), sig.series.single())
    if not isinstance(sig, (Step, Harmonic, ConstantValue)):
        raise TypeError(f"not an input signal: {sig!r}")
    return Trajectory(grid, ("u",), sig(grid.times))


def as_series(values: Sequence[float], dt: float, t0: float = 0.0, name: str = "y") -> Trajectory:
    """Wrap a plain sample sequence as a single-channel trajectory."""
    values = np.asarray(values, dtype=float)
    return Trajectory(TimeGrid(t0, dt, values.size), (name,), values)
