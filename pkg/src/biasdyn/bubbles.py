"""Bubble case study on the harmonic carrier ``y(t) = cos(t/2)``.

Three derivative states are compared: bias-free (``"model"``), constant
bias 0.6 (``"proportional"``) and bias ``0.6*y(t)`` (``"bubble"``). The
positive part of each derivative series, integrated over one carrier period,
is reported as a sphere volume.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .calculus import biased_derivative_series, positive_part_integral
from .exceptions import ValidationError
from .signal import (
    Constant,
    Harmonic,
    ProportionalToState,
    TimeGrid,
    Trajectory,
    Zero,
    sample_input,
)

__all__ = [
    "CARRIER",
    "CARRIER_PERIOD",
    "STATE_NAMES",
    "AccumulationResult",
    "CaseStudyResult",
    "case_study_grid",
    "case_study_states",
    "accumulate_positive_periods",
    "sphere_radius",
    "sphere_volume",
    "bubble_enhancement",
]

CARRIER = Harmonic(1.0, 0.5, 0.0)
CARRIER_PERIOD = 4.0 * math.pi
STATE_NAMES = ("model", "proportional", "bubble")


def _state_biases(coefficient):
    return (Zero(), Constant(coefficient), ProportionalToState(coefficient))


@dataclass(frozen=True)
class AccumulationResult:
    state_name: str
    accumulation: float
    sphere_volume: float
    sphere_radius: float


@dataclass(frozen=True)
class CaseStudyResult:
    """Derivative states on a shared grid plus, once computed, their accumulations.

    ``signal`` is the carrier on the full grid; ``states`` holds channels
    ``model``, ``proportional`` and ``bubble`` on the grid shortened by one
    sample.
    """

    grid: TimeGrid
    signal: Trajectory
    states: Trajectory
    accumulations: tuple = ()

    def __post_init__(self):
        if self.states.channels != STATE_NAMES:
            raise ValidationError(f"states must be named {STATE_NAMES}")
        if self.states.grid != self.grid.truncated(self.grid.n - 1):
            raise ValidationError("states must share the case-study grid")

    def accumulation(self, name):
        for acc in self.accumulations:
            if acc.state_name == name:
                return acc
        raise KeyError(name)


def case_study_grid(dt=1e-3, periods=1.0, t0=0.0):
    """Smallest grid whose derivative series covers ``periods`` carrier periods."""
    if not periods > 0:
        raise ValidationError(f"periods must be positive, got {periods}")
    n = math.ceil(periods * CARRIER_PERIOD / dt - 1e-9) + 2
    return TimeGrid(t0, dt, n)


def case_study_states(grid, coefficient=0.6):
    """Biased derivatives of ``cos(t/2)`` under the three bias states."""
    if grid.span < CARRIER_PERIOD * (1 - 1e-12):
        raise ValidationError(
            f"grid spans {grid.span:.6g}, shorter than one carrier period {CARRIER_PERIOD:.6g}"
        )
    signal = sample_input(CARRIER, grid).rename("y")
    columns = [
        biased_derivative_series(signal, bias).single()
        for bias in _state_biases(coefficient)
    ]
    states = Trajectory(grid.truncated(grid.n - 1), STATE_NAMES, np.column_stack(columns))
    return CaseStudyResult(grid, signal, states)


def sphere_radius(volume):
    if volume < 0:
        raise ValidationError(f"volume must be non-negative, got {volume}")
    return (3.0 * volume / (4.0 * math.pi)) ** (1.0 / 3.0)


def sphere_volume(radius):
    return 4.0 * math.pi * radius**3 / 3.0


def accumulate_positive_periods(result, period=CARRIER_PERIOD, start=None, mask="deriv"):
    """Fill in positive-part accumulations over ``[start, start + period]``.

    ``mask="deriv"`` integrates the positive part of each derivative series.
    ``mask="signal"`` further restricts it to samples where the carrier is
    positive. The sphere volume equals the accumulation.
    """
    states = result.states
    if start is None:
        start = states.grid.t0
    if not period > 0:
        raise ValidationError(f"period must be positive, got {period}")
    if start + period > states.grid.t_end * (1 + 1e-12) + 1e-12:
        raise ValidationError(
            f"period window ends at {start + period:.6g}, beyond the states' last "
            f"sample at {states.grid.t_end:.6g}"
        )
    if mask == "deriv":
        carrier_mask = None
    elif mask == "signal":
        carrier_mask = result.signal.head(states.n)
    else:
        raise ValidationError(f"mask must be 'deriv' or 'signal', got {mask!r}")
    window = (start, min(start + period, states.grid.t_end))
    accs = []
    for name in STATE_NAMES:
        area = positive_part_integral(states.select(name), carrier_mask, window=window)
        accs.append(AccumulationResult(name, area, area, sphere_radius(area)))
    return CaseStudyResult(result.grid, result.signal, states, tuple(accs))


def bubble_enhancement(result):
    """Bubble state minus model state, with its first maximum.

    Returns ``(series, peak_time, peak_value)``; ties go to the earliest
    sample.
    """
    states = result.states
    diff = states.channel("bubble") - states.channel("model")
    series = Trajectory(states.grid, ("enhancement",), diff)
    i = int(np.argmax(diff))
    return series, float(states.times[i]), float(diff[i])
