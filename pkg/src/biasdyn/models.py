"""Catalog of models written in biased form ``y⊙ = rate(t, y, u)``.

Each entry is a :class:`ModelSpec`: one bias coefficient per channel plus a
rate function. The ordinary form is recovered as ``ẏ = rate - eps*y``.
Closed-form solutions and the Lotka-Volterra first integral are provided
as test oracles.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from .exceptions import SpecSyntaxError, ValidationError
from .signal import Constant, _finite, parse_real

__all__ = [
    "ModelSpec",
    "first_order_lag_biased",
    "first_order_step_response",
    "logistic_biased",
    "logistic_solution",
    "predator_prey_biased",
    "lotka_volterra_invariant",
    "parse_model",
]


@dataclass(frozen=True)
class ModelSpec:
    """A model ``y⊙_j = rate(t, y, u)_j`` with bias ``biases[j]`` on channel ``j``.

    ``rate`` receives the time, the state vector and the scalar input and
    returns a vector of length ``dimension``.
    """

    biases: tuple
    rate: Callable = field(compare=False)
    channels: tuple = None
    kind: str = "generic"
    params: dict = field(default_factory=dict, compare=False)

    def __post_init__(self):
        biases = tuple(self.biases)
        if not biases:
            raise ValidationError("a model needs at least one channel")
        object.__setattr__(self, "biases", biases)
        channels = self.channels
        if channels is None:
            channels = ("y",) if len(biases) == 1 else tuple(f"y{j + 1}" for j in range(len(biases)))
        if len(channels) != len(biases):
            raise ValidationError("one channel name per bias is required")
        object.__setattr__(self, "channels", tuple(channels))

    @property
    def dimension(self):
        return len(self.biases)


def first_order_lag_biased(K, T):
    """``T ẏ + y = K u`` as ``y⊙ = K u / T`` with ``eps = 1/T``."""
    K, T = _finite("K", K), _finite("T", T)
    if T <= 0:
        raise ValidationError(f"time constant T must be positive, got {T}")
    gain = K / T

    def rate(t, y, u):
        return np.array([gain * u])

    return ModelSpec((Constant(1.0 / T),), rate, kind="lag", params={"K": K, "T": T})


def first_order_step_response(K, T, t):
    """Unit-step response ``K (1 - exp(-t/T))`` from rest; ``t`` may be an array."""
    if T <= 0:
        raise ValidationError(f"time constant T must be positive, got {T}")
    t = np.asarray(t, dtype=float)
    if np.any(t < 0):
        raise ValidationError("step response is defined for t >= 0 only")
    out = K * -np.expm1(-t / T)
    return float(out) if out.ndim == 0 else out


def logistic_biased(sigma, Kcap):
    """``Ṅ = σN(1 - N/K)`` as ``N⊙ = -σN²/K`` with ``eps = -σ``."""
    sigma, Kcap = _finite("sigma", sigma), _finite("Kcap", Kcap)
    if Kcap <= 0:
        raise ValidationError(f"carrying capacity must be positive, got {Kcap}")

    def rate(t, y, u):
        return -sigma * y * y / Kcap

    return ModelSpec(
        (Constant(-sigma),), rate, channels=("N",), kind="logistic",
        params={"sigma": sigma, "K": Kcap},
    )


def logistic_solution(sigma, Kcap, N0, t):
    t = np.asarray(t, dtype=float)
    return Kcap / (1.0 + (Kcap - N0) / N0 * np.exp(-sigma * t))


def predator_prey_biased(eps1, eps2, gamma1, gamma2):
    """Lotka-Volterra system in biased form.

    Prey ``N1`` carries bias ``-eps1`` with rate ``-gamma1 N1 N2``; predator
    ``N2`` carries bias ``eps2`` with rate ``gamma2 N1 N2``.
    """
    values = {
        "eps1": eps1, "eps2": eps2, "gamma1": gamma1, "gamma2": gamma2,
    }
    for name, v in values.items():
        values[name] = _finite(name, v)
        if values[name] <= 0:
            raise ValidationError(f"{name} must be positive, got {v}")
    g1, g2 = values["gamma1"], values["gamma2"]

    def rate(t, y, u):
        prod = y[0] * y[1]
        return np.array([-g1 * prod, g2 * prod])

    return ModelSpec(
        (Constant(-values["eps1"]), Constant(values["eps2"])), rate,
        channels=("N1", "N2"), kind="predprey", params=values,
    )


def lotka_volterra_invariant(eps1, eps2, gamma1, gamma2, N1, N2):
    """First integral ``γ2 N1 - ε2 ln N1 + γ1 N2 - ε1 ln N2``."""
    N1 = np.asarray(N1, dtype=float)
    N2 = np.asarray(N2, dtype=float)
    if np.any(N1 <= 0) or np.any(N2 <= 0):
        raise ValidationError("populations must be positive")
    out = gamma2 * N1 - eps2 * np.log(N1) + gamma1 * N2 - eps1 * np.log(N2)
    return float(out) if out.ndim == 0 else out


_MODEL_FIELDS = {
    "lag": (("K", "T"), first_order_lag_biased),
    "logistic": (("sigma", "K"), logistic_biased),
    "predprey": (("e1", "e2", "g1", "g2"), predator_prey_biased),
}


def parse_model(text):
    """Parse ``lag:K=..,T=..``, ``logistic:sigma=..,K=..`` or
    ``predprey:e1=..,e2=..,g1=..,g2=..``."""
    kind, sep, rest = text.strip().partition(":")
    if kind not in _MODEL_FIELDS or not sep:
        raise SpecSyntaxError(kind, f"unknown model {kind!r}")
    names, build = _MODEL_FIELDS[kind]
    given = {}
    for item in rest.split(","):
        key, eq, value = item.partition("=")
        key = key.strip()
        if not eq or key not in names or key in given:
            raise SpecSyntaxError(item, f"bad parameter {item!r} for model {kind!r}")
        given[key] = parse_real(value, f"model {kind!r}")
    missing = [k for k in names if k not in given]
    if missing:
        raise SpecSyntaxError(text, f"model {kind!r} missing parameters {missing}")
    return build(*(given[k] for k in names))
