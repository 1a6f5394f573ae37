"""The frozen reference values must agree with their independent derivations."""

import math

import pytest

import oracles


def test_frozen_values_match_quadrature():
    values = oracles.accumulation_oracle()
    assert values["model"] == pytest.approx(oracles.A_MODEL, abs=1e-10)
    assert values["proportional"] == pytest.approx(oracles.A_PROPORTIONAL, abs=1e-10)
    assert values["bubble"] == pytest.approx(oracles.A_BUBBLE, abs=1e-10)


def test_closed_forms():
    # model: cos(t/2) falls from 1 to -1 and back; the rising half contributes 2
    assert oracles.A_MODEL == 2.0
    # amplitude-phase form R cos(t/2 + phi) with R = sqrt(0.5^2 + 0.6^2)
    assert oracles.A_PROPORTIONAL == pytest.approx(4 * math.sqrt(0.61), rel=1e-15)


def test_bubble_by_midpoint_rule():
    # brute-force cross-check of the adaptive quadrature
    n = 400_000
    h = oracles.PERIOD / n
    total = sum(max(oracles.bubble_rate((i + 0.5) * h), 0.0) for i in range(n)) * h
    assert total == pytest.approx(oracles.A_BUBBLE, abs=1e-6)
