"""Shared fixtures for the mixcurve test suite."""

import pytest

from src.config import get_tolerances
from src.polynomials.parser import parse

WORKED_EXAMPLE = "u^2*conj(u)*(u - 2*conj(u)) + 1"
CHART_EXAMPLE = "conj(u) - 2*u + u^3*conj(u)^2"
FOURTH_ROOT_THIRD = (1 / 3) ** 0.25


@pytest.fixture
def tol():
    return get_tolerances(1.0)


@pytest.fixture
def worked():
    """u³ū − 2u²ū² + 1: roots ±(1/3)^(1/4)·i (sm +1) and ±1 (sm −1)."""
    return parse(WORKED_EXAMPLE)


@pytest.fixture
def chart():
    return parse(CHART_EXAMPLE)


@pytest.fixture
def quadratic_family():
    """u² + u + ū: mixed-singular root at 0, simple root at −2."""
    return parse("u^2 + u + conj(u)")


@pytest.fixture(autouse=True)
def _clean_env(monkeypatch):
    monkeypatch.delenv("MIXCURVE_TOL", raising=False)
    monkeypatch.delenv("MIXCURVE_LOG_LEVEL", raising=False)
