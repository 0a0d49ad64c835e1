import itertools
import math

import numpy as np
import pytest

from irsbeam.core import BeamConfig, snr_boost

_ACCEPTANCE: list[tuple[str, bool, str]] = []


def naive_best(inst, alphabet):
    """Best boost by walking every index vector with itertools; tiny N only."""
    best = -math.inf
    for k in itertools.product(alphabet.indices, repeat=inst.n):
        best = max(best, snr_boost(inst, BeamConfig(k, alphabet)))
    return best


def rect_boost(inst, phases):
    """Boost evaluated with real arithmetic only, for cross-checking snr_boost."""
    re = inst.h0.beta * math.cos(inst.h0.alpha)
    im = inst.h0.beta * math.sin(inst.h0.alpha)
    for ch, t in zip(inst.reflected, phases):
        re += ch.beta * math.cos(ch.alpha + t)
        im += ch.beta * math.sin(ch.alpha + t)
    return (re * re + im * im) / inst.h0.beta**2


def record_acceptance(name: str, passed: bool, detail: str) -> None:
    _ACCEPTANCE.append((name, passed, detail))


def pytest_terminal_summary(terminalreporter):
    if not _ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for name, passed, detail in _ACCEPTANCE:
        terminalreporter.write_line(f"{'PASS' if passed else 'FAIL'}  {name}: {detail}")


@pytest.fixture
def rng():
    return np.random.default_rng(20211207)
