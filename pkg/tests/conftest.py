from __future__ import annotations

import random
from pathlib import Path

import pytest

from apolar.inverse_system import build
from apolar.multipoly import Poly, frame, parse

DATA = Path(__file__).parent / "data"


def system(texts, nvars, names=None):
    return build([parse(t, nvars, names) for t in texts], nvars)


def random_poly(nvars, max_deg, rng, density=0.5, lo=-5, hi=5):
    """Random polynomial of exact degree ``max_deg`` (nonzero top part)."""
    terms = {}
    for mono in frame(nvars, max_deg, "upto"):
        if rng.random() < density:
            terms[mono] = rng.randint(lo, hi)
    top = rng.choice(frame(nvars, max_deg))
    terms[top] = rng.choice([c for c in range(lo, hi + 1) if c])
    return Poly(nvars, terms)


def random_system(rng, max_vars=3, max_deg=3, max_gens=3):
    m = rng.randint(1, max_vars)
    gens = [random_poly(m, rng.randint(1, max_deg), rng, density=rng.choice([0.2, 0.5]))
            for _ in range(rng.randint(1, max_gens))]
    return build(gens, m)


@pytest.fixture
def rng():
    return random.Random(20240611)


@pytest.fixture
def data_dir():
    return DATA


def pytest_terminal_summary(terminalreporter):
    import sys
    mod = sys.modules.get("test_acceptance")
    if mod is None or not mod.RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(mod.RESULTS):
        terminalreporter.write_line(mod.RESULTS[n])
