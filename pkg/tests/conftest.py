import math

import numpy as np
import pytest
from hypothesis import HealthCheck, settings

settings.register_profile(
    "repo", max_examples=60, deadline=None, derandomize=True,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile("repo")

SEED = 42


@pytest.fixture
def rng():
    return np.random.default_rng(SEED)


BOX_LAM2 = 4 * math.pi**2
SQRT_PI_2 = math.sqrt(math.pi) / 2


_ACCEPTANCE_KEY = pytest.StashKey[dict]()


def pytest_configure(config):
    config.stash[_ACCEPTANCE_KEY] = {}


@pytest.fixture
def acceptance(request):
    """Record one acceptance criterion: ``acceptance(n, title, error, tol)``.

    Prints the PASS/FAIL line right away and again in the terminal summary.
    """
    lines = request.config.stash[_ACCEPTANCE_KEY]

    def record(n, title, error, tol, detail=""):
        ok = bool(np.isfinite(error) and error <= tol)
        line = (f"criterion {n:>2} {'PASS' if ok else 'FAIL'}  {title}: "
                f"max error {error:.3e} (tol {tol:.0e}){'  ' + detail if detail else ''}")
        lines[n] = line
        print(line)
        return ok

    return record


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    lines = config.stash.get(_ACCEPTANCE_KEY, {})
    if lines:
        terminalreporter.section("acceptance criteria")
        for n in sorted(lines):
            terminalreporter.write_line(lines[n])
