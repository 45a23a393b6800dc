import numpy as np
import pytest

from meterbench.datagen import CohortConfig, generate_cohort
from meterbench.forecast import prepare

SMALL_CONFIG = CohortConfig(
    n_meters=60,
    seed=42,
    unavailability_profile=((0.30, 7), (0.50, 5), (0.70, 10), (0.90, 4)),
)


@pytest.fixture(scope="session")
def small_cohort():
    return generate_cohort(SMALL_CONFIG)


@pytest.fixture(scope="session")
def small_prep(small_cohort):
    return prepare(small_cohort)


@pytest.fixture(scope="session")
def truth_arrays(small_cohort):
    return {mid: mo.values.copy()
            for mid, mo in small_cohort.ground_truth_2018.items()}


def rng_of(seed):
    return np.random.default_rng(seed)


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    """One PASS/FAIL line per acceptance criterion at the end of the run."""
    lines = []
    for status, tag in (("passed", "PASS"), ("failed", "FAIL"), ("error", "FAIL")):
        for rep in terminalreporter.stats.get(status, []):
            nodeid = getattr(rep, "nodeid", "")
            if "test_acceptance.py" in nodeid and "::" in nodeid:
                lines.append((nodeid.split("::")[-1], tag))
    if lines:
        terminalreporter.write_sep("-", "acceptance criteria")
        for name, tag in sorted(lines):
            terminalreporter.write_line(f"[{tag}] {name}")
