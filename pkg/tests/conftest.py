import pytest

from graphene_landau import core


@pytest.fixture
def phys_half():
    return core.PhysicalParams.natural(0.5)


@pytest.fixture
def dp_half(phys_half):
    """D = 0.5, lambda = 1, so a = 1 and b = 0.5."""
    return core.derive_params(phys_half, 1.0)


@pytest.fixture
def phys_unit():
    return core.PhysicalParams.natural(1.0)


@pytest.fixture
def dp_unit(phys_unit):
    """D = 1, lambda = 1, so a = sqrt(2) and b = 1."""
    return core.derive_params(phys_unit, 1.0)


def derived(d, lambda_max=1.0):
    return core.derive_params(core.PhysicalParams.natural(d), lambda_max)


_ACCEPTANCE_LINES = []


@pytest.fixture
def criterion():
    """Record a one-line PASS/FAIL verdict and fail the test if it did not pass."""

    def record(label, ok, detail):
        _ACCEPTANCE_LINES.append(f"{'PASS' if ok else 'FAIL'}  {label}: {detail}")
        assert ok, f"{label}: {detail}"

    return record


def pytest_terminal_summary(terminalreporter):
    if _ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in _ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
