import numpy as np
import pytest

from qudit_readout import _kernels

ACCEPTANCE_LINES = []


@pytest.fixture
def record_acceptance():
    """Register a one-line verdict for an acceptance criterion."""

    def _record(label, ok, detail=""):
        ACCEPTANCE_LINES.append((label, bool(ok), detail))
        return ok

    return _record


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_LINES:
        return
    terminalreporter.section("acceptance criteria")
    for label, ok, detail in sorted(ACCEPTANCE_LINES, key=lambda r: r[0]):
        terminalreporter.write_line(f"{'PASS' if ok else 'FAIL'}  {label}  {detail}")


@pytest.fixture(params=["numba", "numpy"])
def kernel_backend(request, monkeypatch):
    """Route the public kernel aliases through one implementation."""
    for name in ("self_energy", "lambda_explicit", "second_order", "state_shifts"):
        monkeypatch.setattr(_kernels, name, getattr(_kernels, f"{name}_{request.param}"))
    return request.param


@pytest.fixture
def rng():
    return np.random.default_rng(12345)
