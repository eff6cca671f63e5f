import numpy as np
import pytest


def dense_ladder(dim):
    """Annihilation operator as a dense ``dim x dim`` matrix."""
    return np.diag(np.sqrt(np.arange(1, dim)), 1).astype(complex)


def dense_expectation(amplitudes, op_builder, pad=12):
    """<psi|O|psi> with O built from dense ladder matrices on a padded space."""
    psi = np.pad(np.asarray(amplitudes, dtype=complex), (0, pad))
    a = dense_ladder(psi.size)
    return np.vdot(psi, op_builder(a, a.conj().T) @ psi)


@pytest.fixture
def dense():
    return dense_expectation


_ACCEPTANCE = []


@pytest.fixture
def criterion(capsys):
    """Record and print one PASS/FAIL line for an acceptance criterion."""

    def record(number, title, passed, detail=""):
        line = f"criterion {number} [{'PASS' if passed else 'FAIL'}] {title}"
        if detail:
            line += f" :: {detail}"
        _ACCEPTANCE.append(line)
        with capsys.disabled():
            print("\n" + line)
        return passed

    return record


def pytest_terminal_summary(terminalreporter):
    if _ACCEPTANCE:
        terminalreporter.section("acceptance criteria")
        for line in sorted(_ACCEPTANCE, key=lambda s: int(s.split()[1])):
            terminalreporter.write_line(line)
