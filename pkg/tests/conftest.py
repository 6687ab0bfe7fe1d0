import numpy as np
import pytest
from scipy.linalg import expm

from squeezeflow.bogoliubov import BogoliubovN


def random_bogoliubov(rng, n, strength=0.5):
    """exp of a random element of the Lie algebra: anti-Hermitian A, symmetric B."""
    a = rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n))
    a = 0.5 * (a - a.conj().T)
    b = rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n))
    b = 0.5 * strength * (b + b.T)
    gen = np.block([[a, b.conj()], [b, a.conj()]])
    return BogoliubovN.from_matrix(expm(gen))


def random_symmetric(rng, n, norm=1.0):
    a = rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n))
    a = a + a.T
    return norm * a / np.linalg.norm(a, 2)


def random_unitary(rng, n):
    q, r = np.linalg.qr(rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n)))
    return q * (np.diag(r) / np.abs(np.diag(r)))


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


ACCEPTANCE_LINES = {}


def record_criterion(number, ok, detail):
    """Store a one-line verdict for the acceptance summary and return ``ok``."""
    ACCEPTANCE_LINES[number] = f"criterion {number:2d}: {'PASS' if ok else 'FAIL'}  {detail}"
    return ok


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_LINES:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(ACCEPTANCE_LINES):
        terminalreporter.write_line(ACCEPTANCE_LINES[number])
