import math

import mpmath
import numpy as np
import pytest
from hypothesis import settings

settings.register_profile("zetalab", deadline=None, max_examples=40)
settings.load_profile("zetalab")


def direct_hurwitz(s, alpha, coeffs=(1,), terms=10**6):
    """Partial sum of ``sum b_m (m + alpha)**(-s)`` plus a bound on the omitted tail.

    The tail bound is the integral comparison for ``Re s > 1``.
    """
    m = np.arange(terms, dtype=float)
    b = np.asarray(coeffs, dtype=complex)[np.arange(terms) % len(coeffs)]
    terms_ = b * np.exp(-s * np.log(m + alpha))
    value = complex(terms_[::-1].sum())
    sigma = complex(s).real
    x = terms - 1 + alpha
    tail = max(abs(c) for c in coeffs) * x ** (1 - sigma) / (sigma - 1)
    return value, tail


@pytest.fixture(scope="session")
def zeta4():
    return float(mpmath.zeta(4))


def mp_hurwitz(s, a):
    return complex(mpmath.zeta(mpmath.mpc(s.real, s.imag), a))


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


def pytest_terminal_summary(terminalreporter):
    from test_acceptance import RESULTS

    if RESULTS:
        terminalreporter.section("acceptance criteria")
        for line in sorted(RESULTS, key=lambda l: int(l.split()[1].rstrip(":"))):
            terminalreporter.write_line(line)
