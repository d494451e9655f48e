import sys

import numpy as np
import pytest


def cgauss(rng, *shape):
    return rng.standard_normal(shape) + 1j * rng.standard_normal(shape)


def random_matrix(rng, n, rank=None):
    if rank is None or rank >= n:
        return cgauss(rng, n, n)
    return cgauss(rng, n, rank) @ cgauss(rng, rank, n)


def random_hermitian(rng, n):
    a = cgauss(rng, n, n)
    return 0.5 * (a + a.conj().T)


def random_pd(rng, n, cond):
    q, _ = np.linalg.qr(cgauss(rng, n, n))
    return (q * np.geomspace(1.0, cond, n)) @ q.conj().T


def matrix_corpus(seed=0, count=200, rank_deficient=20, dims=(2, 64)):
    """Seeded square matrices; the first `rank_deficient` ones are singular."""
    rng = np.random.default_rng(seed)
    out = []
    for k in range(count):
        n = int(rng.integers(dims[0], dims[1] + 1))
        if k < rank_deficient:
            out.append(random_matrix(rng, n, rank=int(rng.integers(0, n))))
        else:
            out.append(random_matrix(rng, n))
    return out


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


def pytest_terminal_summary(terminalreporter):
    mod = sys.modules.get("test_acceptance")
    if mod is None or not mod.RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for line in sorted(mod.RESULTS, key=lambda s: int(s.split(".")[0].split()[-1])):
        terminalreporter.write_line(line)
