"""Shared fixtures: cached singular systems and an independent spectrum oracle."""

import numpy as np
import pytest

from ipcrypt import hso


@pytest.fixture(scope="session")
def svd256():
    return hso.hso_svd(256)


@pytest.fixture(scope="session")
def svd512():
    return hso.hso_svd(512)


@pytest.fixture(scope="session")
def reference_spectrum_2048():
    """Dense eigenvalue oracle at n = 2048, built without the library.

    The grid, kernel, and decomposition are spelled out from scratch here so
    that the operator module is checked against an independent construction
    rather than against itself.
    """
    n = 2048
    y = (np.arange(n) + 0.5) / n
    kernel = np.exp(-np.abs(y[:, None] - y[None, :])) / n
    eigenvalues = np.linalg.eigvalsh(kernel)
    return np.sort(eigenvalues)[::-1]
