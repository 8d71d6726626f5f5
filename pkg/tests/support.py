"""Shared test helpers: random states, channels, and unitaries.

numpy.linalg is used freely here as the independent oracle side; the
package's own eigensolver is what these helpers help to check.
"""

from __future__ import annotations

import numpy as np

from measengine.channels import KrausSet
from measengine.states import DensityMatrix


def random_density_matrix(rng: np.random.Generator, dim: int) -> DensityMatrix:
    g = rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim))
    m = g @ g.conj().T
    return DensityMatrix(m / np.trace(m).real)


def psd_sqrt(m: np.ndarray) -> np.ndarray:
    """Principal square root of a Hermitian PSD matrix."""
    w, v = np.linalg.eigh(m)
    w = np.clip(w, 0.0, None)
    return (v * np.sqrt(w)) @ v.conj().T


def random_kraus_set(rng: np.random.Generator, dim: int, n_ops: int) -> KrausSet:
    """Random valid set: n_ops - 1 scaled contractions plus the completion."""
    assert n_ops >= 2
    raw = [rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim)) for _ in range(n_ops - 1)]
    total = sum(g.conj().T @ g for g in raw)
    scale = np.sqrt(0.9 / np.linalg.eigvalsh(total)[-1])  # remainder stays PSD
    ops = [scale * g for g in raw]
    remainder = np.eye(dim) - sum(g.conj().T @ g for g in ops)
    ops.append(psd_sqrt(remainder))
    return KrausSet(tuple(ops), label=f"random(dim={dim},n={n_ops})")


def random_givens_unitary(rng: np.random.Generator, dim: int) -> np.ndarray:
    """Product of complex Givens rotations over all index pairs."""
    u = np.eye(dim, dtype=complex)
    for i in range(dim - 1):
        for j in range(i + 1, dim):
            theta = rng.uniform(0.0, 2.0 * np.pi)
            phi = rng.uniform(0.0, 2.0 * np.pi)
            g = np.eye(dim, dtype=complex)
            c, s = np.cos(theta), np.sin(theta)
            g[i, i] = c
            g[i, j] = -s * np.exp(1j * phi)
            g[j, i] = s * np.exp(-1j * phi)
            g[j, j] = c
            u = u @ g
    return u


def random_hermitian(rng: np.random.Generator, dim: int) -> np.ndarray:
    g = rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim))
    return 0.5 * (g + g.conj().T)
