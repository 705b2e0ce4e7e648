"""Seeded random elements for property checks and stress contexts."""

import numpy as np


def random_element(rng: np.random.Generator, dim: int, scale: float = 1.0) -> np.ndarray:
    """Complex Gaussian matrix (Ginibre ensemble)."""
    return scale * (rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim)))


def random_hermitian(rng: np.random.Generator, dim: int) -> np.ndarray:
    z = random_element(rng, dim)
    return (z + z.conj().T) / 2


def random_unitary(rng: np.random.Generator, dim: int) -> np.ndarray:
    """Haar unitary via QR with the diagonal phase correction."""
    q, r = np.linalg.qr(random_element(rng, dim))
    phases = np.diag(r) / np.abs(np.diag(r))
    return q * phases


def random_unit_vector(rng: np.random.Generator, dim: int) -> np.ndarray:
    v = rng.standard_normal(dim) + 1j * rng.standard_normal(dim)
    return v / np.linalg.norm(v)


def random_diagonal_hermitian(rng: np.random.Generator, dim: int) -> np.ndarray:
    """Nondegenerate real diagonal conjugated by a random unitary."""
    u = random_unitary(rng, dim)
    values = np.sort(rng.uniform(-3.0, 3.0, dim)) + np.arange(dim) * 0.1
    return u @ np.diag(values) @ u.conj().T
