"""Dense Hermitian linear algebra and entropy functionals for 2- and 4-level systems.

Operators and states are plain complex ``numpy`` arrays; the helpers
``as_hermitian`` and ``as_density`` validate them on entry.  All matrix
functions (log, sqrt, exp) go through ``numpy.linalg.eigh``.
"""

from __future__ import annotations

import math
from typing import NamedTuple

import numpy as np

HERMITIAN_TOL = 1e-12
TRACE_TOL = 1e-10
NEG_EIG_TOL = 1e-10
# relative-entropy support test
SUPPORT_EIG_TOL = 1e-14
SUPPORT_WEIGHT_TOL = 1e-12
DIMS = (2, 4)

SIGMA_X = np.array([[0, 1], [1, 0]], dtype=complex)
SIGMA_Y = np.array([[0, -1j], [1j, 0]], dtype=complex)
SIGMA_Z = np.array([[1, 0], [0, -1]], dtype=complex)
IDENTITY2 = np.eye(2, dtype=complex)


class EigenDecomposition(NamedTuple):
    """Ascending eigenvalues and the unitary whose columns are eigenvectors."""

    values: np.ndarray
    vectors: np.ndarray


def as_hermitian(H, tol: float = HERMITIAN_TOL) -> np.ndarray:
    H = np.asarray(H, dtype=complex)
    if H.ndim != 2 or H.shape[0] != H.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {H.shape}")
    if H.shape[0] not in DIMS:
        raise ValueError(f"dimension must be 2 or 4, got {H.shape[0]}")
    if np.max(np.abs(H - H.conj().T), initial=0.0) > tol:
        raise ValueError("matrix is not Hermitian")
    return H


def as_density(rho) -> np.ndarray:
    rho = as_hermitian(rho)
    tr = np.trace(rho).real
    if abs(tr - 1.0) > TRACE_TOL:
        raise ValueError(f"density matrix has trace {tr!r}, expected 1")
    if np.linalg.eigvalsh(rho)[0] < -NEG_EIG_TOL:
        raise ValueError("density matrix has a negative eigenvalue")
    return rho


def _check_same_dim(a: np.ndarray, b: np.ndarray) -> None:
    if a.shape != b.shape:
        raise ValueError(f"dimension mismatch: {a.shape} vs {b.shape}")


def eig_hermitian(H) -> EigenDecomposition:
    H = as_hermitian(H)
    values, vectors = np.linalg.eigh(H)
    return EigenDecomposition(values, vectors)


def _clipped_spectrum(rho: np.ndarray) -> np.ndarray:
    lam = np.linalg.eigvalsh(rho)
    if lam[0] < -NEG_EIG_TOL:
        raise ValueError(f"eigenvalue {lam[0]:.3e} is below the round-off threshold")
    return np.clip(lam, 0.0, None)


def _xlogx(p: np.ndarray) -> np.ndarray:
    out = np.zeros_like(p)
    mask = p > 0
    out[mask] = p[mask] * np.log(p[mask])
    return out


def von_neumann_entropy(rho) -> float:
    """Entropy ``-tr(rho ln rho)`` in nats, with ``0 ln 0 = 0``."""
    rho = as_density(rho)
    return float(max(-np.sum(_xlogx(_clipped_spectrum(rho))), 0.0))


def shannon_entropy(p) -> float:
    p = np.clip(np.asarray(p, dtype=float), 0.0, None)
    return float(max(-np.sum(_xlogx(p)), 0.0))


def psd_sqrt(rho: np.ndarray) -> np.ndarray:
    lam, V = np.linalg.eigh(rho)
    return (V * np.sqrt(np.clip(lam, 0.0, None))) @ V.conj().T


def fidelity(rho, sigma) -> float:
    """Uhlmann fidelity ``(tr sqrt(sqrt(rho) sigma sqrt(rho)))**2``."""
    rho = as_density(rho)
    sigma = as_density(sigma)
    _check_same_dim(rho, sigma)
    r = psd_sqrt(rho)
    inner = r @ sigma @ r
    inner = 0.5 * (inner + inner.conj().T)
    lam = np.clip(np.linalg.eigvalsh(inner), 0.0, None)
    return float(min(np.sum(np.sqrt(lam)) ** 2, 1.0))


def relative_entropy(rho, sigma) -> float:
    """Quantum relative entropy ``S(rho || sigma)`` in nats.

    Returns ``math.inf`` when the support of ``rho`` is not contained in the
    support of ``sigma``.
    """
    rho = as_density(rho)
    sigma = as_density(sigma)
    _check_same_dim(rho, sigma)
    mu, W = np.linalg.eigh(sigma)
    # weight of rho on each eigenvector of sigma
    weights = np.real(np.einsum("ij,jk,ki->i", W.conj().T, rho, W))
    null = mu < SUPPORT_EIG_TOL
    if np.any(weights[null] > SUPPORT_WEIGHT_TOL):
        return math.inf
    cross = float(np.sum(weights[~null] * np.log(mu[~null])))
    value = float(np.sum(_xlogx(_clipped_spectrum(rho)))) - cross
    return max(value, 0.0)


def dephase(rho, basis=None) -> np.ndarray:
    """Drop the coherences of ``rho`` in ``basis`` (columns), returning the lab-frame result."""
    rho = np.asarray(rho, dtype=complex)
    if basis is None:
        return np.diag(np.diag(rho))
    U = _basis_matrix(basis, rho.shape[0])
    local = U.conj().T @ rho @ U
    return U @ np.diag(np.diag(local)) @ U.conj().T


def _basis_matrix(basis, dim: int) -> np.ndarray:
    U = basis.vectors if isinstance(basis, EigenDecomposition) else np.asarray(basis, dtype=complex)
    if U.shape != (dim, dim):
        raise ValueError(f"dimension mismatch: basis {U.shape} for a {dim}-level state")
    if np.max(np.abs(U.conj().T @ U - np.eye(dim))) > 1e-10:
        raise ValueError("basis is not unitary")
    return U


def rel_entropy_of_coherence(rho, basis) -> float:
    """Relative entropy of coherence of ``rho`` with respect to the columns of ``basis``.

    ``basis`` is an :class:`EigenDecomposition` or a unitary matrix.
    """
    rho = as_density(rho)
    U = _basis_matrix(basis, rho.shape[0])
    local = U.conj().T @ rho @ U
    populations = np.clip(np.real(np.diag(local)), 0.0, None)
    return max(shannon_entropy(populations) - von_neumann_entropy(rho), 0.0)


def gibbs_populations(energies, beta: float) -> np.ndarray:
    energies = np.asarray(energies, dtype=float)
    w = np.exp(-beta * (energies - energies.min()))
    return w / w.sum()


def thermal_state(H, beta: float) -> np.ndarray:
    """Gibbs state ``exp(-beta H) / Z``."""
    if not beta > 0:
        raise ValueError("beta must be positive")
    lam, V = eig_hermitian(H)
    return (V * gibbs_populations(lam, beta)) @ V.conj().T


def expm_hermitian(H: np.ndarray, factor: complex) -> np.ndarray:
    """``exp(factor * H)`` for Hermitian ``H`` via its eigendecomposition."""
    lam, V = np.linalg.eigh(H)
    return (V * np.exp(factor * lam)) @ V.conj().T


def purity(rho) -> float:
    rho = np.asarray(rho)
    return float(np.real(np.trace(rho @ rho)))


def ket_to_dm(psi) -> np.ndarray:
    psi = np.asarray(psi, dtype=complex)
    psi = psi / np.linalg.norm(psi)
    return np.outer(psi, psi.conj())
