"""
Fixed-size complex matrix kernel (2x2, 3x3, 4x4)

Products, adjoints, Kronecker products, a cyclic Jacobi Hermitian
eigensolver and the PSD square root built on it.
"""
import logging
from typing import Tuple

import numpy as np

from components.errors import NotPSDError, UsageError, ValidationError
from config.settings import TOLERANCE_CONFIG

logger = logging.getLogger(__name__)

SUPPORTED_DIMS = (2, 3, 4)

IDENTITY_2 = np.eye(2, dtype=np.complex128)
IDENTITY_4 = np.eye(4, dtype=np.complex128)
SIGMA_X = np.array([[0, 1], [1, 0]], dtype=np.complex128)
SIGMA_Y = np.array([[0, -1j], [1j, 0]], dtype=np.complex128)
SIGMA_Z = np.array([[1, 0], [0, -1]], dtype=np.complex128)
PAULI = {"x": SIGMA_X, "y": SIGMA_Y, "z": SIGMA_Z}


def as_matrix(m) -> np.ndarray:
    """Coerce to a complex square matrix of a supported size with finite entries"""
    arr = np.asarray(m, dtype=np.complex128)
    if arr.ndim != 2 or arr.shape[0] != arr.shape[1]:
        raise UsageError(f"expected a square matrix, got shape {arr.shape}")
    if arr.shape[0] not in SUPPORTED_DIMS:
        raise UsageError(f"matrix dimension {arr.shape[0]} not in {SUPPORTED_DIMS}")
    if not np.all(np.isfinite(arr)):
        raise UsageError("matrix has non-finite entries")
    return arr


def mat_mul(a, b) -> np.ndarray:
    a, b = as_matrix(a), as_matrix(b)
    if a.shape != b.shape:
        raise UsageError(f"dimension mismatch: {a.shape[0]} vs {b.shape[0]}")
    return a @ b


def adjoint(m) -> np.ndarray:
    return as_matrix(m).conj().T


def kron(a, b) -> np.ndarray:
    """Kronecker product of two 2x2 matrices; the first factor acts on qubit A"""
    a, b = as_matrix(a), as_matrix(b)
    if a.shape != (2, 2) or b.shape != (2, 2):
        raise UsageError("kron expects two 2x2 matrices")
    return np.kron(a, b)


def hermiticity_defect(m) -> float:
    arr = np.asarray(m, dtype=np.complex128)
    return float(np.max(np.abs(arr - arr.conj().T)))


def _jacobi_rotate(a: np.ndarray, v: np.ndarray, p: int, q: int) -> None:
    """One complex Jacobi rotation zeroing a[p, q] in place"""
    apq = a[p, q]
    h = abs(apq)
    phase = apq / h
    tau = (a[q, q].real - a[p, p].real) / (2.0 * h)
    t = (1.0 if tau >= 0 else -1.0) / (abs(tau) + np.sqrt(1.0 + tau * tau))
    c = 1.0 / np.sqrt(1.0 + t * t)
    s = t * c
    # U = diag(1, conj(phase)) @ [[c, s], [-s, c]] acting on the (p, q) plane
    u_qp = -s * np.conj(phase)
    u_qq = c * np.conj(phase)

    for r in range(a.shape[0]):
        if r == p or r == q:
            continue
        arp, arq = a[r, p], a[r, q]
        new_rp = arp * c + arq * u_qp
        new_rq = arp * s + arq * u_qq
        a[r, p], a[p, r] = new_rp, np.conj(new_rp)
        a[r, q], a[q, r] = new_rq, np.conj(new_rq)

    a[p, p] = a[p, p].real - t * h
    a[q, q] = a[q, q].real + t * h
    a[p, q] = 0.0
    a[q, p] = 0.0

    vp, vq = v[:, p].copy(), v[:, q].copy()
    v[:, p] = vp * c + vq * u_qp
    v[:, q] = vp * s + vq * u_qq


def hermitian_eig(m, tol: float = None) -> Tuple[np.ndarray, np.ndarray]:
    """Eigendecomposition of a Hermitian matrix by cyclic Jacobi rotations

    Returns (eigenvalues, eigenvectors): eigenvalues real and sorted
    descending (ties keep their original index order), eigenvectors as
    orthonormal columns.
    """
    if tol is None:
        tol = TOLERANCE_CONFIG["hermiticity"]
    m = as_matrix(m)
    defect = hermiticity_defect(m)
    if defect > tol:
        raise ValidationError(f"matrix is not Hermitian (defect {defect:.3e} > {tol:.1e})")

    n = m.shape[0]
    a = 0.5 * (m + m.conj().T)
    v = np.eye(n, dtype=np.complex128)
    scale = np.linalg.norm(a)
    threshold = TOLERANCE_CONFIG["jacobi_off_diagonal"] * scale

    for sweep in range(TOLERANCE_CONFIG["jacobi_max_sweeps"]):
        off = np.sqrt(np.sum(np.abs(a - np.diag(np.diag(a))) ** 2))
        if off <= threshold or off == 0.0:
            break
        for p in range(n - 1):
            for q in range(p + 1, n):
                if a[p, q] != 0.0:
                    _jacobi_rotate(a, v, p, q)
    else:
        logger.debug(f"Jacobi stopped at the sweep cap with off-diagonal norm {off:.3e}")

    eigenvalues = np.real(np.diag(a))
    order = np.argsort(-eigenvalues, kind="stable")
    return eigenvalues[order], v[:, order]


def psd_sqrt(m) -> np.ndarray:
    """Hermitian PSD square root; eigenvalues down to -psd_clip are clipped to zero"""
    eigenvalues, vectors = hermitian_eig(m)
    floor = -TOLERANCE_CONFIG["psd_clip"]
    if eigenvalues[-1] < floor:
        raise NotPSDError(f"matrix is not PSD (min eigenvalue {eigenvalues[-1]:.3e})")
    roots = np.sqrt(np.clip(eigenvalues, 0.0, None))
    return (vectors * roots) @ vectors.conj().T
