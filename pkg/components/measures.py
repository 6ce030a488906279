"""
Correlation measures: maximum of the CHSH Bell function and concurrence

Each measure has an X-state closed form and a general dense-matrix route
(Horodecki criterion, Wootters spin flip) used to cross-check it.
"""
import logging
from dataclasses import dataclass
from typing import Union

import numpy as np

from components.linalg_kernel import PAULI, SIGMA_Y, hermitian_eig, psd_sqrt
from components.qstate import DensityMatrix, XState, local_operator
from config.settings import TOLERANCE_CONFIG

logger = logging.getLogger(__name__)

Value = Union[float, np.ndarray]

_CORRELATORS = [[local_operator(PAULI[i], PAULI[j]) for j in "xyz"] for i in "xyz"]
_SPIN_FLIP = local_operator(SIGMA_Y, SIGMA_Y)


@dataclass(frozen=True)
class BellResult:
    b: Value
    b1: Value
    b2: Value
    u1: Value
    u2: Value
    u3: Value

    @property
    def violates(self) -> Union[bool, np.ndarray]:
        return self.b > 2.0


def bell_max_x(x: XState) -> BellResult:
    abs14 = np.abs(x.c14)
    abs23 = np.abs(x.c23)
    u1 = 4.0 * (abs14 + abs23) ** 2
    u2 = (x.p11 + x.p44 - x.p22 - x.p33) ** 2
    u3 = 4.0 * (abs14 - abs23) ** 2
    # u1 >= u3, so the pair (u2, u3) never gives the maximum
    b1 = 2.0 * np.sqrt(u1 + u2)
    b2 = 2.0 * np.sqrt(u1 + u3)
    return BellResult(np.maximum(b1, b2), b1, b2, u1, u2, u3)


def correlation_matrix(rho: DensityMatrix) -> np.ndarray:
    """T_ij = Tr[rho (sigma_i (x) sigma_j)], i, j in x, y, z"""
    t = np.empty((3, 3))
    for i in range(3):
        for j in range(3):
            t[i, j] = np.real(np.trace(rho.entries @ _CORRELATORS[i][j]))
    return t


def bell_max_general(rho: DensityMatrix) -> float:
    """Horodecki criterion: 2 sqrt(m1 + m2) over the two largest eigenvalues of T^T T"""
    t = correlation_matrix(rho)
    eigenvalues, _ = hermitian_eig(t.T @ t)
    return float(2.0 * np.sqrt(max(0.0, eigenvalues[0] + eigenvalues[1])))


def concurrence_witness(x: XState) -> Value:
    """Signed quantity whose positive part is C/2; crosses zero at entanglement death"""
    inner = np.abs(x.c23) - np.sqrt(x.p11 * x.p44)
    outer = np.abs(x.c14) - np.sqrt(x.p22 * x.p33)
    return np.maximum(inner, outer)


def concurrence_x(x: XState) -> Value:
    return 2.0 * np.maximum(0.0, concurrence_witness(x))


def concurrence_general(rho: DensityMatrix) -> float:
    """Wootters concurrence through the Hermitian form sqrt(rho) rho~ sqrt(rho)"""
    flipped = _SPIN_FLIP @ rho.entries.conj() @ _SPIN_FLIP
    root = psd_sqrt(rho.entries)
    h = root @ flipped @ root
    eigenvalues, _ = hermitian_eig(0.5 * (h + h.conj().T))
    # sqrt amplifies rounding noise around zero eigenvalues
    eigenvalues = np.where(eigenvalues < TOLERANCE_CONFIG["concurrence_eigen_floor"], 0.0, eigenvalues)
    lam = np.sqrt(eigenvalues)
    return float(max(0.0, lam[0] - lam[1] - lam[2] - lam[3]))
