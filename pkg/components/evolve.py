"""
Two-qubit evolution under independent baths

Each qubit+bath evolves on its own, so the two-qubit map is the tensor
product of the single-qubit maps. `apply_general` builds the 16x16
superoperator on a dense matrix; `apply_x` is the closed-form update of
the seven X-state parameters. The two paths are oracles for each other.
"""
import logging
from dataclasses import dataclass
from typing import Tuple

import numpy as np

from components.errors import UsageError
from components.noise import NoiseMode, NoiseParams, SingleQubitMap, single_qubit_map, transfer_matrix
from components.qstate import LABEL_POSITION, DensityMatrix, XState

logger = logging.getLogger(__name__)

# row/column index arrays mapping rho[pos(a, b), pos(a', b')] <-> R[a, b, a', b']
_ROWS = LABEL_POSITION[:, :, None, None]
_COLS = LABEL_POSITION[None, None, :, :]


@dataclass(frozen=True)
class TwoQubitMap:
    map_a: SingleQubitMap
    map_b: SingleQubitMap

    def __post_init__(self):
        if not np.array_equal(np.asarray(self.map_a.time), np.asarray(self.map_b.time)):
            raise UsageError("both single-qubit maps must be evaluated at the same time")

    @classmethod
    def identical(cls, t, p: NoiseParams, mode: NoiseMode) -> "TwoQubitMap":
        single = single_qubit_map(t, p, mode)
        return cls(single, single)

    @classmethod
    def independent(cls, t, p_a: NoiseParams, p_b: NoiseParams, mode: NoiseMode) -> "TwoQubitMap":
        return cls(single_qubit_map(t, p_a, mode), single_qubit_map(t, p_b, mode))


def apply_general(m: TwoQubitMap, rho0: DensityMatrix) -> DensityMatrix:
    """rho(t) = (A_A (x) A_B) vec rho(0) on the dense matrix"""
    if not isinstance(rho0, DensityMatrix):
        rho0 = DensityMatrix(rho0)
    superoperator = np.kron(transfer_matrix(m.map_a), transfer_matrix(m.map_b))

    tensor = rho0.entries[_ROWS, _COLS]                      # R[a, b, a', b']
    vec = tensor.transpose(0, 2, 1, 3).reshape(16)           # v[a a', b b']
    evolved = (superoperator @ vec).reshape(2, 2, 2, 2).transpose(0, 2, 1, 3)

    out = np.empty((4, 4), dtype=np.complex128)
    out[_ROWS, _COLS] = evolved
    return DensityMatrix(out)


def _population_matrix(m: SingleQubitMap) -> np.ndarray:
    """Column-stochastic 2x2 population transfer M[out, in], index 0 = ground, 1 = excited"""
    gamma = np.asarray(m.pop_survival, dtype=float)
    decay = 1.0 - gamma
    q = m.p_eq
    return np.array([
        [1.0 - q * decay, (1.0 - q) * decay],
        [q * decay, gamma + q * decay],
    ])


def _over_shape(block: np.ndarray, shape: Tuple[int, ...]) -> np.ndarray:
    """Broadcast a (2, 2, ...) block over a trailing shape"""
    padded = block.reshape((2, 2) + (1,) * (len(shape) - (block.ndim - 2)) + block.shape[2:])
    return np.broadcast_to(padded, (2, 2) + shape)


def apply_x(m: TwoQubitMap, x0: XState) -> XState:
    """Closed-form update of an X state; broadcasts when the maps carry time arrays"""
    c_a = m.map_a.coherence_factor
    c_b = m.map_b.coherence_factor
    # <11|rho|00> picks up <1|.|0> on both qubits, <01|rho|10> picks up <0|.|1> on A
    c14 = c_a * c_b * x0.c14
    c23 = np.conj(c_a) * c_b * x0.c23

    frozen = np.all(np.asarray(m.map_a.pop_survival) == 1.0) and np.all(np.asarray(m.map_b.pop_survival) == 1.0)
    if frozen:
        shape = np.shape(c14)
        p11, p22, p33, p44 = (np.broadcast_to(p, shape).copy() if shape else p for p in x0.populations)
        return XState(p11, p22, p33, p44, c14, c23)

    shape = np.broadcast_shapes(np.shape(m.map_a.pop_survival), np.shape(m.map_b.pop_survival), np.shape(x0.p11))
    m_a = _over_shape(_population_matrix(m.map_a), shape)
    m_b = _over_shape(_population_matrix(m.map_b), shape)
    # P[a, b] with a, b in {0 = ground, 1 = excited}
    pops = _over_shape(np.array([[x0.p44, x0.p22], [x0.p33, x0.p11]], dtype=float), shape)
    evolved = np.einsum("ij...,kl...,jl...->ik...", m_a, m_b, pops)
    return XState(evolved[1, 1], evolved[0, 1], evolved[1, 0], evolved[0, 0], c14, c23)
