"""
Two-qubit state representations

Dense density matrices, X-structured states and the extended Werner-like
(EWL) initial states. Every matrix is written in the computational basis
{|11>, |01>, |10>, |00>} (first label = qubit A, |0> = single-qubit ground
state); array index 0..3 corresponds to basis index 1..4.
"""
import logging
from dataclasses import dataclass
from enum import Enum
from typing import Dict, Tuple, Union

import numpy as np

from components.errors import StructureError, UsageError, ValidationError
from components.linalg_kernel import as_matrix, hermitian_eig, hermiticity_defect, kron
from config.settings import APP_CONFIG, TOLERANCE_CONFIG

logger = logging.getLogger(__name__)

ArrayLike = Union[float, complex, np.ndarray]

# single-qubit labels (A, B) of each basis position, 0 = ground, 1 = excited
BASIS_LABELS = ((1, 1), (0, 1), (1, 0), (0, 0))
# basis position of the label pair (A, B)
LABEL_POSITION = np.array([[3, 1], [2, 0]])
# kron(op_A, op_B) uses the single-qubit order (|1>, |0>), which yields
# |11>, |10>, |01>, |00>; swapping the middle pair gives the basis order
KRON_TO_BASIS = [0, 2, 1, 3]
X_PATTERN = np.array([
    [1, 0, 0, 1],
    [0, 1, 1, 0],
    [0, 1, 1, 0],
    [1, 0, 0, 1],
], dtype=bool)


def local_operator(op_a, op_b) -> np.ndarray:
    """op_A (x) op_B expressed in the basis order; operators in the (|1>, |0>) order"""
    full = kron(op_a, op_b)
    return full[np.ix_(KRON_TO_BASIS, KRON_TO_BASIS)]


@dataclass(frozen=True)
class StateDiagnostics:
    hermiticity_defect: float
    trace_defect: float
    min_eigenvalue: float

    @property
    def passes(self) -> bool:
        return (self.hermiticity_defect <= TOLERANCE_CONFIG["hermiticity"]
                and self.trace_defect <= TOLERANCE_CONFIG["trace"]
                and self.min_eigenvalue >= TOLERANCE_CONFIG["min_eigenvalue"])


def validate(m) -> StateDiagnostics:
    """Report the hermiticity, trace and positivity defects of a 4x4 matrix"""
    arr = np.asarray(m, dtype=np.complex128)
    defect = hermiticity_defect(arr)
    trace_defect = float(abs(np.trace(arr) - 1.0))
    symmetric = 0.5 * (arr + arr.conj().T)
    eigenvalues, _ = hermitian_eig(symmetric)
    return StateDiagnostics(defect, trace_defect, float(eigenvalues[-1]))


class DensityMatrix:
    """Validated 4x4 two-qubit density matrix"""

    def __init__(self, entries, check: bool = True):
        arr = as_matrix(entries).copy()
        if arr.shape != (4, 4):
            raise UsageError(f"a two-qubit density matrix is 4x4, got {arr.shape}")
        if check:
            diagnostics = validate(arr)
            if not diagnostics.passes:
                raise ValidationError(
                    f"invalid density matrix: hermiticity defect {diagnostics.hermiticity_defect:.3e}, "
                    f"trace defect {diagnostics.trace_defect:.3e}, "
                    f"min eigenvalue {diagnostics.min_eigenvalue:.3e}"
                )
        self.entries = arr
        self.entries.setflags(write=False)

    def __repr__(self):
        return f"DensityMatrix({self.entries!r})"


@dataclass(frozen=True)
class XState:
    """X-structured two-qubit state; fields may be scalars or equal-shape arrays"""
    p11: ArrayLike
    p22: ArrayLike
    p33: ArrayLike
    p44: ArrayLike
    c14: ArrayLike
    c23: ArrayLike

    def __post_init__(self):
        pops = [np.asarray(p, dtype=float) for p in (self.p11, self.p22, self.p33, self.p44)]
        if any(np.any(p < -TOLERANCE_CONFIG["block_positivity"]) for p in pops):
            raise ValidationError("X state has a negative population")
        trace_defect = np.max(np.abs(pops[0] + pops[1] + pops[2] + pops[3] - 1.0))
        if trace_defect > TOLERANCE_CONFIG["trace"]:
            raise ValidationError(f"X state populations do not sum to 1 (defect {trace_defect:.3e})")
        slack = TOLERANCE_CONFIG["block_positivity"]
        if np.any(np.abs(self.c14) ** 2 > pops[0] * pops[3] + slack):
            raise ValidationError("X state outer block |c14|^2 <= p11 p44 violated")
        if np.any(np.abs(self.c23) ** 2 > pops[1] * pops[2] + slack):
            raise ValidationError("X state inner block |c23|^2 <= p22 p33 violated")

    @property
    def populations(self) -> Tuple[ArrayLike, ArrayLike, ArrayLike, ArrayLike]:
        return self.p11, self.p22, self.p33, self.p44


def maximally_mixed() -> XState:
    return XState(0.25, 0.25, 0.25, 0.25, 0j, 0j)


class EWLFamily(Enum):
    PHI = "phi"   # pure part a|01> + b|10>
    PSI = "psi"   # pure part a|00> + b|11>


@dataclass(frozen=True)
class EWLParams:
    """Extended Werner-like state r|pure><pure| + (1 - r) I/4

    `a` is the amplitude of |01> (Phi) or |00> (Psi); `b` has modulus
    sqrt(1 - |a|^2) and phase `phase`.
    """
    family: EWLFamily
    r: float
    a: complex
    phase: float = 0.0

    def __post_init__(self):
        if not isinstance(self.family, EWLFamily):
            raise UsageError(f"unknown EWL family {self.family!r}")
        if not 0.0 <= self.r <= 1.0:
            raise UsageError(f"r must lie in [0, 1], got {self.r}")
        if abs(self.a) > 1.0 + 1e-15:
            raise UsageError(f"|a| must lie in [0, 1], got {abs(self.a)}")

    @classmethod
    def from_a2(cls, family: EWLFamily, r: float, a2: float, phase: float = 0.0) -> "EWLParams":
        if not 0.0 <= a2 <= 1.0:
            raise UsageError(f"a2 (|a|^2) must lie in [0, 1], got {a2}")
        return cls(family, r, complex(np.sqrt(a2)), phase)

    @property
    def b(self) -> complex:
        modulus = np.sqrt(max(0.0, 1.0 - abs(self.a) ** 2))
        return complex(modulus * np.exp(1j * self.phase))

    @property
    def ab(self) -> float:
        """|ab|, the only amplitude combination the observables depend on"""
        return float(abs(self.a) * abs(self.b))


def ewl_state(p: EWLParams) -> XState:
    r = p.r
    a, b = p.a, p.b
    mixed = (1.0 - r) / 4.0
    if p.family is EWLFamily.PHI:
        return XState(
            p11=mixed,
            p22=r * abs(a) ** 2 + mixed,
            p33=r * abs(b) ** 2 + mixed,
            p44=mixed,
            c14=0j,
            c23=complex(r * a * np.conj(b)),
        )
    return XState(
        p11=r * abs(b) ** 2 + mixed,
        p22=mixed,
        p33=mixed,
        p44=r * abs(a) ** 2 + mixed,
        c14=complex(r * b * np.conj(a)),
        c23=0j,
    )


def to_dense(x: XState) -> DensityMatrix:
    if np.ndim(x.p11) != 0:
        raise UsageError("to_dense needs a scalar X state")
    m = np.zeros((4, 4), dtype=np.complex128)
    m[0, 0], m[1, 1], m[2, 2], m[3, 3] = x.p11, x.p22, x.p33, x.p44
    m[0, 3], m[3, 0] = x.c14, np.conj(x.c14)
    m[1, 2], m[2, 1] = x.c23, np.conj(x.c23)
    return DensityMatrix(m)


def from_dense(m: DensityMatrix, tol: float = None) -> XState:
    """Read the X entries of a dense matrix; every other entry must be below tol"""
    if tol is None:
        tol = TOLERANCE_CONFIG["x_structure"]
    e = m.entries
    for i, j in zip(*np.nonzero(~X_PATTERN)):
        if abs(e[i, j]) > tol:
            raise StructureError(
                f"entry ({i + 1},{j + 1}) has magnitude {abs(e[i, j]):.3e} > {tol:.1e}; not an X state",
                index_pair=(int(i) + 1, int(j) + 1),
            )
    return XState(
        p11=float(e[0, 0].real),
        p22=float(e[1, 1].real),
        p33=float(e[2, 2].real),
        p44=float(e[3, 3].real),
        c14=complex(e[0, 3]),
        c23=complex(e[1, 2]),
    )


def _complex_to_dict(z) -> Dict[str, float]:
    z = complex(z)
    return {"re": z.real, "im": z.imag}


def xstate_to_dict(x: XState) -> Dict:
    return {
        "basis": APP_CONFIG["basis"],
        "populations": [float(p) for p in x.populations],
        "c14": _complex_to_dict(x.c14),
        "c23": _complex_to_dict(x.c23),
    }


def density_matrix_to_dict(m: DensityMatrix) -> Dict:
    return {
        "basis": APP_CONFIG["basis"],
        "entries": [[_complex_to_dict(z) for z in row] for row in m.entries],
    }
