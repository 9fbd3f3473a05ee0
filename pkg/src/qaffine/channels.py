"""Example qutrit channels and the generalized Pauli error basis."""
from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np

from .errors import DimensionError, ParameterError
from .maps import AffineMap, KrausSet, affine_from_osr
from .su_basis import GeneratorSet, StructureTensors, compute_structure_constants, generate_gellmann

OFF_DIAGONAL_GENERATORS = (1, 2, 4, 5, 6, 7)


@lru_cache(maxsize=None)
def _basis(d: int) -> tuple[GeneratorSet, StructureTensors]:
    g = generate_gellmann(d)
    return g, compute_structure_constants(g)


def _check_x(x: float):
    if not 0.0 <= x <= 1.0:
        raise ParameterError(f"channel parameter x must lie in [0, 1], got {x}")


def depolarizing_qutrit(x: float) -> KrausSet:
    """C_0 = sqrt(1-x) 1, C_k = sqrt(3x/16) lambda_k; shrinks n by 1 - 9x/8."""
    _check_x(x)
    g, _ = _basis(3)
    terms = [(1.0, np.sqrt(1 - x) * np.eye(3))]
    terms += [(1.0, np.sqrt(3 * x / 16) * lam) for lam in g.generators]
    return KrausSet.from_terms(terms, g)


def phase_damping_qutrit(x: float) -> KrausSet:
    """Shrinks the off-diagonal components by 1 - 3x/5, fixes n_3 and n_8."""
    _check_x(x)
    g, _ = _basis(3)
    one = np.eye(3)
    l3, l8 = g[2], g[7]
    a = np.sqrt(3 * x / 20)
    terms = [
        (1.0, np.sqrt(1 - x) * one),
        (1.0, a * (one + l3)),
        (1.0, a * (one - l3)),
        (1.0, a * (one + l8)),
        (1.0, a * (one - l8)),
    ]
    return KrausSet.from_terms(terms, g)


def off_diagonal_qutrit(x: float, alternating: bool = False, sign_index: str = "position") -> KrausSet:
    """C_0 = sqrt(1-x) 1 and C_k = sqrt(x/4) lambda_k over the off-diagonal generators.

    With ``alternating`` the weights are eta_0 = +1 and eta_j = (-1)^j.  By
    default j runs over the operators C_1..C_6 in order (``"position"``);
    ``sign_index="generator"`` uses the generator label 1,2,4,5,6,7 instead.
    """
    _check_x(x)
    if sign_index not in ("position", "generator"):
        raise ValueError(f"sign_index must be 'position' or 'generator', got {sign_index!r}")
    g, _ = _basis(3)
    terms = [(1.0, np.sqrt(1 - x) * np.eye(3))]
    for pos, k in enumerate(OFF_DIAGONAL_GENERATORS, start=1):
        j = pos if sign_index == "position" else k
        eta = float((-1) ** j) if alternating else 1.0
        terms.append((eta, np.sqrt(x / 4) * g[k - 1]))
    return KrausSet.from_terms(terms, g)


TRIT_PAIRS = ((1, 2), (1, 3), (2, 3))


def trit_flip_operator(pair) -> np.ndarray:
    pair = tuple(pair)
    if pair not in TRIT_PAIRS:
        raise ParameterError(f"trit flip pair must be one of {TRIT_PAIRS}, got {pair}")
    i, j = pair[0] - 1, pair[1] - 1
    C = np.zeros((3, 3), dtype=complex)
    C[i, j] = C[j, i] = 1.0
    return C


def trit_flip(pair) -> KrausSet:
    """Single term swapping basis states |i> and |j>, zero on the third."""
    g, _ = _basis(3)
    return KrausSet.from_terms([(1.0, trit_flip_operator(pair))], g)


def generalized_pauli(d: int) -> list[np.ndarray]:
    """U_{m,n} = X^m Z^n for m, n = 0..d-1, ordered with m major."""
    if d < 2:
        raise DimensionError(f"dimension must be >= 2, got {d}")
    X = np.roll(np.eye(d), 1, axis=0).astype(complex)  # X|j> = |j+1 mod d>
    Z = np.diag(np.exp(2j * np.pi * np.arange(d) / d))
    mp = np.linalg.matrix_power
    return [mp(X, m) @ mp(Z, n) for m in range(d) for n in range(d)]


def pauli_affine_maps(d: int) -> list[AffineMap]:
    """Affine maps of the non-identity generalized Pauli conjugations."""
    g, st = _basis(d)
    return [affine_from_osr(KrausSet.from_terms([(1.0, U)], g), st)
            for U in generalized_pauli(d)[1:]]


def trace_product_matrix(Ts) -> np.ndarray:
    """G_ij = Tr(T_i^T T_j)."""
    mats = [M.T if isinstance(M, AffineMap) else np.asarray(M, dtype=float) for M in Ts]
    if len({m.shape for m in mats}) > 1:
        raise DimensionError("all linear parts must have the same shape")
    A = np.array(mats)
    return np.einsum("iab,jab->ij", A, A)


@dataclass
class ChannelSpec:
    name: str
    dim: int = 3
    params: dict = field(default_factory=dict)
    signs: str = "ones"  # or "alternating"


CHANNELS = {
    "depolarizing": lambda p, s: depolarizing_qutrit(float(p.get("x", 0.0))),
    "phase_damping": lambda p, s: phase_damping_qutrit(float(p.get("x", 0.0))),
    "off_diagonal": lambda p, s: off_diagonal_qutrit(float(p.get("x", 0.0)), alternating=(s == "alternating")),
    "trit_flip_12": lambda p, s: trit_flip((1, 2)),
    "trit_flip_13": lambda p, s: trit_flip((1, 3)),
    "trit_flip_23": lambda p, s: trit_flip((2, 3)),
}


def build_channel(spec: ChannelSpec) -> KrausSet:
    name = spec.name.replace("-", "_")
    if name not in CHANNELS:
        raise ParameterError(f"unknown channel {spec.name!r}; known: {sorted(CHANNELS)}")
    if spec.dim != 3:
        raise DimensionError(f"channel {spec.name!r} is defined for d=3 only")
    if spec.signs not in ("ones", "alternating"):
        raise ParameterError(f"signs must be 'ones' or 'alternating', got {spec.signs!r}")
    return CHANNELS[name](spec.params, spec.signs)
