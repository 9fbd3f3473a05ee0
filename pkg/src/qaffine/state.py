"""Density matrices and polarization (generalized Bloch) vectors."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DimensionError, NotHermitianError
from .su_basis import GeneratorSet, StructureTensors, star_product

POSITIVITY_TOL = 1e-10


@dataclass(frozen=True)
class DensityMatrix:
    dim: int
    mat: np.ndarray

    def __post_init__(self):
        m = np.asarray(self.mat, dtype=complex)
        if m.shape != (self.dim, self.dim):
            raise DimensionError(f"expected {self.dim}x{self.dim} matrix, got {m.shape}")
        object.__setattr__(self, "mat", m)

    @classmethod
    def from_array(cls, mat, check: bool = True, tol: float = 1e-12) -> "DensityMatrix":
        m = np.asarray(mat, dtype=complex)
        if m.ndim != 2 or m.shape[0] != m.shape[1]:
            raise DimensionError(f"density matrix must be square, got shape {m.shape}")
        if check:
            if np.abs(m - m.conj().T).max() > tol:
                raise NotHermitianError("density matrix is not Hermitian")
            if abs(np.trace(m) - 1) > tol:
                raise ValueError(f"density matrix trace is {np.trace(m).real:.6g}, not 1")
        return cls(m.shape[0], m)

    @property
    def trace(self) -> float:
        return float(np.trace(self.mat).real)


@dataclass(frozen=True)
class PolarizationVector:
    dim: int
    n: np.ndarray

    def __post_init__(self):
        v = np.asarray(self.n, dtype=float)
        if v.shape != (self.dim * self.dim - 1,):
            raise DimensionError(
                f"polarization vector for d={self.dim} needs length {self.dim**2 - 1}, got {v.shape}"
            )
        object.__setattr__(self, "n", v)

    @property
    def norm(self) -> float:
        return float(np.linalg.norm(self.n))


def _as_matrix(rho) -> np.ndarray:
    return rho.mat if isinstance(rho, DensityMatrix) else np.asarray(rho, dtype=complex)


def _as_vector(n) -> np.ndarray:
    return n.n if isinstance(n, PolarizationVector) else np.asarray(n, dtype=float)


def to_polarization(rho, gens: GeneratorSet) -> PolarizationVector:
    """n_i = (d / 2b) Tr(l_i rho)."""
    m = _as_matrix(rho)
    if m.shape != (gens.dim, gens.dim):
        raise DimensionError(f"state is {m.shape}, generators are for d={gens.dim}")
    vals = np.einsum("iab,ba->i", gens.generators, m) * gens.dim / (2 * gens.b)
    if np.abs(vals.imag).max() > 1e-12 * max(1.0, np.abs(vals).max()):
        raise NotHermitianError("polarization vector has an imaginary part; input not Hermitian")
    return PolarizationVector(gens.dim, vals.real)


def from_polarization(n, gens: GeneratorSet) -> DensityMatrix:
    """rho = (1 + b n.l) / d."""
    v = _as_vector(n)
    if v.shape != (gens.n,):
        raise DimensionError(f"vector of length {v.shape} does not match d={gens.dim}")
    d = gens.dim
    m = (np.eye(d) + gens.b * np.einsum("i,iab->ab", v, gens.generators)) / d
    return DensityMatrix(d, m)


def purity(n, dim: int | None = None) -> float:
    """Tr(rho^2) = 1/d + (d-1)/d |n|^2."""
    if isinstance(n, PolarizationVector):
        dim = n.dim
    v = _as_vector(n)
    if dim is None:
        dim = int(round(np.sqrt(v.size + 1)))
    return 1.0 / dim + (dim - 1) / dim * float(v @ v)


def min_eigenvalue(rho) -> float:
    return float(np.linalg.eigvalsh(_as_matrix(rho))[0])


def is_positive(rho, tol: float = POSITIVITY_TOL) -> bool:
    return min_eigenvalue(rho) >= -tol


def s3_invariant(n, st: StructureTensors) -> float:
    """Cubic qutrit positivity functional 1 - 3 n.n + 2 (n*n).n.

    Equals 27 det(rho) for the state rho built from n.
    """
    if st.dim != 3:
        raise DimensionError(f"S3 is defined for qutrits only, got d={st.dim}")
    v = _as_vector(n)
    return 1.0 - 3.0 * float(v @ v) + 2.0 * float(star_product(v, v, st) @ v)


def pure_state(psi, gens: GeneratorSet) -> PolarizationVector:
    psi = np.asarray(psi, dtype=complex)
    psi = psi / np.linalg.norm(psi)
    return to_polarization(np.outer(psi, psi.conj()), gens)


def basis_state(k: int, gens: GeneratorSet) -> PolarizationVector:
    """Polarization vector of |k><k|, with k counted from 1."""
    if not 1 <= k <= gens.dim:
        raise DimensionError(f"basis label {k} out of range for d={gens.dim}")
    psi = np.zeros(gens.dim)
    psi[k - 1] = 1.0
    return pure_state(psi, gens)
