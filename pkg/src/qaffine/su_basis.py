"""Generalized Gell-Mann generators of su(d) and their structure tensors.

Conventions: ``Tr(l_i l_j) = 2 delta_ij``, ``[l_i, l_j] = 2i f_ijk l_k`` and
``{l_i, l_j} = (4/d) delta_ij 1 + 2 d_ijk l_k``.
"""
from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations

import numpy as np

from .errors import DimensionError

ZERO_SNAP = 1e-13


@dataclass(frozen=True)
class GeneratorSet:
    dim: int
    generators: np.ndarray  # shape (d^2-1, d, d)

    @property
    def b(self) -> float:
        return float(np.sqrt(self.dim * (self.dim - 1) / 2))

    @property
    def n(self) -> int:
        return self.dim * self.dim - 1

    def __len__(self) -> int:
        return self.n

    def __getitem__(self, i):
        return self.generators[i]


@dataclass(frozen=True)
class StructureTensors:
    dim: int
    f: np.ndarray
    dtensor: np.ndarray

    @property
    def c(self) -> float:
        """Star-product constant ``sqrt(d(d-1)/2)/(d-2)``; undefined at d=2."""
        if self.dim == 2:
            raise ValueError("the star-product constant c is singular at d=2")
        return float(np.sqrt(self.dim * (self.dim - 1) / 2) / (self.dim - 2))

    @property
    def n(self) -> int:
        return self.dim * self.dim - 1

    def nonzero_f(self):
        """Sparse (i, j, k, value) listing of f, computed on demand."""
        return _nonzero(self.f)

    def nonzero_d(self):
        return _nonzero(self.dtensor)


def _nonzero(t: np.ndarray):
    idx = np.argwhere(t != 0.0)
    return [(int(i), int(j), int(k), float(t[i, j, k])) for i, j, k in idx]


def _sym(d, j, k):
    m = np.zeros((d, d), dtype=complex)
    m[j, k] = m[k, j] = 1.0
    return m


def _antisym(d, j, k):
    m = np.zeros((d, d), dtype=complex)
    m[j, k] = -1j
    m[k, j] = 1j
    return m


def _diag(d, l):
    # l = 1..d-1
    diag = np.zeros(d)
    diag[:l] = 1.0
    diag[l] = -l
    return np.diag(np.sqrt(2.0 / (l * (l + 1))) * diag).astype(complex)


def generate_gellmann(d: int) -> GeneratorSet:
    """Return the d^2-1 generalized Gell-Mann matrices.

    Ordering is symmetric off-diagonal pairs, antisymmetric pairs, then the
    diagonal Cartan elements.  For d=3 the historical order lambda_1..lambda_8
    is used instead, so that indices 3 and 8 are the diagonal generators.
    """
    if not isinstance(d, (int, np.integer)) or d < 2:
        raise DimensionError(f"dimension must be an integer >= 2, got {d!r}")
    d = int(d)
    pairs = list(combinations(range(d), 2))
    if d == 3:
        gens = [
            _sym(3, 0, 1), _antisym(3, 0, 1), _diag(3, 1),
            _sym(3, 0, 2), _antisym(3, 0, 2),
            _sym(3, 1, 2), _antisym(3, 1, 2),
            _diag(3, 2),
        ]
    else:
        gens = [_sym(d, j, k) for j, k in pairs]
        gens += [_antisym(d, j, k) for j, k in pairs]
        gens += [_diag(d, l) for l in range(1, d)]
    arr = np.array(gens)
    arr.setflags(write=False)
    return GeneratorSet(dim=d, generators=arr)


def _snap(t: np.ndarray) -> np.ndarray:
    t = np.where(np.abs(t) < ZERO_SNAP, 0.0, t)
    t.setflags(write=False)
    return t


def compute_structure_constants(gens: GeneratorSet) -> StructureTensors:
    """f_ijk = Tr([l_i, l_j] l_k)/(4i) and d_ijk = Tr({l_i, l_j} l_k)/4."""
    lam = gens.generators
    # triple[i, j, k] = Tr(l_i l_j l_k)
    prod = np.einsum("iab,jbc->ijac", lam, lam)
    triple = np.einsum("ijac,kca->ijk", prod, lam)
    f = (triple - triple.transpose(1, 0, 2)) / 4j
    dt = (triple + triple.transpose(1, 0, 2)) / 4
    resid = max(np.abs(f.imag).max(), np.abs(dt.imag).max())
    if resid > 1e-12:
        raise ArithmeticError(f"structure constants not real (residual {resid:.3g})")
    return StructureTensors(dim=gens.dim, f=_snap(f.real.copy()), dtensor=_snap(dt.real.copy()))


def _check_len(st: StructureTensors, *vecs):
    for v in vecs:
        if np.shape(v) != (st.n,):
            raise DimensionError(f"expected vector of length {st.n}, got shape {np.shape(v)}")


def d_contract(a, b, st: StructureTensors) -> np.ndarray:
    """Bare contraction d_ijk a_i b_j (no star-product constant)."""
    _check_len(st, a, b)
    return np.einsum("ijk,i,j->k", st.dtensor, a, b)


def star_product(a, b, st: StructureTensors) -> np.ndarray:
    """(a * b)_k = c d_ijk a_i b_j.

    At d=2 the constant c is singular and d_ijk vanishes; the bare (zero)
    contraction is returned.
    """
    out = d_contract(a, b, st)
    if st.dim == 2:
        return out
    return st.c * out


def cross_product(a, b, st: StructureTensors) -> np.ndarray:
    """(a x b)_k = f_ijk a_i b_j."""
    _check_len(st, a, b)
    return np.einsum("ijk,i,j->k", st.f, a, b)


@dataclass
class IdentityCheck:
    name: str
    residual: float
    passed: bool


def verify_identities(st: StructureTensors, tol: float = 1e-10) -> list[IdentityCheck]:
    """Evaluate the su(d) tensor identities and report the max residual of each.

    Failures are reported in the returned records, never raised.
    """
    f, dt, d = st.f, st.dtensor, st.dim
    eye = np.eye(st.n)
    checks = {}

    checks["jacobi"] = (
        np.einsum("ilm,jkl->ijkm", f, f)
        + np.einsum("jlm,kil->ijkm", f, f)
        + np.einsum("klm,ijl->ijkm", f, f)
    )
    checks["jacobi_like"] = (
        np.einsum("ilm,jkl->ijkm", f, dt)
        + np.einsum("jlm,kil->ijkm", f, dt)
        + np.einsum("klm,ijl->ijkm", f, dt)
    )
    checks["d_iik"] = np.einsum("iik->k", dt)
    checks["d_ijk f_ljk"] = np.einsum("ijk,ljk->il", dt, f)
    checks["f_ijk f_ljk"] = np.einsum("ijk,ljk->il", f, f) - d * eye
    checks["d_ijk d_ljk"] = np.einsum("ijk,ljk->il", dt, dt) - (d * d - 4) / d * eye
    checks["f_ijm f_klm"] = (
        np.einsum("ijm,klm->ijkl", f, f)
        - (2 / d) * (np.einsum("ik,jl->ijkl", eye, eye) - np.einsum("il,jk->ijkl", eye, eye))
        - (np.einsum("ikm,jlm->ijkl", dt, dt) - np.einsum("jkm,ilm->ijkl", dt, dt))
    )
    fff = np.einsum("piq,qjr,rkp->ijk", f, f, f) + (d / 2) * f
    dff = np.einsum("piq,qjr,rkp->ijk", dt, f, f) + (d / 2) * dt
    ddf = np.einsum("piq,qjr,rkp->ijk", dt, dt, f) - (d * d - 4) / (2 * d) * f
    ddd = np.einsum("piq,qjr,rkp->ijk", dt, dt, dt) - (d * d - 12) / (2 * d) * dt
    checks["fff"] = fff
    checks["dff"] = dff
    checks["ddf"] = ddf
    checks["ddd"] = ddd

    report = []
    for name, arr in checks.items():
        r = float(np.abs(arr).max()) if arr.size else 0.0
        report.append(IdentityCheck(name, r, r < tol))
    return report


def reconstruction_residual(gens: GeneratorSet, st: StructureTensors) -> float:
    """Max deviation of l_i l_j from (2/d) delta_ij 1 + (d_ijk + i f_ijk) l_k."""
    lam = gens.generators
    d = gens.dim
    lhs = np.einsum("iab,jbc->ijac", lam, lam)
    rhs = (2 / d) * np.einsum("ij,ac->ijac", np.eye(st.n), np.eye(d))
    rhs = rhs + np.einsum("ijk,kac->ijac", st.dtensor + 1j * st.f, lam)
    return float(np.abs(lhs - rhs).max())
