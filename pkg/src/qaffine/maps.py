"""Conversions between the dynamical matrix B, weighted Kraus sets and the
affine map (T, t) of the polarization vector.

Index conventions used throughout:

* composite index (r, r') -> r*d + r' (row-major);
* B acts as rho'_{rs} = sum_{r's'} B_{rr',ss'} rho_{r's'}, so that a weighted
  Kraus set gives B = sum_k eta_k vec(C_k) vec(C_k)^dagger;
* T is stored in the index order n'_q = T_pq n_p + t_q, i.e. the matrix
  acting on column vectors is T transposed.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import DimensionError, NotHermitianError
from .state import DensityMatrix, PolarizationVector, _as_matrix, _as_vector, to_polarization
from .su_basis import GeneratorSet, StructureTensors, cross_product, d_contract

HERMITIAN_TOL = 1e-10
REALITY_TOL = 1e-10
EIG_ZERO_TOL = 1e-12


@dataclass(frozen=True)
class DynamicalMapB:
    dim: int
    B: np.ndarray

    def __post_init__(self):
        m = np.asarray(self.B, dtype=complex)
        dd = self.dim * self.dim
        if m.shape != (dd, dd):
            raise DimensionError(f"B for d={self.dim} must be {dd}x{dd}, got {m.shape}")
        object.__setattr__(self, "B", m)

    @property
    def hermiticity_residual(self) -> float:
        return float(np.abs(self.B - self.B.conj().T).max())

    def as_tensor(self) -> np.ndarray:
        d = self.dim
        return self.B.reshape(d, d, d, d)


@dataclass(frozen=True)
class KrausSet:
    """Weighted operator-sum representation rho -> sum_k eta_k C_k rho C_k^dagger.

    Weights may be negative.  ``v0``/``v`` hold the expansion
    C_k = v0_k 1 + v_k . lambda when known.
    """

    dim: int
    etas: np.ndarray
    ops: np.ndarray
    v0: np.ndarray | None = None
    v: np.ndarray | None = None

    def __post_init__(self):
        etas = np.atleast_1d(np.asarray(self.etas, dtype=float))
        ops = np.asarray(self.ops, dtype=complex)
        if ops.ndim == 2:
            ops = ops[None]
        if ops.shape[1:] != (self.dim, self.dim) or ops.shape[0] != etas.shape[0]:
            raise DimensionError(
                f"{etas.shape[0]} weights and operators of shape {ops.shape} for d={self.dim}"
            )
        object.__setattr__(self, "etas", etas)
        object.__setattr__(self, "ops", ops)

    @classmethod
    def from_terms(cls, terms, gens: GeneratorSet | None = None) -> "KrausSet":
        """Build from ``[(eta, C), ...]``; expand in the generator basis if ``gens`` given."""
        etas = [float(e) for e, _ in terms]
        ops = np.array([np.asarray(c, dtype=complex) for _, c in terms])
        ks = cls(ops.shape[-1], etas, ops)
        return ks.with_expansion(gens) if gens is not None else ks

    def with_expansion(self, gens: GeneratorSet) -> "KrausSet":
        if gens.dim != self.dim:
            raise DimensionError(f"generators for d={gens.dim}, Kraus set has d={self.dim}")
        v0, v = zip(*(decompose_kraus(c, gens) for c in self.ops)) if len(self) else ((), ())
        return KrausSet(self.dim, self.etas, self.ops, np.array(v0, dtype=complex),
                        np.array(v, dtype=complex).reshape(len(self), gens.n))

    @property
    def has_expansion(self) -> bool:
        return self.v0 is not None and self.v is not None

    @property
    def terms(self):
        return list(zip(self.etas.tolist(), self.ops))

    def __len__(self) -> int:
        return self.etas.shape[0]


@dataclass(frozen=True)
class AffineMap:
    dim: int
    T: np.ndarray
    t: np.ndarray
    imag_residual: float = field(default=0.0, compare=False)

    def __post_init__(self):
        n = self.dim * self.dim - 1
        T = np.asarray(self.T, dtype=float)
        t = np.asarray(self.t, dtype=float)
        if T.shape != (n, n) or t.shape != (n,):
            raise DimensionError(f"affine map for d={self.dim} needs {n}x{n} and {n}; got {T.shape}, {t.shape}")
        object.__setattr__(self, "T", T)
        object.__setattr__(self, "t", t)

    def column_matrix(self) -> np.ndarray:
        """Matrix M with n' = M n + t in the usual column-vector convention."""
        return self.T.T


# --- dynamical map <-> Kraus set -------------------------------------------


def _check_hermitian(B: DynamicalMapB, tol: float = HERMITIAN_TOL):
    r = B.hermiticity_residual
    if r > tol * max(1.0, float(np.abs(B.B).max())):
        raise NotHermitianError(f"B is not Hermitian (residual {r:.3g})")


def _canonical_order(vals: np.ndarray, vecs: np.ndarray, tol: float):
    """Descending eigenvalues; ties broken lexicographically on real parts."""
    order = list(np.argsort(-vals, kind="stable"))
    groups, cur = [], [order[0]]
    for i in order[1:]:
        if abs(vals[i] - vals[cur[-1]]) <= tol:
            cur.append(i)
        else:
            groups.append(cur)
            cur = [i]
    groups.append(cur)
    out = []
    for g in groups:
        out += sorted(g, key=lambda i: tuple(np.round(vecs[:, i].real, 12)), reverse=True)
    return out


def osr_from_dynamical(B: DynamicalMapB, gens: GeneratorSet | None = None,
                       zero_tol: float = EIG_ZERO_TOL) -> KrausSet:
    """Spectral decomposition of B into a weighted Kraus set.

    Eigenvalues keep their sign.  Eigenvectors are reshaped row-major into
    unit Hilbert-Schmidt norm operators with the largest-magnitude entry made
    real and positive.  Eigenvalues with magnitude below ``zero_tol`` (relative
    to the largest) are dropped.
    """
    _check_hermitian(B)
    d = B.dim
    H = (B.B + B.B.conj().T) / 2
    vals, vecs = np.linalg.eigh(H)
    scale = max(1.0, float(np.abs(vals).max()))
    keep = np.abs(vals) > zero_tol * scale
    vals, vecs = vals[keep], vecs[:, keep]
    for k in range(vecs.shape[1]):
        col = vecs[:, k]
        # np.argmax picks the first maximal entry; round so ties are deterministic
        j = int(np.argmax(np.round(np.abs(col), 12)))
        vecs[:, k] = col * (abs(col[j]) / col[j])
    if vals.size:
        order = _canonical_order(vals, vecs, 1e-10 * scale)
        vals, vecs = vals[order], vecs[:, order]
    ops = vecs.T.reshape(-1, d, d)
    ks = KrausSet(d, vals, ops)
    return ks.with_expansion(gens) if gens is not None else ks


def dynamical_from_osr(K: KrausSet) -> DynamicalMapB:
    vecs = K.ops.reshape(len(K), -1)
    B = np.einsum("k,ki,kj->ij", K.etas, vecs, vecs.conj())
    return DynamicalMapB(K.dim, B)


def apply_dynamical(B: DynamicalMapB, rho) -> DensityMatrix:
    m = _as_matrix(rho)
    if m.shape != (B.dim, B.dim):
        raise DimensionError(f"state is {m.shape}, map is for d={B.dim}")
    return DensityMatrix(B.dim, np.einsum("abcd,bd->ac", B.as_tensor(), m))


def apply_osr(K: KrausSet, rho) -> DensityMatrix:
    """rho' = sum_k eta_k C_k rho C_k^dagger (not renormalized)."""
    m = _as_matrix(rho)
    if m.shape != (K.dim, K.dim):
        raise DimensionError(f"state is {m.shape}, Kraus set is for d={K.dim}")
    out = np.einsum("k,kab,bc,kdc->ad", K.etas, K.ops, m, K.ops.conj())
    return DensityMatrix(K.dim, out)


# --- Kraus set -> affine map -----------------------------------------------


def decompose_kraus(C, gens: GeneratorSet):
    """Return (v0, v) with C = v0 1 + v . lambda."""
    C = np.asarray(C, dtype=complex)
    if C.shape != (gens.dim, gens.dim):
        raise DimensionError(f"operator is {C.shape}, generators are for d={gens.dim}")
    v0 = np.trace(C) / gens.dim
    v = np.einsum("iab,ba->i", gens.generators, C) / 2
    return complex(v0), v


def _require_expansion(K: KrausSet, st: StructureTensors):
    if not K.has_expansion:
        raise ValueError("Kraus set carries no generator expansion; call with_expansion(gens)")
    if K.dim != st.dim:
        raise DimensionError(f"Kraus set has d={K.dim}, tensors have d={st.dim}")


def translation_terms(K: KrausSet, st: StructureTensors) -> np.ndarray:
    """Complex per-term translation vectors t_k, shape (K, d^2-1).

    t_k = (1/b)[v0* v + v0 v* + i v x v* + d(v*, v)], where the star term
    divided by c is written as the bare d-tensor contraction.
    """
    _require_expansion(K, st)
    b = np.sqrt(st.dim * (st.dim - 1) / 2)
    out = []
    for v0, v in zip(K.v0, K.v):
        vc = v.conj()
        tk = np.conj(v0) * v + v0 * vc + 1j * cross_product(v, vc, st) + d_contract(vc, v, st)
        out.append(tk / b)
    return np.array(out).reshape(len(K), st.n)


def linear_terms(K: KrausSet, st: StructureTensors) -> np.ndarray:
    """Complex per-term linear parts T_k, shape (K, n, n), indexed [p, q].

    (T_k)_pq = |v0|^2 delta_pq + (2/d) v_p v*_q
               + i f_rpq (v0* v_r - v0 v*_r) + d_rpq (v0* v_r + v0 v*_r)
               + i (d_spr f_rtq v_s v*_t + d_rsq f_tpr v_t v*_s)
               - f_tpr f_rsq v_t v*_s + d_tpr d_rsq v_t v*_s
    """
    _require_expansion(K, st)
    f, dt, d = st.f, st.dtensor, st.dim
    eye = np.eye(st.n)
    v0, v = K.v0, K.v
    vc = v.conj()
    v0c = v0.conj()
    lin_f = np.einsum("rpq,kr->kpq", f, v0c[:, None] * v - v0[:, None] * vc)
    lin_d = np.einsum("rpq,kr->kpq", dt, v0c[:, None] * v + v0[:, None] * vc)
    # quadratic pieces via the rank-2 matrices  X_k = v v*^T  (X[t, s] = v_t v*_s)
    X = np.einsum("kt,ks->kts", v, vc)
    df = np.einsum("spr,rtq->sptq", dt, f)  # contracted with X[s, t]
    fd = np.einsum("rsq,tpr->tpsq", dt, f)  # contracted with X[t, s]
    ff = np.einsum("tpr,rsq->tpsq", f, f)
    dd = np.einsum("tpr,rsq->tpsq", dt, dt)
    quad = (
        1j * np.einsum("sptq,kst->kpq", df, X)
        + np.einsum("tpsq,kts->kpq", 1j * fd - ff + dd, X)
    )
    return (
        (np.abs(v0) ** 2)[:, None, None] * eye
        + (2 / d) * np.einsum("kp,kq->kpq", v, vc)
        + 1j * lin_f + lin_d + quad
    )


def affine_from_osr(K: KrausSet, st: StructureTensors, tol: float = REALITY_TOL) -> AffineMap:
    """Affine map T = sum eta_k T_k, t = sum eta_k t_k from a weighted Kraus set."""
    Tc = np.einsum("k,kpq->pq", K.etas, linear_terms(K, st)) if len(K) else np.zeros((st.n, st.n))
    tc = np.einsum("k,kq->q", K.etas, translation_terms(K, st)) if len(K) else np.zeros(st.n)
    resid = float(max(np.abs(np.imag(Tc)).max(), np.abs(np.imag(tc)).max()))
    scale = max(1.0, float(np.abs(Tc).max()), float(np.abs(tc).max()))
    if resid > tol * scale:
        raise ArithmeticError(f"affine map has imaginary residue {resid:.3g}")
    return AffineMap(st.dim, np.real(Tc), np.real(tc), imag_residual=resid)


def affine_from_dynamical(B: DynamicalMapB, gens: GeneratorSet) -> AffineMap:
    """Read (T, t) off the map by probing it with states, without an OSR.

    t is the image of the maximally mixed state; row p of T is the image of
    (1 + b lambda_p)/d minus t.  The map is linear in rho, so the unit step is
    exact.
    """
    _check_hermitian(B)
    if B.dim != gens.dim:
        raise DimensionError(f"B has d={B.dim}, generators have d={gens.dim}")
    d = gens.dim
    t = to_polarization(apply_dynamical(B, np.eye(d) / d), gens).n
    rows = []
    for lam in gens.generators:
        probe = (np.eye(d) + gens.b * lam) / d
        rows.append(to_polarization(apply_dynamical(B, probe), gens).n - t)
    return AffineMap(d, np.array(rows), t)


def apply_affine(M: AffineMap, n) -> PolarizationVector:
    """n'_q = T_pq n_p + t_q."""
    v = _as_vector(n)
    if v.shape != M.t.shape:
        raise DimensionError(f"vector length {v.shape} does not match map for d={M.dim}")
    return PolarizationVector(M.dim, M.T.T @ v + M.t)


def compose_affine(first: AffineMap, second: AffineMap) -> AffineMap:
    """The affine map of applying ``first`` then ``second``."""
    if first.dim != second.dim:
        raise DimensionError("cannot compose maps of different dimension")
    return AffineMap(first.dim, first.T @ second.T, second.T.T @ first.t + second.t)


# --- structural checks -----------------------------------------------------


@dataclass
class ConditionReport:
    passed: bool
    scalar_residual: float
    vector_residual: float
    direct_residual: float

    def __bool__(self) -> bool:
        return self.passed


def _scalar_condition(K: KrausSet) -> float:
    s = np.sum(K.etas * (np.abs(K.v0) ** 2 + (2 / K.dim) * np.einsum("ki,ki->k", K.v, K.v.conj()).real))
    return float(abs(s - 1))


def check_unital(K: KrausSet, st: StructureTensors, tol: float = 1e-10) -> ConditionReport:
    """Unitality: sum eta(|v0|^2 + 2/d v.v*) = 1 and the vector condition vanish.

    Cross-checked by applying the map to the identity.
    """
    _require_expansion(K, st)
    vec = np.zeros(st.n, dtype=complex)
    for eta, v0, v in zip(K.etas, K.v0, K.v):
        vc = v.conj()
        vec += eta * (v0 * vc + np.conj(v0) * v + 1j * cross_product(v, vc, st) + d_contract(v, vc, st))
    scal = _scalar_condition(K)
    direct = float(np.abs(apply_osr(K, np.eye(K.dim)).mat - np.eye(K.dim)).max())
    vres = float(np.abs(vec).max())
    return ConditionReport(scal < tol and vres < tol, scal, vres, direct)


def check_trace_preserving(K: KrausSet, st: StructureTensors, tol: float = 1e-10) -> ConditionReport:
    """Trace preservation via the generator-expansion conditions.

    Cross-checked against sum eta_k C_k^dagger C_k = 1.
    """
    _require_expansion(K, st)
    vec = np.zeros(st.n, dtype=complex)
    for eta, v0, v in zip(K.etas, K.v0, K.v):
        vc = v.conj()
        vec += eta * (v0 * vc + np.conj(v0) * v + 1j * cross_product(vc, v, st) + d_contract(vc, v, st))
    scal = _scalar_condition(K)
    completeness = np.einsum("k,kba,kbc->ac", K.etas, K.ops.conj(), K.ops)
    direct = float(np.abs(completeness - np.eye(K.dim)).max())
    vres = float(np.abs(vec).max())
    return ConditionReport(scal < tol and vres < tol, scal, vres, direct)


@dataclass
class SymmetryReport:
    antisymmetric: np.ndarray
    max_entry: float
    symmetric: bool
    # sufficient conditions evaluated on the Kraus set, when one was given
    all_real: bool | None = None
    v0_or_v_zero: bool | None = None
    equal_components: bool | None = None


def antisymmetric_part(M: AffineMap, K: KrausSet | None = None, tol: float = 1e-10) -> SymmetryReport:
    A = (M.T - M.T.T) / 2
    amax = float(np.abs(A).max())
    rep = SymmetryReport(A, amax, amax < tol)
    if K is not None and K.has_expansion:
        rep.all_real = bool(np.abs(K.v0.imag).max() < tol and np.abs(K.v.imag).max() < tol)
        rep.v0_or_v_zero = bool(all(abs(v0) < tol or np.abs(v).max() < tol for v0, v in zip(K.v0, K.v)))
        rep.equal_components = bool(all(
            np.abs(v - v[0]).max() < tol and abs(v0 - v[0]) < tol for v0, v in zip(K.v0, K.v)
        ))
    return rep


def svd_affine(M: AffineMap):
    """Return (O1, D, O2) with T = O1 diag(D) O2 and O1, O2 in SO(n).

    Reflections are moved into the sign of the smallest singular value, so D
    may carry negative entries; |D| is sorted descending.
    """
    U, S, Vt = np.linalg.svd(M.T)
    D = S.copy()
    if np.linalg.det(U) < 0:
        U[:, -1] *= -1
        D[-1] *= -1
    if np.linalg.det(Vt) < 0:
        Vt[-1, :] *= -1
        D[-1] *= -1
    return U, D, Vt
