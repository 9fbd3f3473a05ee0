"""so(N) generators, the adjoint embedding su(3) -> so(8), and qutrit
positivity scans under shrink-and-rotate maps."""
from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations

import numpy as np

from .errors import DimensionError
from .state import PolarizationVector, _as_vector, from_polarization, min_eigenvalue, pure_state, s3_invariant
from .su_basis import GeneratorSet, StructureTensors, generate_gellmann


@dataclass(frozen=True)
class SOGenerator:
    """Hermitian, purely imaginary n x n generator; exp(-i theta mat) is a rotation."""

    n: int
    label: str
    mat: np.ndarray

    def rotation(self, theta: float) -> np.ndarray:
        return rotation_matrix(self.mat, theta)


def m_matrix(n: int, j: int, k: int) -> np.ndarray:
    """m_jk = i(E_jk - E_kj) with 1-based j, k."""
    m = np.zeros((n, n), dtype=complex)
    m[j - 1, k - 1] = 1j
    m[k - 1, j - 1] = -1j
    return m


def so_basis(n: int) -> list[SOGenerator]:
    """All n(n-1)/2 generators m_jk, j < k, in lexicographic order."""
    if n < 2:
        raise DimensionError(f"so(n) needs n >= 2, got {n}")
    return [SOGenerator(n, f"m{j}{k}", m_matrix(n, j, k))
            for j, k in combinations(range(1, n + 1), 2)]


def rotation_matrix(gen: np.ndarray, theta: float) -> np.ndarray:
    """exp(-i theta gen) for Hermitian gen, via its eigendecomposition."""
    w, V = np.linalg.eigh(gen)
    R = (V * np.exp(-1j * theta * w)) @ V.conj().T
    if np.abs(R.imag).max() > 1e-10:
        raise ArithmeticError("generator does not produce a real rotation")
    return R.real


def su3_adjoint_generators(st: StructureTensors) -> list[SOGenerator]:
    """Adjoint generators with entries (f_a)_jk = i f_ajk."""
    if st.dim != 3:
        raise DimensionError(f"su(3) adjoint generators need d=3 tensors, got d={st.dim}")
    return [SOGenerator(8, f"f{a + 1}", 1j * st.f[a]) for a in range(8)]


def adjoint_closure_residual(gens: list[SOGenerator], st: StructureTensors) -> float:
    """Max deviation of [F_a, F_b] from i f_abc F_c, with F_a = i f_a (real antisymmetric)."""
    F = np.array([g.mat.imag for g in gens])  # real antisymmetric (F_a)_jk = f_ajk
    comm = np.einsum("ajk,bkl->abjl", F, F) - np.einsum("bjk,akl->abjl", F, F)
    # Jacobi gives [F_a, F_b] = -f_abc F_c for (F_a)_jk = f_ajk
    return float(np.abs(comm + np.einsum("abc,cjl->abjl", st.f, F)).max())


_H = 0.5
_R3 = np.sqrt(3) / 2

# f_a as coefficient lists over m_jk
EMBEDDING = {
    "f1": [(1, (2, 3)), (_H, (4, 7)), (-_H, (5, 6))],
    "f2": [(-1, (1, 3)), (_H, (4, 6)), (_H, (5, 7))],
    "f3": [(1, (1, 2)), (_H, (4, 5)), (-_H, (6, 7))],
    "f4": [(-_H, (1, 7)), (-_H, (2, 6)), (-_H, (3, 5)), (_R3, (5, 8))],
    "f5": [(_H, (1, 6)), (-_H, (2, 7)), (_H, (3, 4)), (-_R3, (4, 8))],
    "f6": [(-_H, (1, 5)), (_H, (2, 4)), (_H, (3, 7)), (_R3, (7, 8))],
    "f7": [(_H, (1, 4)), (_H, (2, 5)), (-_H, (3, 6)), (-_R3, (6, 8))],
    "f8": [(_R3, (4, 5)), (_R3, (6, 7))],
}

_S3 = np.sqrt(3)

COMPLETION = {
    "f9": [(_H, (4, 7)), (_H, (5, 6))],
    # -(m47 - m56) alone overlaps f1; the m23 term (as in f13) makes it orthogonal
    "f10": [(1, (2, 3)), (-1, (4, 7)), (1, (5, 6))],
    "f11": [(1, (1, 3)), (1, (4, 6)), (1, (5, 7))],
    "f12": [(1, (4, 6)), (-1, (5, 7))],
    "f13": [(1, (1, 2)), (-1, (4, 5)), (1, (6, 7))],
    "f14": [(1, (1, 7)), (1, (2, 6)), (1, (3, 5)), (_S3, (5, 8))],
    "f15": [(1, (1, 7)), (-2, (2, 6)), (1, (3, 5))],
    "f16": [(1, (1, 7)), (-1, (3, 5))],
    "f17": [(1, (1, 6)), (-1, (2, 7)), (1, (3, 4)), (_S3, (4, 8))],
    "f18": [(1, (1, 6)), (2, (2, 7)), (1, (3, 4))],
    "f19": [(1, (1, 6)), (-1, (3, 4))],
    "f20": [(-1, (1, 5)), (1, (2, 4)), (1, (3, 7)), (-_S3, (7, 8))],
    "f21": [(1, (2, 4)), (2, (1, 5)), (1, (3, 7))],
    "f22": [(1, (2, 4)), (-1, (3, 7))],
    "f23": [(1, (1, 4)), (1, (2, 5)), (-1, (3, 6)), (_S3, (6, 8))],
    "f24": [(1, (1, 4)), (2, (3, 6)), (1, (2, 5))],
    "f25": [(1, (1, 4)), (-1, (2, 5))],
    "f26": [(1, (1, 8))],
    "f27": [(1, (2, 8))],
    "f28": [(1, (3, 8))],
}

F10_WITHOUT_M23 = [(-1, (4, 7)), (1, (5, 6))]


def _evaluate(expansion, n: int = 8) -> np.ndarray:
    return sum(c * m_matrix(n, j, k) for c, (j, k) in expansion)


def embedding_expansions() -> dict[str, list]:
    """Expansions of the adjoint su(3) generators f1..f8 over m_jk."""
    return {k: list(v) for k, v in EMBEDDING.items()}


def embedding_residuals(st: StructureTensors) -> dict[str, float]:
    adj = {g.label: g.mat for g in su3_adjoint_generators(st)}
    return {k: float(np.abs(_evaluate(v) - adj[k]).max()) for k, v in EMBEDDING.items()}


def completion_basis() -> list[SOGenerator]:
    """The twenty elements f9..f28 completing f1..f8 to a basis of so(8)."""
    return [SOGenerator(8, k, _evaluate(v)) for k, v in COMPLETION.items()]


def named_generator(name: str) -> SOGenerator:
    """Look up f1..f28 or m_jk (e.g. ``"m38"``) by name."""
    name = name.lower()
    if name in EMBEDDING:
        return SOGenerator(8, name, _evaluate(EMBEDDING[name]))
    if name in COMPLETION:
        return SOGenerator(8, name, _evaluate(COMPLETION[name]))
    if name.startswith("m") and len(name) == 3 and name[1:].isdigit():
        j, k = int(name[1]), int(name[2])
        if 1 <= j < k <= 8:
            return SOGenerator(8, name, m_matrix(8, j, k))
    raise KeyError(f"unknown generator {name!r}")


def full_basis() -> list[SOGenerator]:
    return [named_generator(k) for k in EMBEDDING] + completion_basis()


def gram_matrix(gens: list[SOGenerator]) -> np.ndarray:
    """Hilbert-Schmidt Gram matrix Tr(g_i^dagger g_j) (real for these generators)."""
    A = np.array([g.mat for g in gens])
    G = np.einsum("iab,jab->ij", A.conj(), A)
    return G.real


def rotate(n, g: SOGenerator, theta: float) -> PolarizationVector | np.ndarray:
    """n' = exp(-i theta g) n."""
    v = _as_vector(n)
    if v.shape != (g.n,):
        raise DimensionError(f"vector length {v.shape} does not match generator size {g.n}")
    out = g.rotation(theta) @ v
    return PolarizationVector(n.dim, out) if isinstance(n, PolarizationVector) else out


@dataclass
class ScanGrid:
    theta_values: np.ndarray
    p_values: np.ndarray
    values: np.ndarray  # S3, shape (len(theta), len(p))
    min_eigenvalues: np.ndarray | None = None

    def to_csv(self) -> str:
        lines = ["theta,p,S3"]
        for i, th in enumerate(self.theta_values):
            for j, p in enumerate(self.p_values):
                lines.append(f"{th:.17g},{p:.17g},{self.values[i, j]:.17g}")
        return "\n".join(lines) + "\n"


DEFAULT_THETAS = np.linspace(0.0, 2 * np.pi, 241)
DEFAULT_PS = np.linspace(0.0, 1.0, 101)


def positivity_scan(n0, g: SOGenerator, thetas=None, ps=None, st: StructureTensors | None = None,
                    gens: GeneratorSet | None = None) -> ScanGrid:
    """S3 of (1 - p) exp(-i theta g) n0 over a (theta, p) grid.

    If ``gens`` is given the minimum eigenvalue of each state is recorded too.
    """
    if st is None or st.dim != 3:
        raise DimensionError("positivity scans are defined for qutrits (d=3)")
    thetas = DEFAULT_THETAS if thetas is None else np.asarray(thetas, dtype=float)
    ps = DEFAULT_PS if ps is None else np.asarray(ps, dtype=float)
    v0 = _as_vector(n0)
    vals = np.empty((thetas.size, ps.size))
    eigs = np.empty_like(vals) if gens is not None else None
    for i, th in enumerate(thetas):
        rot = g.rotation(th) @ v0
        for j, p in enumerate(ps):
            v = (1 - p) * rot
            vals[i, j] = s3_invariant(v, st)
            if eigs is not None:
                eigs[i, j] = min_eigenvalue(from_polarization(v, gens))
    return ScanGrid(thetas, ps, vals, eigs)


@dataclass
class BallReport:
    radius: float
    samples: int
    min_eigenvalue: float
    min_s3: float
    violations: int  # samples with min eigenvalue < -tol

    @property
    def all_positive(self) -> bool:
        return self.violations == 0


def random_rotation(rng: np.random.Generator, n: int = 8) -> np.ndarray:
    """exp of a random combination of all m_jk with coefficients in [-pi, pi]."""
    coeffs = rng.uniform(-np.pi, np.pi, size=n * (n - 1) // 2)
    gen = sum(c * g.mat for c, g in zip(coeffs, so_basis(n)))
    return rotation_matrix(gen, 1.0)


def ball_positivity_check(radius: float, samples: int, st: StructureTensors, seed: int = 0,
                          gens: GeneratorSet | None = None, tol: float = 1e-9) -> BallReport:
    """Rotate radius-scaled pure-state directions by random SO(8) elements and
    check positivity of the resulting qutrit states."""
    if st.dim != 3:
        raise DimensionError("ball positivity check is defined for qutrits (d=3)")
    if radius < 0:
        raise ValueError("radius must be non-negative")
    gens = gens or generate_gellmann(3)
    rng = np.random.default_rng(seed)
    min_eig, min_s3, bad = np.inf, np.inf, 0
    for _ in range(samples):
        psi = rng.normal(size=3) + 1j * rng.normal(size=3)
        direction = pure_state(psi, gens).n
        v = random_rotation(rng) @ (radius * direction)
        e = min_eigenvalue(from_polarization(v, gens))
        min_eig = min(min_eig, e)
        min_s3 = min(min_s3, s3_invariant(v, st))
        bad += e < -tol
    return BallReport(radius, samples, float(min_eig), float(min_s3), int(bad))
