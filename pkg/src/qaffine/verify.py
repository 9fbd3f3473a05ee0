"""Invariant suites run by ``qaffine verify``."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import channels, maps, rotations, state
from .su_basis import (
    compute_structure_constants,
    generate_gellmann,
    reconstruction_residual,
    star_product,
    verify_identities,
)

DEFAULT_TOL = 1e-10


@dataclass
class SuiteResult:
    suite: str
    dim: int
    check: str
    residual: float
    tol: float

    @property
    def passed(self) -> bool:
        return bool(np.isfinite(self.residual) and self.residual < self.tol)


def _identities(d, gens, st, rng, tol):
    out = [SuiteResult("identities", d, "reconstruction", reconstruction_residual(gens, st), tol)]
    out += [SuiteResult("identities", d, c.name, c.residual, tol) for c in verify_identities(st, tol)]
    return out


def _roundtrip(d, gens, st, rng, tol):
    worst_vec = worst_mat = 0.0
    for _ in range(10):
        n = rng.normal(size=gens.n)
        back = state.to_polarization(state.from_polarization(n, gens), gens).n
        worst_vec = max(worst_vec, float(np.abs(back - n).max()))
        H = rng.normal(size=(d, d)) + 1j * rng.normal(size=(d, d))
        rho = H + H.conj().T
        rho = rho / np.trace(rho).real
        again = state.from_polarization(state.to_polarization(rho, gens), gens).mat
        worst_mat = max(worst_mat, float(np.abs(again - rho).max()))
    out = [SuiteResult("roundtrip", d, "vector", worst_vec, tol),
           SuiteResult("roundtrip", d, "matrix", worst_mat, tol)]
    if d >= 3:
        worst = 0.0
        for _ in range(10):
            psi = rng.normal(size=d) + 1j * rng.normal(size=d)
            n = state.pure_state(psi, gens).n
            worst = max(worst, abs(n @ n - 1), float(np.abs(star_product(n, n, st) - n).max()))
        out.append(SuiteResult("roundtrip", d, "pure-state star", worst, tol))
    return out


def _random_kraus(rng, d, gens):
    k = int(rng.integers(1, 6))
    ops = rng.normal(size=(k, d, d)) + 1j * rng.normal(size=(k, d, d))
    return maps.KrausSet(d, rng.normal(size=k), ops).with_expansion(gens)


def _consistency(d, gens, st, rng, tol):
    worst = worst_dyn = imag = 0.0
    for _ in range(20):
        K = _random_kraus(rng, d, gens)
        M = maps.affine_from_osr(K, st, tol=np.inf)
        imag = max(imag, M.imag_residual)
        for _ in range(5):
            n = rng.normal(size=gens.n)
            n *= rng.uniform() / np.linalg.norm(n)
            direct = state.to_polarization(maps.apply_osr(K, state.from_polarization(n, gens)), gens).n
            worst = max(worst, float(np.abs(direct - maps.apply_affine(M, n).n).max()))
        M2 = maps.affine_from_dynamical(maps.dynamical_from_osr(K), gens)
        worst_dyn = max(worst_dyn, float(np.abs(M2.T - M.T).max()), float(np.abs(M2.t - M.t).max()))
    return [SuiteResult("consistency", d, "osr vs affine", worst, max(tol, 1e-9)),
            SuiteResult("consistency", d, "dynamical vs osr", worst_dyn, max(tol, 1e-9)),
            SuiteResult("consistency", d, "imaginary residue", imag, tol)]


def _channels(d, gens, st, rng, tol):
    if d != 3:
        return []
    out = []
    worst = 0.0
    for x in (0.1, 0.25, 0.5, 0.8):
        M = maps.affine_from_osr(channels.depolarizing_qutrit(x), st)
        worst = max(worst, float(np.abs(M.T - (1 - 9 * x / 8) * np.eye(8)).max()), float(np.abs(M.t).max()))
    out.append(SuiteResult("channels", d, "depolarizing shrink", worst, tol))
    worst = 0.0
    for x in (0.1, 0.25, 0.5, 0.8):
        M = maps.affine_from_osr(channels.phase_damping_qutrit(x), st)
        expect = np.full(8, 1 - 3 * x / 5)
        expect[[2, 7]] = 1.0
        worst = max(worst, float(np.abs(M.T - np.diag(expect)).max()))
    out.append(SuiteResult("channels", d, "phase damping shrink", worst, tol))
    worst = 0.0
    for ks in (channels.depolarizing_qutrit(0.3), channels.phase_damping_qutrit(0.3),
               channels.off_diagonal_qutrit(0.3)):
        rep = maps.check_trace_preserving(ks, st)
        worst = max(worst, rep.scalar_residual, rep.vector_residual, rep.direct_residual)
    out.append(SuiteResult("channels", d, "trace preserving", worst, tol))
    return out


def _trace_product(d, gens, st, rng, tol):
    G = channels.trace_product_matrix(channels.pauli_affine_maps(d))
    n = G.shape[0]
    off = G[~np.eye(n, dtype=bool)]
    resid = max(float(np.abs(off + 1).max()), float(np.abs(np.diag(G) - (d * d - 1)).max()))
    return [SuiteResult("trace-product", d, "Tr(Ti^T Tj)", resid, tol)]


def _embedding(d, gens, st, rng, tol):
    if d != 3:
        return []
    emb = max(rotations.embedding_residuals(st).values())
    closure = rotations.adjoint_closure_residual(rotations.su3_adjoint_generators(st), st)
    G = rotations.gram_matrix(rotations.full_basis())
    orth = float(np.abs(G[8:, :8]).max())
    worst = 0.0
    for g in rotations.full_basis():
        for th in np.linspace(0, 2 * np.pi, 7):
            R = g.rotation(th)
            worst = max(worst, float(np.abs(R.T @ R - np.eye(8)).max()))
    return [SuiteResult("embedding", d, "expansions", emb, tol),
            SuiteResult("embedding", d, "adjoint closure", closure, tol),
            SuiteResult("embedding", d, "completion orthogonality", orth, tol),
            SuiteResult("embedding", d, "rotation orthogonality", worst, tol)]


SUITES = {
    "identities": _identities,
    "roundtrip": _roundtrip,
    "consistency": _consistency,
    "channels": _channels,
    "trace-product": _trace_product,
    "embedding": _embedding,
}


def verify_all(dims, suites=None, tol: float = DEFAULT_TOL, seed: int = 0, tensors=None) -> list[SuiteResult]:
    """Run the named suites (all by default) for every dimension in ``dims``.

    ``tensors`` optionally maps a dimension to a StructureTensors instance to
    use instead of the freshly computed one.
    """
    dims = list(dims)
    if not dims:
        raise ValueError("at least one dimension is required")
    if any(d < 2 or d > 6 for d in dims):
        raise ValueError(f"dimensions must lie in 2..6, got {dims}")
    names = list(SUITES) if suites is None else list(suites)
    unknown = set(names) - set(SUITES)
    if unknown:
        raise ValueError(f"unknown suites {sorted(unknown)}; known: {list(SUITES)}")
    rng = np.random.default_rng(seed)
    results = []
    for d in dims:
        gens = generate_gellmann(d)
        st = (tensors or {}).get(d) or compute_structure_constants(gens)
        for name in names:
            results.extend(SUITES[name](d, gens, st, rng, tol))
    return results


def format_table(results: list[SuiteResult]) -> str:
    rows = [f"{'suite':<14} {'d':>2}  {'check':<26} {'residual':>10}  result"]
    for r in results:
        rows.append(f"{r.suite:<14} {r.dim:>2}  {r.check:<26} {r.residual:>10.2e}  {'PASS' if r.passed else 'FAIL'}")
    return "\n".join(rows)
