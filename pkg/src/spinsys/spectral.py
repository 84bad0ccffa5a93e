"""Dense and Lanczos Hermitian eigensolvers, sector blocking, spectral gaps."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np
import scipy.sparse as sp

from .hilbert import SpinSpace, SparseOperator, SectorBasis, magnetization_sector, restrict

DENSE_CUTOFF = 4096
DEGENERACY_TOL = 1e-8


class ConvergenceError(RuntimeError):
    """Lanczos failed to converge; carries the best residual reached."""

    def __init__(self, message, best_residual):
        super().__init__(f"{message} (best residual {best_residual:.3e})")
        self.best_residual = best_residual


@dataclass
class SpectrumReport:
    eigenvalues: np.ndarray
    eigenvectors: Optional[np.ndarray] = None     # columns
    sector: Optional[tuple] = None
    residuals: Optional[np.ndarray] = None

    def __post_init__(self):
        ev = np.asarray(self.eigenvalues, dtype=float)
        if ev.size > 1 and np.any(np.diff(ev) < -1e-12):
            raise ValueError("eigenvalues must be ascending")
        self.eigenvalues = ev


@dataclass
class GapReport:
    ground_energy: float
    ground_degeneracy: int
    gap: float


def _as_matrix(H):
    if isinstance(H, SparseOperator):
        return H.matrix
    return H


def _residuals(mat, evals, vecs):
    r = mat @ vecs - vecs * evals[None, :]
    return np.linalg.norm(r, axis=0)


def full_spectrum(H, want_vectors=False, cutoff=DENSE_CUTOFF) -> SpectrumReport:
    """All eigenpairs by dense Hermitian diagonalization (dim <= cutoff)."""
    mat = _as_matrix(H)
    if mat.shape[0] > cutoff:
        raise ValueError(
            f"dimension {mat.shape[0]} exceeds the dense cutoff {cutoff}; "
            "use extremal_eigs for the lowest part of the spectrum")
    dense = mat.toarray() if sp.issparse(mat) else np.asarray(mat)
    if want_vectors:
        evals, vecs = np.linalg.eigh(dense)
        res = _residuals(dense, evals, vecs)
        return SpectrumReport(evals, vecs, residuals=res)
    return SpectrumReport(np.linalg.eigvalsh(dense))


def _lanczos_start(dim, rng_round):
    if rng_round == 0:
        v = np.ones(dim, dtype=complex)
    else:
        # documented fallback: deterministic seeded perturbation of the
        # all-ones start, used after a Krylov breakdown
        rng = np.random.default_rng(rng_round)
        v = np.ones(dim, dtype=complex) + rng.standard_normal(dim)
    return v / np.linalg.norm(v)


def extremal_eigs(H, k, tol=1e-10, maxiter=None, want_vectors=True) -> SpectrumReport:
    """k lowest eigenpairs via Lanczos with full reorthogonalization.

    The start vector is the normalized all-ones vector; on breakdown the run
    restarts with a deterministically seeded perturbation.  Small problems
    fall through to the dense path, where Lanczos would be the identity.
    """
    mat = _as_matrix(H)
    dim = mat.shape[0]
    if k < 1:
        raise ValueError("k must be at least 1")
    if dim <= max(2 * k + 2, 16) or dim <= 64:
        rep = full_spectrum(sp.csr_matrix(mat) if not sp.issparse(mat) else mat,
                            want_vectors=True, cutoff=dim)
        sel = slice(0, min(k, dim))
        return SpectrumReport(rep.eigenvalues[sel], rep.eigenvectors[:, sel],
                              residuals=rep.residuals[sel])
    if maxiter is None:
        maxiter = dim
    maxiter = min(maxiter, dim)

    for attempt in range(3):
        Q = np.empty((dim, maxiter), dtype=complex, order="F")
        alpha = []
        beta = []
        Q[:, 0] = _lanczos_start(dim, attempt)
        best_res = np.inf
        broke_down = False
        m = 0
        for j in range(maxiter):
            w = mat @ Q[:, j]
            a = float(np.real(np.vdot(Q[:, j], w)))
            alpha.append(a)
            w = w - a * Q[:, j]
            if j > 0:
                w = w - beta[-1] * Q[:, j - 1]
            # full reorthogonalization against every stored vector, twice
            for _ in range(2):
                w = w - Q[:, :j + 1] @ (Q[:, :j + 1].conj().T @ w)
            b = np.linalg.norm(w)
            m = j + 1
            if m >= k:
                T = np.diag(alpha) + np.diag(beta, 1) + np.diag(beta, -1)
                tvals, tvecs = np.linalg.eigh(T)
                res_est = abs(b * tvecs[-1, :k]).max()
                best_res = min(best_res, res_est)
                if res_est < tol or m == dim:
                    ritz = Q[:, :m] @ tvecs[:, :k]
                    evals = tvals[:k]
                    res = _residuals(mat, evals, ritz)
                    if res.max() < max(tol, 1e-9) * max(1.0, abs(evals).max()):
                        # re-normalize columns for safety
                        ritz /= np.linalg.norm(ritz, axis=0)[None, :]
                        if not want_vectors:
                            return SpectrumReport(evals, residuals=res)
                        return SpectrumReport(evals, ritz, residuals=res)
                    best_res = min(best_res, res.max())
            if b < 1e-13:
                broke_down = True
                break
            beta.append(b)
            if j + 1 < maxiter:
                Q[:, j + 1] = w / b
        if not broke_down:
            raise ConvergenceError(
                f"Lanczos did not converge within {maxiter} iterations", best_res)
        # breakdown: the Krylov space was invariant; retry with perturbed start
    raise ConvergenceError("Lanczos broke down repeatedly", best_res)


def sector_spectrum(H, sector: SectorBasis, k="all", tol=1e-10,
                    want_vectors=False, dense_cutoff=2048) -> SpectrumReport:
    """Spectrum of H restricted to a sector (leak-checked restriction)."""
    sparse_needed = (k != "all") and sector.dim > dense_cutoff
    block = restrict(H, sector, dense=not sparse_needed)
    if k == "all":
        rep = full_spectrum(block, want_vectors=want_vectors, cutoff=max(DENSE_CUTOFF, sector.dim))
    else:
        if sparse_needed:
            rep = extremal_eigs(block, k=k, tol=tol, want_vectors=want_vectors)
        else:
            full = full_spectrum(block, want_vectors=want_vectors, cutoff=max(DENSE_CUTOFF, sector.dim))
            sel = slice(0, min(k, sector.dim))
            rep = SpectrumReport(full.eigenvalues[sel],
                                 None if full.eigenvectors is None else full.eigenvectors[:, sel],
                                 residuals=None if full.residuals is None else full.residuals[sel])
    rep.sector = sector.label
    return rep


def spectral_gap(report: SpectrumReport, degeneracy_tol=DEGENERACY_TOL) -> GapReport:
    """Gap = first eigenvalue above ground + tol, minus the ground energy."""
    ev = report.eigenvalues
    if ev.size < 2:
        raise ValueError("need at least 2 eigenvalues to define a gap")
    e0 = float(ev[0])
    above = ev[ev > e0 + degeneracy_tol]
    if above.size == 0:
        raise ValueError("spectrum is fully degenerate within tolerance; no gap defined")
    degeneracy = int(np.sum(ev <= e0 + degeneracy_tol))
    return GapReport(ground_energy=e0, ground_degeneracy=degeneracy,
                     gap=float(above[0] - e0))


def sector_sweep_lowest(H, space: SpinSpace, k=4, tol=1e-10, dense_cutoff=2048,
                        threads=1):
    """Lowest-k levels from every magnetization sector, merged ascending.

    Returns (merged SpectrumReport, dict label -> per-sector SpectrumReport).
    Dense per sector below the cutoff, Lanczos above.  The merge order is
    canonical (descending M), independent of any parallelism.
    """
    from .util import ordered_map

    sectors = [magnetization_sector(space, M) for M in space.magnetization_values()]

    def solve(sec):
        kk = "all" if sec.dim <= max(k, 2) else min(k, sec.dim)
        return sector_spectrum(H, sec, k=kk, tol=tol, dense_cutoff=dense_cutoff)

    reports = ordered_map(solve, sectors, threads)
    per_sector = {sec.label: rep for sec, rep in zip(sectors, reports)}
    merged = np.sort(np.concatenate([r.eigenvalues for r in reports]))
    return SpectrumReport(merged), per_sector
