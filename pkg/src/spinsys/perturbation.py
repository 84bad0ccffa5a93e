"""Finite-size probes of gap stability under perturbations.

The frustration-free check verifies H >= 0, H Omega = 0 and measures the
constant c in H >= c (1 - |Omega><Omega|); the sweep tracks the spectral
gap of base + lambda * perturbation over an (L, lambda) grid.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .hilbert import SpinSpace
from .models import Interaction, assemble
from .spectral import DEGENERACY_TOL, SpectrumReport, full_spectrum, sector_sweep_lowest, \
    spectral_gap

PSD_TOL = 1e-12


@dataclass
class FrustrationFreeReport:
    ground_energy: float
    ground_degeneracy: int
    psd: bool                  # H >= 0 up to tolerance
    zero_energy: bool          # ground energy = 0 up to tolerance
    c: float                   # largest c with H >= c (1 - P_ground)
    v0_size: int
    condition_holds: bool      # c >= |V0|


def _lowest_levels(phi: Interaction, space: SpinSpace, k=6, threads=1) -> np.ndarray:
    H = assemble(phi, space)
    if space.total_dim <= 4096:
        return full_spectrum(H).eigenvalues
    merged, _ = sector_sweep_lowest(H, space, k=k, threads=threads)
    return merged.eigenvalues


def frustration_free_check(phi: Interaction, space: SpinSpace, v0_size: int,
                           tol=1e-9, threads=1) -> FrustrationFreeReport:
    """Check the unperturbed-model assumption at finite volume.

    c is the energy of the first level above the ground space, i.e. the
    second excitation scale entering H >= c (1 - |Omega><Omega|); the report
    states whether c reaches |V0| as the stability framework demands.
    """
    levels = _lowest_levels(phi, space, threads=threads)
    gap_rep = spectral_gap(SpectrumReport(levels), degeneracy_tol=max(tol, DEGENERACY_TOL))
    e0 = gap_rep.ground_energy
    psd = e0 >= -PSD_TOL * max(1.0, abs(levels).max())
    zero = abs(e0) <= tol
    c = gap_rep.gap if zero else math.nan
    return FrustrationFreeReport(
        ground_energy=e0, ground_degeneracy=gap_rep.ground_degeneracy,
        psd=bool(psd), zero_energy=bool(zero), c=float(c), v0_size=v0_size,
        condition_holds=bool(zero and psd and gap_rep.ground_degeneracy == 1
                             and c >= v0_size - tol))


def relative_bound_alpha(phi_r, h, tol=1e-10):
    """Smallest alpha with |<psi, phi psi>| <= alpha ||h^(1/2) psi||^2.

    Infinite when phi_r does not vanish on ker h; otherwise the spectral
    norm of h^(-1/2) phi_r h^(-1/2) on the range of h.
    """
    phi_r = np.asarray(phi_r, dtype=complex)
    h = np.asarray(h, dtype=complex)
    for name, m in (("phi", phi_r), ("h", h)):
        if np.abs(m - m.conj().T).max() > 1e-12:
            raise ValueError(f"{name} must be Hermitian")
    w, U = np.linalg.eigh(h)
    scale = max(1.0, abs(w).max())
    if w[0] < -1e-10 * scale:
        raise ValueError("h must be positive semidefinite")
    kernel = w <= tol * scale
    if kernel.all():
        return math.inf if np.abs(phi_r).max() > tol else 0.0
    P_ker = U[:, kernel]
    if P_ker.size and np.abs(phi_r @ P_ker).max() > tol:
        return math.inf
    R = U[:, ~kernel]
    inv_sqrt = 1.0 / np.sqrt(w[~kernel])
    M = (inv_sqrt[:, None] * (R.conj().T @ phi_r @ R)) * inv_sqrt[None, :]
    return float(np.abs(np.linalg.eigvalsh(M)).max())


@dataclass
class StabilitySweep:
    lambdas: list
    Ls: list
    gaps: dict                      # (L, lambda) -> gap
    ground_energies: dict           # (L, lambda) -> E0
    ground_degeneracies: dict       # (L, lambda) -> count
    pert_norms: dict                # L -> || sum_x Phi_x ||
    stable_lambdas: list = field(default_factory=list)

    def weyl_bound(self, L, lam):
        """2 |lambda| ||sum Phi_x||: an upper bound on the gap change."""
        return 2.0 * abs(lam) * self.pert_norms[L]


def gap_sweep(base_builder, pert_builder, lambdas, Ls, threads=1,
              tol=1e-10) -> StabilitySweep:
    """Gaps and ground degeneracies of base(L) + lambda * pert(L) over the grid.

    ``base_builder`` and ``pert_builder`` map L to an Interaction.  The
    lambda = 0 column is computed from the base interaction alone, so it
    matches an unperturbed run exactly.
    """
    from .spectral import extremal_eigs

    lambdas = [float(v) for v in lambdas]
    Ls = [int(L) for L in Ls]
    gaps, energies, degs, pert_norms = {}, {}, {}, {}
    for L in Ls:
        base = base_builder(L)
        pert = pert_builder(L)
        space = SpinSpace.from_spins(base.params.get("spins", (1.0,) * L)
                                     if "spins" in base.params else
                                     _infer_spins(base, L))
        pert_H = assemble(pert, space)
        # || sum Phi_x ||: extremal eigenvalues of the Hermitian sum
        top = extremal_eigs(-1 * pert_H.matrix, k=1, tol=1e-8).eigenvalues[0]
        bot = extremal_eigs(pert_H.matrix, k=1, tol=1e-8).eigenvalues[0]
        pert_norms[L] = float(max(abs(top), abs(bot)))
        for lam in lambdas:
            phi = base if lam == 0.0 else base + pert.scaled(lam)
            levels = _lowest_levels(phi, space, threads=threads)
            rep = spectral_gap(SpectrumReport(levels))
            gaps[(L, lam)] = rep.gap
            energies[(L, lam)] = rep.ground_energy
            degs[(L, lam)] = rep.ground_degeneracy
    L_big = max(Ls)
    ref = gaps[(L_big, 0.0)] if (L_big, 0.0) in gaps else max(
        gaps[(L_big, lam)] for lam in lambdas)
    stable = [lam for lam in lambdas if gaps[(L_big, lam)] > ref / 2]
    return StabilitySweep(lambdas=lambdas, Ls=Ls, gaps=gaps,
                          ground_energies=energies, ground_degeneracies=degs,
                          pert_norms=pert_norms, stable_lambdas=stable)


def _infer_spins(phi: Interaction, L: int):
    """Fallback local dimensions from the term matrices (uniform chains)."""
    for support, mat in phi.terms:
        if len(support) == 2:
            d = int(round(math.sqrt(mat.shape[0])))
            return ((d - 1) / 2,) * L
        if len(support) == 1:
            return ((mat.shape[0] - 1) / 2,) * L
    raise ValueError("cannot infer local dimensions from the interaction")
