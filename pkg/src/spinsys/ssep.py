"""Symmetric simple exclusion process on a finite graph.

Configurations of n particles are bitmasks over the vertex set, listed in
ascending integer order; the exchange move eta -> eta^xy is a bit swap.
Edge weights of the underlying graph are read as exchange rates r_xy > 0.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations
from math import comb

import numpy as np
import scipy.sparse as sp

from .lattice import SpinGraph, is_connected
from .hilbert import SpinSpace, SparseOperator, down_spin_sector
from .models import Interaction, assemble, _two_site_dot
from .spectral import full_spectrum, sector_spectrum
from .hilbert import spin_matrices

GAP_ZERO_TOL = 1e-10


@dataclass(frozen=True)
class ExclusionSpace:
    graph: SpinGraph
    n: int
    configs: tuple = field(init=False)

    def __post_init__(self):
        if not (0 <= self.n <= self.graph.n_vertices):
            raise ValueError(f"particle number {self.n} outside 0..{self.graph.n_vertices}")
        if any(w <= 0 for (_, _, w) in self.graph.edges):
            raise ValueError("all exchange rates must be strictly positive")
        masks = sorted(sum(1 << v for v in occ)
                       for occ in combinations(range(self.graph.n_vertices), self.n))
        object.__setattr__(self, "configs", tuple(masks))
        assert len(masks) == comb(self.graph.n_vertices, self.n)

    @property
    def dim(self) -> int:
        return len(self.configs)


def ssep_generator(space: ExclusionSpace) -> SparseOperator:
    """L f(eta) = sum_edges r_xy (f(eta) - f(eta^xy)); symmetric, L >= 0, L1 = 0."""
    index = {m: i for i, m in enumerate(space.configs)}
    rows, cols, data = [], [], []
    for i, eta in enumerate(space.configs):
        diag = 0.0
        for (x, y, r) in space.graph.edges:
            bx = (eta >> x) & 1
            by = (eta >> y) & 1
            if bx != by:
                swapped = eta ^ ((1 << x) | (1 << y))
                j = index[swapped]
                rows.append(i)
                cols.append(j)
                data.append(-r)
                diag += r
        if diag:
            rows.append(i)
            cols.append(i)
            data.append(diag)
    mat = sp.coo_matrix((data, (rows, cols)), shape=(space.dim, space.dim))
    return SparseOperator(mat, hermitian=True)


@dataclass
class GeneratorReport:
    gaps: dict                  # n -> lambda(n)
    dims: dict                  # n -> |Omega_n|
    stationary_checks: dict     # n -> ||L 1||_inf deviation
    aldous_margin: float


def _gap_of_generator(gen: SparseOperator) -> float:
    evals = full_spectrum(gen, cutoff=gen.dim).eigenvalues
    positive = evals[evals > GAP_ZERO_TOL * max(1.0, abs(evals).max())]
    if positive.size == 0:
        raise ValueError("generator has no positive eigenvalue")
    return float(positive[0])


def ssep_gaps(g: SpinGraph) -> GeneratorReport:
    """lambda(n) for every 1 <= n <= |V|-1 plus the Aldous margin."""
    if not is_connected(g):
        raise ValueError("graph is disconnected: lambda(1) = 0 and the gaps degenerate")
    gaps, dims, stat = {}, {}, {}
    for n in range(1, g.n_vertices):
        space = ExclusionSpace(g, n)
        gen = ssep_generator(space)
        ones = np.ones(space.dim)
        stat[n] = float(np.abs(gen.matrix @ ones).max())
        gaps[n] = _gap_of_generator(gen)
        dims[n] = space.dim
    margin = max(abs(gaps[n] - gaps[1]) for n in gaps)
    return GeneratorReport(gaps=gaps, dims=dims, stationary_checks=stat,
                           aldous_margin=float(margin))


def ssep_spin_interaction(g: SpinGraph) -> Interaction:
    """The conjugate spin-1/2 Hamiltonian sum_edges [-2 r S.S + r/2]."""
    s = spin_matrices(0.5)
    dot = _two_site_dot(s, s)
    terms = []
    for (x, y, r) in g.edges:
        terms.append(((x, y), -2 * r * dot + (r / 2) * np.eye(4)))
    return Interaction(terms, name="ssep_conjugate")


@dataclass
class ConjugacyReport:
    max_deviation: float
    per_n: dict                 # n -> max |sorted spec L - sorted spec H|n|
    uniform_rayleigh: dict      # n -> quotient of the uniform vector


def xxx_conjugacy_check(g: SpinGraph, tol=1e-10) -> ConjugacyReport:
    """Verify spec(L on Omega_n) = spec(H_spin on the M = n - |V|/2 sector)
    as multisets, for every particle number n."""
    if not is_connected(g):
        raise ValueError("conjugacy check requires a connected graph")
    spin_space = SpinSpace.from_spins([0.5] * g.n_vertices)
    H = assemble(ssep_spin_interaction(g), spin_space)
    per_n = {}
    uniform = {}
    for n in range(0, g.n_vertices + 1):
        space = ExclusionSpace(g, n)
        gen = ssep_generator(space)
        spec_l = np.sort(full_spectrum(gen, cutoff=gen.dim).eigenvalues)
        sector = down_spin_sector(spin_space, g.n_vertices - n)  # M = n - |V|/2
        spec_h = np.sort(sector_spectrum(H, sector).eigenvalues)
        dev = float(np.abs(spec_l - spec_h).max()) if spec_l.size else 0.0
        per_n[n] = dev
        ones = np.ones(space.dim) / np.sqrt(space.dim)
        uniform[n] = float(np.real(ones @ (gen.matrix @ ones)))
    worst = max(per_n.values())
    if worst > tol:
        bad = max(per_n, key=per_n.get)
        raise ValueError(
            f"conjugacy failure at n={bad}: max eigenvalue deviation {worst:.3e}")
    return ConjugacyReport(max_deviation=worst, per_n=per_n, uniform_rayleigh=uniform)


def semigroup_evolve(gen: SparseOperator, mu0, t: float) -> np.ndarray:
    """mu_t = e^(-tL) mu_0 by spectral decomposition (L is symmetric, so the
    duality pairing reduces to matrix action on the distribution)."""
    if t < 0:
        raise ValueError("time must be nonnegative")
    mu0 = np.asarray(mu0, dtype=float)
    if mu0.ndim != 1 or mu0.size != gen.dim:
        raise ValueError("distribution size does not match the configuration space")
    if np.any(mu0 < -1e-12) or abs(mu0.sum() - 1.0) > 1e-12:
        raise ValueError("mu0 must be entrywise nonnegative and sum to 1")
    rep = full_spectrum(gen, want_vectors=True, cutoff=gen.dim)
    V = rep.eigenvectors.real
    mu_t = V @ (np.exp(-t * rep.eigenvalues) * (V.T @ mu0))
    return mu_t
