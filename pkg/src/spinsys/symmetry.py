"""Total-spin structure: SU(2) and SU_q(2) totals, Casimirs, and the
classification of eigenstates by total spin.

The E(H,S) table is built by scanning only the magnetization sector M = S:
every multiplet of total spin S contributes exactly one vector there, so
labeling that sector's eigenvectors by the Casimir recovers the full table.
Internally S is carried as the integer 2S to keep half-integers exact.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import NamedTuple, Optional

import numpy as np

from .hilbert import SpinSpace, SparseOperator, spin_matrices, embed_at, kron_chain, \
    magnetization_sector, restrict
from .models import XxzParams
from .spectral import full_spectrum

CLASSIFY_DEGENERACY_TOL = 1e-8
CASIMIR_RESIDUAL_TOL = 1e-8
DOMINANCE_FACTOR = 1e3


class ClassificationError(RuntimeError):
    pass


class TotalSpinOps(NamedTuple):
    s1: SparseOperator
    s2: SparseOperator
    s3: SparseOperator
    casimir: SparseOperator


def su2_totals(space: SpinSpace) -> TotalSpinOps:
    """S^i_total = sum_x S^i_x and the Casimir C = S_total . S_total."""
    totals = []
    for comp in range(3):
        acc = None
        for x in range(space.n_sites):
            local = spin_matrices(space.spin_at(x))[comp]
            emb = embed_at(space, [(x, local)]).matrix
            acc = emb if acc is None else acc + emb
        totals.append(acc)
    casimir = sum(t @ t for t in totals)
    return TotalSpinOps(SparseOperator(totals[0], hermitian=True),
                        SparseOperator(totals[1], hermitian=True),
                        SparseOperator(totals[2], hermitian=True),
                        SparseOperator(casimir, hermitian=True))


class SuqOps(NamedTuple):
    s3: SparseOperator
    plus: SparseOperator
    minus: SparseOperator
    t_total: SparseOperator
    casimir: SparseOperator   # generally non-Hermitian; treated as general


def suq2_generators(p: XxzParams) -> SuqOps:
    """Twisted SU_q(2) totals on the spin-1/2 chain.

    S+ carries the t = diag(1/q, q) tail on the sites after the raising
    site and S- the inverse tail before the lowering site; this is the
    spatial mirror of the more common left-tail convention and is the
    chirality that commutes with the boundary field -A(S3_L - S3_1).
    The q-Casimir is S+ S- + ((qT)^-1 + qT) / (1/q - q)^2 with T the
    product of all t_x; its eigenvalues and the commutator relation
    [S+, S-] = (q^(2 S3) - q^(-2 S3)) / (q - 1/q) are unchanged.
    """
    if not (0 < p.q < 1):
        raise ValueError(f"q must lie in (0,1), got {p.q}")
    L = p.L
    space = SpinSpace((2,) * L)
    s = spin_matrices(0.5)
    t = np.diag([1 / p.q, p.q])
    t_inv = np.diag([p.q, 1 / p.q])

    s3_tot = None
    plus_tot = None
    minus_tot = None
    for x in range(L):
        emb3 = embed_at(space, [(x, s.s3)]).matrix
        s3_tot = emb3 if s3_tot is None else s3_tot + emb3
        ops_p = {y: t for y in range(x + 1, L)}
        ops_p[x] = s.plus
        embp = kron_chain(space, ops_p).matrix
        plus_tot = embp if plus_tot is None else plus_tot + embp
        ops_m = {y: t_inv for y in range(x)}
        ops_m[x] = s.minus
        embm = kron_chain(space, ops_m).matrix
        minus_tot = embm if minus_tot is None else minus_tot + embm
    t_total = kron_chain(space, {x: t for x in range(L)}).matrix
    qT = p.q * t_total
    qT_inv = kron_chain(space, {x: t_inv for x in range(L)}).matrix / p.q
    casimir = plus_tot @ minus_tot + (qT_inv + qT) / (1 / p.q - p.q) ** 2
    return SuqOps(SparseOperator(s3_tot, hermitian=True),
                  SparseOperator(plus_tot),
                  SparseOperator(minus_tot),
                  SparseOperator(t_total, hermitian=True),
                  SparseOperator(casimir))


def su2_casimir_value(twice_s: int) -> float:
    s = twice_s / 2
    return s * (s + 1)


def suq_casimir_value(q: float, twice_s: int) -> float:
    return (q ** (-(twice_s + 1)) + q ** (twice_s + 1)) / (1 / q - q) ** 2


def spin_multiplicities(space: SpinSpace) -> dict:
    """2S -> number of spin-S multiplets, from magnetization sector dimensions.

    The grid is derived from the data (dim(M=S) - dim(M=S+1)), not from a
    closed formula, so mixed spin magnitudes are handled uniformly.
    """
    tmax = space.twice_m_total_max()
    dims = {}
    for twice_m in range(tmax, -1, -2):
        dims[twice_m] = magnetization_sector(space, twice_m / 2).dim
    mult = {}
    for twice_s in range(tmax % 2, tmax + 1, 2):
        d_here = dims[twice_s]
        d_above = dims.get(twice_s + 2, 0)
        m = d_here - d_above
        if m > 0:
            mult[twice_s] = m
    return mult


@dataclass
class SpinResolvedLevels:
    """E(H,S) (and the largest energy per S) over the total-spin grid."""

    entries: dict                 # 2S -> min energy among spin-S states
    max_entries: dict             # 2S -> max energy among spin-S states
    counts: dict                  # 2S -> number of spin-S multiplets found
    twice_s_max: int
    casimir_residuals: dict = field(default_factory=dict)

    def spins(self):
        return sorted(self.entries)

    def energy(self, twice_s):
        return self.entries[twice_s]


def _label_cluster(h_vecs, c_block, candidates, hermitian_c, residual_tol):
    """Diagonalize the Casimir restricted to one H-eigenspace and label each
    resulting vector by the nearest candidate Casimir value."""
    sub = h_vecs.conj().T @ (c_block @ h_vecs)
    if hermitian_c:
        cvals, cvecs = np.linalg.eigh(sub)
    else:
        cvals, cvecs = np.linalg.eig(sub)
        if np.abs(cvals.imag).max(initial=0.0) > 1e-8 * max(1.0, np.abs(cvals).max()):
            raise ClassificationError(
                f"q-Casimir eigenvalues acquired imaginary parts up to "
                f"{np.abs(cvals.imag).max():.3e}")
        cvals = cvals.real
    labels = []
    residuals = []
    cand_ts = sorted(candidates)
    cand_vals = np.array([candidates[t] for t in cand_ts])
    for i in range(cvals.size):
        dists = np.abs(cand_vals - cvals[i])
        order = np.argsort(dists)
        d1 = dists[order[0]]
        scale = max(1.0, abs(cand_vals[order[0]]))
        if len(order) > 1:
            d2 = dists[order[1]]
            if d1 > 0 and d2 < DOMINANCE_FACTOR * d1 and d1 > 1e-14 * scale:
                raise ClassificationError(
                    f"ambiguous Casimir label: value {cvals[i]:.6g} sits between "
                    f"candidates (distances {d1:.3e}, {d2:.3e})")
        twice_s = cand_ts[order[0]]
        vec = h_vecs @ (cvecs[:, i] / np.linalg.norm(cvecs[:, i]))
        resid = np.linalg.norm(c_block @ vec - candidates[twice_s] * vec) / scale
        if resid > residual_tol:
            raise ClassificationError(
                f"Casimir residual {resid:.3e} above tolerance after "
                f"simultaneous diagonalization (label 2S={twice_s})")
        labels.append(twice_s)
        residuals.append(resid)
    return labels, residuals


def classify_total_spin(H, C, casimir_values, space: SpinSpace,
                        hermitian_casimir=True,
                        degeneracy_tol=CLASSIFY_DEGENERACY_TOL,
                        residual_tol=CASIMIR_RESIDUAL_TOL) -> SpinResolvedLevels:
    """Build the spin-resolved level table of an H commuting with the Casimir.

    ``casimir_values``: dict 2S -> c(S) over the spin grid of the space.
    For each S the sector M = S is diagonalized; degenerate H-eigenspaces are
    split by the restricted Casimir rather than trusting solver bases.
    """
    mult = spin_multiplicities(space)
    for twice_s in mult:
        if twice_s not in casimir_values:
            raise ValueError(f"missing Casimir value for 2S={twice_s}")
    entries, max_entries, counts, residuals = {}, {}, {}, {}
    for twice_s in sorted(mult):
        sector = magnetization_sector(space, twice_s / 2)
        h_block = restrict(H, sector)
        c_block = restrict(C, sector)
        evals, evecs = np.linalg.eigh(h_block)
        candidates = {t: casimir_values[t] for t in mult if t >= twice_s}
        # cluster degenerate H-eigenvalues
        i = 0
        while i < evals.size:
            j = i + 1
            while j < evals.size and evals[j] - evals[j - 1] <= degeneracy_tol:
                j += 1
            labels, res = _label_cluster(evecs[:, i:j], c_block, candidates,
                                         hermitian_casimir, residual_tol)
            for lab, r, e in zip(labels, res, evals[i:j]):
                if lab == twice_s:
                    counts[twice_s] = counts.get(twice_s, 0) + 1
                    entries[twice_s] = min(entries.get(twice_s, np.inf), e)
                    max_entries[twice_s] = max(max_entries.get(twice_s, -np.inf), e)
                    residuals[twice_s] = max(residuals.get(twice_s, 0.0), r)
            i = j
        if twice_s not in entries:
            raise ClassificationError(
                f"no state labeled 2S={twice_s} found in its own sector")
        if counts[twice_s] != mult[twice_s]:
            raise ClassificationError(
                f"multiplet count mismatch at 2S={twice_s}: found {counts[twice_s]}, "
                f"sector dimensions imply {mult[twice_s]}")
    return SpinResolvedLevels(entries=entries, max_entries=max_entries,
                              counts=counts,
                              twice_s_max=space.twice_m_total_max(),
                              casimir_residuals=residuals)


@dataclass
class OrderingVerdict:
    property: str                   # "FOEL" or "LiebMattis"
    holds: bool
    witness: Optional[tuple] = None  # (2S, 2S', E(S), E(S')) violating pair
    margin: Optional[float] = None   # min adjacent energy difference


def foel_check(levels: SpinResolvedLevels, strict_tol=1e-9) -> OrderingVerdict:
    """E(H,S) strictly decreasing in S: E(S) < E(S') whenever S' < S."""
    grid = levels.spins()
    lo = grid[0]
    if set(grid) != set(range(lo, levels.twice_s_max + 1, 2)):
        raise ValueError("level table does not cover a contiguous spin grid")
    margin = np.inf
    witness = None
    for t_lo, t_hi in zip(grid[:-1], grid[1:]):
        diff = levels.entries[t_lo] - levels.entries[t_hi]   # E(S') - E(S), S' < S
        margin = min(margin, diff)
        if diff <= strict_tol and witness is None:
            witness = (t_hi, t_lo, levels.entries[t_hi], levels.entries[t_lo])
    return OrderingVerdict("FOEL", witness is None, witness, float(margin))


def lieb_mattis_hamiltonian(g, part_a, part_b, intra_a=None, intra_b=None):
    """H = -H_V + H_A + H_B with every piece a ferromagnetic Heisenberg model.

    ``g`` must be bipartite with respect to the declared parts; ``intra_a`` /
    ``intra_b`` are optional SpinGraph-compatible edge lists inside the parts.
    """
    from .models import heisenberg, Interaction

    part_a, part_b = set(part_a), set(part_b)
    if part_a & part_b or part_a | part_b != set(range(g.n_vertices)):
        raise ValueError("parts must partition the vertex set")
    for (x, y, _) in g.edges:
        if (x in part_a) == (y in part_a):
            raise ValueError(f"edge ({x},{y}) does not cross the declared parts; "
                             "graph is not bipartite for them")
    terms = heisenberg(g).scaled(-1).terms  # -H_V = +sum J S.S
    for edges, part in ((intra_a, part_a), (intra_b, part_b)):
        if not edges:
            continue
        for (x, y, w) in edges:
            if x not in part or y not in part:
                raise ValueError(f"intra-part edge ({x},{y}) leaves its part")
        from .lattice import build_graph
        sub = build_graph(g.n_vertices, edges,
                          spins={x: g.spins[x] for x in range(g.n_vertices)})
        terms = terms + heisenberg(sub).terms
    return Interaction(terms, name="lieb_mattis")


def lieb_mattis_check(g, part_a, part_b, intra_a=None, intra_b=None,
                      strict_tol=1e-9) -> OrderingVerdict:
    """Verify the bipartite ordering: ground at S = |S_A - S_B| and E(H,S)
    strictly increasing above it."""
    from .models import assemble

    phi = lieb_mattis_hamiltonian(g, part_a, part_b, intra_a, intra_b)
    space = SpinSpace.from_graph(g)
    H = assemble(phi, space)
    totals = su2_totals(space)
    mult = spin_multiplicities(space)
    cvals = {t: su2_casimir_value(t) for t in mult}
    levels = classify_total_spin(H, totals.casimir, cvals, space)

    twice_sa = int(round(2 * sum(g.spins[x] for x in part_a)))
    twice_sb = int(round(2 * sum(g.spins[x] for x in part_b)))
    twice_s0 = abs(twice_sa - twice_sb)
    grid = levels.spins()
    ground = min(levels.entries.values())
    margin = np.inf
    witness = None
    if abs(levels.entries.get(twice_s0, np.inf) - ground) > strict_tol:
        s_at_ground = min(levels.entries, key=levels.entries.get)
        witness = (twice_s0, s_at_ground, levels.entries.get(twice_s0),
                   levels.entries[s_at_ground])
    upper = [t for t in grid if t >= twice_s0]
    for t_lo, t_hi in zip(upper[:-1], upper[1:]):
        diff = levels.entries[t_hi] - levels.entries[t_lo]
        margin = min(margin, diff)
        if diff <= strict_tol and witness is None:
            witness = (t_lo, t_hi, levels.entries[t_lo], levels.entries[t_hi])
    return OrderingVerdict("LiebMattis", witness is None, witness, float(margin))
