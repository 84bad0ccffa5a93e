"""Interactions (sets of local Hermitian terms) and assembled Hamiltonians.

Sign conventions follow the ferromagnetic normalization: the Heisenberg
bond is -J S.S with J > 0 ferromagnetic, the XXZ bond carries its -1/4
shift and the AKLT bond its +1/3 shift so that spectra sit exactly where
the droplet and gap formulas expect them.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .lattice import SpinGraph, diameter, is_connected
from .hilbert import SpinSpace, SparseOperator, spin_matrices, embed_local

TERM_HERMITICITY_TOL = 1e-12


@dataclass
class Interaction:
    """A list of (support, local Hermitian matrix) terms plus model metadata."""

    terms: list                      # [(support tuple, ndarray), ...]
    name: str = "custom"
    params: dict = field(default_factory=dict)

    def __post_init__(self):
        canon = []
        for support, mat in self.terms:
            support = tuple(sorted(set(support)))
            if not support:
                raise ValueError("term support must be nonempty")
            mat = np.asarray(mat, dtype=complex)
            if np.abs(mat - mat.conj().T).max() >= TERM_HERMITICITY_TOL:
                raise ValueError(f"term on {support} is not Hermitian")
            canon.append((support, mat))
        self.terms = canon

    def scaled(self, factor) -> "Interaction":
        return Interaction([(s, factor * m) for s, m in self.terms],
                           name=self.name, params=dict(self.params))

    def __add__(self, other: "Interaction") -> "Interaction":
        return Interaction(self.terms + other.terms,
                           name=f"{self.name}+{other.name}")


def _two_site_dot(sa, sb) -> np.ndarray:
    """S.S on the two-site space, first site innermost (little-endian)."""
    out = np.zeros((sa.s1.shape[0] * sb.s1.shape[0],) * 2, dtype=complex)
    for a, b in zip((sa.s1, sa.s2, sa.s3), (sb.s1, sb.s2, sb.s3)):
        out += np.kron(b, a)
    return out


def heisenberg(g: SpinGraph) -> Interaction:
    """-sum_edges J_xy S_x . S_y with the edge weights as couplings."""
    terms = []
    for (x, y, w) in g.edges:
        dot = _two_site_dot(spin_matrices(g.spins[x]), spin_matrices(g.spins[y]))
        terms.append(((x, y), -w * dot))
    return Interaction(terms, name="heisenberg",
                       params={"spins": g.spins})


def aklt(L: int, periodic=False) -> Interaction:
    """Spin-1 chain of bond projectors: (1/2) S.S + (1/6)(S.S)^2 + 1/3 per bond."""
    if L < 2:
        raise ValueError("AKLT chain needs at least 2 sites")
    s = spin_matrices(1.0)
    dot = _two_site_dot(s, s)
    bond = dot / 2 + (dot @ dot) / 6 + np.eye(9) / 3
    bonds = [(x, x + 1) for x in range(L - 1)]
    if periodic:
        if L < 3:
            raise ValueError("periodic AKLT needs at least 3 sites")
        bonds.append((L - 1, 0))
    terms = [(b, bond) for b in bonds]
    return Interaction(terms, name="aklt", params={"L": L, "periodic": periodic})


@dataclass(frozen=True)
class XxzParams:
    """Anisotropic chain parameters; exactly one of Delta, q determines the other
    via Delta = (q + 1/q)/2 with q in (0, 1)."""

    L: int
    Delta: float
    q: float
    J: float = 1.0
    boundary: str = "open_with_field"   # or "periodic"

    def __post_init__(self):
        if self.L < 2:
            raise ValueError("chain length must be at least 2")
        if not (0 < self.q < 1):
            raise ValueError(f"q must lie in (0,1), got {self.q}")
        if self.Delta <= 1:
            raise ValueError(f"Delta must exceed 1, got {self.Delta}")
        if abs(self.Delta - (self.q + 1 / self.q) / 2) >= 1e-12:
            raise ValueError("Delta and q violate Delta = (q + 1/q)/2")
        if self.J <= 0:
            raise ValueError("J must be positive")
        if self.boundary not in ("open_with_field", "periodic"):
            raise ValueError(f"unknown boundary {self.boundary!r}")

    @classmethod
    def from_q(cls, L, q, J=1.0, boundary="open_with_field"):
        return cls(L=L, Delta=(q + 1 / q) / 2, q=q, J=J, boundary=boundary)

    @classmethod
    def from_delta(cls, L, Delta, J=1.0, boundary="open_with_field"):
        if Delta <= 1:
            raise ValueError(f"Delta must exceed 1, got {Delta}")
        q = Delta - math.sqrt(Delta ** 2 - 1)   # root in (0,1)
        return cls(L=L, Delta=Delta, q=q, J=J, boundary=boundary)

    @property
    def A_Delta(self) -> float:
        return 0.5 * math.sqrt(1 - 1 / self.Delta ** 2)


def xxz(p: XxzParams) -> Interaction:
    """Bond terms -J [ (S1S1 + S2S2)/Delta + (S3S3 - 1/4) ]; the open variant
    adds the boundary field -A(Delta)(S3_L - S3_1), the periodic one closes
    the ring and drops the field."""
    s = spin_matrices(0.5)
    bond = -p.J * ((np.kron(s.s1, s.s1) + np.kron(s.s2, s.s2)) / p.Delta
                   + (np.kron(s.s3, s.s3) - np.eye(4) / 4))
    bonds = [(x, x + 1) for x in range(p.L - 1)]
    terms = [(b, bond) for b in bonds]
    if p.boundary == "periodic":
        if p.L < 3:
            raise ValueError("periodic chain needs at least 3 sites")
        terms.append(((p.L - 1, 0), bond))
    else:
        A = p.A_Delta
        terms.append(((0,), A * np.asarray(s.s3)))       # +A S3_1
        terms.append(((p.L - 1,), -A * np.asarray(s.s3)))  # -A S3_L
    return Interaction(terms, name="xxz",
                       params={"L": p.L, "Delta": p.Delta, "q": p.q, "J": p.J,
                               "boundary": p.boundary})


def custom(terms) -> Interaction:
    """Store user terms verbatim (after Hermiticity validation)."""
    return Interaction(list(terms), name="custom")


def lambda_norm(phi: Interaction, lam: float, g: SpinGraph) -> float:
    """sup over x of sum_{X containing x} |X| ||Phi(X)|| N^(2|X|) e^(lam D(X))."""
    if lam <= 0:
        raise ValueError("the decay rate lambda must be positive")
    space = SpinSpace.from_graph(g)
    n_big = space.n_max
    per_vertex = [0.0] * g.n_vertices
    for support, mat in phi.terms:
        dia = diameter(g, support)
        if math.isinf(dia):
            raise ValueError(f"support {support} is disconnected; D(X) undefined")
        weight = (len(support) * np.linalg.norm(mat, 2)
                  * n_big ** (2 * len(support)) * math.exp(lam * dia))
        for x in support:
            per_vertex[x] += weight
    return max(per_vertex) if per_vertex else 0.0


def assemble(phi: Interaction, space: SpinSpace) -> SparseOperator:
    """Hermitian sum of embedded terms, reduced in canonical term order so the
    result is bit-identical regardless of input term order."""
    for support, _ in phi.terms:
        if any(not 0 <= x < space.n_sites for x in support):
            raise ValueError(f"term support {support} outside the space")
    ordered = sorted(phi.terms, key=lambda t: (t[0], t[1].tobytes()))
    total = None
    for support, mat in ordered:
        emb = embed_local(space, support, mat).matrix
        total = emb if total is None else total + emb
    if total is None:
        import scipy.sparse as sp
        total = sp.csr_matrix((space.total_dim, space.total_dim), dtype=complex)
    return SparseOperator(total, hermitian=True)
