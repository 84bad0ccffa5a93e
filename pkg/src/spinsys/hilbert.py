"""Tensor-product spin Hilbert spaces and sector bases.

Basis states are mixed-radix integers over the site dimensions,
little-endian in the vertex id (site 0 is the fastest index).  Digit d at
site x means the S^3 eigenvalue m = s_x - d, i.e. digit 0 is "spin up".
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple

import numpy as np
import scipy.sparse as sp

HERMITICITY_TOL = 1e-12
PRUNE_TOL = 1e-15
DIRECT_SCAN_LIMIT = 2 ** 22


class SpinMatrices(NamedTuple):
    s1: np.ndarray
    s2: np.ndarray
    s3: np.ndarray
    plus: np.ndarray
    minus: np.ndarray


def spin_matrices(s) -> SpinMatrices:
    """Standard spin-s matrices, basis ordered by descending S^3 eigenvalue."""
    s = float(s)
    if s <= 0 or round(2 * s) != 2 * s:
        raise ValueError(f"spin magnitude must be a positive half-integer, got {s}")
    dim = int(round(2 * s + 1))
    m = s - np.arange(dim)          # m values, descending
    s3 = np.diag(m).astype(complex)
    # S+ |s,m> = sqrt(s(s+1) - m(m+1)) |s,m+1>; column j holds m = s - j
    amp = np.sqrt(s * (s + 1) - m[1:] * (m[1:] + 1))
    plus = np.zeros((dim, dim), dtype=complex)
    plus[np.arange(dim - 1), np.arange(1, dim)] = amp
    minus = plus.conj().T
    s1 = (plus + minus) / 2
    s2 = (plus - minus) / (2j)
    return SpinMatrices(s1, s2, s3, plus, minus)


class SparseOperator:
    """A sparse matrix on a tensor-product space with a verified Hermitian flag."""

    def __init__(self, matrix, hermitian=False):
        mat = sp.csr_matrix(matrix, dtype=complex)
        if mat.shape[0] != mat.shape[1]:
            raise ValueError("operator must be square")
        mat.data[np.abs(mat.data) < PRUNE_TOL] = 0.0
        mat.eliminate_zeros()
        mat.sort_indices()
        if hermitian:
            dev = abs(mat - mat.conj().T)
            leak = dev.max() if dev.nnz else 0.0
            if leak >= HERMITICITY_TOL:
                raise ValueError(f"hermitian flag asserted but max |M - M*| = {leak:.3e}")
        self.matrix = mat
        self.hermitian = bool(hermitian)

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]

    def toarray(self) -> np.ndarray:
        return self.matrix.toarray()

    def norm(self) -> float:
        """Operator norm (largest singular value), dense."""
        return float(np.linalg.norm(self.toarray(), 2))

    def __add__(self, other):
        herm = self.hermitian and getattr(other, "hermitian", False)
        mat = self.matrix + (other.matrix if isinstance(other, SparseOperator) else other)
        return SparseOperator(mat, hermitian=herm)

    def __matmul__(self, other):
        mat = self.matrix @ (other.matrix if isinstance(other, SparseOperator) else other)
        return SparseOperator(mat, hermitian=False)

    def __repr__(self):
        return f"SparseOperator(dim={self.dim}, nnz={self.matrix.nnz}, hermitian={self.hermitian})"


@dataclass(frozen=True)
class SpinSpace:
    """Tensor product of local spin spaces over graph vertices."""

    site_dims: tuple

    def __post_init__(self):
        dims = tuple(int(d) for d in self.site_dims)
        if any(d < 2 for d in dims):
            raise ValueError("every local dimension must be >= 2")
        object.__setattr__(self, "site_dims", dims)

    @classmethod
    def from_spins(cls, spins):
        return cls(tuple(int(round(2 * float(s) + 1)) for s in spins))

    @classmethod
    def from_graph(cls, g):
        return cls.from_spins(g.spins)

    @property
    def n_sites(self) -> int:
        return len(self.site_dims)

    @property
    def total_dim(self) -> int:
        out = 1
        for d in self.site_dims:
            out *= d
        return out

    @property
    def n_max(self) -> int:
        return max(self.site_dims)

    @property
    def strides(self):
        st = []
        acc = 1
        for d in self.site_dims:
            st.append(acc)
            acc *= d
        return tuple(st)

    def spin_at(self, x) -> float:
        return (self.site_dims[x] - 1) / 2

    def encode(self, digits) -> int:
        idx = 0
        for d, n, st in zip(digits, self.site_dims, self.strides):
            if not 0 <= d < n:
                raise ValueError(f"digit {d} out of range for local dimension {n}")
            idx += d * st
        return idx

    def decode(self, idx) -> tuple:
        digits = []
        for n in self.site_dims:
            digits.append(idx % n)
            idx //= n
        return tuple(digits)

    def twice_m_total_max(self) -> int:
        return sum(d - 1 for d in self.site_dims)

    def magnetization_values(self):
        """Achievable total-S^3 eigenvalues, descending."""
        tmax = self.twice_m_total_max()
        return [(tmax - 2 * k) / 2 for k in range(tmax + 1)]


@dataclass(frozen=True)
class SectorBasis:
    """Ordered basis (full-space indices, strictly increasing) of a symmetry sector."""

    parent: SpinSpace
    label: tuple          # ("M", value) or ("n", value)
    states: np.ndarray

    def __post_init__(self):
        st = np.asarray(self.states, dtype=np.int64)
        if st.size and not np.all(np.diff(st) > 0):
            raise ValueError("sector states must be strictly increasing")
        object.__setattr__(self, "states", st)

    @property
    def dim(self) -> int:
        return self.states.size


def _digit_twice_m(space: SpinSpace):
    """Per site, the array of 2m values indexed by digit."""
    return [np.array([n - 1 - 2 * d for d in range(n)]) for n in space.site_dims]


def total_sz_diagonal(space: SpinSpace) -> np.ndarray:
    """Vector of total S^3 eigenvalues over the full basis, in index order."""
    tm = np.zeros(1, dtype=np.int64)
    for col in _digit_twice_m(space):
        # earlier sites stay fastest: new index = old + old_size * digit
        tm = (tm[:, None] + col[None, :]).ravel(order="F")
    return tm / 2.0


def _sector_indices_scan(space, twice_m):
    tm = np.rint(2 * total_sz_diagonal(space)).astype(np.int64)
    return np.nonzero(tm == twice_m)[0]


def _sector_indices_recursive(space, twice_m):
    dims = space.site_dims
    strides = space.strides
    cols = _digit_twice_m(space)
    # suffix bounds on remaining achievable 2m
    lo = [0] * (len(dims) + 1)
    hi = [0] * (len(dims) + 1)
    for i in range(len(dims) - 1, -1, -1):
        lo[i] = lo[i + 1] - (dims[i] - 1)
        hi[i] = hi[i + 1] + (dims[i] - 1)
    out = []

    def rec(site, idx, need):
        if site == len(dims):
            if need == 0:
                out.append(idx)
            return
        for d in range(dims[site]):
            rest = need - cols[site][d]
            if lo[site + 1] <= rest <= hi[site + 1]:
                rec(site + 1, idx + d * strides[site], rest)

    rec(0, 0, twice_m)
    return np.array(sorted(out), dtype=np.int64)


def magnetization_sector(space: SpinSpace, M) -> SectorBasis:
    """All product basis states with total S^3 = M, canonical (ascending) order."""
    twice_m = int(round(2 * float(M)))
    if abs(twice_m) > space.twice_m_total_max() or (twice_m - space.twice_m_total_max()) % 2 != 0:
        raise ValueError(f"magnetization {M} is not achievable on this space")
    if space.total_dim <= DIRECT_SCAN_LIMIT:
        idx = _sector_indices_scan(space, twice_m)
    else:
        idx = _sector_indices_recursive(space, twice_m)
    if idx.size == 0:
        raise ValueError(f"magnetization sector M={M} is empty")
    return SectorBasis(space, ("M", twice_m / 2), idx)


def down_spin_sector(space: SpinSpace, n) -> SectorBasis:
    """Spin-1/2 convenience: the sector with n down spins (M = L/2 - n)."""
    if any(d != 2 for d in space.site_dims):
        raise ValueError("down-spin sectors are defined for spin-1/2 spaces")
    basis = magnetization_sector(space, space.n_sites / 2 - n)
    return SectorBasis(space, ("n", int(n)), basis.states)


def kron_chain(space: SpinSpace, site_ops: dict) -> SparseOperator:
    """Kronecker product over all sites; ``site_ops`` maps site -> local matrix,
    identity elsewhere.  Little-endian: site 0 is the innermost factor."""
    for x, m in site_ops.items():
        m = np.asarray(m)
        if m.shape != (space.site_dims[x], space.site_dims[x]):
            raise ValueError(f"matrix at site {x} has shape {m.shape}, "
                             f"expected square of dim {space.site_dims[x]}")
    out = sp.identity(1, dtype=complex, format="csr")
    for x in range(space.n_sites):
        local = site_ops.get(x)
        if local is None:
            local = sp.identity(space.site_dims[x], dtype=complex, format="csr")
        else:
            local = sp.csr_matrix(np.asarray(local, dtype=complex))
        out = sp.kron(local, out, format="csr")
    return SparseOperator(out)


def embed_at(space: SpinSpace, ops) -> SparseOperator:
    """Embed single-site matrices at distinct sites (identity elsewhere).

    ``ops`` is a list of (vertex, matrix); supports mixed products with a
    different matrix on many sites, as needed by twisted symmetry sums.
    """
    sites = [x for x, _ in ops]
    if len(set(sites)) != len(sites):
        raise ValueError("embedding sites must be distinct")
    return kron_chain(space, {x: m for x, m in ops})


def embed_local(space: SpinSpace, support, matrix) -> SparseOperator:
    """Embed a multi-site local matrix given on the tensor product of the
    (sorted) support sites, little-endian within the support."""
    support = tuple(sorted(set(support)))
    if not support:
        raise ValueError("empty support")
    sub = SpinSpace(tuple(space.site_dims[x] for x in support))
    matrix = np.asarray(matrix, dtype=complex)
    if matrix.shape != (sub.total_dim, sub.total_dim):
        raise ValueError(f"local matrix has shape {matrix.shape}, "
                         f"expected dim {sub.total_dim} for support {support}")
    rest = [x for x in range(space.n_sites) if x not in support]
    # offsets of all configurations of the complementary sites
    rest_offsets = np.zeros(1, dtype=np.int64)
    for x in rest:
        step = np.arange(space.site_dims[x], dtype=np.int64) * space.strides[x]
        rest_offsets = (rest_offsets[None, :] + step[:, None]).ravel(order="F")
    coo = sp.coo_matrix(matrix)
    rows, cols, data = [], [], []
    for a, b, v in zip(coo.row, coo.col, coo.data):
        da = sub.decode(int(a))
        db = sub.decode(int(b))
        off_a = sum(d * space.strides[x] for d, x in zip(da, support))
        off_b = sum(d * space.strides[x] for d, x in zip(db, support))
        rows.append(off_a + rest_offsets)
        cols.append(off_b + rest_offsets)
        data.append(np.full(rest_offsets.size, v, dtype=complex))
    mat = sp.coo_matrix(
        (np.concatenate(data), (np.concatenate(rows), np.concatenate(cols))),
        shape=(space.total_dim, space.total_dim),
    )
    return SparseOperator(mat)


def restrict(op: SparseOperator, sector: SectorBasis, leak_tol=1e-10, dense=True):
    """Restriction of ``op`` to a sector; errors if matrix elements leak out.

    Returns a dense array by default (sector blocks are the dense workhorse).
    """
    idx = sector.states
    cols = op.matrix.tocsc()[:, idx]
    mask = np.zeros(op.dim, dtype=bool)
    mask[idx] = True
    outside = cols[~mask, :]
    if outside.nnz:
        leak = abs(outside).max()
        if leak > leak_tol:
            coo = abs(outside).tocoo()
            k = int(np.argmax(coo.data))
            raise ValueError(
                f"operator leaks out of sector {sector.label}: "
                f"|element| = {leak:.3e} at outside-row {coo.row[k]}, sector-col {coo.col[k]}"
            )
    block = cols[mask, :]
    return block.toarray() if dense else sp.csr_matrix(block)
