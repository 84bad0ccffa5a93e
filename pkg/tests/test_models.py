import numpy as np
import pytest
from numpy.testing import assert_allclose

from spinsys import (SpinSpace, XxzParams, aklt, assemble, custom, heisenberg,
                     lambda_norm, path_graph, ring_graph, spin_matrices, xxz)
from spinsys.models import _two_site_dot


def test_two_site_heisenberg_eigenvalues():
    # singlet at 3/4, triplet at -1/4 for H = -J S.S
    g = path_graph(2)
    H = assemble(heisenberg(g), SpinSpace.from_graph(g)).toarray()
    ev = np.sort(np.linalg.eigvalsh(H))
    assert_allclose(ev, [-0.25, -0.25, -0.25, 0.75], atol=1e-12)


def test_two_site_dot_commutes_with_total_spin():
    s = spin_matrices(1.0)
    dot = _two_site_dot(s, s)
    for comp in ("s1", "s2", "s3"):
        m = np.asarray(getattr(s, comp))
        total = np.kron(np.eye(3), m) + np.kron(m, np.eye(3))
        assert np.abs(dot @ total - total @ dot).max() < 1e-12


def test_aklt_bond_is_projector():
    phi = aklt(2)
    (support, mat), = phi.terms
    assert support == (0, 1)
    # projector onto the bond spin-2 subspace: P^2 = P, trace 5
    assert_allclose(mat @ mat, mat, atol=1e-12)
    assert np.trace(mat).real == pytest.approx(5.0, abs=1e-12)
    ev = np.sort(np.linalg.eigvalsh(mat))
    assert_allclose(ev, [0] * 4 + [1] * 5, atol=1e-12)


def test_aklt_open_chain_ground_degeneracy():
    space = SpinSpace((3,) * 4)
    H = assemble(aklt(4), space).toarray()
    ev = np.sort(np.linalg.eigvalsh(H))
    assert ev[:4].max() < 1e-10       # 4 edge states at zero energy
    assert ev[4] > 0.1


def test_xxz_params_consistency():
    p = XxzParams.from_q(6, 0.5)
    assert p.Delta == pytest.approx(1.25)
    p2 = XxzParams.from_delta(6, 1.25)
    assert p2.q == pytest.approx(0.5)
    assert p.A_Delta == pytest.approx(0.5 * np.sqrt(1 - 1 / 1.25 ** 2))
    with pytest.raises(ValueError):
        XxzParams(L=6, Delta=2.0, q=0.5)      # inconsistent pair
    with pytest.raises(ValueError):
        XxzParams.from_q(6, 1.5)


def test_xxz_ground_state_energy_zero():
    # all-up product state is a zero-energy ground state in both variants
    for boundary in ("open_with_field", "periodic"):
        p = XxzParams.from_q(6, 0.5, boundary=boundary)
        space = SpinSpace((2,) * 6)
        H = assemble(xxz(p), space)
        e0 = np.linalg.eigvalsh(H.toarray())[0]
        assert abs(e0) < 1e-12
        up = np.zeros(space.total_dim)
        up[0] = 1.0
        assert np.abs(H.matrix @ up).max() < 1e-12


def test_interaction_algebra():
    g = path_graph(3)
    phi = heisenberg(g)
    twice = phi + phi
    space = SpinSpace.from_graph(g)
    H1 = assemble(phi, space).toarray()
    H2 = assemble(twice, space).toarray()
    H3 = assemble(phi.scaled(2.0), space).toarray()
    assert_allclose(H2, 2 * H1, atol=1e-14)
    assert_allclose(H3, 2 * H1, atol=1e-14)


def test_custom_rejects_non_hermitian():
    bad = np.array([[0.0, 1.0], [0.0, 0.0]])
    with pytest.raises(ValueError):
        custom([((0,), bad)])


def test_lambda_norm_interior_value():
    # spin-1/2 chain, J=1, lambda=1: interior vertex carries two bond terms,
    # each contributing |X| ||Phi(X)|| N^(2|X|) e^lambda = 2 (3/4) 16 e = 24e
    g = path_graph(8)
    val = lambda_norm(heisenberg(g), 1.0, g)
    assert val == pytest.approx(48 * np.e, abs=1e-9)
    # two-site chain: single bond, 24e
    g2 = path_graph(2)
    assert lambda_norm(heisenberg(g2), 1.0, g2) == pytest.approx(24 * np.e, abs=1e-9)


def test_assemble_deterministic_bytes():
    g = ring_graph(5)
    space = SpinSpace.from_graph(g)
    a = assemble(heisenberg(g), space).matrix
    b = assemble(heisenberg(g), space).matrix
    assert a.data.tobytes() == b.data.tobytes()
    assert a.indices.tobytes() == b.indices.tobytes()
