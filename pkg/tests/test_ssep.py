import numpy as np
import pytest
from numpy.testing import assert_allclose

from spinsys import (build_graph, complete_graph, path_graph, ring_graph,
                     semigroup_evolve, ssep_gaps, ssep_generator,
                     ssep_spin_interaction, xxx_conjugacy_check)
from spinsys.ssep import ExclusionSpace


def test_exclusion_space_dims():
    g = path_graph(4)
    assert ExclusionSpace(g, 0).dim == 1
    assert ExclusionSpace(g, 2).dim == 6
    with pytest.raises(ValueError):
        ExclusionSpace(g, 5)
    with pytest.raises(ValueError):
        ExclusionSpace(build_graph(2, [(0, 1, -1.0)]), 1)


def test_generator_rows_sum_to_zero():
    g = build_graph(4, [(0, 1, 0.7), (1, 2, 1.3), (2, 3, 0.5), (0, 3, 2.0)])
    for n in range(1, 4):
        gen = ssep_generator(ExclusionSpace(g, n))
        m = gen.toarray()
        assert np.abs(m.sum(axis=1)).max() < 1e-13
        assert np.abs(m - m.T).max() < 1e-13         # symmetric rates
        offdiag = m - np.diag(np.diag(m))
        assert offdiag.max() <= 1e-13                # -L convention: off-diagonal <= 0
        assert np.all(np.diag(m) >= 0)


def test_single_particle_gap_is_graph_laplacian_gap():
    g = path_graph(5)
    gen = ssep_generator(ExclusionSpace(g, 1))
    ev = np.sort(np.linalg.eigvalsh(gen.toarray()))
    # n=1 generator is the weighted graph Laplacian
    lap = np.zeros((5, 5))
    for (x, y, r) in g.edges:
        lap[x, x] += r
        lap[y, y] += r
        lap[x, y] -= r
        lap[y, x] -= r
    assert_allclose(ev, np.sort(np.linalg.eigvalsh(lap)), atol=1e-12)


def test_complete_graph_gaps():
    rep = ssep_gaps(complete_graph(3))
    # K_n with unit rates: lambda = n for every particle number
    assert rep.gaps[1] == pytest.approx(3.0, abs=1e-10)
    assert rep.gaps[2] == pytest.approx(3.0, abs=1e-10)
    assert rep.aldous_margin < 1e-10


def test_gap_independent_of_particle_number_on_paths():
    rng = np.random.default_rng(7)
    for L in range(3, 7):
        edges = [(x, x + 1, float(rng.uniform(0.2, 2.0))) for x in range(L - 1)]
        rep = ssep_gaps(build_graph(L, edges))
        assert rep.aldous_margin < 1e-9, f"L={L}"


def test_disconnected_graph_rejected():
    g = build_graph(4, [(0, 1, 1.0), (2, 3, 1.0)])
    with pytest.raises(ValueError):
        ssep_gaps(g)


def test_conjugate_interaction_edge_terms():
    g = path_graph(3, weight=0.5)
    phi = ssep_spin_interaction(g)
    for (support, mat) in phi.terms:
        # -2r S.S + r/2 annihilates the triplet, eigenvalue 2r on the singlet
        ev = np.sort(np.linalg.eigvalsh(mat))
        assert_allclose(ev, [0, 0, 0, 1.0], atol=1e-12)


@pytest.mark.parametrize("g", [path_graph(4), path_graph(5), ring_graph(4),
                               ring_graph(5)])
def test_xxx_conjugacy(g):
    rep = xxx_conjugacy_check(g)
    assert rep.max_deviation < 1e-10
    assert max(abs(v) for v in rep.uniform_rayleigh.values()) < 1e-12


def test_semigroup_preserves_probability():
    g = ring_graph(5)
    space = ExclusionSpace(g, 2)
    gen = ssep_generator(space)
    rng = np.random.default_rng(3)
    mu0 = rng.random(space.dim)
    mu0 /= mu0.sum()
    for t in (0.1, 1.0, 10.0):
        mu = semigroup_evolve(gen, mu0, t)
        assert mu.sum() == pytest.approx(1.0, abs=1e-10)
        assert mu.min() > -1e-12
    # long-time limit is uniform
    mu_inf = semigroup_evolve(gen, mu0, 200.0)
    assert np.abs(mu_inf - 1.0 / space.dim).max() < 1e-10
