"""Exact diagonalization of quantum spin systems on finite graphs."""

__version__ = "0.1.0"

from .lattice import (SpinGraph, build_graph, complete_graph, diameter,
                      graph_distance, is_connected, load_graph, parse_graph_file,
                      path_graph, ring_graph, set_distance, star_graph)
from .hilbert import (SectorBasis, SparseOperator, SpinSpace, down_spin_sector,
                      embed_at, embed_local, kron_chain, magnetization_sector,
                      restrict, spin_matrices)
from .models import (Interaction, XxzParams, aklt, assemble, custom, heisenberg,
                     lambda_norm, xxz)
from .spectral import (ConvergenceError, GapReport, SpectrumReport, extremal_eigs,
                       full_spectrum, sector_spectrum, sector_sweep_lowest,
                       spectral_gap)
from .symmetry import (ClassificationError, OrderingVerdict, SpinResolvedLevels,
                       classify_total_spin, foel_check, lieb_mattis_check,
                       spin_multiplicities, su2_casimir_value, su2_totals,
                       suq2_generators, suq_casimir_value)
from .ssep import (ExclusionSpace, GeneratorReport, semigroup_evolve,
                   ssep_gaps, ssep_generator, ssep_spin_interaction,
                   xxx_conjugacy_check)
from .dynamics import (ClusteringRates, HeisenbergDynamics, clustering_mu,
                       clustering_report, commutator_growth, evolve_observable,
                       ground_correlation, hermitian_unit_basis, lr_bound_rhs,
                       lr_corollary_bound, lr_multisite_bound)
from .perturbation import (frustration_free_check, gap_sweep,
                           relative_bound_alpha)
from .droplets import (band_extract, bandwidth_formula, compare_band_width,
                       convergence_table, droplet_energy_formula,
                       momentum_band, one_magnon_dispersion,
                       sector_ground_energy)
