"""Symmetry-adapted Assur decompositions of pinned bar-joint frameworks."""
from .decompose import (AssurDecomposition, block_triangular_form, decompose, extended_component, is_S_assur,
                        lift_decomposition, plain_decomposition, project_decomposition, scc_decomposition,
                        subgroup_decomposition, trivial_rep)
from .drivers import drive, is_strongly_S_assur, strongly_assur_report
from .errors import *  # noqa: F401,F403
from .extend import ExtensionSpec, apply_extension, classify_one_extension
from .graphs import (CoveringGraph, Edge, GainGraph, Vertex, cover, gain_sparse, is_balanced,
                     pinned_isostatic_counts, quotient)
from .group import fixed_subspace, make_schoenflies, trivial_symmetric_dimension
from .io import load_fixture, parse
from .orbit import (Configuration, build_orbit_matrix, is_pinned_S_isostatic, motions, rank,
                    sample_regular_configuration, self_stresses)
from .orient import Orientation, s_directed_orientation, verify_orientation

__version__ = "0.1.0"
