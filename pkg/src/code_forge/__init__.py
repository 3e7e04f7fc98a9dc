"""Build, certify and verify expander-based additive subspace-design codes over small finite fields."""

__version__ = "0.1.0"

from .gf import GF, ExtensionField, field_arith, field_create, field_from_order, primitive_element
from .linalg import (Subspace, annihilator, enumerate_subspaces, joint_kernel, kernel, quotient_map, rref,
                     subspace_count, subspace_ops)
from .codes import (AdditiveCode, FRSParams, code_new, encode, folded_rs, min_distance, random_linear_code,
                    rs_outer_additive)
from .graphs import BipartiteGraph, SpectralCertificate, complete_bipartite, mixing_check, random_regular_bipartite, sigma2
from .design import (ContainmentWitness, DesignCertificate, LocalProfile, ProfileEvaluation, check_witness,
                     equivalence_check, potential, profile_from_witness, pushforward_dichotomy, quotient_potential_identity,
                     quotient_profile, search_inner_code, strictify_profile, tau_profile)
from .ael import AELParams, ael_certify, ael_compose, instantiate_ael, instantiate_thm11
from .decode import (DecodingQuery, curve_decoding_check, list_decoding_check, list_recovery_check,
                     recovery_parameter_plan)
from .artifacts import roundtrip
