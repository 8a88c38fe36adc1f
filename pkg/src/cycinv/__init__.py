"""Modular invariants of Z/p^r acting on a single Jordan block."""

from .context import G, L, GroupContext, SubgroupSpec, trivial_subgroup
from .cyclic_action import delta_apply, norm, orbit, sigma_apply, transfer
from .gfpoly import GradedBasis, Polynomial, grevlex_compare, parse_poly
from .module_decomp import (ModuleDecomposition, compatible_basis, decompose_flat,
                            decompose_graded, decompose_graded_oracle, fixed_space,
                            length)
from .invariant_ring import (build_generators, minimal_generators, noether_number,
                             noether_witness, special_elements, verify_generation)
from .gen_series import RationalGF, ai_closed, bi_closed, d_closed, hilbert_closed

__version__ = "0.1.0"

__all__ = [
    "G", "L", "GroupContext", "SubgroupSpec", "trivial_subgroup",
    "delta_apply", "norm", "orbit", "sigma_apply", "transfer",
    "GradedBasis", "Polynomial", "grevlex_compare", "parse_poly",
    "ModuleDecomposition", "compatible_basis", "decompose_flat", "decompose_graded",
    "decompose_graded_oracle", "fixed_space", "length",
    "build_generators", "minimal_generators", "noether_number", "noether_witness",
    "special_elements", "verify_generation",
    "RationalGF", "ai_closed", "bi_closed", "d_closed", "hilbert_closed",
]
