"""Exact finite-generation checks for adjoint rings on numerical surfaces.

Submodules: ``geometry`` and ``lp`` (exact polytopes), ``cover`` (simplex
covers aligned with a convex subset), ``monoid`` (graded monoids and
generator transfer), ``surface`` and ``toric`` (numerical surfaces, Zariski
decomposition, MMP, model regions), ``pipeline`` (end-to-end driver and
trace replay) and ``cli``.
"""
from .cover import SimplexCover, common_point, cover_respecting, verify_cover
from .errors import VerificationError
from .geometry import Polytope, convex_hull, polytope_from_halfspaces
from .monoid import (GeneratorSet, GradedMonoid, TransferMatrices, fg_equivalence_check, hilbert_basis,
                     is_generated_up_to, lift_generators, reweight, semiample_generators, simplex_transfer,
                     truncate, truncation_implies_fg)
from .pipeline import AdjointInstance, PipelineError, PipelineTrace, reduce_tuple, run_pipeline, verify_trace
from .surface import (AffineDivisorMap, NumericalSurface, contract, pseff_region, run_mmp, wlc_decomposition,
                      zariski)
from .toric import AdjointMonoid, ToricModel, toric_surface

__version__ = "0.1.0"

__all__ = [
    "AdjointInstance", "AdjointMonoid", "AffineDivisorMap", "GeneratorSet", "GradedMonoid", "NumericalSurface",
    "PipelineError", "PipelineTrace", "Polytope", "SimplexCover", "ToricModel", "TransferMatrices",
    "VerificationError", "common_point", "contract", "convex_hull", "cover_respecting", "fg_equivalence_check",
    "hilbert_basis", "is_generated_up_to", "lift_generators", "polytope_from_halfspaces", "pseff_region",
    "reduce_tuple", "reweight", "run_mmp", "run_pipeline", "semiample_generators", "simplex_transfer",
    "toric_surface", "truncate", "truncation_implies_fg", "verify_cover", "verify_trace", "wlc_decomposition",
    "zariski",
]
