"""maskrecon: leakage reconnaissance for arithmetic-masked gadgets over Z_q.

Measures mask-preimage multiplicities of hardware-faithful masked
reduction gadgets (Barrett, Montgomery, butterfly) by exhaustive or
stratified enumeration, checks the composition bounds of fresh-masked
k-stage pipelines, and emits deterministic JSON/markdown reports.
"""

from ._backend import BACKEND
from .gadgets import (GadgetKind, GadgetSpec, barrett_compute,
                      collision_offset, cross_check_montgomery,
                      identity_compute, lossy_compute,
                      masked_montgomery_input, min_register_width,
                      montgomery_compute, montgomery_full_reduce,
                      unmasked_compute)
from .oracle import (DEFAULT_BUDGET, BudgetExceededError, CrossCheckReport,
                     MultiplicityReport, StrataSpec, cross_check_sweep,
                     lossy_max_mult, max_multiplicity_exhaustive,
                     max_multiplicity_stratified, multiplicity_histogram,
                     preimage_count, preimage_set, tightness_witness)
from .pipeline import (BoundCheck, MaskTuple, PipelineSpec,
                       butterfly_uniformity_check, compose_with_fresh,
                       composition_bound_check, pipeline_output,
                       pipeline_preimage_count, renewal_count)
from .semantics import (INTERPRETATION_NOTE, CapstoneHypothesis,
                        SemanticSummary, capstone_hypothesis_check,
                        min_entropy_bound, pipeline_semantic_summary,
                        probability_bound)
from .zq import Modulus, ModulusMismatchError, Residue, add, canon, pow2_mod, sub

__version__ = "0.1.0"

__all__ = [
    "BACKEND", "DEFAULT_BUDGET", "INTERPRETATION_NOTE", "__version__",
    "Modulus", "ModulusMismatchError", "Residue", "add", "canon",
    "pow2_mod", "sub",
    "GadgetKind", "GadgetSpec", "barrett_compute", "collision_offset",
    "cross_check_montgomery", "identity_compute", "lossy_compute",
    "masked_montgomery_input", "min_register_width", "montgomery_compute",
    "montgomery_full_reduce", "unmasked_compute",
    "BudgetExceededError", "CrossCheckReport", "MultiplicityReport",
    "StrataSpec", "cross_check_sweep", "lossy_max_mult",
    "max_multiplicity_exhaustive", "max_multiplicity_stratified",
    "multiplicity_histogram", "preimage_count", "preimage_set",
    "tightness_witness",
    "BoundCheck", "MaskTuple", "PipelineSpec", "butterfly_uniformity_check",
    "compose_with_fresh", "composition_bound_check", "pipeline_output",
    "pipeline_preimage_count", "renewal_count",
    "CapstoneHypothesis", "SemanticSummary", "capstone_hypothesis_check",
    "min_entropy_bound", "pipeline_semantic_summary", "probability_bound",
]
