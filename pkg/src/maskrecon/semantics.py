"""Probability and min-entropy readings of the cardinality bounds.

The sweeps measure cardinalities; dividing by the mask-tuple space size
gives a per-observation conditional probability, and its binary log a
min-entropy floor.  These readings assume uniform independent masks and
are reported as an interpretation alongside the measured cardinalities,
never in place of them (see INTERPRETATION_NOTE, carried verbatim in
every report).

Probabilities are exact rationals; only the logarithm forces floats.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from .gadgets import GadgetSpec
from .pipeline import PipelineSpec
from .zq import Modulus

INTERPRETATION_NOTE = (
    "probability_bound and min_entropy_bits are the uniform-mask "
    "interpretation of the measured cardinality bound (cardinality divided "
    "by the mask-tuple space size); the cardinalities are what this tool "
    "verifies by enumeration, the probability reading additionally assumes "
    "masks are uniform and independent."
)


def probability_bound(max_mult: int, q: Modulus) -> Fraction:
    """Exact per-observation bound max_mult / q, in lowest terms."""
    if max_mult < 0:
        raise ValueError("max_mult must be non-negative")
    return Fraction(max_mult, q.q)


def min_entropy_bound(max_mult: int, q: Modulus) -> float:
    """Conditional min-entropy floor log2(q) - log2(max_mult), in bits."""
    if max_mult < 1:
        raise ValueError("max_mult must be >= 1")
    return math.log2(q.q) - math.log2(max_mult)


@dataclass(frozen=True)
class CapstoneHypothesis:
    """Whether every stage declares multiplicity <= 2.

    On violation, carries the smallest offending stage index and its
    declared multiplicity.
    """

    passed: bool
    stage_index: int | None = None
    max_mult: int | None = None

    def to_json_dict(self) -> dict:
        return {
            "type": "hypothesis_check",
            "passed": self.passed,
            "stage_index": self.stage_index,
            "max_mult": self.max_mult,
        }


def capstone_hypothesis_check(stages: list[GadgetSpec]) -> CapstoneHypothesis:
    """First stage (if any) declaring multiplicity >= 3."""
    if not stages:
        raise ValueError("stage list must be non-empty")
    for i, g in enumerate(stages):
        if g.declared_max_mult >= 3:
            return CapstoneHypothesis(False, i, g.declared_max_mult)
    return CapstoneHypothesis(True)


@dataclass(frozen=True)
class SemanticSummary:
    """Cardinality bound for a pipeline plus its probability reading.

    cardinality_bound is 2 * q^(2k-2) when every stage declares <= 2
    (the uniform composition bound), otherwise the last-stage form; the
    probability always reduces to (effective multiplicity) / q, with no
    dependence on the depth k.
    """

    k: int
    q: Modulus
    cardinality_bound: int
    mask_space: int
    probability_bound: Fraction
    min_entropy_bits: float
    capstone_applicable: bool

    def to_json_dict(self) -> dict:
        return {
            "type": "semantic_summary",
            "k": self.k,
            "q": self.q.q,
            "cardinality_bound": self.cardinality_bound,
            "mask_space": self.mask_space,
            "probability_bound": {
                "numerator": self.probability_bound.numerator,
                "denominator": self.probability_bound.denominator,
            },
            "min_entropy_bits": self.min_entropy_bits,
            "capstone_applicable": self.capstone_applicable,
            "note": INTERPRETATION_NOTE,
        }


def pipeline_semantic_summary(P: PipelineSpec) -> SemanticSummary:
    """Summary for a pipeline: bound, probability, entropy floor."""
    hypothesis = capstone_hypothesis_check(list(P.stages))
    effective = 2 if hypothesis.passed else P.stages[-1].declared_max_mult
    scale = P.q.q ** (2 * P.k - 2)
    cardinality = effective * scale
    prob = Fraction(cardinality, P.mask_space)
    if prob != Fraction(effective, P.q.q):
        raise AssertionError("probability bound failed to reduce to mult/q")
    return SemanticSummary(
        k=P.k, q=P.q, cardinality_bound=cardinality, mask_space=P.mask_space,
        probability_bound=prob,
        min_entropy_bits=math.log2(1 / prob),
        capstone_applicable=hypothesis.passed)
