"""Brute-force measurement of mask-preimage multiplicities.

This is the ground-truth engine: every number it reports comes from
enumerating masks, never from the closed-form preimage candidates the
two-branch gadgets admit.  Two sweep modes exist:

* exhaustive -- every (x, m) pair in Z_q^2; requires q^2 within budget.
* stratified -- a reproducible sample of secrets (random draws plus
  deterministic bands near 0, q/2 and q-1), each with a full mask sweep.

Sweeps parallelize over disjoint secret ranges; partial results merge by
maximum with a lexicographic (x, v) tie-break, so reports are identical
for any worker count.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field

from . import _backend
from ._parallel import map_chunks, split_list, split_range
from .gadgets import GadgetKind, GadgetSpec, collision_offset
from .zq import Modulus, Residue

DEFAULT_BUDGET = 2 ** 34

STRATUM_NAMES = ("random", "near_zero", "near_half", "near_top")


class BudgetExceededError(RuntimeError):
    """An enumeration would exceed the configured evaluation budget."""

    def __init__(self, needed: int, budget: int, what: str):
        super().__init__(
            f"{what} needs {needed} gadget evaluations, budget is {budget}")
        self.needed = needed
        self.budget = budget


def check_budget(needed: int, budget: int, what: str) -> None:
    if needed > budget:
        raise BudgetExceededError(needed, budget, what)


@dataclass(frozen=True)
class StrataSpec:
    """Sampling plan for the stratified sweep.

    Each "near" band is ``window`` consecutive secrets anchored at 0,
    floor(q/2) and q-window; the lowest n_near_* secrets of each band are
    used.  The random stratum is drawn from a seeded generator and
    deduplicated against the bands and itself (a shortfall is recorded in
    the report, not an error).
    """

    n_random: int = 50
    n_near_zero: int = 20
    n_near_half: int = 20
    n_near_top: int = 20
    window: int = 20
    seed: int = 7

    def __post_init__(self):
        if min(self.n_random, self.n_near_zero, self.n_near_half,
               self.n_near_top) < 0:
            raise ValueError("stratum counts must be non-negative")
        if self.window < max(self.n_near_zero, self.n_near_half, self.n_near_top):
            raise ValueError("window must be >= every near-stratum count")

    @property
    def total_requested(self) -> int:
        return (self.n_random + self.n_near_zero + self.n_near_half
                + self.n_near_top)

    def to_json_dict(self) -> dict:
        return {
            "n_random": self.n_random,
            "n_near_zero": self.n_near_zero,
            "n_near_half": self.n_near_half,
            "n_near_top": self.n_near_top,
            "window": self.window,
            "seed": self.seed,
        }


@dataclass(frozen=True)
class MultiplicityReport:
    """Outcome of a multiplicity sweep.

    The witness is the lexicographically smallest (x, v) attaining the
    observed maximum, together with its fully enumerated mask preimage.
    """

    gadget: GadgetSpec
    mode: str
    global_max: int
    witness_x: Residue
    witness_v: Residue
    witness_preimage: tuple[Residue, ...]
    pairs_scanned: int
    per_stratum_max: dict | None = None
    seed: int | None = None
    strata_info: dict | None = field(default=None)

    def to_json_dict(self) -> dict:
        return {
            "type": "multiplicity_report",
            "gadget": self.gadget.to_json_dict(),
            "mode": self.mode,
            "global_max": self.global_max,
            "witness": {
                "x": self.witness_x.val,
                "v": self.witness_v.val,
                "preimage": [m.val for m in self.witness_preimage],
            },
            "per_stratum_max": self.per_stratum_max,
            "pairs_scanned": self.pairs_scanned,
            "seed": self.seed,
            "strata": self.strata_info,
        }


def _params(G: GadgetSpec) -> tuple[int, int, int, int]:
    return G.kind.code, G.q.q, G.offset_val(), G.t


def lossy_max_mult(q: Modulus, t: int) -> int:
    """Exact max multiplicity of the lossy gadget, by a full mask sweep.

    The output histogram of x + floor(m/t) is a shift of the m//t bucket
    histogram, identical for every x, so one sweep suffices.
    """
    buckets: dict[int, int] = {}
    for m in range(q.q):
        v = (m // t) % q.q
        buckets[v] = buckets.get(v, 0) + 1
    return max(buckets.values())


def preimage_count(G: GadgetSpec, x: Residue, v: Residue) -> int:
    """|{m : G(x, m) = v}| by a full sweep over m."""
    kind, q, off, t = _params(G)
    return _backend.preimage_count(kind, q, off, t, x.val, v.val)


def preimage_set(G: GadgetSpec, x: Residue, v: Residue) -> list[Residue]:
    """All masks mapping (x, m) to v, ascending by representative."""
    kind, q, off, t = _params(G)
    return [Residue(m, G.q)
            for m in _backend.preimage_list(kind, q, off, t, x.val, v.val)]


def multiplicity_histogram(G: GadgetSpec, x: Residue) -> dict[int, int]:
    """Map preimage-size -> number of output values with that size."""
    kind, q, off, t = _params(G)
    counts = _backend.output_histogram(kind, q, off, t, x.val)
    hist: dict[int, int] = {}
    for c in counts:
        hist[c] = hist.get(c, 0) + 1
    return hist


def _sweep_range_worker(args):
    kind, q, off, t, lo, hi = args
    per_secret = _backend.sweep_max_mult(kind, q, off, t, range(lo, hi))
    best, bx, bv = 0, -1, -1
    for i, (mult, v) in enumerate(per_secret):
        if mult > best:
            best, bx, bv = mult, lo + i, v
    return best, bx, bv


def _sweep_secrets_worker(args):
    kind, q, off, t, secrets = args
    return _backend.sweep_max_mult(kind, q, off, t, secrets)


def _finish_report(G: GadgetSpec, mode: str, global_max: int,
                   wx: int, wv: int, pairs: int, **extra) -> MultiplicityReport:
    kind, q, off, t = _params(G)
    preimage = [Residue(m, G.q)
                for m in _backend.preimage_list(kind, q, off, t, wx, wv)]
    if len(preimage) != global_max:
        raise AssertionError("witness preimage size disagrees with sweep")
    return MultiplicityReport(
        gadget=G, mode=mode, global_max=global_max,
        witness_x=Residue(wx, G.q), witness_v=Residue(wv, G.q),
        witness_preimage=tuple(preimage), pairs_scanned=pairs, **extra)


def max_multiplicity_exhaustive(G: GadgetSpec, budget: int = DEFAULT_BUDGET,
                                workers: int = 1) -> MultiplicityReport:
    """Sweep all q^2 secret-mask pairs; one mask histogram per secret."""
    kind, q, off, t = _params(G)
    check_budget(q * q, budget, f"exhaustive sweep of {G.label()} at q={q}")
    chunks = [(kind, q, off, t, lo, hi)
              for lo, hi in split_range(0, q, workers)]
    partials = map_chunks(_sweep_range_worker, chunks, workers)
    global_max = max(p[0] for p in partials)
    wx, wv = min((p[1], p[2]) for p in partials if p[0] == global_max)
    return _finish_report(G, "exhaustive", global_max, wx, wv, q * q)


def stratified_secrets(q: Modulus, spec: StrataSpec) -> list[tuple[int, str]]:
    """Sampled (secret, stratum) pairs, deduplicated, ascending by secret."""
    if q.q < 4 * spec.window:
        raise ValueError(f"q={q.q} too small for window={spec.window} "
                         f"(need q >= 4*window)")
    chosen: dict[int, str] = {}
    bands = (
        ("near_zero", 0, spec.n_near_zero),
        ("near_half", q.q // 2, spec.n_near_half),
        ("near_top", q.q - spec.window, spec.n_near_top),
    )
    for name, anchor, n in bands:
        for x in range(anchor, anchor + n):
            chosen.setdefault(x, name)
    rng = random.Random(spec.seed)
    for _ in range(spec.n_random):
        x = rng.randrange(q.q)
        chosen.setdefault(x, "random")
    return sorted(chosen.items())


def max_multiplicity_stratified(G: GadgetSpec, strata: StrataSpec,
                                budget: int = DEFAULT_BUDGET,
                                workers: int = 1) -> MultiplicityReport:
    """Full mask sweep for each sampled secret; maxima per stratum."""
    kind, q, off, t = _params(G)
    pairs_with_strata = stratified_secrets(G.q, strata)
    secrets = [x for x, _ in pairs_with_strata]
    check_budget(len(secrets) * q, budget,
                 f"stratified sweep of {G.label()} at q={q}")
    chunks = [(kind, q, off, t, part)
              for part in split_list(secrets, workers)]
    per_secret = [r for part in map_chunks(_sweep_secrets_worker, chunks, workers)
                  for r in part]

    per_stratum = {name: 0 for name in STRATUM_NAMES}
    global_max, wx, wv = 0, -1, -1
    for (x, stratum), (mult, v) in zip(pairs_with_strata, per_secret):
        per_stratum[stratum] = max(per_stratum[stratum], mult)
        if mult > global_max:
            global_max, wx, wv = mult, x, v
    selected = len(secrets)
    info = dict(strata.to_json_dict())
    info.update({
        "requested": strata.total_requested,
        "selected": selected,
        "dedup_dropped": strata.total_requested - selected,
    })
    return _finish_report(
        G, "stratified", global_max, wx, wv, selected * q,
        per_stratum_max=per_stratum, seed=strata.seed, strata_info=info)


def tightness_witness(q: Modulus, s: int, w: int) -> tuple[Residue, Residue] | None:
    """Smallest (x, v) whose enumerated preimage has exactly two masks.

    Candidates are generated from the two-branch structure: the direct
    branch hits v from mask x-v when (x-v).val <= x.val, the wraparound
    branch from mask x-v+c when its representative exceeds x.val, and
    the two differ when the offset c is nonzero.  The winning pair is
    then verified by full enumeration.  Returns None when c = 0.
    """
    c = collision_offset(q, s, w)
    if c.val == 0:
        return None
    off = c.val
    for x in range(q.q):
        for v in range(q.q):
            m_direct = (x - v) % q.q
            if m_direct > x:
                continue
            m_wrap = (m_direct + off) % q.q
            if m_wrap <= x:
                continue
            count = _backend.preimage_count(
                GadgetKind.MONTGOMERY.code, q.q, off, 1, x, v)
            if count != 2:
                raise AssertionError(
                    f"two-branch candidates at (x={x}, v={v}) enumerate to "
                    f"{count} masks, expected 2")
            return Residue(x, q), Residue(v, q)
    return None


def _cross_secrets_worker(args):
    q, s, w, q_prime, secrets = args
    return _backend.cross_check_sweep(q, s, w, q_prime, secrets)


@dataclass(frozen=True)
class CrossCheckReport:
    """Agreement of the full reduction algorithm with the two-branch map."""

    q: int
    s: int
    w: int
    mode: str
    pairs_checked: int
    mismatches: int
    first_mismatch: tuple[int, int] | None

    @property
    def agree(self) -> bool:
        return self.mismatches == 0

    def to_json_dict(self) -> dict:
        return {
            "type": "cross_check",
            "q": self.q,
            "s": self.s,
            "w": self.w,
            "mode": self.mode,
            "pairs_checked": self.pairs_checked,
            "mismatches": self.mismatches,
            "first_mismatch": (None if self.first_mismatch is None else
                               {"x": self.first_mismatch[0],
                                "m": self.first_mismatch[1]}),
            "agree": self.agree,
        }


def cross_check_sweep(q: Modulus, s: int, w: int,
                      secrets: list[int] | None = None,
                      budget: int = DEFAULT_BUDGET,
                      workers: int = 1) -> CrossCheckReport:
    """Run the full-algorithm comparison over all masks per secret.

    ``secrets=None`` means every secret in Z_q (exhaustive mode).
    """
    if s < 1:
        raise ValueError("radix exponent s must be >= 1")
    if q.q % 2 == 0:
        raise ValueError("modulus must be odd to invert it modulo 2^s")
    mode = "exhaustive" if secrets is None else "stratified"
    xs = list(range(q.q)) if secrets is None else sorted(secrets)
    check_budget(len(xs) * q.q, budget, f"cross-check sweep at q={q.q}")
    R = 1 << s
    q_prime = (-pow(q.q, -1, R)) % R
    chunks = [(q.q, s, w, q_prime, part)
              for part in split_list(xs, workers) if part]
    partials = map_chunks(_cross_secrets_worker, chunks, workers)
    pairs = sum(p[0] for p in partials)
    bad = sum(p[1] for p in partials)
    firsts = [(p[2], p[3]) for p in partials if p[2] >= 0]
    return CrossCheckReport(
        q=q.q, s=s, w=w, mode=mode, pairs_checked=pairs, mismatches=bad,
        first_mismatch=min(firsts) if firsts else None)
