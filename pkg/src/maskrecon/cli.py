"""Command-line reconnaissance workflows.

Four subcommands:

* gadget-recon    -- measure one gadget's max preimage multiplicity
                     (exhaustive when q^2 fits the budget, stratified
                     otherwise), plus the full-algorithm cross-check for
                     Montgomery at odd q.
* pipeline-recon  -- enumerate a fresh-masked pipeline's output preimages
                     and compare the composition bounds.
* tightness       -- find and verify the smallest (x, v) pair whose
                     preimage has exactly two masks.
* semantics       -- probability / min-entropy reading for a stage list,
                     no enumeration.

Exit status: 0 when every applicable verdict passes, 1 when one fails,
2 for configuration errors.
"""

from __future__ import annotations

import argparse
import sys
import time
from dataclasses import dataclass

from . import oracle, pipeline, semantics
from .gadgets import GadgetKind, GadgetSpec, collision_offset
from .oracle import BudgetExceededError, StrataSpec
from .pipeline import PipelineSpec
from .report import (TOOL_VERSION, VERDICT_FAIL, VERDICT_INAPPLICABLE,
                     VERDICT_PASS, ReportBundle, Verdict)
from .zq import Modulus

PRESETS = {
    "ml-kem": (3329, 16, 28),
    "ml-dsa": (8380417, 23, 56),
    "demo-q5": (5, 2, 4),
    "demo-q7": (7, 3, 5),
}


def preset(name: str) -> tuple[int, int, int]:
    """Resolve a preset name to (q, s, w)."""
    try:
        return PRESETS[name]
    except KeyError:
        raise ValueError(
            f"unknown preset {name!r}; choose from {sorted(PRESETS)}") from None


class ConfigError(ValueError):
    pass


@dataclass
class TightnessRecord:
    q: int
    s: int
    w: int
    offset: int
    witness: tuple[int, int] | None
    preimage: list[int] | None
    reason: str | None

    def to_json_dict(self) -> dict:
        return {
            "type": "tightness",
            "q": self.q,
            "s": self.s,
            "w": self.w,
            "collision_offset": self.offset,
            "witness": (None if self.witness is None else
                        {"x": self.witness[0], "v": self.witness[1]}),
            "preimage": self.preimage,
            "preimage_count": None if self.preimage is None else len(self.preimage),
            "reason": self.reason,
        }


@dataclass
class UniformityRecord:
    expected_count: int
    uniform: bool

    def to_json_dict(self) -> dict:
        return {"type": "uniformity", "expected_count": self.expected_count,
                "uniform": self.uniform}


def _resolve_params(args) -> tuple[int, int | None, int | None]:
    explicit = [v for v in (args.q, args.s, args.w) if v is not None]
    if args.preset and explicit:
        raise ConfigError("--preset and explicit --q/--s/--w are mutually "
                          "exclusive")
    if args.preset:
        return preset(args.preset)
    if args.q is None:
        raise ConfigError("either --preset or --q is required")
    return args.q, args.s, args.w


def _parse_stages(text: str, q: Modulus, s: int | None, w: int | None,
                  t: int | None) -> list[GadgetSpec]:
    stages = []
    for item in text.split(","):
        item = item.strip()
        if not item:
            raise ConfigError("empty stage in --stages")
        name, _, param = item.partition(":")
        stages.append(_build_gadget(name, q, s, w,
                                    int(param) if param else t, None))
    return stages


def _build_gadget(kind: str, q: Modulus, s: int | None, w: int | None,
                  t: int | None, declared: int | None) -> GadgetSpec:
    kind = kind.strip().lower()
    if kind == "identity":
        return GadgetSpec.identity(q, declared)
    if kind == "barrett":
        if s is None:
            raise ConfigError("barrett needs --s (or a preset)")
        return GadgetSpec.barrett(q, s, declared)
    if kind == "montgomery":
        if s is None or w is None:
            raise ConfigError("montgomery needs --s and --w (or a preset)")
        return GadgetSpec.montgomery(q, s, w, declared)
    if kind == "unmasked":
        return GadgetSpec.unmasked(q, declared)
    if kind == "lossy":
        if t is None:
            raise ConfigError("lossy needs a factor: lossy:<t> or --t")
        return GadgetSpec.lossy(q, t, declared)
    raise ConfigError(f"unknown gadget kind {kind!r}")


def _parse_strata(text: str | None, seed: int) -> StrataSpec:
    if text is None:
        return StrataSpec(seed=seed)
    parts = text.split(",")
    if len(parts) != 5:
        raise ConfigError("--strata wants 5 integers: "
                          "n_random,n_near_zero,n_near_half,n_near_top,window")
    a, b, c, d, window = (int(p) for p in parts)
    return StrataSpec(n_random=a, n_near_zero=b, n_near_half=c, n_near_top=d,
                      window=window, seed=seed)


def _config_echo(args, **extra) -> dict:
    cfg = {
        "preset": args.preset,
        "q": args.q,
        "s": args.s,
        "w": args.w,
        "t": args.t,
        "budget": args.budget,
        "canonical": args.canonical,
    }
    cfg.update(extra)
    return cfg


def run_gadget_recon(args) -> ReportBundle:
    q_val, s, w = _resolve_params(args)
    q = Modulus(q_val)
    if not args.gadget:
        raise ConfigError("gadget-recon needs --gadget")
    G = _build_gadget(args.gadget, q, s, w, args.t, args.declared_max_mult)
    strata = _parse_strata(args.strata, args.seed)
    exhaustive = q_val * q_val <= args.budget

    bundle = ReportBundle(
        command="gadget-recon",
        config=_config_echo(args, gadget=args.gadget,
                            declared_max_mult=args.declared_max_mult,
                            strata=strata.to_json_dict(),
                            mode="exhaustive" if exhaustive else "stratified"),
        seed=None if exhaustive else strata.seed,
        canonical=args.canonical, workers=args.workers)

    if exhaustive:
        rep = oracle.max_multiplicity_exhaustive(G, args.budget, args.workers)
        secrets = None
    else:
        rep = oracle.max_multiplicity_stratified(G, strata, args.budget,
                                                 args.workers)
        secrets = [x for x, _ in oracle.stratified_secrets(q, strata)]
    bundle.results.append(rep)
    bundle.verdicts.append(Verdict(
        "declared_bound",
        VERDICT_PASS if rep.global_max <= G.declared_max_mult else VERDICT_FAIL,
        observed=rep.global_max, bound=G.declared_max_mult))

    if G.kind is GadgetKind.MONTGOMERY and q_val % 2 == 1 and s and s >= 1:
        cross = oracle.cross_check_sweep(q, s, w, secrets, args.budget,
                                         args.workers)
        bundle.results.append(cross)
        bundle.verdicts.append(Verdict(
            "cross_check",
            VERDICT_PASS if cross.agree else VERDICT_FAIL,
            observed=cross.mismatches, bound=0))
    return bundle


def run_pipeline_recon(args) -> ReportBundle:
    q_val, s, w = _resolve_params(args)
    q = Modulus(q_val)
    stages = _stage_list(args, q, s, w)
    P = PipelineSpec.of(stages)

    bundle = ReportBundle(
        command="pipeline-recon",
        config=_config_echo(args, stages=[g.label() for g in stages], k=P.k),
        seed=None, canonical=args.canonical, workers=args.workers)

    check = pipeline.composition_bound_check(P, args.budget, args.workers)
    bundle.results.append(check)
    for name in ("last_stage", "max_stage", "capstone"):
        bound = {"last_stage": check.last_stage_bound,
                 "max_stage": check.max_stage_bound,
                 "capstone": check.capstone_bound}[name]
        bundle.verdicts.append(Verdict(
            name, check.verdicts[name], observed=check.observed_max,
            bound=bound))

    if all(g.declared_max_mult == 1 for g in stages):
        uniform = pipeline.butterfly_uniformity_check(P, args.budget,
                                                      args.workers)
        expected = q_val ** (2 * P.k - 2)
        bundle.results.append(UniformityRecord(expected, uniform))
        bundle.verdicts.append(Verdict(
            "uniformity", VERDICT_PASS if uniform else VERDICT_FAIL,
            observed=check.observed_max, bound=expected))

    bundle.results.append(semantics.capstone_hypothesis_check(stages))
    bundle.results.append(semantics.pipeline_semantic_summary(P))
    return bundle


def _stage_list(args, q, s, w) -> list[GadgetSpec]:
    if args.stages:
        stages = _parse_stages(args.stages, q, s, w, args.t)
        if args.k is not None and args.k != len(stages):
            raise ConfigError(f"--k {args.k} does not match the "
                              f"{len(stages)}-entry --stages list")
        return stages
    if args.gadget and args.k:
        return [_build_gadget(args.gadget, q, s, w, args.t, None)
                for _ in range(args.k)]
    raise ConfigError("needs --stages, or --gadget with --k")


def run_tightness(args) -> ReportBundle:
    q_val, s, w = _resolve_params(args)
    q = Modulus(q_val)
    if s is None or w is None:
        raise ConfigError("tightness needs --s and --w (or a preset)")
    bundle = ReportBundle(
        command="tightness", config=_config_echo(args), seed=None,
        canonical=args.canonical, workers=args.workers)

    offset = collision_offset(q, s, w)
    witness = oracle.tightness_witness(q, s, w)
    if witness is None:
        bundle.results.append(TightnessRecord(
            q_val, s, w, offset.val, None, None, "offset zero"))
        bundle.verdicts.append(Verdict("tightness", VERDICT_INAPPLICABLE))
    else:
        x, v = witness
        G = GadgetSpec.montgomery(q, s, w)
        pre = oracle.preimage_set(G, x, v)
        bundle.results.append(TightnessRecord(
            q_val, s, w, offset.val, (x.val, v.val), [m.val for m in pre],
            None))
        bundle.verdicts.append(Verdict(
            "tightness",
            VERDICT_PASS if len(pre) == 2 else VERDICT_FAIL,
            observed=len(pre), bound=2))
    return bundle


def run_semantics(args) -> ReportBundle:
    q_val, s, w = _resolve_params(args)
    q = Modulus(q_val)
    stages = _stage_list(args, q, s, w)
    P = PipelineSpec.of(stages)
    bundle = ReportBundle(
        command="semantics",
        config=_config_echo(args, stages=[g.label() for g in stages], k=P.k),
        seed=None, canonical=args.canonical, workers=args.workers)
    bundle.results.append(semantics.capstone_hypothesis_check(stages))
    bundle.results.append(semantics.pipeline_semantic_summary(P))
    return bundle


_RUNNERS = {
    "gadget-recon": run_gadget_recon,
    "pipeline-recon": run_pipeline_recon,
    "tightness": run_tightness,
    "semantics": run_semantics,
}


def _add_common(p: argparse.ArgumentParser) -> None:
    p.add_argument("--preset", choices=sorted(PRESETS))
    p.add_argument("--q", type=int)
    p.add_argument("--s", type=int)
    p.add_argument("--w", type=int)
    p.add_argument("--t", type=int)
    p.add_argument("--gadget")
    p.add_argument("--stages",
                   help="comma list, e.g. barrett,lossy:3")
    p.add_argument("--k", type=int)
    p.add_argument("--strata",
                   help="n_random,n_near_zero,n_near_half,n_near_top,window")
    p.add_argument("--seed", type=int, default=7)
    p.add_argument("--budget", type=int, default=oracle.DEFAULT_BUDGET)
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--declared-max-mult", type=int)
    p.add_argument("--out-json")
    p.add_argument("--out-md")
    p.add_argument("--canonical", action="store_true",
                   help="omit timing fields for byte-exact comparisons")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="maskrecon",
        description="Leakage reconnaissance for arithmetic-masked "
                    "modular-reduction gadgets over Z_q")
    parser.add_argument("--version", action="version",
                        version=f"maskrecon {TOOL_VERSION}")
    sub = parser.add_subparsers(dest="command", required=True)
    for name in _RUNNERS:
        _add_common(sub.add_parser(name))
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    runner = _RUNNERS[args.command]
    start = time.perf_counter()
    try:
        bundle = runner(args)
    except (ConfigError, BudgetExceededError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    bundle.elapsed_seconds = round(time.perf_counter() - start, 3)
    bundle.write(args.out_json, args.out_md)
    if not args.out_json and not args.out_md:
        print(bundle.to_json(), end="")
    else:
        for v in bundle.verdicts:
            print(f"{v.name}: {v.verdict}")
        print("overall:", "PASS" if bundle.passed else "FAIL")
    return bundle.exit_code


if __name__ == "__main__":
    sys.exit(main())
