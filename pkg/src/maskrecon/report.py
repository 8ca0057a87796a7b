"""Report bundles: canonical JSON plus a markdown narrative.

One bundle holds everything a recon run produced: the echoed
configuration, result records, and pass/fail verdicts.  JSON is written
with sorted keys, two-space indent and a trailing newline, so identical
runs produce byte-identical files; the markdown is rendered from the
same in-memory records and never recomputes anything.

The `canonical` flag drops the timing block (elapsed time, worker count),
which is the only part allowed to differ between reruns.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path

SCHEMA_VERSION = "1.0"
TOOL_VERSION = "0.1.0"

VERDICT_PASS = "pass"
VERDICT_FAIL = "fail"
VERDICT_INAPPLICABLE = "inapplicable"

_VERDICT_VALUES = [VERDICT_PASS, VERDICT_FAIL, VERDICT_INAPPLICABLE]

# JSON Schema (draft 2020-12) every emitted report validates against.
REPORT_SCHEMA = {
    "$schema": "https://json-schema.org/draft/2020-12/schema",
    "title": "maskrecon report",
    "type": "object",
    "required": ["schema_version", "tool_version", "config", "seed",
                 "results", "verdicts"],
    "properties": {
        "schema_version": {"const": SCHEMA_VERSION},
        "tool_version": {"type": "string"},
        "config": {"type": "object"},
        "seed": {"type": ["integer", "null"]},
        "results": {
            "type": "array",
            "items": {
                "type": "object",
                "required": ["type"],
                "properties": {
                    "type": {"enum": [
                        "multiplicity_report", "cross_check", "bound_check",
                        "uniformity", "hypothesis_check", "semantic_summary",
                        "tightness",
                    ]},
                },
            },
        },
        "verdicts": {
            "type": "array",
            "items": {
                "type": "object",
                "required": ["name", "verdict"],
                "properties": {
                    "name": {"type": "string"},
                    "verdict": {"enum": _VERDICT_VALUES},
                },
            },
        },
        "timing": {
            "type": "object",
            "properties": {
                "elapsed_seconds": {"type": "number"},
                "workers": {"type": "integer"},
            },
        },
    },
    "additionalProperties": False,
}


def dumps_canonical(payload: dict) -> str:
    return json.dumps(payload, sort_keys=True, indent=2) + "\n"


@dataclass
class Verdict:
    name: str
    verdict: str
    observed: int | None = None
    bound: int | None = None

    def to_json_dict(self) -> dict:
        return {"name": self.name, "verdict": self.verdict,
                "observed": self.observed, "bound": self.bound}


@dataclass
class ReportBundle:
    """All records and verdicts from one recon command."""

    command: str
    config: dict
    seed: int | None
    results: list = field(default_factory=list)
    verdicts: list[Verdict] = field(default_factory=list)
    canonical: bool = False
    elapsed_seconds: float | None = None
    workers: int | None = None

    @property
    def passed(self) -> bool:
        return all(v.verdict != VERDICT_FAIL for v in self.verdicts)

    @property
    def exit_code(self) -> int:
        return 0 if self.passed else 1

    def to_json_dict(self) -> dict:
        payload = {
            "schema_version": SCHEMA_VERSION,
            "tool_version": TOOL_VERSION,
            "config": dict(self.config, command=self.command),
            "seed": self.seed,
            "results": [r.to_json_dict() for r in self.results],
            "verdicts": [v.to_json_dict() for v in self.verdicts],
        }
        if not self.canonical:
            payload["timing"] = {
                "elapsed_seconds": self.elapsed_seconds,
                "workers": self.workers,
            }
        return payload

    def to_json(self) -> str:
        return dumps_canonical(self.to_json_dict())

    def to_markdown(self) -> str:
        return render_markdown(self)

    def write(self, json_path: str | None, md_path: str | None) -> None:
        if json_path:
            Path(json_path).write_text(self.to_json(), encoding="utf-8")
        if md_path:
            Path(md_path).write_text(self.to_markdown(), encoding="utf-8")


def _md_config_lines(bundle: ReportBundle) -> list[str]:
    lines = ["## Parameters", ""]
    for key, value in sorted(bundle.config.items()):
        if value is None:
            continue
        lines.append(f"- {key}: `{value}`")
    lines.append(f"- seed: `{bundle.seed}`")
    lines.append("")
    return lines


def _md_record(rec_dict: dict) -> list[str]:
    kind = rec_dict["type"]
    lines: list[str] = []
    if kind == "multiplicity_report":
        g = rec_dict["gadget"]
        lines += ["## Sweep", "",
                  f"- gadget: `{g['kind']}` (declared max multiplicity "
                  f"{g['declared_max_mult']})",
                  f"- mode: {rec_dict['mode']}",
                  f"- pairs scanned: {rec_dict['pairs_scanned']}"]
        if rec_dict["per_stratum_max"]:
            for name, mult in sorted(rec_dict["per_stratum_max"].items()):
                lines.append(f"- stratum `{name}` max: {mult}")
        if rec_dict["strata"]:
            s = rec_dict["strata"]
            lines.append(f"- secrets selected: {s['selected']} of "
                         f"{s['requested']} requested "
                         f"({s['dedup_dropped']} duplicates dropped)")
        w = rec_dict["witness"]
        lines += ["", "## Max multiplicity", "",
                  f"- observed global max: **{rec_dict['global_max']}**",
                  "", "## Witness", "",
                  f"- x = {w['x']}, v = {w['v']}",
                  f"- preimage masks: {w['preimage']}", ""]
    elif kind == "cross_check":
        lines += ["## Algorithm cross-check", "",
                  f"- mode: {rec_dict['mode']}",
                  f"- pairs checked: {rec_dict['pairs_checked']}",
                  f"- mismatches: {rec_dict['mismatches']}"]
        if rec_dict["first_mismatch"]:
            fm = rec_dict["first_mismatch"]
            lines.append(f"- first mismatch: x = {fm['x']}, m = {fm['m']}")
        lines.append("")
    elif kind == "bound_check":
        lines += ["## Composition bound check", "",
                  f"- stages: "
                  f"{[g['kind'] for g in rec_dict['pipeline']['stages']]}",
                  f"- tuples scanned: {rec_dict['tuples_scanned']}",
                  f"- observed max: **{rec_dict['observed_max']}**",
                  f"- last-stage bound: {rec_dict['last_stage_bound']} "
                  f"({rec_dict['verdicts']['last_stage']})",
                  f"- max-stage bound: {rec_dict['max_stage_bound']} "
                  f"({rec_dict['verdicts']['max_stage']})"]
        if rec_dict["capstone_bound"] is None:
            lines.append("- uniform 2*q^(2k-2) bound: inapplicable "
                         "(a stage declares multiplicity >= 3)")
        else:
            lines.append(f"- uniform 2*q^(2k-2) bound: "
                         f"{rec_dict['capstone_bound']} "
                         f"({rec_dict['verdicts']['capstone']})")
        w = rec_dict["witness"]
        lines += [f"- witness: x = {w['x']}, v = {w['v']}", ""]
    elif kind == "uniformity":
        lines += ["## Output uniformity", "",
                  f"- expected count per (x, v): {rec_dict['expected_count']}",
                  f"- uniform: {rec_dict['uniform']}", ""]
    elif kind == "hypothesis_check":
        lines += ["## Stage multiplicity hypothesis", ""]
        if rec_dict["passed"]:
            lines.append("- every stage declares max multiplicity <= 2")
        else:
            lines.append(f"- violated at stage {rec_dict['stage_index']} "
                         f"(declared max multiplicity "
                         f"{rec_dict['max_mult']})")
        lines.append("")
    elif kind == "semantic_summary":
        p = rec_dict["probability_bound"]
        lines += ["## Probability / min-entropy reading", "",
                  f"- cardinality bound: {rec_dict['cardinality_bound']} "
                  f"of {rec_dict['mask_space']} mask tuples",
                  f"- probability bound: {p['numerator']}/{p['denominator']}",
                  f"- min-entropy floor: "
                  f"{rec_dict['min_entropy_bits']:.4f} bits",
                  f"- note: {rec_dict['note']}", ""]
    elif kind == "tightness":
        lines += ["## Collision offset", "",
                  f"- offset 2^(w-s) mod q = {rec_dict['collision_offset']}",
                  "", "## Tightness witness", ""]
        if rec_dict["witness"] is None:
            lines.append(f"- none ({rec_dict['reason']})")
        else:
            w = rec_dict["witness"]
            lines += [f"- x = {w['x']}, v = {w['v']}",
                      f"- enumerated preimage: {rec_dict['preimage']} "
                      f"(count {rec_dict['preimage_count']})"]
        lines.append("")
    return lines


def render_markdown(bundle: ReportBundle) -> str:
    lines = [f"# maskrecon report: {bundle.command}", ""]
    lines += _md_config_lines(bundle)
    for rec in bundle.results:
        lines += _md_record(rec.to_json_dict())
    lines += ["## Verdicts", ""]
    if not bundle.verdicts:
        lines.append("- none (informational run)")
    for v in bundle.verdicts:
        detail = ""
        if v.observed is not None and v.bound is not None:
            detail = f" (observed {v.observed}, bound {v.bound})"
        lines.append(f"- {v.name}: **{v.verdict}**{detail}")
    lines += ["", f"Overall: **{'PASS' if bundle.passed else 'FAIL'}**"]
    if not bundle.canonical and bundle.elapsed_seconds is not None:
        lines += ["", f"_Elapsed: {bundle.elapsed_seconds:.2f}s "
                      f"({bundle.workers} workers)_"]
    lines.append("")
    return "\n".join(lines)
