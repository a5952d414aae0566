"""Report schema shared by the verifiers and the command line front end.

Every verdict is backed by at least one evidence item, and every evidence
item carries an exactness tag: ``exact`` (exponent arithmetic or residue
identities), ``sampled`` (randomized but seed-deterministic spot checks), or
``depth-bounded`` (exhaustive up to a stated depth).  Reports serialize to
JSON deterministically; the timing field lives under ``meta`` so regression
comparisons can ignore it.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Optional

TOOL_NAME = "padicdyn"
TOOL_VERSION = "0.1.0"

EXACT = "exact"
SAMPLED = "sampled"
DEPTH_BOUNDED = "depth-bounded"


@dataclass
class Evidence:
    name: str
    exactness: str
    ok: bool
    detail: dict = field(default_factory=dict)
    depth: Optional[int] = None

    def __post_init__(self):
        if self.exactness not in (EXACT, SAMPLED, DEPTH_BOUNDED):
            raise ValueError(f"unknown exactness tag {self.exactness!r}")
        if self.exactness == DEPTH_BOUNDED and self.depth is None:
            raise ValueError("depth-bounded evidence must carry its depth")

    def as_dict(self) -> dict:
        out = {"name": self.name, "exactness": self.exactness, "ok": self.ok,
               "detail": _jsonable(self.detail)}
        if self.depth is not None:
            out["depth"] = self.depth
        return out


@dataclass
class Report:
    request: dict
    verdict: str  # PASS | FAIL | or an informational verdict string
    evidence: list[Evidence] = field(default_factory=list)
    timing_ms: Optional[float] = None

    def __post_init__(self):
        if self.verdict in ("PASS", "FAIL") and not self.evidence:
            raise ValueError("a verdict needs at least one evidence item")

    def passed(self) -> bool:
        return self.verdict == "PASS"

    def as_dict(self) -> dict:
        return {
            "request": _jsonable(self.request),
            "verdict": self.verdict,
            "evidence": [e.as_dict() for e in self.evidence],
            "meta": {
                "tool": TOOL_NAME,
                "version": TOOL_VERSION,
                "timing_ms": self.timing_ms,
            },
        }

    def to_json(self) -> str:
        return json.dumps(self.as_dict(), indent=2, sort_keys=False)

    def to_text(self) -> str:
        lines = [f"verdict: {self.verdict}"]
        for e in self.evidence:
            mark = "ok" if e.ok else "FAIL"
            depth = f" depth={e.depth}" if e.depth is not None else ""
            lines.append(f"  [{mark:4}] {e.name} ({e.exactness}{depth})")
            for k, v in _jsonable(e.detail).items():
                lines.append(f"         {k}: {v}")
        return "\n".join(lines)


def _jsonable(value):
    """Coerce report payloads to plain JSON types, deterministically."""
    from fractions import Fraction

    if isinstance(value, dict):
        return {str(k): _jsonable(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_jsonable(v) for v in value]
    if isinstance(value, Fraction):
        return str(value)
    if isinstance(value, (bool, int, float, str)) or value is None:
        return value
    return repr(value)


def reports_equal_ignoring_timing(a: dict, b: dict) -> bool:
    """Structural equality of serialized reports, timing field excluded."""

    def strip(d: dict) -> dict:
        d = json.loads(json.dumps(d))
        if "meta" in d and isinstance(d["meta"], dict):
            d["meta"].pop("timing_ms", None)
        return d

    return strip(a) == strip(b)
