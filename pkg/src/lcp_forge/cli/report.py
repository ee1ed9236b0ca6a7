"""Run reports: one verdict per check, serialised deterministically."""

from __future__ import annotations

import hashlib
import json
import time
from contextlib import contextmanager
from dataclasses import dataclass, field as dc_field
from fractions import Fraction

from .. import __version__

SCHEMA_VERSION = 1
PASS, FAIL, UNSUPPORTED, ECHO = "PASS", "FAIL", "UNSUPPORTED", "ECHO"


def jsonable(obj):
    """Coerce witnesses into plain JSON; exact scalars become strings."""
    if hasattr(obj, "to_json"):
        return jsonable(obj.to_json())
    if isinstance(obj, dict):
        return {str(k): jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [jsonable(v) for v in obj]
    if isinstance(obj, (bool, int, str)) or obj is None:
        return obj
    if isinstance(obj, float):
        return obj if obj == obj and abs(obj) != float("inf") else str(obj)
    if isinstance(obj, Fraction):
        return str(obj)
    if hasattr(obj, "tolist"):
        return jsonable(obj.tolist())
    return str(obj)


@dataclass
class Check:
    name: str
    verdict: str
    witness: dict = dc_field(default_factory=dict)
    wall_time: float = 0.0
    mandatory: bool = True

    @property
    def failed(self):
        return self.mandatory and self.verdict not in (PASS, ECHO)

    def to_json(self, timings=True):
        d = {"name": self.name, "verdict": self.verdict, "witness": jsonable(self.witness),
             "mandatory": self.mandatory}
        if timings:
            d["wall_time"] = round(self.wall_time, 6)
        return d


@dataclass
class RunReport:
    command: str
    input_digest: str
    checks: list = dc_field(default_factory=list)
    tool: str = "lcp-forge"
    version: str = __version__

    @property
    def passed(self):
        return not any(c.failed for c in self.checks)

    @property
    def exit_code(self):
        return 0 if self.passed else 1

    def add(self, check: Check):
        self.checks.append(check)
        return check

    @contextmanager
    def timed(self, name, mandatory=True):
        """Record a check; the body fills ``verdict`` and ``witness`` on the yielded Check."""
        c = Check(name, FAIL, {}, 0.0, mandatory)
        t0 = time.perf_counter()
        try:
            yield c
        finally:
            c.wall_time = time.perf_counter() - t0
            self.checks.append(c)

    def to_json(self, timings=True):
        return {"schema_version": SCHEMA_VERSION, "tool": self.tool, "version": self.version,
                "command": self.command, "input_digest": self.input_digest,
                "overall": PASS if self.passed else FAIL,
                "checks": [c.to_json(timings) for c in self.checks]}

    def dumps(self, timings=True):
        return json.dumps(self.to_json(timings), sort_keys=True, indent=2, ensure_ascii=False)

    def text(self):
        lines = []
        for c in self.checks:
            tag = c.verdict if c.mandatory else f"{c.verdict} (advisory)"
            lines.append(f"{tag} {c.name} ({c.wall_time:.3f}s)")
            if c.verdict == FAIL and c.witness:
                lines.append("    " + json.dumps(jsonable(c.witness), sort_keys=True)[:400])
        lines.append(f"overall: {PASS if self.passed else FAIL}")
        return "\n".join(lines)


def digest(data: bytes) -> str:
    return "sha256:" + hashlib.sha256(data).hexdigest()
