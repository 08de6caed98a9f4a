"""Pass/fail reports shared by the verification checks."""

from __future__ import annotations

import json
from dataclasses import dataclass, field


def _jsonable(x):
    if isinstance(x, (str, int, float, bool)) or x is None:
        return x
    if isinstance(x, dict):
        return {str(k): _jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_jsonable(v) for v in x]
    if hasattr(x, "to_json"):
        return x.to_json()
    return str(x)


@dataclass
class VerificationReport:
    """Outcome of one named check; ``violations`` empty means it passed."""

    check: str
    params: dict = field(default_factory=dict)
    violations: list = field(default_factory=list)
    witness: dict = field(default_factory=dict)

    @property
    def ok(self) -> bool:
        return not self.violations

    @property
    def verdict(self) -> str:
        return "pass" if self.ok else "fail"

    def fail(self, *what):
        self.violations.append(what if len(what) > 1 else what[0])

    def to_json(self):
        return {"check": self.check, "params": _jsonable(self.params),
                "verdict": self.verdict, "violations": _jsonable(self.violations),
                "witness": _jsonable(self.witness)}

    def dumps(self):
        return json.dumps(self.to_json(), sort_keys=True)

    def __str__(self):
        tail = "" if self.ok else f" ({len(self.violations)} violations, first: {self.violations[0]})"
        return f"{self.check}: {self.verdict}{tail}"
