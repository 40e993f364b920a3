"""
Verification report data classes
"""

from dataclasses import dataclass, field
from typing import Any, Dict, List


@dataclass
class Assertion:
    """A named property check"""

    name: str
    passed: bool
    checked: int = 0
    detail: str = ""

    def to_dict(self) -> Dict[str, Any]:
        return {
            "name": self.name,
            "passed": self.passed,
            "checked": self.checked,
            "detail": self.detail,
        }


@dataclass
class VerificationReport:
    """Assertions plus counterexamples for every failed one"""

    title: str
    assertions: List[Assertion] = field(default_factory=list)
    witnesses: List[Dict[str, Any]] = field(default_factory=list)
    summary: Dict[str, Any] = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return all(a.passed for a in self.assertions)

    def add(self, assertion: Assertion, witness: Dict[str, Any] = None) -> None:
        self.assertions.append(assertion)
        if not assertion.passed and witness is not None:
            self.witnesses.append({"assertion": assertion.name, **witness})

    def to_dict(self) -> Dict[str, Any]:
        return {
            "title": self.title,
            "passed": self.passed,
            "assertions": [a.to_dict() for a in self.assertions],
            "witnesses": self.witnesses,
            "summary": self.summary,
        }
