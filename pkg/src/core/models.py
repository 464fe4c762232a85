"""Report models shared by the verification checks and the command line."""
from dataclasses import dataclass, field
from datetime import datetime, timezone
from typing import Any, Dict, List, Optional


@dataclass
class CheckResult:
    """Outcome of one verification check.

    Attributes:
        name: Registry id of the check
        passed: Whether every assertion of the check held
        details: One line human readable summary
        metrics: Measured values, JSON serialisable
    """
    name: str
    passed: bool
    details: str = ""
    metrics: Dict[str, Any] = field(default_factory=dict)

    def to_dict(self) -> dict:
        """Convert the result to a dictionary."""
        return {
            "name": self.name,
            "passed": self.passed,
            "details": self.details,
            "metrics": self.metrics,
        }

    @classmethod
    def from_dict(cls, data: dict) -> 'CheckResult':
        """Create a result from a dictionary."""
        return cls(
            name=data.get('name', ''),
            passed=bool(data.get('passed', False)),
            details=data.get('details', ''),
            metrics=dict(data.get('metrics', {})),
        )


@dataclass
class VerificationReport:
    """Results of a verification run in registry order."""
    timestamp: str = field(default_factory=lambda: datetime.now(timezone.utc).isoformat())
    results: List[CheckResult] = field(default_factory=list)
    version: str = ""

    @property
    def total(self) -> int:
        return len(self.results)

    @property
    def passed(self) -> int:
        return sum(1 for r in self.results if r.passed)

    @property
    def failed(self) -> int:
        return self.total - self.passed

    @property
    def ok(self) -> bool:
        return self.failed == 0

    def get(self, name: str) -> Optional[CheckResult]:
        return next((r for r in self.results if r.name == name), None)

    def to_dict(self) -> dict:
        """Convert the report to a dictionary."""
        return {
            "timestamp": self.timestamp,
            "version": self.version,
            "summary": {"total": self.total, "passed": self.passed, "failed": self.failed},
            "results": [r.to_dict() for r in self.results],
        }

    @classmethod
    def from_dict(cls, data: dict) -> 'VerificationReport':
        """Create a report from a dictionary."""
        return cls(
            timestamp=data.get('timestamp', ''),
            results=[CheckResult.from_dict(r) for r in data.get('results', [])],
            version=data.get('version', ''),
        )

    def __str__(self) -> str:
        return f"Passed: {self.passed}, Failed: {self.failed}, Total: {self.total}"
