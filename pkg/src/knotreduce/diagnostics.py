from __future__ import annotations

from dataclasses import dataclass, field


@dataclass(frozen=True)
class Diagnostics:
    """Outcome of a validator: ``ok`` plus the violated invariants in check order."""

    violations: tuple[str, ...] = field(default_factory=tuple)

    @property
    def ok(self) -> bool:
        return not self.violations

    @property
    def first(self) -> str | None:
        return self.violations[0] if self.violations else None

    def __bool__(self) -> bool:
        return self.ok

    def __str__(self) -> str:
        return "pass" if self.ok else "fail: " + "; ".join(self.violations)
