"""Run-level warning/notice collection.

Every stage appends to one :class:`Report`; the CLI dumps it as JSON so a
batch run leaves a single machine-readable record of what was skipped,
merged or guessed.
"""
from __future__ import annotations

import json
import logging
from collections import Counter
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any

log = logging.getLogger("citmesh")


@dataclass
class Issue:
    level: str
    stage: str
    message: str
    context: dict[str, Any] = field(default_factory=dict)


class Report:
    def __init__(self) -> None:
        self.issues: list[Issue] = []
        self.counters: Counter[str] = Counter()
        self.facts: dict[str, Any] = {}

    def warn(self, stage: str, message: str, **context: Any) -> None:
        self.issues.append(Issue("warning", stage, message, context))
        log.warning("%s: %s", stage, message)

    def notice(self, stage: str, message: str, **context: Any) -> None:
        self.issues.append(Issue("notice", stage, message, context))
        log.info("%s: %s", stage, message)

    def error(self, stage: str, message: str, **context: Any) -> None:
        self.issues.append(Issue("error", stage, message, context))
        log.error("%s: %s", stage, message)

    def count(self, key: str, n: int = 1) -> None:
        self.counters[key] += n

    def set(self, key: str, value: Any) -> None:
        self.facts[key] = value

    def by_level(self, level: str) -> list[Issue]:
        return [i for i in self.issues if i.level == level]

    def to_dict(self) -> dict[str, Any]:
        return {
            "facts": self.facts,
            "counters": dict(sorted(self.counters.items())),
            "issues": [
                {"level": i.level, "stage": i.stage, "message": i.message, **({"context": i.context} if i.context else {})}
                for i in self.issues
            ],
        }

    def write_json(self, path: str | Path) -> None:
        text = json.dumps(self.to_dict(), indent=2, sort_keys=True, default=str)
        Path(path).write_text(text + "\n", encoding="utf-8")


def ensure(report: Report | None) -> Report:
    return report if report is not None else Report()
