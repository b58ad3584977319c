"""Line-oriented check reports: `CHECK <name> PASS|FAIL|INCONCLUSIVE <detail>`."""
from __future__ import annotations

import json
from dataclasses import asdict, dataclass, field
from typing import Iterable, Optional

PASS, FAIL, INCONCLUSIVE = "PASS", "FAIL", "INCONCLUSIVE"


@dataclass(frozen=True)
class CheckLine:
    name: str
    status: str
    detail: str = ""

    def __str__(self) -> str:
        tail = f" {self.detail}" if self.detail else ""
        return f"CHECK {self.name} {self.status}{tail}"


@dataclass
class Report:
    lines: list[CheckLine] = field(default_factory=list)
    data: dict = field(default_factory=dict)

    def add(self, name: str, ok: Optional[bool], detail: str = "") -> bool:
        status = INCONCLUSIVE if ok is None else (PASS if ok else FAIL)
        self.lines.append(CheckLine(name, status, detail))
        return bool(ok)

    def extend(self, other: "Report", prefix: str = "") -> "Report":
        for ln in other.lines:
            self.lines.append(CheckLine(prefix + ln.name, ln.status, ln.detail))
        self.data.update({prefix + k: v for k, v in other.data.items()})
        return self

    @property
    def ok(self) -> bool:
        return all(ln.status != FAIL for ln in self.lines)

    @property
    def failures(self) -> list[CheckLine]:
        return [ln for ln in self.lines if ln.status == FAIL]

    def status_of(self, name: str) -> Optional[str]:
        for ln in self.lines:
            if ln.name == name:
                return ln.status
        return None

    def outcomes(self) -> tuple[tuple[str, str], ...]:
        return tuple((ln.name, ln.status) for ln in self.lines)

    def __iter__(self) -> Iterable[CheckLine]:
        return iter(self.lines)

    def __len__(self) -> int:
        return len(self.lines)

    def __str__(self) -> str:
        return "\n".join(str(ln) for ln in self.lines)

    def to_json(self) -> dict:
        return {"checks": [asdict(ln) for ln in self.lines], "data": self.data, "ok": self.ok}

    def dumps(self) -> str:
        return json.dumps(self.to_json(), indent=2, sort_keys=True, default=str)
