"""Report-valued check results shared by the verifier operations."""

from __future__ import annotations

from dataclasses import dataclass


PASS = "pass"
FAIL = "fail"
NOT_APPLICABLE = "n/a"


@dataclass(frozen=True)
class CheckItem:
    item: str
    status: str
    witness: object = None

    def to_json(self) -> dict:
        return {"item": self.item, "status": self.status, "witness": self.witness}


@dataclass(frozen=True)
class Report:
    items: tuple[CheckItem, ...]

    @property
    def passed(self) -> bool:
        return all(i.status != FAIL for i in self.items)

    def failures(self) -> tuple[CheckItem, ...]:
        return tuple(i for i in self.items if i.status == FAIL)

    def item(self, name: str) -> CheckItem:
        for i in self.items:
            if i.item == name:
                return i
        raise KeyError(name)

    def to_json(self) -> list[dict]:
        return [i.to_json() for i in self.items]
