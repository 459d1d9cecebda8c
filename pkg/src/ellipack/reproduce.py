"""Named reproduction targets: expected values against freshly computed ones."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from .arith import format_number
from .engine import fill_table, lambda_sup
from .toric import decompose_complement
from .weights import inner_vector


@dataclass
class Check:
    label: str
    expected: str
    computed: str

    @property
    def ok(self) -> bool:
        return self.expected == self.computed


@dataclass
class Report:
    target: str
    checks: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return all(c.ok for c in self.checks)

    def summary(self) -> str:
        good = sum(c.ok for c in self.checks)
        return f"{self.target}: {good}/{len(self.checks)} match"

    def lines(self) -> list[str]:
        out = [f"{'ok ' if c.ok else 'BAD'} {c.label}: expected {c.expected}, computed {c.computed}"
               for c in self.checks]
        return out + [self.summary()]

    def as_dict(self) -> dict:
        return {"target": self.target, "ok": self.ok,
                "checks": [{"label": c.label, "expected": c.expected,
                            "computed": c.computed, "ok": c.ok} for c in self.checks]}


def _packing_table(rep: Report):
    expected = {1: "1", 2: "1/2", 3: "3/4", 4: "1", 5: "4/5", 6: "24/25", 7: "63/64", 8: "288/289"}
    table = fill_table()
    for k, v in expected.items():
        rep.checks.append(Check(f"v({k})", v, format_number(table[k])))


def _radius_bounds(rep: Report):
    for src, want in (((1, 4), "6/5"), ((1, 5), "12/11")):
        res = lambda_sup(src, (2, 3))
        rep.checks.append(Check(f"sup E{src} -> E(2, 3)", want, format_number(res.upper)))


def _inner(m, n, want):
    def run(rep: Report):
        v = inner_vector(m, n)
        got = f"{v.degree};" + ",".join(map(str, v.labels))
        rep.checks.append(Check(f"V_{m},{n}", want, got))
    return run


def _complement_tilings(rep: Report):
    for (m, n), want in (((2, 3), (1, 1, 1)), ((3, 5), (2, 2, 1, 1)), ((5, 8), (3, 3, 2, 1, 1))):
        sizes = sorted((t.size for t in decompose_complement(m, n)), reverse=True)
        rep.checks.append(Check(f"T({m},{n}) sizes", " ".join(map(str, want)),
                                " ".join(format_number(Fraction(s)) for s in sizes)))


TARGETS = {
    "packing-table": _packing_table,
    "radius-bounds": _radius_bounds,
    "inner-7-12": _inner(7, 12, "12;5,5,2,2,1,1"),
    "inner-10-17": _inner(10, 17, "17;7,7,3,3,1,1,1"),
    "complement-tilings": _complement_tilings,
}


def reproduce(target: str) -> Report:
    if target not in TARGETS:
        raise KeyError(f"unknown target {target!r}; choose from {', '.join(TARGETS)}")
    rep = Report(target)
    TARGETS[target](rep)
    return rep
