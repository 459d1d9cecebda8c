"""Ekeland-Hofer capacity sequences and a side-by-side obstruction report."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import islice
from typing import Iterator

from .arith import Number, format_number
from .engine import DEFAULT_DEGREE_BOUND, EllipsoidPair, decide
from .homology import Verdict


def eh_terms(m: Number, n: Number) -> Iterator[Number]:
    """All multiples of m and of n, merged in nondecreasing order with repetition."""
    if not (m > 0 and n > 0):
        raise ValueError("generators must be positive")
    i = j = 1
    while True:
        a, b = i * m, j * n
        if a <= b:
            yield a
            i += 1
        else:
            yield b
            j += 1


def eh_sequence(m: Number, n: Number, depth: int) -> tuple:
    if depth < 0:
        raise ValueError("depth must be nonnegative")
    return tuple(islice(eh_terms(m, n), depth))


@dataclass(frozen=True)
class Domination:
    holds: bool
    depth: int
    first_failure: int | None = None   # 1-based index

    def __bool__(self):
        return self.holds

    def describe(self) -> str:
        if self.holds:
            return f"dominated (verified to depth {self.depth})"
        return f"not dominated: term {self.first_failure} exceeds (depth {self.depth})"


def eh_dominates(m, n, mt, nt, depth: int) -> Domination:
    """Termwise N(m, n)_i <= N(mt, nt)_i for i <= depth."""
    for i, (a, b) in enumerate(zip(eh_terms(m, n), eh_terms(mt, nt)), 1):
        if i > depth:
            break
        if a > b:
            return Domination(False, depth, i)
    return Domination(True, depth)


def default_depth(pair: EllipsoidPair) -> int:
    return 4 * pair.source[1] * pair.target[1]


@dataclass(frozen=True)
class ObstructionReport:
    pair: EllipsoidPair
    volume_ok: bool
    eh: Domination
    cone: Verdict

    @property
    def discrepancy(self) -> bool:
        """Volume and EH both pass yet the cone test rules the embedding out."""
        return self.volume_ok and self.eh.holds and not self.cone.feasible

    def as_dict(self) -> dict:
        return {
            "lambda": format_number(self.pair.raw_lambda),
            "volume": "pass" if self.volume_ok else "fail",
            "ekeland_hofer": "pass" if self.eh.holds else "fail",
            "eh_depth": self.eh.depth,
            "cone": self.cone.status,
            "cone_detail": self.cone.describe(),
            "discrepancy": self.discrepancy,
        }


def obstruction_report(pair: EllipsoidPair, depth: int | None = None,
                       degree_bound: int = DEFAULT_DEGREE_BOUND, **kw) -> ObstructionReport:
    """Volume, EH-to-depth and cone verdicts for ``lam * E(source)`` into open ``E(target)``."""
    depth = default_depth(pair) if depth is None else depth
    m, n = pair.source
    mt, nt = pair.target
    lam = pair.lam
    volume_ok = lam * lam * m * n < mt * nt
    # EH capacities scale linearly; compare lam*N(m,n) with N(mt,nt)
    eh = eh_dominates(lam * m, lam * n, Fraction(mt), Fraction(nt), depth)
    cone = decide(pair, degree_bound, **kw)
    return ObstructionReport(pair, volume_ok, eh, cone)
