"""Weight expansions of an ellipsoid E(m, n).

``outer_weights`` gives the ball sizes whose disjoint union stands in for
E(m, n) when it is the *source* of an embedding; ``inner_vector`` gives the
class ``V = nL - sum k_i E_i`` whose labels are the balls filling the
complement of E(m, n) in the ball B(n), used when E(m, n) is the *target*.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd

from .arith import continued_fraction
from .homology import HClass


@dataclass(frozen=True)
class OuterWeights:
    pair: tuple[int, int]
    labels: tuple[int, ...]
    multiplicities: tuple[int, ...]

    def as_class(self) -> HClass:
        """Positive bookkeeping: (0; -k_1, ..., -k_N) = sum k_i E_i."""
        return HClass(0, tuple(-x for x in self.labels))


@dataclass(frozen=True)
class InnerVector:
    pair: tuple[int, int]
    degree: int
    labels: tuple[int, ...]  # blow-up order

    @property
    def sorted_labels(self) -> tuple[int, ...]:
        return tuple(sorted(self.labels, reverse=True))

    def as_class(self) -> HClass:
        return HClass(self.degree, self.labels)


def outer_weights(m: int, n: int) -> OuterWeights:
    """Euclidean weight expansion: a_1 copies of min(m, n), then a_2 copies of the remainder, ..."""
    if m <= 0 or n <= 0:
        raise ValueError("weights need positive integers")
    if gcd(m, n) != 1:
        raise ValueError(f"({m}, {n}) is not coprime; normalize first")
    big, small = max(m, n), min(m, n)
    labels: list[int] = []
    mults: list[int] = []
    while small:
        a, rest = divmod(big, small)
        labels.extend([small] * a)
        mults.append(a)
        big, small = small, rest
    return OuterWeights((m, n), tuple(labels), tuple(mults))


def inner_vector(m: int, n: int) -> InnerVector:
    """The class V_{m,n} = nL - sum k_i E_i, labels in blow-up order.

    Walks the Stern-Brocot tree toward m/n.  Each new mediant p''/q'' gets
    ``V'' = V + V' - E_{N''}`` from its two Farey parents, the parent with
    the longer label list absorbing the other by zero-padding.
    """
    if not (0 <= m <= n) or n <= 0:
        raise ValueError(f"expected 0 <= m <= n, got ({m}, {n})")
    if gcd(m, n) != 1:
        raise ValueError(f"({m}, {n}) is not coprime")
    if (m, n) == (0, 1):
        return InnerVector((0, 1), 1, (1,))
    if (m, n) == (1, 1):
        return InnerVector((1, 1), 1, ())

    target = Fraction(m, n)
    lo = (Fraction(0), 1, (1,))
    hi = (Fraction(1), 1, ())
    while True:
        big, small = (lo, hi) if len(lo[2]) >= len(hi[2]) else (hi, lo)
        labels = list(big[2])
        for i, x in enumerate(small[2]):
            labels[i] += x
        labels.append(1)
        value = Fraction(lo[0].numerator + hi[0].numerator, lo[1] + hi[1])
        node = (value, lo[1] + hi[1], tuple(labels))
        if value == target:
            return InnerVector((m, n), n, node[2])
        if target < value:
            hi = node
        else:
            lo = node


def weight_summary(m: int, n: int) -> tuple[tuple[int, ...], list[int]]:
    """Outer labels plus the continued fraction of max/min, for display."""
    w = outer_weights(m, n)
    return w.labels, continued_fraction(Fraction(max(m, n), min(m, n)))
