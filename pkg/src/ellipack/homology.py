"""Second (co)homology of the k-fold blow-up X_k of CP^2.

A class is stored as ``dL - sum m_i E_i`` (equivalently ``d*ell - sum m_i e_i``),
so a ball packing with weights w gives the class ``(1; w_1, ..., w_k)`` and the
exceptional divisor ``E_i`` itself is ``(0; ..., -1, ...)``.  The pairing is
``d d' - sum m_i m'_i``.

Cone membership follows the positivity criterion: ``a`` is the class of a
symplectic form with the standard canonical class iff ``a.a > 0`` and
``a.E > 0`` for every exceptional class E.  For k <= 8 the exceptional set is
finite and listed explicitly; beyond that we combine Cremona reduction with a
degree-bounded enumeration and say so in the verdict.
"""

from __future__ import annotations

import os
import tempfile
from collections import Counter, deque
from dataclasses import dataclass, field
from functools import lru_cache
from itertools import combinations, combinations_with_replacement
from pathlib import Path
from typing import Iterable, Sequence

from .arith import Number, format_number

CACHE_FORMAT_VERSION = 1
CACHE_ENV = "ELLIPACK_CACHE"


@dataclass(frozen=True)
class HClass:
    d: Number
    m: tuple

    def __post_init__(self):
        object.__setattr__(self, "m", tuple(self.m))

    @property
    def k(self) -> int:
        return len(self.m)

    @classmethod
    def line(cls, k: int) -> "HClass":
        return cls(1, (0,) * k)

    @classmethod
    def exceptional_divisor(cls, i: int, k: int) -> "HClass":
        """E_i, with 1-based index i."""
        m = [0] * k
        m[i - 1] = -1
        return cls(0, tuple(m))

    @classmethod
    def from_weights(cls, weights: Sequence[Number], degree: Number = 1) -> "HClass":
        return cls(degree, tuple(weights))

    def _check(self, other: "HClass") -> None:
        if self.k != other.k:
            raise ValueError(f"classes live on X_{self.k} and X_{other.k}")

    def pair(self, other: "HClass"):
        self._check(other)
        total = self.d * other.d
        for a, b in zip(self.m, other.m):
            if a and b:
                total -= a * b
        return total

    def square(self):
        return self.pair(self)

    def anticanonical_degree(self):
        """Pairing with -K = 3L - sum E_i."""
        return 3 * self.d - sum(self.m)

    def is_exceptional(self) -> bool:
        return self.square() == -1 and self.anticanonical_degree() == 1

    def __add__(self, other: "HClass") -> "HClass":
        self._check(other)
        return HClass(self.d + other.d, tuple(a + b for a, b in zip(self.m, other.m)))

    def __sub__(self, other: "HClass") -> "HClass":
        self._check(other)
        return HClass(self.d - other.d, tuple(a - b for a, b in zip(self.m, other.m)))

    def scaled(self, c) -> "HClass":
        return HClass(c * self.d, tuple(c * x for x in self.m))

    def padded(self, k: int) -> "HClass":
        if k < self.k:
            raise ValueError("cannot pad to a smaller k")
        return HClass(self.d, self.m + (0,) * (k - self.k))

    def permuted(self, perm: Sequence[int]) -> "HClass":
        """New class whose i-th multiplicity is ``m[perm[i]]`` (0-based)."""
        return HClass(self.d, tuple(self.m[j] for j in perm))

    def sort_key(self):
        return (self.d, self.m)

    def to_line(self) -> str:
        return f"{format_number(self.d)};" + ",".join(format_number(x) for x in self.m)

    @classmethod
    def parse(cls, text: str) -> "HClass":
        from .arith import parse_number

        head, _, tail = text.strip().partition(";")
        mults = tuple(parse_number(x) for x in tail.split(",")) if tail.strip() else ()
        return cls(parse_number(head), mults)

    def __str__(self):
        if self.d == 0 and all(x == 0 for x in self.m):
            return "0"
        terms = []
        if self.d:
            terms.append(_term(self.d, "L"))
        for i, x in enumerate(self.m, 1):
            if x:
                terms.append(_term(-x, f"E{i}"))
        text = " + ".join(terms).replace("+ -", "- ")
        return text


def _term(coeff, symbol: str) -> str:
    if coeff == 1:
        return symbol
    if coeff == -1:
        return "-" + symbol
    return f"{format_number(coeff)}{symbol}"


def pair(a: HClass, b: HClass):
    return a.pair(b)


def cremona(a: HClass, i: int, j: int, l: int) -> HClass:
    """Reflection in L - E_i - E_j - E_l (1-based indices): a + (a.C) C."""
    if len({i, j, l}) != 3:
        raise ValueError("Cremona move needs three distinct indices")
    if min(i, j, l) < 1 or max(i, j, l) > a.k:
        raise ValueError("index out of range")
    return _cremona0(a, i - 1, j - 1, l - 1)


def _cremona0(a: HClass, i: int, j: int, l: int) -> HClass:
    m = list(a.m)
    mi, mj, ml = m[i], m[j], m[l]
    d = a.d
    m[i], m[j], m[l] = d - mj - ml, d - mi - ml, d - mi - mj
    return HClass(2 * d - mi - mj - ml, tuple(m))


# --- exceptional classes -----------------------------------------------------

# Representatives (degree, nonzero multiplicities) of every orbit of
# exceptional classes on X_k, k <= 8, under index permutations.
_FINITE_FORMS = (
    (0, (-1,)),
    (1, (1, 1)),
    (2, (1,) * 5),
    (3, (2,) + (1,) * 6),
    (4, (2,) * 3 + (1,) * 5),
    (5, (2,) * 6 + (1,) * 2),
    (6, (3,) + (2,) * 7),
)


def _placements(values: Sequence[int], k: int) -> Iterable[tuple[int, ...]]:
    """All distinct vectors of length k holding the multiset ``values``, zeros elsewhere."""
    groups = sorted(Counter(values).items(), reverse=True)

    def place(gi: int, free: tuple[int, ...], vec: list[int]):
        if gi == len(groups):
            yield tuple(vec)
            return
        value, count = groups[gi]
        for chosen in combinations(free, count):
            for p in chosen:
                vec[p] = value
            rest = tuple(p for p in free if p not in chosen)
            yield from place(gi + 1, rest, vec)
            for p in chosen:
                vec[p] = 0

    yield from place(0, tuple(range(k)), [0] * k)


@lru_cache(maxsize=None)
def _finite_exceptional(k: int) -> tuple[HClass, ...]:
    out = []
    for d, mults in _FINITE_FORMS:
        if len(mults) <= k:
            out.extend(HClass(d, vec) for vec in _placements(mults, k))
    return tuple(sorted(out, key=HClass.sort_key))


def exceptional_classes(k: int, degree_bound: int = 6, cache_dir=None) -> tuple[HClass, ...]:
    """Exceptional classes on X_k.

    For k <= 8 this is the complete (finite) set and ``degree_bound`` is
    ignored.  For k >= 9 it is every exceptional class of degree at most
    ``degree_bound``, with all index permutations expanded; prefer
    :func:`exceptional_orbits` there, since the expansion grows quickly.
    """
    if k < 1:
        raise ValueError("k must be positive")
    if k <= 8:
        return _finite_exceptional(k)
    return enumerate_exceptional(k, degree_bound, cache_dir=cache_dir)


def enumerate_exceptional(k: int, degree_bound: int, cache_dir=None) -> tuple[HClass, ...]:
    """Breadth-first Cremona/permutation closure of E_1, expanded to all index placements."""
    out = []
    for rep in exceptional_orbits(k, degree_bound, cache_dir=cache_dir):
        out.extend(HClass(rep.d, vec) for vec in _placements([x for x in rep.m if x], k))
    return tuple(sorted(out, key=HClass.sort_key))


def exceptional_orbits(k: int, degree_bound: int, cache_dir=None) -> tuple[HClass, ...]:
    """One representative per permutation orbit, multiplicities sorted descending.

    Every exceptional class Cremona-reduces to some E_i through classes of
    decreasing degree, so the degree cap never cuts a path short.
    """
    if k < 1 or degree_bound < 0:
        raise ValueError("need k >= 1 and degree_bound >= 0")
    cache_dir = cache_dir if cache_dir is not None else os.environ.get(CACHE_ENV)
    if cache_dir:
        cached = _read_cache(Path(cache_dir), k, degree_bound)
        if cached is not None:
            return cached
    reps = _orbits(k, degree_bound)
    if cache_dir:
        _write_cache(Path(cache_dir), k, degree_bound, reps)
    return reps


def _canonical(a: HClass) -> HClass:
    return HClass(a.d, tuple(sorted(a.m, reverse=True)))


@lru_cache(maxsize=64)
def _orbits(k: int, degree_bound: int) -> tuple[HClass, ...]:
    if k < 3:
        # no Cremona move fits; classes on X_k are those on X_3 supported on k indices
        out = set()
        for r in _orbits(3, degree_bound):
            nonzero = tuple(x for x in r.m if x)
            if len(nonzero) <= k:
                out.add(_canonical(HClass(r.d, nonzero + (0,) * (k - len(nonzero)))))
        return tuple(sorted(out, key=HClass.sort_key))
    start = _canonical(HClass.exceptional_divisor(1, k))
    seen = {start}
    queue = deque([start])
    while queue:
        rep = queue.popleft()
        for nxt in _cremona_neighbours(rep):
            if nxt.d <= degree_bound and nxt not in seen:
                seen.add(nxt)
                queue.append(nxt)
    return tuple(sorted(seen, key=HClass.sort_key))


def _cremona_neighbours(rep: HClass) -> Iterable[HClass]:
    # on a sorted representative only the multiset of the three values matters
    counts = Counter(rep.m)
    first = {}
    for pos, x in enumerate(rep.m):
        first.setdefault(x, []).append(pos)
    for triple in combinations_with_replacement(sorted(counts), 3):
        need = Counter(triple)
        if any(counts[v] < c for v, c in need.items()):
            continue
        positions = []
        for v, c in need.items():
            positions.extend(first[v][:c])
        yield _canonical(_cremona0(rep, *positions))


def _cache_path(cache_dir: Path, k: int, degree_bound: int) -> Path:
    return cache_dir / f"exceptional-k{k}-D{degree_bound}-v{CACHE_FORMAT_VERSION}.txt"


def _header(k: int, degree_bound: int) -> str:
    return f"# ellipack exceptional orbits k={k} D={degree_bound} version={CACHE_FORMAT_VERSION}"


def _read_cache(cache_dir: Path, k: int, degree_bound: int):
    path = _cache_path(cache_dir, k, degree_bound)
    try:
        lines = path.read_text(encoding="utf-8").splitlines()
    except OSError:
        return None
    if not lines or lines[0] != _header(k, degree_bound):
        return None
    classes = [HClass.parse(line) for line in lines[1:] if line.strip()]
    return tuple(sorted(classes, key=HClass.sort_key))


def _write_cache(cache_dir: Path, k: int, degree_bound: int, reps) -> None:
    cache_dir.mkdir(parents=True, exist_ok=True)
    body = "\n".join([_header(k, degree_bound)] + sorted(r.to_line() for r in reps)) + "\n"
    fd, tmp = tempfile.mkstemp(dir=cache_dir, prefix=".tmp-", suffix=".txt")
    try:
        with os.fdopen(fd, "w", encoding="utf-8") as fh:
            fh.write(body)
        os.replace(tmp, _cache_path(cache_dir, k, degree_bound))
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


# --- cone membership ---------------------------------------------------------

YES = "yes"
NO = "no"
YES_UP_TO = "yes-up-to-degree"


@dataclass(frozen=True)
class Verdict:
    """Outcome of a cone test.

    ``status`` is ``"yes"``, ``"no"`` or ``"yes-up-to-degree"``.  A ``"no"``
    always carries a certificate: either the string ``"volume"`` or an
    exceptional class whose pairing with the tested class is ``<= 0``.
    """

    status: str
    certificate: object = None
    pairing: object = None
    degree_bound: int | None = None
    method: str = ""

    @property
    def feasible(self) -> bool:
        return self.status != NO

    def describe(self) -> str:
        if self.status == YES:
            return "feasible"
        if self.status == YES_UP_TO:
            return f"feasible up to degree {self.degree_bound}"
        if self.certificate == "volume":
            return f"infeasible: volume (a.a = {format_number(self.pairing)})"
        return f"infeasible: {self.certificate} pairs to {format_number(self.pairing)}"


def _violates(e: HClass, value, frozen: int) -> bool:
    """Strict positivity, except that classes living on the first ``frozen``
    indices only need a nonnegative pairing (see :func:`in_cone`)."""
    if value < 0:
        return True
    return value == 0 and any(e.m[frozen:])


def _worst(a: HClass, classes: Iterable[HClass], frozen: int = 0):
    """The violated class with the smallest pairing, ties broken by sort_key."""
    best = None
    for e in classes:
        value = a.pair(e)
        if _violates(e, value, frozen) and (
                best is None or (value, e.sort_key()) < (best[1], best[0].sort_key())):
            best = (e, value)
    return best


def _sorted_pairing(a: HClass, rep: HClass) -> tuple[object, HClass]:
    """Smallest pairing of ``a`` with any permutation of ``rep``, and that permutation.

    Rearrangement: sum m_i w_i is largest when both are sorted the same way.
    """
    order = sorted(range(a.k), key=lambda i: a.m[i], reverse=True)
    placed = [0] * a.k
    for pos, mult in zip(order, rep.m):
        placed[pos] = mult
    e = HClass(rep.d, tuple(placed))
    return a.pair(e), e


@dataclass
class Reduction:
    """Trace of a Cremona reduction."""

    reduced: HClass
    ok: bool
    certificate: HClass | None = None
    steps: int = 0
    moves: list = field(default_factory=list)


class ReductionDidNotTerminate(RuntimeError):
    pass


def cremona_reduce(a: HClass, closed: bool = False, max_steps: int = 100_000) -> Reduction:
    """Reduce ``a`` by repeated Cremona moves on the three largest multiplicities.

    Stops when ``d >= m1 + m2 + m3`` (reduced) or when positivity fails.  With
    ``closed=False`` the positivity tests are strict (open cone); with
    ``closed=True`` they allow zero (closure).  A failure returns the
    exceptional class, in the original indexing, that witnesses it.
    """
    cur = a
    moves: list = []  # each entry: ("perm", order) or ("cremona", None)
    k = a.k

    def bad(x) -> bool:
        return x < 0 if closed else x <= 0

    for step in range(max_steps):
        order = sorted(range(k), key=lambda i: cur.m[i], reverse=True)
        cur = cur.permuted(order)
        moves.append(order)
        m = cur.m + (0, 0, 0)
        if k and bad(m[k - 1]):
            witness = HClass.exceptional_divisor(k, k)
            return Reduction(cur, False, _pull_back(witness, moves), step, moves)
        if k >= 2 and bad(cur.d - m[0] - m[1]):
            witness = HClass(1, (1, 1) + (0,) * (k - 2))
            return Reduction(cur, False, _pull_back(witness, moves), step, moves)
        if cur.d >= m[0] + m[1] + m[2]:
            return Reduction(cur, True, None, step, moves)
        cur = _cremona0(cur, 0, 1, 2)
        moves.append(None)
    raise ReductionDidNotTerminate(f"no reduced form after {max_steps} Cremona moves")


def _pull_back(e: HClass, moves: list) -> HClass:
    """Map a class in the final frame back to the original indexing."""
    for move in reversed(moves):
        if move is None:
            e = _cremona0(e, 0, 1, 2)
        else:
            inverse = [0] * len(move)
            for new_pos, old_pos in enumerate(move):
                inverse[old_pos] = new_pos
            e = e.permuted(inverse)
    return e


def in_cone(a: HClass, degree_bound: int = 10, exact_reduction: bool = False,
            cache_dir=None, frozen: int = 0) -> Verdict:
    """Test whether ``a`` lies in the symplectic cone of X_k (strict inequalities).

    ``frozen`` marks the first indices as coming from a fixed target whose own
    class sits on the boundary of the cone and is pushed inside by an
    arbitrarily small perturbation.  An exceptional class supported on those
    indices alone then obstructs only if its pairing is negative.
    """
    if not a.d > 0:
        raise ValueError("class must have positive degree")
    k = a.k
    sq = a.square()
    if sq <= 0:
        return Verdict(NO, "volume", sq, method="volume")
    if k == 0:
        return Verdict(YES, method="volume")
    if k <= 8:
        worst = _worst(a, _finite_exceptional(k), frozen)
        if worst is not None:
            return Verdict(NO, worst[0], worst[1], method="finite-list")
        return Verdict(YES, method="finite-list")

    red = cremona_reduce(a)
    qualified = False
    if not red.ok and red.certificate is not None:
        value = a.pair(red.certificate)
        if _violates(red.certificate, value, frozen):
            return Verdict(NO, red.certificate, value, method="cremona")
        qualified = True  # only a boundary class stopped the reduction
    best = None
    for rep in exceptional_orbits(k, degree_bound, cache_dir=cache_dir):
        if frozen:
            worst = _worst(a, _placements_of(rep, k), frozen)
            cand = None if worst is None else (worst[1], worst[0])
        else:
            value, e = _sorted_pairing(a, rep)
            cand = (value, e) if value <= 0 else None
        if cand is not None and (best is None or
                                 (cand[0], cand[1].sort_key()) < (best[0], best[1].sort_key())):
            best = cand
    if best is not None:
        return Verdict(NO, best[1], best[0], degree_bound, method="enumeration")
    if exact_reduction and not qualified:
        return Verdict(YES, method="cremona")
    return Verdict(YES_UP_TO, degree_bound=degree_bound, method="cremona+enumeration")


def _placements_of(rep: HClass, k: int) -> Iterable[HClass]:
    for vec in _placements([x for x in rep.m if x], k):
        yield HClass(rep.d, vec)
