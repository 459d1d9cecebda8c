"""Ellipsoid embeddings as ball packings.

``lambda * E(m, n)`` embeds in the open ellipsoid ``E(m', n')`` iff the class

    (n'; k_1, ..., k_N, lambda*h_1, ..., lambda*h_M)

lies in the symplectic cone of the blow-up X_{N+M}, where the k_i are the
inner labels of (m', n') and the h_j the outer weights of (m, n).  Dividing
by n' gives the weight form ``(1; w)``.  Everything here works with the
unscaled integer class so thresholds come out as plain fractions.

Open-target semantics throughout: a class on the boundary of the cone is
reported infeasible, and ``lambda_sup`` is the strict threshold.  The one
exception is an exceptional class living on the target's own indices: the
target vector itself pairs to zero with some of those, and the perturbation
that smooths the target pushes that pairing positive, so only a negative
value counts there.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .arith import Number, Surd, format_number, sqrt_exact
from .homology import (
    HClass,
    ReductionDidNotTerminate,
    Verdict,
    _finite_exceptional,
    cremona_reduce,
    exceptional_orbits,
    in_cone,
)
from .weights import inner_vector, outer_weights

DEFAULT_DEGREE_BOUND = 10


def _rational_ratio(a: Number, b: Number) -> Fraction:
    r = a / b
    if isinstance(r, Surd):
        raise ValueError(
            f"aspect ratio {format_number(a)} : {format_number(b)} is irrational; "
            "only rational shapes are supported")
    return Fraction(r)


def normalize(a: Number, b: Number) -> tuple[tuple[int, int], Number]:
    """Write E(a, b) as ``scale * E(m, n)`` with coprime integers m <= n."""
    if not (a > 0 and b > 0):
        raise ValueError("ellipsoid parameters must be positive")
    if a > b:
        a, b = b, a
    r = _rational_ratio(a, b)
    m, n = r.numerator, r.denominator
    return (m, n), a / m


@dataclass(frozen=True)
class EllipsoidPair:
    """``lam * E(source)`` into the open ``E(target)``, both normalized.

    ``lam`` already absorbs the scale factors of the raw inputs; ``scale``
    converts it back (``raw lambda = lam * scale``).
    """

    source: tuple[int, int]
    target: tuple[int, int]
    lam: Number = Fraction(1)
    scale: Number = Fraction(1)

    @classmethod
    def make(cls, source: Sequence, target: Sequence, lam=1) -> "EllipsoidPair":
        src, s = normalize(*[_num(x) for x in source])
        tgt, t = normalize(*[_num(x) for x in target])
        lam = _num(lam)
        if not lam > 0:
            raise ValueError("lambda must be positive")
        return cls(src, tgt, lam * s / t, t / s)

    def with_lambda(self, lam: Number) -> "EllipsoidPair":
        """Same shapes, with a normalized lambda."""
        return EllipsoidPair(self.source, self.target, lam, self.scale)

    @property
    def raw_lambda(self) -> Number:
        return self.lam * self.scale


def _num(x) -> Number:
    if isinstance(x, (Surd, Fraction)):
        return x
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, str):
        from .arith import parse_number

        return parse_number(x)
    raise TypeError(f"unsupported number {x!r}")


@dataclass(frozen=True)
class PackingProblem:
    pair: EllipsoidPair
    inner: tuple[int, ...]     # k_i of the target
    outer: tuple[int, ...]     # outer weights of the source

    @property
    def k(self) -> int:
        return len(self.inner) + len(self.outer)

    @property
    def degree(self) -> int:
        return self.pair.target[1]

    def hclass(self, lam: Number | None = None) -> HClass:
        lam = self.pair.lam if lam is None else lam
        return HClass(self.degree, self.inner + tuple(lam * h for h in self.outer))

    @property
    def weights(self) -> tuple:
        n = self.degree
        return tuple(Fraction(x, n) for x in self.inner) + \
            tuple(self.pair.lam * h / n for h in self.outer)

    @property
    def weight_class(self) -> HClass:
        return HClass(1, self.weights)


def reduce_to_packing(pair: EllipsoidPair) -> PackingProblem:
    m, n = pair.source
    mt, nt = pair.target
    return PackingProblem(pair, inner_vector(mt, nt).labels, outer_weights(m, n).labels)


def decide(pair: EllipsoidPair, degree_bound: int = DEFAULT_DEGREE_BOUND,
           exact_reduction: bool = False, cache_dir=None) -> Verdict:
    prob = reduce_to_packing(pair)
    return in_cone(prob.hclass(), degree_bound, exact_reduction=exact_reduction,
                   cache_dir=cache_dir, frozen=len(prob.inner))


# --- suprema -------------------------------------------------------------------

@dataclass(frozen=True)
class SupResult:
    """``exact`` results have ``lower == upper == value``.

    Otherwise ``upper`` is certified (an obstruction exists there) and
    ``lower`` is the largest probe that passed every tested obstruction.
    """

    lower: Number
    upper: Number
    exact: bool
    binding: object = None     # HClass, "volume", or None
    degree_bound: int | None = None
    method: str = ""

    @property
    def value(self) -> Number | None:
        return self.upper if self.exact else None

    def scaled(self, c: Number) -> "SupResult":
        return SupResult(self.lower * c, self.upper * c, self.exact, self.binding,
                         self.degree_bound, self.method)

    def describe(self) -> str:
        if self.exact:
            return format_number(self.upper)
        return f"[{format_number(self.lower)}, {format_number(self.upper)}] " \
               f"(tested to degree {self.degree_bound})"


def _linear_parts(prob: PackingProblem, e: HClass) -> tuple[Fraction, Fraction]:
    """a(lam).E = alpha - lam*beta."""
    n_in = len(prob.inner)
    alpha = prob.degree * e.d - sum(x * y for x, y in zip(prob.inner, e.m[:n_in]))
    beta = sum(x * y for x, y in zip(prob.outer, e.m[n_in:]))
    return Fraction(alpha), Fraction(beta)


def _better(root, e, best) -> bool:
    return best is None or (root, e.sort_key()) < (best[0], best[1].sort_key())


def _finite_threshold(prob: PackingProblem):
    best = None
    for e in _finite_exceptional(prob.k):
        alpha, beta = _linear_parts(prob, e)
        if beta > 0:
            root = max(alpha / beta, Fraction(0))
            if _better(root, e, best):
                best = (root, e)
    return best


def _orbit_threshold(prob: PackingProblem, reps: Sequence[HClass], cap: Number):
    """Smallest lam in (0, cap] where some permutation of some rep pairs to 0.

    On each interval between breakpoints k_i/h_j the descending order of the
    entries of a(lam) is fixed, so by rearrangement each rep's worst
    placement is one linear function there.
    """
    breaks = sorted({Fraction(x, h) for x in prob.inner for h in prob.outer
                     if Fraction(x, h) < cap})
    edges = [Fraction(0)] + breaks + [cap]
    for left, right in zip(edges, edges[1:]):
        if right <= left:
            continue
        probe = _rational_between(left, right)
        a = prob.hclass(probe)
        order = sorted(range(a.k), key=lambda i: a.m[i], reverse=True)
        best = None
        for rep in reps:
            placed = [0] * a.k
            for pos, mult in zip(order, rep.m):
                placed[pos] = mult
            e = HClass(rep.d, tuple(placed))
            alpha, beta = _linear_parts(prob, e)
            if beta <= 0:
                continue
            root = alpha / beta
            if root <= right and _better(max(root, left), e, best):
                best = (max(root, left), e)
        if best is not None:
            return best
    return None


def _rational_between(lo: Number, hi: Number) -> Fraction:
    if not isinstance(hi, Surd):
        return (Fraction(lo) + Fraction(hi)) / 2
    approx = Fraction(float(hi)).limit_denominator(10 ** 6)
    while not approx < hi:
        approx -= Fraction(1, 10 ** 6)
    return (Fraction(lo) + max(approx, Fraction(lo))) / 2


def _volume_root(prob: PackingProblem) -> Number:
    m, n = prob.pair.source
    mt, nt = prob.pair.target
    return sqrt_exact(Fraction(mt * nt, m * n))


def _sup_normalized(prob: PackingProblem, degree_bound: int, exact_reduction: bool,
                    cache_dir, width: Fraction) -> SupResult:
    vol = _volume_root(prob)
    if prob.k <= 8:
        best = _finite_threshold(prob)
        if best is not None and best[0] <= vol:
            return SupResult(best[0], best[0], True, best[1], method="finite-list")
        return SupResult(vol, vol, True, "volume", method="finite-list")

    reps = list(exceptional_orbits(prob.k, degree_bound, cache_dir=cache_dir))
    while True:
        best = _orbit_threshold(prob, reps, vol)
        if best is not None and best[0] <= vol:
            cand, binding = best
        else:
            cand, binding = vol, "volume"
        if not exact_reduction:
            break
        try:
            red = cremona_reduce(prob.hclass(cand), closed=True)
        except ReductionDidNotTerminate:
            break
        if red.ok:
            return SupResult(cand, cand, True, binding, degree_bound, "cremona")
        cert = red.certificate
        rep = HClass(cert.d, tuple(sorted(cert.m, reverse=True)))
        if rep in reps:
            break
        reps.append(rep)

    # bounded fallback: bisect below the certified upper bound
    lo, hi = Fraction(0), cand
    while hi - lo > width:
        mid = _rational_between(lo, hi)
        verdict = in_cone(prob.hclass(mid), degree_bound, cache_dir=cache_dir,
                          frozen=len(prob.inner))
        if verdict.feasible:
            lo = mid
        else:
            hi, binding = mid, verdict.certificate
    return SupResult(lo, hi, False, binding, degree_bound, "bisection")


def lambda_sup(source: Sequence, target: Sequence, degree_bound: int = DEFAULT_DEGREE_BOUND,
               exact_reduction: bool = False, cache_dir=None,
               width: Fraction = Fraction(1, 1000)) -> SupResult:
    """Supremum of lambda with lambda*E(source) embedding in the open E(target)."""
    pair = EllipsoidPair.make(source, target)
    prob = reduce_to_packing(pair)
    res = _sup_normalized(prob, degree_bound, exact_reduction, cache_dir, Fraction(width))
    return res.scaled(pair.scale)


def packing_constant(k: int, degree_bound: int = DEFAULT_DEGREE_BOUND,
                     exact_reduction: bool = False, cache_dir=None):
    """v(k): volume fraction of B(1) fillable by k equal balls.

    Exact rationals are returned as ``Fraction``; otherwise a ``(lower, upper)`` pair.
    """
    if k < 1:
        raise ValueError("k must be positive")
    res = lambda_sup((1, k), (1, 1), degree_bound, exact_reduction, cache_dir)
    if res.exact:
        return Fraction(res.upper * res.upper * k)
    return (res.lower * res.lower * k, res.upper * res.upper * k)


def fill_table(kmax: int = 8) -> dict[int, Fraction]:
    return {k: packing_constant(k) for k in range(1, kmax + 1)}


def ball_capacity(m, n, degree_bound: int = DEFAULT_DEGREE_BOUND,
                  exact_reduction: bool = False, cache_dir=None):
    """Smallest mu with E(m, n) embedding in every open B(mu') for mu' > mu."""
    res = lambda_sup((m, n), (1, 1), degree_bound, exact_reduction, cache_dir)
    if res.exact:
        return 1 / res.upper
    return (1 / res.upper, 1 / res.lower if res.lower else None)
