"""Shared samplers for the test suite."""

import random
from fractions import Fraction
from itertools import product
from math import gcd

from ellipack.arith import mediant
from ellipack.homology import HClass, cremona_reduce, enumerate_exceptional, in_cone
from ellipack.toric import blowup_sequence, cut_neighbours, labels_from_chain, perturbed_chain

F = Fraction
EPS = F(1, 1000)


def coprime_pairs(limit):
    return [(m, n) for n in range(2, limit + 1) for m in range(1, n) if gcd(m, n) == 1]


def adjacent_pairs(count):
    out, frontier = [], [(Fraction(0), Fraction(1))]
    while len(out) < count:
        lo, hi = frontier.pop(0)
        mid = mediant(lo, hi)
        for a, b in ((lo, mid), (mid, hi)):
            if 0 < a and b < 1:
                out.append((a, b))
            frontier.append((a, b))
    return out[:count]


def sample_admissible(m, n, rng, tries=400):
    """Solve for the edge lengths from random positive slacks, then screen."""
    seq = blowup_sequence(m, n)
    big_n = len(seq)
    s = cut_neighbours(seq)
    k0, labels = labels_from_chain(m, n)
    k = dict(enumerate(labels, 1))
    for _ in range(tries):
        sig = {big_n: F(0)}
        for i in range(big_n - 1, 0, -1):
            sig[i] = F(rng.randint(1, 100), 100) + sum(sig[j] for j in s[i])
        lo = -sig[1] / k[1]
        hi = -sum(sig[j] for j in s[0]) / k0
        if lo >= hi:
            continue
        d_n = lo + (hi - lo) * F(rng.randint(1, 99), 100)
        d = {i: sig[i] + k[i] * d_n for i in range(1, big_n + 1)}
        d[0] = -sum(d[j] for j in s[0]) * F(rng.randint(1, 99), 100)
        delta = [d[i] * EPS for i in range(big_n + 1)]
        if perturbed_chain(m, n, delta).admissible:
            return delta
    return None


def admissible_samples(count, seed=7):
    rng = random.Random(seed)
    pairs = coprime_pairs(12)
    out = []
    while len(out) < count:
        m, n = rng.choice(pairs)
        delta = sample_admissible(m, n, rng)
        if delta is not None:
            out.append((m, n, delta))
    return out


def brute_exceptional(k, dmax):
    """Direct search of d^2 - sum m^2 = -1, 3d - sum m = 1 with m_i >= -1."""
    out = set()
    for d in range(dmax + 1):
        for m in product(range(-1, d + 1), repeat=k):
            if 3 * d - sum(m) == 1 and d * d - sum(x * x for x in m) == -1:
                out.add(HClass(d, m))
    return out


def reduction_verdict(a):
    if a.square() <= 0:
        return False
    return cremona_reduce(a).ok


def enumeration_verdict(a, bound=6):
    if a.square() <= 0:
        return False
    return all(a.pair(e) > 0 for e in enumerate_exceptional(a.k, bound))


def three_way_sample(count, seed):
    """Random classes on X_k, k <= 8: finite list, enumeration and reduction must agree."""
    rng = random.Random(seed)
    outcomes = []
    for _ in range(count):
        k = rng.randint(1, 8)
        d = Fraction(rng.randint(1, 30), rng.randint(1, 6))
        ms = tuple(d * Fraction(rng.randint(1, 60), 100) for _ in range(k))
        a = HClass(d, ms)
        finite = in_cone(a).feasible
        assert finite == enumeration_verdict(a) == reduction_verdict(a), a
        outcomes.append(finite)
    return outcomes
