"""Planar moment polygons: blow-up chains, triangle decompositions, packings.

Conventions.  Every edge lies on a line ``nu . x = c`` with ``nu`` the
primitive outward conormal, so the polygon is ``{nu . x <= c}``.  Delta(m, n)
is the triangle with vertices (0,0), (n,0), (0,m) and slanted conormal (m, n).
The inner chain of E(m, n) runs from the y-axis (conormal (-1,0)) to the
x-axis (conormal (0,-1)) through conormals with slopes p/q increasing from
0/1 to 1/1; edge i is the i-th blow-up, edge 0 the slanted edge (1,1) of
Delta(n, n).

All coordinates are exact ``Fraction``s.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import gcd
from typing import Sequence

from .arith import format_number
from .homology import HClass
from .weights import inner_vector

Point = tuple[Fraction, Fraction]

Y_AXIS = "y"
X_AXIS = "x"
_AXIS_CONORMALS = {Y_AXIS: (-1, 0), X_AXIS: (0, -1)}


def _dot(nu, x) -> Fraction:
    return nu[0] * x[0] + nu[1] * x[1]


def _det(u, v):
    return u[0] * v[1] - u[1] * v[0]


def _intersect(line1, line2) -> Point:
    (a, b), c = line1
    (p, q), r = line2
    det = a * q - b * p
    if det == 0:
        raise ValueError("parallel lines")
    return (Fraction(c * q - b * r, det), Fraction(a * r - c * p, det))


def _primitive(v) -> tuple[int, int]:
    """Primitive integer vector along a rational direction."""
    x, y = Fraction(v[0]), Fraction(v[1])
    den = x.denominator * y.denominator // gcd(x.denominator, y.denominator)
    xi, yi = int(x * den), int(y * den)
    g = gcd(xi, yi)
    if g == 0:
        raise ValueError("zero vector has no direction")
    return xi // g, yi // g


def orbifold_order(nu1: Sequence[int], nu2: Sequence[int]) -> int:
    """Order of the orbifold point where edges with conormals nu1, nu2 meet."""
    det = _det(nu1, nu2)
    if det == 0:
        raise ValueError("parallel conormals do not meet in a vertex")
    return abs(det)


def affine_length(start, end: Point | None = None) -> Fraction:
    """Lattice length of an edge, or of the segment from ``start`` to ``end``."""
    if end is None:
        start, end = start.start, start.end
    d = (Fraction(end[0]) - Fraction(start[0]), Fraction(end[1]) - Fraction(start[1]))
    if d == (0, 0):
        return Fraction(0)
    u = _primitive(d)
    return d[0] / u[0] if u[0] else d[1] / u[1]


@dataclass(frozen=True)
class Edge:
    conormal: tuple[int, int]
    support: Fraction
    start: Point
    end: Point
    index: int
    hclass: HClass | None = None

    @property
    def length(self) -> Fraction:
        """Signed lattice length, positive when the edge runs along (q, -p)."""
        p, q = self.conormal
        dx = self.end[0] - self.start[0]
        dy = self.end[1] - self.start[1]
        return Fraction(dx, q) if q else Fraction(-dy, p)

    def dump(self) -> str:
        pt = lambda x: f"({format_number(x[0])},{format_number(x[1])})"
        cls = str(self.hclass) if self.hclass is not None else "-"
        return (f"conormal=({self.conormal[0]},{self.conormal[1]}) "
                f"support={format_number(self.support)} from={pt(self.start)} "
                f"to={pt(self.end)} class={cls}")


@dataclass(frozen=True)
class EdgeChain:
    pair: tuple[int, int]
    edges: tuple[Edge, ...]   # adjacency order
    kind: str = "inner"

    def by_index(self, i: int) -> Edge:
        for e in self.edges:
            if e.index == i:
                return e
        raise KeyError(i)

    @property
    def vertices(self) -> list[Point]:
        if not self.edges:
            return []
        return [self.edges[0].start] + [e.end for e in self.edges]

    def dump(self) -> str:
        return "\n".join(e.dump() for e in self.edges)


@dataclass(frozen=True)
class BlowUp:
    """The i-th cut: its conormal and the two chain edges it cuts between."""

    index: int
    conormal: tuple[int, int]
    left: object   # index of the neighbour with smaller slope, or Y_AXIS
    right: object  # index of the neighbour with larger slope


def blowup_sequence(m: int, n: int) -> list[BlowUp]:
    """Minimal Farey blow-up sequence of Delta(n, n) ending at conormal (m, n)."""
    if not 0 < m < n or gcd(m, n) != 1:
        raise ValueError(f"expected coprime 0 < m < n, got ({m}, {n})")
    target = Fraction(m, n)
    seq = [BlowUp(1, (0, 1), Y_AXIS, 0)]
    lo, hi = (1, (0, 1)), (0, (1, 1))  # (edge index, conormal)
    i = 1
    while True:
        i += 1
        nu = (lo[1][0] + hi[1][0], lo[1][1] + hi[1][1])
        seq.append(BlowUp(i, nu, lo[0], hi[0]))
        slope = Fraction(*nu)
        if slope == target:
            return seq
        if target < slope:
            hi = (i, nu)
        else:
            lo = (i, nu)


def cut_neighbours(seq: list[BlowUp]) -> dict[int, set[int]]:
    """S_i: the later cuts whose new edge meets edge i."""
    s: dict[int, set[int]] = {0: set()}
    for b in seq:
        s.setdefault(b.index, set())
        for nb in (b.left, b.right):
            if nb not in (X_AXIS, Y_AXIS):
                s[nb].add(b.index)
    return s


def edge_classes(m: int, n: int) -> dict[int, HClass]:
    seq = blowup_sequence(m, n)
    big_n = len(seq)
    s = cut_neighbours(seq)
    out = {}
    for i, later in s.items():
        mult = [0] * big_n
        for j in later:
            mult[j - 1] = 1
        if i == 0:
            out[i] = HClass(1, tuple(mult))
        else:
            mult[i - 1] = -1
            out[i] = HClass(0, tuple(mult))
    return out


def labels_from_chain(m: int, n: int) -> tuple[int, tuple[int, ...]]:
    """Label rule on the chain: k_N = 1, k_i = sum of k_j over S_i; returns (k_0, labels)."""
    seq = blowup_sequence(m, n)
    s = cut_neighbours(seq)
    big_n = len(seq)
    k = {big_n: 1}
    for i in range(big_n - 1, -1, -1):
        k[i] = sum(k[j] for j in s[i])
    return k[0], tuple(k[i] for i in range(1, big_n + 1))


def _chain_from_lines(m, n, seq, lines, classes, kind="inner") -> EdgeChain:
    ordered = sorted(range(len(seq) + 1), key=lambda i: Fraction(*lines[i][0]))
    axis_y = (_AXIS_CONORMALS[Y_AXIS], Fraction(0))
    axis_x = (_AXIS_CONORMALS[X_AXIS], Fraction(0))
    ring = [axis_y] + [lines[i] for i in ordered] + [axis_x]
    pts = [_intersect(ring[j], ring[j + 1]) for j in range(len(ring) - 1)]
    edges = tuple(
        Edge(lines[i][0], lines[i][1], pts[pos], pts[pos + 1], i, classes.get(i))
        for pos, i in enumerate(ordered)
    )
    return EdgeChain((m, n), edges, kind)


def _lines_for(seq, top: Fraction, support_of) -> dict:
    """Cut lines; ``support_of(blowup, vertex)`` gives each cut's support."""
    lines = {0: ((1, 1), Fraction(top)),
             Y_AXIS: (_AXIS_CONORMALS[Y_AXIS], Fraction(0)),
             X_AXIS: (_AXIS_CONORMALS[X_AXIS], Fraction(0))}
    for b in seq:
        v = _intersect(lines[b.left], lines[b.right])
        lines[b.index] = (b.conormal, Fraction(support_of(b, v)))
    return lines


def _singular_support(m, n):
    top_left, bottom_right = (0, m), (n, 0)

    def support(b: BlowUp, v: Point):
        # each singular cut passes through (0, m) or (n, 0)
        p, q = b.conormal
        anchor = top_left if p * n < m * q else bottom_right
        return _dot(b.conormal, anchor)

    return support


def blowup_chain(m: int, n: int) -> EdgeChain:
    """The unperturbed chain E(m, n): all edges but the slanted one have length 0."""
    seq = blowup_sequence(m, n)
    lines = _lines_for(seq, n, _singular_support(m, n))
    return _chain_from_lines(m, n, seq, lines, edge_classes(m, n))


@dataclass(frozen=True)
class LatticeTriangle:
    vertices: tuple[Point, Point, Point]
    size: Fraction

    @property
    def area(self) -> Fraction:
        a, b, c = self.vertices
        return abs(_det((b[0] - a[0], b[1] - a[1]), (c[0] - a[0], c[1] - a[1]))) / 2

    def is_standard(self) -> bool:
        """Unimodular image of size * Delta(1,1)."""
        a, b, c = self.vertices
        u = (b[0] - a[0], b[1] - a[1])
        v = (c[0] - a[0], c[1] - a[1])
        if abs(_det(u, v)) != self.size ** 2:
            return False
        return all(affine_length(p, q) == self.size
                   for p, q in ((a, b), (b, c), (c, a)))

    def mapped(self, f) -> "LatticeTriangle":
        return LatticeTriangle(tuple(f(p) for p in self.vertices), self.size)


def decompose_complement(m: int, n: int) -> list[LatticeTriangle]:
    """Tile T(m, n) = Delta(n,n) minus the open Delta(m,n) by the singular cuts.

    Cut sizes are read off the geometry (each cut line runs through (0, m) or
    (n, 0)), not from the label rule, so comparing them with the inner labels
    is a genuine check.  Triangles are returned in blow-up order.
    """
    seq = blowup_sequence(m, n)
    lines = _lines_for(seq, n, _singular_support(m, n))
    out = []
    for b in seq:
        v = _intersect(lines[b.left], lines[b.right])
        cut = lines[b.index]
        size = _dot(b.conormal, v) - cut[1]
        p1 = _intersect(cut, lines[b.left])
        p2 = _intersect(cut, lines[b.right])
        out.append(LatticeTriangle((v, p1, p2), size))
    return out


# A sends the conormals (1,1), (-1,0), (-m,-n) of T(m,n) to those of
# the triangle with conormals (-1,0), (0,-1), (n, n-m).
CONORMAL_MATRIX = ((0, -1), (1, -1))


def transform_conormal(nu) -> tuple[int, int]:
    (a, b), (c, d) = CONORMAL_MATRIX
    return (a * nu[0] + b * nu[1], c * nu[0] + d * nu[1])


def point_transform(n: int):
    # inverse transpose of CONORMAL_MATRIX, translated so the image sits in the first quadrant
    def f(pt: Point) -> Point:
        x, y = pt
        return (n - x - y, x)
    return f


def conormal_transform(chain: EdgeChain) -> EdgeChain:
    """Carry a chain for T(m, n) to the matching chain for Delta(n, n-m)."""
    m, n = chain.pair
    f = point_transform(n)
    # (A nu) . f(x) = nu . x - q n, so each support drops by q n
    edges = tuple(
        Edge(transform_conormal(e.conormal), e.support - e.conormal[1] * n,
             f(e.start), f(e.end), e.index, e.hclass)
        for e in chain.edges
    )
    return EdgeChain((n - m, n), edges, "outer")


def decompose_ellipsoid(m: int, n: int) -> list[LatticeTriangle]:
    """Tile Delta(m, n) by standard triangles whose sizes are the outer weights.

    Built by transporting the complement tiling of T(n - m, n) (conormal
    transform, then swapping the axes to land on Delta(m, n)).
    """
    if m <= 0 or n <= 0 or gcd(m, n) != 1:
        raise ValueError(f"expected coprime positive pair, got ({m}, {n})")
    m, n = min(m, n), max(m, n)
    if m == n:
        return [LatticeTriangle(((Fraction(0), Fraction(0)), (Fraction(1), Fraction(0)),
                                 (Fraction(0), Fraction(1))), Fraction(1))]
    f = point_transform(n)

    def g(pt: Point) -> Point:
        x, y = f(pt)
        return (y, x)

    return [t.mapped(g) for t in decompose_complement(n - m, n)]


# --- unit triangle packing ---------------------------------------------------

@dataclass(frozen=True)
class AffineLatticeMap:
    matrix: tuple[tuple[int, int], tuple[int, int]]
    translation: tuple[int, int]

    def __post_init__(self):
        (a, b), (c, d) = self.matrix
        if abs(a * d - b * c) != 1:
            raise ValueError("matrix is not unimodular")

    def __call__(self, pt: Point) -> Point:
        (a, b), (c, d) = self.matrix
        x, y = pt
        return (a * x + b * y + self.translation[0], c * x + d * y + self.translation[1])

    @property
    def det(self) -> int:
        (a, b), (c, d) = self.matrix
        return a * d - b * c


UNIT_TRIANGLE: tuple[Point, Point, Point] = (
    (Fraction(0), Fraction(0)), (Fraction(1), Fraction(0)), (Fraction(0), Fraction(1)))


def pack_unit_triangles(k: int) -> list[AffineLatticeMap]:
    """k lattice maps fanning the unit triangle out from (0, 1) across Delta(1, k)."""
    if k < 1:
        raise ValueError("k must be positive")
    return [AffineLatticeMap(((1, 1 - i), (0, 1)), (i - 1, 0)) for i in range(1, k + 1)]


def packing_triangles(maps: Sequence[AffineLatticeMap]) -> list[LatticeTriangle]:
    return [LatticeTriangle(tuple(a(p) for p in UNIT_TRIANGLE), Fraction(1)) for a in maps]


# --- geometric predicates used by the checks ------------------------------

def _edge_normals(tri):
    pts = tri.vertices
    for i in range(3):
        p, q = pts[i], pts[(i + 1) % 3]
        yield (q[1] - p[1], p[0] - q[0])


def interiors_disjoint(t1: LatticeTriangle, t2: LatticeTriangle) -> bool:
    """Separating-axis test; touching along an edge or vertex counts as disjoint."""
    for axis in list(_edge_normals(t1)) + list(_edge_normals(t2)):
        a = [_dot(axis, p) for p in t1.vertices]
        b = [_dot(axis, p) for p in t2.vertices]
        if max(a) <= min(b) or max(b) <= min(a):
            return True
    return False


def in_triangle(pt: Point, tri: Sequence[Point]) -> bool:
    """Closed containment."""
    a, b, c = tri
    signs = [_det((q[0] - p[0], q[1] - p[1]), (pt[0] - p[0], pt[1] - p[1]))
             for p, q in ((a, b), (b, c), (c, a))]
    return all(s >= 0 for s in signs) or all(s <= 0 for s in signs)


def complement_region(m: int, n: int) -> tuple[Point, Point, Point]:
    return ((Fraction(0), Fraction(m)), (Fraction(0), Fraction(n)), (Fraction(n), Fraction(0)))


def moment_triangle(m: int, n: int) -> tuple[Point, Point, Point]:
    return ((Fraction(0), Fraction(0)), (Fraction(n), Fraction(0)), (Fraction(0), Fraction(m)))


def is_tiling(tiles: Sequence[LatticeTriangle], region: tuple[Point, Point, Point]) -> bool:
    """Tiles inside the region, pairwise interior-disjoint, areas summing to the region's."""
    whole = LatticeTriangle(region, Fraction(0)).area
    if sum(t.area for t in tiles) != whole:
        return False
    if not all(in_triangle(p, region) for t in tiles for p in t.vertices):
        return False
    return all(interiors_disjoint(tiles[i], tiles[j])
               for i in range(len(tiles)) for j in range(i + 1, len(tiles)))


# --- perturbed (smooth) inner chains ----------------------------------------

@dataclass(frozen=True)
class PerturbedChain:
    chain: EdgeChain
    delta: tuple[Fraction, ...]
    cut_sizes: tuple[Fraction, ...]        # a(E_i) = k_i + delta_i, i = 1..N
    edge_values: dict                      # a(h(eps_i)) for i = 0..N
    line_shifts: dict                      # support(delta) - support(0), per cut line
    conditions: dict = field(default_factory=dict)

    @property
    def admissible(self) -> bool:
        return all(self.conditions.values())


def perturbed_chain(m: int, n: int, delta: Sequence) -> PerturbedChain:
    """Build E(m, n; delta) and test the admissibility conditions.

    ``delta = (d_0, ..., d_N)``: the slanted edge of Delta(n, n) moves to
    support n - d_0 and the i-th cut has size k_i + d_i.  Admissible means
    d_0, d_1 > 0, every edge has positive length, and the chain lies in
    Delta(m, n) minus r * (open Delta(m, n)) with r = 1 - d_0 - d_1.
    """
    seq = blowup_sequence(m, n)
    big_n = len(seq)
    delta = tuple(Fraction(x) for x in delta)
    if len(delta) != big_n + 1:
        raise ValueError(f"delta must have length {big_n + 1} for ({m}, {n})")
    labels = inner_vector(m, n).labels
    sizes = tuple(labels[i] + delta[i + 1] for i in range(big_n))

    def support(b: BlowUp, v: Point):
        return _dot(b.conormal, v) - sizes[b.index - 1]

    lines = _lines_for(seq, n - delta[0], support)
    base = _lines_for(seq, n, _singular_support(m, n))
    classes = edge_classes(m, n)
    chain = _chain_from_lines(m, n, seq, lines, classes)

    a = HClass(n - delta[0], sizes)
    edge_values = {i: a.pair(h) for i, h in classes.items()}
    shifts = {i: lines[i][1] - base[i][1] for i in range(big_n + 1)}

    r = 1 - delta[0] - delta[1]
    inside = all(x >= 0 and y >= 0 and m * x + n * y <= m * n for x, y in chain.vertices)
    outside_core = all(m * x + n * y >= r * m * n for x, y in chain.vertices)
    conditions = {
        "positive_offsets": delta[0] > 0 and delta[1] > 0,
        "positive_lengths": all(e.length > 0 for e in chain.edges),
        "contained": inside and outside_core,
    }
    return PerturbedChain(chain, delta, sizes, edge_values, shifts, conditions)


def singular_vertex_orders(chain: EdgeChain) -> list[int]:
    """Orbifold orders at the vertices left once zero-length edges are dropped."""
    conormals = [_AXIS_CONORMALS[Y_AXIS]]
    conormals += [e.conormal for e in chain.edges if e.length != 0]
    conormals.append(_AXIS_CONORMALS[X_AXIS])
    return [orbifold_order(conormals[i], conormals[i + 1]) for i in range(len(conormals) - 1)]


def vertex_orders(chain: EdgeChain) -> list[int]:
    conormals = [_AXIS_CONORMALS[Y_AXIS]] + [e.conormal for e in chain.edges]
    conormals.append(_AXIS_CONORMALS[X_AXIS])
    return [orbifold_order(conormals[i], conormals[i + 1]) for i in range(len(conormals) - 1)]
