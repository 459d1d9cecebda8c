import random
from fractions import Fraction

import pytest

from ellipack.toric import (
    AffineLatticeMap,
    Edge,
    LatticeTriangle,
    affine_length,
    blowup_chain,
    complement_region,
    conormal_transform,
    decompose_complement,
    decompose_ellipsoid,
    in_triangle,
    interiors_disjoint,
    is_tiling,
    moment_triangle,
    orbifold_order,
    pack_unit_triangles,
    packing_triangles,
    perturbed_chain,
    point_transform,
    singular_vertex_orders,
    transform_conormal,
    vertex_orders,
)
from ellipack.weights import inner_vector, outer_weights
from support import admissible_samples, coprime_pairs, sample_admissible

F = Fraction
EPS = F(1, 1000)


def test_orbifold_order():
    assert orbifold_order((-1, 0), (0, -1)) == 1
    assert orbifold_order((0, -1), (2, 3)) == 2
    assert orbifold_order((2, 3), (-1, 0)) == 3
    with pytest.raises(ValueError):
        orbifold_order((1, 2), (2, 4))


def test_affine_length():
    assert affine_length((0, 0), (7, 0)) == 7
    assert affine_length((0, 3), (5, 0)) == 1
    assert affine_length((0, 2), (4, 0)) == 2
    e = Edge((1, 1), F(2), (F(2), F(0)), (F(1, 2), F(3, 2)), 0)
    assert affine_length(e) == F(3, 2)


def test_chain_7_12_numbering_and_classes():
    chain = blowup_chain(7, 12)
    assert [e.index for e in chain.edges] == [1, 2, 5, 6, 4, 3, 0]
    slopes = [F(*e.conormal) for e in chain.edges]
    assert slopes == [F(0), F(1, 2), F(4, 7), F(7, 12), F(3, 5), F(2, 3), F(1)]
    cls = {e.index: str(e.hclass) for e in chain.edges}
    assert cls[5] == "E5 - E6"
    assert cls[4] == "E4 - E5 - E6"
    assert cls[2] == "E2 - E3 - E4 - E5"
    assert cls[0] == "L - E1 - E2 - E3"


def test_chain_1_2():
    chain = blowup_chain(1, 2)
    assert [e.conormal for e in chain.edges] == [(0, 1), (1, 2), (1, 1)]
    assert [str(e.hclass) for e in chain.edges] == ["E1 - E2", "E2", "L - E1 - E2"]
    v = inner_vector(1, 2).as_class()
    assert [v.pair(e.hclass) for e in chain.edges] == [0, 1, 0]


def test_chain_rejects():
    for bad in ((2, 4), (3, 2), (0, 1)):
        with pytest.raises(ValueError):
            blowup_chain(*bad)


def test_chain_intersection_pattern():
    for m, n in coprime_pairs(30):
        chain = blowup_chain(m, n)
        big_n = len(chain.edges) - 1
        hs = [e.hclass for e in chain.edges]
        for a, b in zip(hs, hs[1:]):
            assert a.pair(b) == 1
        for e in chain.edges:
            if e.index == big_n:
                assert e.hclass.square() == -1
            elif e.index > 0:
                assert e.hclass.square() <= -2
        # consecutive slopes strictly increase, endpoints chain up
        for a, b in zip(chain.edges, chain.edges[1:]):
            assert F(*a.conormal) < F(*b.conormal)
            assert a.end == b.start
        for e in chain.edges:
            assert e.conormal[0] * e.start[0] + e.conormal[1] * e.start[1] == e.support
            assert e.conormal[0] * e.end[0] + e.conormal[1] * e.end[1] == e.support


def test_singular_chain_terminal_orders():
    for m, n in coprime_pairs(25):
        assert sorted(singular_vertex_orders(blowup_chain(m, n))) == sorted([m, n])


def test_polygon_dump_format():
    line = blowup_chain(2, 3).dump().splitlines()[0]
    assert line == "conormal=(0,1) support=2 from=(0,2) to=(0,2) class=E1 - E2"


@pytest.mark.parametrize("pair, sizes", [
    ((2, 3), [1, 1, 1]),
    ((5, 8), [3, 3, 2, 1, 1]),
    ((1, 2), [1, 1]),
])
def test_decompose_complement_examples(pair, sizes):
    tris = decompose_complement(*pair)
    assert [t.size for t in tris] == sizes
    assert is_tiling(tris, complement_region(*pair))


@pytest.mark.parametrize("pair, sizes", [
    ((3, 5), [3, 2, 1, 1]),
    ((1, 4), [1, 1, 1, 1]),
    ((2, 3), [2, 1, 1]),
])
def test_decompose_ellipsoid_examples(pair, sizes):
    tris = decompose_ellipsoid(*pair)
    assert sorted((t.size for t in tris), reverse=True) == sizes
    assert sum(t.area for t in tris) == F(pair[0] * pair[1], 2)


def test_cut_lines_pass_through_orbifold_points():
    for m, n in coprime_pairs(30):
        for t in decompose_complement(m, n):
            corners = {(0, m), (n, 0)}
            assert corners & {tuple(p) for p in t.vertices}


def test_area_identities_to_60():
    for m, n in coprime_pairs(60):
        assert sum(t.size ** 2 for t in decompose_complement(m, n)) == n * n - m * n
        assert sum(t.size ** 2 for t in decompose_ellipsoid(m, n)) == m * n


def test_tilings_to_20():
    for m, n in coprime_pairs(20):
        inner = decompose_complement(m, n)
        assert [t.size for t in inner] == list(inner_vector(m, n).labels)
        assert all(t.is_standard() for t in inner)
        assert is_tiling(inner, complement_region(m, n))
        outer = decompose_ellipsoid(m, n)
        assert sorted((t.size for t in outer), reverse=True) == list(outer_weights(m, n).labels)
        assert all(t.is_standard() for t in outer)
        assert is_tiling(outer, moment_triangle(m, n))


def test_conormal_transform():
    assert transform_conormal((1, 1)) == (-1, 0)
    assert transform_conormal((-1, 0)) == (0, -1)
    assert transform_conormal((-7, -12)) == (12, 5)
    for m, n in coprime_pairs(20):
        chain = conormal_transform(blowup_chain(m, n))
        assert chain.pair == (n - m, n)
        for e in chain.edges:
            for p in (e.start, e.end):
                assert e.conormal[0] * p[0] + e.conormal[1] * p[1] == e.support
        f = point_transform(n)
        image = [t.mapped(f) for t in decompose_complement(m, n)]
        assert is_tiling(image, moment_triangle(n, n - m))
        assert sorted((t.size for t in image), reverse=True) == list(outer_weights(n - m, n).labels)


def test_transform_examples():
    f = point_transform(3)
    sizes = sorted(t.mapped(f).size for t in decompose_complement(2, 3))
    assert sizes == [1, 1, 1] == list(outer_weights(1, 3).labels)
    assert sorted((t.size for t in decompose_complement(7, 12)), reverse=True) == \
        list(outer_weights(5, 12).labels)


def test_pack_unit_triangles_small():
    assert pack_unit_triangles(1)[0].matrix == ((1, 0), (0, 1))
    assert pack_unit_triangles(1)[0].translation == (0, 0)
    tris = packing_triangles(pack_unit_triangles(3))
    assert [set(t.vertices) for t in tris] == [
        {(0, 0), (1, 0), (0, 1)}, {(1, 0), (2, 0), (0, 1)}, {(2, 0), (3, 0), (0, 1)}]


def test_pack_unit_triangles_to_50():
    for k in range(1, 51):
        maps = pack_unit_triangles(k)
        assert len(maps) == k
        assert all(abs(f.det) == 1 for f in maps)
        tris = packing_triangles(maps)
        region = moment_triangle(1, k)
        assert all(in_triangle(p, region) for t in tris for p in t.vertices)
        assert all(interiors_disjoint(tris[i], tris[j])
                   for i in range(k) for j in range(i + 1, k))
        assert sum(t.area for t in tris) == F(k, 2)


def test_affine_map_must_be_unimodular():
    with pytest.raises(ValueError):
        AffineLatticeMap(((2, 0), (0, 1)), (0, 0))


def test_overlap_detected():
    a = LatticeTriangle(((F(0), F(0)), (F(2), F(0)), (F(0), F(2))), F(2))
    b = LatticeTriangle(((F(1), F(0)), (F(3), F(0)), (F(1), F(2))), F(2))
    assert not interiors_disjoint(a, b)
    assert not is_tiling([a, b], moment_triangle(2, 3))


# --- perturbed chains -------------------------------------------------------

def test_zero_perturbation_not_admissible():
    pc = perturbed_chain(2, 3, [0, 0, 0, 0])
    assert not pc.admissible
    assert not pc.conditions["positive_offsets"]


def test_admissible_2_3():
    pc = perturbed_chain(2, 3, [EPS * x for x in (1, 1, -1, -2)])
    assert pc.admissible
    assert all(o == 1 for o in vertex_orders(pc.chain))


def test_uniform_perturbation_2_3_is_not_admissible():
    # eps1 keeps zero length and eps0 turns negative under a uniform shift
    pc = perturbed_chain(2, 3, [EPS] * 4)
    assert not pc.conditions["positive_lengths"]
    assert pc.edge_values[1] == 0 and pc.edge_values[0] < 0


def test_perturbed_lengths_match_classes():
    delta = sample_admissible(7, 12, random.Random(1))
    pc = perturbed_chain(7, 12, delta)
    assert pc.admissible
    big_n = 6
    for e in pc.chain.edges:
        assert e.length == pc.edge_values[e.index]
    assert pc.edge_values[big_n] == 1 + pc.delta[big_n]
    # a(E_i) is the size of the i-th cut, a different number whenever S_i is nonempty
    assert pc.cut_sizes == tuple(k + d for k, d in zip((5, 5, 2, 2, 1, 1), pc.delta[1:]))
    assert any(pc.edge_values[i] != pc.cut_sizes[i - 1] for i in range(1, big_n))


def test_wrong_length_delta():
    with pytest.raises(ValueError):
        perturbed_chain(2, 3, [EPS] * 3)


def test_scaling_keeps_admissibility():
    for m, n, delta in admissible_samples(50):
        for t in (F(1, 2), F(1, 3), F(9, 10), F(1, 17)):
            assert perturbed_chain(m, n, [t * x for x in delta]).admissible


def test_smooth_chain_vertices():
    for m, n, delta in admissible_samples(15, seed=3):
        assert set(vertex_orders(perturbed_chain(m, n, delta).chain)) == {1}
