import numpy as np
import pytest

from levelpers import (
    Cell,
    SlabBuilder,
    betti_numbers,
    build_complex,
    homology_of,
    include_level,
    induced_map,
    interlevel_complex,
    level_complex,
    rank,
    validate,
    VertexValuedMap,
)
from conftest import random_vertex_map


def test_circle_level_regular(square_circle):
    lv = level_complex(square_circle, 0.5)
    assert len(lv) == 2
    assert betti_numbers(lv, 1) == (2, 0)


def test_circle_level_critical_degenerates_to_vertices(square_circle):
    lv = level_complex(square_circle, 1.0)
    assert set(lv.cells) == {Cell((1,), 1.0, 1.0), Cell((3,), 1.0, 1.0)}


def test_octahedron_level_zero_is_equator(octahedron):
    lv = level_complex(octahedron, 0.0)
    assert len(lv.cells_of_dim(0)) == 4
    assert len(lv.cells_of_dim(1)) == 4
    assert betti_numbers(lv, 1) == (1, 1)


def test_octahedron_level_half_is_circle(octahedron):
    lv = level_complex(octahedron, 0.5)
    assert len(lv.cells_of_dim(0)) == 4  # edge crossings
    assert len(lv.cells_of_dim(1)) == 4  # triangle slices
    assert betti_numbers(lv, 1) == (1, 1)


def test_level_outside_range_is_empty(square_circle):
    assert len(level_complex(square_circle, -3.0)) == 0
    assert betti_numbers(level_complex(square_circle, 9.0), 0) == (0,)


def test_interlevel_two_arcs(square_circle):
    band = interlevel_complex(square_circle, 0.5, 1.5)
    assert betti_numbers(band, 1) == (2, 0)
    assert band.euler_characteristic() == 2


def test_interlevel_whole_circle(square_circle):
    band = interlevel_complex(square_circle, 0.0, 2.0)
    assert betti_numbers(band, 1) == (1, 1)


def test_interlevel_lower_hemisphere(octahedron):
    band = interlevel_complex(octahedron, -1.0, 0.0)
    assert betti_numbers(band, 1) == (1, 0)


def test_interlevel_rejects_reversed():
    f = VertexValuedMap(build_complex([[0, 1]]), {0: 0.0, 1: 1.0})
    with pytest.raises(ValueError):
        interlevel_complex(f, 1.0, 0.0)


def test_interlevel_at_a_point_equals_level(square_circle):
    for t in (0.0, 0.5, 1.0, 2.0):
        band = interlevel_complex(square_circle, t, t)
        lv = level_complex(square_circle, t)
        assert set(band.cells) == set(lv.cells)
        assert band.boundary == lv.boundary


def test_include_identity(square_circle):
    inc = include_level(square_circle, 1.0, 1.0, 1.0)
    assert set(inc.src.cells) == set(inc.dst.cells)


def test_include_rejects_interior_value(square_circle):
    with pytest.raises(ValueError):
        include_level(square_circle, 1.0, 0.0, 2.0)


def test_include_circle_bottom_wedge(square_circle):
    inc = include_level(square_circle, 0.5, 0.0, 0.5)
    m = induced_map(homology_of(inc.src, 0), homology_of(inc.dst, 0), inc.chain_matrix(0))
    assert rank(m) == 1  # the bottom wedge is connected


def test_include_circle_two_arcs_iso(square_circle):
    inc = include_level(square_circle, 0.5, 0.5, 1.5)
    m = induced_map(homology_of(inc.src, 0), homology_of(inc.dst, 0), inc.chain_matrix(0))
    assert m.rows == 2 and m.cols == 2
    assert rank(m) == 2


def test_homology_of_empty():
    f = VertexValuedMap(build_complex([[0]]), {0: 0.0})
    lv = level_complex(f, 5.0)
    assert all(homology_of(lv, r).betti == 0 for r in range(3))


def test_validate_reports_corrupted_cell(octahedron):
    band = interlevel_complex(octahedron, -1.0, 0.0)
    victim = next(c for c in band.cells if band.dims[c] == 2)
    dropped = set(band.boundary[victim])
    dropped.pop()
    band.boundary[victim] = frozenset(dropped)
    with pytest.raises(ValueError, match="boundary of boundary"):
        validate(band)


def test_boundary_of_slab_triangle(octahedron):
    band = interlevel_complex(octahedron, -1.0, 0.0)
    slab = Cell((0, 2, 3), -1.0, 0.0)
    assert band.dims[slab] == 2
    assert band.boundary[slab] == {
        Cell((2, 3), 0.0, 0.0),      # equator edge at the top
        Cell((0, 2), -1.0, 0.0),     # two slab edges down to the pole
        Cell((0, 3), -1.0, 0.0),
    }


def test_random_suite_structural_invariants():
    rng = np.random.default_rng(21)
    for _ in range(25):
        f = random_vertex_map(rng)
        values = sorted(set(f.values.values()))
        lo, hi = values[0], values[-1]
        builder = SlabBuilder(f)
        a = float(rng.uniform(lo, hi))
        b = float(rng.uniform(a, hi))
        for c in (builder.level(a), builder.interlevel(a, b)):
            validate(c)
            betti = betti_numbers(c)
            assert sum((-1) ** r * x for r, x in enumerate(betti)) == c.euler_characteristic()
        point_band = interlevel_complex(f, a, a)
        assert set(point_band.cells) == set(builder.level(a).cells)


def test_same_gap_levels_have_equal_betti():
    rng = np.random.default_rng(22)
    for _ in range(12):
        f = random_vertex_map(rng)
        values = sorted(set(f.values.values()))
        builder = SlabBuilder(f)
        for lo, hi in zip(values, values[1:]):
            p1 = lo + (hi - lo) * 0.25
            p2 = lo + (hi - lo) * 0.75
            assert betti_numbers(builder.level(p1), f.complex.dim) == \
                betti_numbers(builder.level(p2), f.complex.dim)


def test_refinement_independence():
    rng = np.random.default_rng(23)
    for _ in range(12):
        f = random_vertex_map(rng)
        values = sorted(set(f.values.values()))
        if len(values) < 2:
            continue
        lo, hi = values[0], values[-1]
        extra = float(rng.uniform(lo, hi))
        while extra in values or extra in (lo, hi):
            extra = float(rng.uniform(lo, hi))
        builder = SlabBuilder(f)
        plain = builder.interlevel(lo, hi)
        refined = builder.interlevel(lo, hi, extra_slices=(extra,))
        top = f.complex.dim
        assert betti_numbers(plain, top) == betti_numbers(refined, top)
        for t in (lo, hi):
            src = builder.level(t)
            for r in range(top + 1):
                ranks = []
                for band in (plain, refined):
                    inc = include_level(f, t, lo, hi, src=src, dst=band)
                    m = induced_map(homology_of(src, r), homology_of(band, r), inc.chain_matrix(r))
                    ranks.append(rank(m))
                assert ranks[0] == ranks[1]
