"""Cellular sheaf cohomology, induced endomorphisms, local cohomology."""

from fractions import Fraction
import random

import pytest

from lefkit import models
from lefkit.complexes import (
    identity_map,
    locally_closed_set,
    open_set,
    set_difference,
    simplicial_map,
    star,
    whole_set,
)
from lefkit.errors import PreconditionError, ValidationError
from lefkit.linalgq import QMatrix, endo_trace
from lefkit.sheaves import (
    CellSheaf,
    SheafHomOverMap,
    constant_sheaf,
    direct_sum_sheaf,
    identity_hom,
    indicator_sheaf,
    induced_endo,
    local_cohomology,
    natural_hom,
    ordinary_complex,
    ordinary_endo,
    sections_complex,
    sections_trace,
)

F = Fraction


def test_validate_sheaf_constant_and_zero():
    s2 = models.sphere_tetra()
    constant_sheaf(s2).validate()
    zero = CellSheaf(s2, "0")
    zero.validate()


def test_validate_sheaf_bad_diamond():
    sq = models.square_grid(1, 1)
    sheaf = constant_sheaf(sq, 2)
    # scale one generization into a non-commuting diamond
    tri = sq.cells_of_dim(2)[0]
    edge = sq.faces(tri)[0]
    sheaf.set_gen(edge, tri, QMatrix.from_rows([[1, 1], [0, 1]]))
    with pytest.raises(ValidationError) as err:
        sheaf.validate()
    assert "diamond" in str(err.value)


def test_sections_constant_sphere():
    s2 = models.sphere_tetra()
    model = sections_complex(constant_sheaf(s2))
    dims, _ = _cohomology_dims(model)
    assert dims == {0: 1, 2: 1}


def _cohomology_dims(model):
    from lefkit.linalgq import cohomology
    return cohomology(model.complex)


def test_sections_open_edge_is_compact_supports():
    iv = models.interval()
    sheaf = constant_sheaf(iv)
    inner = open_set(iv, {"a-b"})
    model = sections_complex(sheaf, inner)
    dims, _ = _cohomology_dims(model)
    assert dims == {1: 1}


def test_sections_strip_in_square():
    sq = models.square_cell()
    strip = locally_closed_set(sq, {"ql", "qr", "qf"})
    model = sections_complex(constant_sheaf(sq), strip)
    dims, _ = _cohomology_dims(model)
    assert dims == {1: 1}
    assert strip.chi_c() == -1


def test_global_trace_identity_sphere():
    s2 = models.sphere_tetra()
    sheaf = constant_sheaf(s2)
    report, _ = sections_trace(sheaf, identity_hom(sheaf))
    assert report.alternating_sum == 2


def test_global_trace_antipodal_octahedron():
    s2 = models.octahedron()
    sheaf = constant_sheaf(s2)
    anti = simplicial_map(s2, s2, models.octahedron_antipodal_vertex_map())
    anti.validate()
    hom = natural_hom(anti, sheaf)
    hom.validate()
    report, _ = sections_trace(sheaf, hom)
    # oracle: no cell is fixed, so the cochain trace vanishes degreewise
    assert all(t == 0 for t in report.cochain_traces.values())
    assert report.alternating_sum == 0


def test_global_trace_circle_reflection():
    tri = models.triangle_boundary()
    refl = simplicial_map(tri, tri, {"A": "A", "B": "C", "C": "B"})
    refl.validate()
    sheaf = constant_sheaf(tri)
    hom = natural_hom(refl, sheaf)
    hom.validate()
    report, _ = sections_trace(sheaf, hom)
    # cochain oracle: fixed cells are the vertex A and the edge B-C
    # (flipped, sign -1): trace = 1 + (-1)*(-1) = 2
    assert report.alternating_sum == 2


def test_naturality_validation_catches_violation():
    iv = models.interval()
    sheaf = constant_sheaf(iv)
    hom = identity_hom(sheaf)
    hom.set_comp("a", QMatrix.from_rows([[2]]))
    with pytest.raises(ValidationError):
        hom.validate()


def test_support_condition_open_sets():
    # phi collapsing the interval to vertex a; O = star(b) has
    # phi^{-1}(O) empty, fine; O = {edge} open with image outside:
    iv = models.interval()
    collapse = simplicial_map(iv, iv, {"a": "a", "b": "a"})
    sheaf = constant_sheaf(iv)
    hom = natural_hom(collapse, sheaf)
    inner = open_set(iv, {"a-b"})
    endo = induced_endo(sheaf, hom, inner)
    assert all(m.is_zero() for m in endo.values())
    # an open set violating phi^{-1}(O) subset O
    bad = open_set(iv, {"a", "a-b"})
    with pytest.raises(PreconditionError):
        induced_endo(sheaf, hom, bad)


def test_ordinary_complex_star_and_full():
    circle = models.circle_two_cell()
    sheaf = constant_sheaf(circle)
    st = star(circle, "a")
    model = ordinary_complex(sheaf, st)
    dims, _ = _cohomology_dims(model)
    assert dims == {0: 1}
    full = open_set(circle, circle.cell_ids())
    dims, _ = _cohomology_dims(ordinary_complex(sheaf, full))
    assert dims == {0: 1, 1: 1}


def test_ordinary_vs_compact_on_open_interval():
    iv = models.interval()
    sheaf = constant_sheaf(iv)
    inner = open_set(iv, {"a-b"})
    ordinary = ordinary_complex(sheaf, inner)
    dims, _ = _cohomology_dims(ordinary)
    assert dims == {0: 1}  # RGamma of a contractible open
    compact = sections_complex(sheaf, inner)
    dims_c, _ = _cohomology_dims(compact)
    assert dims_c == {1: 1}  # compact supports differ


def test_local_cohomology_point_in_circle():
    circle = models.circle_two_cell()
    sheaf = constant_sheaf(circle)
    u = star(circle, "a")
    z = locally_closed_set(circle, {"a"})
    cone, _ = local_cohomology(sheaf, z, u)
    from lefkit.linalgq import cohomology
    dims, _ = cohomology(cone)
    assert dims == {1: 1}


def test_local_cohomology_z_equals_u_and_empty():
    circle = models.circle_two_cell()
    sheaf = constant_sheaf(circle)
    full = open_set(circle, circle.cell_ids())
    cone, _ = local_cohomology(sheaf, whole_set(circle), full)
    from lefkit.linalgq import cohomology
    dims, _ = cohomology(cone)
    assert dims == {0: 1, 1: 1}  # = RGamma(S^1)
    empty = locally_closed_set(circle, set())
    cone2, _ = local_cohomology(sheaf, empty, full)
    dims2, _ = cohomology(cone2)
    assert dims2 == {}


def test_local_cohomology_rejects_nonclosed_z():
    circle = models.circle_two_cell()
    sheaf = constant_sheaf(circle)
    full = open_set(circle, circle.cell_ids())
    z = locally_closed_set(circle, {"e"})
    with pytest.raises(PreconditionError):
        local_cohomology(sheaf, z, full)


def _random_indicator_stack(cx, rng, max_summands=3):
    """Direct sum of indicator sheaves of random locally closed sets."""
    from lefkit.complexes import CellSet, LOCALLY_CLOSED
    cells = cx.cell_ids()
    summands = []
    for _ in range(rng.randint(1, max_summands)):
        seed_cells = rng.sample(cells, k=min(len(cells),
                                             rng.randint(1, 3)))
        closed = cx.closure_of(seed_cells)
        drop = cx.closure_of(rng.sample(cells, k=1)) & closed
        locally_closed = closed - drop if drop != closed else closed
        if not locally_closed:
            continue
        summands.append(indicator_sheaf(
            CellSet(cx, frozenset(locally_closed), LOCALLY_CLOSED)))
    if not summands:
        summands = [constant_sheaf(cx)]
    return direct_sum_sheaf(cx, summands)


def test_additivity_of_traces_over_decomposition():
    # tr over S = tr over Z + tr over S-Z for random sheaves, exact
    rng = random.Random(11)
    cx = models.square_grid(2, 1)
    for _ in range(10):
        sheaf = _random_indicator_stack(cx, rng)
        sheaf.validate()
        hom = identity_hom(sheaf)
        s = whole_set(cx)
        z_cells = cx.closure_of(rng.sample(cx.cell_ids(), k=2))
        from lefkit.complexes import CellSet
        z = CellSet(cx, frozenset(z_cells), "closed")
        rest = set_difference(s, z_cells)
        t_s, _ = sections_trace(sheaf, hom, s)
        t_z, _ = sections_trace(sheaf, hom, z)
        t_r, _ = sections_trace(sheaf, hom, rest)
        assert t_s.alternating_sum == t_z.alternating_sum + t_r.alternating_sum


def test_sections_dims_invariant_under_relabeling():
    s2a = models.sphere_tetra("A")
    s2b = models.simplicial_complex(
        [tuple(sorted(("w%d" % i for i in range(4) if i != j)))
         for j in range(4)], "B")
    da, _ = _cohomology_dims(sections_complex(constant_sheaf(s2a)))
    db, _ = _cohomology_dims(sections_complex(constant_sheaf(s2b)))
    assert da == db
