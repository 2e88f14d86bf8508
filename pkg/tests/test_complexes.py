"""Complexes, cell sets, cellular maps, fans, and compactifications."""

from fractions import Fraction

import pytest

from lefkit import models
from lefkit.complexes import (
    CellularMap,
    closure,
    identity_map,
    increasing_chains,
    link,
    locally_closed_set,
    open_set,
    simplicial_map,
    star,
    whole_set,
)
from lefkit.errors import PreconditionError, ValidationError
from lefkit.fans import (
    Fan,
    fan_compactify,
    fan_compactify_onepoint,
    induced_cell_map,
    map_image_check,
    restrict_fan,
)
from lefkit.linalgq import QMatrix, endo_trace, GradedComplex

F = Fraction


def line_fan():
    fan = Fan(1, "line")
    fan.add_cone("0", [])
    fan.add_cone("pos", [(1,)])
    fan.add_cone("neg", [(-1,)])
    return fan


def quadrant_fan():
    fan = Fan(2, "quad")
    fan.add_cone("0", [])
    fan.add_cone("px", [(1, 0)])
    fan.add_cone("py", [(0, 1)])
    fan.add_cone("nx", [(-1, 0)])
    fan.add_cone("ny", [(0, -1)])
    fan.add_cone("Q1", [(1, 0), (0, 1)])
    fan.add_cone("Q2", [(-1, 0), (0, 1)])
    fan.add_cone("Q3", [(-1, 0), (0, -1)])
    fan.add_cone("Q4", [(1, 0), (0, -1)])
    return fan


def octant_fan():
    fan = Fan(3, "oct")
    fan.add_cone("0", [])
    axes = {"x": (1, 0, 0), "y": (0, 1, 0), "z": (0, 0, 1)}
    for n, v in list(axes.items()):
        axes[n.upper()] = tuple(-c for c in v)
    for n, v in axes.items():
        fan.add_cone("r" + n, [v])
    pairs = []
    for a in ("x", "X"):
        for b in ("y", "Y"):
            pairs.append((a, b))
        for c in ("z", "Z"):
            pairs.append((a, c))
    for b in ("y", "Y"):
        for c in ("z", "Z"):
            pairs.append((b, c))
    for a, b in pairs:
        fan.add_cone("f%s%s" % (a, b), [axes[a], axes[b]])
    for a in ("x", "X"):
        for b in ("y", "Y"):
            for c in ("z", "Z"):
                fan.add_cone("o%s%s%s" % (a, b, c), [axes[a], axes[b], axes[c]])
    return fan


# ---------------------------------------------------------------------------
# complexes and cell sets
# ---------------------------------------------------------------------------

def test_sphere_tetra_validates_chi_two():
    s2 = models.sphere_tetra()
    s2.validate()
    assert len(s2.cells) == 14
    assert s2.euler_characteristic() == 2


def test_missigned_incidence_caught():
    cx = models.interval("bad")
    # flip one incidence sign on a fresh square to break cancellation
    sq = models.square_cell()
    sq.facets["qf"][0] = ("qb", -1)
    with pytest.raises(ValidationError) as err:
        sq.validate()
    assert "cancel" in str(err.value)
    cx.validate()  # untouched complex still fine


def test_empty_complex_ok():
    from lefkit.complexes import Complex
    Complex("empty").validate()


def test_star_closure_link_interval():
    iv = models.interval()
    st = star(iv, "a")
    assert set(st.cells) == {"a", "a-b"}
    assert st.kind == "open"
    st_edge = star(iv, "a-b")
    assert set(st_edge.cells) == {"a-b"}
    path = models.simplicial_complex([("a", "b"), ("b", "c")], "P")
    assert set(closure(path, list(star(path, "b").cells)).cells) \
        == set(path.cell_ids())
    lk = link(path, "b")
    assert set(lk.cells) == {"a", "c"}
    assert lk.kind == "closed"


def test_cell_set_kinds():
    iv = models.interval()
    with pytest.raises(ValidationError):
        open_set(iv, {"a"})
    with pytest.raises(ValidationError):
        locally_closed_set(models.square_grid(1, 1), {"g0_0", "g0_0-g1_0-g1_1"})
    strip = locally_closed_set(models.square_cell(), {"ql", "qr", "qf"})
    assert strip.chi_c() == -1


def test_increasing_chains_counts():
    iv = models.interval()
    chains = increasing_chains(iv, iv.cell_ids())
    # 3 singletons + 2 covering pairs
    assert len(chains) == 5
    tri = models.simplicial_complex([("a", "b", "c")], "T")
    chains = increasing_chains(tri, tri.cell_ids())
    # 7 cells + (6 v<e + 3 v<f + 3 e<f) + 6 v<e<f
    assert len(chains) == 7 + 12 + 6


def test_cellular_map_validation_and_fixed_cells():
    s2 = models.octahedron()
    anti = simplicial_map(s2, s2, models.octahedron_antipodal_vertex_map(),
                          name="antipodal")
    anti.validate()
    assert anti.fixed_cells() == set()
    ident = identity_map(s2)
    assert ident.fixed_cells() == set(s2.cell_ids())


def test_reflection_of_square_circle():
    circle = models.polygon(4)
    # reflection fixing p0 and p2, swapping p1 and p3
    vmap = {"p0": "p0", "p1": "p3", "p2": "p2", "p3": "p1"}
    assignment = dict(vmap)
    assignment.update({"pe0": "pe3", "pe3": "pe0", "pe1": "pe2", "pe2": "pe1"})
    signs = {c: -1 for c in ("pe0", "pe1", "pe2", "pe3")}
    signs.update({v: 1 for v in vmap})
    refl = CellularMap(circle, circle, assignment, signs, name="refl")
    refl.validate()
    assert refl.fixed_cells() == {"p0", "p2"}


def test_barycentric_subdivision_of_circle():
    circle = models.triangle_boundary()
    sd, chain_of = models.barycentric_subdivision(circle)
    sd.validate()
    assert len(sd.cells_of_dim(0)) == 6
    assert len(sd.cells_of_dim(1)) == 6
    assert sd.euler_characteristic() == 0
    # refinement cells of an edge interior: the barycenter vertex and two arcs
    edge_cells = [c for c, ch in chain_of.items() if ch[-1] == "A-B"]
    assert len(edge_cells) == 3


# ---------------------------------------------------------------------------
# fans
# ---------------------------------------------------------------------------

def test_fan_validate_and_completeness():
    fan = line_fan()
    fan.validate()
    assert fan.is_complete()
    quad = quadrant_fan()
    quad.validate()
    assert quad.is_complete()
    half = Fan(2, "half")
    half.add_cone("0", [])
    half.add_cone("px", [(1, 0)])
    half.add_cone("py", [(0, 1)])
    half.add_cone("Q1", [(1, 0), (0, 1)])
    half.validate()
    assert not half.is_complete()


def test_fan_rejects_nonsalient():
    bad = Fan(2, "bad")
    bad.add_cone("0", [])
    bad.add_cone("lineish", [(1, 0), (-1, 0), (0, 1)])
    with pytest.raises(ValidationError):
        bad.validate()


def test_fan_compactify_line():
    fan = line_fan()
    ball, cone_cell = fan_compactify(fan)
    assert len(ball.cells) == 5
    assert ball.euler_characteristic() == 1
    gc = GradedComplex(
        {0: len(ball.cells_of_dim(0)), 1: len(ball.cells_of_dim(1))},
        {0: ball.boundary_matrix(1).transpose()})
    assert gc.cohomology_dims() == {0: 1}  # contractible ball


def test_fan_compactify_quadrant_17_cells():
    ball, _ = fan_compactify(quadrant_fan())
    assert len(ball.cells) == 17
    assert ball.euler_characteristic() == 1
    dims = {k: len(ball.cells_of_dim(k)) for k in (0, 1, 2)}
    assert dims == {0: 5, 1: 8, 2: 4}


def test_fan_compactify_point():
    fan = Fan(0, "pt")
    fan.add_cone("0", [])
    ball, cone_cell = fan_compactify(fan)
    assert len(ball.cells) == 1
    sphere, _ = fan_compactify_onepoint(fan)
    assert len(sphere.cells) == 1


def test_fan_compactify_octants():
    ball, _ = fan_compactify(octant_fan())
    ball.validate()
    assert ball.euler_characteristic() == 1
    sphere, _ = fan_compactify_onepoint(octant_fan())
    sphere.validate()
    # S^3: chi = 0
    assert sphere.euler_characteristic() == 0


def test_fan_onepoint_circle():
    circle, _ = fan_compactify_onepoint(line_fan())
    circle.validate()
    assert len(circle.cells) == 4
    assert circle.euler_characteristic() == 0


def test_incomplete_fan_rejected():
    half = Fan(1, "half")
    half.add_cone("0", [])
    half.add_cone("pos", [(1,)])
    with pytest.raises(PreconditionError):
        fan_compactify(half)


def test_map_image_check_scaling_and_rotation():
    quad = quadrant_fan()
    double = map_image_check(QMatrix.from_rows([[2, 0], [0, 2]]), quad)
    assert all(double.permutation[c] == c for c in quad.cone_ids())
    assert all(s == 1 for s in double.invariant_signs.values())

    # rotation by pi/2 composed with scaling 2: 4-cycles on rays/quadrants
    rot = map_image_check(QMatrix.from_rows([[0, -2], [2, 0]]), quad)
    assert rot.permutation["px"] == "py"
    assert rot.permutation["Q1"] == "Q2"
    assert list(rot.invariant_signs) == ["0"]

    diag = map_image_check(QMatrix.from_rows([[2, 0], [0, F(1, 2)]]), quad)
    assert all(diag.permutation[c] == c for c in quad.cone_ids())

    with pytest.raises(PreconditionError):
        map_image_check(QMatrix.from_rows([[1, 1], [0, 1]]), quad)


def test_induced_cell_map_is_cellular():
    quad = quadrant_fan()
    ball, cone_cell = fan_compactify(quad)
    rot = map_image_check(QMatrix.from_rows([[0, -2], [2, 0]]), quad)
    cell_map = induced_cell_map(quad, rot, ball, cone_cell, True)
    assert cell_map.fixed_cells() == {"origin"}
    sphere, cc2 = fan_compactify_onepoint(quad)
    cell_map2 = induced_cell_map(quad, rot, sphere, cc2, False)
    # Lefschetz number of a rotation of S^2 is 2 (degree +1)
    chain = cell_map2.chain_matrices()
    gc = GradedComplex(
        {k: len(sphere.cells_of_dim(k)) for k in (0, 1, 2)},
        {0: sphere.boundary_matrix(1).transpose(),
         1: sphere.boundary_matrix(2).transpose()})
    endo = {k: chain[k].transpose() for k in (0, 1, 2)}
    rep = endo_trace(gc, endo)
    assert rep.alternating_sum == 2


def test_restrict_fan_to_axis():
    quad = quadrant_fan()
    axis = QMatrix.from_columns([[F(1), F(0)]])
    sub, idmap = restrict_fan(quad, axis)
    assert set(idmap) == {"0", "px", "nx"}
    assert sub.is_complete()
