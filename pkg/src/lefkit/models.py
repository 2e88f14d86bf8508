"""Builders for the standard complexes used by scenarios and tests."""

from __future__ import annotations

from fractions import Fraction
from itertools import combinations

from .complexes import Complex


def simplex_id(verts):
    return "-".join(verts)


def simplicial_complex(maximal, name="X", coords=None):
    """Complex generated by maximal simplices (iterables of vertex names).

    Every face is materialized; cell ids are sorted vertex names joined by
    '-'; incidence signs are the usual (-1)^i for dropping the i-th vertex.
    Optional ``coords`` maps vertex names to rational coordinate tuples.
    """
    simplices = set()
    for m in maximal:
        verts = tuple(sorted(m))
        if len(set(verts)) != len(verts):
            raise ValueError("degenerate simplex %r" % (m,))
        for k in range(1, len(verts) + 1):
            for sub in combinations(verts, k):
                simplices.add(sub)
    cx = Complex(name)
    for verts in sorted(simplices, key=lambda v: (len(v), v)):
        faces = []
        if len(verts) > 1:
            for i in range(len(verts)):
                sub = verts[:i] + verts[i + 1:]
                faces.append((simplex_id(sub), (-1) ** i))
        cx.add_cell(simplex_id(verts), len(verts) - 1, faces)
    if coords:
        for v, pt in coords.items():
            cx.set_coords(v, pt)
    return cx


def interval(name="I"):
    """Closed interval: 2 vertices, 1 edge, realized as [0, 1]."""
    return simplicial_complex([("a", "b")], name,
                              coords={"a": (0,), "b": (1,)})


def circle_two_cell(name="S1"):
    """Circle with 2 vertices and 2 edges (the loop-free regular model)."""
    cx = Complex(name)
    cx.add_cell("a", 0)
    cx.add_cell("b", 0)
    cx.add_cell("e", 1, [("a", -1), ("b", 1)])
    cx.add_cell("f", 1, [("b", -1), ("a", 1)])
    return cx


def polygon(n, name="S1", prefix="p"):
    """Circle as an n-gon (n >= 3), realized on rational points.

    Rational points on the unit circle via the tangent half-angle map;
    only per-vertex coordinate values matter to the Morse machinery.
    """
    if n < 3:
        raise ValueError("polygon needs at least 3 vertices")
    cx = Complex(name)
    verts = ["%s%d" % (prefix, i) for i in range(n)]
    for v in verts:
        cx.add_cell(v, 0)
    for i in range(n):
        a, b = verts[i], verts[(i + 1) % n]
        cx.add_cell("%se%d" % (prefix, i), 1, [(a, -1), (b, 1)])
    for i in range(n):
        t = Fraction(2 * i + 1 - n, n)  # n distinct slopes in (-1, 1)
        denom = 1 + t * t
        cx.set_coords(verts[i], ((1 - t * t) / denom, 2 * t / denom))
    return cx


def triangle_boundary(name="S1"):
    """Circle as the boundary of a triangle, realized."""
    return simplicial_complex([("A", "B"), ("B", "C"), ("A", "C")], name,
                              coords={"A": (0, 0), "B": (1, 0), "C": (0, 1)})


def simplex_boundary(n, name=None):
    """Boundary of the n-simplex: an (n-1)-sphere."""
    verts = ["s%d" % i for i in range(n + 1)]
    maximal = list(combinations(verts, n))
    return simplicial_complex(maximal, name or ("S%d" % (n - 1)))


def sphere_tetra(name="S2"):
    """2-sphere as the boundary of a 3-simplex (14 cells)."""
    return simplex_boundary(3, name)


def octahedron(name="S2"):
    """2-sphere as the octahedron boundary; antipodal map is cellular.

    Vertices xp/xm etc. at +-e_i, realized in Q^3.
    """
    verts = {"xp": (1, 0, 0), "xm": (-1, 0, 0),
             "yp": (0, 1, 0), "ym": (0, -1, 0),
             "zp": (0, 0, 1), "zm": (0, 0, -1)}
    maximal = []
    for x in ("xp", "xm"):
        for y in ("yp", "ym"):
            for z in ("zp", "zm"):
                maximal.append((x, y, z))
    return simplicial_complex(maximal, name, coords=verts)


def octahedron_antipodal_vertex_map():
    return {"xp": "xm", "xm": "xp", "yp": "ym", "ym": "yp",
            "zp": "zm", "zm": "zp"}


def square_grid(nx, ny, name="R"):
    """Triangulated rectangle [0,nx] x [0,ny], realized."""
    maximal = []
    coords = {}
    for i in range(nx + 1):
        for j in range(ny + 1):
            coords["g%d_%d" % (i, j)] = (i, j)
    for i in range(nx):
        for j in range(ny):
            a = "g%d_%d" % (i, j)
            b = "g%d_%d" % (i + 1, j)
            c = "g%d_%d" % (i, j + 1)
            d = "g%d_%d" % (i + 1, j + 1)
            maximal.append((a, b, d))
            maximal.append((a, c, d))
    return simplicial_complex(maximal, name, coords=coords)


def square_cell(name="Q"):
    """Unit square as a single (non-simplicial) 2-cell with 4 edges."""
    cx = Complex(name)
    for v, pt in (("q00", (0, 0)), ("q10", (1, 0)),
                  ("q01", (0, 1)), ("q11", (1, 1))):
        cx.add_cell(v, 0)
        cx.set_coords(v, pt)
    cx.add_cell("qb", 1, [("q00", -1), ("q10", 1)])
    cx.add_cell("qt", 1, [("q01", -1), ("q11", 1)])
    cx.add_cell("ql", 1, [("q00", -1), ("q01", 1)])
    cx.add_cell("qr", 1, [("q10", -1), ("q11", 1)])
    cx.add_cell("qf", 2, [("qb", 1), ("qr", 1), ("qt", -1), ("ql", -1)])
    return cx


def apex_triangle_fan(k, name="W", prefix="w"):
    """k closed triangles glued along a single apex vertex, realized.

    Triangle i has apex N and base vertices a_i, b_i; this is the cellular
    model of k strips joined at a pole.
    """
    maximal = []
    coords = {"%sN" % prefix: (0, 0)}
    for i in range(k):
        a, b = "%sa%d" % (prefix, i), "%sb%d" % (prefix, i)
        maximal.append(("%sN" % prefix, a, b))
        coords[a] = (2 * i + 1, 1)
        coords[b] = (2 * i + 2, 1)
    return simplicial_complex(maximal, name, coords=coords)


def disjoint_union(complexes, name="U"):
    """Disjoint union; cell ids are prefixed by each piece's index."""
    out = Complex(name)
    renames = []
    for idx, cx in enumerate(complexes):
        ren = {}
        for cid in cx.cell_ids():
            cell = cx.cells[cid]
            new = "c%d_%s" % (idx, cid)
            ren[cid] = new
            out.add_cell(new, cell.dim,
                         [(ren[f], s) for f, s in cx.facets[cid]],
                         label=cell.label)
            if cid in cx.coords:
                out.set_coords(new, cx.coords[cid])
        renames.append(ren)
    return out, renames


def barycentric_subdivision(cx, name=None):
    """Order complex of the face poset: vertices are barycenters of cells,
    simplices are strictly increasing chains (of any step size).  Realized
    whenever cx is.

    Returns (subdivision, chain_of) where chain_of maps each new cell id to
    its chain of original cell ids (increasing dimension).
    """
    from .complexes import increasing_chains

    chains = increasing_chains(cx, cx.cell_ids())
    vert_name = {}
    sd = Complex(name or (cx.name + "_sd"))
    realized = all(v in cx.coords for v in cx.cells_of_dim(0))
    for ch in chains:
        cid = "b." + ".".join(ch)
        if len(ch) == 1:
            vert_name[ch[0]] = cid
        faces = []
        if len(ch) > 1:
            for i in range(len(ch)):
                sub = ch[:i] + ch[i + 1:]
                faces.append(("b." + ".".join(sub), (-1) ** i))
        sd.add_cell(cid, len(ch) - 1, faces)
        if len(ch) == 1 and realized:
            sd.set_coords(cid, cx.barycenter(ch[0]))
    chain_of = {"b." + ".".join(ch): ch for ch in chains}
    return sd, chain_of
