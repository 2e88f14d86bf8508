"""Rational polyhedral fans and their cell-complex compactifications.

Cones are given by rational ray generators (canonicalized to primitive
integer vectors).  Faces are computed from supporting hyperplanes, fan
completeness is checked by the boundary criterion, and two compact models
are built from a complete fan:

* ``fan_compactify``: the closed ball (each cone contributes its relative
  interior as an open cell plus a boundary cell at infinity), and
* ``fan_compactify_onepoint``: the sphere (one extra vertex at infinity).

All orientation and incidence signs are exact determinant comparisons in
cone coordinates.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from math import gcd

from .complexes import Complex, CellularMap
from .errors import PreconditionError, ValidationError
from .linalgq import QMatrix


def primitive(vec):
    """Scale a rational vector to a primitive integer vector, same ray."""
    vec = [Fraction(v) for v in vec]
    if all(v == 0 for v in vec):
        return tuple(Fraction(0) for _ in vec)
    denom = 1
    for v in vec:
        denom = denom * v.denominator // gcd(denom, v.denominator)
    ints = [int(v * denom) for v in vec]
    g = 0
    for v in ints:
        g = gcd(g, abs(v))
    return tuple(Fraction(v, g) for v in ints)


@dataclass
class Cone:
    cid: str
    rays: tuple  # tuple of primitive generator tuples

    @property
    def dim(self):
        return QMatrix.from_rows([list(r) for r in self.rays]).rank() \
            if self.rays else 0

    def span_basis(self):
        """Columns: a maximal independent subset of the generators."""
        ambient = len(self.rays[0]) if self.rays else 0
        cols = []
        for r in self.rays:
            cand = QMatrix.from_columns([list(c) for c in cols] + [list(r)],
                                        rows=ambient)
            if cand.rank() > len(cols):
                cols.append(r)
        return QMatrix.from_columns([list(c) for c in cols], rows=ambient)

    def interior_point(self):
        if not self.rays:
            raise PreconditionError("origin cone has no interior direction")
        n = len(self.rays[0])
        return tuple(sum(r[i] for r in self.rays) for i in range(n))


class Fan:
    """Finite fan of salient rational cones, closed under faces."""

    def __init__(self, ambient_dim, name="Sigma"):
        self.name = name
        self.ambient_dim = ambient_dim
        self.cones = {}
        self._order = []
        self._facets = None

    def add_cone(self, cid, rays):
        if cid in self.cones:
            raise ValidationError("duplicate cone id %r" % cid)
        prim = tuple(primitive(r) for r in rays)
        for r in prim:
            if len(r) != self.ambient_dim:
                raise ValidationError("ray %r has wrong dimension" % (r,))
            if all(c == 0 for c in r):
                raise ValidationError("zero ray in cone %r" % cid)
        self.cones[cid] = Cone(cid, prim)
        self._order.append(cid)
        self._facets = None
        return cid

    def cone_ids(self):
        return list(self._order)

    def cone(self, cid):
        return self.cones[cid]

    def dim(self, cid):
        return self.cones[cid].dim

    def origin_id(self):
        for cid in self._order:
            if not self.cones[cid].rays:
                return cid
        raise ValidationError("fan has no origin cone")

    def cones_of_dim(self, d):
        return [c for c in self._order if self.dim(c) == d]

    # -- geometry ----------------------------------------------------------

    def _span_coords(self, cone):
        basis = cone.span_basis()
        coords = [basis.solve(QMatrix.from_columns([list(r)])).column(0)
                  for r in cone.rays]
        return basis, coords

    def facet_data(self, cid):
        """Facets of a cone: list of (normal in span coords, ray subset).

        Normals are oriented to be >= 0 on the cone.  Cached per fan.
        """
        if self._facets is None:
            self._facets = {}
        if cid in self._facets:
            return self._facets[cid]
        cone = self.cones[cid]
        d = cone.dim
        out = []
        if d > 0:
            basis, coords = self._span_coords(cone)
            seen = set()
            for subset in combinations(range(len(cone.rays)), d - 1):
                sub = QMatrix.from_rows([coords[i] for i in subset]) \
                    if subset else QMatrix.zeros(0, d)
                ker = sub.kernel_basis()
                if ker.cols != 1:
                    continue
                normal = tuple(ker.column(0))
                vals = [_dot(normal, c) for c in coords]
                if all(v >= 0 for v in vals):
                    pass
                elif all(v <= 0 for v in vals):
                    normal = tuple(-x for x in normal)
                    vals = [-v for v in vals]
                else:
                    continue
                rays_on = tuple(sorted(i for i, v in enumerate(vals) if v == 0))
                key = primitive(normal)
                if key in seen:
                    continue
                seen.add(key)
                out.append((key, rays_on))
        self._facets[cid] = out
        return out

    def is_salient(self, cid):
        cone = self.cones[cid]
        if cone.dim == 0:
            return True
        normals = [n for n, _ in self.facet_data(cid)]
        if not normals:
            return cone.dim == 0
        return QMatrix.from_rows([list(n) for n in normals]).rank() == cone.dim

    def contains_point(self, cid, point):
        """Exact membership of a rational point in the closed cone."""
        cone = self.cones[cid]
        point = [Fraction(p) for p in point]
        if all(p == 0 for p in point):
            return True
        if cone.dim == 0:
            return False
        basis = cone.span_basis()
        try:
            coords = basis.solve(QMatrix.from_columns([point])).column(0)
        except PreconditionError:
            return False  # not in the span
        return all(_dot(n, coords) >= 0 for n, _ in self.facet_data(cid))

    def cone_equals(self, cid, rays):
        """Does the cone equal the cone generated by the given rays?"""
        cone = self.cones[cid]
        other = Cone("_", tuple(primitive(r) for r in rays))
        if cone.dim != other.dim:
            return False
        tmp = Fan(self.ambient_dim)
        tmp.cones["_"] = other
        tmp._order.append("_")
        return (all(self.contains_point(cid, r) for r in other.rays)
                and all(tmp.contains_point("_", r) for r in cone.rays))

    def find_cone_of_rays(self, rays):
        """The fan cone equal to cone(rays), or None."""
        rays = tuple(primitive(r) for r in rays)
        d = QMatrix.from_rows([list(r) for r in rays]).rank() if rays else 0
        for cid in self.cones_of_dim(d):
            if self.cone_equals(cid, rays):
                return cid
        return None

    def face_ids(self, cid):
        """Facet cone ids of a cone (codimension one faces)."""
        cone = self.cones[cid]
        if cone.dim == 0:
            return []
        out = []
        for _, rays_on in self.facet_data(cid):
            sub = tuple(cone.rays[i] for i in rays_on)
            fid = self.find_cone_of_rays(sub)
            if fid is None:
                raise ValidationError(
                    "face of cone %r (rays %r) is missing from the fan"
                    % (cid, sub))
            out.append(fid)
        return sorted(set(out))

    def validate(self):
        ids = set(self._order)
        origin = [c for c in self._order if not self.cones[c].rays]
        if len(origin) != 1:
            raise ValidationError("fan must contain exactly one origin cone")
        for cid in self._order:
            if not self.is_salient(cid):
                raise ValidationError("cone %r is not salient" % cid)
            self.face_ids(cid)  # raises when a face is absent
        # distinct cones must really be distinct
        for d in range(self.ambient_dim + 1):
            cones = self.cones_of_dim(d)
            for a, b in combinations(cones, 2):
                if self.cone_equals(a, self.cones[b].rays):
                    raise ValidationError("cones %r and %r coincide" % (a, b))
        assert ids == set(self.cones)
        return self

    def is_complete(self):
        """Boundary criterion: in ambient dim m, at least one m-cone, every
        cone is a face of an m-cone, and every (m-1)-cone is a facet of
        exactly two m-cones."""
        m = self.ambient_dim
        if m == 0:
            return len(self._order) == 1
        top = self.cones_of_dim(m)
        if not top:
            return False
        facet_count = {c: 0 for c in self.cones_of_dim(m - 1)}
        covered = set(top)
        for cid in top:
            for fid in self.face_ids(cid):
                facet_count[fid] = facet_count.get(fid, 0) + 1
        if any(n != 2 for n in facet_count.values()):
            return False
        # descend: every cone a face of some top cone
        reach = set(top)
        frontier = list(top)
        while frontier:
            nxt = []
            for cid in frontier:
                for fid in self.face_ids(cid):
                    if fid not in reach:
                        reach.add(fid)
                        nxt.append(fid)
            frontier = nxt
        return reach == set(self._order)


def _dot(a, b):
    return sum((Fraction(x) * Fraction(y) for x, y in zip(a, b)), Fraction(0))


# ---------------------------------------------------------------------------
# linear maps against fans
# ---------------------------------------------------------------------------

@dataclass
class ConeMapData:
    permutation: dict       # cone id -> image cone id
    span_signs: dict        # cone id -> sign of det(psi : span -> image span)
    invariant_signs: dict   # invariant cone id -> sgn det(psi | span)


def map_image_check(psi, fan):
    """Check that an invertible matrix maps every cone onto a fan cone.

    Returns ConeMapData with the induced permutation, per-cone orientation
    signs relative to the chosen span bases, and per-invariant-cone
    determinant signs.  Raises PreconditionError naming the first cone
    whose image is not a cone of the fan.
    """
    if psi.det() == 0:
        raise PreconditionError("fan map must be invertible")
    perm = {}
    span_signs = {}
    inv_signs = {}
    for cid in fan.cone_ids():
        cone = fan.cones[cid]
        if not cone.rays:
            perm[cid] = cid
            span_signs[cid] = 1
            inv_signs[cid] = 1
            continue
        image_rays = [psi.mul_vec(list(r)) for r in cone.rays]
        target = fan.find_cone_of_rays(image_rays)
        if target is None:
            raise PreconditionError(
                "image of cone %r is not a cone of the fan" % cid)
        perm[cid] = target
        basis_src = cone.span_basis()
        basis_tgt = fan.cones[target].span_basis()
        transported = basis_tgt.solve(psi @ basis_src)
        sign = 1 if transported.det() > 0 else -1
        span_signs[cid] = sign
        if target == cid:
            inv_signs[cid] = sign
    values = sorted(perm.values())
    if values != sorted(perm):
        raise PreconditionError("cone images are not a permutation")
    return ConeMapData(perm, span_signs, inv_signs)


# ---------------------------------------------------------------------------
# compactifications
# ---------------------------------------------------------------------------

def _orientation_data(fan, cid):
    """(span basis B, interior point p, complement C with det(p|C) > 0)."""
    cone = fan.cones[cid]
    basis = cone.span_basis()
    p = cone.interior_point()
    d = cone.dim
    p_coords = basis.solve(QMatrix.from_columns([list(p)])).column(0)
    # complete p to a basis of span coordinates, then fix the sign
    cols = [p_coords]
    for j in range(d):
        unit = [Fraction(0)] * d
        unit[j] = Fraction(1)
        cand = QMatrix.from_columns(cols + [unit])
        if cand.rank() > len(cols):
            cols.append(unit)
    comp = QMatrix.from_columns(cols)
    if comp.det() < 0:
        cols[-1] = [-x for x in cols[-1]]
    return basis, p_coords, cols[1:]


def interior_cell(cid):
    return "c.%s" % cid


def infinity_cell(cid):
    return "inf.%s" % cid


CENTER = "origin"
INFINITY = "vinf"


def fan_compactify(fan, name=None):
    """Compactify a complete fan to a regular complex modeling the closed
    ball: each d-cone (d >= 1) contributes an open d-cell (its relative
    interior) and a (d-1)-cell at infinity; the origin cone contributes
    the center vertex.

    Returns (complex, cone_to_interior_cell_dict).
    """
    if not fan.is_complete():
        raise PreconditionError("fan %s is not complete" % fan.name)
    cx = Complex(name or (fan.name + "_ball"))
    cx.add_cell(CENTER, 0, label=fan.origin_id())
    cone_cell = {fan.origin_id(): CENTER}
    data = {}
    for cid in fan.cone_ids():
        if fan.cones[cid].rays:
            data[cid] = _orientation_data(fan, cid)
    order = sorted((c for c in fan.cone_ids() if fan.cones[c].rays),
                   key=lambda c: (fan.dim(c), c))
    for cid in order:
        d = fan.dim(cid)
        faces_int = []
        faces_inf = []
        for fid in fan.face_ids(cid):
            if not fan.cones[fid].rays:
                faces_int.append((CENTER, _sign_c_to_c(fan, data, cid, fid)))
            else:
                faces_int.append((interior_cell(fid),
                                  _sign_c_to_c(fan, data, cid, fid)))
                faces_inf.append((infinity_cell(fid),
                                  _sign_b_to_b(fan, data, cid, fid)))
        cx.add_cell(infinity_cell(cid), d - 1, faces_inf, label=cid)
        cx.add_cell(interior_cell(cid), d,
                    faces_int + [(infinity_cell(cid), 1)], label=cid)
        cone_cell[cid] = interior_cell(cid)
    cx.validate()
    return cx, cone_cell


def fan_compactify_onepoint(fan, name=None):
    """One-point compactification of a complete fan's ambient space: the
    sphere model with a single vertex at infinity.

    Returns (complex, cone_to_interior_cell_dict).
    """
    if not fan.is_complete():
        raise PreconditionError("fan %s is not complete" % fan.name)
    cx = Complex(name or (fan.name + "_sphere"))
    cx.add_cell(CENTER, 0, label=fan.origin_id())
    cone_cell = {fan.origin_id(): CENTER}
    if fan.ambient_dim == 0:
        return cx, cone_cell
    cx.add_cell(INFINITY, 0)
    data = {}
    for cid in fan.cone_ids():
        if fan.cones[cid].rays:
            data[cid] = _orientation_data(fan, cid)
    order = sorted((c for c in fan.cone_ids() if fan.cones[c].rays),
                   key=lambda c: (fan.dim(c), c))
    for cid in order:
        d = fan.dim(cid)
        faces = []
        for fid in fan.face_ids(cid):
            if not fan.cones[fid].rays:
                faces.append((CENTER, _sign_c_to_c(fan, data, cid, fid)))
            else:
                faces.append((interior_cell(fid),
                              _sign_c_to_c(fan, data, cid, fid)))
        if d == 1:
            faces.append((INFINITY, 1))
        cx.add_cell(interior_cell(cid), d, faces, label=cid)
        cone_cell[cid] = interior_cell(cid)
    cx.validate()
    return cx, cone_cell


def _sign_c_to_c(fan, data, cid, fid):
    """Incidence sign of c(fid) in the boundary of c(cid): compare the
    outward-first frame (-p(cid), B(fid)) against B(cid)."""
    basis, p_coords, _ = data[cid]
    cols = [[-x for x in p_coords]]
    if fan.cones[fid].rays:
        fbasis = data[fid][0]
        for col in fbasis.columns():
            cols.append(basis.solve(QMatrix.from_columns([col])).column(0))
    det = QMatrix.from_columns(cols).det()
    assert det != 0
    return 1 if det > 0 else -1


def _sign_b_to_b(fan, data, cid, fid):
    """Incidence sign of inf(fid) in the boundary of inf(cid): compare
    (p(fid), -p(cid), C(fid)) against B(cid), quotienting the radial
    direction p(fid)."""
    basis, p_coords, _ = data[cid]
    fbasis, fp_coords, fcomp = data[fid]

    def to_cid(col_in_f):
        amb = fbasis @ QMatrix.from_columns([col_in_f])
        return basis.solve(amb).column(0)

    cols = [to_cid(fp_coords), [-x for x in p_coords]]
    for col in fcomp:
        cols.append(to_cid(col))
    det = QMatrix.from_columns(cols).det()
    assert det != 0
    return 1 if det > 0 else -1


def induced_cell_map(fan, cone_map, cx, cone_cell, with_infinity_cells,
                     name="psi"):
    """Cellular self-map of a compactified fan complex induced by a
    fan-compatible linear map (given as ConeMapData)."""
    assignment = {}
    signs = {}
    origin = fan.origin_id()
    assignment[CENTER] = CENTER
    signs[CENTER] = 1
    if INFINITY in cx.cells:
        assignment[INFINITY] = INFINITY
        signs[INFINITY] = 1
    for cid in fan.cone_ids():
        if cid == origin:
            continue
        target = cone_map.permutation[cid]
        sign = cone_map.span_signs[cid]
        assignment[interior_cell(cid)] = interior_cell(target)
        signs[interior_cell(cid)] = sign
        if with_infinity_cells:
            assignment[infinity_cell(cid)] = infinity_cell(target)
            signs[infinity_cell(cid)] = sign
    m = CellularMap(cx, cx, assignment, signs, name=name)
    m.validate()
    return m


# ---------------------------------------------------------------------------
# subfans and subspaces
# ---------------------------------------------------------------------------

def subspace_contains(basis, vec):
    """vec in column span of basis (QMatrix)."""
    if all(Fraction(v) == 0 for v in vec):
        return True
    if basis.cols == 0:
        return False
    return basis.in_column_span(QMatrix.from_columns([[Fraction(v) for v in vec]]))


def cones_in_subspace(fan, basis):
    """Cone ids whose span lies inside the column span of ``basis``."""
    out = []
    for cid in fan.cone_ids():
        if all(subspace_contains(basis, r) for r in fan.cones[cid].rays):
            out.append(cid)
    return out


def restrict_fan(fan, basis, name=None):
    """The fan induced on a linear subspace (cones contained in it),
    re-coordinatized in the basis.  Returns (subfan, id map old->new)."""
    sub = Fan(basis.cols, name or (fan.name + "_sub"))
    idmap = {}
    for cid in cones_in_subspace(fan, basis):
        rays = []
        for r in fan.cones[cid].rays:
            coords = basis.solve(QMatrix.from_columns([list(r)])).column(0)
            rays.append(coords)
        sub.add_cone(cid, rays)
        idmap[cid] = cid
    return sub, idmap


def restrict_map(psi, basis):
    """Matrix of psi on the subspace spanned by basis columns."""
    if basis.cols == 0:
        return QMatrix.zeros(0, 0)
    return basis.solve(psi @ basis)
