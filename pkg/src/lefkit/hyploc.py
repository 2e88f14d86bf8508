"""Conic sheaves on fans, expanding subbundles, hyperbolic localization,
and the local trace function of a fixed-component datum.

A fiber datum is (complete fan, conic sheaf, fiberwise endomorphism over a
fan-compatible invertible matrix).  Three localization routes are
implemented and cross-checked:

* the proper-pushforward route: compactly-supported sections over the
  expanding subspace, extension by zero at infinity;
* the upper-shriek route: sections supported at the origin, as a shifted
  mapping cone on the same compactified complex;
* the shrinking route: local cohomology along a shrinking subspace
  followed by the stalk at the origin.

The closed form of the local trace value is the signed sum over invariant
cones inside the expanding subspace.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from .complexes import CellSet, open_set, whole_set
from .errors import PreconditionError, ValidationError
from .euler import ConstructibleFunction, euler_integral_c
from .fans import (
    CENTER,
    Fan,
    INFINITY,
    cones_in_subspace,
    fan_compactify,
    fan_compactify_onepoint,
    induced_cell_map,
    infinity_cell,
    interior_cell,
    map_image_check,
    restrict_fan,
    restrict_map,
    subspace_contains,
)
from .linalgq import (
    QMatrix,
    REAL_GT1,
    classify_spectrum,
    endo_trace,
    invariant_subspace,
)
from .polyroots import (
    circle_root_count,
    count_inside_unit_disk,
    count_real_roots,
    poly_degree,
    poly_eval,
)
from .sheaves import (
    CellSheaf,
    SheafHomOverMap,
    induced_endo,
    local_cohomology,
    sections_complex,
    sections_trace,
)


class ConicSheaf:
    """Sheaf on a fan: stalk per cone, generization per facet pair."""

    def __init__(self, fan, name="G"):
        self.name = name
        self.fan = fan
        self.stalk_dim = {c: 0 for c in fan.cone_ids()}
        self.gens = {}

    def set_stalk(self, cid, dim):
        self.stalk_dim[cid] = dim

    def stalk(self, cid):
        return self.stalk_dim.get(cid, 0)

    def set_gen(self, fid, cid, matrix):
        matrix = matrix if isinstance(matrix, QMatrix) else \
            QMatrix.from_rows(matrix)
        if fid not in self.fan.face_ids(cid):
            raise ValidationError("(%r, %r) is not a facet pair of the fan"
                                  % (fid, cid))
        if matrix.rows != self.stalk(cid) or matrix.cols != self.stalk(fid):
            raise ValidationError("generization %r -> %r has wrong shape"
                                  % (fid, cid))
        self.gens[(fid, cid)] = matrix

    def gen(self, fid, cid):
        m = self.gens.get((fid, cid))
        if m is None:
            m = QMatrix.zeros(self.stalk(cid), self.stalk(fid))
        return m

    def validate(self):
        fan = self.fan
        for cid in fan.cone_ids():
            paths = {}
            for fid in fan.face_ids(cid):
                for gid in fan.face_ids(fid):
                    paths.setdefault(gid, []).append(
                        self.gen(fid, cid) @ self.gen(gid, fid))
            for gid, mats in paths.items():
                for other in mats[1:]:
                    if not (mats[0] - other).is_zero():
                        raise ValidationError(
                            "conic sheaf %s: non-commuting diamond under %r"
                            % (self.name, cid))
        return self


def constant_conic_sheaf(fan, rank=1, name=None):
    sheaf = ConicSheaf(fan, name or ("Q^%d" % rank))
    eye = QMatrix.identity(rank)
    for cid in fan.cone_ids():
        sheaf.set_stalk(cid, rank)
    for cid in fan.cone_ids():
        for fid in fan.face_ids(cid):
            sheaf.set_gen(fid, cid, eye)
    return sheaf


def indicator_conic_sheaf(fan, cone_ids, rank=1, name=None):
    """Extension by zero of a constant sheaf on an order-convex cone set."""
    cone_ids = set(cone_ids)
    sheaf = ConicSheaf(fan, name or "1_S")
    eye = QMatrix.identity(rank)
    for cid in cone_ids:
        sheaf.set_stalk(cid, rank)
    for cid in cone_ids:
        for fid in fan.face_ids(cid):
            if fid in cone_ids:
                sheaf.set_gen(fid, cid, eye)
    return sheaf


class FiberEndo:
    """Endomorphism of a conic sheaf over a fan-compatible matrix psi.

    Components follow the pullback convention: Psi_sigma maps
    stalk(psi(sigma)) -> stalk(sigma).
    """

    def __init__(self, sheaf, psi, comps=None, name="Psi"):
        self.name = name
        self.sheaf = sheaf
        self.psi = psi if isinstance(psi, QMatrix) else QMatrix.from_rows(psi)
        self.cone_map = map_image_check(self.psi, sheaf.fan)
        self.comps = {}
        for cid, m in (comps or {}).items():
            self.set_comp(cid, m)
        self._classification = None

    def image(self, cid):
        return self.cone_map.permutation[cid]

    def set_comp(self, cid, matrix):
        matrix = matrix if isinstance(matrix, QMatrix) else \
            QMatrix.from_rows(matrix)
        img = self.image(cid)
        if (matrix.rows != self.sheaf.stalk(cid)
                or matrix.cols != self.sheaf.stalk(img)):
            raise ValidationError("component at cone %r has wrong shape" % cid)
        self.comps[cid] = matrix

    def comp(self, cid):
        m = self.comps.get(cid)
        if m is None:
            m = QMatrix.zeros(self.sheaf.stalk(cid),
                              self.sheaf.stalk(self.image(cid)))
        return m

    def classification(self):
        if self._classification is None:
            self._classification = classify_spectrum(self.psi)
        return self._classification

    def validate(self):
        if poly_eval(self.psi.char_poly(), Fraction(1)) == 0:
            raise ValidationError(
                "1 is an eigenvalue of the fiber map (clean-intersection "
                "hypothesis fails)")
        fan = self.sheaf.fan
        for cid in fan.cone_ids():
            for fid in fan.face_ids(cid):
                lhs = self.comp(cid) @ self.sheaf.gen(self.image(fid),
                                                      self.image(cid))
                rhs = self.sheaf.gen(fid, cid) @ self.comp(fid)
                if not (lhs - rhs).is_zero():
                    raise ValidationError(
                        "%s is not natural on the cone pair (%r, %r)"
                        % (self.name, fid, cid))
        return self


def natural_fiber_endo(sheaf, psi, scale=1, name=None):
    """Identity components (scaled) wherever stalk dimensions allow."""
    endo = FiberEndo(sheaf, psi, name=name or "nat")
    s = Fraction(scale)
    for cid in sheaf.fan.cone_ids():
        n, m = sheaf.stalk(cid), sheaf.stalk(endo.image(cid))
        if n == m and n > 0:
            endo.set_comp(cid, QMatrix.identity(n).scale(s))
    return endo


# ---------------------------------------------------------------------------
# expanding / shrinking subbundles (single fiber)
# ---------------------------------------------------------------------------

def minimal_expanding(psi_or_endo):
    """Basis of the sum of generalized eigenspaces for the real eigenvalues
    in (1, inf): the minimal expanding subspace."""
    endo = psi_or_endo if isinstance(psi_or_endo, FiberEndo) else None
    psi = endo.psi if endo else psi_or_endo
    cls = endo.classification() if endo else classify_spectrum(psi)
    if cls.has_eigenvalue_one():
        raise PreconditionError("1 is an eigenvalue: no expanding subbundle")
    for f in cls.factors:
        if f.tag != REAL_GT1 and f.certificate.get("sturm_gt1"):
            raise PreconditionError(
                "a mixed factor has real eigenvalues above 1; the minimal "
                "expanding subspace is not rational")
    return invariant_subspace(psi, cls.factors_with_tag(REAL_GT1))


def validate_expanding(psi, basis):
    """Expanding-subbundle conditions; failures report (i)/(ii)/(iii)."""
    psi = psi if isinstance(psi, QMatrix) else QMatrix.from_rows(psi)
    if basis.cols:
        try:
            restr = basis.solve(psi @ basis)
        except PreconditionError:
            raise PreconditionError("(i) the subspace is not psi-invariant")
    else:
        restr = QMatrix.zeros(0, 0)
    minimal = minimal_expanding(psi)
    if minimal.cols:
        if basis.cols == 0 or not basis.in_column_span(minimal):
            raise PreconditionError(
                "(ii) the minimal expanding subspace is not contained")
    if basis.cols:
        char = restr.char_poly()
        if poly_eval(char, Fraction(0)) == 0 or count_real_roots(
                char, Fraction(0), Fraction(1),
                closed_lo=True, closed_hi=True) != 0:
            raise PreconditionError(
                "(iii) the restricted spectrum meets [0, 1]")
    return restr


def is_shrinking(psi, basis):
    """All eigenvalues of psi restricted to the subspace have modulus < 1."""
    if basis.cols == 0:
        return True
    try:
        restr = basis.solve(psi @ basis)
    except PreconditionError:
        return False
    char = restr.char_poly()
    if circle_root_count(char):
        return False
    return count_inside_unit_disk(char) == poly_degree(char)


# ---------------------------------------------------------------------------
# compactified sheaf models
# ---------------------------------------------------------------------------

def _ball_sheaf(sheaf, ball, idmap, conic_extension):
    """Cell sheaf on a compactified subfan complex.

    With ``conic_extension`` the infinity cell of each cone carries the
    cone's stalk (radial constancy); otherwise infinity stalks vanish
    (extension by zero, the compact-supports model).
    """
    fan = sheaf.fan
    out = CellSheaf(ball, sheaf.name + ("~" if conic_extension else "!"))
    origin = None
    for cid in idmap:
        if not fan.cones[cid].rays:
            origin = cid
    out.set_stalk(CENTER, sheaf.stalk(origin))
    for cid in idmap:
        if not fan.cones[cid].rays:
            continue
        out.set_stalk(interior_cell(cid), sheaf.stalk(cid))
        out.set_stalk(infinity_cell(cid),
                      sheaf.stalk(cid) if conic_extension else 0)
    for cid in idmap:
        if not fan.cones[cid].rays:
            continue
        for fid in fan.face_ids(cid):
            if fid not in idmap:
                continue
            g = sheaf.gen(fid, cid)
            if not fan.cones[fid].rays:
                out.set_gen(CENTER, interior_cell(cid), g)
            else:
                out.set_gen(interior_cell(fid), interior_cell(cid), g)
                if conic_extension:
                    out.set_gen(infinity_cell(fid), infinity_cell(cid), g)
        if conic_extension:
            out.set_gen(infinity_cell(cid), interior_cell(cid),
                        QMatrix.identity(sheaf.stalk(cid)))
    return out


def _ball_hom(endo, cell_map, ball_sheaf_, idmap, conic_extension):
    hom = SheafHomOverMap(cell_map, ball_sheaf_, name=endo.name)
    fan = endo.sheaf.fan
    for cid in idmap:
        if not fan.cones[cid].rays:
            hom.set_comp(CENTER, endo.comp(cid))
            continue
        hom.set_comp(interior_cell(cid), endo.comp(cid))
        if conic_extension:
            hom.set_comp(infinity_cell(cid), endo.comp(cid))
    return hom


@dataclass
class LocalizedComplex:
    complex: object
    endo: dict
    trace: object           # TraceReport
    cohomology_dims: dict

    @property
    def alternating_trace(self):
        return self.trace.alternating_sum


def _finish(model_complex, endo):
    report = endo_trace(model_complex, endo)
    dims = model_complex.cohomology_dims()
    return LocalizedComplex(model_complex, endo, report, dims)


def _restricted_setup(endo, basis):
    """Common restriction of (fan, sheaf, endo) to an expanding subspace."""
    fan = endo.sheaf.fan
    subfan, idmap = restrict_fan(fan, basis)
    if not subfan.is_complete():
        raise PreconditionError(
            "the fan does not restrict to a complete fan of the subspace")
    psi_sub = restrict_map(endo.psi, basis) if basis.cols else \
        QMatrix.zeros(0, 0)
    sub_sheaf = ConicSheaf(subfan, endo.sheaf.name + "|E")
    for cid in idmap:
        sub_sheaf.set_stalk(cid, endo.sheaf.stalk(cid))
    for cid in idmap:
        for fid in subfan.face_ids(cid):
            sub_sheaf.set_gen(fid, cid, endo.sheaf.gen(fid, cid))
    sub_endo = FiberEndo(sub_sheaf, psi_sub,
                         {c: endo.comp(c) for c in idmap}, endo.name + "|E")
    return subfan, sub_sheaf, sub_endo


def hyperbolic_localize(endo, basis):
    """Proper-pushforward route: compactly-supported sections over the
    expanding subspace with the induced endomorphism."""
    validate_expanding(endo.psi, basis)
    subfan, sub_sheaf, sub_endo = _restricted_setup(endo, basis)
    ball, cone_cell = fan_compactify(subfan)
    sheaf = _ball_sheaf(sub_sheaf, ball, {c: c for c in subfan.cone_ids()},
                        conic_extension=False)
    cell_map = induced_cell_map(subfan, sub_endo.cone_map, ball, cone_cell,
                                with_infinity_cells=True)
    hom = _ball_hom(sub_endo, cell_map, sheaf,
                    {c: c for c in subfan.cone_ids()}, conic_extension=False)
    interior = open_set(ball, [c for c in ball.cell_ids()
                               if not c.startswith("inf.")])
    model = sections_complex(sheaf, interior)
    chain_endo = induced_endo(sheaf, hom, interior, model)
    return _finish(model.complex, chain_endo)


def hyperbolic_localize_shriek(endo, basis):
    """Upper-shriek route: sections supported at the origin of the
    expanding subspace, as cone(RGamma(E) -> RGamma(E - 0))[-1] on the
    compactified complex."""
    validate_expanding(endo.psi, basis)
    subfan, sub_sheaf, sub_endo = _restricted_setup(endo, basis)
    ball, cone_cell = fan_compactify(subfan)
    sheaf = _ball_sheaf(sub_sheaf, ball, {c: c for c in subfan.cone_ids()},
                        conic_extension=True)
    cell_map = induced_cell_map(subfan, sub_endo.cone_map, ball, cone_cell,
                                with_infinity_cells=True)
    hom = _ball_hom(sub_endo, cell_map, sheaf,
                    {c: c for c in subfan.cone_ids()}, conic_extension=True)
    everything = open_set(ball, ball.cell_ids())
    center = CellSet(ball, frozenset({CENTER}), "locally-closed")
    cone, chain_endo = local_cohomology(sheaf, center, everything, hom)
    return _finish(cone, chain_endo)


def shrinking_localize(endo, basis):
    """Shrinking route: local cohomology along the shrinking subspace, then
    the stalk at the origin (realized on the compactified full fan)."""
    if not is_shrinking(endo.psi, basis):
        raise PreconditionError(
            "subspace spectrum is not of modulus < 1 classes")
    if basis.cols:
        sub = cones_in_subspace(endo.sheaf.fan, basis)
        subfan, _ = restrict_fan(endo.sheaf.fan, basis)
        if not subfan.is_complete():
            raise PreconditionError(
                "the fan does not restrict to a complete fan of the subspace")
    else:
        sub = [endo.sheaf.fan.origin_id()]
    fan = endo.sheaf.fan
    ball, cone_cell = fan_compactify(fan)
    sheaf = _ball_sheaf(endo.sheaf, ball, {c: c for c in fan.cone_ids()},
                        conic_extension=True)
    cell_map = induced_cell_map(fan, endo.cone_map, ball, cone_cell,
                                with_infinity_cells=True)
    hom = _ball_hom(endo, cell_map, sheaf, {c: c for c in fan.cone_ids()},
                    conic_extension=True)
    interior = open_set(ball, [c for c in ball.cell_ids()
                               if not c.startswith("inf.")])
    z_cells = {CENTER} | {interior_cell(c) for c in sub
                          if fan.cones[c].rays}
    z = CellSet(ball, frozenset(z_cells), "locally-closed")
    cone, chain_endo = local_cohomology(sheaf, z, interior, hom)
    return _finish(cone, chain_endo)


def onepoint_global_trace(endo):
    """Independent oracle: the global trace of the extension by zero on the
    one-point compactification of the whole fiber, via the engine path."""
    fan = endo.sheaf.fan
    sphere, cone_cell = fan_compactify_onepoint(fan)
    sheaf = CellSheaf(sphere, endo.sheaf.name + "^")
    sheaf.set_stalk(CENTER, endo.sheaf.stalk(fan.origin_id()))
    for cid in fan.cone_ids():
        if fan.cones[cid].rays:
            sheaf.set_stalk(interior_cell(cid), endo.sheaf.stalk(cid))
    if INFINITY in sphere.cells:
        sheaf.set_stalk(INFINITY, 0)
    for cid in fan.cone_ids():
        if not fan.cones[cid].rays:
            continue
        for fid in fan.face_ids(cid):
            g = endo.sheaf.gen(fid, cid)
            if not fan.cones[fid].rays:
                sheaf.set_gen(CENTER, interior_cell(cid), g)
            else:
                sheaf.set_gen(interior_cell(fid), interior_cell(cid), g)
    cell_map = induced_cell_map(fan, endo.cone_map, sphere, cone_cell,
                                with_infinity_cells=False)
    hom = SheafHomOverMap(cell_map, sheaf, name=endo.name + "^")
    for cid in fan.cone_ids():
        if fan.cones[cid].rays:
            hom.set_comp(interior_cell(cid), endo.comp(cid))
        else:
            hom.set_comp(CENTER, endo.comp(cid))
    report, _ = sections_trace(sheaf, hom)
    return report


# ---------------------------------------------------------------------------
# the local trace value
# ---------------------------------------------------------------------------

def theta_closed_form(endo, basis):
    """Signed sum over psi-invariant cones inside the expanding subspace:
    sum of (-1)^dim sgn det(psi | span) tr(Psi_sigma)."""
    fan = endo.sheaf.fan
    total = Fraction(0)
    for cid in cones_in_subspace(fan, basis):
        if endo.image(cid) != cid:
            continue
        sign = endo.cone_map.invariant_signs[cid]
        total += (-1) ** fan.dim(cid) * sign * endo.comp(cid).trace()
    return total


@dataclass
class ThetaValue:
    value: Fraction
    chain_route: LocalizedComplex
    shriek_route: LocalizedComplex
    closed_form: Fraction


def theta_value(endo, basis, cross_check_shriek=True):
    """Local trace value at one fiber: chain route, upper-shriek route and
    the closed form must agree exactly."""
    chain = hyperbolic_localize(endo, basis)
    closed = theta_closed_form(endo, basis)
    if chain.alternating_trace != closed:
        raise ValidationError(
            "closed form %s disagrees with the chain route %s"
            % (closed, chain.alternating_trace))
    shriek = None
    if cross_check_shriek:
        shriek = hyperbolic_localize_shriek(endo, basis)
        if shriek.cohomology_dims != chain.cohomology_dims:
            raise ValidationError(
                "localization routes disagree in cohomology dimensions: "
                "%s vs %s" % (chain.cohomology_dims, shriek.cohomology_dims))
        if _nonzero(shriek.trace.cohomology_traces) != \
                _nonzero(chain.trace.cohomology_traces):
            raise ValidationError(
                "localization routes disagree in cohomology traces")
    return ThetaValue(chain.alternating_trace, chain, shriek, closed)


def _nonzero(d):
    return {k: v for k, v in d.items() if v != 0}


# ---------------------------------------------------------------------------
# normal models over a base
# ---------------------------------------------------------------------------

@dataclass
class FiberDatum:
    fan: Fan
    sheaf: ConicSheaf
    endo: FiberEndo

    def validate(self):
        self.fan.validate()
        self.sheaf.validate()
        self.endo.validate()
        return self


MINIMAL_POLICY = "minimal"
ZERO_POLICY = "zero"
FULL_POLICY = "full"


def choose_expanding(endo, policy):
    if isinstance(policy, QMatrix):
        return policy
    if policy == MINIMAL_POLICY:
        return minimal_expanding(endo)
    if policy == ZERO_POLICY:
        basis = QMatrix.zeros(endo.psi.rows, 0)
        validate_expanding(endo.psi, basis)  # fails if expansion is present
        return basis
    if policy == FULL_POLICY:
        return QMatrix.identity(endo.psi.rows)
    raise PreconditionError("unknown expanding-subbundle policy %r" % policy)


class NormalModel:
    """Fixed-component datum: per base cell a fiber datum, plus optional
    identification maps of fiber sheaf data along base face relations."""

    def __init__(self, base_complex, base_cells, name="NM"):
        self.name = name
        self.base = base_complex
        if not isinstance(base_cells, CellSet):
            base_cells = CellSet(base_complex, frozenset(base_cells),
                                 "closed")
        self.base_cells = base_cells
        self.fiber = {}
        self.compat = {}     # (face cell, coface cell) -> {cone id: QMatrix}

    def set_fiber(self, cid, datum):
        if cid not in self.base_cells.cells:
            raise PreconditionError("cell %r is not in the component" % cid)
        self.fiber[cid] = datum

    def set_compat(self, fid, cid, cone_maps):
        self.compat[(fid, cid)] = {
            k: (m if isinstance(m, QMatrix) else QMatrix.from_rows(m))
            for k, m in cone_maps.items()}

    def datum(self, cid):
        if cid not in self.fiber:
            raise PreconditionError("no fiber datum on base cell %r" % cid)
        return self.fiber[cid]

    def validate(self):
        for cid in self.base_cells:
            datum = self.datum(cid)
            datum.validate()
        for (fid, cid), maps in self.compat.items():
            lo, hi = self.datum(fid), self.datum(cid)
            if set(lo.fan.cone_ids()) != set(hi.fan.cone_ids()):
                raise ValidationError(
                    "compat pair (%r, %r) joins different fans" % (fid, cid))
            for cone_id, m in maps.items():
                if (m.rows != hi.sheaf.stalk(cone_id)
                        or m.cols != lo.sheaf.stalk(cone_id)):
                    raise ValidationError(
                        "compat map at cone %r has wrong shape" % cone_id)
            for cone_id in lo.fan.cone_ids():
                for face in lo.fan.face_ids(cone_id):
                    if face in maps and cone_id in maps:
                        lhs = maps[cone_id] @ lo.sheaf.gen(face, cone_id)
                        rhs = hi.sheaf.gen(face, cone_id) @ maps[face]
                        if not (lhs - rhs).is_zero():
                            raise ValidationError(
                                "compat maps not natural on (%r, %r)"
                                % (face, cone_id))
        return self

    def identified_pairs(self):
        """Base face pairs whose compat maps are all invertible and whose
        fiber maps agree: theta must take equal values there."""
        out = []
        for (fid, cid), maps in self.compat.items():
            lo, hi = self.datum(fid), self.datum(cid)
            if lo.endo.psi != hi.endo.psi:
                continue
            if all(m.rows == m.cols and m.det() != 0 for m in maps.values()) \
                    and set(maps) == set(lo.fan.cone_ids()):
                out.append((fid, cid))
        return out


def theta_function(model, policy=MINIMAL_POLICY, cross_check=True):
    """Cellwise local trace function on the component's base cells."""
    theta = ConstructibleFunction(model.base)
    details = {}
    for cid in model.base_cells:
        datum = model.datum(cid)
        cell_policy = policy.get(cid, MINIMAL_POLICY) \
            if isinstance(policy, dict) else policy
        basis = choose_expanding(datum.endo, cell_policy)
        tv = theta_value(datum.endo, basis, cross_check_shriek=cross_check)
        theta.set_value(cid, tv.value)
        details[cid] = tv
    for fid, cid in model.identified_pairs():
        if theta.value(fid) != theta.value(cid):
            raise ValidationError(
                "inconsistent base gluing: identified cells %r and %r carry "
                "different local trace values" % (fid, cid))
    return theta, details


def stalk_formula_check(endo, basis, probes):
    """Compare localized cohomology dimensions against local cohomology
    along closed conic probes avoiding the expanding subspace.

    ``probes`` is a list of (name, cone id list); each probe set must be
    face-closed in the fan and meet the subspace only at the origin.
    """
    fan = endo.sheaf.fan
    localized = hyperbolic_localize(endo, basis)
    report = []
    for name, cone_ids in probes:
        cone_ids = set(cone_ids) | {fan.origin_id()}
        for cid in cone_ids:
            for fid in fan.face_ids(cid):
                if fid not in cone_ids:
                    raise PreconditionError(
                        "probe %s is not closed (missing face %r)" % (name, fid))
            if _cone_meets_subspace(fan, cid, basis):
                raise PreconditionError(
                    "probe %s violates the avoidance condition on cone %r"
                    % (name, cid))
        ball, cone_cell = fan_compactify(fan)
        sheaf = _ball_sheaf(endo.sheaf, ball,
                            {c: c for c in fan.cone_ids()},
                            conic_extension=True)
        interior = open_set(ball, [c for c in ball.cell_ids()
                                   if not c.startswith("inf.")])
        z_cells = {CENTER} | {interior_cell(c) for c in cone_ids
                              if fan.cones[c].rays}
        z = CellSet(ball, frozenset(z_cells), "locally-closed")
        cone, _ = local_cohomology(sheaf, z, interior)
        dims = cone.cohomology_dims()
        report.append({"probe": name, "local_cohomology_dims": dims,
                       "localized_dims": localized.cohomology_dims,
                       "match": dims == localized.cohomology_dims})
    return report


def _cone_meets_subspace(fan, cid, basis):
    """Does the closed cone meet the subspace outside the origin?"""
    cone = fan.cones[cid]
    if not cone.rays:
        return False
    if basis.cols == 0:
        return False
    for r in cone.rays:
        if subspace_contains(basis, r):
            return True
    # project generators to a complement of the subspace; the cone meets
    # the subspace off the origin iff the projected cone is not salient
    n = basis.rows
    cols = basis.columns()
    for j in range(n):
        unit = [Fraction(0)] * n
        unit[j] = Fraction(1)
        cand = QMatrix.from_columns(cols + [unit])
        if cand.rank() > len(cols):
            cols.append(unit)
    full = QMatrix.from_columns(cols)
    k = basis.cols
    projected = []
    for r in cone.rays:
        coords = full.solve(QMatrix.from_columns([list(r)])).column(0)
        projected.append(tuple(coords[k:]))
    tmp = Fan(n - k)
    tmp.add_cone("c", projected)
    return not tmp.is_salient("c")


def restricted_trace_check(model, k_set, policy=MINIMAL_POLICY):
    """Localized trace over a closed base set, both ways.

    Chain side: assemble per-cell localized chain traces weighted by
    (-1)^(base dim).  Integral side: the chi_c integral of the closed-form
    theta values.  Returns (chain side, integral side, matches).
    """
    if not k_set.is_face_closed():
        raise PreconditionError("the base set must be closed")
    chain_side = Fraction(0)
    theta = ConstructibleFunction(model.base)
    for cid in k_set:
        datum = model.datum(cid)
        cell_policy = policy.get(cid, MINIMAL_POLICY) \
            if isinstance(policy, dict) else policy
        basis = choose_expanding(datum.endo, cell_policy)
        loc = hyperbolic_localize(datum.endo, basis)
        chain_side += (-1) ** model.base.dim(cid) * loc.alternating_trace
        theta.set_value(cid, theta_closed_form(datum.endo, basis))
    integral_side = euler_integral_c(theta, k_set)
    return chain_side, integral_side, chain_side == integral_side
