"""Cellular sheaves, sections complexes, and local cohomology.

Two cochain models are used throughout:

* the cells-only model (stalks summed over the cells of a locally closed
  support, signed generization differentials) computes compactly-supported
  cohomology of the support; on a compact complex with full support this is
  ordinary sheaf cohomology;
* the chain model (one summand per strictly increasing chain of cells of an
  open set, cosimplicial differential) computes the derived inverse limit,
  i.e. ordinary cohomology of the open subspace.

Local cohomology along a closed subset is the shifted mapping cone of the
restriction between chain models.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .complexes import (
    CLOSED,
    LOCALLY_CLOSED,
    OPEN,
    CellSet,
    increasing_chains,
    set_difference,
)
from .errors import PreconditionError, ValidationError
from .linalgq import GradedComplex, QMatrix, endo_trace, mapping_cone_shifted


class CellSheaf:
    """Cellular sheaf: stalk dimension per cell, generization matrices
    along covering face pairs (face -> coface)."""

    def __init__(self, complex_, name="F"):
        self.name = name
        self.complex = complex_
        self.stalk_dim = {c: 0 for c in complex_.cell_ids()}
        self.gens = {}
        self._paths = {}

    def set_stalk(self, cid, dim):
        self.stalk_dim[cid] = dim

    def stalk(self, cid):
        return self.stalk_dim.get(cid, 0)

    def set_gen(self, fid, cid, matrix):
        if fid not in self.complex.faces(cid):
            raise ValidationError("generization %r -> %r is not a covering "
                                  "face pair" % (fid, cid))
        matrix = matrix if isinstance(matrix, QMatrix) else \
            QMatrix.from_rows(matrix)
        if matrix.rows != self.stalk(cid) or matrix.cols != self.stalk(fid):
            raise ValidationError(
                "generization %r -> %r has shape %dx%d, expected %dx%d"
                % (fid, cid, matrix.rows, matrix.cols,
                   self.stalk(cid), self.stalk(fid)))
        self.gens[(fid, cid)] = matrix
        self._paths.clear()

    def gen(self, fid, cid):
        m = self.gens.get((fid, cid))
        if m is None:
            m = QMatrix.zeros(self.stalk(cid), self.stalk(fid))
        return m

    def path_gen(self, a, b):
        """Composite generization along any saturated chain a <= b."""
        if a == b:
            return QMatrix.identity(self.stalk(a))
        key = (a, b)
        if key in self._paths:
            return self._paths[key]
        below = self.complex.closure_of([b])
        if a not in below:
            raise PreconditionError("%r is not a face of %r" % (a, b))
        target_dim = self.complex.dim(a)
        cur = b
        mat = QMatrix.identity(self.stalk(b))
        while cur != a:
            nxt = None
            for fid in self.complex.faces(cur):
                if fid == a or a in self.complex.closure_of([fid]):
                    nxt = fid
                    break
            assert nxt is not None, (a, b, cur, target_dim)
            mat = mat @ self.gen(nxt, cur)
            cur = nxt
        self._paths[key] = mat
        return mat

    def support(self):
        return {c for c, d in self.stalk_dim.items() if d > 0}

    def validate(self):
        """Functoriality: both composites through every diamond agree."""
        cx = self.complex
        for cid in cx.cell_ids():
            paths = {}
            for fid in cx.faces(cid):
                for gid in cx.faces(fid):
                    paths.setdefault(gid, []).append(
                        self.gen(fid, cid) @ self.gen(gid, fid))
            for gid, mats in paths.items():
                if len(mats) == 2 and not (mats[0] - mats[1]).is_zero():
                    raise ValidationError(
                        "sheaf %s: generizations do not commute through the "
                        "diamond (%r, %r)" % (self.name, gid, cid))
        return self


def constant_sheaf(complex_, rank=1, name=None):
    sheaf = CellSheaf(complex_, name or ("Q^%d" % rank))
    for cid in complex_.cell_ids():
        sheaf.set_stalk(cid, rank)
    eye = QMatrix.identity(rank)
    for cid in complex_.cell_ids():
        for fid in complex_.faces(cid):
            sheaf.set_gen(fid, cid, eye)
    return sheaf


def indicator_sheaf(cell_set, rank=1, name=None):
    """Extension by zero of the rank-r constant sheaf on a locally closed
    union of cells (order-convexity makes this functorial)."""
    cx = cell_set.complex
    sheaf = CellSheaf(cx, name or "1_S")
    eye = QMatrix.identity(rank)
    for cid in cell_set:
        sheaf.set_stalk(cid, rank)
    for cid in cell_set:
        for fid in cx.faces(cid):
            if fid in cell_set:
                sheaf.set_gen(fid, cid, eye)
    return sheaf


def direct_sum_sheaf(complex_, summands, name=None):
    """Cellwise direct sum of sheaves on the same complex."""
    from .linalgq import block_diag
    sheaf = CellSheaf(complex_, name or "sum")
    for cid in complex_.cell_ids():
        sheaf.set_stalk(cid, sum(s.stalk(cid) for s in summands))
    for cid in complex_.cell_ids():
        for fid in complex_.faces(cid):
            if sheaf.stalk(cid) and sheaf.stalk(fid):
                sheaf.set_gen(fid, cid,
                              block_diag([s.gen(fid, cid) for s in summands]))
    return sheaf


class SheafHomOverMap:
    """Morphism Phi over a cellular map phi: per cell c, a matrix
    stalk(phi(c)) -> stalk(c)."""

    def __init__(self, map_, sheaf, comps=None, name="Phi"):
        self.name = name
        self.map = map_
        self.sheaf = sheaf
        self.comps = {}
        for cid, m in (comps or {}).items():
            self.set_comp(cid, m)

    def set_comp(self, cid, matrix):
        matrix = matrix if isinstance(matrix, QMatrix) else \
            QMatrix.from_rows(matrix)
        img = self.map(cid)
        if (matrix.rows != self.sheaf.stalk(cid)
                or matrix.cols != self.sheaf.stalk(img)):
            raise ValidationError(
                "component at %r has shape %dx%d, expected %dx%d"
                % (cid, matrix.rows, matrix.cols,
                   self.sheaf.stalk(cid), self.sheaf.stalk(img)))
        self.comps[cid] = matrix

    def comp(self, cid):
        m = self.comps.get(cid)
        if m is None:
            m = QMatrix.zeros(self.sheaf.stalk(cid),
                              self.sheaf.stalk(self.map(cid)))
        return m

    def validate(self):
        """Naturality through every covering pair, with composite
        generizations on degenerate images."""
        cx = self.sheaf.complex
        phi = self.map
        for cid in cx.cell_ids():
            for fid in cx.faces(cid):
                lhs = self.comp(cid) @ self.sheaf.path_gen(phi(fid), phi(cid))
                rhs = self.sheaf.gen(fid, cid) @ self.comp(fid)
                if not (lhs - rhs).is_zero():
                    raise ValidationError(
                        "%s is not natural on the face pair (%r, %r)"
                        % (self.name, fid, cid))
        return self


def natural_hom(map_, sheaf, scale=1, name=None):
    """The natural morphism for indicator-type sheaves: identity (scaled)
    where stalks allow, zero elsewhere."""
    comps = {}
    s = Fraction(scale)
    for cid in sheaf.complex.cell_ids():
        n, m = sheaf.stalk(cid), sheaf.stalk(map_(cid))
        if n == m and n > 0:
            comps[cid] = QMatrix.identity(n).scale(s)
    hom = SheafHomOverMap(map_, sheaf, comps, name or "nat")
    return hom


def identity_hom(sheaf, name=None):
    from .complexes import identity_map
    return natural_hom(identity_map(sheaf.complex), sheaf, 1,
                       name or ("id_" + sheaf.name))


# ---------------------------------------------------------------------------
# cochain models
# ---------------------------------------------------------------------------

@dataclass
class CochainModel:
    """A graded complex plus bookkeeping of which summand is which."""

    complex: GradedComplex
    slots: dict        # degree -> ordered list of keys
    offsets: dict      # key -> (degree, offset)
    stalk_of: dict     # key -> stalk dimension


def _assemble(slot_lists, stalk_of):
    dims = {}
    offsets = {}
    for deg, keys in slot_lists.items():
        off = 0
        for key in keys:
            offsets[key] = (deg, off)
            off += stalk_of[key]
        dims[deg] = off
    return dims, offsets


def sections_complex(sheaf, support=None):
    """Cells-only model of the compactly-supported sections over a locally
    closed support (full support on a compact complex: RGamma(X; F))."""
    cx = sheaf.complex
    if support is None:
        from .complexes import whole_set
        support = whole_set(cx)
    if not isinstance(support, CellSet):
        raise PreconditionError("support must be a CellSet")
    slot_lists = {}
    for cid in sorted(support.cells, key=lambda c: (cx.dim(c), c)):
        slot_lists.setdefault(cx.dim(cid), []).append(cid)
    stalk_of = {cid: sheaf.stalk(cid) for cid in support.cells}
    dims, offsets = _assemble(slot_lists, stalk_of)
    diffs = {}
    for k in sorted(dims):
        if dims.get(k, 0) == 0 or dims.get(k + 1, 0) == 0:
            continue
        m = QMatrix.zeros(dims[k + 1], dims[k])
        for cid in slot_lists.get(k + 1, []):
            _, row_off = offsets[cid]
            for fid, sign in cx.facets[cid]:
                if fid not in support.cells:
                    continue
                _, col_off = offsets[fid]
                g = sheaf.gen(fid, cid)
                for i in range(g.rows):
                    for j in range(g.cols):
                        if g.data[i][j] != 0:
                            m.data[row_off + i][col_off + j] += sign * g.data[i][j]
        diffs[k] = m
    model = CochainModel(GradedComplex(dims, diffs), slot_lists, offsets,
                         stalk_of)
    model.complex.validate()
    return model


def check_support_compatible(hom, support):
    """Support condition for the induced endomorphism.

    Open supports need phi^{-1}(S) subset S (the extension-by-zero
    direction); closed and general locally closed supports need
    phi(S) subset S."""
    phi = hom.map
    if support.kind == OPEN:
        for cid in support.complex.cell_ids():
            if phi(cid) in support.cells and cid not in support.cells:
                raise PreconditionError(
                    "support is open but phi^{-1}(S) is not inside S: "
                    "cell %r maps into the support" % cid)
    else:
        for cid in support.cells:
            if phi(cid) not in support.cells:
                raise PreconditionError(
                    "support not preserved: phi(%r) = %r leaves it"
                    % (cid, phi(cid)))


def induced_endo(sheaf, hom, support=None, model=None):
    """Chain endomorphism of the cells-only model induced by a sheaf hom
    over a cellular self-map: s |-> (c |-> sign(c) Phi_c s(phi(c)))."""
    cx = sheaf.complex
    if support is None:
        from .complexes import whole_set
        support = whole_set(cx)
    if model is None:
        model = sections_complex(sheaf, support)
    check_support_compatible(hom, support)
    phi = hom.map
    endo = {k: QMatrix.zeros(n, n) for k, n in model.complex.dims.items()}
    for cid in support.cells:
        img = phi(cid)
        if img not in support.cells:
            continue
        if cx.dim(img) != cx.dim(cid):
            continue
        deg, row_off = model.offsets[cid]
        _, col_off = model.offsets[img]
        sign = phi.sign(cid)
        m = hom.comp(cid)
        tgt = endo[deg]
        for i in range(m.rows):
            for j in range(m.cols):
                if m.data[i][j] != 0:
                    tgt.data[row_off + i][col_off + j] += sign * m.data[i][j]
    return endo


# -- ordinary cohomology of open sets (derived-limit chain model) -----------

def ordinary_complex(sheaf, open_set_):
    """Chain model of RGamma(U; F) for an open union of cells U."""
    if open_set_.kind != OPEN:
        raise PreconditionError("ordinary sections need an open cell set")
    cx = sheaf.complex
    chains = increasing_chains(cx, open_set_.cells)
    slot_lists = {}
    stalk_of = {}
    for ch in chains:
        deg = len(ch) - 1
        slot_lists.setdefault(deg, []).append(ch)
        stalk_of[ch] = sheaf.stalk(ch[-1])
    dims, offsets = _assemble(slot_lists, stalk_of)
    diffs = {}
    for k in sorted(dims):
        if dims.get(k, 0) == 0 or dims.get(k + 1, 0) == 0:
            continue
        m = QMatrix.zeros(dims[k + 1], dims[k])
        for ch in slot_lists.get(k + 1, []):
            _, row_off = offsets[ch]
            n1 = len(ch) - 1  # = k+1
            for i in range(n1 + 1):
                sub = ch[:i] + ch[i + 1:]
                if sub not in offsets:
                    continue
                _, col_off = offsets[sub]
                sign = (-1) ** i
                if i == n1:
                    g = sheaf.path_gen(ch[-2], ch[-1])
                else:
                    g = QMatrix.identity(sheaf.stalk(ch[-1]))
                for a in range(g.rows):
                    for b in range(g.cols):
                        if g.data[a][b] != 0:
                            m.data[row_off + a][col_off + b] += sign * g.data[a][b]
        diffs[k] = m
    model = CochainModel(GradedComplex(dims, diffs), slot_lists, offsets,
                         stalk_of)
    model.complex.validate()
    return model


def ordinary_endo(sheaf, hom, open_set_, model=None):
    """Endomorphism of the chain model over a cellular map that maps the
    open set's cells into themselves preserving strict chains (identity
    maps and fan automorphisms qualify); commutation is checked exactly."""
    if model is None:
        model = ordinary_complex(sheaf, open_set_)
    phi = hom.map
    endo = {k: QMatrix.zeros(n, n) for k, n in model.complex.dims.items()}
    for deg, keys in model.slots.items():
        for ch in keys:
            image = tuple(phi(c) for c in ch)
            if image not in model.offsets:
                continue
            _, row_off = model.offsets[ch]
            _, col_off = model.offsets[image]
            m = hom.comp(ch[-1])
            tgt = endo[deg]
            for i in range(m.rows):
                for j in range(m.cols):
                    if m.data[i][j] != 0:
                        tgt.data[row_off + i][col_off + j] += m.data[i][j]
    from .linalgq import check_chain_endo
    check_chain_endo(model.complex, endo)
    return endo


def local_cohomology(sheaf, z_set, u_set, hom=None):
    """RGamma_Z(U; F) as cone(RGamma(U;F) -> RGamma(U-Z;F))[-1].

    Z must be closed in the open set U.  With ``hom`` (over a map fixing
    the situation) the induced endomorphism is returned as well:
    returns (GradedComplex, endo-or-None).
    """
    if u_set.kind != OPEN:
        raise PreconditionError("U must be an open cell set")
    if not set(z_set.cells) <= set(u_set.cells):
        raise PreconditionError("Z must sit inside U")
    cx = sheaf.complex
    closure_z = cx.closure_of(z_set.cells)
    if (closure_z & u_set.cells) - z_set.cells:
        raise PreconditionError("Z is not closed in U")
    complement = set_difference(u_set, z_set.cells, kind=OPEN)
    big = ordinary_complex(sheaf, u_set)
    small = ordinary_complex(sheaf, complement)
    restriction = {}
    for deg, keys in small.slots.items():
        m = QMatrix.zeros(small.complex.dim(deg), big.complex.dim(deg))
        for ch in keys:
            _, row_off = small.offsets[ch]
            _, col_off = big.offsets[ch]
            for i in range(small.stalk_of[ch]):
                m.data[row_off + i][col_off + i] = Fraction(1)
        restriction[deg] = m
    if hom is None:
        cone, _ = mapping_cone_shifted(restriction, big.complex,
                                       small.complex)
        return cone, None
    endo_big = ordinary_endo(sheaf, hom, u_set, model=big)
    endo_small = ordinary_endo(sheaf, hom, complement, model=small)
    cone, endo = mapping_cone_shifted(restriction, big.complex,
                                      small.complex, endo_big, endo_small)
    return cone, endo


def sections_trace(sheaf, hom, support=None):
    """Global-trace convenience: cells-only model + induced endo + traces."""
    model = sections_complex(sheaf, support)
    endo = induced_endo(sheaf, hom, support, model)
    return endo_trace(model.complex, endo), model
