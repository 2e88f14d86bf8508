"""Finite regular cell complexes as signed face posets.

A complex stores cells with dimensions, signed codimension-1 incidences,
and an optional rational realization (vertex coordinates, with every cell a
simplex on its vertex set).  Cell subsets carry a kind tag: closed sets are
face-closed, open sets coface-closed, locally closed sets order-convex.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from .errors import PreconditionError, ValidationError
from .linalgq import QMatrix


@dataclass
class Cell:
    cid: str
    dim: int
    label: str = ""


class Complex:
    """Regular cell complex with signed incidence data."""

    def __init__(self, name="X"):
        self.name = name
        self.cells = {}          # cid -> Cell
        self.facets = {}         # cid -> list of (face cid, sign)
        self.coboundary = {}     # cid -> list of (coface cid, sign)
        self.coords = {}         # vertex cid -> tuple of Fractions
        self._order = []

    # -- construction ------------------------------------------------------

    def add_cell(self, cid, dim, faces=(), label=""):
        if cid in self.cells:
            raise ValidationError("duplicate cell id %r" % cid)
        self.cells[cid] = Cell(cid, dim, label)
        self.facets[cid] = []
        self.coboundary.setdefault(cid, [])
        self._order.append(cid)
        for fid, sign in faces:
            self.add_incidence(cid, fid, sign)
        return cid

    def add_incidence(self, cid, fid, sign):
        if fid not in self.cells:
            raise ValidationError("incidence of %r names unknown cell %r"
                                  % (cid, fid))
        if sign not in (1, -1):
            raise ValidationError("incidence sign must be +1 or -1")
        self.facets[cid].append((fid, sign))
        self.coboundary.setdefault(fid, []).append((cid, sign))

    def set_coords(self, cid, coords):
        self.coords[cid] = tuple(Fraction(c) for c in coords)

    # -- queries -----------------------------------------------------------

    def dim(self, cid):
        return self.cells[cid].dim

    def cell_ids(self):
        return list(self._order)

    def cells_of_dim(self, k):
        return [c for c in self._order if self.cells[c].dim == k]

    def top_dim(self):
        return max((c.dim for c in self.cells.values()), default=-1)

    def faces(self, cid):
        return [f for f, _ in self.facets[cid]]

    def cofaces(self, cid):
        return [c for c, _ in self.coboundary.get(cid, [])]

    def euler_characteristic(self):
        return sum((-1) ** c.dim for c in self.cells.values())

    def closure_of(self, cids):
        out = set()
        stack = list(cids)
        while stack:
            c = stack.pop()
            if c in out:
                continue
            out.add(c)
            stack.extend(self.faces(c))
        return out

    def star_of(self, cids):
        out = set()
        stack = list(cids)
        while stack:
            c = stack.pop()
            if c in out:
                continue
            out.add(c)
            stack.extend(self.cofaces(c))
        return out

    def vertices_of(self, cid):
        return sorted(c for c in self.closure_of([cid])
                      if self.cells[c].dim == 0)

    def is_face(self, fid, cid):
        return fid in self.closure_of([cid])

    def incidence_sign(self, cid, fid):
        for f, s in self.facets[cid]:
            if f == fid:
                return s
        return 0

    def barycenter(self, cid):
        verts = self.vertices_of(cid)
        if not verts or any(v not in self.coords for v in verts):
            raise PreconditionError("cell %r has no rational realization" % cid)
        pts = [self.coords[v] for v in verts]
        n = len(pts)
        return tuple(sum(p[i] for p in pts) / n for i in range(len(pts[0])))

    # -- validation --------------------------------------------------------

    def validate(self):
        """Check the signed face poset is a regular complex.

        Verifies graded dimensions, the diamond property (every
        codimension-2 face is reached along exactly two length-2 chains),
        and signed boundary-of-boundary cancellation.
        """
        for cid, cell in self.cells.items():
            seen = set()
            for fid, _ in self.facets[cid]:
                if self.cells[fid].dim != cell.dim - 1:
                    raise ValidationError(
                        "cell %r (dim %d) lists %r (dim %d) as a facet"
                        % (cid, cell.dim, fid, self.cells[fid].dim))
                if fid in seen:
                    raise ValidationError(
                        "cell %r lists facet %r twice" % (cid, fid))
                seen.add(fid)
            if cell.dim > 0 and not self.facets[cid]:
                raise ValidationError("positive-dimensional cell %r has no "
                                      "facets" % cid)
            if cell.dim == 1 and len(self.facets[cid]) != 2:
                raise ValidationError("edge %r must have exactly two distinct "
                                      "endpoints" % cid)
        for cid in self._order:
            paths = {}
            for fid, s1 in self.facets[cid]:
                for gid, s2 in self.facets[fid]:
                    paths.setdefault(gid, []).append(s1 * s2)
            for gid, signs in paths.items():
                if len(signs) != 2:
                    raise ValidationError(
                        "diamond property fails between %r and %r "
                        "(%d chains)" % (cid, gid, len(signs)))
                if sum(signs) != 0:
                    raise ValidationError(
                        "signed boundary-of-boundary does not cancel "
                        "between %r and %r" % (cid, gid))
        return self

    # -- chain data --------------------------------------------------------

    def boundary_matrix(self, k):
        """partial_k : C_k -> C_(k-1) over Q, cells in insertion order."""
        rows = self.cells_of_dim(k - 1)
        cols = self.cells_of_dim(k)
        m = QMatrix.zeros(len(rows), len(cols))
        rpos = {c: i for i, c in enumerate(rows)}
        for j, cid in enumerate(cols):
            for fid, sign in self.facets[cid]:
                m.data[rpos[fid]][j] += sign
        return m

    def cell_index(self):
        return {c: i for i, c in enumerate(self._order)}


def validate_complex(complex_):
    """Full validation; returns diagnostics-style error text on failure."""
    complex_.validate()
    return complex_


def increasing_chains(complex_, cells):
    """All strictly increasing chains (by the face relation, any step size)
    within the given cell subset, sorted by (length, ids).

    These are the simplices of the order complex of the subset's poset.
    """
    cells = sorted(set(cells), key=lambda c: (complex_.dim(c), c))
    cell_set = set(cells)
    strict_below = {}
    for c in cells:
        strict_below[c] = sorted((complex_.closure_of([c]) - {c}) & cell_set,
                                 key=lambda x: (complex_.dim(x), x))
    chains = []

    def extend(chain):
        chains.append(tuple(chain))
        bottom = chain[0]
        for f in strict_below[bottom]:
            extend([f] + chain)

    for c in cells:
        extend([c])
    return sorted(chains, key=lambda ch: (len(ch), ch))


# ---------------------------------------------------------------------------
# cell sets
# ---------------------------------------------------------------------------

CLOSED = "closed"
OPEN = "open"
LOCALLY_CLOSED = "locally-closed"


@dataclass
class CellSet:
    complex: Complex
    cells: frozenset
    kind: str = LOCALLY_CLOSED

    def __post_init__(self):
        object.__setattr__(self, "cells", frozenset(self.cells))
        unknown = [c for c in self.cells if c not in self.complex.cells]
        if unknown:
            raise ValidationError("cell set names unknown cells %r"
                                  % sorted(unknown)[:3])
        self.check_kind()

    def check_kind(self):
        if self.kind == CLOSED and not self.is_face_closed():
            raise ValidationError("cell set tagged closed is not face-closed")
        if self.kind == OPEN and not self.is_coface_closed():
            raise ValidationError("cell set tagged open is not coface-closed")
        if self.kind == LOCALLY_CLOSED and not self.is_order_convex():
            raise ValidationError("cell set is not locally closed "
                                  "(order-convex)")

    def is_face_closed(self):
        return all(f in self.cells
                   for c in self.cells for f in self.complex.faces(c))

    def is_coface_closed(self):
        return all(f in self.cells
                   for c in self.cells for f in self.complex.cofaces(c))

    def is_order_convex(self):
        down = self.complex.closure_of(self.cells)
        up = self.complex.star_of(self.cells)
        for c in self.complex.cell_ids():
            if c not in self.cells and c in down and c in up:
                # c sits strictly between two members: must check an actual
                # sandwich sigma < c < tau with sigma, tau in the set
                below = self.complex.closure_of([c]) & self.cells
                above = self.complex.star_of([c]) & self.cells
                if below and above:
                    return False
        return True

    def chi_c(self):
        return sum((-1) ** self.complex.dim(c) for c in self.cells)

    def __contains__(self, cid):
        return cid in self.cells

    def __iter__(self):
        return iter(sorted(self.cells))

    def __len__(self):
        return len(self.cells)


def closed_set(complex_, cells):
    return CellSet(complex_, frozenset(cells), CLOSED)


def open_set(complex_, cells):
    return CellSet(complex_, frozenset(cells), OPEN)


def locally_closed_set(complex_, cells):
    return CellSet(complex_, frozenset(cells), LOCALLY_CLOSED)


def whole_set(complex_):
    return CellSet(complex_, frozenset(complex_.cell_ids()), CLOSED)


def star(complex_, cid):
    """Open star of a cell: the cell and all its cofaces."""
    if cid not in complex_.cells:
        raise PreconditionError("unknown cell id %r" % cid)
    return CellSet(complex_, frozenset(complex_.star_of([cid])), OPEN)


def closure(complex_, cid_or_set):
    cells = ([cid_or_set] if isinstance(cid_or_set, str)
             else list(cid_or_set))
    for c in cells:
        if c not in complex_.cells:
            raise PreconditionError("unknown cell id %r" % c)
    return CellSet(complex_, frozenset(complex_.closure_of(cells)), CLOSED)


def link(complex_, cid):
    """closure(star(x)) minus star(x): a closed subcomplex."""
    st = complex_.star_of([cid])
    return CellSet(complex_,
                   frozenset(complex_.closure_of(st) - st), CLOSED)


def set_difference(a, b_cells, kind=LOCALLY_CLOSED):
    b = set(b_cells.cells if isinstance(b_cells, CellSet) else b_cells)
    return CellSet(a.complex, frozenset(a.cells - b), kind)


# ---------------------------------------------------------------------------
# cellular maps
# ---------------------------------------------------------------------------

class CellularMap:
    """Cellular self-map or map between complexes.

    ``assignment`` maps cell ids to cell ids with dim(phi(c)) <= dim(c);
    ``signs`` carries an orientation sign for every dimension-preserving
    pair.  Validation checks face compatibility and that the induced signed
    chain map commutes with the boundary operators, exactly.
    """

    def __init__(self, domain, codomain, assignment, signs=None, name="phi"):
        self.name = name
        self.domain = domain
        self.codomain = codomain
        self.assignment = dict(assignment)
        self.signs = dict(signs or {})

    def __call__(self, cid):
        return self.assignment[cid]

    def sign(self, cid):
        if self.dim_preserved(cid):
            return self.signs.get(cid, 1)
        return 0

    def dim_preserved(self, cid):
        return (self.domain.dim(cid)
                == self.codomain.dim(self.assignment[cid]))

    def is_identity(self):
        return (self.domain is self.codomain
                and all(self.assignment[c] == c and self.sign(c) == 1
                        for c in self.domain.cell_ids()))

    def validate(self):
        dom, cod = self.domain, self.codomain
        for cid in dom.cell_ids():
            if cid not in self.assignment:
                raise ValidationError("map %s misses cell %r" % (self.name, cid))
            img = self.assignment[cid]
            if img not in cod.cells:
                raise ValidationError("map %s sends %r to unknown cell %r"
                                      % (self.name, cid, img))
            if cod.dim(img) > dom.dim(cid):
                raise ValidationError("map %s raises dimension on %r"
                                      % (self.name, cid))
            for fid in dom.faces(cid):
                fimg = self.assignment[fid]
                if fimg != img and not cod.is_face(fimg, img):
                    raise ValidationError(
                        "map %s breaks face compatibility on %r < %r"
                        % (self.name, fid, cid))
        self._check_chain_map()
        return self

    def chain_matrices(self):
        """Signed chain maps phi_* : C_k(domain) -> C_k(codomain)."""
        out = {}
        top = max(self.domain.top_dim(), self.codomain.top_dim())
        for k in range(top + 1):
            rows = self.codomain.cells_of_dim(k)
            cols = self.domain.cells_of_dim(k)
            rpos = {c: i for i, c in enumerate(rows)}
            m = QMatrix.zeros(len(rows), len(cols))
            for j, cid in enumerate(cols):
                img = self.assignment[cid]
                if self.codomain.dim(img) == k:
                    m.data[rpos[img]][j] += self.sign(cid)
            out[k] = m
        return out

    def _check_chain_map(self):
        mats = self.chain_matrices()
        for k in range(1, max(self.domain.top_dim(),
                              self.codomain.top_dim()) + 1):
            bd_dom = self.domain.boundary_matrix(k)
            bd_cod = self.codomain.boundary_matrix(k)
            lhs = bd_cod @ mats[k]
            rhs = mats[k - 1] @ bd_dom
            if not (lhs - rhs).is_zero():
                raise ValidationError(
                    "map %s: signed chain map does not commute with the "
                    "boundary in dimension %d" % (self.name, k))

    def fixed_cells(self):
        """Cells fixed together with their whole closure, with sign +1."""
        if self.domain is not self.codomain:
            return set()
        plain = {c for c in self.domain.cell_ids()
                 if self.assignment[c] == c and self.sign(c) == 1}
        return {c for c in plain
                if all(f in plain for f in self.domain.closure_of([c]))}


def identity_map(complex_):
    return CellularMap(complex_, complex_,
                       {c: c for c in complex_.cell_ids()},
                       {c: 1 for c in complex_.cell_ids()}, name="id")


def simplicial_map(domain, codomain, vertex_map, name="phi"):
    """Cellular map induced by a vertex assignment on simplicial complexes.

    Each cell must be the simplex on its vertex set (true for the builders
    in ``models``); orientation signs come from the sort permutation of the
    image vertices.
    """
    assignment = {}
    signs = {}
    vert_key = {}
    for cid in codomain.cell_ids():
        vert_key[tuple(codomain.vertices_of(cid))] = cid
    for cid in domain.cell_ids():
        verts = domain.vertices_of(cid)
        imgs = [vertex_map[v] for v in verts]
        distinct = sorted(set(imgs))
        key = tuple(distinct)
        if key not in vert_key:
            raise ValidationError("image simplex %r missing in codomain" % (key,))
        assignment[cid] = vert_key[key]
        if len(distinct) == len(imgs):
            signs[cid] = _permutation_sign(imgs)
    return CellularMap(domain, codomain, assignment, signs, name=name)


def _permutation_sign(values):
    sign = 1
    vals = list(values)
    for i in range(len(vals)):
        for j in range(i + 1, len(vals)):
            if vals[i] > vals[j]:
                sign = -sign
    return sign
