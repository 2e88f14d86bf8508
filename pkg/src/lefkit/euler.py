"""Constructible functions and both Euler-integral conventions.

Cells are the finest strata, so a constructible function is a rational
value per cell.  Two integrals are implemented and never conflated:

* ``euler_integral_c``: the compactly-supported convention, weighting each
  cell by (-1)^dim; and
* ``euler_integral_open``: the open-set convention, weighting the indicator
  of each cell c by chi of the ordinary cohomology of U with coefficients
  in the extension of c's constant sheaf by zero.

They differ on noncompact strata (an open interval weighs -1 in the first
and its indicator integrates to 1 over itself in the second).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from .complexes import CellSet, OPEN, increasing_chains, whole_set
from .errors import PreconditionError
from .linalgq import endo_trace
from .sheaves import induced_endo, ordinary_endo, ordinary_complex, \
    sections_complex


@dataclass
class ConstructibleFunction:
    complex: object
    values: dict = field(default_factory=dict)

    def value(self, cid):
        return self.values.get(cid, Fraction(0))

    def set_value(self, cid, v):
        if cid not in self.complex.cells:
            raise PreconditionError("unknown cell %r" % cid)
        v = Fraction(v)
        if v == 0:
            self.values.pop(cid, None)
        else:
            self.values[cid] = v

    def support(self):
        return {c for c, v in self.values.items() if v != 0}

    def restrict(self, cell_set):
        out = ConstructibleFunction(self.complex)
        for cid in cell_set:
            v = self.value(cid)
            if v != 0:
                out.values[cid] = v
        return out

    def __add__(self, other):
        assert self.complex is other.complex
        out = ConstructibleFunction(self.complex, dict(self.values))
        for cid, v in other.values.items():
            out.set_value(cid, out.value(cid) + v)
        return out

    def __sub__(self, other):
        return self + other.scale(-1)

    def scale(self, s):
        s = Fraction(s)
        return ConstructibleFunction(
            self.complex, {c: s * v for c, v in self.values.items() if s * v})

    def as_table(self):
        cx = self.complex
        return [(cid, cx.dim(cid), self.value(cid))
                for cid in cx.cell_ids()]

    def __eq__(self, other):
        return (isinstance(other, ConstructibleFunction)
                and self.complex is other.complex
                and self.values == other.values)


def constant_function(complex_, value=1):
    value = Fraction(value)
    return ConstructibleFunction(
        complex_, {c: value for c in complex_.cell_ids()} if value else {})


def indicator_function(cell_set, value=1):
    value = Fraction(value)
    return ConstructibleFunction(
        cell_set.complex, {c: value for c in cell_set} if value else {})


# ---------------------------------------------------------------------------
# integrals
# ---------------------------------------------------------------------------

def chi_c(cell_set):
    """Compactly-supported Euler characteristic of a locally closed set."""
    if not isinstance(cell_set, CellSet):
        raise PreconditionError("chi_c needs a CellSet")
    return cell_set.chi_c()


def euler_integral_c(theta, cell_set=None):
    """Sum of theta(c) * (-1)^dim(c) over the cells of a locally closed set."""
    cx = theta.complex
    if cell_set is None:
        cell_set = whole_set(cx)
    if cell_set.complex is not cx:
        raise PreconditionError("function and cell set live on different "
                                "complexes")
    total = Fraction(0)
    for cid in cell_set:
        v = theta.value(cid)
        if v != 0:
            total += v * (-1) ** cx.dim(cid)
    return total


def open_weights(complex_, u_set):
    """chi(RGamma(U; Q_c)) for every cell c of the open set U.

    Computed combinatorially: the chain model of RGamma(U; Q_c) has one
    summand per strictly increasing chain in U ending at c, in degree
    (length - 1), so the weight is the alternating chain count.  Weights
    satisfy N_c = 1 - sum of N_s over s < c in U.
    """
    if u_set.kind != OPEN:
        raise PreconditionError("open-set integral needs an open cell set")
    order = sorted(u_set.cells,
                   key=lambda c: (complex_.dim(c), c))
    weights = {}
    for cid in order:
        below = complex_.closure_of([cid]) & u_set.cells
        weights[cid] = 1 - sum(weights[s] for s in below if s != cid)
    return weights


def euler_integral_open(theta, u_set):
    """Open-set convention: sum of theta(c) * chi(RGamma(U; Q_c))."""
    cx = theta.complex
    if u_set.complex is not cx:
        raise PreconditionError("function and cell set live on different "
                                "complexes")
    weights = open_weights(cx, u_set)
    return sum((theta.value(c) * w for c, w in weights.items()), Fraction(0))


# ---------------------------------------------------------------------------
# trace functions
# ---------------------------------------------------------------------------

def local_trace_function(sheaf, hom, fixed_set):
    """Pointwise traces tr(Phi_c) on a set of phi-fixed cells."""
    phi = hom.map
    out = ConstructibleFunction(sheaf.complex)
    for cid in fixed_set:
        if phi(cid) != cid or phi.sign(cid) != 1:
            raise PreconditionError("cell %r is not fixed by the map" % cid)
        out.set_value(cid, hom.comp(cid).trace())
    return out


def trace_restricted(sheaf, hom, fixed_set):
    """Restricted trace over a closed union of fixed cells, both ways.

    Returns (value, via_integral, via_sections): the chi_c-weighted integral
    of the stalkwise traces and the direct alternating trace of Phi on the
    sections complex of F restricted to the subcomplex; they must agree.
    """
    cx = sheaf.complex
    support_cells = sheaf.support() & set(fixed_set.cells)
    closure = cx.closure_of(support_cells)
    if not closure <= set(fixed_set.cells):
        raise PreconditionError(
            "support of F on the component is not compact inside it")
    theta = local_trace_function(sheaf, hom, fixed_set)
    via_integral = euler_integral_c(theta, fixed_set)
    closed = CellSet(cx, frozenset(fixed_set.cells), "closed")
    model = sections_complex(sheaf, closed)
    endo = induced_endo(sheaf, hom, closed, model)
    report = endo_trace(model.complex, endo)
    if report.alternating_sum != via_integral:
        raise PreconditionError(
            "restricted-trace routes disagree: integral %s vs sections %s"
            % (via_integral, report.alternating_sum))
    return via_integral, via_integral, report.alternating_sum


def open_trace(sheaf, hom, u_set):
    """Alternating trace of the endomorphism on RGamma(U; F) (chain model)."""
    model = ordinary_complex(sheaf, u_set)
    endo = ordinary_endo(sheaf, hom, u_set, model)
    return endo_trace(model.complex, endo)


def fibered_global_trace(base_complex, fiber_traces):
    """Global trace of a fiberwise datum over a base: the chi_c-weighted
    integral of the per-base-cell fiber traces.

    ``fiber_traces`` is a ConstructibleFunction on the base carrying the
    trace of each fiber's compactly-supported endomorphism.
    """
    if fiber_traces.complex is not base_complex:
        raise PreconditionError("fiber traces live on a different base")
    return euler_integral_c(fiber_traces, whole_set(base_complex))
