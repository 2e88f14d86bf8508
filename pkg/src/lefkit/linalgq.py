"""Exact rational linear algebra and spectral classification.

Everything here is over Q with ``fractions.Fraction`` entries.  Ranks and
determinants go through fraction-free (Bareiss) elimination on an integer
scaling of the matrix; solves and kernels use plain Gauss-Jordan over Q.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import gcd

from .errors import PreconditionError, ValidationError
from . import polyroots
from .polyroots import (
    count_inside_unit_disk,
    count_real_roots,
    circle_root_count,
    factor_over_q,
    poly_degree,
    poly_eval,
    poly_pow,
    poly_trim,
)


def _frac(x):
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, str):
        return Fraction(x)
    raise TypeError("rational entry expected, got %r" % (x,))


class QMatrix:
    """Dense matrix over Q."""

    __slots__ = ("rows", "cols", "data")

    def __init__(self, rows, cols, data=None):
        self.rows = rows
        self.cols = cols
        if data is None:
            self.data = [[Fraction(0)] * cols for _ in range(rows)]
        else:
            if len(data) != rows or any(len(r) != cols for r in data):
                raise ValueError("shape mismatch")
            self.data = [[_frac(x) for x in row] for row in data]

    @classmethod
    def from_rows(cls, data):
        rows = len(data)
        cols = len(data[0]) if rows else 0
        return cls(rows, cols, data)

    @classmethod
    def identity(cls, n):
        m = cls(n, n)
        for i in range(n):
            m.data[i][i] = Fraction(1)
        return m

    @classmethod
    def zeros(cls, rows, cols):
        return cls(rows, cols)

    def copy(self):
        return QMatrix(self.rows, self.cols, [row[:] for row in self.data])

    def __getitem__(self, ij):
        return self.data[ij[0]][ij[1]]

    def __setitem__(self, ij, v):
        self.data[ij[0]][ij[1]] = _frac(v)

    def __eq__(self, other):
        return (isinstance(other, QMatrix) and self.rows == other.rows
                and self.cols == other.cols and self.data == other.data)

    def __repr__(self):
        return "QMatrix(%d x %d)" % (self.rows, self.cols)

    def __add__(self, other):
        assert self.rows == other.rows and self.cols == other.cols
        return QMatrix(self.rows, self.cols,
                       [[a + b for a, b in zip(r1, r2)]
                        for r1, r2 in zip(self.data, other.data)])

    def __sub__(self, other):
        assert self.rows == other.rows and self.cols == other.cols
        return QMatrix(self.rows, self.cols,
                       [[a - b for a, b in zip(r1, r2)]
                        for r1, r2 in zip(self.data, other.data)])

    def __neg__(self):
        return QMatrix(self.rows, self.cols,
                       [[-a for a in row] for row in self.data])

    def scale(self, s):
        s = _frac(s)
        return QMatrix(self.rows, self.cols,
                       [[s * a for a in row] for row in self.data])

    def __matmul__(self, other):
        if self.cols != other.rows:
            raise ValueError("dimension mismatch in matrix product")
        out = QMatrix(self.rows, other.cols)
        for i in range(self.rows):
            srow = self.data[i]
            orow = out.data[i]
            for k in range(self.cols):
                a = srow[k]
                if a == 0:
                    continue
                brow = other.data[k]
                for j in range(other.cols):
                    if brow[j] != 0:
                        orow[j] += a * brow[j]
        return out

    def mul_vec(self, v):
        assert len(v) == self.cols
        return [sum((row[j] * v[j] for j in range(self.cols)), Fraction(0))
                for row in self.data]

    def transpose(self):
        return QMatrix(self.cols, self.rows,
                       [[self.data[i][j] for i in range(self.rows)]
                        for j in range(self.cols)])

    def is_zero(self):
        return all(a == 0 for row in self.data for a in row)

    def column(self, j):
        return [self.data[i][j] for i in range(self.rows)]

    def columns(self):
        return [self.column(j) for j in range(self.cols)]

    @classmethod
    def from_columns(cls, cols, rows=None):
        if not cols:
            return cls(rows or 0, 0)
        rows = len(cols[0])
        return cls(rows, len(cols),
                   [[cols[j][i] for j in range(len(cols))]
                    for i in range(rows)])

    def hstack(self, other):
        assert self.rows == other.rows
        return QMatrix(self.rows, self.cols + other.cols,
                       [r1 + r2 for r1, r2 in zip(self.data, other.data)])

    def trace(self):
        assert self.rows == self.cols
        return sum((self.data[i][i] for i in range(self.rows)), Fraction(0))

    # -- elimination ------------------------------------------------------

    def _int_rows(self):
        """Rows scaled to integers (rank/det are insensitive to row scaling
        up to tracked sign)."""
        out = []
        sign_flip = 1
        for row in self.data:
            denom = 1
            for a in row:
                denom = denom * a.denominator // gcd(denom, a.denominator)
            out.append([int(a * denom) for a in row])
            # row scaling by denom > 0 never flips the det sign
        return out, sign_flip

    def rank(self):
        m, _ = self._int_rows()
        rows, cols = self.rows, self.cols
        r = 0
        prev = 1
        for c in range(cols):
            piv = None
            for i in range(r, rows):
                if m[i][c] != 0:
                    piv = i
                    break
            if piv is None:
                continue
            m[r], m[piv] = m[piv], m[r]
            for i in range(r + 1, rows):
                for j in range(c + 1, cols):
                    m[i][j] = (m[r][c] * m[i][j] - m[i][c] * m[r][j]) // prev
                m[i][c] = 0
            prev = m[r][c]
            r += 1
            if r == rows:
                break
        return r

    def det(self):
        assert self.rows == self.cols
        n = self.rows
        if n == 0:
            return Fraction(1)
        m = [row[:] for row in self.data]
        det = Fraction(1)
        for c in range(n):
            piv = None
            for i in range(c, n):
                if m[i][c] != 0:
                    piv = i
                    break
            if piv is None:
                return Fraction(0)
            if piv != c:
                m[c], m[piv] = m[piv], m[c]
                det = -det
            det *= m[c][c]
            inv = 1 / m[c][c]
            for i in range(c + 1, n):
                f = m[i][c] * inv
                if f == 0:
                    continue
                for j in range(c, n):
                    m[i][j] -= f * m[c][j]
        return det

    def rref(self):
        """Reduced row echelon form; returns (matrix, pivot column list)."""
        m = [row[:] for row in self.data]
        pivots = []
        r = 0
        for c in range(self.cols):
            piv = None
            for i in range(r, self.rows):
                if m[i][c] != 0:
                    piv = i
                    break
            if piv is None:
                continue
            m[r], m[piv] = m[piv], m[r]
            inv = 1 / m[r][c]
            m[r] = [a * inv for a in m[r]]
            for i in range(self.rows):
                if i != r and m[i][c] != 0:
                    f = m[i][c]
                    m[i] = [a - f * b for a, b in zip(m[i], m[r])]
            pivots.append(c)
            r += 1
            if r == self.rows:
                break
        return QMatrix(self.rows, self.cols, m), pivots

    def kernel_basis(self):
        """Columns spanning ker(self)."""
        red, pivots = self.rref()
        free = [j for j in range(self.cols) if j not in pivots]
        basis = []
        for f in free:
            v = [Fraction(0)] * self.cols
            v[f] = Fraction(1)
            for r, c in enumerate(pivots):
                v[c] = -red.data[r][f]
            basis.append(v)
        return QMatrix.from_columns(basis, rows=self.cols)

    def solve(self, rhs):
        """Solve self @ X = rhs exactly; raises if inconsistent.

        rhs is a QMatrix with matching row count; one solution is returned
        (free variables set to zero).
        """
        assert rhs.rows == self.rows
        aug = self.hstack(rhs)
        red, pivots = aug.rref()
        for piv_row, c in enumerate(pivots):
            if c >= self.cols:
                raise PreconditionError("inconsistent linear system")
        x = QMatrix(self.cols, rhs.cols)
        for r, c in enumerate(pivots):
            for j in range(rhs.cols):
                x.data[c][j] = red.data[r][self.cols + j]
        return x

    def in_column_span(self, vectors):
        """True iff every column of ``vectors`` lies in span(columns of self)."""
        if vectors.cols == 0:
            return True
        try:
            self.solve(vectors)
            return True
        except PreconditionError:
            return False

    def char_poly(self):
        """Characteristic polynomial det(lam*I - A) by Faddeev-LeVerrier,
        as an increasing-degree coefficient list."""
        assert self.rows == self.cols
        n = self.rows
        coeffs = [Fraction(0)] * (n + 1)
        coeffs[n] = Fraction(1)
        m = QMatrix.identity(n)
        a = self
        for k in range(1, n + 1):
            am = a @ m
            c = -am.trace() / k
            coeffs[n - k] = c
            m = am + QMatrix.identity(n).scale(c)
        return poly_trim(coeffs)


def block_diag(blocks):
    rows = sum(b.rows for b in blocks)
    cols = sum(b.cols for b in blocks)
    out = QMatrix(rows, cols)
    r0 = c0 = 0
    for b in blocks:
        for i in range(b.rows):
            out.data[r0 + i][c0:c0 + b.cols] = [x for x in b.data[i]]
        r0 += b.rows
        c0 += b.cols
    return out


# ---------------------------------------------------------------------------
# graded cochain complexes
# ---------------------------------------------------------------------------

@dataclass
class GradedComplex:
    """Cochain complex: dims per degree, differential d_k : C^k -> C^(k+1)."""

    dims: dict
    differentials: dict  # degree k -> QMatrix of shape (dims[k+1], dims[k])

    def degrees(self):
        return sorted(d for d, n in self.dims.items() if n > 0) or [0]

    def dim(self, k):
        return self.dims.get(k, 0)

    def differential(self, k):
        d = self.differentials.get(k)
        if d is None:
            d = QMatrix.zeros(self.dim(k + 1), self.dim(k))
        return d

    def validate(self):
        for k in list(self.dims):
            d_k = self.differential(k)
            if d_k.rows != self.dim(k + 1) or d_k.cols != self.dim(k):
                raise ValidationError("differential at degree %d has shape "
                                      "%dx%d, expected %dx%d"
                                      % (k, d_k.rows, d_k.cols,
                                         self.dim(k + 1), self.dim(k)))
            if self.dim(k + 2) and self.dim(k):
                if not (self.differential(k + 1) @ d_k).is_zero():
                    raise ValidationError(
                        "d o d != 0 between degrees %d and %d" % (k, k + 2))
        return self

    def euler_characteristic(self):
        return sum((-1) ** k * n for k, n in self.dims.items())

    def cohomology_dims(self):
        out = {}
        for k in self._span():
            if self.dim(k) == 0:
                continue
            rk_k = self.differential(k).rank() if self.dim(k + 1) else 0
            rk_prev = (self.differential(k - 1).rank()
                       if self.dim(k - 1) else 0)
            h = self.dim(k) - rk_k - rk_prev
            if h:
                out[k] = h
        return out

    def _span(self):
        if not self.dims:
            return []
        lo = min(self.dims)
        hi = max(self.dims)
        return range(lo, hi + 1)

    def cohomology(self):
        """Per-degree dimension plus a realization of cohomology classes.

        Returns {degree: (dim, reps, project)} where ``reps`` has columns
        giving cocycle representatives and ``project`` maps a cocycle in
        C^k to its coordinates in that basis modulo the image of d.
        """
        self.validate()
        out = {}
        for k in self._span():
            n = self.dim(k)
            if n == 0:
                continue
            kernel = self.differential(k).kernel_basis() if self.dim(k + 1) \
                else QMatrix.identity(n)
            image = (self.differential(k - 1)
                     if self.dim(k - 1) else QMatrix.zeros(n, 0))
            # pick kernel columns extending a basis of the image
            combined = image.hstack(kernel)
            _, pivots = combined.rref()
            rep_cols = [combined.column(j) for j in pivots if j >= image.cols]
            reps = QMatrix.from_columns(rep_cols, rows=n)
            basis = reps.hstack(image)

            def project(vec_matrix, _basis=basis, _h=reps.cols):
                sol = _basis.solve(vec_matrix)
                return QMatrix(_h, vec_matrix.cols,
                               [sol.data[i] for i in range(_h)])

            out[k] = (reps.cols, reps, project)
        return out

    def induced_on_cohomology(self, endo):
        """Matrices of a commuting chain endomorphism on each H^k."""
        coh = self.cohomology()
        out = {}
        for k, (h, reps, project) in coh.items():
            if h == 0:
                out[k] = QMatrix.zeros(0, 0)
                continue
            e_k = endo.get(k, QMatrix.zeros(self.dim(k), self.dim(k)))
            out[k] = project(e_k @ reps)
        return out


def check_chain_endo(complex_, endo):
    """Exact check that endo commutes with the differentials."""
    for k in complex_._span():
        n, n1 = complex_.dim(k), complex_.dim(k + 1)
        if n == 0 or n1 == 0:
            continue
        d_k = complex_.differential(k)
        e_k = endo.get(k, QMatrix.zeros(n, n))
        e_k1 = endo.get(k + 1, QMatrix.zeros(n1, n1))
        if not (d_k @ e_k - e_k1 @ d_k).is_zero():
            raise PreconditionError(
                "chain endomorphism does not commute with d at degree %d" % k)


@dataclass
class TraceReport:
    cochain_traces: dict
    cohomology_traces: dict
    alternating_sum: Fraction

    def cochain_alternating(self):
        return sum(((-1) ** k * t for k, t in self.cochain_traces.items()),
                   Fraction(0))


def endo_trace(complex_, endo):
    """Per-degree cochain and cohomology traces of a chain endomorphism.

    Returns a TraceReport; Hopf equality of the two alternating sums is
    asserted (it is a theorem, so a failure means corrupted input and is
    reported as a validation error).
    """
    complex_.validate()
    check_chain_endo(complex_, endo)
    cochain = {}
    for k in complex_._span():
        n = complex_.dim(k)
        if n == 0:
            continue
        e_k = endo.get(k)
        cochain[k] = e_k.trace() if e_k is not None else Fraction(0)
    coh = {k: m.trace() for k, m in complex_.induced_on_cohomology(endo).items()}
    alt_cochain = sum(((-1) ** k * t for k, t in cochain.items()), Fraction(0))
    alt_coh = sum(((-1) ** k * t for k, t in coh.items()), Fraction(0))
    if alt_cochain != alt_coh:
        raise ValidationError("Hopf trace identity violated: cochain %s vs "
                              "cohomology %s" % (alt_cochain, alt_coh))
    return TraceReport(cochain, coh, alt_coh)


def cohomology(complex_):
    """Per-degree cohomology dimensions plus class realizations."""
    coh = complex_.cohomology()
    return {k: v[0] for k, v in coh.items() if v[0] > 0}, coh


def mapping_cone_shifted(f, source, target, endo_source=None, endo_target=None):
    """cone(f)[-1] for a chain map f: source -> target.

    Degree k of the result is source^k (+) target^(k-1), with differential
    (a, b) -> (d a, f a - d b).  When endomorphisms commuting with f are
    supplied, the induced endomorphism diag(e_src, e_tgt) is returned too.
    """
    degrees = set(source.dims) | {k + 1 for k in target.dims}
    dims = {}
    for k in degrees:
        n = source.dim(k) + target.dim(k - 1)
        if n:
            dims[k] = n
    diffs = {}
    for k in sorted(dims):
        rows = source.dim(k + 1) + target.dim(k)
        cols = source.dim(k) + target.dim(k - 1)
        if rows == 0 or cols == 0:
            continue
        m = QMatrix.zeros(rows, cols)
        ds = source.differential(k)
        for i in range(ds.rows):
            for j in range(ds.cols):
                m.data[i][j] = ds.data[i][j]
        fk = f.get(k)
        if fk is not None:
            for i in range(fk.rows):
                for j in range(fk.cols):
                    m.data[source.dim(k + 1) + i][j] = fk.data[i][j]
        dt = target.differential(k - 1)
        for i in range(dt.rows):
            for j in range(dt.cols):
                m.data[source.dim(k + 1) + i][source.dim(k) + j] = -dt.data[i][j]
        diffs[k] = m
    cone = GradedComplex(dims, diffs)
    if endo_source is None:
        return cone, None
    endo = {}
    for k in dims:
        e = QMatrix.zeros(dims[k], dims[k])
        es = endo_source.get(k)
        if es is not None:
            for i in range(es.rows):
                for j in range(es.cols):
                    e.data[i][j] = es.data[i][j]
        et = (endo_target or {}).get(k - 1)
        if et is not None:
            off = source.dim(k)
            for i in range(et.rows):
                for j in range(et.cols):
                    e.data[off + i][off + j] = et.data[i][j]
        endo[k] = e
    return cone, endo


# ---------------------------------------------------------------------------
# spectral classification
# ---------------------------------------------------------------------------

# class tags for irreducible factors of a characteristic polynomial
REAL_GT1 = "real-in-(1,inf)"
REAL_01 = "real-in-(0,1)"
REAL_LE0 = "real-in-(-inf,0]"
EQUALS_1 = "equals-1"
EQUALS_0 = "equals-0"
COMPLEX_GT1 = "complex-modulus>1"
COMPLEX_LT1 = "complex-modulus<1"
UNIT_CIRCLE = "on-unit-circle"
MIXED = "mixed"


@dataclass
class FactorClass:
    poly: list
    multiplicity: int
    tag: str
    certificate: dict = field(default_factory=dict)

    @property
    def degree(self):
        return poly_degree(self.poly)


@dataclass
class SpectralClassification:
    size: int
    char_poly: list
    factors: list

    def tags(self):
        return {f.tag for f in self.factors}

    def has_eigenvalue_one(self):
        return poly_eval(self.char_poly, Fraction(1)) == 0

    def factors_with_tag(self, *tags):
        return [f for f in self.factors if f.tag in tags]

    def expanding_dimension(self):
        return sum(f.degree * f.multiplicity
                   for f in self.factors_with_tag(REAL_GT1))

    def signature(self):
        """Hashable summary used by classification-invariance checks."""
        return tuple(sorted((f.tag, f.degree, f.multiplicity)
                            for f in self.factors))


def _classify_factor(f, mult):
    """Classification tag for an irreducible monic factor over Q."""
    d = poly_degree(f)
    cert = {}
    if d == 1:
        root = -f[0]
        cert["root"] = root
        if root == 1:
            return FactorClass(f, mult, EQUALS_1, cert)
        if root == 0:
            return FactorClass(f, mult, EQUALS_0, cert)
        if root > 1:
            return FactorClass(f, mult, REAL_GT1, cert)
        if root > 0:
            return FactorClass(f, mult, REAL_01, cert)
        return FactorClass(f, mult, REAL_LE0, cert)
    n_real = count_real_roots(f)
    cert["sturm_real_roots"] = n_real
    if n_real > 0:
        # irrational real roots: homogeneous only if all roots are real
        # and sit in one region relative to {0, 1}
        gt1 = count_real_roots(f, Fraction(1), "+inf")
        in01 = count_real_roots(f, Fraction(0), Fraction(1))
        le0 = count_real_roots(f, "-inf", Fraction(0), closed_hi=True)
        cert.update(sturm_gt1=gt1, sturm_01=in01, sturm_le0=le0)
        if n_real == d:
            for region, tag in ((gt1, REAL_GT1), (in01, REAL_01),
                                (le0, REAL_LE0)):
                if region == d:
                    return FactorClass(f, mult, tag, cert)
        return FactorClass(f, mult, MIXED, cert)
    on_circle = circle_root_count(f)
    cert["circle_roots"] = on_circle
    if on_circle:
        tag = UNIT_CIRCLE if on_circle == d else MIXED
        return FactorClass(f, mult, tag, cert)
    inside = count_inside_unit_disk(f)
    outside = count_inside_unit_disk(polyroots.reciprocal(f))
    cert["schur_cohn_inside"] = inside
    cert["schur_cohn_reciprocal_inside"] = outside
    if inside + outside != d:
        raise ValidationError("Schur-Cohn counts inconsistent for factor %s"
                              % (f,))
    if inside == d:
        return FactorClass(f, mult, COMPLEX_LT1, cert)
    if outside == d:
        return FactorClass(f, mult, COMPLEX_GT1, cert)
    return FactorClass(f, mult, MIXED, cert)


def classify_spectrum(m):
    """Spectral classification of a square rational matrix.

    Total on square rational matrices.  Each irreducible factor of the
    characteristic polynomial gets a class tag; a factor whose roots do not
    fall in a single class is tagged "mixed" (operations whose correctness
    needs a homogeneous class fail fast on such factors).
    """
    if m.rows != m.cols:
        raise PreconditionError("classify_spectrum needs a square matrix")
    char = m.char_poly()
    factors = [_classify_factor(f, mult) for f, mult in factor_over_q(char)]
    cls = SpectralClassification(m.rows, char, factors)
    total = sum(f.degree * f.multiplicity for f in factors)
    assert total == m.rows
    return cls


def invariant_subspace(m, selected):
    """Basis of the sum of generalized eigenspaces of selected factors.

    ``selected`` is an iterable of FactorClass drawn from
    classify_spectrum(m).  Returns a QMatrix whose columns span the
    m-invariant subspace; the restriction of m has characteristic
    polynomial equal to the product of the selected factors (verified).
    """
    selected = list(selected)
    n = m.rows
    if not selected:
        return QMatrix.zeros(n, 0)
    cols = []
    for fac in selected:
        poly = poly_pow(fac.poly, fac.multiplicity)
        acc = QMatrix.zeros(n, n)
        power = QMatrix.identity(n)
        for c in poly:
            if c != 0:
                acc = acc + power.scale(c)
            power = power @ m
        ker = acc.kernel_basis()
        cols.extend(ker.columns())
    basis = QMatrix.from_columns(cols, rows=n)
    red, pivots = basis.rref()
    basis = QMatrix.from_columns([basis.column(j) for j in pivots], rows=n)
    expected_dim = sum(f.degree * f.multiplicity for f in selected)
    if basis.cols != expected_dim:
        raise ValidationError("generalized eigenspace dimension %d != %d"
                              % (basis.cols, expected_dim))
    restr = basis.solve(m @ basis)  # also certifies m-invariance
    expected = [Fraction(1)]
    for fac in selected:
        expected = polyroots.poly_mul(expected,
                                      poly_pow(fac.poly, fac.multiplicity))
    if poly_trim(restr.char_poly()) != poly_trim(expected):
        raise ValidationError("restricted characteristic polynomial mismatch")
    return basis


def restriction_matrix(m, basis):
    """Matrix of m on the invariant subspace spanned by basis columns."""
    if basis.cols == 0:
        return QMatrix.zeros(0, 0)
    return basis.solve(m @ basis)
