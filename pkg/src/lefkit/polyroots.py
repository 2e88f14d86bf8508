"""Exact root location for rational polynomials.

Polynomials are coefficient lists in increasing degree order with
``fractions.Fraction`` entries.  Two kinds of certificates are produced:

* Sturm counts of distinct real roots in rational intervals, and
* Schur-Cohn counts of roots inside the open unit disk (with multiplicity),
  together with the count for the reciprocal polynomial.

Irreducible factorization over Q is delegated to sympy; every decision is
made in exact rational arithmetic.
"""

from __future__ import annotations

from fractions import Fraction

import sympy

from .errors import PreconditionError

_LAM = sympy.Symbol("lam")


class SchurCohnSingular(PreconditionError):
    """The Schur-Cohn reduction hit |a_0| = |a_n| at some step."""


# ---------------------------------------------------------------------------
# basic polynomial arithmetic over Q
# ---------------------------------------------------------------------------

def poly_trim(p):
    p = list(p)
    while p and p[-1] == 0:
        p.pop()
    return p


def poly_degree(p):
    p = poly_trim(p)
    return len(p) - 1 if p else -1


def poly_eval(p, x):
    acc = Fraction(0)
    for c in reversed(poly_trim(p)):
        acc = acc * x + c
    return acc


def poly_neg(p):
    return [-c for c in p]


def poly_mul(p, q):
    p, q = poly_trim(p), poly_trim(q)
    if not p or not q:
        return []
    out = [Fraction(0)] * (len(p) + len(q) - 1)
    for i, a in enumerate(p):
        for j, b in enumerate(q):
            out[i + j] += a * b
    return out


def poly_pow(p, k):
    out = [Fraction(1)]
    for _ in range(k):
        out = poly_mul(out, p)
    return out


def poly_derivative(p):
    return [Fraction(i) * c for i, c in enumerate(poly_trim(p))][1:]


def poly_divmod(p, q):
    p, q = poly_trim(p), poly_trim(q)
    if not q:
        raise ZeroDivisionError("polynomial division by zero")
    quot = [Fraction(0)] * max(0, len(p) - len(q) + 1)
    rem = list(p)
    lead = q[-1]
    while True:
        rem = poly_trim(rem)
        if len(rem) < len(q):
            break
        k = len(rem) - len(q)
        c = rem[-1] / lead
        quot[k] = c
        for i, b in enumerate(q):
            rem[k + i] -= c * b
        rem = rem[:-1]
    return poly_trim(quot), poly_trim(rem)


def poly_gcd(p, q):
    a, b = poly_trim(p), poly_trim(q)
    while b:
        a, b = b, poly_divmod(a, b)[1]
    if a:
        a = [c / a[-1] for c in a]
    return a


def poly_squarefree_part(p):
    p = poly_trim(p)
    if poly_degree(p) <= 0:
        return p
    g = poly_gcd(p, poly_derivative(p))
    if poly_degree(g) <= 0:
        return p
    return poly_divmod(p, g)[0]


def reciprocal(p):
    """z^n * p(1/z), i.e. the coefficient list reversed."""
    return poly_trim(list(reversed(poly_trim(p))))


def poly_compose_scale(p, t):
    """p(t*z) for rational t."""
    out, power = [], Fraction(1)
    for c in poly_trim(p):
        out.append(c * power)
        power *= t
    return poly_trim(out)


def poly_from_sympy(expr):
    sp = sympy.Poly(expr, _LAM)
    coeffs = list(reversed(sp.all_coeffs()))
    return [Fraction(sympy.Rational(c).p, sympy.Rational(c).q) for c in coeffs]


def poly_to_sympy(p):
    return sum(sympy.Rational(c.numerator, c.denominator) * _LAM ** i
               for i, c in enumerate(poly_trim(p)))


def factor_over_q(p):
    """Irreducible factorization over Q: list of (monic factor, multiplicity).

    The constant content is dropped; the product of the returned factors to
    their multiplicities is p divided by its leading coefficient.
    """
    p = poly_trim(p)
    if poly_degree(p) < 1:
        return []
    _, factors = sympy.factor_list(poly_to_sympy(p), _LAM)
    out = []
    for f, mult in factors:
        coeffs = poly_from_sympy(f)
        lead = coeffs[-1]
        out.append(([c / lead for c in coeffs], int(mult)))
    out.sort(key=lambda fm: (poly_degree(fm[0]), fm[0]))
    return out


# ---------------------------------------------------------------------------
# Sturm counts
# ---------------------------------------------------------------------------

def sturm_chain(p):
    p = poly_squarefree_part(p)
    chain = [p, poly_derivative(p)]
    while poly_trim(chain[-1]):
        rem = poly_divmod(chain[-2], chain[-1])[1]
        chain.append(poly_neg(rem))
    return chain[:-1]


def _sign_variations(values):
    signs = [(-1 if v < 0 else 1) for v in values if v != 0]
    return sum(1 for a, b in zip(signs, signs[1:]) if a != b)


def _variations_at(chain, x):
    if x == "-inf":
        vals = [(-1) ** poly_degree(f) * f[-1] for f in chain if f]
    elif x == "+inf":
        vals = [f[-1] for f in chain if f]
    else:
        vals = [poly_eval(f, x) for f in chain]
    return _sign_variations(vals)


def count_real_roots(p, lo="-inf", hi="+inf", closed_lo=False, closed_hi=False):
    """Distinct real roots of p in the interval (lo, hi), endpoints optional.

    lo and hi are rationals or the strings "-inf"/"+inf".
    """
    p = poly_trim(p)
    if not p:
        raise PreconditionError("cannot count roots of the zero polynomial")
    if poly_degree(p) == 0:
        return 0
    chain = sturm_chain(p)
    count = _variations_at(chain, lo) - _variations_at(chain, hi)
    # Sturm counts (lo, hi]; fix up endpoint membership exactly.
    if hi not in ("-inf", "+inf") and poly_eval(p, hi) == 0 and not closed_hi:
        count -= 1
    if lo not in ("-inf", "+inf") and poly_eval(p, lo) == 0 and closed_lo:
        count += 1
    return count


# ---------------------------------------------------------------------------
# Schur-Cohn unit-disk counts
# ---------------------------------------------------------------------------

def schur_cohn_inside(p):
    """Roots of p strictly inside the unit disk, with multiplicity.

    Raises SchurCohnSingular when the reduction degenerates; callers that
    have excluded circle roots may fall back to ``count_inside_unit_disk``.
    """
    p = poly_trim(p)
    n = poly_degree(p)
    if n < 0:
        raise PreconditionError("zero polynomial")
    inside = 0
    while p[0] == 0:  # roots at the origin are inside
        inside += 1
        p = p[1:]
        n -= 1
    if n == 0:
        return inside
    a0, an = p[0], p[-1]
    if abs(a0) == abs(an):
        raise SchurCohnSingular(
            "Schur-Cohn reduction degenerated (|a0| = |an|)")
    # T p = a0 * p - an * rev(p).  On |z| = 1, |rev p| = |p|, so by Rouche:
    #   |a0| > |an|: inside(Tp) = inside(p)
    #   |a0| < |an|: inside(Tp) = inside(rev p) = n - inside(p)
    q = poly_trim([a0 * p[i] - an * p[n - i] for i in range(n)])
    assert q and q[0] != 0  # constant term is a0^2 - an^2 != 0
    sub = schur_cohn_inside(q)
    return inside + ((n - sub) if abs(a0) < abs(an) else sub)


def _unit_gap_radius(p):
    """A rational t in (0, 1) with no root modulus of p in [t, 1).

    Uses the pairwise-product polynomial R(u) = Res_z(p(z), z^n p(u/z)),
    whose real roots include every squared root modulus, then Sturm-counts
    a window (t^2, 1) free of them.
    """
    n = poly_degree(p)
    z, u = sympy.symbols("z u")
    ps = sum(sympy.Rational(c.numerator, c.denominator) * z ** i
             for i, c in enumerate(poly_trim(p)))
    qs = sympy.expand(z ** n * ps.subs(z, u / z))
    res = sympy.resultant(sympy.Poly(ps, z), sympy.Poly(qs, z), z)
    rcoeffs = list(reversed(sympy.Poly(sympy.expand(res), u).all_coeffs()))
    rpoly = [Fraction(sympy.Rational(c).p, sympy.Rational(c).q)
             for c in rcoeffs]
    t = Fraction(1, 2)
    while True:
        if count_real_roots(rpoly, t * t, Fraction(1), closed_lo=True) == 0:
            return t
        t = (t + 1) / 2


def count_inside_unit_disk(p):
    """Roots strictly inside the unit disk for p with no roots ON the circle.

    Tries the plain Schur-Cohn reduction and, when it degenerates, reruns it
    on p(t z) for certified radii t < 1 with no root modulus in [t, 1).
    """
    try:
        return schur_cohn_inside(p)
    except SchurCohnSingular:
        pass
    t = _unit_gap_radius(p)
    for _ in range(64):
        try:
            return schur_cohn_inside(poly_compose_scale(p, t))
        except SchurCohnSingular:
            t = (t + 1) / 2  # still in the certified root-free window
    raise PreconditionError("unit-disk root count did not stabilize")


def is_self_reciprocal(p):
    p = poly_trim(p)
    r = reciprocal(p)
    if len(r) != len(p):
        return False
    scaled = [c * p[-1] / r[-1] for c in r]
    return scaled == p


def trace_polynomial(p):
    """For self-reciprocal p of even degree 2m, the polynomial P with
    p(z)/z^m = P(z + 1/z).  Roots of p on the unit circle correspond to
    real roots of P in [-2, 2]."""
    p = poly_trim(p)
    n = poly_degree(p)
    if n % 2 != 0 or not is_self_reciprocal(p):
        raise PreconditionError("trace polynomial needs a self-reciprocal "
                                "polynomial of even degree")
    m = n // 2
    # Chebyshev-like basis: z^k + z^-k = T_k(z + 1/z), T_{k+1} = u T_k - T_{k-1}
    basis = [[Fraction(2)], [Fraction(0), Fraction(1)]]
    while len(basis) <= m:
        shifted = [Fraction(0)] + basis[-1]
        prev = basis[-2] + [Fraction(0)] * (len(shifted) - len(basis[-2]))
        basis.append(poly_trim([a - b for a, b in zip(shifted, prev)]))
    out = [Fraction(0)] * (m + 1)
    out[0] += p[m]
    for k in range(1, m + 1):
        for i, c in enumerate(basis[k]):
            out[i] += p[m + k] * c
    return poly_trim(out)


def circle_root_count(p):
    """Distinct roots of p on the unit circle, exactly.

    Only self-reciprocal polynomials can have circle roots; for those the
    count reduces to a Sturm count of the trace polynomial on [-2, 2].
    """
    p = poly_squarefree_part(poly_trim(p))
    count = 0
    for val, point in ((poly_eval(p, 1), 1), (poly_eval(p, -1), -1)):
        if val == 0:
            count += 1
            p = poly_divmod(p, [Fraction(-point), Fraction(1)])[0]
    if poly_degree(p) < 1:
        return count
    if not is_self_reciprocal(p):
        g = poly_gcd(p, reciprocal(p))
        if poly_degree(g) < 1:
            return count
        return count + circle_root_count(g)
    tr = trace_polynomial(p)
    return count + 2 * count_real_roots(tr, Fraction(-2), Fraction(2))
