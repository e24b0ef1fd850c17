"""Independent brute-force solvers used to cross-check library output.

These deliberately avoid the library's evaluation and enumeration code:
polynomials are evaluated straight off their term maps by repeated
multiplication, Frobenius powers by literal p-fold products, and subfield
membership by its definition.  Only the base field arithmetic (verified
exhaustively in test_gf) is shared.
"""

import itertools
import math

from quasifix.gf import field_create


def naive_eval(f, point):
    field = point[0].field
    total = field.zero()
    for expo, c in f.terms.items():
        term = field.scalar(c)
        for a, e in zip(point, expo):
            for _ in range(e):
                term = term * a
        total = total + term
    return total


def naive_pth_power(a):
    acc = a.field.one()
    for _ in range(a.field.p):
        acc = acc * a
    return acc


def naive_frobenius(a, m):
    for _ in range(m):
        a = naive_pth_power(a)
    return a


def oracle_quasi_fixed(pmap, s_max):
    """Set of (s, m, coefficient-key) triples found by double-loop search."""
    out = set()
    n, p = pmap.nvars, pmap.p
    for s in range(1, s_max + 1):
        field = field_create(p, s)
        elems = list(field)
        frob_rows = {a.coeffs: [naive_frobenius(a, m) for m in range(1, s + 1)]
                     for a in elems}
        for point in itertools.product(elems, repeat=n):
            deg = 1
            for a in point:
                d = next(d for d in range(1, s + 1)
                         if s % d == 0 and frob_rows[a.coeffs][d - 1] == a)
                deg = deg * d // math.gcd(deg, d)
            if deg != s:
                continue
            values = [naive_eval(f, point) for f in pmap.coords]
            for m in range(1, s + 1):
                if all(v == frob_rows[a.coeffs][m - 1]
                       for v, a in zip(values, point)):
                    out.add((s, m, tuple(a.coeffs for a in point)))
                    break
    return out


def witness_key_set(witnesses):
    return {(w.field_degree, w.m, tuple(a.coeffs for a in w.point))
            for w in witnesses}
