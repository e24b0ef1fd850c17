"""Multivariate polynomials over a prime field F_p.

Polynomials are sparse term maps from exponent vectors to nonzero residues,
kept canonical so equal polynomials compare equal.  Besides ring arithmetic
this module provides evaluation at extension-field points, symbolic
composition of coordinate maps, the characteristic-p power shortcut, and the
confluent rewriting system x_i^Q -> f_i that computes normal forms modulo
the ideal generated by f_i - x_i^Q.  The leading monomials x_i^Q are
pairwise coprime, so when Q exceeds every deg f_i the rewriting terminates
and the normal form is unique regardless of strategy.
"""

from __future__ import annotations

import re
from typing import Sequence

from .gf import FqElement, is_prime

DEFAULT_TERM_BUDGET = 10**6


class PolyError(ValueError):
    """Arity, characteristic, or system shape violation."""


class PolyParseError(ValueError):
    """Malformed polynomial text."""


class TermBudgetExceeded(RuntimeError):
    """A symbolic computation grew past the configured term limit."""


class MPoly:
    """Sparse polynomial in F_p[x_1..x_n]; immutable once constructed."""

    __slots__ = ("nvars", "p", "terms")

    def __init__(self, nvars: int, p: int, terms: dict[tuple[int, ...], int]):
        self.nvars = nvars
        self.p = p
        self.terms = {e: c % p for e, c in terms.items() if c % p}

    # -- constructors

    @classmethod
    def zero(cls, nvars: int, p: int) -> "MPoly":
        return cls(nvars, p, {})

    @classmethod
    def const(cls, c: int, nvars: int, p: int) -> "MPoly":
        return cls(nvars, p, {(0,) * nvars: c})

    @classmethod
    def var(cls, index: int, nvars: int, p: int) -> "MPoly":
        """The variable x_index, 1-based."""
        if not 1 <= index <= nvars:
            raise PolyError(f"variable index {index} out of range 1..{nvars}")
        expo = tuple(1 if i == index - 1 else 0 for i in range(nvars))
        return cls(nvars, p, {expo: 1})

    @classmethod
    def monomial(cls, c: int, exponents: Sequence[int], p: int) -> "MPoly":
        return cls(len(exponents), p, {tuple(exponents): c})

    # -- ring structure

    def _check(self, other: "MPoly") -> None:
        if self.nvars != other.nvars or self.p != other.p:
            raise PolyError("operands live in different polynomial rings")

    def __add__(self, other: "MPoly") -> "MPoly":
        self._check(other)
        terms = dict(self.terms)
        for e, c in other.terms.items():
            terms[e] = terms.get(e, 0) + c
        return MPoly(self.nvars, self.p, terms)

    def __neg__(self) -> "MPoly":
        return MPoly(self.nvars, self.p, {e: -c for e, c in self.terms.items()})

    def __sub__(self, other: "MPoly") -> "MPoly":
        return self + (-other)

    def __mul__(self, other: "MPoly") -> "MPoly":
        self._check(other)
        if len(self.terms) * len(other.terms) > DEFAULT_TERM_BUDGET:
            raise TermBudgetExceeded(
                f"product of {len(self.terms)} x {len(other.terms)} terms over budget")
        terms: dict[tuple[int, ...], int] = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                terms[e] = terms.get(e, 0) + c1 * c2
        return MPoly(self.nvars, self.p, terms)

    def scale(self, c: int) -> "MPoly":
        return MPoly(self.nvars, self.p, {e: c * v for e, v in self.terms.items()})

    def __pow__(self, e: int) -> "MPoly":
        if e < 0:
            raise PolyError("negative polynomial power")
        result = MPoly.const(1, self.nvars, self.p)
        base = self
        while e:
            if e & 1:
                result = result * base
            base = base * base if e > 1 else base
            e >>= 1
        return result

    def is_zero(self) -> bool:
        return not self.terms

    def total_degree(self) -> int:
        """Total degree; the zero polynomial reports -1."""
        if not self.terms:
            return -1
        return max(sum(e) for e in self.terms)

    def __eq__(self, other: object) -> bool:
        return (isinstance(other, MPoly) and self.nvars == other.nvars
                and self.p == other.p and self.terms == other.terms)

    def __hash__(self) -> int:
        return hash((self.nvars, self.p, frozenset(self.terms.items())))

    def __repr__(self) -> str:
        return f"MPoly({self.to_text()!r}, nvars={self.nvars}, p={self.p})"

    # -- evaluation and substitution

    def evaluate(self, point: Sequence[FqElement]) -> FqElement:
        """Exact value at a point over any extension of F_p."""
        if len(point) != self.nvars:
            raise PolyError(f"point has {len(point)} coordinates, expected {self.nvars}")
        field = point[0].field
        if field.p != self.p:
            raise PolyError(f"point characteristic {field.p} != coefficient characteristic {self.p}")
        for a in point:
            if a.field != field:
                raise PolyError("point coordinates belong to different fields")
        # cache coordinate powers up to the largest exponent that occurs
        powers: list[list[FqElement]] = []
        max_expo = [0] * self.nvars
        for e in self.terms:
            for i, ei in enumerate(e):
                if ei > max_expo[i]:
                    max_expo[i] = ei
        for i, a in enumerate(point):
            row = [field.one()]
            for _ in range(max_expo[i]):
                row.append(row[-1] * a)
            powers.append(row)
        acc = field.zero()
        for e, c in self.terms.items():
            term = field.scalar(c)
            for i, ei in enumerate(e):
                if ei:
                    term = term * powers[i][ei]
            acc = acc + term
        return acc

    def substitute(self, polys: Sequence["MPoly"]) -> "MPoly":
        """self(g_1, ..., g_n) as a polynomial in the g's variables."""
        if len(polys) != self.nvars:
            raise PolyError(f"substitution needs {self.nvars} polynomials, got {len(polys)}")
        inner_nvars = polys[0].nvars
        for g in polys:
            if g.nvars != inner_nvars or g.p != self.p:
                raise PolyError("substituted polynomials live in different rings")
        power_cache: list[dict[int, MPoly]] = [dict() for _ in range(self.nvars)]

        def cached_pow(i: int, e: int) -> MPoly:
            got = power_cache[i].get(e)
            if got is None:
                got = polys[i] ** e
                power_cache[i][e] = got
            return got

        acc = MPoly.zero(inner_nvars, self.p)
        for e, c in self.terms.items():
            term = MPoly.const(c, inner_nvars, self.p)
            for i, ei in enumerate(e):
                if ei:
                    term = term * cached_pow(i, ei)
            acc = acc + term
        return acc

    def frobenius_twist(self, e: int) -> "MPoly":
        """self^(p^e) via the characteristic-p term-by-term identity."""
        if e < 0:
            raise PolyError("Frobenius power must be nonnegative")
        q = self.p**e
        # coefficients lie in F_p, so c^(p^e) = c
        return MPoly(self.nvars, self.p, {tuple(x * q for x in expo): c
                                          for expo, c in self.terms.items()})

    # -- text form

    def to_text(self) -> str:
        if not self.terms:
            return "0"
        parts = []
        for e in sorted(self.terms, reverse=True):
            c = self.terms[e]
            factors = [f"x{i + 1}^{ei}" if ei > 1 else f"x{i + 1}"
                       for i, ei in enumerate(e) if ei]
            if not factors:
                parts.append(str(c))
            elif c == 1:
                parts.append("*".join(factors))
            else:
                parts.append(f"{c}*" + "*".join(factors))
        return "+".join(parts)


_VAR_RE = re.compile(r"^x([0-9]+)(?:\^([0-9]+))?$")
_INT_RE = re.compile(r"^[0-9]+$")


def parse_poly(text: str, nvars: int, p: int) -> MPoly:
    """Parse `c*x1^e1*...*xn^en` terms joined by `+`; exact, rejects junk."""
    if not is_prime(p):
        raise PolyParseError(f"characteristic {p} is not prime")
    stripped = text.replace(" ", "")
    if not stripped:
        raise PolyParseError("empty polynomial text")
    terms: dict[tuple[int, ...], int] = {}
    for chunk in stripped.split("+"):
        if not chunk:
            raise PolyParseError(f"empty term in {text!r}")
        coeff = 1
        expo = [0] * nvars
        for factor in chunk.split("*"):
            if _INT_RE.match(factor):
                coeff = (coeff * int(factor)) % p
                continue
            m = _VAR_RE.match(factor)
            if not m:
                raise PolyParseError(f"bad factor {factor!r} in {text!r}")
            idx = int(m.group(1))
            if not 1 <= idx <= nvars:
                raise PolyParseError(f"variable x{idx} out of range 1..{nvars}")
            expo[idx - 1] += int(m.group(2)) if m.group(2) else 1
        key = tuple(expo)
        terms[key] = (terms.get(key, 0) + coeff) % p
    return MPoly(nvars, p, terms)


class PolyMap:
    """A polynomial self-map of A^n, one coordinate polynomial per output."""

    __slots__ = ("nvars", "p", "coords")

    def __init__(self, coords: Sequence[MPoly]):
        if not coords:
            raise PolyError("a polynomial map needs at least one coordinate")
        nvars, p = coords[0].nvars, coords[0].p
        for f in coords:
            if f.nvars != nvars or f.p != p:
                raise PolyError("coordinates live in different polynomial rings")
        self.nvars = nvars
        self.p = p
        self.coords = tuple(coords)

    @classmethod
    def identity(cls, nvars: int, p: int) -> "PolyMap":
        return cls([MPoly.var(i + 1, nvars, p) for i in range(nvars)])

    @classmethod
    def parse(cls, texts: Sequence[str], nvars: int, p: int) -> "PolyMap":
        if len(texts) != nvars:
            raise PolyParseError(f"map needs {nvars} coordinate polynomials, got {len(texts)}")
        return cls([parse_poly(t, nvars, p) for t in texts])

    def apply(self, point: Sequence[FqElement]) -> tuple[FqElement, ...]:
        return tuple(f.evaluate(point) for f in self.coords)

    def compose(self, other: "PolyMap") -> "PolyMap":
        """self after other: (self.compose(other))(x) = self(other(x))."""
        if self.nvars != other.nvars or self.p != other.p:
            raise PolyError("composed maps live on different spaces")
        return PolyMap([f.substitute(other.coords) for f in self.coords])

    def iterate(self, k: int) -> "PolyMap":
        if k < 0:
            raise PolyError("iteration count must be nonnegative")
        result = PolyMap.identity(self.nvars, self.p)
        for _ in range(k):
            result = self.compose(result)
        return result

    def max_degree(self) -> int:
        return max(f.total_degree() for f in self.coords)

    def __eq__(self, other: object) -> bool:
        return isinstance(other, PolyMap) and self.coords == other.coords

    def __repr__(self) -> str:
        return f"PolyMap([{', '.join(f.to_text() for f in self.coords)}])"


def compose(outer: MPoly, inner: PolyMap) -> MPoly:
    return outer.substitute(inner.coords)


def map_compose(g: PolyMap, h: PolyMap) -> PolyMap:
    return g.compose(h)


class IqSystem:
    """The zero-dimensional system generated by f_i - x_i^Q, Q > deg f_i."""

    __slots__ = ("map", "Q")

    def __init__(self, pmap: PolyMap, Q: int):
        p = pmap.p
        q = Q
        while q % p == 0:
            q //= p
        if q != 1 or Q <= 1:
            raise PolyError(f"Q = {Q} is not a positive power of the characteristic {p}")
        if Q <= pmap.max_degree():
            raise PolyError(
                f"Q = {Q} must exceed every coordinate degree (max {pmap.max_degree()})")
        self.map = pmap
        self.Q = Q

    def normal_form(self, g: MPoly, term_budget: int = DEFAULT_TERM_BUDGET) -> MPoly:
        """Unique representative of g with every exponent < Q.

        Strategy: rewrite the lexicographically greatest reducible monomial,
        splitting off x_i^Q for the least offending i.  Total degree strictly
        drops at each rewrite because Q > deg f_i, so this terminates; the
        coprime leading monomials make the result strategy-independent.
        """
        if g.nvars != self.map.nvars or g.p != self.map.p:
            raise PolyError("polynomial lives in a different ring than the system")
        Q = self.Q
        terms = dict(g.terms)
        while True:
            reducible = [e for e in terms if any(ei >= Q for ei in e)]
            if not reducible:
                break
            e = max(reducible)
            i = next(idx for idx, ei in enumerate(e) if ei >= Q)
            c = terms.pop(e)
            rest = tuple(ei - Q if idx == i else ei for idx, ei in enumerate(e))
            for fe, fc in self.map.coords[i].terms.items():
                key = tuple(a + b for a, b in zip(rest, fe))
                val = (terms.get(key, 0) + c * fc) % g.p
                if val:
                    terms[key] = val
                elif key in terms:
                    del terms[key]
            if len(terms) > term_budget:
                raise TermBudgetExceeded(
                    f"normal form grew past {term_budget} terms")
        return MPoly(g.nvars, g.p, terms)

    def quotient_dimension(self) -> int:
        """Vector-space dimension of the quotient by the system's ideal.

        The reduced monomials (all exponents < Q) form a basis, so the
        dimension is Q^n; before returning, check the generators are
        consistent with the rewriting (each f_i - x_i^Q reduces to zero).
        """
        n = self.map.nvars
        for i, f in enumerate(self.map.coords):
            gen = f - MPoly.monomial(
                1, tuple(self.Q if j == i else 0 for j in range(n)), self.map.p)
            if not self.normal_form(gen).is_zero():
                raise PolyError("generator does not reduce to zero; system is inconsistent")
        return self.Q**n

    def iterate_congruence_check(self, j: int,
                                 term_budget: int = DEFAULT_TERM_BUDGET) -> bool:
        """True iff each coordinate of the j-th iterate is congruent to x_i^(Q^j).

        This must hold for every well-formed system; a False return signals
        an implementation bug rather than a property of the input.
        """
        if j < 1:
            raise PolyError("iterate index must be >= 1")
        n, p = self.map.nvars, self.map.p
        iterated = self.map.iterate(j)
        target_expo = self.Q**j
        for i in range(n):
            lhs = self.normal_form(iterated.coords[i], term_budget)
            mono = MPoly.monomial(1, tuple(target_expo if k == i else 0 for k in range(n)), p)
            rhs = self.normal_form(mono, term_budget)
            if lhs != rhs:
                return False
        return True


def iq_normal_form(sys: IqSystem, g: MPoly,
                   term_budget: int = DEFAULT_TERM_BUDGET) -> MPoly:
    return sys.normal_form(g, term_budget)


def iq_quotient_dimension(sys: IqSystem) -> int:
    return sys.quotient_dimension()


def iterate_congruence_check(sys: IqSystem, j: int,
                             term_budget: int = DEFAULT_TERM_BUDGET) -> bool:
    return sys.iterate_congruence_check(j, term_budget)
