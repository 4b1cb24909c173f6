"""Arithmetic in F2[Z_ell x Z_m x Z_p]: monomials, polynomials, matrices.

Monomials x^i y^j z^k are indexed by (i*m + j)*p + k, i.e. lexicographic in
(i, j, k) with k fastest.  A polynomial P maps to the g x g matrix with
M[r, c] = 1 iff monomial_c = t * monomial_r for some term t of P.  Under this
convention the matrix of x is S_ell (x) 1_m (x) 1_p with S[i, i+1 mod ell] = 1,
matrix(P*Q) = matrix(P) @ matrix(Q), and matrix(P.transpose()) = matrix(P).T.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass
from functools import reduce

import numpy as np


@dataclass(frozen=True)
class GroupDims:
    """Cyclic factor sizes (ell, m, p) of the translation group."""

    ell: int
    m: int
    p: int

    def __post_init__(self):
        if min(self.ell, self.m, self.p) < 1:
            raise ValueError(f"dims must be >= 1, got {self}")

    @property
    def order(self) -> int:
        return self.ell * self.m * self.p

    def index(self, i: int, j: int, k: int) -> int:
        return (i % self.ell * self.m + j % self.m) * self.p + k % self.p

    def exponents(self, index: int) -> tuple[int, int, int]:
        k = index % self.p
        j = (index // self.p) % self.m
        i = index // (self.p * self.m)
        return i, j, k

    def monomials(self) -> list["Monomial"]:
        return [Monomial(self, *self.exponents(t)) for t in range(self.order)]


@dataclass(frozen=True, order=True)
class Monomial:
    """A group element x^i y^j z^k; exponents stored reduced mod dims."""

    dims: GroupDims
    i: int
    j: int
    k: int

    def __post_init__(self):
        object.__setattr__(self, "i", self.i % self.dims.ell)
        object.__setattr__(self, "j", self.j % self.dims.m)
        object.__setattr__(self, "k", self.k % self.dims.p)

    def __mul__(self, other: "Monomial") -> "Monomial":
        if self.dims != other.dims:
            raise ValueError("dimension mismatch in monomial product")
        return Monomial(self.dims, self.i + other.i, self.j + other.j, self.k + other.k)

    @property
    def index(self) -> int:
        return self.dims.index(self.i, self.j, self.k)

    def transpose(self) -> "Monomial":
        """Group inverse; equals the matrix transpose of the shift matrix."""
        return Monomial(self.dims, -self.i, -self.j, -self.k)

    inverse = transpose

    def is_identity(self) -> bool:
        return self.i == 0 and self.j == 0 and self.k == 0

    def order(self) -> int:
        d = self.dims
        oi = d.ell // math.gcd(self.i, d.ell) if self.i else 1
        oj = d.m // math.gcd(self.j, d.m) if self.j else 1
        ok = d.p // math.gcd(self.k, d.p) if self.k else 1
        return math.lcm(oi, oj, ok)

    def __str__(self) -> str:
        if self.is_identity():
            return "1"
        parts = []
        for var, e in zip("xyz", (self.i, self.j, self.k)):
            if e == 1:
                parts.append(var)
            elif e > 1:
                parts.append(f"{var}^{e}")
        return "*".join(parts)


_TERM_RE = re.compile(r"([xyz])(?:\^(\d+))?")


def _parse_term(dims: GroupDims, term: str) -> Monomial:
    term = term.replace("*", "").replace(" ", "")
    if term == "1":
        return Monomial(dims, 0, 0, 0)
    exps = {"x": 0, "y": 0, "z": 0}
    consumed = 0
    for mo in _TERM_RE.finditer(term):
        exps[mo.group(1)] += int(mo.group(2) or 1)
        consumed += len(mo.group(0))
    if consumed != len(term):
        raise ValueError(f"cannot parse monomial {term!r}")
    return Monomial(dims, exps["x"], exps["y"], exps["z"])


class GroupPolynomial:
    """An F2 formal sum of monomials; the empty sum is the zero polynomial."""

    __slots__ = ("dims", "terms")

    def __init__(self, dims: GroupDims, terms=()):
        self.dims = dims
        seen: set[Monomial] = set()
        for t in terms:
            if not isinstance(t, Monomial):
                t = Monomial(dims, *t)
            elif t.dims != dims:
                raise ValueError("dimension mismatch among terms")
            # F2 coefficients: pairs cancel
            if t in seen:
                seen.discard(t)
            else:
                seen.add(t)
        self.terms = frozenset(seen)

    @classmethod
    def from_string(cls, dims: GroupDims, text: str) -> "GroupPolynomial":
        """Parse e.g. "1 + y + x*y^2" (juxtaposition "xy^2" also accepted)."""
        text = text.strip()
        if text in ("", "0"):
            return cls(dims)
        return cls(dims, [_parse_term(dims, t) for t in text.split("+")])

    @classmethod
    def one(cls, dims: GroupDims) -> "GroupPolynomial":
        return cls(dims, [Monomial(dims, 0, 0, 0)])

    @classmethod
    def from_vector(cls, dims: GroupDims, vec) -> "GroupPolynomial":
        idx = np.flatnonzero(np.asarray(vec).ravel() & 1)
        return cls(dims, [Monomial(dims, *dims.exponents(int(t))) for t in idx])

    # -- ring operations -------------------------------------------------

    def __add__(self, other: "GroupPolynomial") -> "GroupPolynomial":
        self._check(other)
        return GroupPolynomial(self.dims, self.terms ^ other.terms)

    def __mul__(self, other) -> "GroupPolynomial":
        if isinstance(other, Monomial):
            other = GroupPolynomial(self.dims, [other])
        self._check(other)
        out: set[Monomial] = set()
        for a in self.terms:
            for b in other.terms:
                ab = a * b
                if ab in out:
                    out.discard(ab)
                else:
                    out.add(ab)
        return GroupPolynomial(self.dims, out)

    def transpose(self) -> "GroupPolynomial":
        """Term-wise group inverse; an involution."""
        return GroupPolynomial(self.dims, [t.transpose() for t in self.terms])

    def _check(self, other):
        if self.dims != other.dims:
            raise ValueError("dimension mismatch between polynomials")

    # -- views -----------------------------------------------------------

    @property
    def weight(self) -> int:
        return len(self.terms)

    def is_zero(self) -> bool:
        return not self.terms

    def sorted_terms(self) -> list[Monomial]:
        return sorted(self.terms, key=lambda t: (t.i, t.j, t.k))

    def contains_one(self) -> bool:
        return Monomial(self.dims, 0, 0, 0) in self.terms

    def to_vector(self) -> np.ndarray:
        v = np.zeros(self.dims.order, dtype=np.uint8)
        for t in self.terms:
            v[t.index] = 1
        return v

    def to_matrix(self) -> np.ndarray:
        """g x g GF(2) matrix of the multiplication action (see module doc)."""
        d = self.dims
        g = d.order
        M = np.zeros((g, g), dtype=np.uint8)
        if not self.terms:
            return M
        r = np.arange(g)
        ri = r // (d.p * d.m)
        rj = (r // d.p) % d.m
        rk = r % d.p
        for t in self.terms:
            cols = ((ri + t.i) % d.ell * d.m + (rj + t.j) % d.m) * d.p + (rk + t.k) % d.p
            M[r, cols] ^= 1
        return M

    def exponent_triples(self) -> list[list[int]]:
        """JSON-friendly [[i,j,k], ...] in sorted term order."""
        return [[t.i, t.j, t.k] for t in self.sorted_terms()]

    def __eq__(self, other) -> bool:
        return isinstance(other, GroupPolynomial) and self.dims == other.dims and self.terms == other.terms

    def __hash__(self) -> int:
        return hash((self.dims, self.terms))

    def __str__(self) -> str:
        if self.is_zero():
            return "0"
        return " + ".join(str(t) for t in self.sorted_terms())

    def __repr__(self) -> str:
        return f"GroupPolynomial({self.dims.ell},{self.dims.m},{self.dims.p}; {self})"


def monomial_mul(a: Monomial, b: Monomial) -> Monomial:
    return a * b


def monomial_transpose(a: Monomial) -> Monomial:
    return a.transpose()


def poly_mul(P: GroupPolynomial, Q: GroupPolynomial) -> GroupPolynomial:
    return P * Q


def poly_transpose(P: GroupPolynomial) -> GroupPolynomial:
    return P.transpose()


def poly_to_matrix(P: GroupPolynomial) -> np.ndarray:
    return P.to_matrix()


def poly_sum(polys) -> GroupPolynomial:
    return reduce(lambda a, b: a + b, polys)


def generated_subgroup(dims: GroupDims, generators) -> set[Monomial]:
    """Closure of a set of monomials under the group law (BFS)."""
    identity = Monomial(dims, 0, 0, 0)
    seen = {identity}
    frontier = [identity]
    gens = list(generators)
    while frontier:
        cur = frontier.pop()
        for gmono in gens:
            nxt = cur * gmono
            if nxt not in seen:
                seen.add(nxt)
                frontier.append(nxt)
    return seen
