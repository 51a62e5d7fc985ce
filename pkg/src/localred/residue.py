"""Finite residue fields F_q = F_p[x]/(f), q = p^s.

Elements are plain ints in range(q) encoding coefficient vectors in base p:
the element c0 + c1*x + ... + c_{s-1}*x^{s-1} is stored as
c0 + c1*p + ... + c_{s-1}*p^{s-1}.  For small q (everything in this
library) addition and multiplication are table driven, so field elements
stay hashable and cheap to enumerate.
"""

from __future__ import annotations

import functools
from dataclasses import dataclass, field

_TABLE_CAP = 128  # build full op tables only for q below this


def _is_prime(n: int) -> bool:
    if n < 2:
        return False
    d = 2
    while d * d <= n:
        if n % d == 0:
            return False
        d += 1
    return True


def _poly_mod(coeffs, p):
    return tuple(c % p for c in coeffs)


def _poly_trim(coeffs):
    i = len(coeffs)
    while i > 0 and coeffs[i - 1] == 0:
        i -= 1
    return tuple(coeffs[:i])


def _poly_mul_mod_p(a, b, p):
    if not a or not b:
        return ()
    out = [0] * (len(a) + len(b) - 1)
    for i, ai in enumerate(a):
        if ai:
            for j, bj in enumerate(b):
                out[i + j] = (out[i + j] + ai * bj) % p
    return _poly_trim(out)


def _poly_rem(a, mod, p):
    # remainder of a by monic mod, coefficients mod p
    a = list(a)
    d = len(mod) - 1
    while len(a) > d:
        lead = a[-1] % p
        if lead:
            for i in range(d):
                a[len(a) - 1 - d + i] = (a[len(a) - 1 - d + i] - lead * mod[i]) % p
        a.pop()
    return _poly_trim(a)


def _irreducible(modulus, p) -> bool:
    """Trial check for monic polynomials of degree <= 4 over F_p."""
    s = len(modulus) - 1
    if s == 1:
        return True
    # no linear factors
    for r in range(p):
        acc = 0
        for c in reversed(modulus):
            acc = (acc * r + c) % p
        if acc == 0:
            return False
    if s <= 3:
        return True
    # degree 4: also rule out irreducible quadratic factors
    for b in range(p):
        for c in range(p):
            quad = (c, b, 1)
            if not _irreducible(quad, p):
                continue
            if not _poly_rem(modulus, quad, p):
                return False
    return True


def default_modulus(p: int, s: int) -> tuple[int, ...]:
    """First monic irreducible of degree s over F_p in lexicographic order."""
    if s == 1:
        return (0, 1)
    bound = p ** s
    for packed in range(bound):
        coeffs = []
        v = packed
        for _ in range(s):
            coeffs.append(v % p)
            v //= p
        candidate = tuple(coeffs) + (1,)
        if _irreducible(candidate, p):
            return candidate
    raise ValueError(f"no irreducible of degree {s} over F_{p}")  # pragma: no cover


@dataclass(frozen=True)
class ResidueField:
    """F_q with q = p^s, modulus a monic irreducible over F_p.

    Elements are ints in range(q); 0 and 1 are the additive and
    multiplicative identities.
    """

    p: int
    s: int = 1
    modulus: tuple[int, ...] = ()
    _tables: dict = field(default_factory=dict, repr=False, compare=False)

    def __post_init__(self):
        if not _is_prime(self.p):
            raise ValueError(f"{self.p} is not prime")
        if self.s < 1:
            raise ValueError("extension degree must be >= 1")
        if not self.modulus:
            object.__setattr__(self, "modulus", default_modulus(self.p, self.s))
        if len(self.modulus) != self.s + 1 or self.modulus[-1] != 1:
            raise ValueError("modulus must be monic of degree s")
        if not _irreducible(self.modulus, self.p):
            raise ValueError("modulus is reducible over F_p")
        if self.q <= _TABLE_CAP:
            self._build_tables()

    @property
    def q(self) -> int:
        return self.p ** self.s

    # packed int <-> coefficient tuple

    def coeffs(self, a: int) -> tuple[int, ...]:
        out = []
        for _ in range(self.s):
            out.append(a % self.p)
            a //= self.p
        return tuple(out)

    def pack(self, coeffs) -> int:
        a = 0
        for c in reversed(list(coeffs)[: self.s]):
            a = a * self.p + (c % self.p)
        return a

    def _build_tables(self):
        q, p = self.q, self.p
        add = [[0] * q for _ in range(q)]
        mul = [[0] * q for _ in range(q)]
        for a in range(q):
            ca = self.coeffs(a)
            for b in range(a, q):
                cb = self.coeffs(b)
                s_ = self.pack((x + y) % p for x, y in zip(ca, cb))
                add[a][b] = add[b][a] = s_
                prod = _poly_rem(_poly_mul_mod_p(_poly_trim(ca), _poly_trim(cb), p), self.modulus, p)
                m = self.pack(prod + (0,) * self.s)
                mul[a][b] = mul[b][a] = m
        neg = [self.pack((-c) % p for c in self.coeffs(a)) for a in range(q)]
        inv = [0] * q
        for a in range(1, q):
            for b in range(1, q):
                if mul[a][b] == 1:
                    inv[a] = b
                    break
        self._tables["add"] = add
        self._tables["mul"] = mul
        self._tables["neg"] = neg
        self._tables["inv"] = inv

    # arithmetic

    def add(self, a: int, b: int) -> int:
        if self._tables:
            return self._tables["add"][a][b]
        return self.pack((x + y) % self.p for x, y in zip(self.coeffs(a), self.coeffs(b)))

    def neg(self, a: int) -> int:
        if self._tables:
            return self._tables["neg"][a]
        return self.pack((-c) % self.p for c in self.coeffs(a))

    def sub(self, a: int, b: int) -> int:
        return self.add(a, self.neg(b))

    def mul(self, a: int, b: int) -> int:
        if self._tables:
            return self._tables["mul"][a][b]
        prod = _poly_mul_mod_p(_poly_trim(self.coeffs(a)), _poly_trim(self.coeffs(b)), self.p)
        return self.pack(_poly_rem(prod, self.modulus, self.p) + (0,) * self.s)

    def inv(self, a: int) -> int:
        if a == 0:
            raise ZeroDivisionError("inverse of 0 in residue field")
        if self._tables:
            return self._tables["inv"][a]
        return self.pow(a, self.q - 2)

    def pow(self, a: int, n: int) -> int:
        n %= self.q - 1 if a else 1
        out, base = 1, a
        if a == 0:
            return 0 if n else 1
        while n:
            if n & 1:
                out = self.mul(out, base)
            base = self.mul(base, base)
            n >>= 1
        return out

    def from_int(self, n: int) -> int:
        return n % self.p

    def frobenius(self, a: int, power: int = 1) -> int:
        return self.pow(a, self.p ** (power % self.s) if self.s > 1 else self.p)

    def elements(self):
        """All elements in lexicographic order on coefficient lists."""
        return sorted(range(self.q), key=self.coeffs)

    def sqrt(self, a: int) -> int | None:
        for b in self.elements():
            if self.mul(b, b) == a:
                return b
        return None

    # polynomial helpers (polys are tuples of packed elements, low degree first)

    def poly_eval(self, poly, x: int) -> int:
        acc = 0
        for c in reversed(poly):
            acc = self.add(self.mul(acc, x), c)
        return acc

    def poly_roots(self, poly):
        return [x for x in self.elements() if self.poly_eval(poly, x) == 0]

    def root_multiplicities(self, poly):
        """{root: multiplicity} for all roots in this field (brute force)."""
        out = {}
        for r in self.poly_roots(poly):
            m = 0
            cur = poly
            while True:
                quo, rem = self._syndiv(cur, r)
                if rem != 0:
                    break
                m += 1
                cur = quo
                if len(cur) <= 1:
                    break
            if m:
                out[r] = m
        return out

    def _syndiv(self, poly, r):
        # synthetic division of poly by (X - r); returns (quotient, remainder)
        acc = 0
        quo = []
        for c in reversed(poly):
            acc = self.add(self.mul(acc, r), c)
            quo.append(acc)
        rem = quo.pop()
        return tuple(reversed(quo)), rem

    def embed_root(self, sub: "ResidueField") -> int:
        """A root in self of sub.modulus, giving the embedding F_{p^s'} -> F_q.

        Roots are searched in lexicographic order so the embedding is
        deterministic.
        """
        if self.p != sub.p or self.s % sub.s != 0:
            raise ValueError("no embedding: incompatible field parameters")
        poly = tuple(self.from_int(c) for c in sub.modulus)
        for x in self.elements():
            if self.poly_eval(poly, x) == 0:
                return x
        raise ValueError("modulus has no root in the bigger field")  # pragma: no cover


@functools.cache
def GF(p: int, s: int = 1, modulus: tuple[int, ...] | None = None) -> ResidueField:
    return ResidueField(p, s, modulus or ())


def embedding_table(sub: ResidueField, sup: ResidueField) -> list[int]:
    """Table mapping packed elements of sub to their images in sup."""
    root = sup.embed_root(sub)
    table = []
    for a in range(sub.q):
        acc = 0
        for c in reversed(sub.coeffs(a)):
            acc = sup.add(sup.mul(acc, root), sup.from_int(c))
        table.append(acc)
    return table
