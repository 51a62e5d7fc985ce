"""Exact arithmetic in truncated complete discrete valuation rings.

Three ring flavours share one element interface:

* ``MixedCharRing``      -- the unramified ring over F_q truncated at p^M,
  realised as (Z/p^M)[z]/(g~) for a monic lift g~ of the residue modulus
  (no Witt coordinates);
* ``EqualCharRing``      -- F_q[[t]] truncated at t^M;
* ``EisensteinExtensionRing`` -- base[x]/(P) for an Eisenstein P, totally
  ramified of degree e over any of the three flavours (towers allowed).

Elements carry an absolute precision ``prec``: the element is known modulo
pi^prec.  Internal payloads are exact representatives; every externally
visible datum (digits, valuations, equality) is truncated at the tracked
precision, so digits beyond it never influence an output.  Results that
would require unknown digits raise PrecisionExhausted instead.

All values are immutable and all operations are pure.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import (
    DescriptorMismatch,
    NonIntegralResult,
    NonUnit,
    PrecisionExhausted,
)
from .residue import GF, ResidueField

MIXED = "mixed-char"
EQUAL = "equal-char"

INF = math.inf


@dataclass(frozen=True)
class RingDescriptor:
    """Shape of an unramified base ring: kind, residue field, precision cap."""

    kind: str
    residue: ResidueField
    precision_cap: int

    def __post_init__(self):
        if self.kind not in (MIXED, EQUAL):
            raise ValueError(f"unknown ring kind {self.kind!r}")
        if self.precision_cap < 1:
            raise ValueError("precision_cap must be >= 1")


class TruncatedRing:
    """Common element-facing surface; payload ops live in subclasses."""

    residue_field: ResidueField
    cap: int  # absolute precision cap in this ring's own uniformizer

    # -- constructors ---------------------------------------------------

    def elt(self, payload, prec=None, exact_zero=False) -> "RingElt":
        return RingElt(self, payload, self.cap if prec is None else prec, exact_zero)

    def zero(self) -> "RingElt":
        return self.elt(self.p_zero(), exact_zero=True)

    def one(self) -> "RingElt":
        return self.elt(self.p_one())

    def from_int(self, n: int) -> "RingElt":
        if n == 0:
            return self.zero()
        return self.elt(self.p_from_int(n))

    def pi(self, k: int = 1) -> "RingElt":
        pay = self.p_one()
        for _ in range(k):
            pay = self.p_mul_pi(pay)
        return self.elt(pay)

    def from_digits(self, digits, prec=None) -> "RingElt":
        digits = list(digits)
        prec = len(digits) if prec is None else prec
        pay = self.p_zero()
        for d in reversed(digits):
            pay = self.p_add(self.p_mul_pi(pay), self.p_lift(d))
        return self.elt(pay, prec)

    def teich_units(self):
        """Nonzero residue digits in deterministic (lexicographic) order."""
        return [d for d in self.residue_field.elements() if d != 0]

    # -- payload primitives (subclass responsibility) ---------------------

    def p_zero(self):
        raise NotImplementedError

    def p_one(self):
        raise NotImplementedError

    def p_add(self, a, b):
        raise NotImplementedError

    def p_neg(self, a):
        raise NotImplementedError

    def p_mul(self, a, b):
        raise NotImplementedError

    def p_from_int(self, n: int):
        raise NotImplementedError

    def p_val(self, a):
        """Exact valuation of the payload representative (INF for 0)."""
        raise NotImplementedError

    def p_res(self, a) -> int:
        """Residue digit (packed residue-field element)."""
        raise NotImplementedError

    def p_lift(self, d: int):
        """Canonical lift of a residue element (digit section)."""
        raise NotImplementedError

    def p_mul_pi(self, a):
        raise NotImplementedError

    def p_div_pi(self, a):
        """Exact division by the uniformizer; payload valuation must be >= 1."""
        raise NotImplementedError

    def p_sub(self, a, b):
        return self.p_add(a, self.p_neg(b))

    def p_scalar(self, n: int, a):
        return self.p_mul(self.p_from_int(n), a)

    def p_inv_unit(self, a):
        """Newton inversion at the full cap; residue of a must be a unit."""
        b = self.p_lift(self.residue_field.inv(self.p_res(a)))
        two = self.p_from_int(2)
        steps = max(1, self.cap).bit_length() + 1
        for _ in range(steps):
            b = self.p_mul(b, self.p_sub(two, self.p_mul(a, b)))
        return b

    # -- misc -------------------------------------------------------------

    def same_ring(self, other) -> bool:
        return self is other or self.key() == other.key()

    def key(self):
        raise NotImplementedError

    def residue_char(self) -> int:
        return self.residue_field.p


class MixedCharRing(TruncatedRing):
    """Unramified p-adic ring over F_q, truncated at p^cap.

    Payload: tuple of s ints modulo p^cap (coefficients of the polynomial
    representative modulo the lifted residue modulus).
    """

    def __init__(self, residue: ResidueField, cap: int):
        self.residue_field = residue
        self.cap = cap
        self.p = residue.p
        self.s = residue.s
        self.pcap = residue.p ** cap
        # monic lift of the modulus with coefficients in {0..p-1}
        self._mod = tuple(residue.modulus[:-1])

    def key(self):
        return (MIXED, self.residue_field.p, self.residue_field.s, self.residue_field.modulus, self.cap)

    @property
    def descriptor(self) -> RingDescriptor:
        return RingDescriptor(MIXED, self.residue_field, self.cap)

    def p_zero(self):
        return (0,) * self.s

    def p_one(self):
        return (1,) + (0,) * (self.s - 1)

    def p_from_int(self, n):
        return (n % self.pcap,) + (0,) * (self.s - 1)

    def p_add(self, a, b):
        return tuple((x + y) % self.pcap for x, y in zip(a, b))

    def p_neg(self, a):
        return tuple((-x) % self.pcap for x in a)

    def p_mul(self, a, b):
        s, pcap = self.s, self.pcap
        if s == 1:
            return ((a[0] * b[0]) % pcap,)
        out = [0] * (2 * s - 1)
        for i, ai in enumerate(a):
            if ai:
                for j, bj in enumerate(b):
                    out[i + j] += ai * bj
        # reduce by the monic lifted modulus
        for d in range(2 * s - 2, s - 1, -1):
            c = out[d] % pcap
            if c:
                for i, mi in enumerate(self._mod):
                    out[d - s + i] -= c * mi
            out[d] = 0
        return tuple(x % pcap for x in out[:s])

    def p_val(self, a):
        v = INF
        for c in a:
            if c:
                w = 0
                while c % self.p == 0:
                    c //= self.p
                    w += 1
                v = min(v, w)
        return v

    def p_res(self, a):
        return self.residue_field.pack(c % self.p for c in a)

    def p_lift(self, d):
        return tuple(self.residue_field.coeffs(d))

    def p_mul_pi(self, a):
        return tuple((c * self.p) % self.pcap for c in a)

    def p_div_pi(self, a):
        return tuple(c // self.p for c in a)

    def frobenius_payload(self, power: int = 1):
        """Payload of the canonical Frobenius lift applied to the generator z.

        Hensel-lifts the residue root z_bar^(p^power) of the modulus; the
        induced ring map is the unique lift of the residue Frobenius.
        """
        if self.s == 1:
            return None  # identity
        k = self.residue_field
        target_res = k.frobenius(k.pack([0, 1] + [0] * (self.s - 2)), power)
        root = self.p_lift(target_res)
        # Newton: root -= f(root)/f'(root) on the lifted modulus
        f = self._mod + (1,)
        for _ in range(self.cap.bit_length() + 1):
            val = self._poly_at(f, root)
            der = self._poly_at(tuple((i + 1) * c for i, c in enumerate(f[1:])), root)
            root = self.p_sub(root, self.p_mul(val, self.p_inv_unit(der)))
        return root

    def _poly_at(self, int_coeffs, x):
        acc = self.p_zero()
        for c in reversed(int_coeffs):
            acc = self.p_add(self.p_mul(acc, x), self.p_from_int(c))
        return acc

    def apply_coeff_map(self, a, gen_image):
        """Ring map z -> gen_image applied to a payload."""
        if gen_image is None:
            return a
        acc = self.p_zero()
        for c in reversed(a):
            acc = self.p_add(self.p_mul(acc, gen_image), (c % self.pcap,) + (0,) * (self.s - 1))
        return acc


class EqualCharRing(TruncatedRing):
    """F_q[[t]] truncated at t^cap; payload is a tuple of cap digits."""

    def __init__(self, residue: ResidueField, cap: int):
        self.residue_field = residue
        self.cap = cap

    def key(self):
        return (EQUAL, self.residue_field.p, self.residue_field.s, self.residue_field.modulus, self.cap)

    @property
    def descriptor(self) -> RingDescriptor:
        return RingDescriptor(EQUAL, self.residue_field, self.cap)

    def p_zero(self):
        return (0,) * self.cap

    def p_one(self):
        return (1,) + (0,) * (self.cap - 1)

    def p_from_int(self, n):
        return (self.residue_field.from_int(n),) + (0,) * (self.cap - 1)

    def p_add(self, a, b):
        k = self.residue_field
        return tuple(k.add(x, y) for x, y in zip(a, b))

    def p_neg(self, a):
        k = self.residue_field
        return tuple(k.neg(x) for x in a)

    def p_mul(self, a, b):
        k = self.residue_field
        cap = self.cap
        out = [0] * cap
        for i, ai in enumerate(a):
            if ai:
                for j, bj in enumerate(b):
                    if i + j >= cap:
                        break
                    if bj:
                        out[i + j] = k.add(out[i + j], k.mul(ai, bj))
        return tuple(out)

    def p_val(self, a):
        for i, c in enumerate(a):
            if c:
                return i
        return INF

    def p_res(self, a):
        return a[0]

    def p_lift(self, d):
        return (d,) + (0,) * (self.cap - 1)

    def p_mul_pi(self, a):
        return (0,) + a[:-1]

    def p_div_pi(self, a):
        return a[1:] + (0,)


class EisensteinExtensionRing(TruncatedRing):
    """Totally ramified extension base[x]/(P), P Eisenstein of degree e.

    Payload: tuple of e base payloads (coefficients of the polynomial
    representative in the uniformizer x).  Valuations split exactly:
    v(sum c_i x^i) = min_i (e*v(c_i) + i) because the terms have distinct
    valuations modulo e.
    """

    def __init__(self, base: TruncatedRing, eisenstein_payloads):
        # eisenstein_payloads: payloads of a_0..a_{e-1} (monic top implied)
        self.base = base
        self.lower = tuple(eisenstein_payloads)
        self.e = len(self.lower)
        if self.e < 1:
            raise ValueError("degree must be >= 1")
        self.residue_field = base.residue_field
        self.cap = base.cap * self.e
        # pi_K / pi_L as a payload: from P(x)=0,
        #   a_0 = -(x^e + a_{e-1} x^{e-1} + ... + a_1 x)
        # so with a_0 = u0 * pi_K,  pi_K / x = -u0^{-1} (x^{e-1} + ... + a_1).
        u0 = base.p_div_pi(self.lower[0])
        inv_u0 = base.p_inv_unit(u0)
        beta = [base.p_zero()] * self.e
        if self.e == 1:
            beta[0] = base.p_neg(inv_u0)  # pi_K/x = -u0^{-1} * ... degenerate: x = -a0
        else:
            for i in range(1, self.e):
                beta[i - 1] = base.p_mul(base.p_neg(inv_u0), self.lower[i])
            beta[self.e - 1] = base.p_neg(inv_u0)
        self._beta = tuple(beta)  # payload of pi_base / pi_L  (degree-1 case: unused)

    def key(self):
        return ("eisenstein", self.base.key(), self.lower)

    def p_zero(self):
        z = self.base.p_zero()
        return (z,) * self.e

    def p_one(self):
        out = [self.base.p_zero()] * self.e
        out[0] = self.base.p_one()
        return tuple(out)

    def p_from_int(self, n):
        out = [self.base.p_zero()] * self.e
        out[0] = self.base.p_from_int(n)
        return tuple(out)

    def p_add(self, a, b):
        return tuple(self.base.p_add(x, y) for x, y in zip(a, b))

    def p_neg(self, a):
        return tuple(self.base.p_neg(x) for x in a)

    def p_mul(self, a, b):
        bs = self.base
        e = self.e
        if e == 1:
            return (bs.p_mul(a[0], b[0]),)
        out = [bs.p_zero() for _ in range(2 * e - 1)]
        for i, ai in enumerate(a):
            for j, bj in enumerate(b):
                out[i + j] = bs.p_add(out[i + j], bs.p_mul(ai, bj))
        # monic reduction: x^e = -(a_{e-1} x^{e-1} + ... + a_0)
        for d in range(2 * e - 2, e - 1, -1):
            c = out[d]
            out[d] = bs.p_zero()
            for i in range(e):
                out[d - e + i] = bs.p_sub(out[d - e + i], bs.p_mul(c, self.lower[i]))
        return tuple(out[:e])

    def p_val(self, a):
        v = INF
        for i, c in enumerate(a):
            w = self.base.p_val(c)
            if w is not INF:
                v = min(v, self.e * w + i)
        return v

    def p_res(self, a):
        return self.base.p_res(a[0])

    def p_lift(self, d):
        out = [self.base.p_zero()] * self.e
        out[0] = self.base.p_lift(d)
        return tuple(out)

    def p_mul_pi(self, a):
        bs = self.base
        e = self.e
        if e == 1:
            # x = -a_0 exactly
            return (bs.p_mul(a[0], bs.p_neg(self.lower[0])),)
        out = [bs.p_zero()] * e
        for i in range(e - 1):
            out[i + 1] = a[i]
        top = a[e - 1]
        for i in range(e):
            out[i] = bs.p_sub(out[i], bs.p_mul(top, self.lower[i]))
        return tuple(out)

    def p_div_pi(self, a):
        bs = self.base
        e = self.e
        if e == 1:
            # a/x = a*(pi_base/x)/pi_base, pi_base/x = beta (a unit)
            return (bs.p_div_pi(bs.p_mul(a[0], self._beta[0])),)
        # a = c0 + x*(rest);  a/x = (c0/pi_K)*(pi_K/x) + rest
        c0 = a[0]
        rest = list(a[1:]) + [bs.p_zero()]
        if bs.p_val(c0) is INF or bs.p_val(c0) >= 1:
            quot = bs.p_div_pi(c0)
            scaled = self.p_mul(tuple([quot] + [bs.p_zero()] * (e - 1)), self._beta)
            return self.p_add(tuple(rest), scaled)
        raise NonIntegralResult("payload not divisible by the uniformizer")

    def embed_payload(self, a):
        """Payload of O_base -> O_L (constant coefficient inclusion)."""
        out = [self.base.p_zero()] * self.e
        out[0] = a
        return tuple(out)


class RingElt:
    """A precision-tracked element of a truncated DVR.

    ``prec``       -- the element is known modulo pi^prec (1 <= prec <= cap);
    ``exact_zero`` -- marks the exact ring zero (valuation +inf).

    valuation() returns the index of the first nonzero digit, math.inf for
    the exact zero, and None when every known digit vanishes (undetermined,
    printed as bottom).
    """

    __slots__ = ("ring", "pay", "prec", "exact_zero")

    def __init__(self, ring, pay, prec, exact_zero=False):
        if prec < 1:
            raise PrecisionExhausted("element with no known digits")
        self.ring = ring
        self.pay = pay
        self.prec = min(prec, ring.cap)
        self.exact_zero = exact_zero

    # -- helpers ----------------------------------------------------------

    def _check(self, other):
        if not isinstance(other, RingElt):
            raise TypeError(f"cannot combine RingElt with {type(other).__name__}")
        if not self.ring.same_ring(other.ring):
            raise DescriptorMismatch("operands live over different rings")

    def valuation(self):
        if self.exact_zero:
            return INF
        v = self.ring.p_val(self.pay)
        if v is INF or v >= self.prec:
            return None
        return v

    def val_lower_bound(self):
        if self.exact_zero:
            return INF
        v = self.ring.p_val(self.pay)
        return min(v, self.prec) if v is not INF else self.prec

    def is_unit(self) -> bool:
        return self.valuation() == 0

    def is_zero_at_prec(self) -> bool:
        """All known digits vanish (exact zero included)."""
        return self.exact_zero or self.valuation() is None

    # -- ring operations ---------------------------------------------------

    def __add__(self, other):
        self._check(other)
        if self.exact_zero:
            return other
        if other.exact_zero:
            return self
        return RingElt(self.ring, self.ring.p_add(self.pay, other.pay), min(self.prec, other.prec))

    def __neg__(self):
        return RingElt(self.ring, self.ring.p_neg(self.pay), self.prec, self.exact_zero)

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, int):
            other = self.ring.from_int(other)
        self._check(other)
        if self.exact_zero or other.exact_zero:
            return self.ring.zero()
        va, vb = self.val_lower_bound(), other.val_lower_bound()
        prec = min(self.prec + vb, other.prec + va, self.ring.cap)
        return RingElt(self.ring, self.ring.p_mul(self.pay, other.pay), int(prec))

    __rmul__ = __mul__

    def __pow__(self, n: int):
        if n < 0:
            return self.unit_inverse() ** (-n)
        out = self.ring.one()
        base = self
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    def unit_inverse(self):
        if self.exact_zero or self.valuation() != 0:
            raise NonUnit("inverse requires valuation exactly 0")
        return RingElt(self.ring, self.ring.p_inv_unit(self.pay), self.prec)

    def shift(self, k: int):
        """Multiply by pi^k (k may be negative: exact division)."""
        if self.exact_zero:
            return self
        if k >= 0:
            pay = self.pay
            for _ in range(k):
                pay = self.ring.p_mul_pi(pay)
            return RingElt(self.ring, pay, min(self.prec + k, self.ring.cap))
        k = -k
        if self.val_lower_bound() < k:
            raise NonIntegralResult(f"payload valuation below {k}")
        if self.prec - k < 1:
            raise PrecisionExhausted("division by pi^k leaves no known digits")
        pay = self.pay
        for _ in range(k):
            pay = self.ring.p_div_pi(pay)
        return RingElt(self.ring, pay, self.prec - k)

    def divide(self, other):
        """Exact division a/b for b of determined valuation."""
        self._check(other)
        vb = other.valuation()
        if vb is None:
            raise PrecisionExhausted("divisor valuation undetermined")
        if vb is INF:
            raise ZeroDivisionError("division by exact zero")
        if self.exact_zero:
            return self
        if self.val_lower_bound() < vb:
            raise NonIntegralResult("quotient not integral at tracked precision")
        unit = other.shift(-vb)
        return (self * unit.unit_inverse()).shift(-vb)

    # -- truncation and digits ----------------------------------------------

    def reduce(self, prec: int):
        """Forget digits from position prec on (prec must be <= self.prec)."""
        if prec > self.prec:
            raise PrecisionExhausted(f"precision {prec} requested, only {self.prec} known")
        if self.exact_zero:
            return RingElt(self.ring, self.pay, prec, True)
        return RingElt(self.ring, self.pay, prec)

    def at_level(self, n: int):
        """Reduction to O/pi^(n+1)."""
        return self.reduce(n + 1)

    def digits(self, k: int | None = None):
        k = self.prec if k is None else k
        if k > self.prec and not self.exact_zero:
            raise PrecisionExhausted(f"{k} digits requested, {self.prec} known")
        ring = self.ring
        pay = self.pay
        out = []
        for _ in range(k):
            d = ring.p_res(pay)
            out.append(d)
            pay = ring.p_div_pi(ring.p_sub(pay, ring.p_lift(d)))
        return tuple(out)

    def residue(self) -> int:
        return self.ring.p_res(self.pay)

    def agrees(self, other, k: int) -> bool:
        """True iff self == other modulo pi^k (requires k known digits)."""
        self._check(other)
        if k == 0:
            return True
        diff = self - other
        if diff.exact_zero:
            return True
        if diff.prec < k:
            raise PrecisionExhausted(f"agreement mod pi^{k} undecidable at precision {diff.prec}")
        v = self.ring.p_val(diff.pay)
        return v is INF or v >= k

    def __eq__(self, other):
        if not isinstance(other, RingElt) or not self.ring.same_ring(other.ring):
            return NotImplemented
        if self.prec != other.prec:
            return False
        return self.agrees(other, self.prec)

    def __hash__(self):
        return hash((self.ring.key(), self.prec, self.digits()))

    def __repr__(self):
        v = self.valuation()
        vtxt = "bottom" if v is None else v
        return f"RingElt(v={vtxt}, digits={list(self.digits(min(self.prec, 8)))}, prec={self.prec})"


# -- descriptor-driven construction ---------------------------------------


def make_ring(desc: RingDescriptor) -> TruncatedRing:
    if desc.kind == MIXED:
        return MixedCharRing(desc.residue, desc.precision_cap)
    return EqualCharRing(desc.residue, desc.precision_cap)


def Zp(p: int, cap: int, s: int = 1) -> MixedCharRing:
    """The unramified mixed-characteristic ring over F_{p^s} mod p^cap."""
    return MixedCharRing(GF(p, s), cap)


def laurent(p: int, cap: int, s: int = 1) -> EqualCharRing:
    """F_{p^s}[[t]] mod t^cap."""
    return EqualCharRing(GF(p, s), cap)
