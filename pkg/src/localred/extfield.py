"""Finite extensions of truncated DVRs and their Galois data.

An extension is described by an unramified part (residue degree s') and a
totally ramified part (a monic Eisenstein polynomial of degree e over the
base, given as coefficient RingElts).  Construction yields the extension
ring, the embedding of the base, and exact ramification data:

* ``different_valuation`` -- v_L of the derivative of the Eisenstein
  polynomial at the uniformizer (the different of the unramified part is
  zero; towers add differents along the tower);
* ``ramification_filtration`` -- groups G_i = {s : v_L(s(pi_L) - pi_L) >= i+1},
  cross-checked against the different via sum(|G_i| - 1).

Automorphisms are supplied, not discovered: each is the image of the
uniformizer plus a power of the residue Frobenius, and the library verifies
the defining relations at tracked precision instead of searching for roots.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

from .errors import (
    InconsistentGroup,
    NotAGroup,
    NotEisenstein,
    PrecisionExhausted,
)
from .residue import GF, embedding_table
from .rings import (
    EisensteinExtensionRing,
    EqualCharRing,
    MixedCharRing,
    RingElt,
    TruncatedRing,
)

INF = math.inf


@dataclass
class ExtensionDesc:
    """Unramified degree + Eisenstein polynomial (lower coefficients a_0..a_{e-1})."""

    base: TruncatedRing
    unram_degree: int = 1
    eisenstein: tuple = ()  # RingElts over base; monic leading 1 implied; () = trivial

    def degree(self) -> int:
        e = len(self.eisenstein) if self.eisenstein else 1
        return e * self.unram_degree


def _enlarge_residue(ring: TruncatedRing, s_extra: int):
    """Unramified enlargement of an *unramified* ring, with the digit map."""
    k = ring.residue_field
    k_big = GF(k.p, k.s * s_extra)
    table = embedding_table(k, k_big)
    if isinstance(ring, MixedCharRing):
        big = MixedCharRing(k_big, ring.cap)
    elif isinstance(ring, EqualCharRing):
        big = EqualCharRing(k_big, ring.cap)
    else:
        raise NotImplementedError("residue enlargement below a ramified layer")

    if isinstance(ring, EqualCharRing):
        def embed(x: RingElt) -> RingElt:
            return big.from_digits([table[d] for d in x.digits()], x.prec)
    else:
        # Hensel root of the old lifted modulus inside the big ring gives the
        # unique unramified embedding; digitwise mapping is not a ring map here.
        old_mod = k.modulus
        root = big.p_lift(table[k.pack([0, 1] + [0] * (k.s - 2))] if k.s > 1 else 1)
        if k.s > 1:
            f = tuple(old_mod)
            for _ in range(ring.cap.bit_length() + 2):
                val = big._poly_at(f, root)
                der = big._poly_at(tuple((i + 1) * c for i, c in enumerate(f[1:])), root)
                root = big.p_sub(root, big.p_mul(val, big.p_inv_unit(der)))

        def embed(x: RingElt) -> RingElt:
            if k.s == 1:
                return big.elt((x.pay[0],) + (0,) * (k_big.s - 1), x.prec, x.exact_zero)
            return big.elt(big.apply_coeff_map_from(x.pay, root, ring), x.prec, x.exact_zero)

    return big, embed


def _mixed_apply_from(big: MixedCharRing, pay, root, small: MixedCharRing):
    acc = big.p_zero()
    for c in reversed(pay):
        acc = big.p_add(big.p_mul(acc, root), (c % big.pcap,) + (0,) * (big.s - 1))
    return acc


MixedCharRing.apply_coeff_map_from = lambda self, pay, root, small: _mixed_apply_from(self, pay, root, small)


class Extension:
    """A built extension O_L / O_K with embedding and ramification data."""

    def __init__(self, desc: ExtensionDesc):
        self.desc = desc
        base = desc.base
        self.base_ring = base
        if desc.unram_degree > 1:
            mid, embed_mid = _enlarge_residue(base, desc.unram_degree)
        else:
            mid, embed_mid = base, lambda x: x
        self.mid_ring = mid
        self._embed_mid = embed_mid

        if desc.eisenstein:
            coeffs = [embed_mid(c) for c in desc.eisenstein]
            _check_eisenstein(coeffs)
            self.ring = EisensteinExtensionRing(mid, [c.pay for c in coeffs])
            self.e = self.ring.e
        else:
            self.ring = mid
            self.e = 1

    @property
    def degree(self) -> int:
        return self.e * self.desc.unram_degree

    def embed(self, x: RingElt) -> RingElt:
        """O_K -> O_L; valuations scale by e."""
        y = self._embed_mid(x)
        if self.ring is self.mid_ring:
            return y
        prec = min(self.e * y.prec, self.ring.cap)
        return self.ring.elt(self.ring.embed_payload(y.pay), prec, y.exact_zero)

    def uniformizer(self) -> RingElt:
        return self.ring.pi()

    def eisenstein_at(self, x: RingElt) -> RingElt:
        """P(x) evaluated in any ring containing the embedded coefficients."""
        ring = x.ring
        acc = ring.one()
        coeffs = [self.embed(c) if c.ring.same_ring(self.base_ring) else c
                  for c in self.desc.eisenstein]
        # monic of degree e: x^e + sum a_i x^i, coefficients live in O_L
        acc = x ** (self.e if self.desc.eisenstein else 1)
        powx = ring.one()
        for c in coeffs:
            acc = acc + _coerce(c, ring) * powx
            powx = powx * x
        return acc

    def eisenstein_derivative_at(self, x: RingElt) -> RingElt:
        ring = x.ring
        acc = ring.from_int(self.e) * x ** (self.e - 1)
        powx = ring.one()
        for i, c in enumerate(self.desc.eisenstein):
            if i >= 1:
                acc = acc + ring.from_int(i) * _coerce(c, ring) * powx
            powx = powx * x if i >= 1 else ring.one() if False else powx * x
        return acc

    def different_valuation(self) -> int:
        """v_L of the different of O_L / O_K (relative; unramified part is 0)."""
        if self.e == 1:
            return 0
        d = self.eisenstein_derivative_at(self.embed_to_self(self.uniformizer()))
        v = d.valuation()
        if v is None:
            raise PrecisionExhausted("different valuation undetermined at this precision")
        if v is INF:
            raise PrecisionExhausted("derivative vanished identically at the cap")
        return v

    def embed_to_self(self, x: RingElt) -> RingElt:
        return x

    def different_valuation_base(self):
        """v_K(different) as an exact Fraction."""
        from fractions import Fraction

        return Fraction(self.different_valuation(), self.e)


def _coerce(c: RingElt, ring) -> RingElt:
    if c.ring.same_ring(ring):
        return c
    raise PrecisionExhausted("coefficient not embedded into the target ring")  # pragma: no cover


def _check_eisenstein(coeffs):
    if not coeffs:
        return
    c0 = coeffs[0]
    v0 = c0.valuation()
    if v0 is None and c0.prec < 2:
        raise PrecisionExhausted("Eisenstein constant term needs two known digits")
    if v0 != 1:
        raise NotEisenstein(f"constant term has valuation {v0}, want exactly 1")
    for c in coeffs[1:]:
        v = c.valuation()
        if v == 0:
            raise NotEisenstein("lower coefficient is a unit")
        # v undetermined is fine: all known digits vanish, so v >= 1


def build_extension(desc: ExtensionDesc) -> Extension:
    """Construct O_L with its embedding; errors if P is not Eisenstein."""
    return Extension(desc)


@dataclass
class Automorphism:
    """A ring automorphism given by the image of pi_L and a Frobenius power."""

    ext: Extension
    pi_image: RingElt
    frobenius_power: int = 0
    name: str = ""

    def __post_init__(self):
        if self.pi_image.valuation() != 1:
            raise NotAGroup("pi image must have valuation exactly 1")
        if self.frobenius_power and not isinstance(self.ext.mid_ring, MixedCharRing) \
                and not isinstance(self.ext.mid_ring, EqualCharRing):
            raise NotImplementedError("frobenius below a ramified layer")
        self._frob_cache = None

    def is_identity_at(self, prec: int) -> bool:
        return self.frobenius_power % self._frob_order() == 0 and \
            self.pi_image.agrees(self.ext.uniformizer(), min(prec, self.pi_image.prec))

    def _frob_order(self) -> int:
        return max(1, self.ext.desc.unram_degree)

    def _coeff_map(self, pay):
        """Apply the Frobenius power to a mid-ring payload."""
        k = self.frobenius_power % self._frob_order()
        if k == 0:
            return pay
        mid = self.ext.mid_ring
        if isinstance(mid, EqualCharRing):
            steps = k * self.ext.base_ring.residue_field.s
            kf = mid.residue_field
            return tuple(kf.pow(c, kf.p ** (steps % kf.s)) for c in pay)
        if self._frob_cache is None:
            steps = k * self.ext.base_ring.residue_field.s
            self._frob_cache = mid.frobenius_payload(steps % mid.residue_field.s)
        return mid.apply_coeff_map(pay, self._frob_cache)

    def apply(self, x: RingElt) -> RingElt:
        """sigma(x) via the digit expansion: coefficients through Frobenius,
        pi_L through pi_image (Horner)."""
        ring = self.ext.ring
        if not x.ring.same_ring(ring):
            raise NotAGroup("automorphism applied outside its ring")
        if x.exact_zero:
            return x
        if ring is self.ext.mid_ring:
            return ring.elt(self._coeff_map(x.pay), x.prec)
        mapped = [ring.mid_coeff(self._coeff_map(c)) if False else c for c in x.pay]
        # payload coefficients live over mid ring; map then Horner at pi_image
        acc = ring.zero()
        w = self.pi_image
        for c in reversed(x.pay):
            cm = self._coeff_map(c)
            lifted = ring.elt(ring.embed_payload(cm), ring.cap)
            acc = acc * w + lifted
        return acc.reduce(min(x.prec, acc.prec))

    def check_relation(self, prec: int | None = None) -> bool:
        """P(sigma(pi_L)) = 0 at tracked precision."""
        val = self.ext.eisenstein_at(self.pi_image) if self.ext.e > 1 else self.ext.ring.zero()
        if self.ext.e == 1:
            return True
        target = prec if prec is not None else self.pi_image.prec
        v = val.val_lower_bound()
        return v >= min(target, val.prec)

    def compose(self, other: "Automorphism") -> "Automorphism":
        """self after other."""
        return Automorphism(
            self.ext,
            self.apply(other.pi_image),
            (self.frobenius_power + other.frobenius_power) % self._frob_order(),
            name=f"{self.name}*{other.name}",
        )

    def agrees_with(self, other: "Automorphism", prec: int | None = None) -> bool:
        k = min(self.pi_image.prec, other.pi_image.prec) if prec is None else prec
        return (self.frobenius_power - other.frobenius_power) % self._frob_order() == 0 \
            and self.pi_image.agrees(other.pi_image, k)


def identity_automorphism(ext: Extension) -> Automorphism:
    return Automorphism(ext, ext.uniformizer(), 0, name="id")


@dataclass
class GaloisGroup:
    """Explicit automorphisms, closed under composition at tracked precision."""

    ext: Extension
    elements: list = field(default_factory=list)
    table: dict = field(default_factory=dict)

    def check_group(self):
        """Verify closure/identity/inverses; fill and return the composition table."""
        els = self.elements
        n = len(els)
        if not any(e.is_identity_at(min(x.pi_image.prec for x in els)) for e in els):
            raise NotAGroup("identity automorphism missing")
        table = {}
        for i, g in enumerate(els):
            for j, h in enumerate(els):
                gh = g.compose(h)
                hits = [k for k, e in enumerate(els) if gh.agrees_with(e)]
                if len(hits) != 1:
                    raise NotAGroup(f"composition {i}*{j} matched {len(hits)} elements")
                table[(i, j)] = hits[0]
        # each row and column is a permutation => inverses exist
        for i in range(n):
            if sorted(table[(i, j)] for j in range(n)) != list(range(n)):
                raise NotAGroup("composition table row is not a permutation")
        self.table = table
        return table

    def order(self) -> int:
        return len(self.elements)


def cyclic_group(ext: Extension, generator: Automorphism, order: int) -> GaloisGroup:
    els = [identity_automorphism(ext)]
    g = generator
    for _ in range(order - 1):
        els.append(g)
        g = generator.compose(g)
    grp = GaloisGroup(ext, els)
    grp.check_group()
    return grp


def ramification_filtration(grp: GaloisGroup) -> list[int]:
    """Orders |G_i| of the ramification subgroups, with the different check.

    G_i = {sigma : v_L(sigma(pi_L) - pi_L) >= i + 1}; for a totally ramified
    Galois extension sum(|G_i| - 1) equals v_L of the different, exactly.
    """
    ext = grp.ext
    pi = ext.uniformizer()
    displacements = []
    for g in grp.elements:
        if g.is_identity_at(pi.prec):
            continue
        v = (g.pi_image - pi).valuation()
        if v is None:
            raise PrecisionExhausted("sigma(pi)-pi indistinguishable from zero")
        displacements.append(int(v) if v is not INF else None)
    if any(d is None for d in displacements):
        raise PrecisionExhausted("filtration longer than the precision cap")
    max_i = max(displacements, default=1)
    orders = []
    for i in range(max_i):
        orders.append(1 + sum(1 for d in displacements if d >= i + 1))
    total = sum(o - 1 for o in orders)
    if ext.desc.unram_degree == 1 and ext.e == grp.order():
        expected = ext.different_valuation()
        if total != expected:
            raise InconsistentGroup(
                f"sum(|G_i|-1) = {total} but v_L(different) = {expected}")
    return orders
