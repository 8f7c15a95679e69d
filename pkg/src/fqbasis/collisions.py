"""Collision counts of ``a + b*xi``, additive energy, and the I(A, B) set.

For fixed ``xi`` the profile counts, for every ``s``, the pairs ``(a, b)`` in
``A x B`` with ``a + b*xi = s`` (and separately ``a - b*xi = s``).  Summing the
energy over all nonzero ``xi`` has a closed form, which is what guarantees a
``xi`` with a large ``A + xi*B``.  All bound comparisons are exact: rationals
are cross-multiplied, never converted to floats.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .errors import LemmaViolation, PreconditionError
from .field import FieldElement, arith
from .subsets import (
    FqSubset,
    Scalar,
    _check,
    _dilate_mask,
    _neg_mask,
    _scalar,
    _sum_masks,
    diffset,
    iter_bits,
    productset,
    sumset,
)


@dataclass(frozen=True)
class CollisionProfile:
    xi: int
    f_plus: tuple[int, ...]
    f_minus: tuple[int, ...]
    energy_plus: int
    energy_minus: int

    @property
    def support_plus(self) -> int:
        """``|A + xi B|``."""
        return sum(1 for c in self.f_plus if c)

    @property
    def support_minus(self) -> int:
        return sum(1 for c in self.f_minus if c)


def _require_nonempty(*sets: FqSubset) -> None:
    if any(not X.mask for X in sets):
        raise PreconditionError("sets must be nonempty")


def collision_profile(A: FqSubset, B: FqSubset, xi: Scalar) -> CollisionProfile:
    f = _check(A, B)
    _require_nonempty(A, B)
    x = _scalar(f, xi)
    if x == 0:
        raise PreconditionError("xi must be nonzero")
    ar = arith(f)
    q = f.q
    plus = [0] * q
    minus = [0] * q
    bx = [ar.mul(b, x) for b in iter_bits(B.mask)]
    nbx = [ar.neg(v) for v in bx]
    for a in iter_bits(A.mask):
        for v, w in zip(bx, nbx):
            plus[ar.add(a, v)] += 1
            minus[ar.add(a, w)] += 1
    return CollisionProfile(
        xi=x,
        f_plus=tuple(plus),
        f_minus=tuple(minus),
        energy_plus=sum(c * c for c in plus),
        energy_minus=sum(c * c for c in minus),
    )


def energy_closed_form(size_a: int, size_b: int, q: int) -> int:
    n = size_a * size_b
    return n * (q - 1) + n * (size_a - 1) * (size_b - 1)


@dataclass(frozen=True)
class EnergyReport:
    total: int
    expected: int
    plus_equals_minus: bool

    @property
    def equal(self) -> bool:
        return self.total == self.expected


def energy_identity_check(A: FqSubset, B: FqSubset) -> EnergyReport:
    """Sum the energy over every nonzero ``xi`` and compare with the closed form."""
    f = _check(A, B)
    _require_nonempty(A, B)
    total = 0
    symmetric = True
    for x in range(1, f.q):
        prof = collision_profile(A, B, x)
        total += prof.energy_plus
        symmetric &= prof.energy_plus == prof.energy_minus
    expected = energy_closed_form(A.cardinality(), B.cardinality(), f.q)
    return EnergyReport(total, expected, symmetric)


def plus_minus_sizes(A: FqSubset, B: FqSubset, x: int) -> tuple[int, int]:
    """``(|A + xB|, |A - xB|)``."""
    f = A.field
    ar = arith(f)
    xb = _dilate_mask(ar, x, B.mask)
    return (_sum_masks(f, A.mask, xb).bit_count(),
            _sum_masks(f, A.mask, _neg_mask(ar, xb)).bit_count())


def lemma1_bound(size_a: int, size_b: int, q: int) -> Fraction:
    n = size_a * size_b
    return Fraction(n * (q - 1), n - (size_a + size_b) + q)


def find_xi_lemma1(A: FqSubset, B: FqSubset) -> tuple[FieldElement, Fraction]:
    """The energy-minimising nonzero ``xi`` (smallest index on ties) and the bound.

    Both ``|A + xi B|`` and ``|A - xi B|`` are checked against the bound before
    returning.
    """
    f = _check(A, B)
    _require_nonempty(A, B)
    best_x, best_e = 0, None
    for x in range(1, f.q):
        e = collision_profile(A, B, x).energy_plus
        if best_e is None or e < best_e:
            best_x, best_e = x, e
    bound = lemma1_bound(A.cardinality(), B.cardinality(), f.q)
    plus, minus = plus_minus_sizes(A, B, best_x)
    num, den = bound.numerator, bound.denominator
    if plus * den < num or minus * den < num:
        raise LemmaViolation(
            f"xi={best_x}: |A+xiB|={plus}, |A-xiB|={minus} below bound {bound}")
    return FieldElement(f, best_x), bound


def find_xi_lemma2(A: FqSubset, B: FqSubset) -> FieldElement:
    """First nonzero ``xi`` with ``|A + xi B| > q/2`` and ``|A - xi B| > q/2``."""
    f = _check(A, B)
    q = f.q
    if A.cardinality() * B.cardinality() <= q:
        raise PreconditionError("need |A||B| > q")
    for x in range(1, q):
        plus, minus = plus_minus_sizes(A, B, x)
        if 2 * plus > q and 2 * minus > q:
            return FieldElement(f, x)
    raise LemmaViolation(f"no xi with |A +- xi B| > q/2 for A={A!r}, B={B!r}")


def i_set(A: FqSubset, B: FqSubset) -> FqSubset:
    """``{(b1-b2)a1 + (a2-a3)b3}`` computed as ``(B-B)A + (A-A)B``."""
    _check(A, B)
    _require_nonempty(A, B)
    return sumset(productset(diffset(B, B), A), productset(diffset(A, A), B))


def i_set_bruteforce(A: FqSubset, B: FqSubset) -> FqSubset:
    """Six nested loops straight from the definition.  Test oracle only."""
    f = _check(A, B)
    ar = arith(f)
    As, Bs = A.members(), B.members()
    mask = 0
    for a1 in As:
        for a2 in As:
            for a3 in As:
                da = ar.sub(a2, a3)
                for b1 in Bs:
                    for b2 in Bs:
                        t = ar.mul(ar.sub(b1, b2), a1)
                        for b3 in Bs:
                            mask |= 1 << ar.add(t, ar.mul(da, b3))
    return FqSubset(f, mask)


@dataclass(frozen=True)
class IWitness:
    a1: int
    b1: int
    a2: int
    b2: int
    S: FqSubset


def i_subset_witness(A: FqSubset, B: FqSubset, xi: Scalar) -> IWitness:
    """A collision ``a1 + b1 xi = a2 + b2 xi`` and the set ``(b1-b2)(A + xi B)``.

    Pairs are scanned lexicographically; the first pair to repeat a value
    becomes ``(a2, b2)`` and the earlier one ``(a1, b1)``.
    """
    f = _check(A, B)
    _require_nonempty(A, B)
    x = _scalar(f, xi)
    if x == 0:
        raise PreconditionError("xi must be nonzero")
    ar = arith(f)
    T = _sum_masks(f, A.mask, _dilate_mask(ar, x, B.mask))
    if T.bit_count() >= A.cardinality() * B.cardinality():
        raise PreconditionError("no collision: |A + xi B| = |A||B|")
    seen: dict[int, tuple[int, int]] = {}
    found = None
    for a in iter_bits(A.mask):
        for b in iter_bits(B.mask):
            s = ar.add(a, ar.mul(b, x))
            if s in seen:
                found = seen[s] + (a, b)
                break
            seen[s] = (a, b)
        if found:
            break
    a1, b1, a2, b2 = found
    d = ar.sub(b1, b2)
    S = FqSubset(f, _dilate_mask(ar, d, T))
    if d == 0 or S.cardinality() != T.bit_count():
        raise LemmaViolation(f"degenerate collision {found} for xi={x}")
    if not S.issubset(i_set(A, B)):
        raise LemmaViolation("witness set escapes I(A,B)")
    return IWitness(a1, b1, a2, b2, S)
