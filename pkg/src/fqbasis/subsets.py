"""Subsets of GF(q) as characteristic bit-vectors.

A subset is an ``int`` whose bit ``i`` is set when the element with canonical
index ``i`` belongs to it.  Translating a set by a field element permutes its
bits; because addition is digit-wise mod p on indices, the permutation is a
rotation of blocks of size ``p**k`` for each nonzero digit of the translate,
which costs a handful of big-integer operations per digit instead of a loop
over members.  Dilations and products have no such structure and loop over
members.
"""

from __future__ import annotations

import functools
from dataclasses import dataclass
from typing import Iterable, Iterator, Union

from .errors import FieldMismatchError, PreconditionError
from .field import Arith, FieldElement, FieldSpec, arith

Scalar = Union[FieldElement, int]


def iter_bits(mask: int) -> Iterator[int]:
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


class _Shifter:
    """Bit-permutations of masks induced by adding a fixed element."""

    def __init__(self, f: FieldSpec):
        self.p, self.m, self.q = f.p, f.m, f.q
        self.full = (1 << f.q) - 1
        self._ops: dict[int, tuple] = {}

    def translate(self, mask: int, x: int) -> int:
        if x == 0 or mask == 0:
            return mask
        if self.m == 1:
            q = self.q
            return ((mask << x) | (mask >> (q - x))) & self.full
        ops = self._ops.get(x)
        if ops is None:
            ops = self._build(x)
        for low, up, high, down in ops:
            mask = ((mask & low) << up) | ((mask & high) >> down)
        return mask

    def _build(self, x: int) -> tuple:
        p = self.p
        ops = []
        rest, block = x, 1
        while rest:
            d = rest % p
            if d:
                span = block * p
                rep = self.full // ((1 << span) - 1)
                low = ((1 << ((p - d) * block)) - 1) * rep
                ops.append((low, d * block, self.full ^ low, (p - d) * block))
            rest //= p
            block *= p
        ops = tuple(ops)
        self._ops[x] = ops
        return ops


@functools.lru_cache(maxsize=None)
def _shifter(f: FieldSpec) -> _Shifter:
    return _Shifter(f)


@dataclass(frozen=True)
class FqSubset:
    """A subset of GF(q); ``mask`` is its characteristic bit-vector."""

    field: FieldSpec
    mask: int

    def __post_init__(self):
        if self.mask < 0 or self.mask >> self.field.q:
            raise PreconditionError(f"mask {self.mask:#x} has bits outside {self.field!r}")

    @classmethod
    def from_indices(cls, f: FieldSpec, indices: Iterable[int]) -> FqSubset:
        mask = 0
        for i in indices:
            i = int(i)
            if not 0 <= i < f.q:
                raise PreconditionError(f"element index {i} out of range for {f!r}")
            mask |= 1 << i
        return cls(f, mask)

    @classmethod
    def from_elements(cls, f: FieldSpec, elements: Iterable[FieldElement]) -> FqSubset:
        return cls.from_indices(f, (e.index for e in elements))

    @classmethod
    def full(cls, f: FieldSpec) -> FqSubset:
        return cls(f, (1 << f.q) - 1)

    @classmethod
    def empty(cls, f: FieldSpec) -> FqSubset:
        return cls(f, 0)

    def cardinality(self) -> int:
        return self.mask.bit_count()

    def __len__(self) -> int:
        return self.cardinality()

    def __iter__(self) -> Iterator[int]:
        return iter_bits(self.mask)

    def __contains__(self, x: Scalar) -> bool:
        i = x.index if isinstance(x, FieldElement) else int(x)
        return bool(self.mask >> i & 1)

    def __bool__(self) -> bool:
        return self.mask != 0

    def __repr__(self) -> str:
        return f"FqSubset({self.field!r}, {self.to_list()})"

    def members(self) -> list[int]:
        return list(iter_bits(self.mask))

    def to_list(self) -> list[int]:
        return self.members()

    def min_index(self) -> int:
        if not self.mask:
            raise PreconditionError("empty set has no smallest element")
        return (self.mask & -self.mask).bit_length() - 1

    def is_full(self) -> bool:
        return self.mask == (1 << self.field.q) - 1

    def issubset(self, other: FqSubset) -> bool:
        _check(self, other)
        return self.mask & ~other.mask == 0

    def __le__(self, other: FqSubset) -> bool:
        return self.issubset(other)

    def __or__(self, other: FqSubset) -> FqSubset:
        return FqSubset(_check(self, other), self.mask | other.mask)

    def __and__(self, other: FqSubset) -> FqSubset:
        return FqSubset(_check(self, other), self.mask & other.mask)

    def difference(self, other: FqSubset) -> FqSubset:
        return FqSubset(_check(self, other), self.mask & ~other.mask)

    def __add__(self, other: FqSubset) -> FqSubset:
        return sumset(self, other)

    def __sub__(self, other: FqSubset) -> FqSubset:
        return diffset(self, other)

    def __mul__(self, other: FqSubset) -> FqSubset:
        return productset(self, other)

    def __neg__(self) -> FqSubset:
        return negate(self)


def _check(X: FqSubset, Y: FqSubset) -> FieldSpec:
    if X.field is not Y.field and X.field != Y.field:
        raise FieldMismatchError(f"{X.field!r} vs {Y.field!r}")
    return X.field


def _scalar(f: FieldSpec, lam: Scalar) -> int:
    if isinstance(lam, FieldElement):
        if lam.field is not f and lam.field != f:
            raise FieldMismatchError(f"{lam.field!r} vs {f!r}")
        return lam.index
    lam = int(lam)
    if not 0 <= lam < f.q:
        raise PreconditionError(f"element index {lam} out of range for {f!r}")
    return lam


def parse_set(f: FieldSpec, text: str) -> FqSubset:
    """Parse a literal such as ``"0,1,3"``; the empty string is the empty set."""
    text = text.strip()
    if not text:
        return FqSubset.empty(f)
    try:
        indices = [int(tok) for tok in text.split(",")]
    except ValueError:
        raise PreconditionError(f"malformed set literal {text!r}") from None
    return FqSubset.from_indices(f, indices)


def format_set(X: FqSubset) -> str:
    return ",".join(str(i) for i in X.members())


def translate(X: FqSubset, x: Scalar) -> FqSubset:
    """The translate ``{x} + X``."""
    f = X.field
    return FqSubset(f, _shifter(f).translate(X.mask, _scalar(f, x)))


def _sum_masks(f: FieldSpec, a: int, b: int) -> int:
    if not a or not b:
        return 0
    if a.bit_count() > b.bit_count():
        a, b = b, a
    sh = _shifter(f)
    full = sh.full
    out = 0
    for x in iter_bits(a):
        out |= sh.translate(b, x)
        if out == full:
            break
    return out


def _neg_mask(ar: Arith, a: int) -> int:
    nt = ar.neg_table
    out = 0
    for i in iter_bits(a):
        out |= 1 << nt[i]
    return out


def _dilate_mask(ar: Arith, lam: int, a: int) -> int:
    if not a:
        return 0
    if lam == 0:
        return 1
    if lam == 1:
        return a
    out = 0
    if ar.mul_table is not None:
        row = ar.mul_table[lam]
        for i in iter_bits(a):
            out |= 1 << row[i]
        return out
    for i in iter_bits(a):
        out |= 1 << ar.mul(lam, i)
    return out


def _product_masks(ar: Arith, a: int, b: int) -> int:
    if not a or not b:
        return 0
    if a.bit_count() > b.bit_count():
        a, b = b, a
    out = 0
    for x in iter_bits(a):
        out |= _dilate_mask(ar, x, b)
    return out


def sumset(X: FqSubset, Y: FqSubset) -> FqSubset:
    f = _check(X, Y)
    return FqSubset(f, _sum_masks(f, X.mask, Y.mask))


def negate(X: FqSubset) -> FqSubset:
    return FqSubset(X.field, _neg_mask(arith(X.field), X.mask))


def diffset(X: FqSubset, Y: FqSubset) -> FqSubset:
    f = _check(X, Y)
    return FqSubset(f, _sum_masks(f, X.mask, _neg_mask(arith(f), Y.mask)))


def dilate(lam: Scalar, X: FqSubset) -> FqSubset:
    """``lam * X``; ``dilate(0, X)`` is ``{0}`` for nonempty ``X``."""
    f = X.field
    return FqSubset(f, _dilate_mask(arith(f), _scalar(f, lam), X.mask))


def productset(X: FqSubset, Y: FqSubset) -> FqSubset:
    f = _check(X, Y)
    return FqSubset(f, _product_masks(arith(f), X.mask, Y.mask))


def _require_positive(k: int, name: str) -> None:
    if k < 1:
        raise PreconditionError(f"{name} must be >= 1, got {k}")


def iterated_sum(k: int, X: FqSubset) -> FqSubset:
    """``kX``, the set of all sums of ``k`` elements of ``X``."""
    _require_positive(k, "k")
    f = X.field
    full = (1 << f.q) - 1
    acc = X.mask
    for _ in range(k - 1):
        # once full (or stationary) every further sum stays put
        if acc == full:
            break
        nxt = _sum_masks(f, acc, X.mask)
        if nxt == acc:
            break
        acc = nxt
    return FqSubset(f, acc)


def iterated_product(k: int, X: FqSubset) -> FqSubset:
    """``X^k``, the set of all products of ``k`` elements of ``X``."""
    _require_positive(k, "k")
    ar = arith(X.field)
    acc = X.mask
    for _ in range(k - 1):
        acc = _product_masks(ar, acc, X.mask)
    return FqSubset(X.field, acc)


def n_fold_product_sum(N: int, X: FqSubset, Y: FqSubset) -> FqSubset:
    """``N(XY)``: the N-fold sumset of the product set."""
    _require_positive(N, "N")
    return iterated_sum(N, productset(X, Y))


def is_symmetric(X: FqSubset) -> bool:
    return _neg_mask(arith(X.field), X.mask) == X.mask


def is_antisymmetric(X: FqSubset) -> bool:
    return _neg_mask(arith(X.field), X.mask) & X.mask == 0


def sym_group(X: FqSubset) -> FqSubset:
    """The additive stabilizer ``{h : h + X = X}``; the whole field for empty ``X``."""
    f = X.field
    if not X.mask:
        return FqSubset.full(f)
    sh = _shifter(f)
    ar = arith(f)
    # any stabilizer element h satisfies h + x0 in X, so h ranges over X - x0
    x0 = X.min_index()
    candidates = sh.translate(X.mask, ar.neg(x0))
    out = 0
    for h in iter_bits(candidates):
        if sh.translate(X.mask, h) == X.mask:
            out |= 1 << h
    return FqSubset(f, out)


def is_subgroup(G: FqSubset) -> bool:
    # a finite nonempty set closed under addition is a subgroup
    return bool(G.mask & 1) and _sum_masks(G.field, G.mask, G.mask) == G.mask


def _require_subgroup(G: FqSubset) -> None:
    if not is_subgroup(G):
        raise PreconditionError(f"{G!r} is not an additive subgroup")


def is_union_of_cosets(X: FqSubset, G: FqSubset) -> bool:
    f = _check(X, G)
    _require_subgroup(G)
    # 0 in G gives X within X+G; equality means no coset meets X without lying in it
    return _sum_masks(f, X.mask, G.mask) == X.mask


def coset(c: Scalar, G: FqSubset) -> FqSubset:
    return translate(G, c)


@dataclass(frozen=True)
class KneserReport:
    lhs: int
    middle: int
    rhs: int
    stabilizer_size: int

    @property
    def holds(self) -> bool:
        return self.lhs >= self.middle >= self.rhs

    def to_json(self) -> dict:
        return {"lhs": self.lhs, "middle": self.middle, "rhs": self.rhs,
                "stabilizer_size": self.stabilizer_size, "holds": self.holds}


def kneser_check(X: FqSubset, Y: FqSubset) -> KneserReport:
    """Evaluate both inequalities of Kneser's bound for ``X + Y``."""
    f = _check(X, Y)
    if not X.mask or not Y.mask:
        raise PreconditionError("Kneser check needs nonempty sets")
    S = sumset(X, Y)
    H = sym_group(S)
    h = H.cardinality()
    xh = _sum_masks(f, X.mask, H.mask).bit_count()
    yh = _sum_masks(f, Y.mask, H.mask).bit_count()
    return KneserReport(
        lhs=S.cardinality(),
        middle=xh + yh - h,
        rhs=X.cardinality() + Y.cardinality() - h,
        stabilizer_size=h,
    )
