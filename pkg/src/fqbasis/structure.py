"""Covering by doubling, symmetric/antisymmetric extraction, and the B+B dichotomy."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

from .errors import LemmaViolation, PreconditionError
from .field import arith
from .subsets import (
    FqSubset,
    Scalar,
    _scalar,
    _sum_masks,
    _require_subgroup,
    is_antisymmetric,
    is_symmetric,
    iter_bits,
    sym_group,
    translate,
)

SYMMETRIC = "symmetric"
ANTISYMMETRIC = "antisymmetric"


def cover_by_doubling(X: FqSubset) -> bool:
    """Whether ``X + X`` is the whole field (always so once ``2|X| > q``)."""
    f = X.field
    return _sum_masks(f, X.mask, X.mask) == (1 << f.q) - 1


def regular_size_bound_met(size: int, n: int) -> bool:
    """``size >= 2n/3``, relaxed to ``size >= (2n-1)/3`` when ``n = 2 mod 3``."""
    if n % 3 == 2:
        return 3 * size >= 2 * n - 1
    return 3 * size >= 2 * n


@dataclass(frozen=True)
class RegularSubset:
    subset: FqSubset
    kind: str
    parts: tuple[FqSubset, FqSubset, FqSubset]

    def to_json(self) -> dict:
        a1, a2, a3 = self.parts
        return {
            "kind": self.kind,
            "S": self.subset.members(),
            "size": self.subset.cardinality(),
            "parts": [a1.members(), a2.members(), a3.members()],
        }


def split_by_negation(A: FqSubset) -> tuple[FqSubset, FqSubset, FqSubset]:
    """``(A1, A2, A3)``: unpaired elements, pair representatives (and 0), partners.

    A pair ``{a, -a}`` inside ``A`` contributes its smaller index to ``A2``
    and the other element to ``A3``.  In characteristic 2 every element is its
    own pair, so ``A2 = A``.
    """
    f = A.field
    neg = arith(f).neg_table
    a1 = a2 = a3 = 0
    mask = A.mask
    for a in iter_bits(mask):
        b = neg[a]
        if not mask >> b & 1:
            a1 |= 1 << a
        elif a <= b:
            a2 |= 1 << a
        else:
            a3 |= 1 << a
    return FqSubset(f, a1), FqSubset(f, a2), FqSubset(f, a3)


def extract_regular_subset(A: FqSubset) -> RegularSubset:
    """Largest symmetric or antisymmetric piece among the three candidates.

    Candidates are ``A2 | A3`` (symmetric), ``A1 | (A2 - {0})`` and
    ``A1 | A3`` (antisymmetric); ties go to the earlier one.  Candidates that
    fail their predicate (the middle one in characteristic 2) are skipped.
    """
    if not A.mask:
        raise PreconditionError("cannot extract from the empty set")
    f = A.field
    parts = split_by_negation(A)
    a1, a2, a3 = (P.mask for P in parts)
    candidates = [
        (a2 | a3, SYMMETRIC),
        (a1 | (a2 & ~1), ANTISYMMETRIC),
        (a1 | a3, ANTISYMMETRIC),
    ]
    best = None
    for mask, kind in candidates:
        S = FqSubset(f, mask)
        ok = is_symmetric(S) if kind == SYMMETRIC else is_antisymmetric(S)
        if ok and (best is None or mask.bit_count() > best[0].cardinality()):
            best = (S, kind)
    S, kind = best
    if not regular_size_bound_met(S.cardinality(), A.cardinality()):
        raise LemmaViolation(f"extracted {kind} subset of size {S.cardinality()} "
                             f"from a set of size {A.cardinality()}")
    return RegularSubset(S, kind, parts)


@dataclass(frozen=True)
class Dichotomy:
    """Outcome of the B+B dichotomy.

    Alternative ``"i"``: ``2|B+B| >= 3|B|``.  Alternative ``"ii"``: ``B`` sits
    in the coset ``b + G`` of ``G = Sym(B+B)``, ``3|B| > 2|G|`` and
    ``B + B = 2b + G``.
    """

    alternative: str
    doubled: FqSubset
    group: Optional[FqSubset] = None
    base: Optional[int] = None

    def to_json(self) -> dict:
        out = {"alternative": self.alternative, "B+B": self.doubled.members(),
               "size_B+B": self.doubled.cardinality()}
        if self.alternative == "ii":
            out["G"] = self.group.members()
            out["b"] = self.base
        return out


def dichotomy(B: FqSubset) -> Dichotomy:
    n = B.cardinality()
    if n < 2:
        raise PreconditionError("dichotomy needs |B| >= 2")
    f = B.field
    BB = FqSubset(f, _sum_masks(f, B.mask, B.mask))
    if 2 * BB.cardinality() >= 3 * n:
        return Dichotomy("i", BB)
    G = sym_group(BB)
    b = B.min_index()
    two_b = arith(f).add(b, b)
    if not (B.issubset(translate(G, b))
            and 3 * n > 2 * G.cardinality()
            and BB == translate(G, two_b)):
        raise LemmaViolation(f"dichotomy witness fails for B={B!r}")
    return Dichotomy("ii", BB, G, b)


def classify_coset(c: Scalar, G: FqSubset) -> str:
    """Kind of the coset ``c + G``: symmetric iff ``2c`` lies in ``G``."""
    _require_subgroup(G)
    x = _scalar(G.field, c)
    return SYMMETRIC if arith(G.field).add(x, x) in G else ANTISYMMETRIC


def kneser_doubling_bound_holds(B: FqSubset) -> bool:
    """``|B+B| >= 2|B| - |Sym(B+B)|``."""
    f = B.field
    BB = FqSubset(f, _sum_masks(f, B.mask, B.mask))
    return BB.cardinality() >= 2 * B.cardinality() - sym_group(BB).cardinality()

