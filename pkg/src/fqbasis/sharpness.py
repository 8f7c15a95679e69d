"""Pairs with ``|A||B| = q`` for which no ``N(AB)`` is the whole field."""

from __future__ import annotations

from dataclasses import dataclass
from itertools import product
from typing import Optional

from .errors import ConstructionViolation, PreconditionError
from .field import FieldSpec, arith, find_primitive_element, make_field
from .subsets import FqSubset, productset, sumset
from .theorems import minimal_basis_order


@dataclass(frozen=True)
class Counterexample:
    kind: str
    A: FqSubset
    B: FqSubset
    C: Optional[FqSubset] = None

    def properties(self, cap: Optional[int] = None) -> dict:
        """Recompute the properties that make this pair a counterexample."""
        f = self.A.field
        AB = productset(self.A, self.B)
        if cap is None:
            cap = 4 * f.q
        out = {
            "size_A": self.A.cardinality(),
            "size_B": self.B.cardinality(),
            "product_equals_q": self.A.cardinality() * self.B.cardinality() == f.q,
            "AB": AB.members(),
            "oracle_minimal_order": minimal_basis_order(AB, cap).minimal_order,
            "oracle_cap": cap,
        }
        if self.C is not None:
            out.update({
                "size_C": self.C.cardinality(),
                "AB_subset_C": AB.issubset(self.C),
                "C_closed_under_addition": sumset(self.C, self.C) == self.C,
                "C_proper": not self.C.is_full(),
            })
        return out

    def to_json(self, cap: Optional[int] = None) -> dict:
        out = {"kind": self.kind, "field": self.A.field.to_json(),
               "A": self.A.members(), "B": self.B.members()}
        if self.C is not None:
            out["C"] = self.C.members()
        out["properties"] = self.properties(cap)
        return out


def trivial_counterexample(f: FieldSpec) -> Counterexample:
    """``A`` the whole field, ``B = {0}``."""
    return Counterexample("trivial", FqSubset.full(f), FqSubset.from_indices(f, [0]))


def subfield_counterexample(f: FieldSpec) -> Counterexample:
    """``A = B`` = the subfield of order ``sqrt(q)``, the fixed points of ``x -> x^(p^(m/2))``."""
    if f.m % 2:
        raise PreconditionError(f"{f!r} has odd degree, no subfield of order sqrt(q)")
    ar = arith(f)
    e = f.p ** (f.m // 2)
    K = FqSubset.from_indices(f, [x for x in range(f.q) if ar.pow(x, e) == x])
    if K.cardinality() ** 2 != f.q:
        raise ConstructionViolation(f"subfield of {f!r} has {K.cardinality()} elements")
    return Counterexample("subfield", K, K)


def _span(f: FieldSpec, powers: list[int], count: int) -> FqSubset:
    """All F_p-combinations of the first ``count`` entries of ``powers``."""
    ar = arith(f)
    mask = 0
    for coords in product(range(f.p), repeat=count):
        v = 0
        for c, w in zip(coords, powers):
            if c:
                # prime-subfield constant c has index c
                v = ar.add(v, ar.mul(c, w))
        mask |= 1 << v
    return FqSubset(f, mask)


def box_counterexample(p: int, m: int, k: int, l: int) -> Counterexample:
    """Spans of ``1, xi, ..., xi^(k-1)`` and ``1, ..., xi^(l-1)``, with ``C`` the degree < m-1 span."""
    if k < 1 or l < 1 or k + l != m:
        raise PreconditionError(f"need k, l >= 1 and k + l = m, got k={k}, l={l}, m={m}")
    f = make_field(p, m)
    ar = arith(f)
    xi = find_primitive_element(f).index
    powers = [ar.pow(xi, i) for i in range(m)]
    A = _span(f, powers, k)
    B = _span(f, powers, l)
    C = _span(f, powers, m - 1)
    ce = Counterexample("box", A, B, C)
    AB = productset(A, B)
    checks = {
        "|A| = p^k": A.cardinality() == p**k,
        "|B| = p^l": B.cardinality() == p**l,
        "AB in C": AB.issubset(C),
        "C + C = C": sumset(C, C) == C,
        "C proper": not C.is_full(),
    }
    failed = [name for name, ok in checks.items() if not ok]
    if failed:
        raise ConstructionViolation(f"box construction ({p},{m},{k},{l}) fails: {failed}")
    return ce
