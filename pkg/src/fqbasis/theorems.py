"""Certificate-producing verifiers for the basis-order theorems.

Each verifier replays the constructive argument on a concrete pair ``(A, B)``
and records every choice it makes (the ``xi``, collision witnesses,
intermediate sets) in a trace.  The final step always recomputes ``N(AB)``
directly, so ``verified`` never rests on the trace alone.

Any failing step whose success is mathematically guaranteed raises
:class:`TheoremViolation`; bad input raises :class:`PreconditionError`.
"""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field
from typing import Optional

from .collisions import find_xi_lemma2, i_set, i_subset_witness, plus_minus_sizes
from .errors import LemmaViolation, PreconditionError, TheoremViolation
from .field import FieldSpec, arith
from .structure import (
    ANTISYMMETRIC,
    SYMMETRIC,
    classify_coset,
    cover_by_doubling,
    dichotomy,
    extract_regular_subset,
)
from .subsets import (
    FqSubset,
    _check,
    _dilate_mask,
    _sum_masks,
    is_antisymmetric,
    is_symmetric,
    iter_bits,
    iterated_sum,
    n_fold_product_sum,
    productset,
)

ANTISYM8 = "antisym8"
SYM8 = "sym8"
MAIN16 = "main16"
TWOQ8 = "twoq8"
THEOREMS = (ANTISYM8, SYM8, MAIN16, TWOQ8)
CLAIMED_ORDER = {ANTISYM8: 8, SYM8: 8, MAIN16: 16, TWOQ8: 8}


@dataclass
class Certificate:
    theorem: str
    field: FieldSpec
    A: FqSubset
    B: FqSubset
    trace: list = dc_field(default_factory=list)
    claimed_order: int = 0
    verified: bool = False

    def step(self, name: str, **data) -> None:
        self.trace.append({"step": name, "data": data})

    def to_json(self) -> dict:
        return {
            "theorem": self.theorem,
            "field": self.field.to_json(),
            "A": self.A.members(),
            "B": self.B.members(),
            "trace": self.trace,
            "claimed_order": self.claimed_order,
            "verified": self.verified,
        }


def _violated(cert: Certificate, what: str) -> TheoremViolation:
    return TheoremViolation(f"{cert.theorem} on A={cert.A.members()}, "
                            f"B={cert.B.members()} over {cert.field!r}: {what}")


def _finish(cert: Certificate, order: int) -> Certificate:
    NAB = n_fold_product_sum(order, cert.A, cert.B)
    cert.step("direct", order=order, size=NAB.cardinality())
    if not NAB.is_full():
        raise _violated(cert, f"{order}AB has only {NAB.cardinality()} elements")
    cert.claimed_order = order
    cert.verified = True
    return cert


def _start(theorem: str, A: FqSubset, B: FqSubset) -> Certificate:
    f = _check(A, B)
    cert = Certificate(theorem, f, A, B)
    cert.step("precondition", size_A=A.cardinality(), size_B=B.cardinality(), q=f.q)
    return cert


def _require_product_above_q(A: FqSubset, B: FqSubset, factor: int = 1, strict=True) -> None:
    n, q = A.cardinality() * B.cardinality(), A.field.q
    ok = n > factor * q if strict else n >= factor * q
    if not ok:
        rel = ">" if strict else ">="
        raise PreconditionError(f"need |A||B| {rel} {factor}q, got {n} with q={q}")


def _xi_step(cert: Certificate) -> int:
    try:
        xi = find_xi_lemma2(cert.A, cert.B).index
    except LemmaViolation as exc:
        raise _violated(cert, str(exc)) from exc
    plus, minus = plus_minus_sizes(cert.A, cert.B, xi)
    cert.step("xi", xi=xi, size_plus=plus, size_minus=minus)
    return xi


def _four_fold(A: FqSubset, B: FqSubset) -> FqSubset:
    return iterated_sum(4, productset(A, B))


def verify_antisym8(A: FqSubset, B: FqSubset) -> Certificate:
    """Certify ``8AB = F_q`` for antisymmetric ``B`` with ``|A||B| > q``."""
    _check(A, B)
    if not B.mask or not is_antisymmetric(B):
        raise PreconditionError("B must be nonempty and antisymmetric")
    _require_product_above_q(A, B)
    cert = _start(ANTISYM8, A, B)
    f = cert.field
    ar = arith(f)
    xi = _xi_step(cert)

    # a1 + b1 xi = -(a2 + b2 xi); the sum set exceeds q/2 so it meets its negative
    xB = [(b, ar.mul(b, xi)) for b in iter_bits(B.mask)]
    first: dict[int, tuple[int, int]] = {}
    for a in iter_bits(A.mask):
        for b, bx in xB:
            first.setdefault(ar.add(a, bx), (a, b))
    hit = None
    for a1 in iter_bits(A.mask):
        for b1, bx in xB:
            t = ar.add(a1, bx)
            other = first.get(ar.neg(t))
            if other is not None:
                hit = (a1, b1) + other
                break
        if hit:
            break
    if hit is None:
        raise _violated(cert, f"A + xi B and its negative are disjoint for xi={xi}")
    a1, b1, a2, b2 = hit
    den = ar.add(b1, b2)
    num = ar.add(a1, a2)
    if den == 0:
        raise _violated(cert, "b1 + b2 = 0 inside an antisymmetric set")
    xi_formula = ar.neg(ar.div(num, den))
    cert.step("collision", a1=a1, b1=b1, a2=a2, b2=b2, xi_formula=xi_formula)
    if xi_formula != xi:
        raise _violated(cert, f"-(a1+a2)/(b1+b2) = {xi_formula} differs from xi = {xi}")

    # W = {a3 (b1+b2) + b3 (a1+a2)} = (b1+b2)(A - xi B)
    W = FqSubset(f, _sum_masks(f, _dilate_mask(ar, den, A.mask), _dilate_mask(ar, num, B.mask)))
    cert.step("witness_set", multipliers=[den, num], W=W.members(), size=W.cardinality())
    if 2 * W.cardinality() <= f.q:
        raise _violated(cert, f"|W| = {W.cardinality()} is not above q/2")
    four = _four_fold(A, B)
    cert.step("inclusion", size_4AB=four.cardinality(), holds=W.issubset(four))
    if not W.issubset(four):
        raise _violated(cert, "W is not inside 4AB")
    if not cover_by_doubling(W):
        raise _violated(cert, "W + W is not the whole field")
    cert.step("doubling", size=f.q)
    return _finish(cert, 8)


def verify_sym8(A: FqSubset, B: FqSubset) -> Certificate:
    """Certify ``8AB = F_q`` for symmetric ``B`` with ``|A||B| > q``."""
    _check(A, B)
    if not B.mask or not is_symmetric(B):
        raise PreconditionError("B must be nonempty and symmetric")
    _require_product_above_q(A, B)
    cert = _start(SYM8, A, B)
    f = cert.field
    xi = _xi_step(cert)
    # |A + xi B| <= q < |A||B| forces a collision
    try:
        w = i_subset_witness(A, B, xi)
    except (PreconditionError, LemmaViolation) as exc:
        raise _violated(cert, str(exc)) from exc
    cert.step("collision", a1=w.a1, b1=w.b1, a2=w.a2, b2=w.b2,
              S=w.S.members(), size=w.S.cardinality())
    I = i_set(A, B)
    four = _four_fold(A, B)
    inside = I.issubset(four)
    cert.step("i_set", size=I.cardinality(), contains_S=w.S.issubset(I),
              size_4AB=four.cardinality(), holds=inside)
    if 2 * I.cardinality() <= f.q:
        raise _violated(cert, f"|I(A,B)| = {I.cardinality()} is not above q/2")
    if not inside:
        raise _violated(cert, "I(A,B) is not inside 4AB although B = -B")
    if not cover_by_doubling(I):
        raise _violated(cert, "I + I is not the whole field")
    cert.step("doubling", size=f.q)
    return _finish(cert, 8)


def _verify_regular(A: FqSubset, S: FqSubset, kind: str, parent: Certificate) -> Certificate:
    fn = verify_antisym8 if kind == ANTISYMMETRIC else verify_sym8
    try:
        return fn(A, S)
    except PreconditionError as exc:
        raise _violated(parent, f"sub-theorem precondition failed: {exc}") from exc


def verify_main16(A: FqSubset, B: FqSubset) -> Certificate:
    """Certify ``16AB = F_q`` whenever ``|A||B| > q``."""
    _check(A, B)
    _require_product_above_q(A, B)
    cert = _start(MAIN16, A, B)
    try:
        d = dichotomy(B)
    except LemmaViolation as exc:
        raise _violated(cert, str(exc)) from exc
    cert.step("dichotomy", **d.to_json())
    BB = d.doubled
    if d.alternative == "ii":
        c = arith(cert.field).add(d.base, d.base)
        S, kind = BB, classify_coset(c, d.group)
        cert.step("coset", c=c, kind=kind)
    else:
        try:
            reg = extract_regular_subset(BB)
        except LemmaViolation as exc:
            raise _violated(cert, str(exc)) from exc
        S, kind = reg.subset, reg.kind
        cert.step("regular_subset", **reg.to_json())
        if S.cardinality() < B.cardinality():
            raise _violated(cert, f"|S| = {S.cardinality()} < |B| = {B.cardinality()}")
    sub = _verify_regular(A, S, kind, cert)
    cert.step("sub_certificate", certificate=sub.to_json())
    # S in B+B gives AS in 2AB, hence 8AS in 16AB
    cert.step("lift", container="B+B", holds=S.issubset(BB))
    if not S.issubset(BB):
        raise _violated(cert, "S is not inside B+B")
    return _finish(cert, 16)


def verify_twoq8(A: FqSubset, B: FqSubset) -> Certificate:
    """Certify ``8AB = F_q`` whenever ``|A||B| >= 2q``."""
    _check(A, B)
    _require_product_above_q(A, B, factor=2, strict=False)
    cert = _start(TWOQ8, A, B)
    if B.cardinality() <= 2:
        # |A| >= q here, so A is the whole field
        cert.step("full_A", holds=A.is_full())
        if not A.is_full():
            raise _violated(cert, "|B| <= 2 but A is not the whole field")
        return _finish(cert, 8)
    try:
        reg = extract_regular_subset(B)
    except LemmaViolation as exc:
        raise _violated(cert, str(exc)) from exc
    S = reg.subset
    cert.step("regular_subset", **reg.to_json())
    if 2 * S.cardinality() <= B.cardinality():
        raise _violated(cert, f"|S| = {S.cardinality()} is not above |B|/2")
    sub = _verify_regular(A, S, reg.kind, cert)
    cert.step("sub_certificate", certificate=sub.to_json())
    cert.step("lift", container="B", holds=S.issubset(B))
    if not S.issubset(B):
        raise _violated(cert, "S is not inside B")
    return _finish(cert, 8)


VERIFIERS = {
    ANTISYM8: verify_antisym8,
    SYM8: verify_sym8,
    MAIN16: verify_main16,
    TWOQ8: verify_twoq8,
}


def theorem_applies(theorem: str, A: FqSubset, B: FqSubset) -> bool:
    """Whether the hypotheses of ``theorem`` hold for ``(A, B)``."""
    n, q = A.cardinality() * B.cardinality(), A.field.q
    if theorem == ANTISYM8:
        return n > q and is_antisymmetric(B)
    if theorem == SYM8:
        return n > q and is_symmetric(B)
    if theorem == MAIN16:
        return n > q
    if theorem == TWOQ8:
        return n >= 2 * q
    raise PreconditionError(f"unknown theorem {theorem!r}")


def select_theorem(A: FqSubset, B: FqSubset) -> Optional[str]:
    """Strongest applicable theorem: an order-8 result when available."""
    n, q = A.cardinality() * B.cardinality(), A.field.q
    if n <= q:
        return None
    if is_symmetric(B):
        return SYM8
    if is_antisymmetric(B):
        return ANTISYM8
    if n >= 2 * q:
        return TWOQ8
    return MAIN16


@dataclass(frozen=True)
class OracleResult:
    minimal_order: Optional[int]
    cap: int
    X: FqSubset

    def to_json(self) -> dict:
        return {"minimal_order": self.minimal_order, "cap": self.cap, "set": self.X.members()}


def minimal_basis_order(X: FqSubset, cap: Optional[int] = None) -> OracleResult:
    """Smallest ``k <= cap`` with ``kX = F_q``, by brute-force iteration."""
    f = X.field
    if cap is None:
        cap = 2 * f.q
    if cap < 1:
        raise PreconditionError("cap must be >= 1")
    full = (1 << f.q) - 1
    acc = X.mask
    for k in range(1, cap + 1):
        if acc == full:
            return OracleResult(k, cap, X)
        nxt = _sum_masks(f, acc, X.mask)
        if nxt == acc:
            # stationary and not full: no larger k can succeed
            break
        acc = nxt
    return OracleResult(None, cap, X)


@dataclass
class PairReport:
    A: FqSubset
    B: FqSubset
    theorem: Optional[str]
    certificate: Optional[Certificate]
    oracle: OracleResult

    @property
    def claimed_order(self) -> Optional[int]:
        return self.certificate.claimed_order if self.certificate else None

    @property
    def consistent(self) -> bool:
        if self.certificate is None:
            return True
        order = self.oracle.minimal_order
        return self.certificate.verified and order is not None and self.claimed_order >= order

    def to_json(self) -> dict:
        if self.certificate is not None:
            out = self.certificate.to_json()
        else:
            out = {"theorem": None, "field": self.A.field.to_json(), "A": self.A.members(),
                   "B": self.B.members(), "trace": [], "claimed_order": None,
                   "verified": False}
        out["oracle_minimal_order"] = self.oracle.minimal_order
        out["consistent"] = self.consistent
        return out


def verify_pair(A: FqSubset, B: FqSubset, cap: Optional[int] = None,
                theorem: Optional[str] = None) -> PairReport:
    """Certify with the strongest applicable theorem (or ``theorem``) and run the oracle."""
    _check(A, B)
    if theorem is None:
        theorem = select_theorem(A, B)
    cert = VERIFIERS[theorem](A, B) if theorem else None
    oracle = minimal_basis_order(productset(A, B), cap)
    return PairReport(A, B, theorem, cert, oracle)
