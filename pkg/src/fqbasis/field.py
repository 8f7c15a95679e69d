"""Exact arithmetic in GF(p^m).

Elements are coordinate vectors over GF(p) in the power basis of a root of
the field modulus, stored as their canonical index ``sum(c_i * p**i)``.  The
modulus is the smallest monic irreducible polynomial of degree ``m`` under that
same integer ordering of its lower coefficients, so a given ``(p, m)`` always
yields the same field and the same element numbering.  Prime fields use the
degree-1 modulus ``x`` and go through the same code path.

``FieldElement`` arithmetic is done on coefficient polynomials.  Bulk code
(subsets, sweeps) goes through :func:`arith`, which builds log/antilog tables
from a primitive element; the test-suite checks the two routes against each
other.
"""

from __future__ import annotations

import functools
from dataclasses import dataclass
from itertools import product
from typing import Iterator, Sequence

from .errors import FieldMismatchError, PreconditionError

DEFAULT_MAX_ORDER = 1 << 16

# Full q x q addition/multiplication tables are built only up to this order.
_DENSE_TABLE_LIMIT = 512


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n < 4:
        return True
    if n % 2 == 0:
        return False
    d = 3
    while d * d <= n:
        if n % d == 0:
            return False
        d += 2
    return True


def prime_factors(n: int) -> list[int]:
    """Distinct prime factors of ``n`` in increasing order."""
    out = []
    d = 2
    while d * d <= n:
        if n % d == 0:
            out.append(d)
            while n % d == 0:
                n //= d
        d += 1
    if n > 1:
        out.append(n)
    return out


# -- polynomials over GF(p): coefficient lists, lowest degree first ----------

def _trim(a: list[int]) -> list[int]:
    while a and a[-1] == 0:
        a.pop()
    return a


def _poly_mod(a: Sequence[int], mod: Sequence[int], p: int) -> list[int]:
    """Remainder of ``a`` divided by the monic polynomial ``mod``."""
    r = _trim([c % p for c in a])
    d = len(mod) - 1
    while len(r) - 1 >= d:
        lead = r[-1]
        shift = len(r) - 1 - d
        for i, c in enumerate(mod):
            r[shift + i] = (r[shift + i] - lead * c) % p
        _trim(r)
    return r


def _poly_mul(a: Sequence[int], b: Sequence[int], p: int) -> list[int]:
    if not a or not b:
        return []
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] = (out[i + j] + x * y) % p
    return out


def _monic_polys(p: int, degree: int) -> Iterator[list[int]]:
    for low in product(range(p), repeat=degree):
        yield list(low) + [1]


def is_irreducible(poly: Sequence[int], p: int) -> bool:
    """Trial division by every monic polynomial of degree at most deg/2."""
    poly = _trim(list(poly))
    n = len(poly) - 1
    if n < 1:
        return False
    for d in range(1, n // 2 + 1):
        for g in _monic_polys(p, d):
            if not _poly_mod(poly, g, p):
                return False
    return True


def canonical_modulus(p: int, m: int) -> tuple[int, ...]:
    """Smallest monic irreducible of degree ``m`` (lower coefficients read base p)."""
    for n in range(p**m):
        low = [(n // p**i) % p for i in range(m)]
        poly = low + [1]
        if is_irreducible(poly, p):
            return tuple(poly)
    raise AssertionError(f"no irreducible polynomial of degree {m} over GF({p})")


@dataclass(frozen=True)
class FieldSpec:
    """The field GF(p^m) together with its defining modulus."""

    p: int
    m: int
    modulus: tuple[int, ...]
    q: int

    def __repr__(self) -> str:
        return f"GF({self.p}^{self.m})" if self.m > 1 else f"GF({self.p})"

    def element(self, index: int) -> FieldElement:
        return from_index(self, index)

    @property
    def zero(self) -> FieldElement:
        return FieldElement(self, 0)

    @property
    def one(self) -> FieldElement:
        return FieldElement(self, 1)

    def elements(self) -> Iterator[FieldElement]:
        for i in range(self.q):
            yield FieldElement(self, i)

    def to_json(self) -> dict:
        return {"p": self.p, "m": self.m, "modulus": list(self.modulus)}


def make_field(p: int, m: int = 1, max_order: int = DEFAULT_MAX_ORDER) -> FieldSpec:
    """Build GF(p^m) with its canonical modulus.

    Raises PreconditionError for a non-prime ``p``, ``m < 1`` or
    ``p**m > max_order``.  Repeated calls return the same object.
    """
    if not is_prime(p):
        raise PreconditionError(f"characteristic {p} is not prime")
    if m < 1:
        raise PreconditionError(f"extension degree must be >= 1, got {m}")
    if p**m > max_order:
        raise PreconditionError(f"field order {p**m} exceeds bound {max_order}")
    return _build_field(p, m)


@functools.lru_cache(maxsize=None)
def _build_field(p: int, m: int) -> FieldSpec:
    modulus = (0, 1) if m == 1 else canonical_modulus(p, m)
    return FieldSpec(p, m, modulus, p**m)


def field_from_json(data: dict, max_order: int = DEFAULT_MAX_ORDER) -> FieldSpec:
    f = make_field(int(data["p"]), int(data["m"]), max_order)
    if "modulus" in data and tuple(data["modulus"]) != f.modulus:
        raise PreconditionError(f"modulus {data['modulus']} is not canonical for {f!r}")
    return f


def index_to_coeffs(index: int, p: int, m: int) -> tuple[int, ...]:
    return tuple((index // p**i) % p for i in range(m))


def coeffs_to_index(coeffs: Sequence[int], p: int) -> int:
    return sum(c * p**i for i, c in enumerate(coeffs))


@dataclass(frozen=True)
class FieldElement:
    field: FieldSpec
    index: int

    def __post_init__(self):
        if not 0 <= self.index < self.field.q:
            raise PreconditionError(f"index {self.index} out of range for {self.field!r}")

    @property
    def coeffs(self) -> tuple[int, ...]:
        return index_to_coeffs(self.index, self.field.p, self.field.m)

    def __repr__(self) -> str:
        return f"{self.field!r}[{self.index}]"

    def __int__(self) -> int:
        return self.index

    def __bool__(self) -> bool:
        return self.index != 0

    def __add__(self, other):
        return add(self, other)

    def __sub__(self, other):
        return sub(self, other)

    def __mul__(self, other):
        return mul(self, other)

    def __truediv__(self, other):
        return div(self, other)

    def __neg__(self):
        return neg(self)

    def __pow__(self, e: int):
        return power(self, e)


def from_index(f: FieldSpec, index: int) -> FieldElement:
    return FieldElement(f, index)


def element_index(x: FieldElement) -> int:
    return x.index


def _same_field(x: FieldElement, y: FieldElement) -> FieldSpec:
    if x.field is not y.field and x.field != y.field:
        raise FieldMismatchError(f"{x.field!r} vs {y.field!r}")
    return x.field


def _from_coeffs(f: FieldSpec, coeffs: Sequence[int]) -> FieldElement:
    padded = list(coeffs) + [0] * (f.m - len(coeffs))
    return FieldElement(f, coeffs_to_index(padded[: f.m], f.p))


def add(x: FieldElement, y: FieldElement) -> FieldElement:
    f = _same_field(x, y)
    return _from_coeffs(f, [(a + b) % f.p for a, b in zip(x.coeffs, y.coeffs)])


def neg(x: FieldElement) -> FieldElement:
    f = x.field
    return _from_coeffs(f, [(-a) % f.p for a in x.coeffs])


def sub(x: FieldElement, y: FieldElement) -> FieldElement:
    return add(x, neg(y))


def mul(x: FieldElement, y: FieldElement) -> FieldElement:
    f = _same_field(x, y)
    prod = _poly_mul(_trim(list(x.coeffs)), _trim(list(y.coeffs)), f.p)
    return _from_coeffs(f, _poly_mod(prod, f.modulus, f.p))


def power(x: FieldElement, e: int) -> FieldElement:
    f = x.field
    if e < 0:
        return power(inv(x), -e)
    result = f.one
    base = x
    while e:
        if e & 1:
            result = mul(result, base)
        base = mul(base, base)
        e >>= 1
    return result


def inv(x: FieldElement) -> FieldElement:
    if x.index == 0:
        raise ZeroDivisionError("inverse of zero")
    return power(x, x.field.q - 2)


def div(x: FieldElement, y: FieldElement) -> FieldElement:
    _same_field(x, y)
    return mul(x, inv(y))


def multiplicative_order(x: FieldElement) -> int:
    if x.index == 0:
        raise PreconditionError("zero has no multiplicative order")
    n = x.field.q - 1
    order = n
    for r in prime_factors(n):
        while order % r == 0 and power(x, order // r).index == 1:
            order //= r
    return order


@functools.lru_cache(maxsize=None)
def find_primitive_element(f: FieldSpec) -> FieldElement:
    """Generator of the multiplicative group with the smallest index."""
    n = f.q - 1
    factors = prime_factors(n)
    for i in range(1, f.q):
        g = FieldElement(f, i)
        if all(power(g, n // r).index != 1 for r in factors):
            return g
    raise AssertionError(f"{f!r} has no primitive element")


class Arith:
    """Index-level arithmetic tables for one field.

    ``exp``/``log`` are taken with respect to the canonical primitive element.
    ``log[0]`` is unused.
    """

    def __init__(self, f: FieldSpec):
        self.field = f
        p, m, q = f.p, f.m, f.q
        self.p, self.m, self.q = p, m, q
        self.generator = find_primitive_element(f).index

        # multiplication by the generator as an F_p-linear map on coordinates
        g_coeffs = _trim(list(index_to_coeffs(self.generator, p, m)))
        images = []
        for i in range(m):
            basis = [0] * i + [1]
            img = _poly_mod(_poly_mul(basis, g_coeffs, p), f.modulus, p)
            images.append(img + [0] * (m - len(img)))

        exp = [0] * (q - 1)
        log = [0] * q
        v = [1] + [0] * (m - 1)
        for k in range(q - 1):
            idx = coeffs_to_index(v, p)
            exp[k] = idx
            log[idx] = k
            v = [sum(v[i] * images[i][j] for i in range(m)) % p for j in range(m)]
        self.exp = exp
        self.log = log
        self.neg_table = [coeffs_to_index([(-c) % p for c in index_to_coeffs(i, p, m)], p)
                          for i in range(q)]
        self.inv_table = [0] + [exp[(-log[i]) % (q - 1)] for i in range(1, q)]

        self.add_table = None
        self.mul_table = None
        if q <= _DENSE_TABLE_LIMIT:
            self.add_table = [[self._add(i, j) for j in range(q)] for i in range(q)]
            self.mul_table = [[self._mul(i, j) for j in range(q)] for i in range(q)]

    def _add(self, i: int, j: int) -> int:
        p = self.p
        if p == 2:
            return i ^ j
        if self.m == 1:
            return (i + j) % p
        out, scale = 0, 1
        while i or j:
            out += ((i % p + j % p) % p) * scale
            i //= p
            j //= p
            scale *= p
        return out

    def _mul(self, i: int, j: int) -> int:
        if i == 0 or j == 0:
            return 0
        return self.exp[(self.log[i] + self.log[j]) % (self.q - 1)]

    def add(self, i: int, j: int) -> int:
        if self.add_table is not None:
            return self.add_table[i][j]
        return self._add(i, j)

    def sub(self, i: int, j: int) -> int:
        return self.add(i, self.neg_table[j])

    def mul(self, i: int, j: int) -> int:
        if self.mul_table is not None:
            return self.mul_table[i][j]
        return self._mul(i, j)

    def neg(self, i: int) -> int:
        return self.neg_table[i]

    def inv(self, i: int) -> int:
        if i == 0:
            raise ZeroDivisionError("inverse of zero")
        return self.inv_table[i]

    def div(self, i: int, j: int) -> int:
        return self.mul(i, self.inv(j))

    def pow(self, i: int, e: int) -> int:
        if i == 0:
            if e < 0:
                raise ZeroDivisionError("inverse of zero")
            return 1 if e == 0 else 0
        return self.exp[(self.log[i] * e) % (self.q - 1)]


@functools.lru_cache(maxsize=None)
def arith(f: FieldSpec) -> Arith:
    return Arith(f)
