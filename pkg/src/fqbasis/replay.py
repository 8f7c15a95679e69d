"""Independent re-checking of certificate traces.

Works from the certificate's JSON form alone.  Sets are plain ``frozenset``
objects and elements are combined with the coefficient-polynomial arithmetic
of :mod:`fqbasis.field`, so nothing here shares code with the bit-vector path
that produced the certificate.
"""

from __future__ import annotations

from fractions import Fraction

from . import field as fc


class _Naive:
    def __init__(self, f: fc.FieldSpec):
        self.f = f
        self.q = f.q
        self.elems = [fc.FieldElement(f, i) for i in range(f.q)]
        self._add: dict = {}
        self._mul: dict = {}

    def add(self, i, j):
        key = (i, j) if i <= j else (j, i)
        r = self._add.get(key)
        if r is None:
            r = self._add[key] = fc.add(self.elems[i], self.elems[j]).index
        return r

    def mul(self, i, j):
        key = (i, j) if i <= j else (j, i)
        r = self._mul.get(key)
        if r is None:
            r = self._mul[key] = fc.mul(self.elems[i], self.elems[j]).index
        return r

    def neg(self, i):
        return fc.neg(self.elems[i]).index

    def div(self, i, j):
        return fc.div(self.elems[i], self.elems[j]).index

    def sumset(self, X, Y):
        return frozenset(self.add(x, y) for x in X for y in Y)

    def prodset(self, X, Y):
        return frozenset(self.mul(x, y) for x in X for y in Y)

    def dilate(self, lam, X):
        return frozenset(self.mul(lam, x) for x in X)

    def negset(self, X):
        return frozenset(self.neg(x) for x in X)

    def kfold(self, k, X):
        acc = X
        for _ in range(k - 1):
            acc = self.sumset(acc, X)
        return acc

    def full(self):
        return frozenset(range(self.q))


def replay_certificate(cert: dict) -> list[str]:
    """Recompute every recorded step; returns a list of discrepancies (empty if sound)."""
    f = fc.field_from_json(cert["field"])
    nv = _Naive(f)
    A, B = frozenset(cert["A"]), frozenset(cert["B"])
    problems: list[str] = []

    def expect(cond, msg):
        if not cond:
            problems.append(f"{cert['theorem']}: {msg}")

    AB = nv.prodset(A, B)
    xi = None
    S_sub = None
    base = None
    for entry in cert["trace"]:
        name, d = entry["step"], entry["data"]
        if name == "precondition":
            expect(d["size_A"] == len(A) and d["size_B"] == len(B) and d["q"] == f.q,
                   "precondition sizes")
        elif name == "xi":
            xi = d["xi"]
            xB = nv.dilate(xi, B)
            plus, minus = len(nv.sumset(A, xB)), len(nv.sumset(A, nv.negset(xB)))
            expect(xi != 0 and (plus, minus) == (d["size_plus"], d["size_minus"]),
                   "xi step sizes")
            expect(2 * plus > f.q and 2 * minus > f.q, "xi does not clear q/2")
        elif name == "collision" and cert["theorem"] == "antisym8":
            a1, b1, a2, b2 = d["a1"], d["b1"], d["a2"], d["b2"]
            expect({a1, a2} <= A and {b1, b2} <= B, "collision witnesses outside A, B")
            lhs = nv.add(a1, nv.mul(b1, xi))
            rhs = nv.neg(nv.add(a2, nv.mul(b2, xi)))
            expect(lhs == rhs, "a1 + b1 xi != -(a2 + b2 xi)")
            formula = nv.neg(nv.div(nv.add(a1, a2), nv.add(b1, b2)))
            expect(formula == d["xi_formula"] == xi, "xi formula")
        elif name == "collision":
            a1, b1, a2, b2 = d["a1"], d["b1"], d["a2"], d["b2"]
            expect({a1, a2} <= A and {b1, b2} <= B, "collision witnesses outside A, B")
            expect((a1, b1) != (a2, b2), "collision pairs coincide")
            expect(nv.add(a1, nv.mul(b1, xi)) == nv.add(a2, nv.mul(b2, xi)),
                   "a1 + b1 xi != a2 + b2 xi")
            S = nv.dilate(nv.add(b1, nv.neg(b2)), nv.sumset(A, nv.dilate(xi, B)))
            expect(S == frozenset(d["S"]) and len(S) == d["size"], "collision set S")
        elif name == "witness_set":
            den, num = d["multipliers"]
            W = nv.sumset(nv.dilate(den, A), nv.dilate(num, B))
            expect(W == frozenset(d["W"]) and len(W) == d["size"], "witness set W")
            expect(2 * len(W) > f.q, "|W| not above q/2")
            four = nv.kfold(4, AB)
            expect(W <= four, "W not inside 4AB")
            expect(nv.sumset(W, W) == nv.full(), "W + W not full")
        elif name == "inclusion":
            expect(len(nv.kfold(4, AB)) == d["size_4AB"], "4AB size")
        elif name == "i_set":
            I = frozenset(
                nv.add(nv.mul(nv.add(b1, nv.neg(b2)), a1), nv.mul(nv.add(a2, nv.neg(a3)), b3))
                for a1 in A for a2 in A for a3 in A for b1 in B for b2 in B for b3 in B
            ) if len(A) * len(B) <= 36 else None
            if I is not None:
                expect(len(I) == d["size"], "I(A,B) size")
                expect(2 * len(I) > f.q, "|I(A,B)| not above q/2")
                expect(nv.sumset(I, I) == nv.full(), "I + I not full")
                expect(I <= nv.kfold(4, AB), "I(A,B) not inside 4AB")
            expect(len(nv.kfold(4, AB)) == d["size_4AB"], "4AB size")
        elif name == "doubling":
            expect(d["size"] == f.q, "doubling size")
        elif name == "dichotomy":
            BB = nv.sumset(B, B)
            expect(BB == frozenset(d["B+B"]), "B+B")
            big = 2 * len(BB) >= 3 * len(B)
            expect((d["alternative"] == "i") == big, "dichotomy alternative")
            if d["alternative"] == "ii":
                G, b = frozenset(d["G"]), d["b"]
                base = b
                expect(b in B, "b outside B")
                expect(all(frozenset(nv.add(h, x) for x in BB) == BB for h in G),
                       "G does not stabilise B+B")
                expect(B <= frozenset(nv.add(b, g) for g in G), "B not inside b + G")
                expect(Fraction(len(B)) > Fraction(2, 3) * len(G), "|B| <= 2|G|/3")
                expect(BB == frozenset(nv.add(nv.add(b, b), g) for g in G), "B+B != 2b + G")
                S_sub = BB
        elif name == "coset":
            expect(base is not None and d["c"] == nv.add(base, base), "coset representative")
            coset = S_sub
            negc = nv.negset(coset)
            if d["kind"] == "symmetric":
                expect(negc == coset, "coset not symmetric")
            else:
                expect(not (negc & coset), "coset not antisymmetric")
        elif name == "regular_subset":
            S_sub = frozenset(d["S"])
            negS = nv.negset(S_sub)
            if d["kind"] == "symmetric":
                expect(negS == S_sub, "extracted set not symmetric")
            else:
                expect(not (negS & S_sub), "extracted set not antisymmetric")
            parts = [frozenset(x) for x in d["parts"]]
            source = nv.sumset(B, B) if cert["theorem"] == "main16" else B
            expect(parts[0] | parts[1] | parts[2] == source
                   and sum(map(len, parts)) == len(source), "parts do not partition")
            expect(S_sub <= source, "extracted set escapes its source")
        elif name == "sub_certificate":
            sub = d["certificate"]
            expect(frozenset(sub["A"]) == A, "sub-certificate uses a different A")
            expect(S_sub is not None and frozenset(sub["B"]) == S_sub,
                   "sub-certificate B is not the extracted set")
            expect(sub["verified"], "sub-certificate not verified")
            problems.extend(replay_certificate(sub))
        elif name == "lift":
            container = nv.sumset(B, B) if d["container"] == "B+B" else B
            expect(S_sub is not None and S_sub <= container, "lift inclusion")
        elif name == "full_A":
            expect(A == nv.full(), "A is not the whole field")
        elif name == "direct":
            NAB = nv.kfold(d["order"], AB)
            expect(len(NAB) == d["size"] == f.q, f"{d['order']}AB is not the whole field")
            expect(cert["claimed_order"] == d["order"], "claimed order mismatch")
        else:
            problems.append(f"unknown step {name!r}")
    return problems
