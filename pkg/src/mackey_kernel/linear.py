"""Coefficient rings and finitely supported formal linear combinations."""

from __future__ import annotations

from fractions import Fraction


class IntRing:
    name = "int"

    def coerce(self, v):
        return int(v)

    def add(self, a, b):
        return a + b

    def is_zero(self, a):
        return a == 0


class ModRing:
    def __init__(self, n):
        if n < 2:
            raise ValueError("modulus must be >= 2")
        self.n = n
        self.name = "mod:%d" % n

    def coerce(self, v):
        return int(v) % self.n

    def add(self, a, b):
        return (a + b) % self.n

    def is_zero(self, a):
        return a % self.n == 0


class RatRing:
    name = "rat"

    def coerce(self, v):
        return Fraction(v)

    def add(self, a, b):
        return a + b

    def is_zero(self, a):
        return a == 0


ZZ = IntRing()
QQ = RatRing()


def ring_by_name(name):
    if name == "int":
        return ZZ
    if name == "rat":
        return QQ
    if name.startswith("mod:"):
        return ModRing(int(name.split(":", 1)[1]))
    raise ValueError("unknown ring %r" % name)


class LinComb:
    """
    Finitely supported map from basis keys to ring coefficients.  Zero
    coefficients are never stored.  ``src``/``dst`` tag the Hom module the
    combination lives in; operations require matching endpoints.
    """

    __slots__ = ("ring", "src", "dst", "terms")

    def __init__(self, src, dst, terms=None, ring=ZZ):
        self.ring = ring
        self.src = src
        self.dst = dst
        self.terms = {}
        if terms:
            for k, v in terms.items():
                v = ring.coerce(v)
                if not ring.is_zero(v):
                    self.terms[k] = v

    def copy(self):
        out = LinComb(self.src, self.dst, ring=self.ring)
        out.terms = dict(self.terms)
        return out

    def add_term(self, key, coeff=1):
        v = self.ring.add(self.terms.get(key, self.ring.coerce(0)), self.ring.coerce(coeff))
        if self.ring.is_zero(v):
            self.terms.pop(key, None)
        else:
            self.terms[key] = v

    def __add__(self, other):
        if other.src is not self.src or other.dst is not self.dst:
            raise ValueError("endpoint mismatch in LinComb addition")
        out = self.copy()
        for k, v in other.terms.items():
            out.add_term(k, v)
        return out

    def scaled(self, c):
        out = LinComb(self.src, self.dst, ring=self.ring)
        for k, v in self.terms.items():
            out.add_term(k, v * c)
        return out

    def __eq__(self, other):
        return (isinstance(other, LinComb) and self.src is other.src
                and self.dst is other.dst and self.terms == other.terms)

    def __hash__(self):
        raise TypeError("LinComb is not hashable")

    def is_zero(self):
        return not self.terms

    def sorted_terms(self):
        return sorted(self.terms.items(), key=lambda kv: kv[0].sort_key())

    def render(self):
        if not self.terms:
            return "0"
        bits = []
        for k, v in self.sorted_terms():
            bits.append("%s*%s" % (v, k.render()))
        return " + ".join(bits)

    def __repr__(self):
        return "<LinComb %s>" % self.render()
