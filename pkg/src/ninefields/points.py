"""Points on Weierstrass models over K, with exact coordinates in K."""
from __future__ import annotations

from math import gcd

from .field_arith import QuadInt


class KElt:
    """num / den with num in O_K and den a positive integer."""
    __slots__ = ("num", "den")

    def __init__(self, num, den=1):
        if den < 0:
            num, den = -num, -den
        g = gcd(gcd(num.x, num.y), den)
        if g > 1:
            num = QuadInt(num.x // g, num.y // g, num.K)
            den //= g
        self.num = num
        self.den = den

    @classmethod
    def lift(cls, a, K=None):
        if isinstance(a, KElt):
            return a
        if isinstance(a, int):
            return cls(K(a), 1)
        return cls(a, 1)

    def __add__(self, o):
        o = KElt.lift(o, self.num.K)
        return KElt(self.num * o.den + o.num * self.den, self.den * o.den)

    def __sub__(self, o):
        o = KElt.lift(o, self.num.K)
        return KElt(self.num * o.den - o.num * self.den, self.den * o.den)

    def __mul__(self, o):
        o = KElt.lift(o, self.num.K)
        return KElt(self.num * o.num, self.den * o.den)

    def __truediv__(self, o):
        o = KElt.lift(o, self.num.K)
        n = o.num.norm()
        return KElt(self.num * o.num.conj() * o.den, self.den * n)

    def __neg__(self):
        return KElt(-self.num, self.den)

    def __eq__(self, o):
        o = KElt.lift(o, self.num.K)
        return self.num * o.den == o.num * self.den

    def __bool__(self):
        return bool(self.num)

    def __repr__(self):
        return f"{self.num.to_str()}/{self.den}"


def neg(E, P):
    if P is None:
        return None
    x, y = P
    return (x, -y - E.a1 * x - E.a3)


def add(E, P, Q):
    if P is None:
        return Q
    if Q is None:
        return P
    a1, a2, a3, a4, a6 = [KElt.lift(a) for a in E.ainvs]
    x1, y1 = P
    x2, y2 = Q
    if x1 == x2:
        if y1 + y2 + a1 * x2 + a3 == KElt.lift(E.K.zero):
            return None
        lam = (x1 * x1 * 3 + a2 * x1 * 2 + a4 - a1 * y1) / (y1 * 2 + a1 * x1 + a3)
    else:
        lam = (y2 - y1) / (x2 - x1)
    nu = y1 - lam * x1
    x3 = lam * lam + a1 * lam - a2 - x1 - x2
    y3 = -(lam + a1) * x3 - nu - a3
    return (x3, y3)


def on_curve(E, P):
    x, y = P
    a1, a2, a3, a4, a6 = [KElt.lift(a) for a in E.ainvs]
    return y * y + a1 * x * y + a3 * y == x * x * x + a2 * x * x + a4 * x + a6


def order(E, P, limit=30):
    """Exact order of P, or None if it exceeds limit."""
    Q = P
    for n in range(1, limit + 1):
        if Q is None:
            return n
        Q = add(E, Q, P)
        if n == limit:
            return None
    return None


def point(E, x, y):
    return (KElt.lift(x if not isinstance(x, int) else E.K(x)),
            KElt.lift(y if not isinstance(y, int) else E.K(y)))
