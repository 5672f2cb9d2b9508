"""Weierstrass models over O_K: invariants, twists, 2-isogeny, Tate's
algorithm, conductors, and the local integrality criterion at primes above 2.
"""
from __future__ import annotations

from dataclasses import dataclass, field as dc_field
from functools import cached_property

import mpmath

from .field_arith import (
    PrimeElement, QuadInt, WrongField, canonical, congruent, divides,
    exact_div, factor, gcd_q, reduce_mod, residues, unit_part, valuation,
)

INF = 10 ** 9


class SingularModel(ValueError):
    pass


class PreconditionViolated(ValueError):
    pass


def _v(x, P):
    return INF if not x else valuation(x, P)


@dataclass(frozen=True)
class Invariants:
    b2: QuadInt
    b4: QuadInt
    b6: QuadInt
    b8: QuadInt
    c4: QuadInt
    c6: QuadInt
    disc: QuadInt
    j: tuple


def j_fraction(c4, disc):
    """c4^3/disc reduced, with canonical denominator."""
    num = c4 ** 3
    if not num:
        return (disc.K.zero, disc.K.one)
    g = gcd_q(num, disc)
    num, den = exact_div(num, g), exact_div(disc, g)
    u = unit_part(den)
    return (exact_div(num, u), exact_div(den, u))


@dataclass(frozen=True)
class WeierstrassModel:
    a1: QuadInt
    a2: QuadInt
    a3: QuadInt
    a4: QuadInt
    a6: QuadInt

    @classmethod
    def from_ainvs(cls, K, ainvs):
        from .field_arith import parse
        vals = [parse(a, K) for a in ainvs]
        return cls(*vals)

    @property
    def K(self):
        return self.a1.K

    @property
    def ainvs(self):
        return (self.a1, self.a2, self.a3, self.a4, self.a6)

    def key(self):
        return tuple(a.key() for a in self.ainvs)

    def to_json(self):
        return [a.to_json() for a in self.ainvs]

    def __repr__(self):
        return f"[{', '.join(a.to_str() for a in self.ainvs)}] over d={self.K.d}"

    @cached_property
    def invariants(self):
        return invariants(self)

    def rst(self, r=0, s=0, t=0):
        a1, a2, a3, a4, a6 = self.ainvs
        return WeierstrassModel(
            a1 + 2 * s,
            a2 - s * a1 + 3 * r - s * s,
            a3 + r * a1 + 2 * t,
            a4 - s * a3 + 2 * r * a2 - (t + r * s) * a1 + 3 * r * r - 2 * s * t,
            a6 + r * a4 + r * r * a2 + r * r * r - t * a3 - t * t - r * t * a1,
        )

    def scale(self, u):
        """Model with a_i replaced by a_i / u^i (exact)."""
        return WeierstrassModel(*(exact_div(a, u ** i) for a, i in zip(self.ainvs, (1, 2, 3, 4, 6))))

    def unscale(self, u):
        return WeierstrassModel(*(a * u ** i for a, i in zip(self.ainvs, (1, 2, 3, 4, 6))))


def invariants(E):
    a1, a2, a3, a4, a6 = E.ainvs
    b2 = a1 * a1 + 4 * a2
    b4 = a1 * a3 + 2 * a4
    b6 = a3 * a3 + 4 * a6
    b8 = a1 * a1 * a6 + 4 * a2 * a6 - a1 * a3 * a4 + a2 * a3 * a3 - a4 * a4
    c4 = b2 * b2 - 24 * b4
    c6 = -b2 * b2 * b2 + 36 * b2 * b4 - 216 * b6
    disc = -b2 * b2 * b8 - 8 * b4 ** 3 - 27 * b6 * b6 + 9 * b2 * b4 * b6
    if not disc:
        raise SingularModel(f"singular model {E!r}")
    return Invariants(b2, b4, b6, b8, c4, c6, disc, j_fraction(c4, disc))


def j_equals(E, value):
    """True iff j(E) equals the rational integer or fraction `value`."""
    from fractions import Fraction
    value = Fraction(value)
    num, den = E.invariants.j
    return num * value.denominator == den * value.numerator


@dataclass(frozen=True)
class AbModel:
    """y^2 = x(x^2 + a x + b)."""
    a: QuadInt
    b: QuadInt

    def __post_init__(self):
        if not self.b or not (self.a * self.a - 4 * self.b):
            raise SingularModel("b(a^2-4b) = 0")

    @property
    def K(self):
        return self.a.K

    def weierstrass(self):
        z = self.K.zero
        return WeierstrassModel(z, self.a, z, self.b, z)

    def disc(self):
        return 16 * self.b * self.b * (self.a * self.a - 4 * self.b)

    def key(self):
        return (self.a.key(), self.b.key())


def two_isogenous(E: AbModel) -> AbModel:
    return AbModel(-2 * E.a, E.a * E.a - 4 * E.b)


def quadratic_twist(E, lam):
    if not lam:
        raise ValueError("twist by zero")
    if isinstance(E, AbModel):
        return AbModel(lam * E.a, lam * lam * E.b)
    if lam == 1:
        return E
    inv = E.invariants
    z = E.K.zero
    return WeierstrassModel(z, lam * inv.b2, z, 8 * lam * lam * inv.b4, 16 * lam ** 3 * inv.b6)


def quartic_twist(alpha):
    K = alpha.K
    if K.d != 1:
        raise WrongField("quartic twists need d=1")
    if not alpha:
        raise ValueError("alpha = 0")
    z = K.zero
    return WeierstrassModel(z, z, z, alpha, z)


def sextic_twist(alpha):
    K = alpha.K
    if K.d != 3:
        raise WrongField("sextic twists need d=3")
    if not alpha:
        raise ValueError("alpha = 0")
    z = K.zero
    return WeierstrassModel(z, z, z, z, 16 * alpha)


# ------------------------------------------------------------------ Kraus

def kraus_criterion(c4, c6, q: PrimeElement):
    """Decide whether an integral model with invariants (c4, c6) exists
    locally at the prime q above 2.  Returns (bool, witness)."""
    K = c4.K
    D1728 = c4 ** 3 - c6 * c6
    if not D1728 or not divides(K(1728), D1728):
        raise PreconditionViolated("c4^3 - c6^2 is not a nonzero multiple of 1728")
    if q.p != 2:
        raise ValueError("q must lie above 2")
    e = q.e

    def zero_mod_2k(x, k):
        return _v(x, q) >= k * e

    vc4 = _v(c4, q)
    if vc4 == 0:
        for a1 in residues(K(2)):
            if zero_mod_2k(a1 * a1 + c6, 2):
                return True, a1
        return False, None
    if vc4 < 4 * e:
        for a1 in residues(K(4)):
            a12 = a1 * a1
            dd = -a12 ** 3 + 3 * a12 * c4 + 2 * c6
            if not zero_mod_2k(dd, 4):
                continue
            if not zero_mod_2k(4 * a12 * dd - (a12 * a12 - c4) ** 2, 8):
                continue
            for a3 in residues(K(2)):
                if zero_mod_2k(16 * a3 * a3 - dd, 6):
                    return True, (a1, a3)
        return False, None
    for a3 in residues(K(2)):
        if zero_mod_2k(8 * a3 * a3 - c6, 5):
            return True, a3
    return False, None


# ------------------------------------------------------------ Tate's algorithm

class ResidueField:
    def __init__(self, P: PrimeElement):
        self.P = P
        self.pi = P.gen
        self.p = P.p
        self.q = P.norm
        self.K = P.gen.K

    def reduce(self, x):
        return reduce_mod(x, self.pi)

    def is_zero(self, x):
        return divides(self.pi, x)

    def pow(self, x, e):
        result = self.K.one
        base = self.reduce(x)
        while e:
            if e & 1:
                result = self.reduce(result * base)
            e >>= 1
            if e:
                base = self.reduce(base * base)
        return result

    def inv(self, x):
        if self.is_zero(x):
            raise ZeroDivisionError("not invertible modulo the prime")
        return self.pow(x, self.q - 2)

    def proot(self, x):
        """The p-th root in characteristic p."""
        return self.pow(x, self.q // self.p)

    def elements(self):
        return residues(self.pi)

    def is_square(self, x):
        if self.is_zero(x) or self.p == 2:
            return True
        return self.is_zero(self.pow(x, (self.q - 1) // 2) - 1)

    def quad_has_root(self, a, b, c):
        """Does a X^2 + b X + c have a root in the residue field?"""
        if self.is_zero(a):
            return not self.is_zero(b) or self.is_zero(c)
        if self.p == 2:
            return any(self.is_zero((a * x + b) * x + c) for x in self.elements())
        return self.is_square(b * b - 4 * a * c)


@dataclass(frozen=True)
class LocalData:
    prime: PrimeElement
    reduction: str
    f: int
    v_min_disc: int
    kodaira: str

    def to_json(self):
        return {"prime": self.prime.gen.to_json(), "norm": self.prime.norm,
                "reduction": self.reduction, "f": self.f,
                "v_min_disc": self.v_min_disc, "kodaira": self.kodaira}


def _is_integral(E):
    return all(isinstance(a, QuadInt) for a in E.ainvs)


def tate_local(E: WeierstrassModel, P: PrimeElement):
    """Return (LocalData, model) where the model is integral everywhere and
    minimal at P."""
    F = ResidueField(P)
    pi, p = P.gen, P.p

    def v(x):
        return _v(x, P)

    def ex(x, m):
        return exact_div(x, m)

    while True:
        inv = E.invariants
        n = v(inv.disc)
        if n == 0:
            return LocalData(P, "good", 0, 0, "I0"), E
        a1, a2, a3, a4, a6 = E.ainvs
        b2, b4, b6, c4, c6 = inv.b2, inv.b4, inv.b6, inv.c4, inv.c6
        # move the singular point to (0, 0)
        if p == 2:
            if F.is_zero(b2):
                r = F.proot(a4)
                t = F.proot(((r + a2) * r + a4) * r + a6)
            else:
                a1inv = F.inv(a1)
                r = F.reduce(a1inv * a3)
                t = F.reduce(a1inv * (a4 + r * r))
        elif p == 3:
            if F.is_zero(b2):
                r = F.proot(-b6)
            else:
                r = F.reduce(-F.inv(b2) * b4)
            t = F.reduce(a1 * r + a3)
        else:
            if F.is_zero(c4):
                r = F.reduce(-F.inv(E.K(12)) * b2)
            else:
                r = F.reduce(-F.inv(12 * c4) * (c6 + b2 * c4))
            t = F.reduce(-F.inv(E.K(2)) * (a1 * r + a3))
        E = E.rst(r, 0, t)
        a1, a2, a3, a4, a6 = E.ainvs
        if v(c4) == 0:
            split = F.quad_has_root(E.K.one, a1, -a2)
            kind = "multiplicative-split" if split else "multiplicative-nonsplit"
            return LocalData(P, kind, 1, n, f"I{n}"), E
        inv = E.invariants
        if v(a6) < 2:
            return LocalData(P, "additive", n, n, "II"), E
        if v(inv.b8) < 3:
            return LocalData(P, "additive", n - 1, n, "III"), E
        if v(inv.b6) < 3:
            return LocalData(P, "additive", n - 2, n, "IV"), E
        # arrange pi | a1, a2; pi^2 | a3, a4; pi^3 | a6
        if p == 2:
            s = F.proot(a2)
            t = pi * F.proot(ex(a6, pi ** 2))
        elif p == 3:
            s, t = a1, a3
        else:
            # an integer inverse of 2 modulo p^2 keeps a3 + 2t divisible by pi^2
            half = (p * p + 1) // 2
            s = -a1 * half
            t = -a3 * half
        E = E.rst(0, s, t)
        a1, a2, a3, a4, a6 = E.ainvs
        b = ex(a2, pi)
        c = ex(a4, pi ** 2)
        d = ex(a6, pi ** 3)
        w = 27 * d * d - b * b * c * c + 4 * b ** 3 * d - 18 * b * c * d + 4 * c ** 3
        x = 3 * c - b * b
        if v(w) == 0:
            return LocalData(P, "additive", n - 4, n, "I0*"), E
        if v(x) == 0:
            # double root: I_m^*
            if p == 2:
                r = F.proot(c)
            elif p == 3:
                r = c * F.inv(b)
            else:
                r = (b * c - 9 * d) * F.inv(2 * x)
            E = E.rst(pi * F.reduce(r), 0, 0)
            mx = pi ** 2
            my = pi ** 2
            m = 1
            while True:
                a1, a2, a3, a4, a6 = E.ainvs
                xa2 = ex(a2, pi)
                xa3 = ex(a3, my)
                xa6 = ex(a6, mx * my)
                if v(xa3 * xa3 + 4 * xa6) == 0:
                    break
                if p == 2:
                    t = my * F.proot(xa6)
                else:
                    t = my * F.reduce(-xa3 * F.inv(E.K(2)))
                E = E.rst(0, 0, t)
                my = my * pi
                m += 1
                a1, a2, a3, a4, a6 = E.ainvs
                xa2 = ex(a2, pi)
                xa4 = ex(a4, pi * mx)
                xa6 = ex(a6, mx * my)
                if v(xa4 * xa4 - 4 * xa2 * xa6) == 0:
                    break
                if p == 2:
                    r = mx * F.proot(xa6 * F.inv(xa2))
                else:
                    r = mx * F.reduce(-xa4 * F.inv(2 * xa2))
                E = E.rst(r, 0, 0)
                mx = mx * pi
                m += 1
            return LocalData(P, "additive", n - m - 4, n, f"I{m}*"), E
        # triple root
        if p == 2:
            r = b
        elif p == 3:
            r = F.proot(-d)
        else:
            r = -b * F.inv(E.K(3))
        E = E.rst(pi * F.reduce(r), 0, 0)
        a1, a2, a3, a4, a6 = E.ainvs
        x3 = ex(a3, pi ** 2)
        x6 = ex(a6, pi ** 4)
        if v(x3 * x3 + 4 * x6) == 0:
            return LocalData(P, "additive", n - 6, n, "IV*"), E
        if p == 2:
            t = -(pi ** 2) * F.proot(x6)
        else:
            t = -(pi ** 2) * F.reduce(x3 * F.inv(E.K(2)))
        E = E.rst(0, 0, t)
        a1, a2, a3, a4, a6 = E.ainvs
        if v(a4) < 4:
            return LocalData(P, "additive", n - 7, n, "III*"), E
        if v(a6) < 6:
            return LocalData(P, "additive", n - 8, n, "II*"), E
        # not minimal at P: scale down and start again
        E = E.scale(pi)


@dataclass
class ConductorData:
    model: WeierstrassModel           # reduced global minimal model
    local: list                       # LocalData at every bad prime
    disc_min: QuadInt = None
    factors: list = dc_field(default_factory=list)

    @property
    def norm(self):
        out = 1
        for P, f in self.factors:
            out *= P.norm ** f
        return out

    @property
    def disc_norm(self):
        return self.disc_min.norm()

    def generator(self):
        K = self.model.K
        g = K.one
        for P, f in self.factors:
            g = g * P.gen ** f
        return g

    def exponent_at(self, P):
        for Q, f in self.factors:
            if Q.gen == P.gen:
                return f
        return 0

    def disc_valuations(self):
        return [(ld.prime, ld.v_min_disc) for ld in self.local if ld.v_min_disc]

    def is_prime_power(self):
        return len(self.factors) <= 1


def reduced_model(E):
    """A canonical representative of the isomorphism class of E among
    models related by units and integral (r, s, t) changes."""
    K = E.K
    two, three = K(2), K(3)
    best = None
    for u in K.units:
        F = E.scale(u)
        a1, a2, a3 = F.a1, F.a2, F.a3
        s = exact_div(reduce_mod(a1, two) - a1, two)
        a2s = a2 - s * a1 - s * s
        r = exact_div(reduce_mod(a2s, three) - a2s, three)
        a3r = a3 + r * a1
        t = exact_div(reduce_mod(a3r, two) - a3r, two)
        G = F.rst(r, s, t)
        if best is None or G.key() < best.key():
            best = G
    return best


def conductor(E: WeierstrassModel) -> ConductorData:
    _, fac = factor(E.invariants.disc)
    local = []
    M = E
    for P, _ in fac:
        ld, M = tate_local(M, P)
        local.append(ld)
    M = reduced_model(M)
    factors = [(ld.prime, ld.f) for ld in local if ld.f]
    return ConductorData(M, [ld for ld in local if ld.v_min_disc], M.invariants.disc, factors)


def minimal_model(E):
    return conductor(E).model


def is_isomorphic(E1, E2):
    return minimal_model(E1) == minimal_model(E2)


def szpiro_check(E) -> bool:
    cd = E if isinstance(E, ConductorData) else conductor(E)
    return cd.disc_min.norm() <= cd.norm ** 6


# ------------------------------------------------------------ 2-torsion

def _cubic_roots_in_K(coeffs):
    """K-rational roots of the monic cubic with O_K coefficients
    X^3 + c2 X^2 + c1 X + c0, via high-precision complex roots rounded to
    the lattice and verified exactly."""
    c2, c1, c0 = coeffs
    K = c0.K
    size = max(len(str(abs(z.x)) + str(abs(z.y))) for z in coeffs)
    with mpmath.workdps(40 + 2 * size):
        w = QuadInt(0, 1, K).to_complex()
        cs = [1] + [mpmath.mpc(*_mp(z)) for z in (c2, c1, c0)]
        roots = mpmath.polyroots(cs, maxsteps=200, extraprec=4 * size + 60)
        found = set()
        for z in roots:
            y = mpmath.nint(z.imag / w.imag)
            x = mpmath.nint(z.real - y * w.real)
            for dx in (-1, 0, 1):
                for dy in (-1, 0, 1):
                    X = QuadInt(int(x) + dx, int(y) + dy, K)
                    if not (((X + c2) * X + c1) * X + c0):
                        found.add(X)
    return sorted(found, key=QuadInt.key)


def _mp(z):
    a, b = z.sqrt_coords()
    return (mpmath.mpf(a.numerator) / a.denominator,
            mpmath.mpf(b.numerator) / b.denominator * mpmath.sqrt(z.K.d))


def two_torsion_points(E: WeierstrassModel):
    """x-coordinates of the K-rational points of order 2."""
    inv = E.invariants
    K = E.K
    # X = 4x is a root of X^3 + b2 X^2 + 8 b4 X + 16 b6
    roots = _cubic_roots_in_K((inv.b2, 8 * inv.b4, 16 * inv.b6))
    out = []
    for X in roots:
        if divides(K(4), X):
            out.append(exact_div(X, K(4)))
        else:
            # x = X/4 need not be integral; keep it as a fraction pair
            out.append((X, K(4)))
    return out


def two_torsion_count(E):
    return len(two_torsion_points(E))


def two_division_roots(E: WeierstrassModel):
    """Roots in O_K of X^3 + b2 X^2 + 8 b4 X + 16 b6 (X = 4x at 2-torsion)."""
    inv = E.invariants
    return _cubic_roots_in_K((inv.b2, 8 * inv.b4, 16 * inv.b6))
