"""Exact arithmetic in the rings of integers of the nine imaginary quadratic
fields of class number one.

Elements are stored as integer coordinates over the basis {1, w}, where
w = sqrt(-d) for d = 1, 2 (mod 4) and w = (1 + sqrt(-d))/2 for d = 3 (mod 4).
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property, lru_cache
from math import gcd, isqrt
import re

from sympy import factorint, primerange
from sympy.ntheory import sqrt_mod

FIELDS = (1, 2, 3, 7, 11, 19, 43, 67, 163)


class NotDivisible(ArithmeticError):
    pass


class ZeroIdeal(ValueError):
    pass


class WrongField(ValueError):
    pass


@dataclass(frozen=True, eq=False)
class FieldCtx:
    """Q(sqrt(-d)) with w^2 = t*w - n."""
    d: int

    def __post_init__(self):
        if self.d not in FIELDS:
            raise WrongField(f"d={self.d} is not one of {FIELDS}")

    def __eq__(self, other):
        return isinstance(other, FieldCtx) and other.d == self.d

    def __hash__(self):
        return hash(("FieldCtx", self.d))

    def __repr__(self):
        return f"FieldCtx(d={self.d})"

    def __reduce__(self):
        return (field, (self.d,))

    @property
    def basis_mode(self):
        return "half" if self.d % 4 == 3 else "sqrt"

    @property
    def t(self):
        return 1 if self.d % 4 == 3 else 0

    @property
    def n(self):
        return (1 + self.d) // 4 if self.d % 4 == 3 else self.d

    @property
    def disc(self):
        return -self.d if self.d % 4 == 3 else -4 * self.d

    def __call__(self, x=0, y=0):
        return QuadInt(int(x), int(y), self)

    @cached_property
    def one(self):
        return QuadInt(1, 0, self)

    @cached_property
    def zero(self):
        return QuadInt(0, 0, self)

    @cached_property
    def omega(self):
        return QuadInt(0, 1, self)

    @cached_property
    def sqrt_minus_d(self):
        # sqrt(-d) = 2w - 1 in the half basis
        return QuadInt(-1, 2, self) if self.t else QuadInt(0, 1, self)

    def from_sqrt(self, a, b):
        """The element a + b*sqrt(-d); a, b may be halves of integers."""
        a, b = Fraction(a), Fraction(b)
        if self.t:
            y = 2 * b
            x = a - b
        else:
            x, y = a, b
        if x.denominator != 1 or y.denominator != 1:
            raise NotDivisible(f"{a}+{b}*sqrt(-{self.d}) is not integral")
        return QuadInt(int(x), int(y), self)

    @cached_property
    def units(self):
        if self.d == 1:
            vals = [(1, 0), (0, 1), (-1, 0), (0, -1)]
        elif self.d == 3:
            # w is a primitive 6th root of unity; list its powers
            w = QuadInt(0, 1, self)
            out, z = [], QuadInt(1, 0, self)
            for _ in range(6):
                out.append(z)
                z = z * w
            return tuple(out)
        else:
            vals = [(1, 0), (-1, 0)]
        return tuple(QuadInt(x, y, self) for x, y in vals)

    @cached_property
    def epsilon(self):
        if self.d == 1:
            return QuadInt(0, 1, self)
        if self.d == 3:
            return QuadInt(0, 1, self)
        return QuadInt(-1, 0, self)

    @cached_property
    def e2(self):
        return 2 if self.d in (1, 2) else 1

    @cached_property
    def two_primes(self):
        return tuple(split_rational_prime(2, self))

    @property
    def two_splitting(self):
        return self.two_primes[0].kind

    @cached_property
    def ramified_prime(self):
        return split_rational_prime(self.d if self.d != 1 else 2, self)[0]


@lru_cache(maxsize=None)
def field(d) -> FieldCtx:
    return FieldCtx(int(d))


class QuadInt:
    __slots__ = ("x", "y", "K")

    def __init__(self, x, y, K):
        self.x = x
        self.y = y
        self.K = K

    def _coerce(self, other):
        if isinstance(other, QuadInt):
            if other.K.d != self.K.d:
                raise WrongField("mixing elements of different fields")
            return other
        if isinstance(other, int):
            return QuadInt(other, 0, self.K)
        return NotImplemented

    def __add__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return QuadInt(self.x + o.x, self.y + o.y, self.K)

    __radd__ = __add__

    def __sub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return QuadInt(self.x - o.x, self.y - o.y, self.K)

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return o - self

    def __neg__(self):
        return QuadInt(-self.x, -self.y, self.K)

    def __mul__(self, other):
        if isinstance(other, int):
            return QuadInt(self.x * other, self.y * other, self.K)
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        K = self.K
        yy = self.y * o.y
        return QuadInt(self.x * o.x - K.n * yy,
                       self.x * o.y + self.y * o.x + K.t * yy, K)

    __rmul__ = __mul__

    def __pow__(self, e):
        if e < 0:
            raise ValueError("negative exponent")
        result = QuadInt(1, 0, self.K)
        base = self
        while e:
            if e & 1:
                result = result * base
            e >>= 1
            if e:
                base = base * base
        return result

    def __eq__(self, other):
        if isinstance(other, int):
            return self.y == 0 and self.x == other
        if isinstance(other, QuadInt):
            return self.x == other.x and self.y == other.y and self.K.d == other.K.d
        return NotImplemented

    def __hash__(self):
        return hash((self.x, self.y, self.K.d))

    def __bool__(self):
        return bool(self.x or self.y)

    def __repr__(self):
        return f"QuadInt({self.to_str()}, d={self.K.d})"

    def __reduce__(self):
        return (QuadInt, (self.x, self.y, self.K))

    def conj(self):
        return QuadInt(self.x + self.K.t * self.y, -self.y, self.K)

    def norm(self):
        return self.x * self.x + self.K.t * self.x * self.y + self.K.n * self.y * self.y

    def trace(self):
        return 2 * self.x + self.K.t * self.y

    def is_unit(self):
        return self.norm() == 1

    def key(self):
        return (self.x, self.y)

    def to_str(self):
        return f"{self.x}{'+' if self.y >= 0 else '-'}{abs(self.y)}*w"

    def to_json(self):
        return [self.x, self.y]

    def sqrt_coords(self):
        """(a, b) with self = a + b*sqrt(-d), as Fractions."""
        if self.K.t:
            return Fraction(2 * self.x + self.y, 2), Fraction(self.y, 2)
        return Fraction(self.x), Fraction(self.y)

    def to_complex(self):
        a, b = self.sqrt_coords()
        return complex(float(a), float(b) * self.K.d ** 0.5)


_TERM_RE = re.compile(r"([+-]?)(\d*)(\*?w)?")


def parse(s, K):
    """Parse an element from "x+y*w", a plain integer, or a JSON pair."""
    if isinstance(s, QuadInt):
        return s
    if isinstance(s, int):
        return K(s)
    if isinstance(s, (list, tuple)):
        x, y = s
        return K(x, y)
    if re.search(r"\d\s+\d", s):
        raise ValueError(f"cannot parse {s!r} as x+y*w")
    text = s.replace(" ", "")
    x = y = 0
    pos = 0
    while pos < len(text):
        m = _TERM_RE.match(text, pos)
        sign, digits, w = m.groups()
        if m.end() == pos or not (digits or w) or (pos and not sign):
            raise ValueError(f"cannot parse {s!r} as x+y*w")
        if w and w.startswith("*") and not digits:
            raise ValueError(f"cannot parse {s!r} as x+y*w")
        c = int(digits or 1) * (-1 if sign == "-" else 1)
        if w:
            y += c
        else:
            x += c
        pos = m.end()
    if not text:
        raise ValueError("empty element")
    return K(x, y)


def norm(q) -> int:
    return q.norm()


def conjugate(q):
    return q.conj()


def divides(b, a) -> bool:
    if not b:
        return not a
    n = b.norm()
    p = a * b.conj()
    return p.x % n == 0 and p.y % n == 0


def exact_div(a, b):
    if not isinstance(b, QuadInt):
        b = a.K(b)
    if not b:
        raise ZeroDivisionError("division by zero in O_K")
    n = b.norm()
    p = a * b.conj()
    if p.x % n or p.y % n:
        raise NotDivisible(f"{b.to_str()} does not divide {a.to_str()} (d={a.K.d})")
    return QuadInt(p.x // n, p.y // n, a.K)


def associates(q):
    return [u * q for u in q.K.units]


def canonical(q):
    """Associate with lexicographically largest (x, y); it always has x >= 0."""
    if not q:
        return q
    return max(associates(q), key=QuadInt.key)


def unit_part(q):
    """The unit u with q = u * canonical(q)."""
    c = canonical(q)
    return exact_div(q, c)


# ---------------------------------------------------------------- lattices

def _hnf_insert(basis, v):
    """basis is [(a, b), (0, c)] in echelon form (entries may be zero)."""
    (a, b), (_, c) = basis
    x, y = v
    # extended gcd on first coordinates
    if x:
        if a == 0:
            a, b, x, y = x, y, 0, 0
        else:
            g, s, t = _xgcd(a, x)
            na, nb = g, s * b + t * y
            # the complementary combination kills the first coordinate
            y = (a // g) * y - (x // g) * b
            a, b = na, nb
            x = 0
    c = gcd(c, y)
    if a < 0:
        a, b = -a, -b
    if c:
        b %= c
    return [(a, b), (0, c)]


def _xgcd(a, b):
    x0, x1, y0, y1 = 1, 0, 0, 1
    while b:
        q, a, b = a // b, b, a % b
        x0, x1 = x1, x0 - q * x1
        y0, y1 = y1, y0 - q * y1
    if a < 0:
        a, x0, y0 = -a, -x0, -y0
    return a, x0, y0


def ideal_lattice(gens):
    basis = [(0, 0), (0, 0)]
    for g in gens:
        basis = _hnf_insert(basis, (g.x, g.y))
        gw = g * g.K.omega
        basis = _hnf_insert(basis, (gw.x, gw.y))
    return basis


def _qform(K, v):
    x, y = v
    return x * x + K.t * x * y + K.n * y * y


def _bform2(K, u, v):
    return 2 * u[0] * v[0] + K.t * (u[0] * v[1] + u[1] * v[0]) + 2 * K.n * u[1] * v[1]


def gauss_reduce(K, u, v):
    """Lagrange reduction of a rank-2 lattice under the norm form."""
    if _qform(K, u) > _qform(K, v):
        u, v = v, u
    while True:
        qu = _qform(K, u)
        mu = (_bform2(K, u, v) + qu) // (2 * qu)
        v = (v[0] - mu * u[0], v[1] - mu * u[1])
        if _qform(K, v) >= qu:
            return u, v
        u, v = v, u


def ideal_generator(gens):
    gens = [g for g in gens if g]
    if not gens:
        raise ZeroIdeal("all generators are zero")
    K = gens[0].K
    (a, b), (_, c) = ideal_lattice(gens)
    u, _ = gauss_reduce(K, (a, b), (0, c))
    g = QuadInt(u[0], u[1], K)
    assert g.norm() == a * c, "ideal is not principal"
    return canonical(g)


def gcd_q(a, b):
    return ideal_generator([a, b]) if (a or b) else a


def gcd_many(elts):
    return ideal_generator(list(elts))


# --------------------------------------------------------- primes, factoring

@dataclass(frozen=True)
class PrimeElement:
    gen: QuadInt
    p: int
    kind: str
    norm: int

    def __repr__(self):
        return f"Prime({self.gen.to_str()}, N={self.norm}, {self.kind}, d={self.gen.K.d})"

    @property
    def K(self):
        return self.gen.K

    @property
    def e(self):
        """Ramification index of p at this prime."""
        return 2 if self.kind == "ramified" else 1

    @property
    def f(self):
        return 2 if self.kind == "inert" else 1


@lru_cache(maxsize=None)
def _split_cached(p, d):
    K = field(d)
    if K.disc % p == 0:
        kind = "ramified"
    elif p == 2:
        kind = "split" if any((r * r - K.t * r + K.n) % 2 == 0 for r in (0, 1)) else "inert"
    else:
        kind = "split" if pow(K.disc % p, (p - 1) // 2, p) == 1 else "inert"
    if kind == "inert":
        return (PrimeElement(K(p), p, "inert", p * p),)
    # roots of X^2 - tX + n mod p
    if p == 2:
        roots = [r for r in (0, 1) if (r * r - K.t * r + K.n) % 2 == 0]
    else:
        s = sqrt_mod(K.disc % p, p) or 0
        inv2 = pow(2, -1, p)
        roots = sorted({(K.t + s) * inv2 % p, (K.t - s) * inv2 % p})
    out = []
    for r in roots:
        g = ideal_generator([K(p), K(-r, 1)])
        out.append(PrimeElement(g, p, kind, p))
    out.sort(key=lambda P: P.gen.key(), reverse=True)
    return tuple(out)


def split_rational_prime(p, K):
    return list(_split_cached(int(p), K.d))


def valuation(q, P) -> int:
    if not q:
        raise ValueError("valuation of zero")
    n = q.norm()
    if n % P.p:
        return 0
    pi, N = P.gen, P.norm
    pc = pi.conj()
    v = 0
    while True:
        t = q * pc
        if t.x % N or t.y % N:
            return v
        q = QuadInt(t.x // N, t.y // N, q.K)
        v += 1


@lru_cache(maxsize=4096)
def _factor_int(n):
    return tuple(sorted(factorint(n).items()))


def factor(q):
    """Return (unit, [(PrimeElement, exponent), ...]) with unit * prod = q."""
    if not q:
        raise ZeroIdeal("cannot factor zero")
    K = q.K
    out = []
    rest = q
    for p, _ in _factor_int(q.norm()):
        for P in split_rational_prime(p, K):
            e = 0
            while divides(P.gen, rest):
                rest = exact_div(rest, P.gen)
                e += 1
            if e:
                out.append((P, e))
    assert rest.is_unit()
    out.sort(key=lambda t: (t[0].norm, t[0].gen.key()))
    return rest, out


def prime_of(q):
    """The prime element generating (q) if q is a prime element, else None."""
    u, fac = factor(q)
    if len(fac) == 1 and fac[0][1] == 1:
        return fac[0][0]
    return None


def primes_above(n, K):
    out = []
    for p, _ in _factor_int(abs(n)):
        out.extend(split_rational_prime(p, K))
    return out


def primes_up_to(K, bound):
    found = []
    for p in primerange(2, bound + 1):
        for P in split_rational_prime(p, K):
            if P.norm <= bound:
                found.append(P)
    found.sort(key=lambda P: (P.norm, P.p, [-c for c in P.gen.key()]))
    return iter(found)


# ----------------------------------------------------------- residue systems

@lru_cache(maxsize=None)
def _hnf_of(x, y, d):
    K = field(d)
    m = QuadInt(x, y, K)
    return tuple(ideal_lattice([m]))


def reduce_mod(q, m):
    """Canonical representative of q modulo m*O_K."""
    (a, b), (_, c) = _hnf_of(m.x, m.y, m.K.d)
    k, x = divmod(q.x, a)
    y = (q.y - k * b) % c
    return QuadInt(x, y, q.K)


def congruent(a, b, m) -> bool:
    return divides(m, a - b)


@lru_cache(maxsize=None)
def _residues_cached(x, y, d):
    K = field(d)
    (a, _), (_, c) = _hnf_of(x, y, d)
    return tuple(QuadInt(i, j, K) for i in range(a) for j in range(c))


def residues(m):
    """A complete residue system modulo m; its size is norm(m)."""
    if not m:
        raise ZeroDivisionError("residues modulo zero")
    return _residues_cached(m.x, m.y, m.K.d)


_POWERS = {"square": 2, "cube": 3, "fourth-power": 4, "unit-times-square": 2}


def residue_test(q, m, kind="square"):
    """Return (True, witness) if q is a k-th power (times a unit for
    "unit-times-square") modulo m, else (False, None)."""
    k = _POWERS[kind]
    units = q.K.units if kind == "unit-times-square" else (q.K.one,)
    for w in residues(m):
        wk = w ** k
        for u in units:
            if congruent(u * wk, q, m):
                return True, (w if kind != "unit-times-square" else (u, w))
    return False, None


def sqrt_exact(q):
    K = q.K
    if not q:
        return q
    N = q.norm()
    r = isqrt(N)
    if r * r != N:
        return None
    X, Y = q.sqrt_coords()
    a2 = (X + r) / 2
    b2 = (r - X) / (2 * K.d)
    a, b = _frac_sqrt(a2), _frac_sqrt(b2)
    if a is None or b is None:
        return None
    for sb in (b, -b):
        if 2 * a * sb == Y:
            try:
                cand = K.from_sqrt(a, sb)
            except NotDivisible:
                return None
            if cand * cand == q:
                return canonical_sign(cand)
    return None


def _frac_sqrt(f):
    if f < 0:
        return None
    n, d = f.numerator, f.denominator
    rn, rd = isqrt(n), isqrt(d)
    if rn * rn != n or rd * rd != d:
        return None
    return Fraction(rn, rd)


def canonical_sign(q):
    return max(q, -q, key=QuadInt.key)


def is_square(q) -> bool:
    return sqrt_exact(q) is not None


def is_unit_times_square(q) -> bool:
    return any(is_square(u * q) for u in q.K.units)


def kth_root_exact(q, k):
    """r with r**k == q, or None.  Located numerically, confirmed exactly."""
    import mpmath
    K = q.K
    if not q:
        return q
    N = q.norm()
    r_norm = round(N ** (1.0 / k)) if N < 2 ** 52 else None
    digits = len(str(abs(q.x))) + len(str(abs(q.y)))
    with mpmath.workdps(30 + digits):
        a, b = q.sqrt_coords()
        z = mpmath.mpc(mpmath.mpf(a.numerator) / a.denominator,
                       mpmath.mpf(b.numerator) / b.denominator * mpmath.sqrt(K.d))
        root = mpmath.root(z, k)
        w = QuadInt(0, 1, K).to_complex()
        zeta = mpmath.exp(2j * mpmath.pi / k)
        for j in range(k):
            c = root * zeta ** j
            y = int(mpmath.nint(c.imag / w.imag))
            x = int(mpmath.nint(c.real - y * w.real))
            for dx in (-1, 0, 1):
                for dy in (-1, 0, 1):
                    cand = QuadInt(x + dx, y + dy, K)
                    if r_norm is not None and cand.norm() != r_norm:
                        continue
                    if cand ** k == q:
                        return cand
    return None


def divisors(q):
    """Canonical representatives of all divisors of q up to units."""
    _, fac = factor(q)
    out = [q.K.one]
    for P, e in fac:
        out = [d * P.gen ** i for d in out for i in range(e + 1)]
    return sorted((canonical(d) for d in out), key=lambda z: (z.norm(), z.key()))
