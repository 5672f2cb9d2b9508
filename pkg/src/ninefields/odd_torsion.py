"""Curves with a K-rational point of odd order 3, 5 or 7 and odd prime-power
conductor, via Kubert's parametrizations.

The finite case analyses are run as candidate generators (loops over units
and over divisors of small fixed numbers, plus a box search at the primes
above 3).  Every candidate is then screened by the same exact test: the
discriminant is supported on a single odd prime and Tate's algorithm gives
an odd prime-power conductor.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from itertools import product

from .field_arith import (
    FieldCtx, QuadInt, canonical, conjugate, divides, divisors, exact_div, factor, field,
    kth_root_exact, primes_above, sqrt_exact, valuation,
)
from .curve_models import (
    SingularModel, WeierstrassModel, conductor, j_equals, reduced_model,
)
from . import points
from .records import make_record, parallel_map


@dataclass(frozen=True)
class KubertParams:
    ell: int
    params: tuple
    field: FieldCtx

    def __post_init__(self):
        if self.ell not in (3, 5, 7):
            raise ValueError("ell must be 3, 5 or 7")
        K = self.field
        object.__setattr__(self, "params", tuple(
            K(p) if isinstance(p, int) else p for p in self.params))
        if self.ell == 3:
            a1, a3 = self.params
            if not kubert_disc(self):
                raise SingularModel(f"a3^3 (a1^3 - 27 a3) = 0 for {self.params}")
        else:
            a, b = self.params
            from .field_arith import gcd_q
            if not gcd_q(a, b).is_unit():
                raise ValueError(f"gcd{self.params} is not a unit")

    def to_json(self):
        return [p.to_json() for p in self.params]


def kubert_ainvs(p: KubertParams):
    if p.ell == 3:
        a1, a3 = p.params
        return [a1, 0, a3, 0, 0]
    a, b = p.params
    if p.ell == 5:
        return [b - a, -a * b, -a * b * b, 0, 0]
    return [b * b + a * b - a * a, -(a ** 3 * b - a * a * b * b),
            -(a ** 3 * b ** 3 - a * a * b ** 4), 0, 0]


def kubert_disc(p: KubertParams):
    """The discriminant of the parametrized model, by its closed form."""
    if p.ell == 3:
        a1, a3 = p.params
        return a3 ** 3 * (a1 ** 3 - 27 * a3)
    a, b = p.params
    if p.ell == 5:
        return a ** 5 * b ** 5 * (a * a - 11 * a * b - b * b)
    return (a * b * (a - b)) ** 7 * (a ** 3 - 8 * a * a * b + 5 * a * b * b + b ** 3)


def kubert_model(p: KubertParams) -> WeierstrassModel:
    E = WeierstrassModel.from_ainvs(p.field, kubert_ainvs(p))
    disc = E.invariants.disc
    if not disc:
        raise SingularModel(str(p))
    assert disc == kubert_disc(p)
    return E


def three_isogenous(a1, a3):
    """The curve 3-isogenous to y^2 + a1 xy + a3 y = x^3 through the
    subgroup generated by (0,0)."""
    K = a1.K if isinstance(a1, QuadInt) else a3.K
    a1, a3 = K.one * a1, K.one * a3
    return WeierstrassModel.from_ainvs(
        K, [a1, 0, a3, -5 * a1 * a3, -a1 ** 3 * a3 - 7 * a3 * a3])


def three_isogenous_disc(a1, a3):
    """(isogenous model, its discriminant a3 (a1^3 - 27 a3)^3)."""
    E = three_isogenous(a1, a3)
    a1, a3 = E.a1, E.a3
    disc = a3 * (a1 ** 3 - 27 * a3) ** 3
    if E.invariants.disc != disc:
        raise AssertionError("isogenous discriminant disagrees with closed form")
    return E, disc


def point_order_at_origin(p: KubertParams):
    E = kubert_model(p)
    return points.order(E, points.point(E, 0, 0), limit=2 * p.ell)


# ------------------------------------------------------------ torsion table

def _el(K, a, b=0):
    return K.from_sqrt(a, b)


# label, ell, fields, a-invariants and discriminant as functions of K
TABLE1 = [
    ("19a2", 3, (1, 7, 11, 19, 43, 163), lambda K: [0, 1, 1, -9, -15], lambda K: K(-19 ** 3)),
    ("19a3", 3, (1, 7, 11, 19, 43, 163), lambda K: [0, 1, 1, 1, 0], lambda K: K(-19)),
    ("27a2", 3, (1, 7, 19, 43, 67, 163), lambda K: [0, 0, 1, -30, 63], lambda K: K(-3 ** 5)),
    ("27a3", 3, (1, 7, 19, 43, 67, 163), lambda K: [0, 0, 1, 0, -7], lambda K: K(-3 ** 9)),
    ("27a4", 3, (1, 7, 19, 43, 67, 163), lambda K: [0, 0, 1, 0, 0], lambda K: K(-3 ** 3)),
    ("37b2", 3, (2, 19, 43, 163), lambda K: [0, 1, 1, -23, -50], lambda K: K(37 ** 3)),
    ("37b3", 3, (2, 19, 43, 163), lambda K: [0, 1, 1, -3, 1], lambda K: K(37)),
    ("243a2", 3, (1, 7, 19, 43, 67, 163), lambda K: [0, 0, 1, 0, 20], lambda K: K(-3 ** 11)),
    ("243b2", 3, (1, 7, 19, 43, 67, 163), lambda K: [0, 0, 1, 0, 2], lambda K: K(-3 ** 7)),
    ("2.0.4.1-757.1-a1", 3, (1,),
     lambda K: [_el(K, 1, 1), _el(K, -1, 1), 1, _el(K, -15, 5), _el(K, -17, 6)],
     lambda K: _el(K, -26, 9) ** 3),
    ("2.0.4.1-757.1-a2", 3, (1,),
     lambda K: [_el(K, 1, 1), _el(K, 1, 1), 1, _el(K, 0, 2), _el(K, 0, 1)],
     lambda K: _el(K, -26, 9)),
    ("2.0.8.1-9.1-CMa1", 3, (2,),
     lambda K: [_el(K, 0, 1), _el(K, 1, -1), 1, -1, 0],
     lambda K: _el(K, -1, -1) ** 6),
    ("2.0.11.1-9.3-CMa1", 3, (11,),
     lambda K: [0, _el(K, "1/2", "-1/2"), 1, _el(K, "-5/2", "-1/2"), -2],
     lambda K: _el(K, "-1/2", "1/2") ** 6),
    ("11a2", 5, (1, 3, 11, 67, 163), lambda K: [0, -1, 1, -10, -20], lambda K: K(-11 ** 5)),
    ("11a3", 5, (1, 3, 11, 67, 163), lambda K: [0, -1, 1, 0, 0], lambda K: K(-11)),
    ("2.0.4.1-25.3-CMa1", 5, (1,),
     lambda K: [_el(K, 1, 1), _el(K, 0, 1), _el(K, 0, 1), 0, 0],
     lambda K: _el(K, 1, 2) ** 3),
    ("2.0.3.1-49.3-CMa1", 7, (3,),
     lambda K: [0, _el(K, "-3/2", "1/2"), _el(K, "1/2", "1/2"), _el(K, "1/2", "-1/2"), 0],
     lambda K: _el(K, "-1/2", "-3/2") ** 2),
]


@dataclass(frozen=True)
class TableRow:
    label: str
    ell: int
    model: WeierstrassModel
    disc: QuadInt
    orbit: tuple


def _conj_model(E):
    return WeierstrassModel.from_ainvs(E.K, [conjugate(a) for a in E.ainvs])


def orbit_key(M):
    """Key of the Galois orbit of the isomorphism class of the minimal M."""
    return min(reduced_model(M).key(), reduced_model(_conj_model(M)).key())


@lru_cache(maxsize=None)
def table_rows(d, ell=None):
    K = field(d)
    out = []
    for label, l, fields, ainvs, disc in TABLE1:
        if d not in fields or (ell is not None and l != ell):
            continue
        E = WeierstrassModel.from_ainvs(K, [K.one * a for a in ainvs(K)])
        cd = conductor(E)
        out.append(TableRow(label, l, cd.model, disc(K), orbit_key(cd.model)))
    return tuple(out)


def label_for(M, ell):
    key = orbit_key(M)
    for row in table_rows(M.K.d, ell):
        if row.orbit == key:
            return row.label
    return None


# ------------------------------------------------------------ candidates

def _unit_roots(b, c):
    """Roots in O_K of X^2 + b X + c."""
    K = b.K
    disc = b * b - 4 * c
    r = sqrt_exact(disc)
    out = []
    if r is None:
        return out
    for s in (r, -r):
        num = -b + s
        if divides(K(2), num):
            out.append(exact_div(num, K(2)))
    return out


def _all_divisors(q):
    K = q.K
    return [u * dv for dv in divisors(q) for u in K.units]


def _candidates3(K, box=20, max_j=5):
    """(a1, a3) pairs covering every case of a point of order 3 on a curve
    with discriminant supported on one odd prime."""
    units = K.units
    one = K.one
    seen = set()

    def emit(a1, a3):
        key = (a1.key(), a3.key())
        if key not in seen:
            seen.add(key)
            yield (a1, a3)

    # a3 a unit (scaled to 1), bad prime not above 3:
    # a1^3 - 27 = (a1 - 3)(a1^2 + 3 a1 + 9) with one factor a unit
    for u in units:
        yield from emit(3 + u, one)
        for a1 in _unit_roots(K(3), 9 - u):
            yield from emit(a1, one)
    # a3 divisible by the bad prime p, p not above 3, p | a1:
    # a1^3 = p^j (27 u + v) forces p | 27 u + v
    for u, v in product(units, units):
        m = 27 * u + v
        if not m:
            continue
        for P, _ in factor(m)[1]:
            if P.p == 3:
                continue
            for j in (1, 2):
                for w in units:
                    a3 = w * P.gen ** j
                    a1 = kth_root_exact(a3 * 27 + v * P.gen ** j, 3)
                    if a1 is not None:
                        yield from emit(a1, a3)
    # p does not divide a1: scale so a1^3 - 27 a3 = 1, then
    # (a1 - 1)(a1^2 + a1 + 1) = 27 a3
    for delta in _all_divisors(K(27)):
        firsts = [1 + delta] + _unit_roots(one, 1 - delta)
        for a1 in firsts:
            num = a1 ** 3 - 1
            if num and divides(K(27), num):
                yield from emit(a1, exact_div(num, K(27)))
    # bad prime above 3: a3 = unit * pi^j, a1 in a box
    pis = [P.gen for P in primes_above(3, K)]
    a3s = [w * pi ** j for pi in pis for j in range(max_j + 1) for w in units]
    for x in range(-box, box + 1):
        for y in range(-box, box + 1):
            a1 = QuadInt(x, y, K)
            for a3 in a3s:
                disc = a3 ** 3 * (a1 ** 3 - 27 * a3)
                n = disc.norm()
                if n == 0:
                    continue
                while n % 3 == 0:
                    n //= 3
                if n == 1:
                    yield from emit(a1, a3)


def _candidates5(K):
    one = K.one
    for u in K.units:
        yield (one, u)
        for b in _unit_roots(K(11), u - 1):
            yield (one, b)
        for a in _unit_roots(K(-11), -1 - u):
            yield (a, one)


def _candidates7(K):
    one = K.one
    for u in K.units:
        yield (one, u)
        yield (one, one - u)
        yield (one + u, one)


# ------------------------------------------------------------ screening

def _single_odd_prime(x):
    _, fac = factor(x)
    if len(fac) != 1 or fac[0][0].p == 2:
        return None
    return fac[0][0]


def _screen(p: KubertParams, guard=True):
    """ConductorData when p gives an odd prime-power conductor, else None."""
    disc = kubert_disc(p)
    if not disc:
        return None
    P = _single_odd_prime(disc)
    if P is None:
        return None
    if guard and p.ell == 3:
        a1, a3 = p.params
        if divides(P.gen, a1) and divides(P.gen ** 3, a3):
            return None
    cd = conductor(kubert_model(p))
    if not cd.factors or not cd.is_prime_power() or cd.factors[0][0].p == 2:
        return None
    return cd


def _screen_one(args):
    ell, d, raw = args
    K = field(d)
    try:
        p = KubertParams(ell, raw, K)
    except (SingularModel, ValueError):
        return None
    cd = _screen(p, guard=K.d != 3)
    if cd is None:
        return None
    return p, cd


def enumerate_torsion(ell, K: FieldCtx, workers=1):
    if ell == 3 and K.d == 3:
        raise ValueError("use enumerate_torsion3_eisenstein for d=3, ell=3")
    gen = {3: _candidates3, 5: _candidates5, 7: _candidates7}[ell]
    cands = [(ell, K.d, c) for c in gen(K)]
    hits = [h for h in parallel_map(_screen_one, cands, workers, chunksize=64) if h]
    return _records(hits, ell)


def _records(hits, ell, extra=None):
    """One record per Galois orbit of isomorphism classes."""
    best = {}
    for p, cd in hits:
        M = cd.model
        key = orbit_key(M)
        own = reduced_model(M).key()
        rank = (own != key, [q.key() for q in p.params])
        if key not in best or rank < best[key][0]:
            best[key] = (rank, p, cd)
    out = []
    for key in sorted(best):
        _, p, cd = best[key]
        order = point_order_at_origin(p)
        params = {"kubert": p.to_json(), "point_order": order,
                  "galois_orbit": 1 if reduced_model(_conj_model(cd.model)).key()
                  == reduced_model(cd.model).key() else 2}
        if extra:
            params.update(extra(p, cd))
        out.append(make_record(cd.model, f"kubert-{ell}", label=label_for(cd.model, ell),
                               params=params, odd_torsion=ell, cd=cd))
    return out


# ------------------------------------------------------------ d = 3

# j-invariants of the curves with CM by an order of Q(sqrt(-3))
EISENSTEIN_CM_J = (0, 54000, -12288000)


def _prime_power_base(n):
    """The prime p when n = p^k (k >= 1), else None."""
    import gmpy2
    if n < 2:
        return None
    for k in range(1, n.bit_length() + 1):
        r, exact = gmpy2.iroot(n, k)
        if r < 2:
            break
        if exact and gmpy2.is_prime(r):
            return int(r)
    return None


def _strip3(n):
    while n % 3 == 0:
        n //= 3
    return n


def _eisenstein_a3_values(K, max_norm, coprime_to_3):
    from .field_arith import primes_up_to
    out = [(u, None) for u in K.units]
    for P in primes_up_to(K, max_norm):
        if coprime_to_3 and P.p == 3:
            continue
        j = 1
        while P.norm ** j <= max_norm:
            out.extend((u * P.gen ** j, P.p) for u in K.units)
            j += 1
    return out


def _kubert3_pairs(K, bound, scaled=False):
    """(a1, a3) over Q(sqrt(-3)) with a3 a unit times a prime power and
    norm(a3^3 (a1^3 - 27 a3)) <= bound, whose discriminant is supported on
    3 and at most one further rational prime.  With scaled=True, a1 runs
    over multiples of sqrt(-3) and a3 over elements prime to 3."""
    import math
    import numpy as np
    t, n = K.t, K.n
    mult = K.sqrt_minus_d if scaled else K.one
    max_n3 = int(round(bound ** (1 / 3))) + 1
    while max_n3 ** 3 > bound:
        max_n3 -= 1
    for a3, p3 in _eisenstein_a3_values(K, max_n3, scaled):
        n3 = a3.norm()
        limit = bound // n3 ** 3
        # |a1|^3 <= sqrt(limit) + 27 |a3|, with |z|^2 = norm(z)
        rad = (math.sqrt(limit) + 27 * math.sqrt(n3)) ** (1 / 3)
        if scaled:
            rad /= math.sqrt(3)
        r = int(rad * 2 / math.sqrt(3)) + 2
        xs, ys = np.meshgrid(np.arange(-r, r + 1, dtype=np.int64),
                             np.arange(-r, r + 1, dtype=np.int64))
        xs, ys = xs.ravel(), ys.ravel()
        x, y = xs * mult.x - n * ys * mult.y, xs * mult.y + ys * mult.x + t * ys * mult.y
        x2, y2 = x * x - n * y * y, 2 * x * y + t * y * y
        x3, y3 = x2 * x - n * y2 * y, x2 * y + y2 * x + t * y2 * y
        dx, dy = x3 - 27 * a3.x, y3 - 27 * a3.y
        n2 = dx * dx + t * dx * dy + n * dy * dy
        keep = np.nonzero((n2 > 0) & (n2 <= limit))[0]
        for i in keep:
            rest = _strip3(int(n2[i]))
            if rest != 1:
                base = _prime_power_base(rest)
                if base is None or (p3 is not None and base != p3):
                    continue
            yield QuadInt(int(x[i]), int(y[i]), K), a3


def _dichotomy(p, cd):
    a1, a3 = p.params
    P = cd.factors[0][0]
    Et, _ = three_isogenous_disc(a1, a3)
    cdt = conductor(Et)
    v = valuation(cd.disc_min, P)
    vt = valuation(cdt.disc_min, P)
    both = v % 3 == 0 and vt % 3 == 0
    cm = any(j_equals(cd.model, j) for j in EISENSTEIN_CM_J)
    exception = both and cm and cd.norm == 729
    return {"v_disc": v, "v_disc_isogenous": vt, "cm": cm,
            "cm_exception": exception, "dichotomy_ok": (not both) or exception}


def _screen_eisenstein(args):
    scaled, raw, bound = args
    K = field(3)
    try:
        p = KubertParams(3, raw, K)
    except (SingularModel, ValueError):
        return None
    if not scaled:
        cd = _screen(p, guard=True)
    else:
        cd = conductor(kubert_model(p))
        if len(cd.factors) != 1 or _single_odd_prime(cd.disc_min) is None:
            return None
    if cd is None or cd.disc_min.norm() > bound:
        return None
    return p, cd


def enumerate_torsion3_eisenstein(bound, workers=1):
    """Curves over Q(sqrt(-3)) with a point of order 3 and prime-power odd
    conductor, minimal discriminant norm at most bound.

    Points with integral coordinates come from Kubert models of
    discriminant norm <= bound.  A point whose coordinates have valuations
    (-2, -3) at sqrt(-3) gives a Kubert model with a3 of valuation -3; it is
    searched after scaling by sqrt(-3), which multiplies the discriminant
    by sqrt(-3)^12."""
    K = field(3)
    jobs = [(False, c, bound) for c in _kubert3_pairs(K, bound)]
    jobs += [(True, c, bound) for c in _kubert3_pairs(K, bound * 3 ** 12, scaled=True)]
    hits = [h for h in parallel_map(_screen_eisenstein, jobs, workers, chunksize=64) if h]
    return _records(hits, 3, extra=_dichotomy)


# ------------------------------------------------------------ Fermat cubics

def _projective_key(pt):
    K = pt[0].K
    from .field_arith import gcd_many
    g = gcd_many([c for c in pt if c])
    pt = [exact_div(c, g) if c else c for c in pt]
    best = None
    for u in K.units:
        cand = tuple((u * c).key() for c in pt)
        if best is None or cand > best:
            best = cand
    return best


def fermat_cubic_points(u, v, bound):
    """Projective points of x^3 + u y^3 + v z^3 = 0 over Q(sqrt(-3)) with
    coprime integral coordinates of norm <= bound, as tuples of QuadInt."""
    import numpy as np
    K = u.K
    if K.d != 3:
        raise ValueError("fermat_cubic_points needs d=3")
    if not (u.is_unit() and v.is_unit()):
        raise ValueError("u, v must be units")
    import math
    r = 2 * math.isqrt(bound) + 2
    elts = [QuadInt(x, y, K) for x in range(-r, r + 1) for y in range(-r, r + 1)
            if QuadInt(x, y, K).norm() <= bound]
    cubes = [e ** 3 for e in elts]
    cx = np.array([c.x for c in cubes], dtype=np.int64)
    cy = np.array([c.y for c in cubes], dtype=np.int64)
    lookup = {}
    for e, c in zip(elts, cubes):
        lookup.setdefault((c.x, c.y), []).append(e)
    # coordinates of v * z^3 for every z
    vz = [v * c for c in cubes]
    vx = np.array([c.x for c in vz], dtype=np.int64)
    vy = np.array([c.y for c in vz], dtype=np.int64)
    found = {}
    for y, ycube in zip(elts, cubes):
        t = u * ycube
        # x^3 = -(u y^3 + v z^3)
        tx = -(t.x + vx)
        ty = -(t.y + vy)
        idx = np.nonzero(np.isin(tx * (1 << 32) + ty, cx * (1 << 32) + cy))[0]
        for i in idx:
            z = elts[i]
            for x in lookup.get((int(tx[i]), int(ty[i])), ()):
                pt = (x, y, z)
                if not any(pt):
                    continue
                key = _projective_key(pt)
                found.setdefault(key, pt)
    out = []
    for key in sorted(found):
        pt = tuple(QuadInt(a, b, K) for a, b in key)
        x, y, z = pt
        assert x ** 3 + u * y ** 3 + v * z ** 3 == K.zero
        shape_ok = any(not c for c in pt) or all(c.is_unit() for c in pt)
        if not shape_ok:
            raise AssertionError(f"point {pt} has an unexpected shape")
        out.append(pt)
    return out
