"""Curves whose mod-2 image is cyclic of order 3: the Rubin-Silverberg
family attached to a short model, the five per-field (P, Q) pairs, and a
bounded search for prime conductor with discriminant a prime square."""
from __future__ import annotations

from dataclasses import dataclass
import math

import gmpy2
import numpy as np

from .field_arith import (
    QuadInt, WrongField, divides, field, split_rational_prime, sqrt_exact, valuation,
)
from .curve_models import (
    INF, WeierstrassModel, conductor, szpiro_check, two_division_roots,
)
from .records import make_record, parallel_map

SQUARE_DISC_FIELDS = (11, 19, 43, 67, 163)


class DegenerateParameters(ValueError):
    pass


@dataclass(frozen=True)
class RsFamily:
    """y^2 = x^3 + A4(u,v) x + A6(u,v), all curves sharing E[2] with
    y^2 = x^3 + a x + b."""
    a: QuadInt
    b: QuadInt

    def A4(self, u, v):
        a, b = self.a, self.b
        return 3 * (3 * a * v * v + 9 * b * u * v - a * a * u * u)

    def A6(self, u, v):
        a, b = self.a, self.b
        return (27 * b * v ** 3 - 18 * a * a * u * v * v - 27 * a * b * u * u * v
                - (2 * a ** 3 + 27 * b * b) * u ** 3)

    def F(self, u, v):
        return v ** 3 + self.a * v * u * u + self.b * u ** 3

    @property
    def disc_F(self):
        return -(4 * self.a ** 3 + 27 * self.b * self.b)


def rs_specialize(fam: RsFamily, u, v) -> WeierstrassModel:
    K = fam.a.K
    u, v = K.one * u, K.one * v
    Fv = fam.F(u, v)
    if not Fv:
        raise DegenerateParameters("F(u, v) = 0")
    z = K.zero
    E = WeierstrassModel(z, z, z, fam.A4(u, v), fam.A6(u, v))
    assert E.invariants.disc == 2 ** 4 * 3 ** 6 * fam.disc_F * Fv * Fv
    return E


# ---------------------------------------------------------------- per field

@dataclass(frozen=True)
class FieldPQ:
    d: int
    P: tuple          # coefficients of u^2, uv, v^2
    Q: tuple          # coefficients of u^3, u^2 v, u v^2, v^3
    G: tuple          # cubic form with 8P^3 - Q^2 = -27 d G^2, same layout as Q
    cubic: tuple      # p(x) = x^3 + c2 x^2 + c1 x + c0 as (c2, c1, c0)
    base_curve_label: str
    base_ainvs: tuple

    @staticmethod
    def _eval2(c, u, v):
        return c[0] * u * u + c[1] * u * v + c[2] * v * v

    @staticmethod
    def _eval3(c, u, v):
        return c[0] * u ** 3 + c[1] * u * u * v + c[2] * u * v * v + c[3] * v ** 3

    def p_val(self, u, v):
        return self._eval2(self.P, u, v)

    def q_val(self, u, v):
        return self._eval3(self.Q, u, v)

    def g_val(self, u, v):
        return self._eval3(self.G, u, v)

    def cubic_disc(self):
        c2, c1, c0 = self.cubic
        return (c2 * c2 * c1 * c1 - 4 * c1 ** 3 - 4 * c2 ** 3 * c0
                - 27 * c0 * c0 + 18 * c2 * c1 * c0)

    def rs_family(self, K=None):
        """RS family of the short model read off G = v^3 + a v u^2 + b u^3
        (G is normalised to leading coefficient 1 in v)."""
        K = K or field(self.d)
        s = self.G[3]
        g = [c * s for c in self.G]      # s = +-1
        if g[2] != 0:
            raise ValueError("G has a u v^2 term")
        return RsFamily(K(g[1]), K(g[0]))

    def model(self, u, v):
        """y^2 = x^3 - 6P x + 2Q."""
        z = u.K.zero if isinstance(u, QuadInt) else field(self.d).zero
        return WeierstrassModel(z, z, z, -6 * self.p_val(u, v) + z, 2 * self.q_val(u, v) + z)

    def halved_model(self, u, v):
        """Model with c4 = 72P, c6 = -216Q, i.e. the (u/2, v/2) specialisation
        scaled back to integral coefficients."""
        K = u.K if isinstance(u, QuadInt) else field(self.d)
        c4 = 72 * self.p_val(u, v) + K.zero
        c6 = -216 * self.q_val(u, v) + K.zero
        z = K.zero
        return WeierstrassModel(z, z, z, -27 * c4, -54 * c6)


_PQ = {
    11: ((2, -17, -1), (586, 102, 12, -17), (34, 6, 0, 1), (-1, 1, 1), "11a3", (0, -1, 1, 0, 0)),
    19: ((2, 9, 3), (46, 54, 36, 27), (2, 2, 0, -1), (0, -2, -2), "19a3", (0, 1, 1, 1, 0)),
    43: ((8, -35, 2), (-2386, 420, -48, 35), (70, -12, 0, 1), (-1, -1, 3), "43a1", (0, 1, 1, 0, 0)),
    67: ((50, -53, 5), (-4618, 1590, -300, 53), (106, -30, 0, 1), (-1, -3, 5), "67a1",
         (0, 1, 1, -12, -21)),
    163: ((32, 45, 12), (838, 1080, 576, 135), (10, 8, 0, -1), (0, -8, 10), "163a1",
          (0, 0, 1, -2, 1)),
}


def field_pq(d) -> FieldPQ:
    if d not in _PQ:
        raise WrongField(f"no cyclic cubic extension unramified outside 2 for d={d}")
    P, Q, G, cubic, label, ainvs = _PQ[d]
    return FieldPQ(d, P, Q, G, cubic, label, ainvs)


def base_change_seed(d):
    K = field(d)
    pq = field_pq(d)
    return WeierstrassModel.from_ainvs(K, [K(x) for x in pq.base_ainvs])


# ---------------------------------------------------------------- 2-division

@dataclass
class TwoDivisionReport:
    disc_square: bool
    rational_root: bool
    disc_class_matches: bool

    @property
    def cyclic_order3(self):
        return self.disc_square and not self.rational_root and self.disc_class_matches

    def to_json(self):
        return {"disc_square": self.disc_square, "rational_root": self.rational_root,
                "disc_class_matches": self.disc_class_matches,
                "cyclic_order3": self.cyclic_order3}


def two_division_check(E: WeierstrassModel) -> TwoDivisionReport:
    K = E.K
    disc = conductor(E).disc_min
    cubic_disc = 16 * disc
    return TwoDivisionReport(
        disc_square=sqrt_exact(disc) is not None,
        rational_root=bool(two_division_roots(E)),
        disc_class_matches=sqrt_exact(cubic_disc * K(-4 * K.d)) is not None,
    )


# ---------------------------------------------------------------- search

def _vec_mul(K, ax, ay, bx, by):
    t, n = K.t, K.n
    return ax * bx - n * ay * by, ax * by + ay * bx + t * ay * by


def _vec_form3(K, c, ux, uy, vx, vy):
    u2 = _vec_mul(K, ux, uy, ux, uy)
    v2 = _vec_mul(K, vx, vy, vx, vy)
    terms = [
        _vec_mul(K, *u2, ux, uy),
        _vec_mul(K, *u2, vx, vy),
        _vec_mul(K, *v2, ux, uy),
        _vec_mul(K, *v2, vx, vy),
    ]
    x = sum(ci * tx for ci, (tx, _) in zip(c, terms))
    y = sum(ci * ty for ci, (_, ty) in zip(c, terms))
    return x, y


def _strip(n, primes):
    for p in primes:
        while n % p == 0:
            n //= p
    return n


def _prime_or_square(n):
    if n == 1:
        return True
    if gmpy2.is_prime(n):
        return True
    r, exact = gmpy2.iroot(n, 2)
    return bool(exact) and gmpy2.is_prime(r)


def _grid_candidates(d, box, bound):
    """(u, v) in the coordinate box whose G-value has norm supported on
    2, 3, d and at most one other prime of norm <= bound, and whose
    Q-value is odd (the parity condition for good reduction at 2)."""
    K = field(d)
    pq = field_pq(d)
    r = np.arange(-box, box + 1, dtype=object)
    ux, uy, vx, vy = (a.ravel() for a in np.meshgrid(r, r, r, r, indexing="ij"))
    gx, gy = _vec_form3(K, pq.G, ux, uy, vx, vy)
    qx, qy = _vec_form3(K, pq.Q, ux, uy, vx, vy)
    out = []
    for i in range(len(ux)):
        if qx[i] % 2 == 0 and qy[i] % 2 == 0:
            continue
        N = gx[i] * gx[i] + K.t * gx[i] * gy[i] + K.n * gy[i] * gy[i]
        if N == 0:
            continue
        rest = _strip(int(N), (2, 3, d))
        if rest > bound or not _prime_or_square(rest):
            continue
        out.append((int(ux[i]), int(uy[i]), int(vx[i]), int(vy[i])))
    return out


def _twist_choice(K, G):
    """Twist factor (without sign) making the discriminant -3^6 d G^2
    lambda^6 have valuation divisible by 12 at the primes above 2, 3 and d,
    or None when no twist by a divisor of 3 sqrt(-d) does."""
    lam = K.one
    root = K.sqrt_minus_d
    for q in K.two_primes:
        if valuation(G, q) % 6:
            return None
    for P in split_rational_prime(3, K):
        k = 6 + 2 * valuation(G, P)
        flag = {0: False, 6: True}.get(k % 12)
        if flag is None:
            return None
        if flag and not divides(P.gen, lam):
            lam = lam * P.gen
    for P in split_rational_prime(K.d, K):
        k = 2 + 2 * valuation(G, P)
        if k % 12 == 6:
            lam = lam * root
        elif k % 12:
            return None
    return lam


def _screen(args):
    d, (a, b, c, e), bound = args
    K = field(d)
    pq = field_pq(d)
    u, v = K(a, b), K(c, e)
    lam0 = _twist_choice(K, pq.g_val(u, v))
    if lam0 is None:
        return []
    E0 = pq.halved_model(u, v)
    out = []
    z = K.zero
    for lam in (lam0, -lam0):
        E = WeierstrassModel(z, z, z, lam * lam * E0.a4, lam ** 3 * E0.a6)
        cd = conductor(E)
        if len(cd.factors) != 1:
            continue
        P, f = cd.factors[0]
        if f != 1 or P.norm > bound:
            continue
        out.append(((u.to_json(), v.to_json(), lam.to_json()), cd))
    return out


def search_square_disc(d, bound, box=6, workers=1):
    """Prime-conductor curves with cyclic order-3 mod-2 image and conductor
    norm <= bound, from (u, v) in O_K with coordinates in [-box, box]."""
    pq = field_pq(d)
    cands = _grid_candidates(d, box, bound)
    jobs = [(d, c, bound) for c in cands]
    seen = {}
    for hits in parallel_map(_screen, jobs, workers, chunksize=32):
        for params, cd in hits:
            key = cd.model.key()
            if key not in seen:
                seen[key] = (params, cd)
    recs = []
    for key, ((u, v, lam), cd) in seen.items():
        P = cd.factors[0][0]
        v_disc = valuation(cd.disc_min, P)
        rep = two_division_check(cd.model)
        recs.append(make_record(cd.model, "square-disc", cd=cd, params={
            "u": u, "v": v, "twist": lam, "v_disc": v_disc,
            "szpiro": szpiro_check(cd.model), "two_division": rep.to_json(),
            "base_curve": pq.base_curve_label,
        }))
    recs.sort(key=lambda r: (r.conductor_norm, r.ainvs))
    return recs


def verify_seed(d):
    """Conductor and discriminant data for the base change of the rational
    seed curve of conductor d."""
    E = base_change_seed(d)
    cd = conductor(E)
    root = field(d).sqrt_minus_d
    P = cd.factors[0][0] if cd.factors else None
    return {
        "label": field_pq(d).base_curve_label,
        "conductor_is_root": len(cd.factors) == 1 and cd.factors[0][1] == 1
        and valuation(root, P) == 1,
        "disc_square": sqrt_exact(cd.disc_min) is not None,
        "disc_min": cd.disc_min.to_json(),
        "v_disc": valuation(cd.disc_min, P) if P else INF,
        "two_division": two_division_check(E).to_json(),
    }


def required_box(bound):
    return max(2, int(math.log(max(bound, 2), 4)))


def rs_normalization(pq: FieldPQ):
    """lambda with A4 = lambda^2 (-6P) and A6 = lambda^3 (2Q) identically,
    where A4, A6 come from the RS family of G; None if there is none."""
    from fractions import Fraction
    K = field(pq.d)
    fam = pq.rs_family(K)

    def rs_vals(u, v):
        return fam.A4(K(u), K(v)).x, fam.A6(K(u), K(v)).x

    a4, a6 = rs_vals(1, 0)
    P, Q = pq.p_val(1, 0), pq.q_val(1, 0)
    if not (a4 and P and Q):
        return None
    lam = Fraction(a6, 2 * Q) / Fraction(a4, -6 * P)
    # binary forms of degree <= 3 agree once they agree at 4 points
    for u, v in ((1, 0), (0, 1), (1, 1), (1, -1), (2, 1)):
        a4, a6 = rs_vals(u, v)
        if lam * lam * -6 * pq.p_val(u, v) != a4 or lam ** 3 * 2 * pq.q_val(u, v) != a6:
            return None
    return lam
