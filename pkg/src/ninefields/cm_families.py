"""CM base curves of the nine fields and their twists of odd prime-square
conductor."""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import partial

from .field_arith import (
    FieldCtx, QuadInt, WrongField, congruent, divides, field, primes_up_to, residues,
)
from .curve_models import (
    WeierstrassModel, conductor, j_equals, quadratic_twist, quartic_twist, sextic_twist,
)
from .records import make_record, parallel_map

# Curves over Q with CM by the maximal order, bad reduction only at the
# ramified prime.  For d=3 the non-minimal model y^2 = x^3 + 16 is kept
# because the sextic twists are written in terms of it.
BASE_CURVES = {
    1: ("64a4", [0, 0, 0, 1, 0]),
    2: ("256d1", [0, -1, 0, -3, -1]),
    3: ("27a4", [0, 0, 0, 0, 16]),
    7: ("49a4", [1, -1, 0, -2, -1]),
    11: ("121b2", [0, -1, 1, -7, 10]),
    19: ("361a2", [0, 0, 1, -38, 90]),
    43: ("1849b2", [0, 0, 1, -860, 9707]),
    67: ("4489b2", [0, 0, 1, -7370, 243528]),
    163: ("26569a2", [0, 0, 1, -2174420, 1234136692]),
}

CM_J = {
    1: 1728, 2: 8000, 3: 0, 7: -3375, 11: -32768, 19: -884736,
    43: -884736000, 67: -147197952000, 163: -262537412640768000,
}


@dataclass(frozen=True)
class CmBaseCurve:
    field: FieldCtx
    model: WeierstrassModel
    label: str


def cm_base_curve(K: FieldCtx) -> CmBaseCurve:
    label, ainvs = BASE_CURVES[K.d]
    return CmBaseCurve(K, WeierstrassModel.from_ainvs(K, ainvs), label)


def _odd_unit_squares_mod4(K):
    four = K(4)
    out = []
    for u in residues(K(2)):
        if u.norm() % 2:
            s = (u * u)
            if not any(congruent(s, t, four) for t in out):
                out.append(s)
    return out


def quad_cm_admissible(pi: QuadInt) -> bool:
    K = pi.K
    if K.d in (1, 3):
        raise WrongField("quadratic CM twists are for d other than 1, 3")
    target = (1 + K.sqrt_minus_d) if K.d == 2 else K.sqrt_minus_d
    four = K(4)
    return any(congruent(pi, s * target, four) for s in _odd_unit_squares_mod4(K))


def quartic_cm_admissible(pi: QuadInt) -> bool:
    K = pi.K
    if K.d != 1:
        raise WrongField("quartic CM twists need d=1")
    i = K.omega
    return any(congruent(pi, -1 + c * i, K(8)) for c in (2, -2))


def sextic_cm_admissible(pi: QuadInt) -> bool:
    K = pi.K
    if K.d != 3:
        raise WrongField("sextic CM twists need d=3")
    s = K.sqrt_minus_d
    w = K.omega
    cond2 = any(congruent(pi, s * w ** k, K(4)) for k in (0, 2, 4))
    cond3 = any(congruent(pi, c, s ** 3) for c in (4, -4))
    return cond2 and cond3


def cm_admissible(pi):
    d = pi.K.d
    if d == 1:
        return quartic_cm_admissible(pi)
    if d == 3:
        return sextic_cm_admissible(pi)
    return quad_cm_admissible(pi)


def unramified_kummer_test(alpha: QuadInt, degree: int) -> bool:
    K = alpha.K
    if alpha.norm() % 2 == 0:
        raise ValueError("alpha must be a unit at the primes above 2")
    if degree == 2:
        return any(congruent(alpha, s, K(4)) for s in _odd_unit_squares_mod4(K))
    if degree == 4:
        if K.d != 1:
            raise WrongField("degree 4 needs d=1")
        return any(congruent(alpha, c, K(8)) for c in (K.one, 1 + 4 * K.omega))
    if degree == 6:
        if K.d != 3:
            raise WrongField("degree 6 needs d=3")
        if alpha.norm() % 3 == 0:
            raise ValueError("alpha must be a unit at sqrt(-3)")
        w, s = K.omega, K.sqrt_minus_d
        sq = any(congruent(alpha, w ** k, K(4)) for k in (0, 2, 4))
        cube = any(congruent(alpha, c, s ** 3) for c in (1, -1))
        return sq and cube
    raise ValueError("degree must be 2, 4 or 6")


def cm_twist_model(pi):
    """The twist of the base curve attached to the generator pi."""
    K = pi.K
    base = cm_base_curve(K).model
    if K.d == 1:
        return quartic_twist(pi)
    if K.d == 3:
        return sextic_twist(K.sqrt_minus_d ** 3 * pi)
    return quadratic_twist(base, pi * K.sqrt_minus_d)


def _skip_prime(P):
    K = P.K
    return P.p == 2 or K.disc % P.p == 0


def _catalog_one(P):
    K = P.K
    out = []
    for u in K.units:
        g = u * P.gen
        if not cm_admissible(g):
            continue
        E = cm_twist_model(g)
        cd = conductor(E)
        verified = cd.factors == [(P, 2)] and j_equals(cd.model, CM_J[K.d])
        kind = {1: "quartic", 3: "sextic"}.get(K.d, "quadratic")
        out.append(make_record(E, f"cm-{kind}", cd=cd,
                               params={"pi": g.to_json(), "verified": verified,
                                       "j": str(CM_J[K.d])}))
    return out


def cm_catalog(K: FieldCtx, bound: int, workers=1):
    primes = [P for P in primes_up_to(K, bound) if not _skip_prime(P)]
    chunks = parallel_map(_catalog_one, primes, workers)
    return [r for chunk in chunks for r in chunk]


def cm_density(K: FieldCtx, bound: int):
    """(primes with an admissible generator, primes considered)."""
    hits = total = 0
    for P in primes_up_to(K, bound):
        if _skip_prime(P):
            continue
        total += 1
        if any(cm_admissible(u * P.gen) for u in K.units):
            hits += 1
    return hits, total


EXPECTED_DENSITY = {1: Fraction(1, 4), 3: Fraction(1, 6)}


def expected_density(d):
    return EXPECTED_DENSITY.get(d, Fraction(1, 2))


# ------------------------------------------------------------ other fields

def _is_padic_square(x: Fraction, p: int) -> bool:
    """Is the nonzero rational x a square in Q_p?"""
    num, den = x.numerator, x.denominator
    v = 0
    while num % p == 0:
        num //= p
        v += 1
    while den % p == 0:
        den //= p
        v -= 1
    if v % 2:
        return False
    u = num * den
    if p == 2:
        return u % 8 == 1
    return pow(u % p, (p - 1) // 2, p) == 1


def completions_isomorphic(dK, dL, p):
    """Q_p(sqrt(-dK)) and Q_p(sqrt(-dL)) are isomorphic."""
    a, b = Fraction(-dK), Fraction(-dL)
    sa, sb = _is_padic_square(a, p), _is_padic_square(b, p)
    if sa or sb:
        return sa and sb
    return _is_padic_square(a / b, p)


@dataclass(frozen=True)
class CrossFieldTwist:
    kind: str
    field_d: int
    condition: str


def cross_field_cm_twist(K: FieldCtx, L: FieldCtx):
    """Twist data for the base curve of K considered over L, or None when
    no twist can reach good reduction at the prime below its conductor."""
    p = 2 if K.d in (1, 2) else K.d
    kind = {1: "quartic", 3: "sextic"}.get(K.d, "quadratic")
    if K == L:
        return CrossFieldTwist(kind, L.d, "same field: use cm_admissible")
    if not completions_isomorphic(K.d, L.d, p):
        return None
    cond = {
        "quadratic": f"twist by sqrt(-{L.d}) * alpha",
        "quartic": "alpha = -1 +- 2 sqrt(-1) mod 8",
        "sextic": "alpha = +-4 sqrt(-3)^3 mod sqrt(-3)^3",
    }[kind]
    return CrossFieldTwist(kind, L.d, cond)
