"""Curves of odd prime-power conductor with a K-rational point of order 2.

Models are y^2 = x(x^2 + a x + b).  The pair (a, b) of a curve with odd
conductor is normalised at the primes above 2, and the curve is then
described by a triple (A, B, C, at) with at^2 A = B + C.  The searches
below run over the finitely many (B, C) shapes allowed at a single odd prime
and over the Setzer-Neumann equation a^2 = u pi^r + 64 eps.
"""
from __future__ import annotations

from dataclasses import dataclass, field as dc_field, replace

from .field_arith import (
    FieldCtx, QuadInt, canonical, divides, exact_div, factor, field, gcd_many, gcd_q,
    primes_up_to, residue_test, sqrt_exact, valuation,
)
from .curve_models import (
    AbModel, INF, PreconditionViolated, SingularModel, WeierstrassModel, conductor,
    j_equals, kraus_criterion, quadratic_twist, two_division_roots, two_isogenous,
)
from .records import make_record, parallel_map


class NotOddConductor(ValueError):
    pass


class InvalidProfile(ValueError):
    pass


class OddValuationMissing(AssertionError):
    pass


def _v(x, P):
    return INF if not x else valuation(x, P)


def unit_square_classes(K):
    """Representatives of units modulo squares."""
    out = []
    for u in K.units:
        if not any(sqrt_exact(u * w.conj()) is not None for w in out):
            out.append(u)
    return out


def _split_square_unit(S):
    """(w, r) with S = w r^2 and w a unit, or None."""
    for w in S.K.units:
        r = sqrt_exact(S * w.conj())
        if r is not None:
            return w, r
    return None


# ------------------------------------------------------------ normalising (a, b)

def _two_minimalize(a, b):
    """Remove tau^2 from a and tau^4 from b while possible, for tau over 2.
    Each step is the scaling x -> x / tau^2, so the curve is unchanged."""
    K = a.K
    for q in K.two_primes:
        t2 = q.gen * q.gen
        while divides(t2, a) and divides(t2 * t2, b):
            a, b = exact_div(a, t2), exact_div(b, t2 * t2)
    return a, b


def ab_from_model(E: WeierstrassModel, X0):
    """(a, b) for E with the 2-torsion point whose 4x-coordinate is X0,
    normalised at the primes above 2."""
    inv = E.invariants
    a = 3 * X0 + inv.b2
    b = 3 * X0 * X0 + 2 * inv.b2 * X0 + 8 * inv.b4
    return _two_minimalize(a, b)


def ab_pairs(E: WeierstrassModel):
    return [ab_from_model(E, X0) for X0 in two_division_roots(E)]


def normalized_two_isogenous(a, b):
    """Normalised parameters of E_{-2a, a^2-4b}."""
    return _two_minimalize(-2 * a, a * a - 4 * b)


def two_adic_case(a, b):
    """Per prime above 2: 'b' (ordinary, q | b), 'a' (ordinary, q | a) or
    'ss' (supersingular).  Raises NotOddConductor otherwise."""
    K = a.K
    out = []
    for q in K.two_primes:
        e = q.e
        va, vb = _v(a, q), _v(b, q)
        if (va, vb) == (0, 4 * e):
            out.append((q, "b"))
        elif (va, vb) == (e, 0):
            out.append((q, "a"))
        elif e == 2 and va >= 3 and vb == 0:
            out.append((q, "ss"))
        else:
            raise NotOddConductor(f"2-adic valuations ({va},{vb}) at {q}")
    return out


# ------------------------------------------------------------ triples

@dataclass(frozen=True)
class ValuationProfile:
    prime: object
    vA: int
    vB: int
    vC: int

    def key(self):
        return (self.vA, self.vB, self.vC)


@dataclass(frozen=True)
class ClassificationTriple:
    A: QuadInt
    B: QuadInt
    C: QuadInt
    at: QuadInt
    s: QuadInt
    P: QuadInt
    field: FieldCtx
    D: QuadInt | None = None
    supersingular: bool = False

    def check(self):
        K = self.field
        if self.at * self.at * self.A != self.B + self.C:
            raise InvalidProfile("at^2 A != B + C")
        if not gcd_q(self.B, self.C).is_unit():
            raise InvalidProfile("gcd(B, C) is not a unit")
        _, fac = factor(self.A)
        if any(e > 1 for _, e in fac):
            raise InvalidProfile("A is not square-free")
        if self.P != self.A * self.s * self.s:
            raise InvalidProfile("P != A s^2")
        return self

    def key(self):
        return tuple(x.key() for x in (self.A, self.B, self.C, self.at))


def classify(a, b, D) -> ClassificationTriple:
    K = a.K
    cases = two_adic_case(a, b)
    tau_a = K.one
    for q, side in cases:
        if side in ("a", "ss"):
            tau_a = tau_a * q.gen ** q.e
    tau_b = exact_div(K(2), tau_a)
    P = gcd_many([D, b, a * a - 4 * b])
    P = canonical(P)
    A, s = K.one, K.one
    for pr, j in factor(P)[1]:
        if j % 2:
            A = A * pr.gen
        s = s * pr.gen ** (j // 2)
    A = exact_div(P, s * s)
    t2P = tau_a * tau_a * P
    try:
        B = exact_div(a * a - 4 * b, t2P)
        C = exact_div(4 * b, t2P)
        at = exact_div(a * s, tau_a * P)
    except ArithmeticError as exc:
        raise NotOddConductor(str(exc)) from exc
    t = ClassificationTriple(A, B, C, at, s, P, K, D,
                             supersingular=any(side == "ss" for _, side in cases))
    t.check()
    for prof in valuation_profiles(t, cases):
        if not _profile_allowed(prof, t, cases):
            raise NotOddConductor(f"profile {prof.key()} at {prof.prime}")
    del tau_b
    return t


def valuation_profiles(t: ClassificationTriple, cases=None):
    K = t.field
    primes = {}
    for x in (t.D if t.D is not None else K.one, t.A, t.B, t.C, K(2)):
        if x:
            for pr, _ in factor(x)[1]:
                primes[pr.gen.key()] = pr
    out = []
    for key in sorted(primes):
        pr = primes[key]
        out.append(ValuationProfile(pr, _v(t.A, pr), _v(t.B, pr), _v(t.C, pr)))
    return out


def _profile_allowed(prof, t, cases):
    pr = prof.prime
    if pr.p == 2:
        e = pr.e
        if t.supersingular:
            return prof.key() == (0, 0, 0)
        return prof.key() in ((0, 6 * e, 0), (0, 0, 6 * e))
    k = _v(t.D, pr) if t.D is not None else None
    if k is None or k == INF:
        return True
    allowed = {(0, k, 0), (1, 0, 0)}
    if k >= 6:
        allowed.add((0, k - 6, 0))
    if k % 2 == 0:
        allowed.add((0, 0, k // 2))
        if k >= 6:
            allowed.add((0, 0, (k - 6) // 2))
    return prof.key() in allowed


@dataclass
class Synthesis:
    base: AbModel
    twists: list = dc_field(default_factory=list)    # (s, AbModel)


def _squarefree_divisors(D):
    K = D.K
    gens = [pr.gen for pr, _ in factor(D)[1]] if D else []
    out = [K.one]
    for g in gens:
        out = out + [x * g for x in out]
    return out


def synthesize(t: ClassificationTriple, D=None) -> Synthesis:
    K = t.field
    t.check()
    g = canonical(gcd_q(K(2), t.C))
    a = exact_div(2 * t.A * t.at, g)
    b = exact_div(t.A * t.C, g * g)
    if b * b * (a * a - 4 * b) * g ** 6 != 4 * t.A ** 3 * t.B * t.C * t.C:
        raise InvalidProfile("discriminant identity fails")
    try:
        base = AbModel(a, b)
    except SingularModel as exc:
        raise InvalidProfile(str(exc)) from exc
    D = D if D is not None else t.D
    support = D if D is not None else t.A * t.B * t.C * t.P
    odd = K.one
    for pr, _ in factor(support)[1] if support else []:
        if pr.p != 2:
            odd = odd * pr.gen
    twists = []
    for u in unit_square_classes(K):
        for s in _squarefree_divisors(odd):
            twists.append((u * s, quadratic_twist(base, u * s)))
    return Synthesis(base, twists)


def isogeny_triple_swap(t: ClassificationTriple) -> ClassificationTriple:
    return replace(t, B=t.C, C=t.B, at=-t.at)


def triples_equivalent(t1, t2):
    """Equal up to the unit scalings (A, B, C, at) -> (vA, wB, wC, z at)
    with z^2 v = w."""
    K = t1.field
    for v in K.units:
        for z in K.units:
            w = z * z * v
            if (v * t1.A == t2.A and w * t1.B == t2.B and w * t1.C == t2.C
                    and z * t1.at == t2.at):
                return True
    return False


def ab_equivalent(p1, p2):
    """(a, b) ~ (u a, u^2 b) for a unit u."""
    a1, b1 = p1
    a2, b2 = p2
    return any(u * a1 == a2 and u * u * b1 == b2 for u in a1.K.units)


# ------------------------------------------------------------ menus

def bc_menu(K):
    """The (B, C) pairs with B, C prime to the odd prime, up to units and
    swapping, together with the case label."""
    out = []
    for eta in K.units:
        out.append((64 * eta, K.one, "ordinary"))
        out.append((K.one, 64 * eta, "ordinary"))
    if K.d == 7:
        tau = K.two_primes[0].gen
        T, U = tau ** 6, tau.conj() ** 6
        for sgn in (1, -1):
            for x, y in ((T, U), (U, T)):
                out.append((sgn * x, y, "ordinary-split"))
    if K.e2 == 2:
        for sgn in (1, -1):
            out.append((sgn * K.one, K.one, "supersingular"))
    return out


def _odd_part_single_prime(S):
    """(w, pi, r) with S = w pi r^2, pi an odd prime, w a unit; else None."""
    _, fac = factor(S)
    odd = [(pr, e) for pr, e in fac if e % 2]
    if len(odd) != 1 or odd[0][0].p == 2:
        return None
    pi = odd[0][0].gen
    rest = exact_div(S, pi)
    sq = _split_square_unit(rest)
    if sq is None:
        return None
    return sq[0], pi, sq[1]


def _record(E, family, params=None):
    M = E.weierstrass() if isinstance(E, AbModel) else E
    cd = conductor(M)
    return make_record(M, family, params=params or {}, cd=cd)


def _odd_prime_power(cd, P=None, exps=None):
    if len(cd.factors) != 1:
        return False
    Q, f = cd.factors[0]
    if Q.p == 2:
        return False
    if P is not None and Q.gen != P.gen:
        return False
    return exps is None or f in exps


def _dedupe(records):
    seen, out = set(), []
    for r in sorted(records, key=lambda r: (r.conductor_norm, r.cd.model.key())):
        k = r.cd.model.key()
        if k not in seen:
            seen.add(k)
            out.append(r)
    return out


GOOD_TWIST_J = {7: (-15 ** 3, 255 ** 3), 1: (12 ** 3, 66 ** 3), 2: (20 ** 3,)}


def good_twist_bases(K):
    """Base pairs (a, b) from the (B, C) menu with B + C zero or a unit
    times a square."""
    out = []
    for B, C, case in bc_menu(K):
        S = B + C
        if not S:
            out.append((K.zero, None, case))
            continue
        sq = _split_square_unit(S)
        if sq is None:
            continue
        w, r = sq
        P = w
        t = ClassificationTriple(w, B, C, r, K.one, P, K,
                                 supersingular=case == "supersingular")
        syn = synthesize(t, D=K.one)
        out.append((syn.base.a, syn.base.b, case))
    return out


def _good_twist_at(args):
    d, pgen, bases = args
    K = field(d)
    P = next(pr for pr, _ in factor(pgen)[1])
    out = []
    for a0, b0, case in bases:
        if not a0 and b0 is None:
            if K.d != 1:
                continue
            cands = [AbModel(K.zero, u * P.gen ** k) for u in K.units for k in (1, 3)]
        else:
            base = AbModel(a0, b0)
            cands = [quadratic_twist(base, u * P.gen) for u in K.units]
        for E in cands:
            M = E.weierstrass()
            cd = conductor(M)
            if _odd_prime_power(cd, P, (2,)):
                out.append(make_record(M, "good-twist", cd=cd, params={
                    "pi": P.gen.to_json(), "case": case,
                    "cm_j": any(j_equals(cd.model, j) for j in GOOD_TWIST_J.get(K.d, ())),
                }))
    return out


def enumerate_good_twist(K: FieldCtx, bound, workers=1):
    from .cm_families import cm_admissible
    bases = good_twist_bases(K)
    recs = []
    for a0, b0, case in bases:
        if a0 or b0 is not None:
            for u in K.units:
                E = quadratic_twist(AbModel(a0, b0), u)
                cd = conductor(E.weierstrass())
                if _odd_prime_power(cd):
                    recs.append(make_record(cd.model, "good-twist", cd=cd,
                                            params={"pi": None, "case": case}))
    primes = [P for P in primes_up_to(K, bound) if P.p != 2]
    jobs = [(K.d, P.gen, bases) for P in primes]
    for chunk in parallel_map(_good_twist_at, jobs, workers):
        recs.extend(chunk)
    out = _dedupe(recs)
    for r in out:
        P = r.cd.factors[0][0]
        r.params["cm_prime_admissible"] = (
            P.p != 2 and K.disc % P.p != 0 and any(cm_admissible(u * P.gen) for u in K.units))
    return out


def enumerate_additive(K: FieldCtx):
    recs = []
    for B, C, case in bc_menu(K):
        S = B + C
        if not S:
            continue
        split = _odd_part_single_prime(S)
        if split is None:
            continue
        w, pi, r = split
        A = w * pi
        t = ClassificationTriple(A, B, C, r, K.one, A, K, D=None,
                                 supersingular=case == "supersingular")
        syn = synthesize(t, D=pi)
        P = next(pr for pr, _ in factor(pi)[1])
        for s, E in syn.twists:
            M = E.weierstrass()
            cd = conductor(M)
            if _odd_prime_power(cd, P, (2,)):
                recs.append(make_record(M, "additive-twist", cd=cd, params={
                    "B": B.to_json(), "C": C.to_json(), "A": A.to_json(),
                    "twist": s.to_json()}))
    return _dedupe(recs)


# ------------------------------------------------------------ Setzer-Neumann

def sn_congruence(upr):
    """u pi^r == 1 modulo the rational integer 8 / e2."""
    K = upr.K
    m = 8 // K.e2
    return divides(K(m), upr - 1)


def _sn_solutions_at(K, P, rmax):
    """(a, u, r) with a^2 = u pi^r + 64 eps, r odd and at most rmax."""
    eps = K.epsilon
    for r in range(1, rmax + 1, 2):
        for u in K.units:
            a = sqrt_exact(u * P.gen ** r + 64 * eps)
            if a is None:
                continue
            for sa in ((a, -a) if a else (a,)):
                yield sa, u, r


def _rmax(P, bound):
    r = 1
    while P.norm ** (r + 2) <= bound:
        r += 2
    return r


def setzer_neumann_solutions(K: FieldCtx, bound):
    """All (a, u, pi, r) with norm(pi^r) <= bound, pi odd."""
    out = []
    for P in primes_up_to(K, bound):
        if P.p != 2:
            out += [(a, u, P.gen, r) for a, u, r in _sn_solutions_at(K, P, _rmax(P, bound))]
    return out


def _sn_at(args):
    d, pgen, rmax = args
    K = field(d)
    P = next(pr for pr, _ in factor(pgen)[1])
    eps = K.epsilon
    out = []
    for a, u, r in _sn_solutions_at(K, P, rmax):
        upr = u * P.gen ** r
        try:
            E = AbModel(a, 16 * eps)
        except SingularModel:
            continue
        params = {"a": a.to_json(), "eps": eps.to_json(), "u": u.to_json(),
                  "pi": P.gen.to_json(), "r": r, "congruence": sn_congruence(upr)}
        cd = conductor(E.weierstrass())
        if _odd_prime_power(cd, P, (1,)):
            out.append(make_record(cd.model, "setzer-neumann", cd=cd, params=params))
        T = quadratic_twist(E, u * P.gen)
        cdt = conductor(T.weierstrass())
        if _odd_prime_power(cdt, P, (2,)):
            out.append(make_record(cdt.model, "setzer-neumann-twist", cd=cdt,
                                   params=dict(params)))
    return out


def setzer_neumann_search(K: FieldCtx, bound, workers=1):
    if bound < 2:
        raise ValueError("bound must be at least 2")
    jobs = [(K.d, P.gen, _rmax(P, bound)) for P in primes_up_to(K, bound) if P.p != 2]
    recs = [r for chunk in parallel_map(_sn_at, jobs, workers) for r in chunk]
    return _dedupe(recs)


# ------------------------------------------------------------ sporadic family

def sporadic_pairs(u):
    """E_u (scaled to integral (a, b)) and its three 2-isogenous pairs.
    The last one is the image of the 2-torsion point x = u + 16 and
    carries a minus sign on a; with a plus sign it is the twist by -1."""
    K = u.K
    return [
        (-(u + 32), 16 * (u + 16)),
        (2 * (u - 16), u * u + 32 * u + 256),
        (2 * (u + 32), u * u),
        (-(u + 8), K(16)),
    ]


def sporadic_family(u, K: FieldCtx = None):
    K = K or u.K
    u = K.one * u
    if not u.is_unit():
        raise ValueError("u must be a unit")
    if not (u + 16):
        raise SingularModel("u = -16")
    lam = -u
    out = []
    for i, (a, b) in enumerate(sporadic_pairs(u)):
        T = quadratic_twist(AbModel(a, b), lam)
        M = T.weierstrass()
        cd = conductor(M)
        inv = cd.model.invariants
        kraus = all(kraus_criterion(inv.c4, inv.c6, q)[0] for q in K.two_primes)
        cd0 = conductor(AbModel(a, b).weierstrass())
        out.append(make_record(M, "sporadic", cd=cd, params={
            "u": u.to_json(), "member": i, "kraus_twist": kraus,
            "untwisted_good_at_2": all(Q.p != 2 for Q, _ in cd0.factors),
            "minus_u_square_mod4": residue_test(-u, K(4), "square")[0],
        }))
    return out


# ------------------------------------------------------------ odd discriminant valuation

def _isogeny_neighbours(M):
    out = [M]
    for a, b in ab_pairs(M):
        a2, b2 = normalized_two_isogenous(a, b)
        out.append(conductor(AbModel(a2, b2).weierstrass()).model)
    return out


def odd_disc_in_isogeny_class(rec):
    M = rec.cd.model if rec.cd is not None else WeierstrassModel.from_ainvs(
        field(rec.field_d), [QuadInt(x, y, field(rec.field_d)) for x, y in rec.ainvs])
    cd = conductor(M)
    if not two_division_roots(cd.model):
        raise PreconditionViolated("no K-rational 2-torsion point")
    if len(cd.factors) != 1:
        raise PreconditionViolated("conductor is not a prime power")
    P = cd.factors[0][0]
    # walk the 2-isogeny graph breadth first; a curve with a single
    # 2-torsion point may sit two steps away from the odd one
    seen, queue = {cd.model.key()}, [cd.model]
    while queue:
        M = queue.pop(0)
        cdn = conductor(M)
        if _v(cdn.disc_min, P) % 2 == 1:
            return make_record(cdn.model, rec.family, cd=cdn,
                               params={"from": rec.ainvs, "v_disc": _v(cdn.disc_min, P)})
        for N in _isogeny_neighbours(M)[1:]:
            N = conductor(N).model
            if N.key() not in seen:
                seen.add(N.key())
                queue.append(N)
    raise OddValuationMissing(f"no odd discriminant valuation near {rec.ainvs}")


# ------------------------------------------------------------ supersingular

def supersingular_candidates(K: FieldCtx, box=12):
    """Solutions of at^2 = P + 1 and at^2 = P + eps with P an odd prime
    power, each with whether some twist by 1, eps, pi, eps pi has good
    reduction above 2.  Only fields where 2 ramifies."""
    if K.e2 != 2:
        return []
    eps = K.epsilon
    out = []
    seen = set()
    for x in range(-box, box + 1):
        for y in range(-box, box + 1):
            at = QuadInt(x, y, K)
            for shift, tag in ((K.one, "P+1"), (eps, "P+eps")):
                Pv = at * at - shift
                if not Pv:
                    continue
                fac = factor(Pv)[1]
                if len(fac) != 1 or fac[0][0].p == 2:
                    continue
                pr = fac[0][0]
                a, b = 2 * at, shift
                key = (tag, a.key())
                if key in seen:
                    continue
                seen.add(key)
                try:
                    base = AbModel(a, b)
                except SingularModel:
                    continue
                good = False
                for s in (K.one, eps, pr.gen, eps * pr.gen):
                    cd = conductor(quadratic_twist(base, s).weierstrass())
                    if all(Q.p != 2 for Q, _ in cd.factors):
                        good = True
                out.append({"equation": tag, "at": at.to_json(), "P": Pv.to_json(),
                            "a": a.to_json(), "b": b.to_json(), "good_twist_at_2": good})
    return out


# ------------------------------------------------------------ exhaustive sweep

def _sweep_pairs(K, bound):
    """(a, b) with norm(b^2 (a^2 - 4b)) <= bound that pass cheap necessary
    conditions for odd prime-power conductor."""
    import math
    import numpy as np
    t, n = K.t, K.n
    f2 = K.two_primes[0].f
    need = 24 if f2 == 2 else 12
    rb = math.isqrt(int(math.sqrt(bound))) * 2 + 2
    for xb in range(-rb, rb + 1):
        for yb in range(-rb, rb + 1):
            b = QuadInt(xb, yb, K)
            nb = b.norm()
            if nb == 0 or nb * nb > bound:
                continue
            limit = bound // (nb * nb)
            rad = math.sqrt(4 * math.sqrt(nb) + math.sqrt(limit))
            r = int(rad * 2 / math.sqrt(3)) + 2
            xs, ys = np.meshgrid(np.arange(-r, r + 1, dtype=np.int64),
                                 np.arange(-r, r + 1, dtype=np.int64))
            x, y = xs.ravel(), ys.ravel()
            x2, y2 = x * x - n * y * y, 2 * x * y + t * y * y
            dx, dy = x2 - 4 * xb, y2 - 4 * yb
            nd = dx * dx + t * dx * dy + n * dy * dy
            for i in np.nonzero((nd > 0) & (nd <= limit))[0]:
                N = int(nd[i]) * nb * nb * 2 ** 8
                v2 = (N & -N).bit_length() - 1
                if v2 % need:
                    continue
                rest = N >> v2
                if rest > 1 and _single_prime_base(rest) is None:
                    continue
                yield QuadInt(int(x[i]), int(y[i]), K), b


def _single_prime_base(n):
    import gmpy2
    for k in range(1, n.bit_length() + 1):
        r, exact = gmpy2.iroot(n, k)
        if r < 2:
            return None
        if exact and gmpy2.is_prime(r):
            return int(r)
    return None


def _sweep_one(args):
    d, a, b = args
    try:
        M = AbModel(a, b).weierstrass()
    except SingularModel:
        return None
    cd = conductor(M)
    if not _odd_prime_power(cd):
        return None
    return cd.model.key(), cd.factors[0][0].gen, _v(cd.disc_min, cd.factors[0][0])


def known_curves_at(P, vmax):
    """Model keys of the family curves (and their 2-isogenous neighbours)
    with conductor a power of P."""
    K = P.K
    recs = []
    rmax = vmax + 7
    recs += _sn_at((K.d, P.gen, rmax))
    recs += _good_twist_at((K.d, P.gen, good_twist_bases(K)))
    recs += [r for r in enumerate_additive(K) if r.cd.factors[0][0].gen == P.gen]
    for u in K.units:
        if not (u + 16):
            continue
        for r in sporadic_family(u, K):
            if r.cd.factors and r.cd.factors[0][0].gen == P.gen:
                recs.append(r)
            for w in K.units:
                T = quadratic_twist(r.cd.model, w * P.gen)
                cdt = conductor(T)
                if _odd_prime_power(cdt, P):
                    recs.append(make_record(cdt.model, "sporadic-twist", cd=cdt))
    for u in unit_square_classes(K):
        for r in list(recs):
            T = conductor(quadratic_twist(r.cd.model, u))
            if _odd_prime_power(T, P):
                recs.append(make_record(T.model, r.family, cd=T))
    keys = set()
    for r in recs:
        for N in _isogeny_neighbours(r.cd.model):
            keys.add(conductor(N).model.key())
    return keys


def exhaustive_sweep(K: FieldCtx, bound, workers=1):
    """Every curve E_{a,b} with norm(b^2(a^2-4b)) <= bound and odd
    prime-power conductor, with whether the family searches reach it.
    Returns (found, missing) as lists of (model key, prime generator)."""
    jobs = [(K.d, a, b) for a, b in _sweep_pairs(K, bound)]
    hits = {}
    for h in parallel_map(_sweep_one, jobs, workers, chunksize=64):
        if h:
            key, pgen, v = h
            hits.setdefault(key, (pgen, v))
    by_prime = {}
    for key, (pgen, v) in hits.items():
        entry = by_prime.setdefault(pgen.key(), [pgen, 0, []])
        entry[1] = max(entry[1], v)
        entry[2].append(key)
    missing = []
    for pkey in sorted(by_prime):
        pgen, vmax, keys = by_prime[pkey]
        P = next(pr for pr, _ in factor(pgen)[1])
        known = known_curves_at(P, vmax)
        missing += [(k, pgen) for k in keys if k not in known]
    return sorted(hits.items()), missing
