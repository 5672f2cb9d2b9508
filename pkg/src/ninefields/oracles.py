"""Independent brute-force routes used to cross-check the structured
algorithms.  Nothing here is used by the search code itself."""
from __future__ import annotations

from .field_arith import QuadInt, divides, residues, valuation, factor, sqrt_exact
from .curve_models import INF


def _v(x, q):
    return INF if not x else valuation(x, q)


def integral_model_exists(c4, c6, q):
    """Exhaustive search for a q-integral model with invariants exactly
    (c4, c6).  Any such model can be moved, by a q-integral change of
    coordinates fixing c4 and c6, to one with a1, a3 among residues mod 2 and
    a2 among residues mod 3; a4 and a6 are then forced:
        a4 = (b2^2 - c4 - 24 a1 a3) / 48
        a6 = (b2^3 - 3 b2 c4 - 2 c6 - 432 a3^2) / 1728
    so the question is whether these two are q-integral for some choice."""
    K = c4.K
    v48, v1728 = _v(K(48), q), _v(K(1728), q)
    for a1 in residues(K(2)):
        for a2 in residues(K(3)):
            b2 = a1 * a1 + 4 * a2
            for a3 in residues(K(2)):
                if _v(b2 * b2 - c4 - 24 * a1 * a3, q) < v48:
                    continue
                if _v(b2 ** 3 - 3 * b2 * c4 - 2 * c6 - 432 * a3 * a3, q) >= v1728:
                    return True
    return False


def prime_power_part(x):
    """(prime, exponent) if x is a unit times a prime power, else None."""
    _, fac = factor(x)
    if len(fac) == 1:
        return fac[0]
    return None


def setzer_neumann_bruteforce(K, bound, height):
    """All (a, eps) with a^2 - 64 eps = unit * P^r, r odd, P odd and
    norm(P^r) <= bound, for a in the box of coordinates |x|, |y| <= height."""
    out = set()
    for x in range(-height, height + 1):
        for y in range(-height, height + 1):
            a = QuadInt(x, y, K)
            for eps in K.units:
                val = a * a - 64 * eps
                if not val:
                    continue
                pp = prime_power_part(val)
                if pp is None:
                    continue
                P, r = pp
                if r % 2 == 1 and P.norm ** r <= bound and P.p != 2:
                    out.add((a.key(), eps.key()))
    return out


def square_root_bruteforce(q, box):
    K = q.K
    for x in range(-box, box + 1):
        for y in range(-box, box + 1):
            r = QuadInt(x, y, K)
            if r * r == q:
                return r
    return None
