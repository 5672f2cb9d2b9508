"""Tate's algorithm and the searches against PARI (skipped without cypari)."""
import random

import pytest

from ninefields.acceptance import (
    additive_records, sn_records, sporadic_records, square_disc_records, torsion_records,
)
from ninefields.curve_models import SingularModel, WeierstrassModel, conductor
from ninefields.field_arith import FIELDS, QuadInt, field
from ninefields.mod2_square_disc import SQUARE_DISC_FIELDS

cypari = pytest.importorskip("cypari")
pari = cypari.pari


def nf_for(d):
    pari('aa=varlower("aa")')
    poly = f"aa^2+{d}" if d in (1, 2) else f"aa^2-aa+{(1 + d) // 4}"
    pari(f"nf{d}=bnfinit({poly})")
    return f"nf{d}"


def pari_data(nf, ainvs):
    coeffs = ",".join(f"{x}+({y})*aa" for x, y in ainvs)
    pari(f"E=ellinit([{coeffs}],{nf})")
    cond = int(pari(f"idealnorm({nf},ellglobalred(E)[1])"))
    disc = abs(int(pari(f"norm(Mod(ellminimalmodel(E).disc,{nf}.pol))")))
    return cond, disc


def records_for(d):
    recs = list(additive_records(d)) + list(sporadic_records(d)) + list(sn_records(d, 2000))[:20]
    for ell in (5, 7):
        recs += list(torsion_records(ell, d))
    if d in SQUARE_DISC_FIELDS:
        recs += list(square_disc_records(d))
    return recs


@pytest.mark.parametrize("d", FIELDS)
def test_records_against_pari(d):
    nf = nf_for(d)
    for r in records_for(d):
        assert pari_data(nf, r.ainvs) == (r.conductor_norm, r.cd.disc_min.norm()), r.ainvs


@pytest.mark.parametrize("d", FIELDS)
def test_random_models_against_pari(d):
    K = field(d)
    nf = nf_for(d)
    rng = random.Random(d)
    done = 0
    while done < 15:
        ai = [QuadInt(rng.randint(-6, 6), rng.randint(-6, 6), K) for _ in range(5)]
        try:
            cd = conductor(WeierstrassModel(*ai))
        except SingularModel:
            continue
        assert pari_data(nf, [a.to_json() for a in ai]) == (cd.norm, cd.disc_min.norm())
        done += 1
