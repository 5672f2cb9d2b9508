"""CurveRecord: the exported form of a found curve, plus the small parallel
map helper shared by the searches."""
from __future__ import annotations

from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field as dc_field
import json
import os

from .curve_models import ConductorData, WeierstrassModel, conductor, two_torsion_points


@dataclass
class CurveRecord:
    field_d: int
    ainvs: list
    conductor_norm: int
    conductor_gens: list
    conductor_exponents: list
    disc_min: list
    disc_valuations: list
    kodaira: list
    family: str
    torsion_structure: str
    label: str | None = None
    params: dict = dc_field(default_factory=dict)
    cd: ConductorData | None = dc_field(default=None, repr=False, compare=False)

    def to_json(self):
        out = {
            "field_d": self.field_d,
            "ainvs": self.ainvs,
            "conductor": {"norm": self.conductor_norm, "gens": self.conductor_gens,
                          "exponents": self.conductor_exponents},
            "disc_min": self.disc_min,
            "disc_valuations": self.disc_valuations,
            "kodaira": self.kodaira,
            "family": self.family,
            "torsion_structure": self.torsion_structure,
        }
        if self.label is not None:
            out["label"] = self.label
        if self.params:
            out["params"] = self.params
        return out

    def dumps(self):
        return json.dumps(self.to_json(), sort_keys=True, separators=(",", ":"))

    @property
    def model(self) -> WeierstrassModel:
        return self.cd.model

    def sort_key(self):
        return (self.field_d, self.family, self.conductor_norm, self.ainvs)


def torsion_label(E, odd_part=1):
    n2 = len(two_torsion_points(E))
    parts = []
    if n2 == 3:
        parts = [2, 2 * odd_part]
    elif n2 == 1:
        parts = [2 * odd_part]
    elif odd_part > 1:
        parts = [odd_part]
    if not parts:
        return "trivial"
    return " x ".join(f"Z/{k}" for k in parts)


def make_record(E, family, label=None, params=None, odd_torsion=1, cd=None):
    cd = cd or conductor(E)
    M = cd.model
    return CurveRecord(
        field_d=M.K.d,
        ainvs=M.to_json(),
        conductor_norm=cd.norm,
        conductor_gens=[P.gen.to_json() for P, _ in cd.factors],
        conductor_exponents=[f for _, f in cd.factors],
        disc_min=cd.disc_min.to_json(),
        disc_valuations=[{"prime": ld.prime.gen.to_json(), "norm": ld.prime.norm,
                          "v": ld.v_min_disc} for ld in cd.local],
        kodaira=[ld.kodaira for ld in cd.local],
        family=family,
        torsion_structure=torsion_label(M, odd_torsion),
        label=label,
        params=params or {},
        cd=cd,
    )


def workers_from_env(default=1):
    raw = os.environ.get("NINEFIELDS_WORKERS")
    if raw:
        return max(1, int(raw))
    return default


def parallel_map(func, items, workers=1, chunksize=8):
    """Order-preserving map; runs in-process when workers == 1."""
    items = list(items)
    if workers <= 1 or len(items) < 2:
        return [func(x) for x in items]
    with ProcessPoolExecutor(max_workers=workers) as ex:
        return list(ex.map(func, items, chunksize=chunksize))
