"""nine-fields command line."""
from __future__ import annotations

from dataclasses import asdict, dataclass
import json
import os
import sys
import tempfile
import time

import click

from .field_arith import FIELDS, field, parse
from .records import workers_from_env


@dataclass
class SearchConfig:
    d: int | None
    command: str
    bound: int = 100
    family: str = "all"
    output: str | None = None
    workers: int = 1
    seed: int = 0

    def __post_init__(self):
        if self.d is not None and self.d not in FIELDS:
            raise click.UsageError(f"d must be one of {FIELDS}")
        if self.bound < 2:
            raise click.UsageError("bound must be at least 2")


class _AtomicJsonl:
    """Collects JSONL lines in a temp file next to the target and renames it
    into place on success; the temp file is removed on failure."""

    def __init__(self, path):
        self.path = path
        self.count = 0
        self._fh = None

    def __enter__(self):
        if self.path:
            dirname = os.path.dirname(os.path.abspath(self.path))
            fd, self._tmp = tempfile.mkstemp(dir=dirname, suffix=".part")
            self._fh = os.fdopen(fd, "w")
        return self

    def write(self, rec):
        line = rec.dumps()
        if self._fh:
            self._fh.write(line + "\n")
        else:
            click.echo(line)
        self.count += 1

    def __exit__(self, exc_type, exc, tb):
        if not self._fh:
            return False
        self._fh.close()
        if exc_type is None:
            os.replace(self._tmp, self.path)
        else:
            os.unlink(self._tmp)
        return False


def _write_manifest(cfg, count, seconds, extra=None):
    if not cfg.output:
        return
    manifest = {"config": asdict(cfg), "count": count, "seconds": round(seconds, 3)}
    manifest.update(extra or {})
    path = cfg.output + ".manifest.json"
    fd, tmp = tempfile.mkstemp(dir=os.path.dirname(os.path.abspath(path)), suffix=".part")
    with os.fdopen(fd, "w") as fh:
        json.dump(manifest, fh, sort_keys=True, indent=2)
    os.replace(tmp, path)


def _emit(cfg, records, extra=None):
    t0 = time.time()
    records = sorted(records, key=lambda r: r.sort_key())
    with _AtomicJsonl(cfg.output) as out:
        for rec in records:
            out.write(rec)
    _write_manifest(cfg, out.count, time.time() - t0 + cfg._elapsed, extra)
    return out.count


def _cfg(command, **kw):
    workers = kw.pop("workers", None) or workers_from_env(1)
    cfg = SearchConfig(command=command, workers=workers, **kw)
    cfg._elapsed = 0.0
    return cfg


def _timed(cfg, fn, *args, **kwargs):
    t0 = time.time()
    out = fn(*args, **kwargs)
    cfg._elapsed = time.time() - t0
    return out


_d_option = click.option("--d", "d", type=int, required=True, help="field Q(sqrt(-d))")
_out_option = click.option("--output", "-o", type=click.Path(dir_okay=False), default=None,
                           help="JSONL output file (stdout if omitted)")
_workers_option = click.option("--workers", type=int, default=None,
                               help="worker processes (default NINEFIELDS_WORKERS or 1)")


@click.group()
def main():
    """Elliptic curves of prime-power conductor over the nine imaginary
    quadratic fields of class number one."""


@main.command("cm-catalog")
@_d_option
@click.option("--bound", type=int, default=100)
@_out_option
@_workers_option
def cm_catalog_cmd(d, bound, output, workers):
    """CM twists with conductor (pi)^2 for admissible primes pi."""
    from .cm_families import cm_catalog, cm_density
    cfg = _cfg("cm-catalog", d=d, bound=bound, output=output, workers=workers)
    K = field(d)
    recs = _timed(cfg, cm_catalog, K, bound, workers=cfg.workers)
    hits, total = cm_density(K, bound)
    _emit(cfg, recs, {"admissible_primes": hits, "primes": total})


@main.command("torsion")
@click.option("--ell", type=click.Choice(["3", "5", "7"]), required=True)
@_d_option
@click.option("--bound", type=int, default=10 ** 6,
              help="norm bound on D_min (only used for d=3, ell=3)")
@_out_option
@_workers_option
def torsion_cmd(ell, d, bound, output, workers):
    """Curves with a K-rational point of order ell and prime-power conductor."""
    from .odd_torsion import enumerate_torsion, enumerate_torsion3_eisenstein
    cfg = _cfg("torsion", d=d, bound=bound, output=output, workers=workers,
               family=f"ell={ell}")
    ell = int(ell)
    if ell == 3 and d == 3:
        recs = _timed(cfg, enumerate_torsion3_eisenstein, bound, workers=cfg.workers)
    else:
        recs = _timed(cfg, enumerate_torsion, ell, field(d), workers=cfg.workers)
    _emit(cfg, recs)


TWO_TORSION_FAMILIES = ("sn", "sporadic", "good", "additive", "all")


@main.command("two-torsion")
@_d_option
@click.option("--bound", type=int, default=1000)
@click.option("--family", type=click.Choice(TWO_TORSION_FAMILIES), default="all")
@_out_option
@_workers_option
def two_torsion_cmd(d, bound, family, output, workers):
    """Curves of odd prime-power conductor with a point of order 2."""
    from . import two_torsion as tt
    cfg = _cfg("two-torsion", d=d, bound=bound, family=family, output=output,
               workers=workers)
    K = field(d)

    def run():
        recs = []
        if family in ("good", "all"):
            recs += tt.enumerate_good_twist(K, bound, workers=cfg.workers)
        if family in ("additive", "all"):
            recs += tt.enumerate_additive(K)
        if family in ("sn", "all"):
            recs += tt.setzer_neumann_search(K, bound, workers=cfg.workers)
        if family in ("sporadic", "all"):
            for u in K.units:
                if u + 16:
                    recs += tt.sporadic_family(u, K)
        return recs

    _emit(cfg, _timed(cfg, run))


@main.command("mod2-search")
@click.option("--d", "d", type=click.Choice([str(x) for x in (11, 19, 43, 67, 163)]),
              required=True)
@click.option("--bound", type=int, default=5000, help="conductor norm bound")
@click.option("--box", type=int, default=6, help="coordinate box for u, v")
@_out_option
@_workers_option
def mod2_search_cmd(d, bound, box, output, workers):
    """Prime conductor, prime-square discriminant, cyclic mod-2 image."""
    from .mod2_square_disc import search_square_disc, verify_seed
    d = int(d)
    cfg = _cfg("mod2-search", d=d, bound=bound, output=output, workers=workers)
    recs = _timed(cfg, search_square_disc, d, bound, box=box, workers=cfg.workers)
    _emit(cfg, recs, {"seed": verify_seed(d), "box": box})


@main.command("verify-curve")
@_d_option
@click.option("--ainvs", required=True,
              help='five a-invariants, comma separated; each "x" or "x+y*w"')
def verify_curve_cmd(d, ainvs):
    """Local data, Szpiro status, torsion and 2-division report for one curve."""
    from .curve_models import SingularModel, WeierstrassModel, conductor, szpiro_check
    from .mod2_square_disc import two_division_check
    from .records import torsion_label
    K = field(d)
    parts = [p.strip() for p in ainvs.split(",")]
    if len(parts) != 5:
        raise click.UsageError("need exactly five a-invariants")
    try:
        E = WeierstrassModel.from_ainvs(K, [parse(p, K) for p in parts])
        cd = conductor(E)
    except (ValueError, SingularModel) as exc:
        raise click.UsageError(str(exc))
    rep = two_division_check(E)
    out = {
        "minimal_model": cd.model.to_json(),
        "conductor": {"norm": cd.norm, "factors": [[P.gen.to_json(), f] for P, f in cd.factors]},
        "disc_min": cd.disc_min.to_json(),
        "local": [ld.to_json() for ld in cd.local],
        "szpiro": szpiro_check(cd),
        "torsion_2part": torsion_label(cd.model),
        "two_division": rep.to_json(),
    }
    click.echo(json.dumps(out, sort_keys=True, indent=2))


@main.command("acceptance")
@click.option("--only", type=str, default=None, help="comma separated criterion numbers")
@_workers_option
def acceptance_cmd(only, workers):
    """Run the acceptance criteria and print one line per criterion."""
    from .acceptance import run_all
    workers = workers or workers_from_env(1)
    which = [int(x) for x in only.split(",")] if only else None
    ok = True
    for res in run_all(which, workers=workers):
        click.echo(res.line())
        ok &= res.passed
    sys.exit(0 if ok else 1)


if __name__ == "__main__":
    main()
