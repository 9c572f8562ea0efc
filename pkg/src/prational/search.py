"""Experiments: densities of 3-rational fields, Greenberg searches and scans."""

from __future__ import annotations

import csv
import io
import json
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass
from functools import lru_cache

import numpy as np

from .arith import is_squarefree, kronecker_symbol, primes_up_to
from .errors import ConfigError, InvalidInput
from .prat import (
    CompositumField,
    greenberg_admissible,
    is_3_rational_quadratic,
    is_P_rational,
    is_p_rational_imaginary_all_p,
    is_p_rational_ray,
    regulator_norm_test,
)
from .qform import class_group_structure, wide_class_number
from .quadfield import QuadraticField

__all__ = [
    "DensityReport",
    "SearchConfig",
    "TableRow",
    "density_experiment",
    "greenberg_search",
    "scan_all_p_rational",
    "scan_incomplete",
    "structure_text",
    "verify_compositum_table",
]

BLOCK = 2000  # iterations per RNG block; fixes the stream independently of --jobs


def _squarefree_mask(b, B):
    """Boolean mask over [b, B] of squarefree integers (numpy sieve)."""
    n = B - b + 1
    mask = np.ones(n, dtype=bool)
    k = 2
    while k * k <= B:
        q = k * k
        start = (-b) % q
        mask[start::q] = False
        k += 1
    if b <= 0 <= B:
        mask[-b] = False
    return mask


def _map(fn, items, jobs):
    if jobs <= 1 or len(items) < 2:
        return [fn(x) for x in items]
    chunk = max(1, len(items) // (4 * jobs))
    with ProcessPoolExecutor(max_workers=jobs) as ex:
        return list(ex.map(fn, items, chunksize=chunk))


# -------------------------------------------------------------- density


@dataclass
class DensityReport:
    b: int
    B: int
    sign: str
    restrict: str | None
    method: str
    N: int
    N3: int

    @property
    def ratio(self):
        return self.N3 / self.N if self.N else 0.0

    def to_json(self):
        out = asdict(self)
        out["ratio"] = round(self.ratio, 6)
        return out


RESTRICTIONS = {
    None: lambda d: True,
    "3mod9": lambda d: d % 9 == 3,
    "pool": lambda d: greenberg_admissible(d, True),
    "3nmid": lambda d: d % 3 != 0,
}


def _mirror_count(d):
    # the program counts d = 1 too: its mirror Q(sqrt -3) has h = 1
    if d == 1:
        return True
    return is_3_rational_quadratic(d)


def _ray_3(d):
    return is_p_rational_ray(d, 3).rational


def density_experiment(b, B, sign="real", restrict=None, method="mirror", jobs=1):
    """Proportion of 3-rational fields among admissible d (or -d) in [b, B].

    Admissible means squarefree with d != 6 mod 9 (for the signed d), the
    skip of the original loop; restrict further narrows the range.
    """
    if not 1 <= b <= B:
        raise InvalidInput("need 1 <= b <= B")
    if sign not in ("real", "imaginary"):
        raise InvalidInput(f"unknown sign {sign!r}")
    if restrict not in RESTRICTIONS:
        raise InvalidInput(f"unknown restriction {restrict!r}")
    if method not in ("mirror", "ray"):
        raise InvalidInput(f"unknown method {method!r}")
    s = 1 if sign == "real" else -1
    mask = _squarefree_mask(b, B)
    keep = RESTRICTIONS[restrict]
    ds = [s * x for x in range(b, B + 1) if mask[x - b] and (s * x) % 9 != 6 and keep(s * x)]
    if method == "ray":
        ds_ray = [d for d in ds if d != 1]
        hits = _map(_ray_3, ds_ray, jobs) + ([True] if 1 in ds else [])
    else:
        hits = _map(_mirror_count, ds, jobs)
    return DensityReport(b, B, sign, restrict, method, len(ds), sum(hits))


# ------------------------------------------------------------- greenberg


@dataclass(frozen=True)
class SearchConfig:
    b: int
    B: int
    t: int = 5
    iterations: int = 10**4
    seed: int = 0
    policy: str = "ramified"  # or "unramified"


def greenberg_pool(cfg):
    """Pool of the search: admissible d in [b, B] with a 3-rational Q(sqrt d)."""
    if cfg.policy == "ramified":
        ok = lambda d: greenberg_admissible(d, True)  # noqa: E731
    elif cfg.policy == "unramified":
        ok = lambda d: d % 3 != 0 and is_squarefree(d)  # noqa: E731
    else:
        raise ConfigError(f"unknown policy {cfg.policy!r}")
    pool = []
    for d in range(max(cfg.b, 2), cfg.B + 1):
        if ok(d) and _mirror_ok(d):
            pool.append(d)
    return pool


@lru_cache(maxsize=None)
def _mirror_ok(d):
    return is_3_rational_quadratic(d)


def tuple_passes(ds):
    """Independence check, then the mirror test on every subfield."""
    try:
        C = CompositumField(ds)
    except InvalidInput:
        return False
    return all(_mirror_ok(x) for x in C.subfields)


def _search_block(args):
    cfg, pool, block = args
    rng = np.random.default_rng(np.random.SeedSequence(cfg.seed, spawn_key=(block,)))
    start = block * BLOCK
    n = min(BLOCK, cfg.iterations - start)
    picks = rng.integers(0, len(pool), size=(n, cfg.t))
    out = []
    for row in picks:
        ds = [pool[i] for i in row]
        if tuple_passes(ds):
            out.append(tuple(ds))
    return out


def greenberg_search(cfg, jobs=1):
    """Random t-tuples from the pool (with replacement) giving 3-rational compositums."""
    if cfg.t < 1:
        raise ConfigError("t must be positive")
    pool = greenberg_pool(cfg)
    if not pool:
        raise ConfigError("empty pool")
    nblocks = -(-cfg.iterations // BLOCK)
    tasks = [(cfg, pool, k) for k in range(nblocks)]
    for hits in _map(_search_block, tasks, jobs):
        yield from hits


# ----------------------------------------------------------------- tables


@dataclass
class TableRow:
    d: int
    h: int
    h_mod_9: int
    h_3: int
    regulator: int | None

    def regulator_text(self):
        return "X" if self.regulator is None else f"Mod({self.regulator},3)"

    def to_json(self):
        return {"d": self.d, "h_mod_9": self.h_mod_9, "h_3": self.h_3, "regulator": self.regulator_text()}


def _three_part(n):
    k = 1
    while n % 3 == 0:
        n //= 3
        k *= 3
    return k


def verify_compositum_table(d_list):
    """One row per quadratic subfield, plus the deduced 3-class structure.

    Returns (rows, structure) where structure lists the 3-primary class
    invariants of the compositum, read off as the direct sum over its
    quadratic subfields (deduced, not measured).
    """
    C = d_list if isinstance(d_list, CompositumField) else CompositumField(d_list)
    rows, structure = [], []
    for dd in C.subfields:
        D = QuadraticField(dd).D
        h = wide_class_number(D)
        reg = regulator_norm_test(dd, 3).residue if dd > 0 else None
        rows.append(TableRow(dd, h, h % 9, _three_part(h), reg))
        G = class_group_structure(D, "wide" if D > 0 else "narrow")
        structure.extend(_three_part(n) for n in G.invariants if n % 3 == 0)
    return rows, sorted(structure, reverse=True)


def structure_text(structure):
    if not structure:
        return "trivial"
    parts = []
    for n in sorted(set(structure), reverse=True):
        k = structure.count(n)
        parts.append(f"(Z/{n}Z)^{k}" if k > 1 else f"Z/{n}Z")
    return " x ".join(parts)


# ------------------------------------------------------------------ scans


def _allp(dd):
    return -dd if is_p_rational_imaginary_all_p(dd) else None


def scan_all_p_rational(b, B, jobs=1):
    """Imaginary Q(sqrt -dd), dd in [b, B], that are p-rational for every p."""
    if B < b:
        return []
    b = max(b, 1)
    mask = _squarefree_mask(b, B)
    dds = [x for x in range(b, B + 1) if mask[x - b]]
    return [d for d in _map(_allp, dds, jobs) if d is not None]


def _incomplete_one(args):
    dd, primes = args
    out = []
    for p in primes:
        if kronecker_symbol(-dd, p) != 1:
            continue
        v = is_P_rational(-dd, p)
        if not v.rational:
            out.append((-dd, p, v))
    return out


def scan_incomplete(d_max, p_max, d_min=1, p_min=2, jobs=1):
    """Non-{P}-rational Q(sqrt -dd) for dd in [d_min, d_max] and p in [p_min, p_max].

    Only primes with kronecker(-dd, p) = 1 are examined; results come
    ordered by p, then by |d|.
    """
    primes = [int(p) for p in primes_up_to(p_max) if p >= p_min]
    mask = _squarefree_mask(d_min, d_max) if d_max >= d_min else []
    tasks = [(x, primes) for x in range(d_min, d_max + 1) if mask[x - d_min]]
    found = [r for part in _map(_incomplete_one, tasks, jobs) for r in part]
    found.sort(key=lambda r: (r[1], -r[0]))
    return found


def incomplete_lists(found):
    """Group scan results by p: {p: [d, ...]}."""
    out = {}
    for d, p, _ in found:
        out.setdefault(p, []).append(d)
    return out


# ----------------------------------------------------------------- output


def write_rows(rows, header, fmt="csv", stream=None):
    """Write dict rows as CSV (fixed header) or JSON lines."""
    stream = stream or sys.stdout
    if fmt == "csv":
        w = csv.DictWriter(stream, fieldnames=header, lineterminator="\n", extrasaction="ignore")
        w.writeheader()
        for r in rows:
            w.writerow({k: _cell(r.get(k)) for k in header})
    elif fmt in ("json", "jsonl"):
        for r in rows:
            stream.write(json.dumps(r, sort_keys=True) + "\n")
    else:
        raise InvalidInput(f"unknown format {fmt!r}")


def _cell(v):
    if isinstance(v, (list, tuple)):
        return " ".join(map(str, v))
    return v


def rows_text(rows, header):
    buf = io.StringIO()
    write_rows(rows, header, "csv", buf)
    return buf.getvalue()

