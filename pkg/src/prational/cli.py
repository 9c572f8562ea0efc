"""Command line front end: `prational <subcommand> ...`."""

from __future__ import annotations

import argparse
import json
import sys

from .arith import is_prime, primes_up_to
from .errors import ComputationRefused, ConfigError, InvalidInput
from .prat import CompositumField, is_compositum_p_rational, is_p_rational
from .search import (
    SearchConfig,
    density_experiment,
    greenberg_search,
    incomplete_lists,
    scan_all_p_rational,
    scan_incomplete,
    structure_text,
    verify_compositum_table,
    write_rows,
)

EXIT_OK, EXIT_USAGE, EXIT_REFUSED = 0, 1, 2

VERDICT_SCHEMA = {
    "type": "object",
    "required": ["field", "p", "method", "rational", "r", "R", "rk_T", "invariants"],
    "properties": {
        "field": {"type": "string"},
        "p": {"type": "integer"},
        "method": {"enum": ["ray", "p2-classification", "mirror", "regulator", "all-p", "log-test", "compositum"]},
        "rational": {"type": "boolean"},
        "r": {"type": ["integer", "null"]},
        "R": {"type": ["integer", "null"]},
        "rk_T": {"type": ["integer", "null"], "minimum": 0},
        "invariants": {"type": "array", "items": {"type": "integer"}},
        "witness": {"type": "integer"},
        "details": {"type": "object"},
    },
}

SCHEMAS = {
    "verdict": VERDICT_SCHEMA,
    "density": {
        "type": "object",
        "required": ["b", "B", "sign", "N", "N3", "ratio"],
        "properties": {
            "b": {"type": "integer"},
            "B": {"type": "integer"},
            "sign": {"enum": ["real", "imaginary"]},
            "N": {"type": "integer", "minimum": 0},
            "N3": {"type": "integer", "minimum": 0},
            "ratio": {"type": "number", "minimum": 0, "maximum": 1},
        },
    },
    "tuple": {
        "type": "object",
        "required": ["d"],
        "properties": {"d": {"type": "array", "items": {"type": "integer"}}},
    },
    "table_row": {
        "type": "object",
        "required": ["d", "h_mod_9", "h_3", "regulator"],
        "properties": {
            "d": {"type": "integer"},
            "h_mod_9": {"type": "integer", "minimum": 0, "maximum": 8},
            "h_3": {"type": "integer", "minimum": 1},
            "regulator": {"type": "string", "pattern": r"^(X|Mod\([0-2],3\))$"},
        },
    },
    "structure": {
        "type": "object",
        "required": ["structure", "invariants"],
        "properties": {"structure": {"type": "string"}, "invariants": {"type": "array", "items": {"type": "integer"}}},
    },
    "allp": {
        "type": "object",
        "required": ["d"],
        "properties": {"d": {"type": "integer", "maximum": -1}},
    },
    "incomplete": {
        "type": "object",
        "required": ["d", "p", "rk_T", "invariants"],
        "properties": {
            "d": {"type": "integer", "maximum": -1},
            "p": {"type": "integer"},
            "rk_T": {"type": "integer", "minimum": 1},
            "invariants": {"type": "array", "items": {"type": "integer"}},
        },
    },
}


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        sys.stderr.write(f"{self.prog}: error: {message}\n")
        raise SystemExit(EXIT_USAGE)


def _int_list(s):
    try:
        return [int(x) for x in s.split(",") if x.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma separated integers, got {s!r}")


def _prime(s):
    p = int(s)
    if not is_prime(p):
        raise argparse.ArgumentTypeError(f"{s} is not prime")
    return p


def build_parser():
    ap = _Parser(prog="prational", description="p-rationality of quadratic fields and their compositums")
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=["text", "json", "csv"], default="text")
    common.add_argument("--jobs", type=int, default=1, help="worker processes for scans")
    sub = ap.add_subparsers(dest="cmd", required=True, parser_class=_Parser)

    q = sub.add_parser("quad", parents=[common], help="one field, one prime")
    q.add_argument("-d", type=int, required=True)
    q.add_argument("-p", type=_prime, required=True)
    q.add_argument("--method", choices=["ray", "auto", "criterion", "log-test", "regulator"], default="ray")

    qr = sub.add_parser("quad-range", parents=[common], help="one field, every prime in a range")
    qr.add_argument("-d", type=int, required=True)
    qr.add_argument("--p-min", type=int, default=2)
    qr.add_argument("--p-max", type=int, default=100)
    qr.add_argument("--method", choices=["ray", "auto"], default="ray")

    c = sub.add_parser("compositum", parents=[common], help="Q(sqrt d1, ..., sqrt dt) at an odd prime")
    c.add_argument("-d", type=_int_list, required=True)
    c.add_argument("-p", type=_prime, required=True)

    dn = sub.add_parser("density", parents=[common], help="proportion of 3-rational quadratic fields")
    dn.add_argument("--sign", choices=["real", "imag", "imaginary"], default="real")
    dn.add_argument("--min", type=int, default=1)
    dn.add_argument("--max", type=int, required=True)
    dn.add_argument("--restrict", choices=["3mod9", "pool", "3nmid"], default=None)
    dn.add_argument("--method", choices=["mirror", "ray"], default="mirror")

    g = sub.add_parser("greenberg", parents=[common], help="random search for 3-rational compositums")
    g.add_argument("-t", type=int, default=5)
    g.add_argument("--pool-min", type=int, default=1)
    g.add_argument("--pool-max", type=int, default=300)
    g.add_argument("--iters", type=int, default=10**4)
    g.add_argument("--seed", type=int, default=0)
    g.add_argument("--policy", choices=["ramified", "unramified"], default="ramified")

    v = sub.add_parser("verify-table", parents=[common], help="class numbers and regulators of all subfields")
    v.add_argument("-d", type=_int_list, required=True)

    s = sub.add_parser("scan-allp", parents=[common], help="imaginary fields p-rational for all p")
    s.add_argument("--min", type=int, default=1)
    s.add_argument("--max", type=int, required=True)

    si = sub.add_parser("scan-incomplete", parents=[common], help="non-{P}-rational imaginary fields")
    si.add_argument("--d-min", type=int, default=1)
    si.add_argument("--d-max", type=int, required=True)
    si.add_argument("--p-min", type=int, default=2)
    si.add_argument("--p-max", type=int, required=True)
    return ap


def _fix_negative_values(argv):
    """Let `-d -3` and `-d -2,-5,7` through argparse."""
    out = []
    it = iter(range(len(argv)))
    for i in it:
        a = argv[i]
        if a in ("-d", "-p") and i + 1 < len(argv) and argv[i + 1].startswith("-") and argv[i + 1][1:2].isdigit():
            out.append(f"{a}={argv[i + 1]}")
            next(it, None)
        else:
            out.append(a)
    return out


def _emit_json(obj, out):
    out.write(json.dumps(obj, sort_keys=True) + "\n")


def _cmd_quad(a, out):
    v = is_p_rational(a.d, a.p, a.method)
    if a.format == "json":
        _emit_json(v.to_json(), out)
    else:
        out.write(v.text() + "\n")
        _emit_json(v.to_json(), out)


def _cmd_quad_range(a, out):
    primes = [int(p) for p in primes_up_to(a.p_max) if p >= a.p_min]
    rows = [is_p_rational(a.d, p, a.method).to_json() for p in primes]
    if a.format == "csv":
        write_rows(rows, ["p", "method", "rational", "r", "R", "rk_T", "invariants"], "csv", out)
        return
    for p, r in zip(primes, rows):
        if a.format == "text":
            rk = f"rk(T)={r['rk_T']} " if r["rk_T"] is not None else ""
            out.write(f"p={p} {rk}K is {'' if r['rational'] else 'not '}{p}-rational {r['invariants']}\n")
        else:
            _emit_json(r, out)


def _cmd_compositum(a, out):
    v = is_compositum_p_rational(CompositumField(a.d), a.p)
    if a.format != "json":
        tail = f" (witness {v.witness})" if v.witness is not None else ""
        out.write(f"{v.field} is {'' if v.rational else 'not '}{v.p}-rational{tail}\n")
    _emit_json(v.to_json(), out)


def _cmd_density(a, out):
    sign = "real" if a.sign == "real" else "imaginary"
    r = density_experiment(a.min, a.max, sign, a.restrict, a.method, jobs=a.jobs)
    if a.format == "text":
        out.write(f"N3={r.N3}, N={r.N}, N3/N={r.ratio:.5f}\n")
    elif a.format == "csv":
        write_rows([r.to_json()], ["b", "B", "sign", "restrict", "method", "N", "N3", "ratio"], "csv", out)
    else:
        _emit_json(r.to_json(), out)


def _cmd_greenberg(a, out):
    cfg = SearchConfig(a.pool_min, a.pool_max, a.t, a.iters, a.seed, a.policy)
    hits = list(greenberg_search(cfg, jobs=a.jobs))
    if a.format == "csv":
        write_rows([{"d": list(h)} for h in hits], ["d"], "csv", out)
        return
    for h in hits:
        if a.format == "text":
            out.write("[" + ",".join(map(str, h)) + "]\n")
        else:
            _emit_json({"d": list(h)}, out)


def _cmd_verify_table(a, out):
    rows, structure = verify_compositum_table(a.d)
    data = [r.to_json() for r in rows]
    if a.format == "csv":
        write_rows(data, ["d", "h_mod_9", "h_3", "regulator"], "csv", out)
        return
    if a.format == "text":
        out.write(f"{'d':>10} {'h mod 9':>8} {'h_3':>5} {'Regulator':>10}\n")
        for r in rows:
            out.write(f"{r.d:>10} {'Mod(%d,9)' % r.h_mod_9:>8} {r.h_3:>5} {r.regulator_text():>10}\n")
        out.write(f"deduced 3-class group: {structure_text(structure)}\n")
        return
    for r in data:
        _emit_json(r, out)
    _emit_json({"structure": structure_text(structure), "invariants": structure}, out)


def _cmd_scan_allp(a, out):
    found = scan_all_p_rational(a.min, a.max, jobs=a.jobs)
    if a.format == "text":
        out.write("[" + ",".join(map(str, found)) + "]\n")
        out.write(f"{len(found)} fields\n")
    elif a.format == "csv":
        write_rows([{"d": d} for d in found], ["d"], "csv", out)
    else:
        for d in found:
            _emit_json({"d": d}, out)


def _cmd_scan_incomplete(a, out):
    found = scan_incomplete(a.d_max, a.p_max, a.d_min, a.p_min, jobs=a.jobs)
    rows = [{"d": d, "p": p, "rk_T": v.rk_T, "invariants": v.invariants} for d, p, v in found]
    if a.format == "text":
        for p, ds in incomplete_lists(found).items():
            out.write(f"P | {p}: {{" + ",".join(map(str, ds)) + "}\n")
    elif a.format == "csv":
        write_rows(rows, ["d", "p", "rk_T", "invariants"], "csv", out)
    else:
        for r in rows:
            _emit_json(r, out)


COMMANDS = {
    "quad": _cmd_quad,
    "quad-range": _cmd_quad_range,
    "compositum": _cmd_compositum,
    "density": _cmd_density,
    "greenberg": _cmd_greenberg,
    "verify-table": _cmd_verify_table,
    "scan-allp": _cmd_scan_allp,
    "scan-incomplete": _cmd_scan_incomplete,
}


def run(argv=None, out=None):
    """Parse argv and run one subcommand; returns the exit code."""
    out = out or sys.stdout
    argv = list(sys.argv[1:] if argv is None else argv)
    try:
        a = build_parser().parse_args(_fix_negative_values(argv))
    except SystemExit as e:
        return EXIT_OK if e.code in (0, None) else EXIT_USAGE
    try:
        COMMANDS[a.cmd](a, out)
    except (InvalidInput, ConfigError) as e:
        sys.stderr.write(f"prational: error: {e}\n")
        return EXIT_USAGE
    except ComputationRefused as e:
        sys.stderr.write(f"prational: refused: {e}\n")
        return EXIT_REFUSED
    return EXIT_OK


def main():
    sys.exit(run())
