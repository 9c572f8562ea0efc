"""Deciding p-rationality of quadratic fields and multiquadratic compositums.

Several independent routes are provided: the ray class group rank (the
reference), the closed-form list for p = 2, the mirror-field criterion for
p = 3, the norm test on the fundamental unit, the 6h shortcut for
imaginary fields and the p-adic logarithm test on class generators.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations

from .arith import (
    coredisc,
    factor_small,
    is_prime,
    is_squarefree,
    kronecker_symbol,
    padic_valuation,
    squarefree_product,
)
from .errors import ComputationRefused, InvalidInput
from .padic import log_rank_test
from .qform import class_number
from .quadfield import QuadraticField, fundamental_unit_mod, is_principal_with_generator
from .rayclass import class_group_basis, ray_class_group

__all__ = [
    "CompositumField",
    "PRationalityVerdict",
    "RegulatorTest",
    "greenberg_admissible",
    "is_2_rational_quadratic",
    "is_3_rational_quadratic",
    "is_P_rational",
    "is_compositum_p_rational",
    "is_p_rational",
    "is_p_rational_imaginary_all_p",
    "is_p_rational_log",
    "is_p_rational_ray",
    "mirror_discriminant",
    "regulator_norm_test",
    "w_trivial",
]

METHODS = ("ray", "p2-classification", "mirror", "regulator", "all-p", "log-test", "compositum")


def n0(p):
    return 3 if p == 2 else 2


def field_name(ds):
    if isinstance(ds, int):
        ds = [ds]
    return "Q(" + ", ".join(f"sqrt({d})" for d in ds) + ")"


@dataclass
class PRationalityVerdict:
    field: str
    p: int
    method: str
    rational: bool
    r: int | None = None
    R: int | None = None
    rk_T: int | None = None
    invariants: list = field(default_factory=list)
    witness: int | None = None
    details: dict = field(default_factory=dict)

    def __bool__(self):
        return self.rational

    def text(self):
        head = f"rk(T)={self.rk_T} " if self.rk_T is not None else ""
        verb = "is" if self.rational else "is not"
        return f"{head}K {verb} {self.p}-rational"

    def to_json(self):
        out = {
            "field": self.field,
            "p": self.p,
            "method": self.method,
            "rational": self.rational,
            "r": self.r,
            "R": self.R,
            "rk_T": self.rk_T,
            "invariants": list(self.invariants),
        }
        if self.witness is not None:
            out["witness"] = self.witness
        if self.details:
            out["details"] = self.details
        return out


def _check_d(d):
    d = int(d)
    if d == 1 or d == 0 or not is_squarefree(d):
        raise InvalidInput(f"d = {d} is not a squarefree integer other than 0, 1")
    return d


def _check_p(p):
    if not is_prime(p):
        raise InvalidInput(f"{p} is not prime")
    return int(p)


# ------------------------------------------------------------------ ray


def is_p_rational_ray(d, p):
    """Compare the p-rank of the ray class group mod p^n0 with r2 + 1."""
    d, p = _check_d(d), _check_p(p)
    G = ray_class_group(d, p, n0(p))
    R = G.p_rank()
    r = G.K.r
    if R < r:
        raise AssertionError(f"p-rank {R} below the Z_p-rank {r}")
    return PRationalityVerdict(
        field_name(d), p, "ray", R == r, r=r, R=R, rk_T=R - r,
        invariants=G.p_part(), details={"modulus": G.modulus_text()},
    )


# -------------------------------------------------------------- criteria


def is_2_rational_quadratic(d):
    d = _check_d(d)
    if d in (-1, 2, -2):
        return True
    ell = abs(d) // 2 if d % 2 == 0 else abs(d)
    return is_prime(ell) and ell % 8 in (3, 5)


def w_trivial(d, p):
    """Local roots of unity condition, decided by congruences."""
    if p == 3:
        return d % 9 != 6
    # p = 2 is folded into the closed-form list; p > 3 has no room for mu_p
    return True


def mirror_discriminant(d):
    """Discriminant of Q(sqrt(-3^(1-2v) d)) with v = v_3(d)."""
    v = padic_valuation(d, 3)
    n = -3 * d if v == 0 else -(d // 3)
    return coredisc(n)


def is_3_rational_quadratic(d):
    d = _check_d(d)
    if d == -3:
        return True
    if d % 9 == 6:
        return False
    return class_number(mirror_discriminant(d)) % 3 != 0


@dataclass(frozen=True)
class RegulatorTest:
    d: int
    p: int
    q: int
    m0: int
    residue: int

    @property
    def status(self):
        return "regulator-unit" if self.residue else "regulator-divisible"

    @property
    def is_unit(self):
        return self.residue != 0


def regulator_norm_test(d, p):
    """Valuation of N(eps^q - 1) against its baseline p^m0; reports the class mod p."""
    d, p = _check_d(d), _check_p(p)
    if d < 2:
        raise InvalidInput("the norm test needs a real field")
    if p == 2:
        raise InvalidInput("the norm test is for odd p")
    K = QuadraticField(d)
    k = kronecker_symbol(K.D, p)
    q = p * p - 1 if k == -1 else p - 1
    m0 = 1 if k == 0 else 2
    M = p ** (m0 + 1)
    eps = fundamental_unit_mod(d, p, m0 + 1)
    x, y = K.pow_coords(eps, q, M)
    N = K.norm_coords(((x - 1) % M, y)) % M
    if N % p**m0:
        raise AssertionError("eps^q - 1 below its baseline valuation")
    return RegulatorTest(d, p, q, m0, N // p**m0)


# ---------------------------------------------------------- imaginary


def is_p_rational_imaginary_all_p(dd):
    """p-rationality of Q(sqrt(-dd)) for every prime p at once."""
    dd = int(dd)
    if dd < 1:
        raise InvalidInput("dd must be a positive squarefree integer")
    d = _check_d(-dd)
    h = class_number(QuadraticField(d).D)
    return all(is_p_rational_ray(d, q).rational for q in sorted(factor_small(6 * h)))


def _p_sylow_generators(K, p):
    return [(I, n) for I, n in class_group_basis(K, p) if n % p == 0]


def is_p_rational_log(d, p):
    """Log test: the p-Sylow of the class group must inject into the logs.

    For each Smith generator I of order n divisible by p, I^n = (alpha);
    the field is p-rational iff the reduced logs of these alphas are
    independent mod p. Imaginary fields only.
    """
    d, p = _check_d(d), _check_p(p)
    K = QuadraticField(d)
    if K.is_real:
        raise InvalidInput("the log test is for imaginary fields")
    gens = _p_sylow_generators(K, p)
    if not gens:
        log_rank_test(K, p, [])  # regime checks only
        return PRationalityVerdict(field_name(d), p, "log-test", True, r=K.r, R=K.r, rk_T=0)
    alphas = [is_principal_with_generator(I ** n) for I, n in gens]
    rank = log_rank_test(K, p, alphas)
    missing = len(alphas) - rank
    return PRationalityVerdict(
        field_name(d), p, "log-test", missing == 0, r=K.r, R=K.r + missing, rk_T=missing,
        details={"class_invariants": [n for _, n in gens], "log_rank": rank},
    )


def is_P_rational(d, p):
    """{P}-rationality for one prime P above p of the imaginary field Q(sqrt d).

    Accepts p with kronecker(d, p) = 1. When p splits, the rank of the ray
    class group mod P^n0 is compared with 1. When P is the only prime above
    p the support is all of p, and the verdict is the complete one.
    """
    d, p = _check_d(d), _check_p(p)
    if d > 0:
        raise InvalidInput("single-prime rationality is implemented for imaginary fields")
    if kronecker_symbol(d, p) != 1:
        raise ComputationRefused(f"unsupported-support: {p} does not split in Q(sqrt({d}))")
    K = QuadraticField(d)
    if kronecker_symbol(K.D, p) != 1:
        v = is_p_rational_ray(d, p)
        v.details["support"] = "P is the only prime above p"
        return v
    G = ray_class_group(K, p, n0(p), single=True)
    R = G.p_rank()
    return PRationalityVerdict(
        field_name(d), p, "ray", R == 1, r=1, R=R, rk_T=R - 1,
        invariants=G.p_part(), details={"modulus": G.modulus_text()},
    )


# --------------------------------------------------------------- auto


def is_p_rational(d, p, method="auto"):
    """Verdict by the requested method; "auto" picks the fastest sound one."""
    d, p = _check_d(d), _check_p(p)
    if method == "ray":
        return is_p_rational_ray(d, p)
    if method == "log-test":
        return is_p_rational_log(d, p)
    if method == "regulator":
        t = regulator_norm_test(d, p)
        ok = w_trivial(d, p) and t.is_unit and class_number(QuadraticField(d).D) % p != 0
        return PRationalityVerdict(field_name(d), p, "regulator", ok, details={"residue": t.residue})
    if method not in ("auto", "criterion"):
        raise InvalidInput(f"unknown method {method!r}")
    if p == 2:
        return PRationalityVerdict(field_name(d), 2, "p2-classification", is_2_rational_quadratic(d))
    if p == 3:
        return PRationalityVerdict(field_name(d), 3, "mirror", is_3_rational_quadratic(d))
    if d < 0:
        h = class_number(QuadraticField(d).D)
        if h % p:
            return PRationalityVerdict(field_name(d), p, "all-p", True, details={"h": h})
        return is_p_rational_ray(d, p)
    v = is_p_rational_ray(d, p)
    t = regulator_norm_test(d, p)
    v.details["regulator"] = t.status
    return v


# ----------------------------------------------------------- compositum


class CompositumField:
    """Q(sqrt d1, ..., sqrt dt) through its 2^t - 1 quadratic subfields."""

    def __init__(self, d_list):
        ds = [int(d) for d in d_list]
        if not ds:
            raise InvalidInput("empty list of radicands")
        for d in ds:
            _check_d(d)
        self.d_list = ds
        t = len(ds)
        subs = []
        # the last radicand varies fastest, as in the nested loops of the tables
        for mask in range(1, 2**t):
            core = 1
            for i in range(t):
                if mask >> (t - 1 - i) & 1:
                    core = squarefree_product(core, ds[i])
            if core == 1:
                subset = [ds[i] for i in range(t) if mask >> (t - 1 - i) & 1]
                raise InvalidInput(f"radicands are dependent: product of {subset} is a square")
            subs.append((mask, core))
        self.masks = [m for m, _ in subs]
        self.subfields = [c for _, c in subs]

    @property
    def t(self):
        return len(self.d_list)

    def __repr__(self):
        return field_name(self.d_list)

    def exponents(self, mask):
        return [mask >> (self.t - 1 - i) & 1 for i in range(self.t)]


def is_compositum_p_rational(C, p):
    if not isinstance(C, CompositumField):
        C = CompositumField(C)
    p = _check_p(p)
    if p == 2:
        raise ComputationRefused("the reduction to quadratic subfields needs p > 2")
    failing = []
    for d in C.subfields:
        ok = is_3_rational_quadratic(d) if p == 3 else is_p_rational(d, p).rational
        if not ok:
            failing.append(d)
    witness = min(failing, key=lambda x: (abs(x), x)) if failing else None
    return PRationalityVerdict(
        repr(C), p, "compositum", not failing, witness=witness,
        details={"subfields": len(C.subfields), "failing": len(failing)},
    )


def greenberg_admissible(d, ramified_slot):
    d = int(d)
    if d == 0 or not is_squarefree(d):
        return False
    return d % 3 == 1 or (bool(ramified_slot) and d % 9 == 3)


def independent(ds):
    """True iff no nonempty subset product of ds is a square."""
    for k in range(1, len(ds) + 1):
        for sub in combinations(ds, k):
            core = 1
            for x in sub:
                core = squarefree_product(core, x)
            if core == 1:
                return False
    return True
