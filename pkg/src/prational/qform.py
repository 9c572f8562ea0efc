"""Binary quadratic forms: reduction, composition, class numbers and class groups.

Forms are written (a, b, c) for ax^2 + bxy + cy^2 with discriminant
D = b^2 - 4ac. For D > 0 all groups here are narrow (form) class groups
unless sense="wide" is asked for explicitly.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from math import gcd, isqrt, lcm, log, pi, sqrt

import numpy as np

from .abelian import build_subgroup, smith_normal_form
from .arith import (
    factor_small,
    is_fundamental_discriminant,
    is_prime,
    kronecker_symbol,
    primes_up_to,
    sqrt_mod_prime,
)
from .errors import ComputationRefused, InvalidInput

ENUM_LIMIT = 10**7
REAL_ENUM_LIMIT = 10**9

__all__ = [
    "BinaryQuadraticForm",
    "FormClassGroup",
    "class_group_structure",
    "class_number",
    "class_number_bsgs",
    "class_number_enum",
    "compose",
    "form_power",
    "inverse",
    "is_reduced",
    "p_rank",
    "prime_form",
    "principal_form",
    "real_cycles",
    "reduce",
    "reduce_with_transform",
    "rho",
]


@dataclass(frozen=True, order=True)
class BinaryQuadraticForm:
    a: int
    b: int
    c: int

    @property
    def D(self):
        return self.b * self.b - 4 * self.a * self.c

    def __call__(self, x, y):
        return self.a * x * x + self.b * x * y + self.c * y * y

    def is_primitive(self):
        return gcd(gcd(self.a, self.b), self.c) == 1

    def transform(self, M):
        """The form f(m00 x + m01 y, m10 x + m11 y)."""
        (p, q), (r, s) = M
        a, b, c = self.a, self.b, self.c
        return BinaryQuadraticForm(
            a * p * p + b * p * r + c * r * r,
            2 * a * p * q + b * (p * s + q * r) + 2 * c * r * s,
            a * q * q + b * q * s + c * s * s,
        )

    def __str__(self):
        return f"({self.a}, {self.b}, {self.c})"


Form = BinaryQuadraticForm


def _mat_mul(M, N):
    (a, b), (c, d) = M
    (e, f), (g, h) = N
    return ((a * e + b * g, a * f + b * h), (c * e + d * g, c * f + d * h))


_ID = ((1, 0), (0, 1))


def _check(f):
    D = f.D
    if not f.is_primitive():
        raise InvalidInput(f"form {f} is not primitive")
    if D >= 0 and isqrt(D) ** 2 == D:
        raise InvalidInput(f"discriminant {D} is a square")
    if D < 0 and f.a <= 0:
        raise InvalidInput(f"form {f} is not positive definite")
    return D


def is_reduced(f):
    a, b, c = f.a, f.b, f.c
    D = f.D
    if D < 0:
        if not (abs(b) <= a <= c):
            return False
        return b >= 0 if (abs(b) == a or a == c) else True
    # 0 < b < sqrt(D) and sqrt(D) - b < 2|a| < sqrt(D) + b
    if not (0 < b and b * b < D):
        return False
    t = 2 * abs(a)
    return (t + b) ** 2 > D and (t - b < 0 or (t - b) ** 2 < D)


def rho(f, s=None):
    """One step of the indefinite reduction operator, with its transform."""
    a, b, c = f.a, f.b, f.c
    D = f.D
    if s is None:
        s = isqrt(D)
    ac = abs(c)
    if c * c > D:
        b2 = (-b) % (2 * ac)
        if b2 > ac:
            b2 -= 2 * ac
    else:
        b2 = s - ((s + b) % (2 * ac))
    k = (b2 + b) // (2 * c)
    g = Form(c, b2, (b2 * b2 - D) // (4 * c))
    return g, ((0, -1), (1, k))


def _reduce_imag(a, b, c, track):
    M = _ID
    while True:
        if not (-a < b <= a):
            # b -> b + 2ak brings b into (-a, a]
            k = (a - b) // (2 * a)
            c = a * k * k + b * k + c
            b = b + 2 * a * k
            if track:
                M = _mat_mul(M, ((1, k), (0, 1)))
        if a > c:
            a, b, c = c, -b, a
            if track:
                M = _mat_mul(M, ((0, -1), (1, 0)))
            continue
        if a == c and b < 0:
            b = -b
            if track:
                M = _mat_mul(M, ((0, -1), (1, 0)))
        return Form(a, b, c), M


def reduce_with_transform(f, track=True):
    """Reduce f; returns (g, M) with g = f∘M and M in SL2(Z)."""
    D = _check(f)
    if D < 0:
        return _reduce_imag(f.a, f.b, f.c, track)
    s = isqrt(D)
    M = _ID
    g = f
    while not is_reduced(g):
        g, R = rho(g, s)
        if track:
            M = _mat_mul(M, R)
    return g, M


def reduce(f):
    return reduce_with_transform(f, track=False)[0]


def principal_form(D):
    t = D % 2
    return reduce(Form(1, t, (t - D) // 4))


def compose_raw(f, g):
    """Dirichlet composition without reduction."""
    a1, b1, c1 = f.a, f.b, f.c
    a2, b2, c2 = g.a, g.b, g.c
    D = f.D
    s = (b1 + b2) // 2
    g1, x, y = _xgcd(a1, a2)
    e, x2, w = _xgcd(g1, s)
    u, v = x2 * x, x2 * y
    A = a1 * a2 // (e * e)
    B = (u * a1 * b2 + v * a2 * b1 + w * (b1 * b2 + D) // 2) // e
    B %= 2 * abs(A)
    return Form(A, B, (B * B - D) // (4 * A))


def _xgcd(a, b):
    """(g, x, y) with g = gcd(a, b) = x*a + y*b, g >= 0."""
    x0, y0, x1, y1 = 1, 0, 0, 1
    while b:
        q, r = divmod(a, b)
        a, b = b, r
        x0, x1 = x1, x0 - q * x1
        y0, y1 = y1, y0 - q * y1
    if a < 0:
        a, x0, y0 = -a, -x0, -y0
    return a, x0, y0


def compose(f, g):
    if f.D != g.D:
        raise InvalidInput(f"discriminants differ: {f.D} vs {g.D}")
    h = compose_raw(f, g)
    if f.b * f.b < 4 * f.a * f.c:
        return _reduce_imag(h.a, h.b, h.c, False)[0]
    return reduce(h)


def inverse(f):
    return reduce(Form(f.a, -f.b, f.c))


def form_power(f, n):
    if n < 0:
        f, n = inverse(f), -n
    result = principal_form(f.D)
    base = reduce(f)
    while n:
        if n & 1:
            result = compose(result, base)
        n >>= 1
        if n:
            base = compose(base, base)
    return result


def prime_form(D, q):
    """A form (q, b, c) of discriminant D, for q prime with (D|q) != -1."""
    if kronecker_symbol(D, q) == -1:
        raise InvalidInput(f"{q} is inert for discriminant {D}")
    if q == 2:
        if D % 8 == 1:
            b = 1
        else:
            b = 0 if (D // 4) % 2 == 0 else 2
    else:
        b = sqrt_mod_prime(D % q, q)
        if (b - D) % 2:
            b = q - b
    return Form(q, b, (b * b - D) // (4 * q))


# ---------------------------------------------------------------- enumeration

@lru_cache(maxsize=4)
def _triangle(amax):
    # all pairs 0 <= b <= a <= amax, sorted by a
    A = np.repeat(np.arange(1, amax + 1, dtype=np.int64), np.arange(2, amax + 2))
    starts = np.repeat(np.cumsum(np.arange(2, amax + 2)) - np.arange(2, amax + 2), np.arange(2, amax + 2))
    B = np.arange(A.size, dtype=np.int64) - starts
    return A, B


def _imag_reduced_arrays(D):
    amax = isqrt(-D // 3)
    size = 1 << max(6, amax.bit_length())
    A, B = _triangle(size)
    n = np.searchsorted(A, amax, side="right")
    A, B = A[:n], B[:n]
    num = B * B - D
    ok = num % (4 * A) == 0
    A, B, num = A[ok], B[ok], num[ok]
    C = num // (4 * A)
    ok = C >= A
    return A[ok], B[ok], C[ok]


def _imag_class_number_enum(D):
    A, B, C = _imag_reduced_arrays(D)
    single = (B == 0) | (B == A) | (C == A)
    return int(np.count_nonzero(single) + 2 * np.count_nonzero(~single))


def _imag_reduced_forms(D):
    A, B, C = _imag_reduced_arrays(D)
    out = []
    for a, b, c in zip(A.tolist(), B.tolist(), C.tolist()):
        out.append(Form(a, b, c))
        if b != 0 and b != a and c != a:
            out.append(Form(a, -b, c))
    return sorted(out)


class RealCycles:
    """All reduced forms of a positive discriminant, grouped into cycles."""

    def __init__(self, D):
        self.D = D
        s = isqrt(D)
        b = np.arange(1, s + 1, dtype=np.int64)
        b = b[(b - D) % 2 == 0]
        # 2a ranges over (s - b, s + b], i.e. a in [lo, hi]
        lo = (s - b) // 2 + 1
        hi = (s + b) // 2
        cnt = np.maximum(hi - lo + 1, 0)
        total = int(cnt.sum())
        Bs = np.repeat(b, cnt)
        offs = np.arange(total, dtype=np.int64) - np.repeat(np.cumsum(cnt) - cnt, cnt)
        As = np.repeat(lo, cnt) + offs
        N = (D - Bs * Bs) // 4
        ok = N % As == 0
        As, Bs, N = As[ok], Bs[ok], N[ok]
        Cs = N // As
        a = np.concatenate([As, -As])
        bb = np.concatenate([Bs, Bs])
        c = np.concatenate([-Cs, Cs])
        # the image under rho: (c, b', ...) with b' = s - ((s + b) mod 2|c|)
        b2 = s - ((s + bb) % (2 * np.abs(c)))
        span = 2 * s + 3
        keys = (a + s + 1) * span + bb
        order = np.argsort(keys)
        a, bb, c, b2, keys = a[order], bb[order], c[order], b2[order], keys[order]
        img = (c + s + 1) * span + b2
        perm = np.searchsorted(keys, img)
        lab = np.arange(keys.size)
        P = perm.copy()
        steps = 1
        while steps < keys.size:
            lab = np.minimum(lab, lab[P])
            P = P[P]
            steps *= 2
        # one more pass so every label is the cycle minimum
        lab = np.minimum(lab, lab[P])
        self.a, self.b, self.c = a, bb, c
        self.keys = keys
        self.span = span
        self.s = s
        self.lab = lab
        self.num_cycles = int(np.count_nonzero(lab == np.arange(keys.size)))
        self._index = None

    def cycle_of(self, f):
        """Label of the cycle containing the reduced form f."""
        key = (f.a + self.s + 1) * self.span + f.b
        i = int(np.searchsorted(self.keys, key))
        if i >= self.keys.size or int(self.keys[i]) != key:
            raise InvalidInput(f"{f} is not a reduced form of discriminant {self.D}")
        return int(self.lab[i])

    def representative(self, label):
        return Form(int(self.a[label]), int(self.b[label]), int(self.c[label]))

    def unit_forms(self):
        """Cycle labels of the reduced forms with leading coefficient 1 and -1."""
        pos = np.flatnonzero(self.a == 1)
        neg = np.flatnonzero(self.a == -1)
        return int(self.lab[pos[0]]), int(self.lab[neg[0]])

    def norm_minus_one(self):
        """True when the forms representing 1 and -1 share a cycle."""
        p, n = self.unit_forms()
        return p == n


@lru_cache(maxsize=256)
def real_cycles(D):
    if D > REAL_ENUM_LIMIT:
        raise ComputationRefused(f"reduced-form enumeration refused for D = {D}")
    return RealCycles(D)


def _check_fundamental(D):
    if not is_fundamental_discriminant(D):
        raise InvalidInput(f"{D} is not a fundamental discriminant")


def class_number_enum(D):
    """Class number by enumerating reduced forms (narrow for D > 0)."""
    _check_fundamental(D)
    if D < 0:
        return _imag_class_number_enum(D)
    return real_cycles(D).num_cycles


# ------------------------------------------------------------------- BSGS


def _num_prime_factors(D):
    return len(factor_small(D))


@lru_cache(maxsize=4)
def _euler_primes(P):
    return primes_up_to(P)[1:]


def _legendre_vec(D, ps):
    """(D|p) for an array of odd primes p < 2^31, by Euler's criterion."""
    base = np.mod(D, ps)
    e = (ps - 1) // 2
    out = np.ones_like(ps)
    while np.any(e):
        odd = (e & 1).astype(bool)
        out = np.where(odd, out * base % ps, out)
        base = base * base % ps
        e >>= 1
    return np.where(out == ps - 1, -1, out)


def _analytic_estimate(D, P=None):
    """Truncated Euler product estimate of h(D) for D < -4."""
    if P is None:
        P = 1 << min(17, max(10, (4 * isqrt(isqrt(-D))).bit_length()))
    ps = _euler_primes(P)
    k = _legendre_vec(D, ps)
    logs = np.log(ps / (ps - k.astype(np.float64)))
    two = kronecker_symbol(D, 2)
    return sqrt(-D) / pi * 2 / (2 - two) * float(np.exp(logs.sum()))


def _exact_order(g, N, one):
    for q in factor_small(N):
        while N % q == 0 and form_power(g, N // q) == one:
            N //= q
    return N


def _order_in_interval(g, lo, hi, one):
    """Order of g, searched among divisors of the multiples in [lo, hi]."""
    m = isqrt(hi - lo) + 1
    baby = {}
    x = one
    for j in range(m + 1):
        if j and x == one:
            return j
        baby.setdefault(x, j)
        x = compose(x, g)
    step = form_power(g, m)
    x = form_power(g, lo)
    i = 0
    while lo + i * m - m <= hi:
        j = baby.get(x)
        if j is not None and lo + i * m - j > 0:
            return _exact_order(g, lo + i * m - j, one)
        x = compose(x, step)
        i += 1
    return None


def class_number_bsgs(D, delta=0.25, min_elements=3):
    """Class number of an imaginary discriminant by baby-step/giant-step.

    Works in the subgroup of squares: its order is h / 2^(t-1) by genus
    theory (t = number of prime divisors of D). The search interval comes
    from a truncated Euler product; a miss widens the interval.
    """
    _check_fundamental(D)
    if D > 0:
        raise ComputationRefused("baby-step/giant-step is implemented for D < 0 only")
    if D in (-3, -4):
        return 1
    genus = 1 << (_num_prime_factors(D) - 1)
    est = _analytic_estimate(D) / genus
    one = principal_form(D)
    for _ in range(6):
        lo = max(1, int(est * (1 - delta)))
        hi = int(est * (1 + delta)) + 2
        L, used, missed = 1, 0, False
        q = 2
        candidates = 0
        while candidates < 60:
            q += 1 if q == 2 else 2
            if kronecker_symbol(D, q) != 1 or not is_prime(q):
                continue
            candidates += 1
            g = compose(prime_form(D, q), prime_form(D, q))
            o = _order_in_interval(g, lo, hi, one)
            if o is None:
                missed = True
                break
            L = lcm(L, o)
            used += 1
            first = -(-lo // L) * L
            if used >= min_elements and first <= hi and first + L > hi:
                return genus * first
        if missed or L > hi:
            delta *= 2
            continue
        # small exponent: the interval holds several multiples of L
        return genus * _subgroup_order_squares(D, one)
    raise ComputationRefused(f"class number search did not settle for D = {D}")


def _bach_bound(D):
    return int(6 * log(abs(D)) ** 2) + 1


def _subgroup_order_squares(D, one):
    """Order of the square classes, from prime forms up to the Bach bound."""
    cands = []
    for q in primes_up_to(_bach_bound(D)).tolist():
        if kronecker_symbol(D, q) == 1:
            f = prime_form(D, q)
            cands.append(compose(f, f))
    _, _, table = build_subgroup(cands, compose, one, limit=10**7)
    return len(table)


@lru_cache(maxsize=None)
def class_number(D):
    """h(D) for a fundamental discriminant; the narrow class number if D > 0."""
    _check_fundamental(D)
    if D < 0 and -D > ENUM_LIMIT:
        return class_number_bsgs(D)
    return class_number_enum(D)


# ------------------------------------------------------------- class groups


@dataclass(frozen=True)
class FormClassGroup:
    D: int
    sense: str
    h: int
    invariants: tuple
    generators: tuple

    def to_json(self):
        return {
            "D": self.D,
            "sense": self.sense,
            "h": self.h,
            "invariants": list(self.invariants),
            "generators": [[g.a, g.b, g.c] for g in self.generators],
        }


def p_rank(G, p):
    inv = G.invariants if isinstance(G, FormClassGroup) else G
    return sum(1 for n in inv if n % p == 0)


def _split_primes(D):
    q = 2
    while True:
        if kronecker_symbol(D, q) == 1:
            yield q
        q = 3 if q == 2 else q + 2
        while not is_prime(q):
            q += 2


class _ClassArith:
    """Canonical class representatives and multiplication for one D."""

    def __init__(self, D):
        self.D = D
        if D < 0:
            self.one = principal_form(D)
        else:
            self.cycles = real_cycles(D)
            self.one = self.canon(principal_form(D))

    def canon(self, f):
        if self.D < 0:
            return reduce(f)
        return self.cycles.representative(self.cycles.cycle_of(reduce(f)))

    def mul(self, f, g):
        return self.canon(compose_raw(f, g))


@lru_cache(maxsize=1024)
def _narrow_group(D):
    h = class_number(D)
    ar = _ClassArith(D)
    cands = (ar.canon(prime_form(D, q)) for q in _split_primes(D))
    gens, rows, _ = build_subgroup(cands, ar.mul, ar.one, target=h)
    return ar, gens, rows, h


def _smith_basis(ar, gens, rows):
    """Invariants and generator forms of the group presented by rows."""
    if not gens:
        return (), ()
    diag, _, _, Vi = smith_normal_form(rows, transforms=True)
    invs, basis = [], []
    for j, d in enumerate(diag):
        if d == 1:
            continue
        g = ar.one
        for k, e in enumerate(Vi[j]):
            if e:
                g = ar.mul(g, ar.canon(form_power(gens[k], e)))
        invs.append(d)
        basis.append(g)
    return tuple(invs), tuple(basis)


@lru_cache(maxsize=1024)
def class_group_structure(D, sense="narrow"):
    """Invariant factors and generators of the form class group of D.

    sense="wide" (D > 0) quotients the narrow group by the class of the
    reduced form representing -1.
    """
    if sense not in ("narrow", "wide"):
        raise InvalidInput(f"unknown sense {sense!r}")
    ar, gens, rows, h = _narrow_group(D)
    if sense == "wide" and D > 0 and not ar.cycles.norm_minus_one():
        _, neg = ar.cycles.unit_forms()
        minus = ar.cycles.representative(neg)
        # express the class of -1 in the chosen generators
        _, _, table = build_subgroup(gens, ar.mul, ar.one)
        vec = table[minus]
        rows = [list(r) for r in rows] + [list(vec)]
        h //= 2
    invs, basis = _smith_basis(ar, gens, rows)
    return FormClassGroup(D, sense if D > 0 else "narrow", h, invs, basis)


def wide_class_number(D):
    if D < 0:
        return class_number(D)
    h = class_number(D)
    return h if real_cycles(D).norm_minus_one() else h // 2
