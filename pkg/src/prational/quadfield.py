"""Quadratic fields Q(sqrt d): elements, ideals, splitting, units.

Elements are stored as x + y*w with w = (1+sqrt d)/2 when d = 1 (mod 4)
and w = sqrt d otherwise, so w^2 = t*w - n with (t, n) = (1, (1-d)/4) or
(0, -d) and N(x + y*w) = x^2 + t*x*y + n*y^2.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from math import gcd, isqrt

import mpmath

from .arith import (
    fundamental_discriminant,
    hensel_root,
    is_prime,
    kronecker_symbol,
    squarefree_core,
)
from .errors import InvalidInput, NotPrincipal
from .qform import BinaryQuadraticForm, reduce_with_transform, rho

__all__ = [
    "FundamentalUnit",
    "QuadraticField",
    "QuadraticIdeal",
    "QuadraticInteger",
    "SplittingInfo",
    "fundamental_unit",
    "fundamental_unit_mod",
    "ideal_product",
    "is_principal_with_generator",
    "splitting_type",
]


class QuadraticField:
    def __init__(self, d):
        d = int(d)
        if d == 0 or d == 1:
            raise InvalidInput(f"d = {d} does not define a quadratic field")
        core, f = squarefree_core(d)
        if f != 1:
            raise InvalidInput(f"d = {d} is not squarefree")
        self.d = d
        self.D = fundamental_discriminant(d)
        if d % 4 == 1:
            self.t, self.n = 1, (1 - d) // 4
        else:
            self.t, self.n = 0, -d
        self.is_real = d > 0
        self.r2 = 0 if self.is_real else 1
        self.r = self.r2 + 1

    @property
    def signature(self):
        return "real" if self.is_real else "imaginary"

    def __eq__(self, other):
        return isinstance(other, QuadraticField) and other.d == self.d

    def __hash__(self):
        return hash(("QuadraticField", self.d))

    def __repr__(self):
        return f"QuadraticField({self.d})"

    def basis_text(self):
        return "w=(1+sqrt(d))/2" if self.t else "w=sqrt(d)"

    def __call__(self, x, y=0):
        return QuadraticInteger(self, x, y)

    @property
    def omega(self):
        return QuadraticInteger(self, 0, 1)

    @property
    def sqrt_d(self):
        return QuadraticInteger(self, -1, 2) if self.t else QuadraticInteger(self, 0, 1)

    def from_half(self, u, v):
        """The element (u + v*sqrt d)/2."""
        if self.t:
            if (u - v) % 2:
                raise InvalidInput("(u + v sqrt d)/2 is not integral")
            return QuadraticInteger(self, (u - v) // 2, v)
        if u % 2 or v % 2:
            raise InvalidInput("(u + v sqrt d)/2 is not integral")
        return QuadraticInteger(self, u // 2, v // 2)

    def mul_coords(self, u, v, M=None):
        """Product of coordinate pairs, optionally reduced mod M."""
        x1, y1 = u
        x2, y2 = v
        yy = y1 * y2
        x = x1 * x2 - self.n * yy
        y = x1 * y2 + x2 * y1 + self.t * yy
        if M is not None:
            return x % M, y % M
        return x, y

    def pow_coords(self, u, e, M):
        result = (1 % M, 0)
        base = (u[0] % M, u[1] % M)
        while e:
            if e & 1:
                result = self.mul_coords(result, base, M)
            e >>= 1
            if e:
                base = self.mul_coords(base, base, M)
        return result

    def norm_coords(self, u):
        x, y = u
        return x * x + self.t * x * y + self.n * y * y

    def conj_coords(self, u):
        x, y = u
        return x + self.t * y, -y

    def units(self):
        """Roots of unity of K as elements."""
        if self.d == -1:
            return [self(1), self(0, 1), self(-1), self(0, -1)]
        if self.d == -3:
            z = self(0, 1)  # (1 + sqrt -3)/2 is a primitive 6th root of unity
            return [z**k for k in range(6)]
        return [self(1), self(-1)]


@dataclass(frozen=True)
class QuadraticInteger:
    K: QuadraticField
    x: int
    y: int

    def _coerce(self, o):
        if isinstance(o, QuadraticInteger):
            return o
        return QuadraticInteger(self.K, int(o), 0)

    def __add__(self, o):
        o = self._coerce(o)
        return QuadraticInteger(self.K, self.x + o.x, self.y + o.y)

    __radd__ = __add__

    def __neg__(self):
        return QuadraticInteger(self.K, -self.x, -self.y)

    def __sub__(self, o):
        return self + (-self._coerce(o))

    def __rsub__(self, o):
        return self._coerce(o) - self

    def __mul__(self, o):
        o = self._coerce(o)
        x, y = self.K.mul_coords((self.x, self.y), (o.x, o.y))
        return QuadraticInteger(self.K, x, y)

    __rmul__ = __mul__

    def __pow__(self, e):
        if e < 0:
            N = self.norm()
            if N not in (1, -1):
                raise InvalidInput("negative power of a non-unit")
            return (self.conj() * N) ** (-e)
        result = QuadraticInteger(self.K, 1, 0)
        base = self
        while e:
            if e & 1:
                result = result * base
            e >>= 1
            if e:
                base = base * base
        return result

    def conj(self):
        x, y = self.K.conj_coords((self.x, self.y))
        return QuadraticInteger(self.K, x, y)

    def norm(self):
        return self.K.norm_coords((self.x, self.y))

    def trace(self):
        return 2 * self.x + self.K.t * self.y

    def coords(self):
        return self.x, self.y

    def mod(self, M):
        return QuadraticInteger(self.K, self.x % M, self.y % M)

    def exact_div(self, o):
        o = self._coerce(o)
        N = o.norm()
        num = self * o.conj()
        if num.x % N or num.y % N:
            raise InvalidInput(f"{self} is not divisible by {o}")
        return QuadraticInteger(self.K, num.x // N, num.y // N)

    def half_form(self):
        """(u, v) with self = (u + v sqrt d)/2."""
        if self.K.t:
            return 2 * self.x + self.y, self.y
        return 2 * self.x, 2 * self.y

    def real_value(self, dps=50):
        """Value under the embedding with sqrt d > 0 (real fields)."""
        with mpmath.workdps(dps):
            u, v = self.half_form()
            return (mpmath.mpf(u) + mpmath.mpf(v) * mpmath.sqrt(self.K.d)) / 2

    def __str__(self):
        return f"{self.x}+{self.y}*w (d={self.K.d}, {self.K.basis_text()})"


def _hnf2(vectors):
    """Basis {(A, 0), (B, C)} of the Z-lattice spanned by integer pairs."""
    A, B, C = 0, 0, 0
    for x, y in vectors:
        if y == 0:
            A = gcd(A, x)
            continue
        if C == 0:
            B, C = x, y
            continue
        g, u, w = _xgcd(C, y)
        nb = u * B + w * x
        # the combination with vanishing second coordinate
        A = gcd(A, (y // g) * B - (C // g) * x)
        B, C = nb, g
    if C < 0:
        B, C = -B, -C
    if A == 0 or C == 0:
        raise InvalidInput("elements do not span a full lattice")
    return A, B % A, C


def _xgcd(a, b):
    x0, y0, x1, y1 = 1, 0, 0, 1
    while b:
        q, r = divmod(a, b)
        a, b = b, r
        x0, x1 = x1, x0 - q * x1
        y0, y1 = y1, y0 - q * y1
    if a < 0:
        a, x0, y0 = -a, -x0, -y0
    return a, x0, y0


class QuadraticIdeal:
    """The ideal s*(aZ + (b + w)Z) with a | N(b + w) and 0 <= b < a."""

    def __init__(self, K, a, b, s=1):
        if a <= 0 or s <= 0:
            raise InvalidInput("ideal data must be positive")
        b %= a
        if K.norm_coords((b, 1)) % a:
            raise InvalidInput(f"[{a}, {b}+w] is not an ideal of {K}")
        self.K, self.a, self.b, self.s = K, a, b, s

    @classmethod
    def from_generators(cls, K, elems):
        vecs = []
        for e in elems:
            x, y = e.coords() if isinstance(e, QuadraticInteger) else e
            vecs.append((x, y))
            # closure under multiplication by w
            vecs.append(K.mul_coords((x, y), (0, 1)))
        A, B, C = _hnf2(vecs)
        if A % C or B % C:
            raise InvalidInput("generators do not span an ideal")
        return cls(K, A // C, B // C, C)

    @classmethod
    def principal(cls, K, alpha):
        return cls.from_generators(K, [alpha])

    @classmethod
    def unit(cls, K):
        return cls(K, 1, 0, 1)

    @classmethod
    def from_form(cls, K, f):
        if f.a <= 0:
            raise InvalidInput("form must have a > 0")
        return cls(K, f.a, (f.b - K.t) // 2)

    def basis(self):
        s = self.s
        return [QuadraticInteger(self.K, s * self.a, 0), QuadraticInteger(self.K, s * self.b, s)]

    def norm(self):
        return self.s * self.s * self.a

    def is_primitive(self):
        return self.s == 1

    def conj(self):
        return QuadraticIdeal(self.K, self.a, -self.b - self.K.t, self.s)

    def to_form(self):
        K = self.K
        return BinaryQuadraticForm(self.a, 2 * self.b + K.t, K.norm_coords((self.b, 1)) // self.a)

    def contains(self, alpha):
        x, y = alpha.coords() if isinstance(alpha, QuadraticInteger) else alpha
        s = self.s
        if x % s or y % s:
            return False
        x, y = x // s, y // s
        return (x - y * self.b) % self.a == 0

    def __mul__(self, other):
        return ideal_product(self, other)

    def __pow__(self, e):
        if e < 0:
            raise InvalidInput("negative ideal powers are not supported")
        result = QuadraticIdeal.unit(self.K)
        base = self
        while e:
            if e & 1:
                result = result * base
            e >>= 1
            if e:
                base = base * base
        return result

    def __eq__(self, other):
        return (
            isinstance(other, QuadraticIdeal)
            and self.K == other.K
            and (self.a, self.b, self.s) == (other.a, other.b, other.s)
        )

    def __hash__(self):
        return hash((self.K.d, self.a, self.b, self.s))

    def __repr__(self):
        if self.s == 1:
            return f"[{self.a}, {self.b}+w]"
        return f"{self.s}*[{self.a}, {self.b}+w]"


def ideal_product(I, J):
    K = I.K
    if J.K != K:
        raise InvalidInput("ideals live in different fields")
    pa, pb = (I.a, 0), (I.b, 1)
    qa, qb = (J.a, 0), (J.b, 1)
    prods = [K.mul_coords(u, v) for u in (pa, pb) for v in (qa, qb)]
    A, B, C = _hnf2(prods)
    if A % C or B % C:
        raise InvalidInput("ideal product failed to normalize")
    return QuadraticIdeal(K, A // C, B // C, C * I.s * J.s)


@dataclass(frozen=True)
class SplittingInfo:
    kind: str
    primes: tuple
    e: int
    f: int


def splitting_type(K, p):
    if not is_prime(p):
        raise InvalidInput(f"{p} is not prime")
    k = kronecker_symbol(K.D, p)
    if k == -1:
        return SplittingInfo("inert", (QuadraticIdeal(K, 1, 0, p),), 1, 2)
    roots = _omega_roots_mod_p(K, p)
    if k == 1:
        P1 = QuadraticIdeal(K, p, -roots[0])
        P2 = QuadraticIdeal(K, p, -roots[1])
        return SplittingInfo("split", (P1, P2), 1, 1)
    return SplittingInfo("ramified", (QuadraticIdeal(K, p, -roots[0]),), 2, 1)


def _omega_roots_mod_p(K, p):
    """Roots r of X^2 - tX + n mod p, sorted; w - r lies in a prime above p."""
    return sorted(r for r in range(p) if (r * r - K.t * r + K.n) % p == 0) if p < 64 else _roots_large(K, p)


def _roots_large(K, p):
    from .arith import sqrt_mod_prime

    if p == 2:
        return sorted(r for r in range(2) if (r * r - K.t * r + K.n) % 2 == 0)
    # X = (t + sqrt(t^2 - 4n))/2 and t^2 - 4n = D/(4 or 1)
    disc = K.t * K.t - 4 * K.n
    s = sqrt_mod_prime(disc % p, p)
    inv2 = pow(2, -1, p)
    return sorted({(K.t + s) * inv2 % p, (K.t - s) * inv2 % p})


def omega_root_mod(K, p, k, which=0):
    """Root of X^2 - tX + n modulo p^k lifted from the which-th root mod p (split p)."""
    roots = _omega_roots_mod_p(K, p)
    if len(roots) != 2:
        raise InvalidInput(f"{p} does not split in {K}")
    return hensel_root(-K.t, K.n, p, k, roots[which])


# ------------------------------------------------------------ principality


def _walk_to_unit_form(f, M, bound):
    """Follow the rho-cycle of the reduced form f until a = +-1."""
    g = f
    s = isqrt(f.D)
    for _ in range(bound):
        if abs(g.a) == 1:
            return g, M
        g, R = rho(g, s)
        M = ((M[0][0] * R[0][0] + M[0][1] * R[1][0], M[0][0] * R[0][1] + M[0][1] * R[1][1]),
             (M[1][0] * R[0][0] + M[1][1] * R[1][0], M[1][0] * R[0][1] + M[1][1] * R[1][1]))
        if g == f:
            return None
    return None


def is_principal_with_generator(I):
    """Normalized generator of a principal ideal; raises NotPrincipal otherwise."""
    K = I.K
    if K.norm_coords((I.b, 1)) % I.a:
        raise InvalidInput("malformed ideal")
    f = I.to_form()
    g, M = reduce_with_transform(f)
    if K.is_real:
        res = _walk_to_unit_form(g, M, 4 * (isqrt(K.D) + 2) ** 2)
        if res is None:
            raise NotPrincipal(f"{I} is not principal")
        g, M = res
    elif g.a != 1:
        raise NotPrincipal(f"{I} is not principal")
    x, y = M[0][0], M[1][0]
    alpha = QuadraticInteger(K, x * I.a + y * I.b, y) * I.s
    if abs(alpha.norm()) != I.norm():
        raise AssertionError("principal generator has the wrong norm")
    return normalize_generator(alpha)


def is_principal(I):
    try:
        is_principal_with_generator(I)
    except NotPrincipal:
        return False
    return True


def normalize_generator(alpha):
    K = alpha.K
    if not K.is_real:
        cands = [alpha * u for u in K.units()]
        return min(cands, key=lambda a: (not a.x > 0, not a.y >= 0, a.x, a.y))
    eps = fundamental_unit(K.d).eps
    digits = len(str(abs(alpha.x) + abs(alpha.y))) + len(str(abs(eps.x) + abs(eps.y)))
    with mpmath.workdps(digits + 30):
        a1 = abs(alpha.real_value(digits + 30))
        a2 = abs(alpha.conj().real_value(digits + 30))
        le = mpmath.log(eps.real_value(digits + 30))
        k = -int(mpmath.floor(mpmath.log(a1 / a2) / (2 * le)))
    beta = alpha * eps**k
    if beta.real_value() < 0:
        beta = -beta
    return beta


# --------------------------------------------------------------- units


@dataclass(frozen=True)
class FundamentalUnit:
    eps: QuadraticInteger
    norm: int
    period: int


def _cf_data(d):
    """Partial quotients of the purely periodic part for w's standard surd."""
    s = isqrt(d)
    if d % 4 == 1:
        P, Q = 1, 2
    else:
        P, Q = 0, 1
    P0, Q0 = P, Q
    quotients = []
    while True:
        a = (P + s) // Q
        quotients.append(a)
        P = a * Q - P
        Q = (d - P * P) // Q
        if Q == Q0 and len(quotients) >= 1:
            break
    return quotients, P0, Q0


def _unit_from_cf(d, quotients, M=None):
    p_prev, p_cur = 0, 1
    q_prev, q_cur = 1, 0
    for a in quotients:
        p_prev, p_cur = p_cur, a * p_cur + p_prev
        q_prev, q_cur = q_cur, a * q_cur + q_prev
        if M is not None:
            p_cur %= M
            q_cur %= M
    t = 1 if d % 4 == 1 else 0
    x, y = p_cur - t * q_cur, q_cur
    if M is not None:
        x %= M
    return x, y


@lru_cache(maxsize=4096)
def fundamental_unit(d):
    if d <= 1:
        raise InvalidInput("fundamental units need d > 1")
    K = QuadraticField(d)
    quotients, _, _ = _cf_data(d)
    x, y = _unit_from_cf(d, quotients)
    eps = QuadraticInteger(K, x, y)
    N = eps.norm()
    if N not in (1, -1):
        raise AssertionError(f"continued fraction produced norm {N}")
    return FundamentalUnit(eps, N, len(quotients))


@lru_cache(maxsize=4096)
def _cf_cached(d):
    return tuple(_cf_data(d)[0])


def fundamental_unit_mod(d, p, k):
    """Coordinates of the fundamental unit modulo p^k, without exact growth."""
    if d <= 1:
        raise InvalidInput("fundamental units need d > 1")
    QuadraticField(d)
    return _unit_from_cf(d, _cf_cached(d), p**k)


def fundamental_unit_norm(d):
    return -1 if len(_cf_cached(d)) % 2 else 1
