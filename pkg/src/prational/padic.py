"""Semi-local arithmetic of K (x) Q_p: unit groups of O_K/p^n, discrete logs, p-adic logs.

Each prime of K above p is handled by a component ring:

* split: Z/p^N through the embedding w -> r (r a root of w's minimal
  polynomial, lifted by Hensel from the smaller root mod p first);
* inert: pairs (x, y) = x + y*w mod p^N;
* ramified: pairs (x, y) = x + y*pi mod p^M with pi a uniformizer, so the
  ring is O/P^(2M).
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from math import isqrt

from .abelian import smith_normal_form
from .arith import factor_small, kronecker_symbol, padic_valuation
from .errors import ComputationRefused, InvalidInput
from .quadfield import QuadraticField, QuadraticInteger, omega_root_mod

__all__ = [
    "LocalUnitPresentation",
    "SemiLocalElement",
    "discrete_log",
    "hilbert_inclusion_test",
    "local_unit_group",
    "log_rank_test",
    "padic_log",
    "reduced_log",
]


# ------------------------------------------------------------ components


class _SplitComponent:
    """Z/p^N through the embedding with w -> root."""

    kind = "split"
    e, f = 1, 1

    def __init__(self, K, p, N, which):
        self.K, self.p, self.N = K, p, N
        self.levels = N
        self.mod = p**N
        self.which = which
        self.root = omega_root_mod(K, p, N, which)

    def embed(self, u):
        x, y = u
        return (x + y * self.root) % self.mod

    def one(self):
        return 1

    def mul(self, a, b):
        return a * b % self.mod

    def power(self, a, k):
        return pow(a, k, self.mod)

    def is_unit(self, a):
        return a % self.p != 0

    def residue(self, a):
        return a % self.p

    def residue_mul(self, a, b):
        return a * b % self.p

    def residue_elements(self):
        return list(range(1, self.p))

    def q(self):
        return self.p

    def digits(self, a, i):
        # a = 1 + p^i c; returns the residue of c
        return [((a - 1) // self.p**i) % self.p]

    def level_gens(self, i):
        return [(1 + self.p**i) % self.mod]

    def valuation(self, a):
        a %= self.mod
        return self.N if a == 0 else padic_valuation(a, self.p)

    def sub_one(self, a):
        return (a - 1) % self.mod

    def scale_div(self, a, k):
        return a // k

    def divisible(self, a, k):
        return a % k == 0

    def add(self, a, b):
        return (a + b) % self.mod

    def scalar(self, a, c):
        return a * c % self.mod

    def reduce(self, a, M):
        return a % M

    def zero(self):
        return 0


class _PairComponent:
    """Z/p^M [beta] with beta^2 = A*beta + B (inert: beta = w, ramified: pi)."""

    def __init__(self, K, p, M, kind):
        self.K, self.p, self.kind = K, p, kind
        self.mod = p**M
        self.M = M
        t, n, d = K.t, K.n, K.d
        if kind == "inert":
            self.A, self.B = t, -n
            self.e, self.f = 1, 2
            self.levels = M
        else:
            self.e, self.f = 2, 1
            self.levels = 2 * M
            if p == 2 and d % 4 == 3:
                # pi = 1 + sqrt d, pi^2 = 2 pi + (d - 1)
                self.A, self.B = 2, d - 1
                self._shift = 1
            else:
                self.A, self.B = 0, d
                self._shift = 0

    def embed(self, u):
        x, y = u
        m = self.mod
        if self.kind == "inert":
            return x % m, y % m
        K = self.K
        if K.t:
            # w = (1 + pi)/2 with pi = sqrt d
            h = pow(2, -1, m)
            return (x + y * h) % m, y * h % m
        if self._shift:
            # sqrt d = pi - 1
            return (x - y) % m, y % m
        return x % m, y % m

    def to_omega(self, a):
        """Coordinates over {1, w} of a residue (defined mod p^M)."""
        X, Y = a
        m = self.mod
        if self.kind == "inert":
            return X, Y
        if self.K.t:
            return (X - Y) % m, 2 * Y % m
        if self._shift:
            return (X + Y) % m, Y % m
        return X, Y

    def one(self):
        return (1, 0)

    def zero(self):
        return (0, 0)

    def mul(self, a, b, m=None):
        m = m or self.mod
        x1, y1 = a
        x2, y2 = b
        yy = y1 * y2
        return (x1 * x2 + self.B * yy) % m, (x1 * y2 + x2 * y1 + self.A * yy) % m

    def power(self, a, k):
        result, base = self.one(), a
        while k:
            if k & 1:
                result = self.mul(result, base)
            k >>= 1
            if k:
                base = self.mul(base, base)
        return result

    def add(self, a, b):
        return (a[0] + b[0]) % self.mod, (a[1] + b[1]) % self.mod

    def scalar(self, a, c):
        return a[0] * c % self.mod, a[1] * c % self.mod

    def sub_one(self, a):
        return (a[0] - 1) % self.mod, a[1] % self.mod

    def divisible(self, a, k):
        return a[0] % k == 0 and a[1] % k == 0

    def scale_div(self, a, k):
        return a[0] // k, a[1] // k

    def reduce(self, a, M):
        return a[0] % M, a[1] % M

    def is_unit(self, a):
        if self.kind == "inert":
            return a[0] % self.p or a[1] % self.p
        return a[0] % self.p != 0

    def q(self):
        return self.p**self.f

    def residue(self, a):
        if self.kind == "inert":
            return a[0] % self.p, a[1] % self.p
        return a[0] % self.p

    def residue_mul(self, a, b):
        if self.kind == "inert":
            return self.mul(a, b, self.p)
        return a * b % self.p

    def residue_elements(self):
        p = self.p
        if self.kind == "inert":
            return [(x, y) for x in range(p) for y in range(p) if x or y]
        return list(range(1, p))

    def level_gens(self, i):
        p, m = self.p, self.mod
        if self.kind == "inert":
            return [((1 + p**i) % m, 0), (1, p**i % m)]
        j, odd = divmod(i, 2)
        if odd:
            return [(1, p**j % m)]
        return [((1 + p**j) % m, 0)]

    def digits(self, a, i):
        # a = 1 + varpi^i c; residue digits of c
        p = self.p
        x, y = (a[0] - 1) % self.mod, a[1] % self.mod
        if self.kind == "inert":
            return [(x // p**i) % p, (y // p**i) % p]
        j, odd = divmod(i, 2)
        if odd:
            return [(y // p**j) % p]
        return [(x // p**j) % p]

    def valuation(self, a):
        """Valuation normalized to the prime of this component."""
        x, y = a[0] % self.mod, a[1] % self.mod
        cap = self.levels
        vx = cap if x == 0 else padic_valuation(x, self.p) * self.e
        vy = cap if y == 0 else padic_valuation(y, self.p) * self.e + (self.e - 1)
        return min(vx, vy, cap)


def _components(K, p, N, single=False):
    k = kronecker_symbol(K.D, p)
    if k == 1:
        comps = [_SplitComponent(K, p, N, 0)]
        if not single:
            comps.append(_SplitComponent(K, p, N, 1))
        return comps
    if single:
        raise InvalidInput("a single-prime modulus needs a split prime")
    if k == -1:
        return [_PairComponent(K, p, N, "inert")]
    return [_PairComponent(K, p, N, "ramified")]


# ------------------------------------------------------------ elements


@dataclass(frozen=True)
class SemiLocalElement:
    """Residues of an element at every prime above p (or one prime)."""

    d: int
    p: int
    prec: int
    kinds: tuple
    values: tuple

    def __str__(self):
        return f"SemiLocal(d={self.d}, p={self.p}, prec={self.prec}, {list(zip(self.kinds, self.values))})"


# ------------------------------------------------------- unit presentations


def _residue_generator(comp):
    q = comp.q()
    primes = list(factor_small(q - 1)) if q > 2 else []
    for z in comp.residue_elements():
        if all(_res_pow(comp, z, (q - 1) // l) != _res_one(comp) for l in primes):
            return z
    raise AssertionError("no residue generator found")


def _res_one(comp):
    return (1, 0) if comp.kind == "inert" else 1


def _res_pow(comp, z, k):
    result, base = _res_one(comp), z
    while k:
        if k & 1:
            result = comp.residue_mul(result, base)
        k >>= 1
        if k:
            base = comp.residue_mul(base, base)
    return result


def _lift_residue(comp, z):
    if comp.kind == "split":
        return z
    if comp.kind == "inert":
        return z
    return (z, 0)


class _ComponentGroup:
    """Generators and relations of (component ring)^*."""

    def __init__(self, comp):
        self.comp = comp
        p, q = comp.p, comp.q()
        gens, rows, labels = [], [], []
        self.q1 = q - 1
        if q > 2:
            z = _residue_generator(comp)
            self.zbar = z
            # a Teichmuller-type lift has order exactly q - 1
            zt = comp.power(_lift_residue(comp, z), p ** (comp.levels + 1))
            gens.append(zt)
            labels.append(("teich", 0))
            self._bsgs = _ResidueLog(comp, comp.residue(zt))
        else:
            self.zbar = None
        self.level_index = {}
        for i in range(1, comp.levels):
            for k, g in enumerate(comp.level_gens(i)):
                self.level_index[(i, k)] = len(gens)
                gens.append(g)
                labels.append(("level", i, k))
        self.gens, self.labels = gens, labels
        n = len(gens)
        if q > 2:
            row = [0] * n
            row[0] = q - 1
            rows.append(row)
        for (i, k), idx in self.level_index.items():
            row = [0] * n
            row[idx] = p
            vec = self._one_unit_log(comp.power(gens[idx], p))
            for j, e in enumerate(vec):
                row[j] -= e
            rows.append(row)
        self.rows = rows

    def _one_unit_log(self, u):
        comp = self.comp
        vec = [0] * len(self.gens)
        for i in range(1, comp.levels):
            ds = comp.digits(u, i)
            for k, dig in enumerate(ds):
                if dig:
                    idx = self.level_index[(i, k)]
                    vec[idx] += dig
                    u = comp.mul(u, _inverse_power(comp, self.gens[idx], dig))
        return vec

    def log(self, u):
        comp = self.comp
        if not comp.is_unit(u):
            raise InvalidInput("element is not a unit at the modulus")
        vec = [0] * len(self.gens)
        if self.zbar is not None:
            k = self._bsgs.log(comp.residue(u))
            vec[0] = k
            u = comp.mul(u, comp.power(self.gens[0], (self.q1 - k) % self.q1))
        one = self._one_unit_log(u)
        return [a + b for a, b in zip(vec, one)]


def _inverse_power(comp, g, k):
    # g is a 1-unit; its order divides p^levels
    order = comp.p ** comp.levels
    return comp.power(g, (order - k) % order)


class _ResidueLog:
    """Discrete logs in the residue field to a fixed generator (BSGS)."""

    def __init__(self, comp, z):
        self.comp = comp
        self.n = comp.q() - 1
        self.m = isqrt(self.n) + 1
        table = {}
        x = _res_one(comp)
        for j in range(self.m):
            table.setdefault(x, j)
            x = comp.residue_mul(x, z)
        self.table = table
        self.giant = _res_pow(comp, z, (self.n - self.m) % self.n)  # z^{-m}

    def log(self, v):
        x = v
        for i in range(self.m + 1):
            j = self.table.get(x)
            if j is not None:
                return (i * self.m + j) % self.n
            x = self.comp.residue_mul(x, self.giant)
        raise AssertionError("residue log failed")


class LocalUnitPresentation:
    """Diagonal presentation of (O_K / modulus)^* with discrete logs."""

    def __init__(self, K, p, n, single=False):
        self.K, self.p, self.n, self.single = K, p, n, single
        self.components = _components(K, p, n, single)
        self.groups = [_ComponentGroup(c) for c in self.components]
        sizes = [len(g.gens) for g in self.groups]
        total = sum(sizes)
        rows = []
        off = 0
        for g, sz in zip(self.groups, sizes):
            for r in g.rows:
                rows.append([0] * off + r + [0] * (total - off - sz))
            off += sz
        self._sizes = sizes
        if total == 0:
            self.orders, self._V, self._keep = [], [], []
            self.generators = []
            return
        diag, _, V, Vi = smith_normal_form(rows, transforms=True)
        keep = [j for j, dj in enumerate(diag) if dj != 1]
        if any(diag[j] == 0 for j in keep):
            raise AssertionError("local unit presentation is not finite")
        self.orders = [diag[j] for j in keep]
        self._V, self._keep = V, keep
        self.generators = [self._combine(Vi[j]) for j in keep]

    @property
    def modulus_text(self):
        return f"P^{self.n}" if self.single else f"{self.p}^{self.n}"

    def order(self):
        out = 1
        for o in self.orders:
            out *= o
        return out

    def _raw_log(self, u):
        vec = []
        for g, val in zip(self.groups, u.values):
            vec.extend(g.log(val))
        return vec

    def _combine(self, exps):
        vals, off = [], 0
        for g, sz in zip(self.groups, self._sizes):
            v = g.comp.one()
            for gen, e in zip(g.gens, exps[off : off + sz]):
                if e:
                    v = g.comp.mul(v, _signed_power(g.comp, gen, e))
            vals.append(v)
            off += sz
        return self._element(vals)

    def _element(self, vals):
        return SemiLocalElement(
            self.K.d, self.p, self.n,
            tuple(c.kind for c in self.components), tuple(vals),
        )

    def element(self, alpha):
        """Image of a global integer (QuadraticInteger or coordinate pair)."""
        u = alpha.coords() if isinstance(alpha, QuadraticInteger) else tuple(alpha)
        return self._element([c.embed(u) for c in self.components])

    def log(self, u):
        if not isinstance(u, SemiLocalElement):
            u = self.element(u)
        raw = self._raw_log(u)
        out = []
        for o, j in zip(self.orders, self._keep):
            y = sum(raw[k] * self._V[k][j] for k in range(len(raw)))
            out.append(y % o)
        return out

    def compose(self, exps):
        """Product of generators to the given exponents."""
        vals = []
        for i, c in enumerate(self.components):
            v = c.one()
            for g, e in zip(self.generators, exps):
                if e:
                    v = c.mul(v, _signed_power(c, g.values[i], e))
            vals.append(v)
        return self._element(vals)

    def to_json(self):
        return {
            "modulus": self.modulus_text,
            "order": self.order(),
            "orders": list(self.orders),
        }


def _signed_power(comp, g, e):
    if e >= 0:
        return comp.power(g, e)
    # units of a finite ring: invert through the group exponent
    q = comp.q()
    exp = (q - 1) * comp.p ** comp.levels
    return comp.power(g, e % exp)


@lru_cache(maxsize=512)
def _local_unit_group(d, p, n, single):
    return LocalUnitPresentation(QuadraticField(d), p, n, single)


def local_unit_group(K, p, modulus):
    """Unit group presentation of O_K/p^n (modulus=("p", n)) or O_K/P^n (("P", n)).

    An integer modulus n is read as p^n.
    """
    if isinstance(modulus, int):
        kind, n = "p", modulus
    else:
        kind, n = modulus
    if n < 1:
        raise InvalidInput("modulus exponent must be positive")
    if kind == "p":
        return _local_unit_group(K.d, p, n, False)
    if kind == "P":
        if kronecker_symbol(K.D, p) != 1:
            raise InvalidInput("single-prime moduli are supported for split primes only")
        return _local_unit_group(K.d, p, n, True)
    raise InvalidInput(f"unsupported modulus {modulus!r}")


def discrete_log(G, u):
    return G.log(u)


# --------------------------------------------------------------- logs


def _log_precision(p, e, m):
    """Series length and working precision for logs exact mod p^m."""
    from math import log as ln

    target = e * m
    kmax = 1
    while kmax - e * ln(kmax) / ln(p) < target or kmax < target:
        kmax += 1
    extra = 0
    while p ** (extra + 1) <= kmax:
        extra += 1
    return kmax, m + extra + 1


def padic_log(K, p, alpha, m):
    """p-adic logarithm of alpha at every prime above p, exact modulo p^m.

    log(alpha) = log(alpha^(q-1)) / (q-1), where q is the residue field
    size; the components are returned in their native bases.
    """
    if p == 2:
        raise ComputationRefused("2-adic logarithms are not supported")
    u = alpha.coords() if isinstance(alpha, QuadraticInteger) else tuple(alpha)
    if K.norm_coords(u) % p == 0:
        raise InvalidInput("alpha is not coprime to p")
    e = 2 if K.D % p == 0 else 1
    kmax, W = _log_precision(p, e, m)
    comps = _components(K, p, W)
    vals = []
    for c in comps:
        q = c.q()
        x = c.sub_one(c.power(c.embed(u), q - 1))
        total = c.zero()
        xk = c.one()
        for k in range(1, kmax + 1):
            xk = c.mul(xk, x)
            v = padic_valuation(k, p)
            kk = k // p**v
            if not c.divisible(xk, p**v):
                raise AssertionError("log series term lost integrality")
            term = c.scale_div(xk, p**v)
            term = c.scalar(term, pow(kk, -1, c.mod))
            total = c.add(total, term) if k % 2 else c.add(total, c.scalar(term, -1))
        total = c.scalar(total, pow(q - 1, -1, c.mod))
        vals.append(c.reduce(total, p**m))
    return SemiLocalElement(K.d, p, m, tuple(c.kind for c in comps), tuple(vals))


def log_valuations(K, lg):
    """Valuation of each component of a log, normalized to its prime."""
    comps = _components(K, lg.p, lg.prec)
    return [c.valuation(v) for c, v in zip(comps, lg.values)]


def reduced_log(K, p, alpha, m=4):
    """Image of log(alpha) in log(U)/p log(U), an F_p-vector of length 2."""
    lg = padic_log(K, p, alpha, m)
    out = []
    for kind, v in zip(lg.kinds, lg.values):
        if kind == "split":
            if v % p:
                raise AssertionError("log of a unit not divisible by p")
            out.append((v // p) % p)
        elif kind == "inert":
            out.extend([(v[0] // p) % p, (v[1] // p) % p])
        else:
            out.extend([(v[0] // p) % p, v[1] % p])
    return out


def _check_log_regime(K, p):
    if p == 2:
        raise ComputationRefused("2-adic logarithms are not supported")
    if K.is_real:
        raise InvalidInput("the Hilbert inclusion test is for imaginary fields")
    if K.d in (-1, -3) and p == 3:
        raise ComputationRefused("p divides the number of roots of unity")
    if p == 3 and K.D % 3 == 0:
        raise ComputationRefused("p = 3 ramified: the logarithm is not injective on 1-units")


def hilbert_inclusion_test(K, p, ideal, order, m=None):
    """Decide whether the class of `ideal` (of order p^e) lies outside the torsion.

    Returns "not-contained" when alpha, with ideal^(p^e) = (alpha), is a
    p-th power in the semi-local units up to torsion, i.e. when
    v_P(log alpha) >= e_P + 1 at every P | p; otherwise "contained".
    """
    from .quadfield import is_principal_with_generator

    _check_log_regime(K, p)
    e = 0
    o = order
    while o % p == 0:
        o //= p
        e += 1
    if o != 1:
        raise InvalidInput("class order must be a power of p")
    if e == 0:
        return "contained"
    alpha = is_principal_with_generator(ideal ** order)
    m = m or e + 3
    lg = padic_log(K, p, alpha, m)
    ram = 2 if K.D % p == 0 else 1
    vals = log_valuations(K, lg)
    if all(v >= ram + 1 for v in vals):
        return "not-contained"
    return "contained"


def log_rank_test(K, p, alphas, m=4):
    """F_p-rank of the reduced logs of the given global elements."""
    _check_log_regime(K, p)
    vecs = [reduced_log(K, p, a, m) for a in alphas]
    return _rank_mod_p(vecs, p)


def _rank_mod_p(vecs, p):
    rows = [list(v) for v in vecs]
    rank = 0
    ncols = len(rows[0]) if rows else 0
    for col in range(ncols):
        piv = next((i for i in range(rank, len(rows)) if rows[i][col] % p), None)
        if piv is None:
            continue
        rows[rank], rows[piv] = rows[piv], rows[rank]
        inv = pow(rows[rank][col], -1, p)
        rows[rank] = [x * inv % p for x in rows[rank]]
        for i in range(len(rows)):
            if i != rank and rows[i][col] % p:
                c = rows[i][col]
                rows[i] = [(x - c * y) % p for x, y in zip(rows[i], rows[rank])]
        rank += 1
    return rank
