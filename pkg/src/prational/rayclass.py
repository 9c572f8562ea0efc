"""Ray class groups of quadratic fields modulo p^n or a single split prime power.

Ordinary sense throughout: no infinite places in the modulus, and the
relations include the full unit group.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import gcd

from .abelian import AbelianPresentation, invariant_factors, smith_normal_form
from .arith import kronecker_symbol
from .errors import InvalidInput
from .padic import local_unit_group
from .qform import _xgcd, class_group_structure
from .quadfield import (
    QuadraticField,
    QuadraticIdeal,
    fundamental_unit_mod,
    is_principal_with_generator,
)

MAX_EXPONENT = 6

__all__ = [
    "AbelianPresentation",
    "RayClassGroup",
    "class_group_basis",
    "invariant_factors",
    "minimal_test_modulus",
    "p_rank_at",
    "ray_class_group",
    "smith_normal_form",
]


def _coprime_representative(f, m):
    """An equivalent form whose leading coefficient is positive and prime to m."""
    bound = 1
    while True:
        for x in range(-bound, bound + 1):
            for y in range(0, bound + 1):
                if max(abs(x), y) != bound or gcd(x, y) != 1:
                    continue
                v = f(x, y)
                if v > 0 and gcd(v, m) == 1:
                    _, u, w = _xgcd(x, y)
                    # u*x + w*y = 1, so [[x, -w], [y, u]] has determinant 1
                    return f.transform(((x, -w), (y, u)))
        bound += 1


def class_group_basis(K, m=1):
    """Ideal-class (wide) basis: [(ideal, order)], ideals of norm prime to m."""
    sense = "wide" if K.is_real else "narrow"
    G = class_group_structure(K.D, sense)
    out = []
    for f, order in zip(G.generators, G.invariants):
        g = _coprime_representative(f, m)
        out.append((QuadraticIdeal.from_form(K, g), order))
    return out


def _global_units(K):
    """Coordinates of generators of the unit group (torsion and free part)."""
    if K.d == -1:
        return [(0, 1)]  # i generates mu_4
    if K.d == -3:
        return [(0, 1)]  # (1 + sqrt -3)/2 generates mu_6
    units = [(-1, 0)]
    return units


@dataclass
class RayClassGroup:
    K: QuadraticField
    p: int
    modulus: tuple
    presentation: AbelianPresentation
    class_number: int
    local_order: int
    unit_image_order: int

    @property
    def invariants(self):
        return list(self.presentation.invariants)

    @property
    def order(self):
        return self.presentation.order

    def p_rank(self, q=None):
        return p_rank_at(self, q or self.p)

    def p_part(self, q=None):
        q = q or self.p
        out = []
        for n in self.invariants:
            k = 1
            while n % q == 0:
                n //= q
                k *= q
            if k > 1:
                out.append(k)
        return out

    def modulus_text(self):
        kind, n = self.modulus
        if n == 0:
            return "1"
        return f"{self.p}^{n}" if kind == "p" else f"P^{n} (P | {self.p})"

    def to_json(self):
        data = self.presentation.to_json()
        data["modulus"] = self.modulus_text()
        return data


def ray_class_group(K, p, n, single=False):
    """The ray class group of K modulo p^n, or modulo P^n for one split P | p."""
    if isinstance(K, int):
        K = QuadraticField(K)
    if n < 0 or n > MAX_EXPONENT:
        raise InvalidInput(f"modulus exponent must lie in [0, {MAX_EXPONENT}]")
    if single and kronecker_symbol(K.D, p) != 1:
        raise InvalidInput("single-prime moduli are implemented for split primes only")
    basis = class_group_basis(K, p)
    h = 1
    for _, o in basis:
        h *= o
    k = len(basis)
    if n == 0:
        rows = [[o if i == j else 0 for j in range(k)] for i, (_, o) in enumerate(basis)]
        labels = [repr(I) for I, _ in basis]
        pres = AbelianPresentation(labels, rows)
        return RayClassGroup(K, p, ("P" if single else "p", 0), pres, h, 1, 1)
    G = local_unit_group(K, p, ("P" if single else "p", n))
    ell = len(G.orders)
    width = k + ell
    rows = []
    for j, o in enumerate(G.orders):
        row = [0] * width
        row[k + j] = o
        rows.append(row)
    units = _global_units(K)
    if K.is_real:
        units.append(fundamental_unit_mod(K.d, p, n))
    unit_rows = []
    for u in units:
        row = [0] * k + G.log(u)
        rows.append(row)
        unit_rows.append(G.log(u))
    for i, (I, o) in enumerate(basis):
        alpha = is_principal_with_generator(I ** o)
        lg = G.log(alpha)
        row = [0] * width
        row[i] = o
        for j, e in enumerate(lg):
            row[k + j] = -e
        rows.append(row)
    labels = [repr(I) for I, _ in basis] + [f"u{j + 1}" for j in range(ell)]
    pres = AbelianPresentation(labels, rows)
    if not pres.is_finite():
        raise AssertionError("ray class presentation has a free part")
    loc = G.order()
    # image of the global units in the local group
    img_rows = [[o if i == j else 0 for j in range(ell)] for i, o in enumerate(G.orders)] + unit_rows
    quotient = 1
    for dj in smith_normal_form(img_rows):
        quotient *= dj
    return RayClassGroup(K, p, ("P" if single else "p", n), pres, h, loc, loc // quotient)


def p_rank_at(G, p):
    inv = G.invariants if isinstance(G, RayClassGroup) else G
    return sum(1 for n in inv if n % p == 0)


def minimal_test_modulus(K, p, support="all"):
    n0 = 3 if p == 2 else 2
    if support in ("all", "all-p"):
        return ("p", n0)
    if support in ("single", "P"):
        if kronecker_symbol(K.D, p) != 1:
            raise InvalidInput("single-prime support requires a split prime")
        return ("P", n0)
    raise InvalidInput(f"unknown support {support!r}")
