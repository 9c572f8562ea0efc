"""Smith normal form and finite abelian group presentations."""

from __future__ import annotations

from dataclasses import dataclass, field

__all__ = [
    "AbelianPresentation",
    "build_subgroup",
    "invariant_factors",
    "smith_normal_form",
]


def _identity(n):
    return [[int(i == j) for j in range(n)] for i in range(n)]


def smith_normal_form(M, transforms=False):
    """Diagonal of the Smith form of an integer matrix.

    Returns the list of diagonal entries d_1 | d_2 | ... (length = number of
    columns, padded with zeros when there are fewer rows). With
    transforms=True returns (diag, U, V, Vinv) where U*M*V is diagonal.
    """
    A = [list(map(int, row)) for row in M]
    m = len(A)
    n = len(A[0]) if m else 0
    U = _identity(m)
    V = _identity(n)
    Vi = _identity(n)

    def swap_rows(i, j):
        A[i], A[j] = A[j], A[i]
        U[i], U[j] = U[j], U[i]

    def swap_cols(i, j):
        for row in A:
            row[i], row[j] = row[j], row[i]
        for row in V:
            row[i], row[j] = row[j], row[i]
        Vi[i], Vi[j] = Vi[j], Vi[i]

    def add_row(src, dst, k):
        # row_dst += k * row_src
        if k:
            A[dst] = [x + k * y for x, y in zip(A[dst], A[src])]
            U[dst] = [x + k * y for x, y in zip(U[dst], U[src])]

    def add_col(src, dst, k):
        # col_dst += k * col_src; the inverse transform subtracts rows
        if k:
            for row in A:
                row[dst] += k * row[src]
            for row in V:
                row[dst] += k * row[src]
            Vi[src] = [x - k * y for x, y in zip(Vi[src], Vi[dst])]

    t = 0
    while t < min(m, n):
        # pivot: smallest nonzero entry in the remaining block
        best = None
        for i in range(t, m):
            for j in range(t, n):
                if A[i][j] and (best is None or abs(A[i][j]) < abs(A[best[0]][best[1]])):
                    best = (i, j)
        if best is None:
            break
        swap_rows(t, best[0])
        swap_cols(t, best[1])
        while True:
            p = A[t][t]
            dirty = False
            for i in range(t + 1, m):
                q = A[i][t] // p
                add_row(t, i, -q)
                if A[i][t]:
                    dirty = True
            for j in range(t + 1, n):
                q = A[t][j] // p
                add_col(t, j, -q)
                if A[t][j]:
                    dirty = True
            if dirty:
                # move the smallest remainder into the pivot and repeat
                best = None
                for i in range(t, m):
                    if A[i][t] and (best is None or abs(A[i][t]) < abs(best[1])):
                        best = (("r", i), A[i][t])
                for j in range(t, n):
                    if A[t][j] and (best is None or abs(A[t][j]) < abs(best[1])):
                        best = (("c", j), A[t][j])
                kind, idx = best[0]
                if kind == "r":
                    swap_rows(t, idx)
                else:
                    swap_cols(t, idx)
                continue
            # divisibility: every entry of the block must be divisible by p
            bad = None
            for i in range(t + 1, m):
                for j in range(t + 1, n):
                    if A[i][j] % p:
                        bad = i
                        break
                if bad is not None:
                    break
            if bad is None:
                break
            add_row(bad, t, 1)
        if A[t][t] < 0:
            A[t] = [-x for x in A[t]]
            U[t] = [-x for x in U[t]]
        t += 1

    diag = [A[i][i] if i < m else 0 for i in range(n)]
    if transforms:
        return diag, U, V, Vi
    return diag


def invariant_factors(M):
    """Nontrivial invariants of Z^n / rowspace(M); zeros stand for free factors."""
    return [d for d in smith_normal_form(M) if d != 1]


@dataclass
class AbelianPresentation:
    """Abelian group Z^n / rowspace(relations) with its Smith data.

    Coordinates x (row vectors over the original generators) map to
    coordinates x*V over the Smith basis; only those with invariant > 1
    are kept.
    """

    labels: list
    relations: list
    invariants: list = field(init=False)
    _diag: list = field(init=False, repr=False)
    _V: list = field(init=False, repr=False)
    _Vi: list = field(init=False, repr=False)

    def __post_init__(self):
        n = len(self.labels)
        rel = [list(r) for r in self.relations] or [[0] * n]
        diag, _, V, Vi = smith_normal_form(rel, transforms=True)
        self._diag, self._V, self._Vi = diag, V, Vi
        self.invariants = [d for d in diag if d != 1]

    @property
    def order(self):
        out = 1
        for d in self.invariants:
            out *= d
        return out if all(self.invariants) else 0

    def is_finite(self):
        return all(self.invariants)

    def p_rank(self, p):
        return sum(1 for d in self.invariants if d == 0 or d % p == 0)

    def coordinates(self, x):
        """Reduced coordinates of an element over the Smith basis."""
        n = len(self.labels)
        out = []
        for j, d in enumerate(self._diag):
            if d == 1:
                continue
            y = sum(x[k] * self._V[k][j] for k in range(n))
            out.append(y % d if d else y)
        return out

    def smith_generators(self):
        """Each Smith-basis generator as an exponent vector over the labels."""
        return [self._Vi[j] for j, d in enumerate(self._diag) if d != 1]

    def to_json(self):
        return {
            "order": self.order,
            "invariants": list(self.invariants),
            "generators": [str(g) for g in self.labels],
        }


def build_subgroup(candidates, op, identity, target=None, limit=None):
    """Grow a subgroup from candidate elements of a finite abelian group.

    Elements must be hashable canonical representatives and op(x, y) their
    product. Stops once the subgroup reaches `target` elements (if given)
    or the candidates are exhausted. Returns (gens, rows, table) where rows
    are the relation rows m_k e_k - vec(g_k^{m_k}) and table maps every
    subgroup element to its exponent vector in the chosen generators.
    """
    table = {identity: ()}
    gens, orders, images = [], [], []
    for g in candidates:
        if target is not None and len(table) >= target:
            break
        y, m = g, 1
        while y not in table:
            y = op(y, g)
            m += 1
            if limit is not None and m * len(table) > limit:
                raise RuntimeError("subgroup exceeds the configured size limit")
        if m == 1:
            continue
        k = len(gens)
        gens.append(g)
        orders.append(m)
        images.append(table[y])
        new = {}
        for x, vec in table.items():
            z = x
            for j in range(m):
                new[z] = vec + (j,)
                z = op(z, g)
        table = new
    n = len(gens)
    rows = []
    for k in range(n):
        row = [0] * n
        row[k] = orders[k]
        for i, e in enumerate(images[k]):
            row[i] -= e
        rows.append(row)
    # pad exponent vectors of early elements to full length
    table = {x: vec + (0,) * (n - len(vec)) for x, vec in table.items()}
    return gens, rows, table
