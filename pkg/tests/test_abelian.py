from hypothesis import given, settings
from hypothesis import strategies as st

from prational.abelian import AbelianPresentation, build_subgroup, invariant_factors, smith_normal_form

small = st.integers(-30, 30)
matrices = st.integers(1, 5).flatmap(
    lambda m: st.integers(1, 5).flatmap(
        lambda n: st.lists(st.lists(small, min_size=n, max_size=n), min_size=m, max_size=m)
    )
)


def matmul(A, B):
    return [[sum(a * b for a, b in zip(row, col)) for col in zip(*B)] for row in A]


def det(M):
    n = len(M)
    if n == 1:
        return M[0][0]
    return sum((-1) ** j * M[0][j] * det([r[:j] + r[j + 1:] for r in M[1:]]) for j in range(n))


@settings(max_examples=300)
@given(matrices)
def test_smith_form_transforms(M):
    diag, U, V, Vi = smith_normal_form(M, transforms=True)
    m, n = len(M), len(M[0])
    D = matmul(matmul(U, M), V)
    for i in range(m):
        for j in range(n):
            assert D[i][j] == (diag[j] if i == j else 0)
    assert abs(det(U)) == 1 and abs(det(V)) == 1
    assert matmul(V, Vi) == [[int(i == j) for j in range(n)] for i in range(n)]
    nz = [d for d in diag if d]
    assert all(d > 0 for d in nz)
    assert all(b % a == 0 for a, b in zip(nz, nz[1:]))
    # zeros trail the nonzero entries
    assert diag == nz + [0] * (len(diag) - len(nz))


def test_known_invariants():
    assert invariant_factors([[2, 0], [0, 3]]) == [6]
    assert invariant_factors([[2, 4, 4], [-6, 6, 12], [10, -4, -16]]) == [2, 6, 12]
    assert invariant_factors([[4, 0], [0, 6]]) == [2, 12]


@given(st.lists(st.integers(1, 12), min_size=1, max_size=4))
def test_subgroup_growth_in_cyclic_products(orders):
    # the group Z/o1 x ... x Z/ok as tuples, grown from its unit vectors
    k = len(orders)
    one = (0,) * k
    op = lambda x, y: tuple((a + b) % o for a, b, o in zip(x, y, orders))  # noqa: E731
    cands = [tuple(int(i == j) % orders[j] for j in range(k)) for i in range(k)]
    gens, rows, table = build_subgroup(cands, op, one)
    size = 1
    for o in orders:
        size *= o
    assert len(table) == size
    pres = AbelianPresentation([str(g) for g in gens], rows) if gens else None
    if pres:
        assert pres.order == size
        assert sorted(pres.invariants) == sorted(invariant_factors([[o if i == j else 0 for j in range(k)]
                                                                     for i, o in enumerate(orders)]))


def test_presentation_coordinates():
    P = AbelianPresentation(["a", "b"], [[4, 0], [0, 6]])
    assert P.invariants == [2, 12]
    assert P.coordinates([4, 6]) == [0, 0]
    assert P.p_rank(2) == 2 and P.p_rank(3) == 1
    assert P.to_json()["order"] == 24
