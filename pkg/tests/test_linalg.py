import random

from scatterforge import linalg
from scatterforge.field import GF

from conftest import tower


def _rand_matrix(F, r, c, rng):
    return [[rng.randrange(F.order) for _ in range(c)] for _ in range(r)]


def test_rref_pivots_and_rank():
    F = GF(3)
    A = [[1, 2, 0, 1], [2, 1, 0, 2], [0, 0, 1, 1]]
    R, piv = linalg.rref(F, A)
    assert piv == [0, 2]
    assert linalg.rank(F, A) == 2
    assert R[0][0] == 1 and R[1][2] == 1


def test_nullspace_is_annihilated():
    F = tower(2, 1, 5).Fqm
    rng = random.Random(1)
    for _ in range(20):
        A = _rand_matrix(F, 2, 4, rng)
        N = linalg.nullspace(F, A, 4)
        assert len(N) == 4 - linalg.rank(F, A)
        for v in N:
            for row in A:
                acc = 0
                for x, y in zip(row, v):
                    acc = F.add(acc, F.mul(x, y))
                assert acc == 0


def test_det_multiplicative_and_rank_deficient():
    F = tower(3, 1, 5).Fqm
    rng = random.Random(2)
    for _ in range(10):
        A, B = _rand_matrix(F, 3, 3, rng), _rand_matrix(F, 3, 3, rng)
        assert linalg.det(F, linalg.matmul(F, A, B)) == F.mul(linalg.det(F, A), linalg.det(F, B))
    assert linalg.det(F, [[1, 2], [2, F.mul(2, 2)]]) == 0
    assert linalg.det(F, linalg.identity(4)) == 1


def test_orthogonal_complement_dimension():
    F = GF(2)
    rows = [[1, 1, 0, 0, 0], [0, 0, 1, 1, 0]]
    K = linalg.orthogonal_complement(F, rows, 5)
    assert len(K) == 3 and linalg.rank(F, K) == 3
    for a in rows:
        for b in K:
            assert sum(x * y for x, y in zip(a, b)) % 2 == 0


def test_same_row_space():
    F = GF(5)
    A = [[1, 2, 3], [0, 1, 4]]
    B = [[1, 3, 2], [2, 4, 1]]  # A[0] + A[1] and 2*A[0]
    assert linalg.same_row_space(F, A, B)
    assert not linalg.same_row_space(F, A, [[1, 0, 0], [0, 1, 0]])


def test_digits_round_trip():
    for base in (2, 3, 4):
        for a in range(base ** 4):
            assert linalg.from_digits(linalg.to_digits(a, base, 4), base) == a
