import random

import numpy as np
import pytest

from scatterforge import codes, geometry as geo, linalg
from scatterforge.codes import RankCode, RankWeightDistribution
from scatterforge.errors import BudgetExceeded, InvariantBreach, PreconditionError
from scatterforge.geometry import FqSubspace

from conftest import tower, u_sigma


@pytest.fixture(scope="module")
def C25():
    return codes.psi(u_sigma(2, 1, 5))


def test_psi_generator(C25):
    assert (C25.n, C25.k) == (7, 3)
    # the first row is the power basis 1, x, x^2, x^3, x^4 followed by zeros
    assert C25.G()[0].tolist() == [1, 2, 4, 8, 16, 0, 0]
    assert codes.phi(C25) == u_sigma(2, 1, 5)


def test_rank_weight_and_support(T25):
    assert codes.rank_weight([1, 2, 4, 8, 16], T25) == 5
    assert codes.rank_weight([3, 3, 0], T25) == 1
    assert codes.rank_weight([0, 0, 0], T25) == 0
    assert codes.rank_support([1, 2, 3], T25) == ((1, 0, 1), (0, 1, 1))


def test_rank_weight_invariant_under_fqm_scaling(T35):
    rng = random.Random(0)
    F = T35.Fqm
    for _ in range(30):
        v = [rng.randrange(F.order) for _ in range(6)]
        a = rng.randrange(1, F.order)
        assert codes.rank_weight(v, T35) == codes.rank_weight([F.mul(a, x) for x in v], T35)


def test_projective_reps_count():
    reps = codes.projective_reps(4, 3)
    assert len(reps) == 4 ** 2 + 4 + 1
    # each rep is normalized: first nonzero entry equals 1
    for r in reps.tolist():
        assert next(x for x in r if x) == 1


def test_weight_distribution_q2(C25):
    dist = codes.weight_distribution(C25)
    assert dist.counts == {0: 1, 3: 155, 4: 7440, 5: 25172}
    assert dist.d_min == 3
    assert dist.nonzero_weights == [3, 4, 5]
    assert codes.weight_distribution_direct(C25).counts == codes.weight_distribution_geometric(C25).counts


def test_weight_distribution_rejects_bad_total():
    with pytest.raises(InvariantBreach):
        RankWeightDistribution({0: 1, 3: 10}, 7, 3, 2, 5)


def test_minimality_by_both_routes(C25):
    res = codes.is_minimal(C25)
    assert res.holds and res.by_supports and res.by_cutting and res.pair is None
    assert codes.is_minimal(C25, mode="bitmask").holds


def test_standard_basis_code_is_not_minimal(T25):
    U = FqSubspace(T25, 3, ((1, 0, 0), (0, 1, 0), (0, 0, 1)))
    res = codes.is_minimal(codes.psi(U))
    assert not res.holds and res.by_cutting is False
    u, v = res.pair
    assert (u, v) == ((0, 0, 1), (0, 1, 2))
    # the support of u is strictly inside the support of v
    C = codes.psi(U)
    cu, cv = C.encode(np.array([u, v]))
    su = codes.rank_support(cu, T25)
    sv = codes.rank_support(cv, T25)
    assert len(su) < len(sv)
    assert linalg.rank(T25.Fq, list(su) + list(sv)) == len(sv)


def test_minimality_modes_agree_on_random_codes(T25):
    rng = random.Random(7)
    for dim in (4, 5, 6):
        U = geo.random_subspace(T25, 3, dim, rng)
        if U.fqm_rank() < 3:
            continue
        C = codes.psi(U)
        a, b = codes.is_minimal(C), codes.is_minimal(C, mode="bitmask")
        assert a.holds == b.holds == geo.is_cutting(U, 1).holds


def test_bitmask_mode_limits():
    with pytest.raises(PreconditionError):  # q^n = 3^9 > 4096
        codes.is_minimal(codes.psi(u_sigma(3, 1, 7)), mode="bitmask")
    with pytest.raises(BudgetExceeded):
        codes.is_minimal(codes.psi(u_sigma(3, 1, 5)), mode="bitmask")


def test_dual_code(C25):
    D = codes.dual_code(C25)
    assert (D.n, D.k) == (7, 4)
    assert codes.dual_code(D).same_code(C25)
    F = C25.tower.Fqm
    for g in C25.G().tolist():
        for h in D.G().tolist():
            acc = 0
            for x, y in zip(g, h):
                acc = F.add(acc, F.mul(x, y))
            assert acc == 0


def test_same_code_detects_difference(C25):
    other = RankCode(C25.tower, tuple(tuple(r) for r in C25.G()[::-1].tolist()))
    assert other.same_code(C25)
    moved = RankCode(C25.tower, ((1, 0, 0, 0, 0, 0, 0),) + tuple(tuple(r) for r in C25.G()[1:].tolist()))
    assert not moved.same_code(C25)


def test_coset_weight_equals_syndrome_distance(C25):
    D = codes.dual_code(C25)
    rng = random.Random(1)
    for _ in range(4):
        v = [rng.randrange(32) for _ in range(7)]
        assert codes.coset_weight(v, D) == codes.syndrome_distance(v, C25)


def test_covering_radius_lower_bound(C25):
    D = codes.dual_code(C25)
    assert codes.covering_radius_lower_bound(D, sample_budget=3, seed=0) == 2
