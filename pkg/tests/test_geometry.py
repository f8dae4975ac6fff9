import random

import numpy as np
import pytest

from scatterforge import geometry as geo
from scatterforge.construction import ConstructionParams, build_U_sigma, build_W_sigma, build_Z_infinity
from scatterforge.errors import BudgetExceeded, PreconditionError
from scatterforge.geometry import FqSubspace, ProjectiveSubspace

from conftest import tower, u_sigma


def test_subspace_rejects_dependent_basis(T25):
    with pytest.raises(PreconditionError):
        FqSubspace(T25, 3, ((1, 0, 0), (1, 0, 0)))
    # 1 and 2 = x are F_2-independent in F_32
    assert FqSubspace(T25, 3, ((1, 0, 0), (2, 0, 0))).dim_q == 2


def test_span_and_canonical_form(T35):
    a = FqSubspace.span(T35, 3, [(1, 0, 0), (0, 1, 0), (1, 1, 0)])
    b = FqSubspace.span(T35, 3, [(1, 2, 0), (0, 1, 0)])
    assert a.dim_q == 2 and a == b and hash(a) == hash(b)
    assert a.contains((2, 2, 0)) and not a.contains((0, 0, 1))


def test_vectors_enumeration(T25):
    U = u_sigma(2, 1, 5)
    V = U.vectors()
    assert V.shape == (128, 3)
    assert not V[0].any()
    assert len({tuple(r) for r in V.tolist()}) == 128
    with pytest.raises(BudgetExceeded):
        U.vectors(budget=100)


def test_fqm_rank(T25):
    assert u_sigma(2, 1, 5).fqm_rank() == 3
    assert FqSubspace(T25, 3, ((1, 0, 0), (2, 0, 0))).fqm_rank() == 1


def test_weight_agrees_with_enumeration(T25):
    U = u_sigma(2, 1, 5)
    V = U.vectors()
    F = T25.Fqm
    rng = random.Random(0)
    for idx in rng.sample(range(1057), 20):
        H = ProjectiveSubspace.line(T25, idx)
        a = H.annihilator()[0]
        on = sum(1 for v in V.tolist()
                 if F.add(F.add(F.mul(a[0], v[0]), F.mul(a[1], v[1])), F.mul(a[2], v[2])) == 0)
        assert on == 2 ** geo.weight(U, H)
        assert geo.intersection(U, H).dim_q == geo.weight(U, H)


def test_point_weights_sum(T35):
    # every nonzero vector of U lies on exactly one point
    U = u_sigma(3, 1, 5)
    mult = geo.point_multiplicities(U)
    assert mult.sum() == 3 ** 7 - 1
    assert set(np.unique(geo.point_weights(U)).tolist()) <= {0, 1}
    assert len(geo.linear_set_points(U)) == (3 ** 7 - 1) // 2


def test_line_data_incidence_vs_span(T25):
    U = u_sigma(2, 1, 5)
    data = geo.line_data(U)
    for idx in range(0, 1057, 53):
        assert data.weights[idx] == geo.weight(U, ProjectiveSubspace.line(T25, idx))


def test_scattered_and_evasive(T25):
    U = u_sigma(2, 1, 5)
    assert geo.is_h_scattered(U, 1)
    assert geo.is_evasive(U, 2, 4)
    bad = geo.is_evasive(U, 2, 3)
    assert not bad and isinstance(bad.witness, ProjectiveSubspace)
    assert geo.weight(U, bad.witness) == 4
    assert geo.is_evasive(U, 3, U.dim_q)
    assert geo.is_evasive(U, 0, 0)


def test_W_sigma_two_scattered(T25):
    P = ConstructionParams(T25, 1)
    W = build_W_sigma(P)
    assert geo.is_h_scattered(W, 2)
    Z = build_Z_infinity(P)
    assert Z.dim_q == 2
    # l_infinity: X_0 = 0
    l_inf = ProjectiveSubspace(T25, 3, ((0, 1, 0), (0, 0, 1)))
    assert geo.weight(build_U_sigma(P), l_inf) == 2


def test_cutting_incidence_and_span_agree(T25):
    U = u_sigma(2, 1, 5)
    assert geo.is_cutting(U, 1)
    assert geo.is_cutting(U, 1, method="span")
    assert not geo.is_cutting(U, 2)
    assert not geo.is_cutting(U, 2, method="span")


def test_cutting_counterexample_has_uncut_line(T25):
    U = FqSubspace(T25, 3, ((1, 0, 0), (0, 1, 0), (0, 0, 1)))
    v = geo.is_cutting(U, 1)
    assert not v
    assert geo.is_cutting(U, 1, method="span").holds is False
    line = v.witness
    assert geo.weight(U, line) <= 1


@pytest.mark.parametrize("q,m,expected", [
    (2, 5, {2: 812, 3: 240, 4: 5}),
    (3, 5, {2: 56043, 3: 3240, 4: 10}),
    (2, 7, {2: 12712, 3: 3654, 4: 147}),
])
def test_characters_closed_form(q, m, expected):
    assert geo.characters_closed_form(q, m) == expected
    assert geo.characters_linear_system(q, m) == expected


def test_spectrum_matches_closed_form_and_standard_equations(T25):
    U = u_sigma(2, 1, 5)
    spec = geo.weight_spectrum(U)
    assert spec.counts == {2: 812, 3: 240, 4: 5}
    assert spec.total == 1057
    assert spec.point_counts == {3: 812, 7: 240, 15: 5}
    n_points = len(geo.linear_set_points(U))
    assert geo.standard_equations_check(n_points, spec, 3, order=32, q=2) is True
    # perturbing the counts breaks at least one equation
    broken = {3: 811, 7: 241, 15: 5}
    assert not all(geo.standard_equations(n_points, broken, 3, 32))


def test_closed_form_needs_m_at_least_five():
    with pytest.raises(PreconditionError):
        geo.characters_closed_form(2, 4)


def test_saturation_rho_one_fails_rho_three_holds(T25):
    U = u_sigma(2, 1, 5)
    assert not geo.is_saturating(U, 1)
    assert geo.is_saturating(U, 3)


def test_saturation_budget(T25):
    with pytest.raises(BudgetExceeded):
        geo.is_saturating(u_sigma(2, 1, 5), 2, budget=1000)


def test_random_subspace_dimension(T25):
    rng = random.Random(11)
    for d in (1, 5, 9, 15):
        assert geo.random_subspace(T25, 3, d, rng).dim_q == d
    with pytest.raises(PreconditionError):
        geo.random_subspace(T25, 3, 16, rng)
