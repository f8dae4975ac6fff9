"""Property-based checks with hypothesis."""

import random

import numpy as np
from hypothesis import assume, given, settings, strategies as st

from scatterforge import codes, geometry as geo, kernels, linalg
from scatterforge import linearized as lz
from scatterforge.geometry import FqSubspace
from scatterforge.linearized import LinearizedPolynomial

from conftest import tower

TOWERS = [(2, 1, 5), (3, 1, 5), (2, 2, 5), (2, 1, 7), (5, 1, 3)]


@st.composite
def field_and_elements(draw, n=3):
    p, e, m = draw(st.sampled_from(TOWERS))
    F = tower(p, e, m).Fqm
    xs = [draw(st.integers(0, F.order - 1)) for _ in range(n)]
    return F, xs


@given(field_and_elements())
def test_ring_laws(data):
    F, (a, b, c) = data
    assert F.mul(F.mul(a, b), c) == F.mul(a, F.mul(b, c))
    assert F.add(F.add(a, b), c) == F.add(a, F.add(b, c))
    assert F.mul(a, F.add(b, c)) == F.add(F.mul(a, b), F.mul(a, c))
    if b:
        assert F.mul(F.div(a, b), b) == a


@given(field_and_elements(n=2))
def test_frobenius_fixes_exactly_the_subfield(data):
    F, (a, b) = data
    q = F.sub.order
    assert F.pow(F.add(a, b), q) == F.add(F.pow(a, q), F.pow(b, q))
    assert (F.pow(a, q) == a) == (a < q)


@given(field_and_elements(n=1), st.integers(0, 6))
def test_log_exp_inverse(data, k):
    F, (a,) = data
    if a:
        assert F.exp(F.log(a)) == a
        assert F.pow(a, k) == F.exp((F.log(a) * k) % (F.order - 1))


@settings(max_examples=40, deadline=None)
@given(st.sampled_from([(2, 1, 5), (3, 1, 5), (2, 2, 5)]), st.integers(1, 4),
       st.lists(st.integers(0, 10 ** 6), min_size=2, max_size=4))
def test_eigenspace_root_counts(tw, s, raw):
    T = tower(*tw)
    F = T.Fqm
    coeffs = [x % F.order for x in raw]
    coeffs[-1] = coeffs[-1] or 1
    L = LinearizedPolynomial(T, s, tuple(coeffs))
    L0, _ = L.normalize()
    assume(L0.sigma_degree >= 1)
    n_L, n_P = lz.root_count_via_eigenspaces(L)
    assert n_L == T.q ** lz.kernel_dimension_bruteforce(L)
    assert n_P == lz.projective_roots_bruteforce(L0.projective())


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 2 ** 32), st.integers(1, 9))
def test_point_weights_account_for_every_vector(seed, dim):
    T = tower(2, 1, 5)
    U = geo.random_subspace(T, 3, dim, random.Random(seed))
    w = geo.point_weights(U)
    assert int(((2 ** w) - 1).sum()) == 2 ** dim - 1
    # and each line's weight is consistent with its points
    data = geo.line_data(U)
    assert data.weights.max() <= dim


@settings(max_examples=30, deadline=None)
@given(st.lists(st.lists(st.integers(0, 242), min_size=5, max_size=5), min_size=1, max_size=6))
def test_rank_weight_bounds(rows):
    T = tower(3, 1, 5)
    for v in rows:
        r = codes.rank_weight(v, T)
        assert 0 <= r <= 5
        assert (r == 0) == (not any(v))
        assert r <= sum(1 for x in v if x)


@settings(max_examples=25, deadline=None)
@given(st.lists(st.lists(st.integers(0, 242), min_size=7, max_size=7), min_size=1, max_size=40))
def test_batch_support_backends_agree(rows):
    vecs = np.array(rows, dtype=np.int64)
    F = tower(3, 1, 5).Fqm
    outs = [np.asarray(kernels.get_backend(n).batch_support(vecs, F)) for n in kernels.available_backends()]
    for o in outs[1:]:
        assert np.array_equal(outs[0], o)


@settings(max_examples=30, deadline=None)
@given(st.lists(st.lists(st.integers(0, 31), min_size=3, max_size=3), min_size=1, max_size=6))
def test_span_is_canonical(vectors):
    T = tower(2, 1, 5)
    vectors = [v for v in vectors if any(v)] or [[1, 0, 0]]
    U = FqSubspace.span(T, 3, vectors)
    V = FqSubspace.span(T, 3, list(reversed(vectors)))
    assert U == V
    assert all(U.contains(v) for v in vectors)


@settings(max_examples=30, deadline=None)
@given(st.lists(st.lists(st.integers(0, 4), min_size=4, max_size=4), min_size=1, max_size=4))
def test_rank_nullity(rows):
    F = tower(5, 1, 3).Fp
    r = linalg.rank(F, rows)
    assert r + len(linalg.nullspace(F, rows, 4)) == 4
