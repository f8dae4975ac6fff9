# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled enumeration kernels.  See ``_fallback`` for the reference semantics."""

import numpy as np
from libc.stdint cimport int64_t

NAME = "cython"


cdef class _Tab:
    """Code-level arithmetic of one GF level, from its tables."""
    cdef int64_t p, Q, B, H, n1
    cdef const int64_t[:] exp_t
    cdef const int64_t[:] log_t
    cdef const int64_t[:] add_lo
    cdef const int64_t[:] add_hi
    cdef const int64_t[:] neg_t

    def __init__(self, F):
        self.p = F.p
        self.Q = F.order
        self.B = F._B
        self.H = F._H
        self.n1 = F.order - 1
        self.exp_t = F.exp_table
        self.log_t = F.log_table
        self.add_lo = F.add_lo
        self.add_hi = F.add_hi
        self.neg_t = F.neg_table

    cdef inline int64_t add(self, int64_t a, int64_t b) noexcept nogil:
        if self.p == 2:
            return a ^ b
        return (self.add_hi[(a // self.B) * self.H + b // self.B] * self.B
                + self.add_lo[(a % self.B) * self.B + b % self.B])

    cdef inline int64_t mul(self, int64_t a, int64_t b) noexcept nogil:
        if a == 0 or b == 0:
            return 0
        return self.exp_t[self.log_t[a] + self.log_t[b]]

    cdef inline int64_t inv(self, int64_t a) noexcept nogil:
        return self.exp_t[(self.n1 - self.log_t[a]) % self.n1]

    cdef inline int64_t neg(self, int64_t a) noexcept nogil:
        return self.neg_t[a]

    cdef inline int64_t index(self, int64_t x0, int64_t x1, int64_t x2) noexcept nogil:
        cdef int64_t inv
        if x0 != 0:
            inv = self.inv(x0)
            return 1 + self.Q + self.mul(x1, inv) * self.Q + self.mul(x2, inv)
        if x1 != 0:
            return 1 + self.mul(x2, self.inv(x1))
        if x2 != 0:
            return 0
        return -1


cdef class _Small:
    """Full add/mul tables of a small field F_q."""
    cdef int64_t q
    cdef int64_t[:, :] add_t
    cdef int64_t[:, :] mul_t
    cdef int64_t[:] inv_t
    cdef int64_t[:] neg_t

    def __init__(self, Fq):
        q = Fq.order
        self.q = q
        self.add_t = np.array([[Fq.add(x, y) for y in range(q)] for x in range(q)], dtype=np.int64)
        self.mul_t = np.array([[Fq.mul(x, y) for y in range(q)] for x in range(q)], dtype=np.int64)
        self.inv_t = np.array([Fq.inv(x) if x else 0 for x in range(q)], dtype=np.int64)
        self.neg_t = np.array(Fq.neg_table[:q], dtype=np.int64)


cdef int64_t _eliminate(_Small S, int64_t[:, :] A, int64_t m, int64_t n) noexcept nogil:
    """In-place RREF of the m x n matrix A over F_q; returns the rank."""
    cdef int64_t r = 0, c, i, j, piv, tmp, iv, f
    for c in range(n):
        if r == m:
            break
        piv = -1
        for i in range(r, m):
            if A[i, c] != 0:
                piv = i
                break
        if piv < 0:
            continue
        if piv != r:
            for j in range(n):
                tmp = A[r, j]
                A[r, j] = A[piv, j]
                A[piv, j] = tmp
        iv = S.inv_t[A[r, c]]
        if iv != 1:
            for j in range(n):
                A[r, j] = S.mul_t[iv, A[r, j]]
        for i in range(m):
            if i != r and A[i, c] != 0:
                f = S.neg_t[A[i, c]]
                for j in range(n):
                    if A[r, j] != 0:
                        A[i, j] = S.add_t[A[i, j], S.mul_t[f, A[r, j]]]
        r += 1
    return r


def projective_index(vecs, F):
    cdef const int64_t[:, :] V = np.ascontiguousarray(np.asarray(vecs, dtype=np.int64).reshape(-1, 3))
    cdef _Tab T = _Tab(F)
    cdef Py_ssize_t N = V.shape[0], i
    out = np.empty(N, dtype=np.int64)
    cdef int64_t[:] o = out
    with nogil:
        for i in range(N):
            o[i] = T.index(V[i, 0], V[i, 1], V[i, 2])
    return out


def line_incidence(point_idx, mult, F):
    cdef _Tab T = _Tab(F)
    cdef int64_t Q = F.order
    cdef int64_t nlines = Q * Q + Q + 1
    cdef const int64_t[:] pidx = np.ascontiguousarray(point_idx, dtype=np.int64)
    cdef const int64_t[:] mu = np.ascontiguousarray(mult, dtype=np.int64)
    vec_counts = np.zeros(nlines, dtype=np.int64)
    pt_counts = np.zeros(nlines, dtype=np.int64)
    cdef int64_t[:] vc = vec_counts
    cdef int64_t[:] pc = pt_counts
    cdef Py_ssize_t k
    cdef int64_t idx, p0, p1, p2, y, z, inv2, line, w
    with nogil:
        for k in range(pidx.shape[0]):
            idx = pidx[k]
            w = mu[k]
            if idx == 0:
                p0 = 0; p1 = 0; p2 = 1
            elif idx <= Q:
                p0 = 0; p1 = 1; p2 = idx - 1
            else:
                p0 = 1; p1 = (idx - 1 - Q) // Q; p2 = (idx - 1 - Q) % Q
            if p2 != 0:
                inv2 = T.inv(p2)
                for y in range(Q):
                    z = T.neg(T.mul(T.add(p0, T.mul(y, p1)), inv2))
                    line = 1 + Q + y * Q + z
                    vc[line] += w
                    pc[line] += 1
                line = 1 + T.neg(T.mul(p1, inv2))
            elif p1 != 0:
                y = T.neg(T.mul(p0, T.inv(p1)))
                for z in range(Q):
                    line = 1 + Q + y * Q + z
                    vc[line] += w
                    pc[line] += 1
                line = 0
            else:
                for z in range(Q):
                    line = 1 + z
                    vc[line] += w
                    pc[line] += 1
                line = 0
            vc[line] += w
            pc[line] += 1
    return vec_counts, pt_counts


def batch_support(vecs, Fqm, want_rref=False):
    cdef const int64_t[:, :] V = np.ascontiguousarray(vecs, dtype=np.int64)
    cdef Py_ssize_t N = V.shape[0], n = V.shape[1], t, i, j
    cdef _Small S = _Small(Fqm.sub)
    cdef int64_t q = Fqm.sub.order, m = Fqm.degree, x
    ranks = np.empty(N, dtype=np.int64)
    cdef int64_t[:] rk = ranks
    out = np.zeros((N if want_rref else 1, m, n), dtype=np.int64)
    cdef int64_t[:, :, :] A = out
    cdef int64_t[:, :] W
    cdef bint keep = want_rref
    for t in range(N):
        W = A[t if keep else 0]
        with nogil:
            for i in range(n):
                x = V[t, i]
                for j in range(m):
                    W[j, i] = x % q
                    x = x // q
            rk[t] = _eliminate(S, W, m, n)
    if want_rref:
        return ranks, out
    return ranks


def saturation_cover(points, F):
    cdef const int64_t[:, :] P = np.ascontiguousarray(np.asarray(points, dtype=np.int64).reshape(-1, 3))
    cdef _Tab T = _Tab(F)
    cdef int64_t Q = F.order
    covered = np.zeros(Q * Q + Q + 1, dtype=np.uint8)
    cdef unsigned char[:] cov = covered
    cdef Py_ssize_t np_ = P.shape[0], i, j
    cdef int64_t t
    with nogil:
        for i in range(np_):
            cov[T.index(P[i, 0], P[i, 1], P[i, 2])] = 1
        for i in range(np_):
            for j in range(i + 1, np_):
                for t in range(Q):
                    cov[T.index(T.add(P[i, 0], T.mul(t, P[j, 0])),
                                T.add(P[i, 1], T.mul(t, P[j, 1])),
                                T.add(P[i, 2], T.mul(t, P[j, 2])))] = 1
    return covered


def coset_min_rank(target, gen, Fqm, int64_t stop_at=-1, chunk=None):
    cdef const int64_t[:] tv = np.ascontiguousarray(target, dtype=np.int64)
    cdef const int64_t[:, :] G = np.ascontiguousarray(gen, dtype=np.int64)
    cdef Py_ssize_t k = G.shape[0], n = G.shape[1], i, j, lvl
    cdef _Tab T = _Tab(Fqm)
    cdef _Small S = _Small(Fqm.sub)
    cdef int64_t Q = Fqm.order, q = Fqm.sub.order, m = Fqm.degree
    cdef int64_t best = n + 1, r, d, x
    # M[i, x, j] = -(x * G[i, j]);  P[l] = target + sum_{t >= l} M[t, dig[t]]
    mult_arr = np.zeros((k, Q, n), dtype=np.int64)
    cdef int64_t[:, :, :] M = mult_arr
    for i in range(k):
        for x in range(Q):
            for j in range(n):
                M[i, x, j] = T.neg(T.mul(x, G[i, j]))
    partial = np.zeros((k + 1, n), dtype=np.int64)
    cdef int64_t[:, :] P = partial
    for j in range(n):
        for i in range(k + 1):
            P[i, j] = tv[j]
    digits_arr = np.zeros(k, dtype=np.int64)
    work = np.zeros((m, n), dtype=np.int64)
    cdef int64_t[:] dig = digits_arr
    cdef int64_t[:, :] W = work
    cdef bint done = False
    with nogil:
        while not done:
            for j in range(n):
                d = P[0, j]
                for i in range(m):
                    W[i, j] = d % q
                    d = d // q
            r = _eliminate(S, W, m, n)
            if r < best:
                best = r
                if best <= stop_at:
                    break
            # odometer over message digits, digit 0 fastest
            lvl = 0
            while True:
                if lvl == k:
                    done = True
                    break
                dig[lvl] += 1
                if dig[lvl] < Q:
                    break
                dig[lvl] = 0
                lvl += 1
            if done:
                break
            # refresh the partial sums below the changed level
            i = lvl
            while i >= 0:
                for j in range(n):
                    P[i, j] = T.add(P[i + 1, j], M[i, dig[i], j])
                i -= 1
    return best
