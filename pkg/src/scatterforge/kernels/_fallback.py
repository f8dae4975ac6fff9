"""Pure-Python (numpy) implementations of the enumeration kernels.

Same signatures and results as the compiled ``_core`` module; selected when
the extension is not built or ``SCATTERFORGE_KERNELS=python``.

Point and line indices of PG(2, Q) follow one lexicographic order on
normalized coordinates (leftmost nonzero entry equal to 1):

    (0, 0, 1) -> 0,   (0, 1, z) -> 1 + z,   (1, y, z) -> 1 + Q + y*Q + z.
"""

from __future__ import annotations

import numpy as np

NAME = "python"


def projective_index(vecs, F):
    v = np.asarray(vecs, dtype=np.int64).reshape(-1, 3)
    Q = F.order
    x0, x1, x2 = v[:, 0], v[:, 1], v[:, 2]
    lead = np.where(x0 != 0, x0, np.where(x1 != 0, x1, x2))
    inv = F.vinv(lead)
    y1 = F.vmul(x1, inv)
    y2 = F.vmul(x2, inv)
    return np.where(x0 != 0, 1 + Q + y1 * Q + y2,
                    np.where(x1 != 0, 1 + y2, np.where(x2 != 0, 0, -1)))


def _lines_through(p0, p1, p2, F, allF):
    Q = F.order
    if p2:
        inv2 = F.inv(p2)
        z = F.vneg(F.vmul(F.vadd(p0, F.vmul(allF, p1)), inv2))
        extra = 1 + F.neg(F.mul(p1, inv2))
        return np.concatenate([1 + Q + allF * Q + z, [extra]])
    if p1:
        y = F.neg(F.div(p0, p1))
        return np.concatenate([1 + Q + y * Q + allF, [0]])
    return np.concatenate([1 + allF, [0]])


def line_incidence(point_idx, mult, F):
    """Per line: summed multiplicity and number of listed points on it."""
    Q = F.order
    nlines = Q * Q + Q + 1
    vec_counts = np.zeros(nlines, dtype=np.int64)
    pt_counts = np.zeros(nlines, dtype=np.int64)
    allF = np.arange(Q, dtype=np.int64)
    for idx, mu in zip(np.asarray(point_idx).tolist(), np.asarray(mult).tolist()):
        p = point_from_index(idx, Q)
        lines = _lines_through(*p, F, allF)
        vec_counts[lines] += mu
        pt_counts[lines] += 1
    return vec_counts, pt_counts


def point_from_index(idx: int, Q: int) -> tuple[int, int, int]:
    if idx == 0:
        return (0, 0, 1)
    if idx <= Q:
        return (0, 1, idx - 1)
    y, z = divmod(idx - 1 - Q, Q)
    return (1, y, z)


def _small_tables(Fq):
    q = Fq.order
    a = np.arange(q, dtype=np.int64)
    add = np.array([[Fq.add(x, y) for y in range(q)] for x in range(q)], dtype=np.int64)
    mul = np.array([[Fq.mul(x, y) for y in range(q)] for x in range(q)], dtype=np.int64)
    inv = np.array([Fq.inv(x) if x else 0 for x in range(q)], dtype=np.int64)
    neg = Fq.neg_table[a]
    return add, mul, inv, neg


def batch_support(vecs, Fqm, want_rref: bool = False):
    """F_q-rank (and optionally RREF) of the m x n coordinate matrix of each row.

    Row t of ``vecs`` is a vector (v_1..v_n) over F_{q^m}; column i of its
    coordinate matrix is the F_q-digit vector of v_i.  Returns ``ranks`` of shape
    (N,) and, if requested, the RREF array of shape (N, m, n) whose first
    ``rank`` rows span the rank support.
    """
    V = np.asarray(vecs, dtype=np.int64)
    N, n = V.shape
    Fq = Fqm.sub
    q, m = Fq.order, Fqm.degree
    add, mul, inv, neg = _small_tables(Fq)
    A = np.empty((N, m, n), dtype=np.int64)
    rest = V.copy()
    for j in range(m):
        A[:, j, :] = rest % q
        rest //= q
    rank = np.zeros(N, dtype=np.int64)
    rows = np.arange(m)
    for c in range(n):
        cand = (A[:, :, c] != 0) & (rows[None, :] >= rank[:, None])
        has = cand.any(axis=1)
        sel = np.nonzero(has)[0]
        if sel.size == 0:
            continue
        piv = np.argmax(cand[sel], axis=1)
        r = rank[sel]
        row_p = A[sel, piv, :].copy()
        row_r = A[sel, r, :].copy()
        A[sel, r, :] = row_p
        A[sel, piv, :] = row_r
        pv = A[sel, r, c]
        prow = mul[inv[pv][:, None], A[sel, r, :]]
        A[sel, r, :] = prow
        f = A[sel, :, c].copy()
        f[np.arange(sel.size), r] = 0
        A[sel] = add[A[sel], neg[mul[f[:, :, None], prow[:, None, :]]]]
        rank[sel] += 1
    if want_rref:
        return rank, A
    return rank


def saturation_cover(points, F):
    """Mark every point of PG(2, Q) lying on a line joining two listed points."""
    P = np.asarray(points, dtype=np.int64).reshape(-1, 3)
    Q = F.order
    covered = np.zeros(Q * Q + Q + 1, dtype=np.uint8)
    covered[projective_index(P, F)] = 1
    allF = np.arange(Q, dtype=np.int64)
    for i in range(len(P) - 1):
        rest = P[i + 1:]
        # P_i + t * P_j for all t, all j > i
        pts = np.stack([F.vadd(P[i, c], F.vmul(allF[None, :], rest[:, c][:, None])) for c in range(3)], axis=-1)
        covered[projective_index(pts.reshape(-1, 3), F)] = 1
    return covered


def coset_min_rank(target, gen, Fqm, stop_at: int = -1, chunk: int = 1 << 15):
    """min over codewords c of the F_q-rank of (target - c); early exit at ``stop_at``."""
    t = np.asarray(target, dtype=np.int64)
    G = np.asarray(gen, dtype=np.int64)
    k, n = G.shape
    Q = Fqm.order
    total = Q ** k
    best = n + 1
    for start in range(0, total, chunk):
        idx = np.arange(start, min(total, start + chunk), dtype=np.int64)
        cw = np.zeros((idx.size, n), dtype=np.int64)
        rest = idx.copy()
        for i in range(k):
            x = rest % Q
            rest //= Q
            cw = Fqm.vadd(cw, Fqm.vmul(x[:, None], G[i][None, :]))
        diff = Fqm.vsub(t[None, :], cw)
        r = int(batch_support(diff, Fqm).min())
        best = min(best, r)
        if best <= stop_at:
            break
    return best
