"""Rank-metric codes attached to q-systems.

A nondegenerate [n, k]_{q^m/q} code C with generator G corresponds to the
F_q-span U of the columns of G.  The codeword x.G has rank weight
n - dim_{F_q}(U cap x^perp), which links code weights to hyperplane weights.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from . import geometry, kernels, linalg
from .errors import InvariantBreach, PreconditionError, check_budget
from .field import FieldParams, GF
from .geometry import FqSubspace


@dataclass(frozen=True)
class RankCode:
    tower: FieldParams = field(repr=False)
    generator: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        G = tuple(tuple(int(x) for x in row) for row in self.generator)
        object.__setattr__(self, "generator", G)
        if not G or len({len(r) for r in G}) != 1:
            raise PreconditionError("generator must be a non-empty rectangular matrix")
        if linalg.rank(self.tower.Fqm, G) != len(G):
            raise PreconditionError("generator rows are not F_{q^m}-independent")

    @property
    def k(self) -> int:
        return len(self.generator)

    @property
    def n(self) -> int:
        return len(self.generator[0])

    def G(self) -> np.ndarray:
        return np.asarray(self.generator, dtype=np.int64)

    def encode(self, messages) -> np.ndarray:
        F = self.tower.Fqm
        M = np.atleast_2d(np.asarray(messages, dtype=np.int64))
        G = self.G()
        out = np.zeros((M.shape[0], self.n), dtype=np.int64)
        for i in range(self.k):
            out = F.vadd(out, F.vmul(M[:, i:i + 1], G[i][None, :]))
        return out

    def same_code(self, other: "RankCode") -> bool:
        return linalg.same_row_space(self.tower.Fqm, self.generator, other.generator)


@dataclass(frozen=True)
class RankWeightDistribution:
    counts: dict[int, int]
    n: int
    k: int
    q: int
    m: int

    def __post_init__(self):
        if sum(self.counts.values()) != self.q ** (self.m * self.k) or self.counts.get(0) != 1:
            raise InvariantBreach("weight distribution does not account for every codeword")

    @property
    def d_min(self) -> int:
        return min(w for w, c in self.counts.items() if w and c)

    @property
    def nonzero_weights(self) -> list[int]:
        return sorted(w for w, c in self.counts.items() if w and c)

    def to_json(self) -> dict:
        return {str(w): c for w, c in sorted(self.counts.items()) if c}


# -- the correspondence ---------------------------------------------------------

def psi(U: FqSubspace) -> RankCode:
    """Code whose generator columns are the stored basis vectors of U."""
    if U.fqm_rank() != U.ambient_k:
        raise PreconditionError("U does not span F_{q^m}^k")
    G = tuple(tuple(v[i] for v in U.basis) for i in range(U.ambient_k))
    return RankCode(U.tower, G)


def phi(C: RankCode) -> FqSubspace:
    cols = [tuple(row[j] for row in C.generator) for j in range(C.n)]
    U = FqSubspace.span(C.tower, C.k, cols)
    if U.dim_q != C.n:
        raise PreconditionError("degenerate code: columns are F_q-dependent")
    return U


# -- rank weight and support ------------------------------------------------------

def rank_weight(v: Sequence[int], tower: FieldParams) -> int:
    return int(kernels.batch_support(np.asarray([v], dtype=np.int64), tower.Fqm)[0])


def rank_support(v: Sequence[int], tower: FieldParams) -> tuple[tuple[int, ...], ...]:
    """RREF basis over F_q of the row space of the m x n coefficient matrix of v."""
    ranks, A = kernels.batch_support(np.asarray([v], dtype=np.int64), tower.Fqm, want_rref=True)
    return tuple(tuple(int(x) for x in row) for row in A[0, :ranks[0]])


def projective_reps(Q: int, k: int) -> np.ndarray:
    """Messages with first nonzero entry 1, lexicographic; matches point indexing for k = 3."""
    blocks = []
    for lead in range(k):
        tail = k - lead - 1
        idx = np.arange(Q ** tail, dtype=np.int64)
        block = np.zeros((idx.size, k), dtype=np.int64)
        block[:, lead] = 1
        for j in range(k - 1, lead, -1):
            block[:, j] = idx % Q
            idx = idx // Q
        blocks.append(block)
    return np.concatenate(blocks[::-1])


def _codeword_ranks(C: RankCode, budget: int | None, want_rref: bool = False):
    Q = C.tower.Q
    n_reps = (Q ** C.k - 1) // (Q - 1)
    check_budget("codeword enumeration", n_reps * C.n * C.tower.m, budget)
    reps = projective_reps(Q, C.k)
    return reps, kernels.batch_support(C.encode(reps), C.tower.Fqm, want_rref=want_rref)


def weight_distribution_direct(C: RankCode, budget: int | None = None) -> RankWeightDistribution:
    _, ranks = _codeword_ranks(C, budget)
    Q = C.tower.Q
    counts = {0: 1}
    for w, c in zip(*np.unique(ranks, return_counts=True)):
        counts[int(w)] = int(c) * (Q - 1)
    return RankWeightDistribution(counts, C.n, C.k, C.tower.q, C.tower.m)


def weight_distribution_geometric(C: RankCode, budget: int | None = None) -> RankWeightDistribution:
    """W_w = (q^m - 1) * #(lines of weight n - w) in the associated system (k = 3)."""
    if C.k != 3:
        raise PreconditionError("the hyperplane route is implemented for k = 3")
    spec = geometry.weight_spectrum(phi(C), 2, budget)
    Q = C.tower.Q
    counts = {0: 1}
    for wt, c in spec.counts.items():
        counts[C.n - wt] = counts.get(C.n - wt, 0) + c * (Q - 1)
    return RankWeightDistribution(counts, C.n, C.k, C.tower.q, C.tower.m)


def weight_distribution(C: RankCode, budget: int | None = None) -> RankWeightDistribution:
    """Direct enumeration, cross-checked against the hyperplane spectrum when k = 3."""
    direct = weight_distribution_direct(C, budget)
    if C.k == 3:
        geo = weight_distribution_geometric(C, budget)
        if geo.counts != direct.counts:
            raise InvariantBreach(f"weight distribution routes disagree: {direct.counts} vs {geo.counts}")
    return direct


# -- minimality -------------------------------------------------------------------

@dataclass(frozen=True)
class MinimalityResult:
    holds: bool
    pair: tuple | None           # (u, v) messages with supp(u) strictly inside supp(v)
    by_supports: bool
    by_cutting: bool | None

    def __bool__(self) -> bool:
        return self.holds


def _normalized_vectors(Fq: GF, basis: list[list[int]]) -> list[tuple[int, ...]]:
    """Nonzero vectors of span(basis) with leading entry 1 (one per F_q-line)."""
    q = Fq.order
    d = len(basis)
    out = []
    for lead in range(d):
        for tail in range(q ** (d - lead - 1)):
            coeffs = [0] * d
            coeffs[lead] = 1
            t = tail
            for j in range(d - 1, lead, -1):
                coeffs[j] = t % q
                t //= q
            vec = [0] * len(basis[0])
            for c, b in zip(coeffs, basis):
                if c:
                    vec = [Fq.add(x, Fq.mul(c, y)) for x, y in zip(vec, b)]
            out.append(tuple(vec))
    return out


def _support_complements(C: RankCode, budget: int | None):
    reps, (ranks, A) = _codeword_ranks(C, budget, want_rref=True)
    Fq = C.tower.Fq
    comps = []
    for r, M in zip(ranks.tolist(), A):
        rows = M[:r].tolist()
        comps.append(linalg.orthogonal_complement(Fq, rows, C.n) if r else linalg.identity(C.n))
    return reps, ranks, A, comps


def minimal_pair_by_index(C: RankCode, budget: int | None = None) -> tuple | None:
    """First (u, v) with supp(u) inside supp(v), u != v projectively, or None.

    supp(u) <= supp(v) iff K_v <= K_u for the orthogonal complements K; each rep
    is indexed under every normalized vector of its K, and the candidates for v
    are intersected over a basis of K_v.
    """
    reps, ranks, _, comps = _support_complements(C, budget)
    Fq = C.tower.Fq
    index: dict[tuple[int, ...], set[int]] = {}
    for u, K in enumerate(comps):
        if K:
            for y in _normalized_vectors(Fq, K):
                index.setdefault(y, set()).add(u)
    for v, K in enumerate(comps):
        if not K:  # full support contains every other support
            if len(reps) > 1:
                u = 1 if v == 0 else 0
                return tuple(int(x) for x in reps[u]), tuple(int(x) for x in reps[v])
            continue
        # RREF rows are already normalized
        cand = index.get(tuple(K[0]), set()) - {v}
        for y in K[1:]:
            if not cand:
                break
            cand = cand & index.get(tuple(y), set())
        if cand:
            u = min(cand)
            return tuple(int(x) for x in reps[u]), tuple(int(x) for x in reps[v])
    return None


def minimal_pair_by_bitmask(C: RankCode, budget: int | None = None) -> tuple | None:
    """Literal all-pairs containment test on supports encoded as member bitmasks (small q^n)."""
    q, n = C.tower.q, C.n
    if q ** n > 4096:
        raise PreconditionError("bitmask mode needs q^n <= 4096")
    words = (q ** n + 63) // 64
    Q = C.tower.Q
    n_reps = (Q ** C.k - 1) // (Q - 1)
    check_budget("pairwise supports", n_reps ** 2 * words, budget)
    reps, ranks, A, _ = _support_complements(C, budget)
    Fq = C.tower.Fq
    masks = np.zeros((len(reps), words), dtype=np.uint64)
    for t, (r, M) in enumerate(zip(ranks.tolist(), A)):
        for vec in [(0,) * n] + (_normalized_vectors(Fq, M[:r].tolist()) if r else []):
            for c in range(1, q) if any(vec) else [1]:
                code = linalg.from_digits([Fq.mul(c, x) for x in vec], q)
                masks[t, code // 64] |= np.uint64(1) << np.uint64(code % 64)
    for v in range(len(reps)):
        inside = np.all((masks & ~masks[v]) == 0, axis=1)
        inside[v] = False
        hit = np.nonzero(inside)[0]
        if hit.size:
            return tuple(int(x) for x in reps[hit[0]]), tuple(int(x) for x in reps[v])
    return None


def is_minimal(C: RankCode, budget: int | None = None, mode: str = "index") -> MinimalityResult:
    """Route (a): support containment over projective codewords; route (b): cutting system."""
    if C.k == 1:
        return MinimalityResult(True, None, True, True)
    finder = {"index": minimal_pair_by_index, "bitmask": minimal_pair_by_bitmask}.get(mode)
    if finder is None:
        raise PreconditionError(f"unknown mode {mode!r}")
    pair = finder(C, budget)
    by_supports = pair is None
    by_cutting = None
    if C.k == 3:
        by_cutting = geometry.is_cutting(phi(C), 1, budget).holds
        if by_cutting != by_supports:
            raise InvariantBreach("minimality routes disagree")
    return MinimalityResult(by_supports, pair, by_supports, by_cutting)


# -- duality and covering radius ------------------------------------------------------

def dual_code(C: RankCode) -> RankCode:
    H = linalg.nullspace(C.tower.Fqm, [list(r) for r in C.generator], C.n)
    return RankCode(C.tower, tuple(tuple(r) for r in H))


def coset_weight(v: Sequence[int], C: RankCode, stop_at: int = -1) -> int:
    """min over c in C of rank(v - c) by full enumeration of C (early exit at stop_at)."""
    check_budget("coset enumeration", C.tower.Q ** C.k, 1 << 24)
    return int(kernels.coset_min_rank(np.asarray(v, dtype=np.int64), C.G(), C.tower.Fqm, stop_at))


def covering_radius_lower_bound(C: RankCode, sample_budget: int = 16, seed: int = 0,
                                extra: Sequence[Sequence[int]] = ()) -> int:
    """max over sampled v of the exact coset weight; a certified lower bound on rho_rk(C)."""
    F = C.tower.Fqm
    rng = random.Random(seed)
    samples = [list(v) for v in extra]
    samples += [[rng.randrange(F.order) for _ in range(C.n)] for _ in range(sample_budget)]
    best = 0
    for v in samples:
        # a coset whose weight cannot beat the current bound is abandoned early
        best = max(best, coset_weight(v, C, stop_at=best))
    return best


def syndrome_distance(v: Sequence[int], C: RankCode, budget: int | None = None) -> int:
    """Coset weight of v in the dual of C read geometrically (k = 3).

    With s = G v^T, the weight is the least r such that <s> lies in the span of
    r points of L_U, U = phi(C).
    """
    if C.k != 3:
        raise PreconditionError("k = 3 required")
    F = C.tower.Fqm
    s = [0] * 3
    for i, row in enumerate(C.generator):
        for x, y in zip(row, v):
            s[i] = F.add(s[i], F.mul(x, y))
    if not any(s):
        return 0
    U = phi(C)
    pts = np.asarray([p for p, _ in geometry.linear_set_points(U, budget)], dtype=np.int64)
    idx = int(kernels.projective_index([s], F)[0])
    if idx in set(kernels.projective_index(pts, F).tolist()):
        return 1
    covered = kernels.saturation_cover(pts, F)
    return 2 if covered[idx] else 3
