"""F_q-subspaces of F_{q^m}^k viewed as q-systems, and the linear sets they define.

Vectors are tuples of ``tower.Fqm`` codes.  An F_q-subspace is stored through an
F_q-basis; its canonical form is the RREF over F_q of the k*m digit expansion
(coordinate j occupies columns j*m .. j*m+m-1, power basis of the defining
polynomial root).

Points and lines of PG(2, q^m) are indexed as in :mod:`scatterforge.kernels`:
normalized representative (leftmost nonzero entry 1), lexicographic order.  A
line is named by the point of its dual coordinates a, i.e. {x : a.x = 0}.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from math import comb
from typing import Iterable, Sequence

import numpy as np

from . import kernels, linalg
from .errors import PreconditionError, check_budget
from .field import FieldParams, GF

Vector = tuple[int, ...]


def _expand(F: GF, v: Sequence[int]) -> list[int]:
    out: list[int] = []
    for x in v:
        out.extend(linalg.to_digits(int(x), F.sub.order, F.degree))
    return out


def _contract(F: GF, digits: Sequence[int], k: int) -> Vector:
    m, q = F.degree, F.sub.order
    return tuple(linalg.from_digits(digits[j * m:(j + 1) * m], q) for j in range(k))


@dataclass(frozen=True)
class Verdict:
    """Outcome of an exhaustive predicate: either a witness or the enumeration size."""

    holds: bool
    witness: object = None
    checked: int = 0

    def __bool__(self) -> bool:
        return self.holds


@dataclass(frozen=True, eq=False)
class FqSubspace:
    tower: FieldParams = field(repr=False)
    ambient_k: int
    basis: tuple[Vector, ...]

    def __post_init__(self):
        F = self.tower.Fqm
        basis = tuple(tuple(int(x) for x in v) for v in self.basis)
        if any(len(v) != self.ambient_k for v in basis):
            raise PreconditionError("basis vector of wrong length")
        object.__setattr__(self, "basis", basis)
        rows, _ = linalg.rref(F.sub, [_expand(F, v) for v in basis])
        if len(rows) != len(basis):
            raise PreconditionError("basis vectors are not F_q-independent")
        object.__setattr__(self, "_canonical", tuple(tuple(r) for r in rows))

    @classmethod
    def span(cls, tower: FieldParams, k: int, vectors: Iterable[Sequence[int]]) -> "FqSubspace":
        """Subspace spanned by arbitrary vectors; the stored basis is the canonical one."""
        F = tower.Fqm
        rows, _ = linalg.rref(F.sub, [_expand(F, v) for v in vectors])
        return cls(tower, k, tuple(_contract(F, r, k) for r in rows))

    @property
    def dim_q(self) -> int:
        return len(self.basis)

    @property
    def canonical(self) -> tuple[tuple[int, ...], ...]:
        return self._canonical

    def __eq__(self, other) -> bool:
        if not isinstance(other, FqSubspace):
            return NotImplemented
        return self.ambient_k == other.ambient_k and self._canonical == other._canonical

    def __hash__(self) -> int:
        return hash((self.ambient_k, self._canonical))

    def contains(self, v: Sequence[int]) -> bool:
        F = self.tower.Fqm
        return linalg.rank(F.sub, list(self._canonical) + [_expand(F, v)]) == self.dim_q

    def vectors(self, budget: int | None = None) -> np.ndarray:
        """All q^n vectors, shape (q^n, k); row index = base-q digits of the coefficients."""
        F = self.tower.Fqm
        q = self.tower.q
        check_budget("subspace enumeration", q ** self.dim_q, budget)
        out = np.zeros((1, self.ambient_k), dtype=np.int64)
        for b in self.basis:
            bv = np.asarray(b, dtype=np.int64)
            layers = [F.vadd(out, F.vmul(c, bv)[None, :]) for c in range(q)]
            out = np.stack(layers, axis=1).reshape(-1, self.ambient_k)
        return out

    def fqm_rank(self) -> int:
        return linalg.rank(self.tower.Fqm, [list(v) for v in self.basis]) if self.basis else 0

    def map(self, fn) -> "FqSubspace":
        """Image under an F_q-semilinear map given on vectors."""
        return FqSubspace.span(self.tower, self.ambient_k, [fn(v) for v in self.basis])


@dataclass(frozen=True, eq=False)
class ProjectiveSubspace:
    tower: FieldParams = field(repr=False)
    ambient_k: int
    basis: tuple[Vector, ...]

    def __post_init__(self):
        F = self.tower.Fqm
        rows, _ = linalg.rref(F, [list(v) for v in self.basis])
        if len(rows) != len(self.basis):
            raise PreconditionError("basis is not F_{q^m}-independent")
        object.__setattr__(self, "_canonical", tuple(tuple(r) for r in rows))

    @property
    def dim_qm(self) -> int:
        return len(self.basis)

    def __eq__(self, other) -> bool:
        if not isinstance(other, ProjectiveSubspace):
            return NotImplemented
        return self.ambient_k == other.ambient_k and self._canonical == other._canonical

    def __hash__(self) -> int:
        return hash((self.ambient_k, self._canonical))

    def annihilator(self) -> list[list[int]]:
        """Rows a with a.h = 0 for every h in the subspace."""
        F = self.tower.Fqm
        if not self.basis:
            return linalg.identity(self.ambient_k)
        return linalg.nullspace(F, [list(v) for v in self.basis], self.ambient_k)

    @classmethod
    def point(cls, tower: FieldParams, idx: int) -> "ProjectiveSubspace":
        return cls(tower, 3, (kernels.point_from_index(idx, tower.Q),))

    @classmethod
    def line(cls, tower: FieldParams, idx: int) -> "ProjectiveSubspace":
        a = list(kernels.point_from_index(idx, tower.Q))
        basis = linalg.nullspace(tower.Fqm, [a], 3)
        return cls(tower, 3, tuple(tuple(v) for v in basis))

    @classmethod
    def full(cls, tower: FieldParams, k: int) -> "ProjectiveSubspace":
        return cls(tower, k, tuple(tuple(r) for r in linalg.identity(k)))


# -- weights ------------------------------------------------------------------------

def weight(U: FqSubspace, H: ProjectiveSubspace) -> int:
    """dim_{F_q}(U cap H): U cap H is the kernel of u -> (a.u)_a over the annihilator of H."""
    if U.ambient_k != H.ambient_k:
        raise PreconditionError("ambient dimension mismatch")
    F = U.tower.Fqm
    ann = H.annihilator()
    if not ann:
        return U.dim_q
    rows = []
    for b in U.basis:
        images = [0] * len(ann)
        for j, a in enumerate(ann):
            acc = 0
            for x, y in zip(a, b):
                acc = F.add(acc, F.mul(x, y))
            images[j] = acc
        rows.append(_expand(F, images))
    return U.dim_q - linalg.rank(F.sub, rows)


def intersection(U: FqSubspace, H: ProjectiveSubspace) -> FqSubspace:
    """U cap H as an F_q-subspace."""
    F = U.tower.Fqm
    ann = H.annihilator()
    if not ann:
        return U
    rows = []
    for b in U.basis:
        images = []
        for a in ann:
            acc = 0
            for x, y in zip(a, b):
                acc = F.add(acc, F.mul(x, y))
            images.append(acc)
        rows.append(_expand(F, images))
    # coefficient vectors c with sum c_i rows_i = 0
    kernel = linalg.nullspace(F.sub, [list(col) for col in zip(*rows)], U.dim_q) if rows else []
    vecs = []
    for c in kernel:
        v = [0] * U.ambient_k
        for ci, b in zip(c, U.basis):
            if ci:
                v = [F.add(x, F.mul(ci, y)) for x, y in zip(v, b)]
        vecs.append(v)
    return FqSubspace.span(U.tower, U.ambient_k, vecs)


def _require_plane(U: FqSubspace) -> None:
    if U.ambient_k != 3:
        raise PreconditionError("only k = 3 is supported for projective enumeration")


def point_multiplicities(U: FqSubspace, budget: int | None = None) -> np.ndarray:
    """For every point of PG(2, q^m): the number of nonzero vectors of U on it (q^w - 1)."""
    _require_plane(U)
    F = U.tower.Fqm
    idx = kernels.projective_index(U.vectors(budget)[1:], F)
    Q = F.order
    return np.bincount(idx, minlength=Q * Q + Q + 1).astype(np.int64)


def _log_q(counts: np.ndarray, q: int, maxw: int) -> np.ndarray:
    powers = np.array([q ** w - 1 for w in range(maxw + 1)], dtype=np.int64)
    w = np.searchsorted(powers, counts)
    if np.any(powers[np.minimum(w, maxw)] != counts):
        raise AssertionError("intersection size is not a power of q")  # pragma: no cover
    return w


def point_weights(U: FqSubspace, budget: int | None = None) -> np.ndarray:
    return _log_q(point_multiplicities(U, budget), U.tower.q, U.dim_q)


def linear_set_points(U: FqSubspace, budget: int | None = None) -> list[tuple[Vector, int]]:
    """Points of L_U with their weights, in index order."""
    w = point_weights(U, budget)
    Q = U.tower.Q
    return [(kernels.point_from_index(int(i), Q), int(w[i])) for i in np.nonzero(w)[0]]


@dataclass(frozen=True)
class LineData:
    weights: np.ndarray        # F_q-dimension of U cap line
    n_points: np.ndarray       # distinct points of L_U on the line


def line_data(U: FqSubspace, budget: int | None = None) -> LineData:
    """Per-line weights by incidence: |U cap l| = 1 + sum over L_U points P on l of (q^w(P) - 1)."""
    _require_plane(U)
    F = U.tower.Fqm
    mult = point_multiplicities(U, budget)
    pts = np.nonzero(mult)[0]
    Q = F.order
    check_budget("line incidence", len(pts) * (Q + 1), budget)
    vec_counts, pt_counts = kernels.line_incidence(pts, mult[pts], F)
    return LineData(_log_q(vec_counts, U.tower.q, U.dim_q), pt_counts)


def _subspace_weights(U: FqSubspace, h: int, budget: int | None) -> np.ndarray:
    if h == 1:
        return point_weights(U, budget)
    if h == 2:
        return line_data(U, budget).weights
    raise PreconditionError("h must be 1 (points) or 2 (lines) for k = 3")


def _witness(U: FqSubspace, h: int, idx: int) -> ProjectiveSubspace:
    return (ProjectiveSubspace.point if h == 1 else ProjectiveSubspace.line)(U.tower, idx)


def is_evasive(U: FqSubspace, h: int, r: int, budget: int | None = None) -> Verdict:
    """Every h-dimensional F_{q^m}-subspace meets U in F_q-dimension <= r."""
    _require_plane(U)
    if h == 0:
        return Verdict(True, checked=1)
    if h >= 3:
        return Verdict(U.dim_q <= r, None if U.dim_q <= r else ProjectiveSubspace.full(U.tower, 3), 1)
    w = _subspace_weights(U, h, budget)
    bad = np.nonzero(w > r)[0]
    if bad.size:
        return Verdict(False, _witness(U, h, int(bad[0])), len(w))
    return Verdict(True, checked=len(w))


def is_h_scattered(U: FqSubspace, h: int = 1, budget: int | None = None) -> Verdict:
    if h >= U.ambient_k:
        raise PreconditionError("h < k required")
    return is_evasive(U, h, h, budget)


def is_cutting(U: FqSubspace, t: int = 1, budget: int | None = None, method: str = "incidence") -> Verdict:
    """For every F_{q^m}-subspace H of codimension t, <U cap H>_{F_{q^m}} = H.

    ``incidence``: a line is spanned iff it holds two distinct points of L_U, a
    point iff it lies in L_U.  ``span``: row-reduce U cap H over F_{q^m} per H.
    """
    _require_plane(U)
    if t not in (1, 2):
        raise PreconditionError("t must be 1 or 2 for k = 3")
    if method == "incidence":
        if t == 1:
            n_pts = line_data(U, budget).n_points
            bad = np.nonzero(n_pts < 2)[0]
        else:
            w = point_weights(U, budget)
            bad = np.nonzero(w == 0)[0]
        if bad.size:
            return Verdict(False, _witness(U, 3 - t, int(bad[0])), None)
        Q = U.tower.Q
        return Verdict(True, checked=Q * Q + Q + 1)
    if method == "span":
        return _cutting_by_span(U, t, budget)
    raise PreconditionError(f"unknown method {method!r}")


def _cutting_by_span(U: FqSubspace, t: int, budget: int | None) -> Verdict:
    F = U.tower.Fqm
    Q = F.order
    nsub = Q * Q + Q + 1
    vecs = U.vectors(budget)[1:]
    check_budget("span-cutting", nsub * len(vecs), budget)
    need = 3 - t
    for idx in range(nsub):
        H = (ProjectiveSubspace.line if t == 1 else ProjectiveSubspace.point)(U.tower, idx)
        on = np.ones(len(vecs), dtype=bool)
        for a in H.annihilator():
            dots = np.zeros(len(vecs), dtype=np.int64)
            for j in range(3):
                dots = F.vadd(dots, F.vmul(a[j], vecs[:, j]))
            on &= dots == 0
        inside = vecs[on]
        if not len(inside) or linalg.rank(F, inside.tolist()) != need:
            return Verdict(False, H, idx + 1)
    return Verdict(True, checked=nsub)


# -- spectra ---------------------------------------------------------------------

@dataclass(frozen=True)
class WeightSpectrum:
    ambient_k: int
    subspace_dim: int
    counts: dict[int, int]
    point_counts: dict[int, int] = field(default_factory=dict)

    @property
    def total(self) -> int:
        return sum(self.counts.values())

    def to_json(self) -> dict:
        return {str(w): c for w, c in sorted(self.counts.items()) if c}


def weight_spectrum(U: FqSubspace, subspace_dim: int = 2, budget: int | None = None) -> WeightSpectrum:
    """Number of points (subspace_dim 1) or lines (2) of each weight; point_counts keys are |L_U cap X|."""
    if subspace_dim == 1:
        w = point_weights(U, budget)
        pc = np.minimum(w, 1)
    elif subspace_dim == 2:
        data = line_data(U, budget)
        w, pc = data.weights, data.n_points
    else:
        raise PreconditionError("subspace_dim must be 1 or 2")
    counts = {int(k): int(c) for k, c in zip(*np.unique(w, return_counts=True))}
    pcounts = {int(k): int(c) for k, c in zip(*np.unique(pc, return_counts=True))}
    Q = U.tower.Q
    if sum(counts.values()) != Q * Q + Q + 1:
        raise AssertionError("spectrum does not cover PG(2, q^m)")  # pragma: no cover
    return WeightSpectrum(3, subspace_dim, counts, pcounts)


def standard_equations(S_size: int, a: dict[int, int], v: int, order: int) -> tuple[bool, bool, bool]:
    """The three double-counting identities for a point set S of PG(v-1, order)."""
    def theta(t):
        return (order ** t - 1) // (order - 1)
    e1 = sum(a.values()) == theta(v)
    e2 = sum(i * c for i, c in a.items()) == S_size * theta(v - 1)
    e3 = sum(comb(i, 2) * c for i, c in a.items()) == comb(S_size, 2) * theta(v - 2)
    return e1, e2, e3


def standard_equations_check(S_size: int, spectrum: dict[int, int] | WeightSpectrum, v: int = 3,
                             order: int | None = None, q: int | None = None) -> bool:
    """Check the identities; a WeightSpectrum of lines is read through i = (q^w - 1)/(q - 1).

    For a plain dict, keys are point counts i and ``order`` is the field order.
    """
    if isinstance(spectrum, WeightSpectrum):
        if q is None or order is None:
            raise PreconditionError("q and order required to convert weights to point counts")
        a = {(q ** w - 1) // (q - 1): c for w, c in spectrum.counts.items()}
    else:
        a = dict(spectrum)
        if order is None:
            raise PreconditionError("field order required")
    return all(standard_equations(S_size, a, v, order))


def characters_closed_form(q: int, m: int) -> dict[int, int]:
    """A_2, A_3, A_4 for a cutting rank-(m+2) system containing a 2-scattered m-space."""
    if m < 5:
        raise PreconditionError("closed forms need m >= 5")
    a2 = Fraction(q ** 7 + q ** (m + 1) * (q ** 6 - q ** 5 - q ** 4 - 1)
                  + q ** (2 * m) * (q ** 7 - q ** 6 - q ** 5 + q ** 2 + 1), q ** 4 * (q + 1) * (q - 1) ** 2)
    a3 = Fraction((q ** (m - 1) - 1) * (q ** 5 + q ** m * (q ** 4 - q ** 3 - 1)), (q - 1) ** 2 * q ** 4)
    a4 = Fraction((q ** (m - 1) - 1) * (q ** (m - 4) - 1), (q + 1) * (q - 1) ** 2)
    out = {}
    for w, val in ((2, a2), (3, a3), (4, a4)):
        if val.denominator != 1:
            raise AssertionError(f"closed form A_{w} not integral at q={q}, m={m}")
        out[w] = int(val)
    return out


def characters_linear_system(q: int, m: int) -> dict[int, int]:
    """Solve the three standard equations for (A_2, A_3, A_4) exactly."""
    M = [[Fraction(1)] * 3,
         [Fraction(q ** i - 1) for i in (2, 3, 4)],
         [Fraction((q ** i - 1) * (q ** (i - 1) - 1)) for i in (2, 3, 4)]]
    rhs = [Fraction(q ** (2 * m) + q ** m + 1),
           Fraction((q ** (m + 2) - 1) * (q ** m + 1)),
           Fraction((q ** (m + 2) - 1) * (q ** (m + 1) - 1))]
    # Gauss-Jordan on a 3x3 rational system
    A = [row + [b] for row, b in zip(M, rhs)]
    for c in range(3):
        piv = next(i for i in range(c, 3) if A[i][c] != 0)
        A[c], A[piv] = A[piv], A[c]
        A[c] = [x / A[c][c] for x in A[c]]
        for i in range(3):
            if i != c:
                A[i] = [x - A[i][c] * y for x, y in zip(A[i], A[c])]
    return {w: int(A[i][3]) for i, w in enumerate((2, 3, 4))}


# -- saturation --------------------------------------------------------------------

def is_saturating(U: FqSubspace, rho: int = 2, budget: int | None = None) -> Verdict:
    """Every point of PG(2, q^{2m}) lies in the span of at most rho points of L_U.

    U is read inside F_{q^{2m}}^3 through the embedding (identity on codes).
    Only the covering property is checked, not minimality of rho.
    """
    _require_plane(U)
    tower = U.tower if U.tower.Fq2m is not None else U.tower.extend()
    F2 = tower.Fq2m
    N = F2.order
    npoints = N * N + N + 1
    pts = [p for p, _ in linear_set_points(U, budget)]
    if rho >= 3:
        ok = U.fqm_rank() == 3
        return Verdict(ok, None if ok else "L_U spans a proper subspace", npoints)
    if rho == 1:
        covered = np.zeros(npoints, dtype=np.uint8)
        if pts:
            covered[kernels.projective_index(pts, F2)] = 1
    elif rho == 2:
        check_budget("saturation", len(pts) * (len(pts) - 1) // 2 * N, budget)
        covered = kernels.saturation_cover(pts, F2)
    else:
        raise PreconditionError("rho >= 1 required")
    miss = np.nonzero(covered == 0)[0]
    if miss.size:
        return Verdict(False, kernels.point_from_index(int(miss[0]), N), npoints)
    return Verdict(True, checked=npoints)


# -- random subspaces ----------------------------------------------------------------

def random_subspace(tower: FieldParams, k: int, dim: int, rng: random.Random) -> FqSubspace:
    """Uniform-ish random F_q-subspace of F_{q^m}^k of the given dimension."""
    F = tower.Fqm
    if dim > k * F.degree:
        raise PreconditionError("dimension exceeds k*m")
    vecs: list[Vector] = []
    rows: list[list[int]] = []
    while len(vecs) < dim:
        v = tuple(rng.randrange(F.order) for _ in range(k))
        cand = rows + [_expand(F, v)]
        if linalg.rank(F.sub, cand) == len(cand):
            rows, vecs = cand, vecs + [v]
    return FqSubspace(tower, k, tuple(vecs))
