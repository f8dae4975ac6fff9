"""The family U_sigma = {(x, x^sigma + a, x^(sigma^2) + b)} of F_{q^m}^3 and its criteria.

Covers the sufficient conditions for scatteredness (gcd conditions, roots of
Q(X), the G_{m-1} criterion, the factorial corollary and the m = 5, 7
specializations), brute-force oracles, and the equivalence/stabilizer checks.
"""

from __future__ import annotations

from dataclasses import asdict, dataclass, field
import random
from math import gcd
from typing import Callable

import numpy as np

from . import geometry, kernels, linalg
from . import linearized as lz
from .errors import BudgetExceeded, InvariantBreach, PreconditionError, check_budget
from .field import GF, FieldParams, smallest_irreducible, smallest_prime_factor
from .geometry import FqSubspace, ProjectiveSubspace, Verdict


@dataclass(frozen=True)
class ConstructionParams:
    tower: FieldParams
    s: int

    def __post_init__(self):
        m = self.tower.m
        if not 1 <= self.s <= m - 1:
            raise PreconditionError(f"s={self.s} outside [1, {m - 1}]")
        if gcd(self.s, m) != 1:
            raise PreconditionError(f"gcd(s, m) = gcd({self.s}, {m}) != 1")

    @property
    def oracle_mode(self) -> bool:
        """True outside the headline family (m odd, m >= 5)."""
        m = self.tower.m
        return m < 5 or m % 2 == 0

    @property
    def q(self) -> int:
        return self.tower.q

    @property
    def m(self) -> int:
        return self.tower.m

    def sigma(self, x: int, i: int = 1) -> int:
        return lz.sigma_power(self.tower.Fqm, x, self.s, i)

    def label(self) -> dict:
        return {"p": self.tower.p, "e": self.tower.e, "m": self.m, "s": self.s}


def valid_s(m: int) -> list[int]:
    return [s for s in range(1, m) if gcd(s, m) == 1]


def build_U_sigma(params: ConstructionParams) -> FqSubspace:
    """Basis {(b, b^sigma, b^(sigma^2))} over the power basis b = X^i, plus (0,1,0), (0,0,1)."""
    q = params.q
    basis = [(q ** i, params.sigma(q ** i), params.sigma(q ** i, 2)) for i in range(params.m)]
    basis += [(0, 1, 0), (0, 0, 1)]
    U = FqSubspace(params.tower, 3, tuple(basis))
    if U.fqm_rank() != 3:
        raise InvariantBreach("U_sigma is degenerate")  # pragma: no cover
    return U


def build_W_sigma(params: ConstructionParams) -> FqSubspace:
    q = params.q
    basis = [(q ** i, params.sigma(q ** i), params.sigma(q ** i, 2)) for i in range(params.m)]
    return FqSubspace(params.tower, 3, tuple(basis))


def build_Z_infinity(params: ConstructionParams) -> FqSubspace:
    return FqSubspace(params.tower, 3, ((0, 0, 1), (0, 1, 0)))


# -- Q(X) = Q1(X) Q2(X) --------------------------------------------------------------

@dataclass(frozen=True)
class QPolynomials:
    """Q = X^(sigma^2+1) - X^(sigma+1) - X^sigma + X,  Q1 = X^sigma - X,  Q2 = X (X^sigma - X)^(sigma-1) - 1."""

    params: ConstructionParams

    def _vals(self, xs: np.ndarray):
        F = self.params.tower.Fqm
        sig = self.params.q ** self.params.s
        xs1 = F.vpow(xs, sig)
        xs2 = F.vpow(xs1, sig)
        return F, sig, xs1, xs2

    def Q(self, xs) -> np.ndarray:
        xs = np.asarray(xs, dtype=np.int64)
        F, _, xs1, xs2 = self._vals(xs)
        return F.vadd(F.vsub(F.vmul(xs2, xs), F.vmul(xs1, xs)), F.vsub(xs, xs1))

    def Q1(self, xs) -> np.ndarray:
        xs = np.asarray(xs, dtype=np.int64)
        F, _, xs1, _ = self._vals(xs)
        return F.vsub(xs1, xs)

    def Q2(self, xs) -> np.ndarray:
        xs = np.asarray(xs, dtype=np.int64)
        F, sig, xs1, _ = self._vals(xs)
        return F.vsub(F.vmul(xs, F.vpow(F.vsub(xs1, xs), sig - 1)), np.ones_like(xs))


def q_polynomial(params: ConstructionParams) -> tuple[Callable, Callable, Callable]:
    Qp = QPolynomials(params)
    return Qp.Q, Qp.Q1, Qp.Q2


def q_roots(params: ConstructionParams) -> np.ndarray:
    F = params.tower.Fqm
    xs = np.arange(F.order, dtype=np.int64)
    return xs[QPolynomials(params).Q(xs) == 0]


def cond_iii(params: ConstructionParams, budget: int | None = None) -> Verdict:
    """Q has no root in F_{q^m} outside F_q (exhaustive); witness = first such root."""
    F = params.tower.Fqm
    check_budget("Q scan", F.order, budget)
    roots = q_roots(params)
    outside = roots[roots >= params.q]  # F_q codes are exactly 0..q-1
    if outside.size:
        return Verdict(False, int(outside[0]), F.order)
    return Verdict(True, checked=F.order)


def g_criterion(params: ConstructionParams) -> Verdict:
    """G_{m-1}(gamma) != 0 for every gamma in F_q*; witness = first zero."""
    for g in range(1, params.q):
        if lz.g_at_gamma(params.tower, params.s, g) == 0:
            return Verdict(False, g, g)
    return Verdict(True, checked=params.q - 1)


def projective_gamma_roots(params: ConstructionParams, gamma: int) -> int:
    """Number of roots in F_{q^m} of X^(sigma+1) - gamma X + gamma."""
    return lz.projective_roots_bruteforce(lz.L_gamma(params.tower, params.s, gamma).projective())


def r_prime_sets(params: ConstructionParams) -> dict[int, frozenset[int]]:
    """R'_gamma = {l : l^(sigma+1) - gamma l + gamma = 0} for every gamma in F_q."""
    F = params.tower.Fqm
    xs = np.arange(F.order, dtype=np.int64)
    top = F.vmul(F.vpow(xs, params.q ** params.s), xs)
    out = {}
    for g in range(params.q):
        vals = F.vadd(F.vsub(top, F.vmul(g, xs)), np.full_like(xs, g))
        out[g] = frozenset(int(x) for x in xs[vals == 0])
    return out


def r_prime_disjoint(params: ConstructionParams) -> bool:
    sets = r_prime_sets(params)
    seen: set[int] = set()
    for S in sets.values():
        if seen & S or 1 in S:
            return False
        seen |= S
    return True


def factorial_gcd_condition(params: ConstructionParams) -> bool:
    """(m, (q^(2s) - q^s + 1)!) = 1, i.e. every prime factor of m exceeds q^(2s) - q^s + 1."""
    q, s = params.q, params.s
    return smallest_prime_factor(params.m) > q ** (2 * s) - q ** s + 1


def m5_condition(p: int, e: int) -> bool:
    if p == 2:
        return e % 2 == 1
    return (p ** e) % 5 in (2, 3)


def _gf_q(p: int, e: int) -> GF:
    Fp = GF(p)
    return GF(p, Fp, smallest_irreducible(Fp, e), "q")


def m7_condition(p: int, e: int) -> bool:
    if p in (2, 3, 5):
        return e % 3 != 0
    if p == 7:
        return False
    Fq = _gf_q(p, e)
    minus3 = Fq.from_int(-3)
    root = next((y for y in Fq.elements() if Fq.mul(y, y) == minus3), None)
    if root is not None:
        K, r = Fq, root
    else:
        # -3 is a non-square: K = F_q[X]/(X^2 + 3), sqrt(-3) = X
        K = GF(p, Fq, [Fq.from_int(3), 0, 1], "K")
        r = Fq.order
    third = K.inv(K.from_int(3))
    c = K.mul(K.div(K.from_int(7), K.from_int(18)), K.add(third, r))
    n = K.order - 1
    if n % 3:
        return False  # every element is a cube
    return K.pow(c, n // 3) != 1


def m7_cubic_has_root(p: int, e: int) -> bool:
    """Whether gamma^3 - 5 gamma^2 + 6 gamma - 1 vanishes somewhere in F_q (brute force)."""
    Fq = _gf_q(p, e)
    coeffs = [Fq.from_int(c) for c in (-1, 6, -5, 1)]
    for g in Fq.elements():
        acc = 0
        for c in reversed(coeffs):
            acc = Fq.add(Fq.mul(acc, g), c)
        if acc == 0:
            return True
    return False


# -- brute force -------------------------------------------------------------------

def _scattered_vectors(F: GF, vecs: np.ndarray, q: int) -> int | None:
    """First point index carrying more than q-1 nonzero vectors, or None."""
    idx = kernels.projective_index(vecs, F)
    idx = idx[idx >= 0]
    if not idx.size:
        return None
    counts = np.bincount(idx)
    bad = np.nonzero(counts > q - 1)[0]
    return int(bad[0]) if bad.size else None


def lambda_lines(tower: FieldParams) -> list[tuple[object, ProjectiveSubspace]]:
    """The lines through (0,0,1): l_lambda : x_1 = lambda x_0, and l_inf : x_0 = 0."""
    F = tower.Fqm
    out = []
    for lam in range(F.order):
        basis = linalg.nullspace(F, [[lam, F.neg(1), 0]], 3)
        out.append((lam, ProjectiveSubspace(tower, 3, tuple(tuple(v) for v in basis))))
    out.append(("inf", ProjectiveSubspace(tower, 3, ((0, 1, 0), (0, 0, 1)))))
    return out


def scattered_by_line_bundle(U: FqSubspace, budget: int | None = None) -> Verdict:
    """U is scattered iff every Z_lambda = U cap l_lambda is (the l_lambda cover the plane)."""
    F = U.tower.Fqm
    check_budget("line bundle", (F.order + 1) * U.tower.q ** 4, budget)
    lines = lambda_lines(U.tower)
    for lam, H in lines:
        Z = geometry.intersection(U, H)
        bad = _scattered_vectors(F, Z.vectors()[1:], U.tower.q)
        if bad is not None:
            return Verdict(False, (lam, kernels.point_from_index(bad, F.order)), len(lines))
    return Verdict(True, checked=len(lines))


def scatteredness_bruteforce(U: FqSubspace, budget: int | None = None) -> Verdict:
    F = U.tower.Fqm
    check_budget("scatteredness", F.order ** 2 + U.tower.q ** U.dim_q, budget)
    glob = geometry.is_h_scattered(U, 1, budget)
    bundle = scattered_by_line_bundle(U, budget)
    if glob.holds != bundle.holds:
        raise InvariantBreach("global and line-bundle scatteredness checks disagree")
    return glob


@dataclass
class CriteriaReport:
    params: dict
    oracle_mode: bool
    cond_i: bool
    cond_ii: bool
    cond_iii: bool
    cond_iii_witness: int | None
    g_criterion: bool
    g_witness: int | None
    factorial_criterion: bool
    specialized: dict = field(default_factory=dict)
    bruteforce_scattered: bool | str | None = None
    scattered_witness: list | None = None

    def check_invariant(self) -> None:
        if self.cond_i and self.cond_ii and self.cond_iii and self.bruteforce_scattered is False:
            raise InvariantBreach(f"conditions i-iii hold but U_sigma is not scattered at {self.params}")
        if self.cond_iii != self.g_criterion:
            raise InvariantBreach(f"cond iii and the G criterion disagree at {self.params}")

    def to_json(self) -> dict:
        return asdict(self)


def check_main_theorem(params: ConstructionParams, with_bruteforce: bool = False,
                       budget: int | None = None) -> CriteriaReport:
    tower = params.tower
    q, m = params.q, params.m
    c3 = cond_iii(params, budget)
    g = g_criterion(params)
    special = {}
    if m == 5:
        special["m5"] = m5_condition(tower.p, tower.e)
    elif m == 7:
        special["m7"] = m7_condition(tower.p, tower.e)
    report = CriteriaReport(
        params=params.label(),
        oracle_mode=params.oracle_mode,
        cond_i=gcd(q - 1, m) == 1,
        cond_ii=m % tower.p != 0,
        cond_iii=c3.holds,
        cond_iii_witness=c3.witness,
        g_criterion=g.holds,
        g_witness=g.witness,
        factorial_criterion=factorial_gcd_condition(params),
        specialized=special,
    )
    if with_bruteforce:
        try:
            v = scatteredness_bruteforce(build_U_sigma(params), budget)
        except BudgetExceeded:
            report.bruteforce_scattered = "skipped"
        else:
            report.bruteforce_scattered = v.holds
            if v.witness is not None:
                report.scattered_witness = list(v.witness.basis[0])
    report.check_invariant()
    return report


def lambda_line_matrix_check(params: ConstructionParams, lam: int) -> bool:
    """Checks on A_lambda, the companion matrix of y^(sigma^2) - (1+lambda) y^sigma + lambda y.

    For lambda != 0 the sigma-twisted product equals the plain m-th power (entries in
    F_q) and the eigenspace root count matches enumeration; for lambda = 1 also
    A_1^m = (-(m-1), -m; m, m+1) and A_1^m = I iff p | m.  For lambda = 0 the
    kernel is F_q.
    """
    tower = params.tower
    F = tower.Fqm
    if lam >= params.q:
        raise PreconditionError("lambda must lie in F_q")
    L = lz.LinearizedPolynomial(tower, params.s, (lam, F.neg(F.add(1, lam)), 1))
    if lam == 0:
        return lz.kernel_dimension_bruteforce(L) == 1
    data = lz.companion(L)
    C = data.C_L
    power = linalg.identity(2)
    for _ in range(params.m):
        power = linalg.matmul(F, power, C)
    ok = power == data.A_L
    roots_L, roots_P = lz.root_count_via_eigenspaces(L)
    ok &= roots_L == tower.q ** lz.kernel_dimension_bruteforce(L)
    ok &= roots_P == lz.projective_roots_bruteforce(L.projective())
    if lam == 1:
        m = params.m
        closed = [[F.from_int(-(m - 1)), F.from_int(-m)], [F.from_int(m), F.from_int(m + 1)]]
        ok &= closed == data.A_L
        ok &= (data.A_L == linalg.identity(2)) == (m % tower.p == 0)
    return bool(ok)


# -- equivalence and stabilizer --------------------------------------------------

def equivalence_decision(s: int, t: int, m: int) -> bool:
    for x in (s, t):
        if not 1 <= x < m or gcd(x, m) != 1:
            raise PreconditionError(f"need 1 <= {x} < {m} with gcd({x}, {m}) = 1")
    return t in (s, m - s)


def reversal(v):
    return tuple(reversed(v))


def identity_map(v):
    return tuple(v)


def equivalence_witness(s: int, m: int, t: int | None = None) -> tuple[str, Callable]:
    """A GL(3, q^m) map sending U_s onto U_t, t in {s, m-s} (default m-s).

    Writing z = x^(q^l), 2s = m + l, turns U_s into {(z + b, z^tau + a, z^(tau^2))}
    reversed, tau = q^(m-s); so coordinate reversal is the witness.
    """
    t = m - s if t is None else t
    if not equivalence_decision(s, t, m):
        raise PreconditionError(f"U_{s} and U_{t} are not equivalent")
    if t == s:
        return "identity", identity_map
    return "reversal", reversal


def verify_equivalence_witness(tower: FieldParams, s: int, t: int | None = None) -> bool:
    m = tower.m
    t = m - s if t is None else t
    _, fn = equivalence_witness(s, m, t)
    image = build_U_sigma(ConstructionParams(tower, s)).map(fn)
    return image == build_U_sigma(ConstructionParams(tower, t))


def semilinear_map(F: GF, diag: tuple[int, int, int], j: int) -> Callable:
    """v -> (d_i * v_i^(p^j))_i."""
    def apply(v):
        return tuple(F.mul(d, F.pow(x, F.p ** j)) for d, x in zip(diag, v))
    return apply


def stabilizer_family_check(params: ConstructionParams, n_outside: int = 5, seed: int = 0) -> dict:
    """Maps diag(a, a^sigma, a^(sigma^2)) o (x -> x^(p^j)) with a in F_q* must stabilize U_sigma;
    sampled a outside F_q must not."""
    tower = params.tower
    F = tower.Fqm
    U = build_U_sigma(params)
    n_aut = tower.e * params.m
    inside = []
    for a in range(1, params.q):
        diag = (a, params.sigma(a), params.sigma(a, 2))
        for j in range(n_aut):
            inside.append(U.map(semilinear_map(F, diag, j)) == U)
    rng = random.Random(seed)
    outside = []
    gen = F.exp(1)
    candidates = [gen] + [rng.randrange(params.q, F.order) for _ in range(n_outside - 1)]
    for a in candidates:
        diag = (a, params.sigma(a), params.sigma(a, 2))
        outside.append(U.map(semilinear_map(F, diag, 0)) == U)
    return {
        "stabilizing_maps": len(inside),
        "all_stabilize": all(inside),
        "outside_tested": len(outside),
        "none_outside_stabilize": not any(outside),
        "holds": all(inside) and not any(outside),
        "family_order": (params.q - 1) * n_aut,
    }
