"""sigma-linearized and sigma-projective polynomials over F_{q^m}.

For sigma: x -> x^(q^s),

    L(X) = sum_i a_i X^(sigma^i),        P_L(X) = sum_i a_i X^((sigma^i - 1)/(sigma - 1)),

so that L(X) = X * P_L(X^(sigma-1)).  Root counts of L and P_L are read off the
F_q-eigenspaces of A_L = C_L C_L^sigma ... C_L^(sigma^(m-1)), where C_L is the
companion matrix and C^sigma applies sigma entrywise.

All coefficients are codes of ``tower.Fqm``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from . import linalg
from .errors import PreconditionError, check_budget
from .field import FieldElement, FieldParams, GF


def _code(x) -> int:
    return x.code if isinstance(x, FieldElement) else int(x)


def sigma_power(F: GF, x: int, s: int, i: int) -> int:
    """x^(sigma^i) with sigma = q^s; i may be negative."""
    m = F.degree
    return F.pow(x, F.sub.order ** ((s * i) % m))


@dataclass(frozen=True)
class LinearizedPolynomial:
    tower: FieldParams = field(repr=False, compare=False)
    s: int
    coeffs: tuple[int, ...]

    def __post_init__(self):
        F = self.tower.Fqm
        m = F.degree
        # X^(sigma^(i+m)) = X^(sigma^i) on F_{q^m}
        folded = [0] * min(len(self.coeffs), m)
        for i, c in enumerate(self.coeffs):
            folded[i % m] = F.add(folded[i % m], int(c))
        while folded and folded[-1] == 0:
            folded.pop()
        object.__setattr__(self, "coeffs", tuple(folded))

    @classmethod
    def from_elements(cls, tower: FieldParams, s: int, coeffs: Sequence) -> "LinearizedPolynomial":
        return cls(tower, s, tuple(_code(c) for c in coeffs))

    @property
    def sigma_degree(self) -> int:
        return len(self.coeffs) - 1

    @property
    def is_zero(self) -> bool:
        return not self.coeffs

    def evaluate(self, x):
        F = self.tower.Fqm
        xc = _code(x)
        acc = 0
        for i, a in enumerate(self.coeffs):
            if a:
                acc = F.add(acc, F.mul(a, sigma_power(F, xc, self.s, i)))
        return FieldElement(F, acc) if isinstance(x, FieldElement) else acc

    def evaluate_all(self) -> np.ndarray:
        """Values at every code 0..q^m-1 (vectorized)."""
        F = self.tower.Fqm
        xs = np.arange(F.order, dtype=np.int64)
        acc = np.zeros(F.order, dtype=np.int64)
        q = F.sub.order
        for i, a in enumerate(self.coeffs):
            if a:
                acc = F.vadd(acc, F.vmul(a, F.vpow(xs, q ** ((self.s * i) % F.degree))))
        return acc

    def projective(self) -> "ProjectivePolynomial":
        return ProjectivePolynomial(self.tower, self.s, self.coeffs)

    def normalize(self) -> tuple["LinearizedPolynomial", int]:
        """Shift by a power of sigma so that a_0 != 0.

        If a_j is the first nonzero coefficient, L = (L')^(sigma^j) with
        L' = sum_i a_i^(sigma^-j) X^(sigma^(i-j)); L and L' have the same roots.
        Returns (L', j).
        """
        if self.is_zero:
            raise PreconditionError("zero polynomial")
        j = next(i for i, a in enumerate(self.coeffs) if a)
        if j == 0:
            return self, 0
        F = self.tower.Fqm
        shifted = tuple(sigma_power(F, a, self.s, -j) for a in self.coeffs[j:])
        return LinearizedPolynomial(self.tower, self.s, shifted), j

    def to_json(self) -> dict:
        F = self.tower.Fqm
        return {"s": self.s, "coeffs": [linalg.to_digits(a, self.tower.p, F.digits) for a in self.coeffs]}


@dataclass(frozen=True)
class ProjectivePolynomial:
    tower: FieldParams = field(repr=False, compare=False)
    s: int
    coeffs: tuple[int, ...]

    def exponents(self) -> list[int]:
        """Integer exponents (sigma^i - 1)/(sigma - 1) = 1 + sigma + ... + sigma^(i-1)."""
        sig = self.tower.q ** self.s
        return [sum(sig ** j for j in range(i)) for i in range(len(self.coeffs))]

    def evaluate(self, y):
        F = self.tower.Fqm
        yc = _code(y)
        acc = 0
        for a, ex in zip(self.coeffs, self.exponents()):
            if a:
                acc = F.add(acc, F.mul(a, F.pow(yc, ex)))
        return FieldElement(F, acc) if isinstance(y, FieldElement) else acc

    def evaluate_all(self) -> np.ndarray:
        F = self.tower.Fqm
        ys = np.arange(F.order, dtype=np.int64)
        acc = np.zeros(F.order, dtype=np.int64)
        for a, ex in zip(self.coeffs, self.exponents()):
            if a:
                acc = F.vadd(acc, F.vmul(a, F.vpow(ys, ex)))
        return acc

    def to_linearized(self) -> LinearizedPolynomial:
        """Invert L(X) = X * P(X^(sigma-1)) on exponents."""
        sig = self.tower.q ** self.s
        coeffs = []
        for a, ex in zip(self.coeffs, self.exponents()):
            e_lin = 1 + (sig - 1) * ex
            i = round(math.log(e_lin, sig)) if e_lin > 1 else 0
            if sig ** i != e_lin:
                raise AssertionError("exponent is not a sigma-power")  # pragma: no cover
            coeffs.append((i, a))
        out = [0] * (max(i for i, _ in coeffs) + 1)
        for i, a in coeffs:
            out[i] = a
        return LinearizedPolynomial(self.tower, self.s, tuple(out))


# -- brute-force oracles ------------------------------------------------------

def kernel_dimension_bruteforce(L: LinearizedPolynomial, budget: int | None = 1 << 20) -> int:
    """log_q of the number of roots of L in F_{q^m}, by enumeration."""
    F = L.tower.Fqm
    check_budget("kernel enumeration", F.order, budget)
    count = int(np.count_nonzero(L.evaluate_all() == 0))
    q = L.tower.q
    d = round(math.log(count, q))
    if q ** d != count:
        raise AssertionError(f"root count {count} is not a power of q")  # pragma: no cover
    return d


def projective_roots_bruteforce(P: ProjectivePolynomial, budget: int | None = 1 << 20) -> int:
    F = P.tower.Fqm
    check_budget("projective root enumeration", F.order, budget)
    return int(np.count_nonzero(P.evaluate_all() == 0))


# -- companion matrix machinery -------------------------------------------------

@dataclass(frozen=True)
class CompanionData:
    C_L: list[list[int]]
    A_L: list[list[int]]
    trace_A: int
    det_A: int

    def charpoly_at(self, F: GF, lam: int) -> int:
        """chi_L(lam) = det(lam*I - A_L)."""
        d = len(self.A_L)
        M = [[F.subtract(lam if i == j else 0, self.A_L[i][j]) for j in range(d)] for i in range(d)]
        return linalg.det(F, M)


def sigma_matrix(F: GF, M, s: int, i: int):
    return linalg.entrywise(M, lambda x: sigma_power(F, x, s, i))


def companion(L: LinearizedPolynomial) -> CompanionData:
    F = L.tower.Fqm
    if L.is_zero or L.sigma_degree < 1:
        raise PreconditionError("companion matrix needs sigma-degree >= 1")
    if L.coeffs[0] == 0:
        raise PreconditionError("a_0 = 0: normalize the polynomial first")
    d = L.sigma_degree
    ad_inv = F.inv(L.coeffs[-1])
    C = [[0] * d for _ in range(d)]
    for i in range(1, d):
        C[i][i - 1] = 1
    for i in range(d):
        C[i][d - 1] = F.neg(F.mul(L.coeffs[i], ad_inv))
    A = C
    for i in range(1, F.degree):
        A = linalg.matmul(F, A, sigma_matrix(F, C, L.s, i))
    tr = 0
    for i in range(d):
        tr = F.add(tr, A[i][i])
    return CompanionData(C, A, tr, linalg.det(F, A))


def eigenspace_dimensions(L: LinearizedPolynomial, data: CompanionData | None = None) -> dict[int, int]:
    """n_lambda for every eigenvalue lambda of A_L lying in F_q."""
    F = L.tower.Fqm
    data = data or companion(L)
    d = len(data.A_L)
    out = {}
    for lam in range(L.tower.q):  # F_q codes are F_{q^m} codes below q
        if data.charpoly_at(F, lam) != 0:
            continue
        M = [[F.subtract(data.A_L[i][j], lam if i == j else 0) for j in range(d)] for i in range(d)]
        out[lam] = d - linalg.rank(F, M)
    return out


def root_count_via_eigenspaces(L: LinearizedPolynomial) -> tuple[int, int]:
    """(#roots of L, #roots of P_L) in F_{q^m} from the eigenspaces of A_L.

    Inputs with a_0 = 0 are first shifted by :meth:`LinearizedPolynomial.normalize`;
    the counts then refer to the shifted polynomial (same roots for L).
    """
    if L.is_zero:
        raise PreconditionError("zero polynomial")
    L, _ = L.normalize()
    if L.sigma_degree < 1:
        raise PreconditionError("sigma-degree >= 1 required")
    q = L.tower.q
    dims = eigenspace_dimensions(L)
    roots_L = q ** dims.get(1, 0)
    roots_P = sum((q ** n - 1) // (q - 1) for n in dims.values())
    return roots_L, roots_P


# -- the G_k sequence -----------------------------------------------------------

@dataclass(frozen=True)
class GSequence:
    u: int
    s: int
    values: tuple[int, ...]

    def verify(self, F: GF) -> bool:
        G = self.values
        if G[0] != 1 or G[1] != F.neg(1):
            return False
        for k in range(2, len(G)):
            t = F.add(G[k], sigma_power(F, G[k - 1], self.s, 1))
            t = F.add(t, F.mul(self.u, sigma_power(F, G[k - 2], self.s, 2)))
            if t != 0:
                return False
        return True


def g_sequence(u, m: int, s: int, F: GF) -> GSequence:
    """G_0 = 1, G_1 = -1, G_k = -G_{k-1}^sigma - u G_{k-2}^(sigma^2), k = 2..m."""
    uc = _code(u)
    G = [1, F.neg(1)]
    for _ in range(2, m + 1):
        t = F.add(sigma_power(F, G[-1], s, 1), F.mul(uc, sigma_power(F, G[-2], s, 2)))
        G.append(F.neg(t))
    seq = GSequence(uc, s, tuple(G))
    if not seq.verify(F):
        raise AssertionError("G-sequence recursion violated")  # pragma: no cover
    return seq


def u_parameter(L: LinearizedPolynomial) -> int:
    """u = a_0^sigma a_2 / a_1^(sigma+1) for a degree-2 polynomial."""
    F = L.tower.Fqm
    a0, a1, a2 = L.coeffs
    if a1 == 0:
        raise PreconditionError("a_1 = 0: u undefined")
    num = F.mul(sigma_power(F, a0, L.s, 1), a2)
    den = F.mul(sigma_power(F, a1, L.s, 1), a1)
    return F.div(num, den)


def _norm(F: GF, x: int) -> int:
    return F.pow(x, (F.order - 1) // (F.sub.order - 1))


def degree2_closed_forms(L: LinearizedPolynomial) -> dict[str, int]:
    """Closed-form expressions for Tr(A_L) and det(A_L) in terms of the G-sequence.

    Keys: ``trace_u`` = N(a1/a2)(G_m - u^(sigma^-1) G_{m-2}^sigma),
    ``trace_printed`` = N(a1/a2)(G_m + G_m^sigma + G_{m-1}^sigma),
    ``trace_recursion`` = -N(a1/a2)(G_m^(sigma^-1) + G_{m-1} + ...) rewritten with the
    recursion as N(a1/a2)(G_m + G_m^(sigma^-1) + G_{m-1}),
    ``det_quotient`` = N(a0/a2), ``det_printed`` = N(a0 a1 / a2),
    ``det_g`` = N(a1/a2)^2 u^(sigma^-1) (G_{m-1}^(sigma+1) - G_m G_{m-2}^sigma).
    """
    F = L.tower.Fqm
    if L.sigma_degree != 2:
        raise PreconditionError("degree-2 polynomial required")
    a0, a1, a2 = L.coeffs
    s, m = L.s, F.degree
    u = u_parameter(L)
    G = g_sequence(u, m, s, F).values
    n12 = _norm(F, F.div(a1, a2))
    u_inv_sig = sigma_power(F, u, s, -1)
    sig = lambda x, i=1: sigma_power(F, x, s, i)  # noqa: E731
    tr_u = F.mul(n12, F.subtract(G[m], F.mul(u_inv_sig, sig(G[m - 2]))))
    tr_printed = F.mul(n12, F.add(F.add(G[m], sig(G[m])), sig(G[m - 1])))
    tr_rec = F.mul(n12, F.add(F.add(G[m], sig(G[m], -1)), G[m - 1]))
    det_g = F.mul(F.mul(F.mul(n12, n12), u_inv_sig),
                  F.subtract(F.mul(sig(G[m - 1]), G[m - 1]), F.mul(G[m], sig(G[m - 2]))))
    return {
        "trace_u": tr_u,
        "trace_printed": tr_printed,
        "trace_recursion": tr_rec,
        "det_quotient": _norm(F, F.div(a0, a2)),
        "det_printed": _norm(F, F.div(F.mul(a0, a1), a2)),
        "det_g": det_g,
    }


def det_product_identity(L: LinearizedPolynomial, data: CompanionData | None = None) -> int:
    """prod_i det(C_L)^(sigma^i), i.e. N(det C_L); equals det(A_L) by multiplicativity."""
    F = L.tower.Fqm
    data = data or companion(L)
    dC = linalg.det(F, data.C_L)
    acc = 1
    for i in range(F.degree):
        acc = F.mul(acc, sigma_power(F, dC, L.s, i))
    return acc


# -- the gamma family X^(sigma^2) - gamma X^sigma + gamma X --------------------------

def L_gamma(tower: FieldParams, s: int, gamma: int) -> LinearizedPolynomial:
    F = tower.Fqm
    return LinearizedPolynomial(tower, s, (gamma, F.neg(gamma), 1))


def g_at_gamma(tower: FieldParams, s: int, gamma: int, k: int | None = None) -> int:
    """G_k(gamma) := G_k evaluated at u = 1/gamma (default k = m-1)."""
    F = tower.Fqm
    m = F.degree
    k = m - 1 if k is None else k
    return g_sequence(F.inv(gamma), m, s, F).values[k]


def g_even_char_closed_form(gamma, m: int, F: GF) -> int:
    """sum_j m (m-j-1)! / (j! (m-2j)!) gamma^(-j), coefficients reduced mod 2."""
    if F.p != 2:
        raise PreconditionError("closed form holds in characteristic 2 only")
    g = _code(gamma)
    if g == 0:
        raise PreconditionError("gamma must be nonzero")
    ginv = F.inv(g)
    acc = 0
    for j in range(m // 2 + 1):
        num = m * math.factorial(m - j - 1)
        den = math.factorial(j) * math.factorial(m - 2 * j)
        if num % den:
            raise AssertionError("non-integral coefficient")  # pragma: no cover
        if (num // den) % 2:
            acc = F.add(acc, F.pow(ginv, j))
    return acc


def delta_gamma(tower: FieldParams, s: int, gamma: int) -> tuple[int, int]:
    """(Tr(A_g)^2 - 4 det(A_g) computed from A_g, gamma^(2m-1) (gamma-4) G_{m-1}(gamma)^2)."""
    F = tower.Fqm
    m = F.degree
    data = companion(L_gamma(tower, s, gamma))
    four = F.from_int(4)
    direct = F.subtract(F.mul(data.trace_A, data.trace_A), F.mul(four, data.det_A))
    G = g_at_gamma(tower, s, gamma)
    closed = F.mul(F.mul(F.pow(gamma, 2 * m - 1), F.subtract(gamma, four)), F.mul(G, G))
    return direct, closed


def lambda_gamma(tower: FieldParams, s: int, gamma: int) -> int | None:
    """Lambda(gamma) = 1/(gamma^m G_{m-1}(gamma)^2), or None when G_{m-1}(gamma) = 0."""
    F = tower.Fqm
    G = g_at_gamma(tower, s, gamma)
    if G == 0:
        return None
    return F.inv(F.mul(F.pow(gamma, F.degree), F.mul(G, G)))


def absolute_trace_to_prime(tower: FieldParams, x: int) -> int:
    """Tr_{q/p}(x) for x in F_q (as an F_{q^m} code below q)."""
    F = tower.Fqm
    acc, y = 0, x
    for _ in range(tower.e):
        acc = F.add(acc, y)
        y = F.pow(y, tower.p)
    return acc
