"""Explicit finite-field tower F_p <= F_q <= F_{q^m} <= F_{q^{2m}}.

Every level is a polynomial quotient ring over the level below it.  Elements
are stored as integer *codes*: the little-endian coefficient vector over the
immediate subfield, read as digits in base ``|subfield|``.  Because the
subfield codes are themselves digit strings, a code is a plain p-adic digit
string, which gives two useful facts:

* the base-q digits of an F_{q^m} code are its F_q-coordinates in the power
  basis 1, t, t^2, ... of the defining polynomial's root t;
* the embeddings F_q -> F_{q^m} -> F_{q^{2m}} are the identity on codes.

Multiplication goes through log/antilog tables built once per level from
schoolbook polynomial arithmetic; addition is digitwise (XOR when p = 2).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

from .errors import PreconditionError

LEVELS = ("base", "q", "qm", "q2m")


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    f = 3
    while f * f <= n:
        if n % f == 0:
            return False
        f += 2
    return True


def prime_factors(n: int) -> list[int]:
    """Distinct prime factors of ``n`` in increasing order."""
    out = []
    f = 2
    while f * f <= n:
        if n % f == 0:
            out.append(f)
            while n % f == 0:
                n //= f
        f += 1
    if n > 1:
        out.append(n)
    return out


def smallest_prime_factor(n: int) -> int:
    if n < 2:
        raise ValueError("n must be >= 2")
    return prime_factors(n)[0]


# -- polynomials over a level: little-endian lists of codes ------------------

def poly_trim(a: list[int]) -> list[int]:
    while a and a[-1] == 0:
        a.pop()
    return a


def poly_add(F: "GF", a: Sequence[int], b: Sequence[int]) -> list[int]:
    n = max(len(a), len(b))
    out = [F.add(a[i] if i < len(a) else 0, b[i] if i < len(b) else 0) for i in range(n)]
    return poly_trim(out)


def poly_sub(F: "GF", a: Sequence[int], b: Sequence[int]) -> list[int]:
    return poly_add(F, a, [F.neg(c) for c in b])


def poly_mul(F: "GF", a: Sequence[int], b: Sequence[int]) -> list[int]:
    if not a or not b:
        return []
    out = [0] * (len(a) + len(b) - 1)
    for i, ai in enumerate(a):
        if ai == 0:
            continue
        for j, bj in enumerate(b):
            if bj:
                out[i + j] = F.add(out[i + j], F.mul(ai, bj))
    return poly_trim(out)


def poly_divmod(F: "GF", a: Sequence[int], b: Sequence[int]) -> tuple[list[int], list[int]]:
    b = poly_trim(list(b))
    if not b:
        raise ZeroDivisionError("polynomial division by zero")
    r = poly_trim(list(a))
    db = len(b) - 1
    lead_inv = F.inv(b[-1])
    if len(r) <= db:
        return [], r
    quo = [0] * (len(r) - db)
    while len(r) - 1 >= db and r:
        shift = len(r) - 1 - db
        c = F.mul(r[-1], lead_inv)
        quo[shift] = c
        for i, bi in enumerate(b):
            if bi:
                r[i + shift] = F.subtract(r[i + shift], F.mul(c, bi))
        poly_trim(r)
    return poly_trim(quo), r


def poly_mod(F: "GF", a: Sequence[int], b: Sequence[int]) -> list[int]:
    return poly_divmod(F, a, b)[1]


def poly_gcd(F: "GF", a: Sequence[int], b: Sequence[int]) -> list[int]:
    a, b = poly_trim(list(a)), poly_trim(list(b))
    while b:
        a, b = b, poly_mod(F, a, b)
    if a:
        li = F.inv(a[-1])
        a = [F.mul(c, li) for c in a]
    return a


def poly_powmod(F: "GF", base: Sequence[int], k: int, mod: Sequence[int]) -> list[int]:
    result = [1]
    b = poly_mod(F, base, mod)
    while k:
        if k & 1:
            result = poly_mod(F, poly_mul(F, result, b), mod)
        k >>= 1
        if k:
            b = poly_mod(F, poly_mul(F, b, b), mod)
    return result


def poly_eval(F: "GF", a: Sequence[int], x: int) -> int:
    acc = 0
    for c in reversed(a):
        acc = F.add(F.mul(acc, x), c)
    return acc


def is_irreducible(F: "GF", f: Sequence[int]) -> bool:
    """Ben-Or test: f has no factor of degree <= deg(f)/2."""
    f = poly_trim(list(f))
    d = len(f) - 1
    if d < 1:
        return False
    if d == 1:
        return True
    r = F.order
    xpow = [0, 1]
    for _ in range(d // 2):
        xpow = poly_powmod(F, xpow, r, f)
        g = poly_gcd(F, f, poly_sub(F, xpow, [0, 1]))
        if len(g) > 1:
            return False
    return True


def monic_polys(F: "GF", d: int) -> Iterable[list[int]]:
    """Monic degree-d polynomials in the documented order.

    Candidate n (0 <= n < r^d) has low coefficients equal to the base-r digits
    of n, i.e. polynomials are ordered by the integer sum(c_i * r^i).
    """
    r = F.order
    for n in range(r ** d):
        coeffs = []
        for _ in range(d):
            n, c = divmod(n, r)
            coeffs.append(c)
        yield coeffs + [1]


def smallest_irreducible(F: "GF", d: int) -> list[int]:
    for f in monic_polys(F, d):
        if is_irreducible(F, f):
            return f
    raise RuntimeError("no irreducible polynomial found")  # pragma: no cover


# -- one level of the tower ---------------------------------------------------

class GF:
    """A finite field stored as code tables.

    ``sub`` is the immediate subfield (``None`` for the prime field) and
    ``modulus`` the monic defining polynomial over it.
    """

    def __init__(self, p: int, sub: "GF | None" = None, modulus: Sequence[int] | None = None,
                 name: str = "base"):
        if not is_prime(p):
            raise PreconditionError(f"p={p} is not prime")
        self.p = p
        self.sub = sub
        self.name = name
        if sub is None:
            self.modulus = None
            self.degree = 1
            self.order = p
            self.digits = 1
        else:
            mod = [int(c) for c in modulus]
            if len(mod) < 2 or mod[-1] != 1:
                raise PreconditionError(f"defining polynomial {mod} is not monic of positive degree")
            if any(not 0 <= c < sub.order for c in mod):
                raise PreconditionError(f"coefficients of {mod} do not lie in the subfield")
            if not is_irreducible(sub, mod):
                raise PreconditionError(f"defining polynomial {mod} is not irreducible over F_{sub.order}")
            self.modulus = tuple(mod)
            self.degree = len(mod) - 1
            self.order = sub.order ** self.degree
            self.digits = sub.digits * self.degree
        self._build_additive()
        self._build_multiplicative()

    def __repr__(self):
        return f"GF({self.order}, level={self.name!r})"

    # -- construction
    def _build_additive(self):
        p, D = self.p, self.digits
        h = (D + 1) // 2
        self._B = p ** h
        self._H = p ** (D - h)

        def digit_add_table(width):
            size = p ** width
            codes = np.arange(size, dtype=np.int64)
            dig = np.stack([(codes // p ** i) % p for i in range(width)], axis=1) if width else \
                np.zeros((size, 0), dtype=np.int64)
            s = (dig[:, None, :] + dig[None, :, :]) % p
            w = p ** np.arange(width, dtype=np.int64)
            return (s @ w).reshape(-1) if width else np.zeros(1, dtype=np.int64)

        self.add_lo = digit_add_table(h)
        self.add_hi = digit_add_table(D - h)
        self._add_lo = self.add_lo.tolist()
        self._add_hi = self.add_hi.tolist()
        codes = np.arange(self.order, dtype=np.int64)
        neg = np.zeros(self.order, dtype=np.int64)
        for i in range(D):
            d = (codes // p ** i) % p
            neg += ((p - d) % p) * p ** i
        self.neg_table = neg
        self._neg = neg.tolist()

    def _slow_mul(self, a: int, b: int) -> int:
        if self.sub is None:
            return a * b % self.p
        pa, pb = self.to_poly(a), self.to_poly(b)
        return self.from_poly(poly_mod(self.sub, poly_mul(self.sub, pa, pb), self.modulus))

    def _slow_pow(self, a: int, k: int) -> int:
        r = 1
        while k:
            if k & 1:
                r = self._slow_mul(r, a)
            a = self._slow_mul(a, a)
            k >>= 1
        return r

    def _build_multiplicative(self):
        Q = self.order
        n = Q - 1
        factors = prime_factors(n) if n > 1 else []
        g = None
        for cand in range(1, Q):
            if all(self._slow_pow(cand, n // f) != 1 for f in factors):
                g = cand
                break
        self.generator = g
        exp = [0] * (2 * n)
        log = [-1] * Q
        x = 1
        for i in range(n):
            exp[i] = x
            log[x] = i
            x = self._slow_mul(x, g)
        if x != 1 or any(v < 0 for v in log[1:]):
            raise RuntimeError("multiplicative table construction failed")  # pragma: no cover
        exp[n:] = exp[:n]
        self._exp = exp
        self._log = log
        self.exp_table = np.array(exp, dtype=np.int64)
        self.log_table = np.array(log, dtype=np.int64)

    # -- code <-> polynomial over the subfield
    def to_poly(self, a: int) -> list[int]:
        r = self.sub.order
        out = []
        for _ in range(self.degree):
            a, c = divmod(a, r)
            out.append(c)
        return out

    def from_poly(self, coeffs: Sequence[int]) -> int:
        r = self.sub.order
        code = 0
        for c in reversed(list(coeffs)[: self.degree]):
            code = code * r + c
        return code

    # -- scalar arithmetic on codes
    def add(self, a: int, b: int) -> int:
        if self.p == 2:
            return a ^ b
        B, H = self._B, self._H
        ah, al = divmod(a, B)
        bh, bl = divmod(b, B)
        return self._add_hi[ah * H + bh] * B + self._add_lo[al * B + bl]

    def neg(self, a: int) -> int:
        return self._neg[a]

    def subtract(self, a: int, b: int) -> int:
        return self.add(a, self._neg[b])

    def mul(self, a: int, b: int) -> int:
        if a == 0 or b == 0:
            return 0
        return self._exp[self._log[a] + self._log[b]]

    def inv(self, a: int) -> int:
        if a == 0:
            raise ZeroDivisionError("inverse of zero")
        n = self.order - 1
        return self._exp[(n - self._log[a]) % n]

    def div(self, a: int, b: int) -> int:
        return self.mul(a, self.inv(b))

    def pow(self, a: int, k: int) -> int:
        if a == 0:
            if k < 0:
                raise ZeroDivisionError("negative power of zero")
            return 1 if k == 0 else 0
        n = self.order - 1
        return self._exp[(self._log[a] * k) % n]

    def log(self, a: int) -> int:
        return self._log[a]

    def exp(self, i: int) -> int:
        return self._exp[i % (self.order - 1)]

    def from_int(self, n: int) -> int:
        """Image of the integer n under Z -> F."""
        return n % self.p

    # -- vectorized arithmetic on numpy code arrays
    def vadd(self, a, b):
        a = np.asarray(a, dtype=np.int64)
        b = np.asarray(b, dtype=np.int64)
        if self.p == 2:
            return a ^ b
        B, H = self._B, self._H
        return self.add_hi[(a // B) * H + b // B] * B + self.add_lo[(a % B) * B + b % B]

    def vneg(self, a):
        return self.neg_table[np.asarray(a, dtype=np.int64)]

    def vsub(self, a, b):
        return self.vadd(a, self.vneg(b))

    def vmul(self, a, b):
        a = np.asarray(a, dtype=np.int64)
        b = np.asarray(b, dtype=np.int64)
        a, b = np.broadcast_arrays(a, b)
        out = self.exp_table[np.maximum(self.log_table[a], 0) + np.maximum(self.log_table[b], 0)]
        return np.where((a == 0) | (b == 0), 0, out)

    def vinv(self, a):
        a = np.asarray(a, dtype=np.int64)
        n = self.order - 1
        return np.where(a == 0, 0, self.exp_table[(n - self.log_table[a]) % n])

    def vpow(self, a, k: int):
        a = np.asarray(a, dtype=np.int64)
        n = self.order - 1
        out = self.exp_table[(np.maximum(self.log_table[a], 0) * k) % n]
        return np.where(a == 0, 1 if k == 0 else 0, out)

    def elements(self) -> range:
        return range(self.order)


# -- elements -----------------------------------------------------------------

class FieldElement:
    """An element of one tower level.  Immutable."""

    __slots__ = ("field", "code")

    def __init__(self, field: GF, code: int):
        if not 0 <= code < field.order:
            raise PreconditionError(f"code {code} out of range for {field!r}")
        object.__setattr__(self, "field", field)
        object.__setattr__(self, "code", int(code))

    def __setattr__(self, key, value):
        raise AttributeError("FieldElement is immutable")

    @property
    def level(self) -> str:
        return self.field.name

    @property
    def coeffs(self) -> list["FieldElement | int"]:
        """Coefficient vector over the immediate subfield, little-endian."""
        F = self.field
        if F.sub is None:
            return [self.code]
        return [FieldElement(F.sub, c) for c in F.to_poly(self.code)]

    def _other(self, other) -> int:
        if isinstance(other, FieldElement):
            if other.field is not self.field:
                raise PreconditionError(f"level mismatch: {self.level} vs {other.level}")
            return other.code
        if isinstance(other, int):
            return self.field.from_int(other)
        return NotImplemented

    def __add__(self, other):
        o = self._other(other)
        return NotImplemented if o is NotImplemented else FieldElement(self.field, self.field.add(self.code, o))

    __radd__ = __add__

    def __sub__(self, other):
        o = self._other(other)
        return NotImplemented if o is NotImplemented else FieldElement(self.field, self.field.subtract(self.code, o))

    def __rsub__(self, other):
        o = self._other(other)
        return NotImplemented if o is NotImplemented else FieldElement(self.field, self.field.subtract(o, self.code))

    def __neg__(self):
        return FieldElement(self.field, self.field.neg(self.code))

    def __mul__(self, other):
        o = self._other(other)
        return NotImplemented if o is NotImplemented else FieldElement(self.field, self.field.mul(self.code, o))

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = self._other(other)
        return NotImplemented if o is NotImplemented else FieldElement(self.field, self.field.div(self.code, o))

    def __rtruediv__(self, other):
        o = self._other(other)
        return NotImplemented if o is NotImplemented else FieldElement(self.field, self.field.div(o, self.code))

    def __pow__(self, k: int):
        return FieldElement(self.field, self.field.pow(self.code, k))

    def __eq__(self, other):
        if isinstance(other, FieldElement):
            return self.field is other.field and self.code == other.code
        if isinstance(other, int):
            return self.code == self.field.from_int(other)
        return NotImplemented

    def __hash__(self):
        return hash((self.field.name, self.field.order, self.code))

    def __bool__(self):
        return self.code != 0

    def __repr__(self):
        return f"FieldElement({self.level}, {self.code})"


# -- the tower ----------------------------------------------------------------

@dataclass(frozen=True)
class FieldParams:
    """Defining data of the tower; immutable once the tables are built."""

    p: int
    e: int
    m: int
    irreducible_q: tuple[int, ...]
    irreducible_qm: tuple[int, ...]
    irreducible_q2m: tuple[int, ...] | None = None
    Fp: GF = field(init=False, repr=False, compare=False)
    Fq: GF = field(init=False, repr=False, compare=False)
    Fqm: GF = field(init=False, repr=False, compare=False)
    Fq2m: GF | None = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        if not is_prime(self.p):
            raise PreconditionError(f"p={self.p} is not prime")
        if self.e < 1:
            raise PreconditionError("e >= 1 required")
        if self.m < 2:
            raise PreconditionError("m >= 2 required")
        if len(self.irreducible_q) != self.e + 1:
            raise PreconditionError("irreducible_q must have degree e")
        if len(self.irreducible_qm) != self.m + 1:
            raise PreconditionError("irreducible_qm must have degree m")
        Fp = GF(self.p)
        Fq = GF(self.p, Fp, self.irreducible_q, "q")
        Fqm = GF(self.p, Fq, self.irreducible_qm, "qm")
        Fq2m = None
        if self.irreducible_q2m is not None:
            if len(self.irreducible_q2m) != 3:
                raise PreconditionError("irreducible_q2m must have degree 2")
            Fq2m = GF(self.p, Fqm, self.irreducible_q2m, "q2m")
        object.__setattr__(self, "Fp", Fp)
        object.__setattr__(self, "Fq", Fq)
        object.__setattr__(self, "Fqm", Fqm)
        object.__setattr__(self, "Fq2m", Fq2m)

    @property
    def q(self) -> int:
        return self.p ** self.e

    @property
    def Q(self) -> int:
        return self.q ** self.m

    def level(self, name: str) -> GF:
        F = {"base": self.Fp, "q": self.Fq, "qm": self.Fqm, "q2m": self.Fq2m}.get(name)
        if F is None:
            raise PreconditionError(f"level {name!r} not available")
        return F

    def element(self, code: int, level: str = "qm") -> FieldElement:
        return FieldElement(self.level(level), code)

    def embed(self, x: FieldElement, level: str) -> FieldElement:
        """Image of x under the inclusion into a higher level (identity on codes)."""
        target = self.level(level)
        if LEVELS.index(x.level) > LEVELS.index(level):
            raise PreconditionError(f"cannot embed {x.level} into {level}")
        return FieldElement(target, x.code)

    def extend(self, poly_q2m: Sequence[int] | None = None) -> "FieldParams":
        """The same tower with the quadratic extension F_{q^{2m}} attached."""
        if poly_q2m is None:
            poly_q2m = smallest_irreducible(self.Fqm, 2)
        return FieldParams(self.p, self.e, self.m, self.irreducible_q, self.irreducible_qm,
                           tuple(int(c) for c in poly_q2m))

    def to_json(self) -> dict:
        Fp_digits = lambda c: [int(d) for d in self.Fq.to_poly(c)]  # noqa: E731
        out = {
            "p": self.p,
            "e": self.e,
            "m": self.m,
            "poly_q": list(self.irreducible_q),
            "poly_qm": [Fp_digits(c) for c in self.irreducible_qm],
        }
        if self.irreducible_q2m is not None:
            out["poly_q2m"] = [[Fp_digits(d) for d in self.Fqm.to_poly(c)] for c in self.irreducible_q2m]
        return out

    @classmethod
    def from_json(cls, data: dict) -> "FieldParams":
        p, e = data["p"], data["e"]

        def code(digits):
            c = 0
            for d in reversed(digits):
                c = c * p + d
            return c

        q = p ** e
        poly_qm = tuple(code(d) for d in data["poly_qm"])
        poly_q2m = None
        if "poly_q2m" in data:
            poly_q2m = tuple(sum(code(d) * q ** i for i, d in enumerate(coef)) for coef in data["poly_q2m"])
        return cls(p, e, data["m"], tuple(data["poly_q"]), poly_qm, poly_q2m)


def build_tower(p: int, e: int, m: int, seed_polynomials: dict | None = None,
                with_q2m: bool = False) -> FieldParams:
    """Build F_p <= F_q <= F_{q^m} (and optionally F_{q^{2m}}).

    Unless overridden in ``seed_polynomials`` (keys ``"q"``, ``"qm"``, ``"q2m"``,
    values little-endian code lists), each defining polynomial is the smallest
    monic irreducible in the order of :func:`monic_polys`.
    """
    if not isinstance(p, int) or not is_prime(p):
        raise PreconditionError(f"p={p} is not prime")
    if e < 1:
        raise PreconditionError("e >= 1 required")
    if m < 2:
        raise PreconditionError("m >= 2 required")
    seeds = seed_polynomials or {}
    Fp = GF(p)
    poly_q = seeds.get("q") or smallest_irreducible(Fp, e)
    Fq = GF(p, Fp, poly_q, "q")
    poly_qm = seeds.get("qm") or smallest_irreducible(Fq, m)
    tower = FieldParams(p, e, m, tuple(poly_q), tuple(poly_qm))
    if with_q2m or "q2m" in seeds:
        tower = tower.extend(seeds.get("q2m"))
    return tower


# -- Frobenius, norm and trace on F_{q^m} -------------------------------------

def _require_qm(x: FieldElement) -> None:
    if x.level != "qm":
        raise PreconditionError(f"expected an element of F_(q^m), got level {x.level}")


def frobenius(x: FieldElement, s: int) -> FieldElement:
    """x -> x^(q^s)."""
    _require_qm(x)
    F = x.field
    m = F.degree
    if not 0 <= s < m:
        raise PreconditionError(f"frobenius step s={s} outside [0, {m})")
    return FieldElement(F, F.pow(x.code, F.sub.order ** s))


def norm(x: FieldElement) -> FieldElement:
    """N_{q^m/q}(x) = x^((q^m-1)/(q-1)), returned at level q."""
    _require_qm(x)
    F = x.field
    q = F.sub.order
    y = F.pow(x.code, (F.order - 1) // (q - 1))
    if y >= q:
        raise AssertionError("norm left F_q")  # pragma: no cover
    return FieldElement(F.sub, y)


def trace(x: FieldElement) -> FieldElement:
    """Tr_{q^m/q}(x) = sum_{i<m} x^(q^i), returned at level q."""
    _require_qm(x)
    F = x.field
    q = F.sub.order
    acc, y = 0, x.code
    for _ in range(F.degree):
        acc = F.add(acc, y)
        y = F.pow(y, q)
    if acc >= q:
        raise AssertionError("trace left F_q")  # pragma: no cover
    return FieldElement(F.sub, acc)


def norm_code(F: GF, a: int) -> int:
    return F.pow(a, (F.order - 1) // (F.sub.order - 1))


def trace_code(F: GF, a: int, q: int | None = None, degree: int | None = None) -> int:
    """Trace of code a down to the subfield of order q (default: immediate subfield)."""
    q = F.sub.order if q is None else q
    degree = F.degree if degree is None else degree
    acc, y = 0, a
    for _ in range(degree):
        acc = F.add(acc, y)
        y = F.pow(y, q)
    return acc


def in_subfield(F: GF, a: int, q: int) -> bool:
    return F.pow(a, q) == a
