"""Exact arithmetic in a real quadratic field of narrow class number one.

Everything is written against the integral basis {1, omega} with
omega = (D + sqrt(D))/2, which works uniformly for D = 0, 1 mod 4:

    omega^2 = D*omega - D(D-1)/4,   omega' = D - omega.

Elements are pairs of rationals in this basis (QuadRat), ideals are
Hermite-normal-form Z-modules {a, b + c*omega} (IdealHNF).  The two real
embeddings are ordered so that sigma1(sqrt(D)) = +sqrt(D).  All
comparisons of embeddings are done exactly (sign of A + B*sqrt(D) over Q),
never through floats; floats appear only as search-window presizing hints.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

from .errors import (
    FactorizationTooLarge,
    GeneratorSearchExhausted,
    NarrowClassNumberNotOne,
    NotFundamentalDiscriminant,
    NotTotallyPositive,
    ZeroElement,
)

__all__ = [
    "FieldContext",
    "QuadRat",
    "IdealHNF",
    "make_field",
    "unit_reduce",
    "enumerate_tp_invdiff",
    "ideal_from_element",
    "ideal_mul",
    "ideal_norm",
    "ideal_divisors",
    "sigma_ideal",
    "principal_generator_tp",
    "primes_below",
    "kronecker",
]


def _is_squarefree(n: int) -> bool:
    if n % 4 == 0:
        return False
    d = 2
    while d * d <= n:
        if n % (d * d) == 0:
            return False
        d += 1
    return True


def is_fundamental_discriminant(D: int) -> bool:
    if D <= 1:
        return False
    if D % 4 == 1:
        return _is_squarefree(D)
    if D % 4 == 0:
        m = D // 4
        return m % 4 in (2, 3) and _is_squarefree(m)
    return False


def kronecker(a: int, n: int) -> int:
    """Kronecker symbol (a/n)."""
    if n == 0:
        return 1 if a in (1, -1) else 0
    sign = 1
    if n < 0:
        n = -n
        if a < 0:
            sign = -sign
    # factor out twos of n
    t = 0
    while n % 2 == 0:
        n //= 2
        t += 1
    if t:
        if a % 2 == 0:
            return 0
        if t % 2 == 1 and a % 8 in (3, 5):
            sign = -sign
    a %= n
    # Jacobi on the odd part
    while a != 0:
        while a % 2 == 0:
            a //= 2
            if n % 8 in (3, 5):
                sign = -sign
        a, n = n, a
        if a % 4 == 3 and n % 4 == 3:
            sign = -sign
        a %= n
    return sign if n == 1 else 0


def _sqrt_mod_prime(a: int, p: int) -> int | None:
    """Tonelli-Shanks; returns x with x^2 = a mod p, or None."""
    a %= p
    if p == 2:
        return a
    if a == 0:
        return 0
    if pow(a, (p - 1) // 2, p) != 1:
        return None
    if p % 4 == 3:
        return pow(a, (p + 1) // 4, p)
    q, s = p - 1, 0
    while q % 2 == 0:
        q //= 2
        s += 1
    z = 2
    while pow(z, (p - 1) // 2, p) != p - 1:
        z += 1
    m, c, t, r = s, pow(z, q, p), pow(a, q, p), pow(a, (q + 1) // 2, p)
    while t != 1:
        i, t2 = 0, t
        while t2 != 1:
            t2 = t2 * t2 % p
            i += 1
        b = pow(c, 1 << (m - i - 1), p)
        m, c = i, b * b % p
        t, r = t * c % p, r * b % p
    return r


_SIGN_CACHE_LIMIT = 1 << 20


def _sign_plus_sqrtD(A: Fraction, B: Fraction, D: int) -> int:
    """Exact sign of A + B*sqrt(D) for rational A, B."""
    if B == 0:
        return (A > 0) - (A < 0)
    if A == 0:
        return (B > 0) - (B < 0)
    if A > 0 and B > 0:
        return 1
    if A < 0 and B < 0:
        return -1
    # opposite signs: compare A^2 with B^2 D
    diff = A * A - B * B * D
    if diff == 0:
        return 0  # impossible for fundamental D, kept for safety
    if A > 0:  # B < 0
        return 1 if diff > 0 else -1
    return -1 if diff > 0 else 1


class QuadRat:
    """Element a + b*omega of F with exact rational coordinates."""

    __slots__ = ("ctx", "a", "b")

    def __init__(self, ctx: "FieldContext", a, b):
        self.ctx = ctx
        self.a = Fraction(a)
        self.b = Fraction(b)

    def __repr__(self):
        return f"QuadRat({self.a}, {self.b}; D={self.ctx.D})"

    def __eq__(self, other):
        if isinstance(other, QuadRat):
            return self.ctx.D == other.ctx.D and self.a == other.a and self.b == other.b
        if isinstance(other, (int, Fraction)):
            return self.b == 0 and self.a == other
        return NotImplemented

    def __hash__(self):
        return hash((self.a, self.b, self.ctx.D))

    def __bool__(self):
        return bool(self.a or self.b)

    def _coerce(self, other):
        if isinstance(other, QuadRat):
            return other
        if isinstance(other, (int, Fraction)):
            return QuadRat(self.ctx, other, 0)
        return None

    def __add__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return QuadRat(self.ctx, self.a + o.a, self.b + o.b)

    __radd__ = __add__

    def __neg__(self):
        return QuadRat(self.ctx, -self.a, -self.b)

    def __sub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return QuadRat(self.ctx, self.a - o.a, self.b - o.b)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        # (a1 + b1 w)(a2 + b2 w), w^2 = D w - n0
        ctx = self.ctx
        bb = self.b * o.b
        return QuadRat(
            ctx,
            self.a * o.a - bb * ctx.omega_norm,
            self.a * o.b + self.b * o.a + bb * ctx.omega_trace,
        )

    __rmul__ = __mul__

    def conj(self) -> "QuadRat":
        return QuadRat(self.ctx, self.a + self.b * self.ctx.omega_trace, -self.b)

    def norm(self) -> Fraction:
        ctx = self.ctx
        return self.a * self.a + self.a * self.b * ctx.omega_trace + self.b * self.b * ctx.omega_norm

    def trace(self) -> Fraction:
        return 2 * self.a + self.b * self.ctx.omega_trace

    def inverse(self) -> "QuadRat":
        n = self.norm()
        if n == 0:
            raise ZeroElement("division by zero element")
        c = self.conj()
        return QuadRat(self.ctx, c.a / n, c.b / n)

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self * o.inverse()

    def __pow__(self, n: int):
        if n < 0:
            return self.inverse() ** (-n)
        result = QuadRat(self.ctx, 1, 0)
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def embedding_sign(self, which: int) -> int:
        """Exact sign of sigma_which(self), which in {1, 2}."""
        # sigma(a + b w) = (2a + bD +/- b sqrt(D)) / 2
        A = 2 * self.a + self.b * self.ctx.D
        B = self.b if which == 1 else -self.b
        return _sign_plus_sqrtD(A, B, self.ctx.D)

    def is_totally_positive(self) -> bool:
        # equivalent to N > 0 and Tr > 0, both rational
        return self.norm() > 0 and self.trace() > 0

    def compare_embedding(self, other, which: int) -> int:
        """Exact sign of sigma_which(self - other)."""
        o = self._coerce(other)
        return (self - o).embedding_sign(which)

    def embeddings_float(self) -> tuple[float, float]:
        r = self.ctx.sqrtD_float
        mid = float(2 * self.a + self.b * self.ctx.D) / 2.0
        half = float(self.b) * r / 2.0
        return (mid + half, mid - half)

    def is_integral(self) -> bool:
        return self.a.denominator == 1 and self.b.denominator == 1

    def int_coords(self) -> tuple[int, int]:
        if not self.is_integral():
            raise ValueError(f"{self!r} is not integral")
        return (int(self.a), int(self.b))

    def to_json(self) -> list[str]:
        return [str(self.a), str(self.b)]


@dataclass(frozen=True)
class NarrowCheck:
    """Record of the narrow-class-number-one verification."""

    unit_norm: int
    minkowski_bound: int
    primes_checked: tuple[int, ...]


class FieldContext:
    """A real quadratic field with verified narrow class number one.

    Immutable after construction; the private dictionaries are
    memoization caches of pure functions and are safe across threads.
    """

    def __init__(self, D: int, eps0_coords: tuple[int, int], narrow_ok: NarrowCheck):
        self.D = D
        self.omega_trace = D
        self.omega_norm = D * (D - 1) // 4
        self.sqrtD_float = math.sqrt(D)
        self.eps0 = QuadRat(self, Fraction(eps0_coords[0]), Fraction(eps0_coords[1]))
        self.narrow_ok = narrow_ok
        self.omega = QuadRat(self, 0, 1)
        self.one = QuadRat(self, 1, 0)
        self.zero = QuadRat(self, 0, 0)
        # sqrt(D) = 2*omega - D
        self.sqrtD = QuadRat(self, -D, 2)
        self.inv_sqrtD = QuadRat(self, Fraction(-1), Fraction(2, D))
        self.eps0_sq = self.eps0 * self.eps0
        self.eps0_pow4 = self.eps0_sq * self.eps0_sq
        self.eps0_float = self.eps0.embeddings_float()[0]
        self.unit_index = 4 if narrow_ok.unit_norm == -1 else 2  # [O^x : O_+^x]
        self._prime_cache: dict[int, list[tuple["IdealHNF", str]]] = {}
        self._generator_cache: dict[tuple[int, int, int], QuadRat] = {}
        self._different = None

    def __repr__(self):
        return f"FieldContext(D={self.D})"

    def __eq__(self, other):
        return isinstance(other, FieldContext) and other.D == self.D

    def __hash__(self):
        return hash(("FieldContext", self.D))

    def elem(self, a, b=0) -> QuadRat:
        return QuadRat(self, a, b)

    @property
    def different(self) -> "IdealHNF":
        if self._different is None:
            self._different = ideal_from_element(self, self.sqrtD)
        return self._different


def _fundamental_unit_cf(D: int) -> tuple[int, int]:
    """Fundamental unit (u + v*sqrt(D))/2 > 1 by the PQa continued fraction.

    Expands omega_c = (b0 + sqrt(D))/2, b0 = D mod 2, and harvests the
    first unit from the convergent identity
        G_i^2 - D B_i^2 = (-1)^(i+1) * Q0 * Q_(i+1).
    The result is verified minimal by a Pell scan afterwards.
    """
    b0 = D % 2
    P, Q = b0, 2
    sq = math.isqrt(D)
    p_prev, p_cur = 1, (P + sq) // Q  # a0
    q_prev, q_cur = 0, 1
    a = p_cur
    for i in range(1, 10_000):
        P = a * Q - P
        Q = (D - P * P) // Q
        if Q == 2:
            G = 2 * p_cur - b0 * q_cur
            if G * G - D * q_cur * q_cur in (4, -4):
                return abs(G), q_cur
        a = (P + sq) // Q
        p_prev, p_cur = p_cur, a * p_cur + p_prev
        q_prev, q_cur = q_cur, a * q_cur + q_prev
    raise NotFundamentalDiscriminant(f"continued fraction for D={D} did not close")


def _pell_scan_smaller_unit(D: int, v_found: int) -> bool:
    """True if some unit (u + v sqrt(D))/2 with 1 <= v < v_found exists."""
    for v in range(1, v_found):
        for s in (4, -4):
            t = D * v * v + s
            if t > 0:
                u = math.isqrt(t)
                if u * u == t:
                    return True
    return False


def make_field(D: int) -> FieldContext:
    """Verified field context for fundamental discriminant D.

    Raises NotFundamentalDiscriminant, or NarrowClassNumberNotOne when
    N(eps0) = +1 or some prime ideal below the Minkowski bound is not
    principal.
    """
    if not is_fundamental_discriminant(D):
        raise NotFundamentalDiscriminant(f"{D} is not a fundamental discriminant > 1")
    u, v = _fundamental_unit_cf(D)
    if _pell_scan_smaller_unit(D, v):
        raise NotFundamentalDiscriminant(
            f"internal error: continued-fraction unit for D={D} is not fundamental"
        )
    unit_norm = (u * u - D * v * v) // 4
    # coordinates in {1, omega}: (u + v sqrt(D))/2 = (u - vD)/2 + v*omega
    a2, b2 = Fraction(u - v * D, 2), Fraction(v)
    if unit_norm != -1:
        raise NarrowClassNumberNotOne(f"fundamental unit of Q(sqrt({D})) has norm +1")

    mink = math.isqrt(4 * D) // 2  # floor(sqrt(D)/2)
    checked = []
    ctx = FieldContext(D, (0, 0), NarrowCheck(unit_norm, mink, ()))
    # patch the true unit in (context needed to build QuadRat)
    ctx.eps0 = QuadRat(ctx, a2, b2)
    ctx.eps0_sq = ctx.eps0 * ctx.eps0
    ctx.eps0_pow4 = ctx.eps0_sq * ctx.eps0_sq
    ctx.eps0_float = ctx.eps0.embeddings_float()[0]
    if not (ctx.eps0.norm() == -1 and ctx.eps0.embedding_sign(1) > 0 and ctx.eps0_float > 1):
        raise NarrowClassNumberNotOne(f"unit normalization failed for D={D}")
    for p in _primes_upto(mink):
        for ideal, _kind in _split_prime(ctx, p):
            if ideal_norm(ideal) <= mink:
                try:
                    principal_generator_tp(ctx, ideal)
                except GeneratorSearchExhausted:
                    raise NarrowClassNumberNotOne(
                        f"prime of norm {ideal_norm(ideal)} above {p} is not principal"
                    ) from None
                checked.append(p)
    ctx.narrow_ok = NarrowCheck(unit_norm, mink, tuple(checked))
    return ctx


@lru_cache(maxsize=None)
def _primes_upto(n: int) -> tuple[int, ...]:
    if n < 2:
        return ()
    sieve = bytearray([1]) * (n + 1)
    sieve[0] = sieve[1] = 0
    for i in range(2, math.isqrt(n) + 1):
        if sieve[i]:
            sieve[i * i :: i] = bytearray(len(sieve[i * i :: i]))
    return tuple(i for i in range(2, n + 1) if sieve[i])


# ---------------------------------------------------------------------------
# ideals


class IdealHNF:
    """Integral ideal with HNF Z-basis {a, b + c*omega}, c | a, c | b."""

    __slots__ = ("ctx", "a", "b", "c")

    def __init__(self, ctx: FieldContext, a: int, b: int, c: int):
        self.ctx = ctx
        self.a = a
        self.b = b
        self.c = c

    def __repr__(self):
        return f"IdealHNF({self.a}, {self.b} + {self.c}w; D={self.ctx.D})"

    def __eq__(self, other):
        return (
            isinstance(other, IdealHNF)
            and self.ctx.D == other.ctx.D
            and (self.a, self.b, self.c) == (other.a, other.b, other.c)
        )

    def __hash__(self):
        return hash((self.a, self.b, self.c, self.ctx.D))

    def norm(self) -> int:
        return self.a * self.c

    def is_unit_ideal(self) -> bool:
        return self.a == 1 and self.c == 1

    def contains(self, x: QuadRat) -> bool:
        if not x.is_integral():
            return False
        u, v = x.int_coords()
        if v % self.c:
            return False
        return (u - (v // self.c) * self.b) % self.a == 0

    def basis_elements(self) -> tuple[QuadRat, QuadRat]:
        return (self.ctx.elem(self.a, 0), self.ctx.elem(self.b, self.c))

    def conj(self) -> "IdealHNF":
        e1, e2 = self.basis_elements()
        return _hnf_from_o_module(self.ctx, [e1, e2.conj()])

    def divides(self, other: "IdealHNF") -> bool:
        """self | other, i.e. other is contained in self."""
        e1, e2 = other.basis_elements()
        return self.contains(e1) and self.contains(e2)

    def to_json(self):
        return {"a": self.a, "b": self.b, "c": self.c}


def _hnf_two_col(rows: list[tuple[int, int]]) -> tuple[int, int, int]:
    """HNF of the Z-module spanned by rows (x, y) meaning x + y*omega.

    Returns (a, b, c) with basis {a, b + c omega}, a, c > 0, 0 <= b < a.
    """
    rows = [r for r in rows if r != (0, 0)]
    if not rows:
        raise ZeroElement("zero module has no HNF basis")
    # reduce the y-column to a single gcd entry
    c = 0
    xc, yc = 0, 0
    for (x, y) in rows:
        if y == 0:
            continue
        if yc == 0:
            xc, yc = x, y
            continue
        # gcd step on (yc, y)
        while y:
            q = yc // y
            xc, yc, x, y = x, y, xc - q * x, yc - q * y
    # fold all rows to y = 0 using (xc, yc)
    a = 0
    for (x, y) in rows:
        if yc != 0 and y != 0:
            q = y // yc
            x -= q * xc
        a = math.gcd(a, x)
    if yc == 0:
        raise ZeroElement("module of rank < 2 is not an ideal")
    if yc < 0:
        xc, yc = -xc, -yc
    if a == 0:
        raise ZeroElement("module of rank < 2 is not an ideal")
    b = xc % a
    return a, b, yc


def _hnf_from_o_module(ctx: FieldContext, gens: list[QuadRat]) -> IdealHNF:
    """HNF of the O-module generated by gens (each must be integral)."""
    rows = []
    for g in gens:
        u, v = g.int_coords()
        rows.append((u, v))
        gw = g * ctx.omega
        rows.append(gw.int_coords())
    a, b, c = _hnf_two_col(rows)
    if a % c or b % c:
        raise ArithmeticError(f"module is not an O-ideal: ({a}, {b}, {c})")
    return IdealHNF(ctx, a, b, c)


def ideal_from_element(ctx: FieldContext, x: QuadRat) -> IdealHNF:
    """Principal ideal (x) for nonzero integral x."""
    if not x:
        raise ZeroElement("(0) is not an integral ideal here")
    if not x.is_integral():
        raise ValueError("ideal_from_element needs an integral element")
    return _hnf_from_o_module(ctx, [x])


def ideal_mul(m: IdealHNF, n: IdealHNF) -> IdealHNF:
    ctx = m.ctx
    gens = []
    for e1 in m.basis_elements():
        for e2 in n.basis_elements():
            gens.append(e1 * e2)
    return _hnf_from_o_module(ctx, gens)


def ideal_norm(m: IdealHNF) -> int:
    return m.norm()


def unit_ideal(ctx: FieldContext) -> IdealHNF:
    return IdealHNF(ctx, 1, 0, 1)


def _ideal_div_by_rational(m: IdealHNF, p: int) -> IdealHNF:
    assert m.a % p == 0 and m.b % p == 0 and m.c % p == 0
    return IdealHNF(m.ctx, m.a // p, m.b // p, m.c // p)


def ideal_div_prime(m: IdealHNF, p: IdealHNF, p_type: str, rational_p: int) -> IdealHNF:
    """Exact quotient m / p for a prime p dividing m."""
    if p_type == "inert":
        return _ideal_div_by_rational(m, rational_p)
    # split or ramified: p * conj(p) = (rational_p) up to conjugate conventions
    prod = ideal_mul(m, p.conj())
    return _ideal_div_by_rational(prod, rational_p)


def _split_prime(ctx: FieldContext, p: int) -> list[tuple[IdealHNF, str]]:
    """Prime ideals above p with their type (split / inert / ramified)."""
    if p in ctx._prime_cache:
        return ctx._prime_cache[p]
    D = ctx.D
    n0 = ctx.omega_norm
    result: list[tuple[IdealHNF, str]]
    if p == 2:
        if D % 2 == 0:
            r = 0 if (D // 4) % 2 == 0 else 1
            result = [(_hnf_from_o_module(ctx, [ctx.elem(2), ctx.elem(-r, 1)]), "ramified")]
        elif D % 8 == 1:
            p1 = _hnf_from_o_module(ctx, [ctx.elem(2), ctx.omega])
            p2 = _hnf_from_o_module(ctx, [ctx.elem(2), ctx.elem(-1, 1)])
            result = [(p1, "split"), (p2, "split")]
        else:
            result = [(IdealHNF(ctx, 2, 0, 2), "inert")]
    elif D % p == 0:
        # p odd dividing D: t^2 - D t + n0 = t^2 mod p, double root 0
        assert n0 % p == 0
        result = [(_hnf_from_o_module(ctx, [ctx.elem(p), ctx.omega]), "ramified")]
    else:
        rt = _sqrt_mod_prime(D % p, p)
        if rt is None:
            result = [(IdealHNF(ctx, p, 0, p), "inert")]
        else:
            inv2 = pow(2, -1, p)
            r1 = (D + rt) * inv2 % p
            r2 = (D - rt) * inv2 % p
            p1 = _hnf_from_o_module(ctx, [ctx.elem(p), ctx.elem(-r1, 1)])
            p2 = _hnf_from_o_module(ctx, [ctx.elem(p), ctx.elem(-r2, 1)])
            result = [(p1, "split"), (p2, "split")] if r1 != r2 else [(p1, "ramified")]
    ctx._prime_cache[p] = result
    return result


def _trial_factor(n: int, bound: int) -> dict[int, int]:
    fac: dict[int, int] = {}
    m = n
    for p in range(2, bound + 1):
        if p * p > m:
            break
        while m % p == 0:
            fac[p] = fac.get(p, 0) + 1
            m //= p
    if m > 1:
        if m > bound * bound:
            raise FactorizationTooLarge(f"norm {n} has a factor {m} beyond the trial bound")
        fac[m] = fac.get(m, 0) + 1
    return fac


def ideal_factor(m: IdealHNF, factor_bound: int = 10**6) -> list[tuple[IdealHNF, str, int, int]]:
    """Prime factorization [(prime, type, rational p, exponent)] of m."""
    ctx = m.ctx
    n = m.norm()
    if n == 0:
        raise ZeroElement("cannot factor the zero ideal")
    out = []
    for p in sorted(_trial_factor(n, factor_bound)):
        for prime, kind in _split_prime(ctx, p):
            e = 0
            cur = m
            while prime.divides(cur):
                cur = ideal_div_prime(cur, prime, kind, p)
                e += 1
            if e:
                out.append((prime, kind, p, e))
    total = 1
    for prime, _kind, _p, e in out:
        total *= prime.norm() ** e
    assert total == n, "valuation bookkeeping lost norm"
    return out


def ideal_divisors(ctx: FieldContext, m: IdealHNF, factor_bound: int = 10**6) -> list[IdealHNF]:
    """All integral divisors of m, unit ideal first, sorted by norm."""
    fac = ideal_factor(m, factor_bound)
    divisors = [unit_ideal(ctx)]
    for prime, _kind, _p, e in fac:
        powers = [unit_ideal(ctx)]
        cur = unit_ideal(ctx)
        for _ in range(e):
            cur = ideal_mul(cur, prime)
            powers.append(cur)
        divisors = [ideal_mul(d, q) for d in divisors for q in powers]
    divisors.sort(key=lambda d: (d.norm(), d.a, d.b, d.c))
    return divisors


def sigma_ideal(ctx: FieldContext, m: IdealHNF, r: int, factor_bound: int = 10**6) -> int:
    """Divisor sum sum_{b | m} N(b)^r via the multiplicative product formula."""
    if r < 0:
        raise ValueError("sigma_ideal needs r >= 0")
    total = 1
    for prime, _kind, _p, e in ideal_factor(m, factor_bound):
        q = prime.norm() ** r
        total *= (e + 1) if q == 1 else (q ** (e + 1) - 1) // (q - 1)
    return total


# ---------------------------------------------------------------------------
# totally positive machinery


def unit_reduce(ctx: FieldContext, x: QuadRat) -> QuadRat:
    """The unique O_+^x-orbit representative with sigma1/sigma2 in [1, eps0^4).

    Multiplying by eps0^2 scales the embedding ratio by eps0^4, so the
    half-open window picks exactly one point of the orbit.
    """
    if not x.is_totally_positive():
        raise NotTotallyPositive(f"{x!r} is not totally positive")
    # float presizing of the unit exponent, then exact adjustment
    e1, e2 = x.embeddings_float()
    if e1 > 0 and e2 > 0:
        j = math.floor(math.log(e1 / e2) / (4 * math.log(ctx.eps0_float)))
        x = x * (ctx.eps0_sq ** (-j))
    while (x - x.conj()).embedding_sign(1) < 0:  # ratio < 1
        x = x * ctx.eps0_sq
    while (x - ctx.eps0_pow4 * x.conj()).embedding_sign(1) >= 0:  # ratio >= eps0^4
        x = x * ctx.eps0_sq.inverse()
    return x


def unit_reduce_abs(ctx: FieldContext, x: QuadRat) -> QuadRat:
    """Scale x by O_+^x so that |sigma1/sigma2| lies in [1, eps0^4).

    Works for any nonzero x (used for coset representatives, which need
    not be totally positive).  Comparisons run on x^2, which is totally
    positive up to sign.
    """
    if not x:
        raise ZeroElement("cannot unit-reduce zero")
    e1, e2 = x.embeddings_float()
    if e1 != 0 and e2 != 0:
        j = math.floor(math.log(abs(e1 / e2)) / (4 * math.log(ctx.eps0_float)))
        x = x * (ctx.eps0_sq ** (-j))
    x2 = x * x
    eps8 = ctx.eps0_pow4 * ctx.eps0_pow4
    while (x2 - x2.conj()).embedding_sign(1) < 0:
        x = x * ctx.eps0_sq
        x2 = x * x
    while (x2 - eps8 * x2.conj()).embedding_sign(1) >= 0:
        x = x * ctx.eps0_sq.inverse()
        x2 = x * x
    return x


def enumerate_tp_invdiff(
    ctx: FieldContext, trace_bound: int, orbits: bool = False
) -> list[QuadRat]:
    """Totally positive elements of the inverse different with Tr <= bound.

    Writing xi = (x + y*omega)/sqrt(D), the trace of xi is exactly y and
    total positivity is |2x + yD| < y*sqrt(D); the enumeration is the
    integer box that this carves out.  With orbits=True only the
    unit-reduced representative of each O_+^x-orbit is kept.  Sorted by
    (trace, first embedding).
    """
    out = []
    D = ctx.D
    for y in range(1, trace_bound + 1):
        lim = math.isqrt(D * y * y - 1)
        lo = -((D * y + lim) // 2)
        hi = (lim - D * y) // 2
        for x in range(lo, hi + 1):
            if (2 * x + y * D) ** 2 < D * y * y:
                # sigma1 increases with x at fixed y, so rows come out sorted
                out.append(ctx.elem(x, y) * ctx.inv_sqrtD)
    if not orbits:
        return out
    reps = []
    seen = set()
    for xi in out:
        r = unit_reduce(ctx, xi)
        key = (r.a, r.b)
        if key not in seen and r.trace() <= trace_bound:
            seen.add(key)
            reps.append(r)
    reps.sort(key=lambda t: (t.trace(), t.embeddings_float()[0]))
    return reps


# ---------------------------------------------------------------------------
# generators of ideals


def _gauss_reduce(ctx: FieldContext, v1: tuple[int, int], v2: tuple[int, int]):
    """Gauss-reduce a Z-basis under Q(x,y) = sigma1^2 + sigma2^2.

    Q(x, y) = 2x^2 + 2Dxy + D(D+1)/2 y^2 (positive definite, exact ints
    after doubling).
    """
    D = ctx.D

    def q(v):  # 2 * Q to stay integral
        x, y = v
        return 4 * x * x + 4 * D * x * y + D * (D + 1) * y * y

    def bil(u, v):  # 2 * B(u, v)
        return (q((u[0] + v[0], u[1] + v[1])) - q(u) - q(v)) // 2

    while True:
        if q(v1) > q(v2):
            v1, v2 = v2, v1
        mu = round(Fraction(bil(v1, v2), q(v1)))
        v2 = (v2[0] - mu * v1[0], v2[1] - mu * v1[1])
        if q(v2) >= q(v1):
            return v1, v2


def principal_generator_tp(
    ctx: FieldContext, m: IdealHNF, search_slack: int = 4
) -> QuadRat:
    """Totally positive unit-reduced generator of an integral ideal.

    Searches the Gauss-reduced lattice of m for an element of norm
    +-N(m); after a unit/sign adjustment it is totally positive, and the
    HNF of the resulting principal ideal must reproduce m exactly.
    Exists whenever the narrow class number is one.
    """
    key = (m.a, m.b, m.c)
    hit = ctx._generator_cache.get(key)
    if hit is not None:
        return hit
    n = m.norm()
    if n == 0:
        raise ZeroElement("zero ideal has no generator")
    if m.is_unit_ideal():
        g = unit_reduce(ctx, ctx.one)
        ctx._generator_cache[key] = g
        return g
    v1, v2 = _gauss_reduce(ctx, (m.a, 0), (m.b, m.c))
    D = ctx.D

    def q2(v):  # 2 * (sigma1^2 + sigma2^2)
        x, y = v
        return 4 * x * x + 4 * D * x * y + D * (D + 1) * y * y

    eps_sq_float = ctx.eps0_float**2
    bound = int(2 * (eps_sq_float + 1) * n * search_slack) + 4
    q1, q22 = q2(v1), q2(v2)
    b12 = (q2((v1[0] + v2[0], v1[1] + v2[1])) - q1 - q22) // 2
    # enumerate s*v1 + t*v2 with q2 <= bound
    det4 = q1 * q22 - b12 * b12  # > 0
    t_max = math.isqrt(bound * q1 // det4) + 1
    for t in range(-t_max, t_max + 1):
        # q2(s, t) = q1 s^2 + 2 b12 s t + q22 t^2 <= bound
        disc = b12 * b12 * t * t - q1 * (q22 * t * t - bound)
        if disc < 0:
            continue
        r = math.isqrt(disc)
        s_lo = -(b12 * t + r) // q1 - 1
        s_hi = (-b12 * t + r) // q1 + 1
        for s in range(s_lo, s_hi + 1):
            if s == 0 and t == 0:
                continue
            x = s * v1[0] + t * v2[0]
            y = s * v1[1] + t * v2[1]
            g = ctx.elem(x, y)
            ng = g.norm()
            if ng == n or ng == -n:
                if ng < 0:
                    g = g * ctx.eps0
                if g.embedding_sign(1) < 0:
                    g = -g
                g = unit_reduce(ctx, g)
                if ideal_from_element(ctx, g) == m:
                    ctx._generator_cache[key] = g
                    return g
    raise GeneratorSearchExhausted(
        f"no generator of norm +-{n} found for {m!r}; narrow class number 1 violated?"
    )


def primes_below(ctx: FieldContext, B: int) -> list[tuple[IdealHNF, QuadRat, str]]:
    """All prime ideals of norm <= B as (ideal, tp generator, type)."""
    out = []
    for p in _primes_upto(B):
        for prime, kind in _split_prime(ctx, p):
            if prime.norm() <= B:
                out.append((prime, principal_generator_tp(ctx, prime), kind))
    out.sort(key=lambda t: (t[0].norm(), t[0].b))
    return out
