"""Arithmetic in the binary field GF(2^m).

Elements are plain ints whose bit i is the coefficient of x^i, so
addition is ``^`` and the zero/one elements are 0 and 1.  A
:class:`FieldCtx` carries the modulus and is passed to every operation.
"""

from __future__ import annotations

import functools
from dataclasses import dataclass, field

MAX_DEGREE = 24
# log/exp tables are built lazily up to this degree; above it we shift-and-reduce
_TABLE_DEGREE = 16


# ---------------------------------------------------------------------------
# GF(2)[x] helpers on int bitmasks
# ---------------------------------------------------------------------------

def clmul(a: int, b: int) -> int:
    """Carry-less product of two GF(2)[x] polynomials."""
    r = 0
    while b:
        if b & 1:
            r ^= a
        a <<= 1
        b >>= 1
    return r


def poly_mod(a: int, m: int) -> int:
    dm = m.bit_length()
    while a.bit_length() >= dm:
        a ^= m << (a.bit_length() - dm)
    return a


def poly_gcd(a: int, b: int) -> int:
    while b:
        a, b = b, poly_mod(a, b)
    return a


def is_irreducible(p: int) -> bool:
    """Rabin-style test: gcd(x^(2^i) - x, p) = 1 for every i <= deg/2."""
    d = p.bit_length() - 1
    if d < 1:
        return False
    if d == 1:
        return True
    if not p & 1:
        return False
    x = 0b10
    t = x
    for _ in range(d // 2):
        t = poly_mod(clmul(t, t), p)
        if poly_gcd(p, t ^ x) != 1:
            return False
    return True


def prime_factors(n: int) -> list[int]:
    out = []
    d = 2
    while d * d <= n:
        if n % d == 0:
            out.append(d)
            while n % d == 0:
                n //= d
        d += 1 if d == 2 else 2
    if n > 1:
        out.append(n)
    return out


class FieldError(ValueError):
    """Raised for elements or degrees that do not fit a field context."""


# ---------------------------------------------------------------------------
# Field context
# ---------------------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class FieldCtx:
    """GF(2^m) defined by the lexicographically smallest irreducible modulus."""

    degree: int
    modulus: int
    _tables: dict = field(default_factory=dict, repr=False, compare=False)

    @property
    def element_count(self) -> int:
        return 1 << self.degree

    @property
    def mask(self) -> int:
        return (1 << self.degree) - 1

    def __repr__(self) -> str:
        return f"FieldCtx(m={self.degree}, modulus={self.modulus:#x})"

    # -- validation / encoding ------------------------------------------------

    def check(self, a: int) -> int:
        if not 0 <= a < (1 << self.degree):
            raise FieldError(f"{a:#x} is not an element of GF(2^{self.degree})")
        return a

    def elements(self) -> range:
        return range(1 << self.degree)

    def encode(self, a: int) -> str:
        return format(a, "x")

    def decode(self, text: str) -> int:
        return self.check(int(text, 16))

    def to_json(self) -> dict:
        return {"m": self.degree, "modulus": format(self.modulus, "x")}

    # -- tables -----------------------------------------------------------------

    def _log_exp(self):
        t = self._tables.get("logexp")
        if t is None:
            n = (1 << self.degree) - 1
            g = self.primitive_element()
            exp = [0] * (2 * n + 1)
            log = [0] * (n + 1)
            v = 1
            for i in range(n):
                exp[i] = v
                log[v] = i
                v = self._mul_slow(v, g)
            for i in range(n, 2 * n + 1):
                exp[i] = exp[i - n]
            t = (log, exp)
            self._tables["logexp"] = t
        return t

    def primitive_element(self) -> int:
        """Smallest generator of the multiplicative group."""
        g = self._tables.get("gen")
        if g is not None:
            return g
        n = (1 << self.degree) - 1
        if n == 1:
            g = 1
        else:
            ps = prime_factors(n)
            for cand in range(2, n + 1):
                if all(self._pow_slow(cand, n // p) != 1 for p in ps):
                    g = cand
                    break
        self._tables["gen"] = g
        return g

    # -- arithmetic -------------------------------------------------------------

    def _mul_slow(self, a: int, b: int) -> int:
        m = self.degree
        top = 1 << m
        mod = self.modulus
        r = 0
        while b:
            if b & 1:
                r ^= a
            b >>= 1
            a <<= 1
            if a & top:
                a ^= mod
        return r

    def _pow_slow(self, a: int, e: int) -> int:
        r = 1
        while e:
            if e & 1:
                r = self._mul_slow(r, a)
            a = self._mul_slow(a, a)
            e >>= 1
        return r

    def mul(self, a: int, b: int) -> int:
        if a == 0 or b == 0:
            return 0
        if self.degree <= _TABLE_DEGREE:
            log, exp = self._log_exp()
            return exp[log[a] + log[b]]
        return self._mul_slow(a, b)

    def square(self, a: int) -> int:
        return self.mul(a, a)

    def inv(self, a: int) -> int:
        if a == 0:
            raise ZeroDivisionError("inverse of zero in GF(2^m)")
        if self.degree <= _TABLE_DEGREE:
            log, exp = self._log_exp()
            n = (1 << self.degree) - 1
            return exp[(n - log[a]) % n]
        return self._pow_slow(a, (1 << self.degree) - 2)

    def div(self, a: int, b: int) -> int:
        return self.mul(a, self.inv(b))

    def pow(self, a: int, e: int) -> int:
        n = (1 << self.degree) - 1
        if e < 0:
            a, e = self.inv(a), -e
        if a == 0:
            return 1 if e == 0 else 0
        if self.degree <= _TABLE_DEGREE:
            log, exp = self._log_exp()
            return exp[(log[a] * e) % n]
        return self._pow_slow(a, e)

    def frobenius(self, a: int, k: int = 1) -> int:
        """a^(2^k)."""
        for _ in range(k):
            a = self.mul(a, a)
        return a

    def trace(self, a: int) -> int:
        """Absolute trace tr(a) = a + a^2 + ... + a^(2^(m-1)), as 0 or 1."""
        t = a
        s = a
        for _ in range(self.degree - 1):
            s = self.mul(s, s)
            t ^= s
        assert t in (0, 1)
        return t

    def sqrt(self, a: int) -> int:
        return self.frobenius(a, self.degree - 1)

    def half_trace(self, a: int) -> int:
        """Sum of a^(4^i) for i <= (m-1)/2; odd m only."""
        if self.degree % 2 == 0:
            raise FieldError("half-trace needs odd degree")
        h = a
        s = a
        for _ in range((self.degree - 1) // 2):
            s = self.frobenius(s, 2)
            h ^= s
        return h

    def solve_quadratic(self, b: int, c: int) -> tuple[int, int] | None:
        """Roots (r, r + b) of x^2 + b x + c, or None when tr(c/b^2) = 1."""
        if b == 0:
            raise FieldError("solve_quadratic needs b != 0; use sqrt for b = 0")
        d = self.div(c, self.mul(b, b))
        if self.trace(d):
            return None
        if self.degree % 2:
            y = self.half_trace(d)
        else:
            # even degree: no half-trace, search directly (only tiny fields reach here)
            y = next(y for y in self.elements() if self.mul(y, y) ^ y == d)
        r = self.mul(b, y)
        return r, r ^ b


@functools.lru_cache(maxsize=None)
def smallest_irreducible(m: int) -> int:
    for p in range((1 << m) | 1, 1 << (m + 1), 2 if m > 1 else 1):
        if is_irreducible(p):
            return p
    raise AssertionError("no irreducible polynomial found")  # pragma: no cover


@functools.lru_cache(maxsize=None)
def make_field(m: int) -> FieldCtx:
    """Return the (cached, immutable) context for GF(2^m), 1 <= m <= 24."""
    if not isinstance(m, int) or not 1 <= m <= MAX_DEGREE:
        raise FieldError(f"degree must be in [1, {MAX_DEGREE}], got {m!r}")
    return FieldCtx(m, smallest_irreducible(m))


def field_from_json(obj: dict) -> FieldCtx:
    ctx = make_field(int(obj["m"]))
    if int(obj["modulus"], 16) != ctx.modulus:
        raise FieldError("serialized modulus is not the canonical one")
    return ctx
