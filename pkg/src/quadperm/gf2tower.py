"""The quadratic extension GF(2^(2m)) over GF(2^m).

For odd m the extension is the tower GF(2^m)[w]/(w^2 + w + 1) and an
element u + v*w is stored as the int ``u | v << m``; conjugation
x -> x^(2^m) is then just ``(u + v) + v*w``.  For even m, w^2 + w + 1
splits over GF(2^m), so elements live in a direct degree-2m polynomial
representation instead.
"""

from __future__ import annotations

import functools
from typing import Iterator

import numpy as np

from .gf2field import FieldCtx, FieldError, make_field, prime_factors

TOWER = "tower"
DIRECT = "direct"

# whole-extension log/exp tables are built for 2m up to this
_TABLE_BITS = 22


class TowerCtx:
    """Context for GF(2^(2m)); immutable after construction apart from lazy caches."""

    def __init__(self, m: int, mode: str | None = None):
        self.base: FieldCtx = make_field(m)
        self.m = m
        if mode is None:
            mode = TOWER if m % 2 else DIRECT
        if mode == TOWER and m % 2 == 0:
            raise FieldError("x^2 + x + 1 is reducible over GF(2^m) for even m; use direct mode")
        if mode not in (TOWER, DIRECT):
            raise FieldError(f"unknown mode {mode!r}")
        self.mode = mode
        self.direct: FieldCtx | None = make_field(2 * m) if mode == DIRECT else None
        self.order = 1 << (2 * m)
        self._cache: dict = {}

    def __repr__(self) -> str:
        return f"TowerCtx(m={self.m}, mode={self.mode})"

    @property
    def is_tower(self) -> bool:
        return self.mode == TOWER

    def to_json(self) -> dict:
        d = {"m": self.m, "mode": self.mode, "base_modulus": format(self.base.modulus, "x")}
        if self.direct is not None:
            d["modulus_2m"] = format(self.direct.modulus, "x")
        return d

    # -- encoding ---------------------------------------------------------------

    def check(self, z: int) -> int:
        if not 0 <= z < self.order:
            raise FieldError(f"{z:#x} is not an element of GF(2^{2 * self.m})")
        return z

    def elements(self) -> range:
        return range(self.order)

    def encode(self, z: int) -> str:
        if self.is_tower:
            return f"{z & self.base.mask:x},{z >> self.m:x}"
        return format(z, "x")

    def decode(self, text: str) -> int:
        text = text.strip()
        if self.is_tower:
            parts = text.split(",")
            if len(parts) != 2:
                raise FieldError(f"expected 'u_hex,v_hex', got {text!r}")
            u, v = (self.base.decode(p) for p in parts)
            return u | v << self.m
        if "," in text:
            raise FieldError(f"direct-mode elements are a single hex string, got {text!r}")
        return self.check(int(text, 16))

    def pack(self, u: int, v: int) -> int:
        """u + v*w in tower mode."""
        return u | v << self.m

    def unpack(self, z: int) -> tuple[int, int]:
        return z & self.base.mask, z >> self.m

    # -- base field embedding ----------------------------------------------------

    def _embed_root(self) -> int:
        """Image of the base generator x in direct mode: the smallest root of the base modulus."""
        r = self._cache.get("embed_root")
        if r is None:
            d = self.direct
            p = self.base.modulus
            for cand in range(2, self.order):
                acc = 0
                for i in range(p.bit_length() - 1, -1, -1):
                    acc = d.mul(acc, cand) ^ ((p >> i) & 1)
                if acc == 0:
                    r = cand
                    break
            self._cache["embed_root"] = r
        return r

    def embed(self, a: int) -> int:
        if self.is_tower:
            return a
        table = self._cache.get("embed")
        if table is None:
            beta = self._embed_root()
            d = self.direct
            powers = [1]
            for _ in range(self.m - 1):
                powers.append(d.mul(powers[-1], beta))
            table = []
            for a_ in range(1 << self.m):
                z = 0
                for i, pw in enumerate(powers):
                    if a_ >> i & 1:
                        z ^= pw
                table.append(z)
            self._cache["embed"] = table
            self._cache["unembed"] = {z: i for i, z in enumerate(table)}
        return table[a]

    def is_base(self, z: int) -> bool:
        return self.conj(z) == z

    def to_base(self, z: int) -> int:
        if self.is_tower:
            if z >> self.m:
                raise FieldError(f"{self.encode(z)} is not in GF(2^{self.m})")
            return z
        self.embed(0)
        try:
            return self._cache["unembed"][z]
        except KeyError:
            raise FieldError(f"{z:#x} is not in GF(2^{self.m})") from None

    # -- arithmetic ---------------------------------------------------------------

    def _mul_components(self, a: int, b: int) -> int:
        F = self.base
        m = self.m
        mask = F.mask
        u1, v1 = a & mask, a >> m
        u2, v2 = b & mask, b >> m
        A = F.mul(u1, u2)
        B = F.mul(v1, v2)
        C = F.mul(u1 ^ v1, u2 ^ v2)
        return (A ^ B) | (C ^ A) << m

    def _raw_mul(self, a: int, b: int) -> int:
        if self.is_tower:
            return self._mul_components(a, b)
        return self.direct.mul(a, b)

    def _raw_pow(self, a: int, e: int) -> int:
        r = 1
        while e:
            if e & 1:
                r = self._raw_mul(r, a)
            a = self._raw_mul(a, a)
            e >>= 1
        return r

    def primitive_element(self) -> int:
        g = self._cache.get("gen")
        if g is None:
            n = self.order - 1
            ps = prime_factors(n)
            g = next(c for c in range(2, self.order)
                     if all(self._raw_pow(c, n // p) != 1 for p in ps))
            self._cache["gen"] = g
        return g

    def log_exp(self):
        """Python-list discrete log / antilog tables (log[0] is unused)."""
        t = self._cache.get("logexp")
        if t is None:
            if 2 * self.m > _TABLE_BITS:
                raise FieldError(f"log tables not built for 2m > {_TABLE_BITS}")
            n = self.order - 1
            g = self.primitive_element()
            exp = [0] * (2 * n + 1)
            log = [0] * (n + 1)
            v = 1
            for i in range(n):
                exp[i] = v
                log[v] = i
                v = self._raw_mul(v, g)
            if v != 1:
                raise AssertionError("generator order mismatch")
            exp[n:] = exp[: n + 1]
            t = (log, exp)
            self._cache["logexp"] = t
        return t

    def np_tables(self):
        """numpy versions of :meth:`log_exp`; exp is long enough to index log[a] + log[b]."""
        t = self._cache.get("np")
        if t is None:
            log, exp = self.log_exp()
            n = self.order - 1
            log_a = np.array(log, dtype=np.int64)
            exp_a = np.array(exp[:n] * 3, dtype=np.int64)
            t = (log_a, exp_a)
            self._cache["np"] = t
        return t

    def _use_tables(self) -> bool:
        return 2 * self.m <= 14 or "logexp" in self._cache

    def mul(self, a: int, b: int) -> int:
        if a == 0 or b == 0:
            return 0
        if self._use_tables():
            log, exp = self.log_exp()
            return exp[log[a] + log[b]]
        return self._raw_mul(a, b)

    def square(self, a: int) -> int:
        return self.mul(a, a)

    def pow(self, a: int, e: int) -> int:
        if e < 0:
            a, e = self.inv(a), -e
        if a == 0:
            return 1 if e == 0 else 0
        if self._use_tables():
            log, exp = self.log_exp()
            n = self.order - 1
            return exp[(log[a] * e) % n]
        return self._raw_pow(a, e)

    def norm(self, z: int) -> int:
        """z * conj(z), returned as a base-field element."""
        if self.is_tower:
            F = self.base
            u, v = self.unpack(z)
            return F.mul(u, u) ^ F.mul(u, v) ^ F.mul(v, v)
        return self.to_base(self.mul(z, self.conj(z)))

    def rel_trace(self, z: int) -> int:
        """z + conj(z), returned as a base-field element."""
        if self.is_tower:
            return z >> self.m
        return self.to_base(z ^ self.conj(z))

    def inv(self, z: int) -> int:
        if z == 0:
            raise ZeroDivisionError("inverse of zero in GF(2^(2m))")
        if self.is_tower:
            n_inv = self.base.inv(self.norm(z))
            c = self.conj(z)
            return self.pack(self.base.mul(c & self.base.mask, n_inv),
                             self.base.mul(c >> self.m, n_inv))
        return self.direct.inv(z)

    def div(self, a: int, b: int) -> int:
        return self.mul(a, self.inv(b))

    def conj(self, z: int) -> int:
        """z^(2^m)."""
        if self.is_tower:
            return z ^ (z >> self.m)
        return self.direct.frobenius(z, self.m)

    def sqrt(self, z: int) -> int:
        if self.is_tower:
            F = self.base
            # (s + t w)^2 = (s^2 + t^2) + t^2 w
            u, v = self.unpack(z)
            t = F.sqrt(v)
            s = F.sqrt(u ^ v)
            return self.pack(s, t)
        return self.direct.sqrt(z)

    def abs_trace(self, z: int) -> int:
        """Absolute trace GF(2^(2m)) -> GF(2), equal to tr_m(z + conj(z))."""
        return self.base.trace(self.rel_trace(z))

    # -- w and the unit circle -----------------------------------------------------

    def omega(self) -> int:
        if self.m % 2 == 0:
            raise FieldError("w with w^2 + w + 1 = 0 lies in GF(2^m) for even m")
        if self.is_tower:
            return 1 << self.m
        w = self._cache.get("omega")
        if w is None:
            d = self.direct
            w = next(c for c in range(2, self.order) if d.mul(c, c) ^ c ^ 1 == 0)
            self._cache["omega"] = w
        return w

    def cayley(self, x: int) -> int:
        """(x + w^2)/(x + w) for x in GF(2^m): a bijection onto the unit circle minus 1."""
        w = self.omega()
        w2 = w ^ 1
        X = self.embed(x)
        return self.div(X ^ w2, X ^ w)

    def mu_iter(self) -> Iterator[int]:
        """The 2^m + 1 elements of norm 1: first 1, then cayley(x) for x = 0, 1, ..."""
        yield 1
        for x in self.base.elements():
            yield self.cayley(x)

    def mu_list(self) -> list[int]:
        lst = self._cache.get("mu")
        if lst is None:
            lst = list(self.mu_iter())
            self._cache["mu"] = lst
        return lst

    def in_mu(self, z: int) -> bool:
        return z != 0 and self.norm(z) == 1

    # -- quadratics ---------------------------------------------------------------------

    def solve_quadratic_ext(self, b: int, c: int) -> tuple[int, int] | None:
        """Roots (r, r + b) of x^2 + b x + c over GF(2^(2m)), or None."""
        if b == 0:
            raise FieldError("solve_quadratic_ext needs b != 0")
        d = self.div(c, self.mul(b, b))
        if self.is_tower:
            F = self.base
            d0, d1 = self.unpack(d)
            # y = y0 + y1 w: y^2 + y = (y0^2 + y0 + y1^2) + (y1^2 + y1) w
            sol = F.solve_quadratic(1, d1)
            if sol is None:
                return None
            y1 = sol[0]
            rhs = d0 ^ F.mul(y1, y1)
            if F.trace(rhs):
                y1 ^= 1
                rhs ^= 1
            y0 = F.solve_quadratic(1, rhs)[0]
            r = self.mul(b, self.pack(y0, y1))
        else:
            y = next((y for y in self.elements() if self.mul(y, y) ^ y == d), None)
            if y is None:
                return None
            r = self.mul(b, y)
        return r, r ^ b


@functools.lru_cache(maxsize=None)
def make_tower(m: int, mode: str | None = None) -> TowerCtx:
    """Cached context for GF(2^(2m)); tower mode iff m is odd unless ``mode`` forces direct."""
    return TowerCtx(m, mode)


def tower_to_direct(m: int):
    """Field isomorphism from the tower model of GF(2^(2m)) to the direct one (odd m).

    Returns a function on encoded ints.  The base generator goes to the
    smallest root of the base modulus and w to the smallest cube root of
    unity outside the base field.
    """
    T = make_tower(m)
    D = make_tower(m, DIRECT)
    w = D.omega()
    d = D.direct

    def phi(z: int) -> int:
        u, v = T.unpack(z)
        return D.embed(u) ^ d.mul(D.embed(v), w)

    return phi
