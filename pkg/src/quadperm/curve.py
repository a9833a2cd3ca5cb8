"""The symmetric biquadratic L(x, y) whose off-diagonal zeros witness collisions of F.

L(x, y) = l22 x^2y^2 + l21 (x^2y + xy^2) + l20 (x^2 + y^2) + l11 xy + l10 (x + y) + l00

with every coefficient in GF(2^m).  Besides evaluation and point counting,
this module decides which complete splitting of L (if any) into components
not defined over GF(2^m) occurs, and rebuilds the factors explicitly.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .core import ThetaVector
from .gf2field import FieldError
from .gf2tower import TowerCtx

MAX_COUNT_DEGREE = 14


class CurveClass(str, enum.Enum):
    QUAD1111 = "Quad1111"
    QUAD22 = "Quad22"
    LIN11 = "Lin11"
    RATIONAL_COMPONENT = "RationalComponent"
    ZERO_POLYNOMIAL = "ZeroPolynomial"
    EXCLUDED_DEGENERATE = "ExcludedDegenerate"


SPLIT_CLASSES = frozenset({CurveClass.QUAD1111, CurveClass.QUAD22, CurveClass.LIN11})


@dataclass(frozen=True)
class CurveCoeffs:
    l22: int
    l21: int
    l20: int
    l11: int
    l10: int
    l00: int

    def as_poly(self) -> dict[tuple[int, int], int]:
        """All nine monomials, exponent pair (i, j) for x^i y^j."""
        return {(2, 2): self.l22, (2, 1): self.l21, (1, 2): self.l21,
                (2, 0): self.l20, (0, 2): self.l20, (1, 1): self.l11,
                (1, 0): self.l10, (0, 1): self.l10, (0, 0): self.l00}

    def is_zero(self) -> bool:
        return not any((self.l22, self.l21, self.l20, self.l11, self.l10, self.l00))


@dataclass
class FactorizationReport:
    cls: CurveClass
    factors: list[dict[tuple[int, int], int]] = field(default_factory=list)
    scalar: int = 0
    product_verified: bool = False
    off_diagonal_rational_zeros: int | None = None
    form: str | None = None

    def factors_json(self, T: TowerCtx) -> dict:
        return {
            "scalar": T.encode(self.scalar),
            "factors": [[[list(k), T.encode(v)] for k, v in sorted(f.items(), reverse=True)]
                        for f in self.factors],
        }


def curve_coeffs(th: ThetaVector, T: TowerCtx) -> CurveCoeffs:
    w = T.omega()
    w2 = w ^ 1
    mul = T.mul
    return CurveCoeffs(
        l22=th.t1 ^ th.t3 ^ th.t3bar,
        l21=th.t1 ^ th.t2 ^ th.t2bar,
        l20=th.t4 ^ mul(w, th.t3) ^ mul(w2, th.t3bar) ^ mul(w, th.t2) ^ mul(w2, th.t2bar),
        l11=th.t1,
        l10=th.t1 ^ mul(w2, th.t2) ^ mul(w, th.t2bar),
        l00=th.t1 ^ mul(w2, th.t3) ^ mul(w, th.t3bar),
    )


def L_eval(c: CurveCoeffs, x: int, y: int, T: TowerCtx) -> int:
    """L at a pair of base-field points."""
    X, Y = T.embed(x), T.embed(y)
    mul = T.mul
    X2, Y2, XY = mul(X, X), mul(Y, Y), mul(X, Y)
    return (mul(c.l22, mul(X2, Y2)) ^ mul(c.l21, mul(XY, X ^ Y)) ^ mul(c.l20, X2 ^ Y2)
            ^ mul(c.l11, XY) ^ mul(c.l10, X ^ Y) ^ c.l00)


# ---------------------------------------------------------------------------
# bivariate polynomials as {(i, j): coeff}
# ---------------------------------------------------------------------------

def poly_mul(p: dict, q: dict, T: TowerCtx) -> dict:
    out: dict[tuple[int, int], int] = {}
    for (i1, j1), c1 in p.items():
        for (i2, j2), c2 in q.items():
            k = (i1 + i2, j1 + j2)
            out[k] = out.get(k, 0) ^ T.mul(c1, c2)
    return {k: v for k, v in out.items() if v}


def expand(scalar: int, factors: list[dict], T: TowerCtx) -> dict:
    prod = {(0, 0): scalar}
    for f in factors:
        prod = poly_mul(prod, f, T)
    return prod


def _matches(c: CurveCoeffs, scalar: int, factors: list[dict], T: TowerCtx) -> bool:
    target = {k: v for k, v in c.as_poly().items() if v}
    return expand(scalar, factors, T) == target


def _canonical(pair: tuple[int, int], T: TowerCtx) -> int:
    """Pick the root with the smaller (v, u) tower components."""
    return min(pair, key=lambda z: (z >> T.m, z & T.base.mask) if T.is_tower else z)


# ---------------------------------------------------------------------------
# classification
# ---------------------------------------------------------------------------

def _lin11_conditions(th: ThetaVector, T: TowerCtx) -> bool:
    s = th.t2 ^ th.t2bar
    if th.t1 == 0 or th.t1 != s:
        return False
    mul = T.mul
    gamma = T.div(mul(th.t2, th.t2) ^ mul(th.t2bar, th.t2bar) ^ mul(th.t2, th.t2bar), s)
    return th.t3 == th.t2 ^ gamma and th.t4 == gamma ^ s


def classify(th: ThetaVector, T: TowerCtx) -> FactorizationReport:
    """Which complete splitting into non-rational components L admits (odd m)."""
    if T.m % 2 == 0:
        raise FieldError("curve classification needs odd m")
    c = curve_coeffs(th, T)
    if c.is_zero():
        return FactorizationReport(CurveClass.ZERO_POLYNOMIAL)
    if _lin11_conditions(th, T):
        return FactorizationReport(CurveClass.LIN11)
    mul = T.mul
    if (c.l22 != 0 and th.t1 != 0
            and mul(th.t2, th.t2) == mul(th.t1, th.t3bar)
            and T.base.trace(T.to_base(T.div(th.t4, th.t1))) == 1):
        if mul(th.t4, th.t4) == mul(th.t1, th.t1) ^ mul(th.t3, th.t3bar):
            return FactorizationReport(CurveClass.QUAD1111)
        return FactorizationReport(CurveClass.QUAD22)
    return FactorizationReport(CurveClass.RATIONAL_COMPONENT)


def _lin(cx: int, cy: int, c0: int) -> dict:
    return {k: v for k, v in {(1, 0): cx, (0, 1): cy, (0, 0): c0}.items() if v}


def _bilin(cx: int, cy: int, c0: int) -> dict:
    return {k: v for k, v in {(1, 1): 1, (1, 0): cx, (0, 1): cy, (0, 0): c0}.items() if v}


def reconstruct_factors(th: ThetaVector, c: CurveCoeffs, cls: CurveClass,
                        T: TowerCtx) -> FactorizationReport:
    """Rebuild explicit factors for a split class and verify their product.

    Raises AssertionError when no factorization of the announced shape
    reproduces the coefficients; that would mean the classifier is wrong.
    """
    rep = FactorizationReport(cls)
    if cls == CurveClass.LIN11:
        # L = l20 (x + a y + b)(x + conj(a) y + conj(b)), a = b / conj(b)
        if c.l20 == 0:
            raise AssertionError("Lin11 class with vanishing l20")
        if c.l10:
            roots = T.solve_quadratic_ext(T.div(c.l10, c.l20), T.div(c.l00, c.l20))
            if roots is None:
                raise AssertionError("Lin11: b has no solution")
            b = _canonical(roots, T)
            bb = T.conj(b)
            a = T.div(b, bb)
        else:
            # b + conj(b) = 0 forces b = 0: L = l20 (x + a y)(x + conj(a) y), a conj(a) = 1
            if c.l00 or c.l11 == 0:
                raise AssertionError("Lin11 with l10 = 0 but l00 != 0 or l11 = 0")
            roots = T.solve_quadratic_ext(T.div(c.l11, c.l20), 1)
            if roots is None:
                raise AssertionError("Lin11: a has no solution")
            a = _canonical(roots, T)
            b = bb = 0
        rep.factors = [_lin(1, a, b), _lin(1, T.conj(a), bb)]
        rep.scalar = c.l20
    elif cls in (CurveClass.QUAD1111, CurveClass.QUAD22):
        if c.l22 == 0 or c.l21 == 0:
            raise AssertionError(f"{cls.value} class with vanishing l22 or l21")
        roots = T.solve_quadratic_ext(T.div(c.l21, c.l22), T.div(c.l20, c.l22))
        if roots is None:
            raise AssertionError(f"{cls.value}: a has no solution")
        a = _canonical(roots, T)
        ab = T.conj(a)
        rep.scalar = c.l22
        if cls == CurveClass.QUAD1111:
            rep.factors = [_lin(1, 0, a), _lin(1, 0, ab), _lin(0, 1, a), _lin(0, 1, ab)]
        else:
            b = T.sqrt(T.div(c.l00, c.l22))
            rep.factors = [_bilin(a, ab, b), _bilin(ab, a, b)]
            rep.form = "iii"
            if not _matches(c, rep.scalar, rep.factors, T):
                rep.form = "ii"
                broots = (T.solve_quadratic_ext(T.div(c.l11, c.l22), T.div(c.l00, c.l22))
                          if c.l11 else None)
                if broots is None:
                    raise AssertionError("Quad22: neither factor form fits")
                b = _canonical(broots, T)
                for bb in (b, T.conj(b)):
                    rep.factors = [_bilin(a, a, bb), _bilin(ab, ab, T.conj(bb))]
                    if _matches(c, rep.scalar, rep.factors, T):
                        break
    else:
        raise FieldError(f"no factors to rebuild for class {cls.value}")
    rep.product_verified = _matches(c, rep.scalar, rep.factors, T)
    if not rep.product_verified:
        raise AssertionError(f"{cls.value}: factor product does not reproduce L")
    return rep


def factors_non_rational(rep: FactorizationReport, T: TowerCtx) -> bool:
    """Every factor has a coefficient outside GF(2^m)."""
    return all(any(T.conj(v) != v for v in f.values()) for f in rep.factors)


# ---------------------------------------------------------------------------
# rational points and the point-count bound
# ---------------------------------------------------------------------------

def _base_tables(T: TowerCtx):
    F = T.base
    key = "np_base"
    t = T._cache.get(key)
    if t is None:
        n = (1 << F.degree) - 1
        log = np.zeros(1 << F.degree, dtype=np.int64)
        exp = np.zeros(3 * n, dtype=np.int64)
        g = F.primitive_element()
        v = 1
        for i in range(n):
            exp[i] = exp[i + n] = exp[i + 2 * n] = v
            log[v] = i
            v = F._mul_slow(v, g)
        t = (log, exp)
        T._cache[key] = t
    return t


def count_rational_zeros_batch(coeffs, T: TowerCtx):
    """Brute-force zero counts over GF(2^m)^2 for many curves at once.

    ``coeffs`` is an (N, 6) integer array of base-encoded
    (l22, l21, l20, l11, l10, l00).  Returns (total, off_diagonal) arrays.
    """
    m = T.m
    if m > MAX_COUNT_DEGREE:
        raise FieldError(f"exhaustive point counting is limited to m <= {MAX_COUNT_DEGREE}")
    log, exp = _base_tables(T)
    coeffs = np.asarray(coeffs, dtype=np.int64).reshape(-1, 6)

    def mul(a, b):
        return np.where((a == 0) | (b == 0), 0, exp[log[a] + log[b]])

    q = 1 << m
    xs = np.arange(q, dtype=np.int64)
    N = len(coeffs)
    total = np.zeros(N, dtype=np.int64)
    diag = np.zeros(N, dtype=np.int64)
    # rows of x at a time; L is quadratic in y with coefficients A, B, C depending on x
    x_step = max(1, (1 << 22) // max(1, N * q))
    ys = xs[None, None, :]
    y2 = mul(xs, xs)[None, None, :]
    l22, l21, l20, l11, l10, l00 = (coeffs[:, k][:, None] for k in range(6))
    for s in range(0, q, x_step):
        x = xs[s:s + x_step][None, :]
        x2 = mul(x, x)
        A = mul(l22, x2) ^ mul(l21, x) ^ l20
        B = mul(l21, x2) ^ mul(l11, x) ^ l10
        C = mul(l20, x2) ^ mul(l10, x) ^ l00
        vals = mul(A[:, :, None], y2) ^ mul(B[:, :, None], ys) ^ C[:, :, None]
        zero = vals == 0
        total += zero.sum(axis=(1, 2))
        idx = np.arange(x.shape[1])
        diag += zero[:, idx, s + idx].sum(axis=1)
    return total, total - diag


def count_rational_zeros(c: CurveCoeffs, T: TowerCtx) -> tuple[int, int]:
    """(total, off-diagonal) zeros of L in GF(2^m)^2."""
    row = [T.to_base(v) for v in (c.l22, c.l21, c.l20, c.l11, c.l10, c.l00)]
    total, off = count_rational_zeros_batch([row], T)
    return int(total[0]), int(off[0])


def hasse_weil_lower_bound(d: int, m: int, bits: int = 64) -> Fraction:
    """q - (d-1)(d-2) q^(1/2) - d(d-1)^2/2 - 1 with q = 2^m, rounded down.

    The square-root term is over-approximated to ``bits`` fractional bits, so
    the result never exceeds the true value.
    """
    if d < 1:
        raise ValueError("degree must be positive")
    k = (d - 1) * (d - 2)
    if m % 2 == 0:
        root_term = Fraction(k << (m // 2))
    else:
        scaled = k * k << (m + 2 * bits)
        r = math.isqrt(scaled)
        if r * r != scaled:
            r += 1
        root_term = Fraction(r, 1 << bits)
    return (1 << m) - root_term - Fraction(d * (d - 1) ** 2, 2) - 1
