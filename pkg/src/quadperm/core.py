"""The quadrinomial f(x) = xb^3 + a1 xb^2 x + a2 x^2 xb + a3 x^3 over GF(2^(2m)).

Here ``xb`` is the conjugate x^(2^m).  This module holds the coefficient
invariants (theta), the membership test for the set of triples that give
permutations, the rescaling that moves a1 into GF(2^m), the rational maps
phi / g / F on the unit circle, and two independent permutation tests.

Conventions: a1 is a base-field int, a2 / a3 and every theta are encoded
extension-field ints (see :mod:`quadperm.gf2tower`).
"""

from __future__ import annotations

from dataclasses import dataclass

from .gf2field import FieldError
from .gf2tower import TowerCtx


class UndefinedPoint(ArithmeticError):
    """The denominator of F vanishes: h has a root on the unit circle there."""


@dataclass(frozen=True)
class Triple:
    a1: int
    a2: int
    a3: int

    def encode(self, T: TowerCtx) -> str:
        return f"a1={self.a1:x} a2={T.encode(self.a2)} a3={T.encode(self.a3)}"

    @classmethod
    def decode(cls, text: str, T: TowerCtx) -> "Triple":
        fields = dict(tok.split("=", 1) for tok in text.split())
        try:
            return cls.from_hex(fields["a1"], fields["a2"], fields["a3"], T)
        except KeyError as e:
            raise FieldError(f"missing coefficient {e.args[0]} in {text!r}") from None

    @classmethod
    def from_hex(cls, a1: str, a2: str, a3: str, T: TowerCtx) -> "Triple":
        return cls(T.base.decode(a1), T.decode(a2), T.decode(a3))

    def to_json(self, T: TowerCtx) -> dict:
        return {"a1": format(self.a1, "x"), "a2": T.encode(self.a2), "a3": T.encode(self.a3)}


@dataclass(frozen=True)
class ThetaVector:
    t1: int
    t2: int
    t2bar: int
    t3: int
    t3bar: int
    t4: int

    def to_json(self, T: TowerCtx) -> dict:
        return {k: T.encode(getattr(self, k)) for k in ("t1", "t2", "t2bar", "t3", "t3bar", "t4")}


@dataclass(frozen=True)
class RationalMapCoeffs:
    eps: tuple[int, int, int, int]
    tau: tuple[int, int, int, int]


# ---------------------------------------------------------------------------

def f_eval_coeffs(A1: int, a2: int, a3: int, x: int, T: TowerCtx) -> int:
    """f at x with an arbitrary extension-field a1 (used by the rescaling checks)."""
    xb = T.conj(x)
    xb2 = T.mul(xb, xb)
    x2 = T.mul(x, x)
    return (T.mul(xb2, xb) ^ T.mul(A1, T.mul(xb2, x))
            ^ T.mul(a2, T.mul(x2, xb)) ^ T.mul(a3, T.mul(x2, x)))


def f_eval(t: Triple, x: int, T: TowerCtx) -> int:
    return f_eval_coeffs(T.embed(t.a1), t.a2, t.a3, x, T)


def h_eval(t: Triple, z: int, T: TowerCtx) -> int:
    """h(z) = z^3 + a1 z^2 + a2 z + a3."""
    A1 = T.embed(t.a1)
    return T.mul(T.mul(z ^ A1, z) ^ t.a2, z) ^ t.a3


def theta_of(t: Triple, T: TowerCtx) -> ThetaVector:
    A1 = T.embed(t.a1)
    a2b = T.conj(t.a2)
    a3b = T.conj(t.a3)
    a1sq = T.mul(A1, A1)
    n2 = T.mul(t.a2, a2b)
    n3 = T.mul(t.a3, a3b)
    t1 = 1 ^ a1sq ^ n2 ^ n3
    t2 = A1 ^ T.mul(a2b, t.a3)
    t3 = a2b ^ T.mul(A1, a3b)
    t4 = a1sq ^ n2
    return ThetaVector(t1, t2, T.conj(t2), t3, T.conj(t3), t4)


def _base_ratio(num: int, den: int, T: TowerCtx) -> int:
    r = T.div(num, den)
    if T.conj(r) != r:
        raise AssertionError("theta4/theta1 left GF(2^m); a1 must be a base-field element")
    return T.to_base(r)


def gamma_from_theta(th: ThetaVector, T: TowerCtx) -> bool:
    if th.t1 == 0:
        return False
    if T.mul(th.t2, th.t2) != T.mul(th.t1, th.t3bar):
        return False
    return T.base.trace(_base_ratio(th.t4, th.t1, T)) == 1


def gamma_member(t: Triple, T: TowerCtx) -> bool:
    """theta1 != 0, theta2^2 = theta1 * conj(theta3) and tr(theta4/theta1) = 1."""
    if T.m % 2 == 0:
        raise FieldError("the coefficient condition is only defined for odd m")
    return gamma_from_theta(theta_of(t, T), T)


def degenerate(t: Triple, T: TowerCtx) -> bool:
    """1 + a1 + a2 + a3 = 0, in which case f(0) = f(1) = 0."""
    return 1 ^ T.embed(t.a1) ^ t.a2 ^ t.a3 == 0


def normalize_triple(a1: int, a2: int, a3: int, T: TowerCtx) -> Triple:
    """Rescale x -> beta x with beta^2 a1 = 1 so that the new a1 lies in GF(2^m).

    f(beta x) = conj(beta)^3 * f'(x) where f' has coefficients
    (a1 l, a2 l^2, a3 l^3) and l = beta / conj(beta).
    """
    if a1 == 0:
        raise FieldError("a1 = 0 is already normalized")
    beta = T.sqrt(T.inv(a1))
    lam = T.div(beta, T.conj(beta))
    lam2 = T.mul(lam, lam)
    return Triple(T.to_base(T.mul(a1, lam)), T.mul(a2, lam2), T.mul(a3, T.mul(lam2, lam)))


def phi(x: int, T: TowerCtx) -> int:
    """(x + w^2)/(x + w), mapping GF(2^m) onto the unit circle minus {1}."""
    return T.cayley(x)


def rational_map_coeffs(t: Triple, T: TowerCtx) -> RationalMapCoeffs:
    w = T.omega()
    w2 = T.mul(w, w)
    A1 = T.embed(t.a1)
    a2, a3 = t.a2, t.a3
    a2b, a3b = T.conj(a2), T.conj(a3)
    mul = T.mul
    eps = (
        A1 ^ a2b ^ a3b ^ 1,
        mul(w2, A1) ^ mul(w, a2b) ^ mul(w2, a3b) ^ w,
        mul(w2, A1) ^ mul(w, a2b) ^ mul(w, a3b) ^ w2,
        mul(w, A1) ^ mul(w2, a2b) ^ a3b ^ 1,
    )
    tau = (
        A1 ^ a2 ^ a3 ^ 1,
        mul(w, A1) ^ mul(w2, a2) ^ mul(w, a3) ^ w2,
        mul(w, A1) ^ mul(w2, a2) ^ mul(w2, a3) ^ w,
        mul(w2, A1) ^ mul(w, a2) ^ a3 ^ 1,
    )
    return RationalMapCoeffs(eps, tau)


def _cubic(c: tuple[int, int, int, int], X: int, T: TowerCtx) -> int:
    r = c[0]
    for k in c[1:]:
        r = T.mul(r, X) ^ k
    return r


def F_eval(t: Triple, x: int, T: TowerCtx, coeffs: RationalMapCoeffs | None = None) -> int:
    """F(x) = g(phi(x)) through the cubic-over-cubic form; x is a base element."""
    if coeffs is None:
        coeffs = rational_map_coeffs(t, T)
    X = T.embed(x)
    den = _cubic(coeffs.tau, X, T)
    if den == 0:
        raise UndefinedPoint(f"F undefined at x={x:x}")
    return T.div(_cubic(coeffs.eps, X, T), den)


def g_eval(t: Triple, z: int, T: TowerCtx) -> int:
    """g(z) = (conj(a3) z^3 + conj(a2) z^2 + a1 z + 1) / h(z) for z on the unit circle."""
    den = h_eval(t, z, T)
    if den == 0:
        raise UndefinedPoint("h vanishes at this point of the unit circle")
    num = _cubic((T.conj(t.a3), T.conj(t.a2), T.embed(t.a1), 1), z, T)
    return T.div(num, den)


def g_total(t: Triple, z: int, T: TowerCtx) -> int:
    """z^3 h(z)^(2^m - 1), defined everywhere (0 where h vanishes)."""
    return T.mul(T.pow(z, 3), T.pow(h_eval(t, z, T), (1 << T.m) - 1))


def F_values(t: Triple, T: TowerCtx) -> list[int | None]:
    coeffs = rational_map_coeffs(t, T)
    out: list[int | None] = []
    for x in T.base.elements():
        try:
            out.append(F_eval(t, x, T, coeffs))
        except UndefinedPoint:
            out.append(None)
    return out


def excluded_value(t: Triple, T: TowerCtx) -> int:
    """(1 + a1 + a2 + a3)^(2^m - 1) = g(1), the one unit-circle value F must miss."""
    return T.pow(1 ^ T.embed(t.a1) ^ t.a2 ^ t.a3, (1 << T.m) - 1)


def F_is_bijection(t: Triple, T: TowerCtx) -> bool:
    """F defined on all of GF(2^m), injective, and never equal to g(1)."""
    if degenerate(t, T):
        return False
    vals = F_values(t, T)
    if None in vals:
        return False
    return len(set(vals)) == len(vals) and excluded_value(t, T) not in vals


def is_perm_bruteforce(t: Triple, T: TowerCtx) -> bool:
    return is_perm_bruteforce_coeffs(T.embed(t.a1), t.a2, t.a3, T)


def is_perm_bruteforce_coeffs(A1: int, a2: int, a3: int, T: TowerCtx) -> bool:
    seen = bytearray(T.order)
    for x in T.elements():
        y = f_eval_coeffs(A1, a2, a3, x, T)
        if seen[y]:
            return False
        seen[y] = 1
    return True


def is_perm_structured(t: Triple, T: TowerCtx) -> bool:
    """Permutation test through the unit circle.

    f = x^3 h(x^(2^m - 1)) permutes GF(2^(2m)) iff gcd(3, 2^m - 1) = 1 and
    z -> z^3 h(z)^(2^m - 1) permutes the 2^m + 1 elements of norm 1.
    """
    if T.m % 2 == 0:
        return False
    if degenerate(t, T):
        return False
    seen = set()
    for z in T.mu_list():
        v = g_total(t, z, T)
        if v == 0 or v in seen:
            return False
        seen.add(v)
    return True


# ---------------------------------------------------------------------------
# relations among the thetas
# ---------------------------------------------------------------------------

def theta_identity_holds(th: ThetaVector, T: TowerCtx) -> bool:
    """theta2 conj(theta2) + theta3 conj(theta3) = theta4 (theta1 + theta4); holds for every triple."""
    mul = T.mul
    return mul(th.t2, th.t2bar) ^ mul(th.t3, th.t3bar) == mul(th.t4, th.t1 ^ th.t4)


def theta_member_relation_holds(th: ThetaVector, T: TowerCtx) -> bool:
    """For members: theta1 (theta2 theta3 + conj) = theta2 conj(theta2) (theta2 + conj(theta2))."""
    mul = T.mul
    lhs = mul(th.t1, mul(th.t2, th.t3) ^ mul(th.t2bar, th.t3bar))
    rhs = mul(mul(th.t2, th.t2bar), th.t2 ^ th.t2bar)
    return lhs == rhs


def circle_root_exists(th: ThetaVector, T: TowerCtx) -> bool:
    """Some l of norm 1 with theta1 + theta2 conj(l) + conj(theta2) l = 0."""
    for lam in T.mu_list():
        if th.t1 ^ T.mul(th.t2, T.conj(lam)) ^ T.mul(th.t2bar, lam) == 0:
            return True
    return False


def theta_circle_relation_holds(th: ThetaVector, T: TowerCtx) -> bool | None:
    """theta2 conj(theta2) = theta1 theta4 when a circle root exists; None if vacuous."""
    if not circle_root_exists(th, T):
        return None
    return T.mul(th.t2, th.t2bar) == T.mul(th.t1, th.t4)
