"""Vectorized versions of the per-triple tests, for exhaustive and sampled runs.

Every extension-field element is handled through discrete logs: a product
is ``exp[log a + log b]`` with zeros masked out, conjugation in tower mode
is ``z ^ (z >> m)``.  Results must agree exactly with the scalar routines
in :mod:`quadperm.core`; the test-suite cross-checks them.
"""

from __future__ import annotations

import numpy as np

from .gf2tower import TowerCtx

# cap on elements per intermediate (N x points) array
_CELLS = 1 << 22


class Batch:
    def __init__(self, T: TowerCtx):
        self.T = T
        self.m = T.m
        self.n = T.order - 1
        self.log, self.exp = T.np_tables()
        F = T.base
        self.base_trace = np.array([F.trace(a) for a in F.elements()], dtype=np.int8)
        self.embed_tab = np.array([T.embed(a) for a in F.elements()], dtype=np.int64)
        if not T.is_tower:
            self.unembed = np.full(T.order, -1, dtype=np.int64)
            self.unembed[self.embed_tab] = np.arange(1 << self.m)

    # -- elementwise arithmetic -------------------------------------------------

    def mul(self, a, b):
        a = np.asarray(a, dtype=np.int64)
        b = np.asarray(b, dtype=np.int64)
        r = self.exp[self.log[a] + self.log[b]]
        return np.where((a == 0) | (b == 0), 0, r)

    def pow(self, a, e: int):
        a = np.asarray(a, dtype=np.int64)
        r = self.exp[(self.log[a] * (e % self.n)) % self.n]
        if e == 0:
            return np.ones_like(a)
        return np.where(a == 0, 0, r)

    def inv(self, a):
        a = np.asarray(a, dtype=np.int64)
        return np.where(a == 0, 0, self.exp[(self.n - self.log[a]) % self.n])

    def conj(self, z):
        z = np.asarray(z, dtype=np.int64)
        if self.T.is_tower:
            return z ^ (z >> self.m)
        return self.pow(z, 1 << self.m)

    def embed(self, a):
        return self.embed_tab[np.asarray(a, dtype=np.int64)]

    def to_base(self, z):
        z = np.asarray(z, dtype=np.int64)
        if self.T.is_tower:
            return z
        return self.unembed[z]

    # -- tests ----------------------------------------------------------------------

    def theta(self, a1, a2, a3):
        A1 = self.embed(a1)
        a2 = np.asarray(a2, dtype=np.int64)
        a3 = np.asarray(a3, dtype=np.int64)
        a2b, a3b = self.conj(a2), self.conj(a3)
        a1sq = self.mul(A1, A1)
        n2 = self.mul(a2, a2b)
        n3 = self.mul(a3, a3b)
        t1 = 1 ^ a1sq ^ n2 ^ n3
        t2 = A1 ^ self.mul(a2b, a3)
        t3 = a2b ^ self.mul(A1, a3b)
        t4 = a1sq ^ n2
        return t1, t2, t3, t4

    def gamma(self, a1, a2, a3):
        """Vectorized membership test (odd m)."""
        t1, t2, t3, t4 = self.theta(a1, a2, a3)
        ok = (t1 != 0) & (self.mul(t2, t2) == self.mul(t1, self.conj(t3)))
        ratio = self.to_base(self.mul(t4, self.inv(t1)))
        ratio = np.where(ok, ratio, 0)
        return ok & (self.base_trace[ratio] == 1)

    def degenerate(self, a1, a2, a3):
        return (1 ^ self.embed(a1) ^ np.asarray(a2) ^ np.asarray(a3)) == 0

    def perm_structured(self, a1, a2, a3):
        a1 = np.asarray(a1, dtype=np.int64)
        N = a1.shape[0]
        if self.m % 2 == 0:
            return np.zeros(N, dtype=bool)
        mu = np.array(self.T.mu_list(), dtype=np.int64)
        out = np.empty(N, dtype=bool)
        step = max(1, _CELLS // len(mu))
        lz = self.log[mu]
        for s in range(0, N, step):
            A1 = self.embed(a1[s:s + step])[:, None]
            b2 = np.asarray(a2[s:s + step], dtype=np.int64)[:, None]
            b3 = np.asarray(a3[s:s + step], dtype=np.int64)[:, None]
            z = mu[None, :]
            h = self.mul(self.mul(z ^ A1, z) ^ b2, z) ^ b3
            lg = (3 * lz[None, :] + ((1 << self.m) - 1) * self.log[h]) % self.n
            lg.sort(axis=1)
            distinct = np.all(np.diff(lg, axis=1) != 0, axis=1)
            nz = np.all(h != 0, axis=1)
            out[s:s + step] = distinct & nz
        return out & ~self.degenerate(a1, a2, a3)

    def perm_bruteforce(self, a1, a2, a3):
        """Evaluate f on the whole of GF(2^(2m)) for each triple."""
        a1 = np.asarray(a1, dtype=np.int64)
        N = a1.shape[0]
        xs = np.arange(self.T.order, dtype=np.int64)
        xb = self.conj(xs)
        mono = [self.mul(self.mul(xb, xb), xb), self.mul(self.mul(xb, xb), xs),
                self.mul(self.mul(xs, xs), xb), self.mul(self.mul(xs, xs), xs)]
        out = np.empty(N, dtype=bool)
        step = max(1, _CELLS // self.T.order)
        for s in range(0, N, step):
            coeffs = [self.embed(a1[s:s + step]), np.asarray(a2[s:s + step], dtype=np.int64),
                      np.asarray(a3[s:s + step], dtype=np.int64)]
            f = np.broadcast_to(mono[0], (len(coeffs[0]), self.T.order)).copy()
            for c, mo in zip(coeffs, mono[1:]):
                f ^= self.mul(c[:, None], mo[None, :])
            f.sort(axis=1)
            out[s:s + step] = np.all(np.diff(f, axis=1) != 0, axis=1)
        return out


def sample_members(T: TowerCtx, count: int, rng: np.random.Generator, batch: Batch | None = None):
    """Draw ``count`` member triples (odd m).

    a1 and a2 are drawn uniformly; all a3 completing a member are then found by
    scanning GF(2^(2m)) and one of them is picked uniformly.  Draws with no
    completion are discarded.
    """
    B = batch or Batch(T)
    all_a3 = np.arange(T.order, dtype=np.int64)
    out: list[tuple[int, int, int]] = []
    while len(out) < count:
        a1 = int(rng.integers(0, 1 << T.m))
        a2 = int(rng.integers(0, T.order))
        ok = B.gamma(np.full(T.order, a1), np.full(T.order, a2), all_a3)
        hits = np.flatnonzero(ok)
        if len(hits):
            out.append((a1, a2, int(hits[rng.integers(0, len(hits))])))
    return out
