"""q-polynomials of q-degree below n over F_{q^n}.

A LinPoly is a fixed-length coefficient vector (c_0, ..., c_{n-1})
representing the map x -> sum c_i x^(q^i), which is F_q-linear on F_{q^n}.
Composition is taken modulo X^(q^n) - X, so exponents wrap around mod n.

The rank of a q-polynomial is the rank of the induced F_q-linear map; the
default algorithm eliminates the associated Dickson matrix over the big
field (valid for every m), with an independent operator-matrix path over
F_p available when q is prime as a cross-check.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import dickson, fplin
from .gf import FieldCtx, FieldElement, subfield_embedding


@dataclass(frozen=True)
class LinPoly:
    ctx: FieldCtx
    coeffs: tuple[FieldElement, ...]

    def __post_init__(self):
        if len(self.coeffs) != self.ctx.n:
            raise ValueError(
                f"need exactly n={self.ctx.n} coefficients, got {len(self.coeffs)}")

    def __call__(self, x: FieldElement) -> FieldElement:
        """Evaluate at x using the precomputed Frobenius tables."""
        ctx = self.ctx
        acc = 0
        for i, c in enumerate(self.coeffs):
            if c.val:
                acc = ctx.add(acc, ctx.mul(c.val, ctx.frob(x.val, i)))
        return FieldElement(ctx, acc)

    def is_zero(self) -> bool:
        return all(c.val == 0 for c in self.coeffs)

    def support(self) -> tuple[int, ...]:
        return tuple(i for i, c in enumerate(self.coeffs) if c.val)

    def compose_mod(self, other: "LinPoly") -> "LinPoly":
        """self o other, reduced mod X^(q^n) - X.

        The coefficient at exponent t is sum over i + j = t (mod n) of
        self_i * other_j^(q^i).
        """
        ctx = self.ctx
        n = ctx.n
        out = [0] * n
        for i, fi in enumerate(self.coeffs):
            if not fi.val:
                continue
            for j, gj in enumerate(other.coeffs):
                if not gj.val:
                    continue
                t = (i + j) % n
                out[t] = ctx.add(out[t], ctx.mul(fi.val, ctx.frob(gj.val, i)))
        return LinPoly(ctx, tuple(FieldElement(ctx, v) for v in out))

    def adjoint(self) -> "LinPoly":
        """The unique g with Tr(self(x) y) = Tr(x g(y)) for all x, y."""
        ctx = self.ctx
        n = ctx.n
        out = [ctx.zero] * n
        out[0] = self.coeffs[0]
        for i in range(1, n):
            out[n - i] = self.coeffs[i].frob(n - i)
        return LinPoly(ctx, tuple(out))

    def frobenius_twist(self, r: int) -> "LinPoly":
        """Apply x -> x^(p^r) to every coefficient; r must lie in [0, m)."""
        if not 0 <= r < self.ctx.m:
            raise ValueError(f"twist exponent {r} outside [0, m={self.ctx.m})")
        return LinPoly(self.ctx, tuple(c.pfrob(r) for c in self.coeffs))

    def scale(self, a: FieldElement) -> "LinPoly":
        return LinPoly(self.ctx, tuple(a * c for c in self.coeffs))

    def __add__(self, other: "LinPoly") -> "LinPoly":
        return LinPoly(self.ctx, tuple(a + b for a, b in
                                       zip(self.coeffs, other.coeffs)))

    def __sub__(self, other: "LinPoly") -> "LinPoly":
        return LinPoly(self.ctx, tuple(a - b for a, b in
                                       zip(self.coeffs, other.coeffs)))

    def __eq__(self, other):
        return (isinstance(other, LinPoly) and self.ctx == other.ctx
                and tuple(c.val for c in self.coeffs)
                == tuple(c.val for c in other.coeffs))

    def __hash__(self):
        return hash(tuple(c.val for c in self.coeffs))

    def rank(self) -> int:
        """Rank of the induced F_q-linear map (Dickson-matrix elimination)."""
        return dickson.matrix_rank(self.ctx, dickson.dickson_of(self))

    def kernel_dim(self) -> int:
        return self.ctx.n - self.rank()

    def is_permutation(self) -> bool:
        return self.rank() == self.ctx.n

    def operator_matrix(self) -> np.ndarray:
        """Matrix of the induced map over F_p in the polynomial basis.

        Only exposed for prime q (m = 1), where F_p coordinates are F_q
        coordinates; this is the independent cross-check path for rank().
        """
        ctx = self.ctx
        if ctx.m != 1:
            raise ValueError("operator matrix over F_p requires m = 1")
        mat = np.zeros((ctx.mn, ctx.mn), dtype=np.int64)
        for j in range(ctx.mn):
            img = self(FieldElement(ctx, ctx.p ** j)).val
            for i in range(ctx.mn):
                img, c = divmod(img, ctx.p)
                mat[i, j] = c
        return mat

    def rank_via_operator(self) -> int:
        return fplin.rank(self.operator_matrix(), self.ctx.p)

    def to_json(self) -> list[int]:
        return [c.val for c in self.coeffs]

    def __repr__(self):
        terms = [f"{c.val}*X^q{i}" for i, c in enumerate(self.coeffs) if c.val]
        return "LinPoly(" + (" + ".join(terms) or "0") + ")"


def linpoly(ctx: FieldCtx, coeffs) -> LinPoly:
    """Build a LinPoly from packed ints or FieldElements, zero-padded to n."""
    out = [ctx.zero] * ctx.n
    for i, c in enumerate(coeffs):
        out[i] = c if isinstance(c, FieldElement) else FieldElement(ctx, c)
    return LinPoly(ctx, tuple(out))


def monomial(ctx: FieldCtx, c, i: int) -> LinPoly:
    """The q-monomial c X^(q^i) with i reduced mod n."""
    out = [ctx.zero] * ctx.n
    out[i % ctx.n] = c if isinstance(c, FieldElement) else FieldElement(ctx, c)
    return LinPoly(ctx, tuple(out))


def identity(ctx: FieldCtx) -> LinPoly:
    return monomial(ctx, 1, 0)


def trace_poly(ctx: FieldCtx) -> LinPoly:
    return linpoly(ctx, [1] * ctx.n)


def rank_cross_s(ctx_small: FieldCtx, ctx_big: FieldCtx,
                 coeffs, s: int) -> tuple[int, int]:
    """Rank of x -> sum f_i x^(q^(s i)) computed in two incarnations.

    The first value is the rank over F_q of the map on F_{q^n} (coefficients
    placed at exponents s*i mod n).  The second is the rank over F_{q^s} of
    the same formula read in F_{q^(s n)}, i.e. with ctx_big built as
    (p, m*s, n) so its base field is F_{q^s}.  The two ranks agree.
    """
    n = ctx_small.n
    if math.gcd(s, n) != 1:
        raise ValueError(f"gcd(s={s}, n={n}) must be 1")
    if (ctx_big.p != ctx_small.p or ctx_big.m != ctx_small.m * s
            or ctx_big.n != n):
        raise ValueError("ctx_big must be built as (p, m*s, n)")
    coeffs = [c.val if isinstance(c, FieldElement) else int(c) for c in coeffs]
    if len(coeffs) > n:
        raise ValueError("too many coefficients")
    coeffs = coeffs + [0] * (n - len(coeffs))

    small = [0] * n
    for i, c in enumerate(coeffs):
        small[(s * i) % n] = c
    f_small = linpoly(ctx_small, small)

    embed = subfield_embedding(ctx_small, ctx_big)
    f_big = linpoly(ctx_big, [embed(c) for c in coeffs])
    return f_small.rank(), f_big.rank()
