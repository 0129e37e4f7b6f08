"""Self-adjoint q-polynomials: the space W of symmetric bilinear forms.

A q-polynomial f corresponds to the symmetric bilinear form Tr(f(x) y)
exactly when f equals its adjoint, i.e. c_{n-i} = c_i^(q^(n-i)) for
1 <= i <= n-1 (and, for even n, c_{n/2} lies in F_{q^(n/2)}).  W denotes
the set of all such polynomials; its F_q-dimension is n(n+1)/2.

This module provides a deterministic basis of W, coordinates with respect
to it (used for span comparisons everywhere else), Gram matrices and
hyperplane restriction at prime q, the coefficient inner product
<f, g> = Tr(sum f_i g_i), and Delsarte duals (orthogonal complements
inside W under that inner product).
"""

from __future__ import annotations

import numpy as np

from . import fplin
from .gf import FieldCtx, FieldElement, fq_basis, subfield_basis, trace_q
from .linpoly import LinPoly, linpoly


class SelfAdjointPoly(LinPoly):
    """A LinPoly that is equal to its adjoint (checked at construction)."""

    def __post_init__(self):
        super().__post_init__()
        adj = LinPoly(self.ctx, self.coeffs).adjoint()
        if tuple(c.val for c in adj.coeffs) != tuple(c.val for c in self.coeffs):
            raise ValueError("polynomial is not self-adjoint")


def as_self_adjoint(f: LinPoly) -> SelfAdjointPoly:
    return SelfAdjointPoly(f.ctx, f.coeffs)


def w_basis(ctx: FieldCtx) -> list[SelfAdjointPoly]:
    """Deterministic F_q-basis of W, of size n(n+1)/2.

    Blocks: the c_0 slot runs over an F_q-basis of F_{q^n}; each conjugate
    pair of slots (i, n-i) with i < n/2 contributes one basis polynomial per
    F_q-basis element; for even n the middle slot runs over an F_q-basis of
    F_{q^(n/2)}.
    """
    n = ctx.n
    base_n = fq_basis(ctx, n)
    out: list[SelfAdjointPoly] = []
    for beta in base_n:
        out.append(_pair_poly(ctx, 0, beta))
    for i in range(1, (n + 1) // 2):
        for beta in base_n:
            out.append(_pair_poly(ctx, i, beta))
    if n % 2 == 0:
        for gamma in fq_basis(ctx, n // 2):
            out.append(_pair_poly(ctx, n // 2, gamma))
    if len(out) != n * (n + 1) // 2:
        raise AssertionError("W basis has wrong size")
    return out


def _pair_poly(ctx: FieldCtx, i: int, beta: FieldElement) -> SelfAdjointPoly:
    """Self-adjoint polynomial with c_i = beta (and the forced mirror slot)."""
    n = ctx.n
    coeffs = [ctx.zero] * n
    coeffs[i] = beta
    if 0 < i and (n - i) % n != i:
        coeffs[n - i] = beta.frob(n - i)
    return SelfAdjointPoly(ctx, tuple(coeffs))


def _el_coords(ctx: FieldCtx, val: int) -> np.ndarray:
    out = np.empty(ctx.mn, dtype=np.int64)
    for t in range(ctx.mn):
        val, out[t] = divmod(val, ctx.p)
    return out


def raw_vector(f: LinPoly) -> np.ndarray:
    """F_p coordinate vector of all n coefficients, concatenated."""
    ctx = f.ctx
    out = np.empty(ctx.n * ctx.mn, dtype=np.int64)
    for i, c in enumerate(f.coeffs):
        v = c.val
        for t in range(ctx.mn):
            v, digit = divmod(v, ctx.p)
            out[i * ctx.mn + t] = digit
    return out


def raw_matrix(polys) -> np.ndarray:
    return np.stack([raw_vector(f) for f in polys])


def poly_from_raw(ctx: FieldCtx, vec) -> LinPoly:
    vec = np.asarray(vec, dtype=np.int64) % ctx.p
    coeffs = []
    for i in range(ctx.n):
        chunk = vec[i * ctx.mn:(i + 1) * ctx.mn]
        coeffs.append(int(chunk @ (ctx.p ** np.arange(ctx.mn, dtype=np.int64))))
    return linpoly(ctx, coeffs)


class WSpace:
    """Fixed F_p-coordinate system on W for one field context.

    The F_p basis is the F_q basis of w_basis() scaled through an F_p-basis
    of F_q, so its size is m * n(n+1)/2.  Coordinates are used for all span
    computations (duals, code equality, membership fallback).
    """

    def __init__(self, ctx: FieldCtx):
        self.ctx = ctx
        self.fq_basis_polys = w_basis(ctx)
        gamma = subfield_basis(ctx, ctx.m)
        self.fp_basis_polys = [
            as_self_adjoint(f.scale(g))
            for f in self.fq_basis_polys for g in gamma
        ]
        self.raw = raw_matrix(self.fp_basis_polys)
        self.solver = fplin.SpanSolver(self.raw, ctx.p)

    @property
    def dim_fp(self) -> int:
        return len(self.fp_basis_polys)

    @property
    def dim_fq(self) -> int:
        return len(self.fq_basis_polys)

    def coords(self, f: LinPoly) -> np.ndarray:
        x = self.solver.coords(raw_vector(f))
        if x is None:
            raise ValueError("polynomial is not self-adjoint (outside W)")
        return x

    def coords_matrix(self, polys) -> np.ndarray:
        x, inside = self.solver.coords_matrix(raw_matrix(polys))
        if not inside.all():
            raise ValueError("some polynomial lies outside W")
        return x

    def from_coords(self, vec) -> SelfAdjointPoly:
        raw = (np.asarray(vec, dtype=np.int64) @ self.raw) % self.ctx.p
        return as_self_adjoint(poly_from_raw(self.ctx, raw))


_WSPACE_CACHE: dict = {}


def wspace(ctx: FieldCtx) -> WSpace:
    key = (ctx.p, ctx.m, ctx.n, ctx.modulus)
    ws = _WSPACE_CACHE.get(key)
    if ws is None:
        ws = _WSPACE_CACHE[key] = WSpace(ctx)
    return ws


# ---------------------------------------------------------------------------
# Gram matrices at prime q
# ---------------------------------------------------------------------------


def gram_matrix(ctx: FieldCtx, f: LinPoly, basis=None) -> np.ndarray:
    """Gram matrix of the form Tr(f(x) y): entry (i, j) = Tr(e_j f(e_i)).

    Needs m = 1 so the entries live in the prime field; the matrix is
    symmetric for self-adjoint f and its rank over F_p equals rank(f).
    """
    if ctx.m != 1:
        raise ValueError("gram matrix entries need prime q (m = 1)")
    if basis is None:
        basis = [FieldElement(ctx, ctx.p ** j) for j in range(ctx.n)]
    basis = list(basis)
    coords = np.stack([_el_coords(ctx, b.val) for b in basis])
    if fplin.rank(coords, ctx.p) != len(basis):
        raise ValueError("degenerate basis")
    n = len(basis)
    out = np.zeros((n, n), dtype=np.int64)
    for i in range(n):
        fi = f(basis[i])
        for j in range(n):
            out[i, j] = trace_q(ctx, fi * basis[j]).val
    return out


def restrict_to_hyperplane(ctx: FieldCtx, f: LinPoly, hyperplane_basis) -> np.ndarray:
    """Gram matrix of the form restricted to the span of the given
    independent elements (rank can drop by at most 2 per codimension)."""
    basis = list(hyperplane_basis)
    return gram_matrix(ctx, f, basis)


# ---------------------------------------------------------------------------
# Coefficient inner product and Delsarte dual
# ---------------------------------------------------------------------------


def inner_product(ctx: FieldCtx, f: LinPoly, g: LinPoly) -> FieldElement:
    """<f, g> = Tr(sum_i f_i g_i); symmetric and F_q-bilinear, valued in F_q."""
    acc = 0
    for a, b in zip(f.coeffs, g.coeffs):
        if a.val and b.val:
            acc = ctx.add(acc, ctx.mul(a.val, b.val))
    return trace_q(ctx, FieldElement(ctx, acc))


def delsarte_dual(ctx: FieldCtx, code_basis) -> list[SelfAdjointPoly]:
    """Basis of the orthogonal complement of the given code inside W.

    The input generators must be independent over F_p; the result is the
    (deterministic, echelonized) null space of the inner-product pairing in
    W-coordinates, so dual-of-dual reproduces the original span.
    """
    ws = wspace(ctx)
    gens = list(code_basis)
    if gens:
        if fplin.rank(raw_matrix(gens), ctx.p) != len(gens):
            raise ValueError("dependent generator list")
        ws.coords_matrix(gens)  # validates membership in W
    # <f, g> = 0 is an F_p-linear condition on f; expand the F_q value into
    # its packed F_p coordinates, one constraint row per coordinate
    rows = []
    for g in gens:
        vals = [inner_product(ctx, bj, g).val for bj in ws.fp_basis_polys]
        for t in range(ctx.mn):
            row = [(v // ctx.p ** t) % ctx.p for v in vals]
            rows.append(row)
    if not rows:
        return [as_self_adjoint(LinPoly(ctx, f.coeffs)) for f in ws.fp_basis_polys]
    a = np.array(rows, dtype=np.int64)
    basis = fplin.nullspace(a, ctx.p)
    return [ws.from_coords(v) for v in basis]
