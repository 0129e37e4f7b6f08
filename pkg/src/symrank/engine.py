"""Vectorized batch kernels for the enumeration engine.

Everything here works on numpy arrays of packed field values and needs the
field context's lookup tables.  A batch of coefficient digit vectors is
turned into per-exponent coefficient columns, assembled into a stack of
Dickson matrices, and row-reduced in lockstep across the whole batch:
pivot selection, row swaps and eliminations are data-parallel with
per-matrix pivot pointers, so no Python-level branching happens per
codeword.
"""

from __future__ import annotations

import numpy as np

from .codes import CodeBasis
from .gf import FieldCtx


def coefficient_maps(basis: CodeBasis) -> dict[int, np.ndarray]:
    """Per-exponent F_p matrices M_e with coeffs_e = pack(digits @ M_e).

    Row j of M_e holds the F_p coordinates of generator j's coefficient at
    exponent e; exponents where every generator vanishes are omitted.
    """
    ctx = basis.ctx
    maps: dict[int, np.ndarray] = {}
    for j, g in enumerate(basis.gens):
        for e, c in enumerate(g.coeffs):
            if not c.val:
                continue
            m = maps.setdefault(e, np.zeros((basis.dim, ctx.mn), dtype=np.int64))
            v = c.val
            for t in range(ctx.mn):
                v, m[j, t] = divmod(v, ctx.p)
    return maps


def coefficient_columns(ctx: FieldCtx, coeff_maps: dict[int, np.ndarray],
                        digits: np.ndarray) -> np.ndarray:
    """Packed coefficient values, one column per exponent: shape (B, n)."""
    out = np.zeros((digits.shape[0], ctx.n), dtype=np.int64)
    d64 = digits.astype(np.int64)
    for e, m in coeff_maps.items():
        out[:, e] = ctx.pack_arr((d64 @ m) % ctx.p)
    return out


def batch_dickson(ctx: FieldCtx, cols: np.ndarray) -> np.ndarray:
    """Stack of Dickson matrices for a batch of coefficient vectors."""
    B, n = cols.shape
    mats = np.empty((B, n, n), dtype=np.int64)
    for i in range(n):
        perm = (np.arange(n) - i) % n
        mats[:, i, :] = ctx.frob_arr(cols, i)[:, perm]
    return mats


def batch_rank(ctx: FieldCtx, mats: np.ndarray) -> np.ndarray:
    """Rank of every matrix in the stack by lockstep Gaussian elimination."""
    B, n, _ = mats.shape
    if B == 0:
        return np.zeros(0, dtype=np.int64)
    r = np.zeros(B, dtype=np.int64)
    rows = np.arange(n)
    bidx = np.arange(B)
    for col in range(n):
        cand = (mats[:, :, col] != 0) & (rows[None, :] >= r[:, None])
        has = cand.any(axis=1)
        if not has.any():
            continue
        piv = np.where(has, cand.argmax(axis=1), 0)
        rr = np.where(has, r, 0)
        swap = has & (piv != rr)
        if swap.any():
            sidx = bidx[swap]
            a, b = rr[swap], piv[swap]
            tmp = mats[sidx, a].copy()
            mats[sidx, a] = mats[sidx, b]
            mats[sidx, b] = tmp
        pivinv = ctx.inv_arr(np.where(has, mats[bidx, rr, col], 1))
        fac = ctx.mul_arr(mats[:, :, col], pivinv[:, None])
        fac = np.where((rows[None, :] > rr[:, None]) & has[:, None], fac, 0)
        if fac.any():
            # rows below the pivot pointer are already zero left of col,
            # so only columns >= col can change
            pivrow = mats[bidx, rr][:, None, col:]
            delta = ctx.mul_arr(fac[:, :, None], pivrow)
            mats[:, :, col:] = ctx.sub_arr(mats[:, :, col:], delta)
        r += has
    return r


def batch_ranks_from_digits(ctx: FieldCtx, coeff_maps: dict[int, np.ndarray],
                            digits: np.ndarray) -> np.ndarray:
    cols = coefficient_columns(ctx, coeff_maps, digits)
    return batch_rank(ctx, batch_dickson(ctx, cols))
