"""Dense linear algebra over the prime field F_p.

Matrices are numpy integer arrays with entries already reduced into
[0, p).  Everything here is exact integer arithmetic; p is assumed small
enough that products fit comfortably in int64 (p < 2**15 is plenty).
"""

from __future__ import annotations

import numpy as np


def as_modp(a, p: int) -> np.ndarray:
    return np.asarray(a, dtype=np.int64) % p


def rref(a, p: int):
    """Reduced row echelon form of ``a`` mod p.

    Returns ``(r, transform, pivots)`` where ``r = transform @ a mod p``,
    ``pivots`` is the list of pivot column indices, and the first
    ``len(pivots)`` rows of ``r`` are the nonzero rows.
    """
    a = as_modp(a, p)
    rows, cols = a.shape
    r = a.copy()
    t = np.eye(rows, dtype=np.int64)
    pivots: list[int] = []
    lead = 0
    for col in range(cols):
        if lead == rows:
            break
        sub = r[lead:, col]
        nz = np.nonzero(sub)[0]
        if nz.size == 0:
            continue
        piv = lead + int(nz[0])
        if piv != lead:
            r[[lead, piv]] = r[[piv, lead]]
            t[[lead, piv]] = t[[piv, lead]]
        inv = pow(int(r[lead, col]), -1, p)
        r[lead] = (r[lead] * inv) % p
        t[lead] = (t[lead] * inv) % p
        other = np.nonzero(r[:, col])[0]
        other = other[other != lead]
        if other.size:
            f = r[other, col][:, None]
            r[other] = (r[other] - f * r[lead]) % p
            t[other] = (t[other] - f * t[lead]) % p
        pivots.append(col)
        lead += 1
    return r, t, pivots


def rank(a, p: int) -> int:
    a = as_modp(a, p)
    if a.size == 0:
        return 0
    _, _, pivots = rref(a, p)
    return len(pivots)


def nullspace(a, p: int) -> np.ndarray:
    """Row basis of the right null space {x : a @ x = 0 mod p}.

    The basis is in reduced echelon form of the free-variable pattern, so
    it is deterministic for a given input.
    """
    a = as_modp(a, p)
    rows, cols = a.shape
    r, _, pivots = rref(a, p)
    free = [c for c in range(cols) if c not in pivots]
    basis = np.zeros((len(free), cols), dtype=np.int64)
    for k, c in enumerate(free):
        basis[k, c] = 1
        for i, pc in enumerate(pivots):
            basis[k, pc] = (-r[i, c]) % p
    return basis


class SpanSolver:
    """Coordinate solver for the row span of a fixed full-rank matrix.

    Given ``basis`` with independent rows, ``coords(v)`` returns x with
    ``x @ basis = v`` (mod p), or None when v is outside the span.  The
    batched form works on whole matrices of row vectors at once.
    """

    def __init__(self, basis, p: int):
        self.p = p
        self.basis = as_modp(basis, p)
        r, t, pivots = rref(self.basis, p)
        if len(pivots) != self.basis.shape[0]:
            raise ValueError("basis rows are dependent")
        self.pivots = np.array(pivots, dtype=np.int64)
        self.transform = t

    @property
    def dim(self) -> int:
        return self.basis.shape[0]

    def coords_matrix(self, vectors) -> tuple[np.ndarray, np.ndarray]:
        """Coordinates of each row of ``vectors``; second value is a boolean
        mask of which rows actually lie in the span."""
        v = as_modp(np.atleast_2d(vectors), self.p)
        x = (v[:, self.pivots] @ self.transform) % self.p
        inside = np.all((x @ self.basis) % self.p == v, axis=1)
        return x, inside

    def coords(self, vector) -> np.ndarray | None:
        x, inside = self.coords_matrix(np.atleast_2d(vector))
        return x[0] if bool(inside[0]) else None

    def contains(self, vector) -> bool:
        return self.coords(vector) is not None
