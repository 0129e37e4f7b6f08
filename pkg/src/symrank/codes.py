"""Constructors and enumerators for the S and T code families.

Family S (parameters n, d, s with n - d even, gcd(s, n) = 1) consists of the
forms Tr(b_0 x y + sum_i b_i (x^(q^si) y + y^(q^si) x)) with all b_i free in
F_{q^n}; written as self-adjoint polynomials, b_0 sits at exponent 0 and each
b_i at the conjugate pair of exponents (si, n - si).

Family T (parameters n = 2k >= 6, s coprime to n, and a non-square eta in
F_{q^n}) consists of Tr(y g(x)) for

    g = b_0 X^(q^sk) + b_1 X^(q^s(k-1)) + (b_1 X)^(q^s(k+1))
        + eta b_2 X^(q^s(k-2)) + (eta b_2 X)^(q^s(k+2)),

with b_0, b_2 in F_{q^k} and b_1 in F_{q^n}; all exponents are taken mod n.
Its size q^(2n) meets the additive-code size bound for distance n - 2.

A CodeBasis carries F_p-generators in a fixed block order (b_0 block, then
b_1, ...), each block running over a deterministic subfield basis.  The
enumeration index of a coefficient vector reads its F_p digits big-endian in
that order, so ascending index is ascending lexicographic order and reported
witnesses are reproducible.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import cached_property

import numpy as np

from . import fplin
from .dickson import twisted_coeff_vector
from .gf import FieldCtx, FieldElement, is_in_subfield, is_square, subfield_basis
from .linpoly import LinPoly
from .symforms import SelfAdjointPoly, raw_matrix, raw_vector

ENUM_BUDGET = 1 << 28


class BudgetError(Exception):
    """Enumeration would exceed the configured codeword budget."""


@dataclass(frozen=True)
class CodeSpec:
    family: str
    p: int
    m: int
    n: int
    s: int
    d: int | None = None          # S only
    eta: int | None = None        # T only, packed encoding

    @property
    def q(self) -> int:
        return self.p ** self.m

    @property
    def k(self) -> int:
        return self.n // 2

    @property
    def declared_distance(self) -> int:
        """Minimum rank the family is designed for (n - 2 for T, d for S)."""
        return self.n - 2 if self.family == "T" else self.d

    @property
    def claim_status(self) -> str:
        """Whether the min-rank claim is proved or an open extrapolation."""
        if self.family == "S":
            return "proved"
        return "proved" if self.n in (6, 8, 10) else "conjectural"

    def to_json(self) -> dict:
        out = {"family": self.family, "p": self.p, "m": self.m, "n": self.n,
               "s": self.s}
        if self.family == "S":
            out["d"] = self.d
        else:
            out["eta"] = str(self.eta)
            out["k"] = self.k
        return out


@dataclass(frozen=True)
class CoeffBlock:
    name: str
    basis: tuple[int, ...]        # packed F_p-basis of the coefficient subfield

    @property
    def size(self) -> int:
        return len(self.basis)


@dataclass(frozen=True)
class CodeBasis:
    spec: CodeSpec
    ctx: FieldCtx
    gens: tuple[SelfAdjointPoly, ...]
    blocks: tuple[CoeffBlock, ...]

    @property
    def dim(self) -> int:
        """F_p-dimension (equals m times the F_q-dimension)."""
        return len(self.gens)

    @property
    def fq_dim(self) -> int:
        return self.dim // self.ctx.m

    @property
    def size(self) -> int:
        return self.ctx.p ** self.dim

    @cached_property
    def _span(self) -> fplin.SpanSolver:
        return fplin.SpanSolver(raw_matrix(self.gens), self.ctx.p)

    def decode_digits(self, digits) -> dict[str, FieldElement]:
        """Coefficient elements (b0, b1, ...) from one F_p digit vector."""
        ctx = self.ctx
        out = {}
        pos = 0
        for block in self.blocks:
            acc = 0
            for j, beta in enumerate(block.basis):
                dj = int(digits[pos + j])
                if dj:
                    acc = ctx.add(acc, ctx.mul(dj, beta))
            out[block.name] = FieldElement(ctx, acc)
            pos += block.size
        return out


def build_T(ctx: FieldCtx, s: int, eta) -> CodeBasis:
    """The twisted family T_{n,s,eta}; F_q-dimension 2n."""
    n, k = ctx.n, ctx.n // 2
    if n % 2 or n < 6:
        raise ValueError(f"family T needs even n >= 6, got n = {n}")
    if not 0 < s < n or math.gcd(s, n) != 1:
        raise ValueError(f"s = {s} must satisfy 0 < s < n and gcd(s, n) = 1")
    eta = eta if isinstance(eta, FieldElement) else FieldElement(ctx, eta)
    if not eta.val:
        raise ValueError("eta must be nonzero")
    if is_square(ctx, eta):
        raise ValueError(
            f"eta = {eta.val} is a square in F_(q^n); the construction "
            "requires a non-square")
    spec = CodeSpec("T", ctx.p, ctx.m, n, s, eta=eta.val)
    basis_k = tuple(b.val for b in subfield_basis(ctx, ctx.m * k))
    basis_n = tuple(b.val for b in subfield_basis(ctx, ctx.mn))
    blocks = (CoeffBlock("b0", basis_k), CoeffBlock("b1", basis_n),
              CoeffBlock("b2", basis_k))
    gens = []
    zero = ctx.zero
    for block, slot in ((blocks[0], 0), (blocks[1], 1), (blocks[2], 2)):
        for beta in block.basis:
            coeffs = [zero, zero, zero]
            coeffs[slot] = FieldElement(ctx, beta)
            gens.append(_t_codeword(ctx, s, eta, *coeffs))
    basis = CodeBasis(spec, ctx, tuple(gens), blocks)
    _check_generators(basis, expected_dim=2 * n * ctx.m)
    return basis


def build_S(ctx: FieldCtx, d: int, s: int) -> CodeBasis:
    """The untwisted family S_{n,d,s}; F_q-dimension n(n-d+2)/2."""
    n = ctx.n
    if not 1 <= d <= n:
        raise ValueError(f"d = {d} outside 1..{n}")
    if (n - d) % 2:
        raise ValueError(f"n - d = {n - d} must be even")
    if not 0 < s < n or math.gcd(s, n) != 1:
        raise ValueError(f"s = {s} must satisfy 0 < s < n and gcd(s, n) = 1")
    spec = CodeSpec("S", ctx.p, ctx.m, n, s, d=d)
    t = (n - d) // 2
    basis_n = tuple(b.val for b in subfield_basis(ctx, ctx.mn))
    blocks = tuple(CoeffBlock(f"b{i}", basis_n) for i in range(t + 1))
    gens = []
    for i in range(t + 1):
        for beta in basis_n:
            coeffs = [ctx.zero] * (t + 1)
            coeffs[i] = FieldElement(ctx, beta)
            gens.append(_s_codeword(ctx, s, t, coeffs))
    basis = CodeBasis(spec, ctx, tuple(gens), blocks)
    _check_generators(basis, expected_dim=ctx.m * n * (n - d + 2) // 2)
    return basis


def _check_generators(basis: CodeBasis, expected_dim: int) -> None:
    if basis.dim != expected_dim:
        raise AssertionError("generator count does not match the family dimension")
    if fplin.rank(raw_matrix(basis.gens), basis.ctx.p) != basis.dim:
        raise AssertionError("generators are dependent")


def _t_codeword(ctx: FieldCtx, s: int, eta: FieldElement,
                b0: FieldElement, b1: FieldElement, b2: FieldElement) -> SelfAdjointPoly:
    coeffs = twisted_coeff_vector(ctx, b0, b1, eta * b2, s)
    return SelfAdjointPoly(ctx, tuple(coeffs))


def _s_codeword(ctx: FieldCtx, s: int, t: int, bs) -> SelfAdjointPoly:
    n = ctx.n
    c = [ctx.zero] * n
    c[0] = c[0] + bs[0]
    for i in range(1, t + 1):
        e = (s * i) % n
        e2 = (n - e) % n
        c[e] = c[e] + bs[i]
        c[e2] = c[e2] + bs[i].frob(e2)
    return SelfAdjointPoly(ctx, tuple(c))


def codeword(basis: CodeBasis, coeffs) -> SelfAdjointPoly:
    """The codeword for explicit coefficients (b0, b1, b2) for T, or
    (b0, ..., b_t) for S; rejects coefficients outside their subfields."""
    ctx = basis.ctx
    spec = basis.spec
    coeffs = [c if isinstance(c, FieldElement) else FieldElement(ctx, c)
              for c in coeffs]
    if len(coeffs) != len(basis.blocks):
        raise ValueError(f"expected {len(basis.blocks)} coefficients")
    if spec.family == "T":
        b0, b1, b2 = coeffs
        for name, val in (("b0", b0), ("b2", b2)):
            if not is_in_subfield(ctx, val, ctx.m * spec.k):
                raise ValueError(f"{name} = {val.val} lies outside F_(q^k)")
        return _t_codeword(ctx, spec.s, FieldElement(ctx, spec.eta), b0, b1, b2)
    return _s_codeword(ctx, spec.s, len(coeffs) - 1, coeffs)


def member(basis: CodeBasis, f: LinPoly) -> bool:
    """Membership in the F_q-span of the generators.

    Decided structurally (coefficient support, conjugate-pair consistency and
    subfield constraints characterize both families exactly); the span check
    member_by_span is the independent fallback used to cross-validate.
    """
    ctx = basis.ctx
    spec = basis.spec
    n = ctx.n
    c = f.coeffs
    if spec.family == "T":
        k, s = spec.k, spec.s
        ek, em1, ep1 = (s * k) % n, (s * (k - 1)) % n, (s * (k + 1)) % n
        em2, ep2 = (s * (k - 2)) % n, (s * (k + 2)) % n
        allowed = {ek, em1, ep1, em2, ep2}
        if any(c[i].val and i not in allowed for i in range(n)):
            return False
        if not is_in_subfield(ctx, c[ek], ctx.m * k):
            return False
        if c[ep1] != c[em1].frob(ep1):
            return False
        if c[ep2] != c[em2].frob(ep2):
            return False
        return is_in_subfield(ctx, c[em2] / FieldElement(ctx, spec.eta),
                              ctx.m * k)
    t = (n - spec.d) // 2
    allowed = {0}
    for i in range(1, t + 1):
        e = (spec.s * i) % n
        allowed |= {e, (n - e) % n}
    if any(c[i].val and i not in allowed for i in range(n)):
        return False
    for i in range(1, t + 1):
        e = (spec.s * i) % n
        e2 = (n - e) % n
        if c[e2] != c[e].frob(e2):
            return False
    return True


def member_by_span(basis: CodeBasis, f: LinPoly) -> bool:
    """Independent membership oracle: coordinate solve in the raw span."""
    return basis._span.contains(raw_vector(f))


# ---------------------------------------------------------------------------
# Enumeration order and index arithmetic
# ---------------------------------------------------------------------------


def digits_from_indices(indices, dim: int, p: int) -> np.ndarray:
    """Big-endian base-p digit matrix; digit 0 is the most significant, so
    ascending index equals ascending lexicographic coefficient order."""
    idx = np.asarray(indices, dtype=np.int64).copy()
    out = np.empty((idx.shape[0], dim), dtype=np.int8)
    for j in range(dim - 1, -1, -1):
        out[:, j] = idx % p
        idx //= p
    return out


def index_from_digits(digits, p: int) -> int:
    out = 0
    for d in digits:
        out = out * p + int(d)
    return out


def projective_count(basis: CodeBasis) -> int:
    return (basis.size - 1) // (basis.ctx.q - 1)


def projective_to_full_indices(t, dim: int, p: int) -> np.ndarray:
    """Map projective enumeration positions to full-space indices.

    Representatives are the vectors whose first nonzero digit is 1; their
    full indices are exactly the union of [p^L, 2 p^L) over L = 0..dim-1,
    and ascending position = ascending full index (lexicographic order).
    """
    t = np.asarray(t, dtype=np.int64)
    # cumulative block starts: block L covers positions [(p^L - 1)/(p - 1), ...)
    starts = (p ** np.arange(dim + 1, dtype=np.int64) - 1) // (p - 1)
    block = np.searchsorted(starts, t, side="right") - 1
    return p ** block + (t - starts[block])


def sample_digit_matrix(basis: CodeBasis, count: int, seed: int) -> np.ndarray:
    """Seeded uniform draws of nonzero coefficient vectors, as digit rows.

    Uses the legacy numpy RandomState generator because its stream is frozen
    across numpy versions, which is what makes reports bit-reproducible.
    """
    p, dim = basis.ctx.p, basis.dim
    rs = np.random.RandomState(seed)
    if basis.size - 1 <= np.iinfo(np.int64).max:
        idx = rs.randint(1, basis.size, size=count, dtype=np.int64)
        return digits_from_indices(idx, dim, p)
    digits = rs.randint(0, p, size=(count, dim)).astype(np.int8)
    while True:
        zero_rows = np.nonzero(~digits.any(axis=1))[0]
        if zero_rows.size == 0:
            return digits
        digits[zero_rows] = rs.randint(0, p, size=(zero_rows.size, dim))


def frobenius_digit_matrix(basis: CodeBasis) -> np.ndarray:
    """Matrix of the coefficient Frobenius b -> b^q on the digit space.

    Row j holds the digit vector of the codeword whose coefficients are the
    q-th powers of generator j's coefficients.  Using it as a reduction
    requires the orbit-rank property to actually hold for the family; see
    verify.min_rank.
    """
    ctx = basis.ctx
    images = []
    for block in basis.blocks:
        for beta in block.basis:
            params = [FieldElement(ctx, ctx.frob(beta, 1))
                      if other.name == block.name else ctx.zero
                      for other in basis.blocks]
            images.append(codeword(basis, params))
    coords, inside = basis._span.coords_matrix(raw_matrix(images))
    if not inside.all():
        raise AssertionError("frobenius image left the code")
    return coords.astype(np.int8)


def enumerate_codewords(basis: CodeBasis, mode: str = "full",
                        count: int | None = None, seed: int | None = None,
                        budget: int = ENUM_BUDGET):
    """Stream codewords as SelfAdjointPoly values.

    full: all nonzero codewords in lexicographic coefficient order.
    projective: one representative per F_q^* class (prime q only).
    sample: `count` seeded uniform draws of nonzero coefficient vectors.
    """
    ctx = basis.ctx
    if mode == "full":
        total = basis.size - 1
        if total > budget:
            raise BudgetError(f"full enumeration of {total} codewords exceeds "
                              f"budget {budget}")
        plan = np.arange(1, basis.size, dtype=np.int64)
    elif mode == "projective":
        if ctx.m != 1:
            raise ValueError("projective mode needs prime q (m = 1)")
        total = projective_count(basis)
        if total > budget:
            raise BudgetError(f"projective enumeration of {total} codewords "
                              f"exceeds budget {budget}")
        plan = projective_to_full_indices(
            np.arange(total, dtype=np.int64), basis.dim, ctx.p)
    elif mode == "sample":
        if count is None or seed is None:
            raise ValueError("sample mode needs count and seed")
        for row in sample_digit_matrix(basis, count, seed):
            yield codeword_from_digits(basis, row)
        return
    else:
        raise ValueError(f"unknown mode {mode!r}")
    for start in range(0, plan.shape[0], 4096):
        chunk = plan[start:start + 4096]
        for row in digits_from_indices(chunk, basis.dim, ctx.p):
            yield codeword_from_digits(basis, row)


def codeword_from_digits(basis: CodeBasis, digits) -> SelfAdjointPoly:
    params = basis.decode_digits(digits)
    return codeword(basis, [params[b.name] for b in basis.blocks])
