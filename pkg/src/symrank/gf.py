"""Arithmetic in the tower F_p < F_q < F_{q^n} with q = p^m.

All elements live in one ambient field F_{p^(mn)} = F_p[X]/(modulus); the
intermediate fields are recognized as the fixed sets of Frobenius powers.
An element is a packed integer: sum(c_i * p^i) encodes the polynomial-basis
coordinates (c_0, ..., c_{mn-1}) over F_p.  That integer is also the wire
encoding used by the CLI and JSON reports.

For field orders up to TABLE_LIMIT the context precomputes discrete-log,
antilog, Zech-logarithm, negation, inversion and Frobenius tables keyed to a
fixed primitive element w, which makes both scalar arithmetic and the
vectorized numpy array operations (used by the enumeration engine) cheap.
Larger fields fall back to schoolbook polynomial arithmetic; they stay
correct but are not meant for bulk enumeration.
"""

from __future__ import annotations

from typing import Iterable, Sequence

import numpy as np

from . import fplin

TABLE_LIMIT = 1 << 20
ADD_TABLE_LIMIT = 8192


# ---------------------------------------------------------------------------
# F_p[X] helpers (coefficient lists, constant term first, trimmed)
# ---------------------------------------------------------------------------


def _is_prime(x: int) -> bool:
    if x < 2:
        return False
    if x % 2 == 0:
        return x == 2
    f = 3
    while f * f <= x:
        if x % f == 0:
            return False
        f += 2
    return True


def _prime_factors(x: int) -> list[int]:
    out = []
    f = 2
    while f * f <= x:
        if x % f == 0:
            out.append(f)
            while x % f == 0:
                x //= f
        f += 1 if f == 2 else 2
    if x > 1:
        out.append(x)
    return out


def _ptrim(a: list[int]) -> list[int]:
    while a and a[-1] == 0:
        a.pop()
    return a


def _pmul(a: Sequence[int], b: Sequence[int], p: int) -> list[int]:
    if not a or not b:
        return []
    out = [0] * (len(a) + len(b) - 1)
    for i, ai in enumerate(a):
        if ai:
            for j, bj in enumerate(b):
                out[i + j] = (out[i + j] + ai * bj) % p
    return _ptrim(out)


def _pmod(a: Sequence[int], mod: Sequence[int], p: int) -> list[int]:
    # mod is monic
    a = list(a)
    dm = len(mod) - 1
    for i in range(len(a) - 1, dm - 1, -1):
        c = a[i] % p
        if c:
            for j in range(dm + 1):
                a[i - dm + j] = (a[i - dm + j] - c * mod[j]) % p
    return _ptrim(a[:dm])


def _pmulmod(a, b, mod, p):
    return _pmod(_pmul(a, b, p), mod, p)


def _ppowmod(a, e: int, mod, p):
    result = [1]
    base = _pmod(a, mod, p)
    while e > 0:
        if e & 1:
            result = _pmulmod(result, base, mod, p)
        base = _pmulmod(base, base, mod, p)
        e >>= 1
    return result


def _pgcd(a, b, p):
    a, b = list(a), list(b)
    while b:
        a, b = b, _pmod(a, _monic(b, p), p)
        # reduce by the monic scaling of b; gcd only needed up to units
    return _monic(a, p)


def _monic(a, p):
    a = _ptrim(list(a))
    if not a:
        return a
    inv = pow(a[-1], -1, p)
    return [(c * inv) % p for c in a]


def _is_irreducible(mod: Sequence[int], p: int) -> bool:
    """Irreducibility of a monic polynomial over F_p.

    Uses the standard Frobenius criterion: f of degree r is irreducible iff
    X^(p^r) = X (mod f) and gcd(X^(p^(r/l)) - X, f) = 1 for every prime l | r.
    """
    r = len(mod) - 1
    if r < 1:
        return False
    checkpoints = {r // ell for ell in _prime_factors(r)}
    x = _pmod([0, 1], mod, p)
    u = list(x)
    for d in range(1, r + 1):
        u = _ppowmod(u, p, mod, p)
        if d in checkpoints:
            diff = _ptrim([(ui - xi) % p for ui, xi in
                           zip(u + [0] * len(x), list(x) + [0] * len(u))])
            g = _pgcd(diff, mod, p)
            if len(g) - 1 > 0:
                return False
    return u == x


def _find_modulus(p: int, deg: int) -> tuple[int, ...]:
    """Lexicographically least monic irreducible of the given degree.

    Candidates are ordered by the coefficient tuple (c_0, ..., c_{deg-1})
    read from the constant term upward.
    """
    for packed in range(p ** deg):
        # c_0 (the constant term) is the most significant digit of `packed`
        coeffs = []
        rem = packed
        for i in range(deg):
            digit, rem = divmod(rem, p ** (deg - 1 - i))
            coeffs.append(digit)
        if deg > 1 and coeffs[0] == 0:
            continue  # divisible by X
        cand = coeffs + [1]
        if _is_irreducible(cand, p):
            return tuple(cand)
    raise AssertionError("no irreducible polynomial found")  # unreachable


# ---------------------------------------------------------------------------
# Field context
# ---------------------------------------------------------------------------


class FieldCtx:
    """Immutable ambient field F_{p^(mn)} with its subfield structure.

    Scalar operations take and return packed integers; the *_arr variants
    operate elementwise on numpy arrays of packed values and require the
    lookup tables (order <= TABLE_LIMIT).  FieldCtx is safe to share across
    threads and processes: nothing is mutated after construction.
    """

    def __init__(self, p: int, m: int, n: int,
                 modulus: Sequence[int] | None = None):
        if not _is_prime(p):
            raise ValueError(f"p must be prime, got {p}")
        if p == 2:
            raise ValueError("even characteristic is not supported (q must be odd)")
        if m < 1 or n < 1:
            raise ValueError("m and n must be positive")
        self.p = p
        self.m = m
        self.n = n
        self.mn = m * n
        self.q = p ** m
        self.order = p ** self.mn
        if self.order.bit_length() > 62:
            raise ValueError("field order exceeds the supported packing range")

        if modulus is None:
            self.modulus = _find_modulus(p, self.mn)
        else:
            cand = [c % p for c in modulus]
            if len(_ptrim(list(cand))) - 1 != self.mn or cand[self.mn] != 1:
                raise ValueError(
                    f"modulus must be monic of degree {self.mn}, got degree "
                    f"{len(_ptrim(list(cand))) - 1}")
            if not _is_irreducible(cand, p):
                raise ValueError("supplied modulus is reducible over F_p")
            self.modulus = tuple(cand)

        self._ppow = p ** np.arange(self.mn, dtype=np.int64)
        self._frob_mat = self._frobenius_matrix()
        self._frob_mat_pows = self._frobenius_matrix_powers()

        self.w = self._find_primitive()

        self._exp = None
        self._log = None
        self._zech = None
        self._neg_t = None
        self._inv_t = None
        self._coeff_t = None
        self._pfrob_t = None
        self._add_t = None
        if self.order <= TABLE_LIMIT:
            self._build_tables()
        self._self_check()

    # -- construction helpers ------------------------------------------------

    def _unpack(self, x: int) -> list[int]:
        out = []
        for _ in range(self.mn):
            x, c = divmod(x, self.p)
            out.append(c)
        return out

    def _pack(self, coeffs: Iterable[int]) -> int:
        out = 0
        for i, c in enumerate(coeffs):
            out += (c % self.p) * self.p ** i
        return out

    def _mul_raw(self, a: int, b: int) -> int:
        prod = _pmulmod(_ptrim(self._unpack(a)), _ptrim(self._unpack(b)),
                        self.modulus, self.p)
        return self._pack(prod)

    def _pow_raw(self, a: int, e: int) -> int:
        return self._pack(_ppowmod(_ptrim(self._unpack(a)), e,
                                   self.modulus, self.p))

    def _frobenius_matrix(self) -> np.ndarray:
        # column j holds the coordinates of (X^j)^p mod modulus
        mat = np.zeros((self.mn, self.mn), dtype=np.int64)
        for j in range(self.mn):
            img = _ppowmod([0] * j + [1], self.p, self.modulus, self.p)
            for i, c in enumerate(img):
                mat[i, j] = c
        return mat

    def _frobenius_matrix_powers(self) -> list[np.ndarray]:
        pows = [np.eye(self.mn, dtype=np.int64)]
        for _ in range(1, self.mn):
            pows.append((self._frob_mat @ pows[-1]) % self.p)
        return pows

    def _find_primitive(self) -> int:
        targets = [(self.order - 1) // ell
                   for ell in _prime_factors(self.order - 1)]
        for cand in range(2, self.order):
            if all(self._pow_raw(cand, t) != 1 for t in targets):
                return cand
        raise AssertionError("no primitive element found")  # unreachable

    def _build_tables(self):
        order, mn, p = self.order, self.mn, self.p
        M = order - 1
        # coordinate table for every element
        vals = np.arange(order, dtype=np.int64)
        coeffs = np.empty((order, mn), dtype=np.int16)
        rem = vals
        for i in range(mn):
            coeffs[:, i] = rem % p
            rem = rem // p
        self._coeff_t = coeffs

        # antilog chain w^0, w^1, ... by repeated doubling of the
        # multiplication-by-w^k matrix
        E = np.zeros((M, mn), dtype=np.int64)
        E[0, 0] = 1
        wmat = self._mul_matrix(self.w)
        step = wmat
        filled = 1
        while filled < M:
            take = min(filled, M - filled)
            E[filled:filled + take] = (E[:take] @ step.T) % p
            filled += take
            if filled < M:
                step = (step @ step) % p
        self._exp = (E @ self._ppow).astype(np.int64)
        log = np.zeros(order, dtype=np.int64)
        log[self._exp] = np.arange(M, dtype=np.int64)
        self._log = log

        # Zech logarithms: zech[k] = log(1 + w^k), -1 when 1 + w^k = 0
        one_plus = (((coeffs[self._exp] + coeffs[1]) % p).astype(np.int64)
                    @ self._ppow)
        zech = np.where(one_plus == 0, -1, log[one_plus])
        self._zech = zech

        neg = (((p - coeffs) % p).astype(np.int64) @ self._ppow)
        self._neg_t = neg
        inv = np.zeros(order, dtype=np.int64)
        inv[self._exp] = self._exp[(M - np.arange(M)) % M]
        self._inv_t = inv

        pfrob = np.empty((mn, order), dtype=np.int64)
        for r in range(mn):
            pr = self._frob_mat_pows[r]
            pfrob[r] = ((coeffs.astype(np.int64) @ pr.T) % p) @ self._ppow
        self._pfrob_t = pfrob

        # full pairwise addition table for small orders: one gather instead
        # of unpack-add-pack in the batch engine's hottest loop; built one
        # digit plane at a time to avoid an (order, order, mn) intermediate
        if order <= ADD_TABLE_LIMIT:
            add = np.zeros((order, order), dtype=np.int32)
            for t in range(mn):
                dt = coeffs[:, t].astype(np.int32)
                add += ((dt[:, None] + dt[None, :]) % p) * (p ** t)
            self._add_t = add

    def _mul_matrix(self, a: int) -> np.ndarray:
        # matrix of x -> a*x over F_p
        mat = np.zeros((self.mn, self.mn), dtype=np.int64)
        for j in range(self.mn):
            img = self._unpack(self._mul_raw(a, self.p ** j))
            mat[:, j] = img
        return mat

    def _self_check(self):
        # Frobenius tables/matrices must agree with literal p-th powering
        for j in range(self.mn):
            x = self.p ** j
            for r in {1 % self.mn, self.m % self.mn}:
                if self.pfrob(x, r) != self._pow_raw(x, self.p ** r):
                    raise AssertionError(
                        "frobenius table disagrees with repeated p-th powering")
        if self._exp is not None:
            if int(self._exp[0]) != 1 or int(self._exp[1]) != self.w:
                raise AssertionError("antilog table corrupt")

    # -- scalar arithmetic on packed values ----------------------------------

    def add(self, a: int, b: int) -> int:
        if a == 0:
            return b
        if b == 0:
            return a
        if self._log is None:
            return self._pack([(x + y) % self.p for x, y in
                               zip(self._unpack(a), self._unpack(b))])
        la = int(self._log[a])
        lb = int(self._log[b])
        if la > lb:
            la, lb = lb, la
        z = int(self._zech[lb - la])
        if z < 0:
            return 0
        return int(self._exp[(la + z) % (self.order - 1)])

    def neg(self, a: int) -> int:
        if self._neg_t is not None:
            return int(self._neg_t[a])
        return self._pack([(-c) % self.p for c in self._unpack(a)])

    def sub(self, a: int, b: int) -> int:
        return self.add(a, self.neg(b))

    def mul(self, a: int, b: int) -> int:
        if a == 0 or b == 0:
            return 0
        if self._log is None:
            return self._mul_raw(a, b)
        return int(self._exp[(int(self._log[a]) + int(self._log[b]))
                             % (self.order - 1)])

    def inv(self, a: int) -> int:
        if a == 0:
            raise ZeroDivisionError("inverse of zero")
        if self._inv_t is not None:
            return int(self._inv_t[a])
        return self._pow_raw(a, self.order - 2)

    def div(self, a: int, b: int) -> int:
        return self.mul(a, self.inv(b))

    def pow(self, a: int, e: int) -> int:
        if a == 0:
            if e == 0:
                return 1
            if e < 0:
                raise ZeroDivisionError("inverse of zero")
            return 0
        e %= self.order - 1
        if self._log is None:
            return self._pow_raw(a, e)
        return int(self._exp[(int(self._log[a]) * e) % (self.order - 1)])

    def pfrob(self, a: int, r: int) -> int:
        """a^(p^r)."""
        r %= self.mn
        if self._pfrob_t is not None:
            return int(self._pfrob_t[r][a])
        coeffs = np.array(self._unpack(a), dtype=np.int64)
        img = (self._frob_mat_pows[r] @ coeffs) % self.p
        return int(img @ self._ppow)

    def frob(self, a: int, i: int) -> int:
        """a^(q^i)."""
        return self.pfrob(a, (self.m * i) % self.mn)

    def dlog(self, a: int) -> int:
        if a == 0:
            raise ZeroDivisionError("discrete log of zero")
        if self._log is not None:
            return int(self._log[a])
        # only used for small fields in practice; brute force otherwise
        cur = 1
        for e in range(self.order - 1):
            if cur == a:
                return e
            cur = self.mul(cur, self.w)
        raise AssertionError("element outside multiplicative group")

    # -- vectorized arithmetic on arrays of packed values --------------------

    def _need_tables(self):
        if self._log is None:
            raise RuntimeError(
                f"field of order {self.order} exceeds TABLE_LIMIT; "
                "vectorized operations unavailable")

    def mul_arr(self, a, b):
        self._need_tables()
        out = self._exp[(self._log[a] + self._log[b]) % (self.order - 1)]
        zero = (np.asarray(a) == 0) | (np.asarray(b) == 0)
        return np.where(zero, 0, out)

    def inv_arr(self, a):
        self._need_tables()
        return np.where(np.asarray(a) == 0, 0, self._inv_t[a])

    def neg_arr(self, a):
        self._need_tables()
        return self._neg_t[a]

    def add_arr(self, a, b):
        self._need_tables()
        if self._add_t is not None:
            return self._add_t[a, b]
        s = (self._coeff_t[a] + self._coeff_t[b]) % self.p
        return s.astype(np.int64) @ self._ppow

    def sub_arr(self, a, b):
        self._need_tables()
        if self._add_t is not None:
            return self._add_t[a, self._neg_t[b]]
        s = (self._coeff_t[a] - self._coeff_t[b]) % self.p
        return s.astype(np.int64) @ self._ppow

    def pfrob_arr(self, a, r: int):
        self._need_tables()
        return self._pfrob_t[r % self.mn][a]

    def frob_arr(self, a, i: int):
        return self.pfrob_arr(a, (self.m * i) % self.mn)

    def pack_arr(self, coeffs) -> np.ndarray:
        return np.asarray(coeffs, dtype=np.int64) @ self._ppow

    def unpack_arr(self, vals) -> np.ndarray:
        self._need_tables()
        return self._coeff_t[vals]

    @property
    def has_tables(self) -> bool:
        return self._log is not None

    # -- element factories ----------------------------------------------------

    def el(self, val: int) -> "FieldElement":
        return FieldElement(self, val)

    def scalar(self, c: int) -> "FieldElement":
        """The prime-field constant c mod p, embedded."""
        return FieldElement(self, c % self.p)

    @property
    def zero(self) -> "FieldElement":
        return FieldElement(self, 0)

    @property
    def one(self) -> "FieldElement":
        return FieldElement(self, 1)

    @property
    def primitive(self) -> "FieldElement":
        return FieldElement(self, self.w)

    def __repr__(self):
        return f"FieldCtx(p={self.p}, m={self.m}, n={self.n})"

    def __eq__(self, other):
        return (isinstance(other, FieldCtx)
                and (self.p, self.m, self.n, self.modulus)
                == (other.p, other.m, other.n, other.modulus))

    def __hash__(self):
        return hash((self.p, self.m, self.n, self.modulus))

    def describe(self) -> dict:
        """Provenance block echoed into reports."""
        return {
            "p": self.p,
            "m": self.m,
            "n": self.n,
            "q": self.q,
            "order": self.order,
            "modulus": list(self.modulus),
            "primitive": self.w,
        }


class FieldElement:
    """A packed element of a FieldCtx with operator sugar.

    Integer operands in arithmetic and comparisons are interpreted as
    prime-field constants (reduced mod p), so that expressions like
    ``2 * x - 1`` mean what they do on paper.  Use ``.val`` for the packed
    integer encoding.
    """

    __slots__ = ("ctx", "val")

    def __init__(self, ctx: FieldCtx, val: int):
        if not 0 <= val < ctx.order:
            raise ValueError(f"packed value {val} out of range for {ctx!r}")
        self.ctx = ctx
        self.val = int(val)

    def _co(self, other) -> int:
        if isinstance(other, FieldElement):
            if other.ctx is not self.ctx and other.ctx != self.ctx:
                raise ValueError("elements from different fields")
            return other.val
        if isinstance(other, (int, np.integer)):
            return int(other) % self.ctx.p
        return NotImplemented

    def __add__(self, other):
        o = self._co(other)
        if o is NotImplemented:
            return NotImplemented
        return FieldElement(self.ctx, self.ctx.add(self.val, o))

    __radd__ = __add__

    def __sub__(self, other):
        o = self._co(other)
        if o is NotImplemented:
            return NotImplemented
        return FieldElement(self.ctx, self.ctx.sub(self.val, o))

    def __rsub__(self, other):
        o = self._co(other)
        if o is NotImplemented:
            return NotImplemented
        return FieldElement(self.ctx, self.ctx.sub(o, self.val))

    def __neg__(self):
        return FieldElement(self.ctx, self.ctx.neg(self.val))

    def __mul__(self, other):
        o = self._co(other)
        if o is NotImplemented:
            return NotImplemented
        return FieldElement(self.ctx, self.ctx.mul(self.val, o))

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = self._co(other)
        if o is NotImplemented:
            return NotImplemented
        return FieldElement(self.ctx, self.ctx.div(self.val, o))

    def __rtruediv__(self, other):
        o = self._co(other)
        if o is NotImplemented:
            return NotImplemented
        return FieldElement(self.ctx, self.ctx.div(o, self.val))

    def __pow__(self, e: int):
        return FieldElement(self.ctx, self.ctx.pow(self.val, e))

    def frob(self, i: int = 1) -> "FieldElement":
        """Image under the q-power Frobenius iterated i times."""
        return FieldElement(self.ctx, self.ctx.frob(self.val, i))

    def pfrob(self, r: int) -> "FieldElement":
        """Image under the p-power Frobenius iterated r times."""
        return FieldElement(self.ctx, self.ctx.pfrob(self.val, r))

    def __eq__(self, other):
        o = self._co(other)
        if o is NotImplemented:
            return NotImplemented
        return self.val == o

    def __hash__(self):
        return hash((id(self.ctx), self.val))

    def __bool__(self):
        return self.val != 0

    def __repr__(self):
        return f"Fe({self.val})"


# ---------------------------------------------------------------------------
# Module-level operations
# ---------------------------------------------------------------------------


def field_create(p: int, m: int, n: int,
                 modulus: Sequence[int] | None = None) -> FieldCtx:
    """Build the ambient field context; deterministic for fixed inputs."""
    return FieldCtx(p, m, n, modulus)


def trace_q(ctx: FieldCtx, x: FieldElement) -> FieldElement:
    """Trace from F_{q^n} down to F_q: the sum of the n conjugates x^(q^i)."""
    acc = 0
    for i in range(ctx.n):
        acc = ctx.add(acc, ctx.frob(x.val, i))
    return FieldElement(ctx, acc)


def is_in_subfield(ctx: FieldCtx, x: FieldElement, d: int) -> bool:
    """True iff x lies in F_{p^d}, i.e. x^(p^d) = x.  Requires d | mn."""
    if d < 1 or ctx.mn % d != 0:
        raise ValueError(f"d={d} does not divide mn={ctx.mn}")
    return ctx.pfrob(x.val, d % ctx.mn) == x.val


def is_square(ctx: FieldCtx, x: FieldElement) -> bool:
    """Quadratic character of a nonzero element (odd characteristic)."""
    if x.val == 0:
        raise ValueError("squareness of zero is undefined here")
    if ctx._log is not None:
        return ctx.dlog(x.val) % 2 == 0
    return ctx.pow(x.val, (ctx.order - 1) // 2) == 1


def subfield_basis(ctx: FieldCtx, d: int) -> list[FieldElement]:
    """F_p-basis of F_{p^d} inside the ambient field, for d | mn.

    Computed as a (deterministic, echelonized) kernel basis of the F_p-linear
    map x -> x^(p^d) - x.
    """
    if d < 1 or ctx.mn % d != 0:
        raise ValueError(f"d={d} does not divide mn={ctx.mn}")
    mat = (ctx._frob_mat_pows[d % ctx.mn] - np.eye(ctx.mn, dtype=np.int64)) % ctx.p
    basis = fplin.nullspace(mat, ctx.p)
    if basis.shape[0] != d:
        raise AssertionError("subfield basis has wrong size")
    return [FieldElement(ctx, int(row @ ctx._ppow)) for row in basis]


def fq_basis(ctx: FieldCtx, j: int) -> list[FieldElement]:
    """F_q-basis of the intermediate field F_{q^j}, for j | n.

    Uses powers of a multiplicative generator of F_{q^j}, which are
    independent over F_q because that generator lies in no proper subfield.
    """
    if j < 1 or ctx.n % j != 0:
        raise ValueError(f"j={j} does not divide n={ctx.n}")
    sub_order = ctx.q ** j
    zeta = ctx.pow(ctx.w, (ctx.order - 1) // (sub_order - 1))
    out = []
    cur = 1
    for _ in range(j):
        out.append(FieldElement(ctx, cur))
        cur = ctx.mul(cur, zeta)
    return out


def subfield_embedding(src: FieldCtx, dst: FieldCtx):
    """Explicit field embedding of src's ambient field into dst's.

    Returns a function mapping packed src values to packed dst values.  The
    image of src's generator X is the first root of src.modulus found along
    the cyclic subgroup of dst of order src.order - 1 (deterministic scan).
    """
    if src.p != dst.p or dst.mn % src.mn != 0:
        raise ValueError("no embedding available between these fields")
    sub = src.order - 1
    zeta = dst.pow(dst.w, (dst.order - 1) // sub)
    root = None
    cand = 1
    for _ in range(sub):
        acc = 0
        for c in reversed(src.modulus):
            acc = dst.add(dst.mul(acc, cand), c % dst.p)
        if acc == 0:
            root = cand
            break
        cand = dst.mul(cand, zeta)
    if root is None:
        raise AssertionError("modulus has no root in the target subfield")
    powers = [1]
    for _ in range(1, src.mn):
        powers.append(dst.mul(powers[-1], root))

    def embed(x: int) -> int:
        out = 0
        for i in range(src.mn):
            x, c = divmod(x, src.p)
            if c:
                out = dst.add(out, dst.mul(c, powers[i]))
        return out

    return embed
