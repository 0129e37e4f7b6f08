import numpy as np
import pytest

from symrank import field_create, is_in_subfield, is_square, subfield_basis, trace_q
from symrank.gf import FieldElement, fq_basis, subfield_embedding

from conftest import rand_el, rand_nonzero


# -- construction ------------------------------------------------------------


def test_create_f3_6(ctx36):
    assert (ctx36.p, ctx36.m, ctx36.n) == (3, 1, 6)
    assert ctx36.order == 729
    # deterministic lexicographically-least modulus and primitive element
    assert ctx36.modulus == (1, 0, 0, 0, 1, 1, 1)
    assert ctx36.w == 4


def test_create_rejects_wrong_degree():
    with pytest.raises(ValueError, match="degree"):
        field_create(3, 1, 6, modulus=[1, 0, 1])  # X^2 + 1


def test_create_rejects_even_characteristic():
    with pytest.raises(ValueError, match="even characteristic|odd"):
        field_create(2, 1, 6)


def test_create_rejects_composite_p():
    with pytest.raises(ValueError, match="prime"):
        field_create(9, 1, 2)


def test_create_rejects_reducible_modulus():
    # X^6 + 1 = (X^2 + 1)^3 over F_3
    with pytest.raises(ValueError, match="reducible"):
        field_create(3, 1, 6, modulus=[1, 0, 0, 0, 0, 0, 1])


def test_supplied_irreducible_modulus_roundtrip(ctx36):
    again = field_create(3, 1, 6, modulus=list(ctx36.modulus))
    assert again.modulus == ctx36.modulus and again.w == ctx36.w


def test_primitive_element_order(ctx36):
    x, count = ctx36.w, 1
    while x != 1:
        x = ctx36.mul(x, ctx36.w)
        count += 1
    assert count == ctx36.order - 1


# -- arithmetic --------------------------------------------------------------


def test_field_axioms_random(ctx36, rng):
    for _ in range(300):
        a, b, c = (rng.randrange(ctx36.order) for _ in range(3))
        assert ctx36.mul(a, ctx36.add(b, c)) == ctx36.add(ctx36.mul(a, b),
                                                          ctx36.mul(a, c))
        assert ctx36.add(a, ctx36.neg(a)) == 0
        if a:
            assert ctx36.mul(a, ctx36.inv(a)) == 1


def test_tables_agree_with_schoolbook(ctx36, rng):
    for _ in range(200):
        a, b = rng.randrange(ctx36.order), rng.randrange(ctx36.order)
        assert ctx36.mul(a, b) == ctx36._mul_raw(a, b)
        e = rng.randrange(1, 3000)
        assert ctx36.pow(a, e) == ctx36._pow_raw(a, e)


def test_frobenius_is_automorphism(ctx36, rng):
    for _ in range(200):
        a, b = rng.randrange(ctx36.order), rng.randrange(ctx36.order)
        assert ctx36.frob(ctx36.add(a, b), 1) == ctx36.add(ctx36.frob(a, 1),
                                                           ctx36.frob(b, 1))
        assert ctx36.frob(ctx36.mul(a, b), 1) == ctx36.mul(ctx36.frob(a, 1),
                                                           ctx36.frob(b, 1))
        assert ctx36.frob(a, 1) == ctx36.pow(a, 3)


def test_element_operator_sugar(ctx36):
    w = ctx36.primitive
    assert 2 * w == w + w
    assert w - w == 0
    assert (w ** 728) == 1
    assert w ** -1 == 1 / w
    assert (3 * w) == 0  # scalar embedding is mod p


def test_array_ops_match_scalar(ctx36, rng):
    a = np.array([rng.randrange(ctx36.order) for _ in range(400)])
    b = np.array([rng.randrange(ctx36.order) for _ in range(400)])
    assert all(int(v) == ctx36.mul(int(x), int(y))
               for v, x, y in zip(ctx36.mul_arr(a, b), a, b))
    assert all(int(v) == ctx36.add(int(x), int(y))
               for v, x, y in zip(ctx36.add_arr(a, b), a, b))
    assert all(int(v) == ctx36.sub(int(x), int(y))
               for v, x, y in zip(ctx36.sub_arr(a, b), a, b))
    nz = b + (b == 0)
    assert all(int(v) == ctx36.inv(int(x))
               for v, x in zip(ctx36.inv_arr(nz), nz))
    assert all(int(v) == ctx36.frob(int(x), 2)
               for v, x in zip(ctx36.frob_arr(a, 2), a))


# -- trace -------------------------------------------------------------------


def test_trace_zero_and_one(ctx36):
    assert trace_q(ctx36, ctx36.zero) == 0
    # trace of 1 is n mod p = 6 mod 3
    assert trace_q(ctx36, ctx36.one) == 0


def test_trace_of_primitive_by_conjugate_sum(ctx36):
    # independent oracle: literal sum of the six conjugates via pow
    acc = ctx36.zero
    for i in range(6):
        acc = acc + ctx36.primitive ** (3 ** i)
    assert trace_q(ctx36, ctx36.primitive) == acc
    assert acc.val == 2  # frozen from the oracle above
    assert acc.frob(1) == acc  # fixed by cubing


def test_trace_is_fq_linear_and_fq_valued(ctx36, rng):
    for _ in range(100):
        x, y = rand_el(ctx36, rng), rand_el(ctx36, rng)
        lam = ctx36.scalar(rng.randrange(3))
        t = trace_q(ctx36, x)
        assert t.frob(1) == t
        assert trace_q(ctx36, lam * x + y) == lam * trace_q(ctx36, x) + trace_q(ctx36, y)


def test_trace_fq_linear_nonprime(ctx93, rng):
    # lambda drawn from F_9 = fixed field of x -> x^(p^m)
    gamma = subfield_basis(ctx93, 2)
    for _ in range(50):
        x, y = rand_el(ctx93, rng), rand_el(ctx93, rng)
        lam = rng.randrange(3) * gamma[0] + rng.randrange(3) * gamma[1]
        t = trace_q(ctx93, x)
        assert t.frob(1) == t
        assert trace_q(ctx93, lam * x + y) == lam * t + trace_q(ctx93, y)


# -- subfields and squares ---------------------------------------------------


def test_is_in_subfield(ctx36):
    assert is_in_subfield(ctx36, ctx36.one, 1)
    assert is_in_subfield(ctx36, ctx36.one, 3)
    assert is_in_subfield(ctx36, ctx36.primitive, 6)
    # w has multiplicative order 728 > 26, so it cannot lie in F_27
    assert not is_in_subfield(ctx36, ctx36.primitive, 3)
    with pytest.raises(ValueError, match="divide"):
        is_in_subfield(ctx36, ctx36.one, 4)


def test_is_square(ctx36):
    assert is_square(ctx36, ctx36.one)
    assert not is_square(ctx36, ctx36.primitive)
    assert is_square(ctx36, ctx36.primitive ** 2)
    with pytest.raises(ValueError):
        is_square(ctx36, ctx36.zero)


def test_square_count_exhaustive(ctx36):
    squares = sum(is_square(ctx36, ctx36.el(v)) for v in range(1, ctx36.order))
    assert squares == (ctx36.order - 1) // 2


def test_subfield_basis_lengths(ctx36):
    assert [b.val for b in subfield_basis(ctx36, 1)] == [1]
    assert len(subfield_basis(ctx36, 6)) == 6
    b3 = subfield_basis(ctx36, 3)
    assert len(b3) == 3
    for b in b3:
        assert b.pfrob(3) == b
    with pytest.raises(ValueError, match="divide"):
        subfield_basis(ctx36, 5)


def test_subfield_basis_spans_closed_set(ctx36):
    # the F_p-span of the d=2 basis is the 9-element field F_9, closed
    # under multiplication
    basis = subfield_basis(ctx36, 2)
    span = set()
    for c0 in range(3):
        for c1 in range(3):
            span.add((c0 * basis[0] + c1 * basis[1]).val)
    assert len(span) == 9
    for a in span:
        for b in span:
            assert ctx36.mul(a, b) in span


def test_fq_basis_independent_and_sized(ctx93):
    from symrank import fplin
    from symrank.symforms import _el_coords
    basis = fq_basis(ctx93, 3)
    assert len(basis) == 3
    # independence over F_9: the 6 products (gamma_u * beta_t) are
    # F_3-independent
    gamma = subfield_basis(ctx93, 2)
    rows = [_el_coords(ctx93, (g * b).val) for b in basis for g in gamma]
    assert fplin.rank(np.stack(rows), 3) == 6


def test_subfield_embedding_is_homomorphism(ctx27, ctx93, rng):
    embed = subfield_embedding(ctx27, ctx93)
    for _ in range(150):
        a, b = rng.randrange(27), rng.randrange(27)
        assert embed(ctx27.mul(a, b)) == ctx93.mul(embed(a), embed(b))
        assert embed(ctx27.add(a, b)) == ctx93.add(embed(a), embed(b))
    assert embed(0) == 0 and embed(1) == 1


def test_embedding_requires_compatible_fields(ctx36, ctx27):
    with pytest.raises(ValueError, match="embedding"):
        subfield_embedding(ctx36, ctx27)


# -- element wire encoding ---------------------------------------------------


def test_packed_encoding_roundtrip(ctx36, rng):
    for _ in range(50):
        v = rng.randrange(ctx36.order)
        assert ctx36._pack(ctx36._unpack(v)) == v
    with pytest.raises(ValueError):
        FieldElement(ctx36, ctx36.order)
    with pytest.raises(ValueError):
        FieldElement(ctx36, -1)
