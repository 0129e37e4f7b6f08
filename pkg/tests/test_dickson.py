import random

import pytest

from symrank import (MINOR_FORMULAS, dickson_of, field_create, matrix_det,
                     matrix_rank, minor_closed_form, submatrix, subfield_basis)
from symrank.dickson import (dickson_from_coeffs, minor_generic,
                             run_minor_trials, twisted_coeff_vector)
from symrank.linpoly import linpoly, monomial

from conftest import rand_el


def rand_sub(ctx, rng, d, nonzero=False):
    basis = subfield_basis(ctx, d)
    while True:
        acc = ctx.zero
        for b in basis:
            acc = acc + rng.randrange(ctx.p) * b
        if acc or not nonzero:
            return acc


def rand_nonsquare(ctx, rng):
    return ctx.el(ctx.pow(ctx.w, 2 * rng.randrange((ctx.order - 1) // 2) + 1))


# -- Dickson matrix structure --------------------------------------------------


def test_dickson_of_scaling_monomial_is_diagonal(ctx36):
    c = ctx36.primitive
    mat = dickson_of(monomial(ctx36, c, 0))
    for i in range(6):
        for j in range(6):
            expect = c.frob(i).val if i == j else 0
            assert mat.entries[i][j].val == expect


def test_dickson_of_zero(ctx36):
    mat = dickson_of(linpoly(ctx36, []))
    assert all(e.val == 0 for row in mat.entries for e in row)


def test_dickson_row0_and_circulant_structure(ctx36, rng):
    f = linpoly(ctx36, [rng.randrange(729) for _ in range(6)])
    mat = dickson_of(f)
    assert [e.val for e in mat.row0()] == [c.val for c in f.coeffs]
    mat.validate()


def test_dickson_symmetric_for_self_adjoint(ctx36, rng):
    from symrank.symforms import wspace
    ws = wspace(ctx36)
    f = ws.from_coords([rng.randrange(3) for _ in range(21)])
    mat = dickson_of(f)
    for i in range(6):
        for j in range(6):
            assert mat.entries[i][j] == mat.entries[j][i]


def test_twisted_matrix_matches_display_k3(ctx36, rng):
    """The 6x6 grid for the k=3 twisted polynomial, entry by entry."""
    b0 = rand_sub(ctx36, rng, 3)
    b1 = rand_el(ctx36, rng)
    z = rand_nonsquare(ctx36, rng) * rand_sub(ctx36, rng, 3, nonzero=True)
    g = dickson_from_coeffs(ctx36, twisted_coeff_vector(ctx36, b0, b1, z))
    zero = ctx36.zero

    def fr(x, i):
        return x.frob(i)

    expected = [
        [zero, z, b1, b0, fr(b1, 4), fr(z, 5)],
        [z, zero, fr(z, 1), fr(b1, 1), fr(b0, 1), fr(b1, 5)],
        [b1, fr(z, 1), zero, fr(z, 2), fr(b1, 2), fr(b0, 2)],
        [b0, fr(b1, 1), fr(z, 2), zero, fr(z, 3), fr(b1, 3)],
        [fr(b1, 4), fr(b0, 1), fr(b1, 2), fr(z, 3), zero, fr(z, 4)],
        [fr(z, 5), fr(b1, 5), fr(b0, 2), fr(b1, 3), fr(z, 4), zero],
    ]
    for i in range(6):
        for j in range(6):
            assert g.entries[i][j] == expected[i][j], (i, j)


def test_k3_m2_submatrix_matches_display(ctx36, rng):
    b0 = rand_sub(ctx36, rng, 3)
    b1 = rand_el(ctx36, rng)
    z = rand_nonsquare(ctx36, rng) * rand_sub(ctx36, rng, 3, nonzero=True)
    g = dickson_from_coeffs(ctx36, twisted_coeff_vector(ctx36, b0, b1, z))
    sub = submatrix(g, (1, 2, 4, 5), (1, 2, 4, 5))
    zero = ctx36.zero
    expected = [
        [zero, z, b0, b1.frob(4)],
        [z, zero, b1.frob(1), b0.frob(1)],
        [b0, b1.frob(1), zero, z.frob(3)],
        [b1.frob(4), b0.frob(1), z.frob(3), zero],
    ]
    for i in range(4):
        for j in range(4):
            assert sub[i][j] == expected[i][j], (i, j)


# -- rank / determinant ---------------------------------------------------------


def test_identity_matrix_rank_det(ctx36):
    ident = [[ctx36.one if i == j else ctx36.zero for j in range(6)]
             for i in range(6)]
    assert matrix_rank(ctx36, ident) == 6
    assert matrix_det(ctx36, ident) == 1


def test_diagonal_det_is_norm(ctx36, rng):
    c = rand_el(ctx36, rng)
    mat = dickson_of(monomial(ctx36, c, 0))
    norm = ctx36.one
    for i in range(6):
        norm = norm * c.frob(i)
    assert matrix_det(ctx36, mat) == norm


def test_repeated_row_det_zero(ctx36, rng):
    rows = [[rand_el(ctx36, rng) for _ in range(4)] for _ in range(3)]
    rows.append(list(rows[0]))
    assert matrix_det(ctx36, rows) == 0
    assert matrix_rank(ctx36, rows) <= 3


def test_rank_invariant_under_row_shuffle(ctx36, rng):
    shuffler = random.Random(5)
    for _ in range(20):
        rows = [[rand_el(ctx36, rng) for _ in range(6)] for _ in range(6)]
        shuffled = list(rows)
        shuffler.shuffle(shuffled)
        assert matrix_rank(ctx36, rows) == matrix_rank(ctx36, shuffled)


def test_submatrix_selection(ctx36, rng):
    f = linpoly(ctx36, [rng.randrange(729) for _ in range(6)])
    mat = dickson_of(f)
    full = submatrix(mat, range(1, 7), range(1, 7))
    assert all(full[i][j] == mat.entries[i][j] for i in range(6) for j in range(6))
    single = submatrix(mat, (2,), (5,))
    assert single == ((mat.entries[1][4],),)
    with pytest.raises(ValueError, match="outside"):
        submatrix(mat, (0,), (1,))
    with pytest.raises(ValueError, match="outside"):
        submatrix(mat, (1,), (7,))


# -- closed-form minors ----------------------------------------------------------


def test_minor_closed_forms_vanish_at_zero(ctx36, ctx38, ctx310):
    by_k = {3: ctx36, 4: ctx38, 5: ctx310}
    for formula in MINOR_FORMULAS.values():
        ctx = by_k[formula.k]
        eta = ctx.primitive
        val = minor_closed_form(ctx, formula.name, ctx.zero, ctx.zero,
                                ctx.zero, eta)
        assert val == 0


def test_case21_closed_form_value(ctx310, rng):
    eta = rand_nonsquare(ctx310, rng)
    b2 = rand_sub(ctx310, rng, 5, nonzero=True)
    z = eta * b2
    q = 3
    val = minor_closed_form(ctx310, "K5_M2_CASE21", ctx310.zero, ctx310.zero,
                            b2, eta)
    assert val == -(z ** (1 + 2 * q ** 2 + q ** 3 + 2 * q ** 4 + q ** 6 + q ** 8))
    assert val != 0


def test_case21_rejects_nonzero_b0_b1(ctx310):
    with pytest.raises(ValueError, match="slice"):
        minor_closed_form(ctx310, "K5_M2_CASE21", ctx310.one, ctx310.zero,
                          ctx310.one, ctx310.primitive)


def test_minor_validates_k_and_subfields(ctx36, ctx38):
    with pytest.raises(ValueError, match="needs n"):
        minor_closed_form(ctx36, "K4_M1", ctx36.zero, ctx36.zero, ctx36.zero,
                          ctx36.primitive)
    with pytest.raises(ValueError, match="unknown"):
        minor_closed_form(ctx36, "K9_M1", ctx36.zero, ctx36.zero, ctx36.zero,
                          ctx36.primitive)
    # w generates F_(q^4)* inside F_(3^8), so it is not in the k-subfield
    with pytest.raises(ValueError, match="b0"):
        minor_closed_form(ctx38, "K4_M1", ctx38.primitive, ctx38.zero,
                          ctx38.zero, ctx38.primitive)


@pytest.mark.parametrize("k", [3, 4, 5])
def test_minor_agreement_smoke(k, ctx36, ctx38, ctx310):
    ctx = {3: ctx36, 4: ctx38, 5: ctx310}[k]
    results = run_minor_trials(ctx, k, 100, seed=2024)
    for name, res in results.items():
        assert res["agree"] == res["trials"], name


def test_minor_generic_matches_closed_single_case(ctx36, rng):
    eta = rand_nonsquare(ctx36, rng)
    b0 = rand_sub(ctx36, rng, 3)
    b1 = rand_el(ctx36, rng)
    b2 = rand_sub(ctx36, rng, 3)
    for name in ("K3_M1", "K3_M2"):
        assert (minor_closed_form(ctx36, name, b0, b1, b2, eta)
                == minor_generic(ctx36, name, b0, b1, b2, eta))
