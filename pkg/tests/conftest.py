import random

import pytest

from symrank import build_S, build_T, field_create, min_rank


@pytest.fixture(scope="session")
def ctx36():
    return field_create(3, 1, 6)


@pytest.fixture(scope="session")
def ctx34():
    return field_create(3, 1, 4)


@pytest.fixture(scope="session")
def ctx27():
    return field_create(3, 1, 3)


@pytest.fixture(scope="session")
def ctx93():
    """F_3^6 viewed as F_{9^3}: base field F_9 (m = 2)."""
    return field_create(3, 2, 3)


@pytest.fixture(scope="session")
def ctx38():
    return field_create(3, 1, 8)


@pytest.fixture(scope="session")
def ctx310():
    return field_create(3, 1, 10)


@pytest.fixture(scope="session")
def t36(ctx36):
    return build_T(ctx36, 1, ctx36.primitive)


@pytest.fixture(scope="session")
def s64(ctx36):
    return build_S(ctx36, 4, 1)


@pytest.fixture(scope="session")
def s66(ctx36):
    return build_S(ctx36, 6, 1)


@pytest.fixture(scope="session")
def t36_full_report(t36):
    """Full enumeration of T_{6,1,w} at q=3; shared across acceptance tests."""
    return min_rank(t36, mode="full")


@pytest.fixture(scope="session")
def s64_full_report(s64):
    return min_rank(s64, mode="full")


@pytest.fixture()
def rng():
    return random.Random(20240817)


def rand_el(ctx, rng):
    return ctx.el(rng.randrange(ctx.order))


def rand_nonzero(ctx, rng):
    return ctx.el(rng.randrange(1, ctx.order))
