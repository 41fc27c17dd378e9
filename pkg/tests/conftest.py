import random

import pytest

from algebra.galois_ring import GaloisCtx
from algebra.primitivity import search
from algebra.residue_ring import RingCtx
from config.settings import ENUMERATION_CONFIG


@pytest.fixture(scope="session")
def ring_9():
    return RingCtx(3, 2)


@pytest.fixture(scope="session")
def ring_27():
    return RingCtx(3, 3)


@pytest.fixture(scope="session")
def f_weak(ring_27):
    """x^2 - x - 4 over Z/27: primitive, not strongly primitive."""
    return GaloisCtx.from_spec(ring_27, "1,-1,-4")


@pytest.fixture(scope="session")
def f_strong(ring_9):
    """x^2 + x - 1 over Z/9: strongly primitive with delta_bar^2 in F_3."""
    return GaloisCtx.from_spec(ring_9, "1,1,-1")


@pytest.fixture(scope="session")
def f_outside():
    """First polynomial over Z/9 whose delta_bar^2 lies outside F_3."""
    return search(3, 2, 2, "delta_sq_outside")


@pytest.fixture
def rng():
    return random.Random(ENUMERATION_CONFIG["seed"])
