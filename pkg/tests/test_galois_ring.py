import numpy as np
import pytest

from algebra.errors import NonUnitError, PreconditionError, ReducibleModulusError
from algebra.galois_ring import GaloisCtx, orbit_of, parse_elem_spec, parse_poly_spec
from algebra.residue_ring import RingCtx


def companion_trace(ctx, z):
    """Trace of multiplication by z computed from powers of the companion matrix."""
    n, m = ctx.n, ctx.ring.modulus
    companion = np.zeros((n, n), dtype=np.int64)
    for i in range(n - 1):
        companion[i + 1, i] = 1
    companion[:, n - 1] = [-c % m for c in ctx.coeffs]
    power = np.eye(n, dtype=np.int64)
    total = np.zeros((n, n), dtype=np.int64)
    for c in z:
        total = (total + c * power) % m
        power = power.dot(companion) % m
    return int(np.trace(total)) % m


@pytest.fixture(scope="module")
def f_teich(ring_9):
    """x^2 + 1 over Z/9: eta^4 = 1, so delta_bar = 0."""
    return GaloisCtx.from_spec(ring_9, "1,0,1")


@pytest.fixture(scope="module")
def f_cubic(ring_9):
    return GaloisCtx.from_spec(ring_9, "1,0,2,1")


@pytest.fixture(scope="module")
def f_quint():
    return GaloisCtx.from_spec(RingCtx(5, 2), "1,0,2")


def test_parse_poly_spec(ring_9, ring_27):
    assert parse_poly_spec("1,1,-1", ring_9) == (8, 1)
    assert parse_poly_spec("1, -1, -4", ring_27) == (23, 26)
    assert parse_poly_spec("1,0,2,1", ring_9) == (1, 2, 0)


@pytest.mark.parametrize("text", ["2,1,1", "1,2", "1,a,2", ""])
def test_parse_poly_spec_rejects(ring_9, text):
    with pytest.raises(ValueError):
        parse_poly_spec(text, ring_9)


def test_parse_elem_spec(ring_27):
    assert parse_elem_spec("13,3", 2, ring_27) == (13, 3)
    assert parse_elem_spec("5", 2, ring_27) == (5, 0)
    assert parse_elem_spec("-1,0", 2, ring_27) == (26, 0)
    with pytest.raises(ValueError):
        parse_elem_spec("1,2,3", 2, ring_27)
    with pytest.raises(ValueError):
        parse_elem_spec("", 2, ring_27)


def test_reducible_modulus(ring_9):
    with pytest.raises(ReducibleModulusError):
        GaloisCtx.from_spec(ring_9, "1,0,-1")


def test_formatting(f_strong, f_weak):
    assert f_strong.format_poly() == "1,1,8"
    assert f_weak.format_poly() == "1,26,23"
    assert str(f_strong) == "x^2 + x - 1 over Z/3^2"
    assert GaloisCtx.from_spec(f_strong.ring, f_strong.format_poly()) == f_strong


def test_arithmetic(f_strong):
    eta = f_strong.eta
    assert f_strong.mul(eta, eta) == (1, 8)
    assert f_strong.add(eta, (5, 1)) == (5, 2)
    assert f_strong.inv(eta) == (1, 1)
    assert f_strong.pow(eta, -1) == (1, 1)
    assert f_strong.ring_arith("mul", eta, eta) == (1, 8)
    assert f_strong.ring_arith("inv", eta) == (1, 1)
    with pytest.raises(ValueError):
        f_strong.ring_arith("div", eta, eta)


def test_inverse_of_non_unit(f_strong):
    with pytest.raises(NonUnitError):
        f_strong.inv((3, 0))
    with pytest.raises(NonUnitError):
        f_strong.field_inv(f_strong.field_zero())


def test_inverses_of_all_units(f_strong):
    units = list(f_strong.units())
    assert len(units) == f_strong.unit_group_order == 72
    for z in units:
        assert f_strong.mul(z, f_strong.inv(z)) == f_strong.one


def test_reduce_mod_p(f_strong, f_weak):
    assert f_weak.reduce_mod_p((13, 3)) == (1, 0)
    assert f_strong.reduce_mod_p((5, 1)) == (2, 1)


def test_trace_values(f_strong, f_weak):
    assert f_strong.trace(f_strong.one) == 2
    assert f_strong.trace(f_strong.eta) == 8
    assert f_weak.trace((13, 3)) == 2


@pytest.mark.parametrize("name", ["f_strong", "f_weak", "f_cubic", "f_quint"])
def test_trace_matches_companion_matrix(request, rng, name):
    ctx = request.getfixturevalue(name)
    m = ctx.ring.modulus
    for _ in range(50):
        z = tuple(rng.randrange(m) for _ in range(ctx.n))
        assert ctx.trace(z) == companion_trace(ctx, z)


def test_trace_is_linear_and_onto(f_strong, rng):
    ctx = f_strong
    for _ in range(50):
        a, b = rng.randrange(9), rng.randrange(9)
        z = (rng.randrange(9), rng.randrange(9))
        w = (rng.randrange(9), rng.randrange(9))
        lhs = ctx.trace(ctx.add(ctx.scale(a, z), ctx.scale(b, w)))
        assert lhs == (a * ctx.trace(z) + b * ctx.trace(w)) % 9
    assert {ctx.trace((x, y)) for x in range(9) for y in range(9)} == set(range(9))


def test_periods(f_strong, f_weak, f_teich):
    assert f_strong.period() == 24
    assert f_weak.period() == 72
    assert f_teich.period() == 4
    assert f_strong.zeta_order == 8
    assert f_strong.element_order(f_strong.eta) == 24


def test_teichmueller_polynomial(f_teich):
    assert f_teich.zeta == f_teich.eta
    assert f_teich.u == f_teich.one
    assert f_teich.delta_bar == (0, 0)
    assert not f_teich.is_primitive
    assert not f_teich.is_strongly_primitive


def test_example_decompositions(f_strong, f_weak):
    assert [c % 9 for c in f_weak.u] == [7, 0]
    assert f_weak.delta_bar == (2, 0)
    assert f_weak.is_primitive and not f_weak.is_strongly_primitive
    assert f_strong.delta_bar == (2, 1)
    assert f_strong.field_mul(f_strong.delta_bar, f_strong.delta_bar) == (2, 0)
    assert f_strong.is_strongly_primitive


@pytest.mark.parametrize("name", ["f_strong", "f_weak", "f_outside", "f_cubic"])
def test_decomposition_invariants(request, name):
    ctx = request.getfixturevalue(name)
    zeta, u, _ = ctx.decompose()
    assert ctx.mul(zeta, u) == ctx.eta
    assert ctx.pow(zeta, ctx.q - 1) == ctx.one
    assert ctx.pow(u, ctx.p ** (ctx.e - 1)) == ctx.one
    assert ctx.reduce_mod_p(zeta) == ctx.eta_bar
    assert ctx.reduce_mod_p(u) == ctx.field_one()


@pytest.mark.parametrize("name", ["f_weak", "f_strong", "f_outside"])
def test_unipotent_powers(request, name):
    ctx = request.getfixturevalue(name)
    for i in range(1, ctx.e):
        for j in range(ctx.p ** 2):
            assert ctx.fact1_holds(i, j)


def test_unipotent_powers_level_range(f_weak):
    with pytest.raises(ValueError):
        f_weak.fact1_holds(3, 1)


@pytest.mark.parametrize("name", ["f_strong", "f_quint", "f_cubic"])
def test_trace_shift_sets(request, name):
    ctx = request.getfixturevalue(name)
    for gamma in ctx.field_elements():
        if not any(gamma):
            continue
        for a in range(ctx.p):
            # raises on disagreement with the closed form
            found = ctx.trace_shift_set(gamma, a)
            assert found


def test_trace_shift_set_cases(f_strong, f_cubic):
    assert f_strong.trace_shift_set((2, 0), 1) == {2}
    assert f_strong.trace_shift_set((0, 1), 0) == {1, 2}
    assert f_strong.trace_shift_set((0, 1), 1) == {0, 1, 2}
    assert f_cubic.trace_shift_set((0, 1, 0), 0) == {0, 1, 2}


def test_lift_to_eta(f_strong):
    assert f_strong.lift_in_orbit(f_strong.one, 8, (0, 1)) == f_strong.eta


def test_lift_hits_every_admissible_target(f_weak):
    alpha = (13, 3)
    orbit = set(orbit_of(f_weak, alpha))
    assert len(orbit) == 72
    lifted = 0
    for a in range(27):
        for nu in f_weak.field_elements():
            if not any(nu) or f_weak.field_trace(nu) != a % 3:
                continue
            if f_weak.field_trace(f_weak.field_mul(f_weak.delta_bar, nu)) == 0:
                continue
            z = f_weak.lift_in_orbit(alpha, a, nu)
            assert z in orbit
            assert f_weak.trace(z) == a
            assert f_weak.reduce_mod_p(z) == nu
            lifted += 1
    assert lifted == 54


def test_lift_preconditions(f_strong, f_teich):
    with pytest.raises(PreconditionError) as info:
        f_strong.lift_in_orbit(f_strong.one, 0, (0, 1))
    assert info.value.failed == ["tr(nu) = a mod p"]
    with pytest.raises(PreconditionError) as info:
        f_teich.lift_in_orbit(f_teich.one, 2, (1, 0))
    assert "f is primitive" in info.value.failed
