import random
from itertools import product
from math import log2

import pytest

from algebra.coord_poly import CoordPoly
from algebra.errors import BudgetExceededError, NonUnitError, PreconditionError
from algebra.galois_ring import GaloisCtx
from algebra.primitivity import search, search_all
from analysis import compress
from analysis.compress import CompressingMap
from analysis.injectivity import (census, census_bound, classify_failure, compressed_equal, condition1_check,
                                  criterion_details, criterion_injective, gamma_decompose, oracle_injective,
                                  predict_partition)
from analysis.partition import closure_partition, relation
from analysis.sequences import SequenceFamily
from config.settings import ENUMERATION_CONFIG


def binary_maps(ring):
    for bits in product(range(2), repeat=ring.modulus):
        yield CompressingMap(ring, bits, 2)


@pytest.fixture(scope="module")
def family_strong(f_strong):
    return SequenceFamily(f_strong)


@pytest.fixture(scope="module")
def family_outside(f_outside):
    return SequenceFamily(f_outside)


@pytest.fixture(scope="module")
def family_weak(f_weak):
    return SequenceFamily(f_weak)


# ----------------------------------------------------------------------
# pairwise equality and the oracle


def test_compressed_equal(f_strong, f_weak):
    psi = compress.parse_map_spec("x2^2 + x2", f_weak.ring)
    assert compressed_equal(f_weak, psi, (13, 3), (14, 24))
    ring = f_strong.ring
    assert not compressed_equal(f_strong, compress.identity_map(ring), (1, 0), (2, 0))
    assert compressed_equal(f_strong, compress.constant_map(ring), (1, 0), (2, 0))
    with pytest.raises(PreconditionError):
        compressed_equal(f_strong, compress.identity_map(ring), (1, 0), (1, 0))


def test_closure_constancy_agrees_with_direct_comparison(f_strong, rng):
    units = list(f_strong.units())
    for _ in range(100):
        psi = CompressingMap(f_strong.ring, [rng.randrange(2) for _ in range(9)], 2)
        alpha, beta = rng.sample(units, 2)
        # raises ConsistencyError when the two computations disagree
        compressed_equal(f_strong, psi, alpha, beta)


def test_oracle_identity(f_strong, family_strong):
    verdict = oracle_injective(f_strong, compress.identity_map(f_strong.ring), family=family_strong)
    assert verdict.injective
    assert verdict.representatives == 3
    assert verdict.pairs_examined == 3 * 71


def test_oracle_constant(f_strong, family_strong):
    verdict = oracle_injective(f_strong, compress.constant_map(f_strong.ring), family=family_strong)
    assert not verdict.injective
    assert verdict.witness_alpha == [0, 1]
    assert verdict.witness_beta == [0, 2]
    assert verdict.pairs_examined == 71


def test_oracle_finds_example_collision(f_weak, family_weak):
    psi = compress.parse_map_spec("x2^2 + x2", f_weak.ring)
    verdict = oracle_injective(f_weak, psi, family=family_weak)
    assert not verdict.injective
    assert compressed_equal(f_weak, psi, tuple(verdict.witness_alpha), tuple(verdict.witness_beta))


def test_oracle_budget(f_strong):
    with pytest.raises(BudgetExceededError):
        oracle_injective(f_strong, compress.identity_map(f_strong.ring), budget=10)


def test_oracle_needs_primitive(ring_9):
    ctx = GaloisCtx.from_spec(ring_9, "1,0,1")
    with pytest.raises(PreconditionError):
        oracle_injective(ctx, compress.identity_map(ring_9))


# ----------------------------------------------------------------------
# criterion


def test_criterion_examples(f_outside):
    ring = f_outside.ring
    assert criterion_injective(f_outside, compress.modular_map(ring, 2))
    assert criterion_injective(f_outside, compress.parse_map_spec("x1", ring))

    report = criterion_details(f_outside, compress.parse_map_spec("x0", ring))
    assert not report.injective
    assert report.roots_condition and not report.coset_condition
    assert report.witness_alpha == [1, 0] and report.witness_beta == [4, 0]

    report = criterion_details(f_outside, compress.parse_map_spec("x0^2", ring))
    assert not report.roots_condition
    assert report.failing_roots == [8]
    assert report.witness_beta == [8, 0]


@pytest.mark.parametrize("spec", ["x0", "x0^2", "2*x0 + 1"])
def test_criterion_witness_collides(f_outside, spec):
    psi = compress.parse_map_spec(spec, f_outside.ring)
    report = criterion_details(f_outside, psi)
    assert not report.injective
    assert compressed_equal(f_outside, psi, tuple(report.witness_alpha), tuple(report.witness_beta))


def test_criterion_hypothesis(f_strong):
    with pytest.raises(PreconditionError) as info:
        criterion_injective(f_strong, compress.identity_map(f_strong.ring))
    assert info.value.failed == ["delta_bar^2 is not in F_p"]


def test_criterion_matches_oracle_on_binary_maps(f_outside, family_outside):
    for psi in binary_maps(f_outside.ring):
        verdict = oracle_injective(f_outside, psi, family=family_outside)
        assert criterion_injective(f_outside, psi) == verdict.injective, psi.spec()


@pytest.mark.slow
def test_criterion_matches_oracle_everywhere(rng):
    polys = list(search_all(3, 2, 2, "delta_sq_outside"))
    assert len(polys) == 8
    tables = [tuple(rng.randrange(3) for _ in range(9)) for _ in range(300)]
    for ctx in polys:
        family = SequenceFamily(ctx)
        for psi in binary_maps(ctx.ring):
            assert criterion_injective(ctx, psi) == oracle_injective(ctx, psi, family=family).injective
        for table in tables:
            psi = CompressingMap(ctx.ring, table, 3)
            assert criterion_injective(ctx, psi) == oracle_injective(ctx, psi, family=family).injective


# ----------------------------------------------------------------------
# failure classification


def test_classify_examples(f_outside, f_strong, f_weak):
    report = classify_failure(f_outside, compress.parse_map_spec("x0", f_outside.ring))
    assert report.statements == ["II", "III"]
    assert report.omega is None

    report = classify_failure(f_weak, compress.parse_map_spec("x2^2 + x2", f_weak.ring))
    assert report.statements == ["I"]
    assert report.omega == 26

    report = classify_failure(f_strong, compress.constant_map(f_strong.ring))
    assert report.statements == ["I", "II", "III"]
    assert report.omega == 8

    with pytest.raises(PreconditionError):
        classify_failure(f_strong, compress.identity_map(f_strong.ring))


@pytest.mark.parametrize("name", ["f_strong", "f_outside"])
def test_every_binary_failure_is_classified(request, name):
    ctx = request.getfixturevalue(name)
    family = SequenceFamily(ctx)
    failures = 0
    for psi in binary_maps(ctx.ring):
        verdict = oracle_injective(ctx, psi, family=family)
        if not verdict.injective:
            # raises ConsistencyError when no statement applies
            assert classify_failure(ctx, psi, verdict=verdict).statements
            failures += 1
    assert failures >= 56


def structured_table(rng, ring, shape):
    """A random binary table forced to be constant on the cosets or orbits `shape` names."""
    table = [rng.randrange(2) for _ in range(ring.modulus)]
    if shape in ("unit_cosets", "pr_cosets"):
        for a in ring.top_coset_reps():
            if ring.is_unit(a) == (shape == "unit_cosets"):
                v = rng.randrange(2)
                for x in ring.top_coset(a):
                    table[x] = v
    elif shape in ("negation", "unit_negation"):
        for a in range(ring.modulus):
            if shape == "negation" or ring.is_unit(a):
                table[-a % ring.modulus] = table[a]
    return table


WEAK_PRIMITIVE_9 = {"1,1,5", "1,2,2", "1,7,2", "1,8,5"}


def classify_all(ctx, family, tables, k):
    """Oracle every table; classify each failure. Returns the number of failures."""
    failures = 0
    for table in tables:
        psi = CompressingMap(ctx.ring, table, k)
        verdict = oracle_injective(ctx, psi, family=family)
        if not verdict.injective:
            # raises ConsistencyError when no statement applies
            assert classify_failure(ctx, psi, verdict=verdict).statements, psi.spec()
            failures += 1
    return failures


@pytest.mark.slow
def test_random_failures_are_classified(f_weak, family_weak, rng):
    failures = 0
    for ctx in search_all(3, 2, 2, "primitive"):
        tables = [[rng.randrange(2) for _ in range(9)] for _ in range(1000)]
        failures += classify_all(ctx, SequenceFamily(ctx), tables, 2)
    small = failures
    assert small >= 700

    strong = search(3, 3, 2, "strongly_primitive")
    for ctx, family in ((f_weak, family_weak), (strong, SequenceFamily(strong))):
        ring = ctx.ring
        uniform = [[rng.randrange(2) for _ in range(27)] for _ in range(300)]
        shapes = ("unit_cosets", "pr_cosets", "negation", "unit_negation")
        structured = [structured_table(rng, ring, shapes[i % 4]) for i in range(400)]
        failures += classify_all(ctx, family, uniform + structured, 2)
    assert failures - small >= 300
    assert failures >= 1000


# ----------------------------------------------------------------------
# gamma decomposition, alignment condition and predicted partitions


def test_gamma_decompose(f_strong):
    one = (1, 0)
    dec = gamma_decompose(f_strong, one, (8, 0))
    assert dec.rational and dec.ell == 2 and dec.gamma0 == 8 and dec.gamma_ell_bar is None

    dec = gamma_decompose(f_strong, one, (4, 0))
    assert dec.ell == 2 and dec.gamma0 == 4

    dec = gamma_decompose(f_strong, one, (5, 1))
    assert not dec.rational and dec.ell is None

    dec = gamma_decompose(f_strong, one, (1, 3))
    assert dec.ell == 1 and dec.gamma0 == 1 and dec.gamma_ell_bar == [0, 1]

    dec = gamma_decompose(f_strong, one, (2, 3))
    assert dec.ell == 1 and dec.gamma0 == 2 and dec.gamma_ell_bar == [0, 2]

    with pytest.raises(NonUnitError):
        gamma_decompose(f_strong, one, (3, 3))


def test_gamma_uses_the_ratio(f_strong):
    alpha = (4, 3)
    beta = f_strong.mul(alpha, (1, 3))
    dec = gamma_decompose(f_strong, alpha, beta)
    assert dec.gamma == [1, 3]
    assert dec.ell == 1


def test_condition1(f_strong, f_weak):
    report = condition1_check(f_strong, (1, 0), (5, 1))
    assert report.holds
    assert report.delta_not_in_prime_field and report.delta_sq_in_prime_field_units
    for beta in [(5, 1), (2, 1), (1, 2), (4, 7)]:
        report = condition1_check(f_weak, (13, 3), beta)
        assert not report.holds
        assert not report.delta_not_in_prime_field


def test_condition1_fails_in_odd_degree():
    ctx = search(3, 2, 3, "strongly_primitive")
    for beta in [(1, 1, 0), (2, 0, 1), (0, 1, 1), (1, 2, 2)]:
        assert not condition1_check(ctx, ctx.one, beta).holds


def test_strong_example_has_no_prediction(f_strong, f_weak):
    assert predict_partition(f_strong, (1, 0), (5, 1)) is None
    assert len(closure_partition(relation(f_strong, (1, 0), (5, 1)))) == 2
    assert predict_partition(f_weak, (13, 3), (14, 24)) is None


def test_top_coset_shift_gives_orbits(f_strong):
    predicted = predict_partition(f_strong, (1, 0), (4, 0))
    assert predicted == closure_partition(relation(f_strong, (1, 0), (4, 0)))
    assert [1, 4, 7] in predicted.classes
    assert [0] in predicted.classes


@pytest.mark.parametrize("name", ["f_strong", "f_outside"])
def test_rational_predictions(request, name):
    ctx = request.getfixturevalue(name)
    one = ctx.one
    checked = 0
    for beta in ctx.units():
        if not gamma_decompose(ctx, one, beta).rational:
            continue
        predicted = predict_partition(ctx, one, beta)
        assert predicted == closure_partition(relation(ctx, one, beta)), beta
        checked += 1
    assert checked == 18


def test_irrational_predictions(f_outside):
    one = f_outside.one
    checked = 0
    for beta in f_outside.units():
        if gamma_decompose(f_outside, one, beta).rational:
            continue
        predicted = predict_partition(f_outside, one, beta)
        assert len(predicted) == 1
        assert predicted == closure_partition(relation(f_outside, one, beta)), beta
        checked += 1
    assert checked == 54


def test_condition1_collisions_are_constant_on_pr_cosets(f_strong):
    ring = f_strong.ring
    for psi in binary_maps(ring):
        if compressed_equal(f_strong, psi, (1, 0), (5, 1)):
            for a in ring.top_coset_reps():
                if not ring.is_unit(a):
                    assert psi.is_constant_on(ring.top_coset(a))


# ----------------------------------------------------------------------
# census


def test_census_bound():
    assert census_bound(3, 2, 2) == pytest.approx(1 - 2 ** -4 - 2 ** -4 * log2(3))
    assert census_bound(3, 2, 2) == pytest.approx(0.8384, abs=1e-4)


def test_census(f_outside):
    report = census(f_outside, 2)
    assert report.total == 512
    assert report.ep == 456
    assert report.proportion == pytest.approx(0.890625)
    assert report.exceeds_bound
    assert not report.oracle_checked


def test_sampled_census_is_seeded(f_outside):
    report = census(f_outside, 2, sample=200, seed=7)
    assert report.sampled and report.seed == 7
    assert report.total == 200

    rng = random.Random(7)
    tables = [tuple(rng.randrange(2) for _ in range(9)) for _ in range(200)]
    expected = sum(criterion_injective(f_outside, CompressingMap(f_outside.ring, t, 2)) for t in tables)
    assert report.ep == expected
    assert report.proportion == pytest.approx(expected / 200)
    assert census(f_outside, 2, sample=200, seed=7, workers=2) == report

    default = census(f_outside, 2, sample=20)
    assert default.seed == ENUMERATION_CONFIG["seed"]
    with pytest.raises(PreconditionError):
        census(f_outside, 2, sample=0)
    with pytest.raises(BudgetExceededError):
        census(f_outside, 2, sample=200, budget=100)


@pytest.mark.slow
def test_census_checked_by_oracle(f_outside):
    report = census(f_outside, 2, verify_with_oracle=True)
    assert report.ep == 456 and report.oracle_checked


def test_census_preconditions(f_outside, f_strong):
    with pytest.raises(PreconditionError):
        census(f_outside, 1)
    with pytest.raises(BudgetExceededError):
        census(f_outside, 2, budget=100)
    with pytest.raises(PreconditionError):
        census(f_strong, 2)


# ----------------------------------------------------------------------
# constructions that are entropy preserving by design


def polys_in(var, p, e):
    for coeffs in product(range(p), repeat=p):
        yield CoordPoly.univariate(coeffs, var, p, e)


def valid_maps(build, *grids):
    tables = {}
    for args in product(*grids):
        try:
            psi = build(*args)
        except PreconditionError:
            continue
        tables[psi.table] = psi
    return list(tables.values())


def test_modular_maps_are_entropy_preserving(f_strong, f_weak):
    for ctx in (f_strong, f_weak):
        family = SequenceFamily(ctx)
        for M in range(2, ctx.ring.modulus):
            if M in (3, 9):
                continue
            assert oracle_injective(ctx, compress.modular_map(ctx.ring, M), family=family).injective, M


@pytest.mark.slow
def test_families_are_entropy_preserving(ring_9):
    p, e = 3, 2
    x0_polys = list(polys_in(0, p, e))
    str_maps = valid_maps(lambda f0, f1, f2: compress.family_str(ring_9, f0, f1, f2),
                          list(polys_in(1, p, e)), x0_polys, x0_polys)
    pow_maps = valid_maps(lambda f1, f2: compress.family_weak(ring_9, "pow", f2=f2, ell=2, f1=f1),
                          x0_polys, x0_polys)
    constants = [CoordPoly.constant(c, p, e) for c in range(p)]
    lin_maps = valid_maps(lambda g0, g1, f2: compress.family_weak(ring_9, "lin", f2=f2, g0=g0, g1=g1, k=0),
                          x0_polys, constants, x0_polys)
    flagged = [psi for psi in lin_maps if psi.provenance["requires_strongly_primitive"]]
    assert str_maps and pow_maps and flagged and len(flagged) < len(lin_maps)

    weak = set()
    for ctx in search_all(p, e, 2, "primitive"):
        family = SequenceFamily(ctx)
        maps = pow_maps + (str_maps if ctx.is_strongly_primitive else [])
        for psi in maps:
            assert oracle_injective(ctx, psi, family=family).injective, (ctx.format_poly(), psi.provenance)
        if not ctx.is_strongly_primitive:
            weak.add(ctx.format_poly())
        for psi in lin_maps:
            verdict = oracle_injective(ctx, psi, family=family)
            if ctx.is_strongly_primitive or not psi.provenance["requires_strongly_primitive"]:
                assert verdict.injective, (ctx.format_poly(), psi.provenance)
            else:
                assert not verdict.injective, (ctx.format_poly(), psi.provenance)
                report = classify_failure(ctx, psi, verdict=verdict)
                assert report.statements == ["I"] and report.omega == 8
    assert weak == WEAK_PRIMITIVE_9


def test_level_zero_lin_map_collides_without_strong_primitivity(ring_9, f_strong, f_outside):
    psi = compress.family_weak(ring_9, "lin", g0=CoordPoly.parse("x0^2 + x0 + 2", 3, 2),
                               f2=CoordPoly.parse("2*x0", 3, 2), k=0)
    assert psi.provenance["requires_strongly_primitive"]

    ctx = GaloisCtx.from_spec(ring_9, "1,1,5")
    assert ctx.is_primitive and not ctx.is_strongly_primitive
    eta = ctx.eta
    assert compressed_equal(ctx, psi, eta, ctx.neg(eta))
    report = classify_failure(ctx, psi)
    assert report.statements == ["I"]
    assert report.omega == 8

    for poly in sorted(WEAK_PRIMITIVE_9):
        weak = GaloisCtx.from_spec(ring_9, poly)
        # s_1 never takes the values 3 or 6, so psi cannot tell s_1 from s_-1
        assert compressed_equal(weak, psi, weak.one, weak.neg(weak.one)), poly
        assert not oracle_injective(weak, psi).injective, poly
    for strong in (f_strong, f_outside):
        assert oracle_injective(strong, psi).injective


def random_poly_in(rng, variables, p, e, terms=3):
    coeffs = {}
    for _ in range(terms):
        exps = [0] * e
        for i in variables:
            exps[i] = rng.randrange(p)
        coeffs[tuple(exps)] = rng.randrange(p)
    return CoordPoly.from_dict(coeffs, p, e)


@pytest.mark.slow
def test_families_are_entropy_preserving_sampled(f_weak, ring_27, rng):
    p, e = 3, 3
    strong = search(p, e, 2, "strongly_primitive")
    checks = [(f_weak, SequenceFamily(f_weak), False), (strong, SequenceFamily(strong), True)]
    built = 0
    while built < 60:
        f2 = random_poly_in(rng, (0, 1), p, e)
        try:
            candidates = [
                (compress.family_weak(ring_27, "pow", f2=f2, ell=2,
                                      f1=random_poly_in(rng, (0, 1), p, e)), False),
                (compress.family_weak(ring_27, "lin", f2=f2, g0=CoordPoly.parse("x1^2 + 1", p, e),
                                      g1=random_poly_in(rng, (0,), p, e)), False),
                (compress.family_str(ring_27, CoordPoly.univariate([rng.randrange(p), 1, rng.randrange(p)], 2, p, e),
                                     random_poly_in(rng, (0, 1), p, e), f2), True),
            ]
        except PreconditionError:
            continue
        for psi, needs_strong in candidates:
            for ctx, family, is_strong in checks:
                if needs_strong and not is_strong:
                    continue
                assert oracle_injective(ctx, psi, family=family).injective, psi.provenance
        built += 1
