"""
Entropy preservation of compressing maps on the sequence family G.

A map psi is entropy preserving when s_alpha -> psi(s_alpha) is injective on
unit parameters alpha. This module decides it three ways: by brute force over
the family (the oracle), by the value-level criterion for polynomials whose
delta_bar^2 is not in F_p, and per pair via the equivalence closure of the
value-pair relation.
"""

import random
from concurrent.futures import ProcessPoolExecutor
from math import log2
from typing import List, Optional, Tuple

import numpy as np
from tqdm import tqdm

from algebra.errors import BudgetExceededError, ConsistencyError, NonUnitError, PreconditionError
from algebra.galois_ring import GaloisCtx, OElem
from analysis.compress import CompressingMap, apply
from analysis.partition import DisjointSet, Partition, check_pair, closure_partition, relation
from analysis.sequences import SequenceFamily, trace_sequence
from config.settings import ENUMERATION_CONFIG
from schemas.report_schema import (CensusReport, Condition1Report, CriterionReport, FailureReport,
                                   GammaDecomposition, OracleVerdict)
from utils.logger import get_logger

logger = get_logger(__name__)


def _budget(budget: Optional[int]) -> int:
    return ENUMERATION_CONFIG["budget"] if budget is None else budget


def _require_primitive(ctx: GaloisCtx):
    if not ctx.is_primitive:
        raise PreconditionError([f"f = {ctx.format_poly()} is primitive"])


def _require_same_ring(ctx: GaloisCtx, psi: CompressingMap):
    if psi.ring != ctx.ring:
        raise PreconditionError([f"map ring {psi.ring} matches {ctx.ring}"])


def delta_sq_in_prime_field(ctx: GaloisCtx) -> bool:
    return ctx.in_prime_field(ctx.field_mul(ctx.delta_bar, ctx.delta_bar))


def nontrivial_prime_roots(ctx: GaloisCtx) -> List[int]:
    return ctx.ring.prime_order_roots()


# ----------------------------------------------------------------------
# pairwise equality


def compressed_equal(ctx: GaloisCtx, psi: CompressingMap, alpha: OElem, beta: OElem) -> bool:
    """
    Whether psi(s_alpha) = psi(s_beta).

    Computed as constancy of psi on the closure classes of the level-e relation and
    by comparing the compressed sequences directly; the two must agree.
    """
    _require_same_ring(ctx, psi)
    check_pair(ctx, alpha, beta)
    if tuple(alpha) == tuple(beta):
        raise PreconditionError(["alpha != beta"])
    by_classes = closure_partition(relation(ctx, alpha, beta, ctx.e)).is_constant(psi.table)
    direct = apply(psi, trace_sequence(ctx, alpha)) == apply(psi, trace_sequence(ctx, beta))
    if by_classes != direct:
        logger.error(f"closure constancy {by_classes} != direct comparison {direct} for alpha={alpha}, beta={beta}")
        raise ConsistencyError("closure classes and compressed sequences disagree")
    return direct


# ----------------------------------------------------------------------
# brute-force oracle


def oracle_injective(ctx: GaloisCtx, psi: CompressingMap, family: Optional[SequenceFamily] = None,
                     budget: Optional[int] = None) -> OracleVerdict:
    """
    Compare each coset representative of <eta> in O^* against every unit.

    Compressing commutes with shifts and s_{alpha eta^t} is a shift of s_alpha, so a
    colliding pair can always be moved to one whose first entry is a representative.

    Returns the first colliding pair in representative order, or injective=True.
    """
    _require_primitive(ctx)
    _require_same_ring(ctx, psi)
    family = family or SequenceFamily(ctx)
    reps = family.representatives
    required = len(reps) * (len(family.units) - 1)
    if required > _budget(budget):
        raise BudgetExceededError("oracle pair comparisons", required, _budget(budget))

    compressed = np.asarray(psi.table, dtype=np.int64)[family.matrix.astype(np.int64)]
    examined = 0
    for alpha in reps:
        r = family.index[alpha]
        equal = np.all(compressed == compressed[r], axis=1)
        equal[r] = False
        examined += len(family.units) - 1
        hits = np.flatnonzero(equal)
        if hits.size:
            beta = family.units[int(hits[0])]
            logger.debug(f"oracle witness: alpha={alpha}, beta={beta}")
            return OracleVerdict(injective=False, witness_alpha=list(alpha), witness_beta=list(beta),
                                 pairs_examined=examined, representatives=len(reps))
    return OracleVerdict(injective=True, pairs_examined=examined, representatives=len(reps))


# ----------------------------------------------------------------------
# value-level criterion


def _roots_condition(ctx: GaloisCtx, table, omegas: List[int]) -> List[int]:
    """Roots omega for which every orbit {a omega^i} is constant."""
    ring = ctx.ring
    failing = []
    for w in omegas:
        if all(len({table[x] for x in ring.orbit(a, w)}) == 1 for a in range(ring.modulus)):
            failing.append(w)
    return failing


def _cosets_constant(ctx: GaloisCtx, table, units: bool) -> bool:
    ring = ctx.ring
    for a in ring.top_coset_reps():
        if ring.is_unit(a) != units:
            continue
        if len({table[x] for x in ring.top_coset(a)}) > 1:
            return False
    return True


def _require_criterion_hypothesis(ctx: GaloisCtx):
    failed = []
    if not ctx.is_primitive:
        failed.append(f"f = {ctx.format_poly()} is primitive")
    elif delta_sq_in_prime_field(ctx):
        failed.append("delta_bar^2 is not in F_p")
    if failed:
        raise PreconditionError(failed)


def _criterion(ctx: GaloisCtx, table, omegas: List[int]) -> Tuple[List[int], bool]:
    return _roots_condition(ctx, table, omegas), not _cosets_constant(ctx, table, units=True)


def criterion_details(ctx: GaloisCtx, psi: CompressingMap) -> CriterionReport:
    """
    Decide entropy preservation when f is primitive and delta_bar^2 is not in F_p.

    psi is entropy preserving iff (i) for every nontrivial root of unity omega of
    prime order dividing p - 1 some orbit {a omega^i} is not constant, and (ii) some
    top coset a + p^{e-1} R of a unit a is not constant. When a condition fails the
    report carries the colliding pair (1, omega) or (1, 1 + p^{e-1}).
    """
    _require_criterion_hypothesis(ctx)
    _require_same_ring(ctx, psi)
    failing, coset_ok = _criterion(ctx, psi.table, nontrivial_prime_roots(ctx))
    report = CriterionReport(injective=not failing and coset_ok, roots_condition=not failing,
                             coset_condition=coset_ok, failing_roots=failing)
    if failing:
        report.witness_alpha = list(ctx.one)
        report.witness_beta = list(ctx.scalar(failing[0]))
    elif not coset_ok:
        report.witness_alpha = list(ctx.one)
        report.witness_beta = list(ctx.scalar(1 + ctx.p ** (ctx.e - 1)))
    return report


def criterion_injective(ctx: GaloisCtx, psi: CompressingMap) -> bool:
    return criterion_details(ctx, psi).injective


# ----------------------------------------------------------------------
# failure classification


def classify_failure(ctx: GaloisCtx, psi: CompressingMap, verdict: Optional[OracleVerdict] = None,
                     family: Optional[SequenceFamily] = None) -> FailureReport:
    """
    Which of the three failure shapes a non-injective map has.

    I: psi constant on {a omega^i} for some nontrivial omega of prime order dividing
       p - 1 and every a in R (strongly primitive f) or every unit a (otherwise).
    II: psi constant on a + p^{e-1} R for every unit a.
    III: psi constant on a + p^{e-1} R for every a in pR.
    """
    _require_primitive(ctx)
    verdict = verdict or oracle_injective(ctx, psi, family=family)
    if verdict.injective:
        raise PreconditionError(["map is not entropy preserving"])

    ring = ctx.ring
    table = psi.table
    domain = range(ring.modulus) if ctx.is_strongly_primitive else ring.units()
    statements = []
    omega = None
    for w in nontrivial_prime_roots(ctx):
        if all(len({table[x] for x in ring.orbit(a, w)}) == 1 for a in domain):
            omega = w
            statements.append("I")
            break
    if _cosets_constant(ctx, table, units=True):
        statements.append("II")
    if _cosets_constant(ctx, table, units=False):
        statements.append("III")
    if not statements:
        logger.error(f"non-injective map on {ctx} matches none of I, II, III: {psi.spec()}")
        raise ConsistencyError("failure matches none of the three statements")
    return FailureReport(statements=statements, omega=omega, witness_alpha=verdict.witness_alpha,
                         witness_beta=verdict.witness_beta)


# ----------------------------------------------------------------------
# gamma = beta / alpha


def gamma_decompose(ctx: GaloisCtx, alpha: OElem, beta: OElem) -> GammaDecomposition:
    ring = ctx.ring
    if not ctx.is_unit(beta):
        raise NonUnitError([f"beta = {beta} is a unit"])
    gamma = ctx.mul(beta, ctx.inv(alpha))
    ell = min(ring.valuation(c) for c in gamma[1:])
    if ell == 0:
        return GammaDecomposition(gamma=list(gamma), rational=False)

    m = ctx.p ** ell
    gamma0 = gamma[0] % m
    gamma_ell_bar = None
    if ell < ctx.e:
        ratio = ctx.sub(ctx.scale(ring.inverse(gamma0), gamma), ctx.one)
        if any(c % m for c in ratio):
            raise ConsistencyError(f"gamma/gamma0 - 1 is not divisible by p^{ell}")
        gamma_ell_bar = [(c // m) % ctx.p for c in ratio]
        if ctx.in_prime_field(tuple(gamma_ell_bar)):
            logger.error(f"gamma_ell_bar {gamma_ell_bar} lies in F_p for gamma={gamma}")
            raise ConsistencyError("gamma_ell_bar must lie outside F_p")
    return GammaDecomposition(gamma=list(gamma), rational=True, ell=ell, gamma0=gamma0,
                              gamma_ell_bar=gamma_ell_bar)


def condition1_check(ctx: GaloisCtx, alpha: OElem, beta: OElem) -> Condition1Report:
    """delta_bar not in F_p, delta_bar^2 in F_p^*, gamma_bar not in F_p, delta_bar/gamma_bar in F_p^*."""
    check_pair(ctx, alpha, beta)
    d = ctx.delta_bar
    d2 = ctx.field_mul(d, d)
    gamma_bar = ctx.field_mul(ctx.reduce_mod_p(beta), ctx.field_inv(ctx.reduce_mod_p(alpha)))
    ratio = ctx.field_mul(d, ctx.field_inv(gamma_bar))
    clauses = (
        not ctx.in_prime_field(d),
        ctx.in_prime_field(d2) and any(d2),
        not ctx.in_prime_field(gamma_bar),
        ctx.in_prime_field(ratio) and any(ratio),
    )
    return Condition1Report(
        delta_not_in_prime_field=clauses[0],
        delta_sq_in_prime_field_units=clauses[1],
        gamma_not_in_prime_field=clauses[2],
        delta_over_gamma_in_prime_field_units=clauses[3],
        holds=all(clauses),
    ).validate_report()


def predict_partition(ctx: GaloisCtx, alpha: OElem, beta: OElem) -> Optional[Partition]:
    """
    Closed-form closure classes for a strongly primitive f, or None when there is none.

    Rational gamma: the classes are {a gamma0^i} + p^ell R. Irrational gamma where
    condition1_check fails: R is a single class. When it holds the full partition
    is not determined and None is returned.
    """
    check_pair(ctx, alpha, beta)
    if not ctx.is_strongly_primitive:
        logger.info(f"no prediction: {ctx.format_poly()} is not strongly primitive")
        return None
    ring = ctx.ring
    dec = gamma_decompose(ctx, alpha, beta)
    if dec.rational:
        ds = DisjointSet(ring.modulus)
        step = ctx.p ** dec.ell
        for a in range(ring.modulus):
            ds.merge(a, a * dec.gamma0 % ring.modulus)
            if dec.ell < ctx.e:
                ds.merge(a, (a + step) % ring.modulus)
        return Partition(ring.modulus, ds.groups())
    if condition1_check(ctx, alpha, beta).holds:
        logger.info("no prediction: delta/gamma alignment condition holds")
        return None
    return Partition(ring.modulus, [list(range(ring.modulus))])


# ----------------------------------------------------------------------
# census over all maps R -> {0, ..., k-1}


def census_bound(p: int, e: int, k: int) -> float:
    """1 - k^{-(p-1)^2 p^{e-2}} - k^{(1-p^e)/2} log2 p."""
    return 1 - k ** (-((p - 1) ** 2) * p ** (e - 2)) - k ** ((1 - p ** e) / 2) * log2(p)


def _table_at(index: int, k: int, size: int) -> Tuple[int, ...]:
    out = []
    for _ in range(size):
        index, d = divmod(index, k)
        out.append(d)
    return tuple(out)


def _census_chunk(ctx: GaloisCtx, k: int, start: int, stop: int, verify: bool,
                  tables: Optional[List[Tuple[int, ...]]] = None) -> Tuple[int, int]:
    omegas = nontrivial_prime_roots(ctx)
    family = SequenceFamily(ctx) if verify else None
    ep = 0
    disagreements = 0
    if tables is None:
        tables = (_table_at(index, k, ctx.ring.modulus) for index in range(start, stop))
    for table in tables:
        failing, coset_ok = _criterion(ctx, table, omegas)
        injective = not failing and coset_ok
        ep += injective
        if verify:
            verdict = oracle_injective(ctx, CompressingMap(ctx.ring, table, k), family=family, budget=float("inf"))
            if verdict.injective != injective:
                logger.error(f"criterion {injective} != oracle {verdict.injective} for table {table}")
                disagreements += 1
    return ep, disagreements


def census(ctx: GaloisCtx, k: int, workers: Optional[int] = None, budget: Optional[int] = None,
           verify_with_oracle: bool = False, sample: Optional[int] = None,
           seed: Optional[int] = None) -> CensusReport:
    """
    Count the entropy-preserving maps R -> {0, ..., k-1} with the criterion.

    Args:
        ctx: a primitive f with delta_bar^2 outside F_p
        k: alphabet size, at least 2
        workers: worker processes, ENUMERATION_CONFIG["workers"] when omitted
        budget: cap on the number of maps decided
        verify_with_oracle: re-decide every map by brute force
        sample: decide this many uniformly random maps instead of all k^(p^e)
        seed: seed for the sample, ENUMERATION_CONFIG["seed"] when omitted

    Returns:
        CensusReport. An exhaustive census raises ConsistencyError when the
        proportion does not exceed the lower bound; a sampled one only reports it.
    """
    _require_criterion_hypothesis(ctx)
    if k < 2:
        raise PreconditionError([f"alphabet size k = {k} >= 2"])
    if sample is not None and sample < 1:
        raise PreconditionError([f"sample size {sample} >= 1"])
    total = k ** ctx.ring.modulus if sample is None else sample
    if total > _budget(budget):
        raise BudgetExceededError(f"census of maps into {k} labels", total, _budget(budget))
    workers = workers or ENUMERATION_CONFIG["workers"]

    tables = None
    if sample is not None:
        seed = ENUMERATION_CONFIG["seed"] if seed is None else seed
        rng = random.Random(seed)
        tables = [tuple(rng.randrange(k) for _ in range(ctx.ring.modulus)) for _ in range(sample)]
        logger.info(f"census sample of {sample} maps, seed {seed}")

    n_chunks = max(workers, 1) * 4
    bounds = [total * i // n_chunks for i in range(n_chunks + 1)]
    chunks = [(bounds[i], bounds[i + 1]) for i in range(n_chunks) if bounds[i] < bounds[i + 1]]

    def chunk_args(a, b):
        return ctx, k, a, b, verify_with_oracle, None if tables is None else tables[a:b]

    results = []
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            futures = [pool.submit(_census_chunk, *chunk_args(a, b)) for a, b in chunks]
            results = [f.result() for f in futures]
    else:
        for a, b in tqdm(chunks, desc="Census", disable=not ENUMERATION_CONFIG["show_progress"]):
            results.append(_census_chunk(*chunk_args(a, b)))

    ep = sum(r[0] for r in results)
    disagreements = sum(r[1] for r in results)
    if disagreements:
        raise ConsistencyError(f"criterion and oracle disagree on {disagreements} maps")

    proportion = ep / total
    bound = census_bound(ctx.p, ctx.e, k)
    report = CensusReport(p=ctx.p, e=ctx.e, poly=ctx.format_poly(), k=k, total=total, ep=ep,
                          proportion=proportion, bound=bound, exceeds_bound=proportion > bound,
                          oracle_checked=verify_with_oracle, sampled=sample is not None,
                          seed=seed if sample is not None else None)
    logger.info(f"census on {ctx}, k={k}: {ep}/{total} entropy preserving, bound {bound:.6f}")
    if not report.exceeds_bound and sample is None:
        logger.error(f"proportion {proportion} does not exceed the lower bound {bound}")
        raise ConsistencyError(f"proportion {proportion} <= bound {bound}")
    return report
