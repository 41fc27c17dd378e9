"""
Primitivity classification, polynomial search and the closed-form counts.

A monic f over Z/p^e with f mod p irreducible is primitive when eta mod p generates
F_q^* and delta_bar != 0, and strongly primitive when moreover delta_bar is not in F_p.
"""

from concurrent.futures import ProcessPoolExecutor
from itertools import product
from typing import Iterator, Optional, Sequence, Tuple

from sympy import totient
from tqdm import tqdm

from algebra.errors import BudgetExceededError, ConsistencyError, PreconditionError, ReducibleModulusError
from algebra.galois_ring import GaloisCtx
from algebra.residue_ring import RingCtx
from config.settings import ENUMERATION_CONFIG
from schemas.report_schema import CountReport, PrimitivityReport
from utils.logger import get_logger

logger = get_logger(__name__)

CONSTRAINTS = ("primitive", "strongly_primitive", "delta_sq_outside")


def _delta_sq_in_prime_field(ctx: GaloisCtx) -> bool:
    return ctx.in_prime_field(ctx.field_mul(ctx.delta_bar, ctx.delta_bar))


def analyze_ctx(ctx: GaloisCtx) -> PrimitivityReport:
    delta_bar = ctx.delta_bar

    # (eta^{q-1} - 1)/p == -delta mod p
    eta_q = ctx.sub(ctx.pow(ctx.eta, ctx.q - 1), ctx.one)
    if any(c % ctx.p for c in eta_q) or \
            tuple((c // ctx.p) % ctx.p for c in eta_q) != tuple(-d % ctx.p for d in delta_bar):
        logger.error(f"(eta^(q-1) - 1)/p does not reduce to -delta_bar for {ctx}")
        raise ConsistencyError(f"eta^(q-1) check failed for {ctx.format_poly()}")

    period = None
    if ctx.is_primitive:
        period = ctx.period()
        expected = ctx.p ** (ctx.e - 1) * (ctx.q - 1)
        if period != expected:
            logger.error(f"{ctx} is primitive but eta has order {period}, expected {expected}")
            raise ConsistencyError(f"order of eta is {period}, expected {expected}")

    report = PrimitivityReport(
        poly=ctx.format_poly(),
        p=ctx.p,
        e=ctx.e,
        n=ctx.n,
        reducible_mod_p=False,
        zeta_order=ctx.zeta_order,
        delta_bar=list(delta_bar),
        is_primitive=ctx.is_primitive,
        is_strongly_primitive=ctx.is_strongly_primitive,
        delta_sq_in_prime_field=_delta_sq_in_prime_field(ctx),
        period=period,
    )
    return report.validate_report()


def analyze(ring: RingCtx, coeffs: Sequence[int]) -> PrimitivityReport:
    """
    Classify the monic polynomial with non-leading coefficients `coeffs` (lowest first).

    A polynomial that is reducible mod p gets a report with every flag false.
    """
    try:
        ctx = GaloisCtx(ring, tuple(coeffs))
    except ReducibleModulusError:
        poly = ",".join(str(ring.normalize(c)) for c in (1,) + tuple(reversed(tuple(coeffs))))
        return PrimitivityReport(poly=poly, p=ring.p, e=ring.e, n=len(coeffs), reducible_mod_p=True)
    return analyze_ctx(ctx)


def satisfies(report: PrimitivityReport, constraint: str) -> bool:
    if constraint == "primitive":
        return report.is_primitive
    if constraint == "strongly_primitive":
        return report.is_strongly_primitive
    if constraint == "delta_sq_outside":
        return report.is_primitive and not report.delta_sq_in_prime_field
    raise ValueError(f"unknown constraint {constraint!r}; expected one of {CONSTRAINTS}")


def expected_counts(p: int, e: int, n: int) -> Tuple[int, int, int]:
    """Closed forms for the number of primitive, strongly primitive and delta^2-outside polynomials."""
    q = p ** n
    phi = int(totient(q - 1))
    scale = q ** (e - 2) * phi
    third = q - p - (p - 1) * (1 + (-1) ** n) // 2
    values = []
    for factor in (q - 1, q - p, third):
        num = scale * factor
        if num % n:
            raise ConsistencyError(f"closed form {num}/{n} is not an integer")
        values.append(num // n)
    return tuple(values)


def _coeffs_at(values: Sequence[int]) -> Tuple[int, ...]:
    """Highest-first non-leading coefficients to the lowest-first storage order."""
    return tuple(reversed(tuple(values)))


def _tally_chunk(p: int, e: int, n: int, first: Sequence[int]) -> Tuple[int, int, int]:
    ring = RingCtx(p, e)
    tally = [0, 0, 0]
    for lead in first:
        for rest in product(range(ring.modulus), repeat=n - 1):
            report = analyze(ring, _coeffs_at((lead,) + rest))
            for slot, constraint in enumerate(CONSTRAINTS):
                if satisfies(report, constraint):
                    tally[slot] += 1
    return tuple(tally)


def _check_budget(what: str, required: int, budget: Optional[int]):
    budget = ENUMERATION_CONFIG["budget"] if budget is None else budget
    if required > budget:
        logger.warning(f"{what}: {required} exceeds budget {budget}")
        raise BudgetExceededError(what, required, budget)


def enumerate_counts(p: int, e: int, n: int, workers: Optional[int] = None,
                     budget: Optional[int] = None) -> CountReport:
    """Enumerate every monic degree-n polynomial over Z/p^e and tally the three classes."""
    ring = RingCtx(p, e)
    total = ring.modulus ** n
    _check_budget(f"enumerating monic degree-{n} polynomials over {ring}", total, budget)
    workers = workers or ENUMERATION_CONFIG["workers"]

    leads = list(range(ring.modulus))
    chunks = [leads[i::workers] for i in range(workers)] if workers > 1 else [[lead] for lead in leads]
    tally = [0, 0, 0]
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            futures = [pool.submit(_tally_chunk, p, e, n, chunk) for chunk in chunks]
            for future in futures:
                tally = [a + b for a, b in zip(tally, future.result())]
    else:
        for chunk in tqdm(chunks, desc=f"Counting over {ring}", disable=not ENUMERATION_CONFIG["show_progress"]):
            tally = [a + b for a, b in zip(tally, _tally_chunk(p, e, n, chunk))]

    expected = expected_counts(p, e, n)
    report = CountReport(
        p=p, e=e, n=n, total=total,
        primitive=tally[0], strongly_primitive=tally[1], delta_sq_outside=tally[2],
        expected_primitive=expected[0], expected_strongly_primitive=expected[1],
        expected_delta_sq_outside=expected[2],
        matches=tuple(tally) == expected,
    )
    logger.info(f"Counts for ({p},{e},{n}): {tuple(tally)}, closed forms {expected}")
    if not report.matches:
        logger.error(f"Enumerated counts {tuple(tally)} differ from closed forms {expected}")
        raise ConsistencyError(f"counts {tuple(tally)} != closed forms {expected} at ({p},{e},{n})")
    return report


def search_all(p: int, e: int, n: int, constraint: str, start: int = 0,
               budget: Optional[int] = None) -> Iterator[GaloisCtx]:
    """Qualifying polynomials in lexicographic order of their coefficient vectors, from index `start`."""
    if constraint not in CONSTRAINTS:
        raise ValueError(f"unknown constraint {constraint!r}; expected one of {CONSTRAINTS}")
    ring = RingCtx(p, e)
    budget = ENUMERATION_CONFIG["budget"] if budget is None else budget
    total = ring.modulus ** n
    for index in range(start, min(total, start + budget)):
        values = []
        rest = index
        for _ in range(n):
            rest, d = divmod(rest, ring.modulus)
            values.append(d)
        coeffs = tuple(values)  # lowest first, so the highest coefficient varies slowest
        report = analyze(ring, coeffs)
        if satisfies(report, constraint):
            logger.debug(f"search hit at index {index}: {report.poly}")
            yield GaloisCtx(ring, coeffs)


def search(p: int, e: int, n: int, constraint: str, start: int = 0,
           budget: Optional[int] = None) -> GaloisCtx:
    for ctx in search_all(p, e, n, constraint, start=start, budget=budget):
        logger.info(f"search({p},{e},{n},{constraint}) -> {ctx}")
        return ctx
    raise PreconditionError([f"a {constraint} polynomial exists for ({p},{e},{n}) within budget"])


if __name__ == "__main__":
    print(analyze(RingCtx(3, 2), (8, 1)))
    print(enumerate_counts(3, 2, 2))
