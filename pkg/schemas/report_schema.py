from pydantic import BaseModel
from typing import List, Optional
from utils.logger import get_logger

logger = get_logger(__name__)


class PrimitivityReport(BaseModel):
    poly: str
    p: int
    e: int
    n: int
    reducible_mod_p: bool
    zeta_order: int = 0
    delta_bar: List[int] = []
    is_primitive: bool = False
    is_strongly_primitive: bool = False
    delta_sq_in_prime_field: bool = False
    period: Optional[int] = None

    def validate_report(self):
        q = self.p ** self.n
        full = self.zeta_order == q - 1
        delta_nonzero = any(self.delta_bar)
        delta_rational = not any(self.delta_bar[1:])
        problems = []
        if self.reducible_mod_p and (self.is_primitive or self.is_strongly_primitive):
            problems.append("reducible polynomial flagged primitive")
        if not self.reducible_mod_p:
            if self.is_primitive != (full and delta_nonzero):
                problems.append("is_primitive disagrees with zeta_order and delta_bar")
            if self.is_strongly_primitive != (full and not delta_rational):
                problems.append("is_strongly_primitive disagrees with zeta_order and delta_bar")
        if self.is_strongly_primitive and not self.is_primitive:
            problems.append("strongly primitive but not primitive")
        if problems:
            logger.error(f"Inconsistent primitivity report for {self.poly}: {problems}")
            raise ValueError("; ".join(problems))
        return self


class CountReport(BaseModel):
    p: int
    e: int
    n: int
    total: int
    primitive: int
    strongly_primitive: int
    delta_sq_outside: int
    expected_primitive: int
    expected_strongly_primitive: int
    expected_delta_sq_outside: int
    matches: bool

    def counts(self):
        return self.primitive, self.strongly_primitive, self.delta_sq_outside


class GammaDecomposition(BaseModel):
    """gamma = beta/alpha = gamma0 (1 + gamma_ell p^ell); ell and gamma0 are absent when gamma mod p is irrational."""
    gamma: List[int]
    rational: bool
    ell: Optional[int] = None
    gamma0: Optional[int] = None
    gamma_ell_bar: Optional[List[int]] = None


class Condition1Report(BaseModel):
    delta_not_in_prime_field: bool
    delta_sq_in_prime_field_units: bool
    gamma_not_in_prime_field: bool
    delta_over_gamma_in_prime_field_units: bool
    holds: bool

    def validate_report(self):
        clauses = (self.delta_not_in_prime_field, self.delta_sq_in_prime_field_units,
                   self.gamma_not_in_prime_field, self.delta_over_gamma_in_prime_field_units)
        if self.holds != all(clauses):
            raise ValueError("holds must be the conjunction of the four clauses")
        return self


class OracleVerdict(BaseModel):
    injective: bool
    witness_alpha: Optional[List[int]] = None
    witness_beta: Optional[List[int]] = None
    pairs_examined: int
    representatives: int


class CriterionReport(BaseModel):
    injective: bool
    roots_condition: bool
    coset_condition: bool
    # omega values for which every orbit {a omega^i} is constant
    failing_roots: List[int] = []
    witness_alpha: Optional[List[int]] = None
    witness_beta: Optional[List[int]] = None


class FailureReport(BaseModel):
    statements: List[str]
    omega: Optional[int] = None
    witness_alpha: Optional[List[int]] = None
    witness_beta: Optional[List[int]] = None


class CensusReport(BaseModel):
    p: int
    e: int
    poly: str
    k: int
    total: int
    ep: int
    proportion: float
    bound: float
    exceeds_bound: bool
    oracle_checked: bool = False
    sampled: bool = False
    seed: Optional[int] = None


if __name__ == "__main__":
    report = PrimitivityReport(poly="1,1,8", p=3, e=2, n=2, reducible_mod_p=False, zeta_order=8,
                               delta_bar=[2, 1], is_primitive=True, is_strongly_primitive=True,
                               delta_sq_in_prime_field=True, period=24)
    print(report.validate_report())
