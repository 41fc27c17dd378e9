"""
Residue ring R = Z/p^e Z.

Elements are plain ints in canonical form [0, p^e). Signed presentation is only
used when rendering text output.
"""

from dataclasses import dataclass, field
from math import gcd
from typing import List, Sequence, Tuple

from sympy import isprime, primefactors

from algebra.errors import ConsistencyError, NonUnitError, PreconditionError
from config.settings import RING_CONFIG
from utils.logger import get_logger

logger = get_logger(__name__)

RElem = int


@dataclass(frozen=True)
class RingCtx:
    p: int
    e: int
    modulus: int = field(init=False, repr=False)

    def __post_init__(self):
        failed = []
        if not isinstance(self.p, int) or self.p < 3 or not isprime(self.p):
            failed.append(f"p = {self.p} must be an odd prime")
        if not isinstance(self.e, int) or self.e < 2:
            failed.append(f"e = {self.e} must be at least 2")
        if failed:
            logger.warning(f"Rejected ring parameters: {failed}")
            raise PreconditionError(failed)

        modulus = self.p ** self.e
        if modulus > RING_CONFIG["max_modulus"]:
            logger.warning(f"p^e = {modulus} exceeds max_modulus")
            raise PreconditionError([f"p^e = {modulus} exceeds the exact-integer limit {RING_CONFIG['max_modulus']}"])
        object.__setattr__(self, "modulus", modulus)

    def __str__(self):
        return f"Z/{self.p}^{self.e}"

    def normalize(self, a: int) -> RElem:
        return a % self.modulus

    def digits(self, a: RElem) -> Tuple[int, ...]:
        """p-adic digits (a_0, ..., a_{e-1}), lowest first."""
        a = self.normalize(a)
        out = []
        for _ in range(self.e):
            a, d = divmod(a, self.p)
            out.append(d)
        return tuple(out)

    def from_digits(self, d: Sequence[int]) -> RElem:
        if len(d) != self.e:
            raise ValueError(f"expected {self.e} digits, got {len(d)}")
        value = 0
        for i, digit in enumerate(d):
            if not 0 <= digit < self.p:
                raise ValueError(f"digit {i} = {digit} is outside [0, {self.p})")
            value += digit * self.p ** i
        return value

    def is_unit(self, a: RElem) -> bool:
        return a % self.p != 0

    def units(self) -> List[RElem]:
        return [a for a in range(self.modulus) if gcd(a, self.modulus) == 1]

    def unit_group_order(self) -> int:
        return self.p ** (self.e - 1) * (self.p - 1)

    def inverse(self, a: RElem) -> RElem:
        if not self.is_unit(a):
            raise NonUnitError([f"{a} is not a unit of {self}"])
        return pow(a, -1, self.modulus)

    def valuation(self, a: RElem) -> int:
        """p-adic valuation, e for zero."""
        a = self.normalize(a)
        if a == 0:
            return self.e
        v = 0
        while a % self.p == 0:
            a //= self.p
            v += 1
        return v

    def roots_of_unity(self, m: int) -> List[RElem]:
        """All w with w^m = 1, sorted. The unit group is cyclic so there are exactly m."""
        if m < 1 or (self.p - 1) % m != 0:
            raise PreconditionError([f"m = {m} must divide p - 1 = {self.p - 1}"])
        roots = [w for w in self.units() if pow(w, m, self.modulus) == 1]
        if len(roots) != m:
            logger.error(f"{self} has {len(roots)} roots of unity of order dividing {m}")
            raise ConsistencyError(f"expected {m} roots of unity in {self}, found {len(roots)}")
        return roots

    def prime_order_roots(self) -> List[RElem]:
        """Every w != 1 with w^m = 1 for some prime m dividing p - 1, ascending."""
        roots = set()
        for m in primefactors(self.p - 1):
            roots.update(w for w in self.roots_of_unity(m) if w != 1)
        return sorted(roots)

    def top_coset(self, a: RElem) -> List[RElem]:
        """a + p^{e-1} R, sorted."""
        step = self.p ** (self.e - 1)
        base = self.normalize(a) % step
        return [base + j * step for j in range(self.p)]

    def top_coset_reps(self) -> List[RElem]:
        return list(range(self.p ** (self.e - 1)))

    def orbit(self, a: RElem, w: RElem) -> List[RElem]:
        """{a w^i : i in Z} for a unit w, sorted."""
        seen = set()
        x = self.normalize(a)
        while x not in seen:
            seen.add(x)
            x = x * w % self.modulus
        return sorted(seen)

    def negate_display(self, a: RElem) -> int:
        """Signed presentation in (-p^e/2, p^e/2]."""
        a = self.normalize(a)
        return a - self.modulus if a > self.modulus // 2 else a


if __name__ == "__main__":
    ring = RingCtx(3, 3)
    print(ring, ring.digits(13), ring.from_digits((1, 1, 1)))
    print(ring.roots_of_unity(2), ring.top_coset(0))
