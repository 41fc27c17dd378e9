"""
Galois ring O = R[x]/(f) over R = Z/p^e Z, and its residue field F_q = F_p[x]/(f mod p).

Elements of O (OElem) and of F_q (FqElem) are tuples of length n holding the
coordinates in the basis 1, eta, ..., eta^{n-1}, lowest power first. eta is the
class of x. The trace is the trace of the multiplication-by-z matrix in that
basis, which for an unramified extension coincides with the Galois trace.
"""

from dataclasses import dataclass
from functools import cached_property
from itertools import product
from typing import Iterator, List, Optional, Sequence, Set, Tuple

from sympy import factorint, primefactors
from sympy.polys.domains import ZZ
from sympy.polys.galoistools import gf_irreducible_p

from algebra.errors import ConsistencyError, NonUnitError, PreconditionError, ReducibleModulusError
from algebra.residue_ring import RElem, RingCtx
from utils.logger import get_logger

logger = get_logger(__name__)

OElem = Tuple[int, ...]
FqElem = Tuple[int, ...]


class QuotientRing:
    """Arithmetic in (Z/mZ)[x]/(x^n + c_{n-1} x^{n-1} + ... + c_0)."""

    def __init__(self, modulus: int, coeffs: Sequence[int]):
        self.modulus = modulus
        self.coeffs = tuple(c % modulus for c in coeffs)
        self.n = len(self.coeffs)

    def zero(self) -> Tuple[int, ...]:
        return (0,) * self.n

    def one(self) -> Tuple[int, ...]:
        return (1 % self.modulus,) + (0,) * (self.n - 1)

    def scalar(self, c: int) -> Tuple[int, ...]:
        return (c % self.modulus,) + (0,) * (self.n - 1)

    def add(self, a, b):
        return tuple((x + y) % self.modulus for x, y in zip(a, b))

    def sub(self, a, b):
        return tuple((x - y) % self.modulus for x, y in zip(a, b))

    def neg(self, a):
        return tuple(-x % self.modulus for x in a)

    def scale(self, c: int, a):
        return tuple(c * x % self.modulus for x in a)

    def mul(self, a, b):
        n, m = self.n, self.modulus
        prod = [0] * (2 * n - 1)
        for i, x in enumerate(a):
            if x:
                for j, y in enumerate(b):
                    prod[i + j] += x * y
        # x^n = -(c_0 + c_1 x + ... + c_{n-1} x^{n-1})
        for k in range(2 * n - 2, n - 1, -1):
            c = prod[k] % m
            if c:
                for i, fi in enumerate(self.coeffs):
                    prod[k - n + i] -= c * fi
        return tuple(v % m for v in prod[:n])

    def pow(self, a, k: int):
        if k < 0:
            raise ValueError("negative exponent; invert first")
        result = self.one()
        base = tuple(a)
        while k:
            if k & 1:
                result = self.mul(result, base)
            base = self.mul(base, base)
            k >>= 1
        return result


def parse_poly_spec(text: str, ring: RingCtx) -> Tuple[int, ...]:
    """
    Parse the shared polynomial text format.

    "1,1,-1" is x^2 + x - 1: comma separated integer coefficients, highest degree
    first, leading coefficient 1. Returns the non-leading coefficients lowest first,
    normalized mod p^e.
    """
    try:
        values = [int(tok.strip()) for tok in text.split(",") if tok.strip() != ""]
    except ValueError:
        raise ValueError(f"polynomial spec must be comma separated integers, got {text!r}")
    if len(values) < 3:
        raise ValueError(f"polynomial must have degree at least 2, got {text!r}")
    if values[0] % ring.modulus != 1:
        raise ValueError(f"polynomial must be monic, leading coefficient is {values[0]}")
    return tuple(ring.normalize(c) for c in reversed(values[1:]))


def parse_elem_spec(text: str, n: int, ring: RingCtx) -> OElem:
    """Coefficient list of an element of O, lowest power first ("13,3" is 3*eta + 13)."""
    try:
        values = [int(tok.strip()) for tok in text.split(",") if tok.strip() != ""]
    except ValueError:
        raise ValueError(f"element spec must be comma separated integers, got {text!r}")
    if not values or len(values) > n:
        raise ValueError(f"element spec needs between 1 and {n} coefficients, got {len(values)}")
    values += [0] * (n - len(values))
    return tuple(ring.normalize(v) for v in values)


@dataclass(frozen=True)
class GaloisCtx:
    ring: RingCtx
    coeffs: Tuple[int, ...]

    def __post_init__(self):
        coeffs = tuple(self.ring.normalize(c) for c in self.coeffs)
        object.__setattr__(self, "coeffs", coeffs)
        if len(coeffs) < 2:
            raise PreconditionError([f"degree n = {len(coeffs)} must be at least 2"])
        p = self.ring.p
        f_bar = [1] + [c % p for c in reversed(coeffs)]
        if not gf_irreducible_p(f_bar, p, ZZ):
            logger.debug(f"{self.format_poly()} is reducible mod {p}")
            raise ReducibleModulusError([f"f = {self.format_poly()} is not irreducible mod {p}"])

    @classmethod
    def from_spec(cls, ring: RingCtx, text: str) -> "GaloisCtx":
        return cls(ring, parse_poly_spec(text, ring))

    # ------------------------------------------------------------------
    # structure

    @property
    def p(self) -> int:
        return self.ring.p

    @property
    def e(self) -> int:
        return self.ring.e

    @property
    def n(self) -> int:
        return len(self.coeffs)

    @property
    def q(self) -> int:
        return self.ring.p ** self.n

    @cached_property
    def O(self) -> QuotientRing:
        return QuotientRing(self.ring.modulus, self.coeffs)

    @cached_property
    def F(self) -> QuotientRing:
        return QuotientRing(self.ring.p, self.coeffs)

    def format_poly(self) -> str:
        """Inverse of parse_poly_spec, in canonical residues."""
        return ",".join(str(c) for c in (1,) + tuple(reversed(self.coeffs)))

    def describe_poly(self) -> str:
        terms = [f"x^{self.n}"]
        for k in range(self.n - 1, -1, -1):
            c = self.ring.negate_display(self.coeffs[k])
            if c == 0:
                continue
            sign = "-" if c < 0 else "+"
            mag = abs(c)
            mono = "" if k == 0 else ("x" if k == 1 else f"x^{k}")
            coef = str(mag) if (mag != 1 or k == 0) else ""
            terms.append(f"{sign} {coef}{mono}")
        return " ".join(terms) + f" over {self.ring}"

    def __str__(self):
        return self.describe_poly()

    # ------------------------------------------------------------------
    # ring arithmetic in O

    @property
    def zero(self) -> OElem:
        return self.O.zero()

    @property
    def one(self) -> OElem:
        return self.O.one()

    @property
    def eta(self) -> OElem:
        return (0, 1) + (0,) * (self.n - 2)

    def elem(self, values: Sequence[int]) -> OElem:
        if len(values) != self.n:
            raise ValueError(f"element needs {self.n} coordinates, got {len(values)}")
        return tuple(self.ring.normalize(v) for v in values)

    def scalar(self, c: int) -> OElem:
        return self.O.scalar(c)

    def add(self, a: OElem, b: OElem) -> OElem:
        return self.O.add(a, b)

    def sub(self, a: OElem, b: OElem) -> OElem:
        return self.O.sub(a, b)

    def neg(self, a: OElem) -> OElem:
        return self.O.neg(a)

    def mul(self, a: OElem, b: OElem) -> OElem:
        return self.O.mul(a, b)

    def scale(self, c: int, a: OElem) -> OElem:
        return self.O.scale(c, a)

    def is_unit(self, a: OElem) -> bool:
        return any(c % self.p for c in a)

    def inv(self, a: OElem) -> OElem:
        if not self.is_unit(a):
            raise NonUnitError([f"{a} reduces to 0 mod p and has no inverse"])
        return self.O.pow(a, self.unit_group_order - 1)

    def pow(self, a: OElem, k: int) -> OElem:
        if k < 0:
            return self.O.pow(self.inv(a), -k)
        return self.O.pow(a, k)

    def ring_arith(self, op: str, *operands):
        """Dispatch by name: add, sub, mul, inv, pow."""
        table = {"add": self.add, "sub": self.sub, "mul": self.mul, "inv": self.inv, "pow": self.pow}
        if op not in table:
            raise ValueError(f"unknown ring operation {op!r}")
        return table[op](*operands)

    def reduce_mod_p(self, z: OElem) -> FqElem:
        return tuple(c % self.p for c in z)

    def units(self) -> Iterator[OElem]:
        """Units of O in lexicographic order of their coordinate vectors."""
        for values in product(range(self.ring.modulus), repeat=self.n):
            z = tuple(values)
            if self.is_unit(z):
                yield z

    @property
    def unit_group_order(self) -> int:
        return self.q ** (self.e - 1) * (self.q - 1)

    # ------------------------------------------------------------------
    # trace

    @cached_property
    def basis_traces(self) -> Tuple[int, ...]:
        """tr(eta^j) for 0 <= j < n, the diagonal sums of the multiplication matrices."""
        out = []
        for j in range(self.n):
            eta_j = self.O.pow(self.eta, j)
            diag = 0
            for i in range(self.n):
                column = self.mul(eta_j, self.O.pow(self.eta, i))
                diag += column[i]
            out.append(diag % self.ring.modulus)
        return tuple(out)

    def trace(self, z: OElem) -> RElem:
        return sum(c * t for c, t in zip(z, self.basis_traces)) % self.ring.modulus

    # ------------------------------------------------------------------
    # residue field F_q

    def field_zero(self) -> FqElem:
        return self.F.zero()

    def field_one(self) -> FqElem:
        return self.F.one()

    def field_scalar(self, c: int) -> FqElem:
        return self.F.scalar(c)

    def field_add(self, a: FqElem, b: FqElem) -> FqElem:
        return self.F.add(a, b)

    def field_mul(self, a: FqElem, b: FqElem) -> FqElem:
        return self.F.mul(a, b)

    def field_pow(self, a: FqElem, k: int) -> FqElem:
        if k < 0:
            return self.F.pow(self.field_inv(a), -k)
        return self.F.pow(a, k)

    def field_inv(self, a: FqElem) -> FqElem:
        if not any(a):
            raise NonUnitError(["0 has no inverse in F_q"])
        return self.F.pow(a, self.q - 2)

    def field_trace(self, a: FqElem) -> int:
        return sum(c * t for c, t in zip(a, self.basis_traces)) % self.p

    def in_prime_field(self, a: FqElem) -> bool:
        return not any(c % self.p for c in a[1:])

    def field_elements(self) -> Iterator[FqElem]:
        for values in product(range(self.p), repeat=self.n):
            yield tuple(values)

    @property
    def eta_bar(self) -> FqElem:
        return self.reduce_mod_p(self.eta)

    @cached_property
    def zeta_order(self) -> int:
        """Multiplicative order of eta mod p, which is the order of zeta."""
        order = self.q - 1
        for r in primefactors(self.q - 1):
            while order % r == 0 and self.F.pow(self.eta_bar, order // r) == self.field_one():
                order //= r
        return order

    def element_order(self, z: OElem) -> int:
        if not self.is_unit(z):
            raise NonUnitError([f"{z} is not a unit of O"])
        order = self.p ** (self.e - 1) * (self.q - 1)
        for r in factorint(order):
            while order % r == 0 and self.O.pow(z, order // r) == self.one:
                order //= r
        return order

    def period(self) -> int:
        """Multiplicative order of eta, i.e. min{m > 0 : f | x^m - 1}."""
        return self.element_order(self.eta)

    # ------------------------------------------------------------------
    # Teichmueller decomposition eta = zeta * u, delta = (u - 1)/p

    @cached_property
    def zeta(self) -> OElem:
        return self.O.pow(self.eta, self.q ** (self.e - 1))

    @cached_property
    def u(self) -> OElem:
        return self.mul(self.eta, self.inv(self.zeta))

    @cached_property
    def delta(self) -> Tuple[int, ...]:
        """(u - 1)/p, meaningful mod p^{e-1} only."""
        u_minus_one = self.sub(self.u, self.one)
        if any(c % self.p for c in u_minus_one):
            logger.error(f"u - 1 = {u_minus_one} is not divisible by p for {self}")
            raise ConsistencyError(f"u - 1 = {u_minus_one} is not in pO")
        return tuple(c // self.p for c in u_minus_one)

    @cached_property
    def delta_bar(self) -> FqElem:
        return tuple(c % self.p for c in self.delta)

    def decompose(self) -> Tuple[OElem, OElem, FqElem]:
        return self.zeta, self.u, self.delta_bar

    @property
    def is_primitive(self) -> bool:
        return self.zeta_order == self.q - 1 and any(self.delta_bar)

    @property
    def is_strongly_primitive(self) -> bool:
        return self.zeta_order == self.q - 1 and not self.in_prime_field(self.delta_bar)

    def fact1_holds(self, i: int, j: int) -> bool:
        """u^{p^{i-1} j} == 1 + j p^i delta  mod p^{i+1} O."""
        if not 1 <= i <= self.e - 1:
            raise ValueError(f"level i = {i} must lie in [1, {self.e - 1}]")
        m = self.p ** (i + 1)
        lhs = self.O.pow(self.u, self.p ** (i - 1) * j)
        rhs = [j * self.p ** i * d for d in self.delta_bar]
        rhs[0] += 1
        return all((x - y) % m == 0 for x, y in zip(lhs, rhs))

    # ------------------------------------------------------------------
    # trace shift sets and orbit lifting

    def trace_shift_set(self, gamma_bar: FqElem, a_bar: int) -> Set[int]:
        """{tr(gamma z) : z in F_q^*, tr(z) = a}, by exhaustion, checked against the closed form."""
        a_bar %= self.p
        found = set()
        for z in self.field_elements():
            if any(z) and self.field_trace(z) == a_bar:
                found.add(self.field_trace(self.field_mul(gamma_bar, z)))
        expected = self.expected_trace_shift_set(gamma_bar, a_bar)
        if found != expected:
            logger.error(f"trace shift set {sorted(found)} != closed form {sorted(expected)} for gamma={gamma_bar}, a={a_bar}")
            raise ConsistencyError(f"trace shift set mismatch for gamma={gamma_bar}, a={a_bar}")
        return found

    def expected_trace_shift_set(self, gamma_bar: FqElem, a_bar: int) -> Set[int]:
        a_bar %= self.p
        if self.in_prime_field(gamma_bar):
            return {gamma_bar[0] * a_bar % self.p}
        if a_bar != 0 or self.n >= 3:
            return set(range(self.p))
        return set(range(1, self.p))

    def discrete_log(self, target: FqElem) -> Optional[int]:
        """Smallest s >= 0 with eta_bar^s = target, None if target is not a power."""
        x = self.field_one()
        for s in range(self.zeta_order):
            if x == target:
                return s
            x = self.field_mul(x, self.eta_bar)
        return None

    def lift_in_orbit(self, alpha: OElem, a: RElem, nu: FqElem) -> OElem:
        """
        Find z in {alpha eta^t} with tr(z) = a and z mod p = nu.

        Start from alpha zeta^s, which already reduces to nu, then fix the trace one
        p-adic digit at a time by multiplying with u^{p^{i-1} k}; u = 1 mod p so the
        reduction is untouched.
        """
        a = self.ring.normalize(a)
        nu = tuple(c % self.p for c in nu)
        failed = []
        if not self.is_primitive:
            failed.append("f is primitive")
        if not self.is_unit(alpha):
            failed.append("alpha is a unit")
        if not any(nu):
            failed.append("nu is nonzero")
        if self.field_trace(nu) != a % self.p:
            failed.append("tr(nu) = a mod p")
        t_nu_delta = self.field_trace(self.field_mul(nu, self.delta_bar))
        if t_nu_delta == 0:
            failed.append("tr(delta_bar nu) != 0")
        if failed:
            raise PreconditionError(failed)

        alpha_bar = self.reduce_mod_p(alpha)
        s = self.discrete_log(self.field_mul(nu, self.field_inv(alpha_bar)))
        if s is None:
            raise PreconditionError(["nu lies in the orbit of alpha_bar"])
        z = self.mul(alpha, self.O.pow(self.zeta, s))

        inv_t = pow(t_nu_delta, -1, self.p)
        for i in range(1, self.e):
            gap = (a - self.trace(z)) % self.ring.modulus
            if gap % self.p ** i:
                raise ConsistencyError(f"trace of lift is wrong below level {i}")
            d = (gap // self.p ** i) % self.p
            k = d * inv_t % self.p
            z = self.mul(z, self.O.pow(self.u, self.p ** (i - 1) * k))
            logger.debug(f"lift level {i}: correction k={k}")

        if self.trace(z) != a or self.reduce_mod_p(z) != nu:
            raise ConsistencyError(f"lift failed: tr={self.trace(z)}, reduction={self.reduce_mod_p(z)}")
        return z


def orbit_of(ctx: GaloisCtx, alpha: OElem) -> List[OElem]:
    """{alpha eta^t : 0 <= t < ord(eta)}."""
    out = []
    z = alpha
    for _ in range(ctx.period()):
        out.append(z)
        z = ctx.mul(z, ctx.eta)
    return out


if __name__ == "__main__":
    ctx = GaloisCtx.from_spec(RingCtx(3, 2), "1,1,-1")
    print(ctx, ctx.basis_traces, ctx.decompose(), ctx.period())
