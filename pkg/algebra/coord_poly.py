"""
Reduced polynomials over F_p in the digit variables x0, ..., x{e-1}.

A residue a = a_0 + a_1 p + ... + a_{e-1} p^{e-1} is identified with its digit
vector, so every map R -> F_p is a unique polynomial with every exponent < p.
"""

from dataclasses import dataclass
from itertools import product
from math import comb
from typing import Dict, Iterable, List, Sequence, Set, Tuple

import numpy as np
from sympy import Poly, Symbol
from sympy.parsing.sympy_parser import parse_expr, standard_transformations
from sympy.polys.polyerrors import PolynomialError

from utils.logger import get_logger

logger = get_logger(__name__)

Exponents = Tuple[int, ...]


def _reduce_exponent(k: int, p: int) -> int:
    # x^p = x as functions on F_p
    return 0 if k == 0 else (k - 1) % (p - 1) + 1


@dataclass(frozen=True)
class CoordPoly:
    p: int
    e: int
    terms: Tuple[Tuple[Exponents, int], ...] = ()

    @classmethod
    def from_dict(cls, coeffs: Dict[Exponents, int], p: int, e: int) -> "CoordPoly":
        reduced: Dict[Exponents, int] = {}
        for exps, c in coeffs.items():
            if len(exps) != e:
                raise ValueError(f"exponent vector {exps} must have length {e}")
            if any(k < 0 for k in exps):
                raise ValueError(f"negative exponent in {exps}")
            key = tuple(_reduce_exponent(k, p) for k in exps)
            reduced[key] = (reduced.get(key, 0) + c) % p
        terms = tuple(sorted((k, c) for k, c in reduced.items() if c))
        return cls(p, e, terms)

    @classmethod
    def constant(cls, c: int, p: int, e: int) -> "CoordPoly":
        return cls.from_dict({(0,) * e: c}, p, e)

    @classmethod
    def variable(cls, i: int, p: int, e: int, power: int = 1) -> "CoordPoly":
        if not 0 <= i < e:
            raise ValueError(f"variable x{i} does not exist for e = {e}")
        exps = [0] * e
        exps[i] = power
        return cls.from_dict({tuple(exps): 1}, p, e)

    @classmethod
    def univariate(cls, coeffs: Sequence[int], var: int, p: int, e: int) -> "CoordPoly":
        """sum coeffs[k] x_var^k."""
        out: Dict[Exponents, int] = {}
        for k, c in enumerate(coeffs):
            exps = [0] * e
            exps[var] = k
            out[tuple(exps)] = out.get(tuple(exps), 0) + c
        return cls.from_dict(out, p, e)

    @classmethod
    def parse(cls, text: str, p: int, e: int) -> "CoordPoly":
        """
        Parse a coordinate polynomial such as "x2^2 + 2*x0*x1 + 1".

        Args:
            text: expression in x0..x{e-1} with ^ or **, *, + and integer coefficients
            p: the prime; coefficients are reduced mod p and exponents into [1, p)
            e: number of digit variables

        Returns:
            CoordPoly: the reduced polynomial

        Raises:
            ValueError: on syntax errors, unknown variables or non-integer coefficients
        """
        names = {f"x{i}": Symbol(f"x{i}") for i in range(e)}
        try:
            expr = parse_expr(text.replace("^", "**"), local_dict=names,
                              transformations=standard_transformations)
        except Exception as exc:
            logger.warning(f"Failed to parse coordinate polynomial {text!r}: {exc}")
            raise ValueError(f"cannot parse coordinate polynomial {text!r}: {exc}")
        extra = {str(s) for s in getattr(expr, "free_symbols", set())} - set(names)
        if extra:
            raise ValueError(f"unknown variables {sorted(extra)}; expected x0..x{e - 1}")
        try:
            poly = Poly(expr, *names.values())
        except PolynomialError as exc:
            raise ValueError(f"{text!r} is not a polynomial: {exc}")
        coeffs: Dict[Exponents, int] = {}
        for monom, c in poly.terms():
            if not c.is_integer:
                raise ValueError(f"coefficient {c} in {text!r} is not an integer")
            coeffs[tuple(monom)] = int(c)
        logger.debug(f"parsed {text!r} into {len(coeffs)} terms over F_{p}")
        return cls.from_dict(coeffs, p, e)

    @classmethod
    def interpolate(cls, table: Sequence[int], p: int, e: int) -> "CoordPoly":
        """The unique reduced polynomial taking table[a] at digits(a)."""
        if len(table) != p ** e:
            raise ValueError(f"table must have {p ** e} entries, got {len(table)}")
        # indicator of x = c is 1 - (x - c)^{p-1}; row k holds the x^k coefficients
        basis = np.zeros((p, p), dtype=np.int64)
        for c in range(p):
            for k in range(p):
                basis[k, c] = -comb(p - 1, k) * pow(-c, p - 1 - k, p)
            basis[0, c] += 1
        basis %= p
        values = np.asarray(table, dtype=np.int64).reshape((p,) * e, order="F") % p
        for axis in range(e):
            values = np.moveaxis(np.tensordot(basis, values, axes=([1], [axis])), 0, axis) % p
        coeffs = {tuple(int(k) for k in idx): int(values[idx]) for idx in np.ndindex(values.shape) if values[idx]}
        return cls.from_dict(coeffs, p, e)

    # ------------------------------------------------------------------

    def coefficient(self, exps: Exponents) -> int:
        return dict(self.terms).get(tuple(exps), 0)

    def is_zero(self) -> bool:
        return not self.terms

    def variables(self) -> Set[int]:
        return {i for exps, _ in self.terms for i, k in enumerate(exps) if k}

    def degree_in(self, i: int) -> int:
        """Degree in x_i; -1 for the zero polynomial."""
        if not self.terms:
            return -1
        return max(exps[i] for exps, _ in self.terms)

    def evaluate(self, point: Sequence[int]) -> int:
        total = 0
        for exps, c in self.terms:
            term = c
            for x, k in zip(point, exps):
                if k:
                    term = term * pow(x, k, self.p) % self.p
            total += term
        return total % self.p

    __call__ = evaluate

    def points(self) -> Iterable[Tuple[int, ...]]:
        return product(range(self.p), repeat=self.e)

    def to_table(self) -> List[int]:
        """Values at every residue a in [0, p^e), indexed by a."""
        out = []
        for a in range(self.p ** self.e):
            digits = []
            for _ in range(self.e):
                a, d = divmod(a, self.p)
                digits.append(d)
            out.append(self.evaluate(digits))
        return out

    # divisibility hypotheses, by evaluation

    def nonzero_with_x0_unit(self) -> bool:
        """Not divisible by x0^{p-1} - 1: some point with x0 != 0 gives a nonzero value."""
        return any(pt[0] and self.evaluate(pt) for pt in self.points())

    def nonzero_with_x0_zero(self) -> bool:
        """Not divisible by x0: some point with x0 = 0 gives a nonzero value."""
        return any(pt[0] == 0 and self.evaluate(pt) for pt in self.points())

    # the same hypotheses read off the coefficients

    def _x0_slices(self) -> Dict[int, Dict[Exponents, int]]:
        slices: Dict[int, Dict[Exponents, int]] = {}
        for exps, c in self.terms:
            slices.setdefault(exps[0], {})[exps[1:]] = c
        return slices

    def divisible_by_x0_pow_minus_one(self) -> bool:
        slices = self._x0_slices()
        if any(slices.get(k) for k in range(1, self.p - 1)):
            return False
        low = slices.get(0, {})
        top = slices.get(self.p - 1, {})
        keys = set(low) | set(top)
        return all((low.get(k, 0) + top.get(k, 0)) % self.p == 0 for k in keys)

    def divisible_by_x0(self) -> bool:
        return not self._x0_slices().get(0)

    def __str__(self):
        if not self.terms:
            return "0"
        parts = []
        for exps, c in sorted(self.terms, key=lambda t: (-sum(t[0]), tuple(-k for k in reversed(t[0])))):
            mono = "*".join(f"x{i}" if k == 1 else f"x{i}^{k}" for i, k in enumerate(exps) if k)
            if not mono:
                parts.append(str(c))
            elif c == 1:
                parts.append(mono)
            else:
                parts.append(f"{c}*{mono}")
        return " + ".join(parts)
