"""
Compressing maps psi on R and the induced map on sequences.

Maps are dense tables of canonical labels {0, ..., k-1}. The family constructors
check their hypotheses on the coordinate polynomials; whether the result is
entropy preserving depends on the polynomial f and is decided in `injectivity`.
"""

from dataclasses import dataclass, field
from math import gcd
from typing import Any, Dict, List, Optional, Sequence, Tuple

from algebra.coord_poly import CoordPoly
from algebra.errors import PreconditionError
from algebra.residue_ring import RingCtx
from analysis.sequences import PeriodicSequence
from utils.logger import get_logger

logger = get_logger(__name__)


@dataclass(frozen=True)
class CompressingMap:
    ring: RingCtx
    table: Tuple[int, ...]
    alphabet_size: int
    provenance: Optional[Dict[str, Any]] = field(default=None, compare=False)

    def __post_init__(self):
        table = tuple(int(v) for v in self.table)
        object.__setattr__(self, "table", table)
        if len(table) != self.ring.modulus:
            raise ValueError(f"table has {len(table)} entries, {self.ring} needs {self.ring.modulus}")
        bad = [v for v in table if not 0 <= v < self.alphabet_size]
        if bad:
            raise ValueError(f"labels {sorted(set(bad))} are outside [0, {self.alphabet_size})")

    def __call__(self, a: int) -> int:
        return self.table[a % self.ring.modulus]

    def is_constant_on(self, values) -> bool:
        return len({self.table[v % self.ring.modulus] for v in values}) <= 1

    def constant_unit_orbit_roots(self) -> List[int]:
        """Prime-order roots w of unity for which psi is constant on {a w^i} for every unit a."""
        ring = self.ring
        units = ring.units()
        return [w for w in ring.prime_order_roots()
                if all(self.is_constant_on(ring.orbit(a, w)) for a in units)]

    def coord_poly(self) -> CoordPoly:
        if self.alphabet_size > self.ring.p:
            raise ValueError(f"alphabet of size {self.alphabet_size} is not F_{self.ring.p}")
        return CoordPoly.interpolate(self.table, self.ring.p, self.ring.e)

    def spec(self) -> str:
        return "t:" + ",".join(str(v) for v in self.table)


def _require_poly(ring: RingCtx, poly: CoordPoly, name: str):
    if (poly.p, poly.e) != (ring.p, ring.e):
        raise ValueError(f"{name} is over (p={poly.p}, e={poly.e}), ring is {ring}")


def from_poly(ring: RingCtx, poly: CoordPoly) -> CompressingMap:
    _require_poly(ring, poly, "polynomial")
    return CompressingMap(ring, tuple(poly.to_table()), ring.p,
                          provenance={"family": "poly", "params": {"expr": str(poly)}})


def identity_map(ring: RingCtx) -> CompressingMap:
    return CompressingMap(ring, tuple(range(ring.modulus)), ring.modulus,
                          provenance={"family": "identity", "params": {}})


def constant_map(ring: RingCtx, c: int = 0) -> CompressingMap:
    return CompressingMap(ring, (c,) * ring.modulus, c + 1,
                          provenance={"family": "constant", "params": {"c": c}})


def _is_power_of(m: int, p: int) -> bool:
    while m % p == 0:
        m //= p
    return m == 1


def modular_map(ring: RingCtx, M: int) -> CompressingMap:
    """a -> a mod M."""
    failed = []
    if M < 2:
        failed.append(f"M = {M} >= 2")
    elif _is_power_of(M, ring.p):
        failed.append(f"M = {M} is not a power of p = {ring.p}")
    if failed:
        raise PreconditionError(failed)
    return CompressingMap(ring, tuple(a % M for a in range(ring.modulus)), M,
                          provenance={"family": "mod", "params": {"M": M}})


def _table_from(ring: RingCtx, formula) -> Tuple[int, ...]:
    return tuple(formula(ring.digits(a)) % ring.p for a in range(ring.modulus))


def family_str(ring: RingCtx, f0: CoordPoly, f1: CoordPoly, f2: CoordPoly) -> CompressingMap:
    """psi = f0(x_{e-1}) f1(x_0..x_{e-2}) + f2(x_0..x_{e-2})."""
    for name, poly in (("f0", f0), ("f1", f1), ("f2", f2)):
        _require_poly(ring, poly, name)
    top = ring.e - 1
    failed = []
    if not f0.variables() <= {top}:
        failed.append(f"f0 depends only on x{top}")
    if not 1 <= f0.degree_in(top) < ring.p:
        failed.append("1 <= deg f0 < p")
    for name, poly in (("f1", f1), ("f2", f2)):
        if top in poly.variables():
            failed.append(f"{name} does not depend on x{top}")
    if not f1.nonzero_with_x0_unit():
        failed.append("(x0^(p-1) - 1) does not divide f1")
    if f1.evaluate((0,) * ring.e) == 0:
        failed.append("f1(0,...,0) != 0")
    if failed:
        logger.warning(f"family_str rejected: {failed}")
        raise PreconditionError(failed)

    table = _table_from(ring, lambda d: f0(d) * f1(d) + f2(d))
    return CompressingMap(ring, table, ring.p, provenance={
        "family": "str", "params": {"f0": str(f0), "f1": str(f1), "f2": str(f2)}})


def family_weak(ring: RingCtx, mode: str, f2: Optional[CoordPoly] = None, ell: Optional[int] = None,
                f1: Optional[CoordPoly] = None, g0: Optional[CoordPoly] = None,
                g1: Optional[CoordPoly] = None, k: Optional[int] = None) -> CompressingMap:
    """
    psi = x_{e-1}^ell f1(x_0..x_{e-2}) + f2(x_0..x_{e-2}).

    mode "pow": 2 <= ell < p, f1 given, neither x0^(p-1) - 1 nor x0 divides f1.
    mode "lin": ell = 1 and f1 = g0(x_k) + g1(x_0..x_{k-1}) with conditions on g0.

    At k = 0 the hypotheses do not rule out psi being constant on the unit orbits
    {a w^i} of a root w of prime order. Such a map still preserves entropy for a
    strongly primitive f but collides s_alpha with s_{w alpha} for other primitive f,
    so its provenance carries requires_strongly_primitive = True.

    Args:
        ring: the residue ring the map acts on
        mode: "pow" or "lin"
        f2: additive term in x_0..x_{e-2}, zero when omitted

    Returns:
        CompressingMap into F_p with provenance {family, params}

    Raises:
        PreconditionError: listing every violated hypothesis
    """
    p, e = ring.p, ring.e
    top = e - 1
    f2 = f2 if f2 is not None else CoordPoly.constant(0, p, e)
    _require_poly(ring, f2, "f2")
    failed: List[str] = []
    if top in f2.variables():
        failed.append(f"f2 does not depend on x{top}")

    if mode == "pow":
        ell = 2 if ell is None else ell
        f1 = f1 if f1 is not None else CoordPoly.constant(1, p, e)
        _require_poly(ring, f1, "f1")
        if not 2 <= ell < p:
            failed.append(f"2 <= ell < p (ell = {ell})")
        if top in f1.variables():
            failed.append(f"f1 does not depend on x{top}")
        if not f1.nonzero_with_x0_unit():
            failed.append("(x0^(p-1) - 1) does not divide f1")
        if not f1.nonzero_with_x0_zero():
            failed.append("x0 does not divide f1")
        params = {"ell": ell, "f1": str(f1), "f2": str(f2)}
    elif mode == "lin":
        if ell not in (None, 1):
            failed.append(f"ell = 1 (ell = {ell})")
        ell = 1
        k = e - 2 if k is None else k
        if g0 is None:
            raise PreconditionError(["g0 is given"])
        g1 = g1 if g1 is not None else CoordPoly.constant(0, p, e)
        _require_poly(ring, g0, "g0")
        _require_poly(ring, g1, "g1")
        if not 0 <= k <= e - 2:
            raise PreconditionError([f"0 <= k <= e - 2 (k = {k})"])
        if not g0.variables() <= {k}:
            failed.append(f"g0 depends only on x{k}")
        if not g1.variables() <= set(range(k)):
            failed.append(f"g1 depends only on x0..x{k - 1}" if k else "g1 is constant")
        f1 = CoordPoly.from_dict(_sum_terms(g0, g1), p, e)
        if k >= 1:
            deg = g0.degree_in(k)
            if not 1 <= deg < p:
                failed.append("1 <= deg g0 < p")
        else:
            # at level 0 the constant g1 folds into g0
            deg = f1.degree_in(0)
            if not f1.nonzero_with_x0_unit():
                failed.append("(x0^(p-1) - 1) does not divide g0")
            if not f1.nonzero_with_x0_zero():
                failed.append("x0 does not divide g0")
        if gcd(p - 1, deg + 1) != 1:
            failed.append(f"gcd(p-1, deg g0 + 1) = 1 (gcd({p - 1}, {deg + 1}) = {gcd(p - 1, deg + 1)})")
        params = {"k": k, "g0": str(g0), "g1": str(g1), "f2": str(f2)}
    else:
        raise ValueError(f"unknown mode {mode!r}; expected pow or lin")

    if failed:
        logger.warning(f"family_weak({mode}) rejected: {failed}")
        raise PreconditionError(failed)

    table = _table_from(ring, lambda d: pow(d[top], ell, p) * f1(d) + f2(d))
    provenance = {"family": f"weak-{mode}", "params": params}
    psi = CompressingMap(ring, table, p, provenance=provenance)
    if mode == "lin" and k == 0:
        roots = psi.constant_unit_orbit_roots()
        provenance["requires_strongly_primitive"] = bool(roots)
        if roots:
            logger.warning(f"weak-lin map at k = 0 is constant on the unit orbits of {roots}; "
                           f"entropy preserving only for strongly primitive f")
    return psi


def _sum_terms(a: CoordPoly, b: CoordPoly) -> Dict[Tuple[int, ...], int]:
    out = dict(a.terms)
    for exps, c in b.terms:
        out[exps] = out.get(exps, 0) + c
    return out


def highest_digit_map(ring: RingCtx, f0: CoordPoly, f2: Optional[CoordPoly] = None) -> CompressingMap:
    """f0(x_{e-1}) + f2(x_0..x_{e-2})."""
    one = CoordPoly.constant(1, ring.p, ring.e)
    return family_str(ring, f0, one, f2 if f2 is not None else CoordPoly.constant(0, ring.p, ring.e))


def power_map(ring: RingCtx, ell: int, f2: Optional[CoordPoly] = None) -> CompressingMap:
    """x_{e-1}^ell + f2(x_0..x_{e-2})."""
    return family_weak(ring, "pow", f2=f2, ell=ell)


def linear_level_map(ring: RingCtx, g0: CoordPoly, g1: Optional[CoordPoly] = None,
                     f2: Optional[CoordPoly] = None) -> CompressingMap:
    """x_{e-1} (g0(x_{e-2}) + g1(x_0..x_{e-3})) + f2(x_0..x_{e-2})."""
    return family_weak(ring, "lin", f2=f2, g0=g0, g1=g1, k=ring.e - 2)


def parse_map_spec(text: str, ring: RingCtx) -> CompressingMap:
    """
    Map text formats: "t:v0,v1,..." (raw table), "mod:M", or a coordinate polynomial
    in x0..x{e-1} reduced mod p.
    """
    text = text.strip()
    if text.startswith("t:"):
        try:
            table = [int(v) for v in text[2:].split(",")]
        except ValueError:
            raise ValueError(f"table spec must list integers, got {text!r}")
        if any(v < 0 for v in table):
            raise ValueError("table labels must be nonnegative")
        return CompressingMap(ring, tuple(table), max(table) + 1 if table else 1,
                              provenance={"family": "table", "params": {}})
    if text.startswith("mod:"):
        try:
            M = int(text[4:])
        except ValueError:
            raise ValueError(f"modulus spec must be mod:<integer>, got {text!r}")
        return modular_map(ring, M)
    return from_poly(ring, CoordPoly.parse(text, ring.p, ring.e))


def apply(psi: CompressingMap, seq: PeriodicSequence) -> PeriodicSequence:
    if seq.ctx is None or seq.ctx.ring != psi.ring:
        raise PreconditionError([f"sequence ring matches map ring {psi.ring}"])
    return PeriodicSequence([psi.table[v] for v in seq.samples])
