"""
Sequences s_alpha(t) = tr(alpha eta^t) and their recurrence-generated counterparts.

Time t = 0 corresponds to alpha itself.
"""

import json
from functools import cached_property
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np
from sympy import divisors

from algebra.errors import NonUnitError, PreconditionError
from algebra.galois_ring import GaloisCtx, OElem
from utils.logger import get_logger

logger = get_logger(__name__)


def _minimal_period(samples: Tuple[int, ...]) -> int:
    size = len(samples)
    for d in divisors(size):
        if all(samples[t] == samples[t % d] for t in range(d, size)):
            return d
    return size


class PeriodicSequence:
    """A purely periodic map Z -> labels, stored as one minimal period."""

    def __init__(self, samples: Sequence[int], ctx: Optional[GaloisCtx] = None):
        samples = tuple(int(v) for v in samples)
        if not samples:
            raise ValueError("a periodic sequence needs at least one sample")
        self.period = _minimal_period(samples)
        self.samples = samples[:self.period]
        self.ctx = ctx

    def __getitem__(self, t: int) -> int:
        return self.samples[t % self.period]

    def __eq__(self, other):
        if not isinstance(other, PeriodicSequence):
            return NotImplemented
        return self.samples == other.samples

    def __hash__(self):
        return hash(self.samples)

    def __repr__(self):
        head = ",".join(str(v) for v in self.samples[:12])
        more = "..." if self.period > 12 else ""
        return f"PeriodicSequence(period={self.period}, samples=[{head}{more}])"

    def window(self, start: int, length: int) -> List[int]:
        return [self[t] for t in range(start, start + length)]


def shift(seq: PeriodicSequence, k: int) -> PeriodicSequence:
    """t -> seq(t + k)."""
    return PeriodicSequence([seq[t + k] for t in range(seq.period)], seq.ctx)


def value_set(seq: PeriodicSequence) -> List[int]:
    return sorted(set(seq.samples))


def period(ctx: GaloisCtx) -> int:
    return ctx.period()


def trace_sequence(ctx: GaloisCtx, alpha: OElem) -> PeriodicSequence:
    """
    s_alpha(t) = tr(alpha eta^t) over one period of eta.

    Args:
        ctx: the Galois ring context of f
        alpha: a unit of O, lowest coefficient first

    Returns:
        PeriodicSequence: samples for t = 0 .. period - 1, minimal period enforced

    Raises:
        NonUnitError: when alpha lies in pO
    """
    if not ctx.is_unit(alpha):
        raise NonUnitError([f"alpha = {alpha} is not a unit of O"])
    samples = []
    z = tuple(alpha)
    for _ in range(ctx.period()):
        samples.append(ctx.trace(z))
        z = ctx.mul(z, ctx.eta)
    return PeriodicSequence(samples, ctx)


def lfsr_sequence(ctx: GaloisCtx, init: Sequence[int]) -> PeriodicSequence:
    """Run s(t) = -c_{n-1} s(t-1) - ... - c_0 s(t-n) from `init` until the state repeats."""
    if len(init) != ctx.n:
        raise ValueError(f"initial state needs {ctx.n} entries, got {len(init)}")
    state = tuple(ctx.ring.normalize(v) for v in init)
    if all(v % ctx.p == 0 for v in state):
        raise PreconditionError(["initial state is nonzero mod p"])

    modulus = ctx.ring.modulus
    limit = ctx.period()
    samples = list(state)
    window = state
    for _ in range(limit):
        nxt = -sum(c * s for c, s in zip(ctx.coeffs, window)) % modulus
        samples.append(nxt)
        window = window[1:] + (nxt,)
        if window == state:
            break
    else:
        raise PreconditionError([f"state did not return within {limit} steps"])
    cycle = len(samples) - ctx.n
    return PeriodicSequence(samples[:cycle], ctx)


def level_sequence(seq: PeriodicSequence, i: int) -> PeriodicSequence:
    """The i-th p-adic digit of every term; i = e-1 is the highest level."""
    if seq.ctx is None:
        raise ValueError("digit levels need a ring; compressed sequences have none")
    p, e = seq.ctx.p, seq.ctx.e
    if not 0 <= i < e:
        raise ValueError(f"level {i} outside [0, {e})")
    return PeriodicSequence([(v // p ** i) % p for v in seq.samples])


def export_sequence(seq: PeriodicSequence, fmt: str = "plain") -> str:
    if fmt == "plain":
        return "\n".join(str(v) for v in seq.samples) + "\n"
    if fmt == "json":
        header = {}
        if seq.ctx is not None:
            header = {"p": seq.ctx.p, "e": seq.ctx.e, "poly": seq.ctx.format_poly()}
        return json.dumps({"header": header, "samples": list(seq.samples)}, indent=2, sort_keys=True) + "\n"
    raise ValueError(f"unknown export format {fmt!r}; expected plain or json")


class SequenceFamily:
    """
    Every unit parameter alpha of O with s_alpha over one period of eta.

    Rows of `matrix` are indexed like `units`. `representatives` holds one unit per
    coset of <eta> in O^*, first in lexicographic order.
    """

    def __init__(self, ctx: GaloisCtx):
        self.ctx = ctx
        self.period = ctx.period()
        self.units: List[OElem] = list(ctx.units())
        self.index: Dict[OElem, int] = {u: i for i, u in enumerate(self.units)}
        logger.debug(f"SequenceFamily over {ctx}: {len(self.units)} units, period {self.period}")

    @cached_property
    def trace_table(self) -> np.ndarray:
        """tr(eta^k) for 0 <= k < period + n - 1."""
        ctx = self.ctx
        values = []
        z = ctx.one
        for _ in range(self.period + ctx.n - 1):
            values.append(ctx.trace(z))
            z = ctx.mul(z, ctx.eta)
        return np.array(values, dtype=self._dtype)

    @property
    def _dtype(self):
        modulus = self.ctx.ring.modulus
        return np.int64 if modulus * modulus * self.ctx.n < 2 ** 62 else object

    @cached_property
    def matrix(self) -> np.ndarray:
        ctx = self.ctx
        params = np.array(self.units, dtype=self._dtype).reshape(len(self.units), ctx.n)
        shifts = np.arange(ctx.n)[:, None] + np.arange(self.period)[None, :]
        hankel = self.trace_table[shifts]
        return params.dot(hankel) % ctx.ring.modulus

    @cached_property
    def representatives(self) -> List[OElem]:
        marked = set()
        reps = []
        for u in self.units:
            if u in marked:
                continue
            reps.append(u)
            z = u
            for _ in range(self.period):
                marked.add(z)
                z = self.ctx.mul(z, self.ctx.eta)
        logger.debug(f"{len(reps)} coset representatives of <eta> in O^*")
        return reps

    def row(self, alpha: OElem) -> np.ndarray:
        alpha = tuple(self.ctx.ring.normalize(c) for c in alpha)
        if alpha not in self.index:
            raise NonUnitError([f"alpha = {alpha} is not a unit of O"])
        return self.matrix[self.index[alpha]]

    def sequence(self, alpha: OElem) -> PeriodicSequence:
        return PeriodicSequence(self.row(alpha).tolist(), self.ctx)


if __name__ == "__main__":
    from algebra.residue_ring import RingCtx
    ctx = GaloisCtx.from_spec(RingCtx(3, 2), "1,1,-1")
    print(trace_sequence(ctx, ctx.one))
    print(lfsr_sequence(ctx, (2, 8)))
