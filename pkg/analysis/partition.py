"""Value-pair relations between two sequences and their equivalence closures."""

from dataclasses import dataclass
from typing import Dict, FrozenSet, Iterable, List, Optional, Sequence, Tuple

from algebra.errors import NonUnitError, PreconditionError
from algebra.galois_ring import GaloisCtx, OElem
from utils.logger import get_logger

logger = get_logger(__name__)


class DisjointSet(object):
    """
    Disjoint-set forest over {0, ..., size - 1} with union by rank and path compression.

    Examples:
        >>> ds = DisjointSet(3)
        >>> ds.merge(0, 2)
        >>> ds.find(0) == ds.find(2), ds.find(0) == ds.find(1)
        (True, False)
    """

    def __init__(self, size: int):
        if size < 0:
            raise ValueError(f"size must be nonnegative, got {size}")
        self._parent = list(range(size))
        self._rank = [0] * size
        self.size = size

    def find(self, x: int) -> int:
        root = x
        while self._parent[root] != root:
            root = self._parent[root]
        while self._parent[x] != root:
            self._parent[x], x = root, self._parent[x]
        return root

    def merge(self, x: int, y: int):
        x_root, y_root = self.find(x), self.find(y)
        if x_root == y_root:
            return
        if self._rank[x_root] < self._rank[y_root]:
            self._parent[x_root] = y_root
        elif self._rank[x_root] > self._rank[y_root]:
            self._parent[y_root] = x_root
        else:
            self._parent[y_root] = x_root
            self._rank[x_root] += 1

    def groups(self) -> List[List[int]]:
        buckets: Dict[int, List[int]] = {}
        for x in range(self.size):
            buckets.setdefault(self.find(x), []).append(x)
        return sorted(buckets.values())


class Partition:
    """A partition of {0, ..., size - 1}; classes are sorted and listed by smallest element."""

    def __init__(self, size: int, classes: Iterable[Iterable[int]]):
        self.size = size
        self.classes: List[List[int]] = sorted(sorted(c) for c in classes if c)
        seen = [x for c in self.classes for x in c]
        if sorted(seen) != list(range(size)):
            raise ValueError(f"classes do not partition [0, {size})")
        self._owner = {x: i for i, c in enumerate(self.classes) for x in c}

    @classmethod
    def from_pairs(cls, size: int, pairs: Iterable[Tuple[int, int]]) -> "Partition":
        ds = DisjointSet(size)
        for a, b in pairs:
            ds.merge(a, b)
        return cls(size, ds.groups())

    def class_of(self, a: int) -> List[int]:
        return self.classes[self._owner[a]]

    def same_class(self, a: int, b: int) -> bool:
        return self._owner[a] == self._owner[b]

    def is_constant(self, table: Sequence[int]) -> bool:
        """True when the labels are constant on every class."""
        return all(len({table[x] for x in c}) == 1 for c in self.classes)

    def __len__(self):
        return len(self.classes)

    def __eq__(self, other):
        if not isinstance(other, Partition):
            return NotImplemented
        return self.size == other.size and self.classes == other.classes

    def __repr__(self):
        return f"Partition({self.classes})"


@dataclass(frozen=True)
class PairRelation:
    level: int
    modulus: int
    pairs: FrozenSet[Tuple[int, int]]
    alpha: OElem
    beta: OElem
    tilde: bool = False

    def project(self, level: int, p: int) -> FrozenSet[Tuple[int, int]]:
        """The pairs reduced mod p^level."""
        m = p ** level
        return frozenset((a % m, b % m) for a, b in self.pairs)


def check_pair(ctx: GaloisCtx, alpha: OElem, beta: OElem):
    if not ctx.is_primitive:
        raise PreconditionError([f"f = {ctx.format_poly()} is primitive"])
    failed = [f"{name} is a unit" for name, z in (("alpha", alpha), ("beta", beta)) if not ctx.is_unit(z)]
    if failed:
        raise NonUnitError(failed)


def relation(ctx: GaloisCtx, alpha: OElem, beta: OElem, i: Optional[int] = None,
             tilde: bool = False) -> PairRelation:
    """
    {(s_alpha(t) mod p^i, s_beta(t) mod p^i)} over one period.

    With `tilde`, only the times where tr(delta alpha eta^t) != 0 mod p contribute.

    Args:
        ctx: a primitive f
        alpha, beta: unit parameters of the two sequences
        i: level in [1, e], e when omitted
        tilde: restrict to times where the delta trace is nonzero mod p

    Returns:
        PairRelation over Z/p^i
    """
    i = ctx.e if i is None else i
    if not 1 <= i <= ctx.e:
        raise PreconditionError([f"level i = {i} lies in [1, {ctx.e}]"])
    check_pair(ctx, alpha, beta)
    m = ctx.p ** i
    pairs = set()
    a_z, b_z = tuple(alpha), tuple(beta)
    for _ in range(ctx.period()):
        keep = True
        if tilde:
            keep = ctx.field_trace(ctx.field_mul(ctx.delta_bar, ctx.reduce_mod_p(a_z))) != 0
        if keep:
            pairs.add((ctx.trace(a_z) % m, ctx.trace(b_z) % m))
        a_z = ctx.mul(a_z, ctx.eta)
        b_z = ctx.mul(b_z, ctx.eta)
    logger.debug(f"relation at level {i}{' (tilde)' if tilde else ''}: {len(pairs)} pairs")
    return PairRelation(level=i, modulus=m, pairs=frozenset(pairs), alpha=tuple(alpha),
                        beta=tuple(beta), tilde=tilde)


def closure_partition(rel: PairRelation) -> Partition:
    """Classes of the smallest equivalence relation containing `rel`."""
    return Partition.from_pairs(rel.modulus, rel.pairs)
