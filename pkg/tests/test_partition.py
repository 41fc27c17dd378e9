import pytest

from algebra.errors import NonUnitError, PreconditionError
from algebra.galois_ring import GaloisCtx
from analysis.partition import DisjointSet, Partition, closure_partition, relation
from analysis.sequences import trace_sequence, value_set


def test_disjoint_set():
    ds = DisjointSet(6)
    ds.merge(0, 2)
    ds.merge(2, 4)
    ds.merge(1, 5)
    assert ds.find(0) == ds.find(4)
    assert ds.find(1) != ds.find(0)
    assert ds.groups() == [[0, 2, 4], [1, 5], [3]]
    with pytest.raises(ValueError):
        DisjointSet(-1)


def test_partition():
    part = Partition.from_pairs(5, [(3, 1), (4, 4)])
    assert part.classes == [[0], [1, 3], [2], [4]]
    assert part.class_of(3) == [1, 3]
    assert part.same_class(1, 3) and not part.same_class(0, 1)
    assert part.is_constant([7, 5, 7, 5, 1])
    assert not part.is_constant([7, 5, 7, 6, 1])
    assert len(part) == 4
    assert part == Partition(5, [[4], [2], [3, 1], [0]])
    with pytest.raises(ValueError):
        Partition(3, [[0, 1]])


def test_strong_example_classes(f_strong):
    rel = relation(f_strong, (1, 0), (5, 1))
    assert rel.level == 2 and rel.modulus == 9
    assert (2, 0) in rel.pairs
    assert closure_partition(rel).classes == [[0, 1, 2, 3, 6, 7, 8], [4, 5]]


def test_same_parameter_gives_singletons(f_strong):
    rel = relation(f_strong, (1, 0), (1, 0))
    assert all(a == b for a, b in rel.pairs)
    assert len(closure_partition(rel)) == 9


def test_negated_parameter(f_weak):
    alpha = (13, 3)
    occurring = set(value_set(trace_sequence(f_weak, alpha)))
    part = closure_partition(relation(f_weak, alpha, f_weak.neg(alpha)))
    for cls in part.classes:
        if cls[0] in occurring:
            assert set(cls) == {cls[0], -cls[0] % 27}
        else:
            assert len(cls) == 1


@pytest.mark.parametrize("beta", [(5, 1), (2, 0), (4, 3), (7, 8)])
def test_levels_project_down(f_weak, beta):
    alpha = (13, 3)
    for i in range(1, f_weak.e):
        upper = relation(f_weak, alpha, beta, i + 1)
        lower = relation(f_weak, alpha, beta, i)
        assert upper.project(i, f_weak.p) <= lower.pairs


@pytest.mark.parametrize("beta", [(5, 1), (2, 0), (4, 3)])
def test_tilde_relation_is_contained(f_strong, beta):
    full = relation(f_strong, (1, 0), beta)
    tilde = relation(f_strong, (1, 0), beta, tilde=True)
    assert tilde.tilde
    assert tilde.pairs <= full.pairs
    assert tilde.pairs


def test_relation_preconditions(f_strong, ring_9):
    with pytest.raises(PreconditionError):
        relation(GaloisCtx.from_spec(ring_9, "1,0,1"), (1, 0), (2, 0))
    with pytest.raises(NonUnitError):
        relation(f_strong, (3, 0), (1, 0))
    with pytest.raises(PreconditionError):
        relation(f_strong, (1, 0), (2, 0), 3)
