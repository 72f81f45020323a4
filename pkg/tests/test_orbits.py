import pytest
from hypothesis import given, strategies as st

from propact.orbits import (
    MultiplicitySequence,
    Partition,
    enumerate_ddagger_sequences,
    enumerate_partitions_A,
    enumerate_partitions_B,
    multiplicity_sequence_from_partition,
    neutral_element_A,
    neutral_element_B,
    partition_from_multiplicity_sequence,
    partitions,
    satisfies_ddagger,
    vector_from_multiplicity_sequence,
)

# partition counts p(n), OEIS A000041
P = [1, 1, 2, 3, 5, 7, 11, 15, 22, 30, 42, 56, 77, 101, 135, 176, 231, 297]


def brute_ddagger(m):
    """Every tuple in the box [0, m]^(2m+1) that passes the constraint check."""
    out = []

    def rec(prefix, budget):
        if len(prefix) == 2 * m + 1:
            if budget == 0 and satisfies_ddagger(tuple(prefix), m):
                out.append(tuple(prefix))
            return
        for x in range(budget + 1):
            rec(prefix + [x], budget - x)

    rec([], m)
    return sorted(out)


@pytest.mark.parametrize("n", range(len(P)))
def test_partition_counts(n):
    assert len(list(partitions(n))) == P[n]


def test_partitions_of_five_order():
    got = [d.parts for d in partitions(5)]
    assert got == [(5,), (4, 1), (3, 2), (3, 1, 1), (2, 2, 1), (2, 1, 1, 1), (1, 1, 1, 1, 1)]


def test_partition_validation():
    with pytest.raises(ValueError):
        Partition((1, 2))
    with pytest.raises(ValueError):
        Partition((2, 0))
    assert Partition.of(1, 3, 2).parts == (3, 2, 1)
    assert str(Partition.of(2, 2, 1)) == "[2,2,1]"


def test_b_admissible_examples():
    assert Partition.of(2, 2, 1).is_b_admissible(2)
    assert not Partition.of(4, 1).is_b_admissible(2)
    assert not Partition.of(3, 1).is_b_admissible(2)


@pytest.mark.parametrize("m,count", [(1, 2), (2, 4), (3, 7), (4, 13), (5, 21), (6, 35)])
def test_type_b_orbit_counts(m, count):
    brute = [d for d in partitions(2 * m + 1) if all(d.multiplicity(p) % 2 == 0 for p in set(d.parts) if p % 2 == 0)]
    assert len(enumerate_partitions_B(m)) == len(brute) == count


def test_neutral_element_examples():
    assert neutral_element_B(Partition.of(9), 4) == (8, 6, 4, 2)
    assert neutral_element_B(Partition((1,) * 9), 4) == (0, 0, 0, 0)
    assert neutral_element_B(Partition.of(3, 1, 1, 1, 1, 1, 1), 4) == (2, 0, 0, 0)
    assert neutral_element_A(Partition.of(2, 2, 1), 5) == (1, 1, 0, -1, -1)
    assert neutral_element_A(Partition.of(3), 3) == (2, 0, -2)


def test_neutral_element_rejects_bad_partition():
    with pytest.raises(ValueError):
        neutral_element_B(Partition.of(4, 1), 2)
    with pytest.raises(ValueError):
        neutral_element_A(Partition.of(3), 4)
    with pytest.raises(ValueError):
        enumerate_partitions_A(1)


@pytest.mark.parametrize("m", range(1, 8))
def test_neutral_elements_dominant_and_distinct(m):
    hs = [neutral_element_B(d, m) for d in enumerate_partitions_B(m)]
    assert len(set(hs)) == len(hs)
    for h in hs:
        assert list(h) == sorted(h, reverse=True) and min(h) >= 0


@pytest.mark.parametrize("n", range(2, 9))
def test_type_a_neutral_elements_trace_zero_and_symmetric(n):
    for d in enumerate_partitions_A(n):
        h = neutral_element_A(d, n)
        assert sum(h) == 0
        assert tuple(-x for x in reversed(h)) == h


@pytest.mark.parametrize("m", range(1, 6))
def test_ddagger_enumeration_matches_brute_force(m):
    assert sorted(s.a for s in enumerate_ddagger_sequences(m)) == brute_ddagger(m)


@pytest.mark.parametrize("m", range(1, 9))
def test_bijection(m):
    parts = enumerate_partitions_B(m)
    seqs = [multiplicity_sequence_from_partition(d, m) for d in parts]
    assert len(set(seqs)) == len(seqs)
    assert set(seqs) == set(enumerate_ddagger_sequences(m))
    for d, s in zip(parts, seqs):
        assert partition_from_multiplicity_sequence(s) == d
        assert vector_from_multiplicity_sequence(s) == neutral_element_B(d, m)


def test_multiplicity_sequence_example():
    s = multiplicity_sequence_from_partition(Partition.of(3, 1, 1, 1, 1, 1, 1), 4)
    assert s.a == (3, 0, 1, 0, 0, 0, 0, 0, 0)
    assert s.vector() == (2, 0, 0, 0)
    assert s[0] == 3


def test_multiplicity_sequence_validation():
    with pytest.raises(ValueError):
        MultiplicitySequence((0, 1, 1), 1)  # odd slot is odd
    with pytest.raises(ValueError):
        MultiplicitySequence((0, 0, 2, 0, 0), 2)  # a2 > 2 a0 + 1
    assert not satisfies_ddagger((1, 0), 1)


@given(st.integers(1, 10).flatmap(lambda m: st.sampled_from(enumerate_ddagger_sequences(m))))
def test_vector_length_and_content(seq):
    v = seq.vector()
    assert len(v) == seq.m
    for i, k in enumerate(seq.a):
        assert v.count(i) == k
