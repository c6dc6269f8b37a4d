import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from ktreesub import (
    Partition,
    ResourceLimit,
    building_set_I,
    count_partitions_modk,
    enumerate_partitions,
    factors_I,
    factors_k,
    factors_k_of_chain,
    g_set,
    k_minimal_upper_bounds,
    parse_partition,
    partition_join,
)
from oracles import (
    brute_modk_partitions,
    brute_set_partitions,
    common_refinement_oracle,
    join_oracle,
    refinement_oracle,
)


def test_canonical_form():
    p = Partition(5, [[5], [3, 1, 2], [4]])
    assert p.blocks == ((1, 2, 3), (4,), (5,))
    assert p.rank == 2
    assert p.text() == "(123)45"


def test_parse_forms():
    assert parse_partition("(123)4567", 7).blocks[0] == (1, 2, 3)
    p = parse_partition("(1,2,3)(10)", 10)
    assert p.blocks[0] == (1, 2, 3)
    assert p.m == 10


def test_enumerate_counts_against_oracle():
    assert enumerate_partitions(5, 2).poset.n == len(brute_modk_partitions(5, 2)) == 12
    assert enumerate_partitions(3, 1).poset.n == len(brute_set_partitions(3)) == 5
    assert enumerate_partitions(7, 2).poset.n == len(brute_modk_partitions(7, 2)) == 128
    assert enumerate_partitions(7, 3).poset.n == len(brute_modk_partitions(7, 3)) == 37


def test_enumerate_elements_match_oracle(pk52):
    ours = {p.blocks for p in pk52.poset.labels}
    assert ours == set(brute_modk_partitions(5, 2))


def test_count_dp_matches_bruteforce():
    for m in range(1, 8):
        for k in (1, 2, 3):
            assert count_partitions_modk(m, k) == len(brute_modk_partitions(m, k))


def test_refinement_order_matches_oracle(pk52):
    poset = pk52.poset
    for i, a in enumerate(poset.labels):
        for j, b in enumerate(poset.labels):
            assert poset.leq[i, j] == refinement_oracle(a.blocks, b.blocks)


def test_enumerate_cap():
    with pytest.raises(ResourceLimit):
        enumerate_partitions(12, 1, max_elements=100)
    with pytest.raises(ResourceLimit):
        enumerate_partitions(99, 1)


def test_enumerate_desk_scale_instance():
    pk = enumerate_partitions(10, 3)
    assert pk.poset.n == 1907
    assert pk.one_index is not None  # 10 ≡ 1 (mod 3)
    by_rank = {}
    for x in pk.poset.labels:
        by_rank[x.rank] = by_rank.get(x.rank, 0) + 1
    assert by_rank == {0: 1, 3: 210, 6: 1575 + 120, 9: 1}


def test_join_examples():
    a = parse_partition("(123)4567", 7)
    b = parse_partition("1(234)567", 7)
    assert partition_join(a, b).text() == "(1234)567"
    x = parse_partition("(12)(34)", 4)
    assert partition_join(x, Partition.zero(4)) == x
    y = parse_partition("(23)(14)", 4)
    assert partition_join(x, y) == Partition.one(4)


def test_kmub_examples(pk72):
    a = parse_partition("(123)4567", 7)
    b = parse_partition("1(234)567", 7)
    mubs = k_minimal_upper_bounds(pk72, [a, b])
    assert {x.text() for x in mubs} == {"(12345)67", "(12346)57", "(12347)56"}
    assert k_minimal_upper_bounds(pk72, [a]) == [a]
    c = parse_partition("123(456)7", 7)
    disjoint = k_minimal_upper_bounds(pk72, [a, c])
    assert disjoint == [partition_join(a, c)]
    assert len(disjoint[0].nonsingleton_blocks()) == 2


def test_building_set_I_counts():
    assert len(building_set_I(3)) == 4
    assert len(building_set_I(4)) == 11
    assert all(len(x.nonsingleton_blocks()) == 1 for x in building_set_I(6))


def test_g_set_counts():
    assert len(g_set(5, 2)) == 11
    assert len(g_set(7, 2)) == 57
    for m in (3, 4, 5):
        assert g_set(m, 1) == building_set_I(m)
    for x in g_set(7, 2):
        assert (len(x.nonsingleton_blocks()[0]) - 1) % 2 == 0
        assert x.rank % 2 == 0


def test_factors_I_examples():
    x = parse_partition("(12)(34)", 4)
    assert factors_I(x) == {parse_partition("(12)34", 4), parse_partition("12(34)", 4)}
    g = parse_partition("(123)45", 5)
    assert factors_I(g) == {g}
    y = parse_partition("(123)(45)6", 6)
    assert len(factors_I(y)) == 2


def test_factors_k_examples(pk72):
    x = parse_partition("(123)(456)7", 7)
    assert factors_k(pk72, x) == {
        parse_partition("(123)4567", 7),
        parse_partition("123(456)7", 7),
    }
    g = parse_partition("(12345)67", 7)
    assert factors_k(pk72, g) == {g}


@pytest.mark.parametrize("mk", [(5, 2), (7, 2), (7, 3)])
def test_lemma_factors_agree_exhaustive(mk, pk52, pk72, pk73):
    pk = {(5, 2): pk52, (7, 2): pk72, (7, 3): pk73}[mk]
    for x in pk.poset.labels:
        assert factors_k(pk, x) == factors_I(x)


@pytest.mark.parametrize("mk", [(5, 2), (7, 2), (7, 3)])
def test_lemma_disjoint_blocks_iff_unique_join_outside_g(mk, pk52, pk72, pk73):
    pk = {(5, 2): pk52, (7, 2): pk72, (7, 3): pk73}[mk]
    gset = pk.g_partitions()
    gmembers = set(gset)
    for a in gset:
        for b in gset:
            if a == b:
                continue
            ba = set(a.nonsingleton_blocks()[0])
            bb = set(b.nonsingleton_blocks()[0])
            mubs = k_minimal_upper_bounds(pk, [a, b])
            rhs = len(mubs) == 1 and mubs[0] not in gmembers
            assert (not (ba & bb)) == rhs


def test_chain_factors(pk72):
    x = parse_partition("(123)(456)7", 7)
    chain = [parse_partition("(123)4567", 7), x]
    expected = factors_k(pk72, x) | {parse_partition("(123)4567", 7)}
    assert factors_k_of_chain(pk72, chain) == expected
    single = [parse_partition("(12345)67", 7)]
    assert factors_k_of_chain(pk72, single) == frozenset(single)


def test_apply_permutation_examples():
    x = parse_partition("(12)34", 4)
    ident = (1, 2, 3, 4)
    assert x.permute(ident) == x
    swap12 = (2, 1, 3, 4)
    assert x.permute(swap12) == x
    swap13 = (3, 2, 1, 4)
    assert x.permute(swap13) == parse_partition("1(23)4", 4)


def test_permutation_preserves_restricted_poset(pk52):
    perm = (2, 3, 4, 5, 1)
    images = {x.permute(perm) for x in pk52.poset.labels}
    assert images == set(pk52.poset.labels)


@settings(max_examples=60, deadline=None)
@given(st.integers(2, 6), st.data())
def test_join_matches_oracle(m, data):
    parts = brute_set_partitions(m)
    a = data.draw(st.sampled_from(parts))
    b = data.draw(st.sampled_from(parts))
    ours = Partition(m, a).join(Partition(m, b))
    assert ours.blocks == join_oracle(a, b)


@settings(max_examples=60, deadline=None)
@given(st.integers(2, 6), st.data())
def test_join_commutes_with_permutation(m, data):
    parts = brute_set_partitions(m)
    a = Partition(m, data.draw(st.sampled_from(parts)))
    b = Partition(m, data.draw(st.sampled_from(parts)))
    perm = tuple(data.draw(st.permutations(list(range(1, m + 1)))))
    assert a.join(b).permute(perm) == a.permute(perm).join(b.permute(perm))


@settings(max_examples=60, deadline=None)
@given(st.integers(2, 6), st.data())
def test_refinement_iff_join_absorbs(m, data):
    parts = brute_set_partitions(m)
    a = Partition(m, data.draw(st.sampled_from(parts)))
    b = Partition(m, data.draw(st.sampled_from(parts)))
    assert a.refines(b) == (a.join(b) == b)


def test_meet_oracle_agrees_with_poset(pk41):
    for i, a in enumerate(pk41.poset.labels):
        for j, b in enumerate(pk41.poset.labels):
            met = pk41.poset.meet([i, j])
            assert pk41.partition(met).blocks == common_refinement_oracle(a.blocks, b.blocks)
