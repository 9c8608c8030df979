import random

import pytest

from conftest import brute_force_minimum_weight, first_one, group_by_trigger, random_specs

from polarmhw.bitops import encode, generator_row_weight, min_distance
from polarmhw.bound import bound_count, per_subset_bound, zero_capacity_set
from polarmhw.construction import CodeSpec, construct_ga, construct_pw
from polarmhw.mhw import (
    EnumFormatError,
    ExhaustiveCapError,
    enumerate_subset_scl,
    enumerate_zero_split,
    exhaustive_mhw,
    read_enumeration,
    scl_global_search,
    search_subset,
    write_enumeration,
    zero_split_subset,
)
from polarmhw.sctree import sc_replay

SPEC8 = CodeSpec(8, (4, 6, 7, 8))


def weight(u):
    return sum(encode(list(u)))


# ---- exhaustive oracle ----


def test_exhaustive_examples():
    out = exhaustive_mhw(SPEC8)
    assert (out.d_m, out.count) == (4, 14)
    assert out.method == "EXHAUSTIVE"
    assert out.max_list_used == 0

    single = exhaustive_mhw(CodeSpec(4, (4,)))
    assert (single.d_m, single.count) == (4, 1)
    assert single.vectors == ((0, 0, 0, 1),)

    full = exhaustive_mhw(CodeSpec(4, (1, 2, 3, 4)))
    assert (full.d_m, full.count) == (1, 4)


def test_exhaustive_matches_scalar_reference():
    for spec in random_specs(25, (8, 16, 32), seed=31, max_K=10):
        d_ref, vec_ref = brute_force_minimum_weight(spec)
        out = exhaustive_mhw(spec)
        assert out.d_m == d_ref == min_distance(spec)[0]
        assert set(out.vectors) == vec_ref


def test_exhaustive_cap_refuses_large_codes():
    spec = CodeSpec(16, tuple(range(1, 12)))
    with pytest.raises(ExhaustiveCapError):
        exhaustive_mhw(spec, cap=10)
    assert exhaustive_mhw(spec, cap=11).count >= 1


# ---- constrained subset searches ----


def test_search_subset_examples():
    four = search_subset(SPEC8, 4, 6, L=4)
    assert len(four) == 4
    expected = {u for u in brute_force_minimum_weight(SPEC8)[1] if u[3] and u[5]}
    assert set(four) == expected

    one = search_subset(SPEC8, 4, 8, L=1)
    assert one == [(0, 0, 0, 1, 0, 0, 0, 1)]
    assert weight(one[0]) == 4

    assert len(search_subset(SPEC8, 7, 8, L=1)) == 1


def test_search_subset_rejects_invalid_pairs():
    with pytest.raises(ValueError):
        search_subset(SPEC8, 5, 6, L=2)
    with pytest.raises(ValueError):
        search_subset(SPEC8, 4, 5, L=2)
    with pytest.raises(ValueError):
        search_subset(SPEC8, 7, 6, L=2)


def test_subset_scl_enumeration_length_eight():
    out = enumerate_subset_scl(SPEC8)
    assert (out.d_m, out.count) == (4, 14)
    assert out.method == "SUBSET_SCL"
    assert out.max_list_used == 4
    assert out.warning is None
    assert set(out.vectors) == brute_force_minimum_weight(SPEC8)[1]


def test_subset_scl_trivial_single_bit():
    out = enumerate_subset_scl(CodeSpec(4, (4,)))
    assert (out.count, out.max_list_used) == (1, 0)
    assert out.vectors == ((0, 0, 0, 1),)


def test_subset_scl_matches_oracle_on_random_sets():
    for spec in random_specs(20, (8, 16, 32), seed=32, max_K=8):
        out = enumerate_subset_scl(spec)
        assert set(out.vectors) == brute_force_minimum_weight(spec)[1]
        assert out.warning is None


# ---- zero-split walker ----


def test_zero_split_subset_examples():
    leaves, branches, kills = zero_split_subset(SPEC8, 4)
    assert len(leaves) == 8
    assert branches == {6, 7, 8}
    assert branches == zero_capacity_set(4, 8) & set(SPEC8.A)
    assert kills == 0

    leaves, branches, _ = zero_split_subset(SPEC8, 7)
    assert len(leaves) == 2
    assert branches == {8}


def test_zero_split_enumeration_matches_oracle():
    out = enumerate_zero_split(SPEC8)
    assert (out.d_m, out.count) == (4, 14)
    for spec in random_specs(20, (8, 16, 32), seed=33, max_K=8):
        got = enumerate_zero_split(spec)
        assert set(got.vectors) == brute_force_minimum_weight(spec)[1]


def test_zero_split_leaves_always_reach_minimum_weight():
    # every surviving branch must land exactly on the minimum weight; the
    # slack of the counting bound is entirely in the killed branches
    for spec in random_specs(20, (8, 16, 32), seed=34, max_K=8):
        d_m, a_m = min_distance(spec)
        for i in a_m:
            leaves, branches, kills = zero_split_subset(spec, i)
            for u in leaves:
                assert weight(u) == d_m
            assert len(leaves) <= per_subset_bound(i, spec)
            # the walk is a binary tree with at most one fork per branch
            # position; kills prune subtrees early, so terminals can only
            # fall short of the full 2**branches
            assert len(leaves) + kills <= 2 ** len(branches)


def test_branch_positions_are_zero_capacity_information_positions():
    for spec in random_specs(15, (8, 16), seed=35, max_K=8):
        info = set(spec.A)
        for i in min_distance(spec)[1]:
            _, branches, _ = zero_split_subset(spec, i)
            assert branches <= zero_capacity_set(i, spec.N) & info


# ---- global list search ----


def test_global_search_examples():
    out = scl_global_search(SPEC8, L=16)
    assert (out.d_m, out.count) == (4, 14)
    assert out.warning is None
    assert out.max_list_used == 16

    out = scl_global_search(SPEC8, L=15)
    assert out.count == 14
    assert out.warning is None

    out = scl_global_search(SPEC8, L=14)
    assert out.warning is not None and "possible omission" in out.warning

    tiny = scl_global_search(CodeSpec(8, (8,)), L=2)
    assert tiny.count == 1
    assert tiny.vectors == ((0, 0, 0, 0, 0, 0, 0, 1),)


# ---- cross-method agreement and structural laws ----


def test_four_methods_agree():
    specs = [
        SPEC8,
        construct_pw(16, 8),
        construct_pw(32, 8),
        construct_ga(16, 8, 0.0),
        construct_ga(32, 10, 2.0),
    ] + random_specs(10, (8, 16), seed=36, max_K=8)
    for spec in specs:
        oracle = exhaustive_mhw(spec)
        wide = scl_global_search(spec, L=bound_count(spec).total + 1)
        subset = enumerate_subset_scl(spec)
        split = enumerate_zero_split(spec)
        assert set(subset.vectors) == set(oracle.vectors)
        assert set(split.vectors) == set(oracle.vectors)
        assert set(wide.vectors) == set(oracle.vectors)
        assert wide.warning is None


def test_enumerated_vectors_partition_by_trigger_and_split():
    for spec in random_specs(15, (8, 16, 32), seed=37, max_K=8):
        out = enumerate_zero_split(spec)
        info = set(spec.A)
        groups = group_by_trigger(set(out.vectors))
        d_m, a_m = min_distance(spec)
        assert set(groups) <= set(a_m)
        for i, members in groups.items():
            assert len(members) <= per_subset_bound(i, spec)
            allowed = zero_capacity_set(i, spec.N) & info
            for u in members:
                later = [p for p in range(i + 1, spec.N + 1) if u[p - 1]]
                if later:
                    assert later[0] in allowed


def test_replaying_enumerated_vectors_flips_only_the_trigger():
    for spec in random_specs(12, (8, 16), seed=38, max_K=8):
        d_m, _ = min_distance(spec)
        for u in enumerate_zero_split(spec).vectors:
            i = first_one(u)
            out = sc_replay([1] * spec.N, spec, list(u))
            assert out.rds == (i,)
            assert weight(u) == generator_row_weight(i, spec.N) == d_m


def test_thread_count_does_not_change_results():
    spec = construct_pw(32, 12)
    a = enumerate_subset_scl(spec, threads=1)
    b = enumerate_subset_scl(spec, threads=4)
    assert a == b
    c = enumerate_zero_split(spec, threads=1)
    d = enumerate_zero_split(spec, threads=4)
    assert c == d


# ---- enumeration files ----


def test_enumeration_file_round_trip(tmp_path):
    out = enumerate_zero_split(SPEC8)
    path = tmp_path / "mhw.txt"
    write_enumeration(path, SPEC8, out)
    spec_back, result_back = read_enumeration(path)
    assert spec_back.N == 8 and spec_back.A == (4, 6, 7, 8)
    assert result_back == out

    text = path.read_text()
    assert text.startswith("polarmhw-enum 1\n")
    assert "count=14" in text


def test_enumeration_file_is_byte_stable(tmp_path):
    p1, p2 = tmp_path / "a.txt", tmp_path / "b.txt"
    write_enumeration(p1, SPEC8, enumerate_zero_split(SPEC8))
    write_enumeration(p2, SPEC8, enumerate_zero_split(SPEC8))
    assert p1.read_bytes() == p2.read_bytes()


def test_enumeration_file_rejects_corruption(tmp_path):
    path = tmp_path / "mhw.txt"
    write_enumeration(path, SPEC8, enumerate_zero_split(SPEC8))
    good = path.read_text().splitlines()

    bad = tmp_path / "bad.txt"
    bad.write_text("not an enumeration\n")
    with pytest.raises(EnumFormatError):
        read_enumeration(bad)

    bad.write_text("\n".join(good[:-1]) + "\n")  # drop one record
    with pytest.raises(EnumFormatError):
        read_enumeration(bad)

    swapped = list(good)
    swapped[8] = swapped[8].replace("msg=", "msg=f", 1)
    bad.write_text("\n".join(swapped) + "\n")
    with pytest.raises(EnumFormatError):
        read_enumeration(bad)
