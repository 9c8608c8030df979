import random

import pytest

from conftest import RawSpec, brute_force_minimum_weight, first_one
from polarmhw.bitops import encode, generator_row, positions_of
from polarmhw.construction import CodeSpec
from polarmhw.sctree import (
    beta_combine,
    f_combine,
    g_combine,
    hard_decision,
    sc_decode,
    sc_replay,
    sc_retrace,
)

SPEC8 = CodeSpec(8, (4, 6, 7, 8))


def test_f_combine_examples():
    assert f_combine(1, 1) == 1
    assert f_combine(0, -7) == 0
    assert f_combine(0, 3) == 0
    assert f_combine(-3, 2) == -2


def test_g_combine_examples():
    assert g_combine(1, 1, 0) == 2
    assert g_combine(1, 1, 1) == 0  # cancellation: the root of zero-valued LLRs
    assert g_combine(2, 2, 0) == 4
    with pytest.raises(ValueError):
        g_combine(1, 1, 2)


def test_combines_preserve_integers():
    rng = random.Random(23)
    for _ in range(300):
        a, b = rng.randint(-9, 9), rng.randint(-9, 9)
        assert isinstance(f_combine(a, b), int)
        assert isinstance(g_combine(a, b, rng.randint(0, 1)), int)


def test_beta_combine_examples():
    assert beta_combine([0], [0]) == [0, 0]
    assert beta_combine([1], [0]) == [1, 0]
    assert beta_combine([1, 0], [1, 1]) == [0, 1, 1, 1]
    with pytest.raises(ValueError):
        beta_combine([1], [0, 0])


def test_hard_decision_rules():
    assert hard_decision(-5, 4, SPEC8) == 1
    assert hard_decision(-5, 5, SPEC8) == 0  # frozen override
    assert hard_decision(3, 4, SPEC8) == 0
    assert hard_decision(0, 4, SPEC8) == 0


def test_zero_llr_decision_is_flagged():
    out = sc_retrace([1] * 8, SPEC8, {4})
    assert out.decisions[5] == 0  # position 6 sits on a zero LLR, resolves to 0
    assert 6 in out.zero_positions


def test_all_frozen_all_ones_input():
    spec = RawSpec(8, ())
    out = sc_decode([1] * 8, spec)
    assert out.decisions == (0,) * 8
    assert all(l > 0 for l in out.llrs)
    assert out.rds == () and out.pm == 0


def test_exact_mode_integer_closure():
    rng = random.Random(31)
    for _ in range(50):
        llrs = [rng.randint(-8, 8) for _ in range(8)]
        out = sc_decode(llrs, SPEC8, record_nodes=True)
        assert all(isinstance(l, int) for l in out.llrs)
        for vec in out.node_llrs.values():
            assert all(isinstance(v, int) for v in vec)


def test_residual_input_zero_locations():
    # decode a * (1 - c) for c = row 4: zeros land exactly on the row support
    u = [0, 0, 0, 1, 0, 0, 0, 0]
    c = encode(u)
    for a in (1, 3.5):
        out = sc_decode([a * (1 - bit) for bit in c], SPEC8)
        assert out.zero_positions == (1, 2, 3, 4)
        assert out.zero_positions == positions_of(1, generator_row(4, 8))


def test_residual_zero_locations_whole_small_code():
    dm, vectors = brute_force_minimum_weight(SPEC8)
    assert dm == 4
    for u in vectors:
        i = first_one(u)
        expected = positions_of(1, generator_row(i, 8))
        c = encode(list(u))
        for a in (1, 3.5):
            out = sc_decode([a * (1 - bit) for bit in c], SPEC8)
            assert out.zero_positions == expected


def test_retrace_empty_rds_is_plain_sc():
    rng = random.Random(37)
    for _ in range(20):
        llrs = [rng.randint(-5, 5) for _ in range(8)]
        plain = sc_decode(llrs, SPEC8)
        traced = sc_retrace(llrs, SPEC8, ())
        assert traced.decisions == plain.decisions
        assert traced.llrs == plain.llrs
        assert traced.pm == 0


def test_retrace_trigger_example():
    out = sc_retrace([1] * 8, SPEC8, {4})
    assert out.decisions == (0, 0, 0, 1, 0, 0, 0, 0)
    assert out.pm == 4
    assert out.zero_positions == (5, 6, 7, 8)


def test_retrace_rejects_out_of_range():
    with pytest.raises(ValueError):
        sc_retrace([1] * 8, SPEC8, {9})


def test_replay_validates_decisions():
    with pytest.raises(ValueError):
        sc_replay([1] * 8, SPEC8, [0, 0, 1, 0, 0, 0, 0, 0])  # frozen violation
    with pytest.raises(ValueError):
        sc_replay([1] * 8, SPEC8, [0, 0, 0, 1])


def test_replay_reports_derived_reverse_decisions():
    out = sc_replay([1] * 8, SPEC8, [0, 0, 0, 1, 0, 1, 0, 0])
    assert out.rds == (4,)
    assert out.pm == 4
    assert sum(out.codeword()) == 4


def test_partial_sums_match_segment_encodings():
    rng = random.Random(41)
    for spec in (SPEC8, CodeSpec(16, (8, 12, 14, 15, 16))):
        for _ in range(10):
            llrs = [rng.randint(-6, 6) for _ in range(spec.N)]
            out = sc_decode(llrs, spec, record_nodes=True)
            for (lam, j), beta in out.node_betas.items():
                lo = (j - 1) * (1 << lam)
                seg = list(out.decisions[lo : lo + (1 << lam)])
                if lam == 0:
                    assert list(beta) == seg
                else:
                    assert list(beta) == encode(seg)


def test_positive_llrs_before_first_reverse_decision():
    # under constant-positive input, every node computed before the trigger
    # decision carries a constant positive vector
    for i in (4, 6, 7):
        out = sc_retrace([1] * 8, SPEC8, {i}, record_nodes=True)
        for (lam, j), vec in out.node_llrs.items():
            lo = (j - 1) * (1 << lam) + 1
            if lo <= i:
                first = vec[0]
                assert first > 0
                assert all(v == first for v in vec)
