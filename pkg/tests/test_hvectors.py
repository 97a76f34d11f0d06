from __future__ import annotations

from itertools import combinations_with_replacement
from math import comb

import pytest
from hypothesis import given, strategies as st

from apolar.hvectors import (
    NOT_GRADED_ADMISSIBLE,
    InadmissibleError,
    UnsupportedError,
    admissibility_violation,
    construct,
    construction_branch,
    cyclic_family,
    enumerate_admissible,
    is_admissible_level_local,
    is_o_sequence,
    macaulay_growth,
    macaulay_rep,
)
from apolar.inverse_system import build, is_level
from apolar.multipoly import format_poly


def lex_segment_growth(n, d):
    """Brute force: HF(d+1) of the quotient by the lex-segment ideal whose
    complement in degree d is the last n monomials (in enough variables)."""
    v = 1
    while comb(v + d - 1, d) < n:
        v += 1
    v += 1
    # monomials as sorted tuples of variable indices; lex order = tuple order
    monos = sorted(combinations_with_replacement(range(v), d))
    tail = set(monos[len(monos) - n:]) if n else set()
    count = 0
    for m in combinations_with_replacement(range(v), d + 1):
        if all(m[:k] + m[k + 1:] in tail for k in range(d + 1)):
            count += 1
    return count


@pytest.mark.parametrize("n, d, expected", [(8, 2, 13), (0, 2, 0), (5, 2, 7), (12, 2, 23), (3, 1, 6)])
def test_growth_examples(n, d, expected):
    assert macaulay_growth(n, d) == expected


def test_macaulay_rep_is_greedy():
    assert macaulay_rep(8, 2).terms == ((4, 2), (2, 1))
    assert macaulay_rep(5, 2).terms == ((3, 2), (2, 1))
    with pytest.raises(ValueError):
        macaulay_rep(-1, 2)


@pytest.mark.parametrize("d", [1, 2, 3])
def test_growth_matches_lex_segments(d):
    for n in range(31):
        assert macaulay_growth(n, d) == lex_segment_growth(n, d), n


@given(st.integers(0, 500), st.integers(1, 5))
def test_macaulay_rep_reconstructs_n(n, d):
    rep = macaulay_rep(n, d)
    assert sum(comb(k, i) for k, i in rep.terms) == n
    ks = [k for k, _ in rep.terms]
    assert ks == sorted(set(ks), reverse=True)
    assert all(k >= i >= 1 for k, i in rep.terms)


def test_o_sequences():
    assert not is_o_sequence((1, 2, 4, 1))
    assert is_o_sequence((1, 13, 12, 13))
    assert is_o_sequence((1, 7, 28))
    assert not is_o_sequence((2, 1))


@pytest.mark.parametrize("H", [(1, 3, 2, 1), (1, 4, 5, 6), (1, 13, 12, 13), (1, 5), (1, 3, 6)])
def test_admissible(H):
    assert is_admissible_level_local(H)


@pytest.mark.parametrize("H, reason", [
    ((1, 2, 4, 1), "n > binom(m+1,2)"),
    ((1, 3, 2, 5), "tau > n^<2>"),
    ((1, 3, 4, 1), "n > tau*m"),
    ((1, 2, 4), "tau > binom(m+1,2)"),
])
def test_rejection_reason(H, reason):
    assert admissibility_violation(H) == reason
    with pytest.raises(InadmissibleError) as err:
        construct(H)
    assert err.value.reason == reason and reason in str(err.value)


@pytest.mark.parametrize("m, tau", [(1, 1), (2, 1), (3, 2), (5, 3)])
def test_one_more_than_tau_m_is_rejected(m, tau):
    assert not is_admissible_level_local((1, m, tau * m + 1, tau))


def test_out_of_range():
    with pytest.raises(UnsupportedError):
        is_admissible_level_local((1, 2, 2, 2, 1))
    with pytest.raises(UnsupportedError):
        construct((1,))
    with pytest.raises(InadmissibleError):
        construct((1, 2, 0))


def test_cyclic_case_a_generators():
    rep = construct((1, 3, 6, 2))
    assert rep.tag == "cyclic-a" and rep.homogeneous
    assert [format_poly(g) for g in rep.generators] == [
        "x1^3 + x2^3 + x3^3", "x1^2*x2 + x1*x3^2 + x2^2*x3"]
    assert rep.verified_hvector == (1, 3, 6, 2) and rep.level


@pytest.mark.parametrize("H, tag", [
    ((1, 4), "linear"),
    ((1, 3, 2), "degree2"),
    ((1, 2, 3), "degree2"),
    ((1, 15, 14, 14), "cubes-with-square-tail"),
    ((1, 4, 5, 6), "lex-cubes-hpos"),
    ((1, 3, 3, 4), "lex-cubes-h0"),
    ((1, 3, 2, 1), "cubes-with-square-tail"),
    ((1, 3, 5, 2), "cyclic-b"),
    ((1, 4, 8, 4), "cyclic-c"),
])
def test_branch_tags(H, tag):
    assert construction_branch(H) == tag
    rep = construct(H)
    assert rep.tag == tag and rep.verified_hvector == H
    assert rep.homogeneous == all(g.is_homogeneous() for g in rep.generators)


def test_reported_result_recomputes():
    rep = construct((1, 4, 5, 6))
    S = build(rep.generators, 4)
    assert S.hvector == (1, 4, 5, 6) and is_level(S) == (True, 6)


def test_cyclic_case_d_is_reached():
    tags = {e.tag for m in range(2, 6) for e in enumerate_admissible(m, 3)}
    assert {"cyclic-a", "cyclic-b", "cyclic-c", "cyclic-d"} <= tags


@pytest.mark.parametrize("m", range(1, 13))
def test_cyclic_families_partition(m):
    families = [set(map(lambda p: p.leading_monomial(), cyclic_family(j, m))) for j in range(m)]
    assert all(len(f) == m for f in families)
    for i in range(m):
        for j in range(i + 1, m):
            assert not families[i] & families[j]


def test_cyclic_outputs_are_homogeneous():
    for m in range(2, 5):
        for e in enumerate_admissible(m, 3):
            if e.tag.startswith("cyclic"):
                assert construct(e.hvector).homogeneous


def test_enumerate_examples():
    assert [e.hvector for e in enumerate_admissible(1, 3)] == [(1, 1, 1, 1)]
    assert [e.hvector for e in enumerate_admissible(2, 2)] == [(1, 2, 1), (1, 2, 2), (1, 2, 3)]
    got = {e.hvector[2] for e in enumerate_admissible(3, 3) if e.hvector[3] == 2}
    oracle = {n for n in range(1, 7)
              if is_o_sequence((1, 3, n, 2)) and n <= 2 * 3}
    assert got == oracle
    notes = {e.hvector: e.note for e in enumerate_admissible(3, 3)}
    for H in NOT_GRADED_ADMISSIBLE:
        assert notes[H]


def test_enumerate_caps():
    assert all(e.hvector[3] <= 2 for e in enumerate_admissible(4, 3, max_tau=2))
    assert all(e.hvector[2] <= 3 for e in enumerate_admissible(4, 3, max_n=3))
    with pytest.raises(UnsupportedError):
        enumerate_admissible(3, 4)
