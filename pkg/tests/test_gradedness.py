from __future__ import annotations

import random
from fractions import Fraction as Q
from math import comb

import pytest
from hypothesis import given, settings, strategies as st

from apolar.exactlin import ContractError, RationalMatrix, rank
from apolar.gradedness import (
    AutomorphismCoeffs,
    apply_automorphism_dual,
    build_automorphism_system,
    certify_graded_s3,
    delta,
    delta2,
    is_compressed_s3,
    random_compressed_system,
    random_cubic,
    stacked_delta,
    substitution_matrix,
    transpose_check,
)
from apolar.inverse_system import build, hilbert_function, is_level, module_equal, q0
from apolar.multipoly import Poly, frame, parse

from conftest import system

MIXED_TAIL = ["x^3+t^2", "x^2*y", "x*y^2", "z^3", "x*z^2", "y^3"]


def test_delta_examples():
    D = delta(parse("x1^3", 2))
    assert D.row(0) == (6, 0, 0) and D.row(1) == (0, 0, 0)
    D = delta(parse("x1*x2*x3", 3))
    # frame: x1^2, x1x2, x1x3, x2^2, x2x3, x3^2
    assert D.row(0) == (0, 0, 0, 0, 1, 0)
    assert D.row(1) == (0, 0, 1, 0, 0, 0)
    assert D.row(2) == (0, 1, 0, 0, 0, 0)


@pytest.mark.parametrize("text", ["0", "x1^2", "x1^3 + x2", "x1^4"])
def test_delta_rejects_non_cubics(text):
    with pytest.raises(ContractError):
        delta(parse(text, 2))


def test_delta2_mirrors_delta():
    F = parse("x1^3", 2)
    assert delta2(F).column(0) == (6, 0, 0) and delta2(F).column(1) == (0, 0, 0)
    G = parse("1/3*x1^3 - 5/7*x1*x2^2 + 2/9*x2^3", 2)
    assert transpose_check(G)
    assert all(isinstance(v, Q) for v in delta(G).row(1))
    assert delta(G).row(1) == (0, Q(-10, 7), Q(4, 3))


@settings(max_examples=50, deadline=None)
@given(st.integers(1, 4), st.integers(0, 2**32 - 1))
def test_transpose_lemma(m, seed):
    F = random_cubic(m, random.Random(seed))
    if F:
        assert transpose_check(F)


@settings(max_examples=30, deadline=None)
@given(st.integers(1, 4), st.integers(1, 4), st.integers(0, 2**32 - 1))
def test_stacked_rank_is_hf2(m, tau, seed):
    rng = random.Random(seed)
    Fs = [random_cubic(m, rng, -2, 2) for _ in range(tau)]
    Fs = [F for F in Fs if F]
    if not Fs:
        return
    assert rank(stacked_delta(Fs)) == hilbert_function(build(Fs, m))[2]


def test_compressed_examples():
    assert not is_compressed_s3(system(["x1^3", "x2^3"], 2))
    assert is_compressed_s3(system(["x1^3 - 2*x1^2*x2 + 3*x1*x2^2 + 5*x2^3"], 2))
    # partials of the forms fill the whole of degree 2
    assert is_compressed_s3(system(["x1^3", "x1*x2^2", "x2^3"], 2))
    with pytest.raises(ContractError):
        is_compressed_s3(system(["x1^2"], 1))


def test_system_without_tails_has_zero_rhs():
    Fs = [parse("x1^3 + x2^3", 2), parse("x1^2*x2", 2)]
    T, rhs = build_automorphism_system(Fs, [Poly.zero(2)] * 2)
    assert not any(rhs)
    with pytest.raises(ContractError):
        build_automorphism_system(Fs, [parse("x1", 2)] * 2)


def test_one_variable_system():
    beta = Q(7, 3)
    T, rhs = build_automorphism_system([parse("x1^3", 1)], [Poly(1, {(2,): beta})])
    assert T.row(0) == (12,) and rhs == (2 * beta,)
    S = build([parse("x1^3", 1) + Poly(1, {(2,): beta})], 1)
    v = certify_graded_s3(S)
    assert v.status == "graded" and v.certificate.verified


def test_one_variable_automorphism():
    beta = Q(5)
    f = parse("x1^3 + 5*x1^2", 1)
    a = AutomorphismCoeffs(1, (beta / 6,))
    image = apply_automorphism_dual(a, [f], 3, inverse=True)
    assert module_equal(build(image, 1), build([parse("x1^3", 1)], 1))


def test_system_block_structure():
    """Rows for x_h against the columns of one generator are built from the
    first partials of that generator."""
    rng = random.Random(5)
    m = 3
    Fs = [random_cubic(m, rng) for _ in range(2)]
    T, _ = build_automorphism_system(Fs, [Poly.zero(m)] * 2)
    quad = frame(m, 2)
    k = len(quad)
    for j, F in enumerate(Fs):
        D = delta(F)
        for h in range(m):
            for col, u in enumerate(quad):
                got = [T[h * k + i, j * k + col] for i in range(k)]
                if u[h] == 2:
                    assert got == [2 * v for v in D.row(h)]
                elif u[h] == 1:
                    other = next(l for l in range(m) if u[l] and l != h)
                    assert got == list(D.row(other))
                else:
                    assert not any(got)


def test_zero_automorphism_is_identity():
    polys = [parse("x1^3 + x1*x2 + 1", 2)]
    assert apply_automorphism_dual(AutomorphismCoeffs.zero(2), polys, 3) == polys
    assert substitution_matrix([Poly.var(1, 2), Poly.var(2, 2)], 2, 3) == RationalMatrix.identity(10)


@settings(max_examples=30, deadline=None)
@given(st.integers(1, 3), st.integers(0, 2**32 - 1))
def test_automorphism_round_trip(m, seed):
    rng = random.Random(seed)
    a = AutomorphismCoeffs(m, tuple(Q(rng.randint(-3, 3), rng.randint(1, 3))
                                    for _ in range(m * comb(m + 1, 2))))
    polys = [random_cubic(m, rng) + parse("x1^2", m), parse("x1", m)]
    forward = apply_automorphism_dual(a, polys, 3)
    assert apply_automorphism_dual(a, forward, 3, inverse=True) == polys
    # the dual action maps closures to closures
    S = build(polys, m)
    image = apply_automorphism_dual(a, list(S.closure), 3)
    assert module_equal(build(image, m), build(forward, m))


def test_certify_examples():
    v = certify_graded_s3(system(MIXED_TAIL, 4, ["x", "y", "z", "t"]))
    assert v.status == "not_graded"
    assert v.witness == {"hvector": [1, 4, 5, 6], "q0_hvector": [1, 3, 5, 6]}
    v = certify_graded_s3(system(["x1^3", "x2^3"], 2))
    assert v.status == "graded" and v.certificate.coeffs.is_zero()
    with pytest.raises(ContractError):
        certify_graded_s3(system(["x1^2"], 1))
    with pytest.raises(ContractError):
        certify_graded_s3(system(["x1^3", "x2^2"], 2))


def test_saturated_case_needs_no_automorphism():
    # n = binom(m+1, 2) <= tau*m: the closure holds every quadric
    S = system(["x1^3 + 3*x1*x2", "x1*x2^2 - x2^2", "x2^3 + x1^2"], 2)
    assert hilbert_function(S) == (1, 2, 3, 3)
    v = certify_graded_s3(S)
    assert v.status == "graded" and v.certificate.coeffs.is_zero() and v.certificate.verified


@pytest.mark.parametrize("m, tau", [(2, 1), (3, 1), (3, 2), (2, 2)])
def test_compressed_q0_is_compressed(m, tau):
    rng = random.Random(m * 10 + tau)
    for _ in range(5):
        S = random_compressed_system(m, tau, rng)
        assert is_compressed_s3(S)
        assert hilbert_function(q0(S)) == hilbert_function(S)
        assert is_compressed_s3(q0(S))


@settings(max_examples=25, deadline=None)
@given(st.integers(0, 2**32 - 1))
def test_certifier_soundness(seed):
    rng = random.Random(seed)
    m = rng.randint(1, 3)
    tau = rng.randint(1, 3)
    gens = [random_cubic(m, rng, -2, 2) + Poly(m, {mono: rng.randint(-2, 2) for mono in frame(m, 2)})
            for _ in range(tau)]
    if any(not g.homogeneous_part(3) for g in gens):
        return
    S = build(gens, m)
    if S.socle_degree != 3 or not is_level(S)[0]:
        return
    v = certify_graded_s3(S)
    if v.status == "graded":
        assert v.certificate.verified
        image = apply_automorphism_dual(v.certificate.coeffs, list(S.closure), 3, inverse=True)
        assert module_equal(build(image, m), q0(S))
    elif v.status == "not_graded":
        assert hilbert_function(S) != hilbert_function(q0(S))
