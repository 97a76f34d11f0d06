"""Deciding whether a level algebra of socle degree 3 is graded.

For a cubic form ``F`` the matrix ``delta(F)`` holds the dual coordinates of
its first partials; stacking these over a set of forms gives a matrix whose
rank is ``HF(2)`` of the graded algebra they define. When that rank is
maximal the algebra is compressed, and a compressed level algebra with
generators ``F_j + Q_j`` (cubic plus quadric) is isomorphic to the one
generated by the ``F_j``. The isomorphism is an automorphism

    x_h  ->  x_h + sum_i a[h, i] x^i        (|i| = 2)

found by solving a linear system in the ``a[h, i]``. :func:`certify_graded_s3`
solves it, applies the inverse dual action to the closure and checks the
result against the closure of the cubic parts.
"""
from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from math import comb
from typing import Sequence

from .exactlin import ContractError, RationalMatrix, rank, solve_left
from .inverse_system import (
    InverseSystem,
    build,
    hilbert_function,
    is_level,
    level_generators,
    module_equal,
    q0,
    rref_polys,
)
from .multipoly import (
    Poly,
    derivative,
    dual_coeff_vector,
    frame,
    from_dual_coeffs,
    leading_form,
    mono_factorial,
)


def _check_cubic(F: Poly) -> None:
    if F.is_zero() or not F.is_homogeneous() or F.degree != 3:
        raise ContractError("expected a nonzero homogeneous cubic")


def delta(F: Poly) -> RationalMatrix:
    """``m x C(m+1, 2)`` matrix; row ``j`` holds the dual coordinates of
    ``d_j F`` over the lex-ordered degree-2 frame."""
    _check_cubic(F)
    frm = frame(F.nvars, 2)
    return RationalMatrix([dual_coeff_vector(derivative(F, j), frm)
                           for j in range(1, F.nvars + 1)], len(frm))


def delta2(F: Poly) -> RationalMatrix:
    """``C(m+1, 2) x m`` matrix of second partials over the linear frame."""
    _check_cubic(F)
    lin = frame(F.nvars, 1)
    rows = []
    for u in frame(F.nvars, 2):
        g = F
        for i, e in enumerate(u):
            for _ in range(e):
                g = derivative(g, i + 1)
        rows.append(dual_coeff_vector(g, lin))
    return RationalMatrix(rows, len(lin))


def transpose_check(F: Poly) -> bool:
    return delta(F) == delta2(F).T


def stacked_delta(Fs: Sequence[Poly]) -> RationalMatrix:
    if not Fs:
        raise ContractError("need at least one form")
    M = delta(Fs[0])
    for F in Fs[1:]:
        M = M.stack(delta(F))
    return M


def _require_s3_level(IS: InverseSystem) -> None:
    if IS.socle_degree != 3:
        raise ContractError(f"socle degree is {IS.socle_degree}, expected 3")
    if not is_level(IS)[0]:
        raise ContractError("the system is not level")


def is_compressed_s3(IS: InverseSystem) -> bool:
    """``HF(2) = min(tau * m, C(m+1, 2))`` with ``m = HF(1)``.

    Cross-checked: the stacked delta matrix of the leading forms has rank
    ``HF(2)`` of the system they generate.
    """
    _require_s3_level(IS)
    _, m, n, tau = hilbert_function(IS)
    Fs = [leading_form(g) for g in level_generators(IS)]
    if rank(stacked_delta(Fs)) != hilbert_function(build(Fs, IS.nvars))[2]:
        raise AssertionError("stacked delta rank differs from HF(2) of the leading forms")
    return n == min(tau * m, comb(m + 1, 2))


# ---------------------------------------------------------------------------
# automorphisms with identity Jacobian


@dataclass(frozen=True)
class AutomorphismCoeffs:
    """``x_h -> x_h + sum_i coeffs[h, i] x^i`` over the lex degree-2 frame,
    stored flat with ``h`` major."""

    nvars: int
    coeffs: tuple[Fraction, ...]

    def __post_init__(self):
        if len(self.coeffs) != self.nvars * comb(self.nvars + 1, 2):
            raise ContractError("wrong number of automorphism coefficients")

    @classmethod
    def zero(cls, nvars: int) -> "AutomorphismCoeffs":
        return cls(nvars, (Fraction(0),) * (nvars * comb(nvars + 1, 2)))

    def is_zero(self) -> bool:
        return not any(self.coeffs)

    def substitution(self) -> list[Poly]:
        """Images of ``x_1, ..., x_m``."""
        frm = frame(self.nvars, 2)
        k = len(frm)
        out = []
        for h in range(self.nvars):
            p = Poly.var(h + 1, self.nvars)
            p = p + Poly(self.nvars, dict(zip(frm, self.coeffs[h * k:(h + 1) * k])))
            out.append(p)
        return out


def substitution_matrix(images: Sequence[Poly], nvars: int, s: int) -> RationalMatrix:
    """Matrix of the algebra endomorphism ``x_h -> images[h]`` of
    ``R / m^(s+1)`` on the monomial basis of degree ``<= s`` (ascending
    degree, lex inside a degree). Column ``j`` is the image of basis
    element ``j``."""
    E = frame(nvars, s, "upto")
    memo: dict = {E[0]: Poly.constant(1, nvars)}
    for mono in E[1:]:
        h = next(i for i, e in enumerate(mono) if e)
        prev = mono[:h] + (mono[h] - 1,) + mono[h + 1:]
        memo[mono] = (memo[prev] * images[h]).truncate(s)
    cols = [[memo[e].coeff(b) for b in E] for e in E]
    return RationalMatrix(cols, len(E)).T


def apply_automorphism_dual(a: AutomorphismCoeffs, polys: Sequence[Poly], s: int,
                            inverse: bool = False) -> list[Poly]:
    """Apply the dual ``phi*`` of ``phi = a`` (or its inverse) to polynomials
    of degree ``<= s``.

    In dual coordinates over the divided-power basis, ``[phi* g] = [g] M``
    where ``M`` is :func:`substitution_matrix`.
    """
    n = a.nvars
    if a.is_zero():
        return list(polys)
    E = frame(n, s, "upto")
    M = substitution_matrix(a.substitution(), n, s)
    out = []
    for g in polys:
        if g.nvars != n:
            raise ContractError("polynomial has the wrong number of variables")
        if g and g.degree > s:
            raise ContractError(f"polynomial of degree {g.degree} exceeds {s}")
        v = dual_coeff_vector(g, E)
        w = solve_left(M, v) if inverse else v @ M
        if w is None:
            raise AssertionError("substitution matrix is not invertible")
        out.append(from_dual_coeffs(w, E, n))
    return out


def build_automorphism_system(Fs: Sequence[Poly], Qs: Sequence[Poly]
                              ) -> tuple[RationalMatrix, tuple[Fraction, ...]]:
    """Linear system ``a T = rhs`` for ``phi* F_j = F_j + Q_j``.

    Rows of ``T`` are the unknowns ``a[h, i]`` (``h`` major, ``i`` over the
    lex degree-2 frame); columns are the pairs ``(j, u)``, ``u`` over the same
    frame. The cubic part of ``phi(x^u)`` is
    ``sum_h u_h x^(u - e_h) * sum_i a[h, i] x^i``, so the coefficient of
    ``a[h, i]`` in the ``u``-th dual coordinate of ``phi* F_j`` is
    ``u_h * alpha_j[u - e_h + i]``, with ``alpha_j`` the dual coordinates of
    ``F_j``. The right-hand side holds the dual coordinates of the ``Q_j``.
    """
    if len(Fs) != len(Qs) or not Fs:
        raise ContractError("need matching nonempty lists of cubics and quadrics")
    n = Fs[0].nvars
    for F, Q in zip(Fs, Qs):
        _check_cubic(F)
        if Q.nvars != n or F.nvars != n:
            raise ContractError("forms in different numbers of variables")
        if Q and (not Q.is_homogeneous() or Q.degree != 2):
            raise ContractError("expected a homogeneous quadric (or zero)")
    quad = frame(n, 2)
    alphas = [{mono: c * mono_factorial(mono) for mono, c in F.terms.items()} for F in Fs]
    rows = []
    for h in range(n):
        for i in quad:
            row = []
            for alpha in alphas:
                for u in quad:
                    if not u[h]:
                        row.append(0)
                        continue
                    idx = tuple(uu - (1 if k == h else 0) + ii
                                for k, (uu, ii) in enumerate(zip(u, i)))
                    row.append(u[h] * alpha.get(idx, 0))
            rows.append(row)
    rhs = []
    for Q in Qs:
        rhs.extend(dual_coeff_vector(Q, quad))
    return RationalMatrix(rows, len(Fs) * len(quad)), tuple(rhs)


# ---------------------------------------------------------------------------
# the certifier


@dataclass
class GradedCertificate:
    coeffs: AutomorphismCoeffs
    system_rank: int
    verified: bool
    method: str = "direct-system"


@dataclass
class Verdict:
    """``status`` is ``"graded"``, ``"not_graded"`` or ``"unknown"``."""

    status: str
    certificate: GradedCertificate | None = None
    witness: dict | None = None
    reason: str = ""
    details: dict = field(default_factory=dict)


def _closure_image_matches(a: AutomorphismCoeffs, stripped: InverseSystem,
                           graded: InverseSystem) -> bool:
    """``(phi*)^-1`` maps the closure of ``stripped`` onto that of ``graded``."""
    image = apply_automorphism_dual(a, list(stripped.closure), 3, inverse=True)
    return tuple(rref_polys(image, stripped.nvars)) == graded.closure


def certify_graded_s3(IS: InverseSystem) -> Verdict:
    """Decide gradedness of a level system of socle degree 3 where possible.

    ``not_graded`` comes with the Hilbert functions of the algebra and of
    ``Q(0)`` as witness; ``graded`` comes with an automorphism whose inverse
    dual action carries the closure onto the closure of the cubic parts;
    ``unknown`` means the identity-Jacobian ansatz found nothing, which does
    not rule out gradedness.
    """
    _require_s3_level(IS)
    n = IS.nvars
    gens = level_generators(IS)
    Fs = [g.homogeneous_part(3) for g in gens]
    Qs = [g.homogeneous_part(2) for g in gens]
    stripped = build([F + Q for F, Q in zip(Fs, Qs)], n)
    graded = build(Fs, n)
    hf, hf0 = hilbert_function(IS), hilbert_function(q0(IS))
    if hf != hf0:
        return Verdict("not_graded", witness={"hvector": list(hf), "q0_hvector": list(hf0)},
                       reason="the associated graded ring has a nonzero C(1) part")
    if not module_equal(IS, stripped):
        return Verdict("unknown", reason="dropping terms of degree <= 1 changes the module")
    zero = AutomorphismCoeffs.zero(n)
    if module_equal(stripped, graded):
        cert = GradedCertificate(zero, 0, True)
        return Verdict("graded", certificate=cert,
                       reason="the closure already equals that of the leading forms")
    T, rhs = build_automorphism_system(Fs, Qs)
    sol = solve_left(T, rhs)
    r = rank(T)
    if sol is None:
        return Verdict("unknown", reason="the automorphism system is incompatible",
                       details={"system_rank": r})
    a = AutomorphismCoeffs(n, sol)
    ok = _closure_image_matches(a, stripped, graded)
    cert = GradedCertificate(a, r, ok)
    if not ok:
        return Verdict("unknown", certificate=cert,
                       reason="the solved automorphism does not carry the closure over")
    return Verdict("graded", certificate=cert, reason="automorphism found and verified")


# ---------------------------------------------------------------------------
# random instances


def random_cubic(nvars: int, rng: random.Random, lo: int = -10, hi: int = 10) -> Poly:
    return Poly(nvars, {mono: rng.randint(lo, hi) for mono in frame(nvars, 3)})


def random_quadric(nvars: int, rng: random.Random, lo: int = -10, hi: int = 10) -> Poly:
    return Poly(nvars, {mono: rng.randint(lo, hi) for mono in frame(nvars, 2)})


def random_compressed_system(nvars: int, tau: int, rng: random.Random,
                             max_tries: int = 1000) -> InverseSystem:
    """Generators ``F_j + Q_j`` with integer coefficients in ``[-10, 10]``,
    resampled until the stacked delta matrix has rank
    ``min(tau * m, C(m+1, 2))``."""
    target = min(tau * nvars, comb(nvars + 1, 2))
    for _ in range(max_tries):
        Fs = [random_cubic(nvars, rng) for _ in range(tau)]
        if any(F.is_zero() for F in Fs) or rank(stacked_delta(Fs)) != target:
            continue
        if len(rref_polys(Fs, nvars)) != tau:
            continue
        return build([F + random_quadric(nvars, rng) for F in Fs], nvars)
    raise RuntimeError("no compressed instance found")
