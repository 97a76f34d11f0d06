"""Admissible h-vectors of level local algebras of socle degree at most 3.

Covers Macaulay's growth bound, the admissibility test and explicit inverse
systems realising every admissible h-vector. Each construction is checked
by recomputing the Hilbert function and the level property before it is
returned.

Construction tags:

``linear``
    socle degree 1, the variables themselves.
``degree2``
    socle degree 2, lex-first quadric monomials or squares with a tail.
``cubes-with-square-tail``
    ``m > n >= tau``: cubes of single variables, the last generator carrying
    the remaining cubes plus squares of the unused variables.
``cyclic-a`` ... ``cyclic-d``
    ``n >= max(tau, m)``: homogeneous cubics built from the cyclic families
    ``D_j = {x_i^2 x_(i+j)}`` (indices read mod m).
``lex-cubes-h0``, ``lex-cubes-hpos``
    ``n < tau``: lex-first cubic monomials, with squares of the unused
    variables added to the first generator.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from math import comb
from typing import Sequence

from .inverse_system import HVector, build, is_level
from .multipoly import Poly, deglex_key, frame


class InadmissibleError(ValueError):
    """The h-vector is not the h-vector of any level local algebra."""

    def __init__(self, hvector, reason: str):
        super().__init__(f"{tuple(hvector)} is not admissible: {reason}")
        self.hvector = tuple(hvector)
        self.reason = reason


class UnsupportedError(ValueError):
    """Outside the range where admissibility is decided (socle degree 1..3)."""


# ---------------------------------------------------------------------------
# Macaulay growth


@dataclass(frozen=True)
class MacaulayRep:
    """``n = C(k_d, d) + C(k_(d-1), d-1) + ... + C(k_j, j)`` with
    ``k_d > k_(d-1) > ... > k_j >= j >= 1``; ``terms`` lists ``(k_i, i)``."""

    n: int
    d: int
    terms: tuple[tuple[int, int], ...]

    def growth(self) -> int:
        return sum(comb(k + 1, i + 1) for k, i in self.terms)


def macaulay_rep(n: int, d: int) -> MacaulayRep:
    if n < 0 or d < 1:
        raise ValueError("macaulay_rep needs n >= 0 and d >= 1")
    terms = []
    rest = n
    i = d
    while rest and i >= 1:
        k = i
        while comb(k + 1, i) <= rest:
            k += 1
        terms.append((k, i))
        rest -= comb(k, i)
        i -= 1
    return MacaulayRep(n, d, tuple(terms))


def macaulay_growth(n: int, d: int) -> int:
    """``n^<d>``, the largest possible value of ``HF(d+1)`` when ``HF(d) = n``."""
    return macaulay_rep(n, d).growth()


def is_o_sequence(H: Sequence[int]) -> bool:
    H = tuple(H)
    if not H or H[0] != 1 or any(h < 0 for h in H):
        return False
    return all(H[i + 1] <= macaulay_growth(H[i], i) for i in range(1, len(H) - 1))


# ---------------------------------------------------------------------------
# admissibility


def _as_tuple(H) -> tuple[int, ...]:
    H = tuple(H)
    if not H or H[0] != 1 or H[-1] < 1 or any(h < 0 for h in H):
        raise InadmissibleError(H, "not an h-vector (need h0 = 1, h_s >= 1, entries >= 0)")
    if len(H) == 1 or len(H) > 4:
        raise UnsupportedError(
            f"socle degree {len(H) - 1} is outside the decided range 1..3")
    return H


def admissibility_violation(H) -> str | None:
    """Name of the first violated condition, or ``None`` when ``H`` is admissible."""
    H = _as_tuple(H)
    if len(H) == 2:
        return None
    m = H[1]
    if len(H) == 3:
        return "tau > binom(m+1,2)" if H[2] > comb(m + 1, 2) else None
    n, tau = H[2], H[3]
    if n > comb(m + 1, 2):
        return "n > binom(m+1,2)"
    if tau > macaulay_growth(n, 2):
        return "tau > n^<2>"
    if n > tau * m:
        return "n > tau*m"
    return None


def is_admissible_level_local(H) -> bool:
    return admissibility_violation(H) is None


# ---------------------------------------------------------------------------
# constructions


def _mono(factors: Sequence[tuple[int, int]], m: int) -> Poly:
    """Monomial from ``(variable (1-based), exponent)`` pairs; repeated
    variables multiply."""
    e = [0] * m
    for i, k in factors:
        e[i - 1] += k
    return Poly.monomial(e)


def _sum(polys: Sequence[Poly], m: int) -> Poly:
    out = Poly.zero(m)
    for p in polys:
        out = out + p
    return out


def _wrap(i: int, m: int) -> int:
    return (i - 1) % m + 1


def cyclic_family(j: int, m: int) -> list[Poly]:
    """``D_j = [x_i^2 x_(i+j) for i = 1..m]`` with indices read mod ``m``."""
    return [_mono([(i, 2), (_wrap(i + j, m), 1)], m) for i in range(1, m + 1)]


def lex_monomials(nvars_used: int, d: int, m: int) -> list[Poly]:
    """All degree-``d`` monomials in ``x_1..x_nvars_used``, in lex order, as
    polynomials in ``m`` variables."""
    return [Poly.monomial(mono + (0,) * (m - nvars_used)) for mono in frame(nvars_used, d)]


def _squares(lo: int, hi: int, m: int) -> Poly:
    return _sum([_mono([(i, 2)], m) for i in range(lo, hi + 1)], m)


def _linear(H) -> tuple[str, list[Poly], dict]:
    m = H[1]
    return "linear", [Poly.var(i, m) for i in range(1, m + 1)], {}


def _degree2(H) -> tuple[str, list[Poly], dict]:
    _, m, tau = H
    if tau >= m:
        gens = lex_monomials(m, 2, m)[:tau]
    else:
        gens = [_mono([(i, 2)], m) for i in range(1, tau)] + [_squares(tau, m, m)]
    return "degree2", gens, {}


def _cubes_with_square_tail(H) -> tuple[str, list[Poly], dict]:
    _, m, n, tau = H
    gens = [_mono([(i, 3)], m) for i in range(1, tau)]
    last = _sum([_mono([(i, 3)], m) for i in range(tau, n + 1)], m) + _squares(n + 1, m, m)
    return "cubes-with-square-tail", gens + [last], {}


def _cyclic(H) -> tuple[str, list[Poly], dict]:
    _, m, n, tau = H
    ntilde = n - tau
    if m == 1:
        h, l = 0, 0
    else:
        h, l = divmod(ntilde, m - 1)
    params = {"ntilde": ntilde, "h": h, "l": l}
    # full cyclic sums over D_0 .. D_(h-1)
    gens = [_sum(cyclic_family(j, m), m) for j in range(h)]
    if tau == h:
        return "cyclic-a", gens, params
    # partial sum over the first l+1 elements of D_h
    gens.append(_sum(cyclic_family(h, m)[: l + 1], m))
    if tau == h + 1:
        return "cyclic-b", gens, params
    # single monomials: the rest of D_h, then D_(h+1), D_(h+2), ... in order
    ladder = cyclic_family(h, m)[l + 1:]
    j = h + 1
    while len(ladder) < tau - h - 1:
        ladder += cyclic_family(j, m)
        j += 1
    gens += ladder[: tau - h - 1]
    if tau <= h + m - l:
        return "cyclic-c", gens, params
    nbar = tau - (h + m - l)
    r, tail_len = divmod(nbar, m)
    params.update(nbar=nbar, r=r, tail_len=tail_len)
    return "cyclic-d", gens, params


def _lex_key(p: Poly):
    # lex order, largest first, on single monomials
    return deglex_key(p.leading_monomial())


def _lex_cubes(H) -> tuple[str, list[Poly], dict]:
    _, m, n, tau = H
    # n = C(l+1, 2) + h with 0 <= h <= l
    l = 1
    while comb(l + 2, 2) <= n:
        l += 1
    h = n - comb(l + 1, 2)
    params = {"l": l, "h": h}
    if h == 0:
        gens = lex_monomials(l, 3, m)[:tau]
        gens[0] = gens[0] + _squares(l + 1, m, m)
        return "lex-cubes-h0", gens, params
    x1_block = [p for p in lex_monomials(l, 3, m) if p.leading_monomial()[0] >= 1]
    head = x1_block + [_mono([(l + 1, 3)], m)]
    head += [_mono([(i, 1), (l + 1, 2)], m) for i in range(1, h)]
    spare = [p for p in lex_monomials(l, 3, m) if p.leading_monomial()[0] == 0]
    spare += [q * Poly.var(l + 1, m) for q in lex_monomials(h - 1, 2, m)] if h > 1 else []
    spare.sort(key=_lex_key)
    gens = head + spare[: tau - n]
    gens[0] = gens[0] + _squares(l + 2, m, m)
    return "lex-cubes-hpos", gens, params


def construction_branch(H) -> str:
    """Tag of the construction used for an admissible ``H``."""
    H = _as_tuple(H)
    reason = admissibility_violation(H)
    if reason:
        raise InadmissibleError(H, reason)
    return _dispatch(H)(H)[0]


def _dispatch(H: tuple[int, ...]):
    if len(H) == 2:
        return _linear
    if len(H) == 3:
        return _degree2
    _, m, n, tau = H
    branches = [(n < tau, _lex_cubes), (tau <= n < m, _cubes_with_square_tail),
                (n >= max(tau, m), _cyclic)]
    fired = [f for cond, f in branches if cond]
    assert len(fired) == 1, f"dispatch ambiguity for {H}"
    return fired[0]


@dataclass
class ConstructionReport:
    target: HVector
    generators: list[Poly]
    tag: str
    homogeneous: bool
    verified_hvector: HVector
    level: bool
    parameters: dict = field(default_factory=dict)


def construct(H) -> ConstructionReport:
    """Inverse system realising the admissible h-vector ``H``.

    Raises :class:`InadmissibleError` naming the violated condition, or
    :class:`UnsupportedError` for socle degree outside 1..3.
    """
    H = _as_tuple(H)
    reason = admissibility_violation(H)
    if reason:
        raise InadmissibleError(H, reason)
    m = H[1]
    tag, gens, params = _dispatch(H)(H)
    IS = build(gens, m)
    got = IS.hvector
    level, _ = is_level(IS)
    if got != H or not level:
        raise AssertionError(f"construction {tag} for {H} produced {got}, level={level}")
    return ConstructionReport(
        target=HVector(H), generators=list(gens), tag=tag,
        homogeneous=all(g.is_homogeneous() for g in gens),
        verified_hvector=got, level=level, parameters=params)


# ---------------------------------------------------------------------------
# enumeration

# admissible for level local algebras, but not for graded level algebras
NOT_GRADED_ADMISSIBLE = {
    (1, 3, 2, 1): "not symmetric, so not the h-vector of a graded Gorenstein algebra",
    (1, 3, 2, 2): "excluded for graded level algebras by consecutive cancellation "
                  "in the resolution of the lex-segment ideal",
    (1, 3, 3, 4): "excluded for graded level algebras by consecutive cancellation "
                  "in the resolution of the lex-segment ideal",
}


@dataclass(frozen=True)
class AdmissibleEntry:
    hvector: tuple[int, ...]
    tag: str
    note: str | None = None


def enumerate_admissible(m: int, s: int, max_tau: int | None = None,
                         max_n: int | None = None) -> list[AdmissibleEntry]:
    """All admissible h-vectors with embedding dimension ``m`` and socle
    degree ``s`` (2 or 3), optionally capped in ``n = h_2`` and ``tau = h_s``."""
    if m < 1:
        raise ValueError("m must be at least 1")
    if s not in (2, 3):
        raise UnsupportedError("enumeration covers socle degree 2 and 3")
    out = []
    if s == 2:
        top = comb(m + 1, 2) if max_tau is None else min(max_tau, comb(m + 1, 2))
        for tau in range(1, top + 1):
            H = (1, m, tau)
            out.append(AdmissibleEntry(H, construction_branch(H)))
        return out
    ntop = comb(m + 1, 2) if max_n is None else min(max_n, comb(m + 1, 2))
    for n in range(1, ntop + 1):
        ttop = macaulay_growth(n, 2) if max_tau is None else min(max_tau, macaulay_growth(n, 2))
        for tau in range(1, ttop + 1):
            H = (1, m, n, tau)
            if is_admissible_level_local(H):
                out.append(AdmissibleEntry(H, construction_branch(H),
                                           NOT_GRADED_ADMISSIBLE.get(H)))
    return out
