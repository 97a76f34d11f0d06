"""Inverse systems: derivative closures and the invariants read off them.

An inverse system is the span of all partial derivatives (of every order)
of a finite set of polynomials. Its dual is the local Artinian algebra
``R / Ann(f_1, ..., f_t)``, so Hilbert function, socle, level type and the
filtration used to compare the algebra with its associated graded ring can
all be computed by exact linear algebra on the closure.

The closure is kept as a reduced echelon basis with respect to descending
deg-lex order. With that order the leading monomial of each basis element
is its pivot, and the number of pivots of degree ``d`` is ``HF(d)``.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from math import comb
from typing import Sequence

from .exactlin import (
    ContractError,
    EchelonBasis,
    RationalMatrix,
    Subspace,
    echelon_sparse,
    kernel_basis,
    left_kernel_sparse,
)
from .multipoly import (
    Poly,
    contract_monomial,
    deglex_key,
    derivative,
    frame,
    frame_size,
    leading_form,
)


def _ascending_key(mono):
    # low degree first, lex inside a degree
    return (sum(mono), tuple(-e for e in mono))


def rref_polys(polys: Sequence[Poly], nvars: int) -> list[Poly]:
    """Canonical basis of the span of ``polys``.

    Reduced echelon form for descending deg-lex order: each element is monic
    at its leading monomial and no leading monomial occurs in another
    element.
    """
    red = echelon_sparse([p.terms for p in polys], key=deglex_key)
    return [Poly._raw(nvars, row) for _, row in red]


def _closure_layers(gens: Sequence[Poly], nvars: int) -> list[list[Poly]]:
    layers = [rref_polys(gens, nvars)]
    while True:
        nxt = [derivative(b, i) for b in layers[-1] for i in range(1, nvars + 1)]
        basis = rref_polys([p for p in nxt if p], nvars)
        if not basis:
            return layers
        layers.append(basis)


@dataclass(frozen=True)
class HVector:
    entries: tuple[int, ...]

    def __post_init__(self):
        e = self.entries
        if not e or e[0] != 1 or e[-1] < 1 or any(x < 0 for x in e):
            raise ContractError(f"{e} is not an h-vector")

    def __iter__(self):
        return iter(self.entries)

    def __len__(self):
        return len(self.entries)

    def __getitem__(self, i):
        return self.entries[i]

    def __eq__(self, other):
        if isinstance(other, HVector):
            return self.entries == other.entries
        if isinstance(other, (tuple, list)):
            return self.entries == tuple(other)
        return NotImplemented

    def __hash__(self):
        return hash(self.entries)

    def __repr__(self):
        return f"HVector{self.entries}"

    @property
    def socle_degree(self) -> int:
        return len(self.entries) - 1


class InverseSystem:
    """Derivative closure of a finite list of polynomials."""

    def __init__(self, generators: Sequence[Poly], nvars: int):
        gens = tuple(generators)
        if not gens:
            raise ContractError("an inverse system needs at least one generator")
        for g in gens:
            if g.nvars != nvars:
                raise ContractError(f"generator {g} is not in {nvars} variables")
            if g.is_zero():
                raise ContractError("generators must be nonzero")
        self.nvars = nvars
        self.generators = gens

    def __repr__(self):
        body = ", ".join(str(g) for g in self.generators)
        return f"InverseSystem([{body}], nvars={self.nvars})"

    @cached_property
    def socle_degree(self) -> int:
        return max(g.degree for g in self.generators)

    @cached_property
    def layers(self) -> list[list[Poly]]:
        """Echelon bases of the spans of the k-th order derivatives, k = 0, 1, ..."""
        return _closure_layers(self.generators, self.nvars)

    @cached_property
    def closure(self) -> tuple[Poly, ...]:
        """Canonical basis of the closure, in descending order of leading monomial."""
        return tuple(rref_polys([p for layer in self.layers for p in layer], self.nvars))

    @property
    def dim(self) -> int:
        return len(self.closure)

    @cached_property
    def hvector(self) -> HVector:
        h = [0] * (self.socle_degree + 1)
        for b in self.closure:
            h[b.degree] += 1
        return HVector(tuple(h))

    def slice(self, d: int) -> Subspace:
        """``V^(d)``: leading forms of degree ``d`` of closure elements, as a
        subspace of the coefficient space over the degree-``d`` frame."""
        frm = frame(self.nvars, d)
        vecs = [tuple(b.coeff(m) for m in frm) for b in self.closure if b.degree == d]
        return Subspace.span(vecs, len(frm))

    @cached_property
    def derivative_span(self) -> tuple[Poly, ...]:
        """Canonical basis of ``d_1 V + ... + d_m V``."""
        return tuple(rref_polys([q for b in self.closure
                                 for q in (derivative(b, i) for i in range(1, self.nvars + 1))
                                 if q], self.nvars))


def build(generators: Sequence[Poly], nvars: int) -> InverseSystem:
    return InverseSystem(generators, nvars)


def hilbert_function(IS: InverseSystem) -> HVector:
    return IS.hvector


def closure_dims(IS: InverseSystem) -> tuple[int, ...]:
    return IS.hvector.entries


def socle_dimension(IS: InverseSystem) -> int:
    """``dim V - dim(d_1 V + ... + d_m V)``; this is the dimension of the socle
    of the dual algebra, since multiplication by ``x_i`` is dual to ``d_i``."""
    return IS.dim - len(IS.derivative_span)


def module_generators(IS: InverseSystem) -> list[Poly]:
    """Closure elements spanning a complement of ``d_1 V + ... + d_m V``.

    Both spaces are in reduced echelon form for the same order, so the
    closure rows whose pivots are not pivots of the derivative span are
    independent modulo it. They form a minimal generating set of the module.
    """
    inner = {b.leading_monomial() for b in IS.derivative_span}
    return [b for b in IS.closure if b.leading_monomial() not in inner]


def _structurally_level(gens: Sequence[Poly], s: int, nvars: int) -> bool:
    if any(g.degree != s for g in gens):
        return False
    # independent leading forms of top degree also make the set minimal:
    # a redundant generator would put its leading form in the span of the
    # others' degree-s parts
    return len(rref_polys([leading_form(g) for g in gens], nvars)) == len(gens)


def is_level(IS: InverseSystem) -> tuple[bool, int | None]:
    """``(True, type)`` when the socle sits in the top degree, else ``(False, None)``.

    The dual test (socle dimension equals ``HF(s)``) is cross-checked against
    the structural one on an extracted minimal generating set; if the given
    generators already pass the structural test they must agree as well.
    """
    s = IS.socle_degree
    soc = socle_dimension(IS)
    hs = IS.hvector[s]
    dual = soc == hs
    extracted = module_generators(IS)
    if len(extracted) != soc:
        raise AssertionError("generator extraction disagrees with the socle dimension")
    if _structurally_level(extracted, s, IS.nvars) != dual:
        raise AssertionError("structural and dual level tests disagree")
    if _structurally_level(IS.generators, s, IS.nvars) and not dual:
        raise AssertionError("structural and dual level tests disagree")
    return (True, hs) if dual else (False, None)


def module_equal(A: InverseSystem, B: InverseSystem) -> bool:
    """True when the two systems have the same derivative closure."""
    if A.nvars != B.nvars:
        raise ContractError("inverse systems in different numbers of variables")
    return A.closure == B.closure


def truncation(IS: InverseSystem) -> InverseSystem:
    """The system generated by all first partials of the generators."""
    parts = [q for g in IS.generators for i in range(1, IS.nvars + 1)
             for q in (derivative(g, i),) if q]
    if not parts:
        raise ContractError("all generators are constant")
    return InverseSystem(rref_polys(parts, IS.nvars), IS.nvars)


def level_generators(IS: InverseSystem) -> list[Poly]:
    """Generators of degree ``s`` with independent leading forms.

    These are the given generators when they already have that shape,
    otherwise the extracted minimal generators of a level system.
    """
    gens = list(IS.generators)
    if _structurally_level(gens, IS.socle_degree, IS.nvars):
        return gens
    if not is_level(IS)[0]:
        raise ContractError("the system is not level")
    return module_generators(IS)


def q0(IS: InverseSystem) -> InverseSystem:
    """System generated by the top-degree forms of a level generating set."""
    return InverseSystem([leading_form(g) for g in level_generators(IS)], IS.nvars)


def g_is_level(IS: InverseSystem) -> bool:
    """Whether the associated graded ring of the dual algebra is level.

    That happens exactly when ``Q(0)`` carries the whole Hilbert function.
    For socle degree 3 the answer is cross-checked against the
    Q-decomposition.
    """
    if not is_level(IS)[0]:
        raise ContractError("g_is_level needs a level system")
    ans = q0(IS).hvector == IS.hvector
    if IS.socle_degree == 3:
        qd = q_decomposition(algebra_model(IS), 3)
        if (qd.q[1][1] == 0) != ans:
            raise AssertionError("Q-decomposition disagrees with the Q(0) comparison")
    return ans


# ---------------------------------------------------------------------------
# apolar ideal


@dataclass
class ApolarIdeal:
    """Annihilator of an inverse system up to degree ``s + 1``.

    ``kernel`` spans ``{g : deg g <= s, g o f_j = 0 for all j}``; adding all
    monomials of degree ``s + 1`` gives the ideal modulo degree ``s + 2``.
    """

    nvars: int
    socle_degree: int
    kernel: list[Poly]
    initial_dims: tuple[int, ...]
    generators: list[Poly] | None

    def basis_upto(self, d: int) -> list[Poly]:
        """Basis of the part of the ideal of degree at most ``d``."""
        out = [g for g in self.kernel if g.degree <= d]
        if d >= self.socle_degree + 1:
            out += [Poly._raw(self.nvars, {m: Fraction(1)})
                    for m in frame(self.nvars, self.socle_degree + 1)]
        return out

    def quotient_hvector(self) -> tuple[int, ...]:
        """Hilbert function of the quotient, read off the initial ideal."""
        return tuple(comb(self.nvars + d - 1, d) - self.initial_dims[d]
                     for d in range(self.socle_degree + 1))


def _ideal_kernel(IS: InverseSystem) -> list[Poly]:
    n, s = IS.nvars, IS.socle_degree
    labels = frame(n, s, "upto")
    images = []
    for beta in labels:
        im = {}
        for j, f in enumerate(IS.generators):
            for mono, c in contract_monomial(beta, f).terms.items():
                im[(j, mono)] = c
        images.append(im)
    order = sorted(labels, key=deglex_key)
    return [Poly(n, row) for _, row in left_kernel_sparse(images, labels, order)]


def _minimal_ideal_generators(n: int, s: int, kernel: list[Poly],
                              initial: list[tuple]) -> list[Poly]:
    top = frame(n, s + 1)
    # m * I, truncated above degree s + 1 (everything there lies in m^(s+2))
    prod = EchelonBasis(_ascending_key)
    for g in kernel:
        for i in range(1, n + 1):
            h = (g * Poly.var(i, n)).truncate(s + 1)
            if h:
                prod.add(h.terms)
    inner_dim = len(prod)
    by_degree: dict[int, list[tuple]] = {}
    for piv, row in initial:
        by_degree.setdefault(sum(piv), []).append((piv, row))
    chosen = []
    # candidates come from the echelon form for ascending order, grouped by
    # the degree of their initial monomial; adding them degree by degree
    # picks a basis of I / mI
    for d in range(s + 2):
        cands = [Poly(n, row) for piv, row in
                 sorted(by_degree.get(d, []), key=lambda t: deglex_key(t[0]))]
        if d == s + 1:
            cands += [Poly._raw(n, {m: Fraction(1)}) for m in top]
        for c in cands:
            if prod.add(c.terms):
                chosen.append(c)
    expected = len(kernel) + len(top) - inner_dim
    if len(chosen) != expected:
        raise AssertionError("minimal generator count does not match dim I / mI")
    return chosen


def apolar_ideal_upto(IS: InverseSystem, with_generators: bool = True) -> ApolarIdeal:
    """Annihilator of ``IS`` in degrees ``<= s + 1``, computed from the
    contraction map alone (independently of the closure)."""
    n, s = IS.nvars, IS.socle_degree
    kernel = _ideal_kernel(IS)
    # initial forms: echelon form for ascending order, pivot degree = order
    init = echelon_sparse([g.terms for g in kernel], key=_ascending_key)
    dims = [0] * (s + 1)
    for piv, _ in init:
        dims[sum(piv)] += 1
    dims.append(frame_size(n, s + 1))
    gens = _minimal_ideal_generators(n, s, kernel, init) if with_generators else None
    return ApolarIdeal(n, s, kernel, tuple(dims), gens)


def hilbert_function_from_ideal(IS: InverseSystem) -> tuple[int, ...]:
    return apolar_ideal_upto(IS, with_generators=False).quotient_hvector()


# ---------------------------------------------------------------------------
# the dual algebra


@dataclass(frozen=True)
class AlgebraModel:
    """Multiplication operators of ``A = R / Ann`` on the dual of the closure.

    ``ops[i]`` is the transpose of the matrix of ``d_(i+1)`` on the closure
    basis ``basis``.
    """

    dim: int
    ops: tuple[RationalMatrix, ...]
    basis: tuple[Poly, ...]


def algebra_model(IS: InverseSystem) -> AlgebraModel:
    basis = IS.closure
    N = len(basis)
    pivots = [b.leading_monomial() for b in basis]
    ops = []
    for i in range(1, IS.nvars + 1):
        # D[l][k] = coordinate of d_i(b_k) on b_l, read at pivot l
        D = [[Fraction(0)] * N for _ in range(N)]
        for k, b in enumerate(basis):
            db = derivative(b, i)
            for l, p in enumerate(pivots):
                D[l][k] = db.coeff(p)
        ops.append(RationalMatrix(D, N).T)
    return AlgebraModel(N, tuple(ops), basis)


@dataclass(frozen=True)
class QDecomposition:
    """``c[a][i] = dim C(a)_i`` and ``q[a][i] = c[a][i] - c[a+1][i]``."""

    socle_degree: int
    c: tuple[tuple[int, ...], ...]
    q: tuple[tuple[int, ...], ...]


def _image_sum(model: AlgebraModel, U: Subspace) -> Subspace:
    vecs = [X @ v for X in model.ops for v in U.basis]
    return Subspace.span(vecs, model.dim)


def _preimage_all(model: AlgebraModel, Z: Subspace) -> Subspace:
    """``{v : X_i v in Z for every i}``."""
    N = model.dim
    if Z.dim == N:
        return Subspace.full(N)
    # functionals vanishing on Z, pulled back through each X_i
    annihilator = kernel_basis(RationalMatrix(Z.basis, N)) if Z.dim else Subspace.full(N)
    rows = [w @ X for w in annihilator.basis for X in model.ops]
    return kernel_basis(RationalMatrix(rows, N))


def q_decomposition(model: AlgebraModel, s: int) -> QDecomposition:
    """Dimensions of the pieces ``C(a)_i`` of the filtration of the
    associated graded ring by the ideals ``C(a)``.

    Powers ``m^k A`` and annihilators ``(0 : m^k)`` are built one step at a
    time: ``m^k A = sum_i X_i (m^(k-1) A)`` and
    ``(0 : m^k) = {v : X_i v in (0 : m^(k-1)) for all i}``.
    """
    N = model.dim
    powers = [Subspace.full(N)]
    for _ in range(s + 1):
        powers.append(_image_sum(model, powers[-1]))
    if powers[s + 1].dim:
        raise ContractError("the algebra has elements of order above s")
    annih = [Subspace.zero(N)]
    for _ in range(s + 1):
        annih.append(_preimage_all(model, annih[-1]))
    c = [[0] * (s + 1) for _ in range(s + 2)]
    for a in range(s + 1):
        for i in range(s + 1):
            e = s + 1 - a - i
            if e <= 0:
                continue
            Z = annih[min(e, s + 1)]
            c[a][i] = (Z & powers[i]).dim - (Z & powers[i + 1]).dim
    q = [[c[a][i] - c[a + 1][i] for i in range(s + 1)] for a in range(s + 1)]
    return QDecomposition(s, tuple(tuple(r) for r in c[: s + 1]), tuple(tuple(r) for r in q))
