"""Exact rational linear algebra.

Dense matrices of :class:`fractions.Fraction`, reduced row echelon forms,
kernels, left solves and subspace arithmetic. Elimination itself runs in
the integer kernel selected by :mod:`apolar.kernels`; this module handles
the conversion between rational rows and primitive integer rows, and skips
columns that are zero in every row.
"""
from __future__ import annotations

from fractions import Fraction
from math import lcm
from typing import Hashable, Iterable, Sequence

from .kernels import echelon

ZERO = Fraction(0)
ONE = Fraction(1)


class ContractError(ValueError):
    """Raised when arguments violate an operation's preconditions."""


def _frac(x) -> Fraction:
    return x if isinstance(x, Fraction) else Fraction(x)


# ---------------------------------------------------------------------------
# sparse core


def _integer_row(values: Iterable[Fraction]) -> list[int]:
    values = list(values)
    den = lcm(*(v.denominator for v in values)) if values else 1
    return [v.numerator * (den // v.denominator) for v in values]


def echelon_sparse(rows: Sequence[dict], order: Sequence[Hashable] | None = None,
                   key=None) -> list[tuple[Hashable, dict]]:
    """Reduced row echelon form of sparse rational rows.

    ``rows`` map column labels to nonzero rationals. Columns are eliminated
    in the order given by ``order`` (a sequence of labels) or, failing that,
    by sorting the labels that occur with ``key``. Only occurring labels take
    part in the elimination.

    Returns ``[(pivot_label, row), ...]`` in pivot order, each row scaled to
    have 1 at its pivot and 0 at every other pivot.
    """
    support = set()
    for r in rows:
        support.update(r)
    if not support:
        return []
    if order is not None:
        cols = [c for c in order if c in support]
        if len(cols) != len(support):
            raise ContractError("row entry outside the column order")
    else:
        cols = sorted(support, key=key)
    pos = {c: i for i, c in enumerate(cols)}
    n = len(cols)
    dense = []
    for r in rows:
        if not r:
            continue
        vals = [ZERO] * n
        for c, v in r.items():
            vals[pos[c]] = _frac(v)
        dense.append(_integer_row(vals))
    reduced, pivots = echelon(dense, n)
    out = []
    for row, p in zip(reduced, pivots):
        lead = row[p]
        out.append((cols[p], {cols[k]: Fraction(x, lead) for k, x in enumerate(row) if x}))
    return out


def left_kernel_sparse(images: Sequence[dict], labels: Sequence[Hashable],
                       label_order: Sequence[Hashable]) -> list[tuple[Hashable, dict]]:
    """Kernel of the linear map sending basis vector ``labels[k]`` to ``images[k]``.

    The kernel vectors are returned as sparse rows over ``labels``, in
    reduced echelon form with respect to ``label_order``.
    """
    img_cols = set()
    for im in images:
        img_cols.update(im)
    img_order = sorted(img_cols, key=repr)
    tagged = []
    for lab, im in zip(labels, images):
        row = {("i", c): v for c, v in im.items()}
        row[("t", lab)] = ONE
        tagged.append(row)
    order = [("i", c) for c in img_order] + [("t", lab) for lab in label_order]
    kernel = []
    for piv, row in echelon_sparse(tagged, order=order):
        if piv[0] == "t":
            kernel.append((piv[1], {c[1]: v for c, v in row.items()}))
    return kernel


# ---------------------------------------------------------------------------
# dense matrices


class RationalMatrix:
    """Immutable dense matrix of rationals."""

    __slots__ = ("rows", "cols", "entries")

    def __init__(self, entries: Iterable[Iterable], cols: int | None = None):
        ent = tuple(tuple(_frac(x) for x in row) for row in entries)
        if cols is None:
            cols = len(ent[0]) if ent else 0
        if any(len(row) != cols for row in ent):
            raise ContractError("ragged matrix rows")
        self.rows = len(ent)
        self.cols = cols
        self.entries = ent

    @classmethod
    def zeros(cls, rows: int, cols: int) -> "RationalMatrix":
        return cls([[ZERO] * cols for _ in range(rows)], cols)

    @classmethod
    def identity(cls, n: int) -> "RationalMatrix":
        return cls([[ONE if i == j else ZERO for j in range(n)] for i in range(n)], n)

    @property
    def T(self) -> "RationalMatrix":
        return RationalMatrix(zip(*self.entries) if self.rows else [], self.rows)

    def __getitem__(self, ij):
        i, j = ij
        return self.entries[i][j]

    def row(self, i: int) -> tuple[Fraction, ...]:
        return self.entries[i]

    def column(self, j: int) -> tuple[Fraction, ...]:
        return tuple(row[j] for row in self.entries)

    def __matmul__(self, other):
        if isinstance(other, RationalMatrix):
            if self.cols != other.rows:
                raise ContractError("shape mismatch in product")
            cols = list(zip(*other.entries)) if other.rows else [()] * other.cols
            return RationalMatrix(
                [[sum((a * b for a, b in zip(row, col) if a and b), ZERO) for col in cols]
                 for row in self.entries], other.cols)
        vec = [_frac(x) for x in other]
        if len(vec) != self.cols:
            raise ContractError("shape mismatch in matrix-vector product")
        return tuple(sum((a * b for a, b in zip(row, vec) if a and b), ZERO)
                     for row in self.entries)

    def __rmatmul__(self, other):
        vec = [_frac(x) for x in other]
        if len(vec) != self.rows:
            raise ContractError("shape mismatch in vector-matrix product")
        out = [ZERO] * self.cols
        for a, row in zip(vec, self.entries):
            if a:
                for j, b in enumerate(row):
                    if b:
                        out[j] += a * b
        return tuple(out)

    def __add__(self, other: "RationalMatrix") -> "RationalMatrix":
        if (self.rows, self.cols) != (other.rows, other.cols):
            raise ContractError("shape mismatch in sum")
        return RationalMatrix([[a + b for a, b in zip(r, s)]
                               for r, s in zip(self.entries, other.entries)], self.cols)

    def scale(self, c) -> "RationalMatrix":
        c = _frac(c)
        return RationalMatrix([[c * a for a in r] for r in self.entries], self.cols)

    def stack(self, other: "RationalMatrix") -> "RationalMatrix":
        if self.cols != other.cols:
            raise ContractError("column mismatch in stack")
        return RationalMatrix(self.entries + other.entries, self.cols)

    def is_zero(self) -> bool:
        return not any(any(r) for r in self.entries)

    def rank(self) -> int:
        return rref(self)[2]

    def __eq__(self, other):
        if not isinstance(other, RationalMatrix):
            return NotImplemented
        return (self.rows, self.cols, self.entries) == (other.rows, other.cols, other.entries)

    def __hash__(self):
        return hash((self.rows, self.cols, self.entries))

    def __repr__(self):
        body = "; ".join(" ".join(str(x) for x in r) for r in self.entries)
        return f"RationalMatrix({self.rows}x{self.cols}: [{body}])"


def _sparse_rows(M: RationalMatrix) -> list[dict]:
    return [{j: x for j, x in enumerate(r) if x} for r in M.entries]


def _rref_rows(rows: Sequence[dict], ncols: int) -> tuple[list[tuple[Fraction, ...]], list[int]]:
    red = echelon_sparse(rows, key=int)
    dense = []
    pivots = []
    for p, r in red:
        vals = [ZERO] * ncols
        for j, x in r.items():
            vals[j] = x
        dense.append(tuple(vals))
        pivots.append(p)
    return dense, pivots


def rref(M: RationalMatrix) -> tuple[RationalMatrix, tuple[int, ...], int]:
    """Unique reduced row echelon form.

    Returns ``(R, pivot_columns, rank)`` where ``R`` has the shape of ``M``
    with zero rows at the bottom.
    """
    dense, pivots = _rref_rows(_sparse_rows(M), M.cols)
    zero_row = (ZERO,) * M.cols
    dense += [zero_row] * (M.rows - len(dense))
    return RationalMatrix(dense, M.cols), tuple(pivots), len(pivots)


def rank(M: RationalMatrix) -> int:
    return rref(M)[2]


# ---------------------------------------------------------------------------
# subspaces


class Subspace:
    """Subspace of Q^n stored by its reduced row echelon basis.

    The basis is canonical, so two subspaces of the same ambient space are
    equal exactly when their bases are.
    """

    __slots__ = ("ambient_dim", "basis", "pivots")

    def __init__(self, ambient_dim: int, basis: tuple, pivots: tuple):
        self.ambient_dim = ambient_dim
        self.basis = basis
        self.pivots = pivots

    @classmethod
    def span(cls, vectors: Iterable[Sequence], ambient_dim: int) -> "Subspace":
        rows = []
        for v in vectors:
            if len(v) != ambient_dim:
                raise ContractError("vector length does not match the ambient dimension")
            rows.append({j: _frac(x) for j, x in enumerate(v) if x})
        dense, pivots = _rref_rows(rows, ambient_dim)
        return cls(ambient_dim, tuple(dense), tuple(pivots))

    @classmethod
    def zero(cls, ambient_dim: int) -> "Subspace":
        return cls(ambient_dim, (), ())

    @classmethod
    def full(cls, ambient_dim: int) -> "Subspace":
        return cls(ambient_dim, RationalMatrix.identity(ambient_dim).entries,
                   tuple(range(ambient_dim)))

    @property
    def dim(self) -> int:
        return len(self.basis)

    def matrix(self) -> RationalMatrix:
        return RationalMatrix(self.basis, self.ambient_dim)

    def coordinates(self, v: Sequence) -> tuple[Fraction, ...]:
        """Coordinates of ``v`` in the echelon basis; ``v`` must lie in the subspace."""
        coords = tuple(_frac(v[p]) for p in self.pivots)
        rest = [_frac(x) for x in v]
        for c, b in zip(coords, self.basis):
            if c:
                for j, x in enumerate(b):
                    if x:
                        rest[j] -= c * x
        if any(rest):
            raise ContractError("vector is not in the subspace")
        return coords

    def __contains__(self, v) -> bool:
        return contains(self, v)

    def __add__(self, other: "Subspace") -> "Subspace":
        return subspace_sum(self, other)

    def __and__(self, other: "Subspace") -> "Subspace":
        return subspace_intersect(self, other)

    def __le__(self, other: "Subspace") -> bool:
        return all(contains(other, b) for b in self.basis)

    def __eq__(self, other):
        if not isinstance(other, Subspace):
            return NotImplemented
        return self.ambient_dim == other.ambient_dim and self.basis == other.basis

    def __hash__(self):
        return hash((self.ambient_dim, self.basis))

    def __repr__(self):
        return f"Subspace(dim={self.dim}, ambient={self.ambient_dim})"


def _same_frame(U: Subspace, W: Subspace) -> None:
    if U.ambient_dim != W.ambient_dim:
        raise ContractError("subspaces live in different ambient spaces")


def subspace_sum(U: Subspace, W: Subspace) -> Subspace:
    _same_frame(U, W)
    return Subspace.span(U.basis + W.basis, U.ambient_dim)


def subspace_intersect(U: Subspace, W: Subspace) -> Subspace:
    _same_frame(U, W)
    if not U.dim or not W.dim:
        return Subspace.zero(U.ambient_dim)
    # relations c with sum_k c_k r_k = 0 over the stacked bases; the U-half
    # of each relation gives an intersection vector
    stacked = RationalMatrix(U.basis + W.basis, U.ambient_dim)
    rel = kernel_basis(stacked.T)
    du = U.dim
    vecs = []
    for c in rel.basis:
        v = [ZERO] * U.ambient_dim
        for k in range(du):
            if c[k]:
                for j, x in enumerate(U.basis[k]):
                    if x:
                        v[j] += c[k] * x
        vecs.append(v)
    return Subspace.span(vecs, U.ambient_dim)


def contains(U: Subspace, v: Sequence) -> bool:
    if len(v) != U.ambient_dim:
        raise ContractError("vector length does not match the ambient dimension")
    rest = [_frac(x) for x in v]
    for p, b in zip(U.pivots, U.basis):
        c = rest[p]
        if c:
            for j, x in enumerate(b):
                if x:
                    rest[j] -= c * x
    return not any(rest)


def kernel_basis(M: RationalMatrix) -> Subspace:
    """Right null space ``{v : M v = 0}``."""
    R, pivots, r = rref(M)
    pivset = set(pivots)
    vecs = []
    for f in range(M.cols):
        if f in pivset:
            continue
        v = [ZERO] * M.cols
        v[f] = ONE
        for i, p in enumerate(pivots):
            v[p] = -R[i, f]
        vecs.append(v)
    return Subspace.span(vecs, M.cols)


def solve_left(M: RationalMatrix, b: Sequence) -> tuple[Fraction, ...] | None:
    """One solution ``a`` of ``a @ M == b``, or ``None`` when incompatible.

    Free unknowns are set to zero after reducing the transposed system, so
    the returned solution is canonical.
    """
    if len(b) != M.cols:
        raise ContractError(f"right-hand side has length {len(b)}, expected {M.cols}")
    # a M = b  <=>  M^T a^T = b^T; reduce the augmented system [M^T | b]
    n = M.rows
    rows = []
    for j in range(M.cols):
        row = {i: M.entries[i][j] for i in range(n) if M.entries[i][j]}
        if b[j]:
            row[n] = _frac(b[j])
        rows.append(row)
    dense, pivots = _rref_rows(rows, n + 1)
    if pivots and pivots[-1] == n:
        return None
    a = [ZERO] * n
    for row, p in zip(dense, pivots):
        a[p] = row[n]
    return tuple(a)


class EchelonBasis:
    """Incrementally grown echelon basis of sparse rational rows.

    ``key`` orders column labels; the smallest label present in a row is
    its leading column. Used for greedy selection, where each candidate is
    tested against everything accepted so far.
    """

    def __init__(self, key):
        self.key = key
        self.rows: dict = {}

    def __len__(self):
        return len(self.rows)

    def reduce(self, row: dict) -> dict:
        v = {c: _frac(x) for c, x in row.items() if x}
        while v:
            lead = min(v, key=self.key)
            b = self.rows.get(lead)
            if b is None:
                return v
            c = v[lead]
            for col, x in b.items():
                y = v.get(col, ZERO) - c * x
                if y:
                    v[col] = y
                else:
                    v.pop(col, None)
        return v

    def add(self, row: dict) -> bool:
        """Insert ``row``; returns False when it was already in the span."""
        v = self.reduce(row)
        if not v:
            return False
        lead = min(v, key=self.key)
        c = v[lead]
        self.rows[lead] = {col: x / c for col, x in v.items()}
        return True
