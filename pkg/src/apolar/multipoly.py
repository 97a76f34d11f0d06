"""Sparse multivariate polynomials over Q and the contraction action.

Monomials are exponent tuples. The monomial order is deg-lex with
``x1 > x2 > ... > xm``: higher degree first, then lexicographically larger
exponent tuple first. Within one degree this is the plain lex order, so the
degree-2 frame in three variables reads ``x1^2, x1*x2, x1*x3, x2^2, ...``.

The ring acts on polynomials by differentiation (contraction)::

    x^b o x^a = a!/(a-b)! * x^(a-b)   if a >= b componentwise, else 0

and ``pairing(g, f)`` is the constant term of ``g o f``. Coordinates with
respect to the divided-power basis ``x^a / a!`` are the *dual* coordinates.
"""
from __future__ import annotations

import re
from fractions import Fraction
from functools import lru_cache
from itertools import combinations_with_replacement
from math import comb, factorial, prod
from typing import Iterable, Mapping, Sequence

from .exactlin import ContractError

Monomial = tuple  # tuple[int, ...]


def deglex_key(mono: Monomial):
    """Sort key placing monomials in descending deg-lex order."""
    return (-sum(mono), tuple(-e for e in mono))


def mono_factorial(mono: Monomial) -> int:
    return prod(factorial(e) for e in mono)


def unit(i: int, nvars: int) -> Monomial:
    """Exponent vector of the variable with 0-based index ``i``."""
    e = [0] * nvars
    e[i] = 1
    return tuple(e)


@lru_cache(maxsize=None)
def _degree_frame(nvars: int, d: int) -> tuple[Monomial, ...]:
    out = []
    for combo in combinations_with_replacement(range(nvars), d):
        e = [0] * nvars
        for i in combo:
            e[i] += 1
        out.append(tuple(e))
    return tuple(out)


def frame(nvars: int, d: int, mode: str = "exact") -> tuple[Monomial, ...]:
    """Ordered list of monomials of degree ``d`` (``mode="exact"``) or of
    degree at most ``d`` (``mode="upto"``).

    The exact frame is in lex order; the up-to frame lists degree 0, 1, ..., d
    blocks in turn, each in lex order.
    """
    if nvars < 1 or d < 0:
        raise ContractError("frame needs nvars >= 1 and d >= 0")
    if mode == "exact":
        return _degree_frame(nvars, d)
    if mode == "upto":
        return tuple(m for k in range(d + 1) for m in _degree_frame(nvars, k))
    raise ValueError(f"unknown frame mode {mode!r}")


def frame_size(nvars: int, d: int, mode: str = "exact") -> int:
    return comb(nvars + d - 1, d) if mode == "exact" else comb(nvars + d, d)


class Poly:
    """Polynomial in ``nvars`` variables with rational coefficients.

    Treat instances as immutable; every operation returns a new polynomial.
    """

    __slots__ = ("nvars", "terms")

    def __init__(self, nvars: int, terms: Mapping[Monomial, object] | None = None):
        self.nvars = nvars
        clean = {}
        if terms:
            for mono, c in terms.items():
                if len(mono) != nvars:
                    raise ContractError(f"monomial {mono} does not have {nvars} exponents")
                c = c if isinstance(c, Fraction) else Fraction(c)
                if c:
                    clean[tuple(mono)] = c
        self.terms = clean

    @classmethod
    def _raw(cls, nvars: int, terms: dict) -> "Poly":
        p = object.__new__(cls)
        p.nvars = nvars
        p.terms = terms
        return p

    @classmethod
    def zero(cls, nvars: int) -> "Poly":
        return cls._raw(nvars, {})

    @classmethod
    def constant(cls, c, nvars: int) -> "Poly":
        return cls(nvars, {(0,) * nvars: c})

    @classmethod
    def var(cls, i: int, nvars: int) -> "Poly":
        """The variable ``x_i`` (1-based)."""
        if not 1 <= i <= nvars:
            raise ContractError(f"variable index {i} out of range 1..{nvars}")
        return cls._raw(nvars, {unit(i - 1, nvars): Fraction(1)})

    @classmethod
    def monomial(cls, exps: Sequence[int], coeff=1) -> "Poly":
        return cls(len(exps), {tuple(exps): coeff})

    # -- inspection ---------------------------------------------------------

    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self):
        return bool(self.terms)

    @property
    def degree(self) -> int:
        if not self.terms:
            raise ContractError("the zero polynomial has no degree")
        return max(sum(m) for m in self.terms)

    def degrees(self) -> set[int]:
        return {sum(m) for m in self.terms}

    def is_homogeneous(self) -> bool:
        return len(self.degrees()) <= 1

    def homogeneous_part(self, d: int) -> "Poly":
        return Poly._raw(self.nvars, {m: c for m, c in self.terms.items() if sum(m) == d})

    def truncate(self, d: int) -> "Poly":
        """Drop every term of degree above ``d``."""
        return Poly._raw(self.nvars, {m: c for m, c in self.terms.items() if sum(m) <= d})

    def coeff(self, mono: Monomial) -> Fraction:
        return self.terms.get(tuple(mono), Fraction(0))

    def sorted_terms(self) -> list[tuple[Monomial, Fraction]]:
        return sorted(self.terms.items(), key=lambda t: deglex_key(t[0]))

    def leading_monomial(self) -> Monomial:
        if not self.terms:
            raise ContractError("the zero polynomial has no leading monomial")
        return min(self.terms, key=deglex_key)

    # -- arithmetic ---------------------------------------------------------

    def _check(self, other: "Poly") -> None:
        if self.nvars != other.nvars:
            raise ContractError("polynomials in different numbers of variables")

    def __add__(self, other):
        if not isinstance(other, Poly):
            other = Poly.constant(other, self.nvars)
        self._check(other)
        out = dict(self.terms)
        for m, c in other.terms.items():
            v = out.get(m, 0) + c
            if v:
                out[m] = v
            else:
                out.pop(m, None)
        return Poly._raw(self.nvars, out)

    __radd__ = __add__

    def __neg__(self):
        return Poly._raw(self.nvars, {m: -c for m, c in self.terms.items()})

    def __sub__(self, other):
        if not isinstance(other, Poly):
            other = Poly.constant(other, self.nvars)
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if not isinstance(other, Poly):
            c = Fraction(other)
            if not c:
                return Poly.zero(self.nvars)
            return Poly._raw(self.nvars, {m: c * v for m, v in self.terms.items()})
        self._check(other)
        out: dict = {}
        for m1, c1 in self.terms.items():
            for m2, c2 in other.terms.items():
                m = tuple(a + b for a, b in zip(m1, m2))
                out[m] = out.get(m, 0) + c1 * c2
        return Poly._raw(self.nvars, {m: c for m, c in out.items() if c})

    __rmul__ = __mul__

    def __pow__(self, k: int):
        out = Poly.constant(1, self.nvars)
        for _ in range(k):
            out = out * self
        return out

    def __eq__(self, other):
        if not isinstance(other, Poly):
            return NotImplemented
        return self.nvars == other.nvars and self.terms == other.terms

    def __hash__(self):
        return hash((self.nvars, frozenset(self.terms.items())))

    def __repr__(self):
        return f"Poly({format_poly(self)!r}, nvars={self.nvars})"

    def __str__(self):
        return format_poly(self)

    def embed(self, nvars: int, shift: int = 0) -> "Poly":
        """The same polynomial in ``nvars`` variables, with ``x_i`` renamed
        to ``x_(i+shift)``."""
        if shift < 0 or self.nvars + shift > nvars:
            raise ContractError("embedding does not fit")
        pad = nvars - self.nvars - shift
        return Poly._raw(nvars, {(0,) * shift + m + (0,) * pad: c
                                 for m, c in self.terms.items()})


# ---------------------------------------------------------------------------
# the contraction action


def derivative(p: Poly, i: int) -> Poly:
    """Formal partial derivative with respect to ``x_i`` (1-based)."""
    if not 1 <= i <= p.nvars:
        raise ContractError(f"variable index {i} out of range 1..{p.nvars}")
    k = i - 1
    out = {}
    for m, c in p.terms.items():
        e = m[k]
        if e:
            out[m[:k] + (e - 1,) + m[k + 1:]] = c * e
    return Poly._raw(p.nvars, out)


def _falling(a: int, b: int) -> int:
    r = 1
    for t in range(a - b + 1, a + 1):
        r *= t
    return r


def contract_monomial(beta: Monomial, p: Poly) -> Poly:
    """``x^beta o p``."""
    out = {}
    for alpha, c in p.terms.items():
        coef = 1
        for a, b in zip(alpha, beta):
            if a < b:
                break
            coef *= _falling(a, b)
        else:
            out[tuple(a - b for a, b in zip(alpha, beta))] = c * coef
    return Poly._raw(p.nvars, out)


def contract(g: Poly, p: Poly) -> Poly:
    """``g o p = g(d/dx1, ..., d/dxm)(p)``."""
    g._check(p)
    total = Poly.zero(p.nvars)
    for beta, c in g.terms.items():
        total = total + contract_monomial(beta, p) * c
    return total


def pairing(g: Poly, p: Poly) -> Fraction:
    """Constant term of ``g o p``."""
    g._check(p)
    return sum((c * p.coeff(beta) * mono_factorial(beta) for beta, c in g.terms.items()),
               Fraction(0))


def leading_form(p: Poly) -> Poly:
    """Homogeneous component of top degree."""
    return p.homogeneous_part(p.degree)


def dual_coeff_vector(p: Poly, frm: Sequence[Monomial]) -> tuple[Fraction, ...]:
    """Coordinates of ``p`` in the divided-power basis over ``frm``.

    Terms of the frame's degrees must all lie in the frame; terms of other
    degrees are ignored.
    """
    degs = {sum(m) for m in frm}
    index = set(frm)
    for m in p.terms:
        if sum(m) in degs and m not in index:
            raise ContractError(f"term {m} lies outside the frame")
    return tuple(p.coeff(m) * mono_factorial(m) for m in frm)


def from_dual_coeffs(coeffs: Sequence, frm: Sequence[Monomial], nvars: int) -> Poly:
    return Poly(nvars, {m: Fraction(c) / mono_factorial(m) for m, c in zip(frm, coeffs) if c})


# ---------------------------------------------------------------------------
# text form

_NUM = re.compile(r"\d+")
_WS = re.compile(r"\s*")


class PolySyntaxError(ValueError):
    """Malformed polynomial text; ``pos`` is the 0-based offset."""

    def __init__(self, msg: str, pos: int):
        super().__init__(f"{msg} at column {pos + 1}")
        self.msg = msg
        self.pos = pos


def default_names(nvars: int) -> list[str]:
    return [f"x{i}" for i in range(1, nvars + 1)]


def _name_pattern(names: Sequence[str] | None):
    alts = sorted(set(names or ()), key=len, reverse=True)
    parts = [r"x[0-9]+"] + [re.escape(a) for a in alts]
    return re.compile("|".join(f"(?:{p})" for p in parts))


def parse(text: str, nvars: int, names: Sequence[str] | None = None) -> Poly:
    """Parse a polynomial.

    Terms are joined by ``+``/``-``; a term is an optional rational ``N`` or
    ``N/D``, an optional ``*``, then factors ``name`` or ``name^E`` separated
    by ``*`` or whitespace. Variables are ``x1..xm``; ``names`` adds aliases,
    ``names[k]`` standing for ``x(k+1)``. A ``#`` starts a comment.
    """
    if names is not None and len(names) != nvars:
        raise ValueError("need exactly one alias per variable")
    alias = {n: k for k, n in enumerate(names or ())}
    name_re = _name_pattern(names)
    hash_at = text.find("#")
    if hash_at >= 0:
        text = text[:hash_at]
    pos = 0
    n = len(text)
    terms: dict[Monomial, Fraction] = {}

    def skip(p):
        return _WS.match(text, p).end()

    def variable(p):
        m = name_re.match(text, p)
        if not m:
            return None, p
        tok = m.group(0)
        if tok in alias:
            return alias[tok], m.end()
        k = int(tok[1:])
        if not 1 <= k <= nvars:
            raise PolySyntaxError(f"variable {tok} exceeds the {nvars} declared variables", p)
        return k - 1, m.end()

    pos = skip(0)
    if pos == n:
        raise PolySyntaxError("empty polynomial", pos)
    first = True
    while True:
        pos = skip(pos)
        sign = 1
        if pos < n and text[pos] in "+-":
            sign = -1 if text[pos] == "-" else 1
            pos = skip(pos + 1)
        elif not first:
            raise PolySyntaxError("expected '+' or '-'", pos)
        first = False
        coeff = Fraction(sign)
        have_coeff = False
        m = _NUM.match(text, pos)
        if m:
            num = int(m.group(0))
            pos = skip(m.end())
            if pos < n and text[pos] == "/":
                pos = skip(pos + 1)
                m2 = _NUM.match(text, pos)
                if not m2:
                    raise PolySyntaxError("expected denominator", pos)
                den = int(m2.group(0))
                if den == 0:
                    raise PolySyntaxError("zero denominator", pos)
                num = Fraction(num, den)
                pos = skip(m2.end())
            coeff *= num
            have_coeff = True
        exps = [0] * nvars
        nfactors = 0
        while True:
            save = pos
            if nfactors or have_coeff:
                if pos < n and text[pos] == "*":
                    pos = skip(pos + 1)
            k, after = variable(pos)
            if k is None:
                if pos != save:
                    raise PolySyntaxError("expected a variable after '*'", pos)
                break
            pos = skip(after)
            e = 1
            if pos < n and text[pos] == "^":
                pos = skip(pos + 1)
                m3 = _NUM.match(text, pos)
                if not m3 or int(m3.group(0)) < 1:
                    raise PolySyntaxError("expected a positive exponent", pos)
                e = int(m3.group(0))
                pos = skip(m3.end())
            exps[k] += e
            nfactors += 1
        if not (have_coeff or nfactors):
            raise PolySyntaxError("expected a term", pos)
        mono = tuple(exps)
        v = terms.get(mono, 0) + coeff
        if v:
            terms[mono] = v
        else:
            terms.pop(mono, None)
        pos = skip(pos)
        if pos == n:
            break
    return Poly._raw(nvars, terms)


def format_mono(mono: Monomial, names: Sequence[str]) -> str:
    parts = []
    for k, e in enumerate(mono):
        if e == 1:
            parts.append(names[k])
        elif e > 1:
            parts.append(f"{names[k]}^{e}")
    return "*".join(parts)


def format_poly(p: Poly, names: Sequence[str] | None = None) -> str:
    """Deterministic text form in descending deg-lex order; parses back."""
    if not p.terms:
        return "0"
    names = names or default_names(p.nvars)
    out = []
    for mono, c in p.sorted_terms():
        neg = c < 0
        a = -c if neg else c
        body = format_mono(mono, names)
        if not body:
            s = str(a)
        elif a == 1:
            s = body
        else:
            s = f"{a}*{body}"
        if not out:
            out.append(f"-{s}" if neg else s)
        else:
            out.append(f"{'-' if neg else '+'} {s}")
    return " ".join(out)


def is_homogeneous_set(polys: Iterable[Poly]) -> bool:
    return all(p.is_homogeneous() for p in polys)
