"""Exact rational functions over the integers.

Every coefficient in the package is a :class:`Scalar`: a reduced fraction
of integer polynomials in a fixed, lexicographically ordered variable
list.  ``q`` is never a variable of its own; it is always ``q1*q2``.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass
from functools import lru_cache, reduce
from typing import Iterable, Mapping, Union

from ._backend import BACKEND, VARIABLES

_B = BACKEND
INDEX: dict[str, int] = {name: i for i, name in enumerate(VARIABLES)}

Coercible = Union["Scalar", int]


class ScalarError(ArithmeticError):
    pass


def _normalize(num, den):
    if _B.is_zero(den):
        raise ZeroDivisionError("division by zero")
    if _B.is_zero(num):
        return _B.zero, _B.one
    if not _B.is_one(den):
        g = _B.gcd(num, den)
        if not _B.is_one(g):
            num = _B.exquo(num, g)
            den = _B.exquo(den, g)
        if _B.lc(den) < 0:
            num, den = -num, -den
    return num, den


class Scalar:
    """Canonical fraction ``num/den``.

    The denominator has positive leading coefficient in lex order and
    shares no factor (integer content included) with the numerator.
    """

    __slots__ = ("num", "den", "_hash")

    def __init__(self, num, den=None, *, canonical: bool = False):
        if den is None:
            den = _B.one
        if not canonical:
            num, den = _normalize(num, den)
        self.num = num
        self.den = den
        self._hash = None

    # construction

    @staticmethod
    def coerce(x: Coercible) -> "Scalar":
        if isinstance(x, Scalar):
            return x
        if isinstance(x, int):
            return Scalar(_B.from_int(x), _B.one, canonical=True)
        raise TypeError(f"cannot coerce {type(x).__name__} to Scalar")

    @staticmethod
    def var(name: str) -> "Scalar":
        try:
            i = INDEX[name]
        except KeyError:
            raise ValueError(f"unknown variable {name!r}") from None
        return Scalar(_B.gen(i), _B.one, canonical=True)

    # predicates

    def is_zero(self) -> bool:
        return _B.is_zero(self.num)

    def is_one(self) -> bool:
        return _B.is_one(self.num) and _B.is_one(self.den)

    def is_polynomial(self) -> bool:
        return _B.is_one(self.den)

    def variables(self) -> set[str]:
        return {VARIABLES[i] for i in _B.used(self.num) + _B.used(self.den)}

    # arithmetic

    def __add__(self, other: Coercible) -> "Scalar":
        o = _coerce_or_none(other)
        if o is None:
            return NotImplemented
        if o.is_zero():
            return self
        if self.is_zero():
            return o
        if self.den == o.den:
            return Scalar(self.num + o.num, self.den)
        if _B.is_one(o.den):
            return Scalar(self.num + o.num * self.den, self.den, canonical=True)
        if _B.is_one(self.den):
            return Scalar(self.num * o.den + o.num, o.den, canonical=True)
        g = _B.gcd(self.den, o.den)
        a = _B.exquo(self.den, g)
        b = _B.exquo(o.den, g)
        return Scalar(self.num * b + o.num * a, a * o.den)

    __radd__ = __add__

    @staticmethod
    def sum(items: Iterable["Scalar"]) -> "Scalar":
        """Sum with a single final reduction.

        Terms sharing a denominator are added numerator-wise; distinct
        denominators are merged through their gcd without reducing the
        running numerator.
        """
        groups: list[list] = []
        for s in items:
            if _B.is_zero(s.num):
                continue
            for g in groups:
                if g[0] == s.den:
                    g[1] = g[1] + s.num
                    break
            else:
                groups.append([s.den, s.num])
        if not groups:
            return ZERO
        den, num = groups[0]
        for d, n in groups[1:]:
            if _B.is_zero(n):
                continue
            if _B.is_one(d):
                num = num + n * den
                continue
            g = _B.gcd(den, d)
            a = _B.exquo(den, g)
            b = _B.exquo(d, g)
            num = num * b + n * a
            den = a * d
        return Scalar(num, den)

    @staticmethod
    def sum_products(pairs: Iterable[tuple["Scalar", "Scalar"]]) -> "Scalar":
        """sum a*b without reducing the individual products."""
        raw = []
        for a, b in pairs:
            if _B.is_zero(a.num) or _B.is_zero(b.num):
                continue
            raw.append(Scalar(a.num * b.num, a.den * b.den, canonical=True))
        return Scalar.sum(raw)

    def __neg__(self) -> "Scalar":
        return Scalar(-self.num, self.den, canonical=True)

    def __sub__(self, other: Coercible) -> "Scalar":
        o = _coerce_or_none(other)
        if o is None:
            return NotImplemented
        return self + (-o)

    def __rsub__(self, other: Coercible) -> "Scalar":
        return Scalar.coerce(other) - self

    def __mul__(self, other: Coercible) -> "Scalar":
        o = _coerce_or_none(other)
        if o is None:
            return NotImplemented
        if self.is_zero() or o.is_zero():
            return ZERO
        if _B.is_constant(o.num) and _B.is_constant(o.den):
            return self._scale_rational(o)
        if _B.is_constant(self.num) and _B.is_constant(self.den):
            return o._scale_rational(self)
        n1, d1, n2, d2 = self.num, self.den, o.num, o.den
        if not _B.is_one(d2):
            g = _B.gcd(n1, d2)
            if not _B.is_one(g):
                n1, d2 = _B.exquo(n1, g), _B.exquo(d2, g)
        if not _B.is_one(d1):
            g = _B.gcd(n2, d1)
            if not _B.is_one(g):
                n2, d1 = _B.exquo(n2, g), _B.exquo(d1, g)
        num, den = n1 * n2, d1 * d2
        if _B.lc(den) < 0:
            num, den = -num, -den
        return Scalar(num, den, canonical=True)

    __rmul__ = __mul__

    def _scale_rational(self, c: "Scalar") -> "Scalar":
        # c is a nonzero rational number; only integer content can cancel
        a, b = _B.lc(c.num), _B.lc(c.den)
        num, den = self.num * _B.from_int(a), self.den * _B.from_int(b)
        g = math.gcd(_B.content(num), _B.content(den))
        if g != 1:
            num, den = _B.exquo(num, _B.from_int(g)), _B.exquo(den, _B.from_int(g))
        return Scalar(num, den, canonical=True)

    def inverse(self) -> "Scalar":
        if self.is_zero():
            raise ZeroDivisionError("division by zero")
        num, den = self.den, self.num
        if _B.lc(den) < 0:
            num, den = -num, -den
        return Scalar(num, den, canonical=True)

    def __truediv__(self, other: Coercible) -> "Scalar":
        o = _coerce_or_none(other)
        if o is None:
            return NotImplemented
        return self * o.inverse()

    def __rtruediv__(self, other: Coercible) -> "Scalar":
        return Scalar.coerce(other) * self.inverse()

    def __pow__(self, e: int) -> "Scalar":
        if not isinstance(e, int):
            return NotImplemented
        if e < 0:
            return self.inverse() ** (-e)
        if e == 0:
            return ONE
        return Scalar(self.num**e, self.den**e, canonical=True)

    # comparison

    def __eq__(self, other) -> bool:
        o = _coerce_or_none(other)
        if o is None:
            return NotImplemented
        return self.num == o.num and self.den == o.den

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash(self.to_text())
        return self._hash

    def __bool__(self) -> bool:
        return not self.is_zero()

    # text

    def to_text(self) -> str:
        num = _wrap(poly_to_text(self.num), False)
        return f"{num}/{_wrap(poly_to_text(self.den), True)}"

    @staticmethod
    def from_text(text: str) -> "Scalar":
        return parse_scalar(text)

    def __str__(self) -> str:
        if self.is_polynomial():
            return poly_to_text(self.num)
        return self.to_text()

    def __repr__(self) -> str:
        return f"Scalar({self.to_text()!r})"


def _coerce_or_none(x) -> Scalar | None:
    if isinstance(x, Scalar):
        return x
    if isinstance(x, int):
        return Scalar.coerce(x)
    return None


def _wrap(s: str, strict: bool) -> str:
    # denominators with a product get parentheses too, so a/(b*c) reads right
    if " " in s or (strict and "*" in s):
        return f"({s})"
    return s


ZERO = Scalar(_B.zero, _B.one, canonical=True)
ONE = Scalar(_B.one, _B.one, canonical=True)


# polynomial text format


def _monomial_text(exps: tuple[int, ...]) -> str:
    parts = []
    for i, e in enumerate(exps):
        if e == 1:
            parts.append(VARIABLES[i])
        elif e > 1:
            parts.append(f"{VARIABLES[i]}^{e}")
    return "*".join(parts)


def poly_to_text(p) -> str:
    terms = _B.terms(p)
    if not terms:
        return "0"
    out = []
    for k, (exps, c) in enumerate(terms):
        mono = _monomial_text(exps)
        a = abs(c)
        if mono:
            body = mono if a == 1 else f"{a}*{mono}"
        else:
            body = str(a)
        if k == 0:
            out.append(f"-{body}" if c < 0 else body)
        else:
            out.append(f"{'-' if c < 0 else '+'} {body}")
    return " ".join(out)


_TERM = re.compile(r"([+-]?)([^+-]+)")


def parse_poly(text: str):
    s = text.strip()
    if s.startswith("(") and s.endswith(")"):
        s = s[1:-1]
    s = s.replace(" ", "")
    if not s:
        raise ValueError("empty polynomial")
    terms: dict[tuple[int, ...], int] = {}
    pos = 0
    for match in _TERM.finditer(s):
        if match.start() != pos:
            raise ValueError(f"cannot parse polynomial {text!r}")
        pos = match.end()
        sign = -1 if match.group(1) == "-" else 1
        coeff = 1
        exps = [0] * len(VARIABLES)
        for factor in match.group(2).split("*"):
            if factor.isdigit():
                coeff *= int(factor)
                continue
            name, _, power = factor.partition("^")
            if name not in INDEX:
                raise ValueError(f"unknown variable {name!r} in {text!r}")
            exps[INDEX[name]] += int(power) if power else 1
        key = tuple(exps)
        terms[key] = terms.get(key, 0) + sign * coeff
    if pos != len(s):
        raise ValueError(f"cannot parse polynomial {text!r}")
    return _B.from_terms([(e, c) for e, c in terms.items() if c])


def _split_fraction(text: str) -> tuple[str, str]:
    depth = 0
    for i, ch in enumerate(text):
        if ch == "(":
            depth += 1
        elif ch == ")":
            depth -= 1
        elif ch == "/" and depth == 0:
            return text[:i], text[i + 1 :]
    return text, "1"


def parse_scalar(text: str) -> Scalar:
    num, den = _split_fraction(text.strip())
    return Scalar(parse_poly(num), parse_poly(den))


# polynomial helpers used by the residue module


def poly_coeffs(p, var: str) -> dict[int, object]:
    """Split ``p`` as a polynomial in ``var`` with polynomial coefficients."""
    i = INDEX[var]
    groups: dict[int, list] = {}
    for exps, c in _B.terms(p):
        k = exps[i]
        e = list(exps)
        e[i] = 0
        groups.setdefault(k, []).append((tuple(e), c))
    return {k: _B.from_terms(ts) for k, ts in groups.items()}


def poly_degree(p, var: str) -> int:
    return _B.degree(p, INDEX[var])


def poly_low_degree(p, var: str) -> int:
    i = INDEX[var]
    return min(e[i] for e, _ in _B.terms(p))


def poly_var(name: str):
    return _B.gen(INDEX[name])


# constants


def var(name: str) -> Scalar:
    return Scalar.var(name)


def const(n: int) -> Scalar:
    return Scalar.coerce(n)


Q1 = var("q1")
Q2 = var("q2")
Q = Q1 * Q2
M = var("m")
U = var("u")
V = var("v")


def qbracket(x: Coercible, n: int) -> Scalar:
    if n < 0:
        raise ValueError("qbracket needs n >= 0")
    x = Scalar.coerce(x)
    total = ZERO
    power = ONE
    for _ in range(n):
        total = total + power
        power = power * x
    return total


@lru_cache(maxsize=None)
def kappa(n: int, r: int) -> Scalar:
    """Central term of the Heisenberg bracket: n [q1]_n [q2]_n [q^n]_r."""
    if n < 1 or r < 1:
        raise ValueError("kappa needs n >= 1 and r >= 1")
    return n * qbracket(Q1, n) * qbracket(Q2, n) * qbracket(Q**n, r)


@lru_cache(maxsize=None)
def rus_weight(n: int, r: int) -> Scalar:
    """w_n = (q^n - 1) q^{-nr} / (n [q1]_n [q2]_n)."""
    return (Q**n - 1) * Q ** (-n * r) / (n * qbracket(Q1, n) * qbracket(Q2, n))


@dataclass(frozen=True)
class GammaConst:
    rank: int
    value: Scalar


def gamma_const(r: int, u: Scalar | None = None, v: Scalar | None = None) -> GammaConst:
    if r < 1:
        raise ValueError("rank must be positive")
    u = U if u is None else u
    v = V if v is None else v
    return GammaConst(r, M**r * u / (Q**r * v))


def _poly_substitute(p, images: list[Scalar], used: Iterable[int]):
    """Return (num, den) of ``p`` after replacing variable i by images[i]."""
    used = list(used)
    if all(images[i].is_polynomial() for i in used):
        return _B.compose(p, [im.num for im in images]), _B.one
    degs = {i: _B.degree(p, i) for i in used}
    dens = {i: images[i].den for i in used if not images[i].is_polynomial()}
    num_pows: dict[tuple[int, int], object] = {}
    den_pows: dict[tuple[int, int], object] = {}

    def npow(i, e):
        key = (i, e)
        if key not in num_pows:
            num_pows[key] = images[i].num ** e
        return num_pows[key]

    def dpow(i, e):
        key = (i, e)
        if key not in den_pows:
            den_pows[key] = dens[i] ** e
        return den_pows[key]

    total = _B.zero
    for exps, c in _B.terms(p):
        term = _B.from_int(c)
        for i, e in enumerate(exps):
            if e == 0 and i not in dens:
                continue
            if i in dens:
                term = term * npow(i, e) * dpow(i, degs[i] - e)
            else:
                term = term * npow(i, e)
        total = total + term
    common = reduce(lambda a, b: a * b, (dpow(i, degs[i]) for i in dens), _B.one)
    return total, common


def _horner_substitute(p, i: int, image: Scalar):
    """(num, den) of p with variable i replaced by a rational image."""
    coeffs = poly_coeffs(p, VARIABLES[i])
    if not coeffs:
        return p, _B.one
    top = max(coeffs)
    num, den = image.num, image.den
    acc = coeffs[top]
    dpow = _B.one
    for k in range(top - 1, -1, -1):
        dpow = dpow * den
        acc = acc * num
        c = coeffs.get(k)
        if c is not None:
            acc = acc + c * dpow
    return acc, den**top


def substitute(s: Scalar, bindings: Mapping[str, Coercible]) -> Scalar:
    """Simultaneous substitution of variables by Scalars."""
    if not bindings:
        return s
    images = [Scalar.var(n) for n in VARIABLES]
    for name, value in bindings.items():
        if name not in INDEX:
            raise ValueError(f"unknown variable {name!r}")
        images[INDEX[name]] = Scalar.coerce(value)
    used = sorted(
        i for i in set(_B.used(s.num)) | set(_B.used(s.den)) if VARIABLES[i] in bindings
    )
    if not used:
        return s
    bound = {VARIABLES[i] for i in used}
    independent = all(not (images[i].variables() & bound) for i in used)
    if independent and not all(images[i].is_polynomial() for i in used):
        # one variable at a time gives the same result when no image
        # mentions another substituted variable
        num, den = s.num, s.den
        n_den = d_den = _B.one
        for i in used:
            num, a = _horner_substitute(num, i, images[i])
            den, b = _horner_substitute(den, i, images[i])
            n_den, d_den = n_den * a, d_den * b
    else:
        num, n_den = _poly_substitute(s.num, images, used)
        den, d_den = _poly_substitute(s.den, images, used)
    if _B.is_zero(den):
        raise ZeroDivisionError("division by zero")
    return Scalar(num * d_den, n_den * den)


def canonicalize(num, den) -> Scalar:
    """Build a Scalar from two polynomials (backend objects, Scalars or text)."""
    if isinstance(num, str):
        num = parse_poly(num)
    if isinstance(den, str):
        den = parse_poly(den)
    if isinstance(num, (Scalar, int)) or isinstance(den, (Scalar, int)):
        return Scalar.coerce(num) / Scalar.coerce(den)
    return Scalar(num, den)
