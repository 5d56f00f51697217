"""Laurent expansion, residues and nested contour integrals.

Contour variables are ordinary variables of the scalar field (``z1``..``z6``
and ``y``).  A residue is always taken of ``f(z) dz / z``; at infinity it
is the ``z^0`` coefficient of the expansion there, with positive sign.

A nested integral treats one variable at a time, nearest to the marker
set first.  For that variable the value is

    [z^0]_inf f - [z^0]_0 f - (residues at poles that sit with the marker)

i.e. the sum of residues of ``f/z`` at the poles separated from the marker
by the contour.  Poles proportional to ``y`` sit with the marker whenever
``y`` belongs to it; poles independent of every contour variable sit with
the marker for variables placed before it and are picked up for variables
placed after it.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Sequence

from ._backend import BACKEND as _B
from .report import CheckResult
from .scalars import (
    INDEX,
    M,
    ONE,
    Q,
    Q1,
    Q2,
    ZERO,
    Scalar,
    gamma_const,
    poly_coeffs,
    poly_var,
    substitute,
    var,
)

MARKER = "*"
CONTOUR_VARIABLES = tuple(f"z{i}" for i in range(1, 7)) + ("y",)


class ResidueError(ValueError):
    pass


@dataclass(frozen=True)
class MultiRat:
    """A rational function with an explicit set of active contour variables."""

    value: Scalar
    variables: tuple[str, ...] = ()

    def __post_init__(self):
        for name in self.variables:
            if name not in CONTOUR_VARIABLES:
                raise ValueError(f"{name!r} is not a contour variable")

    def to_text(self) -> str:
        return self.value.to_text()


def _as_scalar(f) -> Scalar:
    if isinstance(f, MultiRat):
        return f.value
    return Scalar.coerce(f)


# expansions


class LaurentSeries:
    """Lazy Laurent expansion of a rational function in one variable at 0 or infinity."""

    def __init__(self, f, var_name: str, point: str):
        if point not in ("0", "inf"):
            raise ValueError("point must be '0' or 'inf'")
        f = _as_scalar(f)
        self.var = var_name
        self.point = point
        num = poly_coeffs(f.num, var_name)
        den = poly_coeffs(f.den, var_name)
        if point == "0":
            n0, d0 = min(num) if num else 0, min(den)
            self._num = {k - n0: c for k, c in num.items()}
            self._den = {k - d0: c for k, c in den.items()}
            # f = z^(n0-d0) * series
            self.valuation = n0 - d0 if num else None
            self._sign = 1
        else:
            n1, d1 = max(num) if num else 0, max(den)
            self._num = {n1 - k: c for k, c in num.items()}
            self._den = {d1 - k: c for k, c in den.items()}
            # f = z^(n1-d1) * series in 1/z
            self.valuation = n1 - d1 if num else None
            self._sign = -1
        self._lead = self._den[0]
        self._cache: list = []

    def _series(self, j: int) -> Scalar:
        # e_j = c_j * lead^(j+1), kept polynomial to avoid gcds
        while len(self._cache) <= j:
            k = len(self._cache)
            acc = self._num.get(k, _B.zero) * self._lead**k
            for i in range(1, k + 1):
                d = self._den.get(i)
                if d is not None:
                    acc = acc - d * self._cache[k - i] * self._lead ** (i - 1)
            self._cache.append(acc)
        return Scalar(self._cache[j], self._lead ** (j + 1))

    def coefficient(self, k: int) -> Scalar:
        """Coefficient of ``var**k``."""
        if self.valuation is None:
            return ZERO
        j = (k - self.valuation) * (1 if self._sign == 1 else -1)
        if j < 0:
            return ZERO
        return self._series(j)

    __getitem__ = coefficient


def expand_at(f, var_name: str, point: str) -> LaurentSeries:
    return LaurentSeries(f, var_name, point)


def const_term(f, var_name: str, point: str) -> Scalar:
    return LaurentSeries(f, var_name, point).coefficient(0)


def res_infinity(f, var_name: str) -> Scalar:
    """Res_{z=inf} f/z, defined as the z^0 coefficient at infinity."""
    return const_term(f, var_name, "inf")


def res_zero(f, var_name: str) -> Scalar:
    return const_term(f, var_name, "0")


def int_inf_minus_zero(f, var_name: str) -> Scalar:
    f = _as_scalar(f)
    return const_term(f, var_name, "inf") - const_term(f, var_name, "0")


def residue_at(f, var_name: str, point) -> Scalar:
    """Residue of f/z at a finite nonzero simple pole z = point."""
    f = _as_scalar(f)
    point = Scalar.coerce(point)
    if point.is_zero():
        raise ResidueError("residue_at needs a nonzero point")
    if var_name in point.variables():
        raise ResidueError("point may not depend on the integration variable")
    z = poly_var(var_name)
    linear = point.den * z - point.num
    if not _B.divides(f.den, linear):
        return ZERO
    rest = _B.exquo(f.den, linear)
    if _B.divides(rest, linear):
        raise ResidueError("non-simple pole")
    at = {var_name: point}
    value = substitute(Scalar(f.num, canonical=True), at) / substitute(
        Scalar(rest, canonical=True), at
    )
    return value / (point * Scalar(point.den, canonical=True))


# pole clusters


def _scaled(p, names: Iterable[str]):
    t = poly_var("t")
    images = list(_B.gens)
    for name in names:
        images[INDEX[name]] = images[INDEX[name]] * t
    return _B.compose(p, images)


def _primitive_in(p, z: str):
    coeffs = list(poly_coeffs(p, z).values())
    g = coeffs[0]
    for c in coeffs[1:]:
        if _B.is_one(g):
            break
        g = _B.gcd(g, c)
    return _B.exquo(p, g)


def _cluster(den, z: str, kind: str, contour: Sequence[str]):
    """Factor of ``den`` (z-primitive) whose roots form the requested cluster."""
    others = [w for w in contour if w != z and w != "y"]
    part = den
    if kind == "const":
        moving = others + ["y"]
    elif kind == "y":
        part = _B.gcd(part, _scaled(part, [z, "y"]))
        moving = others
    else:
        raise ValueError(kind)
    for w in moving:
        if _B.degree(part, INDEX[w]) > 0:
            part = _B.gcd(part, _scaled(part, [w]))
    return _primitive_in(part, z)


def _root_residue(f: Scalar, z: str, root: Scalar, mult: int) -> Scalar:
    if mult == 1:
        return residue_at(f, z, root)
    # local coordinate t = z - root
    t = var("t")
    shifted = substitute(f, {z: root + t}) / (root + t)
    return LaurentSeries(shifted, "t", "0").coefficient(-1)


def cluster_residue_sum(f, z: str, kinds: Sequence[str], contour: Sequence[str]) -> Scalar:
    """Sum of residues of f/z over the poles in the named clusters.

    Only the (small) cluster factor of the denominator is factored; every
    pole must be a root of a factor linear in z.
    """
    f = _as_scalar(f)
    zi = INDEX[z]
    zp = poly_var(z)
    den = f.den
    low = min(e[zi] for e, _ in _B.terms(den))
    den = _B.exquo(den, zp**low)
    total = ZERO
    for kind in kinds:
        part = _cluster(den, z, kind, contour)
        if _B.degree(part, zi) <= 0:
            continue
        for factor, mult in _B.factor(part):
            deg = _B.degree(factor, zi)
            if deg <= 0:
                continue
            if deg > 1:
                raise ResidueError("pole cluster with a non-linear factor")
            coeffs = poly_coeffs(factor, z)
            root = -Scalar(coeffs.get(0, _B.zero)) / Scalar(coeffs[1])
            total = total + _root_residue(f, z, root, mult)
    return total


# nested integrals


@dataclass(frozen=True)
class ContourOrder:
    """Nesting of contour variables around the marker set.

    ``sequence`` lists the variables in nesting order with ``"*"`` standing
    for the marker set {0, inf} (plus ``y`` when ``with_y``).
    """

    sequence: tuple[str, ...]
    with_y: bool = False

    def __post_init__(self):
        if self.sequence.count(MARKER) != 1:
            raise ValueError("marker set must appear exactly once")
        names = [s for s in self.sequence if s != MARKER]
        if len(set(names)) != len(names):
            raise ValueError("each contour variable must appear once")
        for name in names:
            if name not in CONTOUR_VARIABLES or name == "y":
                raise ValueError(f"{name!r} is not an integration variable")

    @property
    def variables(self) -> tuple[str, ...]:
        return tuple(s for s in self.sequence if s != MARKER)

    def schedule(self) -> list[tuple[str, bool]]:
        """Variables nearest to the marker first, with 'before the marker' flags."""
        k = self.sequence.index(MARKER)
        entries = []
        for i, name in enumerate(self.sequence):
            if name != MARKER:
                entries.append((abs(i - k), i > k, name, i < k))
        entries.sort()
        return [(name, before) for _, _, name, before in entries]

    @staticmethod
    def marker_first(names: Sequence[str], with_y: bool = False) -> "ContourOrder":
        return ContourOrder((MARKER, *names), with_y)

    @staticmethod
    def marker_last(names: Sequence[str], with_y: bool = False) -> "ContourOrder":
        return ContourOrder((*names, MARKER), with_y)


def nested_contour_integral(f, order: ContourOrder) -> Scalar:
    f = _as_scalar(f)
    present = {v for v in f.variables() if v in CONTOUR_VARIABLES and v != "y"}
    missing = present - set(order.variables)
    if missing:
        raise ResidueError(f"unordered variable(s): {sorted(missing)}")
    remaining = list(order.variables)
    for name, before in order.schedule():
        kinds = []
        if before:
            kinds.append("const")
        if order.with_y:
            kinds.append("y")
        contour = remaining + (["y"] if order.with_y else [])
        value = int_inf_minus_zero(f, name)
        if kinds and name in f.variables():
            value = value - cluster_residue_sum(f, name, kinds, contour)
        f = value
        remaining.remove(name)
    return f


# kernels


def zeta_factor(x: Scalar) -> Scalar:
    return (1 - x * Q1) * (1 - x * Q2) / ((1 - x) * (1 - x * Q))


def chern_roots(r: int) -> tuple[list[Scalar], list[Scalar]]:
    if not 1 <= r <= 4:
        raise ValueError("between 1 and 4 Chern roots are supported")
    return [var(f"a{j}") for j in range(1, r + 1)], [var(f"b{j}") for j in range(1, r + 1)]


def wedge_factor(roots: Sequence[Scalar], arg: Scalar, sign: str = "+", side: str = "over") -> Scalar:
    """Wedge of a class given by Chern roots.

    ``side="over"`` gives prod_j (1 - arg/root_j); ``side="under"`` gives
    prod_j (1 - root_j * arg).  Sign ``-`` returns the reciprocal.
    """
    if not roots:
        raise ValueError("roots must be nonempty")
    out = ONE
    for root in roots:
        out = out * (1 - (arg / root if side == "over" else root * arg))
    if sign == "-":
        return out.inverse()
    if sign != "+":
        raise ValueError("sign must be '+' or '-'")
    return out


VARIANTS = ("I", "I_bis", "I_y", "I_y_bis")


@dataclass(frozen=True)
class KernelSpec:
    variant: str
    n: int
    r: int
    names: tuple[str, ...] = field(default=())
    y: Scalar | None = None

    def __post_init__(self):
        if self.variant not in VARIANTS:
            raise ValueError(f"unknown kernel variant {self.variant!r}")
        if self.n < 0 or self.r < 1:
            raise ValueError("need n >= 0 and r >= 1")
        if self.names and len(self.names) != self.n:
            raise ValueError("one variable name per contour variable")

    def variable_names(self) -> tuple[str, ...]:
        return self.names or tuple(f"z{i}" for i in range(1, self.n + 1))


def _chain(zs: Sequence[Scalar]) -> Scalar:
    out = ONE
    for i in range(len(zs) - 1):
        out = out * (1 - Q * zs[i + 1] / zs[i])
    for i in range(len(zs)):
        for j in range(i + 1, len(zs)):
            out = out * zeta_factor(zs[j] / zs[i])
    return out


def kernel(spec: KernelSpec) -> MultiRat:
    names = spec.variable_names()
    zs = [var(n) for n in names]
    a, b = chern_roots(spec.r)
    body = _chain(zs).inverse()
    if spec.variant in ("I", "I_y"):
        for z in zs:
            body = body * wedge_factor(a, M / (z * Q), side="under") / wedge_factor(b, 1 / z, side="under")
    else:
        body = body * Q ** (spec.r * spec.n)
        for z in zs:
            body = body * wedge_factor(b, 1 / (z * Q), side="under") / wedge_factor(
                a, M / (z * Q), side="under"
            )
    if spec.variant in ("I_y", "I_y_bis") and spec.n > 0:
        y = var("y") if spec.y is None else spec.y
        body = body / (1 - y / zs[-1])
        if spec.variant == "I_y_bis":
            body = body / Q ** ((spec.r - 1) * spec.n)
    return MultiRat(body, names)


def gamma_roots(r: int) -> Scalar:
    """gamma with u, v specialized to the products of the Chern roots."""
    a, b = chern_roots(r)
    u = ONE
    v = ONE
    for x in a:
        u = u * x
    for x in b:
        v = v * x
    return gamma_const(r, u, v).value


def y_weight(r: int, y: Scalar, bis: bool = False) -> Scalar:
    """The wedge ratio produced by the pole at z_n = y."""
    a, b = chern_roots(r)
    if bis:
        return Q * wedge_factor(b, 1 / (y * Q), side="under") / wedge_factor(a, M / (y * Q), side="under")
    return wedge_factor(a, M / (y * Q), side="under") / wedge_factor(b, 1 / y, side="under")


# verification


def _compare(name: str, params: dict, lhs: Scalar, rhs: Scalar) -> CheckResult:
    diff = lhs - rhs
    if diff.is_zero():
        return CheckResult(name, params, True)
    return CheckResult(name, params, False, [diff.to_text()])


def verify_residue_identities(variant: str, n: int, r: int) -> list[CheckResult]:
    """Residue table at 0, inf (and y for the y-variants) of the n-variable kernel."""
    if n < 1:
        raise ValueError("n must be at least 1")
    names = tuple(f"z{i}" for i in range(1, n + 1))
    f = kernel(KernelSpec(variant, n, r, names)).value
    g = gamma_roots(r)
    bis = variant in ("I_bis", "I_y_bis")
    has_y = variant in ("I_y", "I_y_bis")
    params = {"variant": variant, "n": n, "r": r}
    out: list[CheckResult] = []

    tail = kernel(KernelSpec(variant, n - 1, r, names[1:])).value
    head_factor = Q**r if variant == "I_bis" else (Q if variant == "I_y_bis" else ONE)
    out.append(
        _compare("res_inf_first", params, res_infinity(f, names[0]), head_factor * tail)
    )
    if has_y:
        yq = var("y") * Q
        shifted = kernel(KernelSpec(variant, n - 1, r, names[:-1], yq)).value
        expected = y_weight(r, var("y"), bis) * shifted
        res_y = residue_at(f, names[-1], var("y"))
        out.append(_compare("res_y_last", params, res_y, expected))
        if n >= 2:
            # the literal entry misses the zeta factors linking y to z_1..z_{n-1}
            corr = ONE
            for name in names[:-1]:
                corr = corr * zeta_factor(var("y") / var(name))
            out.append(_compare("res_y_last_zeta_corrected", params, res_y * corr, expected))
    else:
        head = kernel(KernelSpec(variant, n - 1, r, names[:-1])).value
        factor = g.inverse() if bis else g
        out.append(_compare("res_zero_last", params, res_zero(f, names[-1]), factor * head))
    for i, name in enumerate(names):
        if i > 0:
            out.append(_compare(f"res_inf_{name}", params, res_infinity(f, name), ZERO))
        if i < n - 1 or has_y:
            out.append(_compare(f"res_zero_{name}", params, res_zero(f, name), ZERO))
    return out


def _integrals(variant: str, n: int, r: int, y: Scalar | None = None) -> tuple[Scalar, Scalar]:
    """(marker-first, marker-last) nested integrals of the kernel."""
    if n == 0:
        return ONE, ONE
    names = tuple(f"z{i}" for i in range(1, n + 1))
    f = kernel(KernelSpec(variant, n, r, names, y)).value
    with_y = variant in ("I_y", "I_y_bis")
    first = nested_contour_integral(f, ContourOrder.marker_first(names, with_y))
    last = nested_contour_integral(f, ContourOrder.marker_last(names, with_y))
    return first, last


def contour_difference_check(variant: str, n: int, r: int) -> CheckResult:
    """Contour-difference identity relating n and n-1 variables.

    J is the marker-first integral and K the marker-last one.  For the
    plain kernel J_n - K_n = J_{n-1} - gamma K_{n-1}; for the bis kernel
    K_n - J_n = gamma^-1 K_{n-1} - q^r J_{n-1}.  The y-variants follow the
    same pattern with the y-residue weight and the shift y -> yq.
    """
    g = gamma_roots(r)
    y = var("y")
    params = {"variant": variant, "n": n, "r": r}
    if variant == "I":
        j, k = _integrals("I", n, r)
        j1, k1 = _integrals("I", n - 1, r)
        return _compare("contour_difference", params, j - k, j1 - g * k1)
    if variant == "I_bis":
        j, k = _integrals("I_bis", n, r)
        j1, k1 = _integrals("I_bis", n - 1, r)
        return _compare("contour_difference", params, k - j, g.inverse() * k1 - Q**r * j1)
    if variant == "I_y":
        j, k = _integrals("I_y", n, r, y)
        j1, _ = _integrals("I_y", n - 1, r, y)
        _, k1 = _integrals("I_y", n - 1, r, y * Q)
        return _compare("contour_difference", params, j - k, j1 - y_weight(r, y) * k1)
    if variant == "I_y_bis":
        j, k = _integrals("I_y_bis", n, r, y)
        j1, _ = _integrals("I_y_bis", n - 1, r, y)
        _, k1 = _integrals("I_y_bis", n - 1, r, y * Q)
        return _compare("contour_difference", params, k - j, y_weight(r, y, True) * k1 - Q * j1)
    raise ValueError(variant)


def rescaling_check(n: int, r: int, bis: bool = False) -> CheckResult:
    """The marker-last integrand is a rescaled copy of the kernel, twisted by gamma^-+n."""
    names = tuple(f"z{i}" for i in range(1, n + 1))
    zs = [var(x) for x in names]
    a, b = chern_roots(r)
    g = gamma_roots(r)
    body = _chain(zs).inverse()
    f = kernel(KernelSpec("I_bis" if bis else "I", n, r, names)).value
    if not bis:
        for z in zs:
            body = body * wedge_factor(a, z * Q) / wedge_factor(b, z * M)
        scaled = substitute(f, {x: z * M for x, z in zip(names, zs)}) * g ** (-n)
    else:
        u = ONE
        for x in a:
            u = u * x
        for z in zs:
            body = body * (-1) ** r * u * z ** (-r) * wedge_factor(b, z * M) / wedge_factor(a, z.inverse(), side="under")
        scaled = substitute(f, {x: z * M / Q for x, z in zip(names, zs)}) * g**n
    return _compare("rescaling", {"n": n, "r": r, "bis": bis}, body, scaled)


def residue_suite(r: int, max_n: int) -> list[CheckResult]:
    out = [
        _compare("int_inf_minus_zero_geometric", {}, int_inf_minus_zero(1 / (1 - var("z1")), "z1"), -ONE),
        _compare("int_inf_minus_zero_pole", {}, int_inf_minus_zero(var("z1") / (var("z1") - var("y")), "z1"), ONE),
        _compare("residue_at_simple", {}, residue_at(var("z1") / (var("z1") - var("y")), "z1", var("y")), ONE),
    ]
    for variant in VARIANTS:
        for n in range(1, max_n + 1):
            out += verify_residue_identities(variant, n, r)
            out.append(contour_difference_check(variant, n, r))
    for n in range(1, max_n + 1):
        out.append(rescaling_check(n, r))
        out.append(rescaling_check(n, r, bis=True))
    return out
