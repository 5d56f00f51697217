"""Deformed Heisenberg algebra on a partition-indexed Fock module.

The module is modelled as polynomials in commuting symbols ``p_1, p_2, ...``
with the basis vector of a partition ``lam`` equal to ``prod p_{lam_i}``.
``P_{-n}`` multiplies by ``p_n`` and ``P_n`` (n > 0) acts as
``-kappa(n, r) d/dp_n``, so that ``[P_{-n}, P_n] = kappa(n, r)`` and the
vacuum is annihilated by positive modes.
"""

from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass
from functools import lru_cache
from typing import Callable, Iterable, Mapping, Sequence

from sympy.utilities.iterables import partitions as _sympy_partitions

from .report import CheckResult
from .scalars import ONE, ZERO, Scalar, kappa, rus_weight, var


class FockError(ValueError):
    pass


class Partition(tuple):
    """Weakly decreasing tuple of positive integers."""

    def __new__(cls, parts: Iterable[int] = ()):
        parts = tuple(sorted((int(p) for p in parts), reverse=True))
        if parts and parts[-1] <= 0:
            raise FockError(f"partition parts must be positive: {parts}")
        return super().__new__(cls, parts)

    @property
    def size(self) -> int:
        return sum(self)

    def multiplicities(self) -> Counter:
        return Counter(self)

    def add(self, part: int) -> "Partition":
        return Partition(self + (part,))

    def remove(self, part: int) -> "Partition":
        parts = list(self)
        parts.remove(part)
        return Partition(parts)

    def __repr__(self) -> str:
        return f"Partition({list(self)})"


EMPTY = Partition()


@lru_cache(maxsize=None)
def partitions_of(n: int) -> tuple[Partition, ...]:
    """All partitions of n, sorted in reverse lexicographic order."""
    if n < 0:
        return ()
    out = []
    for mult in _sympy_partitions(n):
        parts = []
        for k, m in mult.items():
            parts.extend([k] * m)
        out.append(Partition(parts))
    return tuple(sorted(out, reverse=True))


def basis_upto(n: int) -> list[Partition]:
    return [lam for d in range(n + 1) for lam in partitions_of(d)]


def z_factor(lam: Partition) -> int:
    """z_lambda = prod_k k^{m_k} m_k!."""
    out = 1
    for k, m in lam.multiplicities().items():
        out *= k**m * math.factorial(m)
    return out


def partition_key(lam: Partition) -> tuple:
    return (lam.size, tuple(lam))


@dataclass(frozen=True)
class FockModule:
    rank: int
    side: str = "u"

    def __post_init__(self):
        if self.rank < 1:
            raise FockError("rank must be positive")
        if self.side not in ("u", "v"):
            raise FockError("side must be 'u' or 'v'")

    @property
    def det(self) -> Scalar:
        return var(self.side)


class FockVector:
    """Finite combination of partition basis vectors."""

    __slots__ = ("terms", "module")

    def __init__(self, terms: Mapping[Partition, Scalar], module: FockModule):
        self.terms = {lam: c for lam, c in terms.items() if not c.is_zero()}
        self.module = module

    @staticmethod
    def zero(module: FockModule) -> "FockVector":
        return FockVector({}, module)

    @staticmethod
    def basis(module: FockModule, lam: Iterable[int] = ()) -> "FockVector":
        return FockVector({Partition(lam): ONE}, module)

    @staticmethod
    def vacuum(module: FockModule) -> "FockVector":
        return FockVector({EMPTY: ONE}, module)

    def is_zero(self) -> bool:
        return not self.terms

    def degrees(self) -> set[int]:
        return {lam.size for lam in self.terms}

    def component(self, d: int) -> "FockVector":
        return FockVector({lam: c for lam, c in self.terms.items() if lam.size == d}, self.module)

    def truncate(self, cap: int | None) -> "FockVector":
        if cap is None:
            return self
        return FockVector({lam: c for lam, c in self.terms.items() if lam.size <= cap}, self.module)

    def coefficient(self, lam: Iterable[int]) -> Scalar:
        return self.terms.get(Partition(lam), ZERO)

    def with_module(self, module: FockModule) -> "FockVector":
        return FockVector(self.terms, module)

    def items(self) -> list[tuple[Partition, Scalar]]:
        return sorted(self.terms.items(), key=lambda kv: partition_key(kv[0]))

    def _combine(self, other: "FockVector", sign: int) -> "FockVector":
        out = dict(self.terms)
        for lam, c in other.terms.items():
            prev = out.get(lam)
            if prev is None:
                out[lam] = c if sign > 0 else -c
            else:
                out[lam] = prev + c if sign > 0 else prev - c
        return FockVector(out, self.module)

    def __add__(self, other: "FockVector") -> "FockVector":
        return self._combine(other, 1)

    def __sub__(self, other: "FockVector") -> "FockVector":
        return self._combine(other, -1)

    def __neg__(self) -> "FockVector":
        return FockVector({lam: -c for lam, c in self.terms.items()}, self.module)

    def scale(self, c) -> "FockVector":
        c = Scalar.coerce(c)
        if c.is_zero():
            return FockVector.zero(self.module)
        if c.is_one():
            return self
        return FockVector({lam: c * x for lam, x in self.terms.items()}, self.module)

    __rmul__ = scale

    def __eq__(self, other) -> bool:
        if not isinstance(other, FockVector):
            return NotImplemented
        return self.terms == other.terms

    def serialize(self) -> list:
        return [[list(lam), c.to_text()] for lam, c in self.items()]

    def __repr__(self) -> str:
        body = " + ".join(f"({c})*P{list(lam)}" for lam, c in self.items()) or "0"
        return f"FockVector[{self.module.rank}{self.module.side}]({body})"


def combine(vectors: Iterable[tuple[Scalar, FockVector]], module: FockModule) -> FockVector:
    pending: dict[Partition, list[Scalar]] = {}
    for c, vec in vectors:
        if c.is_zero():
            continue
        one = c.is_one()
        for lam, x in vec.terms.items():
            pending.setdefault(lam, []).append(x if one else c * x)
    out = {lam: (xs[0] if len(xs) == 1 else Scalar.sum(xs)) for lam, xs in pending.items()}
    return FockVector(out, module)


# Heisenberg action


def act_p(n: int, x: FockVector) -> FockVector:
    if n == 0:
        raise FockError("P_0 is not a generator")
    if n < 0:
        return FockVector({lam.add(-n): c for lam, c in x.terms.items()}, x.module)
    k = -kappa(n, x.module.rank)
    out: dict[Partition, Scalar] = {}
    for lam, c in x.terms.items():
        m = lam.count(n)
        if m:
            mu = lam.remove(n)
            term = c * k * m
            out[mu] = out[mu] + term if mu in out else term
    return FockVector(out, x.module)


def act_word(modes: Sequence[int], x: FockVector) -> FockVector:
    """Apply P_{modes[0]} ... P_{modes[-1]} (rightmost first)."""
    for n in reversed(modes):
        x = act_p(n, x)
    return x


def act_h(n: int, x: FockVector) -> FockVector:
    """H_n through the power-sum expansion sum_{lam |- |n|} P_{+-lam}/z_lam."""
    if n == 0:
        return x
    sign = 1 if n > 0 else -1
    total = FockVector.zero(x.module)
    for lam in partitions_of(abs(n)):
        y = x
        for part in lam:
            y = act_p(sign * part, y)
            if y.is_zero():
                break
        if not y.is_zero():
            total = total + y.scale(Scalar.coerce(1) / z_factor(lam))
    return total


# exponentials


def exp_series_vector(coeffs: Mapping[int, Scalar], cap: int, module: FockModule) -> FockVector:
    """exp(sum c_n p_n) truncated to degree cap, as a vector."""
    layers: list[dict[Partition, Scalar]] = [{EMPTY: ONE}]
    total: dict[Partition, Scalar] = {EMPTY: ONE}
    k = 1
    while True:
        nxt: dict[Partition, Scalar] = {}
        for lam, c in layers[-1].items():
            for n, a in coeffs.items():
                if a.is_zero() or lam.size + n > cap:
                    continue
                # dividing by k turns the k-fold product into the k-th power term
                mu = lam.add(n)
                term = c * a / k
                nxt[mu] = nxt[mu] + term if mu in nxt else term
        if not nxt:
            break
        for lam, c in nxt.items():
            total[lam] = total[lam] + c if lam in total else c
        layers.append(nxt)
        k += 1
    return FockVector(total, module)


def multiply(x: FockVector, series: FockVector, cap: int | None) -> FockVector:
    out: dict[Partition, Scalar] = {}
    for lam, c in x.terms.items():
        for mu, s in series.terms.items():
            if cap is not None and lam.size + mu.size > cap:
                continue
            nu = Partition(lam + mu)
            term = c * s
            out[nu] = out[nu] + term if nu in out else term
    return FockVector(out, x.module)


def translate(x: FockVector, shifts: Mapping[int, Scalar]) -> FockVector:
    """Substitute p_n -> p_n + shifts[n] in every basis monomial."""
    out: dict[Partition, Scalar] = {}
    for lam, c in x.terms.items():
        partial: dict[Partition, Scalar] = {EMPTY: c}
        for n, m in lam.multiplicities().items():
            s = shifts.get(n, ZERO)
            if s.is_zero():
                partial = {Partition(mu + (n,) * m): v for mu, v in partial.items()}
                continue
            nxt: dict[Partition, Scalar] = {}
            for j in range(m + 1):
                coef = math.comb(m, j) * s ** (m - j)
                for mu, v in partial.items():
                    nu = Partition(mu + (n,) * j)
                    term = v * coef
                    nxt[nu] = nxt[nu] + term if nu in nxt else term
            partial = nxt
        for mu, v in partial.items():
            out[mu] = out[mu] + v if mu in out else v
    return FockVector(out, x.module)


def apply_exp_series(
    coeffs: Mapping[int, Scalar],
    direction: str,
    x: FockVector,
    degree_cap: int | None = None,
) -> FockVector:
    """exp(sum c_n P_{-n}) for 'raising', exp(sum c_n P_n) for 'lowering'."""
    coeffs = {n: Scalar.coerce(c) for n, c in coeffs.items()}
    if any(n <= 0 for n in coeffs):
        raise FockError("exponential series modes must be positive")
    if direction == "raising":
        if degree_cap is None:
            raise FockError("raising exponential needs a degree cap")
        if x.degrees() and degree_cap < max(x.degrees()):
            raise FockError("degree cap below the degree of the input")
        return multiply(x, exp_series_vector(coeffs, degree_cap, x.module), degree_cap)
    if direction == "lowering":
        r = x.module.rank
        shifts = {n: -c * kappa(n, r) for n, c in coeffs.items()}
        return translate(x, shifts).truncate(degree_cap)
    raise FockError("direction must be 'raising' or 'lowering'")


# pairing


def norm_square(lam: Partition, r: int) -> Scalar:
    out = ONE
    for k, m in lam.multiplicities().items():
        out = out * math.factorial(m) * (-kappa(k, r)) ** m
    return out


def shapovalov(x: FockVector, y: FockVector) -> Scalar:
    if x.module != y.module:
        raise FockError("shapovalov form needs vectors of the same module")
    total = ZERO
    for lam, c in x.terms.items():
        d = y.terms.get(lam)
        if d is not None:
            total = total + c * d * norm_square(lam, x.module.rank)
    return total


# normal ordering of words


@dataclass(frozen=True)
class HeisWord:
    modes: tuple[int, ...]
    coeff: Scalar = ONE

    def __post_init__(self):
        if any(n == 0 for n in self.modes):
            raise FockError("P_0 is not a generator")


@dataclass(frozen=True)
class OrderedTerm:
    """coeff * P_{-neg} P_{pos}: all creation modes left of annihilation modes."""

    neg: Partition
    pos: Partition
    coeff: Scalar


def _bracket(a: int, b: int, r: int) -> Scalar:
    """[P_a, P_b]."""
    if a + b != 0:
        return ZERO
    if a < 0:
        return kappa(-a, r)
    return -kappa(a, r)


@lru_cache(maxsize=None)
def _normal_order(modes: tuple[int, ...], r: int) -> tuple[tuple[Partition, Partition, Scalar], ...]:
    for i in range(len(modes) - 1):
        a, b = modes[i], modes[i + 1]
        if a > 0 and b < 0:
            swapped = modes[:i] + (b, a) + modes[i + 2 :]
            out: dict[tuple[Partition, Partition], Scalar] = {}
            for neg, pos, c in _normal_order(swapped, r):
                out[(neg, pos)] = out.get((neg, pos), ZERO) + c
            br = _bracket(a, b, r)
            if not br.is_zero():
                for neg, pos, c in _normal_order(modes[:i] + modes[i + 2 :], r):
                    out[(neg, pos)] = out.get((neg, pos), ZERO) + c * br
            return tuple((k[0], k[1], c) for k, c in out.items() if not c.is_zero())
    neg = Partition(-n for n in modes if n < 0)
    pos = Partition(n for n in modes if n > 0)
    return ((neg, pos, ONE),)


def normal_order(word: HeisWord, r: int) -> list[OrderedTerm]:
    terms = _normal_order(tuple(word.modes), r)
    out = [OrderedTerm(neg, pos, c * word.coeff) for neg, pos, c in terms]
    out = [t for t in out if not t.coeff.is_zero()]
    return sorted(out, key=lambda t: (partition_key(t.neg), partition_key(t.pos)))


def vacuum_expectation(word: HeisWord, r: int) -> Scalar:
    total = ZERO
    for t in normal_order(word, r):
        if not t.neg and not t.pos:
            total = total + t.coeff
    return total


def shapovalov_by_normal_order(x: FockVector, y: FockVector) -> Scalar:
    """<x, y> from <vac| word(x)^dagger word(y) |vac>."""
    if x.module != y.module:
        raise FockError("shapovalov form needs vectors of the same module")
    r = x.module.rank
    total = ZERO
    for lam, c in x.terms.items():
        for mu, d in y.terms.items():
            if lam.size != mu.size:
                continue
            modes = tuple(reversed(lam)) + tuple(-k for k in mu)
            total = total + c * d * vacuum_expectation(HeisWord(modes), r)
    return total


# graded operators


class Operator:
    """A degree-graded linear operator given by its images of basis vectors.

    ``raise_bound``/``lower_bound`` bound how far a basis vector's degree can
    go up or down (None: unbounded).  Images are memoized per partition.
    """

    raise_bound: int | None = 0
    lower_bound: int | None = 0

    def __init__(self):
        self._memo: dict[tuple[Partition, FockModule], tuple[int | None, FockVector]] = {}

    def target(self, module: FockModule) -> FockModule:
        return module

    def image(self, lam: Partition, module: FockModule, cap: int | None) -> FockVector:
        raise NotImplementedError

    def _cached_image(self, lam: Partition, module: FockModule, cap: int | None) -> FockVector:
        if self.raise_bound is not None:
            cap_needed = None
        else:
            if cap is None:
                raise FockError("operator with unbounded raising needs a degree cap")
            cap_needed = cap
        key = (lam, module)
        hit = self._memo.get(key)
        if hit is not None:
            stored_cap, vec = hit
            if stored_cap is None or (cap_needed is not None and stored_cap >= cap_needed):
                return vec.truncate(cap)
        vec = self.image(lam, module, cap_needed)
        self._memo[key] = (cap_needed, vec)
        return vec.truncate(cap)

    def apply(self, x: FockVector, cap: int | None = None) -> FockVector:
        module = self.target(x.module)
        parts = []
        for lam, c in x.terms.items():
            parts.append((c, self._cached_image(lam, x.module, cap)))
        return combine(parts, module).truncate(cap)

    def __call__(self, x: FockVector, cap: int | None = None) -> FockVector:
        return self.apply(x, cap)


class PMode(Operator):
    def __init__(self, n: int):
        super().__init__()
        if n == 0:
            raise FockError("P_0 is not a generator")
        self.n = n
        self.raise_bound = max(-n, 0)
        self.lower_bound = max(n, 0)

    def image(self, lam, module, cap):
        return act_p(self.n, FockVector({lam: ONE}, module))


class HMode(Operator):
    def __init__(self, n: int):
        super().__init__()
        self.n = n
        self.raise_bound = max(-n, 0)
        self.lower_bound = max(n, 0)

    def image(self, lam, module, cap):
        return act_h(self.n, FockVector({lam: ONE}, module))


class Identity(Operator):
    def image(self, lam, module, cap):
        return FockVector({lam: ONE}, module)


class LoweringExp(Operator):
    """exp(sum c_n P_n) with coefficients depending on the rank."""

    raise_bound = 0
    lower_bound = None

    def __init__(self, coeffs: Callable[[int, int], Scalar], depth: int):
        super().__init__()
        self.coeffs = coeffs
        self.depth = depth

    def image(self, lam, module, cap):
        if lam and lam[0] > self.depth:
            raise FockError(f"exponential known only up to mode {self.depth}")
        modes = set(lam)
        c = {n: self.coeffs(n, module.rank) for n in modes}
        return apply_exp_series(c, "lowering", FockVector({lam: ONE}, module))


class RaisingExp(Operator):
    raise_bound = None
    lower_bound = 0

    def __init__(self, coeffs: Callable[[int, int], Scalar]):
        super().__init__()
        self.coeffs = coeffs

    def image(self, lam, module, cap):
        c = {n: self.coeffs(n, module.rank) for n in range(1, cap - lam.size + 1)}
        return apply_exp_series(c, "raising", FockVector({lam: ONE}, module), cap)


class Product(Operator):
    """Composition ops[0] o ops[1] o ... (rightmost acts first)."""

    def __init__(self, *ops: Operator):
        super().__init__()
        self.ops = ops
        self.raise_bound = _sum_bounds(op.raise_bound for op in ops)
        self.lower_bound = _sum_bounds(op.lower_bound for op in ops)

    def target(self, module):
        for op in reversed(self.ops):
            module = op.target(module)
        return module

    def image(self, lam, module, cap):
        # an op's cap is the target cap plus what the ops to its left can lower
        caps = []
        extra: int | None = 0
        for op in self.ops:
            caps.append(None if (cap is None or extra is None) else cap + extra)
            extra = None if (extra is None or op.lower_bound is None) else extra + op.lower_bound
        x = FockVector({lam: ONE}, module)
        for op, c in zip(reversed(self.ops), reversed(caps)):
            x = op.apply(x, c)
        return x.truncate(cap)


def _sum_bounds(bounds: Iterable[int | None]) -> int | None:
    total = 0
    for b in bounds:
        if b is None:
            return None
        total += b
    return total


class Combination(Operator):
    """sum_i c_i * op_i, all ops mapping into the same module."""

    def __init__(self, terms: Sequence[tuple[Scalar, Operator]]):
        super().__init__()
        self.terms = [(Scalar.coerce(c), op) for c, op in terms]
        ups = [op.raise_bound for _, op in self.terms]
        downs = [op.lower_bound for _, op in self.terms]
        self.raise_bound = None if None in ups else max(ups, default=0)
        self.lower_bound = None if None in downs else max(downs, default=0)

    def target(self, module):
        return self.terms[0][1].target(module) if self.terms else module

    def apply(self, x, cap=None):
        module = self.target(x.module)
        return combine(((c, op.apply(x, cap)) for c, op in self.terms), module).truncate(cap)


@lru_cache(maxsize=None)
def P(n: int) -> PMode:
    """Shared P_n instance, so block images are memoized across checks."""
    return PMode(n)


@lru_cache(maxsize=None)
def H(n: int) -> Operator:
    return HMode(n) if n else Identity()


def mul(*ops: Operator) -> Operator:
    return ops[0] if len(ops) == 1 else Product(*ops)


def lin(*terms: tuple) -> Operator:
    return Combination(list(terms))


# block checks


def relation_difference(lhs: Operator, rhs: Operator, domain: FockModule, max_degree: int, limit: int = 5) -> list[str]:
    """Nonzero entries of lhs - rhs on all blocks with source and target degree <= max_degree."""
    diffs: list[str] = []
    for lam in basis_upto(max_degree):
        x = FockVector({lam: ONE}, domain)
        d = lhs.apply(x, max_degree) - rhs.apply(x, max_degree)
        for mu, c in d.items():
            diffs.append(f"{list(lam)} -> {list(mu)}: {c.to_text()}")
            if len(diffs) >= limit:
                return diffs
    return diffs


def check_relation(name: str, params: dict, lhs: Operator, rhs: Operator, domain: FockModule, max_degree: int) -> CheckResult:
    diffs = relation_difference(lhs, rhs, domain, max_degree)
    return CheckResult(name, params, not diffs, diffs or None)


def block(op: Operator, domain: FockModule, d: int, d2: int) -> list[list[Scalar]]:
    """Matrix of the (d -> d2) block: rows indexed by partitions of d2, columns by those of d."""
    rows = partitions_of(d2)
    cols = partitions_of(d)
    out = [[ZERO] * len(cols) for _ in rows]
    for j, lam in enumerate(cols):
        img = op.apply(FockVector({lam: ONE}, domain), max(d, d2)).component(d2)
        for i, mu in enumerate(rows):
            out[i][j] = img.coefficient(mu)
    return out


# Heisenberg suite checks


def verify_q_heis(r: int, max_mode: int, max_degree: int) -> list[CheckResult]:
    out = []
    module = FockModule(r)
    for n in range(1, max_mode + 1):
        for n2 in range(1, max_mode + 1):
            params = {"r": r, "n": n, "n'": n2}
            # [P_{-n'}, P_n] by normal ordering
            terms = normal_order(HeisWord((-n2, n)), r)
            swapped = normal_order(HeisWord((n, -n2)), r)
            diff: dict = {}
            for t in terms:
                diff[(t.neg, t.pos)] = diff.get((t.neg, t.pos), ZERO) + t.coeff
            for t in swapped:
                diff[(t.neg, t.pos)] = diff.get((t.neg, t.pos), ZERO) - t.coeff
            expected = kappa(n, r) if n == n2 else ZERO
            diff[(EMPTY, EMPTY)] = diff.get((EMPTY, EMPTY), ZERO) - expected
            bad = [f"{list(k[0])}|{list(k[1])}: {c.to_text()}" for k, c in diff.items() if not c.is_zero()]
            out.append(CheckResult("q_heis_word", params, not bad, bad or None))
            # the same bracket on Fock blocks
            lhs = lin((1, mul(P(-n2), P(n))), (-1, mul(P(n), P(-n2))))
            rhs = lin((expected, Identity()))
            out.append(check_relation("q_heis_block", dict(params, N=max_degree), lhs, rhs, module, max_degree))
            for s in (1, -1):
                lhs = lin((1, mul(P(s * n), P(s * n2))), (-1, mul(P(s * n2), P(s * n))))
                out.append(
                    check_relation("same_sign_commute", dict(params, sign=s, N=max_degree), lhs, lin(), module, max_degree)
                )
    return out


def _explicit_h(n: int, sign: int) -> Operator:
    # the low-degree list of H in terms of P
    p = lambda k: P(sign * k)
    if n == 1:
        return p(1)
    if n == 2:
        return lin((Scalar.coerce(1) / 2, mul(p(1), p(1))), (Scalar.coerce(1) / 2, p(2)))
    if n == 3:
        return lin(
            (Scalar.coerce(1) / 6, mul(p(1), p(1), p(1))),
            (Scalar.coerce(1) / 2, mul(p(2), p(1))),
            (Scalar.coerce(1) / 3, p(3)),
        )
    raise ValueError(n)


def verify_h_expansions(r: int, max_degree: int) -> list[CheckResult]:
    module = FockModule(r)
    out = []
    for n in (1, 2, 3):
        for sign in (1, -1):
            out.append(
                check_relation(
                    "h_expansion",
                    {"r": r, "n": sign * n, "N": max_degree},
                    H(sign * n),
                    _explicit_h(n, sign),
                    module,
                    max_degree,
                )
            )
    return out


def verify_grading(r: int, max_mode: int, max_degree: int) -> CheckResult:
    module = FockModule(r)
    bad = []
    for n in range(-max_mode, max_mode + 1):
        if n == 0:
            continue
        for lam in basis_upto(max_degree):
            y = act_p(n, FockVector.basis(module, lam))
            if any(d != lam.size - n for d in y.degrees()):
                bad.append(f"P_{n} on {list(lam)}")
    return CheckResult("grading", {"r": r, "M": max_mode, "N": max_degree}, not bad, bad or None)


def verify_rus(n: int, r: int, max_degree: int) -> CheckResult:
    """[P_{-n}, w_n P_n] = (1 - q^{-rn}) Id."""
    w = rus_weight(n, r)
    lhs = lin((w, mul(P(-n), P(n))), (-w, mul(P(n), P(-n))))
    q = var("q1") * var("q2")
    rhs = lin((1 - q ** (-r * n), Identity()))
    return check_relation("rus", {"r": r, "n": n, "N": max_degree}, lhs, rhs, FockModule(r), max_degree)


def inverse_rus_exp(depth: int) -> LoweringExp:
    """E^{-1} = exp(-sum w_n P_n)."""
    return LoweringExp(lambda k, r: -rus_weight(k, r), depth)


def verify_rus0(n: int, r: int, max_degree: int) -> CheckResult:
    """[E^{-1}, P_{-n}] = (1 - q^{-rn}) E^{-1} with E = exp(sum w_n P_n)."""
    e_inv = inverse_rus_exp(max_degree + n)
    q = var("q1") * var("q2")
    lhs = lin((1, mul(e_inv, P(-n))), (-1, mul(P(-n), e_inv)))
    rhs = lin((1 - q ** (-r * n), e_inv))
    return check_relation("rus0", {"r": r, "n": n, "N": max_degree}, lhs, rhs, FockModule(r), max_degree)


def _power(op: Operator, k: int) -> Operator:
    return Identity() if k == 0 else mul(*([op] * k))


def verify_equivalence(
    a_op: Operator,
    n: int,
    scale: Scalar,
    c: Scalar,
    c_prime: Scalar,
    domain: FockModule,
    max_degree: int,
    order: int = 3,
    name: str = "equivalence",
) -> list[CheckResult]:
    """Bracket form and exponentiated form of a single-mode relation.

    Bracket: A P_{-n} + c' A = scale P_{-n} A + c A.
    Exponentiated with a formal parameter s (compared coefficientwise in s):
        A exp(s P_{-n}) exp(s c') = exp(s c) exp(s scale P_{-n}) A.
    The s^1 coefficient of the second is the first; the check runs both.
    """
    p = P(-n)
    params = {"r": domain.rank, "n": n, "N": max_degree, "order": order}
    bracket = check_relation(
        f"{name}_bracket",
        params,
        lin((1, mul(a_op, p)), (c_prime, a_op)),
        lin((scale, mul(p, a_op)), (c, a_op)),
        domain,
        max_degree,
    )
    results = [bracket]
    exp_ok = True
    diffs: list[str] = []
    for k in range(order + 1):
        # coefficient of s^k
        left = []
        right = []
        for i in range(k + 1):
            j = k - i
            w = Scalar.coerce(1) / (math.factorial(i) * math.factorial(j))
            left.append((w * c_prime**j, mul(a_op, _power(p, i))))
            right.append((w * c**j * scale**i, mul(_power(p, i), a_op)))
        d = relation_difference(lin(*left), lin(*right), domain, max_degree)
        if d:
            exp_ok = False
            diffs.extend(f"s^{k}: {line}" for line in d)
    results.append(CheckResult(f"{name}_exponential", params, exp_ok, diffs or None))
    return results


def heisenberg_suite(r: int, max_mode: int, max_degree: int) -> list[CheckResult]:
    out = verify_q_heis(r, max_mode, max_degree)
    out += verify_h_expansions(r, max_degree)
    out.append(verify_grading(r, max_mode, max_degree))
    q = var("q1") * var("q2")
    for n in range(1, max_mode + 1):
        out.append(verify_rus(n, r, max_degree))
        out.append(verify_rus0(n, r, max_degree))
        e_inv = inverse_rus_exp(max_degree + n)
        module = FockModule(r)
        out += verify_equivalence(e_inv, n, ONE, 1 - q ** (-r * n), ZERO, module, max_degree)
        # the same relation with a nonzero c' on both sides
        out += verify_equivalence(
            e_inv, n, ONE, 1 - q ** (-r * n) + var("q1"), var("q1"), module, max_degree, name="equivalence_shifted"
        )
    return out
