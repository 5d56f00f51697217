"""Rank-1 Verma module in the slope-ordered W-basis and the uniqueness recursion."""

from __future__ import annotations

import threading
from abc import ABC, abstractmethod
from functools import lru_cache

from .current import w_top
from .fock import CheckResult, FockModule, FockVector, Partition, act_h, partitions_of, shapovalov
from .scalars import ONE, ZERO, Scalar, gamma_const, var
from .vertex import closed_form_vertex


class VermaError(ValueError):
    pass


class SlopeWord(tuple):
    """W_{n_1,1} ... W_{n_s,1}|vac> with n_1 <= ... <= n_s < 0.

    At k = 1 the slope of W_{n,1} is n, so the slope order is the
    non-decreasing order of the (negative) modes.
    """

    def __new__(cls, modes=()):
        modes = tuple(int(n) for n in modes)
        if any(n >= 0 for n in modes):
            raise VermaError(f"slope words use negative modes: {modes}")
        if any(a > b for a, b in zip(modes, modes[1:])):
            raise VermaError(f"word is not slope ordered: {modes}")
        return super().__new__(cls, modes)

    @staticmethod
    def from_partition(lam) -> "SlopeWord":
        return SlopeWord(sorted(-p for p in lam))

    @property
    def degree(self) -> int:
        return -sum(self)

    def __repr__(self) -> str:
        return f"SlopeWord({list(self)})"


EMPTY_WORD = SlopeWord()


@lru_cache(maxsize=None)
def words_of_degree(d: int) -> tuple[SlopeWord, ...]:
    return tuple(SlopeWord.from_partition(lam) for lam in partitions_of(d))


def words_upto(n: int) -> list[SlopeWord]:
    return [w for d in range(n + 1) for w in words_of_degree(d)]


Expansion = dict[SlopeWord, Scalar]


def _add_into(acc: Expansion, exp: Expansion, c: Scalar) -> None:
    for w, x in exp.items():
        acc[w] = acc.get(w, ZERO) + c * x
        if acc[w].is_zero():
            del acc[w]


def pbw_vector(word: SlopeWord, side: str = "u") -> FockVector:
    """Apply the W's of the word to the vacuum, rightmost first."""
    if not isinstance(word, SlopeWord):
        word = SlopeWord(word)
    x = FockVector.vacuum(FockModule(1, side))
    for n in reversed(word):
        x = w_top(n, 1, side, x)
    return x


class StructureTable(ABC):
    """Expansion of W_n applied to a slope word, in the slope basis."""

    @abstractmethod
    def expand(self, n: int, word: SlopeWord, side: str) -> Expansion: ...

    def apply(self, n: int, vec: Expansion, side: str) -> Expansion:
        out: Expansion = {}
        for w, c in vec.items():
            _add_into(out, self.expand(n, w, side), c)
        return out


def _solve(matrix: list[list[Scalar]], rhs: list[Scalar]) -> list[Scalar]:
    """Gauss-Jordan over Scalars; raises on a singular matrix."""
    n = len(matrix)
    a = [row[:] + [rhs[i]] for i, row in enumerate(matrix)]
    for col in range(n):
        piv = next((i for i in range(col, n) if not a[i][col].is_zero()), None)
        if piv is None:
            raise VermaError("change of basis is singular")
        a[col], a[piv] = a[piv], a[col]
        inv = a[col][col].inverse()
        a[col] = [x * inv for x in a[col]]
        for i in range(n):
            if i != col and not a[i][col].is_zero():
                f = a[i][col]
                a[i] = [x - f * y for x, y in zip(a[i], a[col])]
    return [a[i][n] for i in range(n)]


class FockStructureTable(StructureTable):
    """r = 1 table computed in the Heisenberg model, memoized behind a lock."""

    def __init__(self):
        self._memo: dict[tuple[int, SlopeWord, str], Expansion] = {}
        self._lock = threading.Lock()

    def basis_matrix(self, d: int, side: str) -> list[list[Scalar]]:
        """Columns: slope words of degree d; rows: partitions of d."""
        rows = partitions_of(d)
        cols = [pbw_vector(w, side) for w in words_of_degree(d)]
        return [[col.coefficient(lam) for col in cols] for lam in rows]

    def to_words(self, x: FockVector) -> Expansion:
        side = x.module.side
        out: Expansion = {}
        for d in sorted(x.degrees()):
            comp = x.component(d)
            coords = _solve(self.basis_matrix(d, side), [comp.coefficient(lam) for lam in partitions_of(d)])
            for w, c in zip(words_of_degree(d), coords):
                if not c.is_zero():
                    out[w] = c
        return out

    def expand(self, n: int, word: SlopeWord, side: str) -> Expansion:
        key = (n, word, side)
        hit = self._memo.get(key)
        if hit is not None:
            return hit
        value = self.to_words(w_top(n, 1, side, pbw_vector(word, side)))
        with self._lock:
            # first writer wins; later ones computed the same value
            return self._memo.setdefault(key, value)


def reorder(n_bar: int, word: SlopeWord, table: StructureTable | None = None, side: str = "u") -> Expansion:
    """W_{n_bar,1} times a slope word, rewritten in the slope basis."""
    table = table or default_table()
    return table.expand(n_bar, word, side)


@lru_cache(maxsize=1)
def default_table() -> FockStructureTable:
    return FockStructureTable()


def shapovalov_w(x: SlopeWord, y: SlopeWord, table: StructureTable | None = None, side: str = "u") -> Scalar:
    """<x|y> with W_n adjoint to W_{-n}, evaluated by reordering."""
    table = table or default_table()
    if x.degree != y.degree:
        return ZERO
    vec: Expansion = {y: ONE}
    # <W_{x1} ... W_{xs} vac| = <vac| W_{-xs} ... W_{-x1}; the rightmost acts first
    for n in x:
        vec = table.apply(-n, vec, side)
    return vec.get(EMPTY_WORD, ZERO)


class PhiRecursion:
    """Matrix coefficients <x|Phi|y> from the r = k = 1 current relation.

    y-step (y = W_{n'} y'):
        M(x, y) = q^{-1} M(x, W_{n'+1} y') + m g^{-n'} M(W_{-n'} x, y')
                  - (m/q) g^{-n'-1} M(W_{-n'-1} x, y')
    x-step (y empty, x = W_{n1} x', n = -n1 - 1):
        M(x, vac) = q g M(W_{-n} x', vac) - [n = 0] (q/m) g v M(x', vac)
    Every term on the right has smaller deg x + deg y.
    """

    def __init__(self, table: StructureTable | None = None):
        self.table = table or default_table()
        self.memo: dict[tuple[SlopeWord, SlopeWord], Scalar] = {(EMPTY_WORD, EMPTY_WORD): ONE}
        g = gamma_const(1).value
        self.g = g
        self.q = var("q1") * var("q2")
        self.m = var("m")
        self.v = var("v")
        self.steps = 0

    def _pair(self, xs: Expansion, ys: Expansion, bound: int) -> Scalar:
        terms = []
        for x, a in xs.items():
            for y, b in ys.items():
                if x.degree + y.degree >= bound:
                    raise VermaError(f"recursion measure did not decrease at {x}, {y}")
                terms.append(a * b * self.value(x, y))
        return Scalar.sum(terms)

    def value(self, x: SlopeWord, y: SlopeWord) -> Scalar:
        hit = self.memo.get((x, y))
        if hit is not None:
            return hit
        self.steps += 1
        bound = x.degree + y.degree
        q, m, g = self.q, self.m, self.g
        t = self.table
        if y:
            n2, rest = y[0], SlopeWord(y[1:])
            total = q.inverse() * self._pair({x: ONE}, t.expand(n2 + 1, rest, "v"), bound)
            total += m * g ** (-n2) * self._pair(t.expand(-n2, x, "u"), {rest: ONE}, bound)
            total -= m / q * g ** (-n2 - 1) * self._pair(t.expand(-n2 - 1, x, "u"), {rest: ONE}, bound)
        else:
            n1, rest = x[0], SlopeWord(x[1:])
            n = -n1 - 1
            total = q * g * self._pair(t.expand(-n, rest, "u"), {EMPTY_WORD: ONE}, bound)
            if n == 0:
                total -= q / m * g * self.v * self._pair({rest: ONE}, {EMPTY_WORD: ONE}, bound)
        self.memo[(x, y)] = total
        return total


def phi_matrix_recursive(max_degree: int, table: StructureTable | None = None) -> dict[tuple[SlopeWord, SlopeWord], Scalar]:
    rec = PhiRecursion(table)
    words = words_upto(max_degree)
    return {(x, y): rec.value(x, y) for x in words for y in words}


def phi_matrix_direct(max_degree: int) -> dict[tuple[SlopeWord, SlopeWord], Scalar]:
    phi = closed_form_vertex(1, 2 * max_degree + 1)
    words = words_upto(max_degree)
    kets = {y: phi.apply(pbw_vector(y, "v"), max_degree) for y in words}
    bras = {x: pbw_vector(x, "u") for x in words}
    return {(x, y): shapovalov(bras[x], kets[y]) for x in words for y in words}


def compare_direct(max_degree: int) -> CheckResult:
    rec = phi_matrix_recursive(max_degree)
    direct = phi_matrix_direct(max_degree)
    diffs = []
    for key in sorted(direct, key=lambda k: (k[0].degree, k[1].degree, k)):
        d = rec[key] - direct[key]
        if not d.is_zero():
            diffs.append(f"<{list(key[0])}|Phi|{list(key[1])}>: {d.to_text()}")
    return CheckResult("verma_compare_direct", {"r": 1, "N": max_degree}, not diffs, diffs[:5] or None)


def check_recursion_terminates(max_degree: int) -> CheckResult:
    rec = PhiRecursion()
    try:
        for x in words_upto(max_degree):
            for y in words_upto(max_degree):
                rec.value(x, y)
    except (VermaError, RecursionError) as exc:
        return CheckResult("verma_recursion_terminates", {"N": max_degree}, False, [str(exc)])
    return CheckResult("verma_recursion_terminates", {"N": max_degree, "steps": rec.steps}, True)


def h_basis_vector(lam: Partition, side: str) -> FockVector:
    """H_{-lam_1} H_{-lam_2} ... |vac>."""
    x = FockVector.vacuum(FockModule(1, side))
    for p in reversed(lam):
        x = act_h(-p, x)
    return x


def check_change_of_basis(max_degree: int) -> list[CheckResult]:
    """Slope words vs partitions: invertible, and triangular in the H-basis.

    Expanding pbw(W_{-lam}) in the basis H_{-mu}|vac> gives an upper
    triangular matrix for the reverse lexicographic order of partitions,
    with diagonal det^{len lam}.  In the P-basis there is no such shape.
    """
    table = default_table()
    out = []
    for side in ("u", "v"):
        bad_inv, bad_tri = [], []
        det = var(side)
        for d in range(max_degree + 1):
            parts = partitions_of(d)
            size = len(parts)
            try:
                _solve(table.basis_matrix(d, side), [ZERO] * size)
            except VermaError:
                bad_inv.append(f"degree {d}")
            h_mat = [[h_basis_vector(lam, side).coefficient(mu) for lam in parts] for mu in parts]
            for j, w in enumerate(words_of_degree(d)):
                vec = pbw_vector(w, side)
                coords = _solve(h_mat, [vec.coefficient(mu) for mu in parts])
                for i, c in enumerate(coords):
                    if i == j and c != det ** len(w):
                        bad_tri.append(f"degree {d} diagonal {j}")
                    if i > j and not c.is_zero():
                        bad_tri.append(f"degree {d} entry ({i},{j})")
        out.append(CheckResult("verma_basis_invertible", {"side": side, "N": max_degree}, not bad_inv, bad_inv or None))
        out.append(CheckResult("verma_basis_triangular", {"side": side, "N": max_degree}, not bad_tri, bad_tri[:5] or None))
    return out


def check_highest_weight(max_mode: int) -> CheckResult:
    bad = []
    for side in ("u", "v"):
        vac = FockVector.vacuum(FockModule(1, side))
        for n in range(1, max_mode + 1):
            if not w_top(n, 1, side, vac).is_zero():
                bad.append(f"W_{n} vac on {side}")
        if w_top(0, 1, side, vac) != vac.scale(var(side)):
            bad.append(f"W_0 vac on {side}")
    return CheckResult("verma_highest_weight", {"r": 1, "M": max_mode}, not bad, bad or None)


def check_shapovalov(max_degree: int) -> CheckResult:
    """Reordering pairing agrees with the Fock pairing and is symmetric."""
    bad = []
    for d in range(max_degree + 1):
        words = words_of_degree(d)
        vecs = {w: pbw_vector(w, "u") for w in words}
        for x in words:
            for y in words:
                a = shapovalov_w(x, y)
                if a != shapovalov(vecs[x], vecs[y]):
                    bad.append(f"<{list(x)}|{list(y)}> fock")
                if a != shapovalov_w(y, x):
                    bad.append(f"<{list(x)}|{list(y)}> symmetry")
    return CheckResult("verma_shapovalov", {"r": 1, "N": max_degree}, not bad, bad[:5] or None)


def check_mode_conservation(max_degree: int, max_mode: int) -> CheckResult:
    """W_n applied to a word only produces words of degree deg - n."""
    table = default_table()
    bad = []
    for w in words_upto(max_degree):
        for n in range(-max_mode, max_mode + 1):
            for z in table.expand(n, w, "u"):
                if z.degree != w.degree - n:
                    bad.append(f"W_{n} {list(w)} -> {list(z)}")
    return CheckResult("verma_mode_conservation", {"N": max_degree, "M": max_mode}, not bad, bad[:5] or None)


def verma_suite(max_degree: int, max_mode: int = 2) -> list[CheckResult]:
    out = [check_highest_weight(max(max_mode, 1))]
    out += check_change_of_basis(max_degree)
    out.append(check_shapovalov(min(max_degree, 3)))
    out.append(check_mode_conservation(min(max_degree, 3), max_mode))
    out.append(check_recursion_terminates(max_degree))
    out.append(compare_direct(max_degree))
    return out
