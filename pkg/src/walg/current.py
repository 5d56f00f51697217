"""Top W-current W_{n,r} built from the H-modes of the Heisenberg module."""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

from .fock import (
    CheckResult,
    FockModule,
    FockVector,
    Operator,
    P,
    act_h,
    apply_exp_series,
    basis_upto,
    check_relation,
    lin,
    mul,
)
from .scalars import ONE, ZERO, Scalar, poly_coeffs, poly_degree, qbracket, var


def w_top(n: int, r: int, side: str, x: FockVector) -> FockVector:
    """det * sum_{n2 - n1 = n, n1, n2 >= 0} H_{-n1} H_{n2} x."""
    module = x.module
    if module.rank != r or module.side != side:
        raise ValueError(f"vector lives in {module}, not rank {r} side {side}")
    top = max(x.degrees(), default=0)
    total = FockVector.zero(module)
    for n2 in range(max(n, 0), top + 1):
        n1 = n2 - n
        y = act_h(n2, x)
        if y.is_zero():
            continue
        total = total + act_h(-n1, y)
    return total.scale(module.det)


def w_top_terms(n: int, x: FockVector) -> int:
    """Number of (n1, n2) pairs contributing a nonzero term on x."""
    top = max(x.degrees(), default=0)
    count = 0
    for n2 in range(max(n, 0), top + 1):
        if not act_h(n2, x).is_zero():
            count += 1
    # anything past the degree of x is killed by H_{n2}
    assert all(act_h(n2, x).is_zero() for n2 in range(max(top + 1, n, 0), top + 3))
    return count


class WTop(Operator):
    """W_{n,r} on the module it is applied to (determinant taken from that module)."""

    def __init__(self, n: int):
        super().__init__()
        self.n = n
        self.raise_bound = max(-n, 0)
        self.lower_bound = max(n, 0)

    def image(self, lam, module, cap):
        return w_top(self.n, module.rank, module.side, FockVector({lam: ONE}, module))


@lru_cache(maxsize=None)
def W(n: int) -> WTop:
    return WTop(n)


@dataclass(frozen=True)
class CurrentWindow:
    n_min: int
    n_max: int
    rank: int
    side: str = "u"

    def __post_init__(self):
        if self.n_min > self.n_max:
            raise ValueError("empty mode window")

    def modes(self) -> range:
        return range(self.n_min, self.n_max + 1)

    def operator(self, n: int) -> WTop:
        if n not in self.modes():
            raise ValueError(f"mode {n} outside window [{self.n_min}, {self.n_max}]")
        return W(n)


def w_and_p_factor(n: int, r: int) -> Scalar:
    q1, q2 = var("q1"), var("q2")
    return qbracket(q1, n) * qbracket(q2, n) * qbracket((q1 * q2) ** n, r)


def verify_w_top_heis(n_prime: int, n: int, sign: int, r: int, max_degree: int) -> CheckResult:
    """[W_{n',r}, P_{sign n}] = sign [q1]_n [q2]_n [q^n]_r W_{sign n + n', r}."""
    p = P(sign * n)
    w = W(n_prime)
    lhs = lin((1, mul(w, p)), (-1, mul(p, w)))
    rhs = lin((sign * w_and_p_factor(n, r), W(sign * n + n_prime)))
    params = {"r": r, "n'": n_prime, "n": n, "sign": sign, "N": max_degree}
    return check_relation("w_and_p", params, lhs, rhs, FockModule(r), max_degree)


def verify_finiteness(r: int, max_mode: int, max_degree: int) -> CheckResult:
    """Every defining sum is finite and bounded by the degree of the input."""
    module = FockModule(r)
    bad = []
    for lam in basis_upto(max_degree):
        x = FockVector.basis(module, lam)
        for n in range(-max_mode, max_mode + 1):
            count = w_top_terms(n, x)
            if count > lam.size + 1:
                bad.append(f"W_{n} on {list(lam)}: {count} terms")
    return CheckResult("w_finiteness", {"r": r, "M": max_mode, "N": max_degree}, not bad, bad or None)


def verify_highest_weight(r: int, max_mode: int) -> list[CheckResult]:
    out = []
    for side in ("u", "v"):
        module = FockModule(r, side)
        vac = FockVector.vacuum(module)
        bad = []
        for n in range(1, max_mode + 1):
            if not w_top(n, r, side, vac).is_zero():
                bad.append(f"W_{n} vac != 0")
        if w_top(0, r, side, vac) != vac.scale(module.det):
            bad.append("W_0 vac != det vac")
        out.append(CheckResult("w_highest_weight", {"r": r, "side": side, "M": max_mode}, not bad, bad or None))
    return out


def _laurent_coefficient(s: Scalar, k: int, shift: int) -> Scalar:
    """Coefficient of t^k in s, where s * t^shift is polynomial in t."""
    s = s * var("t") ** shift
    if poly_degree(s.den, "t") > 0:
        raise ValueError("not a Laurent polynomial in t")
    c = poly_coeffs(s.num, "t").get(k + shift)
    return ZERO if c is None else Scalar(c, s.den)


def verify_factorization(r: int, max_mode: int, max_degree: int) -> CheckResult:
    """W_r(x) = det H_-(x) H_+(x) coefficientwise in the mode window.

    The two currents are applied as honest exponentials in a formal variable
    t = x: H_+(x) = exp(sum P_k x^{-k}/k) and H_-(x) = exp(sum P_{-k} x^k/k).
    The x^{-n} coefficient is compared with w_top.
    """
    module = FockModule(r)
    t = var("t")
    bad = []
    for lam in basis_upto(max_degree):
        x = FockVector.basis(module, lam)
        cap = lam.size + max_mode
        y = apply_exp_series({k: t ** (-k) / k for k in range(1, lam.size + 1)}, "lowering", x)
        y = apply_exp_series({k: t**k / k for k in range(1, cap + 1)}, "raising", y, cap)
        y = y.scale(module.det)
        for n in range(-max_mode, max_mode + 1):
            coeff = FockVector(
                {mu: _laurent_coefficient(c, -n, lam.size) for mu, c in y.terms.items()}, module
            )
            if coeff != w_top(n, r, "u", x):
                bad.append(f"mode {n} on {list(lam)}")
    return CheckResult("w_factorization", {"r": r, "M": max_mode, "N": max_degree}, not bad, bad or None)


def current_heis_suite(r: int, max_mode: int, max_degree: int) -> list[CheckResult]:
    out = [verify_finiteness(r, max_mode, max_degree), verify_factorization(r, max_mode, max_degree)]
    out += verify_highest_weight(r, max_mode)
    for n_prime in range(-max_mode, max_mode + 1):
        for n in range(1, max_mode + 1):
            for sign in (1, -1):
                out.append(verify_w_top_heis(n_prime, n, sign, r, max_degree))
    return out
