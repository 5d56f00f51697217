import pytest

from walg.current import (
    CurrentWindow,
    W,
    current_heis_suite,
    verify_factorization,
    verify_w_top_heis,
    w_top,
)
from walg.fock import FockModule, FockVector, act_h, act_p
from walg.scalars import var

u = var("u")


def test_w_top_examples():
    module = FockModule(1)
    vac = FockVector.vacuum(module)
    assert w_top(0, 1, "u", vac) == vac.scale(u)
    assert w_top(-1, 1, "u", vac) == act_p(-1, vac).scale(u)
    assert w_top(1, 1, "u", vac).is_zero()
    with pytest.raises(ValueError):
        w_top(0, 2, "u", vac)


def test_w_top_v_side_uses_v():
    module = FockModule(2, "v")
    vac = FockVector.vacuum(module)
    assert w_top(0, 2, "v", vac) == vac.scale(module.det)
    assert module.det != FockModule(2).det


def test_w_top_explicit_sum():
    module = FockModule(2)
    x = FockVector.basis(module, (2, 1))
    # n = -1 keeps pairs (n1, n2) = (n2 + 1, n2)
    want = act_h(-1, act_h(0, x)) + act_h(-2, act_h(1, x)) + act_h(-3, act_h(2, x)) + act_h(-4, act_h(3, x))
    assert w_top(-1, 2, "u", x) == want.scale(module.det)


@pytest.mark.parametrize(
    "n_prime,n,sign,r",
    [(0, 1, -1, 1), (-1, 1, 1, 2), (2, 2, -1, 1), (1, 1, 1, 2)],
)
def test_w_and_p(n_prime, n, sign, r):
    assert verify_w_top_heis(n_prime, n, sign, r, 3).passed


def test_w_and_p_degree_zero():
    assert verify_w_top_heis(0, 1, 1, 1, 0).passed


def test_factorization():
    assert verify_factorization(2, 2, 3).passed


def test_window():
    win = CurrentWindow(-2, 2, 1)
    assert list(win.modes()) == [-2, -1, 0, 1, 2]
    assert win.operator(1) is W(1)
    with pytest.raises(ValueError):
        win.operator(3)
    with pytest.raises(ValueError):
        CurrentWindow(1, 0, 1)


@pytest.mark.parametrize("r", [1, 2])
def test_suite(r):
    assert all(c.passed for c in current_heis_suite(r, 2, 3))
