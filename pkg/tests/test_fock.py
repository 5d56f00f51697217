import pytest
from hypothesis import given, settings, strategies as st

from walg.fock import (
    FockError,
    FockModule,
    FockVector,
    HeisWord,
    OrderedTerm,
    P,
    Partition,
    act_h,
    act_p,
    act_word,
    apply_exp_series,
    block,
    basis_upto,
    heisenberg_suite,
    inverse_rus_exp,
    normal_order,
    partitions_of,
    shapovalov,
    shapovalov_by_normal_order,
    verify_equivalence,
    verify_q_heis,
)
from walg.scalars import ONE, ZERO, kappa, var

R1 = FockModule(1)
R2 = FockModule(2)


def vac(module=R1):
    return FockVector.vacuum(module)


def vec(module, *parts):
    return FockVector.basis(module, parts)


def test_partitions():
    assert sorted(map(tuple, partitions_of(4))) == [(1, 1, 1, 1), (2, 1, 1), (2, 2), (3, 1), (4,)]
    assert len(partitions_of(6)) == 11
    assert Partition((1, 3, 2)) == Partition((3, 2, 1))


def test_act_p_examples():
    assert act_p(-1, vac()) == vec(R1, 1)
    assert act_p(1, act_p(-1, vac(R2))) == vac(R2).scale(-kappa(1, 2))
    assert act_p(2, vac()).is_zero()
    with pytest.raises(FockError):
        act_p(0, vac())


def test_normal_order_examples():
    assert normal_order(HeisWord((-2, 1)), 1) == [OrderedTerm(Partition((2,)), Partition((1,)), ONE)]
    terms = normal_order(HeisWord((1, -1)), 2)
    assert OrderedTerm(Partition((1,)), Partition((1,)), ONE) in terms
    assert OrderedTerm(Partition(), Partition(), -kappa(1, 2)) in terms
    assert len(terms) == 2
    assert normal_order(HeisWord((2, -1)), 1) == [OrderedTerm(Partition((1,)), Partition((2,)), ONE)]


def test_act_h_examples():
    assert act_h(-1, vac()) == act_p(-1, vac())
    expected = (vec(R1, 1, 1) + vec(R1, 2)).scale(ONE / 2)
    assert act_h(-2, vac()) == expected
    assert act_h(2, vac()).is_zero()
    x = vec(R2, 2, 1)
    assert act_h(0, x) == x
    assert act_h(1, x) == act_p(1, x)


def test_apply_exp_series_examples():
    c = var("z1")
    assert apply_exp_series({}, "raising", vec(R1, 2), 3) == vec(R1, 2)
    got = apply_exp_series({1: c}, "raising", vac(), 2)
    assert got == vac() + vec(R1, 1).scale(c) + vec(R1, 1, 1).scale(c**2 / 2)
    assert apply_exp_series({1: c}, "lowering", vac()) == vac()
    with pytest.raises(FockError):
        apply_exp_series({1: c}, "raising", vac())


def test_shapovalov_examples():
    assert shapovalov(vac(), vac()) == ONE
    assert shapovalov(vec(R2, 1), vec(R2, 1)) == -kappa(1, 2)
    assert shapovalov(vec(R1, 1), vec(R1, 2)) == ZERO
    with pytest.raises(FockError):
        shapovalov(vac(R1), vac(R2))


@pytest.mark.parametrize("r", [1, 2, 3])
def test_shapovalov_two_ways(r):
    module = FockModule(r)
    lams = basis_upto(4)
    for lam in lams:
        for mu in lams:
            x, y = FockVector.basis(module, lam), FockVector.basis(module, mu)
            assert shapovalov(x, y) == shapovalov_by_normal_order(x, y)


@pytest.mark.parametrize("r", [1, 2])
def test_adjointness(r):
    module = FockModule(r)
    for n in (1, 2):
        for lam in basis_upto(3):
            for mu in partitions_of(lam.size + n):
                x, y = FockVector.basis(module, lam), FockVector.basis(module, mu)
                assert shapovalov(act_p(-n, x), y) == shapovalov(x, act_p(n, y))


@settings(max_examples=40, deadline=None)
@given(st.lists(st.integers(-3, 3).filter(bool), max_size=5), st.integers(1, 3))
def test_normal_order_matches_action(modes, r):
    """Acting with a word on the vacuum agrees with its normal-ordered form."""
    module = FockModule(r)
    direct = act_word(modes, vac(module))
    via = FockVector.zero(module)
    for t in normal_order(HeisWord(tuple(modes)), r):
        if t.pos:
            continue
        via = via + act_word([-k for k in t.neg], vac(module)).scale(t.coeff)
    assert direct == via


@settings(max_examples=30, deadline=None)
@given(st.integers(1, 3), st.integers(1, 3), st.integers(1, 3), st.sampled_from(list(basis_upto(3))))
def test_commutator_on_basis(a, b, r, lam):
    module = FockModule(r)
    x = FockVector.basis(module, lam)
    lhs = act_p(a, act_p(-b, x)) - act_p(-b, act_p(a, x))
    rhs = x.scale(-kappa(a, r)) if a == b else FockVector.zero(module)
    assert lhs == rhs


def test_block_shape():
    b = block(P(-1), R1, 1, 2)
    assert len(b) == len(partitions_of(2)) and len(b[0]) == 1


@pytest.mark.parametrize("r", [1, 2, 3])
def test_heisenberg_suite_passes(r):
    checks = heisenberg_suite(r, 3, 4)
    assert all(c.passed for c in checks), [c.name for c in checks if not c.passed]


def test_q_heis_params():
    checks = verify_q_heis(1, 2, 3)
    assert checks and all(c.passed for c in checks)


def test_equivalence_negative_control():
    q = var("q1") * var("q2")
    wrong = 1 - q ** (-1) + var("m")
    checks = verify_equivalence(inverse_rus_exp(5), 1, ONE, wrong, ZERO, R1, 3)
    assert not any(c.passed for c in checks)
