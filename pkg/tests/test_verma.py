from concurrent.futures import ThreadPoolExecutor

import pytest

from walg.fock import FockModule, FockVector, act_h, act_p
from walg.current import w_top
from walg.scalars import ONE, ZERO, kappa, var
from walg.verma import (
    FockStructureTable,
    PhiRecursion,
    SlopeWord,
    VermaError,
    check_change_of_basis,
    check_highest_weight,
    compare_direct,
    pbw_vector,
    phi_matrix_direct,
    phi_matrix_recursive,
    reorder,
    shapovalov_w,
    verma_suite,
    words_of_degree,
)
from walg.vertex import closed_form_vertex, phi_block

u = var("u")
E = SlopeWord()


def test_slope_word_validation():
    assert SlopeWord((-2, -1)).degree == 3
    with pytest.raises(VermaError):
        SlopeWord((-1, -2))
    with pytest.raises(VermaError):
        SlopeWord((0,))
    assert len(words_of_degree(4)) == 5


def test_pbw_examples():
    vac = FockVector.vacuum(FockModule(1))
    assert pbw_vector(E) == vac
    assert pbw_vector(SlopeWord((-1,))) == act_p(-1, vac).scale(u)
    x = act_p(-1, vac)
    # u^2 (P_{-1}^2 + H_{-2} H_1 P_{-1}) |vac>
    want = (act_p(-1, x) + act_h(-2, act_h(1, x))).scale(u**2)
    assert pbw_vector(SlopeWord((-1, -1))) == want


def test_reorder_examples():
    assert reorder(1, E) == {}
    out = reorder(1, SlopeWord((-1,)))
    assert set(out) == {E}
    # at r = 1 the correction cancels u W_{-1} vac exactly
    assert reorder(0, SlopeWord((-1,))) == {}
    table = FockStructureTable()
    for n in (-1, 0, 1):
        for w in words_of_degree(2):
            assert reorder(n, w) == table.to_words(w_top(n, 1, "u", pbw_vector(w)))


def test_shapovalov_w_examples():
    assert shapovalov_w(E, E) == ONE
    assert shapovalov_w(SlopeWord((-1,)), SlopeWord((-2,))) == ZERO
    w1 = SlopeWord((-1,))
    assert shapovalov_w(w1, w1) == -(u**2) * kappa(1, 1)
    assert shapovalov_w(w1, w1) == -(u**2)


def test_phi_matrix_low_entries():
    rec = PhiRecursion()
    w1 = SlopeWord((-1,))
    phi = closed_form_vertex(1, 3)
    direct = phi_matrix_direct(1)
    assert rec.value(E, E) == ONE
    assert rec.value(E, w1) == direct[(E, w1)]
    assert rec.value(w1, E) == direct[(w1, E)]
    # <W_{-1}|Phi|vac> = <u P_{-1}, Phi vac> = u * alpha_1 * (-kappa)
    assert rec.value(w1, E) == -u * phi_block(phi, 0, 1)[0][0]


@pytest.mark.parametrize("n", [0, 1, 2, 3])
def test_compare_direct(n):
    assert compare_direct(n).passed


def test_change_of_basis_and_highest_weight():
    assert all(c.passed for c in check_change_of_basis(4))
    assert check_highest_weight(3).passed


def test_structure_table_thread_safe():
    table = FockStructureTable()
    words = [w for d in range(4) for w in words_of_degree(d)]
    jobs = [(n, w) for n in (-1, 0, 1, 2) for w in words]
    with ThreadPoolExecutor(8) as pool:
        got = list(pool.map(lambda job: table.expand(job[0], job[1], "u"), jobs * 3))
    serial = FockStructureTable()
    want = [serial.expand(n, w, "u") for n, w in jobs] * 3
    assert got == want


def test_recursive_matrix_is_degree_graded():
    mat = phi_matrix_recursive(2)
    assert len(mat) == len([w for d in range(3) for w in words_of_degree(d)]) ** 2


def test_suite():
    assert all(c.passed for c in verma_suite(3))
