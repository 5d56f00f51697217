import pytest
from hypothesis import given, settings, strategies as st

from walg.residue import (
    ContourOrder,
    KernelSpec,
    MultiRat,
    ResidueError,
    chern_roots,
    contour_difference_check,
    expand_at,
    int_inf_minus_zero,
    kernel,
    nested_contour_integral,
    residue_at,
    residue_suite,
    rescaling_check,
    verify_residue_identities,
    wedge_factor,
    zeta_factor,
)
from walg.scalars import ONE, ZERO, Scalar, gamma_const, substitute, var

z, w, y = var("z1"), var("z2"), var("y")
q1, q2, m = var("q1"), var("q2"), var("m")
q = q1 * q2
a1, b1 = var("a1"), var("b1")


def test_expand_examples():
    f = 1 / (1 - z)
    at0 = expand_at(f, "z1", "0")
    assert [at0.coefficient(k) for k in range(-1, 4)] == [ZERO, ONE, ONE, ONE, ONE]
    atinf = expand_at(f, "z1", "inf")
    assert [atinf.coefficient(k) for k in range(-3, 2)] == [-ONE, -ONE, -ONE, ZERO, ZERO]
    c = var("u") / var("v")
    assert expand_at(c, "z1", "0").coefficient(0) == c
    assert expand_at(c, "z1", "inf").coefficient(0) == c


def test_int_inf_minus_zero_examples():
    assert int_inf_minus_zero(var("u"), "z1") == ZERO
    assert int_inf_minus_zero(1 / (1 - z), "z1") == -ONE
    assert int_inf_minus_zero(z / (z - w), "z1") == ONE


def test_residue_at_examples():
    assert residue_at(z / (z - y), "z1", y) == ONE
    assert residue_at(1 / (1 - y / z), "z1", y) == ONE
    assert residue_at(1 / (1 - z), "z1", y) == ZERO
    with pytest.raises(ResidueError, match="non-simple pole"):
        residue_at(1 / (z - y) ** 2, "z1", y)


@settings(max_examples=30, deadline=None)
@given(
    st.lists(st.integers(1, 9), min_size=1, max_size=3, unique=True),
    st.lists(st.integers(-4, 4), min_size=3, max_size=3),
    st.integers(0, 2),
)
def test_residue_theorem(points, num_coeffs, shift):
    """Sum of all residues of f/z on the sphere vanishes: inf - 0 = sum of finite poles."""
    den = ONE
    for p in points:
        den = den * (z - p * w)
    num = sum((c * z**i * w ** (len(points) - i) for i, c in enumerate(num_coeffs)), ZERO)
    f = num / den * z**shift
    finite = sum((residue_at(f, "z1", p * w) for p in points), ZERO)
    assert int_inf_minus_zero(f, "z1") == finite


def test_zeta_examples():
    x = w / z
    assert zeta_factor(x) == (1 - q1 * x) * (1 - q2 * x) / ((1 - x) * (1 - q * x))
    assert substitute(zeta_factor(x), {"q1": ONE, "q2": ONE}) == ONE
    assert substitute(zeta_factor(x), {"q1": q2, "q2": q1}) == zeta_factor(x)


def test_wedge_examples():
    assert wedge_factor([a1], z * q, side="over") == 1 - z * q / a1
    assert wedge_factor([a1], m / (z * q), side="under") == 1 - a1 * m / (z * q)
    assert wedge_factor([a1], z, sign="-") == 1 / (1 - z / a1)
    with pytest.raises(ValueError):
        wedge_factor([], z)


def test_kernel_examples():
    k1 = kernel(KernelSpec("I", 1, 1))
    assert k1.value == (1 - a1 * m / (z * q)) / (1 - b1 / z)
    assert k1.variables == ("z1",)
    k2 = kernel(KernelSpec("I", 2, 1))
    single = lambda t: (1 - a1 * m / (t * q)) / (1 - b1 / t)
    assert k2.value == single(z) * single(w) / ((1 - q * w / z) * zeta_factor(w / z))
    ky = kernel(KernelSpec("I_y", 1, 1))
    assert ky.value == k1.value / (1 - y / z)
    with pytest.raises(ValueError):
        KernelSpec("J", 1, 1)


def test_nested_contour_examples():
    assert nested_contour_integral(ONE, ContourOrder.marker_first(())) == ONE
    k = kernel(KernelSpec("I", 1, 1))
    first = nested_contour_integral(k, ContourOrder.marker_first(("z1",)))
    last = nested_contour_integral(k, ContourOrder.marker_last(("z1",)))
    assert first == int_inf_minus_zero(k, "z1")
    # the finite poles: z1 = b1 only
    assert first - last == residue_at(k, "z1", b1)


def test_multirat_rejects_unknown_variable():
    with pytest.raises(ValueError):
        MultiRat(ONE, ("x9",))


@pytest.mark.parametrize("variant", ["I", "I_bis"])
@pytest.mark.parametrize("n", [1, 2, 3])
def test_identities(variant, n):
    assert all(c.passed for c in verify_residue_identities(variant, n, 1))


@pytest.mark.parametrize("variant", ["I", "I_bis", "I_y", "I_y_bis"])
@pytest.mark.parametrize("n", [1, 2])
def test_contour_difference(variant, n):
    assert contour_difference_check(variant, n, 1).passed


def test_rescaling():
    assert rescaling_check(2, 1).passed
    assert rescaling_check(2, 1, bis=True).passed


def test_y_residue_known_defect():
    """At n >= 2 the pole at z_n = y carries the zeta factors of the other variables."""
    checks = {(c.name, c.params.get("n")): c for c in residue_suite(1, 2) if "res_y" in c.name}
    for variant_check in [c for (name, n), c in checks.items() if name == "res_y_last_zeta_corrected"]:
        assert variant_check.passed
    literal = [c for (name, n), c in checks.items() if name == "res_y_last" and n == 2]
    assert literal and not any(c.passed for c in literal)
