import itertools
from fractions import Fraction
from math import comb

import pytest
from hypothesis import given
from hypothesis import strategies as st

from braidlie.algebra import GeneratorTable, GradedPoly, TensorSquarePoly, derivations_solve, quotient_present
from braidlie.cyclotomic import CycScalar, is_primitive_nth_root, root_of_unity
from braidlie.errors import (
    DegreeMismatch,
    LengthMismatch,
    MissingBracket,
    NotAZetaFamily,
    NotPrimitiveRoot,
    PairNotMinusOneFamily,
)
from braidlie.grading import AbelianGroup, Bicharacter, ZetaFamily, enumerate_zeta_families, is_zeta_family
from braidlie.hopf import HopfInstance, comultiply
from braidlie.lie import (
    LiePresentation,
    bracket_eval,
    check_jacobi1,
    check_jacobi2,
    check_main_theorem,
    check_symmetry,
    derivation_bracket,
    formal_table,
    gaussian_coefficient,
    gaussian_polynomial,
    lie_validate,
    minus_one,
    partition_count,
    span_contains,
    sylvester_polynomial,
)
from braidlie.model import parse_poly

from conftest import GROUP_BANK

ONE = CycScalar.rational(1)
NEG = CycScalar.rational(-1)
Z3 = root_of_unity(3, 1)
C2 = Bicharacter(AbelianGroup((2,)), 2, [[1]])
C3 = Bicharacter(AbelianGroup((3,)), 3, [[1]])
TRIVIAL = Bicharacter(AbelianGroup((2,)), 1, [[0]])
EX6 = Bicharacter(AbelianGroup((3, 3)), 3, [[1, 2], [0, 1]])


def formal(fam):
    t = formal_table(fam.members)
    return t, [GradedPoly.gen(t, i) for i in range(fam.n)]


def fam_of(chi, zeta, *exps):
    return ZetaFamily(chi, zeta, tuple(chi.group.element(list(e) if isinstance(e, tuple) else [e]) for e in exps))


def test_binary_brackets():
    for chi, text in ((TRIVIAL, "x*y - y*x"), (C2, "x*y + y*x")):
        fam = fam_of(chi, NEG, 1, 1)
        t, xs = formal(fam)
        assert bracket_eval(xs, fam) == parse_poly(text, t)
    color = Bicharacter(AbelianGroup((3, 3)), 3, [[0, 1], [2, 0]])
    fam = fam_of(color, NEG, (1, 0), (0, 1))
    t, (x, y) = formal(fam)
    c = color(*fam.members)
    assert bracket_eval([x, y], fam) == x * y - (y * x).scale(c)


def test_symmetric_sum_bracket():
    fam = fam_of(C3, Z3, 1, 1, 1)
    t, xs = formal(fam)
    expected = GradedPoly(t)
    for sigma in itertools.permutations(range(3)):
        expected = expected + GradedPoly(t, {sigma: 1})
    assert bracket_eval(xs, fam) == expected


def test_two_generator_example_brackets():
    z2 = Z3 * Z3
    fam = fam_of(EX6, Z3, (1, 0), (1, 0), (0, 1))
    t, xs = formal(fam)
    expected = {(0, 1, 2): ONE, (1, 0, 2): ONE, (0, 2, 1): Z3, (1, 2, 0): Z3, (2, 0, 1): z2, (2, 1, 0): z2}
    assert bracket_eval(xs, fam) == GradedPoly(t, expected)
    fam = fam_of(EX6, Z3, (1, 0), (0, 1), (0, 1))
    t, xs = formal(fam)
    expected = {(0, 1, 2): ONE, (0, 2, 1): ONE, (1, 0, 2): Z3, (2, 0, 1): Z3, (1, 2, 0): z2, (2, 1, 0): z2}
    assert bracket_eval(xs, fam) == GradedPoly(t, expected)


def test_ternary_bracket_in_the_quotient():
    g = C3.group.element([1])
    t = GeneratorTable(("x", "y"), (g, g))
    A = quotient_present(t, [parse_poly(r, t) for r in ("x^3", "y^3", "x*y^2 + y*x*y + y^2*x")], 8)
    x, y = GradedPoly.gen(t, "x"), GradedPoly.gen(t, "y")
    value = bracket_eval([x, x, y], ZetaFamily(C3, Z3, (g, g, g)), A)
    assert value == parse_poly("2*(x^2*y + x*y*x + y*x^2)", t)


def test_bracket_errors():
    fam = fam_of(C3, Z3, 1, 1, 1)
    t, xs = formal(fam)
    with pytest.raises(LengthMismatch):
        bracket_eval(xs[:2], fam)
    with pytest.raises(DegreeMismatch):
        bracket_eval([xs[0], xs[1], xs[2] * xs[2]], fam)
    with pytest.raises(NotAZetaFamily):
        ZetaFamily(C3, Z3, fam.members[:2] + (C3.group.element([2]),))


def test_symmetry_examples():
    for fam in (fam_of(TRIVIAL, NEG, 0, 0), fam_of(C2, NEG, 1, 1), fam_of(C3, Z3, 1, 1, 1)):
        assert check_symmetry(fam).passed
    fam = fam_of(C2, NEG, 1, 1)
    t, (x, y) = formal(fam)
    assert bracket_eval([x, y], fam) == bracket_eval([y, x], fam)


def test_first_jacobi_identity_examples():
    assert check_jacobi1(fam_of(TRIVIAL, NEG, 0, 0, 0)).passed
    for degs in itertools.product((0, 1), repeat=3):
        assert check_jacobi1(fam_of(C2, NEG, *degs)).passed
    assert check_jacobi1(fam_of(C3, Z3, 1, 1, 1, 1)).passed
    with pytest.raises(NotPrimitiveRoot):
        check_jacobi1(fam_of(C3, Z3, 1, 1, 1))


def test_second_jacobi_identity_examples():
    zero = C3.group.zero()
    assert check_jacobi2(fam_of(C3, Z3, 1, 1, 1), zero).passed
    assert check_jacobi2(fam_of(C2, NEG, 1, 1), C2.group.element([1])).passed
    with pytest.raises(PairNotMinusOneFamily):
        check_jacobi2(fam_of(C3, Z3, 1, 1, 1), C3.group.element([1]))


def test_second_jacobi_coefficient_orientation():
    chi = Bicharacter(AbelianGroup((4, 4)), 4, [[2, 1], [3, 0]])
    fam = fam_of(chi, NEG, (0, 1), (0, 0))
    h = chi.group.element([1, 0])
    assert check_jacobi2(fam, h).passed
    assert not check_jacobi2(fam, h, swap_coefficient=True).passed


def test_primitivity_examples():
    assert check_main_theorem(fam_of(TRIVIAL, NEG, 0, 0)).passed
    rep = check_main_theorem(fam_of(C3, Z3, 1, 1, 1))
    assert rep.passed and not rep.data["mixed"]
    control = check_main_theorem(fam_of(TRIVIAL, ONE, 1, 1), strict=False)
    assert not control.passed
    assert set(control.data["mixed"].values()) == {2}
    with pytest.raises(NotPrimitiveRoot):
        check_main_theorem(fam_of(TRIVIAL, ONE, 1, 1))


def brute_partitions(i, j, t):
    return sum(
        1
        for parts in itertools.product(range(i + 1), repeat=j)
        if sum(parts) == t and list(parts) == sorted(parts, reverse=True)
    )


@pytest.mark.parametrize("i,j", [(a, b) for a in range(5) for b in range(5)])
def test_partition_count_against_enumeration(i, j):
    for t in range(i * j + 2):
        assert partition_count(i, j, t) == brute_partitions(i, j, t)


def test_gaussian_examples():
    assert gaussian_coefficient(1, 3, Z3) == CycScalar.rational(0)
    for n in range(1, 9):
        for i in range(n + 1):
            assert gaussian_coefficient(i, n, ONE) == CycScalar.rational(comb(n, i))
            assert sum(gaussian_polynomial(i, n)) == comb(n, i)


@pytest.mark.parametrize("n", range(1, 13))
def test_gaussian_equals_sylvester(n):
    for i in range(n + 1):
        assert gaussian_polynomial(i, n) == sylvester_polynomial(i, n)


@pytest.mark.parametrize("m,n", [(3, 2), (4, 3), (5, 4), (6, 5), (3, 3), (4, 4), (5, 5), (2, 2)])
def test_gaussian_matches_expansion(m, n):
    chi = Bicharacter(AbelianGroup((m,)), m, [[1]])
    g = chi.group.element([1])
    zeta = chi(g, g)
    rep = check_main_theorem(ZetaFamily(chi, zeta, (g,) * n), strict=False)
    for i in range(n + 1):
        assert rep.data["c1"][i] == gaussian_coefficient(i, n, zeta)


def ternary_presentation():
    g0, g1 = C3.group.zero(), C3.group.element([1])
    brackets = {
        (Z3, ("x", "x", "x")): {},
        (Z3, ("y", "y", "y")): {},
        (Z3, ("x", "y", "y")): {},
        (Z3, ("x", "x", "y")): {"z": 1},
        (NEG, ("z", "x")): {},
        (NEG, ("z", "y")): {},
    }
    return LiePresentation(C3, {g0: ["z"], g1: ["x", "y"]}, brackets, undeclared_zero=True)


def test_lie_validate_examples():
    g1 = C3.group.element([1])
    assert lie_validate(LiePresentation(C3, {g1: ["x"]}, {(Z3, ("x", "x", "x")): {}})).passed
    assert lie_validate(ternary_presentation()).passed


def test_lie_validate_flags_a_bad_sign():
    zero = TRIVIAL.group.zero()
    brackets = {
        (NEG, ("e", "f")): {"h": 1},
        (NEG, ("f", "e")): {"h": 1},
        (NEG, ("h", "e")): {"e": 2},
        (NEG, ("h", "f")): {"f": -2},
    }
    P = LiePresentation(TRIVIAL, {zero: ["e", "f", "h"]}, brackets, undeclared_zero=True)
    rep = lie_validate(P)
    assert not rep.passed
    assert any(line.startswith("LIE symmetry") and line.endswith("FAIL") for line in rep.lines)


def test_sl2_passes():
    zero = TRIVIAL.group.zero()
    brackets = {
        (NEG, ("e", "f")): {"h": 1},
        (NEG, ("h", "e")): {"e": 2},
        (NEG, ("h", "f")): {"f": -2},
    }
    P = LiePresentation(TRIVIAL, {zero: ["e", "f", "h"]}, brackets, undeclared_zero=True)
    assert lie_validate(P).passed


def test_missing_bracket_is_reported():
    zero = TRIVIAL.group.zero()
    P = LiePresentation(TRIVIAL, {zero: ["e", "f"]}, {(NEG, ("e", "f")): {"e": 1}})
    with pytest.raises(MissingBracket):
        lie_validate(P)


@pytest.mark.parametrize("name,chi", GROUP_BANK[:4], ids=[n for n, _ in GROUP_BANK[:4]])
def test_brackets_satisfy_identities_over_small_groups(name, chi):
    neg = minus_one(chi)
    elems = chi.group.elements()
    for n in (2, 3):
        for zeta in (z for z in _roots(chi) if is_primitive_nth_root(z, n)):
            for fam in enumerate_zeta_families(chi, n, zeta):
                assert check_symmetry(fam).passed
                assert check_main_theorem(fam).passed
                for h in elems:
                    if all(is_zeta_family(chi, neg, (h, g)) for g in fam.members):
                        assert check_jacobi2(fam, h).passed


def _roots(chi):
    level = 2 * chi.level
    return [root_of_unity(level, k) for k in range(level)]


def test_derivations_are_closed_under_brackets():
    g1 = C3.group.element([1])
    t = GeneratorTable(("x",), (g1,))
    A = quotient_present(t, [parse_poly("x^3", t)], 6)
    ders = {g: derivations_solve(A, C3, g) for g in C3.group.elements()}
    assert all(ders[g] for g in ders)
    vectors = {g: [d.vector() for d in ds] for g, ds in ders.items()}
    checked = 0
    for n in (2, 3):
        for zeta in (z for z in _roots(C3) if is_primitive_nth_root(z, n)):
            for fam in enumerate_zeta_families(C3, n, zeta):
                for combo in itertools.product(*(ders[g] for g in fam.members)):
                    br = derivation_bracket(list(combo), fam)
                    assert span_contains(vectors[br.degree], br.vector())
                    checked += 1
    assert checked > 0


def test_zero_map_is_a_derivation():
    g1 = C3.group.element([1])
    t = GeneratorTable(("x",), (g1,))
    A = quotient_present(t, [parse_poly("x^3", t)], 6)
    ders = derivations_solve(A, C3, g1)
    assert span_contains([d.vector() for d in ders], {})


@given(st.sampled_from([(3, 1, 3), (3, 2, 3), (4, 1, 4), (2, 1, 2), (5, 2, 5)]), st.data())
def test_brackets_of_primitives_are_primitive(params, data):
    m, k, n = params
    chi = Bicharacter(AbelianGroup((m,)), m, [[1]])
    g = chi.group.element([k])
    zeta = chi(g, g)
    fam = ZetaFamily(chi, zeta, (g,) * n)
    if not is_primitive_nth_root(zeta, n):
        zeta = -zeta
        fam = ZetaFamily(chi, zeta, (g,) * n)
    if not is_primitive_nth_root(zeta, n):
        return
    names = tuple(f"a{i}" for i in range(n))
    t = GeneratorTable(names, (g,) * n)
    H = HopfInstance.primitive(quotient_present(t, [], n + 1), chi)
    picks = [data.draw(st.integers(0, n - 1)) for _ in range(n)]
    xs = [GradedPoly.gen(t, i) for i in picks]
    b = bracket_eval(xs, fam)
    one = GradedPoly.unit(t)
    assert comultiply(b, H) == TensorSquarePoly.pure(b, one) + TensorSquarePoly.pure(one, b)


def test_fractions_in_brackets_stay_exact():
    fam = fam_of(C3, Z3, 1, 1, 1)
    t, xs = formal(fam)
    value = bracket_eval([x.scale(Fraction(1, 3)) for x in xs], fam)
    assert all(not isinstance(c, float) for c in value.terms.values())
