"""Acceptance criteria, each run against its wall-clock budget.

Every criterion records a PASS/FAIL line; conftest prints them at the end of
the session. Run this file directly for the lines alone.
"""

import itertools
import random
import subprocess
import sys
import time
from contextlib import contextmanager
from importlib import resources
from math import gcd

import pytest
import sympy
from sympy import QQ
from sympy.polys.matrices import DomainMatrix

from braidlie.algebra import GeneratorTable, GradedPoly, TensorSquarePoly, derivations_solve, quotient_present
from braidlie.cyclotomic import CycScalar, is_primitive_nth_root, root_of_unity
from braidlie.grading import (
    AbelianGroup,
    Bicharacter,
    ZetaFamily,
    compose,
    enumerate_zeta_families,
    is_zeta_family,
    list_zeta_values,
    rho,
)
from braidlie.hopf import (
    HopfInstance,
    biproduct_build,
    biproduct_check,
    biproduct_relations,
    comultiply,
    enveloping_build,
    hopf_axioms_check,
    primitives_solve,
)
from braidlie.lie import (
    LiePresentation,
    bracket_eval,
    check_jacobi1,
    check_jacobi2,
    check_main_theorem,
    check_symmetry,
    derivation_bracket,
    gaussian_coefficient,
    gaussian_polynomial,
    minus_one,
    span_contains,
    sylvester_polynomial,
)
from braidlie.model import load_model, parse_poly

from conftest import GROUP_BANK

RESULTS: dict = {}
CORPUS = resources.files("braidlie") / "corpus"
ONE = CycScalar.rational(1)


@contextmanager
def criterion(number: int, title: str, budget: float):
    start = time.perf_counter()
    ok = False
    try:
        yield
        ok = True
    finally:
        elapsed = time.perf_counter() - start
        within = elapsed < budget
        status = "PASS" if ok and within else "FAIL"
        note = "" if within else " over budget"
        RESULTS[number] = f"ACCEPTANCE {number:>2} {status} {title} ({elapsed:.1f}s of {budget:g}s{note})"
    assert within, RESULTS[number]


def roots(chi):
    level = 2 * chi.level
    return [root_of_unity(level, k) for k in range(level)]


def primitive_roots(chi, n):
    return [z for z in roots(chi) if is_primitive_nth_root(z, n)]


def rho_by_definition(sigma, fam):
    out = ONE
    zinv = fam.zeta.inverse()
    for i in range(fam.n):
        for j in range(i + 1, fam.n):
            if sigma[i] > sigma[j]:
                out = out * zinv * fam.chi(fam.members[sigma[j]], fam.members[sigma[i]])
    return out


def random_family(rng, chi, n):
    elems = chi.group.elements()
    a, b = rng.choice(elems), rng.choice(elems)
    zeta = rng.choice([z for z, _ in list_zeta_values(chi, 2) if is_zeta_family(chi, z, (a, b))])
    members = [a, b]
    while len(members) < n:
        options = [h for h in elems if is_zeta_family(chi, zeta, members + [h])]
        if not options:
            return None
        members.append(rng.choice(options))
    return ZetaFamily(chi, zeta, tuple(members))


def test_cocycle_law():
    with criterion(1, "rho cocycle law, 500 random instances", 10):
        rng = random.Random(20240601)
        done = 0
        while done < 500:
            _, chi = rng.choice(GROUP_BANK)
            fam = random_family(rng, chi, rng.randint(2, 5))
            if fam is None:
                continue
            sigma = tuple(rng.sample(range(fam.n), fam.n))
            tau = tuple(rng.sample(range(fam.n), fam.n))
            assert rho(compose(sigma, tau), fam) == rho(tau, fam.permuted(sigma)) * rho(sigma, fam)
            assert rho(sigma, fam) == rho_by_definition(sigma, fam)
            done += 1


def test_bracket_symmetry():
    with criterion(2, "symmetry over every enumerated family, n <= 4", 30):
        count = 0
        for _, chi in GROUP_BANK:
            for n in (2, 3, 4):
                for zeta, _ in list_zeta_values(chi, n):
                    for fam in enumerate_zeta_families(chi, n, zeta):
                        assert check_symmetry(fam).passed, fam
                        count += 1
        assert count > 0


def test_jacobi_identities():
    with criterion(3, "Jacobi identities 1 and 2, n in 2..4", 60):
        first = second = 0
        for _, chi in GROUP_BANK:
            neg = minus_one(chi)
            elems = chi.group.elements()
            for n in (2, 3, 4):
                for zeta in primitive_roots(chi, n):
                    for fam in enumerate_zeta_families(chi, n + 1, zeta):
                        assert check_jacobi1(fam).passed, fam
                        first += 1
                    for fam in enumerate_zeta_families(chi, n, zeta):
                        for h in elems:
                            if all(is_zeta_family(chi, neg, (h, g)) for g in fam.members):
                                assert check_jacobi2(fam, h).passed, (fam, h)
                                second += 1
        assert first > 0 and second > 0


def test_brackets_of_primitives_are_primitive():
    with criterion(4, "primitivity of brackets, n in 2..5, plus negative control", 120):
        count = 0
        for _, chi in GROUP_BANK:
            for n in (2, 3, 4, 5):
                for zeta in primitive_roots(chi, n):
                    for fam in enumerate_zeta_families(chi, n, zeta):
                        assert check_main_theorem(fam).passed, fam
                        count += 1
        assert count > 0
        _, c2 = GROUP_BANK[0]
        g = c2.group.element([1])
        control = check_main_theorem(ZetaFamily(c2, ONE, (c2.group.zero(), g)), strict=False)
        assert not control.passed


def test_gaussian_identity():
    with criterion(5, "Gaussian coefficients equal the product formula", 5):
        q = sympy.Symbol("q")
        for n in range(0, 13):
            for i in range(n + 1):
                gp = gaussian_polynomial(i, n)
                assert gp == sylvester_polynomial(i, n)
                num = sympy.prod([1 - q ** (n - k) for k in range(i)])
                den = sympy.prod([1 - q ** (k + 1) for k in range(i)])
                oracle = sympy.Poly(sympy.cancel(num / den), q).all_coeffs()[::-1]
                assert gp == [int(c) for c in oracle]
            for k in range(1, n + 1):
                if gcd(k, n) == 1 and n >= 2:
                    z = root_of_unity(n, k)
                    for i in range(1, n):
                        assert gaussian_coefficient(i, n, z).is_zero()


def test_sweedler_reproduction():
    with criterion(6, "Sweedler algebra as a biproduct", 5):
        doc = load_model(CORPUS / "sweedler.model")
        B = biproduct_build(doc.build_hopf())
        rep = biproduct_check(B)
        assert len(B.keys()) == 4
        assert rep.passed
        assert rep.data["commutative"] is False and rep.data["cocommutative"] is False


def taft(n):
    chi = Bicharacter(AbelianGroup((n,)), n, [[1]])
    g = chi.group.element([1])
    zeta = root_of_unity(n, 1)
    P = LiePresentation(chi, {g: ["x"]}, {(zeta if n > 2 else minus_one(chi), ("x",) * n): {}})
    return chi, zeta, biproduct_build(enveloping_build(P, n + 2))


def test_taft_reproduction():
    with criterion(7, "Taft algebras for n = 2, 3, 4", 30):
        for n in (2, 3, 4):
            chi, zeta, B = taft(n)
            assert len(B.keys()) == n * n
            assert biproduct_check(B).passed
            rels = biproduct_relations(B)
            assert f"RELATION t^{n} = 1" in rels and f"RELATION x^{n} = 0" in rels
            g = chi.group.element([1])
            t, x = ((), g), ((0,), chi.group.zero())
            assert B.mul(t, x) == {k: v * zeta for k, v in B.mul(x, t).items()}
            t_n = B.product(*([t] * n))
            assert t_n == {B.unit(): 1}
            assert B.product(*([x] * n)) == {}


def _to_field(c, K, z):
    if not isinstance(c, CycScalar):
        return K.convert(sympy.Rational(c.numerator, c.denominator) if hasattr(c, "denominator") else c)
    out = K.zero
    for k, a in enumerate(c.coeffs):
        if a:
            out += K.convert(sympy.Rational(a.numerator, a.denominator)) * z**k
    return out


def primitive_oracle(n):
    """Kernel of p -> Delta(p) - p(x)1 - 1(x)p on k[x]/(x^n), solved by sympy."""
    chi = Bicharacter(AbelianGroup((n,)), n, [[1]])
    t = GeneratorTable(("x",), (chi.group.element([1]),))
    H = HopfInstance.primitive(quotient_present(t, [parse_poly(f"x^{n}", t)], n + 2), chi)
    w = sympy.exp(2 * sympy.pi * sympy.I / (2 * n))
    K = QQ.algebraic_field(w)
    z = K.from_sympy(w)
    rows = [((0,) * a, (0,) * b) for a in range(n) for b in range(n)]
    cols = []
    for j in range(n):
        p = GradedPoly.word(t, (0,) * j)
        one = GradedPoly.unit(t)
        defect = comultiply(p, H) - TensorSquarePoly.pure(p, one) - TensorSquarePoly.pure(one, p)
        cols.append([_to_field(CycScalar.rational(0, 2 * n) + defect.terms.get(r, 0), K, z) for r in rows])
    matrix = DomainMatrix([[cols[j][i] for j in range(n)] for i in range(len(rows))], (len(rows), n), K)
    return matrix.nullspace().to_Matrix(), H


def test_primitive_solver():
    with criterion(8, "primitives of truncated polynomial algebras", 10):
        for n in (2, 3, 4, 5):
            kernel, H = primitive_oracle(n)
            assert kernel.shape[0] == 1
            assert [j for j in range(n) if kernel[0, j] != 0] == [1]
            P = primitives_solve(H)
            assert P.dimension() == 1
            assert P.degrees() == [H.chi.group.element([1])]


def test_ternary_example():
    with criterion(9, "ternary enveloping algebra over C3", 60):
        doc = load_model(CORPUS / "ternary_c3.model")
        H = doc.build_hopf()
        assert H.algebra.stabilized
        quotient = load_model(CORPUS / "ternary_c3_quotient.model")
        A = quotient.build_presentation()
        assert A.stabilized
        t = A.table
        xs = [GradedPoly.gen(t, a) for a in ("x", "x", "y")]
        fam = ZetaFamily(quotient.chi, root_of_unity(3, 1), tuple(x.degree() for x in xs))
        assert bracket_eval(xs, fam, A) == parse_poly("2*x^2*y + 2*x*y*x + 2*y*x^2", t)
        U = H.algebra
        z = U.normal_form(parse_poly("z", U.table))
        assert U.normal_form(parse_poly("2*x^2*y + 2*x*y*x + 2*y*x^2", U.table)) == z
        for inst in (H, quotient.build_hopf()):
            rep = hopf_axioms_check(inst, truncate=6)
            assert rep.passed and rep.data["truncated"]


def test_derivation_closure():
    with criterion(10, "derivations of k[x]/(x^3) close under brackets", 10):
        chi = Bicharacter(AbelianGroup((3,)), 3, [[1]])
        t = GeneratorTable(("x",), (chi.group.element([1]),))
        A = quotient_present(t, [parse_poly("x^3", t)], 6)
        ders = {g: derivations_solve(A, chi, g) for g in chi.group.elements()}
        vectors = {g: [d.vector() for d in ds] for g, ds in ders.items()}
        checked = 0
        for n in (2, 3):
            for zeta in primitive_roots(chi, n):
                for fam in enumerate_zeta_families(chi, n, zeta):
                    pools = [ders[g] for g in fam.members]
                    for combo in itertools.product(*pools):
                        br = derivation_bracket(list(combo), fam)
                        assert span_contains(vectors[br.degree], br.vector())
                        checked += 1
        assert checked > 0


def test_cli_determinism():
    with criterion(11, "paper-examples twice, identical bytes, exit 0", 60):
        cmd = [sys.executable, "-m", "braidlie.cli", "paper-examples", "--jobs", "4"]
        first = subprocess.run(cmd, capture_output=True)
        second = subprocess.run(cmd, capture_output=True)
        assert first.returncode == 0 and second.returncode == 0
        assert first.stdout == second.stdout


if __name__ == "__main__":
    sys.exit(pytest.main([__file__, "-q"]))
