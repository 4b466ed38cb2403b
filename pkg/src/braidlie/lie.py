"""Generalized brackets and symbolic checks of their identities.

The symbolic checks work with formal generators in a free algebra: a
distinct generator per slot, graded by the family.  An identity that holds
there holds in every (G, chi)-algebra.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction

from .algebra import (
    GeneratorTable,
    GradedDerivation,
    GradedPoly,
    PresentedAlgebra,
    TensorSquarePoly,
    _acc,
    tensor_mul,
)
from .cyclotomic import CycScalar, format_scalar, is_primitive_nth_root, lcm, root_of_unity
from .errors import (
    DegreeMismatch,
    LengthMismatch,
    LieValidationFailure,
    MissingBracket,
    NotAZetaFamily,
    NotPrimitiveRoot,
    PairNotMinusOneFamily,
)
from .grading import (
    Bicharacter,
    GroupElement,
    ZetaFamily,
    act,
    cycle_to_front,
    format_permutation,
    is_zeta_family,
    sum_elements,
)
from .linalg import Echelon


@dataclass
class Report:
    name: str
    passed: bool
    lines: list[str] = field(default_factory=list)
    witness: str | None = None
    data: dict = field(default_factory=dict)

    def status(self) -> str:
        return "PASS" if self.passed else "FAIL"


def formal_names(n: int, prefix: str = "x") -> tuple[str, ...]:
    if n <= 2 and prefix == "x":
        return ("x", "y")[:n]
    return tuple(f"{prefix}{i + 1}" for i in range(n))


def formal_table(members, names=None) -> GeneratorTable:
    members = tuple(members)
    return GeneratorTable(tuple(names) if names else formal_names(len(members)), members)


def _formal_gens(table: GeneratorTable) -> list[GradedPoly]:
    return [GradedPoly.gen(table, i) for i in range(len(table.names))]


def minus_one(chi: Bicharacter) -> CycScalar:
    return root_of_unity(chi.ambient_level, chi.ambient_level // 2) if chi.ambient_level % 2 == 0 else CycScalar.rational(-1)


def bracket_terms(xs, fam: ZetaFamily) -> dict:
    ctx = fam.context
    terms: dict = {}
    if all(len(x.terms) == 1 for x in xs):
        mono = [next(iter(x.terms.items())) for x in xs]
        base = 1
        for _, c in mono:
            base = base * c
        for sigma in itertools.permutations(range(len(xs))):
            w = ()
            for k in sigma:
                w += mono[k][0]
            _acc(terms, w, ctx.value(sigma) * base)
        return terms
    for sigma in itertools.permutations(range(len(xs))):
        prod = {(): ctx.value(sigma)}
        for k in sigma:
            nxt: dict = {}
            for u, a in prod.items():
                for v, b in xs[k].terms.items():
                    _acc(nxt, u + v, a * b)
            prod = nxt
        for w, c in prod.items():
            _acc(terms, w, c)
    return terms


def bracket_eval(xs, fam: ZetaFamily, algebra: PresentedAlgebra | None = None) -> GradedPoly:
    """[x_1, ..., x_n] = sum over sigma of rho(sigma, fam) x_sigma(1) ... x_sigma(n)."""
    xs = list(xs)
    if len(xs) != fam.n:
        raise LengthMismatch(f"{len(xs)} arguments for a family of length {fam.n}")
    for i, (x, g) in enumerate(zip(xs, fam.members)):
        if x and x.degree() != g:
            raise DegreeMismatch(f"argument {i + 1} has degree {x.degree()}, family expects {g}")
    table = xs[0].table
    if any(not x for x in xs):
        return GradedPoly(table)
    p = GradedPoly(table, bracket_terms(xs, fam))
    return algebra.normal_form(p) if algebra is not None else p


# --- symmetry ---------------------------------------------------------------


def check_symmetry(fam: ZetaFamily) -> Report:
    """[x_1..x_n] = rho(sigma) [x_sigma(1)..x_sigma(n)] for every sigma, over formal generators."""
    table = formal_table(fam.members)
    xs = _formal_gens(table)
    lhs = bracket_eval(xs, fam)
    ctx = fam.context
    rep = Report("symmetry", True)
    checked = 0
    for sigma in itertools.permutations(range(fam.n)):
        rhs = bracket_eval(act(sigma, xs), fam.permuted(sigma)).scale(ctx.value(sigma))
        checked += 1
        if lhs != rhs:
            rep.passed = False
            rep.witness = format_permutation(sigma)
            rep.lines.append(f"SYMMETRY {fam} sigma={format_permutation(sigma)} FAIL")
            break
    if rep.passed:
        rep.lines.append(f"SYMMETRY {fam} zeta={format_scalar(fam.zeta)} PASS ({checked} permutations)")
    rep.data["checked"] = checked
    return rep


# --- Jacobi identities --------------------------------------------------------


def _require_primitive(zeta: CycScalar, n: int) -> None:
    if not is_primitive_nth_root(zeta, n):
        raise NotPrimitiveRoot(f"{format_scalar(zeta)} is not a primitive {n}-th root of unity")


def jacobi1_coefficient(fam: ZetaFamily, i: int) -> CycScalar:
    """zeta^(-i) prod_{j<i} chi(g_j, g_i) for the 0-based slot i."""
    chi = fam.chi
    c = fam.zeta ** (-i)
    for j in range(i):
        c = c * chi(fam.members[j], fam.members[i])
    return c


def check_jacobi1(fam: ZetaFamily) -> Report:
    """sum_i rho((i..1), fam) [x_i, [x_1, .., ^x_i, .., x_{n+1}]] = 0 with zeta primitive n-th."""
    m = fam.n
    n = m - 1
    _require_primitive(fam.zeta, n)
    chi = fam.chi
    table = formal_table(fam.members, formal_names(m, "x") if m > 2 else None)
    xs = _formal_gens(table)
    ctx = fam.context
    rep = Report("jacobi1", True)
    total = GradedPoly(table)
    neg1 = minus_one(chi)
    for i in range(m):
        rest = [k for k in range(m) if k != i]
        inner_fam = ZetaFamily(chi, fam.zeta, tuple(fam.members[k] for k in rest))
        inner = bracket_eval([xs[k] for k in rest], inner_fam)
        h = sum_elements(chi.group, inner_fam.members)
        outer_members = (fam.members[i], h)
        if not is_zeta_family(chi, neg1, outer_members):
            rep.passed = False
            rep.witness = f"outer pair for slot {i + 1}"
            rep.lines.append(f"JACOBI1 {fam} slot={i + 1} outer pair is not a (-1)-family FAIL")
            return rep
        outer = bracket_eval([xs[i], inner], ZetaFamily(chi, neg1, outer_members))
        coeff = ctx.value(cycle_to_front(i, m))
        closed = jacobi1_coefficient(fam, i)
        if coeff != closed:
            rep.passed = False
            rep.witness = f"coefficient of slot {i + 1}"
            rep.lines.append(
                f"JACOBI1 {fam} slot={i + 1} rho={format_scalar(coeff)} closed form={format_scalar(closed)} FAIL"
            )
        total = total + outer.scale(coeff)
    if total:
        rep.passed = False
        rep.witness = rep.witness or f"{len(total.terms)} surviving terms"
    rep.data["residue"] = total
    rep.lines.append(f"JACOBI1 {fam} zeta={format_scalar(fam.zeta)} {rep.status()}")
    return rep


def check_jacobi2(fam: ZetaFamily, h: GroupElement, swap_coefficient: bool = False) -> Report:
    """[x, [y_1..y_n]] = sum_i (prod_{j<i} chi(h, g_j)) [y_1, .., [x, y_i], .., y_n].

    ``swap_coefficient`` uses chi(g_j, h) instead; it exists to show that the
    other orientation fails for asymmetric bicharacters.
    """
    n = fam.n
    _require_primitive(fam.zeta, n)
    chi = fam.chi
    neg1 = minus_one(chi)
    for i, g in enumerate(fam.members):
        if not is_zeta_family(chi, neg1, (h, g)):
            raise PairNotMinusOneFamily(i)
    names = ("x",) + tuple(f"y{k + 1}" for k in range(n))
    table = GeneratorTable(names, (h,) + fam.members)
    x, *ys = _formal_gens(table)
    g_sum = sum_elements(chi.group, fam.members)
    lhs = bracket_eval([x, bracket_eval(ys, fam)], ZetaFamily(chi, neg1, (h, g_sum)))
    rhs = GradedPoly(table)
    coeff = CycScalar.rational(1)
    for i in range(n):
        inner = bracket_eval([x, ys[i]], ZetaFamily(chi, neg1, (h, fam.members[i])))
        members = list(fam.members)
        members[i] = h + members[i]
        args = list(ys)
        args[i] = inner
        rhs = rhs + bracket_eval(args, ZetaFamily(chi, fam.zeta, tuple(members))).scale(coeff)
        coeff = coeff * (chi(fam.members[i], h) if swap_coefficient else chi(h, fam.members[i]))
    diff = lhs - rhs
    rep = Report("jacobi2", not diff)
    if diff:
        rep.witness = f"{len(diff.terms)} surviving terms"
    rep.data["residue"] = diff
    rep.lines.append(f"JACOBI2 {fam} h={h} zeta={format_scalar(fam.zeta)} {rep.status()}")
    return rep


# --- the primitivity theorem ----------------------------------------------------


def check_main_theorem(fam: ZetaFamily, strict: bool = True) -> Report:
    """Expand [x_i (x) 1 + 1 (x) x_i] in the braided tensor square and inspect the mixed terms.

    With ``strict`` a non-primitive zeta raises; otherwise the expansion is
    still carried out, which is how the negative control is run.
    """
    n = fam.n
    primitive = is_primitive_nth_root(fam.zeta, n)
    if strict and not primitive:
        raise NotPrimitiveRoot(f"{format_scalar(fam.zeta)} is not a primitive {n}-th root of unity")
    chi = fam.chi
    table = formal_table(fam.members)
    ctx = fam.context
    unit = ((), ())
    xs = [TensorSquarePoly(table, {((i,), ()): 1, ((), (i,)): 1}) for i in range(n)]
    total = TensorSquarePoly(table)
    for sigma in itertools.permutations(range(n)):
        prod = TensorSquarePoly(table, {unit: ctx.value(sigma)})
        for k in sigma:
            prod = tensor_mul(prod, xs[k], chi)
        total = total + prod
    mixed = {}
    for (u, v), c in total.terms.items():
        if u and v:
            sigma = u + v
            mixed[(sigma, len(u))] = c
    ident = tuple(range(n))
    c_left = total.terms.get((ident, ()), 0)
    c_right = total.terms.get(((), ident), 0)
    rep = Report("main", not mixed and c_left == 1 and c_right == 1)
    rep.data.update(mixed=mixed, total=total, primitive=primitive, c_1n=c_left, c_10=c_right)
    rep.data["c1"] = {i: total.terms.get((ident[:i], ident[i:]), 0) for i in range(n + 1)}
    if mixed:
        (sigma, i), c = min(mixed.items())
        rep.witness = f"c[{format_permutation(sigma)},{i}] = {format_scalar(CycScalar.rational(c) if not isinstance(c, CycScalar) else c)}"
    label = "" if primitive else " (zeta not primitive)"
    rep.lines.append(
        f"MAIN {fam} zeta={format_scalar(fam.zeta)}{label} mixed nonzero={len(mixed)} of {_factorial(n) * (n - 1)} {rep.status()}"
    )
    return rep


def _factorial(n: int) -> int:
    out = 1
    for k in range(2, n + 1):
        out *= k
    return out


# --- Gaussian coefficients ------------------------------------------------------


def partition_count(i: int, j: int, t: int) -> int:
    """Partitions of t into at most j parts, each part at most i."""
    if t < 0 or i < 0 or j < 0:
        return 0
    # table[a][s]: partitions of s into at most a parts bounded by the current max part
    ways = [[0] * (t + 1) for _ in range(j + 1)]
    for a in range(j + 1):
        ways[a][0] = 1
    for part in range(1, i + 1):
        for a in range(j, 0, -1):
            for s in range(t + 1):
                # use k copies of this part
                k = 1
                while k <= a and k * part <= s:
                    ways[a][s] += ways[a - k][s - k * part]
                    k += 1
    return ways[j][t]


def gaussian_polynomial(i: int, n: int) -> list[int]:
    """Coefficients of sum_t p(i, n-i, t) q^t."""
    if not 0 <= i <= n:
        raise ValueError(f"need 0 <= i <= n, got i={i}, n={n}")
    top = i * (n - i)
    return [partition_count(i, n - i, t) for t in range(top + 1)]


def _poly_mul_int(a: list, b: list) -> list:
    out = [0] * (len(a) + len(b) - 1)
    for x, u in enumerate(a):
        if u:
            for y, v in enumerate(b):
                out[x + y] += u * v
    return out


def sylvester_polynomial(i: int, n: int) -> list[int]:
    """(1-q^n)...(1-q^(n-i+1)) / (1-q^i)...(1-q) by exact long division."""
    if not 0 <= i <= n:
        raise ValueError(f"need 0 <= i <= n, got i={i}, n={n}")
    num = [1]
    for k in range(n - i + 1, n + 1):
        num = _poly_mul_int(num, [1] + [0] * (k - 1) + [-1])
    den = [1]
    for k in range(1, i + 1):
        den = _poly_mul_int(den, [1] + [0] * (k - 1) + [-1])
    # den has constant term 1, so divide from the low end
    quot = []
    rem = list(num)
    for d in range(len(num) - len(den) + 1):
        c = rem[d]
        quot.append(c)
        if c:
            for k, v in enumerate(den):
                rem[d + k] -= c * v
    if any(rem):
        raise ArithmeticError("Sylvester quotient is not a polynomial")
    while len(quot) > 1 and quot[-1] == 0:
        quot.pop()
    return quot


def gaussian_coefficient(i: int, n: int, zeta) -> CycScalar:
    """sum_t p(i, n-i, t) zeta^t."""
    if not isinstance(zeta, CycScalar):
        zeta = CycScalar.rational(zeta)
    total = CycScalar.rational(0, zeta.level)
    power = CycScalar.rational(1, zeta.level)
    for c in gaussian_polynomial(i, n):
        if c:
            total = total + power * c
        power = power * zeta
    return total


# --- Lie presentations ------------------------------------------------------------


def _angle(zeta: CycScalar) -> Fraction:
    t = zeta.root_angle()
    if t is None:
        raise ValueError(f"{zeta} is not a root of unity")
    return t


class LiePresentation:
    """Graded components with bases and declared bracket structure constants.

    ``brackets`` maps ``(zeta, args)`` to a value, where ``args`` is a tuple of
    basis names and the value maps basis names to coefficients.  Brackets
    that are not declared are derived through the symmetry law from a
    declared permutation of the same arguments; anything else is zero when
    ``undeclared_zero`` holds and an error otherwise.
    """

    def __init__(self, chi: Bicharacter, components: dict, brackets: dict, undeclared_zero: bool = False):
        self.chi = chi
        names, degrees = [], []
        self.components: dict = {}
        for g, basis in components.items():
            self.components[g] = list(basis)
            for b in basis:
                names.append(b)
                degrees.append(g)
        self.table = GeneratorTable(tuple(names), tuple(degrees))
        self.undeclared_zero = undeclared_zero
        self.declared: dict = {}
        self._by_multiset: dict = {}
        for (zeta, args), value in brackets.items():
            idx = tuple(self.table.index(a) for a in args)
            members = tuple(self.table.degrees[k] for k in idx)
            n = len(idx)
            if n < 2:
                raise LieValidationFailure(f"bracket {args} needs at least two arguments")
            _require_primitive(zeta, n)
            if not is_zeta_family(chi, zeta, members):
                raise NotAZetaFamily(f"degrees of {args} do not form a {format_scalar(zeta)}-family")
            target = sum_elements(chi.group, members)
            vec = {}
            for name, c in value.items():
                k = self.table.index(name)
                if self.table.degrees[k] != target:
                    raise DegreeMismatch(f"value of bracket {args} must have degree {target}")
                if c:
                    vec[k] = c
            key = (_angle(zeta), idx)
            self.declared[key] = (zeta, vec)
            self._by_multiset.setdefault((key[0], tuple(sorted(idx))), []).append(idx)
        self._families: dict = {}

    def basis_of(self, g: GroupElement) -> list[int]:
        return [k for k, d in enumerate(self.table.degrees) if d == g]

    def family(self, zeta: CycScalar, idx) -> ZetaFamily:
        key = (_angle(zeta), tuple(self.table.degrees[k] for k in idx))
        fam = self._families.get(key)
        if fam is None:
            fam = ZetaFamily(self.chi, zeta, key[1])
            self._families[key] = fam
        return fam

    def lookup(self, zeta: CycScalar, idx: tuple) -> dict:
        """Structure constants of the bracket on basis indices ``idx``."""
        t = _angle(zeta)
        members = [self.table.degrees[k] for k in idx]
        target = sum_elements(self.chi.group, members)
        if not self.basis_of(target):
            return {}
        hit = self.declared.get((t, idx))
        if hit is not None:
            return hit[1]
        for other in self._by_multiset.get((t, tuple(sorted(idx))), ()):
            sigma = _matching_permutation(idx, other)
            c = self.family(zeta, idx).context.value(sigma)
            return {k: v * c for k, v in self.declared[(t, other)][1].items()}
        if self.undeclared_zero:
            return {}
        raise MissingBracket(format_scalar(zeta), tuple(self.table.names[k] for k in idx))

    def bracket_vectors(self, zeta: CycScalar, vectors) -> dict:
        """Multilinear extension of ``lookup`` to vectors given as {index: coeff}."""
        out: dict = {}
        for combo in itertools.product(*(list(v.items()) for v in vectors)):
            idx = tuple(k for k, _ in combo)
            c = 1
            for _, v in combo:
                c = c * v
            for k, v in self.lookup(zeta, idx).items():
                _acc(out, k, c * v)
        return out

    def degrees_present(self) -> list[GroupElement]:
        return sorted({d for d in self.table.degrees})

    def admissible_orders(self) -> list[int]:
        level = lcm(2 * self.chi.level, 2)
        return [n for n in range(2, level + 1) if level % n == 0]

    def degree_families(self, n: int, zeta: CycScalar) -> list[tuple]:
        """Tuples of occupied degrees of length n forming a zeta-family."""
        degs = self.degrees_present()
        two_t = (2 * _angle(zeta)) % 1
        chi = self.chi
        ok = {
            (a, b): Fraction(chi.exponent(a, b) + chi.exponent(b, a), chi.level) % 1 == two_t
            for a in degs
            for b in degs
        }
        out: list = []

        def extend(prefix):
            if len(prefix) == n:
                out.append(tuple(prefix))
                return
            for d in degs:
                if all(ok[(p, d)] for p in prefix):
                    prefix.append(d)
                    extend(prefix)
                    prefix.pop()

        extend([])
        return out

    def zetas_of_order(self, n: int) -> list[CycScalar]:
        level = lcm(2 * self.chi.level, n)
        return [root_of_unity(level, k * (level // n)) for k in range(n) if _gcd(k, n) == 1]


def _gcd(a: int, b: int) -> int:
    while b:
        a, b = b, a % b
    return a


def _matching_permutation(idx: tuple, other: tuple) -> tuple:
    """Some sigma with other[k] == idx[sigma[k]]."""
    used = [False] * len(idx)
    sigma = []
    for v in other:
        for k, u in enumerate(idx):
            if not used[k] and u == v:
                used[k] = True
                sigma.append(k)
                break
    return tuple(sigma)


def lie_validate(P: LiePresentation, max_order: int | None = None) -> Report:
    """Symmetry and both Jacobi identities on basis tuples."""
    chi = P.chi
    neg1 = minus_one(chi)
    rep = Report("lie-validate", True)
    violations: list[str] = []
    counts = {"symmetry": 0, "jacobi1": 0, "jacobi2": 0}

    # symmetry, on every declared bracket
    for (t, idx), (zeta, vec) in sorted(P.declared.items(), key=lambda kv: (kv[0][0], kv[0][1])):
        fam = P.family(zeta, idx)
        for sigma in itertools.permutations(range(len(idx))):
            counts["symmetry"] += 1
            other = P.lookup(zeta, act(sigma, idx))
            c = fam.context.value(sigma)
            rhs = {k: v * c for k, v in other.items()}
            if _clean_vec(vec) != _clean_vec(rhs):
                violations.append(
                    f"symmetry [{_names(P, idx)}] sigma={format_permutation(sigma)}"
                )
                break

    orders = [n for n in P.admissible_orders() if max_order is None or n <= max_order]
    for n in orders:
        for zeta in P.zetas_of_order(n):
            # first Jacobi identity on (n+1)-tuples
            for degs in P.degree_families(n + 1, zeta):
                for idx in itertools.product(*(P.basis_of(d) for d in degs)):
                    counts["jacobi1"] += 1
                    total: dict = {}
                    fam = P.family(zeta, idx)
                    for i in range(n + 1):
                        rest = idx[:i] + idx[i + 1 :]
                        inner = P.lookup(zeta, rest)
                        if not inner:
                            continue
                        outer = P.bracket_vectors(neg1, [{idx[i]: 1}, inner])
                        c = fam.context.value(cycle_to_front(i, n + 1))
                        for k, v in outer.items():
                            _acc(total, k, v * c)
                    if total:
                        violations.append(f"jacobi1 zeta={format_scalar(zeta)} [{_names(P, idx)}]")
            # second Jacobi identity
            for degs in P.degree_families(n, zeta):
                for h in P.degrees_present():
                    if not all(is_zeta_family(chi, neg1, (h, g)) for g in degs):
                        continue
                    for idx in itertools.product(*(P.basis_of(d) for d in degs)):
                        for x in P.basis_of(h):
                            counts["jacobi2"] += 1
                            lhs = P.bracket_vectors(neg1, [{x: 1}, P.lookup(zeta, idx)])
                            rhs: dict = {}
                            coeff = CycScalar.rational(1)
                            for i in range(n):
                                inner = P.lookup(neg1, (x, idx[i]))
                                if inner:
                                    vecs = [{k: 1} for k in idx]
                                    vecs[i] = inner
                                    for k, v in P.bracket_vectors(zeta, vecs).items():
                                        _acc(rhs, k, v * coeff)
                                coeff = coeff * chi(h, degs[i])
                            if _clean_vec(lhs) != _clean_vec(rhs):
                                violations.append(
                                    f"jacobi2 zeta={format_scalar(zeta)} x={P.table.names[x]} [{_names(P, idx)}]"
                                )
    rep.passed = not violations
    rep.data.update(counts=counts, violations=violations)
    for kind in ("symmetry", "jacobi1", "jacobi2"):
        bad = [v for v in violations if v.startswith(kind)]
        rep.lines.append(f"LIE {kind} instances={counts[kind]} violations={len(bad)} {'FAIL' if bad else 'PASS'}")
    rep.lines.extend(f"VIOLATION {v}" for v in violations)
    if violations:
        rep.witness = violations[0]
    return rep


def _clean_vec(v: dict) -> dict:
    return {k: c for k, c in v.items() if c}


def _names(P: LiePresentation, idx) -> str:
    return ",".join(P.table.names[k] for k in idx)


# --- derivations ------------------------------------------------------------------


def compose_derivations(maps) -> dict:
    """Matrix of maps[0] o maps[1] o ... as word -> {word: coeff}."""
    result = None
    for d in reversed(maps):
        m = d.matrix
        if result is None:
            result = {a: dict(row) for a, row in m.items()}
            continue
        nxt: dict = {}
        for a, row in result.items():
            out: dict = {}
            for b, c in row.items():
                for w, e in m.get(b, {}).items():
                    _acc(out, w, c * e)
            if out:
                nxt[a] = out
        result = nxt
    return result or {}


def derivation_bracket(ds, fam: ZetaFamily) -> GradedDerivation:
    """sum over sigma of rho(sigma) d_sigma(1) o ... o d_sigma(n)."""
    ctx = fam.context
    total: dict = {}
    for sigma in itertools.permutations(range(len(ds))):
        c = ctx.value(sigma)
        for a, row in compose_derivations([ds[k] for k in sigma]).items():
            tgt = total.setdefault(a, {})
            for b, v in row.items():
                _acc(tgt, b, c * v)
    degree = sum_elements(fam.chi.group, fam.members)
    return GradedDerivation(degree, ds[0].algebra, {a: r for a, r in total.items() if r})


def span_contains(basis_vectors, vector: dict) -> bool:
    ech = Echelon()
    for v in basis_vectors:
        ech.add(v)
    return ech.contains(vector)
