"""Braided Hopf structures, axiom checks, primitives and biproducts."""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field

from .algebra import (
    BraidingCache,
    GradedPoly,
    PresentedAlgebra,
    TensorSquarePoly,
    _acc,
    quotient_present,
    tensor_mul,
    word_key,
)
from .cyclotomic import reciprocal
from .errors import AntipodeNotFound, InfiniteDimensional, LieValidationFailure
from .grading import Bicharacter
from .lie import LiePresentation, Report, bracket_eval, lie_validate
from .linalg import nullspace, solve


class HopfInstance:
    """A presented algebra with Delta, epsilon and S given on generators.

    Delta extends multiplicatively into the braided tensor square, epsilon
    multiplicatively into the scalars, and S through the braided
    anti-multiplicative rule S(x w) = chi(deg x, deg w) S(w) S(x).
    """

    def __init__(self, algebra: PresentedAlgebra, chi: Bicharacter, coproduct: dict, counit: dict, antipode: dict, name: str = ""):
        self.algebra = algebra
        self.chi = chi
        self.table = algebra.table
        self.name = name
        n = len(self.table.names)
        self.gen_coproduct = [algebra.normal_form_tensor(coproduct[i]) for i in range(n)]
        self.gen_counit = [counit[i] for i in range(n)]
        self.gen_antipode = [algebra.normal_form(antipode[i]) for i in range(n)]
        self.braiding = BraidingCache(self.table, chi)
        self._delta: dict = {(): TensorSquarePoly.unit(self.table)}
        self._s: dict = {(): {(): 1}}

    @classmethod
    def primitive(cls, algebra: PresentedAlgebra, chi: Bicharacter, name: str = "") -> HopfInstance:
        table = algebra.table
        n = len(table.names)
        cop = {i: TensorSquarePoly(table, {((i,), ()): 1, ((), (i,)): 1}) for i in range(n)}
        ant = {i: GradedPoly(table, {(i,): -1}) for i in range(n)}
        return cls(algebra, chi, cop, {i: 0 for i in range(n)}, ant, name)

    # -- structure maps on words --------------------------------------------

    def delta_word(self, w: tuple) -> TensorSquarePoly:
        hit = self._delta.get(w)
        if hit is None:
            self.algebra._check_bound(w)
            prod = tensor_mul(self.delta_word(w[:-1]), self.gen_coproduct[w[-1]], self.chi)
            hit = self.algebra.normal_form_tensor(prod)
            self._delta[w] = hit
        return hit

    def antipode_word(self, w: tuple) -> dict:
        hit = self._s.get(w)
        if hit is None:
            self.algebra._check_bound(w)
            head, rest = w[:1], w[1:]
            c = self.braiding(head, rest)
            s_rest = self.antipode_word(rest)
            s_head = self.gen_antipode[w[0]].terms
            out: dict = {}
            for u, a in s_rest.items():
                for v, b in s_head.items():
                    for t, d in self.algebra.nf_word(u + v).items():
                        _acc(out, t, a * b * d * c)
            hit = out
            self._s[w] = hit
        return hit

    def counit_word(self, w: tuple):
        c = 1
        for i in w:
            c = c * self.gen_counit[i]
            if not c:
                return 0
        return c


def comultiply(h: GradedPoly, H: HopfInstance) -> TensorSquarePoly:
    out: dict = {}
    for w, c in H.algebra.normal_form(h).terms.items():
        for k, v in H.delta_word(w).terms.items():
            _acc(out, k, c * v)
    return TensorSquarePoly(H.table, out)


def antipode(h: GradedPoly, H: HopfInstance) -> GradedPoly:
    out: dict = {}
    for w, c in H.algebra.normal_form(h).terms.items():
        for k, v in H.antipode_word(w).items():
            _acc(out, k, c * v)
    return GradedPoly(H.table, out)


def counit(h: GradedPoly, H: HopfInstance):
    total = 0
    for w, c in H.algebra.normal_form(h).terms.items():
        total = total + c * H.counit_word(w)
    return total


# --- a common view for axiom checks ----------------------------------------------


class _Structure:
    """Finite basis view shared by braided instances and biproducts."""

    braided = True

    def keys(self) -> list:
        raise NotImplementedError

    def unit(self):
        raise NotImplementedError

    def mul(self, a, b) -> dict:
        raise NotImplementedError

    def comul(self, a) -> dict:
        raise NotImplementedError

    def counit(self, a):
        raise NotImplementedError

    def antipode(self, a) -> dict:
        raise NotImplementedError

    def braid(self, a, b):
        return 1

    def show(self, a) -> str:
        return str(a)

    def mul_vec(self, u: dict, v: dict) -> dict:
        out: dict = {}
        for a, x in u.items():
            for b, y in v.items():
                for k, z in self.mul(a, b).items():
                    _acc(out, k, x * y * z)
        return out


class _BraidedView(_Structure):
    def __init__(self, H: HopfInstance, words: list, pair_limit: int | None):
        self.H = H
        self.words = words
        self.pair_limit = pair_limit

    def keys(self):
        return self.words

    def unit(self):
        return ()

    def mul(self, a, b):
        return self.H.algebra.nf_word(a + b)

    def comul(self, a):
        return self.H.delta_word(a).terms

    def counit(self, a):
        return self.H.counit_word(a)

    def antipode(self, a):
        return self.H.antipode_word(a)

    def braid(self, a, b):
        return self.H.braiding(a, b)

    def pair_ok(self, a, b) -> bool:
        return self.pair_limit is None or len(a) + len(b) <= self.pair_limit

    def show(self, a):
        from .render import render_word

        return render_word(self.H.table, a)


def _tensor_mul_vec(S: _Structure, p: dict, q: dict) -> dict:
    out: dict = {}
    for (u1, v1), a in p.items():
        for (u2, v2), b in q.items():
            c = a * b
            if S.braided:
                c = c * S.braid(v1, u2)
            left = S.mul(u1, u2)
            if not left:
                continue
            right = S.mul(v1, v2)
            for l, x in left.items():
                for r, y in right.items():
                    _acc(out, (l, r), c * x * y)
    return out


def _vec_eq(a: dict, b: dict) -> bool:
    return {k: v for k, v in a.items() if v} == {k: v for k, v in b.items() if v}


def check_axioms(S: _Structure, pair_ok=None) -> Report:
    """The five axiom groups plus commutativity flags, exactly on the basis view."""
    keys = S.keys()
    one = S.unit()
    rep = Report("hopf-axioms", True)
    pair_ok = pair_ok or (lambda a, b: True)
    results: dict = {}

    def fail(name, witness):
        if name not in results:
            results[name] = witness

    for a in keys:
        d = S.comul(a)
        left: dict = {}
        right: dict = {}
        for (u, v), c in d.items():
            for (p, q), e in S.comul(u).items():
                _acc(left, (p, q, v), c * e)
            for (p, q), e in S.comul(v).items():
                _acc(right, (u, p, q), c * e)
        if not _vec_eq(left, right):
            fail("coassociativity", S.show(a))
        eps_l: dict = {}
        eps_r: dict = {}
        for (u, v), c in d.items():
            cu = S.counit(u)
            if cu:
                _acc(eps_l, v, c * cu)
            cv = S.counit(v)
            if cv:
                _acc(eps_r, u, c * cv)
        if not (_vec_eq(eps_l, {a: 1}) and _vec_eq(eps_r, {a: 1})):
            fail("counit", S.show(a))
        target = {one: S.counit(a)} if S.counit(a) else {}
        s_l: dict = {}
        s_r: dict = {}
        for (u, v), c in d.items():
            for k, e in S.mul_vec(S.antipode(u), {v: 1}).items():
                _acc(s_l, k, c * e)
            for k, e in S.mul_vec({u: 1}, S.antipode(v)).items():
                _acc(s_r, k, c * e)
        if not (_vec_eq(s_l, target) and _vec_eq(s_r, target)):
            fail("antipode", S.show(a))

    if not _vec_eq(S.comul(one), {(one, one): 1}):
        fail("comultiplication-multiplicative", "Delta(1)")
    if S.counit(one) != 1:
        fail("counit-multiplicative", "epsilon(1)")
    commutative = True
    cocommutative_braided = True
    cocommutative_flip = True
    for a in keys:
        d = S.comul(a)
        flipped: dict = {}
        braided_flip: dict = {}
        for (u, v), c in d.items():
            _acc(flipped, (v, u), c)
            _acc(braided_flip, (v, u), c * S.braid(u, v) if S.braided else c)
        if not _vec_eq(flipped, d):
            cocommutative_flip = False
        if not _vec_eq(braided_flip, d):
            cocommutative_braided = False
        for b in keys:
            if not pair_ok(a, b):
                continue
            ab = S.mul(a, b)
            if commutative and not _vec_eq(ab, S.mul(b, a)):
                commutative = False
            lhs: dict = {}
            for k, c in ab.items():
                for t, e in S.comul(k).items():
                    _acc(lhs, t, c * e)
            if not _vec_eq(lhs, _tensor_mul_vec(S, S.comul(a), S.comul(b))):
                fail("comultiplication-multiplicative", f"{S.show(a)} * {S.show(b)}")
            eps = 0
            for k, c in ab.items():
                eps = eps + c * S.counit(k)
            if eps != S.counit(a) * S.counit(b):
                fail("counit-multiplicative", f"{S.show(a)} * {S.show(b)}")

    for name in ("coassociativity", "counit", "antipode", "comultiplication-multiplicative", "counit-multiplicative"):
        if name in results:
            rep.passed = False
            rep.witness = rep.witness or f"{name} at {results[name]}"
            rep.lines.append(f"AXIOM {name} FAIL {results[name]}")
        else:
            rep.lines.append(f"AXIOM {name} PASS")
    rep.data.update(
        failures=results,
        commutative=commutative,
        cocommutative_braided=cocommutative_braided,
        cocommutative=cocommutative_flip,
        dimension=len(keys),
    )
    rep.lines.append(f"FLAG commutative {str(commutative).lower()}")
    if S.braided:
        rep.lines.append(f"FLAG cocommutative-braided {str(cocommutative_braided).lower()}")
    else:
        rep.lines.append(f"FLAG cocommutative {str(cocommutative_flip).lower()}")
    return rep


def hopf_axioms_check(H: HopfInstance, truncate: int | None = None) -> Report:
    """Exact axiom check on the finite basis, or on words up to ``truncate``."""
    basis = H.algebra.finite_basis()
    if basis is not None:
        view = _BraidedView(H, basis, None)
        rep = check_axioms(view)
        rep.data["truncated"] = False
        rep.lines.insert(0, f"BASIS dimension {len(basis)}")
        return rep
    if truncate is None:
        raise InfiniteDimensional("algebra has no finite basis below the degree bound; pass a truncation degree")
    bound = H.algebra.bound
    if bound is not None and truncate > bound:
        raise ValueError(f"truncation degree {truncate} exceeds the degree bound {bound}")
    levels = H.algebra.basis_levels(truncate)
    words = sorted((w for lvl in levels for w in lvl), key=word_key)
    view = _BraidedView(H, words, truncate)
    rep = check_axioms(view, view.pair_ok)
    rep.data["truncated"] = True
    rep.lines.insert(0, f"BASIS words of length <= {truncate}: {len(words)}")
    rep.lines.append(
        f"CAVEAT truncated to words of length <= {truncate}; products checked only when the total length is <= {truncate}"
    )
    return rep


# --- primitives ---------------------------------------------------------------------


@dataclass
class PrimitiveSpace:
    components: dict = field(default_factory=dict)

    def dimension(self) -> int:
        return sum(len(v) for v in self.components.values())

    def degrees(self) -> list:
        return sorted(g for g, v in self.components.items() if v)


def primitives_solve(H: HopfInstance, truncate: int | None = None) -> PrimitiveSpace:
    """Kernel of v -> Delta(v) - v (x) 1 - 1 (x) v, one homogeneous component at a time."""
    basis = H.algebra.finite_basis()
    if basis is None:
        if truncate is None:
            raise InfiniteDimensional("primitives need a finite basis or a truncation degree")
        levels = H.algebra.basis_levels(truncate)
        basis = sorted((w for lvl in levels for w in lvl), key=word_key)
    by_degree: dict = {}
    for w in basis:
        by_degree.setdefault(H.table.degree(w), []).append(w)
    space = PrimitiveSpace()
    for g in sorted(by_degree):
        words = by_degree[g]
        rows: dict = {}
        for w in words:
            d = dict(H.delta_word(w).terms)
            _acc(d, (w, ()), -1)
            _acc(d, ((), w), -1)
            for k, c in d.items():
                rows.setdefault(k, {})[w] = c
        space.components[g] = nullspace(list(rows.values()), words)
    return space


def is_primitive(H: HopfInstance, p: GradedPoly) -> bool:
    d = comultiply(p, H)
    expected = TensorSquarePoly(H.table, {(w, ()): c for w, c in p.terms.items()}) + TensorSquarePoly(
        H.table, {((), w): c for w, c in p.terms.items()}
    )
    return d == H.algebra.normal_form_tensor(expected)


# --- enveloping algebras --------------------------------------------------------------


def enveloping_relations(P: LiePresentation) -> list[GradedPoly]:
    """Bracket relations of U(P), one per multiset of basis arguments."""
    table = P.table
    gens = [GradedPoly.gen(table, i) for i in range(len(table.names))]
    seen: set = set()
    rels = []
    candidates = []
    for (t, idx), (zeta, _) in sorted(P.declared.items()):
        candidates.append((zeta, idx))
    if P.undeclared_zero:
        for n in P.admissible_orders():
            for zeta in P.zetas_of_order(n):
                for degs in P.degree_families(n, zeta):
                    for idx in itertools.product(*(P.basis_of(d) for d in degs)):
                        candidates.append((zeta, idx))
    for zeta, idx in candidates:
        key = (zeta.root_angle(), tuple(sorted(idx)))
        if key in seen:
            continue
        seen.add(key)
        fam = P.family(zeta, idx)
        lhs = bracket_eval([gens[k] for k in idx], fam)
        value = GradedPoly(table, {(k,): c for k, c in P.lookup(zeta, idx).items()})
        rel = lhs - value
        if rel:
            rels.append(rel)
    return rels


def enveloping_build(P: LiePresentation, bound: int, validate: str = "strict") -> HopfInstance:
    """U(P) = T(P)/I with primitive generators."""
    if validate not in ("strict", "warn", "skip"):
        raise ValueError(f"validate must be strict, warn or skip, not {validate!r}")
    warnings: list[str] = []
    if validate != "skip":
        rep = lie_validate(P)
        if not rep.passed:
            if validate == "strict":
                raise LieValidationFailure(rep.witness or "Lie identities fail")
            warnings = rep.lines
    rels = enveloping_relations(P)
    longest = max((r.max_length() for r in rels), default=0)
    if longest > bound:
        raise ValueError(f"bracket relations reach length {longest}, above the degree bound {bound}")
    A = quotient_present(P.table, rels, bound)
    H = HopfInstance.primitive(A, P.chi, "U(P)")
    H.warnings = warnings
    return H


# --- biproducts -------------------------------------------------------------------------


class BiproductInstance(_Structure):
    """H (x) kG with (x (x) g)(y (x) h) = chi(g, deg y) xy (x) (g + h)."""

    braided = False

    def __init__(self, H: HopfInstance, basis: list, elements: list):
        self.H = H
        self.chi = H.chi
        self.group = H.chi.group
        self.h_basis = basis
        self.elements = elements
        self._keys = [(w, g) for w in basis for g in elements]
        self._mul: dict = {}
        self._comul: dict = {}
        self._antipode: dict | None = None

    def keys(self):
        return self._keys

    def unit(self):
        return ((), self.group.zero())

    def mul(self, a, b):
        hit = self._mul.get((a, b))
        if hit is None:
            (x, g), (y, h) = a, b
            c = self.chi(g, self.H.table.degree(y)) if y else 1
            gh = g + h
            hit = {(w, gh): c * v for w, v in self.H.algebra.nf_word(x + y).items()}
            self._mul[(a, b)] = hit
        return hit

    def comul(self, a):
        hit = self._comul.get(a)
        if hit is None:
            x, g = a
            hit = {}
            for (y, z), c in self.H.delta_word(x).terms.items():
                b = self.H.table.degree(z)
                _acc(hit, ((y, b + g), (z, g)), c)
            self._comul[a] = hit
        return hit

    def counit(self, a):
        return self.H.counit_word(a[0])

    def antipode(self, a):
        if self._antipode is None:
            self._antipode = self._solve_antipode()
        return self._antipode.get(a, {})

    def _solve_antipode(self) -> dict:
        keys = self._keys
        one = self.unit()
        unknowns = [(a, k) for a in keys for k in keys]
        equations = []
        for a in keys:
            eps = self.counit(a)
            left: dict = {}
            right: dict = {}
            for (u, v), c in self.comul(a).items():
                for k in keys:
                    for out, e in self.mul(k, v).items():
                        _acc(left.setdefault(out, {}), (u, k), c * e)
                    for out, e in self.mul(u, k).items():
                        _acc(right.setdefault(out, {}), (v, k), c * e)
            for side in (left, right):
                for out in set(side) | {one}:
                    rhs = eps if out == one else 0
                    equations.append((side.get(out, {}), rhs))
        sol, unique = solve(equations, unknowns)
        if sol is None or not unique:
            raise AntipodeNotFound("the convolution inverse of the identity is not unique or does not exist")
        table: dict = {}
        for (a, k), c in sol.items():
            table.setdefault(a, {})[k] = c
        return table

    def show(self, a):
        from .render import render_biproduct_key

        return render_biproduct_key(self, a)

    def product(self, *keys) -> dict:
        vec = {self.unit(): 1}
        for k in keys:
            vec = self.mul_vec(vec, {k: 1})
        return vec


def biproduct_build(H: HopfInstance) -> BiproductInstance:
    basis = H.algebra.finite_basis()
    if basis is None:
        raise InfiniteDimensional("the biproduct needs a finite-dimensional Hopf algebra")
    elements = H.chi.group.elements()
    B = BiproductInstance(H, basis, elements)
    B.antipode(B.unit())
    return B


def biproduct_check(B: BiproductInstance) -> Report:
    rep = check_axioms(B)
    rep.lines.insert(0, f"BASIS dimension {len(B.keys())}")
    return rep


def biproduct_relations(B: BiproductInstance) -> list[str]:
    """Relations among the generators x (x) 1 and 1 (x) t read off the product table."""
    from .render import render_scalar_factor

    H = B.H
    zero = B.group.zero()
    lines = []
    gens = [((i,), zero) for i in range(len(H.table.names))]
    tgens = [((), t) for t in B.group.generators()]
    names = [n for n in H.table.names]
    tnames = [f"t{k + 1}" if len(tgens) > 1 else "t" for k in range(len(tgens))]
    for t, tn in zip(tgens, tnames):
        m = 1
        vec = {t: 1}
        while not _vec_eq(vec, {B.unit(): 1}):
            vec = B.mul_vec(vec, {t: 1})
            m += 1
        lines.append(f"RELATION {tn}^{m} = 1")
    for x, xn in zip(gens, names):
        k = 1
        vec = {x: 1}
        while vec and k <= len(B.keys()):
            vec = B.mul_vec(vec, {x: 1})
            k += 1
        if not vec:
            lines.append(f"RELATION {xn}^{k} = 0")
    for t, tn in zip(tgens, tnames):
        for x, xn in zip(gens, names):
            tx = B.mul(t, x)
            xt = B.mul(x, t)
            ratio = _proportional(tx, xt)
            if ratio is not None:
                lines.append(f"RELATION {tn}*{xn} = {render_scalar_factor(ratio)}{xn}*{tn}")
    return lines


def _proportional(a: dict, b: dict):
    if set(a) != set(b) or not a:
        return None
    k = next(iter(a))
    r = a[k] * reciprocal(b[k])
    return r if all(a[j] == b[j] * r for j in a) else None


def group_likes(B: BiproductInstance) -> list:
    return [k for k in B.keys() if _vec_eq(B.comul(k), {(k, k): 1})]


def skew_primitive_targets(B: BiproductInstance, key) -> bool:
    """Delta(k) = k (x) 1 + g (x) k for some group-like g."""
    d = {kk: v for kk, v in B.comul(key).items() if v}
    one = B.unit()
    if d.get((key, one)) != 1:
        return False
    rest = {kk: v for kk, v in d.items() if kk != (key, one)}
    if len(rest) != 1:
        return False
    ((g, k), v), = rest.items()
    return k == key and v == 1 and g in group_likes(B)

