"""Graded noncommutative polynomials, presented quotients and derivations.

Words are tuples of generator indices.  They are ordered by length first and
then lexicographically by index; every rewrite rule replaces a word by a
combination of strictly smaller words.
"""

from __future__ import annotations

import heapq
from dataclasses import dataclass, field

from .cyclotomic import reciprocal, root_of_unity
from .errors import (
    DegreeOverflow,
    IncompleteRewriteSystem,
    InfiniteDimensional,
    InhomogeneousRelation,
    InhomogeneousWord,
    OrientationFailure,
    TableMismatch,
)
from .grading import AbelianGroup, Bicharacter, GroupElement
from .linalg import nullspace


def word_key(w: tuple) -> tuple:
    return (len(w), w)


@dataclass(frozen=True)
class GeneratorTable:
    names: tuple[str, ...]
    degrees: tuple[GroupElement, ...]
    _cache: dict = field(default_factory=dict, compare=False, repr=False, hash=False)

    def __post_init__(self):
        object.__setattr__(self, "names", tuple(self.names))
        object.__setattr__(self, "degrees", tuple(self.degrees))
        if len(set(self.names)) != len(self.names):
            raise ValueError(f"generator names must be unique: {self.names}")
        if len(self.names) != len(self.degrees):
            raise ValueError("one degree per generator is required")
        groups = {d.group for d in self.degrees}
        if len(groups) > 1:
            raise ValueError("generator degrees must lie in one group")

    @property
    def group(self) -> AbelianGroup:
        return self.degrees[0].group

    def index(self, name: str) -> int:
        try:
            return self.names.index(name)
        except ValueError:
            raise KeyError(f"unknown generator {name!r}") from None

    def degree(self, word: tuple) -> GroupElement:
        d = self._cache.get(word)
        if d is None:
            if not word:
                d = self.group.zero() if self.degrees else None
            else:
                d = self.degrees[word[0]]
                for i in word[1:]:
                    d = d + self.degrees[i]
            self._cache[word] = d
        return d


def _check_tables(a: GeneratorTable, b: GeneratorTable) -> None:
    if a is not b and a != b:
        raise TableMismatch("operands use different generator tables")


def _acc(terms: dict, key, c) -> None:
    v = terms.get(key)
    v = c if v is None else v + c
    if v:
        terms[key] = v
    else:
        terms.pop(key, None)


class GradedPoly:
    """A noncommutative polynomial: dict word -> nonzero coefficient."""

    __slots__ = ("table", "terms")

    def __init__(self, table: GeneratorTable, terms: dict | None = None):
        self.table = table
        self.terms = {w: c for w, c in (terms or {}).items() if c}

    @classmethod
    def unit(cls, table: GeneratorTable) -> GradedPoly:
        return cls(table, {(): 1})

    @classmethod
    def word(cls, table: GeneratorTable, w, c=1) -> GradedPoly:
        return cls(table, {tuple(w): c})

    @classmethod
    def gen(cls, table: GeneratorTable, name) -> GradedPoly:
        i = table.index(name) if isinstance(name, str) else int(name)
        return cls(table, {(i,): 1})

    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self) -> bool:
        return bool(self.terms)

    def __eq__(self, other) -> bool:
        if isinstance(other, GradedPoly):
            return self.terms == other.terms
        if other == 0:
            return not self.terms
        return NotImplemented

    __hash__ = None

    def __add__(self, other: GradedPoly) -> GradedPoly:
        _check_tables(self.table, other.table)
        terms = dict(self.terms)
        for w, c in other.terms.items():
            _acc(terms, w, c)
        return GradedPoly(self.table, terms)

    def __neg__(self) -> GradedPoly:
        return GradedPoly(self.table, {w: -c for w, c in self.terms.items()})

    def __sub__(self, other: GradedPoly) -> GradedPoly:
        return self + (-other)

    def scale(self, c) -> GradedPoly:
        if not c:
            return GradedPoly(self.table)
        return GradedPoly(self.table, {w: v * c for w, v in self.terms.items()})

    def __mul__(self, other):
        if isinstance(other, GradedPoly):
            return poly_mul(self, other)
        return self.scale(other)

    def __rmul__(self, c):
        return self.scale(c)

    def degrees(self) -> set:
        return {self.table.degree(w) for w in self.terms}

    def is_homogeneous(self) -> bool:
        return len(self.degrees()) <= 1

    def degree(self) -> GroupElement | None:
        degs = self.degrees()
        if len(degs) > 1:
            raise InhomogeneousWord("polynomial is not G-homogeneous")
        return next(iter(degs)) if degs else None

    def max_length(self) -> int:
        return max((len(w) for w in self.terms), default=0)

    def leading_word(self) -> tuple:
        return max(self.terms, key=word_key)

    def sorted_terms(self) -> list:
        return sorted(self.terms.items(), key=lambda t: word_key(t[0]))

    def __repr__(self) -> str:
        from .render import render_poly

        return f"GradedPoly({render_poly(self)!r})"


def poly_mul(p: GradedPoly, q: GradedPoly) -> GradedPoly:
    """Concatenation product, extended bilinearly."""
    _check_tables(p.table, q.table)
    terms: dict = {}
    for u, a in p.terms.items():
        for v, b in q.terms.items():
            _acc(terms, u + v, a * b)
    return GradedPoly(p.table, terms)


class TensorSquarePoly:
    """An element of A (x) A: dict (left word, right word) -> coefficient."""

    __slots__ = ("table", "terms")

    def __init__(self, table: GeneratorTable, terms: dict | None = None):
        self.table = table
        self.terms = {k: c for k, c in (terms or {}).items() if c}

    @classmethod
    def pure(cls, p: GradedPoly, q: GradedPoly) -> TensorSquarePoly:
        _check_tables(p.table, q.table)
        terms: dict = {}
        for u, a in p.terms.items():
            for v, b in q.terms.items():
                _acc(terms, (u, v), a * b)
        return cls(p.table, terms)

    @classmethod
    def unit(cls, table: GeneratorTable) -> TensorSquarePoly:
        return cls(table, {((), ()): 1})

    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self) -> bool:
        return bool(self.terms)

    def __eq__(self, other) -> bool:
        if isinstance(other, TensorSquarePoly):
            return self.terms == other.terms
        if other == 0:
            return not self.terms
        return NotImplemented

    __hash__ = None

    def __add__(self, other: TensorSquarePoly) -> TensorSquarePoly:
        _check_tables(self.table, other.table)
        terms = dict(self.terms)
        for k, c in other.terms.items():
            _acc(terms, k, c)
        return TensorSquarePoly(self.table, terms)

    def __neg__(self) -> TensorSquarePoly:
        return TensorSquarePoly(self.table, {k: -c for k, c in self.terms.items()})

    def __sub__(self, other: TensorSquarePoly) -> TensorSquarePoly:
        return self + (-other)

    def scale(self, c) -> TensorSquarePoly:
        if not c:
            return TensorSquarePoly(self.table)
        return TensorSquarePoly(self.table, {k: v * c for k, v in self.terms.items()})

    def __rmul__(self, c):
        return self.scale(c)

    def sorted_terms(self) -> list:
        return sorted(self.terms.items(), key=lambda t: (word_key(t[0][0]), word_key(t[0][1])))

    def __repr__(self) -> str:
        from .render import render_tensor

        return f"TensorSquarePoly({render_tensor(self)!r})"


class BraidingCache:
    """Memoized chi(deg u, deg v) scalars for words of one table."""

    def __init__(self, table: GeneratorTable, chi: Bicharacter):
        self.table = table
        self.chi = chi
        self._values: dict = {}
        self._roots: dict = {}

    def exponent(self, u: tuple, v: tuple) -> int:
        if not u or not v:
            return 0
        key = (u, v)
        e = self._values.get(key)
        if e is None:
            e = self.chi.exponent(self.table.degree(u), self.table.degree(v))
            self._values[key] = e
        return e

    def root(self, e: int):
        r = self._roots.get(e)
        if r is None:
            amb = self.chi.ambient_level
            r = root_of_unity(amb, e * (amb // self.chi.level))
            self._roots[e] = r
        return r

    def __call__(self, u: tuple, v: tuple):
        return self.root(self.exponent(u, v))


_BRAIDINGS: dict = {}


def braiding_for(table: GeneratorTable, chi: Bicharacter) -> BraidingCache:
    key = (id(table), id(chi))
    b = _BRAIDINGS.get(key)
    if b is None or b.table is not table or b.chi is not chi:
        b = BraidingCache(table, chi)
        _BRAIDINGS[key] = b
    return b


def tensor_mul(a: TensorSquarePoly, b: TensorSquarePoly, chi: Bicharacter) -> TensorSquarePoly:
    """(u1 (x) v1)(u2 (x) v2) = chi(deg v1, deg u2) u1u2 (x) v1v2."""
    _check_tables(a.table, b.table)
    br = braiding_for(a.table, chi)
    terms: dict = {}
    for (u1, v1), c1 in a.terms.items():
        for (u2, v2), c2 in b.terms.items():
            c = c1 * c2
            e = br.exponent(v1, u2)
            if e:
                c = c * br.root(e)
            _acc(terms, (u1 + u2, v1 + v2), c)
    return TensorSquarePoly(a.table, terms)


# --- presented algebras -----------------------------------------------------


class PresentedAlgebra:
    """T(V)/I presented by oriented rewrite rules ``lead -> tail``.

    Rules are complete for every word of length at most ``bound``;
    ``stabilized`` records that every overlap of the final rules fits inside
    the bound, in which case the rules are confluent at every length.
    """

    def __init__(self, table: GeneratorTable, rules: dict, bound: int | None, stabilized: bool, relations=()):
        self.table = table
        self.rules = rules
        self.bound = bound
        self.stabilized = stabilized
        self.relations = tuple(relations)
        self._lead_lengths = sorted({len(l) for l in rules})
        self._nf: dict = {}
        self._basis_cache: dict = {}

    @classmethod
    def free(cls, table: GeneratorTable) -> PresentedAlgebra:
        return cls(table, {}, None, True)

    def is_free(self) -> bool:
        return not self.rules

    def find_lead(self, w: tuple):
        rules = self.rules
        n = len(w)
        for i in range(n):
            for ell in self._lead_lengths:
                if i + ell > n:
                    break
                sub = w[i : i + ell]
                if sub in rules:
                    return i, sub
        return None

    def is_irreducible(self, w: tuple) -> bool:
        return self.find_lead(w) is None

    def _check_bound(self, w: tuple) -> None:
        # A confluent rule set reduces words of any length correctly.
        if self.bound is not None and not self.stabilized and len(w) > self.bound:
            raise DegreeOverflow(w, self.bound)

    def nf_word(self, w: tuple) -> dict:
        cached = self._nf.get(w)
        if cached is not None:
            return cached
        self._check_bound(w)
        out: dict = {}
        coeffs = {w: 1}
        heap = [(-len(w), tuple(-i for i in w), w)]
        while heap:
            _, _, u = heapq.heappop(heap)
            c = coeffs.pop(u, None)
            if not c:
                continue
            hit = self._nf.get(u)
            if hit is not None and u != w:
                for v, d in hit.items():
                    _acc(out, v, c * d)
                continue
            found = self.find_lead(u)
            if found is None:
                _acc(out, u, c)
                continue
            i, lead = found
            pre, post = u[:i], u[i + len(lead) :]
            for t, d in self.rules[lead].items():
                v = pre + t + post
                if v in coeffs:
                    _acc(coeffs, v, c * d)
                    if v not in coeffs:
                        continue
                else:
                    coeffs[v] = c * d
                    heapq.heappush(heap, (-len(v), tuple(-k for k in v), v))
        self._nf[w] = out
        return out

    def normal_form_terms(self, terms: dict) -> dict:
        out: dict = {}
        for w, c in terms.items():
            for v, d in self.nf_word(w).items():
                _acc(out, v, c * d)
        return out

    def normal_form(self, p: GradedPoly) -> GradedPoly:
        _check_tables(self.table, p.table)
        if not self.rules:
            for w in p.terms:
                self._check_bound(w)
            return GradedPoly(self.table, p.terms)
        return GradedPoly(self.table, self.normal_form_terms(p.terms))

    def normal_form_tensor(self, t: TensorSquarePoly) -> TensorSquarePoly:
        out: dict = {}
        for (u, v), c in t.terms.items():
            nu = self.nf_word(u)
            if not nu:
                continue
            nv = self.nf_word(v)
            for a, x in nu.items():
                for b, y in nv.items():
                    _acc(out, (a, b), c * x * y)
        return TensorSquarePoly(self.table, out)

    def mul(self, p: GradedPoly, q: GradedPoly) -> GradedPoly:
        return self.normal_form(poly_mul(p, q))

    def mul_words(self, u: tuple, v: tuple) -> dict:
        return self.nf_word(u + v)

    def gen(self, name) -> GradedPoly:
        return self.normal_form(GradedPoly.gen(self.table, name))

    # -- bases ------------------------------------------------------------

    def basis_levels(self, d: int) -> list[list[tuple]]:
        """Irreducible words grouped by length, lengths 0..d."""
        levels = [[()]]
        gens = range(len(self.table.names))
        rules = self.rules
        for ell in range(1, d + 1):
            nxt = []
            for w in levels[-1]:
                for g in gens:
                    v = w + (g,)
                    if not any(v[len(v) - k :] in rules for k in self._lead_lengths if k <= len(v)):
                        nxt.append(v)
            levels.append(nxt)
            if not nxt:
                break
        return levels

    def finite_basis(self) -> list[tuple] | None:
        """The full basis when the quotient is visibly finite-dimensional, else None."""
        if "finite" in self._basis_cache:
            return self._basis_cache["finite"]
        levels = self.basis_levels(self.bound if self.bound is not None else 64)
        result = None
        if not levels[-1]:
            result = sorted((w for lvl in levels for w in lvl), key=word_key)
        self._basis_cache["finite"] = result
        return result


def _leading(terms: dict) -> tuple:
    return max(terms, key=word_key)


def _overlaps(l1: tuple, l2: tuple):
    """Proper overlaps k: the last k letters of l1 equal the first k of l2."""
    for k in range(1, min(len(l1), len(l2))):
        if l1[-k:] == l2[:k]:
            yield k


def quotient_present(table: GeneratorTable, relations, bound: int, max_rules: int = 20000) -> PresentedAlgebra:
    """Orient the relations and run critical-pair completion up to length ``bound``."""
    polys = []
    for r in relations:
        _check_tables(table, r.table)
        if not r.is_homogeneous():
            raise InhomogeneousRelation(f"relation is not G-homogeneous: {r!r}")
        if r.max_length() > bound:
            raise ValueError(f"relation of length {r.max_length()} exceeds degree bound {bound}")
        polys.append(dict(r.terms))

    rules: dict = {}
    alg = PresentedAlgebra(table, rules, bound, False, relations)

    def reset():
        alg._nf.clear()
        alg._lead_lengths = sorted({len(l) for l in rules})

    def orient(terms: dict):
        terms = alg.normal_form_terms(terms)
        if not terms:
            return None
        lead = _leading(terms)
        if not lead:
            raise OrientationFailure("relations force a nonzero scalar to vanish")
        inv = reciprocal(terms[lead])
        return lead, {w: -c * inv for w, c in terms.items() if w != lead}

    def insert(terms: dict) -> None:
        queue = [terms]
        while queue:
            oriented = orient(queue.pop())
            if oriented is None:
                continue
            lead, tail = oriented
            # rules whose lead contains the new lead are retired and re-queued
            for old in [l for l in rules if len(l) >= len(lead) and _contains(l, lead)]:
                retired = dict(rules.pop(old))
                retired = {w: -c for w, c in retired.items()}
                retired[old] = 1
                queue.append(retired)
            rules[lead] = tail
            reset()
            for l in list(rules):
                if l in rules:
                    rules[l] = alg.normal_form_terms(rules[l])
            reset()
            if len(rules) > max_rules:
                raise IncompleteRewriteSystem(f"completion exceeded {max_rules} rules below length {bound}")

    for p in polys:
        insert(p)

    done: set = set()
    while True:
        pending = []
        for l1 in sorted(rules, key=word_key):
            for l2 in sorted(rules, key=word_key):
                for k in _overlaps(l1, l2):
                    if len(l1) + len(l2) - k > bound:
                        continue
                    key = (l1, l2, k)
                    if key not in done:
                        pending.append(key)
        if not pending:
            break
        for l1, l2, k in pending:
            done.add((l1, l2, k))
            if l1 not in rules or l2 not in rules:
                continue
            left = {w + l2[k:]: c for w, c in rules[l1].items()}
            right = {l1[: len(l1) - k] + w: c for w, c in rules[l2].items()}
            diff = alg.normal_form_terms(left)
            for w, c in alg.normal_form_terms(right).items():
                _acc(diff, w, -c)
            if diff:
                insert(diff)

    # Overlaps longer than the bound were skipped; if they all resolve anyway
    # the rules are confluent at every length.
    unbounded = PresentedAlgebra(table, rules, None, False)
    stabilized = True
    for l1 in rules:
        for l2 in rules:
            for k in _overlaps(l1, l2):
                if len(l1) + len(l2) - k <= bound:
                    continue
                left = {w + l2[k:]: c for w, c in rules[l1].items()}
                right = {l1[: len(l1) - k] + w: c for w, c in rules[l2].items()}
                diff = unbounded.normal_form_terms(left)
                for w, c in unbounded.normal_form_terms(right).items():
                    _acc(diff, w, -c)
                if diff:
                    stabilized = False
    return PresentedAlgebra(table, dict(rules), bound, stabilized, relations)


def _contains(word: tuple, sub: tuple) -> bool:
    n = len(sub)
    return any(word[i : i + n] == sub for i in range(len(word) - n + 1))


def normal_form(p: GradedPoly, A: PresentedAlgebra) -> GradedPoly:
    return A.normal_form(p)


def enumerate_basis(A: PresentedAlgebra, d: int) -> tuple[list[tuple], bool]:
    """Irreducible words of length <= d and whether the quotient is finite-dimensional."""
    if A.bound is not None and d > A.bound and not A.stabilized:
        raise IncompleteRewriteSystem(f"rules are only known to be complete up to length {A.bound}")
    levels = A.basis_levels(d)
    words = sorted((w for lvl in levels for w in lvl), key=word_key)
    finite = not levels[-1]
    return words, finite


# --- derivations --------------------------------------------------------------


@dataclass
class GradedDerivation:
    """A linear map of degree g given on basis words: word -> {word: coeff}."""

    degree: GroupElement
    algebra: PresentedAlgebra
    matrix: dict

    def apply_terms(self, terms: dict) -> dict:
        out: dict = {}
        for w, c in terms.items():
            for v, d in self.matrix.get(w, {}).items():
                _acc(out, v, c * d)
        return out

    def __call__(self, p: GradedPoly) -> GradedPoly:
        return GradedPoly(self.algebra.table, self.apply_terms(self.algebra.normal_form(p).terms))

    def vector(self) -> dict:
        return {(a, b): c for a, row in self.matrix.items() for b, c in row.items() if c}


def derivations_solve(A: PresentedAlgebra, chi: Bicharacter, g: GroupElement) -> list[GradedDerivation]:
    """Basis of the degree-g maps d with d(ab) = d(a)b + chi(g, deg a) a d(b)."""
    basis = A.finite_basis()
    if basis is None:
        raise InfiniteDimensional("derivations need a finite-dimensional algebra")
    table = A.table
    br = BraidingCache(table, chi)
    by_degree: dict = {}
    for w in basis:
        by_degree.setdefault(table.degree(w), []).append(w)
    unknowns = [(a, b) for a in basis for b in by_degree.get(table.degree(a) + g, [])]
    rows = []
    for a in basis:
        ca = br.root(chi.exponent(g, table.degree(a)))
        for b in basis:
            eq: dict = {}
            # d(ab) - d(a) b - chi(g, deg a) a d(b) = 0, one row per output word
            for w, c in A.mul_words(a, b).items():
                for t in by_degree.get(table.degree(w) + g, []):
                    _acc(eq.setdefault(t, {}), (w, t), c)
            for t in by_degree.get(table.degree(a) + g, []):
                for w, c in A.mul_words(t, b).items():
                    _acc(eq.setdefault(w, {}), (a, t), -c)
            for t in by_degree.get(table.degree(b) + g, []):
                for w, c in A.mul_words(a, t).items():
                    _acc(eq.setdefault(w, {}), (b, t), -c * ca)
            rows.extend(r for r in eq.values() if r)
    out = []
    for vec in nullspace(rows, unknowns):
        matrix: dict = {}
        for (a, b), c in vec.items():
            matrix.setdefault(a, {})[b] = c
        out.append(GradedDerivation(g, A, matrix))
    return out
