"""Finitely generated abelian groups, bicharacters, zeta-families and rho.

Permutations are tuples in one-line notation over ``0..n-1``: ``sigma[i]``
is the image of ``i``.  ``compose(s, t)`` is ``s o t``, and a permutation
acts on a tuple of group elements by ``sigma.g = (g[sigma[0]], ...)``.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property, lru_cache

from .cyclotomic import CycScalar, lcm, root_of_unity
from .errors import (
    IllDefinedBicharacter,
    InfiniteGroup,
    LengthMismatch,
    NotARootOfUnity,
    NotAZetaFamily,
)


@dataclass(frozen=True)
class AbelianGroup:
    """C_{m_1} x ... x C_{m_s} x Z^r, written additively."""

    torsion: tuple[int, ...] = ()
    free_rank: int = 0

    def __post_init__(self):
        object.__setattr__(self, "torsion", tuple(int(m) for m in self.torsion))
        if any(m < 2 for m in self.torsion):
            raise ValueError(f"torsion orders must be >= 2, got {self.torsion}")
        if self.free_rank < 0:
            raise ValueError("free rank must be nonnegative")

    @property
    def rank(self) -> int:
        return len(self.torsion) + self.free_rank

    def is_finite(self) -> bool:
        return self.free_rank == 0

    def order(self) -> int:
        if not self.is_finite():
            raise InfiniteGroup("group has positive free rank")
        n = 1
        for m in self.torsion:
            n *= m
        return n

    def element(self, exps) -> GroupElement:
        exps = tuple(int(e) for e in exps)
        if len(exps) != self.rank:
            raise LengthMismatch(f"group element needs {self.rank} coordinates, got {len(exps)}")
        reduced = tuple(e % m for e, m in zip(exps, self.torsion)) + exps[len(self.torsion):]
        return GroupElement(self, reduced)

    def zero(self) -> GroupElement:
        return GroupElement(self, (0,) * self.rank)

    def generators(self) -> list[GroupElement]:
        return [self.element(tuple(int(i == k) for i in range(self.rank))) for k in range(self.rank)]

    def elements(self) -> list[GroupElement]:
        """All elements in lexicographic order of exponent tuples."""
        if not self.is_finite():
            raise InfiniteGroup("cannot enumerate a group with positive free rank")
        return [GroupElement(self, e) for e in itertools.product(*(range(m) for m in self.torsion))]

    def __str__(self) -> str:
        parts = [f"C{m}" for m in self.torsion] + ["Z"] * self.free_rank
        return " x ".join(parts) if parts else "trivial"


@dataclass(frozen=True, order=True)
class GroupElement:
    group: AbelianGroup = field(compare=False)
    exps: tuple[int, ...]

    def _check(self, other: GroupElement):
        if other.group != self.group:
            raise ValueError("group elements belong to different groups")

    def __add__(self, other: GroupElement) -> GroupElement:
        self._check(other)
        return self.group.element(tuple(a + b for a, b in zip(self.exps, other.exps)))

    def __neg__(self) -> GroupElement:
        return self.group.element(tuple(-a for a in self.exps))

    def __sub__(self, other: GroupElement) -> GroupElement:
        return self + (-other)

    def __rmul__(self, k: int) -> GroupElement:
        return self.group.element(tuple(k * a for a in self.exps))

    def __eq__(self, other) -> bool:
        return isinstance(other, GroupElement) and self.exps == other.exps and self.group == other.group

    def __hash__(self) -> int:
        return hash(self.exps)

    def is_zero(self) -> bool:
        return not any(self.exps)

    def __str__(self) -> str:
        return format_element(self)


def format_element(g: GroupElement) -> str:
    if len(g.exps) == 1:
        return str(g.exps[0])
    return "(" + ",".join(str(e) for e in g.exps) + ")"


def sum_elements(group: AbelianGroup, elems) -> GroupElement:
    total = group.zero()
    for g in elems:
        total = total + g
    return total


class Bicharacter:
    """chi(g, h) = zeta_L ** (g^T E h), valued at the ambient level.

    The ambient level defaults to 2L so both square roots of every
    chi-product are available; it can be raised to host further roots.
    """

    def __init__(self, group: AbelianGroup, level: int, matrix, ambient_level: int | None = None):
        level = int(level)
        if level < 1:
            raise ValueError(f"bicharacter level must be positive, got {level}")
        rows = [list(r) for r in matrix]
        r = group.rank
        if len(rows) != r or any(len(row) != r for row in rows):
            raise LengthMismatch(f"bicharacter matrix must be {r}x{r}")
        self.group = group
        self.level = level
        self.matrix = tuple(tuple(int(e) % level for e in row) for row in rows)
        for i, m in enumerate(group.torsion):
            for j in range(r):
                if (m * self.matrix[i][j]) % level:
                    raise IllDefinedBicharacter(i + 1, j + 1, f"{m}*e[{i + 1}][{j + 1}] not divisible by {level}")
                if (m * self.matrix[j][i]) % level:
                    raise IllDefinedBicharacter(j + 1, i + 1, f"{m}*e[{j + 1}][{i + 1}] not divisible by {level}")
        amb = 2 * level if ambient_level is None else int(ambient_level)
        if amb % level:
            raise ValueError(f"ambient level {amb} is not a multiple of {level}")
        self.ambient_level = amb

    def with_ambient(self, level: int) -> Bicharacter:
        return Bicharacter(self.group, self.level, self.matrix, lcm(level, self.level))

    def exponent(self, g: GroupElement, h: GroupElement) -> int:
        """The integer e (mod L) with chi(g, h) = zeta_L ** e."""
        m = self.matrix
        total = 0
        for i, a in enumerate(g.exps):
            if a:
                row = m[i]
                for j, b in enumerate(h.exps):
                    if b:
                        total += a * row[j] * b
        return total % self.level

    def angle(self, g: GroupElement, h: GroupElement) -> Fraction:
        return Fraction(self.exponent(g, h), self.level)

    def __call__(self, g: GroupElement, h: GroupElement) -> CycScalar:
        step = self.ambient_level // self.level
        return root_of_unity(self.ambient_level, self.exponent(g, h) * step)

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, Bicharacter)
            and self.group == other.group
            and self.level == other.level
            and self.matrix == other.matrix
        )

    def __hash__(self) -> int:
        return hash((self.group, self.level, self.matrix))

    def __repr__(self) -> str:
        return f"Bicharacter({self.group}, L={self.level}, E={[list(r) for r in self.matrix]})"


def bicharacter_make(group: AbelianGroup, level: int, matrix) -> Bicharacter:
    return Bicharacter(group, level, matrix)


def bicharacter_eval(chi: Bicharacter, g: GroupElement, h: GroupElement) -> CycScalar:
    return chi(g, h)


# --- permutations -----------------------------------------------------------


def identity(n: int) -> tuple[int, ...]:
    return tuple(range(n))


def compose(s, t) -> tuple[int, ...]:
    """s o t."""
    return tuple(s[i] for i in t)


def inverse_perm(s) -> tuple[int, ...]:
    out = [0] * len(s)
    for i, v in enumerate(s):
        out[v] = i
    return tuple(out)


def act(sigma, items) -> tuple:
    return tuple(items[i] for i in sigma)


def inversions(sigma):
    n = len(sigma)
    return [(i, j) for i in range(n) for j in range(i + 1, n) if sigma[i] > sigma[j]]


def sign(sigma) -> int:
    return -1 if len(inversions(sigma)) % 2 else 1


def cycle_to_front(i: int, n: int) -> tuple[int, ...]:
    """The cycle (i ... 1) in one-line form: i first, the rest in order (0-based i)."""
    return (i,) + tuple(k for k in range(n) if k != i)


def parse_permutation(text: str) -> tuple[int, ...]:
    """1-based one-line notation such as ``2,1,3``."""
    try:
        images = [int(t) for t in text.replace(" ", "").split(",") if t]
    except ValueError:
        raise ValueError(f"bad permutation {text!r}") from None
    if sorted(images) != list(range(1, len(images) + 1)):
        raise ValueError(f"{text!r} is not a permutation of 1..{len(images)}")
    return tuple(v - 1 for v in images)


def format_permutation(sigma) -> str:
    return "(" + ",".join(str(v + 1) for v in sigma) + ")"


# --- zeta-families ----------------------------------------------------------


def _zeta_angle(zeta) -> Fraction:
    if not isinstance(zeta, CycScalar):
        zeta = CycScalar.rational(zeta)
    if zeta.is_zero():
        raise ValueError("zeta must be nonzero")
    t = zeta.root_angle()
    if t is None:
        raise NotARootOfUnity(f"{zeta} is not a root of unity")
    return t


def _pair_ok(chi: Bicharacter, g, h, two_t: Fraction) -> bool:
    return Fraction(chi.exponent(g, h) + chi.exponent(h, g), chi.level) % 1 == two_t


def is_zeta_family(chi: Bicharacter, zeta, members) -> bool:
    """chi(g_i, g_j) chi(g_j, g_i) == zeta**2 for all i != j."""
    members = list(members)
    if not isinstance(zeta, CycScalar):
        zeta = CycScalar.rational(zeta)
    if zeta.is_zero():
        raise ValueError("zeta must be nonzero")
    if len(members) <= 1:
        return True
    t = zeta.root_angle()
    if t is None:
        return False
    two_t = (2 * t) % 1
    return all(
        _pair_ok(chi, members[i], members[j], two_t)
        for i in range(len(members))
        for j in range(i + 1, len(members))
    )


@dataclass(frozen=True)
class ZetaFamily:
    chi: Bicharacter
    zeta: CycScalar
    members: tuple[GroupElement, ...]

    def __post_init__(self):
        zeta = self.zeta if isinstance(self.zeta, CycScalar) else CycScalar.rational(self.zeta)
        object.__setattr__(self, "zeta", zeta)
        object.__setattr__(self, "members", tuple(self.members))
        _zeta_angle(zeta)
        if not is_zeta_family(self.chi, zeta, self.members):
            shown = ", ".join(str(g) for g in self.members)
            raise NotAZetaFamily(f"({shown}) is not a {zeta}-family")

    @classmethod
    def _trusted(cls, chi, zeta, members) -> ZetaFamily:
        fam = object.__new__(cls)
        object.__setattr__(fam, "chi", chi)
        object.__setattr__(fam, "zeta", zeta)
        object.__setattr__(fam, "members", members)
        return fam

    @property
    def n(self) -> int:
        return len(self.members)

    def permuted(self, sigma) -> ZetaFamily:
        # the defining condition is symmetric in the members, so no recheck
        fam = ZetaFamily._trusted(self.chi, self.zeta, tuple(act(sigma, self.members)))
        if "context" in self.__dict__:
            object.__setattr__(fam, "context", self.context.permuted(sigma))
        return fam

    @cached_property
    def context(self) -> RhoContext:
        return RhoContext(self.chi, self.zeta, self.members)

    def __str__(self) -> str:
        return "(" + ",".join(str(g) for g in self.members) + ")"


@lru_cache(maxsize=4096)
def _inversions(sigma: tuple) -> tuple:
    """Pairs (sigma(j), sigma(i)) for i < j with sigma(i) > sigma(j)."""
    n = len(sigma)
    return tuple((sigma[j], sigma[i]) for i in range(n) for j in range(i + 1, n) if sigma[i] > sigma[j])


class RhoContext:
    """Integer-exponent bookkeeping for rho on one family.

    All values are powers of ``zeta_N``; ``pair[a][b]`` is the exponent of
    chi(g_a, g_b) and ``zinv`` that of zeta^-1.
    """

    def __init__(self, chi: Bicharacter, zeta: CycScalar, members):
        t = _zeta_angle(zeta)
        self.N = lcm(chi.level, t.denominator)
        step = self.N // chi.level
        self.zinv = (-t.numerator * (self.N // t.denominator)) % self.N
        self.pair = [[chi.exponent(a, b) * step % self.N for b in members] for a in members]
        self.level = lcm(self.N, chi.ambient_level)
        self._scalars: dict = {}

    def permuted(self, sigma) -> RhoContext:
        out = object.__new__(RhoContext)
        out.N, out.zinv, out.level = self.N, self.zinv, self.level
        out.pair = [[self.pair[a][b] for b in sigma] for a in sigma]
        out._scalars = self._scalars
        return out

    def exponent(self, sigma) -> int:
        if len(sigma) != len(self.pair):
            raise LengthMismatch(f"permutation of length {len(sigma)} on a family of length {len(self.pair)}")
        pair = self.pair
        inv = _inversions(tuple(sigma))
        return (len(inv) * self.zinv + sum(pair[a][b] for a, b in inv)) % self.N

    def scalar(self, e: int) -> CycScalar:
        out = self._scalars.get(e)
        if out is None:
            out = self._scalars[e] = root_of_unity(self.level, e * (self.level // self.N))
        return out

    def value(self, sigma) -> CycScalar:
        return self.scalar(self.exponent(sigma))


def rho(sigma, fam: ZetaFamily) -> CycScalar:
    """Product over inversion pairs (i<j, sigma(i)>sigma(j)) of zeta^-1 chi(g_sigma(j), g_sigma(i))."""
    return fam.context.value(tuple(sigma))


def enumerate_zeta_families(chi: Bicharacter, n: int, zeta) -> list[ZetaFamily]:
    """Every zeta-family of length n, lexicographic in the exponent tuples."""
    group = chi.group
    if not group.is_finite():
        raise InfiniteGroup("families can only be enumerated over a finite group")
    if n < 1:
        raise ValueError("family length must be at least 1")
    if not isinstance(zeta, CycScalar):
        zeta = CycScalar.rational(zeta)
    two_t = (2 * _zeta_angle(zeta)) % 1
    elems = group.elements()
    ok = {(a, b): _pair_ok(chi, elems[a], elems[b], two_t) for a in range(len(elems)) for b in range(len(elems))}
    out: list[ZetaFamily] = []
    prefix: list[int] = []

    def extend():
        if len(prefix) == n:
            out.append(ZetaFamily._trusted(chi, zeta, tuple(elems[k] for k in prefix)))
            return
        for c in range(len(elems)):
            if all(ok[(p, c)] for p in prefix):
                prefix.append(c)
                extend()
                prefix.pop()

    extend()
    return out


def count_zeta_families(chi: Bicharacter, n: int, two_t: Fraction) -> int:
    elems = chi.group.elements()
    m = len(elems)
    ok = [[_pair_ok(chi, elems[a], elems[b], two_t) for b in range(m)] for a in range(m)]

    def count(prefix: list[int]) -> int:
        if len(prefix) == n:
            return 1
        total = 0
        for c in range(m):
            if all(ok[p][c] for p in prefix):
                prefix.append(c)
                total += count(prefix)
                prefix.pop()
        return total

    return count([])


def list_zeta_values(chi: Bicharacter, n: int) -> list[tuple[CycScalar, int]]:
    """Each zeta (both square roots of a realized chi-product) with its family count."""
    group = chi.group
    if not group.is_finite():
        raise InfiniteGroup("families can only be enumerated over a finite group")
    if n < 2:
        raise ValueError("every zeta admits length-1 families; use n >= 2")
    elems = group.elements()
    values = sorted({Fraction(chi.exponent(g, h) + chi.exponent(h, g), chi.level) % 1 for g in elems for h in elems})
    out = []
    for v in values:
        count = count_zeta_families(chi, n, v)
        if not count:
            continue
        for t in (v / 2, v / 2 + Fraction(1, 2)):
            out.append((t, count))
    out.sort()
    level = lcm(chi.ambient_level, 2 * chi.level)
    return [(root_of_unity(level, t.numerator * (level // t.denominator)), c) for t, c in out]


def admissible_zetas(chi: Bicharacter, members) -> list[CycScalar]:
    """Roots zeta of exact order n = len(members) >= 2 making ``members`` a zeta-family."""
    members = list(members)
    n = len(members)
    if n < 2:
        return []
    v = Fraction(chi.exponent(members[0], members[1]) + chi.exponent(members[1], members[0]), chi.level) % 1
    out = []
    for t in (v / 2, v / 2 + Fraction(1, 2)):
        if t.denominator != n:
            continue
        zeta = root_of_unity(lcm(chi.ambient_level, n), t.numerator * (lcm(chi.ambient_level, n) // n))
        if is_zeta_family(chi, zeta, members):
            out.append(zeta)
    return out

