"""Exact arithmetic in the cyclotomic fields Q(zeta_M).

A scalar of level ``M`` is stored as its residue modulo the ``M``-th
cyclotomic polynomial, in the power basis ``1, z, ..., z^(phi(M)-1)`` where
``z = exp(2 pi i / M)``.  Roots for different levels are chosen compatibly
(``z_d = z_M^(M/d)`` whenever ``d | M``), so scalars of different levels are
combined by embedding both into the lcm level.

Coefficients are Python ``int`` or :class:`fractions.Fraction`; nothing in
this module touches floating point.
"""

from __future__ import annotations

import re
from fractions import Fraction
from functools import lru_cache
from math import gcd

from .errors import DivisionByZero, NotARootOfUnity, ParseError

__all__ = [
    "CycScalar",
    "cyclotomic_polynomial",
    "euler_phi",
    "field_op",
    "format_scalar",
    "is_primitive_nth_root",
    "multiplicative_order",
    "parse_scalar",
    "root_from_angle",
    "root_of_unity",
]


def lcm(a: int, b: int) -> int:
    return a // gcd(a, b) * b


@lru_cache(maxsize=None)
def divisors(n: int) -> tuple[int, ...]:
    small = [d for d in range(1, int(n**0.5) + 1) if n % d == 0]
    return tuple(sorted(set(small + [n // d for d in small])))


def _mobius(n: int) -> int:
    result, p = 1, 2
    while p * p <= n:
        if n % p == 0:
            n //= p
            if n % p == 0:
                return 0
            result = -result
        p += 1
    return -result if n > 1 else result


def _clean(c):
    if type(c) is Fraction and c.denominator == 1:
        return c.numerator
    return c


# --- dense univariate polynomials, lowest degree first ----------------------


def _trim(p: list) -> list:
    while p and not p[-1]:
        p.pop()
    return p


def _poly_divmod(num: list, den: list) -> tuple[list, list]:
    num = _trim(list(num))
    den = _trim(list(den))
    lead = den[-1]
    quot = [0] * max(len(num) - len(den) + 1, 1)
    while len(num) >= len(den) and num:
        shift = len(num) - len(den)
        c = num[-1] / lead if lead != 1 else num[-1]
        quot[shift] = c
        for k, d in enumerate(den):
            num[shift + k] -= c * d
        _trim(num)
    return quot, num


def _poly_mul(a: list, b: list) -> list:
    if not a or not b:
        return []
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] += x * y
    return out


def _poly_sub(a: list, b: list) -> list:
    n = max(len(a), len(b))
    out = [(a[k] if k < len(a) else 0) - (b[k] if k < len(b) else 0) for k in range(n)]
    return _trim(out)


@lru_cache(maxsize=None)
def cyclotomic_polynomial(n: int) -> tuple[int, ...]:
    """Integer coefficients of Phi_n, lowest degree first."""
    if n < 1:
        raise ValueError(f"cyclotomic polynomial needs n >= 1, got {n}")
    poly = [-1] + [0] * (n - 1) + [1]
    for d in divisors(n)[:-1]:
        poly, rem = _poly_divmod(poly, list(cyclotomic_polynomial(d)))
        assert not rem
    return tuple(int(c) for c in poly)


def euler_phi(n: int) -> int:
    return len(cyclotomic_polynomial(n)) - 1


@lru_cache(maxsize=None)
def _power_table(m: int) -> tuple[tuple[int, ...], ...]:
    """Row ``e`` holds z^e reduced modulo Phi_m, for 0 <= e < m."""
    phi = cyclotomic_polynomial(m)
    d = len(phi) - 1
    cur = [1] + [0] * (d - 1)
    rows = []
    for _ in range(m):
        rows.append(tuple(cur))
        top = cur[-1]
        cur = [0] + cur[:-1]
        if top:
            for k in range(d):
                cur[k] -= top * phi[k]
    return tuple(rows)


def _solve_rational(columns: list[tuple], target: tuple):
    """Solve sum_k x_k columns[k] = target over Q; None if inconsistent."""
    n = len(columns)
    rows = [[Fraction(col[r]) for col in columns] + [Fraction(target[r])] for r in range(len(target))]
    pivots = []
    r = 0
    for c in range(n):
        piv = next((i for i in range(r, len(rows)) if rows[i][c]), None)
        if piv is None:
            continue
        rows[r], rows[piv] = rows[piv], rows[r]
        inv = 1 / rows[r][c]
        rows[r] = [v * inv for v in rows[r]]
        for i in range(len(rows)):
            if i != r and rows[i][c]:
                f = rows[i][c]
                rows[i] = [a - f * b for a, b in zip(rows[i], rows[r])]
        pivots.append(c)
        r += 1
    if any(row[-1] for row in rows[r:]):
        return None
    x = [Fraction(0)] * n
    for i, c in enumerate(pivots):
        x[c] = rows[i][-1]
    return x


@lru_cache(maxsize=1 << 16)
def _mul_coeffs(level: int, x: tuple, y: tuple) -> tuple:
    """Product of two reduced coefficient tuples; memoized since roots of unity repeat."""
    d = len(x)
    prod = [0] * (2 * d - 1)
    for i, u in enumerate(x):
        if u:
            for j, v in enumerate(y):
                if v:
                    prod[i + j] += u * v
    out = prod[:d]
    table = _power_table(level)
    for e in range(d, 2 * d - 1):
        c = prod[e]
        if c:
            for k, r in enumerate(table[e % level]):
                if r:
                    out[k] += c * r
    return tuple(_clean(c) for c in out)


class CycScalar:
    """An exact element of Q(zeta_M).

    ``coeffs`` has length phi(M) and is the unique reduced residue, so two
    scalars of the same level are equal iff their coefficient tuples are.
    Instances are immutable.
    """

    __slots__ = ("level", "coeffs", "_canon")

    def __init__(self, level: int, coeffs=(0,)):
        level = int(level)
        if level < 1:
            raise ValueError(f"level must be positive, got {level}")
        table = _power_table(level)
        out = [0] * len(table[0])
        for e, c in enumerate(coeffs):
            if c:
                c = Fraction(c) if not isinstance(c, int) else c
                for k, r in enumerate(table[e % level]):
                    if r:
                        out[k] += c * r
        self.level = level
        self.coeffs = tuple(_clean(c) for c in out)
        self._canon = None

    @classmethod
    def _raw(cls, level: int, coeffs: tuple) -> CycScalar:
        obj = object.__new__(cls)
        obj.level = level
        obj.coeffs = coeffs
        obj._canon = None
        return obj

    @classmethod
    def rational(cls, q, level: int = 1) -> CycScalar:
        q = _clean(Fraction(q)) if not isinstance(q, int) else q
        return cls._raw(level, (q,) + (0,) * (euler_phi(level) - 1))

    # -- predicates -------------------------------------------------------

    def is_zero(self) -> bool:
        return not any(self.coeffs)

    def __bool__(self) -> bool:
        return any(self.coeffs)

    def is_rational(self) -> bool:
        return not any(self.coeffs[1:])

    def to_fraction(self) -> Fraction:
        if not self.is_rational():
            raise ValueError(f"{self} is not rational")
        return Fraction(self.coeffs[0])

    # -- level changes ----------------------------------------------------

    def embed(self, level: int) -> CycScalar:
        if level == self.level:
            return self
        if level % self.level:
            raise ValueError(f"cannot embed level {self.level} into level {level}")
        step = level // self.level
        table = _power_table(level)
        out = [0] * len(table[0])
        for k, c in enumerate(self.coeffs):
            if c:
                for i, r in enumerate(table[k * step]):
                    if r:
                        out[i] += c * r
        return CycScalar._raw(level, tuple(out))

    def restrict(self, level: int) -> CycScalar:
        """The same element written at a divisor level; ValueError if it is not there."""
        if level == self.level:
            return self
        if self.level % level:
            raise ValueError(f"level {level} does not divide {self.level}")
        step = self.level // level
        table = _power_table(self.level)
        cols = [table[k * step] for k in range(euler_phi(level))]
        sol = _solve_rational(cols, self.coeffs)
        if sol is None:
            raise ValueError(f"coefficients {self.coeffs} at level {self.level} do not lie in Q(zeta_{level})")
        return CycScalar._raw(level, tuple(_clean(c) for c in sol))

    def canonical(self) -> CycScalar:
        """Representation at the least level whose field contains this scalar."""
        if self._canon is None:
            if self.is_rational():
                self._canon = CycScalar._raw(1, (self.coeffs[0],))
            else:
                for d in divisors(self.level):
                    if euler_phi(d) <= 1:
                        continue
                    try:
                        self._canon = self.restrict(d)
                        break
                    except ValueError:
                        continue
        return self._canon

    # -- arithmetic -------------------------------------------------------

    def _coerce(self, other):
        if isinstance(other, CycScalar):
            return other
        if isinstance(other, (int, Fraction)):
            return CycScalar.rational(other, self.level)
        return NotImplemented

    def _align(self, other: CycScalar) -> tuple[CycScalar, CycScalar]:
        if other.level == self.level:
            return self, other
        m = lcm(self.level, other.level)
        return self.embed(m), other.embed(m)

    def __add__(self, other):
        if isinstance(other, (int, Fraction)):
            if not other:
                return self
            return CycScalar._raw(self.level, (_clean(self.coeffs[0] + other),) + self.coeffs[1:])
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        a, b = self._align(other)
        return CycScalar._raw(a.level, tuple(_clean(x + y) for x, y in zip(a.coeffs, b.coeffs)))

    __radd__ = __add__

    def __neg__(self) -> CycScalar:
        return CycScalar._raw(self.level, tuple(-c for c in self.coeffs))

    def __sub__(self, other):
        if isinstance(other, (int, Fraction)):
            return self + (-other)
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if type(other) is CycScalar and other.level == self.level and len(self.coeffs) > 1:
            return CycScalar._raw(self.level, _mul_coeffs(self.level, self.coeffs, other.coeffs))
        if isinstance(other, (int, Fraction)):
            if other == 1:
                return self
            return CycScalar._raw(self.level, tuple(_clean(c * other) for c in self.coeffs))
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        a, b = self._align(other)
        x, y = a.coeffs, b.coeffs
        if len(x) == 1:
            return CycScalar._raw(a.level, (_clean(x[0] * y[0]),))
        return CycScalar._raw(a.level, _mul_coeffs(a.level, x, y))

    __rmul__ = __mul__

    def inverse(self) -> CycScalar:
        nz = [k for k, c in enumerate(self.coeffs) if c]
        if not nz:
            raise DivisionByZero("inverse of zero scalar")
        if len(nz) == 1:
            k = nz[0]
            c = Fraction(1) / self.coeffs[k]
            row = _power_table(self.level)[(-k) % self.level]
            return CycScalar._raw(self.level, tuple(_clean(c * r) for r in row))
        modulus = [Fraction(c) for c in cyclotomic_polynomial(self.level)]
        r0, r1 = modulus, _trim([Fraction(c) for c in self.coeffs])
        s0, s1 = [], [Fraction(1)]
        while len(r1) > 1:
            q, r = _poly_divmod(r0, r1)
            r0, r1 = r1, r
            s0, s1 = s1, _poly_sub(s0, _poly_mul(q, s1))
        inv = 1 / r1[0]
        return CycScalar(self.level, [c * inv for c in s1])

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction)):
            if not other:
                raise DivisionByZero("division by zero")
            return self * (Fraction(1) / other)
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self * other.inverse()

    def __rtruediv__(self, other):
        return self.inverse() * other

    def __pow__(self, n: int) -> CycScalar:
        if n < 0:
            return self.inverse() ** (-n)
        result = CycScalar.rational(1, self.level)
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    # -- comparison -------------------------------------------------------

    def __eq__(self, other) -> bool:
        if isinstance(other, (int, Fraction)):
            return self.is_rational() and self.coeffs[0] == other
        if not isinstance(other, CycScalar):
            return NotImplemented
        if other.level == self.level:
            return self.coeffs == other.coeffs
        a, b = self._align(other)
        return a.coeffs == b.coeffs

    def __hash__(self) -> int:
        # The trace divided by the field degree does not depend on the level.
        return hash(self.normalized_trace())

    def normalized_trace(self) -> Fraction:
        total = Fraction(0)
        for k, c in enumerate(self.coeffs):
            if c:
                m = self.level // gcd(k, self.level)
                total += c * Fraction(_mobius(m), euler_phi(m))
        return total

    # -- roots of unity ---------------------------------------------------

    def root_angle(self) -> Fraction | None:
        """``t`` in [0, 1) with ``self == exp(2 pi i t)``, or None."""
        table = _power_table(self.level)
        neg = tuple(-c for c in self.coeffs)
        for k, row in enumerate(table):
            if row == self.coeffs:
                return Fraction(k, self.level)
            if row == neg:
                return (Fraction(k, self.level) + Fraction(1, 2)) % 1
        return None

    def __repr__(self) -> str:
        return f"CycScalar({format_scalar(self)!r})"

    def __str__(self) -> str:
        return format_scalar(self)


def reciprocal(c):
    """Exact 1/c for int, Fraction or CycScalar coefficients."""
    if isinstance(c, CycScalar):
        return c.inverse()
    if not c:
        raise DivisionByZero("division by zero")
    return _clean(Fraction(1) / c)


def root_of_unity(level: int, k: int) -> CycScalar:
    """zeta_level ** k in canonical form."""
    if level < 1:
        raise ValueError(f"level must be positive, got {level}")
    return CycScalar._raw(level, _power_table(level)[k % level])


def root_from_angle(t: Fraction, level: int | None = None) -> CycScalar:
    t = Fraction(t) % 1
    n = t.denominator
    level = n if level is None else level
    if level % n:
        raise ValueError(f"exp(2 pi i {t}) is not in Q(zeta_{level})")
    return root_of_unity(level, t.numerator * (level // n))


def angle_of(u: CycScalar) -> Fraction:
    t = u.root_angle()
    if t is None:
        raise NotARootOfUnity(f"{u} is not a root of unity")
    return t


def multiplicative_order(u: CycScalar) -> int | None:
    """Least n >= 1 with u**n == 1, or None when u is not a root of unity."""
    if u.is_zero():
        raise ValueError("zero has no multiplicative order")
    t = u.root_angle()
    return None if t is None else t.denominator


def is_primitive_nth_root(u, n: int) -> bool:
    if not isinstance(u, CycScalar):
        u = CycScalar.rational(u)
    if u.is_zero():
        return False
    return multiplicative_order(u) == n


def field_op(a: CycScalar, b: CycScalar, op: str) -> CycScalar:
    if op == "add":
        return a + b
    if op == "sub":
        return a - b
    if op == "mul":
        return a * b
    if op == "div":
        return a / b
    raise ValueError(f"unknown field operation {op!r}")


# --- text form ----------------------------------------------------------


def format_rational(c) -> str:
    c = Fraction(c)
    return str(c.numerator) if c.denominator == 1 else f"{c.numerator}/{c.denominator}"


def format_scalar(a: CycScalar) -> str:
    """``1 - 1*z^1 @ 3`` style text at the least possible level."""
    a = a.canonical()
    parts = []
    for k, c in enumerate(a.coeffs):
        if not c:
            continue
        body = format_rational(abs(c)) if k == 0 else f"{format_rational(abs(c))}*z^{k}"
        parts.append((c < 0, body))
    if not parts:
        return f"0 @ {a.level}"
    text = ("-" if parts[0][0] else "") + parts[0][1]
    for neg, body in parts[1:]:
        text += (" - " if neg else " + ") + body
    return f"{text} @ {a.level}"


_TERM = re.compile(
    r"\s*([+-]?)\s*(?:(\d+(?:/\d+)?)\s*(?:\*\s*z(?:\s*\^\s*(\d+))?)?|z(?:\s*\^\s*(\d+))?)\s*"
)


def parse_scalar(text: str) -> CycScalar:
    """Inverse of :func:`format_scalar`; also accepts bare rationals and ``z^k@M``."""
    text = text.strip()
    if text.startswith("(") and text.endswith(")") and text.count("(") == 1:
        text = text[1:-1]
    body, sep, lvl = text.rpartition("@")
    if not sep:
        body, level = text, 1
    else:
        try:
            level = int(lvl.strip())
        except ValueError:
            raise ParseError(f"bad scalar level in {text!r}") from None
        if level < 1:
            raise ParseError(f"scalar level must be positive in {text!r}")
    body = body.strip()
    if body.startswith("(") and body.endswith(")"):
        body = body[1:-1].strip()
    if not body:
        raise ParseError(f"empty scalar {text!r}")
    coeffs: dict[int, Fraction] = {}
    pos = 0
    first = True
    while pos < len(body):
        m = _TERM.match(body, pos)
        if not m or m.end() == pos or (not first and not m.group(1)):
            raise ParseError(f"cannot parse scalar {text!r} at offset {pos}")
        sign, num, power, bare_power = m.groups()
        if num is None and m.group(0).strip().lstrip("+-").strip() == "":
            raise ParseError(f"cannot parse scalar {text!r} at offset {pos}")
        c = Fraction(num) if num is not None else Fraction(1)
        if sign == "-":
            c = -c
        if num is not None:
            k = int(power) if power is not None else (1 if "z" in m.group(0) else 0)
        else:
            k = int(bare_power) if bare_power is not None else 1
        if k and sep == "":
            raise ParseError(f"scalar {text!r} uses z without a level")
        coeffs[k] = coeffs.get(k, 0) + c
        pos = m.end()
        first = False
    top = max(coeffs)
    return CycScalar(level, [coeffs.get(k, 0) for k in range(top + 1)])
