"""Deterministic text for polynomials, tensors and scalars."""

from __future__ import annotations

from fractions import Fraction

from .algebra import GeneratorTable, GradedPoly, TensorSquarePoly, word_key
from .cyclotomic import CycScalar, format_rational, format_scalar


def _rational(c):
    """The coefficient as a Fraction, or None when it is irrational."""
    if isinstance(c, CycScalar):
        return Fraction(c.coeffs[0]) if c.is_rational() else None
    return Fraction(c)


def render_word(table: GeneratorTable, w: tuple) -> str:
    if not w:
        return "1"
    parts = []
    i = 0
    while i < len(w):
        j = i
        while j < len(w) and w[j] == w[i]:
            j += 1
        name = table.names[w[i]]
        parts.append(name if j - i == 1 else f"{name}^{j - i}")
        i = j
    return "*".join(parts)


def _signed_terms(items) -> str:
    """Join (coefficient, body) pairs; body None stands for the unit."""
    out = []
    for c, body in items:
        q = _rational(c)
        if q is None:
            text = f"({format_scalar(c)})" + (f"*{body}" if body else "")
            neg = False
        else:
            neg = q < 0
            mag = format_rational(abs(q))
            if body is None:
                text = mag
            elif mag == "1":
                text = body
            else:
                text = f"{mag}*{body}"
        if not out:
            out.append(("-" if neg else "") + text)
        else:
            out.append((" - " if neg else " + ") + text)
    return "".join(out) if out else "0"


def render_poly(p: GradedPoly) -> str:
    items = []
    for w, c in p.sorted_terms():
        items.append((c, render_word(p.table, w) if w else None))
    return _signed_terms(items)


def _tensor_key(item):
    # shorter terms first; within a length the left factor descends, as in x(x)1 + 1(x)x
    (u, v), _ = item
    return (len(u) + len(v), tuple(-k for k in word_key(u)[:1]) + tuple(-k for k in u), word_key(v))


def render_tensor(t: TensorSquarePoly) -> str:
    items = []
    for (u, v), c in sorted(t.terms.items(), key=_tensor_key):
        items.append((c, f"{render_word(t.table, u)}(x){render_word(t.table, v)}"))
    return _signed_terms(items)


def render_vector(table: GeneratorTable, vec: dict) -> str:
    return render_poly(GradedPoly(table, vec))


def render_scalar(c) -> str:
    if not isinstance(c, CycScalar):
        c = CycScalar.rational(c)
    return format_scalar(c)


def render_scalar_factor(c) -> str:
    """Prefix for a monomial: empty for 1, ``2*`` or ``(scalar)*`` otherwise."""
    q = _rational(c)
    if q is not None:
        if q == 1:
            return ""
        return f"{format_rational(q)}*" if q > 0 else f"({format_rational(q)})*"
    return f"({format_scalar(c)})*"


def group_word(B, g) -> str:
    gens = B.group.generators()
    parts = []
    for k, e in enumerate(g.exps):
        if e:
            name = "t" if len(gens) == 1 else f"t{k + 1}"
            parts.append(name if e == 1 else f"{name}^{e}")
    return "*".join(parts)


def render_biproduct_key(B, key) -> str:
    w, g = key
    left = render_word(B.H.table, w) if w else ""
    right = group_word(B, g)
    if left and right:
        return f"{left}*{right}"
    return left or right or "1"


def render_biproduct_vector(B, vec: dict) -> str:
    items = sorted(vec.items(), key=lambda kv: (word_key(kv[0][0]), kv[0][1].exps))
    return _signed_terms([(c, None if not k[0] and k[1].is_zero() else render_biproduct_key(B, k)) for k, c in items])
