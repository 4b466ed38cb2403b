"""Model files and the infix expression syntax.

A model file is YAML with a ``group`` block and optional ``presentation``,
``lie`` and ``hopf`` blocks; see ``docs/model-format.md`` for the grammar.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path

import yaml

from .algebra import GeneratorTable, GradedPoly, PresentedAlgebra, TensorSquarePoly, quotient_present
from .cyclotomic import CycScalar, parse_scalar
from .errors import BraidLieError, ParseError, ValidationError
from .grading import AbelianGroup, Bicharacter, GroupElement
from .hopf import HopfInstance, enveloping_build
from .lie import LiePresentation

_TOKEN = re.compile(
    r"""\s*(?:
        (?P<tensor>\(x\))
      | (?P<zpow>z\s*(?:\^\s*\d+)?\s*@\s*\d+)
      | (?P<num>\d+(?:/\d+)?)
      | (?P<name>[A-Za-z_][A-Za-z0-9_]*)
      | (?P<op>[-+*^()])
    )""",
    re.VERBOSE,
)


class _UnknownName(ParseError):
    pass


def _tokenize(text: str, tensor: bool) -> list[tuple[str, str, int]]:
    tokens = []
    pos = 0
    text = text.rstrip()
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m:
            raise ParseError(f"unexpected character {text[pos]!r} in {text!r}", None, pos + 1)
        kind = m.lastgroup
        value = m.group(kind)
        if kind == "tensor" and not tensor:
            tokens.extend([("op", "(", m.start(kind)), ("name", "x", m.start(kind) + 1), ("op", ")", m.start(kind) + 2)])
        else:
            tokens.append((kind, value, m.start(kind)))
        pos = m.end()
    return tokens


class _Parser:
    def __init__(self, text: str, table: GeneratorTable, tensor: bool = False):
        self.text = text
        self.table = table
        self.tokens = _tokenize(text, tensor)
        self.i = 0

    def peek(self):
        return self.tokens[self.i] if self.i < len(self.tokens) else ("end", "", len(self.text))

    def take(self):
        tok = self.peek()
        self.i += 1
        return tok

    def error(self, msg: str):
        _, value, pos = self.peek()
        raise ParseError(f"{msg} in {self.text!r}", None, pos + 1)

    def expect(self, value: str):
        if self.peek()[1] != value:
            self.error(f"expected {value!r}")
        self.take()

    def const(self, c) -> GradedPoly:
        return GradedPoly(self.table, {(): c})

    # poly := term (('+'|'-') term)*
    def poly(self) -> GradedPoly:
        p = self.term()
        while self.peek()[1] in ("+", "-"):
            op = self.take()[1]
            q = self.term()
            p = p + q if op == "+" else p - q
        return p

    def term(self) -> GradedPoly:
        neg = False
        while self.peek()[1] in ("-", "+"):
            if self.take()[1] == "-":
                neg = not neg
        p = self.factor()
        while self.peek()[1] == "*":
            self.take()
            p = p * self.factor()
        return -p if neg else p

    def factor(self) -> GradedPoly:
        p = self.atom()
        if self.peek()[1] == "^":
            self.take()
            kind, value, _ = self.take()
            if kind != "num" or "/" in value:
                self.error("exponent must be a nonnegative integer")
            k = int(value)
            out = GradedPoly.unit(self.table)
            for _ in range(k):
                out = out * p
            p = out
        return p

    def atom(self) -> GradedPoly:
        kind, value, pos = self.peek()
        if kind == "num":
            self.take()
            return self.const(Fraction(value))
        if kind == "zpow":
            self.take()
            return self.const(parse_scalar(value))
        if kind == "name":
            self.take()
            if value not in self.table.names:
                raise _UnknownName(f"unknown generator {value!r} in {self.text!r}", None, pos + 1)
            return GradedPoly.gen(self.table, value)
        if value == "(":
            close = self._matching(self.i)
            inner = self.text[pos + 1 : self.tokens[close][2]]
            if "@" in inner:
                self.i = close + 1
                return self.const(parse_scalar(inner))
            self.take()
            p = self.poly()
            self.expect(")")
            return p
        self.error("expected a generator, number or parenthesis")

    def _matching(self, i: int) -> int:
        depth = 0
        for k in range(i, len(self.tokens)):
            v = self.tokens[k][1]
            if self.tokens[k][0] == "op" and v == "(":
                depth += 1
            elif self.tokens[k][0] == "op" and v == ")":
                depth -= 1
                if depth == 0:
                    return k
        self.error("unbalanced parenthesis")

    # tensor := tterm (('+'|'-') tterm)* ; tterm := product '(x)' product
    def tensor(self) -> TensorSquarePoly:
        t = self.tterm()
        while self.peek()[1] in ("+", "-"):
            op = self.take()[1]
            u = self.tterm()
            t = t + u if op == "+" else t - u
        return t

    def tterm(self) -> TensorSquarePoly:
        left = self.term()
        if self.peek()[0] != "tensor":
            if not left:
                return TensorSquarePoly(self.table)
            self.error("expected '(x)'")
        self.take()
        right = self.term_no_sign()
        return TensorSquarePoly.pure(left, right)

    def term_no_sign(self) -> GradedPoly:
        p = self.factor()
        while self.peek()[1] == "*":
            self.take()
            p = p * self.factor()
        return p

    def done(self):
        if self.i != len(self.tokens):
            self.error("unexpected trailing input")


def parse_poly(text, table: GeneratorTable) -> GradedPoly:
    p = _Parser(str(text), table)
    out = p.poly()
    p.done()
    return out


def parse_tensor(text, table: GeneratorTable) -> TensorSquarePoly:
    p = _Parser(str(text), table, tensor=True)
    out = p.tensor()
    p.done()
    return out


def parse_zeta(text) -> CycScalar:
    return parse_scalar(str(text))


def parse_element(group: AbelianGroup, item) -> GroupElement:
    """A degree: an int (rank 1), a list of ints, or text like ``1:0``."""
    if group.rank == 0 and str(item).strip() in ("0", "()", "[]", ""):
        return group.zero()
    if isinstance(item, int):
        exps = [item]
    elif isinstance(item, (list, tuple)):
        exps = list(item)
    else:
        text = str(item).strip().strip("()")
        try:
            exps = [int(t) for t in re.split(r"[:,\s]+", text) if t]
        except ValueError:
            raise ParseError(f"bad group element {item!r}") from None
    try:
        return group.element(exps)
    except BraidLieError as exc:
        raise ValidationError("group", str(exc)) from None


def parse_family(group: AbelianGroup, text: str) -> tuple[GroupElement, ...]:
    """``1,1,2`` for cyclic groups; ``(1,0),(0,1)`` or ``1:0,0:1`` otherwise."""
    text = text.strip()
    if "(" in text:
        parts = re.findall(r"\(([^()]*)\)", text)
    else:
        parts = [t for t in text.split(",") if t.strip()]
    return tuple(parse_element(group, p) for p in parts)


@dataclass
class ModelDocument:
    name: str
    description: str
    group: AbelianGroup
    chi: Bicharacter
    path: str | None = None
    presentation: dict | None = None
    lie: LiePresentation | None = None
    lie_bound: int | None = None
    hopf: dict | None = None
    raw: dict = field(default_factory=dict, repr=False)

    def generator_table(self) -> GeneratorTable | None:
        if self.presentation is not None:
            return self.presentation["table"]
        if self.lie is not None:
            return self.lie.table
        return None

    def build_presentation(self, bound: int | None = None) -> PresentedAlgebra:
        if self.presentation is None:
            raise ValidationError("presentation", "model has no presentation block")
        pres = self.presentation
        return quotient_present(pres["table"], pres["relations"], bound or pres["degree_bound"])

    def build_hopf(self, bound: int | None = None, validate: str = "strict") -> HopfInstance:
        if self.hopf is None:
            raise ValidationError("hopf", "model has no hopf block")
        h = self.hopf
        bound = bound or h.get("degree_bound")
        if h["source"] == "lie":
            if self.lie is None:
                raise ValidationError("hopf", "source is lie but the model has no lie block")
            return enveloping_build(self.lie, bound or self.lie_bound or 8, validate=validate)
        A = self.build_presentation(bound)
        table = A.table
        n = len(table.names)
        cop, eps, ant = {}, {}, {}
        for i, name in enumerate(table.names):
            cop[i] = (
                parse_tensor(h["coproduct"][name], table)
                if name in h.get("coproduct", {})
                else TensorSquarePoly(table, {((i,), ()): 1, ((), (i,)): 1})
            )
            eps[i] = _scalar_value(h.get("counit", {}).get(name, 0), table)
            ant[i] = parse_poly(h["antipode"][name], table) if name in h.get("antipode", {}) else GradedPoly(table, {(i,): -1})
        assert len(cop) == n
        return HopfInstance(A, self.chi, cop, eps, ant, self.name)


def _scalar_value(item, table: GeneratorTable):
    p = parse_poly(item, table)
    if any(w for w in p.terms):
        raise ValidationError("hopf", f"counit value {item!r} must be a scalar")
    return p.terms.get((), 0)


def _checked(parse, text, table: GeneratorTable, block: str):
    """Parse at load time; a name missing from the table is a validation error."""
    try:
        return parse(text, table)
    except _UnknownName as exc:
        raise ValidationError(block, str(exc)) from None


def _require(block: dict, key: str, name: str):
    if not isinstance(block, dict) or key not in block:
        raise ValidationError(name, f"missing key {key!r}")
    return block[key]


def _int(value, block: str, key: str) -> int:
    if isinstance(value, bool) or not isinstance(value, int):
        raise ValidationError(block, f"{key} must be an integer")
    return value


def load_model_text(text: str, path: str | None = None) -> ModelDocument:
    try:
        raw = yaml.safe_load(text)
    except yaml.YAMLError as exc:
        mark = getattr(exc, "problem_mark", None)
        line = mark.line + 1 if mark is not None else None
        col = mark.column + 1 if mark is not None else None
        raise ParseError(f"malformed model file: {getattr(exc, 'problem', exc)}", line, col) from None
    if not isinstance(raw, dict):
        raise ValidationError("model", "top level must be a mapping")
    g = _require(raw, "group", "model")
    torsion = g.get("torsion", []) or []
    if not isinstance(torsion, list):
        raise ValidationError("group", "torsion must be a list")
    try:
        group = AbelianGroup(tuple(_int(m, "group", "torsion") for m in torsion), _int(g.get("free_rank", 0), "group", "free_rank"))
        chi = Bicharacter(group, _int(_require(g, "chi_level", "group"), "group", "chi_level"), _require(g, "chi_matrix", "group") or [])
    except ValidationError:
        raise
    except BraidLieError as exc:
        raise ValidationError("group", str(exc)) from None
    except (ValueError, TypeError) as exc:
        raise ValidationError("group", str(exc)) from None

    doc = ModelDocument(
        name=str(raw.get("name", Path(path).stem if path else "model")),
        description=str(raw.get("description", "")),
        group=group,
        chi=chi,
        path=path,
        raw=raw,
    )

    if "presentation" in raw:
        pres = raw["presentation"]
        gens = _require(pres, "generators", "presentation")
        names, degrees = [], []
        for item in gens:
            name = str(_require(item, "name", "presentation"))
            names.append(name)
            degrees.append(parse_element(group, _require(item, "degree", "presentation")))
        try:
            table = GeneratorTable(tuple(names), tuple(degrees))
        except ValueError as exc:
            raise ValidationError("presentation", str(exc)) from None
        relations = [_checked(parse_poly, r, table, "presentation") for r in pres.get("relations", []) or []]
        for r in relations:
            if not r.is_homogeneous():
                raise ValidationError("presentation", f"relation {r!r} is not G-homogeneous")
        bound = _int(pres.get("degree_bound", max([r.max_length() for r in relations] + [1]) + 2), "presentation", "degree_bound")
        doc.presentation = {"table": table, "relations": relations, "degree_bound": bound}

    if "lie" in raw:
        lb = raw["lie"]
        components: dict = {}
        seen = set()
        for comp in _require(lb, "components", "lie"):
            deg = parse_element(group, _require(comp, "degree", "lie"))
            basis = [str(b) for b in _require(comp, "basis", "lie")]
            for b in basis:
                if b in seen:
                    raise ValidationError("lie", f"basis name {b!r} used twice")
                seen.add(b)
            components.setdefault(deg, []).extend(basis)
        names = [b for basis in components.values() for b in basis]
        table = GeneratorTable(tuple(names), tuple(d for d, basis in components.items() for _ in basis))
        brackets = {}
        for br in lb.get("brackets", []) or []:
            zeta = parse_zeta(_require(br, "zeta", "lie"))
            args = tuple(str(a) for a in _require(br, "args", "lie"))
            for a in args:
                if a not in names:
                    raise ValidationError("lie", f"bracket argument {a!r} is not a basis element")
            value = _checked(parse_poly, br.get("value", 0), table, "lie")
            vec = {}
            for w, c in value.terms.items():
                if len(w) != 1:
                    raise ValidationError("lie", f"bracket value for {args} must be linear in the basis")
                vec[names[w[0]]] = c
            brackets[(zeta, args)] = vec
        mode = lb.get("undeclared", "error")
        if mode not in ("zero", "error"):
            raise ValidationError("lie", "undeclared must be 'zero' or 'error'")
        try:
            doc.lie = LiePresentation(chi, components, brackets, undeclared_zero=(mode == "zero"))
        except BraidLieError as exc:
            raise ValidationError("lie", str(exc)) from None
        doc.lie_bound = lb.get("degree_bound")

    if "hopf" in raw:
        hb = raw["hopf"] or {}
        source = hb.get("source", "lie" if "lie" in raw else "presentation")
        if source not in ("lie", "presentation"):
            raise ValidationError("hopf", "source must be 'lie' or 'presentation'")
        if source == "presentation" and doc.presentation is None:
            raise ValidationError("hopf", "source is presentation but the model has no presentation block")
        if source == "lie" and doc.lie is None:
            raise ValidationError("hopf", "source is lie but the model has no lie block")
        table = doc.presentation["table"] if source == "presentation" else doc.lie.table
        for key in ("coproduct", "counit", "antipode"):
            for name in (hb.get(key) or {}):
                if name not in table.names:
                    raise ValidationError("hopf", f"{key} given for unknown generator {name!r}")
        for name, text in (hb.get("coproduct") or {}).items():
            _checked(parse_tensor, text, table, "hopf")
        for name, text in (hb.get("antipode") or {}).items():
            _checked(parse_poly, text, table, "hopf")
        doc.hopf = {
            "source": source,
            "coproduct": hb.get("coproduct") or {},
            "counit": hb.get("counit") or {},
            "antipode": hb.get("antipode") or {},
            "biproduct": bool(hb.get("biproduct", False)),
            "truncate": hb.get("truncate"),
            "degree_bound": hb.get("degree_bound"),
        }
    return doc


def load_model(path) -> ModelDocument:
    p = Path(path)
    try:
        text = p.read_text()
    except OSError as exc:
        raise ValidationError("model", f"cannot read {path}: {exc.strerror}") from None
    return load_model_text(text, str(p))
