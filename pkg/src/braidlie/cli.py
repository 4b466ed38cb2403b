"""Command-line front end.

Every command returns a ``RunReport``; the renderer is the only place that
turns reports into bytes, so output is identical across runs and workers.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path

import yaml

from .algebra import GradedPoly
from .cyclotomic import format_scalar, is_primitive_nth_root, multiplicative_order
from .errors import BraidLieError, LieValidationFailure, UnknownCommand, ValidationError
from .grading import (
    ZetaFamily,
    admissible_zetas,
    enumerate_zeta_families,
    format_permutation,
    is_zeta_family,
    list_zeta_values,
    parse_permutation,
    rho,
)
from .hopf import (
    HopfInstance,
    biproduct_build,
    biproduct_check,
    biproduct_relations,
    enveloping_build,
    enveloping_relations,
    group_likes,
    hopf_axioms_check,
    primitives_solve,
    skew_primitive_targets,
)
from .lie import (
    bracket_eval,
    check_jacobi1,
    check_jacobi2,
    check_main_theorem,
    check_symmetry,
    formal_table,
    lie_validate,
    minus_one,
)
from .model import ModelDocument, load_model, parse_family, parse_zeta
from .render import render_biproduct_key, render_poly, render_vector, render_word

COMMANDS = (
    "families",
    "rho",
    "bracket",
    "check-identities",
    "envelop",
    "hopf-check",
    "primitives",
    "biproduct",
    "paper-examples",
)

EXIT_PASS, EXIT_FAIL, EXIT_INPUT = 0, 1, 2


@dataclass
class RunReport:
    command: str
    model: str | None
    lines: list[str] = field(default_factory=list)
    passed: bool = True
    caveats: list[str] = field(default_factory=list)
    error: str | None = None

    @property
    def exit_code(self) -> int:
        if self.error is not None:
            return EXIT_INPUT
        return EXIT_PASS if self.passed else EXIT_FAIL

    def render(self, fmt: str = "text") -> str:
        if fmt == "machine":
            payload = {
                "command": self.command,
                "model": self.model,
                "passed": self.passed,
                "exit": self.exit_code,
                "lines": self.lines,
                "caveats": self.caveats,
                "error": self.error,
            }
            return json.dumps(payload, sort_keys=True, ensure_ascii=True) + "\n"
        out = [f"COMMAND {self.command}" + (f" model={self.model}" if self.model else "")]
        out.extend(self.lines)
        out.extend(f"CAVEAT {c}" for c in self.caveats)
        if self.error is not None:
            out.append(f"ERROR {self.error}")
        out.append(f"RESULT {'PASS' if self.passed and self.error is None else 'FAIL'}")
        return "\n".join(out) + "\n"


# --- helpers -------------------------------------------------------------------


def corpus_dir() -> Path:
    env = os.environ.get("BRAIDLIE_CORPUS")
    if env:
        return Path(env)
    return Path(str(resources.files("braidlie") / "corpus"))


def resolve_model(name: str) -> Path:
    p = Path(name)
    if p.is_file():
        return p
    base = corpus_dir()
    for cand in (base / name, base / f"{name}.model"):
        if cand.is_file():
            return cand
    raise ValidationError("model", f"no model file {name!r} (looked in {base})")


def _need(flags: dict, key: str, command: str):
    value = flags.get(key)
    if value is None:
        raise ValidationError(command, f"--{key.replace('_', '-')} is required")
    return value


def _pick_zeta(doc: ModelDocument, members, text) -> object:
    if text is not None:
        return parse_zeta(text)
    options = admissible_zetas(doc.chi, members)
    if len(options) != 1:
        raise ValidationError("bracket", f"{len(options)} admissible roots for these degrees; pass --zeta")
    return options[0]


def _bound(doc: ModelDocument, flags: dict, default: int | None = None) -> int | None:
    if flags.get("degree_bound") is not None:
        return flags["degree_bound"]
    if doc.hopf and doc.hopf.get("degree_bound"):
        return doc.hopf["degree_bound"]
    if doc.hopf and doc.hopf["source"] == "lie" and doc.lie_bound:
        return doc.lie_bound
    if doc.presentation is not None and not (doc.hopf and doc.hopf["source"] == "lie"):
        return doc.presentation["degree_bound"]
    return doc.lie_bound or default


def _truncation(doc: ModelDocument, flags: dict, bound: int | None) -> int | None:
    t = flags.get("truncate")
    if t is None:
        return None
    if t == -1:
        model_t = doc.hopf.get("truncate") if doc.hopf else None
        return model_t or bound
    return t


def _hopf(doc: ModelDocument, flags: dict) -> HopfInstance:
    bound = _bound(doc, flags, 8)
    if doc.hopf is not None:
        return doc.build_hopf(bound)
    if doc.lie is not None:
        return enveloping_build(doc.lie, bound)
    if doc.presentation is not None:
        return HopfInstance.primitive(doc.build_presentation(bound), doc.chi, doc.name)
    raise ValidationError("hopf", "model has no presentation, lie or hopf block")


# --- commands ------------------------------------------------------------------


def cmd_families(doc: ModelDocument, flags: dict, rep: RunReport) -> None:
    n = _need(flags, "n", "families")
    if flags.get("zeta") is not None:
        zeta = parse_zeta(flags["zeta"])
        fams = enumerate_zeta_families(doc.chi, n, zeta)
        rep.lines.append(f"FAMILIES n={n} zeta={format_scalar(zeta)} count={len(fams)}")
        rep.lines.extend(f"FAMILY {f}" for f in fams)
        return
    for zeta, count in list_zeta_values(doc.chi, n):
        rep.lines.append(f"ZETA {format_scalar(zeta)} order={multiplicative_order(zeta)} families={count}")


def cmd_rho(doc: ModelDocument, flags: dict, rep: RunReport) -> None:
    sigma = parse_permutation(_need(flags, "perm", "rho"))
    members = parse_family(doc.group, _need(flags, "family", "rho"))
    zeta = _pick_zeta(doc, members, flags.get("zeta"))
    fam = ZetaFamily(doc.chi, zeta, members)
    if len(sigma) != fam.n:
        raise ValidationError("rho", f"permutation of {len(sigma)} letters for a family of length {fam.n}")
    rep.lines.append(
        f"RHO sigma={format_permutation(sigma)} family={fam} zeta={format_scalar(zeta)} value={format_scalar(rho(sigma, fam))}"
    )


def cmd_bracket(doc: ModelDocument, flags: dict, rep: RunReport) -> None:
    if flags.get("args"):
        names = [a.strip() for a in flags["args"].split(",") if a.strip()]
        if doc.presentation is not None:
            A = doc.build_presentation(flags.get("degree_bound"))
        elif doc.lie is not None:
            A = enveloping_build(doc.lie, _bound(doc, flags, 8)).algebra
        else:
            raise ValidationError("bracket", "--args needs a model with generators")
        table = A.table
        for a in names:
            if a not in table.names:
                raise ValidationError("bracket", f"unknown generator {a!r}")
        xs = [GradedPoly.gen(table, a) for a in names]
        members = tuple(x.degree() for x in xs)
        zeta = _pick_zeta(doc, members, flags.get("zeta"))
        value = bracket_eval(xs, ZetaFamily(doc.chi, zeta, members), A)
        rep.lines.append(render_poly(value))
        return
    members = parse_family(doc.group, _need(flags, "family", "bracket"))
    zeta = _pick_zeta(doc, members, flags.get("zeta"))
    fam = ZetaFamily(doc.chi, zeta, members)
    table = formal_table(members)
    xs = [GradedPoly.gen(table, i) for i in range(len(members))]
    rep.lines.append(render_poly(bracket_eval(xs, fam)))


def _single_family_checks(doc: ModelDocument, flags: dict, rep: RunReport) -> None:
    members = parse_family(doc.group, flags["family"])
    zeta = _pick_zeta(doc, members, flags.get("zeta"))
    fam = ZetaFamily(doc.chi, zeta, members)
    for r in (check_symmetry(fam), check_main_theorem(fam, strict=False)):
        rep.lines.extend(r.lines)
        if not r.passed:
            rep.passed = False
            if r.witness:
                rep.lines.append(f"WITNESS {r.witness}")


def _tally(rep: RunReport, label: str, results) -> None:
    results = list(results)
    bad = [r for r in results if not r.passed]
    rep.lines.append(f"{label} instances={len(results)} {'FAIL' if bad else 'PASS'}")
    for r in bad[:3]:
        rep.lines.append(f"  {r.lines[-1]}" + (f" witness: {r.witness}" if r.witness else ""))
    if bad:
        rep.passed = False


def cmd_check_identities(doc: ModelDocument, flags: dict, rep: RunReport) -> None:
    if flags.get("family"):
        _single_family_checks(doc, flags, rep)
        return
    top = flags.get("n") or 3
    chi = doc.chi
    neg1 = minus_one(chi)
    elems = doc.group.elements() if doc.group.is_finite() else []
    for n in range(2, top + 1):
        for zeta, _ in list_zeta_values(chi, n):
            tag = f"n={n} zeta={format_scalar(zeta)}"
            fams = enumerate_zeta_families(chi, n, zeta)
            _tally(rep, f"SYMMETRY {tag}", (check_symmetry(f) for f in fams))
            if not is_primitive_nth_root(zeta, n):
                continue
            _tally(rep, f"MAIN {tag}", (check_main_theorem(f) for f in fams))
            _tally(rep, f"JACOBI1 {tag}", (check_jacobi1(f) for f in enumerate_zeta_families(chi, n + 1, zeta)))
            j2 = []
            for f in fams:
                for h in elems:
                    if all(is_zeta_family(chi, neg1, (h, g)) for g in f.members):
                        j2.append(check_jacobi2(f, h))
            _tally(rep, f"JACOBI2 {tag}", j2)
    if doc.lie is not None:
        r = lie_validate(doc.lie)
        rep.lines.extend(r.lines)
        rep.passed = rep.passed and r.passed


def cmd_envelop(doc: ModelDocument, flags: dict, rep: RunReport) -> None:
    if doc.lie is None:
        raise ValidationError("lie", "envelop needs a lie block")
    bound = _bound(doc, flags, 8)
    check = lie_validate(doc.lie)
    rep.lines.extend(check.lines)
    if not check.passed:
        rep.passed = False
        return
    H = enveloping_build(doc.lie, bound, validate="skip")
    A = H.algebra
    table = A.table
    for r in enveloping_relations(doc.lie):
        rep.lines.append(f"RELATION {render_poly(r)} = 0")
    rep.lines.append(f"RULES count={len(A.rules)} stabilized={str(A.stabilized).lower()} bound={bound}")
    for lead in sorted(A.rules, key=lambda w: (len(w), w)):
        rep.lines.append(f"RULE {render_word(table, lead)} -> {render_vector(table, A.rules[lead])}")
    levels = A.basis_levels(bound)
    rep.lines.append(f"DIMENSIONS by word length 0..{len(levels) - 1}: " + " ".join(str(len(lvl)) for lvl in levels))
    basis = A.finite_basis()
    if basis is not None:
        rep.lines.append(f"FINITE dimension={len(basis)}")
    else:
        rep.caveats.append(f"graded dimensions listed only up to length {bound}")
    independent = all(A.is_irreducible((i,)) for i in range(len(table.names)))
    rep.lines.append(f"EMPIRICAL basis of P stays independent in U(P): {str(independent).lower()}")


def cmd_hopf_check(doc: ModelDocument, flags: dict, rep: RunReport) -> None:
    H = _hopf(doc, flags)
    bound = H.algebra.bound
    r = hopf_axioms_check(H, _truncation(doc, flags, bound))
    for line in r.lines:
        if line.startswith("CAVEAT "):
            rep.caveats.append(line[len("CAVEAT ") :])
        else:
            rep.lines.append(line)
    rep.passed = r.passed


def cmd_primitives(doc: ModelDocument, flags: dict, rep: RunReport) -> None:
    H = _hopf(doc, flags)
    t = _truncation(doc, flags, H.algebra.bound)
    P = primitives_solve(H, t)
    rep.lines.append(f"PRIMITIVES dimension={P.dimension()}")
    for g in P.degrees():
        for v in P.components[g]:
            rep.lines.append(f"PRIMITIVE degree={g} {render_vector(H.table, v)}")
    if H.algebra.finite_basis() is None:
        rep.caveats.append(f"primitives searched among words of length <= {t}")


def cmd_biproduct(doc: ModelDocument, flags: dict, rep: RunReport) -> None:
    H = _hopf(doc, flags)
    B = biproduct_build(H)
    r = biproduct_check(B)
    rep.lines.extend(r.lines)
    rep.lines.extend(biproduct_relations(B))
    likes = group_likes(B)
    rep.lines.append("GROUPLIKES " + " ".join(render_biproduct_key(B, k) for k in likes))
    zero = B.group.zero()
    for i, name in enumerate(H.table.names):
        ok = skew_primitive_targets(B, ((i,), zero))
        rep.lines.append(f"SKEW-PRIMITIVE {name} {'PASS' if ok else 'FAIL'}")
        rep.passed = rep.passed and ok
    rep.passed = rep.passed and r.passed


def load_cases(base: Path) -> list[dict]:
    path = base / "cases.yaml"
    try:
        cases = yaml.safe_load(path.read_text())
    except OSError as exc:
        raise ValidationError("corpus", f"cannot read {path}: {exc.strerror}") from None
    if not isinstance(cases, list):
        raise ValidationError("corpus", "cases.yaml must be a list")
    return cases


def run_case(base: Path, case: dict) -> str:
    flags = dict(case.get("flags") or {})
    model = case.get("model")
    return run(case["command"], str(base / f"{model}.model") if model else None, flags, label=model).render()


def cmd_paper_examples(flags: dict, rep: RunReport) -> None:
    base = corpus_dir()
    cases = load_cases(base)
    jobs = flags.get("jobs") or 1
    with ThreadPoolExecutor(max_workers=jobs) as pool:
        outputs = list(pool.map(lambda c: run_case(base, c), cases))
    failed = 0
    for case, text in zip(cases, outputs):
        expected_path = base / "expected" / f"{case['id']}.txt"
        if flags.get("regenerate"):
            expected_path.parent.mkdir(parents=True, exist_ok=True)
            expected_path.write_text(text)
            status = "WRITTEN"
        elif not expected_path.is_file():
            status = "MISSING"
        else:
            status = "PASS" if expected_path.read_text() == text else "FAIL"
        if status in ("MISSING", "FAIL"):
            failed += 1
        rep.lines.append(f"CASE {case['id']} {status}")
    rep.lines.append(f"SUMMARY cases={len(cases)} passed={len(cases) - failed} failed={failed}")
    rep.passed = failed == 0


HANDLERS = {
    "families": cmd_families,
    "rho": cmd_rho,
    "bracket": cmd_bracket,
    "check-identities": cmd_check_identities,
    "envelop": cmd_envelop,
    "hopf-check": cmd_hopf_check,
    "primitives": cmd_primitives,
    "biproduct": cmd_biproduct,
}


def execute(doc: ModelDocument | None, command: str, flags: dict) -> RunReport:
    """Dispatch one command; module errors propagate to the caller."""
    if command not in COMMANDS:
        raise UnknownCommand(command)
    rep = RunReport(command, doc.name if doc is not None else None)
    if command == "paper-examples":
        cmd_paper_examples(flags, rep)
        return rep
    if doc is None:
        raise ValidationError(command, "--model is required")
    HANDLERS[command](doc, flags, rep)
    return rep


def run(command: str, model: str | None, flags: dict, label: str | None = None) -> RunReport:
    """``execute`` with errors folded into the report."""
    try:
        doc = load_model(resolve_model(model)) if model else None
        rep = execute(doc, command, flags)
        if label is not None:
            rep.model = label
        return rep
    except LieValidationFailure as exc:
        rep = RunReport(command, label or model, passed=False)
        rep.lines.append(f"LIE validation failed: {exc}")
        return rep
    except (BraidLieError, ValueError) as exc:
        rep = RunReport(command, label or model)
        rep.error = f"{type(exc).__name__}: {exc}"
        rep.passed = False
        return rep


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="braidlie", description="Lie algebras and Hopf algebras over G-graded modules")
    parser.add_argument("command", help="one of: " + ", ".join(COMMANDS))
    parser.add_argument("--model", help="model file path or corpus model name")
    parser.add_argument("--degree-bound", type=int, dest="degree_bound")
    parser.add_argument("--truncate", type=int, nargs="?", const=-1, help="allow truncation, optionally at this length")
    parser.add_argument("--format", choices=("text", "machine"), default="text")
    parser.add_argument("--n", type=int, help="family length")
    parser.add_argument("--zeta", help="root of unity, e.g. z^1@3 or -1")
    parser.add_argument("--family", help="degrees, e.g. 1,1,2 or (1,0),(0,1)")
    parser.add_argument("--perm", help="permutation in one-line notation, e.g. 2,1,3")
    parser.add_argument("--args", help="generator names, e.g. x,x,y")
    parser.add_argument("--jobs", type=int, default=1, help="worker threads for paper-examples")
    parser.add_argument("--regenerate", action="store_true", help="rewrite the expected corpus outputs")
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    ns = parser.parse_args(argv)
    flags = {k: v for k, v in vars(ns).items() if k not in ("command", "model", "format")}
    if ns.command not in COMMANDS:
        sys.stderr.write(f"braidlie: unknown command {ns.command!r}\n")
        return EXIT_INPUT
    rep = run(ns.command, ns.model, flags)
    sys.stdout.write(rep.render(ns.format))
    return rep.exit_code


if __name__ == "__main__":
    sys.exit(main())
