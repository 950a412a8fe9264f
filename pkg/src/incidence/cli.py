"""Command line front end: ``incidence <command> --space NAME [options]``.

Every command prints a markdown report (or JSON with ``--format json``);
``--out-dir`` writes both ``<command>.md`` and ``<command>.json``.  Exit
status is 0 when every requested check passes, 1 otherwise (the JSON report
names a witness), and 2 on malformed input.
"""
from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction
from pathlib import Path

from . import bialgebra as bi
from . import oracles
from . import simplicial as sx
from . import spans
from .builders import (boolean_poset, chain_poset, divisor_poset, free_monoidal_closure,
                       monotone_surjection_space, poset_nerve)
from .builders.intervals import boolean_intervals
from .builders.surjections import finite_surjections_weighted
from .errors import ClosureEscape, ExactnessNotCertified, HypothesisFailed, \
    IncidenceError, MalformedInput

MINUS = "−"
SPACES = ("chain", "divisor-lattice", "boolean-poset", "monotone-surjections",
          "boolean-intervals", "faa-di-bruno")
POSETS = {"chain": chain_poset, "divisor-lattice": divisor_poset, "boolean-poset": boolean_poset}
IDENTITIES = ("lemma-rec", "lemma-idprime", "theorem", "mobius")
CHARACTERS = ("zeta", "defect", "pi", "principal-word")


class Usage(Exception):
    """Bad values that argparse cannot catch on its own."""


def positive(text):
    n = int(text)
    if n < 1:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {text}")
    return n


def natural(text):
    n = int(text)
    if n < 0:
        raise argparse.ArgumentTypeError(f"expected a non-negative integer, got {text}")
    return n


# ---------------------------------------------------------------------------
# formatting

def fmt_q(x) -> str:
    x = Fraction(x)
    s = str(abs(x))
    return MINUS + s if x < 0 else s


def fmt_combo(col: dict, order=()) -> str:
    """``{label: coeff}`` as ``−(3) + (1,2,2) + 2·(2,1,2)``."""
    rank = {r: k for k, r in enumerate(order)}
    terms = sorted(((r, Fraction(v)) for r, v in col.items() if v),
                   key=lambda t: (rank.get(t[0], len(rank)), str(t[0])))
    if not terms:
        return "0"
    out = []
    for k, (r, v) in enumerate(terms):
        mag = "" if abs(v) == 1 else f"{abs(v)}·"
        if k == 0:
            out.append((MINUS if v < 0 else "") + mag + str(r))
        else:
            out.append((f" {MINUS} " if v < 0 else " + ") + mag + str(r))
    return "".join(out)


def md_table(header, rows) -> str:
    lines = ["| " + " | ".join(header) + " |", "|" + "---|" * len(header)]
    lines += ["| " + " | ".join(str(c) for c in row) + " |" for row in rows]
    return "\n".join(lines)


def md_checks(checks) -> str:
    rows = []
    for c in checks:
        w = json.dumps(c["witnesses"][0], ensure_ascii=False) if c.get("witnesses") else ""
        rows.append((c["name"], "pass" if c["passed"] else "FAIL", w))
    return md_table(("check", "verdict", "witness"), rows)


def _check(r) -> dict:
    return r.to_json() if hasattr(r, "to_json") else dict(r)


# ---------------------------------------------------------------------------
# spaces

class Space:
    """The data a command runs on: ``X``, a monoidal structure, and provenance."""

    def __init__(self, name, X, M, poset=None, raw=None, degree=None):
        self.name, self.X, self.M = name, X, M
        self.poset = poset
        self.raw = raw if raw is not None else X
        self.degree = degree


def load_space(args, levels: int) -> Space:
    if args.input:
        try:
            X, M = sx.loads(Path(args.input).read_text())
        except OSError as exc:
            raise MalformedInput(f"cannot read {args.input}: {exc}") from exc
        report = sx.validate_structure(X)
        if not report:
            raise MalformedInput(f"{args.input} is not a simplicial set",
                                 witness=report.witnesses[:5])
        if M is None:
            raw = X
            X, M = free_monoidal_closure(X, args.max_word)
            return Space(args.input, X, M, raw=raw)
        return Space(args.input, X, M)
    name = args.space
    if name in POSETS:
        size = args.size if args.size is not None else {"chain": 3, "divisor-lattice": 12,
                                                         "boolean-poset": 3}[name]
        elements, leq = POSETS[name](size)
        raw = poset_nerve(elements, leq, levels)
        X, M = free_monoidal_closure(raw, args.max_word)
        return Space(f"{name} {size}", X, M, poset=(elements, leq), raw=raw)
    if name == "monotone-surjections":
        X, M = monotone_surjection_space(args.max_source, levels)
        return Space(f"{name} {args.max_source}", X, M, degree=args.max_source)
    if name == "boolean-intervals":
        D = boolean_intervals(args.bound, levels)
        return Space(f"{name} {args.bound}", D.X, D.M)
    if name == "faa-di-bruno":
        X, M = finite_surjections_weighted(args.bound, levels)
        return Space(f"{name} {args.bound}", X, M)
    raise Usage("one of --space or --input is required")


def basis_columns(X, requested) -> list:
    if not requested:
        return list(X.levels[1])
    known = set(X.levels[1])
    out = []
    for b in requested:
        if b in known:
            out.append(b)
        elif f"[{b}]" in known:
            out.append(f"[{b}]")
        else:
            raise Usage(f"unknown basis element {b!r}")
    return out


# ---------------------------------------------------------------------------
# commands; each returns (passed, json report, markdown)

def cmd_validate(args, sp: Space):
    X = sp.raw
    checks = [sx.validate_structure(X)]
    if X.N >= 2:
        checks.append(sx.check_decomposition(X))
    if sp.M is not None:
        checks += [sx.validate_monoidal(sp.X, sp.M), sx.check_culf_monoidal(sp.X, sp.M)]
    fin = sx.check_finiteness(X)
    doc = {"checks": [_check(c) for c in checks],
           "finiteness": {"max_length": fin.max_length,
                          "uncertified": sorted(fin.unsafe)}}
    md = md_checks(doc["checks"]) + f"\n\nlongest witnessed length: {fin.max_length}\n"
    return all(checks), doc, md


def cmd_build(args, sp: Space):
    doc = sx.to_json(sp.X, sp.M)
    if args.output:
        Path(args.output).write_text(sx.dumps(sp.X, sp.M) + "\n", encoding="utf-8")
    sizes = [len(level) for level in sp.X.levels]
    md = f"levels: {sizes}\n" + (f"written to {args.output}\n" if args.output else "")
    return True, {"sizes": sizes, "data": doc}, md


def cmd_bialgebra(args, sp: Space):
    B = bi.build_bialgebra(sp.X, sp.M, check=False)
    checks = [bi.check_coassociative(B), bi.check_counit(B), bi.check_compatibility(B)]
    rows, table = [], {}
    for f in basis_columns(sp.X, args.basis):
        delta = {f"{a} ⊗ {b}": c for (a, b), c in B.terms[f]}
        table[f] = {"delta": {k: str(v) for k, v in delta.items()},
                    "epsilon": str(B.epsilon(f))}
        rows.append((f, fmt_combo(delta), fmt_q(B.epsilon(f))))
    doc = {"checks": [c.to_json() for c in checks], "table": table}
    md = md_checks(doc["checks"]) + "\n\n" + md_table(("f", "Δ(f)", "ε(f)"), rows)
    return all(checks), doc, md + "\n"


def _antipode(args, sp):
    B = bi.build_bialgebra(sp.X, sp.M)
    return B, bi.weak_antipode(B, max_power=args.max_power, strict=False)


def cmd_antipode(args, sp: Space):
    B, W = _antipode(args, sp)
    if args.power is not None:
        if args.power >= len(W.powers):
            mat = bi.QMatrix.zero(B.ids, B.ids)
        else:
            mat = W.powers[args.power]
        title = f"S_{args.power}(f)"
    else:
        mat, title = W.matrix, "S(f)"
    check = bi.verify_weak_antipode(B, W)
    rows, table = [], {}
    for f in basis_columns(sp.X, args.basis):
        col = mat.columns.get(f, {})
        table[f] = {"value": {r: str(v) for r, v in col.items()},
                    "length": W.lengths[f], "certificate": W.certificates[f]}
        rows.append((f, fmt_combo(col, B.ids), W.lengths[f], W.certificates[f]))
    doc = {"checks": [check.to_json()], "table": table, "max_length": W.max_length}
    md = md_checks(doc["checks"]) + "\n\n" + md_table(("f", title, "length", "certificate"), rows)
    return bool(check), doc, md + "\n"


def _recursive_mobius(B, max_depth=512):
    """``μ(f) = ε(f) − Σ c·μ(a)`` over terms ``a ⊗ b`` of ``Δ(f)`` with ``b`` nondegenerate."""
    memo: dict = {}
    active: set = set()

    def mu(f):
        if f in memo:
            return memo[f]
        if f in active or len(active) > max_depth:
            raise ExactnessNotCertified("Möbius recursion does not terminate", witness=f)
        active.add(f)
        tot = B.epsilon(f)
        for (a, b), c in B.terms[f]:
            if b not in B.degenerate:
                tot -= c * mu(a)
        active.discard(f)
        memo[f] = tot
        return tot

    return mu


def cmd_mobius(args, sp: Space):
    B, W = _antipode(args, sp)
    data = bi.mobius_functor(B, W)
    recursive = _recursive_mobius(B)
    classical = None
    if sp.poset is not None:
        elements, leq = sp.poset
        mu = oracles.classical_mobius(elements, leq)
        classical = {f"[{x}<={y}]": v for (x, y), v in mu.items()}
    elif args.space == "boolean-intervals":
        classical = {f"B_{n}": v for n, v in oracles.binomial_mobius(args.bound).items()}
    rows, table, bad = [], {}, []
    for f in basis_columns(sp.X, args.basis):
        val = data.value(f)
        entry = {"mu_bar": str(val), "certificate": W.certificates[f],
                 "recursion": str(recursive(f))}
        if val != recursive(f):
            bad.append({"column": f, "mu_bar": str(val), "recursion": str(recursive(f))})
        if classical is not None and f in classical:
            entry["classical"] = str(classical[f])
            if Fraction(classical[f]) != val:
                bad.append({"column": f, "mu_bar": str(val), "classical": str(classical[f])})
        table[f] = entry
        rows.append((f, fmt_q(val), W.certificates[f],
                     fmt_q(classical[f]) if classical is not None and f in classical else ""))
    cross = sx.CheckResult("classical recursion", not bad, bad)
    doc = {"checks": [data.check.to_json(), cross.to_json()], "table": table}
    md = md_checks(doc["checks"]) + "\n\n" + md_table(
        ("f", "μ̄(f)", "certificate", "classical"), rows)
    return bool(data.check) and bool(cross), doc, md + "\n"


def cmd_quotient(args, sp: Space):
    B, W = _antipode(args, sp)
    Q = bi.connected_quotient(B, W)
    rows, table = [], {}
    for h in Q.basis:
        col = Q.S_H.columns.get(h, {})
        table[h] = {r: str(v) for r, v in col.items()}
        rows.append((h, fmt_combo(col, Q.basis)))
    doc = {"checks": [Q.check.to_json()], "basis": list(Q.basis), "S_H": table,
           "pi": {f: Q.project(f) for f in B.ids}}
    md = md_checks(doc["checks"]) + f"\n\nH has {len(Q.basis)} basis elements\n\n" + \
        md_table(("h", "S_H(h)"), rows)
    return bool(Q.check), doc, md + "\n"


def _levels_for(args):
    if args.level is not None:
        return args.level
    return 4 if args.identity in ("lemma-idprime", "lemma-rec") else 2


def cmd_verify(args, sp: Space):
    L = _levels_for(args)
    if args.mode == "matrix":
        return _verify_matrix(args, sp, L)
    if sp.X.weighted:
        # classes of a groupoid are not a set-level span; use the matrices
        raise Usage(f"{sp.name} is weighted class data: use --mode matrix")
    if args.identity.startswith("lemma"):
        start = 1 if args.identity == "lemma-rec" else 0
        reports = [spans.verify_identity(sp.X, sp.M, args.identity, n)
                   for n in range(start, L + 1)]
    else:
        reports = [spans.verify_identity(sp.X, sp.M, args.identity, L)]
    rows = []
    for r in reports:
        for c in r.certificates:
            rows.append((r.identity, f"{c.lhs} ≅ {c.rhs}", "iso" if c else "FAIL",
                         c.fibres, c.note or (json.dumps(c.counterexample, ensure_ascii=False)
                                              if c.counterexample else "")))
        rows.append((r.identity, "span_to_matrix of both sides",
                     "equal" if r.matrices_agree else "FAIL", "", ""))
    doc = {"mode": "objective", "reports": [r.to_json() for r in reports]}
    md = md_table(("identity", "statement", "verdict", "fibres", "note"), rows)
    return all(r.passed for r in reports), doc, md + "\n"


def _verify_matrix(args, sp, L):
    B, W = _antipode(args, sp)
    A = B.algebra
    checks = []
    if args.identity in ("lemma-idprime", "lemma-rec"):
        idp = bi.structural_endomorphism(B, "Id'")
        P = bi.antipode_powers(B, L + 1)
        bad = []
        for n in range(L + 1):
            if args.identity == "lemma-idprime":
                eqs = [(f"Id' * S_{n}", bi.convolve(B, idp, P[n], A)),
                       (f"S_{n} * Id'", bi.convolve(B, P[n], idp, A))]
                rhs = P[n] + P[n + 1]
            else:
                eqs = [(f"S_1 * S_{n}", bi.convolve(B, P[1], P[n], A)),
                       (f"S_{n} * S_1", bi.convolve(B, P[n], P[1], A))]
                rhs = P[n + 1]
            for name, lhs in eqs:
                bad += [{"identity": name, "row": r, "column": c, "lhs": str(x), "rhs": str(y)}
                        for r, c, x, y in lhs.difference(rhs)[:3]]
        checks.append(sx.CheckResult(args.identity, not bad, bad))
    elif args.identity == "theorem":
        checks.append(bi.verify_weak_antipode(B, W))
    else:
        checks.append(bi.mobius_functor(B, W).check)
    doc = {"mode": "matrix", "checks": [c.to_json() for c in checks]}
    return all(checks), doc, md_checks(doc["checks"]) + "\n"


def _character(args, sp, B, W):
    if args.character == "zeta":
        return bi.zeta_character()
    if args.character == "defect":
        if sp.degree is None:
            raise Usage("the defect character needs --space monotone-surjections")
        return bi.defect_character(sp.degree)
    if args.character == "pi":
        return bi.quotient_character(bi.connected_quotient(B, W))
    raise Usage(f"unknown character {args.character!r}")


def cmd_invert(args, sp: Space):
    if args.character == "principal-word":
        Y, MY, phi = spans.principal_word_span(sp.raw, args.max_word + 1)
        try:
            rep = spans.check_and_invert_multiplicative(Y, MY, phi, args.level or 2)
        except HypothesisFailed as exc:
            return _hypothesis_failure(phi.name, exc)
        return _inversion_result(rep, None)
    B, W = _antipode(args, sp)
    phi = _character(args, sp, B, W)
    try:
        inv, res = bi.invert_multiplicative(B, phi, W)
        if sp.X.weighted:
            return _inversion_result(None, (inv, res, B, args.basis, sp.X))
        value = phi.value
        target = phi.target
        span = spans.identity_character(
            sp.X, sp.M, phi.name, lambda f: next(iter(value(f))), target)
        L = args.level if args.level is not None else sp.X.N - 1
        rep = spans.check_and_invert_multiplicative(sp.X, sp.M, span, L)
    except HypothesisFailed as exc:
        return _hypothesis_failure(phi.name, exc)
    return _inversion_result(rep, (inv, res, B, args.basis, sp.X))


def _hypothesis_failure(name, exc):
    doc = {"character": name, "hypotheses": "fail", "error": str(exc),
           "witness": sx._plain(exc.witness)}
    w = json.dumps(doc["witness"][:1] if isinstance(doc["witness"], list) else doc["witness"],
                   ensure_ascii=False)
    return False, doc, f"hypothesis check failed for {name}: {exc}\n\nwitness: {w}\n"


def _inversion_result(rep, matrix_part):
    doc, checks, rows, passed = {}, [], [], True
    if rep is not None:
        doc["objective"] = rep.to_json()
        checks = [c.to_json() for c in rep.checks]
        passed = rep.passed
        rows = [(f"{c.lhs} ≅ {c.rhs}", "iso" if c else "FAIL") for c in rep.certificates]
    md_inv = ""
    if matrix_part is not None:
        inv, res, B, basis, X = matrix_part
        checks.append(res.to_json())
        passed = passed and bool(res)
        doc["inverse"] = {}
        table = []
        for f in basis_columns(X, basis):
            col = inv.columns.get(f, {})
            doc["inverse"][f] = {r: str(v) for r, v in col.items()}
            table.append((f, fmt_combo(col, inv.rows)))
        md_inv = "\n\n" + md_table(("f", "(φ∘S)(f)"), table)
    doc["checks"] = checks
    md = md_checks(checks) + ("\n\n" + md_table(("certificate", "verdict"), rows)
                              if rows else "") + md_inv
    return passed, doc, md + "\n"


COMMANDS = {
    "validate": cmd_validate, "build": cmd_build, "bialgebra": cmd_bialgebra,
    "antipode": cmd_antipode, "mobius": cmd_mobius, "quotient": cmd_quotient,
    "verify": cmd_verify, "invert": cmd_invert,
}


def parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="incidence",
        description="Incidence bialgebras, weak antipodes and Möbius inversion "
                    "on finite decomposition spaces.")
    sub = p.add_subparsers(dest="command", required=True)
    for name in COMMANDS:
        s = sub.add_parser(name)
        src = s.add_mutually_exclusive_group(required=True)
        src.add_argument("--space", choices=SPACES)
        src.add_argument("--input", help="simplicial data as JSON")
        s.add_argument("--size", type=positive,
                       help="chain length, divisor-lattice n, or boolean-poset rank")
        s.add_argument("--max-source", type=positive, default=4)
        s.add_argument("--bound", type=positive, default=4,
                       help="degree bound (boolean-intervals) or max size (faa-di-bruno)")
        s.add_argument("--max-word", type=positive, default=1,
                       help="word length of the free monoidal closure of a nerve")
        s.add_argument("--levels", type=positive, help="top simplicial level N")
        s.add_argument("--basis", action="append", help="restrict tables to these classes")
        s.add_argument("--max-power", type=positive, default=64)
        s.add_argument("--format", choices=("markdown", "json"), default="markdown")
        s.add_argument("--out-dir", help="write <command>.md and <command>.json here")
        if name == "build":
            s.add_argument("--output", help="data file to write")
        if name == "antipode":
            s.add_argument("--power", type=natural, help="show S_n instead of S")
        if name == "verify":
            s.add_argument("--identity", choices=IDENTITIES, required=True)
            s.add_argument("--level", type=natural)
            s.add_argument("--mode", choices=("objective", "matrix"), default="objective")
        if name == "invert":
            s.add_argument("--character", choices=CHARACTERS, required=True)
            s.add_argument("--level", type=natural)
    return p


def default_levels(args) -> int:
    if args.levels is not None:
        return args.levels
    if args.command == "verify":
        return _levels_for(args) + 2
    if args.command == "validate":
        return 4
    return 3 if args.space != "boolean-intervals" else 2


def run(argv=None, stdout=None) -> int:
    out = stdout or sys.stdout
    p = parser()
    args = p.parse_args(argv)
    try:
        sp = load_space(args, default_levels(args))
        passed, doc, md = COMMANDS[args.command](args, sp)
    except (MalformedInput, Usage) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (HypothesisFailed, ExactnessNotCertified, ClosureEscape, IncidenceError) as exc:
        passed = False
        doc = {"error": type(exc).__name__, "message": str(exc),
               "witness": sx._plain(exc.witness)}
        md = f"{type(exc).__name__}: {exc}\n\nwitness: " + \
            json.dumps(doc["witness"], ensure_ascii=False) + "\n"
    report = {"command": args.command, "space": args.space or args.input,
              "passed": bool(passed), **doc}
    text = json.dumps(report, ensure_ascii=False, indent=1, default=str)
    header = f"# incidence {args.command}: {report['space']}\n\n" + \
        f"verdict: {'pass' if passed else 'FAIL'}\n\n"
    if args.out_dir:
        d = Path(args.out_dir)
        d.mkdir(parents=True, exist_ok=True)
        (d / f"{args.command}.json").write_text(text + "\n", encoding="utf-8")
        (d / f"{args.command}.md").write_text(header + md, encoding="utf-8")
    out.write(text + "\n" if args.format == "json" else header + md)
    return 0 if passed else 1


def main():
    if hasattr(sys.stdout, "reconfigure"):
        sys.stdout.reconfigure(encoding="utf-8")
    sys.exit(run())


if __name__ == "__main__":
    main()
