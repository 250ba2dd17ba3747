"""Command line driver.

    primstab words --max-level 2
    primstab classify rep.json
    primstab scan-q --lambda 4 --max-level 6 rep.json
    primstab check-hlp --max-level 6 --epsilon 0 rep.json
    primstab certify-ps --max-level 8 --lambda 4 --seed 0 rep.json
    primstab bip-probe --max-level 8 rep.json

Reports go to --out (default: the current directory) as CSV tables and a
JSON summary carrying the tool version and the resolved configuration.
Exit status: 0 success or certified, 2 inconclusive or findings, 1 input error.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from . import __version__
from .bip import LABELS, bip_probe
from .certify import Certificate, certify_primitive_stability, scan_q, validate_certificate
from .farey import edges_at_level, enumerate_edges
from .hexagon import EndpointOracle, check_half_length, verify_coxeter
from .minkowski import TOL_CLASS, TOL_FORM, DomainError, Kind, class_margin, classify, translation_length
from .report import write_csv, write_json
from .rep import InputError, load_rep

EXIT_OK, EXIT_INPUT, EXIT_INCONCLUSIVE = 0, 1, 2

# Options that change how the work is scheduled or where it is written,
# never what is computed; they stay out of the embedded config.
_NOT_CONFIG = {"jobs", "out", "func"}


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_INPUT, f"{self.prog}: error: {message}\n")


def _positive(kind):
    def parse(text):
        try:
            v = kind(text)
        except ValueError:
            raise argparse.ArgumentTypeError(f"not a number: {text!r}") from None
        if not v > 0:
            raise argparse.ArgumentTypeError(f"must be positive, got {text}")
        return v
    return parse


def _nonneg(kind):
    def parse(text):
        try:
            v = kind(text)
        except ValueError:
            raise argparse.ArgumentTypeError(f"not a number: {text!r}") from None
        if v < 0:
            raise argparse.ArgumentTypeError(f"must be nonnegative, got {text}")
        return v
    return parse


def _header(args) -> dict:
    cfg = {k: v for k, v in vars(args).items() if k not in _NOT_CONFIG}
    return {"tool": "primstab", "version": __version__, "config": cfg}


def _load(args):
    rep = load_rep(args.input, args.tol_form)
    if args.d is not None and rep.d != args.d:
        raise InputError(f"{args.input}: representation acts on H^{rep.d}, but --d {args.d} was given")
    return rep


def cmd_words(args) -> int:
    rows = []
    for e in edges_at_level(args.max_level):
        r1, r2 = e.endpoints
        rows.append([e.address, e.level, str(r1), str(r2), e.basis.first, e.basis.second])
    header = ["address", "level", "left", "right", "first", "second"]
    write_csv(args.out / "words.csv", header, rows)
    write_json(args.out / "words.json", {**_header(args), "count": len(rows)})
    for row in rows:
        print("\t".join(str(v) for v in row))
    return EXIT_OK


def cmd_classify(args) -> int:
    rep = _load(args)
    words = args.word or ["a", "b", "ab", "aB"]
    out, status = [], EXIT_OK
    for w in words:
        g = rep.image(w)
        kind = classify(g, args.tol_class)
        trans = translation_length(g, args.tol_class) if kind is not Kind.INCONCLUSIVE else float("nan")
        out.append({"word": w, "kind": kind.value, "trans": trans,
                    "margin": class_margin(g, args.tol_class)})
        if kind is Kind.INCONCLUSIVE:
            status = EXIT_INCONCLUSIVE
        print(f"{w}\t{kind.value}\t{trans:.17g}")
    write_json(args.out / "classify.json", {**_header(args), "d": rep.d, "words": out})
    return status


def cmd_scan_q(args) -> int:
    rep = _load(args)
    rep_ = scan_q(rep, args.lam, args.max_level, args.tol_class)
    write_csv(args.out / "scan_q.csv", ["level", "fraction", "word", "word_length", "trans"],
              [[r.level, r.fraction, r.word, r.word_length, r.trans] for r in rep_.rows])
    summary = {
        **_header(args),
        "count_below_lambda": rep_.count_below_lambda,
        "primsys_upper": rep_.primsys_upper,
        "primsys_lower": rep_.primsys_lower,
        "non_loxodromic": rep_.non_loxodromic,
        "monotone_violations": rep_.monotone_violations,
        "decreasing_chain": rep_.decreasing_chain,
    }
    write_json(args.out / "scan_q.json", summary)
    print(f"count_below_lambda={rep_.count_below_lambda} primsys_upper={rep_.primsys_upper:.17g}")
    return EXIT_INCONCLUSIVE if rep_.non_loxodromic else EXIT_OK


def cmd_check_hlp(args) -> int:
    rep = _load(args)
    oracle = EndpointOracle(rep)
    rows, failed = [], 0
    for e in enumerate_edges(args.max_level):
        h = check_half_length(rep, e, args.epsilon, oracle)
        dev = [h.deviations.get(k, float("nan")) for k in ("U", "V", "UV")]
        rows.append([e.address, e.level, e.basis.first, e.basis.second, *dev, h.bound, h.passed,
                     h.diagnostic])
        failed += not h.passed
    header = ["address", "level", "first", "second", "dev_first", "dev_second", "dev_product",
              "bound", "passed", "diagnostic"]
    write_csv(args.out / "hlp.csv", header, rows)
    summary = {**_header(args), "edges": len(rows), "failed": failed,
               "max_deviation": max((max(r[4:7]) for r in rows if r[4] == r[4]), default=float("nan"))}
    if rep.coxeter is not None:
        summary["coxeter"] = verify_coxeter(rep)
    write_json(args.out / "hlp.json", summary)
    print(f"edges={len(rows)} failed={failed}")
    return EXIT_INCONCLUSIVE if failed else EXIT_OK


def cmd_certify(args) -> int:
    rep = _load(args)
    result = certify_primitive_stability(rep, args.max_level, args.lam, args.epsilon,
                                         seed=args.seed, jobs=args.jobs)
    body = {**_header(args), "d": rep.d, "representation": rep.to_dict()}
    if isinstance(result, Certificate):
        body["status"] = "certified"
        body["certificate"] = result
        if args.validate > 0:
            body["validation"] = validate_certificate(result, rep, args.validate,
                                                      args.validate_length, args.seed)
        print(f"certified level={result.level} N={result.threshold_level} "
              f"m={result.m:.17g} c={result.c:.17g}")
    else:
        body["status"] = "inconclusive"
        body["inconclusive"] = result
        print(f"inconclusive: {result.reason}")
    write_json(args.out / "certificate.json", body)
    if "validation" in body and body["validation"].violations:
        return EXIT_INCONCLUSIVE
    return EXIT_OK if body["status"] == "certified" else EXIT_INCONCLUSIVE


def cmd_bip(args) -> int:
    rep = _load(args)
    try:
        report = bip_probe(rep, args.max_level, jobs=args.jobs)
    except DomainError as e:
        print(f"inconclusive: {e}")
        write_json(args.out / "bip.json", {**_header(args), "error": str(e)})
        return EXIT_INCONCLUSIVE
    for label in LABELS:
        write_csv(args.out / f"bip_{label}.csv", ["level", "word", "e_word", "dist", "kind"],
                  [[r.level, r.word, r.e_word, r.dist, r.kind] for r in report.rows[label]])
    summary = {**_header(args), "supremum": report.supremum, "increment": report.increment,
               "max_step": report.max_step, "level_sup": report.level_sup,
               "running_sup": report.running_sup, "findings": report.findings}
    write_json(args.out / "bip.json", summary)
    for label in LABELS:
        print(f"{label}\tsup={report.supremum[label]:.17g}\tincrement={report.increment[label]:.17g}")
    return EXIT_INCONCLUSIVE if report.findings else EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="primstab", description="Primitive stability tools for rank-2 free groups.")
    p.add_argument("--version", action="version", version=f"primstab {__version__}")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def common(sp, needs_input=True):
        if needs_input:
            sp.add_argument("input", help="representation JSON file")
            sp.add_argument("--d", type=int, default=None, help="expected dimension of H^d")
            sp.add_argument("--tol-form", type=_positive(float), default=TOL_FORM)
            sp.add_argument("--tol-class", type=_positive(float), default=TOL_CLASS)
        sp.add_argument("--out", type=Path, default=Path("."), help="output directory")
        sp.add_argument("--jobs", type=_positive(int), default=1, help="parallelism hint")

    sp = sub.add_parser("words", help="list the Farey edges of one level")
    sp.add_argument("--max-level", type=_nonneg(int), required=True)
    common(sp, needs_input=False)
    sp.set_defaults(func=cmd_words)

    sp = sub.add_parser("classify", help="classify images of words")
    sp.add_argument("--word", action="append", help="word over a, A, b, B (repeatable)")
    common(sp)
    sp.set_defaults(func=cmd_classify)

    sp = sub.add_parser("scan-q", help="translation lengths of primitive classes")
    sp.add_argument("--lambda", dest="lam", type=_positive(float), required=True)
    sp.add_argument("--max-level", type=_nonneg(int), required=True)
    common(sp)
    sp.set_defaults(func=cmd_scan_q)

    sp = sub.add_parser("check-hlp", help="half-length property on every edge up to a level")
    sp.add_argument("--max-level", type=_nonneg(int), required=True)
    sp.add_argument("--epsilon", type=_nonneg(float), default=0.0)
    common(sp)
    sp.set_defaults(func=cmd_check_hlp)

    sp = sub.add_parser("certify-ps", help="certificate of primitive stability")
    sp.add_argument("--max-level", type=_nonneg(int), default=8)
    sp.add_argument("--lambda", dest="lam", type=_positive(float), default=4.0)
    sp.add_argument("--epsilon", type=_nonneg(float), default=0.0)
    sp.add_argument("--seed", type=int, required=True)
    sp.add_argument("--validate", type=_nonneg(int), default=0, help="number of random words to validate")
    sp.add_argument("--validate-length", type=_positive(int), default=40)
    common(sp)
    sp.set_defaults(func=cmd_certify)

    sp = sub.add_parser("bip-probe", help="distances from the hexagon feet to palindromic axes")
    sp.add_argument("--max-level", type=_nonneg(int), required=True)
    common(sp)
    sp.set_defaults(func=cmd_bip)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        args.out.mkdir(parents=True, exist_ok=True)
        return args.func(args)
    except (InputError, OSError) as e:
        print(f"primstab: input error: {e}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
