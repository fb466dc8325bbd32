"""Command-line entry point: ``isorank <command> ...``.

Exit codes: 0 success, 1 computation error, 2 input error.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import os
import re
import sys
from dataclasses import dataclass
from fractions import Fraction
from typing import Any, Callable, Dict, List, Optional, Sequence

from .algebra import ExtensionOverflow, MultiPoly, PolyError
from .algebra.serial import ScalarDecoder, SchemaError, poly_from_json, poly_to_json, scalar_to_json
from .apolarity import ApolarityError, QuadraticFormSpec, harmonic_project
from .decompose import DEFAULT_TOL, DecompositionError, IsotropicDecomposition, catalecticant_lower_bound, verify
from .monomials import MonomialError, MonomialSpec, monomial_decompose, monomial_irk
from .numeric import NumericError
from .quadrics import (
    NormalSequence,
    QuadricError,
    TraceZeroSym,
    classify_irk,
    decompose_normal_sequence,
    diagonal_merge,
    normal_blocks_matrix,
)
from .secant_lab import (
    PRIMES,
    CharacteristicError,
    ExperimentConfig,
    ParameterError,
    PresentationError,
    QuadricPointError,
    SchemeError,
    appendix_suite,
    cases,
    expected_secant_dim,
    generic_irk,
    postulation_check,
    scheme_from_json,
    terracini_grid,
    terracini_profile,
)
from .secant_lab.quadric_fp import is_prime
from .ternary import TernaryError, ternary_decompose

SEED_ENV = "ISORANK_SEED"

INPUT_ERRORS = (
    SchemaError,
    json.JSONDecodeError,
    OSError,
    QuadricError,
    MonomialError,
    TernaryError,
    ApolarityError,
    SchemeError,
    ParameterError,
    PresentationError,
    PolyError,
    ValueError,
)
COMPUTE_ERRORS = (
    DecompositionError,
    ExtensionOverflow,
    NumericError,
    CharacteristicError,
    QuadricPointError,
    ArithmeticError,
    RuntimeError,
)


class InputError(ValueError):
    """Bad command-line arguments or input files."""


@dataclass
class CliConfig:
    command: str
    fmt: str
    output: Optional[str]
    seed: int
    tol: float
    prime: int
    verbose: int


# --- input helpers -------------------------------------------------------------------


def _load_json(path: str) -> Any:
    with open(path, encoding="utf-8") as fh:
        text = fh.read()
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise SchemaError(f"{path}: malformed JSON at line {exc.lineno}, column {exc.colno}: {exc.msg}") from exc


def _load_poly(path: str) -> MultiPoly:
    try:
        return poly_from_json(_load_json(path))
    except SchemaError as exc:
        raise SchemaError(f"{path}: {exc}") from exc


def _form_from_json(obj: Any, arity: int, dec: ScalarDecoder) -> QuadraticFormSpec:
    if obj is None or obj == "standard":
        return QuadraticFormSpec.standard(arity - 1)
    if isinstance(obj, dict) and "hyperbolic" in obj:
        return QuadraticFormSpec.hyperbolic(arity - 1, int(obj["hyperbolic"]))
    if isinstance(obj, dict) and "gram" in obj:
        rows = [[dec(x, f"form.gram[{i}][{j}]") for j, x in enumerate(r)] for i, r in enumerate(obj["gram"])]
        return QuadraticFormSpec(tuple(tuple(r) for r in rows))
    raise SchemaError("form: expected 'standard', {\"hyperbolic\": k} or {\"gram\": [[...]]}")


def _load_monomial(path: str) -> MonomialSpec:
    obj = _load_json(path)
    if not isinstance(obj, dict) or "forms" not in obj or "exponents" not in obj:
        raise SchemaError(f"{path}: monomial spec needs 'forms' and 'exponents'")
    dec = ScalarDecoder()
    forms = [[dec(x, f"forms[{i}][{j}]") for j, x in enumerate(row)] for i, row in enumerate(obj["forms"])]
    if not forms:
        raise SchemaError(f"{path}: 'forms' is empty")
    spec = _form_from_json(obj.get("form"), len(forms[0]), dec)
    return MonomialSpec(forms, [int(a) for a in obj["exponents"]], spec)


_PAIR = re.compile(r"\{\s*([^,{}]+)\s*,\s*(\d+)\s*\}")


def parse_normal_seq(arg: str) -> NormalSequence:
    """A JSON file, ``[{0,3},{0,2}]`` pairs, or compact ``0^3,0^2`` notation."""
    if os.path.exists(arg):
        return NormalSequence.from_json(_load_json(arg))
    pairs = _PAIR.findall(arg)
    if pairs:
        return NormalSequence.parse(",".join(f"{lam}^{s}" for lam, s in pairs))
    try:
        return NormalSequence.parse(arg)
    except (ValueError, ZeroDivisionError) as exc:
        raise SchemaError(f"normal sequence {arg!r}: {exc}") from exc


# --- output helpers ------------------------------------------------------------------


def _emit(cfg: CliConfig, payload: Dict[str, Any], text: Callable[[], str],
          rows: Optional[List[Dict[str, Any]]] = None) -> None:
    if cfg.fmt == "json":
        out = json.dumps(payload, indent=2, sort_keys=True) + "\n"
    elif cfg.fmt == "csv":
        if rows is None:
            rows = [{k: v for k, v in payload.items() if not isinstance(v, (dict, list))}]
        buf = io.StringIO()
        if rows:
            w = csv.DictWriter(buf, fieldnames=list(rows[0].keys()), lineterminator="\n")
            w.writeheader()
            w.writerows(rows)
        out = buf.getvalue()
        if "seed" in payload:
            print(f"seed: {payload['seed']}", file=sys.stderr)
    else:
        out = text()
        if not out.endswith("\n"):
            out += "\n"
    if cfg.output:
        with open(cfg.output, "w", encoding="utf-8") as fh:
            fh.write(out)
    else:
        sys.stdout.write(out)


def _dec_text(dec: IsotropicDecomposition) -> str:
    lines = []
    for c, p in dec.terms:
        lines.append(f"  ({_fmt(c)}) * ({' , '.join(_fmt(x) for x in p)})^{dec.degree}")
    return "\n".join(lines)


def _fmt(x) -> str:
    if isinstance(x, complex):
        return f"{x.real:.12g}{x.imag:+.12g}i"
    return str(x)


# --- commands ------------------------------------------------------------------------


def _decompose_target(args, cfg: CliConfig) -> Dict[str, Any]:
    kind = args.kind
    if kind == "ternary":
        h = _load_poly(args.input)
        res = ternary_decompose(h, seed=cfg.seed, tol=cfg.tol)
        dec = res.decomposition
        return {"kind": kind, "irk": res.rank.rank, "exact": res.exact, "target": h, "dec": dec,
                "extra": {"branch": res.rank.branch}}
    if kind == "monomial":
        m = _load_monomial(args.input)
        info = monomial_irk(m)
        dec = monomial_decompose(m, seed=cfg.seed, tol=cfg.tol)
        return {"kind": kind, "irk": info.isotropic_rank, "exact": dec.is_exact(), "target": m.polynomial(),
                "dec": dec, "extra": {"waring_rank": info.waring_rank, "non_isotropic": info.non_isotropic}}
    if kind == "quadric":
        if args.normal_seq:
            seq = parse_normal_seq(args.normal_seq)
            h = normal_blocks_matrix(seq)
            cls = classify_irk(h)
            dec = decompose_normal_sequence(seq)
        else:
            if not args.input:
                raise InputError("irk quadric needs a matrix file or --normal-seq")
            h = TraceZeroSym.from_json(_load_json(args.input))
            cls = classify_irk(h)
            m = h.tolist()
            if any(not m[i][j] == 0 for i in range(h.size) for j in range(h.size) if i != j):
                raise DecompositionError("explicit decompositions from a general matrix need its normal sequence")
            lams = [m[i][i] for i in range(h.size) if not m[i][i] == 0]
            vecs = [[Fraction(int(k == i)) for k in range(h.size)] for i in range(h.size) if not m[i][i] == 0]
            dec = diagonal_merge(lams, vecs) if lams else IsotropicDecomposition(2, h.size, [], QuadraticFormSpec.standard(h.size - 1))
        return {"kind": kind, "irk": cls.irk, "exact": dec.is_exact(), "target": h.quadratic_form(), "dec": dec,
                "extra": {"rank": cls.rank, "nilpotent": cls.nilpotent, "rank_square": cls.rank_square}}
    raise InputError(f"unknown target kind {kind!r}")


def cmd_irk(args, cfg: CliConfig, with_dec: bool) -> int:
    if args.kind == "quadric" and not with_dec:
        if args.normal_seq:
            h = normal_blocks_matrix(parse_normal_seq(args.normal_seq))
        elif args.input:
            h = TraceZeroSym.from_json(_load_json(args.input))
        else:
            raise InputError("irk quadric needs a matrix file or --normal-seq")
        cls = classify_irk(h)
        payload = {"irk": cls.irk, "rank": cls.rank, "nilpotent": cls.nilpotent, "rank_square": cls.rank_square}
        _emit(cfg, payload, lambda: f"rank {cls.rank}\nirk {cls.irk}")
        return 0
    r = _decompose_target(args, cfg)
    dec: IsotropicDecomposition = r["dec"]
    payload: Dict[str, Any] = {"kind": r["kind"], "irk": r["irk"], "size": dec.size(), "exact": r["exact"],
                               "seed": cfg.seed, "decomposition": dec.to_json()}
    payload.update(r["extra"])
    if with_dec:
        payload["catalecticant_lower_bound"] = catalecticant_lower_bound(r["target"])

    def text() -> str:
        head = f"seed: {cfg.seed}\n{r['irk']}\n"
        return head + f"{dec.size()}-term decomposition ({'exact' if r['exact'] else 'float'}):\n" + _dec_text(dec)

    if with_dec and cfg.fmt == "json":
        payload = payload["decomposition"] if args.raw else payload
    _emit(cfg, payload, text)
    return 0


def cmd_verify(args, cfg: CliConfig) -> int:
    h = _load_poly(args.poly)
    obj = _load_json(args.dec)
    if isinstance(obj, dict) and "decomposition" in obj:
        obj = obj["decomposition"]
    dec = IsotropicDecomposition.from_json(obj)
    rep = verify(dec, h, tol=cfg.tol)
    payload = {"valid": rep.valid, "exact": rep.exact, "residual_norm": rep.residual_norm,
               "failures": rep.failures, "size": dec.size()}
    _emit(cfg, payload, lambda: ("valid" if rep.valid else "INVALID: " + "; ".join(rep.failures)))
    return 0 if rep.valid else 1


def cmd_project(args, cfg: CliConfig) -> int:
    f = _load_poly(args.poly)
    obj = _load_json(args.form) if args.form else None
    w = _form_from_json(obj, f.arity, ScalarDecoder())
    h, g = harmonic_project(f, w)
    payload = {"harmonic": poly_to_json(h), "quotient": poly_to_json(g)}
    _emit(cfg, payload, lambda: f"harmonic part: {h}\nquotient g (f = q g + h): {g}")
    return 0


def cmd_generic_rank(args, cfg: CliConfig) -> int:
    v = generic_irk(args.n, args.d)
    _emit(cfg, {"n": args.n, "d": args.d, "generic_irk": v}, lambda: str(v))
    return 0


def _range(s: str) -> range:
    a, _, b = s.partition("-")
    return range(int(a), int(b or a) + 1)


def cmd_secant_dim(args, cfg: CliConfig) -> int:
    if args.grid:
        rows = terracini_grid(_range(args.n_range), _range(args.d_range), cfg.prime, cfg.seed, args.retries,
                              workers=args.workers)
        data = [{"n": r.n, "d": r.d, "r": r.r, "expected": r.expected, "computed": r.computed,
                 "seeds_used": r.seeds_used} for r in rows]
        ok = all(r.ok for r in rows)
        payload = {"seed": cfg.seed, "p": cfg.prime, "rows": data, "all_match": ok}

        def text() -> str:
            lines = [f"seed: {cfg.seed}", "n d r expected computed seeds_used"]
            lines += [f"{d['n']} {d['d']} {d['r']} {d['expected']} {d['computed']} {d['seeds_used']}" for d in data]
            lines.append("all match" if ok else "MISMATCH")
            return "\n".join(lines)

        _emit(cfg, payload, text, rows=data)
        return 0
    if args.n is None or args.d is None or args.r is None:
        raise InputError("secant-dim needs --n, --d and --r (or --grid)")
    ExperimentConfig(args.n, args.d, args.r, cfg.prime, cfg.seed, args.retries)
    prof = terracini_profile(args.n, args.d, args.r, cfg.prime, cfg.seed, args.retries)
    row = {"n": args.n, "d": args.d, "r": args.r, "expected": expected_secant_dim(args.n, args.d, args.r),
           "computed": prof.dim(args.r), "seeds_used": len(prof.seeds_used)}
    payload = dict(row, seed=cfg.seed, p=cfg.prime)
    _emit(cfg, payload, lambda: f"seed: {cfg.seed}\n{row['computed']} (expected {row['expected']})", rows=[row])
    return 0


def cmd_postulate(args, cfg: CliConfig) -> int:
    obj = _load_json(args.spec)
    if isinstance(obj, dict):
        obj.setdefault("seed", cfg.seed)
        obj.setdefault("p", cfg.prime)
    s = scheme_from_json(obj)
    d = args.d if args.d is not None else int(obj.get("d", 0))
    if d < 1:
        raise InputError("postulate needs --d or a 'd' field")
    res = postulation_check(s, d)
    payload = {"seed": s.seed, "p": s.p, "n": s.n, "d": d, "h0": res.h0, "conditions_rank": res.conditions_rank,
               "length": res.length, "expected_h0": res.expected_h0}
    _emit(cfg, payload, lambda: f"seed: {s.seed}\nh0 {res.h0}\nconditions {res.conditions_rank}")
    return 0


def cmd_appendix(args, cfg: CliConfig) -> int:
    names = None
    if args.case:
        known = cases()
        names = [c for c in known if c == args.case or c.startswith(args.case + "_")]
        if not names:
            raise InputError(f"unknown appendix case {args.case!r}; known: {', '.join(known)}")
    results = appendix_suite(names, seed=cfg.seed)
    data = []
    for r in results:
        row = r.to_dict()
        row.pop("seconds")
        data.append(row)
    ok = all(r.ok for r in results)
    payload = {"seed": cfg.seed, "cases": data, "all_ok": ok}

    def text() -> str:
        lines = [f"seed: {cfg.seed}"]
        for r in results:
            lines.append(f"{'PASS' if r.ok else 'FAIL'} {r.name}: n={r.n} d={r.d} p={r.p} h0={r.h0} "
                         f"ambient={r.ambient} printed={r.printed}")
        return "\n".join(lines)

    _emit(cfg, payload, text, rows=data)
    return 0 if ok else 1


# --- parser --------------------------------------------------------------------------


def _default_seed() -> int:
    v = os.environ.get(SEED_ENV)
    if v is None:
        return 0
    try:
        return int(v)
    except ValueError:
        raise InputError(f"{SEED_ENV} must be an integer, got {v!r}") from None


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("json", "csv", "text"), default="text", dest="fmt")
    common.add_argument("--output", "-o", default=None, help="write the report to this path")
    common.add_argument("--seed", type=int, default=None, help=f"random seed (default ${SEED_ENV} or 0)")
    common.add_argument("--tol", type=float, default=DEFAULT_TOL, help="float-backend tolerance")
    common.add_argument("--p", type=int, default=PRIMES[0], help="prime for finite-field experiments")
    common.add_argument("-v", "--verbose", action="count", default=0)

    ap = argparse.ArgumentParser(prog="isorank", description="Isotropic ranks of harmonic polynomials.")
    sub = ap.add_subparsers(dest="command", required=True)

    for name, helptext in (("irk", "isotropic rank"), ("decompose", "explicit isotropic decomposition")):
        p = sub.add_parser(name, parents=[common], help=helptext)
        p.add_argument("kind", choices=("ternary", "quadric", "monomial"))
        p.add_argument("input", nargs="?", help="polynomial, matrix or monomial JSON")
        p.add_argument("--normal-seq", default=None, help="normal sequence: file, '[{0,3},{0,2}]' or '0^3,0^2'")
        p.add_argument("--raw", action="store_true", help="(decompose, json) emit only the decomposition")

    p = sub.add_parser("verify", parents=[common], help="check a decomposition against a polynomial")
    p.add_argument("poly")
    p.add_argument("dec")

    p = sub.add_parser("project", parents=[common], help="harmonic projection f = q g + h")
    p.add_argument("poly")
    p.add_argument("--form", default=None, help="quadratic form JSON (default standard)")

    p = sub.add_parser("secant-dim", parents=[common], help="secant dimension from Terracini ranks")
    p.add_argument("--n", type=int)
    p.add_argument("--d", type=int)
    p.add_argument("--r", type=int)
    p.add_argument("--retries", type=int, default=3)
    p.add_argument("--grid", action="store_true", help="all r up to the generic rank over n/d ranges")
    p.add_argument("--n-range", default="3-8")
    p.add_argument("--d-range", default="3-6")
    p.add_argument("--workers", type=int, default=1)

    p = sub.add_parser("postulate", parents=[common], help="postulation of a scheme on a quadric")
    p.add_argument("--spec", required=True)
    p.add_argument("--d", type=int, default=None)

    p = sub.add_parser("appendix", parents=[common], help="base-case interpolation checks")
    p.add_argument("--case", default=None, help="case name or family prefix (cubic3, post3, ...)")

    p = sub.add_parser("generic-rank", parents=[common], help="isotropic rank of a general harmonic form")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--d", type=int, required=True)
    return ap


def run(argv: Optional[Sequence[str]] = None) -> int:
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as exc:
        return 0 if exc.code == 0 else 2
    try:
        seed = args.seed if args.seed is not None else _default_seed()
        if args.tol <= 0:
            raise InputError("--tol must be positive")
        if not is_prime(args.p):
            raise InputError(f"--p {args.p} is not prime")
        cfg = CliConfig(args.command, args.fmt, args.output, seed, args.tol, args.p, args.verbose)
        if args.command in ("irk", "decompose"):
            return cmd_irk(args, cfg, with_dec=args.command == "decompose")
        handlers = {
            "verify": cmd_verify,
            "project": cmd_project,
            "generic-rank": cmd_generic_rank,
            "secant-dim": cmd_secant_dim,
            "postulate": cmd_postulate,
            "appendix": cmd_appendix,
        }
        return handlers[args.command](args, cfg)
    except InputError as exc:
        print(f"input error: {exc}", file=sys.stderr)
        return 2
    except COMPUTE_ERRORS as exc:
        print(f"computation error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 1
    except INPUT_ERRORS as exc:
        print(f"input error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 2


def main() -> None:
    sys.exit(run())


__all__ = ["run", "main", "build_parser", "parse_normal_seq", "CliConfig"]
