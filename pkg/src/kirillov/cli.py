"""Command line entry point.

Exit status: 0 when every check on the invoked path passed, 1 on an
assertion failure (witness on stderr), 2 on usage or input errors.
"""
from __future__ import annotations

import argparse
import json
import re
import sys

from .chgroup import ch_components
from .coadjoint import orbit, orbit_partition, partition_summary
from .corpus import resolve_algebra
from .dualpol import Functional, IdentityViolation, annihilator, bilinear_form, check_orbit_identities, standard_polarization
from .exactnum import FactorialNotInvertible, FieldMismatch
from .finite import DEFAULT_BOUND, EnumerationTooLarge, FiniteBackend
from .finrep import AuditFailure, character_table_csv, kirillov_audit
from .linalg import rank
from .liealg import InvalidAlgebra, LieAlgebra
from .verify import render, verify_all

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2
DEFAULT_SEED = 20240611


class UsageError(Exception):
    pass


def _field_spec(text: str | None):
    if text is None:
        return None
    t = text.strip()
    if t.upper() == "Q":
        return "Q"
    m = re.fullmatch(r"(?:F_?|Fp:?|GF\(?)?(\d+)\)?", t, re.IGNORECASE)
    if not m:
        raise UsageError(f"unrecognised field {text!r}; use Q or F<p>")
    return {"Fp": int(m.group(1))}


def _load(args) -> LieAlgebra:
    ref = args.algebra_opt or args.algebra
    if not ref:
        raise UsageError("an algebra file or bundled name is required")
    try:
        return resolve_algebra(ref, _field_spec(args.field))
    except FileNotFoundError as exc:
        raise UsageError(str(exc)) from exc
    except (json.JSONDecodeError, KeyError, TypeError) as exc:
        raise UsageError(f"malformed algebra file {ref}: {exc}") from exc
    except (FieldMismatch, ZeroDivisionError) as exc:
        raise UsageError(f"cannot read {ref} over the requested field: {exc}") from exc


def _vector(g: LieAlgebra, text: str, what: str) -> tuple:
    try:
        return g.parse_vector(text)
    except (ValueError, FieldMismatch, ZeroDivisionError) as exc:
        raise UsageError(f"bad {what} {text!r}: {exc}") from exc


def _functional(g: LieAlgebra, text: str | None) -> Functional:
    if text is None:
        raise UsageError("--functional is required")
    if "," not in text:
        text = text.replace("*", "")
    return Functional(g, _vector(g, text, "functional"))


def _emit(args, payload: dict, text: str) -> None:
    if args.format == "json":
        sys.stdout.write(json.dumps(payload, indent=2, sort_keys=True) + "\n")
    else:
        sys.stdout.write(text)


def _span_text(g: LieAlgebra, space, dual=False) -> list[str]:
    return [g.format_vector(v, dual=dual) for v in space.basis]


# -- subcommands -------------------------------------------------------------

def cmd_validate(args) -> int:
    ref = args.algebra_opt or args.algebra
    try:
        g = _load(args)
    except InvalidAlgebra as exc:
        print(f"invalid: {exc}", file=sys.stderr)
        return EXIT_FAIL
    payload = {
        "schema": 1,
        "algebra": g.name or ref,
        "field": g.field.to_spec(),
        "dim": g.dim,
        "class": g.nilpotency_class,
        "valid": True,
    }
    _emit(args, payload, f"{payload['algebra']}: valid, field {g.field}, dim {g.dim}, class {g.nilpotency_class}\n")
    return EXIT_OK


def cmd_ch_eval(args) -> int:
    g = _load(args)
    if args.x is None or args.y is None:
        raise UsageError("--x and --y are required")
    x, y = _vector(g, args.x, "--x"), _vector(g, args.y, "--y")
    comps = ch_components(x, y, g)
    z = g.zero()
    for c in comps:
        z = tuple(a + b for a, b in zip(z, c))
    payload = {
        "schema": 1,
        "x": g.format_vector(x),
        "y": g.format_vector(y),
        "z": g.format_vector(z),
        "components": [g.format_vector(c) for c in comps],
    }
    lines = [payload["z"]] + [f"Z{n}: {s}" for n, s in enumerate(payload["components"], 1)]
    _emit(args, payload, "\n".join(lines) + "\n")
    return EXIT_OK


def cmd_polarize(args) -> int:
    g = _load(args)
    f = _functional(g, args.functional)
    pc = standard_polarization(f)
    levels = []
    for i, lvl in enumerate(pc.levels):
        levels.append({
            "level": i,
            "g": _span_text(g, lvl.algebra),
            "j": _span_text(g, lvl.ideal),
            "z": _span_text(g, lvl.center),
            "a": None if lvl.abelian is None else _span_text(g, lvl.abelian),
        })
    perp = annihilator(pc.r)
    payload = {
        "schema": 1,
        "functional": g.format_vector(f.coeffs, dual=True),
        "grade": pc.grade,
        "r": _span_text(g, pc.r),
        "r_perp": _span_text(g, perp, dual=True),
        "rank_B": rank(bilinear_form(f), g.field),
        "levels": levels,
    }
    if g.field.is_finite and args.check:
        rep = check_orbit_identities(f, pc)
        payload["orbit_identities"] = {"stabilizer": rep.stabilizer_size, "orbit": rep.orbit_size}

    def fmt(xs):
        return "span(" + ", ".join(xs) + ")" if xs else "0"

    lines = [f"functional: {payload['functional']}"]
    for lv in levels:
        a = "" if lv["a"] is None else f"  a_{lv['level']} = {fmt(lv['a'])}"
        lines.append(f"level {lv['level']}: g = {fmt(lv['g'])}  j = {fmt(lv['j'])}  z = {fmt(lv['z'])}{a}")
    lines += [f"grade: {pc.grade}", f"r: {fmt(payload['r'])}", f"r_perp: {fmt(payload['r_perp'])}"]
    if "orbit_identities" in payload:
        oi = payload["orbit_identities"]
        lines.append(f"orbit identities: ok (|R| = {oi['stabilizer']}, |f + r_perp| = {oi['orbit']})")
    _emit(args, payload, "\n".join(lines) + "\n")
    return EXIT_OK


def cmd_orbits(args) -> int:
    g = _load(args)
    if not g.field.is_finite:
        if args.functional is None:
            raise UsageError("orbits over Q are infinite; pass --functional for the orbit dimension")
        orb = orbit(_functional(g, args.functional))
        payload = {"schema": 1, "field": "Q", "functional": args.functional, "orbit_dim": orb.tangent_dim}
        _emit(args, payload, f"orbit dimension: {orb.tangent_dim}\n")
        return EXIT_OK
    be = FiniteBackend(g, args.bound)
    if args.functional is not None:
        orb = orbit(_functional(g, args.functional), backend=be)
        payload = {"schema": 1, "functional": args.functional, "size": orb.size,
                   "points": [list(p) for p in orb.points]}
        _emit(args, payload, f"orbit size: {orb.size}\n")
        return EXIT_OK
    summary = partition_summary(orbit_partition(g, backend=be))
    payload = {"schema": 1, "algebra": g.name, **summary}
    hist = ", ".join(f"{k}: {v}" for k, v in summary["size_histogram"].items())
    _emit(args, payload, f"orbits: {summary['orbits']}\nfunctionals: {summary['functionals']}\nsizes: {hist}\n")
    return EXIT_OK


def cmd_chartable(args) -> int:
    g = _load(args)
    if not g.field.is_finite:
        raise UsageError("character tables need an algebra over F_p")
    sys.stdout.write(character_table_csv(g, args.bound))
    return EXIT_OK


def cmd_audit(args) -> int:
    g = _load(args)
    if not g.field.is_finite:
        raise UsageError("the audit needs an algebra over F_p")
    rep = kirillov_audit(g, args.bound, strict=False)
    d = rep.to_dict()
    lines = [f"{rep.algebra}: |G| = {rep.group_order}, {rep.orbits} orbits, {rep.classes} classes, sum d^2 = {rep.sum_d2}"]
    lines.append("degrees: " + ", ".join(f"{k} x{v}" for k, v in d["degrees"].items()))
    for k, c in d["clauses"].items():
        lines.append(f"({k}) {'pass' if c['pass'] else 'FAIL'}: {c['description']}")
    _emit(args, d, "\n".join(lines) + "\n")
    for k, w in rep.witnesses.items():
        print(f"clause {k} witness: {w}", file=sys.stderr)
    return EXIT_OK if rep.passed else EXIT_FAIL


def cmd_verify_all(args) -> int:
    outcomes = verify_all(seed=args.seed, samples=args.samples)
    sys.stdout.write(render(outcomes, "json" if args.format == "json" else "text"))
    return EXIT_OK if all(o.passed for o in outcomes) else EXIT_FAIL


COMMANDS = {
    "validate": (cmd_validate, "check antisymmetry, Jacobi and nilpotency"),
    "ch-eval": (cmd_ch_eval, "evaluate log(exp x exp y) and its homogeneous parts"),
    "polarize": (cmd_polarize, "run the standard polarization recursion for a functional"),
    "orbits": (cmd_orbits, "enumerate coadjoint orbits (F_p) or report the orbit dimension (Q)"),
    "chartable": (cmd_chartable, "character table as CSV, values in powers of z = exp(2 pi i/p)"),
    "audit": (cmd_audit, "brute-force orbit/character correspondence audit"),
    "verify-all": (cmd_verify_all, "run the acceptance suite"),
}


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--algebra", dest="algebra_opt", help="algebra JSON file or bundled name")
    common.add_argument("--field", help="reinterpret the structure constants over Q or F<p>")
    common.add_argument("--format", choices=("text", "json", "csv"), default="text")
    common.add_argument("--bound", type=int, default=DEFAULT_BOUND, help="largest p^n to enumerate")
    common.add_argument("--samples", type=int, default=100)
    common.add_argument("--seed", type=int, default=DEFAULT_SEED)

    parser = argparse.ArgumentParser(prog="kirillov", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)
    for name, (_, help_text) in COMMANDS.items():
        p = sub.add_parser(name, help=help_text, parents=[common])
        if name != "verify-all":
            p.add_argument("algebra", nargs="?")
        if name == "ch-eval":
            p.add_argument("--x")
            p.add_argument("--y")
        if name in ("polarize", "orbits"):
            p.add_argument("--functional", help='coordinates "0,0,1" or a combination like "Z*"')
        if name == "polarize":
            p.add_argument("--check", action="store_true", help="also verify the orbit identities (F_p)")
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    if not hasattr(args, "algebra"):
        args.algebra = None
    handler = COMMANDS[args.command][0]
    try:
        return handler(args)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (EnumerationTooLarge, FactorialNotInvertible) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except InvalidAlgebra as exc:
        print(f"invalid algebra: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (AuditFailure, IdentityViolation) as exc:
        witness = getattr(exc, "witness", None)
        print(f"assertion failed: {exc}\nwitness: {witness}", file=sys.stderr)
        return EXIT_FAIL


if __name__ == "__main__":
    sys.exit(main())
