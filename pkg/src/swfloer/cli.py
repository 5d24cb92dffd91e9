"""Command-line front end: every engine behind one ``swfloer`` command.

Each subcommand prints one JSON report with sorted keys::

    {"command", "input_digest", "results", "violations", "timing_ms"}

Exit status is 0 on success, 1 on validation violations or a gluing
mismatch, and 2 on malformed input or bad usage (with one diagnostic line
on standard error). ``-`` reads a file from standard input.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import sys
import time
from fractions import Fraction

from .datum import (
    GAMMA_LAURENT,
    NONTORSION,
    TORSION_NOVIKOV,
    MODES,
    MalformedDatum,
    FloerDatum,
    ValidationFailed,
    assemble_boundary,
    datum_from_json,
    dumps_datum,
    restrict_min_level,
    validate,
)
from .graded_complex import Q, Z, InsufficientTruncation, NotAComplex, homology
from .gluing import (
    MismatchedSupport,
    NotACycle,
    assemble_relative,
    builtin_example_t2d2,
    closed_table_from_json,
    glue_check,
    invariant_counts_from_json,
    pair,
)
from .novikov import build_novikov, evaluate_t0, hf_gamma, t_torsion
from .oracle import GeneratorConfig, GenerationFailed, generate
from .series import DEFAULT_ORDER, format_rational
from .spectral import build_filtered, page, stable_page_index

__all__ = ["main", "run", "UsageError"]


class UsageError(Exception):
    """Malformed input or an unusable flag combination (exit 2)."""


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


# ---------------------------------------------------------------------------
# input helpers


class _Inputs:
    """Reads named inputs once and hashes their bytes in order."""

    def __init__(self, stdin):
        self._stdin = stdin
        self._digest = hashlib.sha256()
        self._count = 0

    def read(self, path: str) -> str:
        if path == "-":
            text = self._stdin.read()
        else:
            try:
                with open(path, encoding="utf-8") as fh:
                    text = fh.read()
            except OSError as exc:
                raise UsageError(f"cannot read {path}: {exc.strerror}") from None
        if self._count:
            self._digest.update(b"\0")
        self._digest.update(text.encode("utf-8"))
        self._count += 1
        return text

    def add_params(self, params: dict) -> None:
        self._digest.update(json.dumps(params, sort_keys=True).encode("utf-8"))

    def json(self, path: str):
        text = self.read(path)
        try:
            return json.loads(text)
        except json.JSONDecodeError as exc:
            raise UsageError(f"{path}: invalid JSON at line {exc.lineno} column {exc.colno}") from None

    def datum(self, path: str) -> FloerDatum:
        obj = self.json(path)
        try:
            return datum_from_json(obj)
        except (MalformedDatum, ValueError) as exc:
            raise UsageError(f"{path}: {exc}") from None

    @property
    def hexdigest(self) -> str:
        return self._digest.hexdigest()


def _jsonable(x):
    if isinstance(x, Fraction):
        return x.numerator if x.denominator == 1 else format_rational(x)
    if isinstance(x, dict):
        return {str(k): _jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_jsonable(v) for v in x]
    return x


def _group(h) -> dict:
    return _jsonable(h.to_json())


def _cells(dims: dict) -> list:
    return [[q, n, d] for (q, n), d in sorted(dims.items())]


def _series(s) -> dict:
    return s.to_json()


# ---------------------------------------------------------------------------
# subcommands; each returns (results, violations, exit code)


def _cmd_validate(args, io):
    d = io.datum(args.file)
    report = validate(d)
    results = {
        "mode": d.mode,
        "ok": report.ok,
        "errors": len(report.errors),
        "warnings": len(report.warnings),
        "rules": sorted(report.rules()),
    }
    return results, report.to_json(), 0 if report.ok else 1


def _cmd_homology(args, io):
    d = io.datum(args.file)
    report = validate(d)
    if not report.ok:
        return {"mode": d.mode}, report.to_json(), 1
    coeff = args.coeff
    results = {"mode": d.mode, "coefficients": coeff}
    if d.mode == NONTORSION:
        if coeff not in ("z", "q"):
            raise UsageError(f"nontorsion data take --coeff z or q, not {coeff}")
        ring = Z if coeff == "z" else Q
        lifted = assemble_boundary(d, ring, grading="lift", check=False)
        total = assemble_boundary(d, ring, grading="cyclic", check=False)
        results["ell"] = d.ell
        results["lift_graded_level0"] = [[q, _group(homology(lifted, q))] for q in lifted.grades()]
        results["cyclic"] = [[n, _group(homology(total, n))] for n in total.grades()]
    elif d.mode == TORSION_NOVIKOV:
        n = build_novikov(d, args.truncate)
        results["truncation_order"] = args.truncate
        if coeff in ("z", "q"):
            c = evaluate_t0(n)
            if coeff == "q":
                c = c.map_entries(Fraction, Q)
            results["t0_evaluation"] = [[g, _group(homology(c, g))] for g in c.grades()]
        elif coeff == "qt":
            results["q_power_series"] = [[g, _group(h)] for g, h in t_torsion(n).items()]
        else:
            results["laurent_dimensions"] = [[g, k] for g, k in hf_gamma(n).items()]
    else:
        if coeff != "qtt":
            raise UsageError(f"gamma-laurent data take --coeff qtt, not {coeff}")
        n = build_novikov(d, args.truncate)
        results["truncation_order"] = args.truncate
        results["laurent_dimensions"] = [[g, k] for g, k in hf_gamma(n).items()]
    return results, report.to_json(), 0


def _cmd_spectral(args, io):
    d = io.datum(args.file)
    if d.mode != NONTORSION:
        raise UsageError("spectral needs nontorsion data")
    report = validate(d)
    if not report.ok:
        return {"mode": d.mode}, report.to_json(), 1
    F = build_filtered(d)
    stable = stable_page_index(F)
    last = stable if args.max_page is None else args.max_page
    if last < 1:
        raise UsageError("--max-page must be at least 1")
    pages = []
    eulers = []
    for k in range(1, max(last, stable) + 1):
        p = page(F, k)
        eulers.append(p.euler_characteristic())
        if k <= last:
            pages.append(
                {
                    "page": k,
                    "dims": _cells(p.dims()),
                    "differential_ranks": [
                        [q, n, tq, tn, r]
                        for (q, n), r in sorted(p.differential_ranks().items())
                        if r
                        for (tq, tn) in [p.differential[(q, n)][0]]
                    ],
                }
            )
        if k == stable:
            e_inf = p
    total = e_inf.total_dims()
    target = {n: homology(F.base, n).free_rank for n in F.base.grades()}
    residues = sorted(set(total) | set(target))
    results = {
        "ell": d.ell,
        "stable_page": stable,
        "pages": pages,
        "e_infinity": _cells(e_inf.dims()),
        "convergence": [[n, total.get(n, 0), target.get(n, 0)] for n in residues],
        "converged": all(total.get(n, 0) == target.get(n, 0) for n in residues),
    }
    if d.ell % 2 == 0:
        results["euler_characteristic_constant"] = len(set(eulers)) <= 1
    else:
        results["euler_characteristic_constant"] = None
    return results, report.to_json(), 0


def _cmd_novikov(args, io):
    d = io.datum(args.file)
    if d.mode not in (TORSION_NOVIKOV, GAMMA_LAURENT):
        raise UsageError("novikov needs torsion-novikov or gamma-laurent data")
    if d.mode == GAMMA_LAURENT and (args.eval_t0 or args.t_torsion):
        raise UsageError("--eval-t0 and --t-torsion need torsion-novikov data")
    report = validate(d)
    if not report.ok:
        return {"mode": d.mode}, report.to_json(), 1
    n = build_novikov(d, args.truncate)
    c = n.underlying
    c.check()
    boundary = []
    for g, mat in c.boundaries.items():
        src = c.generators[g]
        dst = c.generators.get(c.target(g), ())
        for r, b in enumerate(dst):
            for k, a in enumerate(src):
                x = mat[r][k]
                if not x.is_zero():
                    boundary.append([a, b, _series(x) if hasattr(x, "to_json") else x])
    results = {
        "mode": d.mode,
        "truncation_order": args.truncate,
        "square_zero": True,
        "boundary": boundary,
        "laurent_dimensions": [[g, k] for g, k in hf_gamma(n).items()],
    }
    if args.eval_t0:
        e = evaluate_t0(n)
        direct = assemble_boundary(restrict_min_level(d), Z, check=False)
        results["t0_evaluation"] = [[g, _group(homology(e, g))] for g in e.grades()]
        results["t0_commutes_with_level0"] = all(e.boundary(g) == direct.boundary(g) for g in e.grades())
    if args.t_torsion:
        results["q_power_series"] = [[g, _group(h)] for g, h in t_torsion(n).items()]
    return results, report.to_json(), 0


def _load_invariant(io, path, n, truncate):
    obj = io.json(path)
    try:
        label, transpose, counts = invariant_counts_from_json(obj)
        return assemble_relative(counts, n, label=label, transpose=transpose, truncation_order=truncate)
    except NotACycle:
        raise
    except ValueError as exc:
        raise UsageError(f"{path}: {exc}") from None


def _pairing_setup(args, io):
    d = io.datum(args.file)
    if d.mode not in (TORSION_NOVIKOV, GAMMA_LAURENT):
        raise UsageError("pairing needs torsion-novikov or gamma-laurent data")
    report = validate(d)
    if not report.ok:
        return d, report, None, None, None
    n = build_novikov(d, args.truncate)
    x = _load_invariant(io, args.inv_a, n, args.truncate)
    y = _load_invariant(io, args.inv_b, n, args.truncate)
    return d, report, n, x, y


def _cmd_pair(args, io):
    d, report, n, x, y = _pairing_setup(args, io)
    if n is None:
        return {"mode": d.mode}, report.to_json(), 1
    p = pair(x, y, shift=args.shift)
    return {"truncation_order": p.order, "shift": args.shift, "pairing": _series(p)}, report.to_json(), 0


def _entries(report) -> dict:
    out = dict(report)
    out["entries"] = [_jsonable(e) for e in report["entries"]]
    return out


def _cmd_glue(args, io):
    d, report, n, x, y = _pairing_setup(args, io)
    if n is None:
        return {"mode": d.mode}, report.to_json(), 1
    try:
        table = closed_table_from_json(io.json(args.closed))
    except ValueError as exc:
        raise UsageError(f"{args.closed}: {exc}") from None
    g = glue_check(x, y, table, shift=args.shift, truncation=args.truncate)
    return _entries(g), report.to_json(), 0 if g["all_match"] else 1


def _cmd_example(args, io):
    if args.truncate < 4:
        raise UsageError("--truncate must be at least 4")
    io.add_params({"example": args.name, "truncate": args.truncate})
    x, p, g = builtin_example_t2d2(args.truncate)
    results = _entries(g)
    results["example"] = args.name
    results["truncation_order"] = args.truncate
    results["invariant"] = _series(x.chain["u"])
    results["pairing"] = _series(p)
    ok = g["all_match"] and g["inverse_times_denominator_is_one"]
    return results, [], 0 if ok else 1


def _cmd_gen(args, io, stdout):
    try:
        density = Fraction(args.density)
    except (ValueError, ZeroDivisionError):
        raise UsageError(f"bad density {args.density!r}") from None
    try:
        cfg = GeneratorConfig(
            args.mode,
            seed=args.seed,
            num_points=args.points,
            ell=args.ell,
            max_level=args.max_level,
            density=density,
            block_diagonal=args.block_diagonal,
        )
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    d = generate(cfg)
    text = dumps_datum(d)
    if args.out is None:
        stdout.write(text + "\n")
        return None
    with open(args.out, "w", encoding="utf-8") as fh:
        fh.write(text + "\n")
    io.add_params({"datum": text})
    return {"out": args.out, "points": len(d.points), "flows": len(d.flows), "mode": d.mode}, [], 0


# ---------------------------------------------------------------------------


def _positive(text):
    try:
        v = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected an integer, got {text!r}") from None
    if v < 1:
        raise argparse.ArgumentTypeError("expected a positive integer")
    return v


def _nonneg(text):
    try:
        v = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected an integer, got {text!r}") from None
    if v < 0:
        raise argparse.ArgumentTypeError("expected a non-negative integer")
    return v


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="swfloer", description="Exact Floer-complex algebra engine")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    s = sub.add_parser("validate", help="check a datum file")
    s.add_argument("file")

    s = sub.add_parser("homology", help="homology over a coefficient system")
    s.add_argument("file")
    s.add_argument("--coeff", choices=("z", "q", "qt", "qtt"), required=True)
    s.add_argument("--truncate", type=_positive, default=DEFAULT_ORDER)

    s = sub.add_parser("spectral", help="pages of the lift-filtration spectral sequence")
    s.add_argument("file")
    s.add_argument("--max-page", type=_positive, default=None)

    s = sub.add_parser("novikov", help="series complex of a Novikov datum")
    s.add_argument("file")
    s.add_argument("--truncate", type=_positive, default=DEFAULT_ORDER)
    s.add_argument("--eval-t0", action="store_true")
    s.add_argument("--t-torsion", action="store_true")

    s = sub.add_parser("pair", help="pair two relative invariants")
    s.add_argument("file")
    s.add_argument("inv_a")
    s.add_argument("inv_b")
    s.add_argument("--shift", type=int, default=0)
    s.add_argument("--truncate", type=_positive, default=DEFAULT_ORDER)

    s = sub.add_parser("glue", help="compare a pairing with closed invariants")
    s.add_argument("file")
    s.add_argument("inv_a")
    s.add_argument("inv_b")
    s.add_argument("--closed", required=True)
    s.add_argument("--shift", type=int, default=0)
    s.add_argument("--truncate", type=_positive, default=DEFAULT_ORDER)

    s = sub.add_parser("example", help="built-in worked examples")
    s.add_argument("name", choices=("t2d2",))
    s.add_argument("--truncate", type=int, default=10)

    s = sub.add_parser("gen", help="write a seeded synthetic datum")
    s.add_argument("--mode", choices=MODES, required=True)
    s.add_argument("--seed", type=_nonneg, required=True)
    s.add_argument("--points", type=_nonneg, required=True)
    s.add_argument("--ell", type=_positive, default=2)
    s.add_argument("--max-level", type=_nonneg, default=2)
    s.add_argument("--density", default="1/2")
    s.add_argument("--block-diagonal", action="store_true")
    s.add_argument("--out", default=None)
    return p


_COMMANDS = {
    "validate": _cmd_validate,
    "homology": _cmd_homology,
    "spectral": _cmd_spectral,
    "novikov": _cmd_novikov,
    "pair": _cmd_pair,
    "glue": _cmd_glue,
    "example": _cmd_example,
}


def run(argv, stdin=None, stdout=None, stderr=None) -> int:
    """Run one command; returns the exit status."""
    stdin = sys.stdin if stdin is None else stdin
    stdout = sys.stdout if stdout is None else stdout
    stderr = sys.stderr if stderr is None else stderr
    start = time.perf_counter()
    io = _Inputs(stdin)
    try:
        args = build_parser().parse_args(list(argv))
        if args.command == "gen":
            out = _cmd_gen(args, io, stdout)
            if out is None:
                return 0
            results, violations, code = out
        else:
            results, violations, code = _COMMANDS[args.command](args, io)
    except UsageError as exc:
        stderr.write(f"swfloer: error: {exc}\n")
        return 2
    except (NotACycle, MismatchedSupport, InsufficientTruncation, NotAComplex, ValidationFailed, GenerationFailed) as exc:
        stderr.write(f"swfloer: error: {type(exc).__name__}: {' '.join(str(exc).split())}\n")
        return 2
    report = {
        "command": args.command,
        "input_digest": io.hexdigest,
        "results": _jsonable(results),
        "violations": violations,
        "timing_ms": int((time.perf_counter() - start) * 1000),
    }
    stdout.write(json.dumps(report, sort_keys=True, indent=2) + "\n")
    return code


def main(argv=None) -> int:
    return run(sys.argv[1:] if argv is None else argv)


if __name__ == "__main__":
    sys.exit(main())
