"""Command-line interface with machine-readable JSON/CSV output.

Subcommands: eval, zeros, count, crossover, ms-check, lattice.  All numbers
are emitted with 16 significant digits; complex values serialize as
{"re": ..., "im": ...}.  Identical invocations produce byte-identical JSON
apart from diagnostics.runtime_ms.
"""

from __future__ import annotations

import argparse
import math
import sys
import time

from .options import (
    EvalOptions,
    AccuracyError,
    BoundaryZeroError,
    PoleError,
    RankError,
    ScaleError,
    SelfCheckError,
)
from . import eisenstein as eis
from . import lattice as lat
from . import verification as ver
from . import zero_finder as zf
from .special_functions import completed_zeta, xi, xi_logderiv_at_zero

SCHEMA_VERSION = "1"


def _fmt_float(x: float) -> str:
    if x != x or x in (math.inf, -math.inf):
        return '"non-finite"'
    return format(float(x), ".16e")


def _to_json(obj, indent=0) -> str:
    pad = "  " * indent
    if obj is None:
        return "null"
    if isinstance(obj, bool):
        return "true" if obj else "false"
    if isinstance(obj, int):
        return str(obj)
    if isinstance(obj, float):
        return _fmt_float(obj)
    if isinstance(obj, complex):
        return _to_json({"re": obj.real, "im": obj.imag}, indent)
    if isinstance(obj, str):
        return '"' + obj.replace("\\", "\\\\").replace('"', '\\"') + '"'
    if isinstance(obj, (list, tuple)):
        if not obj:
            return "[]"
        inner = ",\n".join(pad + "  " + _to_json(v, indent + 1) for v in obj)
        return "[\n" + inner + "\n" + pad + "]"
    if isinstance(obj, dict):
        if not obj:
            return "{}"
        inner = ",\n".join(
            pad + "  " + _to_json(str(k), 0) + ": " + _to_json(v, indent + 1)
            for k, v in obj.items()
        )
        return "{\n" + inner + "\n" + pad + "}"
    raise TypeError(f"cannot serialize {type(obj)}")


def _document(command: str, inputs: dict, results, opts: EvalOptions, t0: float) -> dict:
    return {
        "schema_version": SCHEMA_VERSION,
        "command": command,
        "inputs": inputs,
        "results": results,
        "diagnostics": {
            "rel_tol_used": opts.rel_tol,
            "runtime_ms": (time.monotonic() - t0) * 1000.0,
        },
    }


def _emit(doc: dict, out_path):
    text = _to_json(doc) + "\n"
    if out_path:
        with open(out_path, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _parse_complex(text: str) -> complex:
    parts = text.split(",")
    if len(parts) != 2:
        raise argparse.ArgumentTypeError(f"expected RE,IM, got {text!r}")
    return complex(float(parts[0]), float(parts[1]))


def _options_from(args) -> EvalOptions:
    return EvalOptions(rel_tol=args.rel_tol, max_terms=args.max_terms)


def _zero_record_dict(r: zf.ZeroRecord) -> dict:
    return {
        "index": r.index,
        "ordinate": r.ordinate,
        "residual": r.residual,
        "multiplicity_hint": r.multiplicity_hint,
    }


def cmd_eval(args) -> dict:
    t0 = time.monotonic()
    opts = _options_from(args)
    s = args.s
    fn = args.function
    inputs = {"function": fn, "s": s}
    if fn == "zeta-star":
        result = {"value": completed_zeta(s, opts)}
    elif fn == "xi":
        result = {"value": xi(s, opts)}
    elif fn == "a0":
        if args.y is None:
            raise SystemExit2("--function a0 requires --y")
        inputs["y"] = args.y
        result = {"value": eis.a0(args.y, s, opts)}
    elif fn == "an":
        if args.y is None or args.n is None:
            raise SystemExit2("--function an requires --n and --y")
        inputs["n"], inputs["y"] = args.n, args.y
        result = {"value": eis.a_n(args.n, args.y, s, opts)}
    elif fn == "I":
        if args.T is None:
            raise SystemExit2("--function I requires --T")
        inputs["T"] = args.T
        result = {"value": eis.i_truncation(args.T, s, opts)}
    elif fn == "z2q":
        result = {"value": eis.z2q(s, opts)}
    elif fn == "E":
        if args.z is None:
            raise SystemExit2("--function E requires --z")
        inputs["z"] = args.z
        ev = eis.eisenstein_series(args.z, s, args.nmax, opts)
        result = {"value": ev.value, "tail_estimate": ev.tail_estimate, "n_max": ev.n_max}
    else:
        raise SystemExit2(f"unknown function {fn!r}")
    return _document("eval", inputs, [result], opts, t0)


def _family_from(args, allow_xi2s=False) -> "eis.FamilyParam":
    fam = args.family
    if fam == "I":
        if args.param is None:
            raise SystemExit2("--family I requires --param T")
        return eis.FamilyParam.truncation(args.param)
    if fam == "a0":
        if args.param is None:
            raise SystemExit2("--family a0 requires --param y")
        return eis.FamilyParam.constant_term(args.param)
    if fam == "an":
        if args.param is None or args.n is None:
            raise SystemExit2("--family an requires --param y and --n")
        return eis.FamilyParam.fourier(args.n, args.param)
    if fam == "xi2s" and allow_xi2s:
        return eis.FamilyParam.xi_of_2s()
    raise SystemExit2(f"unknown family {fam!r}")


def cmd_zeros(args) -> dict:
    t0 = time.monotonic()
    opts = _options_from(args)
    family = _family_from(args)
    records = zf.critical_line_zeros(family, args.tmax, opts)
    if args.format == "csv":
        lines = ["index,ordinate,residual"]
        for r in records:
            lines.append(f"{r.index},{_fmt_float(r.ordinate)},{_fmt_float(r.residual)}")
        text = "\n".join(lines) + "\n"
        if args.out:
            with open(args.out, "w") as fh:
                fh.write(text)
        else:
            sys.stdout.write(text)
        return None
    inputs = {"family": args.family, "param": args.param, "tmax": args.tmax}
    if args.n is not None:
        inputs["n"] = args.n
    return _document("zeros", inputs, [_zero_record_dict(r) for r in records], opts, t0)


def cmd_count(args) -> dict:
    t0 = time.monotonic()
    opts = _options_from(args)
    family = _family_from(args, allow_xi2s=True)
    if args.rect is not None:
        re_lo, re_hi, im_lo, im_hi = args.rect
    else:
        u = args.umax
        if u is None:
            raise SystemExit2("count requires --umax (or an explicit --rect)")
        re_lo, re_hi = (-1.0, 2.0) if family.kind == "xi_of_2s" else (-2.0, 3.0)
        im_lo, im_hi = -u, u
    rc = zf.count_zeros_rectangle(family, re_lo, re_hi, im_lo, im_hi, opts)
    manufactured = 1 if family.kind in ("truncation", "constant_term", "weng_rank2") else 0
    zero_count = rc.winding - manufactured
    u_pred = max(abs(im_lo), abs(im_hi))
    predicted = None
    if family.kind == "truncation" and family.T >= 1.0 and u_pred >= 5.0:
        predicted = zf.predicted_count(family.T, u_pred)
    elif family.kind == "xi_of_2s" and u_pred >= 5.0:
        predicted = zf.predicted_count(1.0, u_pred)
    elif family.kind == "constant_term" and family.y >= 1.0 and u_pred >= 5.0:
        predicted = zf.predicted_count(1.0, u_pred) + (4.0 / math.pi) * math.log(family.y) * u_pred
    result = {
        "rect": {"re_lo": rc.re_lo, "re_hi": rc.re_hi, "im_lo": rc.im_lo, "im_hi": rc.im_hi},
        "winding": rc.winding,
        "zero_count": zero_count,
        "predicted_main_term": predicted,
        "gap": None if predicted is None else abs(zero_count - predicted),
    }
    inputs = {"family": args.family, "param": args.param, "umax": args.umax}
    return _document("count", inputs, [result], opts, t0)


def cmd_crossover(args) -> dict:
    t0 = time.monotonic()
    opts = _options_from(args)
    closed = zf.y_star()
    via_fprime = zf.y_star_via_fprime(opts)
    results = [
        {
            "y_star_closed_form": closed,
            "y_star_via_fprime_root": via_fprime,
            "agreement_gap": abs(closed - via_fprime),
            "xi_logderiv_at_zero": xi_logderiv_at_zero(),
        }
    ]
    inputs = {}
    if args.y is not None:
        inputs["y"] = args.y
        records = zf.real_zeros(args.y, opts)
        results.append(
            {
                "real_zeros": [
                    {
                        "sigma": r.ordinate,
                        "mirror": 1.0 - r.ordinate,
                        "residual": r.residual,
                    }
                    for r in records
                ]
            }
        )
    return _document("crossover", inputs, results, opts, t0)


def cmd_ms_check(args) -> dict:
    t0 = time.monotonic()
    opts = _options_from(args)
    rep = ver.maass_selberg_check(args.s, args.T, args.nfourier, args.grid, opts)
    result = {
        "s": rep.s,
        "T": rep.T,
        "n_max": rep.n_max,
        "grid": rep.grid,
        "lhs": rep.lhs,
        "rhs": rep.rhs,
        "abs_gap": rep.abs_gap,
        "quadrature_estimate": rep.quadrature_estimate,
        "domain_note": rep.domain_note,
    }
    inputs = {"s": args.s, "T": args.T, "nfourier": args.nfourier, "grid": args.grid}
    return _document("ms-check", inputs, [result], opts, t0)


def cmd_lattice(args) -> dict:
    t0 = time.monotonic()
    opts = _options_from(args)
    if args.lattice_cmd == "classify":
        with open(args.basis) as fh:
            basis = lat.parse_basis_text(fh.read())
        poly = lat.canonical_polygon(basis)
        result = {
            "covolume": lat.covolume(basis),
            "slope": lat.slope(basis),
            "kappa": [lat.kappa_r(basis, r) for r in range(1, basis.rank + 1)],
            "polygon_points": [{"rank": int(r), "value": v} for r, v in poly.points],
            "polygon_vertices": [{"rank": int(r), "value": v} for r, v in poly.vertices],
            "classification": poly.classification,
        }
        inputs = {"basis": args.basis}
    elif args.lattice_cmd == "point":
        cls = lat.classify_rank2_point(args.z)
        result = {
            "reduced_z": cls.reduced_z,
            "classification": cls.classification,
            "stable": cls.stable,
        }
        inputs = {"z": args.z}
    else:  # submult
        n = args.n
        basis = lat.LatticeBasis.from_rows(
            [[1 if i == j else 0 for j in range(n)] for i in range(n)]
        )
        rep = lat.submultiplicativity_check(basis, args.trials, seed=args.seed)
        result = {
            "trials": rep.trials,
            "violations": rep.violations,
            "worst_ratio": rep.worst_ratio,
        }
        inputs = {"n": n, "trials": args.trials, "seed": args.seed}
    return _document("lattice", inputs, [result], opts, t0)


class SystemExit2(SystemExit):
    def __init__(self, message):
        sys.stderr.write(f"error: {message}\n")
        super().__init__(2)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="eiszeros",
        description="Eisenstein-series integrals, critical-line zeros, crossover, "
        "Maass-Selberg verification, lattice stability",
    )
    parser.add_argument("--rel-tol", type=float, default=1e-12, dest="rel_tol")
    parser.add_argument("--max-terms", type=int, default=10**6, dest="max_terms")
    parser.add_argument("--threads", type=int, default=0,
                        help="worker pool size (0 = auto); evaluation is pure and thread-safe")
    parser.add_argument("--seed", type=int, default=0,
                        help="seed for randomized subcommands")
    parser.add_argument("--out", default=None, help="write output to FILE instead of stdout")
    sub = parser.add_subparsers(dest="cmd", required=True)

    p = sub.add_parser("eval", help="evaluate one named function")
    p.add_argument("--function", required=True,
                   choices=["zeta-star", "xi", "a0", "an", "I", "z2q", "E"])
    p.add_argument("--s", required=True, type=_parse_complex)
    p.add_argument("--y", type=float)
    p.add_argument("--T", type=float)
    p.add_argument("--n", type=int)
    p.add_argument("--z", type=_parse_complex)
    p.add_argument("--nmax", type=int, default=None)
    p.set_defaults(func=cmd_eval)

    p = sub.add_parser("zeros", help="critical-line zero table")
    p.add_argument("--family", required=True, choices=["I", "a0", "an"])
    p.add_argument("--param", required=True, type=float)
    p.add_argument("--n", type=int)
    p.add_argument("--tmax", required=True, type=float)
    p.add_argument("--format", choices=["json", "csv"], default="json")
    p.set_defaults(func=cmd_zeros)

    p = sub.add_parser("count", help="argument-principle rectangle count")
    p.add_argument("--family", required=True, choices=["I", "a0", "an", "xi2s"])
    p.add_argument("--param", type=float)
    p.add_argument("--n", type=int)
    p.add_argument("--umax", type=float)
    p.add_argument("--rect", type=lambda t: [float(x) for x in t.split(",")])
    p.set_defaults(func=cmd_count)

    p = sub.add_parser("crossover", help="y* both ways; real zeros for --y")
    p.add_argument("--y", type=float)
    p.set_defaults(func=cmd_crossover)

    p = sub.add_parser("ms-check", help="Maass-Selberg two-sided verification")
    p.add_argument("--s", required=True, type=_parse_complex)
    p.add_argument("--T", required=True, type=float)
    p.add_argument("--nfourier", type=int, default=12)
    p.add_argument("--grid", type=int, default=64)
    p.set_defaults(func=cmd_ms_check)

    p = sub.add_parser("lattice", help="lattice classification and checks")
    lsub = p.add_subparsers(dest="lattice_cmd", required=True)
    pc = lsub.add_parser("classify")
    pc.add_argument("--basis", required=True, help="plain-text basis matrix file")
    pp = lsub.add_parser("point")
    pp.add_argument("--z", required=True, type=_parse_complex)
    ps = lsub.add_parser("submult")
    ps.add_argument("--n", type=int, default=3)
    ps.add_argument("--trials", type=int, default=100)
    p.set_defaults(func=cmd_lattice)

    return parser


_ERROR_EXIT_CODES = [
    (PoleError, 3),
    (AccuracyError, 4),
    (BoundaryZeroError, 5),
    (SelfCheckError, 6),
    (RankError, 7),
    (ScaleError, 8),
]


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.threads < 0:
        parser.error("--threads must be >= 0")
    try:
        doc = args.func(args)
    except SystemExit:
        raise
    except tuple(e for e, _ in _ERROR_EXIT_CODES) as exc:
        for err_type, code in _ERROR_EXIT_CODES:
            if isinstance(exc, err_type):
                sys.stderr.write(f"error: {exc}\n")
                return code
        raise
    except ValueError as exc:
        sys.stderr.write(f"error: {exc}\n")
        return 2
    if doc is not None:
        _emit(doc, args.out)
    return 0


if __name__ == "__main__":
    sys.exit(main())
