"""spinstat command line.

Exit codes: 0 success, 2 spec/parse error, 3 validation failure,
4 internal inconsistency.
"""
from __future__ import annotations

import argparse
import sys
from fractions import Fraction
from pathlib import Path

from . import catalog
from .analytic import AnalyticError, branch_points
from .config import RunConfig
from .field_model import SpecError
from .quantization import InconsistencyError
from .ratfunc import PoleError
from .report import build_report, dumps
from .spectrum import SpectrumError
from .spin_algebra import sigma_values
from .specfile import SpecFileError, load_spec_file

EXIT_OK, EXIT_PARSE, EXIT_INVALID, EXIT_INCONSISTENT = 0, 2, 3, 4


class CliFailure(Exception):
    def __init__(self, code: int, message: str):
        super().__init__(message)
        self.code = code


def _add_common(p: argparse.ArgumentParser) -> None:
    p.add_argument("spec", nargs="?", help="TOML spec file (omit when using --catalog)")
    p.add_argument("--catalog", choices=catalog.NAMES, help="use a built-in field instead of a spec file")
    p.add_argument("--two-j", type=int, dest="two_j", help="twice the spin (schroedinger only)")
    p.add_argument("--m0", help="mass parameter (rational, e.g. 4 or 1/2)")
    p.add_argument("--mu", help="chemical potential")
    p.add_argument("--delta", help="pairing amplitude")
    p.add_argument("--tol", type=float, help="symmetry residual tolerance")
    p.add_argument("--samples", type=int, help="number of sample momenta")
    p.add_argument("--seed", type=int, help="seed for sample momenta (default 0)")
    p.add_argument("--json", type=Path, help="also write the structured report here")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="spinstat", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)
    for name, help_ in (
        ("check", "verify C/T/SU(2) constraints and spectral reality"),
        ("statistics", "decide bose/fermi/arbitrary with all cross-checks"),
        ("corollary", "check the branch-point => spin-statistics chain"),
        ("report", "run every stage and emit the full report"),
    ):
        _add_common(sub.add_parser(name, help=help_))
    bp = sub.add_parser("branch-points", help="branch points of E(p) in the complex p plane")
    _add_common(bp)
    bp.add_argument("--sigma", help="helicity, e.g. 1/2 (default: all)")
    bp.add_argument("--direction", default="0,0,1", help="ray direction as x,y,z")
    return parser


def _rational(name, text):
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError):
        raise CliFailure(EXIT_PARSE, f"--{name}: not a rational number: {text!r}") from None


def resolve(args) -> tuple:
    """(FieldSpec, RunConfig) from either --catalog or a spec file."""
    config = RunConfig()
    if args.catalog:
        if args.spec:
            raise CliFailure(EXIT_PARSE, "give either a spec file or --catalog, not both")
        overrides = {k: _rational(k, getattr(args, k)) for k in ("m0", "mu", "delta") if getattr(args, k) is not None}
        spec = catalog.get(args.catalog, two_j=args.two_j, **overrides).spec
    elif args.spec:
        try:
            spec, config = load_spec_file(args.spec)
        except SpecFileError as exc:
            raise CliFailure(EXIT_PARSE, str(exc)) from None
    else:
        raise CliFailure(EXIT_PARSE, "no spec file or --catalog given")
    if args.tol is not None:
        config.tol = args.tol
    if args.samples is not None:
        config.samples = args.samples
    if args.seed is not None:
        config.seed = args.seed
    return spec, config


def _fmt_complex(z: complex, digits: int = 6) -> str:
    re_, im = z.real, z.imag
    scale = max(1.0, abs(z))
    re_ = 0.0 if abs(re_) < 1e-9 * scale else re_
    im = 0.0 if abs(im) < 1e-9 * scale else im
    if im == 0:
        return f"{re_:.{digits}g}"
    mag = f"{abs(im):.{digits}g}"
    imag = "i" if mag == "1" else f"{mag}i"
    if re_ == 0:
        return ("-" if im < 0 else "+") + imag
    return f"{re_:.{digits}g}{'-' if im < 0 else '+'}{imag}"


def _emit(report: dict, lines: list, args) -> None:
    print("\n".join(lines))
    if args.json:
        args.json.write_text(dumps(report) + "\n", encoding="utf-8")


def _header(spec) -> list:
    return [
        f"field: {spec.name}  two_j={spec.two_j}",
        f"  M+ = {spec.m_plus}",
        f"  M- = {spec.m_minus}",
    ]


def cmd_check(spec, config, args) -> int:
    report = build_report(spec, config, ("symmetry", "spectral_reality"), "check")
    sym, real = report["symmetry"], report["spectral_reality"]
    if real["passed"]:
        report["spectrum"] = build_report(spec, config, ("spectrum",), "check")["spectrum"]
    lines = _header(spec) + ["symmetry residuals:"]
    lines += [f"  {k:10s} {v:.3e}" for k, v in sorted(sym["residuals"].items())]
    lines.append(f"symmetry: {'pass' if sym['passed'] else 'FAIL'} (tol {sym['tol']:g})")
    lines.append(f"spectral reality: {'pass' if real['passed'] else 'FAIL'}")
    if real["violations"]:
        ps = [v[0] for v in real["violations"]]
        lines.append(f"  E^2 < 0 for p in [{min(ps):g}, {max(ps):g}]")
    _emit(report, lines, args)
    return EXIT_OK if sym["passed"] and real["passed"] else EXIT_INVALID


def _precheck(spec, config) -> None:
    report = build_report(spec, config, ("symmetry", "spectral_reality"), "check")
    if not report["symmetry"]["passed"]:
        raise CliFailure(EXIT_INVALID, "symmetry constraints violated")
    if not report["spectral_reality"]["passed"]:
        raise CliFailure(EXIT_INVALID, "spectrum is not real on the sample grid")


def cmd_statistics(spec, config, args) -> int:
    _precheck(spec, config)
    report = build_report(spec, config, ("symmetry", "spectrum", "statistics"), "statistics")
    st = report["statistics"]
    lines = _header(spec)
    lines.append(f"lambda dimension: {st['lambda']['dimension']}")
    for blocks in st["lambda"]["canonical_blocks"]:
        lines.append(f"  lambda blocks: {blocks}")
    bs = [m["B"] for m in st["mode_coefficients"]]
    if bs:
        lines.append(f"b b^dag coefficient B: {len(bs)} modes, range [{min(bs):.6g}, {max(bs):.6g}]")
    for kind, c in sorted(st["causality"].items()):
        lines.append(f"causality ({kind}): {'pass' if c['passed'] else 'fail'}  residual {c['max_residual']:.3e}")
    for kind, f in sorted(st["fock"].items()):
        lines.append(f"fock oracle ({kind}): {'bounded' if f['bounded_below'] else 'unbounded'}  min eig {f['min_eigenvalues']}")
    for note in st["notes"]:
        lines.append(f"note: {note}")
    lines.append(f"verdict: {st['verdict']}")
    _emit(report, lines, args)
    return EXIT_OK


def cmd_branch_points(spec, config, args) -> int:
    try:
        direction = [float(t) for t in args.direction.split(",")]
    except ValueError:
        direction = []
    if len(direction) != 3:
        raise CliFailure(EXIT_PARSE, "--direction needs three comma-separated numbers")
    if args.sigma is None:
        sigmas = sigma_values(spec.two_j)
    else:
        s2 = 2 * _rational("sigma", args.sigma)
        if s2.denominator != 1 or int(s2) not in sigma_values(spec.two_j):
            raise CliFailure(EXIT_PARSE, f"sigma={args.sigma} is not a helicity of spin {Fraction(spec.two_j, 2)}")
        sigmas = [int(s2)]
    reports = [branch_points(spec, s, direction) for s in sigmas]
    report = build_report(spec, config, (), "branch-points")
    report["branch_points"] = [r.to_dict() for r in reports]
    lines = _header(spec)
    for r in reports:
        pts = sorted(r.finite_branch_points, key=lambda b: (round(b.location.real, 6), -b.location.imag))
        lines.append(f"sigma = {Fraction(r.sigma_two, 2)}:  E^2 = {r.e_squared}")
        if pts:
            lines.append("  finite branch points: " + ", ".join(_fmt_complex(b.location) for b in pts))
            lines.append("  monodromy confirmed: " + ", ".join("yes" if b.monodromy_confirmed else "NO" for b in pts))
        else:
            lines.append("  finite branch points: none")
        lines.append(f"  branch point at infinity: {'yes' if r.branch_at_infinity else 'no'}")
    _emit(report, lines, args)
    return EXIT_OK


def cmd_corollary(spec, config, args) -> int:
    report = build_report(spec, config, ("branch_points", "corollary"), "corollary")
    cor = report["corollary"]
    lines = _header(spec)
    for link in cor["links"]:
        state = "holds" if link["holds"] else "VIOLATED"
        lines.append(f"  {link['name']}: {state} (antecedent {link['antecedent']}, consequent {link['consequent']})")
    lines.append(f"verdict: {cor['verdict']}")
    lines.append(f"corollary: {'holds' if cor['holds'] else 'VIOLATED'}{' (vacuous)' if cor['vacuous'] else ''}")
    _emit(report, lines, args)
    return EXIT_OK if cor["holds"] else EXIT_INCONSISTENT


def cmd_report(spec, config, args) -> int:
    report = build_report(spec, config, command="report")
    st = report["statistics"]
    lines = _header(spec) + [
        f"symmetry: {'pass' if report['symmetry']['passed'] else 'FAIL'}",
        f"verdict: {st['verdict']}",
        f"corollary: {'holds' if report['corollary']['holds'] else 'VIOLATED'}",
    ]
    _emit(report, lines, args)
    return EXIT_OK


COMMANDS = {
    "check": cmd_check,
    "statistics": cmd_statistics,
    "branch-points": cmd_branch_points,
    "corollary": cmd_corollary,
    "report": cmd_report,
}


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        spec, config = resolve(args)
        spec.validate()
        return COMMANDS[args.command](spec, config, args)
    except CliFailure as exc:
        print(f"error: {exc}", file=sys.stderr)
        return exc.code
    except SpecError as exc:
        print(f"invalid spec: {exc}", file=sys.stderr)
        return EXIT_INVALID
    except (SpectrumError, PoleError, AnalyticError) as exc:
        print(f"validation failure: {exc}", file=sys.stderr)
        return EXIT_INVALID
    except InconsistencyError as exc:
        print(f"internal inconsistency: {exc}", file=sys.stderr)
        return EXIT_INCONSISTENT


if __name__ == "__main__":
    sys.exit(main())
