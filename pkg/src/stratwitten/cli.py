"""Command-line front end.

Exit status is 0 on success, 1 when ``--assert`` finds a violated check and
2 for unreadable or invalid input (the message names the JSON pointer).
"""

from __future__ import annotations

import argparse
import csv
import io as _io
import sys
import warnings
from pathlib import Path

from . import io
from .cone_spectrum import assemble_cone_spectrum
from .errors import SchemaError, StratWittenError
from .fd_oracle import Grid, check_cone, check_length_one, check_p, verify_clifford_identities, verify_theta_diagonalization
from .hermite import PParams
from .model_complexes import Ibc, Sign, spectrum_length_one, spectrum_length_two
from .morse import morse_check, nu_point, nu_total, weyl_fit
from .space_model import betti, local_model_kernel, spectrum
from .spectra import EigLadder, assemble_ladders
from .spheres import load_sphere

EXIT_OK, EXIT_ASSERT, EXIT_INPUT = 0, 1, 2


class InputError(Exception):
    """Bad command-line input; reported with exit status 2."""


def _positive(text: str) -> float:
    value = float(text)
    if not value > 0:
        raise argparse.ArgumentTypeError(f"must be positive, got {text}")
    return value


def _int_list(text: str) -> list[int]:
    try:
        return [int(t) for t in text.replace(" ", "").split(",") if t]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}") from None


def _read_json(path: str, what: str):
    try:
        text = sys.stdin.read() if path == "-" else Path(path).read_text()
    except OSError as exc:
        raise InputError(f"cannot read {what} {path}: {exc.strerror}") from None
    try:
        return io.load_json(text)
    except SchemaError as exc:
        raise SchemaError(f"{path}: {exc.detail}", exc.pointer) from None


# -- output ----------------------------------------------------------------------


def _records_csv(rows: list[dict]) -> str:
    if not rows:
        return ""
    buf = _io.StringIO()
    w = csv.DictWriter(buf, fieldnames=list(rows[0]), lineterminator="\n")
    w.writeheader()
    for row in io.round_floats(rows):
        w.writerow({k: ";".join(map(str, v)) if isinstance(v, list) else v for k, v in row.items()})
    return buf.getvalue()


def _records_table(rows: list[dict]) -> str:
    if not rows:
        return ""
    rows = io.round_floats(rows)
    cols = list(rows[0])
    cells = [[str(r[c]) for c in cols] for r in rows]
    widths = [max(len(c), *(len(x[i]) for x in cells)) for i, c in enumerate(cols)]
    lines = ["  ".join(c.rjust(w) for c, w in zip(cols, widths))]
    lines += ["  ".join(x.rjust(w) for x, w in zip(row, widths)) for row in cells]
    return "\n".join(lines) + "\n"


def _emit_spectrum(args, sp, extra: dict | None = None) -> str:
    if args.format == "csv":
        return io.spectrum_csv(sp)
    if args.format == "table":
        return io.spectrum_table(sp)
    doc = {"spectrum": io.spectrum_to_dict(sp)}
    doc.update(extra or {})
    return io.dumps(doc)


def _emit_records(args, doc: dict, rows: list[dict], table: str | None = None) -> str:
    if args.format == "csv":
        return _records_csv(rows)
    if args.format == "table":
        return table if table is not None else _records_table(rows)
    return io.dumps(doc)


def _write(args, text: str) -> None:
    if args.output and args.output != "-":
        Path(args.output).write_text(text)
    else:
        sys.stdout.write(text)


# -- commands ----------------------------------------------------------------------


def cmd_p_spec(args) -> int:
    params = PParams.from_coefficients(args.c1, args.c2, args.s, args.branch)
    lad = EigLadder(1 + 2 * params.sigma, 0, 1, f"P.a={params.a:.12g}")
    sp = assemble_ladders([lad], args.s, args.cutoff, 0)
    extra = {"params": {"c1": params.c1, "c2": params.c2, "a": params.a, "sigma": params.sigma}}
    _write(args, _emit_spectrum(args, sp, extra))
    return EXIT_OK


def cmd_complex_spec(args) -> int:
    if args.length == 1:
        sp = spectrum_length_one(args.kappa, args.s, args.sign, args.ibc, args.cutoff)
    else:
        sp = spectrum_length_two(args.kappa, args.c, args.s, args.sign, args.cutoff)
    _write(args, _emit_spectrum(args, sp))
    return EXIT_OK


def _link(args):
    if args.sphere is not None:
        return load_sphere(args.sphere)
    return io.link_from_dict(_read_json(args.link, "link spectrum"))


def cmd_cone_spec(args) -> int:
    link = _link(args)
    sp = assemble_cone_spectrum(link, args.sign, args.ibc, args.s, args.cutoff)
    _write(args, _emit_spectrum(args, sp, {"link": io.link_to_dict(link)}))
    return EXIT_OK


def cmd_local_model(args) -> int:
    desc = io.desc_from_dict(_read_json(args.desc, "descriptor"))
    sp = spectrum(desc, args.sign, args.ibc, args.s, args.cutoff)
    _write(args, _emit_spectrum(args, sp, {"descriptor": io.desc_to_dict(desc)}))
    return EXIT_OK


def cmd_betti(args) -> int:
    desc = io.desc_from_dict(_read_json(args.desc, "descriptor"))
    b = betti(desc, args.ibc, args.sign)
    rows = [{"degree": r, "betti": x} for r, x in enumerate(b)]
    _write(args, _emit_records(args, {"betti": b, "ibc": str(args.ibc), "sign": str(args.sign)}, rows))
    return EXIT_OK


def cmd_nu(args) -> int:
    points = io.points_from_list(_read_json(args.points, "critical points"))
    per = [nu_point(cp, args.ibc) for cp in points]
    total = nu_total(points, args.ibc)
    doc = {
        "ibc": str(args.ibc),
        "points": [{"point": io.point_to_dict(cp), "nu": v, "kernel": local_model_kernel(cp, args.ibc)} for cp, v in zip(points, per)],
        "nu": total,
    }
    rows = [{"point": i, "nu": v} for i, v in enumerate(per)] + [{"point": "total", "nu": total}]
    _write(args, _emit_records(args, doc, rows))
    return EXIT_OK


def cmd_morse_check(args) -> int:
    if args.points:
        nu = nu_total(io.points_from_list(_read_json(args.points, "critical points")), args.ibc)
    elif args.nu is not None:
        nu = args.nu
    else:
        raise InputError("morse-check needs --nu or --points")
    report = morse_check(args.beta, nu)
    doc = report.to_dict()
    doc.update({"beta": list(args.beta), "nu": list(nu)})
    rows = [{"degree": r, "lhs": a, "rhs": b, "holds": h} for r, a, b, h in report.partial_sums]
    _write(args, _emit_records(args, doc, rows, report.table()))
    if args.assert_ and not report.all_hold:
        return EXIT_ASSERT
    return EXIT_OK


def cmd_fd_validate(args) -> int:
    grid = Grid(args.R, args.h)
    checks = []
    for c1, c2 in ((0.0, 0.0), (1.0, 0.0), (1.5, 1.0), (0.5, 2.0)):
        checks += check_p(c1, c2, grid)
    for kappa in (0.0, 0.25, -0.25, 1.0):
        checks += check_length_one(kappa, args.sign, args.ibc, grid)
    n, mu = args.n, args.mu
    for r in range(n + 1):
        checks += check_cone(n, r, mu, args.sign, args.ibc, grid)
    extra = []
    if mu > 0 and n >= 2:
        extra.append({"label": f"theta(n={n},r=1,mu={mu:g})", "residual": verify_theta_diagonalization(n, 1, mu, grid, args.sign)})
    anti, rsq = verify_clifford_identities(n, 1, mu, grid, args.sign)
    extra.append({"label": "clifford RD+DR", "residual": anti})
    extra.append({"label": "clifford R^2", "residual": rsq})
    ok = all(c.ok(args.tol) for c in checks) and all(e["residual"] < 1e-8 for e in extra)
    doc = {"checks": [c.to_dict() for c in checks], "identities": extra, "all_ok": ok, "grid": {"R": grid.R, "h": grid.h}}
    rows = [{"label": c.label, "error": c.error, "ok": c.ok(args.tol)} for c in checks]
    rows += [{"label": e["label"], "error": e["residual"], "ok": e["residual"] < 1e-8} for e in extra]
    _write(args, _emit_records(args, doc, rows))
    if args.assert_ and not ok:
        return EXIT_ASSERT
    return EXIT_OK


def cmd_weyl_fit(args) -> int:
    if args.spectrum:
        doc = _read_json(args.spectrum, "spectrum")
        sp = io.spectrum_from_dict(doc.get("spectrum", doc))
    else:
        sp = assemble_cone_spectrum(_link(args), args.sign, args.ibc, args.s, args.cutoff)
    fit = weyl_fit(sp)
    doc = {"theta_hat": fit.theta_hat, "c_hat": fit.c_hat, "slope": fit.slope, "points": fit.points}
    _write(args, _emit_records(args, doc, [doc]))
    if args.assert_ and not fit.c_hat > 0:
        return EXIT_ASSERT
    return EXIT_OK


# -- parser --------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--s", type=_positive, default=1.0, help="deformation parameter (default 1)")
    common.add_argument("--cutoff", type=_positive, default=20.0, help="eigenvalue bound in units of s (default 20)")
    common.add_argument("--ibc", type=Ibc.parse, default=Ibc.MAX, help="min or max (default max)")
    common.add_argument("--sign", type=Sign.parse, default=Sign.PLUS, help="plus or minus (default plus)")
    common.add_argument("--format", choices=("json", "csv", "table"), default="json")
    common.add_argument("--output", "-o", default=None, help="output file (default stdout)")

    parser = argparse.ArgumentParser(prog="stratwitten", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("p-spec", parents=[common], help="spectrum of the model operator P")
    p.add_argument("--c1", type=float, required=True)
    p.add_argument("--c2", type=float, required=True)
    p.add_argument("--branch", type=int, default=0, help="admissible exponent index, largest sigma first")
    p.set_defaults(func=cmd_p_spec)

    p = sub.add_parser("complex-spec", parents=[common], help="spectrum of a length-one or length-two model complex")
    p.add_argument("--length", type=int, choices=(1, 2), default=1)
    p.add_argument("--kappa", type=float, required=True)
    p.add_argument("--c", type=_positive, default=1.0, help="coupling of the length-two complex")
    p.set_defaults(func=cmd_complex_spec)

    def link_source(p):
        g = p.add_mutually_exclusive_group(required=True)
        g.add_argument("--link", help="link spectrum JSON")
        g.add_argument("--sphere", type=int, help="use bundled data of the round sphere S^N")

    p = sub.add_parser("cone-spec", parents=[common], help="spectrum of the cone over a link")
    link_source(p)
    p.set_defaults(func=cmd_cone_spec)

    p = sub.add_parser("local-model", parents=[common], help="spectrum of a product descriptor")
    p.add_argument("--desc", required=True, help="descriptor JSON")
    p.set_defaults(func=cmd_local_model)

    p = sub.add_parser("betti", parents=[common], help="Betti numbers of a descriptor")
    p.add_argument("--desc", required=True)
    p.set_defaults(func=cmd_betti)

    p = sub.add_parser("nu", parents=[common], help="Morse numbers of critical points")
    p.add_argument("--points", required=True, help="critical-point list JSON")
    p.set_defaults(func=cmd_nu)

    p = sub.add_parser("morse-check", parents=[common], help="check the Morse inequalities")
    p.add_argument("--beta", type=_int_list, required=True)
    g = p.add_mutually_exclusive_group()
    g.add_argument("--nu", type=_int_list)
    g.add_argument("--points")
    p.add_argument("--assert", dest="assert_", action="store_true", help="exit 1 if a check fails")
    p.set_defaults(func=cmd_morse_check)

    p = sub.add_parser("fd-validate", parents=[common], help="compare closed forms with finite differences")
    p.add_argument("--n", type=int, default=2, help="cone dimension for the cone blocks")
    p.add_argument("--mu", type=float, default=1.0)
    p.add_argument("--R", type=_positive, default=10.0)
    p.add_argument("--h", type=_positive, default=5e-3)
    p.add_argument("--tol", type=_positive, default=0.02)
    p.add_argument("--assert", dest="assert_", action="store_true")
    p.set_defaults(func=cmd_fd_validate)

    p = sub.add_parser("weyl-fit", parents=[common], help="fit the Weyl exponent of a cone spectrum")
    g = p.add_mutually_exclusive_group(required=True)
    g.add_argument("--link")
    g.add_argument("--sphere", type=int)
    g.add_argument("--spectrum", help="spectrum JSON emitted by another command")
    p.add_argument("--assert", dest="assert_", action="store_true")
    p.set_defaults(func=cmd_weyl_fit)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        with warnings.catch_warnings():
            warnings.simplefilter("always")
            warnings.showwarning = lambda m, *a, **k: print(f"warning: {m}", file=sys.stderr)
            return args.func(args)
    except SchemaError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except (InputError, StratWittenError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
