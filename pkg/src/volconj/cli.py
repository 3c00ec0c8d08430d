"""Command-line interface: jones, limit, geometry, schlafli, gukov, roots,
mm-check, sweep.

Knot grammar: ``unknot``, ``fig8``, ``torus:A,B``.  Complex numbers are
written ``re+imi`` / ``re-imi`` with no spaces, e.g. ``-0.6+0.4i``.
Exit codes: 0 success, 1 validation error, 2 numerical failure.
"""

from __future__ import annotations

import argparse
import json
import math
import re
import sys

from .errors import DomainError, NumericalError, VolconjError
from .geometry import (
    CLOSED_FORM,
    geometry_point,
    gukov_check,
    h_closed,
    h_numeric,
    mm_check,
    shared_root_check,
)
from .jones import jones_evaluation
from .knots import UNKNOT, KnotSpec, a_polynomial, alexander, alexander_roots
from .sweep import CSV_HEADER, SweepJob, SweepResult, run_sweep
from .numerics import extrapolate

_COMPLEX_RE = re.compile(
    r"^[+-]?(\d+\.?\d*|\.\d+)([eE][+-]?\d+)?([+-](\d+\.?\d*|\.\d+)([eE][+-]?\d+)?i)?$|"
    r"^[+-]?(\d+\.?\d*|\.\d+)([eE][+-]?\d+)?i$"
)


def parse_complex(text: str) -> complex:
    t = text.strip().replace(" ", "")
    if not _COMPLEX_RE.match(t):
        raise DomainError(
            f"bad complex literal {text!r}; use re+imi with no spaces, e.g. -0.6+0.4i"
        )
    return complex(t.replace("i", "j"))


def format_complex(z: complex) -> str:
    sign = "+" if z.imag >= 0 else "-"
    return f"{z.real:.12g}{sign}{abs(z.imag):.12g}i"


def _parse_grid(text: str) -> tuple[float, float, float, float]:
    parts = text.split(":")
    if len(parts) != 4:
        raise DomainError(f"bad grid {text!r}, expected remin:remax:immin:immax")
    try:
        return tuple(float(p) for p in parts)  # type: ignore[return-value]
    except ValueError as exc:
        raise DomainError(f"bad grid {text!r}: {exc}") from exc


def _parse_steps(text: str) -> tuple[int, int]:
    m = re.match(r"^(\d+)x(\d+)$", text.strip())
    if not m:
        raise DomainError(f"bad steps {text!r}, expected AxB like 20x20")
    return int(m.group(1)), int(m.group(2))


def _emit(args, text: str) -> None:
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text if text.endswith("\n") else text + "\n")
    else:
        sys.stdout.write(text if text.endswith("\n") else text + "\n")


def _schedule(args) -> list[int]:
    return list(range(args.nmin, args.nmax + 1, args.nstep))


# ---------------------------------------------------------------------------
# subcommands
# ---------------------------------------------------------------------------


def _cmd_jones(args) -> int:
    knot = KnotSpec.parse(args.knot)
    q = parse_complex(args.q)
    ev = jones_evaluation(knot, args.n, q)
    lines = [
        f"J_{args.n}({knot.display()}; {format_complex(q)})",
        f"  log form: log_mag = {ev.value.log_mag!r}, phase = {ev.value.phase!r}",
    ]
    if ev.value.log_mag <= 700:
        lines.append(f"  value   : {format_complex(ev.value.to_complex())}")
    else:
        lines.append("  value   : magnitude exceeds double range (see log form)")
    _emit(args, "\n".join(lines))
    return 0


def _cmd_limit(args) -> int:
    knot = KnotSpec.parse(args.knot)
    u = parse_complex(args.u)
    est = h_numeric(knot, u, _schedule(args))
    lines = [
        f"H_numeric({knot.display()}; u={format_complex(u)})",
        f"  value        : {format_complex(est.value)}",
        f"  error est    : {est.error_estimate!r}",
        f"  samples      : {len(est.samples)} (N = {est.samples[0][0]}..{est.samples[-1][0]})",
    ]
    if knot.kind != UNKNOT:
        closed = h_closed(knot, u)
        lines.append(f"  closed form  : {format_complex(closed)}")
        lines.append(f"  |difference| : {abs(est.value - closed)!r}")
    _emit(args, "\n".join(lines))
    return 0


def _cmd_geometry(args) -> int:
    knot = KnotSpec.parse(args.knot)
    u = parse_complex(args.u)
    pt = geometry_point(knot, u, mode=args.mode, schedule=_schedule(args))
    if args.format == "json":
        from .sweep import _point_json

        _emit(args, json.dumps(_point_json(0, pt), indent=1, sort_keys=True))
    else:
        from .sweep import _csv_row

        _emit(args, CSV_HEADER + "\n" + _csv_row(0, pt))
    return 0


def _cmd_schlafli(args) -> int:
    from .geometry import schlafli_residual

    knot = KnotSpec.parse(args.knot)
    p0 = parse_complex(args.path_start)
    p1 = parse_complex(args.path_end)
    path = lambda s: p0 + s * (p1 - p0)
    res = schlafli_residual(knot, path, args.t, args.dt)
    ok = res <= args.tol
    _emit(
        args,
        f"schlafli residual at t={args.t}: {res!r} (tol {args.tol}) -> "
        + ("PASS" if ok else "FAIL"),
    )
    return 0 if ok else 2


def _cmd_gukov(args) -> int:
    knot = KnotSpec.parse(args.knot)
    u = parse_complex(args.u)
    rep = gukov_check(knot, u, tol=args.tol)
    lines = [
        f"gukov check for {knot.display()} at u = {format_complex(u)}",
        f"  v    = {format_complex(rep.v)}",
        f"  l(a) = {format_complex(rep.l_of_a)}",
    ]
    for name, (L, M) in rep.pairs.items():
        lines.append(f"  pair {name}: (L, M) = ({format_complex(L)}, {format_complex(M)})")
    for (label, pname), mag in sorted(rep.magnitudes.items()):
        mark = "ZERO" if (label, pname) in rep.vanishing else "    "
        lines.append(f"  |{label} @ {pname}| = {mag:.6e} {mark}")
    _emit(args, "\n".join(lines))
    return 0


def _cmd_roots(args) -> int:
    knot = KnotSpec.parse(args.knot)
    lines = [f"knot {knot.display()}"]
    lines.append(f"  Alexander: {alexander(knot).pretty()}")
    roots = alexander_roots(knot)
    for r in roots:
        lines.append(f"  Delta root: {format_complex(r)}")
    if knot.kind != UNKNOT:
        rep = shared_root_check(knot, tol=args.tol)
        lines.append(
            f"  H root: {format_complex(rep.root)}  |H| = {abs(rep.h_at_root):.3e}"
            f"  |Delta(e^root)| = {abs(rep.alexander_at_exp_root):.3e}"
        )
        record = a_polynomial(knot)
        for label, poly in record.factors():
            lines.append(f"  A-factor {label}:")
            for line in poly.to_term_lines().splitlines():
                lines.append(f"    {line}")
    _emit(args, "\n".join(lines))
    return 0


def _cmd_mm_check(args) -> int:
    knot = KnotSpec.parse(args.knot)
    u = parse_complex(args.u)
    rep = mm_check(knot, u, args.n, tol=args.tol)
    _emit(
        args,
        f"J_{args.n} = {format_complex(rep.jn)}  1/Delta = {format_complex(rep.delta_inverse)}"
        f"  deviation = {rep.deviation!r} (tol {args.tol}) -> "
        + ("PASS" if rep.within else "FAIL"),
    )
    return 0 if rep.within else 2


def _cmd_sweep(args) -> int:
    knot = KnotSpec.parse(args.knot)
    re_min, re_max, im_min, im_max = _parse_grid(args.grid)
    steps_re, steps_im = _parse_steps(args.steps)
    job = SweepJob(
        knot=knot,
        re_min=re_min,
        re_max=re_max,
        im_min=im_min,
        im_max=im_max,
        steps_re=steps_re,
        steps_im=steps_im,
        n_min=args.nmin,
        n_max=args.nmax,
        n_step=args.nstep,
        mode=args.mode,
    )
    result = run_sweep(job, parallelism=args.threads)
    _emit(args, result.to_json() if args.format == "json" else result.to_csv())
    if result.failures and not result.rows:
        return 2
    return 0


# ---------------------------------------------------------------------------
# parser assembly
# ---------------------------------------------------------------------------


def _add_common(sp, *, tol_default=1e-6):
    sp.add_argument("--format", choices=("csv", "json"), default="csv")
    sp.add_argument("--tol", type=float, default=tol_default)
    sp.add_argument("--threads", type=int, default=1)
    sp.add_argument("--out", default=None, help="write output to a file")


def _add_schedule(sp, nmin=200, nmax=2000, nstep=150):
    sp.add_argument("--nmin", type=int, default=nmin)
    sp.add_argument("--nmax", type=int, default=nmax)
    sp.add_argument("--nstep", type=int, default=nstep)


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="volconj",
        description=__doc__,
        formatter_class=argparse.RawDescriptionHelpFormatter,
    )
    sub = ap.add_subparsers(dest="command", required=True)

    sp = sub.add_parser("jones", help="evaluate J_N(knot; q)")
    sp.add_argument("--knot", required=True)
    sp.add_argument("--n", type=int, required=True)
    sp.add_argument("--q", required=True)
    _add_common(sp)
    sp.set_defaults(func=_cmd_jones)

    sp = sub.add_parser("limit", help="extrapolate lim log J_N / N and compare closed form")
    sp.add_argument("--knot", required=True)
    sp.add_argument("--u", required=True)
    _add_schedule(sp, nmin=200, nmax=3000, nstep=200)
    _add_common(sp)
    sp.set_defaults(func=_cmd_limit)

    sp = sub.add_parser("geometry", help="GeometryPoint at one u")
    sp.add_argument("--knot", required=True)
    sp.add_argument("--u", required=True)
    sp.add_argument("--mode", choices=("closed_form", "numeric_limit", "both"),
                    default=CLOSED_FORM)
    _add_schedule(sp)
    _add_common(sp)
    sp.set_defaults(func=_cmd_geometry)

    sp = sub.add_parser("schlafli", help="Schlafli residual along a linear path")
    sp.add_argument("--knot", required=True)
    sp.add_argument("--path-start", required=True, help="u at t=0")
    sp.add_argument("--path-end", required=True, help="u at t=1")
    sp.add_argument("--t", type=float, default=0.5)
    sp.add_argument("--dt", type=float, default=1e-3)
    _add_common(sp, tol_default=1e-4)
    sp.set_defaults(func=_cmd_schlafli)

    sp = sub.add_parser("gukov", help="A-polynomial pairing check")
    sp.add_argument("--knot", required=True)
    sp.add_argument("--u", required=True)
    _add_common(sp)
    sp.set_defaults(func=_cmd_gukov)

    sp = sub.add_parser("roots", help="Alexander roots and the shared H root")
    sp.add_argument("--knot", required=True)
    _add_common(sp, tol_default=1e-10)
    sp.set_defaults(func=_cmd_roots)

    sp = sub.add_parser("mm-check", help="abelian-regime check against 1/Delta")
    sp.add_argument("--knot", required=True)
    sp.add_argument("--u", required=True)
    sp.add_argument("--n", type=int, default=2000)
    _add_common(sp, tol_default=1e-2)
    sp.set_defaults(func=_cmd_mm_check)

    sp = sub.add_parser("sweep", help="grid sweep with CSV/JSON output")
    sp.add_argument("--knot", required=True)
    sp.add_argument("--grid", required=True, help="remin:remax:immin:immax")
    sp.add_argument("--steps", required=True, help="AxB, e.g. 20x20")
    sp.add_argument("--mode", choices=("closed_form", "numeric_limit", "both"),
                    default=CLOSED_FORM)
    _add_schedule(sp, nmin=500, nmax=2000, nstep=250)
    _add_common(sp)
    sp.set_defaults(func=_cmd_sweep)

    return ap


# options whose values may start with '-' (complex numbers, grid ranges);
# argparse only accepts those in --opt=value form, so join them up front
_DASH_VALUED = {"--grid", "--u", "--q", "--path-start", "--path-end"}


def _join_dash_values(argv: list[str]) -> list[str]:
    out = []
    i = 0
    while i < len(argv):
        tok = argv[i]
        if tok in _DASH_VALUED and i + 1 < len(argv) and argv[i + 1].startswith("-"):
            out.append(f"{tok}={argv[i + 1]}")
            i += 2
        else:
            out.append(tok)
            i += 1
    return out


def main(argv=None) -> int:
    ap = build_parser()
    if argv is None:
        argv = sys.argv[1:]
    try:
        args = ap.parse_args(_join_dash_values(list(argv)))
    except SystemExit as exc:
        # argparse already printed usage
        return 1 if exc.code not in (0, None) else 0
    try:
        return args.func(args)
    except (DomainError,) as exc:
        sys.stderr.write(f"error: {exc}\n")
        ap.print_usage(sys.stderr)
        return 1
    except (NumericalError, VolconjError) as exc:
        sys.stderr.write(f"numerical failure: {exc}\n")
        return 2


if __name__ == "__main__":
    sys.exit(main())
