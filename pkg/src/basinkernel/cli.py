"""Command-line front end.  Each subcommand parses and validates its
arguments, calls into the library, and only then writes output."""

from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys
from typing import Sequence

from . import cuntz, verify
from .dynamics import FamilyMember, IterConfig
from .kernel import KernelConfig, eval_kernel
from .poly import ExpansionTooLarge, ExponentOverflow
from .render import GridSpec, render_basin, write_image

_ITER = IterConfig()
_KERN = KernelConfig()


def parse_complex(text: str) -> complex:
    """``re,im`` or a plain real number."""
    parts = text.split(",")
    try:
        if len(parts) == 1:
            return complex(float(parts[0]), 0.0)
        if len(parts) == 2:
            return complex(float(parts[0]), float(parts[1]))
    except ValueError:
        pass
    raise argparse.ArgumentTypeError(f"expected 're,im' or a real number, got {text!r}")


def parse_word(text: str) -> cuntz.Word:
    try:
        return cuntz.Word.parse(text)
    except ValueError as exc:  # includes WordTooLong
        raise argparse.ArgumentTypeError(str(exc)) from None


def _positive_int(text: str) -> int:
    v = int(text)
    if v < 1:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {text}")
    return v


def _write_text(path: str | None, text: str) -> None:
    if path is None or path == "-":
        sys.stdout.write(text)
        return
    tmp = path + ".tmp"
    with open(tmp, "w", newline="") as fh:
        fh.write(text)
    os.replace(tmp, path)


def _family(args, parser) -> FamilyMember:
    try:
        return FamilyMember(args.n, args.a)
    except (TypeError, ValueError) as exc:
        parser.error(str(exc))


def _add_family(p: argparse.ArgumentParser) -> None:
    p.add_argument("--n", type=int, default=0, help="family index, 0..3")
    p.add_argument("--a", type=parse_complex, default=1 + 0j, help="parameter a as re,im (nonzero)")


def _iter_cfg(args, parser) -> IterConfig:
    try:
        return IterConfig(args.max_iters, args.escape_radius, args.convergence_radius, args.series_tail_eps)
    except ValueError as exc:
        parser.error(str(exc))


def _kernel_cfg(args, parser) -> KernelConfig:
    try:
        return KernelConfig(args.max_factors, args.tail_eps, args.kernel_escape_radius)
    except ValueError as exc:
        parser.error(str(exc))


def _add_iter(p: argparse.ArgumentParser) -> None:
    p.add_argument("--max-iters", type=int, default=_ITER.max_iters)
    p.add_argument("--escape-radius", type=float, default=_ITER.escape_radius)
    p.add_argument("--convergence-radius", type=float, default=_ITER.convergence_radius)
    p.add_argument("--series-tail-eps", type=float, default=_ITER.series_tail_eps)


def _add_kernel(p: argparse.ArgumentParser) -> None:
    p.add_argument("--max-factors", type=int, default=_KERN.max_factors)
    p.add_argument("--tail-eps", type=float, default=_KERN.tail_eps)
    p.add_argument("--kernel-escape-radius", type=float, default=_KERN.escape_radius)


# -- subcommands -----------------------------------------------------------------


def cmd_basin(args, parser) -> int:
    fm = _family(args, parser)
    cfg = _iter_cfg(args, parser)
    width = args.width or args.px
    height = args.height or args.px
    try:
        grid = GridSpec(args.center, args.half_width, width, height)
    except ValueError as exc:
        parser.error(str(exc))
    fmt = args.format or os.path.splitext(args.output)[1].lstrip(".").lower() or "pgm"
    if fmt not in ("pgm", "ppm"):
        parser.error(f"unknown image format {fmt!r}")
    if args.threads is not None and args.threads < 0:
        parser.error("--threads must be >= 0")
    img = render_basin(fm, grid, cfg, args.threads)
    write_image(args.output, img, fmt)
    return 0


KERNEL_FIELDS = ("z_re", "z_im", "w_re", "w_im", "k_re", "k_im", "factors_used", "tail_bound", "converged")


def _read_pairs(path: str) -> list[tuple[complex, complex]]:
    with open(path, newline="") as fh:
        rows = list(csv.DictReader(fh))
    try:
        return [
            (complex(float(r["z_re"]), float(r["z_im"])), complex(float(r["w_re"]), float(r["w_im"])))
            for r in rows
        ]
    except (KeyError, ValueError) as exc:
        raise ValueError(f"{path}: need numeric columns z_re,z_im,w_re,w_im ({exc})") from None


def cmd_kernel(args, parser) -> int:
    fm = _family(args, parser)
    cfg = _kernel_cfg(args, parser)
    if args.points:
        try:
            pairs = _read_pairs(args.points)
        except (OSError, ValueError) as exc:
            parser.error(str(exc))
    else:
        z = args.z if args.z is not None else 0j
        w = args.w if args.w is not None else z
        pairs = [(z, w)]
    buf = io.StringIO()
    out = csv.writer(buf, lineterminator="\n")
    out.writerow(KERNEL_FIELDS)
    for z, w in pairs:
        kv = eval_kernel(fm, z, w, cfg)
        out.writerow([repr(z.real), repr(z.imag), repr(w.real), repr(w.imag),
                      repr(kv.value.real), repr(kv.value.imag), kv.factors_used,
                      repr(kv.tail_bound), str(kv.converged).lower()])
    _write_text(args.output, buf.getvalue())
    return 0


def cmd_basis(args, parser) -> int:
    if not 0 <= args.n <= 3:
        parser.error("n must be in 0..3")
    if args.all:
        if args.max_len is None:
            parser.error("--all requires --max-len")
        try:
            words = cuntz.enumerate_canonical(args.max_len)
        except ValueError as exc:
            parser.error(str(exc))
    else:
        if args.word is None:
            parser.error("give --word or --all --max-len")
        words = [args.word]
    try:
        objs = [cuntz.basis_vector(args.n, v).to_json_obj() for v in words]
    except (ExpansionTooLarge, ExponentOverflow) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    payload = objs if args.all else objs[0]
    _write_text(args.output, json.dumps(payload, indent=1) + "\n")
    return 0


def _corners(spec: str | None, parser) -> list[FamilyMember]:
    if not spec:
        return list(verify.DEFAULT_CORNERS)
    out = []
    for item in spec.split(";"):
        n_text, _, a_text = item.partition(":")
        try:
            out.append(FamilyMember(int(n_text), parse_complex(a_text or "1")))
        except (ValueError, TypeError, argparse.ArgumentTypeError) as exc:
            parser.error(f"bad corner {item!r}: {exc}")
    return out


def cmd_verify(args, parser) -> int:
    corners = _corners(args.corners, parser)
    if args.tolerance is not None and args.tolerance < 0:
        parser.error("--tolerance must be >= 0")
    opts = verify.SuiteOptions(
        basin_grid=GridSpec(0j, 2.0, args.px, args.px),
        basis_max_len=args.basis_max_len,
    )
    reports = verify.run_all(corners, seed=args.seed, tolerances=args.tolerance, options=opts)
    if args.csv:
        _write_text(args.csv, verify.reports_to_csv(reports))
    if args.json:
        _write_text(args.json, verify.reports_to_json(reports))
    for r in reports:
        tag = "PASS" if r.passed else "FAIL"
        who = f"n={r.params.get('n')}" + (f" a={complex(r.params['a_re'], r.params['a_im'])}" if "a_re" in r.params else "")
        print(f"{tag} {r.check_name:26s} {who:28s} residual={r.max_residual:.3e} tol={r.tolerance:.1e}")
    failed = sum(not r.passed for r in reports)
    print(f"{len(reports) - failed}/{len(reports)} checks passed")
    return 1 if failed else 0


def continuity_path(kind: str, a_lim: complex, steps: int, start: complex, ratio: float) -> list[complex]:
    if kind == "harmonic":
        return [a_lim * (1 + 1 / k) for k in range(1, steps + 1)]
    if kind == "geometric":
        return [a_lim + (start - a_lim) * ratio**k for k in range(1, steps + 1)]
    if kind == "constant":
        return [a_lim] * steps
    raise ValueError(f"unknown path {kind!r}")


def cmd_continuity(args, parser) -> int:
    fm = _family(args, parser)
    if args.steps < 1:
        parser.error("--steps must be positive")
    if not 0 < args.ratio < 1:
        parser.error("--ratio must be in (0, 1)")
    if args.radius <= 0:
        parser.error("--radius must be positive")
    start = args.start if args.start is not None else fm.a * 1.5
    path = continuity_path(args.path, fm.a, args.steps, start, args.ratio)
    if any(a == 0 for a in path):
        parser.error("the a-path passes through 0")
    dists = cuntz.continuity_modulus(fm, args.word, path, fm.a, args.radius)
    buf = io.StringIO()
    out = csv.writer(buf, lineterminator="\n")
    out.writerow(("k", "a_re", "a_im", "distance"))
    for k, (a, d) in enumerate(zip(path, dists), start=1):
        out.writerow([k, repr(a.real), repr(a.imag), repr(d)])
    _write_text(args.output, buf.getvalue())
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="basinkernel", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("basin", help="render the basin of 0 as PGM/PPM")
    _add_family(p)
    _add_iter(p)
    p.add_argument("--center", type=parse_complex, default=0j)
    p.add_argument("--half-width", type=float, default=2.0)
    p.add_argument("--px", type=_positive_int, default=256, help="square image size")
    p.add_argument("--width", type=_positive_int)
    p.add_argument("--height", type=_positive_int)
    p.add_argument("--format", choices=("pgm", "ppm"))
    p.add_argument("--threads", type=int, help="worker threads, 0 = auto")
    p.add_argument("-o", "--output", default="basin.pgm")
    p.set_defaults(func=cmd_basin)

    p = sub.add_parser("kernel", help="evaluate K(z, w) and print CSV")
    _add_family(p)
    _add_kernel(p)
    p.add_argument("--z", type=parse_complex)
    p.add_argument("--w", type=parse_complex)
    p.add_argument("--points", help="CSV with columns z_re,z_im,w_re,w_im")
    p.add_argument("-o", "--output")
    p.set_defaults(func=cmd_kernel)

    p = sub.add_parser("basis", help="exact basis vector(s) as JSON")
    p.add_argument("--n", type=int, default=0)
    p.add_argument("--word", type=parse_word)
    p.add_argument("--all", action="store_true", help="every canonical word up to --max-len")
    p.add_argument("--max-len", type=int)
    p.add_argument("-o", "--output")
    p.set_defaults(func=cmd_basis)

    p = sub.add_parser("verify", help="run the verification suite")
    p.add_argument("--corners", help="semicolon list of n:re,im, e.g. '0:1;2:1'")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--tolerance", type=float, help="override every tolerance")
    p.add_argument("--px", type=_positive_int, default=256, help="grid size of the basin comparison")
    p.add_argument("--basis-max-len", type=int, default=4)
    p.add_argument("--csv")
    p.add_argument("--json")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("continuity", help="coefficient distances along an a-path")
    _add_family(p)
    p.add_argument("--word", type=parse_word, required=True)
    p.add_argument("--path", choices=("harmonic", "geometric", "constant"), default="harmonic")
    p.add_argument("--steps", type=int, default=10)
    p.add_argument("--start", type=parse_complex, help="a_0 for the geometric path (default 1.5 a)")
    p.add_argument("--ratio", type=float, default=0.5)
    p.add_argument("--radius", type=float, default=1.0, help="evaluation disk radius")
    p.add_argument("-o", "--output")
    p.set_defaults(func=cmd_continuity)
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    return args.func(args, parser)


if __name__ == "__main__":
    raise SystemExit(main())
