"""Command-line front end.

Exit codes: 0 ok, 1 a property check failed, 2 bad input, 3 window
violation, 4 operator contract (nonzero scaling coefficient in spectral mode).
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from fractions import Fraction

from . import checks, haar, monna
from .lcf import OverlapError, PiecewiseConstant
from .padic import Ball, PAdicRational, PrimeMismatchError
from .vladimirov import AlphaParam, ScalingCoefficientError, apply_spectral, evaluate_direct
from .wavelets import (
    WaveletExpansion,
    WaveletIndex,
    WindowError,
    analyze,
    reconstruct,
    window_grid,
)

EXIT_OK, EXIT_PROPERTY, EXIT_SCHEMA, EXIT_WINDOW, EXIT_CONTRACT = 0, 1, 2, 3, 4

COEFF_HEADER = ["gamma", "j", "n_num", "n_den_exp", "re", "im"]
HAAR_HEADER = ["gamma", "n", "re", "im"]


class CliError(Exception):
    def __init__(self, code: int, message: str):
        super().__init__(message)
        self.code = code


def fmt(x: float) -> str:
    return format(x + 0.0, ".17g")


def _window(text: str) -> tuple[int, int]:
    try:
        v, m = (int(s) for s in text.split(","))
    except ValueError:
        raise argparse.ArgumentTypeError(f"window must be 'V,M', got {text!r}")
    return v, m


def _positive(text: str) -> float:
    x = float(text)
    if not x > 0:
        raise argparse.ArgumentTypeError(f"expected a positive number, got {text!r}")
    return x


# file formats


def read_json(path: str):
    try:
        with (sys.stdin if path == "-" else open(path)) as fh:
            return json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise CliError(EXIT_SCHEMA, f"cannot read JSON from {path}: {exc}")


def load_function(path: str, prime: int | None) -> PiecewiseConstant:
    data = read_json(path)
    try:
        f = PiecewiseConstant.from_json(data)
    except (KeyError, TypeError, ValueError, OverlapError, PrimeMismatchError) as exc:
        raise CliError(EXIT_SCHEMA, f"{path}: invalid function file: {exc}")
    if prime is not None and f.prime != prime:
        raise CliError(EXIT_SCHEMA, f"{path}: function is over prime {f.prime}, --prime is {prime}")
    return f


def load_step(path: str) -> haar.DyadicStepFn:
    data = read_json(path)
    try:
        return haar.DyadicStepFn.from_json(data)
    except (KeyError, TypeError, ValueError) as exc:
        raise CliError(EXIT_SCHEMA, f"{path}: invalid step function file: {exc}")


def write_coeff_csv(e: WaveletExpansion) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(COEFF_HEADER)
    # j = 0 marks the scaling coefficient; gamma then carries V
    w.writerow([e.V, 0, 0, 0, fmt(e.scaling_coeff.real), fmt(e.scaling_coeff.imag)])
    for idx, c in e.sorted_items():
        num, den = idx.n_parts(e.prime)
        w.writerow([idx.gamma, idx.j, num, den, fmt(c.real), fmt(c.imag)])
    return buf.getvalue()


def read_coeff_csv(text: str, prime: int, M: int | None = None) -> WaveletExpansion:
    try:
        rows = list(csv.DictReader(io.StringIO(text)))
        if not rows or list(rows[0].keys()) != COEFF_HEADER:
            raise ValueError(f"header must be {','.join(COEFF_HEADER)}")
        V = None
        c0 = 0j
        coeffs = {}
        for row in rows:
            gamma, j = int(row["gamma"]), int(row["j"])
            value = complex(float(row["re"]), float(row["im"]))
            if j == 0:
                V, c0 = gamma, value
                continue
            n = Fraction(int(row["n_num"]), prime ** int(row["n_den_exp"]))
            idx = WaveletIndex(gamma, j, n)
            idx.check(prime)
            coeffs[idx] = value
    except (KeyError, TypeError, ValueError) as exc:
        raise CliError(EXIT_SCHEMA, f"invalid coefficient table: {exc}")
    if V is None:
        V = max((i.gamma for i in coeffs), default=0)
    if M is None:
        M = max([0] + [1 - i.gamma for i in coeffs])
    return WaveletExpansion(prime, V, M, c0, coeffs)


def write_haar_csv(h: haar.HaarCoefficients) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(HAAR_HEADER)
    for idx in sorted(h.coeffs):
        c = h.coeffs[idx]
        w.writerow([idx.gamma, idx.n, fmt(c.real), fmt(c.imag)])
    return buf.getvalue()


def emit(text: str, path: str | None) -> None:
    if path and path != "-":
        with open(path, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def dump_json(obj) -> str:
    return json.dumps(obj, indent=1, sort_keys=False) + "\n"


# subcommands


def _window_or_die(args) -> tuple[int, int]:
    if args.window is None:
        raise CliError(EXIT_SCHEMA, "--window V,M is required")
    V, M = args.window
    if V + M < 0:
        raise CliError(EXIT_WINDOW, f"empty window V={V}, M={M}")
    return V, M


def _analyze(f: PiecewiseConstant, V: int, M: int) -> WaveletExpansion:
    try:
        return analyze(f, V, M)
    except WindowError as exc:
        raise CliError(EXIT_WINDOW, str(exc))


def cmd_analyze(args) -> int:
    f = load_function(args.input, args.prime)
    V, M = _window_or_die(args)
    e = _analyze(f, V, M)
    emit(write_coeff_csv(e), args.out)
    summary = {
        "prime": f.prime,
        "window": [V, M],
        "coefficients": len(e.coeffs),
        "scaling_coeff": [fmt(e.scaling_coeff.real), fmt(e.scaling_coeff.imag)],
        "norm_sq": fmt(f.norm_sq()),
        "parseval_defect": fmt(abs(f.norm_sq() - e.energy())),
    }
    if args.summary:
        emit(dump_json(summary), args.summary)
    elif args.out and args.out != "-":
        sys.stdout.write(dump_json(summary))
    else:
        sys.stderr.write(dump_json(summary))
    return EXIT_OK


def cmd_synthesize(args) -> int:
    try:
        with (sys.stdin if args.input == "-" else open(args.input)) as fh:
            text = fh.read()
    except OSError as exc:
        raise CliError(EXIT_SCHEMA, str(exc))
    M = args.window[1] if args.window else None
    e = read_coeff_csv(text, args.prime or 2, M)
    emit(reconstruct(e).dumps() + "\n", args.out)
    return EXIT_OK


def _points(text: str | None, p: int) -> list[PAdicRational] | None:
    if not text:
        return None
    try:
        return [PAdicRational.parse(s, p) for s in text.split(",")]
    except ValueError as exc:
        raise CliError(EXIT_SCHEMA, str(exc))


def cmd_dalpha(args) -> int:
    if args.mode == "real":
        f = load_step(args.input)
        try:
            ts = [Fraction(s) for s in args.points.split(",")] if args.points else None
        except ValueError as exc:
            raise CliError(EXIT_SCHEMA, str(exc))
        if ts is None:
            ts = [Fraction(j, 2**f.M) for j in range(2 ** (f.K + f.M))]
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["t", "re", "im"])
        for t in ts:
            try:
                v = haar.real_dalpha(f, args.alpha, t)
            except ValueError as exc:
                raise CliError(EXIT_SCHEMA, str(exc))
            w.writerow([str(t), fmt(v.real), fmt(v.imag)])
        emit(buf.getvalue(), args.out)
        return EXIT_OK

    f = load_function(args.input, args.prime)
    a = AlphaParam(args.alpha, f.prime)
    if args.mode == "spectral":
        V, M = _window_or_die(args)
        e = _analyze(f, V, M)
        try:
            de = apply_spectral(e, a, atol=args.tol)
        except ScalingCoefficientError as exc:
            raise CliError(EXIT_CONTRACT, str(exc))
        emit(write_coeff_csv(de), args.out)
        return EXIT_OK

    pts = _points(args.points, f.prime)
    if pts is None:
        V, M = _window_or_die(args)
        pts = [b.center for b in window_grid(V, M, f.prime)]
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["x", "re", "im"])
    for x in pts:
        v = evaluate_direct(f, x, a)
        w.writerow([str(x), fmt(v.real), fmt(v.imag)])
    emit(buf.getvalue(), args.out)
    return EXIT_OK


def cmd_monna(args) -> int:
    p = args.prime or 2
    out = {"prime": p, "points": [], "balls": []}
    try:
        for s in args.point or []:
            x = PAdicRational.parse(s, p)
            out["points"].append({"x": str(x), "rho": str(monna.rho(x))})
        for s in args.ball or []:
            center, k = s.rsplit(",", 1)
            b = Ball(p, PAdicRational.parse(center, p), int(k))
            iv = monna.ball_interval(b)
            out["balls"].append(
                {**b.to_json(), "measure": str(b.measure()), "left": str(iv.left), "length": str(iv.length)}
            )
    except ValueError as exc:
        raise CliError(EXIT_SCHEMA, str(exc))
    emit(dump_json(out), args.out)
    return EXIT_OK


def cmd_bridge(args) -> int:
    f = load_step(args.input)
    h = haar.haar_analyze(f)
    emit(write_haar_csv(h), args.out)
    g = haar.pullback(f)
    if args.pullback:
        emit(g.dumps() + "\n", args.pullback)
    summary = {
        "K": f.K,
        "M": f.M,
        "haar_scaling": [fmt(h.scaling.real), fmt(h.scaling.imag)],
        "norm_sq_real": fmt(f.norm_sq()),
        "norm_sq_padic": fmt(g.norm_sq()),
        "commutation_residual": fmt(haar.commutation_residual(f)),
    }
    (sys.stdout if args.out and args.out != "-" else sys.stderr).write(dump_json(summary))
    return EXIT_OK


def cmd_verify(args) -> int:
    p = args.prime or 2
    window = args.window or (1, 1)
    results = checks.run_suite(p, args.alpha, window, args.tol, seed=args.seed, perturb=args.perturb)
    for r in results:
        sys.stderr.write(r.line() + "\n")
    rep = checks.report(results)
    rep.update({"prime": p, "alpha": args.alpha, "window": list(window), "tol": args.tol})
    emit(dump_json(rep), args.out)
    return EXIT_OK if rep["passed"] else EXIT_PROPERTY


# parser


def _globals(parser: argparse.ArgumentParser, suppress: bool) -> None:
    d = (lambda v: argparse.SUPPRESS) if suppress else (lambda v: v)
    parser.add_argument("--prime", type=int, default=d(None), help="prime p (default: from input, else 2)")
    parser.add_argument("--alpha", type=_positive, default=d(1.0), help="order of D^alpha (default 1)")
    parser.add_argument("--window", type=_window, default=d(None), metavar="V,M", help="window (V,M) or (K,M)")
    parser.add_argument("--tol", type=_positive, default=d(1e-9), help="tolerance (default 1e-9)")
    parser.add_argument("--out", default=d(None), help="output path (default stdout)")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="padic-wavelets", description="p-adic wavelets and the Haar bridge")
    _globals(parser, suppress=False)
    sub = parser.add_subparsers(dest="command", required=True)

    sp = sub.add_parser("analyze", help="wavelet coefficients of a function file")
    sp.add_argument("input")
    sp.add_argument("--summary", help="write the summary JSON here")
    sp.set_defaults(func=cmd_analyze)

    sp = sub.add_parser("synthesize", help="function file from a coefficient table")
    sp.add_argument("input")
    sp.set_defaults(func=cmd_synthesize)

    sp = sub.add_parser("dalpha", help="apply D^alpha")
    sp.add_argument("input")
    sp.add_argument("--mode", choices=["spectral", "direct", "real"], default="direct")
    sp.add_argument("--points", help="comma separated points: m/p^e (direct) or fractions (real)")
    sp.set_defaults(func=cmd_dalpha)

    sp = sub.add_parser("monna", help="Monna map images of points and balls")
    sp.add_argument("--point", action="append", help="m/p^e; repeatable")
    sp.add_argument("--ball", action="append", help="'m/p^e,k'; repeatable")
    sp.set_defaults(func=cmd_monna)

    sp = sub.add_parser("bridge", help="Haar coefficients and 2-adic pullback of a step function")
    sp.add_argument("input")
    sp.add_argument("--pullback", help="write the pulled-back 2-adic function here")
    sp.set_defaults(func=cmd_bridge)

    sp = sub.add_parser("verify", help="run the property suite")
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--perturb", action="store_true", help="negative control: skew one eigenvalue by 1e-3")
    sp.set_defaults(func=cmd_verify)

    for sp in sub.choices.values():
        _globals(sp, suppress=True)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except CliError as exc:
        sys.stderr.write(f"error: {exc}\n")
        return exc.code


if __name__ == "__main__":
    sys.exit(main())
