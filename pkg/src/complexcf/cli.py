"""Command-line front end.

Exit codes: 0 success, 2 chooser failure, 3 precision cap reached,
64 usage or input error.
"""

from __future__ import annotations

import argparse
import csv
import io
import random
import shlex
import sys
from concurrent.futures import ThreadPoolExecutor
from fractions import Fraction
from typing import Sequence

from .algebraic import make_surd
from .diophantine import CircleSpec, classify_circle
from .errors import (
    AmbiguousBoundary,
    AmbiguousTie,
    ChooserFailed,
    PrecisionCapExceeded,
    ReducibleOverK,
)
from .expansion import (
    FarthestWithin,
    NearestEven,
    NearestInteger,
    Script,
    approx_quality,
    detect_cycle,
    expand,
    neat_indices,
)
from .forms import FormMatrix, neat_radius, orbit, surd_to_form
from .rings import DEFAULT_MAX_BITS, KElt, RingElt, RingId
from .serialize import circle_to_json, dumps, expansion_to_json, orbit_to_json

EXIT_OK = 0
EXIT_CHOOSER = 2
EXIT_PRECISION = 3
EXIT_USAGE = 64


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.format_usage()}{self.prog}: error: {message}\n")


def _ring(text: str) -> RingId:
    try:
        return RingId.from_tag(text)
    except (KeyError, ValueError):
        raise argparse.ArgumentTypeError(f"unknown ring {text!r}; choose from G, R2, E3, E7, E11")


def _ratio(text: str) -> Fraction:
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"not a rational number: {text!r}")


def parse_chooser(text: str, ring: RingId):
    """``nearest``, ``farthest:R``, ``nearest-even`` or ``script:a0,a1,...[|p0,p1,...]``."""
    kind, _, arg = text.partition(":")
    kind = kind.strip().lower()
    if kind == "nearest":
        return NearestInteger()
    if kind == "farthest":
        return FarthestWithin(Fraction(arg))
    if kind == "nearest-even":
        return NearestEven(experimental=True)
    if kind == "script":
        head, _, tail = arg.partition("|")
        entries = [RingElt.parse(x, ring) for x in head.split(",") if x.strip()]
        period = [RingElt.parse(x, ring) for x in tail.split(",") if x.strip()]
        return Script(tuple(entries), tuple(period))
    raise ValueError(f"unknown chooser {text!r}")


def _surd(args):
    coeffs = [c.strip() for c in args.poly.split(",")]
    if len(coeffs) != 3:
        raise ValueError("--poly takes three coefficients A,B,C")
    selector = None
    if args.root:
        re_, _, im = args.root.partition(",")
        selector = complex(float(re_), float(im or 0))
    return make_surd(
        args.ring,
        *(RingElt.parse(c, args.ring) for c in coeffs),
        root_selector=selector,
        max_bits=args.precision_cap,
    )


def _emit(args, text: str) -> None:
    if args.output:
        with open(args.output, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        args.stdout.write(text)


# ---------------------------------------------------------------------------
# Commands
# ---------------------------------------------------------------------------


def cmd_expand(args) -> str:
    z = _surd(args)
    e = expand(z, parse_chooser(args.chooser, args.ring), args.depth)
    if args.format == "csv":
        return _expansion_csv(e)
    return dumps(expansion_to_json(e))


def _expansion_csv(e) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["n", "a", "p", "q", "q_norm", "abs_delta_lo", "abs_delta_hi"])
    for r in e.steps:
        d = abs(r.delta)
        w.writerow([r.n, str(r.a), str(r.p), str(r.q), r.q.norm(), f"{float(d.lower):.12g}", f"{float(d.upper):.12g}"])
    return buf.getvalue()


def cmd_cycle(args) -> str:
    z = _surd(args)
    rep = detect_cycle(z, parse_chooser(args.chooser, args.ring), args.depth)
    doc = {"ring": args.ring.tag, "poly": args.poly, "chooser": args.chooser, "depth": args.depth}
    if rep is None:
        doc["cycle"] = None
    else:
        doc["cycle"] = {
            "preperiod": rep.preperiod,
            "period": rep.period,
            "witness": list(rep.witness),
            "preperiod_quotients": [str(a) for a in rep.preperiod_quotients],
            "period_quotients": [str(a) for a in rep.period_quotients],
        }
    return dumps(doc)


def cmd_orbit(args) -> str:
    z = _surd(args)
    X = FormMatrix.parse(args.form, args.ring) if args.form else surd_to_form(z)
    e = expand(z, parse_chooser(args.chooser, args.ring), args.depth)
    r = args.radius if args.radius is not None else neat_radius(e)
    rep = orbit(X, e, neat_indices(e, r))
    return dumps(orbit_to_json(rep, X, depth=args.depth, radius=r))


def cmd_circle(args) -> str:
    center = KElt.parse(args.center, args.ring)
    c = CircleSpec(args.ring, center, args.r2)
    return dumps(circle_to_json(c, classify_circle(args.ring, c)))


def cmd_probe(args) -> str:
    z = _surd(args)
    e = expand(z, parse_chooser(args.chooser, args.ring), args.depth)
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["n", "q_norm", "abs_delta_lo", "abs_delta_hi"])
    for r in e.steps:
        d = abs(r.delta)
        w.writerow([r.n, r.q.norm(), f"{float(d.lower):.12g}", f"{float(d.upper):.12g}"])
    q = approx_quality(e)
    args.stderr.write(f"min |delta_n| in [{float(q.lower):.12g}, {float(q.upper):.12g}]\n")
    return buf.getvalue()


def _random_surd(ring: RingId, rng: random.Random, bound: int):
    def elt():
        while True:
            x = RingElt(rng.randint(-bound, bound), rng.randint(-bound, bound), ring)
            if x.norm() <= bound * bound:
                return x

    while True:
        A = elt()
        if A.is_zero():
            continue
        try:
            return make_surd(ring, A, elt(), elt())
        except ReducibleOverK:
            continue


def cmd_sweep(args) -> str:
    rng = random.Random(args.seed)
    rows = []
    for _ in range(args.count):
        z = _random_surd(args.ring, rng, args.bound)
        rep = detect_cycle(z, parse_chooser(args.chooser, args.ring), args.depth)
        rows.append(
            {
                "poly": [str(z.A), str(z.B), str(z.C)],
                "root_sign": z.sign,
                "preperiod": None if rep is None else rep.preperiod,
                "period": None if rep is None else rep.period,
            }
        )
    return dumps({"ring": args.ring.tag, "seed": args.seed, "depth": args.depth, "runs": rows})


def cmd_batch(args) -> str:
    with open(args.file, encoding="utf-8") as fh:
        lines = [ln.strip() for ln in fh if ln.strip() and not ln.lstrip().startswith("#")]

    def run(line: str) -> dict:
        out, err = io.StringIO(), io.StringIO()
        code = main(shlex.split(line), stdout=out, stderr=err)
        return {"args": line, "exit": code, "output": out.getvalue(), "stderr": err.getvalue()}

    with ThreadPoolExecutor(max_workers=args.workers) as pool:
        results = list(pool.map(run, lines))
    return dumps(results)


# ---------------------------------------------------------------------------
# Parser
# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="complexcf", description="Complex continued fractions over Euclidean imaginary quadratic rings.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def common(sp, *, poly=True, depth=None, fmt=False):
        sp.add_argument("--ring", type=_ring, required=True, help="G, R2, E3, E7 or E11")
        sp.add_argument("--precision-cap", type=int, default=DEFAULT_MAX_BITS, help="bits (>= 64)")
        sp.add_argument("-o", "--output", help="write to this file instead of stdout")
        if poly:
            sp.add_argument("--poly", required=True, help="coefficients A,B,C of A z^2 + B z + C")
            sp.add_argument("--root", help="approximate root RE,IM (default: larger real part, then imaginary)")
            sp.add_argument("--chooser", default="nearest", help="nearest | farthest:R | nearest-even | script:...")
        if depth is not None:
            sp.add_argument("--depth", type=int, default=depth)
        if fmt:
            sp.add_argument("--format", choices=("json", "csv"), default="json")

    sp = sub.add_parser("expand", help="expand a quadratic surd")
    common(sp, depth=20, fmt=True)
    sp.set_defaults(func=cmd_expand)

    sp = sub.add_parser("cycle", help="detect eventual periodicity")
    common(sp, depth=1000)
    sp.set_defaults(func=cmd_cycle)

    sp = sub.add_parser("orbit", help="orbit of a form over neat indices")
    common(sp, depth=1000)
    sp.add_argument("--form", help="hermitian:A,B,C,D or quadratic:A,B,C,D (default: the surd's own form)")
    sp.add_argument("--radius", type=_ratio, help="uniform bound r < 1 for neat indices")
    sp.set_defaults(func=cmd_orbit)

    sp = sub.add_parser("circle", help="classify a circle |z - c|^2 = m/n")
    common(sp, poly=False)
    sp.add_argument("--center", required=True)
    sp.add_argument("--r2", type=_ratio, required=True)
    sp.set_defaults(func=cmd_circle)

    sp = sub.add_parser("probe", help="CSV of |q_n|^2 and |delta_n| bounds")
    common(sp, depth=50)
    sp.set_defaults(func=cmd_probe)

    sp = sub.add_parser("sweep", help="cycle detection on random surds")
    common(sp, poly=False, depth=5000)
    sp.add_argument("--chooser", default="nearest")
    sp.add_argument("--count", type=int, default=10)
    sp.add_argument("--bound", type=int, default=7, help="coefficient coordinate bound")
    sp.add_argument("--seed", type=int, default=0)
    sp.set_defaults(func=cmd_sweep)

    sp = sub.add_parser("batch", help="run one command per line of FILE on worker threads")
    sp.add_argument("file")
    sp.add_argument("--workers", type=int, default=4)
    sp.add_argument("-o", "--output")
    sp.set_defaults(func=cmd_batch)
    return p


_ERROR_CODES: list[tuple[type, int]] = [
    (ChooserFailed, EXIT_CHOOSER),
    (PrecisionCapExceeded, EXIT_PRECISION),
    (AmbiguousTie, EXIT_PRECISION),
    (AmbiguousBoundary, EXIT_PRECISION),
    (ValueError, EXIT_USAGE),
    (OSError, EXIT_USAGE),
]


def main(argv: Sequence[str] | None = None, *, stdout=None, stderr=None) -> int:
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        if getattr(args, "depth", 1) < 1:
            parser.error("--depth must be at least 1")
        if getattr(args, "precision_cap", 64) < 64:
            parser.error("--precision-cap must be at least 64")
    except UsageError as exc:
        stderr.write(str(exc))
        return EXIT_USAGE
    except SystemExit as exc:  # --help
        return int(exc.code or 0)
    args.stdout, args.stderr = stdout, stderr
    try:
        _emit(args, args.func(args))
    except Exception as exc:
        for kind, code in _ERROR_CODES:
            if isinstance(exc, kind):
                stderr.write(f"complexcf: {type(exc).__name__}: {exc}\n")
                return code
        raise
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
