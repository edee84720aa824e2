"""Command-line front end.

Every run echoes its resolved configuration as one JSON line on stderr. Exit
codes: 0 success, 1 domain or input error, 2 usage error.
"""
from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import oracle as orc
from .chain import adjoint, chain_to_text, compose, load_chain, validate
from .ergodic import DEFAULT_MARGIN, TestFunction, birkhoff_exact, birkhoff_mc, invariance_defect, parse_region
from .errors import HolocorrError
from .fibers import backward_fiber, forward_fiber
from .measure import DEFAULT_SEED, DEFAULT_START, atoms_to_text, bin_measure, read_atoms, sample_mu
from .sphere import SpherePoint

ORACLE_CHECKS = ("pullback", "invariant", "cesaro", "almost-invariant", "ergodic", "birkhoff",
                 "complement", "maximal", "functions", "suite")


class UsageError(Exception):
    pass


def _point(text: str) -> SpherePoint:
    t = text.strip().lower()
    if t in ("inf", "infinity", "oo"):
        return SpherePoint.infinity()
    parts = t.split(",")
    try:
        if len(parts) == 1:
            return SpherePoint.from_complex(complex(parts[0].replace("i", "j")))
        if len(parts) == 2:
            return SpherePoint.from_complex(complex(float(parts[0]), float(parts[1])))
    except ValueError:
        pass
    raise UsageError(f"bad point {text!r}; expected 're,im' or 'inf'")


def _window(text: str):
    try:
        cx, cy, w = (float(v) for v in text.split(","))
    except ValueError:
        raise UsageError(f"bad window {text!r}; expected 'cx,cy,width'") from None
    if w <= 0:
        raise UsageError("window width must be positive")
    return complex(cx, cy), w


def _resolution(text: str):
    try:
        r, c = (int(v) for v in text.lower().split("x"))
    except ValueError:
        raise UsageError(f"bad resolution {text!r}; expected 'ROWSxCOLS'") from None
    return r, c


def _positive(name):
    def conv(text):
        try:
            v = int(text)
        except ValueError:
            raise argparse.ArgumentTypeError(f"{name} must be an integer") from None
        if v < 1:
            raise argparse.ArgumentTypeError(f"{name} must be positive")
        return v
    return conv


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--chain", action="append", help="chain file or @preset (compose takes two)")
    common.add_argument("--fc", help="finite correspondence file")
    common.add_argument("--start", default=str(DEFAULT_START), help="start point 're,im' or 'inf'")
    common.add_argument("--depth", type=_positive("depth"), default=40)
    common.add_argument("--samples", type=_positive("samples"),
                        help="orbits or samples (default 10000; oracle suite: 1000 instances)")
    common.add_argument("--seed", type=int, default=DEFAULT_SEED,
                        help=f"random seed (default {DEFAULT_SEED})")
    common.add_argument("--window", default="0,0,5", help="grid window 'cx,cy,width'")
    common.add_argument("--res", default="512x512", help="grid resolution 'ROWSxCOLS'")
    common.add_argument("--phi", help="test function, or a comma-separated vector for oracle checks")
    common.add_argument("--region", help="region spec for defect")
    common.add_argument("--margin", type=float, default=DEFAULT_MARGIN)
    common.add_argument("--out", help="output path (default stdout)")
    common.add_argument("--grid-out", help="PGM density grid path")
    common.add_argument("--workers", type=_positive("workers"), default=1)
    common.add_argument("--assume-ds-condition", action="store_true",
                        help="assert the degree condition needed for convergence; never inferred")
    common.add_argument("--jitter", type=float, default=0.0, help="Gaussian perturbation of the start")

    p = argparse.ArgumentParser(prog="holocorr", description="Holomorphic correspondences on the sphere.")
    sub = p.add_subparsers(dest="command", required=True)
    sub.add_parser("degree", parents=[common], help="print d and d_dagger")
    sub.add_parser("adjoint", parents=[common], help="write the adjoint chain")
    sub.add_parser("compose", parents=[common], help="write outer o inner (--chain OUTER --chain INNER)")
    f = sub.add_parser("fiber", parents=[common], help="print a fiber at --start")
    f.add_argument("--forward", action="store_true", help="forward instead of backward fiber")
    sub.add_parser("sample", parents=[common], help="atom dump of the depth-n preimage measure")
    b = sub.add_parser("birkhoff", parents=[common], help="Birkhoff averages at --start")
    b.add_argument("--method", choices=("exact", "mc"), default="mc")
    b.add_argument("--target", type=float, help="independent estimate of the integral of phi")
    d = sub.add_parser("defect", parents=[common], help="almost-invariance defect of --region")
    d.add_argument("--atoms", help="atom dump to use instead of sampling")
    o = sub.add_parser("oracle", parents=[common], help="finite-oracle checks")
    o.add_argument("check", choices=ORACLE_CHECKS)
    o.add_argument("--mu", help="measure vector, e.g. 1/2,1/2")
    o.add_argument("--nu", help="measure vector for pullback/cesaro")
    o.add_argument("--x", type=int, default=0, help="state for birkhoff")
    o.add_argument("--subset", default="", help="comma-separated states")
    o.add_argument("--alpha", default="0", help="threshold for maximal")
    return p


def _one_chain(args):
    if not args.chain or len(args.chain) != 1:
        raise UsageError("exactly one --chain is required")
    return validate(load_chain(args.chain[0]))


def _emit(text: str, path: str | None):
    if path:
        Path(path).write_text(text)
    else:
        sys.stdout.write(text)


def _fmt_point(p: SpherePoint) -> str:
    if p.is_infinite:
        return "inf"
    z = p.to_complex()
    return f"{z.real!r},{z.imag!r}"


def cmd_degree(args):
    c = _one_chain(args)
    _emit(f"d={c.d} d_dagger={c.d_dagger}\n", args.out)


def cmd_adjoint(args):
    _emit(chain_to_text(adjoint(_one_chain(args))), args.out)


def cmd_compose(args):
    if not args.chain or len(args.chain) != 2:
        raise UsageError("compose needs --chain OUTER --chain INNER")
    outer, inner = (validate(load_chain(s)) for s in args.chain)
    _emit(chain_to_text(validate(compose(outer, inner))), args.out)


def cmd_fiber(args):
    c = _one_chain(args)
    x = _point(args.start)
    fib = forward_fiber(c, x) if args.forward else backward_fiber(c, x)
    lines = ["re,im,mult"] + [f"{_fmt_point(p)},{m}" for p, m in fib.atoms]
    _emit("\n".join(lines) + "\n", args.out)


def cmd_sample(args):
    c = _one_chain(args)
    mu = sample_mu(c, _point(args.start), args.depth, args.samples, seed=args.seed,
                   workers=args.workers, jitter=args.jitter)
    if args.grid_out:
        center, width = _window(args.window)
        bin_measure(mu, center, width, _resolution(args.res)).write(args.grid_out)
    _emit(atoms_to_text(mu), args.out)


def cmd_birkhoff(args):
    c = _one_chain(args)
    if not args.phi:
        raise UsageError("birkhoff needs --phi")
    phi = TestFunction.parse(args.phi)
    x = _point(args.start)
    if args.method == "exact":
        rep = birkhoff_exact(c, phi, x, args.depth, target=args.target)
    else:
        rep = birkhoff_mc(c, phi, x, args.depth, args.samples, seed=args.seed,
                          workers=args.workers, target=args.target)
    note = "asserted" if args.assume_ds_condition else "not-asserted"
    _emit(rep.to_text() + f"# ds_condition={note}\n", args.out)


def cmd_defect(args):
    c = _one_chain(args)
    if not args.region:
        raise UsageError("defect needs --region")
    region = parse_region(args.region)
    if args.atoms:
        mu = read_atoms(args.atoms)
    else:
        mu = sample_mu(c, _point(args.start), args.depth, args.samples, seed=args.seed,
                       workers=args.workers, jitter=args.jitter)
    _emit(invariance_defect(c, mu, region, args.margin).to_text(), args.out)


def _need(value, flag):
    if value is None:
        raise UsageError(f"this check needs {flag}")
    return value


def _subset(text):
    return [int(v) for v in text.split(",") if v.strip()]


def cmd_oracle(args):
    if args.check == "suite":
        rep = orc.run_suite(args.samples, seed=args.seed)
        _emit(rep.to_text(), args.out)
        if not rep.passed:
            raise HolocorrError(f"{len(rep.failures)} oracle failures")
        return
    fc = orc.read_fc(_need(args.fc, "--fc"))
    exact = fc.exact

    def vec(text, flag):
        return orc.parse_vector(_need(text, flag), exact)

    check = args.check
    if check == "pullback":
        out = orc.format_vector(orc.pullback_finite(fc, vec(args.nu, "--nu")))
    elif check == "invariant":
        out = "\n".join(orc.format_vector(m) for m in orc.invariant_measures(fc))
    elif check == "cesaro":
        out = orc.format_vector(orc.cesaro_construct(fc, vec(args.nu, "--nu"), args.depth))
    elif check == "almost-invariant":
        ok = orc.is_almost_invariant(fc, vec(args.mu, "--mu"), _subset(args.subset))
        out = "almost invariant" if ok else "not almost invariant"
    elif check == "ergodic":
        out = orc.is_ergodic(fc, vec(args.mu, "--mu")).to_text()
    elif check == "birkhoff":
        vals = orc.birkhoff_finite(fc, vec(args.phi, "--phi"), args.x, args.depth)
        out = "\n".join(f"{n},{v}" for n, v in enumerate(vals, start=1))
    elif check == "complement":
        out = orc.check_complement_lemma(fc, vec(args.mu, "--mu"), _subset(args.subset)).detail
    elif check == "maximal":
        v = orc.check_maximal_inequality(fc, vec(args.mu, "--mu"), vec(args.phi, "--phi"),
                                         orc.Fraction(args.alpha), args.depth,
                                         _subset(args.subset) or range(fc.n))
        out = ("pass " if v else "fail ") + v.detail
    else:
        s = orc.invariant_function_space(fc, vec(args.mu, "--mu"))
        out = f"dimension={s.dimension} superlevel_sets_almost_invariant={s.superlevel_ok}\n" + \
            "\n".join(orc.format_vector(b) for b in s.basis)
    _emit(out + "\n", args.out)


COMMANDS = {"degree": cmd_degree, "adjoint": cmd_adjoint, "compose": cmd_compose,
            "fiber": cmd_fiber, "sample": cmd_sample, "birkhoff": cmd_birkhoff,
            "defect": cmd_defect, "oracle": cmd_oracle}


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    if args.samples is None:
        args.samples = 1000 if getattr(args, "check", None) == "suite" else 10_000
    print(json.dumps({"config": vars(args)}, sort_keys=True, default=str), file=sys.stderr)
    try:
        COMMANDS[args.command](args)
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return 2
    except HolocorrError as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 1
    except (ValueError, OSError, KeyError, ZeroDivisionError) as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
