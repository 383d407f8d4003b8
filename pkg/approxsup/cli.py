"""Command line interface: ``approxsup sup|verify|asymptote|witnesses``.

Exit codes: 0 ok, 1 parse or data error, 2 hypothesis failure, 3
verification failure, 4 non power-log asymptotics.

"""
import argparse
import csv
import logging
import math
import sys

import numpy as np
from traitlets import TraitError

from ._version import __version__
from .asymptotics import fit_growth, flatness_exponent, poly_bound_check, read_samples_csv
from .errors import ApproxSupError, HorizonError, HypothesisError, InequalityError, OscError
from .options import set_options
from .oracle import brute_sup, brute_sup_unbounded
from .serialization import dumps_json, read_sumfile
from .supremum import approx_sup

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_DATA = 1
EXIT_HYPOTHESIS = 2
EXIT_VERIFY = 3
EXIT_NON_POWER_LOG = 4

PLOT_POINTS = 512
UNBOUNDED_SPAN = 1e3


def _search_interval(h):
    """Finite interval over which ``|h|`` is sampled for plots and checks."""
    lo, hi = h.domain.cell
    if math.isinf(hi):
        hi = UNBOUNDED_SPAN * lo
    return lo, hi


def _emit_plot(path, h, certificate):
    lo, hi = _search_interval(h)
    y = np.geomspace(lo, hi, PLOT_POINTS + 2)[1:-1]
    values = np.abs(h(y))

    with open(path, "w", newline="") as f:
        writer = csv.writer(f)
        writer.writerow(["y", "abs_h", "witness"])
        for point, value in zip(y, values):
            writer.writerow([repr(float(point)), repr(float(value)), 0])
        for point, value in zip(certificate.witnesses, certificate.full_values):
            writer.writerow([repr(float(point)), repr(float(value)), 1])

    logger.info("plot data written to %s", path)


def _print_witnesses(certificate, out):
    print("y\tregime\t|part|\t|h|", file=out)
    for y, tag, value, full in zip(
        certificate.witnesses,
        certificate.regime_tags,
        certificate.values,
        certificate.full_values,
    ):
        print(f"{y:.10g}\t{tag}\t{value:.10g}\t{full:.10g}", file=out)


def cmd_sup(args, out):
    h = read_sumfile(args.file)
    score, certificate = approx_sup(h)

    if args.emit_plot:
        _emit_plot(args.emit_plot, h, certificate)

    if args.json:
        print(dumps_json(certificate), file=out)
        return EXIT_OK

    print(f"score: {score:.10g}", file=out)
    print(f"C_total: {certificate.total_constant:.10g}", file=out)
    lower, upper = certificate.sup_bounds()
    print(f"sup bounds: [{lower:.10g}, {upper:.10g}]", file=out)
    print(f"form: {certificate.form}", file=out)
    print(f"confidence: {certificate.confidence}", file=out)
    if certificate.form == "balanced":
        plan = certificate.details["balanced"]
        print(f"grid size: {plan['grid_size']} (M={plan['ratio_bound']:.6g})", file=out)
    _print_witnesses(certificate, out)
    return EXIT_OK


def oracle_sup(h):
    """Brute-force estimate of ``sup |h|`` over the cell of ``h``."""
    lo, hi = h.domain.cell
    if math.isinf(hi) and all(term.exponent.beta < 0 for term in h.terms):
        return brute_sup_unbounded(h, lo).sup_estimate
    return brute_sup(h, _search_interval(h)).sup_estimate


def cmd_verify(args, out):
    h = read_sumfile(args.file)
    score, certificate = approx_sup(h)
    estimate = oracle_sup(h)

    if score == 0 and estimate == 0:
        ratio = 1.0
    elif score == 0:
        ratio = math.inf
    else:
        ratio = estimate / score

    lower, upper = certificate.sup_bounds()
    passed = ratio == 1.0 if score == 0 else lower * (1 - 1e-9) <= estimate <= upper * (1 + 1e-9)

    if args.json:
        print(
            dumps_json(certificate, oracle_sup=estimate, ratio=ratio, passed=passed),
            file=out,
        )
    else:
        print(f"score: {score:.10g}", file=out)
        print(f"oracle: {estimate:.10g}", file=out)
        print(f"ratio: {ratio:.10g}", file=out)
        print(f"C_total: {certificate.total_constant:.10g}", file=out)
        print("PASS" if passed else "FAIL", file=out)

    return EXIT_OK if passed else EXIT_VERIFY


def cmd_asymptote(args, out):
    samples = read_samples_csv(args.file)
    options = {"max_l": args.max_l}

    if args.direction == "eps":
        profile = flatness_exponent(samples, **options)
    else:
        profile = fit_growth(samples, **options)

    if args.json:
        print(dumps_json(profile), file=out)
    else:
        print(f"r={profile.format_exponent()} l={profile.l}", file=out)
        print(f"c_band: [{profile.c_lo:.6g}, {profile.c_hi:.6g}]", file=out)
        if profile.correction is not None:
            print(f"correction: {profile.correction:.6g}", file=out)
        if profile.direction == "x":
            _, degree = poly_bound_check(profile)
            print(f"polynomial bound degree: {degree}", file=out)
        if profile.flags:
            print(f"flags: {', '.join(profile.flags)}", file=out)

    if "non-power-log" in profile.flags:
        return EXIT_NON_POWER_LOG
    return EXIT_OK


def cmd_witnesses(args, out):
    h = read_sumfile(args.file)
    frequencies = [term.exponent.alpha for term in h.terms if term.exponent.alpha != 0]
    if frequencies:
        raise OscError(
            f"witness points require real exponents, found alpha={frequencies[0]!r} "
            "(use 'approxsup sup' for the norm-form certificate)"
        )

    _, certificate = approx_sup(h)

    if args.emit_plot:
        _emit_plot(args.emit_plot, h, certificate)

    if args.json:
        print(dumps_json(certificate), file=out)
    else:
        _print_witnesses(certificate, out)
        if certificate.full_witness_constant is not None:
            print(f"sup |h| <= {certificate.full_witness_constant:.10g} * max |h|", file=out)
    return EXIT_OK


def build_parser():
    parser = argparse.ArgumentParser(
        prog="approxsup", description="Certified approximate suprema of prepared power-log sums."
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    parser.add_argument(
        "-v", "--verbose", action="count", default=0, help="increase verbosity (-v, -vv)"
    )
    parser.add_argument("--seed", type=int, default=None, help="seed of random sampling")

    subparsers = parser.add_subparsers(dest="command", required=True)

    sup = subparsers.add_parser("sup", help="certify the supremum of a sum file")
    sup.add_argument("file", help="sum file")
    sup.add_argument("--budget", type=int, default=None, help="oracle grid size (default 4096)")
    sup.add_argument("--json", action="store_true", help="print the certificate as JSON")
    sup.add_argument("--emit-plot", metavar="PATH", help="write (y, |h(y)|) samples as CSV")
    sup.set_defaults(handler=cmd_sup)

    verify = subparsers.add_parser("verify", help="check a certificate against the oracle")
    verify.add_argument("file", help="sum file")
    verify.add_argument("--budget", type=int, default=None, help="oracle grid size (default 4096)")
    verify.add_argument(
        "--trials", type=int, default=None, help="candidate sample point sets (default 64)"
    )
    verify.add_argument("--json", action="store_true", help="print the result as JSON")
    verify.set_defaults(handler=cmd_verify)

    asymptote = subparsers.add_parser("asymptote", help="fit a power-log profile to CSV data")
    asymptote.add_argument("file", help="two-column CSV file")
    asymptote.add_argument(
        "--direction", choices=["x", "eps"], default="x", help="x -> inf or eps -> 0"
    )
    asymptote.add_argument("--max-l", type=int, default=8, help="largest log power searched")
    asymptote.add_argument("--json", action="store_true", help="print the profile as JSON")
    asymptote.set_defaults(handler=cmd_asymptote)

    witnesses = subparsers.add_parser("witnesses", help="print witness points of a sum file")
    witnesses.add_argument("file", help="sum file")
    witnesses.add_argument("--json", action="store_true", help="print the certificate as JSON")
    witnesses.add_argument("--emit-plot", metavar="PATH", help="write (y, |h(y)|) samples as CSV")
    witnesses.set_defaults(handler=cmd_witnesses)

    return parser


def _option_overrides(args):
    overrides = {}
    for name in ("seed", "budget", "trials"):
        value = getattr(args, name, None)
        if value is not None:
            overrides[name] = value
    return overrides


def _report_error(err):
    if isinstance(err, InequalityError):
        message = f"hypothesis failed: {err.inequality} (lhs={err.lhs:.6g}, rhs={err.rhs:.6g})"
    else:
        message = str(err)
    print(f"error: {type(err).__name__}: {message}", file=sys.stderr)


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)

    level = [logging.WARNING, logging.INFO, logging.DEBUG][min(args.verbose, 2)]
    logging.basicConfig(level=level, format="%(levelname)s %(name)s: %(message)s")

    try:
        with set_options(**_option_overrides(args)):
            return args.handler(args, sys.stdout)
    except HypothesisError as err:
        _report_error(err)
        return EXIT_HYPOTHESIS
    except HorizonError as err:
        _report_error(err)
        return EXIT_VERIFY
    except (ApproxSupError, TraitError, ValueError, OSError) as err:
        _report_error(err)
        return EXIT_DATA


if __name__ == "__main__":
    sys.exit(main())
