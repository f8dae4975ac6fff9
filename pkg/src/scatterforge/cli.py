"""Command-line entry point.

Exit codes: 0 success, 1 replay or recorded-identity mismatch, 2 precondition
violation, 3 budget exceeded, 4 internal invariant breach, 5 I/O failure.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys

from . import certificate as cert_mod
from .errors import BudgetExceeded, DEFAULT_BUDGET, InvariantBreach, PreconditionError

log = logging.getLogger("scatterforge")

EXIT_OK, EXIT_MISMATCH, EXIT_PRECONDITION, EXIT_BUDGET, EXIT_INVARIANT, EXIT_IO = 0, 1, 2, 3, 4, 5


def _add_field_args(p: argparse.ArgumentParser, with_s: bool = True) -> None:
    p.add_argument("-p", type=int, help="characteristic")
    p.add_argument("-e", type=int, default=1, help="q = p^e")
    p.add_argument("-m", type=int, help="extension degree")
    if with_s:
        p.add_argument("-s", type=int, default=1, help="Frobenius step, sigma = x^(q^s)")


def _add_common(p: argparse.ArgumentParser, suppress: bool) -> None:
    # subcommands accept the same flags; SUPPRESS keeps them from clobbering earlier values
    d = (lambda v: argparse.SUPPRESS) if suppress else (lambda v: v)
    p.add_argument("--budget", type=int, default=d(DEFAULT_BUDGET), help="enumeration budget per predicate")
    p.add_argument("--out", default=d(None), help="write the JSON certificate here (default: stdout)")
    p.add_argument("--replay", default=d(None), help="re-run a certificate and compare results")
    p.add_argument("-v", "--verbose", action="store_true", default=d(False))


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="scatterforge", description=__doc__.splitlines()[0])
    _add_common(parser, suppress=False)
    common = argparse.ArgumentParser(add_help=False)
    _add_common(common, suppress=True)
    sub = parser.add_subparsers(dest="command", parser_class=_sub_factory(common))

    _add_field_args(sub.add_parser("construct", help="build U_sigma and check the scatteredness criteria"))
    sp = sub.add_parser("spectrum", help="line spectrum of L_U and the standard equations")
    _add_field_args(sp)
    sp.add_argument("--csv", help="also write the spectrum table as CSV")
    _add_field_args(sub.add_parser("code-report", help="the [m+2, 3] code: weights, minimality, duality"))
    sc = sub.add_parser("scan", help="criteria over a parameter grid")
    sc.add_argument("--grid", required=True, help='e.g. "p=2,3;e=1;m=5,7;s=all"')
    sc.add_argument("--csv", help="also write the table as CSV")
    eq = sub.add_parser("equivalence", help="decide equivalence of U_s and U_t")
    _add_field_args(eq)
    eq.add_argument("-t", type=int, required=True)
    return parser


def _sub_factory(common: argparse.ArgumentParser):
    class _Sub(argparse.ArgumentParser):
        def __init__(self, *a, **kw):
            kw.setdefault("parents", [common])
            super().__init__(*a, **kw)
    return _Sub


def _params_from(args) -> dict:
    if args.command == "scan":
        return {"grid": args.grid}
    if args.p is None or args.m is None:
        raise PreconditionError("-p and -m are required")
    params = {"p": args.p, "e": args.e, "m": args.m, "s": args.s}
    if args.command == "equivalence":
        params["t"] = args.t
    return params


def _write(text: str, path: str | None) -> None:
    if path:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _run(args) -> int:
    if args.replay:
        with open(args.replay, encoding="utf-8") as fh:
            recorded = json.load(fh)
        if not cert_mod.recorded_checks_hold(recorded):
            log.error("recorded results fail their own identity checks")
            return EXIT_MISMATCH
        same, fresh = cert_mod.replay(recorded)
        _write(json.dumps(fresh, indent=2, sort_keys=True) + "\n", args.out)
        if not same:
            log.error("replay differs from the recorded certificate")
            return EXIT_MISMATCH
        log.info("replay identical")
        return EXIT_OK
    if not args.command:
        raise PreconditionError("a command or --replay is required")
    cert = cert_mod.make_certificate(args.command, _params_from(args), args.budget)
    _write(json.dumps(cert, indent=2, sort_keys=True) + "\n", args.out)
    csv_path = getattr(args, "csv", None)
    if csv_path:
        table = cert_mod.spectrum_csv(cert) if args.command == "spectrum" else cert_mod.scan_csv(cert)
        _write(table, csv_path)
    if not cert_mod.recorded_checks_hold(cert):
        return EXIT_MISMATCH
    return EXIT_OK


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(message)s")
    try:
        return _run(args)
    except PreconditionError as exc:
        log.error("precondition: %s", exc)
        return EXIT_PRECONDITION
    except BudgetExceeded as exc:
        log.error("budget: %s", exc)
        return EXIT_BUDGET
    except InvariantBreach as exc:
        log.error("invariant breach: %s", exc)
        return EXIT_INVARIANT
    except OSError as exc:
        log.error("i/o: %s", exc)
        return EXIT_IO


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
