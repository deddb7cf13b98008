"""Command-line entry point: ``quadcf <command> [options]``.

Exit codes: 0 success, 1 verification failure, 2 usage error,
3 certification failure.
"""
from __future__ import annotations

import argparse
import csv
import json
import os
import sys
from contextlib import contextmanager
from dataclasses import dataclass

from .approx import PrecisionPolicy
from .cf import Root, detect_periodicity, hurwitz_expand, predicted_expansion
from .errors import CapExceeded, CertificationFailure, NotAdmissible
from .exactfield import QuadParams
from .lattice import LatticeKind, Level, format_point, parse_point
from .suites import (
    DEFAULT_SEED,
    GridSummary,
    exclusion_report,
    lucas_report,
    property_suites,
    verify_grid,
)
from .symbolic import DEFAULT_CAP, auxiliary_identity_checks, verify_newton_cf_identities

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_CERT = 0, 1, 2, 3


class UsageError(Exception):
    pass


# -- output -------------------------------------------------------------------

def _flatten(d: dict) -> dict:
    out = {}
    for k, v in d.items():
        if isinstance(v, dict):
            for k2, v2 in v.items():
                out[f"{k}.{k2}"] = json.dumps(v2) if isinstance(v2, (list, dict)) else v2
        elif isinstance(v, list):
            out[k] = json.dumps(v)
        else:
            out[k] = v
    return out


class Emitter:
    """Writes a header, streamed rows and a closing summary in one of three formats."""

    def __init__(self, fmt: str, stream):
        self.fmt = fmt
        self.stream = stream
        self._writer = None

    def _line(self, text: str) -> None:
        self.stream.write(text + "\n")
        self.stream.flush()

    def header(self, info: dict) -> None:
        if self.fmt == "json":
            self._line(json.dumps({"header": info}))
        else:
            self._line("# " + " ".join(f"{k}={v}" for k, v in info.items()))

    def row(self, data: dict) -> None:
        if self.fmt == "json":
            self._line(json.dumps(data))
        elif self.fmt == "csv":
            flat = _flatten(data)
            if self._writer is None:
                self._writer = csv.DictWriter(self.stream, fieldnames=list(flat), extrasaction="ignore")
                self._writer.writeheader()
            self._writer.writerow(flat)
            self.stream.flush()
        else:
            self._line("  ".join(f"{k}={v}" for k, v in _flatten(data).items()))

    def text(self, line: str) -> None:
        """Free-form line, only shown in text mode."""
        if self.fmt == "text":
            self._line(line)

    def summary(self, data: dict) -> None:
        if self.fmt == "json":
            self._line(json.dumps({"summary": data}))
        else:
            self._line("# summary " + " ".join(f"{k}={v}" for k, v in data.items()))


@contextmanager
def _open_out(path: str | None):
    if path is None or path == "-":
        yield sys.stdout
    else:
        with open(path, "w", newline="") as fh:
            yield fh


# -- configuration ------------------------------------------------------------

@dataclass
class RunConfig:
    command: str
    kind: LatticeKind
    level: Level
    t: object
    u: object
    n: int | None
    box: int
    policy: PrecisionPolicy
    fmt: str
    out: str | None
    seed: int
    jobs: int
    cap: int = DEFAULT_CAP


def _config(args) -> RunConfig:
    try:
        kind = LatticeKind.parse(args.kind)
    except (KeyError, ValueError):
        raise UsageError(f"unknown lattice kind {args.kind!r} (use G or E)")
    try:
        level = Level.parse(args.level) if args.level else None
    except KeyError:
        raise UsageError(f"unknown level {args.level!r} (use L1, L2 or L3)")
    try:
        t = parse_point(args.t, kind) if args.t is not None else None
        u = parse_point(args.u, kind) if args.u is not None else None
    except ValueError as exc:
        raise UsageError(str(exc))
    try:
        policy = PrecisionPolicy.from_env(args.prec_init, args.prec_max)
    except ValueError as exc:
        raise UsageError(f"bad precision settings: {exc}")
    if args.n is not None and args.n < 0:
        raise UsageError("-n must be non-negative")
    if args.box < 0:
        raise UsageError("--box must be non-negative")
    return RunConfig(args.command, kind, level, t, u, args.n, args.box, policy,
                     args.format, args.out, args.seed, max(1, args.jobs), args.cap)


# -- commands -----------------------------------------------------------------

def _word(w) -> list[str]:
    return [format_point(a) for a in w.terms]


def cmd_expand(cfg: RunConfig, em: Emitter) -> int:
    if cfg.t is None or cfg.u is None:
        raise UsageError("expand needs -t and -u")
    count = 8 if cfg.n is None else cfg.n
    params = QuadParams.admissible_L2(cfg.t, cfg.u)
    em.header({"command": "expand", "kind": cfg.kind.value, "t": format_point(cfg.t),
               "u": format_point(cfg.u), "t_coords": _coords(cfg.t), "t_value": _complex(cfg.t),
               "u_coords": _coords(cfg.u), "u_value": _complex(cfg.u), "count": count})
    ok = True
    for root, z in ((Root.ALPHA, params.alpha()), (Root.BETA, params.beta())):
        word = hurwitz_expand(z, count, cfg.policy)
        pred = predicted_expansion(params, root, count)
        match = word == pred
        ok &= match
        rep = detect_periodicity(word) if len(word.terms) >= 5 else None
        em.row({
            "root": root.value,
            "expansion": _word(word),
            "predicted": _word(pred),
            "match": match,
            "preperiod": rep.preperiod_length if rep else None,
            "period": rep.period_length if rep else None,
        })
        em.text(f"{root.value}: {_fmt_word(word)}")
    return EXIT_OK if ok else EXIT_FAIL


def _coords(p) -> str:
    return f"{p.x},{p.y}"


def _complex(p) -> str:
    z = p.to_complex()
    return f"{z.real:.6g}{z.imag:+.6g}i"


def _fmt_word(w) -> str:
    t = _word(w)
    return f"[{t[0]}; " + ", ".join(t[1:]) + "]"


def cmd_verify_symbolic(cfg: RunConfig, em: Emitter) -> int:
    n = 4 if cfg.n is None else cfg.n
    if n > cfg.cap:
        raise CapExceeded(f"n = {n} exceeds the cap {cfg.cap} (raise it with --cap)")
    em.header({"command": "verify-symbolic", "n": n, "cap": cfg.cap, "seed": cfg.seed})
    failures = total = 0
    for k in range(n + 1):
        for chk in verify_newton_cf_identities(k, cap=cfg.cap, seed=cfg.seed).checks:
            total += 1
            failures += not chk.passed
            em.row({"suite": "newton-cf", **chk.to_json()})
    for chk in auxiliary_identity_checks(n, cap=cfg.cap, seed=cfg.seed):
        total += 1
        failures += not chk.passed
        em.row({"suite": "auxiliary", **chk.to_json()})
    em.summary({"total": total, "failures": failures})
    return EXIT_FAIL if failures else EXIT_OK


def cmd_verify_grid(cfg: RunConfig, em: Emitter, level: Level | None = None, default_n: int = 3) -> int:
    level = level or cfg.level or Level.L2
    n = default_n if cfg.n is None else cfg.n
    em.header({"command": cfg.command, "kind": cfg.kind.value, "level": level.name,
               "box": cfg.box, "n": n, "prec_init": cfg.policy.initial_bits,
               "prec_max": cfg.policy.max_bits})
    summary = GridSummary()
    hard = 0
    for row in verify_grid(cfg.kind, level, cfg.box, n, cfg.policy, cfg.jobs):
        summary.add(row)
        hard += not row.passed and not row.certification_failure
        em.row(row.to_json())
    em.summary(summary.to_json())
    if hard:
        return EXIT_FAIL
    return EXIT_CERT if summary.certification_failures else EXIT_OK


def cmd_bound_check(cfg: RunConfig, em: Emitter) -> int:
    return cmd_verify_grid(cfg, em, Level.L3, default_n=5)


def cmd_exclusion(cfg: RunConfig, em: Emitter) -> int:
    level = cfg.level or Level.L2
    if level is Level.L3:
        raise UsageError("exclusion recomputation covers L1 and L2 only")
    em.header({"command": "exclusion", "kind": cfg.kind.value, "level": level.name})
    ok = True
    for row in exclusion_report(cfg.kind, level, cfg.policy):
        ok &= row.equal
        em.row(row.to_json())
    return EXIT_OK if ok else EXIT_FAIL


def cmd_lucas(cfg: RunConfig, em: Emitter) -> int:
    n = 3 if cfg.n is None else cfg.n
    if n < 1:
        raise UsageError("lucas needs -n >= 1")
    rep = lucas_report(n, cfg.policy)
    em.header({"command": "lucas", "n": n})
    em.row(rep)
    ok = rep["newton_equals_sum"] and rep["symmetric_cf_equals_sum"] and rep["bound_holds"]
    return EXIT_OK if ok else EXIT_FAIL


def cmd_properties(cfg: RunConfig, em: Emitter) -> int:
    em.header({"command": "properties", "seed": cfg.seed})
    results = property_suites(cfg.seed)
    for r in results:
        em.row(r.to_json())
    failed = sum(not r.passed for r in results)
    em.summary({"total": len(results), "failures": failed})
    return EXIT_FAIL if failed else EXIT_OK


COMMANDS = {
    "expand": cmd_expand,
    "verify-symbolic": cmd_verify_symbolic,
    "verify-grid": cmd_verify_grid,
    "bound-check": cmd_bound_check,
    "exclusion": cmd_exclusion,
    "lucas": cmd_lucas,
    "properties": cmd_properties,
}

HELP = {
    "expand": "Hurwitz expansion of both roots against the predicted periodic word",
    "verify-symbolic": "exact rational-function identities for n = 0..N",
    "verify-grid": "root location, expansion and Newton/series/CF chain over a parameter box",
    "bound-check": "verify-grid at level L3, including the Newton error bound",
    "exclusion": "builtin exclusion sets against a certified recomputation",
    "lucas": "the t = 3, u = 1 showcase",
    "properties": "seeded arithmetic property suites",
}


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--kind", default="G", help="G (Gaussian) or E (Eisenstein)")
    common.add_argument("--level", default=None, help="L1, L2 or L3")
    common.add_argument("--box", type=int, default=5, help="coordinate bound for grids")
    common.add_argument("-t", default=None, help="trace, e.g. 3, 2+2i, 1+2w or x,y; write -t=-1-i for negatives")
    common.add_argument("-u", default=None, help="unit constant term")
    common.add_argument("-n", "--count", dest="n", type=int, default=None, help="depth or term count")
    common.add_argument("--prec-init", type=int, default=None, help="starting precision in bits")
    common.add_argument("--prec-max", type=int, default=None, help="precision ceiling in bits (env QUADCF_PREC_MAX)")
    common.add_argument("--format", choices=["json", "csv", "text"], default="text")
    common.add_argument("--out", default=None, help="output file (default stdout)")
    common.add_argument("--seed", type=int, default=DEFAULT_SEED)
    common.add_argument("--jobs", type=int, default=1, help="worker processes for grids")
    common.add_argument("--cap", type=int, default=DEFAULT_CAP, help="largest n accepted by verify-symbolic")
    parser = _Parser(prog="quadcf", description="Continued fractions of relatively quadratic units.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)
    for name in COMMANDS:
        sub.add_parser(name, parents=[common], help=HELP[name])
    return parser


def main(argv: list[str] | None = None) -> int:
    try:
        args = build_parser().parse_args(argv)
        cfg = _config(args)
        with _open_out(cfg.out) as stream:
            return COMMANDS[cfg.command](cfg, Emitter(cfg.fmt, stream))
    except (UsageError, CapExceeded, NotAdmissible) as exc:
        print(f"quadcf: usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except CertificationFailure as exc:
        print(f"quadcf: certification failure: {exc}", file=sys.stderr)
        return EXIT_CERT
    except BrokenPipeError:
        # downstream reader closed early (e.g. piped into head)
        sys.stdout = open(os.devnull, "w")
        return EXIT_OK
    except OSError as exc:
        print(f"quadcf: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
