"""Command-line front end: synth / verify / cost / simulate.

Exit codes: 0 success, 1 verification failure, 2 usage error, 3 data or
shape error.  All commands are deterministic for a fixed invocation; any
randomness requires an explicit --seed, which is echoed in reports.
Set FFA_COLOR=0 to disable ANSI colors.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from fractions import Fraction

import numpy as np

from . import costs as costmod
from .graph import (
    InvalidGraphError,
    NetlistFormatError,
    StructureGraph,
    count_costs,
    export_dot,
    export_json,
    import_json,
)
from .polymatrix import transfer_of_graph
from .polyphase import pseudocirculant
from .primitives import Ffa2Form
from .sharing import REGION_BOTH, REGION_INPUT, REGION_OUTPUT, share_substructures
from .simulate import simulate, verify_equivalence
from .synthesis import (
    SCHEME_HYBRID,
    SCHEME_ITERATED,
    SCHEME_NAIVE,
    DivisibilityError,
    synthesize_hybrid,
    synthesize_iterated,
    synthesize_naive,
)

EXIT_OK = 0
EXIT_VERIFY_FAIL = 1
EXIT_USAGE = 2
EXIT_DATA = 3


class _UsageError(Exception):
    pass


class _DataError(Exception):
    pass


def _color_enabled() -> bool:
    flag = os.environ.get("FFA_COLOR", "").lower()
    if flag in ("0", "off", "false", "never", "no"):
        return False
    return sys.stdout.isatty()


def _paint(text: str, code: str) -> str:
    if _color_enabled():
        return f"\x1b[{code}m{text}\x1b[0m"
    return text


def _ok(text: str) -> str:
    return _paint(text, "32")


def _bad(text: str) -> str:
    return _paint(text, "31")


def _parse_scalar(tok: str):
    tok = tok.strip()
    if "/" in tok:
        return Fraction(tok)
    return int(tok)


def _load_taps(args) -> tuple:
    """Taps from --taps file:PATH | inline:a,b,c | random (needs --len, --seed)."""
    spec = args.taps
    if spec is None:
        raise _UsageError("a taps source is required (--taps)")
    if spec.startswith("file:"):
        path = spec[len("file:") :]
        try:
            with open(path) as fh:
                toks = [t for t in fh.read().split() if t]
        except OSError as exc:
            raise _DataError(f"cannot read taps file: {exc}") from exc
        try:
            return tuple(_parse_scalar(t) for t in toks)
        except ValueError as exc:
            raise _DataError(f"bad tap value in {path}: {exc}") from exc
    if spec.startswith("inline:"):
        body = spec[len("inline:") :]
        try:
            return tuple(_parse_scalar(t) for t in body.split(","))
        except ValueError as exc:
            raise _UsageError(f"bad inline taps: {exc}") from exc
    if spec == "random":
        if args.seed is None:
            raise _UsageError("--taps random requires --seed")
        if getattr(args, "len", None) is None:
            raise _UsageError("--taps random requires --len")
        rng = np.random.default_rng(args.seed)
        return tuple(int(v) for v in rng.integers(-8, 9, size=args.len))
    raise _UsageError(f"unknown taps source {spec!r}")


def _pad_taps(h: tuple, L: int, pad: bool) -> tuple:
    if len(h) % L == 0 and h:
        return h
    if not pad:
        raise DivisibilityError(f"tap count {len(h)} not divisible by L={L} (use --pad-taps)")
    padded = h + (0,) * ((-len(h)) % L)
    print(f"warning: zero padding taps from {len(h)} to {len(padded)}", file=sys.stderr)
    return padded


def _synthesize_from_args(args) -> StructureGraph:
    if getattr(args, "netlist", None):
        try:
            with open(args.netlist) as fh:
                return import_json(fh.read())
        except OSError as exc:
            raise _DataError(f"cannot read netlist: {exc}") from exc
        except NetlistFormatError as exc:
            raise _DataError(f"bad netlist: {exc}") from exc
    n = args.n
    if n is None:
        raise _UsageError("either --netlist or --scheme with -n is required")
    if args.scheme == SCHEME_NAIVE:
        if n < 0:
            raise _UsageError("naive scheme needs n >= 0")
        return synthesize_naive(n, tap_len=args.tap_len)
    if n < 1:
        raise _UsageError(f"scheme {args.scheme!r} needs n >= 1")
    if args.scheme == SCHEME_ITERATED:
        return synthesize_iterated(n, Ffa2Form.from_name(args.form), tap_len=args.tap_len)
    if args.scheme == SCHEME_HYBRID:
        return synthesize_hybrid(n, tap_len=args.tap_len)
    raise _UsageError(f"unknown scheme {args.scheme!r}")


def cmd_synth(args) -> int:
    if args.taps is not None and args.n is not None:
        h = _pad_taps(_load_taps(args), 1 << args.n, args.pad_taps)
        args.tap_len = len(h) >> args.n
    g = _synthesize_from_args(args)
    if args.share != "none":
        region = {
            "input": REGION_INPUT,
            "output": REGION_OUTPUT,
            "both": REGION_BOTH,
        }[args.share]
        g = share_substructures(g, region)
    c = count_costs(g)
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(export_json(g))
    else:
        sys.stdout.write(export_json(g))
    if args.dot:
        with open(args.dot, "w") as fh:
            fh.write(export_dot(g))
    print(
        f"scheme={g.scheme} n={g.n} L={g.L} additions={c.additions} "
        f"delays={c.delay_elements} subfilters={c.subfilters}",
        file=sys.stderr,
    )
    return EXIT_OK


def cmd_verify(args) -> int:
    g = _synthesize_from_args(args)
    h = _pad_taps(_load_taps(args), g.L, args.pad_taps)
    seed = args.seed if args.seed is not None else 0
    report = verify_equivalence(
        g, h, trials=args.trials, x_len=args.input_len, seed=seed, mode=args.mode
    )
    transfer_ok = None
    if g.n <= 3 and args.mode == "exact":
        transfer_ok = transfer_of_graph(g, h) == pseudocirculant(h, g.L)
    counts = count_costs(g)
    doc = {
        "command": "verify",
        "scheme": g.scheme,
        "n": g.n,
        "seed": seed,
        "trials": report["trials"],
        "max_abs_diff": report["max_abs_diff"],
        "counts": counts.as_dict(),
        "match": bool(report["pass"] and transfer_ok in (None, True)),
        "transfer_matrix_check": transfer_ok,
    }
    print(json.dumps(doc, sort_keys=True))
    verdict = _ok("PASS") if doc["match"] else _bad("FAIL")
    print(f"{verdict} {g.scheme} n={g.n} max|diff|={report['max_abs_diff']}", file=sys.stderr)
    return EXIT_OK if doc["match"] else EXIT_VERIFY_FAIL


def cmd_cost(args) -> int:
    try:
        n_list = [int(t) for t in args.n.split(",") if t]
    except ValueError as exc:
        raise _UsageError(f"bad -n list: {exc}") from exc
    if not all(n >= 1 for n in n_list):
        raise _UsageError("every n must be >= 1")
    rows = costmod.comparison_table(n_list)
    if args.reconcile:
        schemes = [args.scheme] if args.scheme else [costmod.SCHEME_ITERATED, costmod.SCHEME_HYBRID]
        lines = []
        all_match = True
        for scheme in schemes:
            for n in n_list:
                rep = costmod.reconcile(scheme, n)
                all_match &= rep.match_all
                lines.append(
                    f"{scheme} n={n}: formula {rep.formula.additions}/{rep.formula.delay_elements}"
                    f" graph {rep.graph.additions}/{rep.graph.delay_elements}"
                    f" match={str(rep.match_all).lower()}"
                )
        print("\n".join(lines))
        return EXIT_OK if all_match else EXIT_VERIFY_FAIL
    sys.stdout.write(costmod.render_csv(rows) if args.csv else costmod.render_text(rows))
    return EXIT_OK


def _load_samples(args, L: int) -> list:
    spec = args.input
    if spec.startswith("file:"):
        path = spec[len("file:") :]
        try:
            if args.format == "bin":
                data = np.fromfile(path, dtype="<i8")
                return [int(v) for v in data]
            with open(path) as fh:
                return [_parse_scalar(t) for t in fh.read().split() if t]
        except OSError as exc:
            raise _DataError(f"cannot read input: {exc}") from exc
        except ValueError as exc:
            raise _DataError(f"bad sample: {exc}") from exc
    if spec.startswith("inline:"):
        return [_parse_scalar(t) for t in spec[len("inline:") :].split(",")]
    if spec == "impulse":
        ln = args.input_len or L * 4
        return [1] + [0] * (ln - 1)
    if spec == "zeros":
        return [0] * (args.input_len or L * 4)
    if spec == "random":
        if args.seed is None:
            raise _UsageError("--input random requires --seed")
        ln = args.input_len or L * 16
        rng = np.random.default_rng(args.seed + 1)
        return [int(v) for v in rng.integers(-8, 9, size=ln)]
    raise _UsageError(f"unknown input source {spec!r}")


def cmd_simulate(args) -> int:
    g = _synthesize_from_args(args)
    h = _pad_taps(_load_taps(args), g.L, args.pad_taps)
    x = _load_samples(args, g.L)
    y = simulate(g, h, x, mode=args.mode)
    if args.out:
        if args.format == "bin":
            np.asarray([int(v) for v in y], dtype="<i8").tofile(args.out)
        else:
            with open(args.out, "w") as fh:
                fh.write("\n".join(str(v) for v in y) + "\n")
    else:
        print("\n".join(str(v) for v in y))
    L = g.L
    first = ", ".join(str(v) for v in y[:L])
    last = ", ".join(str(v) for v in y[-L:])
    print(f"blocks={len(y) // L} first=[{first}] last=[{last}]", file=sys.stderr)
    return EXIT_OK


def _add_structure_args(p: argparse.ArgumentParser, include_form: bool = True) -> None:
    p.add_argument("--scheme", choices=[SCHEME_ITERATED, SCHEME_HYBRID, SCHEME_NAIVE])
    p.add_argument("-n", type=int, default=None, help="levels; parallelism is 2^n")
    if include_form:
        p.add_argument(
            "--form",
            default="direct-plus",
            choices=[f.cli_name for f in Ffa2Form],
            help="2-parallel block form for the iterated scheme",
        )
    p.add_argument("--netlist", help="operate on a saved JSON netlist instead")
    p.add_argument("--tap-len", type=int, default=1, help="per-subfilter tap count (cost metadata)")


def _add_taps_args(p: argparse.ArgumentParser) -> None:
    p.add_argument("--taps", help="file:PATH | inline:a,b,c | random")
    p.add_argument("--len", type=int, default=None, help="tap count for --taps random")
    p.add_argument("--pad-taps", action="store_true", help="zero pad taps up to a multiple of L")


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="parfir", description=__doc__)
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("synth", help="synthesize a structure and write its netlist")
    _add_structure_args(p)
    _add_taps_args(p)
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--out", help="netlist path (stdout if omitted)")
    p.add_argument("--dot", help="also write a DOT rendering")
    p.add_argument(
        "--share",
        choices=["none", "input", "output", "both"],
        default="none",
        help="run the substructure sharing pass on the result",
    )
    p.set_defaults(fn=cmd_synth)

    p = sub.add_parser("verify", help="check a structure against the convolution oracle")
    _add_structure_args(p)
    _add_taps_args(p)
    p.add_argument("--trials", type=int, default=100)
    p.add_argument("--input-len", type=int, default=None, help="samples per trial")
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--mode", choices=["exact", "float", "int64"], default="exact")
    p.set_defaults(fn=cmd_verify)

    p = sub.add_parser("cost", help="closed-form cost comparison table")
    p.add_argument("-n", default="4,6,8", help="comma list of levels")
    p.add_argument("--csv", action="store_true")
    p.add_argument("--reconcile", action="store_true", help="compare formulas to graph counts")
    p.add_argument(
        "--scheme", choices=[costmod.SCHEME_ITERATED, costmod.SCHEME_HYBRID], default=None
    )
    p.set_defaults(fn=cmd_cost)

    p = sub.add_parser("simulate", help="run samples through a structure")
    _add_structure_args(p)
    _add_taps_args(p)
    p.add_argument(
        "--input",
        default="impulse",
        help="file:PATH | inline:a,b,c | impulse | zeros | random",
    )
    p.add_argument("--input-len", type=int, default=None, help="generated input length")
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--out", help="output sample path (stdout if omitted)")
    p.add_argument("--format", choices=["text", "bin"], default="text")
    p.add_argument("--mode", choices=["exact", "float", "int64"], default="exact")
    p.set_defaults(fn=cmd_simulate)
    return ap


def main(argv=None) -> int:
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code not in (0, None) else 0
    try:
        return args.fn(args)
    except _UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (DivisibilityError, _DataError, NetlistFormatError, InvalidGraphError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DATA


if __name__ == "__main__":
    sys.exit(main())
