"""Command-line front end.

    ellschub verify [--suite NAME ...] [--config FILE] [--report FILE]
    ellschub table --kind {a,b,restriction,pairing} --point K [--config FILE] --out FILE

Exit status: 0 when every identity holds, 1 when one fails, 2 on a
configuration or usage error.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import sys

import numpy as np

from .algebra import MUTATION_SITES, DemazureLusztig
from .config import CONFIG_ENV, RunConfig, load_config
from .duals import elliptic_class, opposite_class, pairing, restriction_table
from .errors import (
    ConfigurationError,
    EllschubError,
    InvalidParamsError,
    PanelConstructionError,
)
from .field import FunctionField, sample_panel
from .roots import build_root_system
from .verify import SUITES, VerifyContext, run_suites

EXIT_OK, EXIT_FAIL, EXIT_CONFIG = 0, 1, 2
TABLE_KINDS = ("a", "b", "restriction", "pairing")


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise SystemExit(EXIT_CONFIG)


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="ellschub", description="Numerical checks for elliptic Demazure-Lusztig operators.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    v = sub.add_parser("verify", help="run verification suites")
    v.add_argument("--suite", action="append", choices=SUITES, metavar="NAME",
                   help=f"suite to run, repeatable ({', '.join(SUITES)}); default all")
    v.add_argument("--config", help=f"config file (default: ${CONFIG_ENV}, else built-in defaults)")
    v.add_argument("--report", help="also write the report to FILE in the configured output format")
    v.add_argument("--mutate", choices=MUTATION_SITES, metavar="SITE",
                   help="flip one sign inside a simple DL operator (self-test of the suites)")
    v.add_argument("--mutate-root", type=int, default=0, metavar="I",
                   help="simple root index the mutation applies to (default 0)")

    t = sub.add_parser("table", help="export a coefficient or pairing table at one panel point")
    t.add_argument("--kind", required=True, choices=TABLE_KINDS)
    t.add_argument("--point", type=int, default=0, metavar="K")
    t.add_argument("--sign", choices=("+", "-"), default="+",
                   help="operator family for a, b and restriction tables (default +)")
    t.add_argument("--config")
    t.add_argument("--out", required=True, metavar="FILE")
    return p


def make_field(cfg: RunConfig) -> FunctionField:
    datum = build_root_system(cfg.type_label, cfg.rank)
    params = cfg.params()
    panel = sample_panel(cfg.seed, cfg.panel_size, datum, params, cfg.pole_guard)
    return FunctionField(datum, params, panel)


# ---------------------------------------------------------------------------
# verify


def format_report(cfg: RunConfig, field: FunctionField, results, mutation=None) -> str:
    lines = [
        f"# ellschub verify: {field.datum.name}, seed {cfg.seed}, "
        f"panel {cfg.panel_size}, tolerance {cfg.tolerance:g}",
    ]
    if mutation:
        lines.append(f"# mutation: {mutation}")
    lines.extend(r.line() for r in results)
    failed = sum(not r.ok for r in results)
    lines.append(f"# {len(results) - failed} passed, {failed} failed")
    return "\n".join(lines) + "\n"


def _report_payload(cfg, field, results, fmt, mutation=None) -> str:
    if fmt == "json":
        doc = {
            "metadata": {"config": cfg.echo(), "datum": field.datum.name, "mutation": mutation},
            "results": [r.as_dict() for r in results],
        }
        return json.dumps(doc, indent=2, sort_keys=True) + "\n"
    buf = io.StringIO()
    buf.write(f"# datum: {field.datum.name}\n")
    for k, v in cfg.echo().items():
        buf.write(f"# {k}: {v}\n")
    if mutation:
        buf.write(f"# mutation: {mutation}\n")
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["suite", "name", "ok", "residual", "tol", "witness", "description"])
    for r in results:
        w.writerow([r.suite, r.name, int(r.ok), repr(r.residual), repr(r.tol), r.witness, r.description])
    return buf.getvalue()


def cmd_verify(args) -> int:
    cfg = load_config(args.config)
    field = make_field(cfg)
    n = field.datum.rank
    if not 0 <= args.mutate_root < n:
        raise _UsageError(f"--mutate-root must lie in [0, {n})")
    ctx = VerifyContext(field, cfg.tolerance, cfg.seed, mutation=args.mutate, mutated_root=args.mutate_root)
    results = run_suites(ctx, args.suite)
    sys.stdout.write(format_report(cfg, field, results, args.mutate))
    if args.report:
        with open(args.report, "w", encoding="utf-8", newline="") as fh:
            fh.write(_report_payload(cfg, field, results, cfg.output_format, args.mutate))
    return EXIT_OK if all(r.ok for r in results) else EXIT_FAIL


# ---------------------------------------------------------------------------
# tables


def compute_table(field: FunctionField, kind: str, point: int, sign: int = 1) -> np.ndarray:
    """``|W| x |W|`` matrix of the requested kind at one panel point (identity orbit slice)."""
    if kind not in TABLE_KINDS:
        raise _UsageError(f"unknown table kind {kind!r}")
    if not 0 <= point < field.P:
        raise _UsageError(f"--point must lie in [0, {field.P})")
    N = field.N
    dl = DemazureLusztig(field)
    M = np.zeros((N, N), dtype=np.complex128)
    if kind == "a":
        for w in range(N):
            for v, c in dl.transition_a(w, sign).items():
                M[w, v] = c.values[0, 0, point]
    elif kind == "b":
        for (w, v), c in dl.transition_b(sign).items():
            M[w, v] = c.values[0, 0, point]
    elif kind == "restriction":
        M = restriction_table(dl, sign, point)
    else:
        E = [elliptic_class(dl, w, 1) for w in range(N)]
        O = [opposite_class(dl, w, -1) for w in range(N)]
        for w in range(N):
            for v in range(N):
                M[w, v] = pairing(E[w], O[v]).coefficient(0).values[0, 0, point]
    return M


def _pair(c) -> list:
    return [float(c.real), float(c.imag)]


def format_complex(c) -> str:
    return f"{float(c.real)!r}{float(c.imag):+}i".replace("+-", "-")


def render_table(cfg: RunConfig, field: FunctionField, kind: str, point: int, sign: int, M) -> str:
    W = field.datum.weyl
    labels = [W[w].label for w in range(W.size)]
    z, lam = field.panel.points[point]
    meta = {
        "config": cfg.echo(),
        "datum": field.datum.name,
        "kind": kind,
        "sign": "+" if sign == 1 else "-",
        "point": point,
        "seed": cfg.seed,
        "z": [_pair(c) for c in z],
        "lambda": [_pair(c) for c in lam],
    }
    if cfg.output_format == "json":
        doc = {
            "metadata": meta,
            "labels": labels,
            "matrix": [[_pair(c) for c in row] for row in M],
        }
        return json.dumps(doc, indent=1, sort_keys=True) + "\n"
    buf = io.StringIO()
    for k in sorted(meta):
        buf.write(f"# {k}: {json.dumps(meta[k], sort_keys=True)}\n")
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["row"] + labels)
    for lab, row in zip(labels, M):
        w.writerow([lab] + [format_complex(c) for c in row])
    return buf.getvalue()


def cmd_table(args) -> int:
    cfg = load_config(args.config)
    field = make_field(cfg)
    sign = 1 if args.sign == "+" else -1
    M = compute_table(field, args.kind, args.point, sign)
    text = render_table(cfg, field, args.kind, args.point, sign, M)
    with open(args.out, "w", encoding="utf-8", newline="") as fh:
        fh.write(text)
    print(f"wrote {args.kind} table ({field.N}x{field.N}) to {args.out}")
    return EXIT_OK


class _UsageError(EllschubError, ValueError):
    pass


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        if args.command == "verify":
            return cmd_verify(args)
        return cmd_table(args)
    except (ConfigurationError, InvalidParamsError, PanelConstructionError, _UsageError) as exc:
        print(f"ellschub: error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except EllschubError as exc:
        # a pole or broken invariant during evaluation counts as a failed check
        print(f"ellschub: evaluation failed: {exc}", file=sys.stderr)
        return EXIT_FAIL


if __name__ == "__main__":
    sys.exit(main())
