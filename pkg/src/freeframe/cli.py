"""Command-line front end: ``freeframe <subcommand> [options]``.

Exit codes: 0 success, 1 input error, 2 capacity error, 3 verification failure.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import os
import sys
from dataclasses import dataclass
from typing import Any, Sequence

from . import acceptance, basis, frame, multipliers, norms
from .algebra import element_from_json
from .free_group import CapacityError, Word

EXIT_OK, EXIT_INPUT, EXIT_CAPACITY, EXIT_VERIFY = 0, 1, 2, 3

CONFIG_KEYS = {"radius": int, "tol": float, "seed": int, "threads": int, "format": str}


class InputError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        raise InputError(f"{self.prog}: error: {message}")


@dataclass(frozen=True)
class RunConfig:
    radius: int = norms.DEFAULT_RADIUS
    tol: float = norms.DEFAULT_TOL
    seed: int = 0
    threads: int = 1
    format: str | None = None

    def __post_init__(self):
        if self.radius < 0:
            raise InputError("radius must be nonnegative")
        if not self.tol > 0:
            raise InputError("tolerance must be positive")
        if self.threads < 1:
            raise InputError("threads must be at least 1")
        if self.format not in (None, "json", "csv"):
            raise InputError(f"unknown format {self.format!r}")


def read_config(path: str) -> dict[str, Any]:
    out: dict[str, Any] = {}
    with open(path, encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, 1):
            line = raw.strip()
            if not line or line.startswith("#"):
                continue
            key, sep, value = line.partition("=")
            key, value = key.strip(), value.strip()
            if not sep or key not in CONFIG_KEYS:
                raise InputError(f"{path}:{lineno}: expected one of {sorted(CONFIG_KEYS)} as key=value")
            try:
                out[key] = CONFIG_KEYS[key](value)
            except ValueError:
                raise InputError(f"{path}:{lineno}: bad value for {key}: {value!r}") from None
    return out


def resolve_config(args: argparse.Namespace) -> RunConfig:
    merged: dict[str, Any] = read_config(args.config) if args.config else {}
    for key in CONFIG_KEYS:
        val = getattr(args, key, None)
        if val is not None:
            merged[key] = val
    if "threads" not in merged:
        env = os.environ.get("FREEFRAME_THREADS")
        try:
            merged["threads"] = int(env) if env else (os.cpu_count() or 1)
        except ValueError:
            raise InputError(f"FREEFRAME_THREADS must be an integer, got {env!r}") from None
    return RunConfig(**merged)


def _int_list(text: str) -> list[int]:
    try:
        vals = [int(v) for v in text.split(",") if v.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}") from None
    if not vals:
        raise argparse.ArgumentTypeError("empty list")
    return vals


def _load_json(path: str) -> Any:
    try:
        with open(path, encoding="utf-8") as fh:
            return json.load(fh)
    except json.JSONDecodeError as exc:
        raise InputError(f"{path}: invalid JSON: {exc}") from None


def _load_element(path: str):
    try:
        return element_from_json(_load_json(path))
    except (KeyError, TypeError) as exc:
        raise InputError(f"{path}: malformed element: {exc}") from None


def _word(w: Word, pretty: bool) -> str:
    return w.pretty() if pretty else str(w)


# output


@dataclass
class Table:
    columns: list[str]
    rows: list[list[Any]]


def _cell(v: Any) -> str:
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, float):
        return repr(float(v))
    return str(v)


def render_table(table: Table, fmt: str) -> str:
    if fmt == "csv":
        buf = io.StringIO(newline="")
        writer = csv.writer(buf, lineterminator="\r\n")
        writer.writerow(table.columns)
        writer.writerows([[_cell(v) for v in row] for row in table.rows])
        return buf.getvalue()
    doc = {"columns": table.columns, "rows": [dict(zip(table.columns, row)) for row in table.rows]}
    return render_doc(doc)


def render_doc(doc: Any) -> str:
    return json.dumps(doc, indent=2, sort_keys=False, allow_nan=True) + "\n"


def _doc_as_table(doc: dict) -> Table:
    return Table(list(doc), [list(doc.values())])


# subcommands


def cmd_frame_table(args, cfg: RunConfig):
    if args.max_n < 0:
        raise InputError("--max-n must be nonnegative")
    rows = []
    for t in frame.terms(1, args.max_n):
        idx = t.index
        rows.append([idx.n, idx.k, idx.p, idx.j, _word(t.word, args.pretty_identity), t.coefficient])
    return Table(["n", "k", "p", "j", "word", "a_n"], rows), "csv"


def cmd_reconstruct(args, cfg: RunConfig):
    x = _load_element(args.element)
    rows = []
    for m in args.m_list:
        if m < 0:
            raise InputError("m values must be nonnegative")
        est = frame.reconstruction_error(x, m, cfg.radius, cfg.tol, cfg.seed)
        rows.append([m, est.lower, est.upper])
    return Table(["m", "error_lower", "error_upper"], rows), "csv"


def cmd_norm(args, cfg: RunConfig):
    x = _load_element(args.element)
    if args.radii:
        ests = norms.norm_sweep(x, args.radii, cfg.tol, cfg.seed)
        cols = ["radius", "lower", "upper", "iterations", "converged"]
        return Table(cols, [[e.to_dict()[c] for c in cols] for e in ests]), "csv"
    est = norms.norm_interval(x, cfg.radius, cfg.tol, cfg.seed)
    return dict(est.to_dict(), tolerance=cfg.tol, seed=cfg.seed), "json"


def cmd_params(args, cfg: RunConfig):
    if args.k_max < 1:
        raise InputError("--k-max must be at least 1")
    rows = multipliers.schedule_table(args.k_max)
    cols = ["k", "t_k", "m_k", "tail", "cb_defect", "sup_bound"]
    return Table(cols, [[r[c] for c in cols] for r in rows]), "csv"


def cmd_lebesgue(args, cfg: RunConfig):
    if args.max_K < 1:
        raise InputError("--max-K must be at least 1")
    rows = []
    for K in range(1, args.max_K + 1):
        L = frame.lebesgue_constant(K)
        rows.append([K, L, L - 4 / math.pi**2 * math.log(K)])
    return Table(["K", "lebesgue", "offset"], rows), "csv"


def cmd_basis_norm(args, cfg: RunConfig):
    try:
        u = basis.CoefficientSequence.from_json(_load_json(args.coeffs))
    except (KeyError, TypeError, ValueError) as exc:
        raise InputError(f"{args.coeffs}: malformed coefficient sequence: {exc}") from None
    if args.level is not None and args.level != u.level:
        raise InputError(f"--level {args.level} does not match file level {u.level}")
    fn = basis.unconditional_triple_norm if args.unconditional else basis.triple_norm
    est = fn(u, R=cfg.radius, tol=cfg.tol, seed=cfg.seed)
    return dict(est.to_dict(), level=u.level, unconditional=args.unconditional), "json"


def cmd_qt_check(args, cfg: RunConfig):
    x = _load_element(args.element)
    rows = []
    for N in args.n_list:
        if N < 1:
            raise InputError("N values must be at least 1")
        rows.append([N, basis.qt_identity_check(x, N), basis.qt_residual_closed_form(x, N)])
    return Table(["N", "residual", "closed_form"], rows), "csv"


def cmd_verify(args, cfg: RunConfig):
    selected = sorted(set(args.criteria)) if args.criteria else sorted(acceptance.CRITERIA) + [10]
    unknown = [c for c in selected if c not in acceptance.CRITERIA and c != 10]
    if unknown:
        raise InputError(f"unknown criteria {unknown}")
    core = [c for c in selected if c != 10]
    results = [acceptance.run_criterion(c, cfg.seed, cfg.threads) for c in core]
    if 10 in selected:
        again = [acceptance.run_criterion(c, cfg.seed, cfg.threads) for c in core]
        same = acceptance.render(results) == acceptance.render(again)
        results.append(acceptance.CriterionResult(10, "determinism", same, f"identical_second_pass={same}"))
    return results, "text"


COMMANDS = {
    "frame-table": cmd_frame_table,
    "reconstruct": cmd_reconstruct,
    "norm": cmd_norm,
    "params": cmd_params,
    "lebesgue": cmd_lebesgue,
    "basis-norm": cmd_basis_norm,
    "qt-check": cmd_qt_check,
    "verify": cmd_verify,
}


def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--radius", type=int, help=f"ball truncation radius (default {norms.DEFAULT_RADIUS})")
    common.add_argument("--tol", type=float, help=f"relative power-iteration tolerance (default {norms.DEFAULT_TOL})")
    common.add_argument("--seed", type=int, help="random seed (default 0)")
    common.add_argument("--threads", type=int, help="worker threads (default: $FREEFRAME_THREADS, then CPU count)")
    common.add_argument("--format", choices=["json", "csv"], help="output format")
    common.add_argument("--output", help="write output to this path instead of stdout")
    common.add_argument("--config", help="key=value file with defaults for the options above")
    common.add_argument("--pretty-identity", action="store_true", help='print the identity word as "e"')

    parser = _Parser(prog="freeframe", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("frame-table", parents=[common], help="list frame terms (n, k, p, j, word, a_n)")
    p.add_argument("--max-n", type=int, required=True)

    p = sub.add_parser("reconstruct", parents=[common], help="certified ||x - S_m x|| for several m")
    p.add_argument("--element", required=True)
    p.add_argument("--m-list", type=_int_list, required=True)

    p = sub.add_parser("norm", parents=[common], help="certified norm interval of an element")
    p.add_argument("--element", required=True)
    p.add_argument("--radii", type=_int_list, help="sweep these radii instead of a single --radius")

    p = sub.add_parser("params", parents=[common], help="parameter schedule and cb bounds")
    p.add_argument("--k-max", type=int, default=64)

    p = sub.add_parser("lebesgue", parents=[common], help="Lebesgue constants L_1..L_K")
    p.add_argument("--max-K", dest="max_K", type=int, default=64)

    p = sub.add_parser("basis-norm", parents=[common], help="triple norm of a coefficient sequence")
    p.add_argument("--coeffs", required=True)
    p.add_argument("--level", type=int)
    p.add_argument("--unconditional", action="store_true")

    p = sub.add_parser("qt-check", parents=[common], help="l1 residual of x - Q T_N x")
    p.add_argument("--element", required=True)
    p.add_argument("--n-list", type=_int_list, required=True)

    p = sub.add_parser("verify", parents=[common], help="run the acceptance suite")
    p.add_argument("--criteria", type=_int_list, help="subset of criteria to run (default: all)")
    return parser


def _render(result: Any, default_fmt: str, fmt: str | None) -> str:
    if default_fmt == "text":
        if fmt == "json":
            doc = {"passed": all(r.passed for r in result), "criteria": [r.to_dict() for r in result]}
            return render_doc(doc)
        if fmt == "csv":
            return render_table(
                Table(["criterion", "name", "passed", "detail"], [[r.number, r.name, r.passed, r.detail] for r in result]),
                "csv",
            )
        return acceptance.render(result)
    fmt = fmt or default_fmt
    if isinstance(result, Table):
        return render_table(result, fmt)
    return render_doc(result) if fmt == "json" else render_table(_doc_as_table(result), "csv")


def run(argv: Sequence[str] | None = None) -> int:
    try:
        args = build_parser().parse_args(argv)
        cfg = resolve_config(args)
        result, default_fmt = COMMANDS[args.command](args, cfg)
        text = _render(result, default_fmt, cfg.format)
        if args.output:
            with open(args.output, "w", encoding="utf-8", newline="") as fh:
                fh.write(text)
        else:
            sys.stdout.write(text)
            sys.stdout.flush()
    except InputError as exc:
        print(exc, file=sys.stderr)
        return EXIT_INPUT
    except (CapacityError, OverflowError) as exc:
        print(f"capacity error: {exc}", file=sys.stderr)
        return EXIT_CAPACITY
    except (ValueError, OSError, ArithmeticError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    if default_fmt == "text" and not all(r.passed for r in result):
        return EXIT_VERIFY
    return EXIT_OK


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
