"""Command-line entry point: ``maxcomm apply | verify | sweep``.

Exit codes are a stable contract: 0 success, 1 a verification case failed
(the report is still written), 2 usage error, 3 I/O or data error.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

import numpy as np

from . import maximal as mx
from . import norms, verify
from .corpus import CorpusSpec, gen
from .grid import Grid1D, SampledFn, check_same_grid, load, save

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_DATA = 0, 1, 2, 3

APPLY_OPS = ("M", "M2", "Mdelta", "sharp", "sharp_delta", "Cb", "MbCommutator", "OrliczMax", "rearrange")
SWEEP_OPS = ("M", "M2", "Mdelta", "sharp", "sharp_delta", "Cb", "MbCommutator", "OrliczMax")
NEEDS_B = ("Cb", "MbCommutator")
NEEDS_DELTA = ("Mdelta", "sharp_delta")


class UsageError(Exception):
    def __init__(self, flag: str, msg: str):
        super().__init__(f"{flag}: {msg}")
        self.flag = flag


def _grid_arg(text: str | None) -> Grid1D | None:
    if text is None:
        return None
    try:
        return Grid1D.from_spec(text)
    except ValueError as exc:
        raise UsageError("--grid", str(exc)) from None


def _operand(text: str | None, flag: str, grid: Grid1D | None) -> SampledFn | None:
    """A file path if one exists, otherwise the builtin mini-syntax on --grid."""
    if text is None:
        return None
    if Path(text).exists():
        return load(text)
    if grid is None:
        raise UsageError("--grid", f"required to sample the builtin {flag} {text!r}")
    try:
        spec = CorpusSpec.parse(text, grid)
    except ValueError as exc:
        raise UsageError(flag, str(exc)) from None
    return gen(spec)


def _operands(args, need_b: bool) -> tuple[SampledFn | None, SampledFn]:
    grid = _grid_arg(args.grid)
    given = [(flag, v) for flag, v in (("--f", args.f), ("--builtin", args.builtin), ("--input", args.input))
             if v is not None]
    if not given:
        raise UsageError("--f", "an operand is required (--f, --builtin or --input)")
    if len(given) > 1:
        raise UsageError(given[1][0], f"conflicts with {given[0][0]}; give one operand")
    flag, text = given[0]
    if flag == "--input":
        f = load(text)
    else:
        f = _operand(text, flag, grid)
    b = None
    if need_b:
        if args.b is None:
            raise UsageError("--b", f"operator {args.op} needs a symbol b")
        b = _operand(args.b, "--b", grid or f.grid)
        check_same_grid(b, f)
    return b, f


def _delta(args) -> float:
    if args.delta is None:
        raise UsageError("--delta", f"operator {args.op} needs --delta")
    try:
        d = float(args.delta)
    except ValueError:
        raise UsageError("--delta", f"not a number: {args.delta!r}") from None
    hi_ok = d <= 1.0 if args.op == "Mdelta" else d < 1.0
    if not (d > 0 and hi_ok):
        raise UsageError("--delta", f"{d} out of range for {args.op}")
    return d


def _apply_op(args, b: SampledFn | None, f: SampledFn) -> SampledFn:
    op = args.op
    if op == "M":
        return mx.hl_maximal(f)
    if op == "M2":
        return mx.iterated_maximal(f)
    if op == "Mdelta":
        return mx.power_maximal(f, _delta(args))
    if op == "sharp":
        return mx.sharp_maximal(f)
    if op == "sharp_delta":
        return mx.power_sharp_maximal(f, _delta(args))
    if op == "Cb":
        return mx.maximal_commutator(b, f)
    if op == "MbCommutator":
        return mx.commutator_maximal(b, f)
    if op == "OrliczMax":
        return mx.orlicz_maximal(f, args.phi)
    raise UsageError("--op", f"unknown operator {op!r}")


def _format(args) -> str:
    if args.format:
        return args.format
    return "json" if args.out and args.out.lower().endswith(".json") else "csv"


def _write_profile(prof: norms.RearrangementProfile, out, fmt: str) -> None:
    if fmt == "json":
        text = json.dumps({"h": prof.h, "total_mass": prof.total_mass, "values": prof.values.tolist()}) + "\n"
    else:
        t = np.arange(prof.values.shape[0]) * prof.h
        text = "t,value\n" + "".join(f"{a:.17e},{v:.17e}\n" for a, v in zip(t, prof.values))
    if out is None:
        sys.stdout.write(text)
    else:
        Path(out).write_text(text)


def cmd_apply(args) -> int:
    if args.op not in APPLY_OPS:
        raise UsageError("--op", f"expected one of {', '.join(APPLY_OPS)}")
    b, f = _operands(args, args.op in NEEDS_B)
    fmt = _format(args)
    if args.op == "rearrange":
        _write_profile(norms.rearrangement(f), args.out, fmt)
        return EXIT_OK
    res = _apply_op(args, b, f)
    if args.out is None:
        sys.stdout.write(json.dumps(res.to_dict()) + "\n" if fmt == "json" else
                         "x,value\n" + "".join(f"{x:.17e},{v:.17e}\n" for x, v in zip(res.x, res.values)))
    else:
        save(res, args.out, fmt)
    return EXIT_OK


def _floats(text: str, flag: str) -> tuple[float, ...]:
    try:
        return tuple(float(x) for x in text.split(",") if x.strip())
    except ValueError:
        raise UsageError(flag, f"expected comma-separated numbers, got {text!r}") from None


def _t_grid(text: str) -> tuple[float, ...]:
    kind, _, rest = text.partition(":")
    if kind == "geom":
        return verify.parse_lambda_grid(text)
    if kind == "lin":
        lo, hi, count = _floats(rest, "--t-grid")
        return tuple(float(t) for t in np.linspace(lo, hi, int(count)))
    raise UsageError("--t-grid", f"expected 'lin:lo,hi,count' or 'geom:lo,hi,count', got {text!r}")


def _lambda_grid(text: str) -> tuple[float, ...]:
    try:
        return verify.parse_lambda_grid(text)
    except ValueError as exc:
        raise UsageError("--lambda-grid", str(exc)) from None


def _load_corpus(path: str):
    """Manifest records may carry ``"role"`` in {b, f, both} (default both)."""
    recs = json.loads(Path(path).read_text())
    if not isinstance(recs, list):
        raise ValueError(f"{path}: manifest must be a JSON list")
    out = []
    for q, rec in enumerate(recs):
        role = rec.get("role", "both")
        if role not in ("b", "f", "both"):
            raise ValueError(f"{path}: record {q} role must be b, f or both, got {role!r}")
        out.append((CorpusSpec.from_dict({k: v for k, v in rec.items() if k != "role"}), role))
    return out


def _config(args) -> verify.VerifyConfig:
    cfg = verify.VerifyConfig()
    if args.config:
        cfg = verify.VerifyConfig.from_dict(json.loads(Path(args.config).read_text()))
    kw = {}
    if args.seed is not None:
        kw["seed"] = args.seed
    if args.X is not None:
        kw["closed_form_X"] = args.X
    if args.n is not None:
        kw["closed_form_n"] = args.n
    if args.delta is not None:
        kw["deltas"] = _floats(args.delta, "--delta")
    if args.eps is not None:
        kw["eps_list"] = _floats(args.eps, "--eps")
    if args.p is not None:
        kw["p_list"] = _floats(args.p, "--p")
    if args.lambda_grid is not None:
        kw["lambda_grid"] = _lambda_grid(args.lambda_grid)
    if args.t_grid is not None:
        kw["t_grid"] = _t_grid(args.t_grid)
    if not kw:
        return cfg
    try:
        return cfg.replace(**kw)
    except ValueError as exc:
        field = str(exc).split(":")[0]
        flag = {"deltas": "--delta", "eps_list": "--eps", "p_list": "--p"}.get(field, "--config")
        raise UsageError(flag, str(exc)) from None


def cmd_verify(args) -> int:
    if args.suite not in verify.SUITES + ("all",):
        raise UsageError("--suite", f"expected one of {', '.join(verify.SUITES + ('all',))}")
    cfg = _config(args)
    corpus = _load_corpus(args.corpus) if args.corpus else None
    payload = verify.run_suite(args.suite, cfg, corpus)
    if args.out is None:
        sys.stdout.write(verify.dumps_report(payload))
    else:
        verify.write_report(payload, args.out)
    return EXIT_OK if verify.suite_passed(payload) else EXIT_FAIL


def cmd_sweep(args) -> int:
    if args.op not in SWEEP_OPS:
        raise UsageError("--op", f"expected one of {', '.join(SWEEP_OPS)}")
    if args.lambda_grid is None:
        raise UsageError("--lambda-grid", "required, e.g. geom:0.05,0.8,16")
    lambdas = _lambda_grid(args.lambda_grid)
    b, f = _operands(args, args.op in NEEDS_B)
    tf = _apply_op(args, b, f)
    rep = verify.weak_type_sweep(abs(tf), f, lambdas, name=f"sweep/{args.op}")
    if args.out is None:
        rows = rep.details["table"]
        sys.stdout.write("lambda,numerator,denominator,ratio\n")
        sys.stdout.write("".join(",".join(f"{v:.17e}" for v in r) + "\n" for r in rows))
    else:
        verify.write_sweep_csv(rep, args.out)
    return EXIT_OK


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="maxcomm", description="Maximal operators and commutators on sampled functions.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def operands(sp):
        sp.add_argument("--op", required=True)
        sp.add_argument("--f", help="operand: builtin spec (name:params[:seed]) or a CSV/JSON file")
        sp.add_argument("--builtin", help="operand as builtin spec, same as --f")
        sp.add_argument("--input", help="operand read from a CSV/JSON file")
        sp.add_argument("--b", help="symbol for Cb and MbCommutator")
        sp.add_argument("--grid", help="a,b,n for builtin specs")
        sp.add_argument("--delta")
        sp.add_argument("--phi", default="LlogL", choices=("LlogL", "ExpL"))
        sp.add_argument("--out")

    ap = sub.add_parser("apply", help="apply one operator and write the result")
    operands(ap)
    ap.add_argument("--format", choices=("csv", "json"))
    ap.set_defaults(func=cmd_apply)

    vp = sub.add_parser("verify", help="run a verification suite and write a JSON report")
    vp.add_argument("--suite", required=True)
    vp.add_argument("--config", help="JSON file of VerifyConfig fields")
    vp.add_argument("--corpus", help="JSON manifest of corpus specs")
    vp.add_argument("--out")
    vp.add_argument("--seed", type=int)
    vp.add_argument("--X", type=float, help="left end -X of the closed-form example domain")
    vp.add_argument("--n", type=int, help="points on the closed-form example grid")
    vp.add_argument("--delta", help="comma-separated delta list")
    vp.add_argument("--eps", help="comma-separated epsilon list")
    vp.add_argument("--p", help="comma-separated exponent list")
    vp.add_argument("--lambda-grid")
    vp.add_argument("--t-grid")
    vp.set_defaults(func=cmd_verify)

    sp = sub.add_parser("sweep", help="tabulate a weak-type ratio over a lambda grid")
    operands(sp)
    sp.add_argument("--lambda-grid")
    sp.set_defaults(func=cmd_sweep)
    return p


def _glue_negative_values(argv: list[str]) -> list[str]:
    # argparse reads "--grid -8,2,5120" as two options; rewrite to "--grid=-8,2,5120"
    out, q = [], 0
    while q < len(argv):
        tok = argv[q]
        nxt = argv[q + 1] if q + 1 < len(argv) else ""
        if tok.startswith("--") and "=" not in tok and len(nxt) > 1 and nxt[0] == "-" and (nxt[1].isdigit() or nxt[1] == "."):
            out.append(f"{tok}={nxt}")
            q += 2
        else:
            out.append(tok)
            q += 1
    return out


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(_glue_negative_values(list(sys.argv[1:] if argv is None else argv)))
    try:
        return args.func(args)
    except UsageError as exc:
        parser.print_usage(sys.stderr)
        print(f"maxcomm: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (OSError, ValueError) as exc:
        print(f"maxcomm: error: {exc}", file=sys.stderr)
        return EXIT_DATA


if __name__ == "__main__":
    sys.exit(main())
