"""Command-line front end.

Exit codes: 0 success, 1 usage error, 2 a mathematical precondition failed,
3 the interval budget was exceeded.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys
import tempfile
from fractions import Fraction
from pathlib import Path
from typing import Any

from . import betaexp, equivalence, intervals, kernel, measure
from .digitset import DigitSet, classify
from .errors import BudgetExceeded, CantorError, DomainError, NotApplicable
from .radix import Alphabet, PeriodicCode, format_code, parse_code, value_of

CONFIG_KEYS = {"base", "digits", "depth", "budget", "format"}


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message: str):
        self.print_usage(sys.stderr)
        self.exit(1, f"{self.prog}: error: {message}\n")


def read_config(path: str) -> dict[str, str]:
    """key=value lines; '#' starts a comment."""
    out = {}
    for lineno, raw in enumerate(Path(path).read_text().splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise UsageError(f"{path}:{lineno}: expected key=value")
        key, value = (part.strip() for part in line.split("=", 1))
        if key not in CONFIG_KEYS:
            raise UsageError(f"{path}:{lineno}: unknown key {key!r}")
        out[key] = value.strip("\"'")
    return out


def _digits(text: str) -> list[int]:
    try:
        return [int(x) for x in text.replace("{", "").replace("}", "").split(",") if x.strip()]
    except ValueError as exc:
        raise UsageError(f"bad digit list {text!r}") from exc


class RunConfig:
    def __init__(self, args: argparse.Namespace):
        conf = read_config(args.config) if args.config else {}
        base = args.base if args.base is not None else conf.get("base")
        digits = args.digits if args.digits is not None else conf.get("digits")
        self.format = args.format or conf.get("format", "json")
        if self.format not in ("json", "csv"):
            raise UsageError(f"unknown format {self.format!r}")
        depth = args.depth if args.depth is not None else conf.get("depth", 8)
        self.depth = int(depth)
        if args.budget is not None:
            budget = args.budget
        elif os.environ.get("CANTOR_BUDGET"):
            budget = os.environ["CANTOR_BUDGET"]
        else:
            budget = conf.get("budget", intervals.DEFAULT_BUDGET)
        self.budget = int(budget)
        self.output = args.output
        self.alphabet = Alphabet(args.alphabet)
        self.ds = None
        if base is not None and digits is not None:
            self.ds = DigitSet(int(base), _digits(digits))

    def digit_set(self) -> DigitSet:
        if self.ds is None:
            raise UsageError("--base and --digits (or a config file) are required")
        return self.ds


def _num(cfg: RunConfig, text: str | None, name: str = "--num") -> tuple[PeriodicCode, int]:
    if text is None:
        raise UsageError(f"{name} is required")
    return parse_code(text, cfg.digit_set().base, cfg.alphabet, cfg.digit_set())


def _jsonable(obj: Any):
    if isinstance(obj, Fraction):
        return str(obj)
    raise TypeError(f"cannot serialize {type(obj).__name__}")


def render_json(data: Any) -> str:
    return json.dumps(data, indent=2, default=_jsonable) + "\n"


def render_csv(header: list[str], rows: list[list]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    for row in rows:
        writer.writerow(["" if x is None else x for x in row])
    return buf.getvalue()


def emit(text: str, output: str | None) -> None:
    if output is None:
        sys.stdout.write(text)
        return
    target = Path(output)
    fd, tmp = tempfile.mkstemp(dir=target.parent or ".", prefix=f".{target.name}.")
    try:
        with os.fdopen(fd, "w") as fh:
            fh.write(text)
        os.replace(tmp, target)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def _frac_pair(x: Fraction) -> list:
    return [x.numerator, x.denominator]


# subcommands return (json payload, csv header, csv rows)

def cmd_classify(cfg: RunConfig, args) -> tuple:
    ds = cfg.digit_set()
    c = classify(ds)
    payload = {"base": ds.base, "digits": list(ds.digits), **c.to_dict()}
    header = ["base", "digits", "sparse", "regular", "uniform"]
    row = [ds.base, " ".join(map(str, ds.digits)), c.sparse, c.regular, c.uniform]
    return payload, header, [row]


def cmd_sigma(cfg: RunConfig, args) -> tuple:
    ds = cfg.digit_set()
    code, sign = _num(cfg, args.num)
    trace = kernel.sigma_trace(ds, code, cfg.depth)
    rows = []
    for k in range(cfg.depth + 1):
        value = trace.values[k]
        length = None
        if value.is_pm_one:
            try:
                length = kernel.ell(ds, code, k)
            except DomainError:
                length = None
        rows.append([k, trace.digits[k - 1] if k else None, value.label, trace.mu[k],
                     None if length is None else str(length)])
    payload = {"code": format_code(code), "sign": sign, "trace": trace.to_dict(),
               "rows": [dict(zip(["k", "t_k", "sigma", "mu", "ell"], r)) for r in rows]}
    return payload, ["k", "t_k", "sigma", "mu", "ell"], rows


def cmd_intersect(cfg: RunConfig, args) -> tuple:
    ds = cfg.digit_set()
    code, sign = _num(cfg, args.num)
    move = -value_of(code) if sign < 0 else Fraction(0)
    levels = []
    rows = []
    for res in intervals.iter_levels(ds, code, cfg.depth, cfg.budget):
        pieces = [(a + move, b + move) for a, b in res.tight.intervals]
        points = [p + move for p in res.points]
        levels.append({"level": res.level, "cases": res.cases.to_dict(),
                       "tight": [[str(a), str(b)] for a, b in pieces],
                       "points": [str(p) for p in points]})
        rows += [[res.level, *_frac_pair(a), *_frac_pair(b), "tight"] for a, b in pieces]
        rows += [[res.level, *_frac_pair(p), *_frac_pair(p), "point"] for p in points]
    payload = {"code": format_code(code), "sign": sign, "levels": levels}
    return payload, ["level", "left_num", "left_den", "right_num", "right_den", "case"], rows


def cmd_canon(cfg: RunConfig, args) -> tuple:
    ds = cfg.digit_set()
    code, sign = _num(cfg, args.num)
    y, shift, route = kernel.to_delta_plus(ds, code)
    payload = {"input": format_code(code), "sign": sign, "route": route,
               "delta_plus": y.to_dict(), "delta_plus_text": format_code(y),
               "shift": None if shift is None else str(shift)}
    if code.alphabet is Alphabet.NARY and not code.is_prefix:
        res = kernel.psi(ds, code)
        payload["psi"] = {"y": format_code(res.y), "offset": str(res.offset), "q": res.q}
    row = [format_code(code), route, format_code(y), payload["shift"]]
    return payload, ["input", "route", "delta_plus", "shift"], [row]


def cmd_equiv(cfg: RunConfig, args) -> tuple:
    ds = cfg.digit_set()
    a, _ = _num(cfg, args.a, "--a")
    b, _ = _num(cfg, args.b, "--b")
    res = equivalence.equivalent(ds, a, b)
    payload = {"a": format_code(a), "b": format_code(b), **res.to_dict()}
    row = [payload["a"], payload["b"], res.equal, res.witness_k, res.decided]
    return payload, ["a", "b", "equal", "witness_k", "decided"], [row]


def cmd_selfsim(cfg: RunConfig, args) -> tuple:
    ds = cfg.digit_set()
    code, sign = _num(cfg, args.num)
    if code.is_prefix:
        res = equivalence.rational_equivalent(ds, code)
        payload = {"verdict": res.verdict, "rational": res.to_dict()}
        return payload, ["verdict"], [[res.verdict]]
    rep = equivalence.self_similar_report(ds, code, cfg.budget, sign)
    payload = rep.to_dict()
    row = [rep.verdict, " ".join(map(str, rep.E)), rep.E_base, rep.dimension.exact,
           None if rep.measure is None else rep.measure.exact]
    return payload, ["verdict", "E", "E_base", "dimension", "measure"], [row]


def cmd_dim(cfg: RunConfig, args) -> tuple:
    ds = cfg.digit_set()
    code, _ = _num(cfg, args.num)
    d = measure.dimension(ds, code)
    payload = {"exact": d.exact, "float": d.float}
    return payload, ["exact", "float"], [[d.exact, repr(d.float)]]


def cmd_measure(cfg: RunConfig, args) -> tuple:
    ds = cfg.digit_set()
    code, sign = _num(cfg, args.num)
    rep = equivalence.self_similar_report(ds, code, cfg.budget, sign)
    if rep.measure is None:
        raise NotApplicable(rep.measure_note or "no closed form for this measure")
    payload = {"exact": rep.measure.exact, "float": rep.measure.float,
               "dimension": rep.dimension.exact}
    return payload, ["exact", "float"], [[rep.measure.exact, repr(rep.measure.float)]]


def cmd_beta(cfg: RunConfig, args) -> tuple:
    system = betaexp.BetaSystem(args.N, _digits(args.omega), Fraction(args.beta))
    ds = system.digit_set()
    code, _ = parse_code(args.num, ds.base, cfg.alphabet, ds)
    rep = betaexp.transport_report(system, ds, code, pairs=args.pairs, seed=args.seed)
    payload = {"system": system.to_dict(), "g_beta": str(betaexp.g_beta(system, code)),
               "gamma_scale": str(betaexp.gamma_scale(system)), **rep.to_dict()}
    row = [payload["g_beta"], payload["gamma_scale"], rep.preserved, rep.verdict]
    return payload, ["g_beta", "gamma_scale", "preserved", "verdict"], [row]


def _bits(source: str, count: int) -> list[int]:
    if source == "thue-morse":
        return equivalence.thue_morse(count)
    if source.startswith("file:"):
        text = Path(source[5:]).read_text()
        bits = [int(ch) for ch in text if ch in "01"]
        return bits
    raise UsageError("--bits must be thue-morse or file:PATH")


def cmd_genirr(cfg: RunConfig, args) -> tuple:
    ds = cfg.digit_set()
    alpha, _ = _num(cfg, args.alpha, "--alpha")
    res = equivalence.generate_nonequivalent(ds, alpha, args.delta,
                                             _bits(args.bits, cfg.depth + 1), cfg.depth)
    rat = equivalence.rational_equivalent(ds, res.gamma)
    payload = {**res.to_dict(), "gamma_text": format_code(res.gamma),
               "rational": rat.to_dict()}
    rows = [[j, d] for j, d in enumerate(res.gamma.preperiod, 1)]
    return payload, ["j", "digit"], rows


COMMANDS = {
    "classify": (cmd_classify, "classify a digit set"),
    "sigma": (cmd_sigma, "case trace, counts and lengths"),
    "intersect": (cmd_intersect, "exact levels of C ∩ (C + t)"),
    "canon": (cmd_canon, "recode a translation over nonnegative differences"),
    "equiv": (cmd_equiv, "compare two translations"),
    "selfsim": (cmd_selfsim, "self-similar structure report"),
    "dim": (cmd_dim, "Hausdorff dimension"),
    "measure": (cmd_measure, "Hausdorff measure when a closed form exists"),
    "beta": (cmd_beta, "beta-expansion transport"),
    "genirr": (cmd_genirr, "prefix of a translation equivalent to no rational"),
}


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--base", type=int)
    common.add_argument("--digits", help="comma separated, e.g. 0,2")
    common.add_argument("--config", help="key=value file (base, digits, depth, budget, format)")
    common.add_argument("--format", choices=["json", "csv"])
    common.add_argument("--output", help="write here instead of stdout")
    common.add_argument("--budget", type=int, help="interval budget (env CANTOR_BUDGET)")
    common.add_argument("--depth", type=int)
    common.add_argument("--alphabet", default="nary", choices=[a.value for a in Alphabet])

    parser = _Parser(prog="cantor", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)
    for name, (_, text) in COMMANDS.items():
        p = sub.add_parser(name, parents=[common], help=text, description=text)
        if name in ("sigma", "intersect", "canon", "selfsim", "dim", "measure", "beta"):
            p.add_argument("--num", required=True,
                           help="02(20), 0220..., 3/4 or a plain digit string")
        if name == "equiv":
            p.add_argument("--a", required=True)
            p.add_argument("--b", required=True)
        if name == "beta":
            p.add_argument("--N", type=int, required=True)
            p.add_argument("--omega", required=True)
            p.add_argument("--beta", required=True)
            p.add_argument("--pairs", type=int, default=100)
            p.add_argument("--seed", type=int, default=0)
        if name == "genirr":
            p.add_argument("--alpha", required=True)
            p.add_argument("--delta", type=int, required=True)
            p.add_argument("--bits", default="thue-morse")
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        cfg = RunConfig(args)
        func = COMMANDS[args.command][0]
        payload, header, rows = func(cfg, args)
    except (UsageError, OSError) as exc:
        print(f"cantor: {exc}", file=sys.stderr)
        return 1
    except BudgetExceeded as exc:
        print(f"cantor: budget exceeded: {exc}", file=sys.stderr)
        return 3
    except (DomainError, ValueError) as exc:
        print(f"cantor: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 2
    except CantorError as exc:
        print(f"cantor: {exc}", file=sys.stderr)
        return 2
    text = render_json(payload) if cfg.format == "json" else render_csv(header, rows)
    emit(text, cfg.output)
    return 0


if __name__ == "__main__":
    sys.exit(main())
