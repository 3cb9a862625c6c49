"""``fliess`` command line.

Exit codes: 0 success, 1 failed verification, 2 usage or domain error.
Series arguments are a file path or inline text such as ``"x1 x2 - 2 x0"``;
representation arguments are a JSON file path or inline JSON.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import os
import sys
from fractions import Fraction
from typing import Optional

import numpy as np

from . import acceptance
from . import composition as comp
from . import eval as ev
from . import feedback_hopf as fh
from . import quasishuffle as qs
from . import rational as rat
from . import shuffle as sh
from .series import (NotInvertibleError, Series, TruncationError, fmt_scalar, load_series,
                     series_to_json, to_scalar)
from .suites import SUITES
from .words import (DegreeError, check_hopf_degree, check_word_degree, format_word,
                    parse_word)

DOMAIN_ERRORS = (ValueError, KeyError, IndexError, ArithmeticError, OSError, TypeError,
                 DegreeError, TruncationError, NotInvertibleError, rat.AlphabetError,
                 rat.SingularTransitionError, ev.PicardError)


class UsageError(Exception):
    pass


# -- argument readers ---------------------------------------------------------


def _read_arg(arg: str) -> str:
    if os.path.isfile(arg):
        with open(arg, encoding="utf-8") as fh_:
            return fh_.read()
    return arg


def _series(arg: str, ell: Optional[int] = None) -> Series:
    c = load_series(_read_arg(arg))
    if ell is not None and c.ell != ell:
        if c.ell == 1:
            return Series({w: v * ell for w, v in c.terms.items()}, ell, c.truncation)
        raise ValueError(f"series has {c.ell} components, expected {ell}")
    return c


def _rep(arg: str) -> rat.LinearRepresentation:
    return rat.rep_from_json(_read_arg(arg))


def _infer_m(*series: Series) -> int:
    idx = [i for c in series for a in c.letters() for i in a]
    return max(idx, default=1) or 1


def _scalar(text: str):
    return to_scalar(text.lstrip("+"))


def read_signal(path: str, continuous: bool, t0: Optional[float] = None,
                h: Optional[float] = None):
    """Parse a ``k,u0,u1,...`` CSV (CT files may add ``t0,h`` columns)."""
    with open(path, newline="", encoding="utf-8") as f:
        rows = list(csv.DictReader(f))
    if not rows:
        raise ValueError(f"{path}: no samples")
    cols = rows[0].keys()
    if "k" not in cols:
        raise ValueError(f"{path}: header must start with k")
    chans = sorted((c for c in cols if c.startswith("u") and c[1:].isdigit()), key=lambda c: int(c[1:]))
    rows.sort(key=lambda r: int(r["k"]))
    if continuous:
        t0 = float(rows[0].get("t0") or (0.0 if t0 is None else t0))
        h = rows[0].get("h") or h
        if h is None:
            raise ValueError("CT signals need a step h (column or --h)")
        data = [[float(r[c]) for c in chans if c != "u0"] for r in rows]
        return ev.CTSignal(t0, float(h), np.array(data, dtype=float))
    if "u0" not in chans:
        return ev.DTSignal([[1] + [Fraction(r[c]) for c in chans] for r in rows])
    return ev.DTSignal([[Fraction(r[c]) for c in chans] for r in rows])


def _const_signal(args, continuous: bool, m: int):
    vals = [_scalar(v) for v in args.const.split(",")]
    if len(vals) == 1:
        vals = vals * m
    if continuous:
        n = int(round(float(args.T) / float(args.h)))
        return ev.CTSignal(float(args.t0), float(args.h),
                           np.tile(np.array([float(v) for v in vals]), (n + 1, 1)))
    return ev.DTSignal([[1] + vals for _ in range(args.N)])


def _signal(args, continuous: bool, m: int):
    if args.input:
        return read_signal(args.input, continuous, args.t0, args.h)
    if args.const is not None:
        return _const_signal(args, continuous, m)
    raise UsageError("give an input signal with --input FILE or --const VALUES")


# -- emitters -----------------------------------------------------------------


def _jsonable(v):
    if isinstance(v, Fraction):
        return fmt_scalar(v)
    if isinstance(v, (np.floating, np.integer)):
        return v.item()
    if isinstance(v, (list, tuple)):
        return [_jsonable(a) for a in v]
    if isinstance(v, dict):
        return {str(k): _jsonable(a) for k, a in v.items()}
    return v


def emit_series(c: Series, fmt: str, out) -> None:
    if fmt == "json":
        out.write(series_to_json(c, indent=2) + "\n")
    elif fmt == "csv":
        w = csv.writer(out, lineterminator="\n")
        w.writerow(["word"] + [f"c{j + 1}" for j in range(c.ell)])
        for word, vec in c.items():
            w.writerow([format_word(word)] + [fmt_scalar(a) for a in vec])
    else:
        out.write(str(c) + "\n")


def emit_poly(p: fh.HopfPolynomial, fmt: str, out) -> None:
    if fmt == "json":
        out.write(json.dumps(_jsonable(fh.poly_to_dict(p)), indent=2) + "\n")
    elif fmt == "csv":
        w = csv.writer(out, lineterminator="\n")
        w.writerow(["coeff", "monomial"])
        for mono, v in p.terms.items():
            w.writerow([fmt_scalar(v), " ".join(str(g) for g in mono) or "1"])
    else:
        out.write(str(p) + "\n")


def emit_report(report: dict, fmt: str, out) -> None:
    if fmt == "text":
        for k, v in report.items():
            out.write(f"{k}: {_jsonable(v)}\n")
    elif fmt == "csv":
        w = csv.writer(out, lineterminator="\n")
        w.writerow(list(report))
        w.writerow([json.dumps(_jsonable(v)) if isinstance(v, (list, dict)) else _jsonable(v)
                    for v in report.values()])
    else:
        out.write(json.dumps(_jsonable(report), indent=2) + "\n")


def emit_trajectory(header: list, rows: list, fmt: str, out) -> None:
    if fmt == "json":
        out.write(json.dumps({"columns": header, "rows": _jsonable(rows)}, indent=2) + "\n")
        return
    w = csv.writer(out, lineterminator="\n")
    w.writerow(header)
    for r in rows:
        w.writerow([_jsonable(v) for v in r])


# -- commands -----------------------------------------------------------------


def _degree(args, required: bool = False) -> Optional[int]:
    if args.degree is None:
        if required:
            raise UsageError(f"{args.cmd} needs --degree")
        return None
    check_word_degree(args.degree)
    return args.degree


def _theta(args):
    if args.theta is None:
        raise UsageError("the quasi-shuffle needs --theta (+1 or -1)")
    return _scalar(args.theta)


def cmd_shuffle(args, out):
    D = _degree(args)
    emit_series(sh.shuffle_series(_series(args.a), _series(args.b), D), args.format or "text", out)


def cmd_qshuffle(args, out):
    D = _degree(args)
    emit_series(qs.qsh_series(_series(args.a), _series(args.b), _theta(args), D),
                args.format or "text", out)


def _pair(args, c_square: bool):
    raw_c, raw_d = load_series(_read_arg(args.c)), load_series(_read_arg(args.d))
    m = args.m or max(_infer_m(raw_c, raw_d), raw_d.ell)
    return _series(args.c, m if c_square else None), _series(args.d, m)


def cmd_compose(args, out):
    c, d = _pair(args, False)
    op = comp.mod_compose if args.cmd == "modcompose" else comp.compose
    emit_series(op(c, d, _degree(args)), args.format or "text", out)


def cmd_groupmul(args, out):
    c, d = _pair(args, True)
    res = comp.group_product(comp.GroupElement(c), comp.GroupElement(d), _degree(args))
    emit_series(res.body, args.format or "text", out)


def cmd_invert(args, out):
    raw = load_series(_read_arg(args.c))
    m = args.m or max(_infer_m(raw), raw.ell)
    c = _series(args.c, m)
    emit_series(comp.group_inverse(comp.GroupElement(c), _degree(args, True)).body,
                args.format or "text", out)


def cmd_feedback(args, out):
    c, d = _pair(args, True)
    emit_series(comp.feedback(c, d, _degree(args, True)), args.format or "text", out)


def _generator(args) -> fh.CoordinateFunction:
    w = parse_word(args.word)
    if not 1 <= args.out_index <= args.m:
        raise UsageError(f"--out-index must lie in 1..{args.m}")
    f = fh.a(args.out_index, w)
    if any(not a.is_base or a.index > args.m for a in w):
        raise ValueError(f"word {args.word!r} is not over x0..x{args.m}")
    check_hopf_degree(f.degree)
    return f


def cmd_antipode(args, out):
    f = _generator(args)
    emit_poly(fh.antipode(f, args.m, args.algo), args.format or "text", out)


def cmd_coproduct(args, out):
    f = _generator(args)
    t = fh.coproduct(f, args.m)
    if args.reduced:
        t = fh.reduced_coproduct(fh.HopfPolynomial.gen(f.k, f.word), args.m)
    fmt = args.format or "text"
    if fmt == "json":
        out.write(json.dumps(_jsonable(fh.tensor_to_dict(t)), indent=2) + "\n")
    elif fmt == "csv":
        w = csv.writer(out, lineterminator="\n")
        w.writerow(["coeff", "left", "right"])
        for (l, r), v in t.items():
            w.writerow([fmt_scalar(v), " ".join(map(str, l)) or "1", " ".join(map(str, r)) or "1"])
    else:
        out.write(fh.format_tensor(t) + "\n")


def _emit_rep(r: rat.LinearRepresentation, fmt: str, out) -> None:
    if fmt == "csv":
        raise UsageError("representations are emitted as JSON or text")
    out.write(rat.rep_to_json(r, indent=2 if fmt == "json" else None) + "\n")


def cmd_rep(args, out):
    fmt = args.format
    if args.rep_cmd == "coeff":
        r = _rep(args.rep)
        val = rat.rep_coefficient(r, parse_word(args.word))
        if (fmt or "text") == "text":
            out.write(" ".join(fmt_scalar(v) for v in val) + "\n")
        else:
            emit_report({"word": args.word, "coefficient": list(val)}, fmt, out)
    elif args.rep_cmd == "series":
        r = _rep(args.rep)
        emit_series(rat.rep_to_series(r, _degree(args, True)), fmt or "text", out)
    elif args.rep_cmd == "from-series":
        _emit_rep(rat.rep_from_polynomial(_series(args.series)), fmt or "json", out)
    elif args.rep_cmd == "shuffle":
        _emit_rep(rat.rep_shuffle(_rep(args.r1), _rep(args.r2)), fmt or "json", out)
    elif args.rep_cmd == "qshuffle":
        _emit_rep(rat.rep_qshuffle(_rep(args.r1), _rep(args.r2), _theta(args)), fmt or "json", out)
    elif args.rep_cmd == "realize":
        r = _rep(args.rep)
        sys_ = rat.state_affine_realize(r)
        if args.input or args.const is not None:
            m = max((i for x in r.alphabet for i in x), default=1) or 1
            u = _signal(args, False, m)
            ys = ev.dt_state_affine_simulate(sys_, u, u.horizon)
            header = ["N"] + [f"y{j + 1}" for j in range(r.ell)]
            emit_trajectory(header, [[N] + list(y) for N, y in enumerate(ys)], fmt or "csv", out)
            return
        report = {"dimension": sys_.n, "letters": [str(x) for x in sys_.alphabet],
                  "norm_sum": sys_.norm_sum}
        if args.symbolic:
            report["transition"] = str(sys_.symbolic_transition())
        emit_report(report, fmt or "json", out)
    return 0


def _is_rep_text(text: str) -> bool:
    s = text.strip()
    return s.startswith("{") and '"mu"' in s


def _check(report: dict, args) -> int:
    # an infinite tail bound certifies nothing, so the check fails
    bound = float(report.get("tail_bound", 0.0))
    report["certified"] = math.isfinite(bound)
    if not report["certified"]:
        report["tail_bound"] = None
    report["tolerance"] = args.tolerance
    report["ok"] = bool(report["certified"]
                        and float(report["max_abs_error"]) <= bound + args.tolerance)
    return 0 if report["ok"] else 1


def _letter_weight(r: rat.LinearRepresentation, sups: list):
    """q = sum_x ||mu_x|| sup|u_x|, so words of length k carry at most K q^k.

    Sharper than n M R when the channels differ in size, e.g. u_0 = 1.
    A bracket letter reads the product of its channels.
    """
    q = 0
    for x in r.alphabet:
        w = 1
        for i in x:
            w = w * sups[i]
        q = q + rat.norm1(r.mu[x]) * w
    return q


def cmd_eval_ct(args, out):
    text = _read_arg(args.source)
    fmt = args.format
    if _is_rep_text(text):
        r = rat.rep_from_json(text)
        m = max((i for x in r.alphabet for i in x), default=1) or 1
        u = _signal(args, True, m)
        L = _degree(args) or 8
        exact = rat.rep_to_series(r, L)
        approx = ev.ct_fliess_trajectory(exact, u, L)
        ref = ev.ct_bilinear_simulate(r, u)
        K, _ = rat.growth_bound(r)
        T = float(u.times[-1] - u.t0)
        q = _letter_weight(r, [1.0] + [float(np.max(np.abs(col))) for col in u.u.T])
        report = {"check": "series vs bilinear ODE", "max_abs_error": float(np.max(np.abs(approx - ref))),
                  "tail_bound": ev.ct_tail_bound(K, q, 1, 1.0, T, L),
                  "max_len": L, "points": len(u.times)}
        code = _check(report, args)
        emit_report(report, fmt or "json", out)
        return code
    c = load_series(text)
    m = args.m or _infer_m(c)
    u = _signal(args, True, m)
    if args.cascade or args.feedback:
        other = _series(args.cascade or args.feedback, m)
        L = _degree(args, True)
        if args.cascade:
            report = ev.verify_cascade_ct(c.truncate(L), other.truncate(L), u, L)
        else:
            report = ev.verify_feedback_ct(_series(args.source, m).truncate(L), other.truncate(L), u, L)
        code = _check(report, args)
        emit_report(report, fmt or "json", out)
        return code
    y = ev.ct_fliess_trajectory(c, u, args.degree)
    if (fmt or "json") == "csv":
        emit_trajectory(["t"] + [f"y{j + 1}" for j in range(c.ell)],
                        [[t] + list(row) for t, row in zip(u.times, y)], "csv", out)
    else:
        emit_report({"t_final": float(u.times[-1]), "y_final": list(y[-1]),
                     "points": len(u.times)}, fmt or "json", out)
    return 0


def cmd_eval_dt(args, out):
    text = _read_arg(args.source)
    fmt = args.format
    if _is_rep_text(text):
        r = rat.rep_from_json(text)
        m = max((i for x in r.alphabet for i in x), default=1) or 1
        u = _signal(args, False, m)
        N = u.horizon
        L = _degree(args) or 8
        exact = rat.state_affine_realize(r)
        y_exact = ev.dt_state_affine_simulate(exact, u, N)[N]
        y_series = ev.dt_fliess_eval(rat.rep_to_series(r, L), u, N, L)
        K, _ = rat.growth_bound(r)
        sups = [max(abs(row[i]) for row in u.values[:N]) for i in range(len(u.values[0]))]
        err = max(abs(a - b) for a, b in zip(y_exact, y_series))
        report = {"check": "series vs state-affine system", "y": list(y_exact),
                  "max_abs_error": float(err),
                  "tail_bound": float(ev.dt_tail_bound(K, _letter_weight(r, sups), 1, 1, N, L)),
                  "max_len": L, "N": N}
        code = _check(report, args)
        emit_report(report, fmt or "json", out)
        return code
    c = load_series(text)
    u = _signal(args, False, args.m or _infer_m(c))
    rows = [[N] + list(ev.dt_fliess_eval(c, u, N, args.degree)) for N in range(1, u.horizon + 1)]
    if (fmt or "json") == "csv":
        emit_trajectory(["N"] + [f"y{j + 1}" for j in range(c.ell)], rows, "csv", out)
    else:
        emit_report({"N": u.horizon, "y": rows[-1][1:]}, fmt or "json", out)
    return 0


def cmd_simulate(args, out):
    r = _rep(args.rep)
    m = max((i for x in r.alphabet for i in x), default=1) or 1
    header_y = [f"y{j + 1}" for j in range(r.ell)]
    if args.time == "ct":
        u = _signal(args, True, m)
        y = ev.ct_bilinear_simulate(r, u)
        emit_trajectory(["t"] + header_y, [[t] + list(row) for t, row in zip(u.times, y)],
                        args.format or "csv", out)
    else:
        u = _signal(args, False, m)
        ys = ev.dt_state_affine_simulate(rat.state_affine_realize(r), u, u.horizon)
        emit_trajectory(["N"] + header_y, [[N] + list(y) for N, y in enumerate(ys)],
                        args.format or "csv", out)
    return 0


def cmd_verify(args, out):
    names = list(SUITES) if args.suite == "all" else [args.suite]
    kw = {"seed": args.seed}
    if args.degree is not None:
        (check_hopf_degree if args.suite == "hopf" else check_word_degree)(args.degree)
        kw["degree"] = args.degree
    if args.m is not None:
        kw["m"] = args.m
    report, ok = {}, True
    for name in names:
        counts = SUITES[name](**kw)
        report[name] = {k: {"passed": p, "total": n} for k, (p, n) in counts.items()}
        ok &= all(p == n for p, n in counts.values())
    fmt = args.format or "text"
    if fmt == "text":
        for name, counts in report.items():
            for k, c in counts.items():
                tag = "PASS" if c["passed"] == c["total"] else "FAIL"
                out.write(f"{tag} {name}/{k}: {c['passed']}/{c['total']}\n")
    elif fmt == "csv":
        w = csv.writer(out, lineterminator="\n")
        w.writerow(["suite", "check", "passed", "total"])
        for name, counts in report.items():
            for k, c in counts.items():
                w.writerow([name, k, c["passed"], c["total"]])
    else:
        out.write(json.dumps({"ok": ok, "suites": report}, indent=2) + "\n")
    return 0 if ok else 1


def cmd_selftest(args, out):
    return 0 if acceptance.run_all(args.seed, echo=lambda s: out.write(s + "\n")) else 1


# -- parser -------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("text", "json", "csv"), default=None)
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--degree", type=int, default=None, help="truncation degree")
    common.add_argument("--m", type=int, default=None, help="number of inputs")
    common.add_argument("--theta", default=None, help="quasi-shuffle weight")
    common.add_argument("--tolerance", type=float, default=1e-6)

    sig = argparse.ArgumentParser(add_help=False)
    sig.add_argument("--input", help="signal CSV with header k,u0,u1,...")
    sig.add_argument("--const", help="constant input values u1,...,um")
    sig.add_argument("--t0", type=float, default=0.0)
    sig.add_argument("--h", type=float, default=None, help="CT grid step")
    sig.add_argument("--T", type=float, default=1.0, help="CT horizon for --const")
    sig.add_argument("--N", type=int, default=10, help="DT horizon for --const")

    p = argparse.ArgumentParser(prog="fliess", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="cmd", required=True)

    for name in ("shuffle", "qshuffle"):
        s = sub.add_parser(name, parents=[common])
        s.add_argument("a")
        s.add_argument("b")
    for name in ("compose", "modcompose", "groupmul", "feedback"):
        s = sub.add_parser(name, parents=[common])
        s.add_argument("c")
        s.add_argument("d")
    s = sub.add_parser("invert", parents=[common])
    s.add_argument("c")

    for name in ("antipode", "coproduct"):
        s = sub.add_parser(name, parents=[common])
        s.add_argument("--word", required=True)
        s.add_argument("--out-index", type=int, default=1)
        s.set_defaults(m=1)
        if name == "antipode":
            s.add_argument("--algo", choices=tuple(fh.ANTIPODES), default="cfree")
        else:
            s.add_argument("--reduced", action="store_true")

    rep = sub.add_parser("rep")
    rsub = rep.add_subparsers(dest="rep_cmd", required=True)
    s = rsub.add_parser("coeff", parents=[common])
    s.add_argument("rep")
    s.add_argument("--word", required=True)
    s = rsub.add_parser("series", parents=[common])
    s.add_argument("rep")
    s = rsub.add_parser("from-series", parents=[common])
    s.add_argument("series")
    for name in ("shuffle", "qshuffle"):
        s = rsub.add_parser(name, parents=[common])
        s.add_argument("r1")
        s.add_argument("r2")
    s = rsub.add_parser("realize", parents=[common, sig])
    s.add_argument("rep")
    s.add_argument("--symbolic", action="store_true")

    s = sub.add_parser("eval-ct", parents=[common, sig])
    s.add_argument("source", help="series or representation")
    s.add_argument("--cascade", help="check F_{c o d} against F_c[F_d[u]]")
    s.add_argument("--feedback", help="check F_{c@d} against the Picard closed loop")
    s = sub.add_parser("eval-dt", parents=[common, sig])
    s.add_argument("source", help="series or representation")
    s = sub.add_parser("simulate", parents=[common, sig])
    s.add_argument("rep")
    s.add_argument("--time", choices=("ct", "dt"), default="dt")

    s = sub.add_parser("verify", parents=[common])
    s.add_argument("suite", choices=tuple(SUITES) + ("all",))
    sub.add_parser("selftest", parents=[common])
    return p


COMMANDS = {
    "shuffle": cmd_shuffle, "qshuffle": cmd_qshuffle,
    "compose": cmd_compose, "modcompose": cmd_compose, "groupmul": cmd_groupmul,
    "invert": cmd_invert, "feedback": cmd_feedback,
    "antipode": cmd_antipode, "coproduct": cmd_coproduct, "rep": cmd_rep,
    "eval-ct": cmd_eval_ct, "eval-dt": cmd_eval_dt, "simulate": cmd_simulate,
    "verify": cmd_verify, "selftest": cmd_selftest,
}


def main(argv=None, out=None) -> int:
    out = out or sys.stdout
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        buf = io.StringIO()
        code = COMMANDS[args.cmd](args, buf) or 0
        out.write(buf.getvalue())
        return code
    except UsageError as exc:
        parser.print_usage(sys.stderr)
        print(f"fliess: error: {exc}", file=sys.stderr)
        return 2
    except DOMAIN_ERRORS as exc:
        print(f"fliess: error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
