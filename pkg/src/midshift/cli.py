"""Command-line interface.

Every command prints a report, either as an aligned table (default) or as
JSON (``--format structured``). Exit status: 0 success or pass, 1 certified
failure, 2 usage or domain error, 3 internal consistency failure.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from fractions import Fraction

from . import __version__
from .certify import (DEFAULT_KHYPO, DEFAULT_NMAX, InternalConsistencyError, certify_che,
                      certify_k_hyponormal, certify_mid, certify_n_contractive, diagram_check,
                      flatness_rigidity_check)
from .completion import (ResourceLimitError, agler_subshift_completion, che_three_weight_test,
                         gap_ratio, stampfli_completion, stampfli_norm_ok, trivial_completion)
from .scalar import DomainError, format_scalar
from .seq_core import DEFAULT_ORDER, DEFAULT_RANGE, forward_diff, log_diff_sign
from .shift_model import LimitUnavailable, is_flat, quotient_shift, subshift
from .spec_lang import ParseError, build_shift, parse_number, parse_shift_spec
from .transforms import (NonConverged, agler_preimage, agler_preimage_alpha0,
                         agler_preimage_alpha0_exact, aluthge_iter, aluthge_q, automatic_alpha0,
                         format_over_pi, inverse_aluthge)

SCHEMA_VERSION = 1
TABLE_TOL_CLOSED = 1e-10
TABLE_TOL_NUMERIC = 1e-6

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_INTERNAL = 0, 1, 2, 3


class UsageError(Exception):
    pass


# --------------------------------------------------------------------------
# value formatting

def jv(x):
    """JSON-friendly scalar: exact values as strings, floats as numbers."""
    if isinstance(x, bool) or x is None or isinstance(x, (str, int)):
        return x
    if isinstance(x, float):
        return x
    if isinstance(x, dict):
        return {str(k): jv(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [jv(v) for v in x]
    return format_scalar(x)


def _values(seq, count, exact):
    return [jv(seq(i)) if exact else float(seq(i)) for i in range(count)]


def _number(text: str):
    """Numeric argument: an exact decimal such as ``0.37`` or a constant expression."""
    try:
        return Fraction(text)
    except ValueError:
        return parse_number(text)


def _shift_arg(text: str):
    return build_shift(parse_shift_spec(text))


# --------------------------------------------------------------------------
# commands; each returns (result dict, exit status)

def cmd_moments(a):
    s = _shift_arg(a.spec)
    return {"subject": s.label, "moments": _values(s.moment, a.count, a.exact)}, EXIT_OK


def cmd_weights(a):
    s = _shift_arg(a.spec)
    return {"subject": s.label, "weights": _values(s.weight, a.count, a.exact)}, EXIT_OK


def _cert_status(cert):
    return EXIT_OK if cert.passed else EXIT_FAIL


def cmd_certify_mid(a):
    c = certify_mid(_shift_arg(a.spec), a.order, a.range, exact=a.exact)
    return c.to_dict(), _cert_status(c)


def cmd_certify_khypo(a):
    c = certify_k_hyponormal(_shift_arg(a.spec), a.khypo, a.nmax, exact=a.exact)
    return c.to_dict(), _cert_status(c)


def cmd_certify_contractive(a):
    import warnings
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        c = certify_n_contractive(_shift_arg(a.spec), a.order, a.range, exact=a.exact)
    return c.to_dict(), _cert_status(c)


def cmd_certify_che(a):
    c = certify_che(_shift_arg(a.spec), a.order, a.range, exact=a.exact)
    return c.to_dict(), _cert_status(c)


def cmd_diagram(a):
    r = diagram_check(_shift_arg(a.spec), a.order, a.range, exact=a.exact)
    return jv(r.to_dict()), EXIT_OK


def cmd_aluthge(a):
    s = _shift_arg(a.spec)
    if a.q is not None:
        t = aluthge_q(s, _number(a.q))
    else:
        t = aluthge_iter(s, a.iterate)
    return {"subject": t.label, "weights": _values(t.weight, a.count, a.exact)}, EXIT_OK


def cmd_aluthge_inv(a):
    target = _shift_arg(a.spec)
    alpha0 = _number(a.alpha0) if a.alpha0 is not None else None
    r = inverse_aluthge(target, alpha0)
    out = {"subject": r.shift.label, "alpha0": jv(r.alpha0), "alpha0_source": r.alpha0_source,
           "weights": _values(r.shift.weight, a.count, a.exact and r.alpha0_source == "user")}
    if r.limit_diagnostics is not None:
        d = r.limit_diagnostics
        out["limit_diagnostics"] = {"terms_used": d.terms_used, "extrapolation_order": d.extrapolation_order,
                                    "residual": d.residual, "target_limit": d.target_limit,
                                    "target_limit_source": d.target_limit_source}
    return out, EXIT_OK


def cmd_agler_preimage(a):
    k = a.k
    s = agler_preimage(k)
    r, over_pi = agler_preimage_alpha0_exact(k)
    return {"subject": s.label, "alpha0_exact": format_over_pi(r, over_pi),
            "alpha0": agler_preimage_alpha0(k),
            "weights": [math.sqrt(s.weight_squared_float(n)) for n in range(a.count)]}, EXIT_OK


def cmd_quotient(a):
    s = quotient_shift(_shift_arg(a.spec), a.spacing)
    return {"subject": s.label, "weights": _values(s.weight, a.count, a.exact)}, EXIT_OK


def cmd_subshift(a):
    s = subshift(_shift_arg(a.spec), a.p, a.k)
    return {"subject": s.label, "weights": _values(s.weight, a.count, a.exact)}, EXIT_OK


def cmd_complete2_trivial(a):
    s = trivial_completion(_number(a.a), _number(a.b))
    mid = certify_mid(s, a.order, a.range, exact=a.exact)
    return {"subject": s.label, "weights": _values(s.weight, a.count, a.exact),
            "flat": is_flat(s, a.range), "mid": mid.verdict}, EXIT_OK


def cmd_complete2_agler(a):
    g = agler_subshift_completion(_number(a.a), _number(a.b), a.eps)
    out = g.to_dict()
    out["flat"] = is_flat(g.shift, a.range)
    out["mid"] = certify_mid(g.shift, a.order, a.range, exact=a.exact).verdict
    out["weights"] = _values(g.shift.weight, a.count, a.exact)
    return out, EXIT_OK


def cmd_complete3_che(a):
    r = che_three_weight_test(*(_number(x) for x in (a.a0, a.a1, a.a2)), squared=a.squared)
    out = r.to_dict()
    out["conclusion"] = ("an MID completion exists" if r.sufficient
                         else "inconclusive (the test is only sufficient)")
    return out, EXIT_OK


def cmd_stampfli(a):
    s = stampfli_completion(*(_number(x) for x in (a.a, a.b, a.c)))
    gam = s.moment_sequence()
    sign, _ = log_diff_sign(gam, 3, 0)
    return {"subject": s.label, "phi0": jv(s.phi0), "phi1": jv(s.phi1),
            "moments": _values(s.moment, a.count, a.exact),
            "weights": _values(s.weight, a.count, a.exact),
            "T_gamma_3_0": jv(forward_diff(gam, 3, 0)), "LT_gamma_3_0_sign": sign,
            "flat": is_flat(s, a.range), "geometric": s.geometric,
            "norm_bound": jv(s.norm_bound) if s.geometric else None,
            "norm_bound_respected": stampfli_norm_ok(s, a.range) if s.geometric else None,
            "weight_limit": float(s.declared_limit)}, EXIT_OK


def cmd_flatness(a):
    r = flatness_rigidity_check(_shift_arg(a.spec), a.order, a.range, a.tol, exact=a.exact)
    return r.to_dict(), EXIT_FAIL if r.alarm else EXIT_OK


def cmd_gap_ratio(a):
    g = gap_ratio(a.m, a.n, a.delta)
    return {k: jv(v) for k, v in g._asdict().items()}, EXIT_OK


def _k_range(text: str) -> list[int]:
    try:
        if ".." in text:
            lo, hi = text.split("..")
            ks = list(range(int(lo), int(hi) + 1))
        else:
            ks = [int(text)]
    except ValueError:
        raise UsageError(f"--k expects K or LO..HI, got {text!r}") from None
    if not ks or min(ks) < 2:
        raise UsageError("--k values must be integers >= 2")
    return ks


def cmd_table_prop417(a):
    from .shift_model import agler
    rows = []
    ok = True
    for k in _k_range(a.k):
        r, over_pi = agler_preimage_alpha0_exact(k)
        exact_val = float(r) / math.pi if over_pi else float(r)
        closed = agler_preimage_alpha0(k)
        numeric, diag = automatic_alpha0(agler(k))
        e1 = abs(closed / exact_val - 1)
        e2 = abs(numeric / exact_val - 1)
        ok = ok and e1 <= TABLE_TOL_CLOSED and e2 <= TABLE_TOL_NUMERIC
        rows.append({"k": k, "alpha0": format_over_pi(r, over_pi), "closed_form": closed,
                     "numeric_limit": numeric, "rel_err_closed": e1, "rel_err_numeric": e2,
                     "terms_used": diag.terms_used})
    return {"rows": rows, "tolerances": {"closed_form": TABLE_TOL_CLOSED,
                                         "numeric_limit": TABLE_TOL_NUMERIC}}, EXIT_OK if ok else EXIT_FAIL


COMMANDS = {
    "moments": (cmd_moments, "moments γ_0, γ_1, ... of a shift"),
    "weights": (cmd_weights, "weights of a shift"),
    "certify-mid": (cmd_certify_mid, "certify moment infinite divisibility"),
    "certify-khypo": (cmd_certify_khypo, "certify k-hyponormality via Hankel matrices"),
    "certify-contractive": (cmd_certify_contractive, "certify n-contractivity"),
    "certify-che": (cmd_certify_che, "certify complete hyperexpansivity"),
    "diagram": (cmd_diagram, "the four sequence conditions and their implications"),
    "aluthge": (cmd_aluthge, "Aluthge transform (iterated, or asymmetric with --q)"),
    "aluthge-inv": (cmd_aluthge_inv, "inverse Aluthge transform"),
    "agler-preimage": (cmd_agler_preimage, "closed-form pre-image of agler(k)"),
    "quotient": (cmd_quotient, "quotient shift with weights α_n / α_{n+N}"),
    "subshift": (cmd_subshift, "p-subshift with weights α_{pn+k}"),
    "complete2-trivial": (cmd_complete2_trivial, "flat two-atomic completion of two squared weights"),
    "complete2-agler": (cmd_complete2_agler, "non-flat Agler-subshift completion of two squared weights"),
    "complete3-che": (cmd_complete3_che, "sufficient MID-completion test for three weights"),
    "stampfli": (cmd_stampfli, "Stampfli subnormal completion of three weights"),
    "flatness": (cmd_flatness, "flatness rigidity check for MID shifts"),
    "gap-ratio": (cmd_gap_ratio, "gap ratio of subshift(agler(m), Δ, n)"),
    "table-prop417": (cmd_table_prop417, "initial weights of the Agler pre-images"),
}

_SPEC_HELP = "shift expression, e.g. 'agler(3)', 'at(bergman)' or 'weights: sqrt((n+1)/(n+2))'"


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--order", type=int, default=DEFAULT_ORDER, help="order bound N")
    common.add_argument("--range", type=int, default=DEFAULT_RANGE, help="index bound K")
    common.add_argument("--khypo", type=int, default=DEFAULT_KHYPO, help="Hankel size parameter k")
    common.add_argument("--nmax", type=int, default=DEFAULT_NMAX, help="largest Hankel base index")
    common.add_argument("--eps", type=float, default=1e-3, help="approximation tolerance")
    mode = common.add_mutually_exclusive_group()
    mode.add_argument("--exact", dest="exact", action="store_true", default=True,
                      help="exact arithmetic where possible (default)")
    mode.add_argument("--float", dest="exact", action="store_false", help="float arithmetic")
    common.add_argument("--format", choices=("table", "structured"), default="table")
    common.add_argument("--count", type=int, default=10, help="number of terms to list")

    parser = argparse.ArgumentParser(prog="midshift", description="Weighted shift certification toolkit")
    parser.add_argument("--version", action="version", version=f"midshift {__version__}")
    sub = parser.add_subparsers(dest="command", required=True, metavar="COMMAND")

    def add(name, *positionals):
        p = sub.add_parser(name, parents=[common], help=COMMANDS[name][1])
        for pos, helptext in positionals:
            p.add_argument(pos, help=helptext)
        return p

    for name in ("moments", "weights", "certify-mid", "certify-khypo", "certify-contractive",
                 "certify-che", "diagram"):
        add(name, ("spec", _SPEC_HELP))
    p = add("aluthge", ("spec", _SPEC_HELP))
    p.add_argument("--q", help="asymmetric parameter q in [0, 1]")
    p.add_argument("--iterate", type=int, default=1, help="number of iterations")
    p = add("aluthge-inv", ("spec", _SPEC_HELP))
    p.add_argument("--alpha0", help="initial weight (default: chosen for convergence)")
    p = add("agler-preimage")
    p.add_argument("k", type=int)
    p = add("quotient", ("spec", _SPEC_HELP))
    p.add_argument("--spacing", type=int, default=1)
    p = add("subshift", ("spec", _SPEC_HELP))
    p.add_argument("--p", type=int, required=True)
    p.add_argument("--k", type=int, default=0)
    add("complete2-trivial", ("a", "first squared weight"), ("b", "second squared weight"))
    add("complete2-agler", ("a", "first squared weight"), ("b", "second squared weight"))
    p = add("complete3-che", ("a0", "weight"), ("a1", "weight"), ("a2", "weight"))
    p.add_argument("--squared", action="store_true", help="arguments are squared weights")
    add("stampfli", ("a", "weight"), ("b", "weight"), ("c", "weight"))
    p = add("flatness", ("spec", _SPEC_HELP))
    p.add_argument("--tol", type=float, default=1e-12)
    p = add("gap-ratio")
    for name in ("m", "n", "delta"):
        p.add_argument(name, type=int)
    p = add("table-prop417")
    p.add_argument("--k", default="2..14", help="K or LO..HI")
    return parser


# --------------------------------------------------------------------------
# rendering

def make_report(args, result, status) -> dict:
    return {
        "schema_version": SCHEMA_VERSION,
        "tool": "midshift",
        "version": __version__,
        "command": args.command,
        "input": {k: v for k, v in sorted(vars(args).items())
                  if k not in ("command", "format") and v is not None},
        "arithmetic_mode": "exact" if args.exact else "float",
        "status": status,
        "result": result,
    }


def _cell(v) -> str:
    if isinstance(v, float):
        return f"{v:.12g}"
    if v is None:
        return "-"
    return str(v)


def _render(obj, prefix="", lines=None) -> list[str]:
    lines = [] if lines is None else lines
    if isinstance(obj, dict):
        width = max((len(str(k)) for k in obj), default=0)
        for k, v in obj.items():
            key = f"{prefix}{k}"
            if isinstance(v, (dict, list)) and not v:
                lines.append(f"{key.ljust(width + len(prefix))}  -")
            elif isinstance(v, dict):
                lines.append(f"{key}:")
                _render(v, prefix + "  ", lines)
            elif isinstance(v, list) and v and all(isinstance(r, dict) for r in v):
                lines.append(f"{key}:")
                cols = list(v[0])
                cells = [[_cell(r.get(c)) for c in cols] for r in v]
                widths = [max(len(c), *(len(row[i]) for row in cells)) for i, c in enumerate(cols)]
                lines.append(prefix + "  " + "  ".join(c.ljust(w) for c, w in zip(cols, widths)))
                for row in cells:
                    lines.append(prefix + "  " + "  ".join(x.ljust(w) for x, w in zip(row, widths)))
            elif isinstance(v, list):
                lines.append(f"{key.ljust(width + len(prefix))}  " + ", ".join(_cell(x) for x in v))
            else:
                lines.append(f"{key.ljust(width + len(prefix))}  {_cell(v)}")
    return lines


def render(report: dict, fmt: str) -> str:
    if fmt == "structured":
        return json.dumps(report, sort_keys=True, indent=2, ensure_ascii=False) + "\n"
    head = {"command": report["command"], "mode": report["arithmetic_mode"],
            "status": report["status"], "version": report["version"]}
    return "\n".join(_render(head) + _render(report["result"])) + "\n"


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code == 0 else EXIT_USAGE
    func = COMMANDS[args.command][0]
    try:
        result, status = func(args)
    except ParseError as exc:
        print(f"midshift: parse error: {exc}", file=sys.stderr)
        if exc.text:
            print(exc.caret(), file=sys.stderr)
        return EXIT_USAGE
    except InternalConsistencyError as exc:
        print(f"midshift: internal consistency failure: {exc}", file=sys.stderr)
        return EXIT_INTERNAL
    except (UsageError, DomainError, ValueError, LimitUnavailable, ResourceLimitError,
            NonConverged, ZeroDivisionError) as exc:
        print(f"midshift: {exc}", file=sys.stderr)
        return EXIT_USAGE
    sys.stdout.write(render(make_report(args, jv(result), status), args.format))
    return status


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
