"""Command-line front end: every computation as a subcommand emitting CSV/JSON.

Output is deterministic byte for byte at fixed flags: floats are always
formatted %.12e, JSON keys are sorted, CSV rows keep column order, and
nothing environment-dependent (timestamps, paths, machine info) is ever
written.  Re-parsing a JSON output and re-serializing it through
``to_json`` reproduces the bytes.

Exit codes: 0 success, 1 verification failure, 2 bad parameters, 3 solver
or numerics failure, 4 incomplete bifurcation scan.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys

import numpy as np

from . import bifurcation, closedform, radial_ode, verify
from .errors import NumericError, ParameterError, SolverError
from .numerics import make_grid
from .params import ProblemParams, c_lambda, critical_exponent, transform_coeffs

EXIT_OK = 0
EXIT_VERIFY_FAILED = 1
EXIT_BAD_PARAMS = 2
EXIT_SOLVER = 3
EXIT_INCOMPLETE = 4

FLOAT_FMT = "%.12e"


# ---------------------------------------------------------------- output

def _fmt(x) -> str:
    return FLOAT_FMT % float(x)


def to_json(obj, indent: int = 0, compact: bool = False) -> str:
    """Canonical JSON: sorted keys, %.12e floats, two-space indent.

    ``compact`` collapses the whole document onto one line (used for
    header-comment embedding); both forms re-serialize byte-identically.
    """
    pad = "" if compact else "  " * indent
    inner = "" if compact else "  " * (indent + 1)
    sep = ", " if compact else ",\n"
    opener, closer = ("", "") if compact else ("\n", f"\n{pad}")
    if obj is None:
        return "null"
    if isinstance(obj, (bool, np.bool_)):
        return "true" if obj else "false"
    if isinstance(obj, (int, np.integer)):
        return str(int(obj))
    if isinstance(obj, (float, np.floating)):
        return _fmt(obj)
    if isinstance(obj, str):
        return json.dumps(obj)
    if isinstance(obj, dict):
        if not obj:
            return "{}"
        parts = [
            f"{inner}{json.dumps(str(k))}: {to_json(v, indent + 1, compact)}"
            for k, v in sorted(obj.items())
        ]
        return "{" + opener + sep.join(parts) + closer + "}"
    if isinstance(obj, (list, tuple, np.ndarray)):
        seq = list(obj)
        if not seq:
            return "[]"
        parts = [f"{inner}{to_json(v, indent + 1, compact)}" for v in seq]
        return "[" + opener + sep.join(parts) + closer + "]"
    raise TypeError(f"cannot serialize {type(obj).__name__}")


def _csv_cell(x) -> str:
    if x is None:
        return ""
    if isinstance(x, (bool, np.bool_)):
        return "true" if x else "false"
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    if isinstance(x, (float, np.floating)):
        return _fmt(x)
    return str(x)


def to_csv(comments: list[str], header: list[str], rows: list[list]) -> str:
    buf = io.StringIO()
    for c in comments:
        buf.write(f"# {c}\n")
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    for row in rows:
        writer.writerow([_csv_cell(x) for x in row])
    return buf.getvalue()


def _emit(text: str, output: str | None) -> None:
    if output is None:
        sys.stdout.write(text)
    else:
        with open(output, "w") as fh:
            fh.write(text)


# ---------------------------------------------------------------- options

# per-command defaults; config file entries and flags are layered on top
_DEFAULTS: dict[str, dict] = {
    "params": {
        "N": None,
        "p": None,
        "critical": False,
        "lam": 0.0,
        "format": "json",
        "output": None,
    },
    "critical-spectrum": {"N": None, "j_max": 6, "format": "csv", "output": None},
    "radial": {
        "N": None,
        "p": None,
        "critical": False,
        "lam": 0.0,
        "grid": 32769,
        "tol": 1e-12,
        "format": "csv",
        "output": None,
    },
    "bifurcate": {
        "N": None,
        "p": None,
        "critical": False,
        "k_range": "1:3",
        "scan_n": 200,
        "mesh_n": 2000,
        "tol": 1e-7,
        "format": "json",
        "output": None,
    },
    "verify": {
        "N": None,
        "p": None,
        "critical": False,
        "lam": 0.0,
        "grid": 8192,
        "format": "json",
        "output": None,
    },
    "diagram": {
        "N": None,
        "p": None,
        "critical": False,
        "lambda_range": None,
        "mesh_n": 2000,
        "format": "csv",
        "output": None,
    },
}

_CONFIG_KEY_ALIASES = {"lambda": "lam", "lambda_lo": "lambda_lo"}


def _load_config(path: str, known: dict) -> dict:
    try:
        with open(path) as fh:
            raw = json.load(fh)
    except OSError as exc:
        raise ParameterError(f"cannot read config file: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise ParameterError(f"config file is not valid JSON: {exc}") from exc
    if not isinstance(raw, dict):
        raise ParameterError("config file must hold a flat JSON object")
    out = {}
    for key, value in raw.items():
        norm = str(key).lstrip("-").replace("-", "_")
        norm = _CONFIG_KEY_ALIASES.get(norm, norm)
        if norm not in known:
            raise ParameterError(f"unknown config key {key!r} for this subcommand")
        out[norm] = value
    return out


def _merge_options(ns: argparse.Namespace) -> dict:
    defaults = dict(_DEFAULTS[ns.cmd])
    provided = {
        k: v for k, v in vars(ns).items() if k not in ("cmd", "func", "config")
    }
    opts = dict(defaults)
    config_path = getattr(ns, "config", None)
    if config_path:
        opts.update(_load_config(config_path, defaults))
    opts.update(provided)
    if opts.get("format") not in ("csv", "json"):
        raise ParameterError(f"format must be csv or json, got {opts.get('format')!r}")
    return opts


def _require_N(opts) -> int:
    N = opts.get("N")
    if N is None:
        raise ParameterError("--N is required")
    if float(N) != int(float(N)):
        raise ParameterError(f"N must be an integer, got {N}")
    if int(float(N)) < 3:
        raise ParameterError(f"N must be an integer >= 3, got {N}")
    return int(float(N))


def _resolve_p(opts, N: int) -> float:
    critical = bool(opts.get("critical"))
    p = opts.get("p")
    if critical and p is not None:
        raise ParameterError("give either --p or --critical, not both")
    if critical:
        return critical_exponent(N)
    if p is None:
        raise ParameterError("specify the exponent with --p or select --critical")
    return float(p)


def _build_params(opts) -> ProblemParams:
    N = _require_N(opts)
    p = _resolve_p(opts, N)
    return ProblemParams(N=N, p=p, lam=float(opts.get("lam", 0.0)))


def _parse_k_range(text) -> list[int]:
    """Accept 'a:b', 'a..b' or a single 'k', all inclusive."""
    s = str(text).strip()
    for sep in ("..", ":"):
        if sep in s:
            lo_s, hi_s = s.split(sep, 1)
            break
    else:
        lo_s = hi_s = s
    try:
        lo, hi = int(lo_s), int(hi_s)
    except ValueError as exc:
        raise ParameterError(f"cannot parse k range {text!r}") from exc
    if lo < 1 or hi < lo:
        raise ParameterError(f"k range must satisfy 1 <= a <= b, got {text!r}")
    return list(range(lo, hi + 1))


def _parse_lambda_range(text) -> np.ndarray:
    """'lo:hi:n' -> n evenly spaced couplings from lo to hi inclusive."""
    if text is None:
        raise ParameterError("--lambda-range lo:hi:n is required")
    parts = str(text).split(":")
    if len(parts) != 3:
        raise ParameterError(f"lambda range must look like lo:hi:n, got {text!r}")
    try:
        lo, hi, n = float(parts[0]), float(parts[1]), int(parts[2])
    except ValueError as exc:
        raise ParameterError(f"cannot parse lambda range {text!r}") from exc
    if n < 1:
        raise ParameterError("lambda range needs at least one point")
    return np.linspace(lo, hi, n)


# ------------------------------------------------------------ subcommands

def cmd_params(ns: argparse.Namespace) -> int:
    opts = _merge_options(ns)
    P = _build_params(opts)
    C = transform_coeffs(P)
    obj = {"nu": C.nu, "a": C.a, "b": C.b, "M": C.M, "A": C.A}
    if P.is_critical:
        obj["C_lambda"] = c_lambda(P)
    if opts["format"] == "csv":
        header = sorted(obj)
        text = to_csv(["transform coefficients"], header, [[obj[k] for k in header]])
    else:
        text = to_json(obj) + "\n"
    _emit(text, opts.get("output"))
    return EXIT_OK


def cmd_critical_spectrum(ns: argparse.Namespace) -> int:
    opts = _merge_options(ns)
    N = _require_N(opts)
    j_max = int(opts["j_max"])
    if j_max < 0:
        raise ParameterError(f"--j-max must be nonnegative, got {j_max}")
    rows = []
    morse_below = 0
    for j in range(j_max + 1):
        mult = closedform.harmonic_multiplicity(N, j)
        note = "radial kernel Z exists for all lambda" if j == 0 else ""
        rows.append(
            [
                j,
                closedform.lambda_j(N, j),
                closedform.mu_j(N, j),
                mult,
                morse_below,
                morse_below + mult,
                note,
            ]
        )
        morse_below += mult
    header = ["j", "lambda_j", "mu_j", "mult", "morse_below", "morse_above", "note"]
    comments = [
        f"degeneracy couplings of the critical-profile linearization, N = {N}",
        "morse_below / morse_above: Morse index for couplings just above / "
        "just below lambda_j",
    ]
    if opts["format"] == "json":
        text = to_json([dict(zip(header, row)) for row in rows]) + "\n"
    else:
        text = to_csv(comments, header, rows)
    _emit(text, opts.get("output"))
    return EXIT_OK


def cmd_radial(ns: argparse.Namespace) -> int:
    opts = _merge_options(ns)
    P = _build_params(opts)
    n = int(opts["grid"])
    out_grid = make_grid(radial_ode.DEFAULT_OUT_RMIN, 1.0, n, "log")
    cfg = radial_ode.ShootingConfig(tol=float(opts["tol"]))
    v = radial_ode.solve_vlambda(P, cfg, out_grid)
    sol = radial_ode.reconstruct_u(v, P)
    slope, origin_C = radial_ode.origin_constant(sol)
    residual = verify.residual_ode(sol.u, P, form="subcritical", window=(1e-3, 1.0))
    energy_gap = verify.transformed_energy_gap(P)
    sidecar = {
        "alpha": sol.alpha,
        "origin_slope": slope,
        "origin_C": origin_C,
        "residual": residual,
        "energy_gap": energy_gap,
    }
    table = list(zip(sol.u.grid.nodes, sol.v.values, sol.u.values))
    if opts["format"] == "json":
        text = (
            to_json(
                {
                    "r": list(sol.u.grid.nodes),
                    "v": list(sol.v.values),
                    "u": list(sol.u.values),
                    "sidecar": sidecar,
                }
            )
            + "\n"
        )
        _emit(text, opts.get("output"))
        return EXIT_OK
    comments = [
        f"radial profile, N = {P.N}, p = {_fmt(P.p)}, lambda = {_fmt(P.lam)}",
        "columns: r (radius), v (transformed profile at r^(1/b)), u (profile)",
        "sidecar " + to_json(sidecar, compact=True),
    ]
    text = to_csv(comments, ["r", "v", "u"], [list(row) for row in table])
    output = opts.get("output")
    _emit(text, output)
    if output is not None:
        with open(output + ".json", "w") as fh:
            fh.write(to_json(sidecar) + "\n")
    return EXIT_OK


def cmd_bifurcate(ns: argparse.Namespace) -> int:
    opts = _merge_options(ns)
    N = _require_N(opts)
    p = _resolve_p(opts, N)
    ks = _parse_k_range(opts["k_range"])
    cache = bifurcation.LambdaCache()
    records = []
    missing = 0
    for k in ks:
        try:
            bp = bifurcation.find_lambda_k(
                N,
                p,
                k,
                scan_n=int(opts["scan_n"]),
                tol=float(opts["tol"]),
                mesh_n=int(opts["mesh_n"]),
                cache=cache,
            )
        except (SolverError, NumericError, ParameterError) as exc:
            records.append({"k": k, "error": str(exc)})
            missing += 1
            continue
        records.append(
            {
                "k": bp.k,
                "lambda_k": bp.lambda_k,
                "bracket": list(bp.bracket),
                "morse_before": bp.morse_before,
                "morse_after": bp.morse_after,
                "mult": bp.mult,
                "predicted_branches": bp.predicted_branches,
                "sign_changes": [list(sc) for sc in bp.sign_changes],
            }
        )
    if opts["format"] == "csv":
        header = [
            "k",
            "lambda_k",
            "bracket_lo",
            "bracket_hi",
            "morse_before",
            "morse_after",
            "mult",
            "predicted_branches",
            "error",
        ]
        rows = []
        for rec in records:
            if "error" in rec:
                rows.append([rec["k"], None, None, None, None, None, None, None, rec["error"]])
            else:
                rows.append(
                    [
                        rec["k"],
                        rec["lambda_k"],
                        rec["bracket"][0],
                        rec["bracket"][1],
                        rec["morse_before"],
                        rec["morse_after"],
                        rec["mult"],
                        rec["predicted_branches"],
                        "",
                    ]
                )
        text = to_csv(
            [f"bifurcation couplings, N = {N}, p = {_fmt(p)}"], header, rows
        )
    else:
        text = to_json(records) + "\n"
    _emit(text, opts.get("output"))
    return EXIT_OK if missing == 0 else EXIT_INCOMPLETE


def cmd_verify(ns: argparse.Namespace) -> int:
    opts = _merge_options(ns)
    P = _build_params(opts)
    report = verify.run_all(P, n=int(opts["grid"]))
    obj = {
        "params": {"N": P.N, "p": P.p, "lambda": P.lam},
        "passed": report.passed,
        "checks": [
            {
                "name": c.name,
                "value": c.value,
                "tolerance": c.tolerance,
                "passed": c.passed,
                "detail": c.detail,
            }
            for c in report.checks
        ],
    }
    if opts["format"] == "csv":
        header = ["name", "value", "tolerance", "passed", "detail"]
        rows = [[c.name, c.value, c.tolerance, c.passed, c.detail] for c in report.checks]
        text = to_csv(
            [
                f"verification, N = {P.N}, p = {_fmt(P.p)}, lambda = {_fmt(P.lam)}",
                f"passed = {'true' if report.passed else 'false'}",
            ],
            header,
            rows,
        )
    else:
        text = to_json(obj) + "\n"
    _emit(text, opts.get("output"))
    return EXIT_OK if report.passed else EXIT_VERIFY_FAILED


def cmd_diagram(ns: argparse.Namespace) -> int:
    opts = _merge_options(ns)
    N = _require_N(opts)
    critical = bool(opts.get("critical"))
    p_val = _resolve_p(opts, N)  # also rejects --p together with --critical
    p = None if critical else p_val
    lams = _parse_lambda_range(opts.get("lambda_range"))
    rows = bifurcation.sweep_diagram(N, p, lams, mesh_n=int(opts["mesh_n"]))
    header = ["lambda", "nu", "b", "M", "A", "Lambda", "L", "morse", "degenerate", "error"]
    comments = [
        f"coupling sweep, N = {N}, "
        + ("p = critical" if critical else f"p = {_fmt(p)}"),
        "columns: lambda (coupling), nu, b, M, A (transform coefficients), "
        "Lambda (weighted eigenvalue, subcritical only), L = 16 Lambda / b^2, "
        "morse (Morse index), degenerate (row sits at a degeneracy), error",
    ]
    if opts["format"] == "json":
        text = to_json(rows) + "\n"
    else:
        text = to_csv(comments, header, [[row[k] for k in header] for row in rows])
    _emit(text, opts.get("output"))
    return EXIT_OK


# ---------------------------------------------------------------- parser

def _add_common(sp: argparse.ArgumentParser, *names: str) -> None:
    S = argparse.SUPPRESS
    if "N" in names:
        sp.add_argument("--N", type=int, default=S, help="space dimension, integer >= 3")
    if "p" in names:
        sp.add_argument("--p", type=float, default=S, help="nonlinearity exponent")
        sp.add_argument(
            "--critical",
            action="store_true",
            default=S,
            help="use the critical exponent (N+2)/(N-2)",
        )
    if "lam" in names:
        sp.add_argument(
            "--lambda",
            dest="lam",
            type=float,
            default=S,
            help="coupling of the inverse-square potential",
        )
    sp.add_argument("--format", choices=("csv", "json"), default=S, help="output format")
    sp.add_argument("--output", default=S, help="write to this path instead of stdout")
    sp.add_argument(
        "--config",
        default=None,
        help="flat JSON file whose keys mirror the long flags; flags override it",
    )


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="hardylab",
        description="radial profiles, spectra and bifurcation couplings "
        "for the inverse-square (Hardy) semilinear equation",
    )
    sub = parser.add_subparsers(dest="cmd", required=True)
    S = argparse.SUPPRESS

    sp = sub.add_parser("params", help="transform coefficients for (N, p, lambda)")
    _add_common(sp, "N", "p", "lam")
    sp.set_defaults(func=cmd_params)

    sp = sub.add_parser(
        "critical-spectrum", help="degeneracy couplings lambda_j and Morse data"
    )
    _add_common(sp, "N")
    sp.add_argument("--j-max", dest="j_max", type=int, default=S, help="largest degree")
    sp.set_defaults(func=cmd_critical_spectrum)

    sp = sub.add_parser("radial", help="solve the subcritical radial profile")
    _add_common(sp, "N", "p", "lam")
    sp.add_argument("--grid", type=int, default=S, help="output nodes (log-graded)")
    sp.add_argument("--tol", type=float, default=S, help="integrator tolerance")
    sp.set_defaults(func=cmd_radial)

    sp = sub.add_parser("bifurcate", help="locate bifurcation couplings lambda_k")
    _add_common(sp, "N", "p")
    sp.add_argument(
        "--k-range", dest="k_range", default=S, help="degrees to scan, 'a:b' or 'a..b'"
    )
    sp.add_argument("--scan-n", dest="scan_n", type=int, default=S, help="scan points")
    sp.add_argument("--mesh-n", dest="mesh_n", type=int, default=S, help="eigen mesh size")
    sp.add_argument("--tol", type=float, default=S, help="bisection width target")
    sp.set_defaults(func=cmd_bifurcate)

    sp = sub.add_parser("verify", help="run the consistency battery")
    _add_common(sp, "N", "p", "lam")
    sp.add_argument("--grid", type=int, default=S, help="verification grid nodes")
    sp.set_defaults(func=cmd_verify)

    sp = sub.add_parser("diagram", help="tabulate a coupling sweep")
    _add_common(sp, "N", "p")
    sp.add_argument(
        "--lambda-range",
        dest="lambda_range",
        default=S,
        help="couplings as lo:hi:n (n evenly spaced, inclusive)",
    )
    sp.add_argument("--mesh-n", dest="mesh_n", type=int, default=S, help="eigen mesh size")
    sp.set_defaults(func=cmd_diagram)
    return parser


def _normalize_argv(argv: list[str]) -> list[str]:
    """Join '--lambda-range -0.6:-0.1:3' into one '=' token.

    A value starting with '-' would otherwise be taken for a flag; the
    '=' form always works, this makes the two-token form work too.
    """
    out = []
    i = 0
    while i < len(argv):
        tok = argv[i]
        if tok == "--lambda-range" and i + 1 < len(argv) and ":" in argv[i + 1]:
            out.append(f"{tok}={argv[i + 1]}")
            i += 2
            continue
        out.append(tok)
        i += 1
    return out


def main(argv=None) -> int:
    parser = build_parser()
    if argv is None:
        argv = sys.argv[1:]
    ns = parser.parse_args(_normalize_argv(list(argv)))
    try:
        return ns.func(ns)
    except ParameterError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_BAD_PARAMS
    except SolverError as exc:
        print(f"solver error: {exc}", file=sys.stderr)
        return EXIT_SOLVER
    except NumericError as exc:
        print(f"numerics error: {exc}", file=sys.stderr)
        return EXIT_SOLVER


if __name__ == "__main__":
    sys.exit(main())
