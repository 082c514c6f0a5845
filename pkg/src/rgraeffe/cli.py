"""Command-line interface: solve, random, bench, separation, check-cnt.

Settings resolve as command-line flag, then ``GRAEFFE_<NAME>`` environment
variable, then built-in default.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import math
import os
import sys
import time
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path

import numpy as np

from . import __version__
from .core import DEFAULT_TOL, IterOptions, iterate
from .errors import GraeffeError, ParameterError
from .oracle import MAX_DEGREE, find_roots, sorted_log_moduli
from .poly import Poly, RenPoly
from .randpoly import (
    GENERATOR_ID,
    cnt_constructive_check,
    gen_kostlan,
    gen_kostlan_ren,
    separation,
)

__all__ = ["main", "parse_poly_file", "PolyFileError", "BENCH_COLUMNS", "SOLVE_COLUMNS"]

SOLVE_COLUMNS = ["cluster", "start", "size", "ln_modulus", "modulus"]
BENCH_COLUMNS = ["degree", "seed", "kind", "iterations", "wall_time_s", "residual",
                 "rel_sep", "oracle_err", "range_bound"]
#: Above this degree ``random`` writes log-polar coefficients.
LOGCOEFF_DEGREE = 256

EXIT_OK, EXIT_INPUT, EXIT_NOCONV = 0, 1, 2

_DEFAULTS = {
    "tol": DEFAULT_TOL,
    "bits": 53.0,
    "delta": 1e-3,
    "sigma": None,
    "max_iter": None,
    "seed": 0,
    "format": "csv",
}
_CASTS = {"tol": float, "bits": float, "delta": float, "sigma": float,
          "max_iter": int, "seed": int, "format": str}


class PolyFileError(GraeffeError, ValueError):
    """Malformed polynomial file; ``line`` is 1-based when known."""

    def __init__(self, path, msg, line=None):
        self.path, self.line = str(path), line
        where = f"{path}:{line}" if line is not None else str(path)
        super().__init__(f"{where}: {msg}")


# ---------------------------------------------------------------- file parsing

def _line_of(text: str, pos: int) -> int:
    return text.count("\n", 0, pos) + 1


def _array_lines(text: str, key: str) -> list[int]:
    """Line number of each element of the top-level JSON array ``key``."""
    dec = json.JSONDecoder()
    at = text.find(f'"{key}"')
    if at < 0:
        return []
    pos = text.find("[", at)
    lines = []
    pos += 1
    while pos < len(text):
        while pos < len(text) and text[pos] in " \t\r\n,":
            pos += 1
        if pos >= len(text) or text[pos] == "]":
            break
        try:
            _, end = dec.raw_decode(text, pos)
        except json.JSONDecodeError:
            break
        lines.append(_line_of(text, pos))
        pos = end
    return lines


def _entry_pair(e, allow_null_first=False):
    """``[re, im]``, ``[re]`` or a bare number as a float pair; None if malformed."""
    if isinstance(e, bool):
        return None
    if isinstance(e, (int, float)):
        return float(e), 0.0
    if isinstance(e, list) and 1 <= len(e) <= 2:
        vals = []
        for j, v in enumerate(e):
            if v is None and j == 0 and allow_null_first:
                vals.append(-math.inf)
            elif isinstance(v, (int, float)) and not isinstance(v, bool):
                vals.append(float(v))
            else:
                return None
        if len(vals) == 1:
            vals.append(0.0)
        return vals[0], vals[1]
    return None


def parse_poly_file(path) -> Poly | RenPoly:
    """Read a polynomial from a JSON file.

    The object carries ``"degree"`` and either ``"coeffs"`` (ascending; each
    entry ``[re, im]``, ``[re]`` or a number) or ``"logcoeffs"`` (each entry
    ``[mag, arg]`` at index 0, with ``null`` or ``-Infinity`` marking a zero
    coefficient).  Errors carry the offending line.
    """
    path = Path(path)
    try:
        text = path.read_text()
    except OSError as exc:
        raise PolyFileError(path, f"cannot read file ({exc.strerror})") from None
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as exc:
        raise PolyFileError(path, f"invalid JSON: {exc.msg}", exc.lineno) from None
    if not isinstance(obj, dict):
        raise PolyFileError(path, "top level must be an object", 1)
    has_c, has_l = "coeffs" in obj, "logcoeffs" in obj
    if has_c == has_l:
        raise PolyFileError(path, 'exactly one of "coeffs" or "logcoeffs" is required', 1)
    key = "coeffs" if has_c else "logcoeffs"
    arr = obj[key]
    key_line = _line_of(text, max(text.find(f'"{key}"'), 0))
    if not isinstance(arr, list) or len(arr) < 2:
        raise PolyFileError(path, f'"{key}" must be an array of at least two entries', key_line)
    lines = _array_lines(text, key)

    def line(i):
        return lines[i] if i < len(lines) else key_line

    if "degree" in obj:
        deg = obj["degree"]
        deg_line = _line_of(text, text.find('"degree"'))
        if not isinstance(deg, int) or isinstance(deg, bool) or deg != len(arr) - 1:
            raise PolyFileError(
                path, f'"degree" is {deg!r} but "{key}" has {len(arr)} entries', deg_line)

    pairs = []
    for i, e in enumerate(arr):
        p = _entry_pair(e, allow_null_first=not has_c)
        if p is None:
            raise PolyFileError(path, f"{key}[{i}] is not a number or [x, y] pair", line(i))
        a, b = p
        ok = (math.isfinite(a) and math.isfinite(b)) if has_c else (a != math.inf and not math.isnan(a) and math.isfinite(b))
        if not ok:
            raise PolyFileError(path, f"{key}[{i}] has a non-finite entry", line(i))
        pairs.append(p)

    last = len(arr) - 1
    if has_c:
        c = np.array([complex(a, b) for a, b in pairs])
        if c[-1] == 0:
            raise PolyFileError(path, "degenerate leading coefficient", line(last))
        return Poly(c)
    mags = np.array([p[0] for p in pairs])
    args = np.array([p[1] if p[0] != -math.inf else 0.0 for p in pairs])
    if mags[-1] == -math.inf:
        raise PolyFileError(path, "degenerate leading coefficient", line(last))
    k = obj.get("k", 0)
    if not isinstance(k, int) or isinstance(k, bool) or k < 0:
        raise PolyFileError(path, '"k" must be a non-negative integer', key_line)
    return RenPoly(mags, args, k)


def _json_float(x):
    return None if not math.isfinite(x) else float(x)


def poly_to_json(f, meta: dict | None = None) -> str:
    """Serialize so that :func:`parse_poly_file` reads it back unchanged."""
    obj = dict(meta or {})
    obj["degree"] = f.degree
    if isinstance(f, RenPoly):
        if f.k:
            obj["k"] = f.k
        obj["logcoeffs"] = [[_json_float(m), float(a)] for m, a in zip(f.mags, f.args)]
    elif f.is_real:
        obj["coeffs"] = [float(c.real) for c in f.coeffs]
    else:
        obj["coeffs"] = [[float(c.real), float(c.imag)] for c in f.coeffs]
    # one coefficient per line keeps error locations meaningful
    key = "logcoeffs" if isinstance(f, RenPoly) else "coeffs"
    head = {k: v for k, v in obj.items() if k != key}
    parts = [json.dumps(head)[:-1]]
    body = ",\n".join("  " + json.dumps(e) for e in obj[key])
    sep = ", " if head else ""
    return f'{parts[0]}{sep}"{key}": [\n{body}\n]}}\n'


# ---------------------------------------------------------------- settings

def _setting(args, name):
    val = getattr(args, name, None)
    if val is not None:
        return val
    env = os.environ.get("GRAEFFE_" + name.upper())
    if env not in (None, ""):
        try:
            return _CASTS[name](env)
        except ValueError:
            raise ParameterError(f"GRAEFFE_{name.upper()}={env!r} is not a valid {name}") from None
    return _DEFAULTS[name]


def _options(args) -> IterOptions:
    return IterOptions(
        tol=_setting(args, "tol"),
        bits=_setting(args, "bits"),
        delta=_setting(args, "delta"),
        sigma=_setting(args, "sigma"),
        k_max=_setting(args, "max_iter"),
        backend=getattr(args, "backend", None),
    )


def _fmt(x) -> str:
    if isinstance(x, float):
        return repr(x)
    return "" if x is None else str(x)


def _emit(args, text: str) -> None:
    out = getattr(args, "out", None)
    if out in (None, "-"):
        sys.stdout.write(text)
    else:
        Path(out).write_text(text)


def _csv_text(columns, rows) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(columns)
    for r in rows:
        w.writerow([_fmt(r.get(c)) for c in columns])
    return buf.getvalue()


def _err(msg: str) -> None:
    print(f"rgraeffe: error: {msg}", file=sys.stderr)


# ---------------------------------------------------------------- solve

def _cluster_rows(res):
    rows = []
    for n, c in enumerate(res.clusters.clusters):
        with np.errstate(over="ignore"):
            mod = float(np.exp(c.ln_modulus))
        rows.append({"cluster": n, "start": c.start, "size": c.size,
                     "ln_modulus": float(c.ln_modulus), "modulus": mod})
    return rows


def cmd_solve(args) -> int:
    f = parse_poly_file(args.input)
    res = iterate(f, _options(args))
    rows = _cluster_rows(res)
    if _setting(args, "format") == "json":
        doc = {
            "degree": res.degree,
            "converged": res.converged,
            "converged_by": res.converged_by,
            "iterations": res.iterations,
            "residual": _json_float(res.residual),
            "range_bound": res.range_bound,
            "sigma": res.clusters.sigma_used,
            "backend": res.backend,
            "clusters": [{k: (_json_float(v) if isinstance(v, float) else v) for k, v in r.items()}
                         for r in rows],
            "log_moduli": [_json_float(x) for x in res.log_moduli],
        }
        _emit(args, json.dumps(doc, indent=2) + "\n")
    else:
        _emit(args, _csv_text(SOLVE_COLUMNS, rows))
    if not res.converged:
        _err(f"not converged after {res.iterations} iterations (residual {res.residual:.3g})")
        return EXIT_NOCONV
    return EXIT_OK


# ---------------------------------------------------------------- random

def _random_poly(d, seed, kind):
    if d > LOGCOEFF_DEGREE:
        return gen_kostlan_ren(d, seed, kind)
    return gen_kostlan(d, seed, kind)


def cmd_random(args) -> int:
    out_dir = Path(args.out_dir or args.out or ".")
    seed0 = _setting(args, "seed")
    try:
        out_dir.mkdir(parents=True, exist_ok=True)
        for i in range(args.count):
            seed = seed0 + i
            f = _random_poly(args.degree, seed, args.kind)
            meta = {"generator": GENERATOR_ID, "kind": args.kind, "seed": seed}
            name = out_dir / f"kostlan_{args.kind}_d{args.degree}_s{seed}.json"
            name.write_text(poly_to_json(f, meta))
    except OSError as exc:
        _err(f"cannot write to {out_dir}: {exc.strerror}")
        return EXIT_INPUT
    return EXIT_OK


# ---------------------------------------------------------------- bench

def _oracle_err(solver_logm, roots) -> float:
    ref = sorted_log_moduli(roots)
    both = (solver_logm == -math.inf) & (ref == -math.inf)
    with np.errstate(invalid="ignore"):
        diff = np.abs(solver_logm - ref)
    diff[both] = 0.0
    return float(diff.max())


def _rel_sep_from_moduli(logm) -> float:
    with np.errstate(over="ignore"):
        st = separation(np.exp(logm))
    return st.rel_sep


def bench_instance(d: int, seed: int, kind: str, opts: IterOptions, validate: bool) -> dict:
    """Solve one Kostlan instance and return its record; timing covers the solve only."""
    rec = {"degree": d, "seed": seed, "kind": kind, "worker": os.getpid()}
    try:
        f = gen_kostlan_ren(d, seed, kind)
        t0 = time.perf_counter()
        res = iterate(f, opts)
        wall = max(time.perf_counter() - t0, 1e-9)
        rec.update(iterations=res.iterations, wall_time_s=wall, residual=res.residual,
                   rel_sep=_rel_sep_from_moduli(res.log_moduli), range_bound=res.range_bound,
                   converged=res.converged, oracle_err=None)
        if validate and d <= MAX_DEGREE:
            rec["oracle_err"] = _oracle_err(res.log_moduli, find_roots(gen_kostlan(d, seed, kind)))
    except (GraeffeError, ArithmeticError, ValueError) as exc:
        rec["error"] = f"{type(exc).__name__}: {exc}"
    return rec


def _star(job):
    return bench_instance(*job)


def _loglog_slope(rows):
    by_d: dict[int, list[float]] = {}
    for r in rows:
        if r.get("wall_time_s") is not None:
            by_d.setdefault(r["degree"], []).append(r["wall_time_s"])
    stats = {d: (float(np.mean(t)), float(np.median(t))) for d, t in sorted(by_d.items())}
    slope = math.nan
    if len(stats) >= 2:
        ds = np.array(list(stats))
        med = np.array([m for _, m in stats.values()])
        slope = float(np.polyfit(np.log(ds), np.log(med), 1)[0])
    return stats, slope


def _parse_degrees(s: str) -> list[int]:
    out = []
    for part in s.split(","):
        part = part.strip()
        if ":" in part:
            lo, hi, step = (int(x) for x in part.split(":"))
            out.extend(range(lo, hi + 1, step))
        elif part:
            out.append(int(part))
    if not out or min(out) < 1:
        raise argparse.ArgumentTypeError("degrees must be positive integers")
    return out


def cmd_bench(args) -> int:
    opts = _options(args)
    seed0 = _setting(args, "seed")
    jobs = [(d, seed0 + r, args.kind, opts, args.validate)
            for d in args.degrees for r in range(args.reps)]
    if args.workers and args.workers > 1:
        with ProcessPoolExecutor(max_workers=args.workers) as pool:
            rows = list(pool.map(_star, jobs))
    else:
        rows = [_star(j) for j in jobs]
    for r in rows:
        if "error" in r:
            _err(f"degree {r['degree']} seed {r['seed']}: {r['error']}")

    if _setting(args, "format") == "json":
        clean = [{k: (_json_float(v) if isinstance(v, float) else v) for k, v in r.items()} for r in rows]
        _emit(args, json.dumps(clean, indent=2) + "\n")
    else:
        _emit(args, _csv_text(BENCH_COLUMNS, rows))

    stats, slope = _loglog_slope(rows)
    print("degree,avg_time_s,median_time_s", file=sys.stderr)
    for d, (avg, med) in stats.items():
        print(f"{d},{avg:.6g},{med:.6g}", file=sys.stderr)
    print(f"log-log slope of median time vs degree: {slope:.3f}", file=sys.stderr)
    return EXIT_OK


# ---------------------------------------------------------------- separation / cnt

def _instances(args):
    """Yield ``(label, Poly | RenPoly)`` from input files or generated Kostlan polynomials."""
    if args.inputs:
        for p in args.inputs:
            yield str(p), parse_poly_file(p)
        return
    if args.degree is None:
        raise ParameterError("give input files or --degree")
    seed0 = _setting(args, "seed")
    for i in range(args.count):
        yield str(seed0 + i), _random_poly(args.degree, seed0 + i, args.kind)


def cmd_separation(args) -> int:
    opts = _options(args)
    rows = []
    for label, f in _instances(args):
        if isinstance(f, Poly) and f.degree <= MAX_DEGREE:
            roots, source = find_roots(f).roots, "oracle"
        else:
            with np.errstate(over="ignore"):
                roots, source = np.exp(iterate(f, opts).log_moduli), "solver"
        st = separation(roots)
        rows.append({"instance": label, "degree": f.degree, "source": source,
                     "rho": st.rho, "rel_sep": st.rel_sep, "equal_moduli": int(st.equal_moduli)})
    cols = ["instance", "degree", "source", "rho", "rel_sep", "equal_moduli"]
    if _setting(args, "format") == "json":
        _emit(args, json.dumps(rows, indent=2) + "\n")
    else:
        _emit(args, _csv_text(cols, rows))
    return EXIT_OK


def cmd_check_cnt(args) -> int:
    rows = []
    failures = 0
    for label, f in _instances(args):
        if isinstance(f, RenPoly):
            f = f.to_poly()
        chk = cnt_constructive_check(f, find_roots(f).roots)
        failures += not chk.ok
        rows.append({"instance": label, "degree": f.degree, "rho": chk.rho, "lhs": chk.lhs,
                     "rhs": chk.rhs, "reconstruction": chk.reconstruction, "ok": int(chk.ok)})
    cols = ["instance", "degree", "rho", "lhs", "rhs", "reconstruction", "ok"]
    if _setting(args, "format") == "json":
        _emit(args, json.dumps(rows, indent=2) + "\n")
    else:
        _emit(args, _csv_text(cols, rows))
    if failures:
        _err(f"{failures} of {len(rows)} instances violate lhs <= rho*sqrt(d)")
        return EXIT_NOCONV
    return EXIT_OK


# ---------------------------------------------------------------- parser

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    g = common.add_argument_group("solver settings (env GRAEFFE_<NAME> if unset)")
    g.add_argument("--tol", type=float, help="convergence tolerance on magnitudes (default 2^-46)")
    g.add_argument("--bits", type=float, help="target precision b for the iteration cap (default 53)")
    g.add_argument("--delta", type=float, help="failure probability for the iteration cap (default 1e-3)")
    g.add_argument("--sigma", type=float, help="cluster threshold in ln-modulus units")
    g.add_argument("--max-iter", dest="max_iter", type=int, help="explicit iteration cap")
    g.add_argument("--seed", type=int, help="base seed (default 0)")
    g.add_argument("--format", choices=["csv", "json"], help="output format (default csv)")
    g.add_argument("--out", help="output file (default stdout)")
    g.add_argument("--backend", choices=["cython", "python"], help="Graeffe kernel backend")

    p = argparse.ArgumentParser(prog="rgraeffe", description="Root moduli by renormalized Graeffe iteration.")
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("solve", parents=[common], help="moduli and clusters of one polynomial")
    s.add_argument("input", help="JSON polynomial file")
    s.set_defaults(func=cmd_solve)

    r = sub.add_parser("random", parents=[common], help="write Kostlan polynomial files")
    r.add_argument("--degree", type=int, required=True, help="polynomial degree")
    r.add_argument("--count", type=int, default=10, help="number of files (seeds seed..seed+count-1)")
    r.add_argument("--kind", choices=["real", "complex"], default="complex",
                   help="coefficient field (default complex)")
    r.add_argument("--out-dir", dest="out_dir", help="target directory (or --out)")
    r.set_defaults(func=cmd_random)

    b = sub.add_parser("bench", parents=[common], help="timing sweep over degrees")
    b.add_argument("--degrees", type=_parse_degrees, default=_parse_degrees("100:1000:100"),
                   help="comma list and/or lo:hi:step ranges (default 100:1000:100)")
    b.add_argument("--reps", type=int, default=10, help="instances per degree (seeds seed..seed+reps-1)")
    b.add_argument("--kind", choices=["real", "complex"], default="complex",
                   help="coefficient field (default complex)")
    b.add_argument("--validate", action="store_true", help="fill oracle_err for degree <= 512")
    b.add_argument("--workers", type=int, default=1, help="process pool size")
    b.set_defaults(func=cmd_bench)

    for name, func, text in [("separation", cmd_separation, "root modulus separation statistics"),
                             ("check-cnt", cmd_check_cnt, "constructive condition-number check")]:
        q = sub.add_parser(name, parents=[common], help=text)
        q.add_argument("inputs", nargs="*", help="JSON polynomial files (else generate)")
        q.add_argument("--degree", type=int, help="generate Kostlan inputs of this degree")
        q.add_argument("--count", type=int, default=10, help="number of generated inputs")
        q.add_argument("--kind", choices=["real", "complex"], default="complex",
                       help="coefficient field (default complex)")
        q.set_defaults(func=func)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (GraeffeError, OverflowError) as exc:
        _err(str(exc))
        return EXIT_INPUT
    except OSError as exc:
        _err(f"{exc.filename or ''}: {exc.strerror}")
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
