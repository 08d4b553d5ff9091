"""Command-line interface: ``qrmdistill <command> ...``.

Exit codes: 0 success, 1 verification failure, 2 usage error, 3 capacity error.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys
from pathlib import Path

import numpy as np

from . import distill, gates, oracle
from .code import build_code, z_distance
from .errors import CapacityError, ParameterError
from .field_poly import is_prime

MAX_D = 17
OUTPUT_DIR_ENV = "QRMDISTILL_OUTPUT_DIR"

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_CAPACITY = 0, 1, 2, 3


def _fmt(x: float) -> str:
    return repr(float(x))


def _check_d(d: int) -> int:
    if not is_prime(d) or d < 5:
        raise ParameterError(f"d={d} must be a prime >= 5")
    if d > MAX_D:
        raise CapacityError(f"d={d} exceeds the exactly computed range d <= {MAX_D}")
    return d


def _resolve_r(d: int, r: int | None) -> int:
    return gates.max_transversal_degree(d) if r is None else r


def _parse_grid(text: str) -> list[float]:
    """``a,b,c`` or ``lo:hi:num`` (log-spaced when ``lo > 0``) or ``lin:lo:hi:num``."""
    parts = text.split(":")
    if len(parts) == 1:
        return [float(v) for v in text.split(",")]
    if parts[0] == "lin":
        lo, hi, num = float(parts[1]), float(parts[2]), int(parts[3])
        return [float(v) for v in np.linspace(lo, hi, num)]
    lo, hi, num = float(parts[0]), float(parts[1]), int(parts[2])
    return [float(v) for v in np.geomspace(lo, hi, num)]


def _emit(text: str, output: str | None) -> None:
    if output is None or output == "-":
        sys.stdout.write(text)
        return
    path = Path(output)
    base = os.environ.get(OUTPUT_DIR_ENV)
    if base and not path.is_absolute():
        path = Path(base) / path
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(text, encoding="utf-8")


def _csv(header: list[str], rows: list[list]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    w.writerows(rows)
    return buf.getvalue()


def cmd_code_info(args) -> int:
    d = _check_d(args.d)
    code = build_code(d, _resolve_r(d, args.r))
    classes = gates.mu_equivalence_classes(d).classes
    info = {
        "d": d,
        "r": code.r,
        "n": code.n,
        "k": code.k,
        "D": code.distance,
        "gamma": distill.gamma(d) if code.r == gates.max_transversal_degree(d) else None,
        "x_generators": len(code.x_stabilizers),
        "z_generators": len(code.z_stabilizers),
        "transversal_M": code.transversal,
        "mu_classes": [list(c) for c in classes],
    }
    if args.json:
        _emit(json.dumps(info, sort_keys=True) + "\n", args.output)
        return EXIT_OK
    lines = [
        f"code: [[{code.n},{code.k},{code.distance}]]_{d}  (degree r={code.r})",
        f"n={code.n} k={code.k} D={code.distance}",
        f"gamma={info['gamma']:.6f}" if info["gamma"] is not None else "gamma: n/a (r below maximal degree)",
        f"stabilizer generators: {info['x_generators']} X-type, {info['z_generators']} Z-type",
        f"transversal M_mu: {'yes' if code.transversal else 'no (3r >= d-1)'}",
        "mu classes: " + " ".join("{" + ",".join(map(str, c)) + "}" for c in classes),
    ]
    _emit("\n".join(lines) + "\n", args.output)
    return EXIT_OK


def cmd_verify(args) -> int:
    d = _check_d(args.d)
    code = build_code(d, _resolve_r(d, args.r))
    mus = [args.mu] if args.mu is not None else list(range(1, d))
    lines = [f"verifying {code}"]
    ok = True

    reports = gates.transversality_check_all(code, mus)
    failed = [rep for rep in reports if not rep.holds]
    if failed:
        ok = False
        lines.append("transversality: FAIL")
        lines.extend("  " + str(rep) for rep in failed)
    else:
        lines.append(f"transversality: pass (mu={','.join(map(str, mus))}, {reports[0].checked} polynomials)")

    D = z_distance(code)
    ok &= D == code.r + 1
    lines.append(f"z-distance: {D} ({'pass' if D == code.r + 1 else 'FAIL'}, expected {code.r + 1})")

    classes = gates.mu_equivalence_classes(d).classes
    expected = 1 if d % 3 == 2 else 3
    ok &= len(classes) == expected
    lines.append("mu classes: " + " ".join("{" + ",".join(map(str, c)) + "}" for c in classes))

    if d == 5:
        checks = oracle.verify_clifford_identities(d)
        checks["stabilizers_fix_codewords"] = oracle.verify_stabilizers(code)
        if code.transversal:
            checks["transversal_M_numeric"] = all(
                oracle.verify_transversality_numeric(code, mu) for mu in mus
            )
        for name, passed in checks.items():
            ok &= passed
            lines.append(f"oracle {name}: {'pass' if passed else 'FAIL'}")

    lines.append("result: " + ("PASS" if ok else "FAIL"))
    _emit("\n".join(lines) + "\n", args.output)
    return EXIT_OK if ok else EXIT_FAIL


def cmd_distill(args) -> int:
    d = _check_d(args.d)
    code = build_code(d, _resolve_r(d, args.r))
    table = distill.accepted_enumerator(code, method=args.method, workers=args.threads)
    g = distill.gamma(d)
    rows = []
    for eps in _parse_grid(args.eps):
        res = distill.distill_map(table, eps)
        rows.append([d, code.r, code.distance, _fmt(g), _fmt(eps), _fmt(res.p_accept), _fmt(res.eps_out)])
    _emit(_csv(["d", "r", "D", "gamma", "epsilon", "p_accept", "eps_out"], rows), args.output)
    return EXIT_OK


def _thresholds(d_list, tol, method, threads):
    out = []
    for d in d_list:
        d = _check_d(d)
        code = build_code(d, gates.max_transversal_degree(d))
        table = distill.accepted_enumerator(code, method=method, workers=threads)
        out.append(distill.threshold(table, tol=tol))
    return out


def _monotonic_summary(results) -> list[str]:
    lines = []
    for residue in (1, 2):
        seq = [(res.d, res.eps_star) for res in results if res.d % 3 == residue and res.found]
        if len(seq) > 1:
            inc = all(a[1] < b[1] for a, b in zip(seq, seq[1:]))
            chain = "->".join(str(d) for d, _ in seq)
            lines.append(f"# d = {residue} mod 3 ({chain}): {'increasing' if inc else 'NOT increasing'}")
    return lines


def cmd_threshold(args) -> int:
    d_list = [int(v) for v in args.d.split(",")]
    results = _thresholds(d_list, args.tol, args.method, args.threads)
    rows = [
        [res.d, res.r, _fmt(res.eps_star) if res.found else "none", _fmt(args.tol)] for res in results
    ]
    text = _csv(["d", "r", "eps_star", "tol"], rows)
    text += "".join(line + "\n" for line in _monotonic_summary(results))
    _emit(text, args.output)
    return EXIT_OK


def cmd_figure(args) -> int:
    which = args.which
    if which in ("1a", "1b"):
        hi = 17 if which == "1a" else args.max_d
        points = [
            (d, (d - 2) // 3, (d + 1) // 3, distill.gamma(d)) for d in distill.primes_between(5, hi)
        ]
        rows = [
            [d, r, D, _fmt(g), d % 3, "exact" if d <= MAX_D else "formula-only"]
            for d, r, D, g in points
        ]
        text = _csv(["d", "r", "D", "gamma", "d_mod_3", "source"], rows)
        if args.svg:
            _svg_gamma(points, args.svg, log_x=which == "1b")
    elif which == "1c":
        results = _thresholds(distill.primes_between(5, MAX_D), args.tol, "auto", args.threads)
        rows = [[res.d, res.r, _fmt(res.eps_star) if res.found else "none", _fmt(args.tol)] for res in results]
        text = _csv(["d", "r", "eps_star", "tol"], rows)
        text += "# theoretical maximum thresholds from external bounds are not computed\n"
        text += "".join(line + "\n" for line in _monotonic_summary(results))
        if args.svg:
            _svg_thresholds(results, args.svg)
    else:
        raise ParameterError(f"unknown figure {which!r}")
    _emit(text, args.output)
    return EXIT_OK


def cmd_enumerator(args) -> int:
    d = _check_d(args.d)
    code = build_code(d, _resolve_r(d, args.r))
    table = distill.accepted_enumerator(code, method=args.method, workers=args.threads)
    _emit(table.to_json() + "\n", args.output)
    return EXIT_OK


def _svg_gamma(points, path: str, log_x: bool) -> None:
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    matplotlib.rcParams["svg.hashsalt"] = "qrmdistill"
    fig, ax = plt.subplots(figsize=(5, 3.5))
    for residue, marker in ((1, "o"), (2, "s")):
        sel = [(d, g) for d, _, _, g in points if d % 3 == residue]
        ax.plot([d for d, _ in sel], [g for _, g in sel], marker=marker, label=f"d = {residue} mod 3")
    if log_x:
        ax.set_xscale("log")
    ax.axhline(1.0, color="grey", lw=0.5)
    ax.set_xlabel("d")
    ax.set_ylabel("gamma")
    ax.legend()
    fig.tight_layout()
    fig.savefig(path, format="svg", metadata={"Date": None})
    plt.close(fig)


def _svg_thresholds(results, path: str) -> None:
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    matplotlib.rcParams["svg.hashsalt"] = "qrmdistill"
    fig, ax = plt.subplots(figsize=(5, 3.5))
    found = [res for res in results if res.found]
    ax.bar([str(res.d) for res in found], [res.eps_star for res in found])
    ax.set_xlabel("d")
    ax.set_ylabel("depolarizing threshold")
    fig.tight_layout()
    fig.savefig(path, format="svg", metadata={"Date": None})
    plt.close(fig)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="qrmdistill", description=__doc__.splitlines()[0])
    parser.add_argument("--threads", type=int, default=1, help="worker processes for enumeration")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, with_r=True):
        p.add_argument("--d", type=int, required=True, help="prime qudit dimension, 5..17")
        if with_r:
            p.add_argument("--r", type=int, default=None, help="code degree (default: floor((d-2)/3))")
        p.add_argument("--output", "-o", default=None, help=f"output file (relative to ${OUTPUT_DIR_ENV} if set)")

    p = sub.add_parser("code-info", help="code parameters")
    common(p)
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_code_info)

    p = sub.add_parser("verify", help="transversality, distance and Clifford-identity checks")
    common(p)
    p.add_argument("--mu", type=int, default=None, help="check a single mu (default: all)")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("distill", help="one-round output error over an epsilon grid")
    common(p)
    p.add_argument("--eps", default="1e-4:1e-3:10", help="'a,b,c', 'lo:hi:num' (log) or 'lin:lo:hi:num'")
    p.add_argument("--method", choices=["auto", "bruteforce", "charsum"], default="auto")
    p.set_defaults(func=cmd_distill)

    p = sub.add_parser("threshold", help="depolarizing thresholds at the maximal degree")
    p.add_argument("--d", default="5,7,11,13,17", help="comma-separated primes")
    p.add_argument("--tol", type=float, default=1e-6)
    p.add_argument("--method", choices=["auto", "bruteforce", "charsum"], default="auto")
    p.add_argument("--output", "-o", default=None)
    p.set_defaults(func=cmd_threshold)

    p = sub.add_parser("figure", help="data for the gamma and threshold figures")
    p.add_argument("which", choices=["1a", "1b", "1c"])
    p.add_argument("--max-d", type=int, default=10007, help="largest prime for 1b (formula only)")
    p.add_argument("--tol", type=float, default=1e-6)
    p.add_argument("--svg", default=None, help="also write an SVG chart (needs matplotlib)")
    p.add_argument("--output", "-o", default=None)
    p.set_defaults(func=cmd_figure)

    p = sub.add_parser("enumerator", help="export the accepted-error table as JSON")
    common(p)
    p.add_argument("--method", choices=["auto", "bruteforce", "charsum"], default="auto")
    p.set_defaults(func=cmd_enumerator)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except CapacityError as exc:
        print(f"capacity error: {exc}", file=sys.stderr)
        return EXIT_CAPACITY
    except ParameterError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
