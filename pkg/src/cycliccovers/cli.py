"""Command-line front end.

Verbs: invariants, cover, orbifold, arrangement, multinet, mahler, construct.
Inputs are JSON files in the schemas of the library types; reports are JSON
(default) or plain-text tables, always carrying a provenance block (seed,
cover range, tolerance, characteristics, version).  Identical commands with
identical seeds produce byte-identical reports.  Exit codes: 0 success, 2
input or validation failure, 3 breach of an internal invariant.

With --figures DIR, report paths that carry cover scans or per-degree Betti
tables also render PNG figures into DIR.
"""

from __future__ import annotations

import argparse
import json
import math
import sys

from . import __version__
from ._numutil import is_prime
from .arrangements import (
    LineArrangement,
    Multinet,
    NotAThreeNet,
    aomoto_complex,
    beta_tau,
    check_assumption_and_certificate,
    deleted_b3_arrangement,
    deleted_monomial_arrangement,
    deleted_monomial_nu,
    DELETED_B3_NU,
    intersection_points,
    lift_multiplicity,
    pencil_arrangement,
    pencil_complex,
    verify_multinet,
)
from .covers import (
    EquivariantComplex,
    InternalCheckError,
    alexander_poly,
    alpha,
    cover_homology,
    limit_scan,
    predicted_invariants,
)
from .fox import OrbifoldData, build_orbifold_complex
from .laurent import (
    LaurentPolyZ,
    ToleranceNotReached,
    canonical_rep,
    is_cyclotomic_type,
    laurent_from_json,
    laurent_to_json,
    mahler_measure,
    strip_unit_roots_at_one,
)


class CliInputError(ValueError):
    """Invalid command-line input, reported with context and exit code 2."""


# -- option parsing ---------------------------------------------------------


def _parse_chars(text: str) -> tuple[int, ...]:
    out = []
    for piece in text.split(","):
        piece = piece.strip()
        if not piece:
            continue
        try:
            c = int(piece)
        except ValueError:
            raise CliInputError(f"characteristic {piece!r} is not an integer") from None
        if c != 0 and not is_prime(c):
            raise CliInputError(f"characteristic {c} is not prime")
        out.append(c)
    if not out:
        raise CliInputError("empty characteristics list")
    return tuple(sorted(set(out)))


def _parse_int_list(text: str, what: str) -> tuple[int, ...]:
    out = []
    for piece in text.split(","):
        piece = piece.strip()
        if not piece:
            continue
        try:
            out.append(int(piece))
        except ValueError:
            raise CliInputError(f"{what} entry {piece!r} is not an integer") from None
    if not out:
        raise CliInputError(f"empty {what} list")
    return tuple(out)


def _load_json(path: str):
    try:
        with open(path, encoding="utf-8") as fh:
            return json.load(fh)
    except json.JSONDecodeError as e:
        raise CliInputError(
            f"{path}: line {e.lineno} column {e.colno} (char {e.pos}): {e.msg}") from None
    except OSError as e:
        raise CliInputError(f"{path}: {e.strerror or e}") from None


def _build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--chars", default="0,2,3,5",
                        help="comma-separated coefficient characteristics (0 or primes)")
    common.add_argument("--max-cover", type=int, default=40, dest="max_cover",
                        help="largest cover order scanned")
    common.add_argument("--seed", type=int, default=0, help="seed for randomized checks")
    common.add_argument("--tol", type=float, default=1e-9,
                        help="certified tolerance for numeric Mahler values")
    common.add_argument("--format", choices=("json", "table"), default="json")
    common.add_argument("--output", default=None, help="write the report here instead of stdout")
    common.add_argument("--figures", default=None, metavar="DIR",
                        help="render PNG figures for scan/Betti tables into DIR")

    p = argparse.ArgumentParser(
        prog="cycliccovers",
        description="Exact Alexander polynomials, cover Betti limits, and "
                    "torsion growth of infinite cyclic covers.")
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = p.add_subparsers(dest="verb", required=True)

    sp = sub.add_parser("invariants", parents=[common],
                        help="Alexander polynomial, alpha, Mahler measure, cover scans")
    sp.add_argument("complex", help="equivariant complex JSON file")
    sp.add_argument("--degree", type=int, default=1)

    sp = sub.add_parser("cover", parents=[common],
                        help="homology of one finite cyclic cover")
    sp.add_argument("complex", help="equivariant complex JSON file")
    sp.add_argument("--n", type=int, required=True, help="cover order")

    sp = sub.add_parser("orbifold", parents=[common],
                        help="orbifold group: predicted vs computed invariants")
    sp.add_argument("--g", type=int, required=True, help="genus")
    sp.add_argument("--r", type=int, required=True, help="boundary components")
    sp.add_argument("--mu", default="", help="comma-separated cone orders")

    sp = sub.add_parser("arrangement", parents=[common],
                        help="cup complex Betti numbers and torsion of a line arrangement")
    sp.add_argument("arrangement", help="arrangement JSON file")
    sp.add_argument("--nu", required=True, help="comma-separated weights, one per line")

    sp = sub.add_parser("multinet", parents=[common],
                        help="verify a multinet and compute its certificate")
    sp.add_argument("multinet", help='JSON file {"arrangement": ..., "multinet": ...}')

    sp = sub.add_parser("mahler", parents=[common],
                        help="Mahler measure and unit-root data of one polynomial")
    sp.add_argument("poly", nargs="?", default=None, help="Laurent polynomial JSON file")
    sp.add_argument("--coeffs", default=None, help="inline coefficients c0,c1,...")
    sp.add_argument("--min-exp", type=int, default=0, dest="min_exp")

    sp = sub.add_parser("construct", parents=[common],
                        help="emit ready-made fixtures as JSON")
    sp.add_argument("what", choices=("pencil", "deleted-monomial", "deleted-b3", "lift"))
    sp.add_argument("--d", type=int, default=None, help="pencil: number of lines")
    sp.add_argument("--n", default=None, help="pencil: comma-separated weights")
    sp.add_argument("--mu", type=int, default=None, help="deleted-monomial: cone order")
    sp.add_argument("--chi", default=None, help="lift: comma-separated residues")
    sp.add_argument("--modulus", type=int, default=None, help="lift: cover order N")
    sp.add_argument("--p", type=int, default=None, help="lift: prime to keep out of m/N")
    return p


# -- dispatch ---------------------------------------------------------------


def _provenance(args) -> dict:
    return {
        "characteristics": list(_parse_chars(args.chars)),
        "n_max": args.max_cover,
        "seed": args.seed,
        "tolerance": args.tol,
        "verb": args.verb,
        "version": __version__,
    }


def _chark(c: int) -> str:
    return str(c)


def _scan_block(cx, degree: int, chars, n_max: int) -> dict:
    return {_chark(c): limit_scan(cx, degree, n_max, c).to_json() for c in chars}


def _run_invariants(args) -> dict:
    data = _load_json(args.complex)
    cx = EquivariantComplex.from_json(data)
    chars = _parse_chars(args.chars)
    delta = alexander_poly(cx, args.degree)
    results = {
        "alexander": laurent_to_json(delta),
        "alpha": {_chark(c): alpha(cx, args.degree, c) for c in chars},
        "mahler": mahler_measure(delta, tol=args.tol).to_json(),
        "scans": _scan_block(cx, args.degree, chars, args.max_cover),
    }
    return {
        "inputs": {"complex": data, "degree": args.degree},
        "results": results,
    }


def _run_cover(args) -> dict:
    data = _load_json(args.complex)
    cx = EquivariantComplex.from_json(data)
    chars = _parse_chars(args.chars)
    if args.n < 1:
        raise CliInputError("cover order must be positive")
    report = cover_homology(cx, args.n, fields=chars)
    degrees = []
    for d in report.degrees:
        degrees.append({
            "degree": d.degree,
            "betti": {_chark(c): b for c, b in sorted(d.betti.items())},
            "torsion_divisors": list(d.divisors),
            "torsion_order": d.torsion_order,
            "torsion_factors": {str(p): e for p, e in sorted(d.torsion_factors.items())},
        })
    return {
        "inputs": {"complex": data, "n": args.n},
        "results": {"n": report.n, "degrees": degrees},
    }


def _run_orbifold(args) -> dict:
    mu = _parse_int_list(args.mu, "mu") if args.mu.strip() else ()
    data = OrbifoldData(args.g, args.r, tuple(mu))
    chars = _parse_chars(args.chars)
    pres, nu, cx = build_orbifold_complex(data)
    delta = alexander_poly(cx, 1)
    mahler = mahler_measure(delta, tol=args.tol)
    predicted = {_chark(c): predicted_invariants(data, c) for c in chars}
    computed_alpha = {_chark(c): alpha(cx, 1, c) for c in chars}
    pred0 = predicted[_chark(chars[0])]
    checks = {
        "alpha_match": {k: predicted[k].alpha1 == computed_alpha[k] for k in predicted},
        "delta_divisor_divides": pred0.delta1_divisor.divides(delta),
        "mahler_match": (mahler.exp_exact == pred0.mahler1_exp
                         if mahler.exp_exact is not None
                         else abs(mahler.log_value - math.log(pred0.mahler1_exp)) <= args.tol),
    }
    results = {
        "presentation": pres.to_json(),
        "epimorphism": nu.to_json(),
        "predicted": {
            "alpha1": {k: p.alpha1 for k, p in predicted.items()},
            "mahler1_exp": pred0.mahler1_exp,
            "delta1_divisor": laurent_to_json(pred0.delta1_divisor),
        },
        "computed": {
            "alexander": laurent_to_json(delta),
            "alpha1": computed_alpha,
            "mahler": mahler.to_json(),
            "scans": _scan_block(cx, 1, chars, args.max_cover),
        },
        "checks": checks,
    }
    report = {
        "inputs": {"g": args.g, "r": args.r, "mu": list(mu)},
        "results": results,
    }
    ok = all(checks["alpha_match"].values()) and checks["delta_divisor_divides"] and checks["mahler_match"]
    if not ok:
        report["invariant_breach"] = True
    return report


def _run_arrangement(args) -> dict:
    data = _load_json(args.arrangement)
    arr = LineArrangement.from_json(data)
    nu = _parse_int_list(args.nu, "nu")
    chars = _parse_chars(args.chars)
    cx = aomoto_complex(arr, nu)
    bt = beta_tau(cx, chars)
    results = {
        "n_lines": arr.n_lines,
        "h1_rank": cx.h1_rank,
        "h2_rank": cx.h2_rank,
        "points": intersection_points(arr).to_json(),
        "beta0": {_chark(c): bt.beta0[c] for c in chars},
        "beta1": {_chark(c): bt.beta1[c] for c in chars},
        "tau1": bt.tau1,
        "tau1_divisors": list(bt.tau1_divisors),
    }
    return {
        "inputs": {"arrangement": data, "nu": list(nu)},
        "results": results,
    }


def _run_multinet(args) -> dict:
    data = _load_json(args.multinet)
    if not isinstance(data, dict) or "arrangement" not in data or "multinet" not in data:
        raise CliInputError(f"{args.multinet}: needs 'arrangement' and 'multinet' objects")
    arr = LineArrangement.from_json(data["arrangement"])
    mn = Multinet.from_json(arr, data["multinet"])
    valid, violated = verify_multinet(mn)
    results = {
        "k": mn.k,
        "kappa": mn.kappa,
        "valid": valid,
        "violated": list(violated),
        "certificate": None,
    }
    if valid:
        try:
            cert = check_assumption_and_certificate(mn)
        except NotAThreeNet as e:
            results["certificate_skipped"] = str(e)
        else:
            results["certificate"] = {
                "assumption_ok": cert.assumption_ok,
                "failed": list(cert.failed),
                "nu": list(cert.nu) if cert.nu is not None else None,
                "tau1": cert.tau1,
                "no_parallel_component": cert.no_parallel_component,
            }
    return {
        "inputs": data,
        "results": results,
    }


def _run_mahler(args) -> dict:
    if (args.poly is None) == (args.coeffs is None):
        raise CliInputError("give exactly one of: a polynomial JSON file, or --coeffs")
    if args.poly is not None:
        data = _load_json(args.poly)
        poly = laurent_from_json(data)
    else:
        poly = LaurentPolyZ(_parse_int_list(args.coeffs, "coeffs"), min_exp=args.min_exp)
    measure = mahler_measure(poly, tol=args.tol)
    canon = canonical_rep(poly)
    stripped, unit_mult = strip_unit_roots_at_one(canon)
    results = {
        "input": laurent_to_json(poly),
        "canonical": laurent_to_json(canon),
        "is_cyclotomic_type": is_cyclotomic_type(canon),
        "mahler": measure.to_json(),
        "at_one": {
            "stripped": laurent_to_json(stripped),
            "t_minus_1_multiplicity": unit_mult,
            "value": stripped.evaluate_at_one(),
        },
    }
    return {"inputs": {"poly": laurent_to_json(poly)}, "results": results}


def _run_construct(args) -> dict:
    if args.what == "pencil":
        if args.d is None or args.n is None:
            raise CliInputError("construct pencil needs --d and --n")
        n = _parse_int_list(args.n, "n")
        cx = pencil_complex(args.d, n)
        arr = pencil_arrangement(args.d)
        results = {
            "complex": cx.to_json(),
            "arrangement": arr.to_json(),
            "nu": list(n),
        }
        inputs = {"what": args.what, "d": args.d, "n": list(n)}
    elif args.what == "deleted-monomial":
        if args.mu is None:
            raise CliInputError("construct deleted-monomial needs --mu")
        arr, orb = deleted_monomial_arrangement(args.mu)
        results = {
            "arrangement": arr.to_json(),
            "orbifold_type": {"g": orb.g, "r": orb.r, "mu": list(orb.mu)},
            "nu": list(deleted_monomial_nu(args.mu)),
        }
        inputs = {"what": args.what, "mu": args.mu}
    elif args.what == "deleted-b3":
        arr = deleted_b3_arrangement()
        results = {"arrangement": arr.to_json(), "nu": list(DELETED_B3_NU)}
        inputs = {"what": args.what}
    else:
        if args.chi is None or args.modulus is None or args.p is None:
            raise CliInputError("construct lift needs --chi, --modulus, and --p")
        chi = _parse_int_list(args.chi, "chi")
        mv = lift_multiplicity(chi, args.modulus, args.p)
        results = {
            "multiplicities": mv.to_json(),
            "ratio": mv.total // args.modulus,
            "delta_images": list(mv.delta_images()),
        }
        inputs = {"what": args.what, "chi": list(chi), "N": args.modulus, "p": args.p}
    return {"inputs": inputs, "results": results}


_DISPATCH = {
    "invariants": _run_invariants,
    "cover": _run_cover,
    "orbifold": _run_orbifold,
    "arrangement": _run_arrangement,
    "multinet": _run_multinet,
    "mahler": _run_mahler,
    "construct": _run_construct,
}


# -- emission ---------------------------------------------------------------


def emit_json(report: dict) -> str:
    return json.dumps(report, sort_keys=True, indent=2) + "\n"


def _table_lines(value, key: str, indent: int, out: list):
    pad = "  " * indent
    if isinstance(value, dict):
        out.append(f"{pad}{key}:")
        for k in sorted(value, key=str):
            _table_lines(value[k], str(k), indent + 1, out)
    elif isinstance(value, list) and value and all(
            isinstance(r, list) and len(r) == 2 and all(isinstance(x, (int, float)) for x in r)
            for r in value):
        out.append(f"{pad}{key}:")
        for a, b in value:
            out.append(f"{pad}  {a:>6}  {b}")
    else:
        out.append(f"{pad}{key}: {value}")


def emit_table(report: dict) -> str:
    out: list[str] = []
    for key in sorted(report, key=str):
        _table_lines(report[key], key, 0, out)
    return "\n".join(out) + "\n"


def _render_figures(report: dict, outdir: str) -> list[str]:
    """PNG figures for scan tables and per-degree Betti tables, if present."""
    import os

    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    os.makedirs(outdir, exist_ok=True)
    written: list[str] = []
    results = report.get("results", {})
    scans = results.get("scans") or results.get("computed", {}).get("scans")
    if scans:
        for key in sorted(scans):
            scan = scans[key]
            fig, (ax1, ax2) = plt.subplots(1, 2, figsize=(9, 3.4))
            ns = [row[0] for row in scan["betti_by_n"]]
            ratios = [row[1] / row[0] for row in scan["betti_by_n"]]
            ax1.plot(ns, ratios, marker="o", markersize=2.5, linewidth=0.9)
            ax1.axhline(scan["alpha_exact"], linestyle="--", linewidth=0.9)
            ax1.set_xlabel("N")
            ax1.set_ylabel("betti(N) / N")
            ax1.set_title(f"degree {scan['degree']}, char {scan['characteristic']}")
            lns = [row[0] for row in scan["log_torsion_by_n"]]
            lrs = [row[1] for row in scan["log_torsion_by_n"]]
            ax2.plot(lns, lrs, marker="o", markersize=2.5, linewidth=0.9)
            ax2.axhline(scan["mahler_exact"]["log_value"], linestyle="--", linewidth=0.9)
            ax2.set_xlabel("N")
            ax2.set_ylabel("log |torsion(N)| / N")
            ax2.set_title("torsion growth")
            fig.tight_layout()
            name = f"scan_degree{scan['degree']}_char{key}.png"
            fig.savefig(os.path.join(outdir, name), dpi=110, metadata={"Software": None})
            plt.close(fig)
            written.append(name)
    degrees = results.get("degrees")
    if degrees:
        chars = sorted({c for d in degrees for c in d["betti"]})
        fig, ax = plt.subplots(figsize=(6, 3.4))
        width = 0.8 / max(1, len(chars))
        for k, c in enumerate(chars):
            xs = [d["degree"] + k * width for d in degrees]
            ys = [d["betti"].get(c, 0) for d in degrees]
            ax.bar(xs, ys, width=width, label=f"char {c}")
        ax.set_xlabel("degree")
        ax.set_ylabel("betti")
        ax.set_title(f"cover N = {results.get('n')}")
        ax.legend()
        fig.tight_layout()
        name = "cover_betti.png"
        fig.savefig(os.path.join(outdir, name), dpi=110, metadata={"Software": None})
        plt.close(fig)
        written.append(name)
    return written


# -- entry point -------------------------------------------------------------


def run(args) -> tuple[dict, int]:
    report = _DISPATCH[args.verb](args)
    report["provenance"] = _provenance(args)
    status = 3 if report.pop("invariant_breach", False) else 0
    if args.figures:
        report["figures"] = _render_figures(report, args.figures)
    return report, status


def main(argv=None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        report, status = run(args)
    except InternalCheckError as e:
        print(f"internal invariant breach: {e}", file=sys.stderr)
        return 3
    except (ValueError, IndexError, KeyError, ToleranceNotReached) as e:
        print(f"error: {e}", file=sys.stderr)
        return 2
    text = emit_json(report) if args.format == "json" else emit_table(report)
    if args.output:
        try:
            with open(args.output, "w", encoding="utf-8") as fh:
                fh.write(text)
        except OSError as e:
            print(f"error: {args.output}: {e.strerror or e}", file=sys.stderr)
            return 2
    else:
        sys.stdout.write(text)
    if status:
        print("internal invariant breach: predicted and computed values disagree",
              file=sys.stderr)
    return status


if __name__ == "__main__":
    sys.exit(main())
