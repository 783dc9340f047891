"""Command-line front end.  Every command writes one deterministic, version-stamped report."""
from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from fractions import Fraction
from pathlib import Path
from typing import Any, Callable

import numpy as np

from . import __version__

EXIT_OK, EXIT_PARSE, EXIT_BOUNDS, EXIT_FAILED = 0, 2, 3, 4


class VerificationFailed(Exception):
    pass


# -- serialization ------------------------------------------------------------

def jsonable(x: Any) -> Any:
    from .cyclo import CycloValue
    from .epoly import EPoly
    from .monodromy import MonClass
    from .series import MotSeries

    if isinstance(x, bool) or x is None or isinstance(x, (int, str)):
        return x
    if isinstance(x, float):
        return x if x == x and abs(x) != float("inf") else str(x)
    if isinstance(x, Fraction):
        return str(x)
    if isinstance(x, (np.integer,)):
        return int(x)
    if isinstance(x, CycloValue):
        return str(x.to_rational()) if x.is_rational() else {"p": x.p, "coords": [str(c) for c in x.to_json()]}
    if isinstance(x, EPoly):
        return str(x)
    if isinstance(x, MonClass):
        return {str(a): str(e) for a, e in x.items()}
    if isinstance(x, MotSeries):
        return [[list(e), jsonable(c)] for e, c in x.items()]
    if isinstance(x, dict):
        return {str(k): jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [jsonable(v) for v in x]
    return str(x)


def _rows_csv(rows: list[list[Any]]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    for r in rows:
        w.writerow([jsonable(c) if not isinstance(jsonable(c), (list, dict)) else json.dumps(jsonable(c), sort_keys=True)
                    for c in r])
    return buf.getvalue()


# -- helpers --------------------------------------------------------------------

def _variety(args, scen) -> dict:
    if "variety" in scen:
        return scen["variety"]
    kind = args.variety
    if kind == "elliptic":
        return {"kind": "elliptic", "q": args.q, "a": args.a}
    if kind in ("affine", "projective"):
        return {"kind": kind, "n": args.n}
    if kind == "curve":
        raise ValueError("curve varieties need a scenario with genus, q and weil")
    return {"kind": kind}


def _family(args, scen, base=None):
    from .epoly import EPoly
    from .euler import LocalFactorFamily, geometric_family, linear_family

    if "family" in scen:
        return LocalFactorFamily.from_json(scen["family"])
    base = base or {"kind": args.base, "n": 1}
    if args.factor == "geometric":
        return geometric_family(base, args.prec)
    if args.factor == "linear":
        return linear_family(base, 1, 1)
    if args.factor == "quadratic":
        return linear_family(base, EPoly.L(), 2)
    if args.factor == "inverse":
        return linear_family(base, -1, 1)
    raise ValueError(f"unknown factor {args.factor!r}")


def _coeff_list(s):
    return [s.coefficient(i) for i in range(s.bounds[0] + 1)]


# -- commands --------------------------------------------------------------------

def cmd_zeta(args, scen):
    from .lambda_ring import counting_zeta, kapranov_zeta, sympow_count_by_census, weil_rational_zeta
    from .varieties import CountAvatar, brute_force_count, hd_measure

    X = _variety(args, scen)
    q = int(X.get("q", args.q))
    av = CountAvatar(X, q)
    prec = args.prec
    counts = av.counts(prec)
    Z = counting_zeta(counts, prec)
    coeffs = _coeff_list(Z)
    census = av.census(prec)
    knap = [sympow_count_by_census(census, n) for n in range(prec + 1)]
    rep: dict[str, Any] = {"variety": X, "q": q, "counts": counts, "census": census[1:],
                           "zeta": coeffs, "census_knapsack": knap}
    ok = knap == coeffs
    if X["kind"] in ("elliptic", "curve"):
        weil = [1, int(X["a"]), q] if X["kind"] == "elliptic" else list(X["weil"])
        rat = _coeff_list(weil_rational_zeta(weil, q, prec))
        rep["weil_numerator"] = weil
        rep["rational_form"] = rat
        rep["P_at_inverse_q"] = sum(Fraction(c, q ** i) for i, c in enumerate(weil))
        rep["count_over_q"] = Fraction(counts[0], q) if X["kind"] == "elliptic" else None
        ok &= rat == coeffs
        if X["kind"] == "elliptic":
            ok &= rep["P_at_inverse_q"] == rep["count_over_q"]
    if args.brute:
        brute = [brute_force_count(X, q, m) for m in range(1, prec + 1)]
        rep["brute_counts"] = brute
        ok &= brute == counts
    try:
        rep["E_polynomial_zeta"] = _coeff_list(kapranov_zeta(hd_measure(X), prec))
    except ValueError:
        pass
    return rep, ok


def cmd_sympow(args, scen):
    from .lambda_ring import kapranov_zeta, sympow
    from .varieties import CountAvatar, hd_measure

    X = _variety(args, scen)
    rep: dict[str, Any] = {"variety": X, "n": args.n_power, "E": sympow(hd_measure(X), args.n_power)}
    if args.q:
        Z = kapranov_zeta(CountAvatar(X, int(X.get("q", args.q))), args.n_power)
        rep["count"] = Z.coefficient(args.n_power)
    return rep, True


def cmd_eulerprod(args, scen):
    from .euler import euler_product

    F = _family(args, scen)
    q = args.q if args.avatar == "count" else None
    P = euler_product(F, args.prec, q)
    return {"family": F.to_json(), "avatar": args.avatar, "q": q, "product": P}, True


def cmd_oracle(args, scen):
    from .euler import config_oracle, euler_product

    F = _family(args, scen)
    P = euler_product(F, args.prec, args.q)
    rows = []
    ok = True
    for e in P.box():
        o = config_oracle(F, args.q, e)
        rows.append({"n": list(e), "product": P.coefficient(e), "oracle": o})
        ok &= o == P.coefficient(e)
    return {"family": F.to_json(), "q": args.q, "rows": rows}, ok


def cmd_mult_check(args, scen):
    from .euler import mult_check, random_family

    rng = np.random.default_rng(args.seed)
    base = scen.get("base", {"kind": args.base, "n": 1})
    results = []
    for i in range(args.trials):
        F = random_family(rng, base, args.prec)
        G = random_family(rng, base, args.prec)
        e_ok = mult_check(F, G, args.prec)
        c_ok = mult_check(F, G, args.prec, args.q)
        results.append({"trial": i, "F": F.to_json()["coeffs"], "G": G.to_json()["coeffs"],
                        "E": e_ok, "count": c_ok})
    ok = all(r["E"] and r["count"] for r in results)
    return {"seed": args.seed, "q": args.q, "prec": args.prec, "results": results}, ok


def cmd_double_check(args, scen):
    from .euler import double_product_check

    tower = scen.get("tower", {"kind": args.cover, "sheets": args.sheets, "base": {"kind": args.base, "n": 1}})
    F = _family(args, scen, tower.get("base"))
    ok = double_product_check(tower, F, args.prec, args.q)
    return {"tower": tower, "q": args.q, "prec": args.prec, "equal": ok}, ok


def cmd_howe(args, scen):
    from .partitions import howe_check, howe_sweep

    total = 0
    fails = []
    for nus in howe_sweep(args.max_blocks, args.max_n):
        s, e, eq = howe_check(nus, args.max_blocks)
        total += 1
        if not eq:
            fails.append({"nus": nus, "sum": s, "expected": e})
    return {"max_blocks": args.max_blocks, "max_n": args.max_n, "tuples": total, "failures": fails}, not fails


def cmd_ts_example(args, scen):
    from .epoly import EPoly
    from .monodromy import (MonClass, example_square, example_sum_of_squares, nearby_vanishing, psi_fermat,
                            psi_fermat_count, thom_sebastiani_check, twisted_product)

    _, phi_sq = nearby_vanishing(example_square())
    _, phi_ss = nearby_vanishing(example_sum_of_squares())
    tw = twisted_product(phi_sq, phi_sq)
    et = {"kind": "etilde"}
    pf = psi_fermat([(et, et)])
    shadow = psi_fermat_count([(et, et)], 5)
    uv = EPoly.mono(1, 1)
    checks = {
        "phi_x2": phi_sq == MonClass({Fraction(-1, 2): -1}),
        "phi_x2_plus_y2": phi_ss == MonClass.trivial(uv),
        "twisted_square": tw == MonClass.trivial(uv),
        "psi_fermat_shadow_q5": {a: e.at_uv(5) for a, e in pf.items()}
        == {a: c for a, c in shadow.items() if c},
        "thom_sebastiani": thom_sebastiani_check(example_square(), example_square(), example_sum_of_squares()),
    }
    rep = {"phi_x2": phi_sq, "phi_x2_plus_y2": phi_ss, "twisted_product": tw, "psi_fermat_etilde": pf,
           "psi_fermat_etilde_count_q5": shadow,
           "checks": checks}
    return rep, all(checks.values())


def cmd_dl_zeta(args, scen):
    from .monodromy import (ResolutionData, dl_zeta, example_smooth, example_square,
                            example_sum_of_squares, nearby_vanishing)

    if "resolution" in scen:
        res = ResolutionData.from_json(scen["resolution"])
    else:
        res = {"square": example_square, "sum_of_squares": example_sum_of_squares,
               "smooth": example_smooth}[args.example]()
    Z = dl_zeta(res, args.prec)
    psi, phi = nearby_vanishing(res)
    return {"zeta": Z, "psi": psi, "phi": phi}, True


def cmd_weight(args, scen):
    from .epoly import EPoly
    from .monodromy import MonClass
    from .varieties import hd_measure
    from .weights import weight

    if "class" in scen:
        c = scen["class"]
        a = MonClass.from_list(c["monclass"]) if "monclass" in c else EPoly.from_list(c["epoly"])
    else:
        a = hd_measure(_variety(args, scen))
    w = weight(a)
    return {"class": a, "weight": w}, True


def cmd_radius(args, scen):
    from .lambda_ring import kapranov_zeta
    from .varieties import dimension, hd_measure
    from .weights import radius

    X = _variety(args, scen)
    Z = kapranov_zeta(hd_measure(X), args.prec)
    lo = args.window_start or max(1, args.prec // 2)
    r = radius(Z, (lo, args.prec))
    return {"variety": X, "window": [lo, args.prec], "radius": r.value, "stabilized": r.stabilized,
            "ratios": r.ratios, "dimension": dimension(X)}, True


def _growth_input(args, scen):
    from .epoly import EPoly
    from .series import MotSeries

    one = EPoly.const(1)
    N = args.prec
    if "numerator" in scen:
        coeffs = [EPoly.from_list(c) for c in scen["numerator"]]
        return MotSeries.univariate(coeffs, N, "T", one), int(scen["a"]), int(scen["r"])
    ex = args.example
    if ex == "p1":
        return MotSeries.univariate([one] * (N + 1), N, "T", one), 1, 1
    if ex == "double":
        return MotSeries.univariate([one], N, "T", one), 1, 2
    if ex == "even":
        return MotSeries.univariate([one if i % 2 == 0 and i <= 4 else 0 for i in range(N + 1)], N, "T", one), 2, 1
    raise ValueError(f"unknown example {ex!r}")


def cmd_coef_growth(args, scen):
    from .epoly import EPoly
    from .series import MotSeries
    from .weights import coef_growth, observed_top

    F, a, r = _growth_input(args, scen)
    reports = coef_growth(F, a, r)
    N = F.bounds[0]
    one = EPoly.const(1)
    pole = MotSeries.constant(("T",), (N,), one, one) - MotSeries.monomial(("T",), (N,), (a,), EPoly.L(a), one)
    Z = F * pole.inverse() ** r
    rows = []
    ok = True
    for rep in reports:
        if rep.case == "i":
            rows.append({"residue": rep.residue, "case": "i"})
            continue
        w = 2 * rep.d0
        for n in range(rep.residue, min(N, args.rows * a + rep.residue) + 1, a):
            m = (n - rep.residue) // a
            pred = rep.predicted(m)
            obs = observed_top(Z, n, int(w))
            ok &= obs == pred
            rows.append({"n": n, "residue": rep.residue, "case": "ii", "d0": rep.d0, "degree": rep.degree,
                         "predicted": pred, "observed": obs})
    return {"a": a, "r": r, "rows": rows}, ok


def _compactification(scen):
    from .heights import CompactificationData

    if "compactification" in scen:
        return CompactificationData.from_json(scen["compactification"])
    return CompactificationData.demo()


def cmd_pole_order(args, scen):
    from .heights import pole_order

    data = _compactification(scen)
    return {"rho": data.rho, "A_D": sorted(data.A_D), "bad": {str(k): v["d"] for k, v in data.bad.items()},
            "pole_order": pole_order(data)}, True


def cmd_height_demo(args, scen):
    from .heights import (global_zeta_trivial, local_factor_trivial, pole_order, rational_part_check,
                          schanuel_table)
    from .series import MotSeries

    q, dmax = args.q, args.dmax
    data = _compactification(scen)
    prec = 2 * dmax
    lf = local_factor_trivial(data, prec, q)
    # closed form 1 + (1 - 1/q) q T / (1 - q T)
    vs = lf.vars
    T = MotSeries.monomial(vs, lf.bounds, (1,), 1, 1)
    closed = 1 + (T * (q - 1)) * (1 - T * q).inverse()
    N = schanuel_table(q, dmax)
    Z = global_zeta_trivial(data, prec, q)
    from_zeta = [q * Z.zeta.coefficient(2 * d) for d in range(dmax + 1)]
    norm = [Fraction(N[d], q ** (2 * d)) for d in range(dmax + 1)]
    ratios = [norm[d] / norm[d - 1] for d in range(1, dmax + 1)]
    tail_ok = all(abs(float(r) - 1) < 0.05 for r in ratios[3:])
    checks = {"pole_order_1": pole_order(data) == 1, "local_factor": lf == closed,
              "zeta_matches_counts": from_zeta == N, "ratios_within_5pct": tail_ok,
              "rational_part": rational_part_check(data, prec, q)}
    rep = {"q": q, "pole_order": pole_order(data), "local_factor": lf, "N": N, "normalized": norm,
           "ratios": ratios, "zeta": Z.to_json(), "checks": checks}
    return rep, all(checks.values())


def cmd_poisson(args, scen):
    from .fourier import Place, SBFunction, poisson_check, poisson_corpus

    qs = [args.q] if args.q else [2, 3]
    cases = poisson_corpus(args.trials, args.seed, qs, args.n, args.workers)
    q0 = qs[0]
    v0 = Place.finite(q0, 0)
    rr = poisson_check({v0: SBFunction.unit(v0)})
    rows = [["seed", "q", "levels", "lhs", "rhs", "equal"]] + [c.csv_row() for c in cases]
    ok = all(c.equal for c in cases) and rr.equal and rr.lhs == q0
    return {"trials": len(cases), "equal": sum(c.equal for c in cases),
            "riemann_roch": {"lhs": rr.lhs, "rhs": rr.rhs}, "_rows": rows}, ok


def cmd_annulus(args, scen):
    from .cyclo import CycloValue
    from .fourier import annulus_integral_checked, random_annulus_poly

    q = args.q
    if "P" in scen:
        polys = [scen["P"]]
    elif args.P:
        polys = [json.loads(args.P)]
    else:
        rng = np.random.default_rng(args.seed)
        polys = [random_annulus_poly(q, rng) for _ in range(args.samples)]
    expected = Fraction(-1, q * q) if args.m == args.d == 1 else Fraction(0)
    rows = []
    ok = True
    for P in polys:
        v = annulus_integral_checked(args.m, args.d, P, q)
        good = v == CycloValue.rational(v.p, expected)
        ok &= good
        rows.append({"P": P, "value": v, "expected": expected, "agree": good})
    return {"q": q, "m": args.m, "d": args.d, "rows": rows}, ok


def cmd_family_poisson(args, scen):
    from .fourier import family_poisson

    m = [int(x) for x in str(args.m).split(",") if x != ""]
    if "levels" in scen:
        levels = [{int(k): tuple(v) for k, v in comp.items()} for comp in scen["levels"]]
    else:
        lv = json.loads(args.levels)
        levels = [{int(k): tuple(v) for k, v in lv.items()} for _ in m]
    rep = family_poisson(args.q, m, levels, n=args.n, kind=args.kind, seed=args.seed)
    per = [{"divisor": [{str(v.label): k for v, k in D.items()} for D in Ds], "lhs": r.lhs, "rhs": r.rhs,
            "equal": r.equal} for Ds, r in zip(rep.divisors, rep.results)]
    return {"q": args.q, "m": m, "divisors": per, "swap_lhs": list(rep.swap_lhs),
            "swap_rhs": list(rep.swap_rhs)}, rep.all_pass


COMMANDS: dict[str, Callable] = {
    "zeta": cmd_zeta, "sympow": cmd_sympow, "eulerprod": cmd_eulerprod, "oracle": cmd_oracle,
    "mult-check": cmd_mult_check, "double-check": cmd_double_check, "howe": cmd_howe,
    "ts-example": cmd_ts_example, "dl-zeta": cmd_dl_zeta, "weight": cmd_weight, "radius": cmd_radius,
    "coef-growth": cmd_coef_growth, "pole-order": cmd_pole_order, "height-demo": cmd_height_demo,
    "poisson": cmd_poisson, "annulus": cmd_annulus, "family-poisson": cmd_family_poisson,
}


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="motzeta", description=__doc__)
    ap.add_argument("--version", action="version", version=f"motzeta {__version__}")
    sub = ap.add_subparsers(dest="command", required=True)
    for name in COMMANDS:
        # shared flags are added per subparser: parent parsers share action objects,
        # so per-command defaults would leak between commands
        sp = sub.add_parser(name)
        sp.add_argument("--q", type=int, default=2)
        sp.add_argument("--prec", type=int, default=6)
        sp.add_argument("--seed", type=int, default=1)
        sp.add_argument("--out", type=str, default=None, help="directory for the report file")
        sp.add_argument("--format", choices=("json", "csv"), default="json")
        sp.add_argument("--scenario", type=str, default=None, help="JSON scenario file")
        if name in ("zeta", "sympow", "weight", "radius"):
            sp.add_argument("--variety", default="elliptic" if name == "zeta" else "projective")
            sp.add_argument("--a", type=int, default=1)
            sp.add_argument("--n", type=int, default=1)
        if name == "zeta":
            sp.add_argument("--brute", action="store_true")
            sp.set_defaults(q=5)
        if name == "sympow":
            sp.add_argument("--n-power", type=int, default=2)
        if name in ("eulerprod", "oracle", "double-check", "mult-check"):
            sp.add_argument("--base", default="affine")
            sp.add_argument("--factor", default="geometric",
                            choices=("geometric", "linear", "quadratic", "inverse"))
        if name == "eulerprod":
            sp.add_argument("--avatar", choices=("E", "count"), default="count")
        if name in ("oracle", "mult-check"):
            sp.set_defaults(prec=4)
        if name == "mult-check":
            sp.add_argument("--trials", type=int, default=50)
        if name == "double-check":
            sp.add_argument("--cover", default="trivial_cover")
            sp.add_argument("--sheets", type=int, default=2)
            sp.set_defaults(q=3, prec=4)
        if name == "howe":
            sp.add_argument("--max-blocks", type=int, default=8)
            sp.add_argument("--max-n", type=int, default=3)
        if name == "dl-zeta":
            sp.add_argument("--example", default="sum_of_squares", choices=("square", "sum_of_squares", "smooth"))
        if name == "radius":
            sp.add_argument("--window-start", type=int, default=None)
            sp.set_defaults(prec=8)
        if name == "coef-growth":
            sp.add_argument("--example", default="p1", choices=("p1", "double", "even"))
            sp.add_argument("--rows", type=int, default=5)
            sp.set_defaults(prec=16)
        if name == "height-demo":
            sp.add_argument("--dmax", type=int, default=8)
        if name == "poisson":
            sp.add_argument("--n", type=int, default=2)
            sp.add_argument("--trials", type=int, default=200)
            sp.add_argument("--workers", type=int, default=1)
            sp.set_defaults(q=None)
        if name == "annulus":
            sp.add_argument("--m", type=int, default=1)
            sp.add_argument("--d", type=int, default=1)
            sp.add_argument("--P", type=str, default=None, help="JSON list of t-coefficient lists")
            sp.add_argument("--samples", type=int, default=5)
            sp.set_defaults(q=3)
        if name == "family-poisson":
            sp.add_argument("--m", type=str, default="1")
            sp.add_argument("--levels", type=str, default='{"1": [1, 1], "2": [1, 1]}')
            sp.add_argument("--n", type=int, default=1)
            sp.add_argument("--kind", choices=("random", "indicator"), default="random")
    return ap


def _render(command: str, rep: dict, ok: bool, fmt: str) -> str:
    rows = rep.pop("_rows", None)
    if fmt == "csv":
        if rows is None:
            rows = [["key", "value"], ["version", __version__], ["command", command], ["ok", ok]]
            rows += [[k, v] for k, v in sorted(rep.items())]
        return _rows_csv(rows)
    body = {"version": __version__, "command": command, "ok": ok, **jsonable(rep)}
    if rows is not None:
        body["rows"] = jsonable(rows)
    return json.dumps(body, sort_keys=True, indent=2) + "\n"


def run(argv: list[str] | None = None) -> int:
    from .fourier import BoundsError as FBounds
    from .partitions import BoundsExceeded
    from .series import TruncationError
    from .varieties import BoundsError
    from .weights import InsufficientTruncation

    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return int(e.code) if isinstance(e.code, int) else EXIT_PARSE
    try:
        scen = json.loads(Path(args.scenario).read_text()) if args.scenario else {}
        if not isinstance(scen, dict):
            raise ValueError("scenario must be a JSON object")
        scen_params = scen.get("params", {})
        for k, v in scen_params.items():
            if getattr(args, k, None) in (None, parser.get_default(k)):
                setattr(args, k, v)
    except (OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    try:
        rep, ok = COMMANDS[args.command](args, scen)
    except (BoundsError, FBounds, BoundsExceeded, TruncationError, InsufficientTruncation) as exc:
        print(f"bounds: {exc}", file=sys.stderr)
        return EXIT_BOUNDS
    except (KeyError, TypeError, ValueError, json.JSONDecodeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    text = _render(args.command, rep, bool(ok), args.format)
    if args.out:
        out = Path(args.out)
        out.mkdir(parents=True, exist_ok=True)
        (out / f"{args.command}.{args.format}").write_text(text)
    else:
        sys.stdout.write(text)
    return EXIT_OK if ok else EXIT_FAILED


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
