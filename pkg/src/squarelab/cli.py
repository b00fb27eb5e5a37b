"""``squarelab`` command-line experiment runner."""

from __future__ import annotations

import argparse
import math
import sys
import time
from fractions import Fraction
from typing import Callable

from . import __version__
from . import abc as abc_mod
from . import ap_squares, congruence, gap_elliptic, lattice, sidon, sumset, trig
from .errors import HardAssertionError, SquarelabError
from .report import ExperimentReport, emit_series


def _ints(text: str) -> list[int]:
    try:
        return [int(v) for v in text.replace(" ", "").split(",") if v]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}")


def _floats(text: str) -> list[float]:
    try:
        return [float(v) for v in text.split(",") if v]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got {text!r}")


def _rational(text: str) -> Fraction:
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"not a rational number: {text!r}")


def _ground_set(args) -> list[int]:
    if args.set:
        return args.set
    return [k * k for k in range(1, args.squares + 1)]


def _pt(p) -> list[int]:
    return [p.x, p.y]


# ---------------------------------------------------------------- subcommands
# each returns (params, rows, units[, failure]); a failure message still writes the report, then exits 1


def cmd_ap_count(a):
    rows = []
    for k in a.k:
        rep = ap_squares.squares_in_ap(a.a, a.b, k)
        row = {"a": a.a, "b": a.b, "k": k, "count": rep.count}
        if (a.a, a.b) == (49, 24):
            model = math.sqrt(8 * k / 3)
            row.update(model=model, deviation=rep.count - model)
        if a.show_hits:
            row["hits"] = list(rep.hit_indices)
        rows.append(row)
    return {"a": a.a, "b": a.b, "k": a.k}, rows, {"count": "squares", "model": "squares", "deviation": "squares"}


def cmd_sigma_search(a):
    rep = ap_squares.sigma_lower_search(a.k, a.a_max, a.b_max)
    rows = [{"k": a.k, "a": rep.a, "b": rep.b, "count": rep.count, "bound": "lower", "hits": list(rep.hit_indices)}]
    return {"k": a.k, "a_max": a.a_max, "b_max": a.b_max}, rows, {"count": "squares"}


def cmd_fermat_check(a):
    found = ap_squares.fermat_four_term_check(a.limit)
    rows = [{"w": w, "x": x, "y": y, "z": z} for w, x, y, z in found]
    fail = f"four squares in progression found: {found[:3]}" if rows else None
    return {"limit": a.limit}, rows, dict.fromkeys("wxyz", "integer"), fail


def cmd_energy(a):
    E = _ground_set(a)
    prof = sumset.rep_profile(E, sign=a.sign)
    row = {
        "size": len(set(E)),
        "sign": a.sign,
        "energy": sumset.energy_moment(prof, a.moment),
        "binom_moment": sumset.binom_moment(prof, a.binom),
        "max_count": prof.max_count(),
        "sumset_size": sumset.sumset_size(E),
    }
    params = {"size": len(E), "sign": a.sign, "moment": a.moment, "binom": a.binom}
    return params, [row], {"energy": "pairs^m", "binom_moment": "count", "sumset_size": "count"}


def cmd_norms(a):
    if a.freqs:
        spec = trig.TrigPolySpec.unit(a.freqs)
    else:
        spec = trig.TrigPolySpec.squares(range(1, a.x + 1))
    grid = a.grid or max(4 * spec.max_frequency + 4, 1024)
    row = {
        "terms": len(spec.terms),
        "max_frequency": spec.max_frequency,
        "l2_squared": trig.l2_squared(spec),
        "l4_fourth": trig.l4_fourth_exact(spec),
    }
    for p in a.p:
        row[f"lp_p{p:g}"] = trig.lp_norm_quadrature(spec, p, grid)
        row[f"ratio_p{p:g}"] = trig.norm_ratio(spec, p, grid)
    if not a.freqs:
        row["l4_over_x2_lnx"] = trig.l4_growth_ratio(a.x) if a.x >= 2 else None
    return {"x": a.x, "freqs": a.freqs, "p": a.p, "grid": grid}, [row], {"l4_fourth": "norm^4", "l2_squared": "norm^2"}


def cmd_window_energy(a):
    rows = []
    for N in a.N:
        for D in a.delta:
            r = trig.window_energy(N, D)
            rows.append(
                {
                    "N": N,
                    "Delta": D,
                    "terms": r.n_terms,
                    "l4_fourth": r.l4_fourth,
                    "model": r.model,
                    "ratio": r.ratio,
                    "delta_vs_logN_over_N": r.delta_vs_logN_over_N,
                    "delta_vs_N_over_logN": r.delta_vs_N_over_logN,
                }
            )
    return {"N": a.N, "Delta": a.delta}, rows, {"l4_fourth": "norm^4", "ratio": "1"}


def cmd_roots(a):
    spec = congruence.OmegaSpec(a.kind, a.modulus, a=a.a, coefficients=tuple(a.coefficients or ()))
    om = congruence.root_set(spec)
    row = {"modulus": a.modulus, "count": len(om), "residues": list(om.residues)}
    if a.k:
        w = congruence.min_window_with_k_roots(om, a.k)
        row.update(window_roots=list(w.roots), span=w.span)
    return {"kind": a.kind, "modulus": a.modulus, "a": a.a, "k": a.k}, [row], {"count": "residues", "span": "integers"}


def cmd_cluster_construct(a):
    cm = congruence.construct_clustered_modulus(a.k, a.prime_floor, variant=a.variant, primes=a.primes, eps=a.eps)
    m = cm.min_nontrivial_root()
    row = {
        "n": cm.n,
        "primes": list(cm.primes),
        "a": list(cm.a),
        "x": list(cm.x),
        "x_sum": sum(cm.x),
        "omega_size": len(cm.omega),
        "min_nontrivial_root": m,
        "min_root_over_n": m / cm.n if m is not None else None,
    }
    params = {"k": a.k, "prime_floor": a.prime_floor, "variant": a.variant, "primes": a.primes, "eps": a.eps}
    return params, [row], {"n": "integer", "min_root_over_n": "1"}


def _scan_row(res):
    w = res.worst
    return {
        "b_max": res.b_max,
        "k": res.k,
        "threshold_exponent": res.threshold,
        "ok": res.ok,
        "violations": len(res.violations),
        "windows": res.windows,
        "vandermonde_failures": res.vandermonde_failures,
        "worst_modulus": w.n if w else None,
        "worst_residue": res.worst_residue,
        "worst_roots": list(w.roots) if w else None,
        "worst_exponent": w.exponent if w else None,
    }


def cmd_shortint_scan(a):
    res = congruence.shortint_scan(a.bmax, a.k, cyclic=not a.no_cyclic, threads=a.threads)
    row = _scan_row(res)
    if a.interval_bound:
        row["solutions_per_sqrt_interval"] = math.log(4 * a.bmax) / math.log(2)
    fail = None if res.ok else f"{len(res.violations)} violations, first {res.violations[:5]}"
    return {"bmax": a.bmax, "k": a.k, "cyclic": not a.no_cyclic}, [row], {"windows": "count", "worst_exponent": "1"}, fail


def cmd_circle(a):
    pts = lattice.two_square_reps(a.M)
    rows = [{"x": p.x, "y": p.y} for p in pts]
    params = {"M": a.M, "r2": lattice.r2_formula(a.M)}
    if a.arc is not None:
        cl = lattice.max_arc_cluster(a.M, a.arc)
        params.update(arc=a.arc, max_on_arc=cl.size)
        rows = [{"x": p.x, "y": p.y, "on_best_arc": p in cl.points} for p in pts]
    return params, rows, {"x": "integer", "y": "integer"}


def cmd_arc_verify(a):
    res = lattice.arc_bound_verify(a.mmax, a.k, threads=a.threads, exponent=a.exponent)
    row = {
        "M_max": res.M_max,
        "k": res.k,
        "exponent": res.exponent,
        "ok": res.ok,
        "violations": len(res.violations),
        "circles_checked": res.circles_checked,
        "readjudicated": res.readjudicated,
        "worst_M": res.worst.M if res.worst else None,
        "worst_ratio": res.worst_ratio,
        "worst_points": [_pt(p) for p in res.worst.points] if res.worst else None,
    }
    fail = None if res.ok else f"arc bound violated on circles {list(res.violations[:5])}"
    return {"mmax": a.mmax, "k": a.k, "exponent": res.exponent}, [row], {"worst_ratio": "arc/threshold"}, fail


def cmd_families(a):
    rows = []
    for n in a.n:
        r = lattice.family_points(a.family, n)
        rows.append(
            {
                "n": n,
                "M": r.M,
                "points": [_pt(p) for p in r.points],
                "separation": r.extreme_separation,
                "model": r.model_length,
                "ratio": r.ratio,
            }
        )
    return {"family": a.family, "n": a.n}, rows, {"separation": "length", "model": "length", "ratio": "1"}


def cmd_sidon_greedy(a):
    S = sidon.greedy_sidon_squares(a.limit)
    ok, (n, c) = sidon.is_b2g(S, 1)
    if not ok:
        raise HardAssertionError(f"greedy set is not Sidon: {n} has {c} representations")
    rows = [{"index": i + 1, "square": s} for i, s in enumerate(S)]
    return {"limit": a.limit, "size": len(S)}, rows, {"square": "integer"}


def cmd_sidon_random(a):
    rows = []
    for seed in a.seeds or [a.seed]:
        cfg = sidon.B2Config(g=a.g, beta=a.beta, x_max=a.xmax, seed=seed)
        out = sidon.random_b2g_squares(cfg)
        kept = list(out.kept_squares)
        ok = sidon.is_b2g(kept, a.g)[0] if kept else True
        try:
            fit = sidon.growth_exponent_fit(kept)
        except SquarelabError:
            fit = None
        rows.append(
            {
                "seed": seed,
                "expected_sampled": sidon.expected_sample_size(cfg),
                "sampled": len(out.sampled),
                "removed": len(out.removed),
                "kept": len(kept),
                "is_b2g": ok,
                "growth_fit": fit,
                "log_corrected_model": sidon.log_corrected_exponent(a.g, cfg.beta, len(kept)) if len(kept) > 2 else None,
            }
        )
    params = {"g": a.g, "beta": sidon.B2Config(g=a.g, beta=a.beta).beta, "xmax": a.xmax}
    return params, rows, {"sampled": "count", "kept": "count", "growth_fit": "exponent"}


def cmd_gap3(a):
    p = gap_elliptic.ap3_squares(a.r, a.t)
    row = {"x": p.x, "y": p.y, "z": p.z, "Delta": p.delta, "squares": list(p.squares())}
    if not p.degenerate:
        P = gap_elliptic.point_from_ap3(p)
        P2 = gap_elliptic.ec_double(P)
        row.update(P=[P.X, P.Y], twoP=None if P2.is_infinity else [P2.X, P2.Y])
        if p.x != 0:
            T, R = gap_elliptic.double_via_progression(p)
            row.update(T=T, R=R)
    return {"r": a.r, "t": a.t}, [row], {}


def cmd_gap2x3(a):
    g = gap_elliptic.gap_2x3(a.r, a.t)
    rows = [{"row": i, "entries": list(r), "difference": r[1] - r[0]} for i, r in enumerate(g.entries)]
    return {"r": a.r, "t": a.t, "Delta": g.delta, "v": g.v}, rows, {}


def cmd_magic(a):
    sq = gap_elliptic.magic_square(a.u, a.v, a.delta)
    sums = gap_elliptic.magic_line_sums(sq)
    if len(set(sums)) != 1:
        raise HardAssertionError(f"line sums differ: {sums}")
    rows = [{"row": i, "entries": list(r)} for i, r in enumerate(sq)]
    return {"u": a.u, "v": a.v, "delta": a.delta, "line_sum": sums[0]}, rows, {}


def cmd_gap3x3_search(a):
    found = gap_elliptic.search_3x3_gap_squares(a.height)
    rows = [{"x0": g.x0, "v": g.v, "Delta": g.delta} for g in found]
    fail = f"{len(rows)} 3x3 grids of squares found; review before accepting" if rows else None
    return {"height": a.height}, rows, {"x0": "rational", "v": "rational", "Delta": "rational"}, fail


def _abc_row(tr):
    return {
        "a": tr.a,
        "b": tr.b,
        "c": tr.c,
        "rad": tr.rad,
        "rad_exact": tr.rad_exact,
        "quality": tr.quality,
        "digits_c": len(str(tr.c)),
    }


def cmd_abc_build(a):
    if len(a.t) != 5:
        raise argparse.ArgumentTypeError("--t needs five integers")
    sys_ = abc_mod.partial_fraction_weights(a.t, expand_limit=0)
    tr = abc_mod.abc_from_square_ap(a.A, a.B, a.t, variant=a.variant)
    row = {"L": sys_.L, "E": list(sys_.E), "D": sys_.D, "deg_f": sys_.deg_f}
    row.update(_abc_row(tr))
    row["log_B_over_log_A"] = tr.log_B_over_log_A
    if tr.log_B_over_log_A is not None:
        row["B_beyond_A_5_6"] = tr.log_B_over_log_A >= 5 / 6
    row["tau"] = a.tau
    return {"A": a.A, "B": a.B, "t": a.t, "variant": a.variant}, [row], {"quality": "1", "rad": "integer (upper bound if not exact)"}


def cmd_abc_quality(a):
    tr = abc_mod.abc_quality(a.a, a.b)
    return {"a": a.a, "b": a.b}, [_abc_row(tr)], {"quality": "1"}


def cmd_cubes(a):
    E = _ground_set(a)
    cubes = sumset.find_affine_cubes(E, a.d, bound=a.bound)
    rows = [{"b0": c.b0, "generators": list(c.generators), "vertices": c.vertices()} for c in cubes]
    return {"size": len(E), "d": a.d, "bound": a.bound}, rows, {}


# ---------------------------------------------------------------- parser


def _common() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(add_help=False)
    g = p.add_argument_group("output")
    g.add_argument("--format", choices=("json", "csv"), default="json")
    g.add_argument("--output", help="write here instead of standard output")
    g.add_argument("--columns", type=lambda s: [c for c in s.split(",") if c], help="CSV columns, comma separated")
    g.add_argument("--seed", type=int, default=0)
    g.add_argument("--threads", type=int, default=None, help="worker cap (default: SQUARELAB_THREADS or all cores)")
    g.add_argument("--stable-output", action="store_true", help="omit wall time so reruns compare byte for byte")
    return p


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="squarelab", description="Exact experiments on squares.")
    parser.add_argument("--version", action="version", version=f"squarelab {__version__}")
    sub = parser.add_subparsers(dest="command", required=True, metavar="COMMAND")
    common = [_common()]

    def add(name: str, fn: Callable, help: str) -> argparse.ArgumentParser:
        sp = sub.add_parser(name, parents=common, help=help)
        sp.set_defaults(func=fn)
        return sp

    sp = add("ap-count", cmd_ap_count, "squares among a + i b, 0 <= i < k")
    sp.add_argument("--a", type=int, required=True)
    sp.add_argument("--b", type=int, required=True)
    sp.add_argument("--k", type=_ints, required=True, help="one or more lengths")
    sp.add_argument("--show-hits", action="store_true")

    sp = add("sigma-search", cmd_sigma_search, "best progression in a box (a lower bound)")
    sp.add_argument("--k", type=int, required=True)
    sp.add_argument("--a-max", type=int, default=100)
    sp.add_argument("--b-max", type=int, default=100)

    sp = add("fermat-check", cmd_fermat_check, "look for four squares in progression")
    sp.add_argument("--limit", type=int, default=10**6)

    def ground(sp):
        src = sp.add_mutually_exclusive_group()
        src.add_argument("--set", type=_ints, help="explicit ground set")
        src.add_argument("--squares", type=int, default=10, help="use 1, 4, ..., n^2")

    sp = add("energy", cmd_energy, "representation counts and energy moments")
    ground(sp)
    sp.add_argument("--sign", choices=("sum", "difference"), default="sum")
    sp.add_argument("--moment", type=int, default=2)
    sp.add_argument("--binom", type=int, default=5)

    sp = add("norms", cmd_norms, "norms of exponential sums over squares")
    sp.add_argument("--x", type=int, default=100, help="sum e(k^2 theta) over k <= x")
    sp.add_argument("--freqs", type=_ints, help="explicit unit-coefficient frequencies")
    sp.add_argument("--p", type=_floats, default=[4.0])
    sp.add_argument("--grid", type=int, default=None)

    sp = add("window-energy", cmd_window_energy, "fourth moment of squares in a window")
    sp.add_argument("--N", type=_ints, required=True)
    sp.add_argument("--delta", type=_ints, required=True)

    sp = add("roots", cmd_roots, "roots of a congruence")
    sp.add_argument("--kind", choices=("x_squared_minus_a", "x_times_x_minus_1", "monic"), default="x_squared_minus_a")
    sp.add_argument("--modulus", type=int, required=True)
    sp.add_argument("--a", type=int, default=0)
    sp.add_argument("--coefficients", type=_ints, help="monic polynomial, leading coefficient first")
    sp.add_argument("--k", type=int, default=None, help="also report the shortest window holding k roots")

    sp = add("cluster-construct", cmd_cluster_construct, "modulus with clustered idempotent roots")
    sp.add_argument("--k", type=int, required=True)
    sp.add_argument("--prime-floor", type=int, default=50)
    sp.add_argument("--variant", choices=("edge", "origin"), default="edge")
    sp.add_argument("--primes", type=_ints, default=None)
    sp.add_argument("--eps", type=float, default=None)

    sp = add("shortint-scan", cmd_shortint_scan, "exhaustive root-cluster span scan")
    sp.add_argument("--bmax", type=int, default=2000)
    sp.add_argument("--k", type=int, default=3)
    sp.add_argument("--no-cyclic", action="store_true", help="only windows inside [0, b)")
    sp.add_argument("--interval-bound", action="store_true", help="add the log(4b)/log 2 column")

    sp = add("circle", cmd_circle, "lattice points on x^2 + y^2 = M")
    sp.add_argument("--M", type=int, required=True)
    sp.add_argument("--arc", type=float, default=None)

    sp = add("arc-verify", cmd_arc_verify, "exhaustive short-arc check")
    sp.add_argument("--mmax", type=int, default=10**4)
    sp.add_argument("--k", type=int, default=2)
    sp.add_argument("--exponent", type=_rational, default=None, help="override the arc exponent, e.g. 2/5")

    sp = add("families", cmd_families, "explicit point families on circles")
    sp.add_argument("--family", choices=("pair", "triple", "quad_fibonacci"), default="triple")
    sp.add_argument("--n", type=_ints, default=[2, 5, 10, 50])

    sp = add("sidon-greedy", cmd_sidon_greedy, "greedy Sidon set of squares")
    sp.add_argument("--limit", type=int, default=10**4)

    sp = add("sidon-random", cmd_sidon_random, "random B2[g] set of squares")
    sp.add_argument("--g", type=int, default=1)
    sp.add_argument("--beta", type=float, default=None)
    sp.add_argument("--xmax", type=int, default=10**5)
    sp.add_argument("--seeds", type=_ints, default=None, help="several seeds in one report")

    sp = add("gap3", cmd_gap3, "three squares in progression and the curve point")
    sp.add_argument("--r", type=_rational, default=Fraction(1))
    sp.add_argument("--t", type=_rational, required=True)

    sp = add("gap2x3", cmd_gap2x3, "2x3 grid of squares from a point and its double")
    sp.add_argument("--r", type=_rational, default=Fraction(1))
    sp.add_argument("--t", type=_rational, required=True)

    sp = add("magic", cmd_magic, "3x3 magic square from (u, v, Delta)")
    sp.add_argument("--u", type=_rational, required=True)
    sp.add_argument("--v", type=_rational, required=True)
    sp.add_argument("--delta", type=_rational, required=True)

    sp = add("gap3x3-search", cmd_gap3x3_search, "search for 3x3 grids of squares")
    sp.add_argument("--height", type=int, default=1000)

    sp = add("abc-build", cmd_abc_build, "abc triple from five squares in progression")
    sp.add_argument("--A", type=int, required=True)
    sp.add_argument("--B", type=int, required=True)
    sp.add_argument("--t", type=_ints, required=True)
    sp.add_argument("--variant", choices=("direct", "reciprocal"), default="direct")
    sp.add_argument("--tau", type=float, default=0.5, help="recorded only")

    sp = add("abc-quality", cmd_abc_quality, "quality of a + b = c")
    sp.add_argument("--a", type=int, required=True)
    sp.add_argument("--b", type=int, required=True)

    sp = add("cubes", cmd_cubes, "affine cubes inside a set")
    ground(sp)
    sp.add_argument("--d", type=int, default=2)
    sp.add_argument("--bound", type=int, default=None)
    return parser


def run(argv: list[str] | None = None) -> tuple[ExperimentReport | None, int]:
    """Parse, run and write one experiment; returns the report and the exit code."""
    parser = build_parser()
    args = parser.parse_args(argv)  # exits with 2 on usage errors
    t0 = time.perf_counter()
    try:
        params, rows, units, *fail = args.func(args)
    except HardAssertionError as e:
        print(f"squarelab {args.command}: HardAssertionError: {e}", file=sys.stderr)
        return None, 1
    except argparse.ArgumentTypeError as e:
        parser.error(str(e))
    except SquarelabError as e:
        print(f"squarelab {args.command}: {type(e).__name__}: {e}", file=sys.stderr)
        return None, 1
    prov = {"seed": args.seed, "version": __version__}
    if not args.stable_output:
        prov.update(threads=args.threads, wall_time_s=round(time.perf_counter() - t0, 6))
    report = ExperimentReport(args.command, params, rows, units, prov)
    try:
        text = report.to_json(args.stable_output) if args.format == "json" else emit_series(report, args.columns)
    except SquarelabError as e:
        print(f"squarelab {args.command}: {type(e).__name__}: {e}", file=sys.stderr)
        return report, 1
    if args.output:
        with open(args.output, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    if fail and fail[0]:
        print(f"squarelab {args.command}: HardAssertionError: {fail[0]}", file=sys.stderr)
        return report, 1
    return report, 0


def main(argv: list[str] | None = None) -> int:
    return run(argv)[1]


if __name__ == "__main__":
    sys.exit(main())
