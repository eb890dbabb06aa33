"""Experiment driver: generate -> analyze -> quasi -> hull pipelines with
CSV/JSON/SVG artifacts.

Exit codes: 0 ok, 1 stage failure, 2 config error.  All artifact paths are
relative to --out.  Reports are byte-deterministic for a fixed (config,
seed); wall-clock timings go to stderr (and into the report only with
--timings).
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys
import time
from fractions import Fraction

from . import __version__
from .config import ConfigError, ExperimentConfig, report_json
from .cutproject import PointPatch, enumerate_model_set, make_scheme
from .prng import Xoshiro256StarStar
from .ring import DomainError, QuadExact, QuadInt, make_context
from . import apxgroup, hull, plotsvg, quasi


def _write(out_dir: str, name: str, text: str) -> str:
    os.makedirs(out_dir, exist_ok=True)
    path = os.path.join(out_dir, name)
    with open(path, "w", encoding="utf-8", newline="") as fh:
        fh.write(text)
    return path


def _stage_generate(cfg: ExperimentConfig, out_dir: str) -> dict:
    scheme = make_scheme(cfg.d, cfg.window, cfg.dim)
    patch = enumerate_model_set(scheme, cfg.radius)
    _write(out_dir, "patch.csv", patch.to_csv())
    _write(out_dir, "patch.json", report_json(patch.to_json()))
    _write(out_dir, "patch.svg", plotsvg.plot_patch(patch))
    return {
        "points": len(patch),
        "density_per_radius": f"{len(patch) / float(2 * cfg.radius) ** cfg.dim:.6f}",
        "artifacts": ["patch.csv", "patch.json", "patch.svg"],
    }


def sample_window_elements(
    ctx, count: int, norm_bound: int, rng: Xoshiro256StarStar
) -> list[QuadInt]:
    """Random PVS-window elements with physical norm up to norm_bound: draw
    b, then a uniform valid integer a with |a - b sqrt(d)| <= w."""
    d, w = ctx.d, ctx.window_bound
    b_max = int(Fraction(norm_bound) / 2 / math.isqrt(d)) or 1
    out = []
    while len(out) < count:
        b = rng.randint(-b_max, b_max)
        bsd = QuadExact(Fraction(0), Fraction(b), d)
        wq = QuadExact(w, Fraction(0), d)
        a_lo = (bsd - wq).ceil()
        a_hi = (bsd + wq).floor()
        if a_hi < a_lo:
            continue
        a = rng.randint(a_lo, a_hi)
        u = QuadInt(a, b, d)
        if abs(float(u)) <= norm_bound:
            out.append(u)
    return out


def _stage_analyze(cfg: ExperimentConfig, patch: PointPatch, out_dir: str) -> dict:
    res: dict = {}
    opts = cfg.analysis
    if opts.get("symmetry", True):
        res["symmetric"] = apxgroup.check_symmetry(patch.points)
    if opts.get("gaps", True):
        res["min_gap"] = float(apxgroup.min_gap(patch))
        res["covering_radius"] = float(apxgroup.covering_radius(patch))
    if opts.get("k_constant", True):
        rep = apxgroup.covering_constant(patch)
        res["k_constant"] = rep.k_constant
        res["boundary_margin"] = str(rep.boundary_margin)
        _write(out_dir, "patch_report.json", report_json(rep.to_json()))
        res.setdefault("artifacts", []).append("patch_report.json")
    if opts.get("chains", True):
        w = max(patch.scheme.window) if max(patch.scheme.window) > 0 else Fraction(1)
        ctx = make_context(patch.scheme.d, w)
        rng = Xoshiro256StarStar(cfg.seed)
        n = int(opts.get("chain_samples", 100))
        bound = int(opts.get("chain_norm_bound", 10**6))
        translates = apxgroup.chain_translates(ctx, _contraction(ctx))
        lengths = []
        ratios = []
        for u in sample_window_elements(ctx, n, bound, rng):
            cert = apxgroup.efficient_chain(u, ctx, _contraction(ctx), translates)
            assert cert.replay() == u
            lengths.append(cert.length)
            norm = max(abs(float(u)), 2.0)
            ratios.append(cert.length / math.log(norm))
        ratios.sort()
        res["chains"] = {
            "samples": n,
            "max_length": max(lengths, default=0),
            "max_ratio": f"{max(ratios, default=0.0):.4f}",
            "median_ratio": f"{ratios[len(ratios) // 2]:.4f}" if ratios else "0",
        }
    return res


def _contraction(ctx) -> QuadInt:
    inv = ctx.fundamental_unit.to_exact().inverse()
    alpha = QuadInt(int(inv.a), int(inv.b), ctx.d)
    return -alpha if alpha.sign() < 0 else alpha


def _stage_quasi(cfg: ExperimentConfig, out_dir: str) -> dict:
    h = quasi.QuasiMorphism.from_json(cfg.quasimorphism)
    p = cfg.quasi_params
    defect_len = int(p.get("defect_max_len", 8))
    profile = quasi.defect_profile(h, defect_len)
    stabilized, stable_from = quasi.stabilized_defect(h, defect_len)
    tests = list(p.get("test_elements", ["abAB"]))
    probe = quasi.laminarity_probe(h, tests)
    tw = Fraction(str(p.get("twisted_window", "1")))
    tl = int(p.get("twisted_max_len", 6))
    report: dict = {
        "quasimorphism": h.to_json(),
        "defect_profile": [[l, str(v)] for l, v in profile],
        "defect_stabilized": {"value": str(stabilized), "from_length": stable_from},
        "probe": probe.to_json(),
    }
    try:
        tp = quasi.build_twisted(h, tw, tl)
        k, fiber_translates = quasi.twisted_covering_constant(tp)
        split = quasi.splitting_section(tp)
        report["twisted"] = {
            "window": str(tw),
            "max_len": tl,
            "pairs": len(tp.pairs),
            "k_constant": k,
            "fiber_translates": list(fiber_translates),
            "splits": split.splits,
            "split_witness": split.witness,
        }
        _write(out_dir, "twisted.svg", plotsvg.plot_twisted(tp))
        report["artifacts"] = ["quasi_report.json", "twisted.svg"]
    except DomainError as exc:
        report["twisted"] = {"error": str(exc)}
        report["artifacts"] = ["quasi_report.json"]
    _write(out_dir, "quasi_report.json", report_json(report))
    return report


def _stage_hull(cfg: ExperimentConfig, out_dir: str) -> dict:
    p = cfg.hull_params
    w0 = Fraction(str(p.get("w0", "1")))
    horizon = Fraction(str(p.get("horizon", "200")))
    samples = int(p.get("samples", 3))
    eps = Fraction(str(p.get("epsilon", "1/10")))
    t_max = Fraction(str(p.get("equi_t_max", "1000")))
    trials = int(p.get("cocycle_trials", 100))
    d = cfg.d

    rng = Xoshiro256StarStar(cfg.seed ^ 0x9E3779B97F4A7C15)
    failures = 0
    for _ in range(trials):
        t1 = Fraction(rng.randint(-4000, 4000), rng.randint(1, 9))
        t2 = Fraction(rng.randint(-4000, 4000), rng.randint(1, 9))
        v1 = QuadExact(Fraction(rng.randint(-500, 500), rng.randint(1, 7)),
                       Fraction(rng.randint(-200, 200), rng.randint(1, 5)), d)
        v2 = QuadExact(Fraction(rng.randint(-500, 500), rng.randint(1, 7)),
                       Fraction(rng.randint(-200, 200), rng.randint(1, 5)), d)
        x = hull.section(v1, v2, d)[0]
        lhs = hull.cocycle_alpha(t1 + t2, x)
        rhs = hull.cocycle_alpha(t1, hull.translate(x, t2)) + hull.cocycle_alpha(t2, x)
        if lhs != rhs:
            failures += 1

    b = hull.section_samples(w0, samples, d)
    rt = hull.return_times(b, w0, horizon)
    ms2 = enumerate_model_set(make_scheme(d, 2 * w0, 1), horizon)
    rt_pts = [(q,) for q in rt.points]
    k_rt_in_ms, _ = apxgroup.commensurability_cover(rt_pts, ms2, horizon, d)
    k_ms_in_rt, _ = apxgroup.commensurability_cover(ms2.points, rt_pts, horizon, d)
    equi = hull.equidistribution_check(w0, eps, t_max, d)

    hits = hull.hitting_times(hull.origin(d), w0, horizon)
    lines = ["# hitting times of the origin orbit, t,=phys float,a,b"]
    for t in hits:
        lines.append(f"{float(t):.12g},{t.a},{t.b}")
    _write(out_dir, "cross_section_hits.csv", "\n".join(lines) + "\n")
    lines = ["# return times, phys float,a,b"]
    for q in rt.points:
        lines.append(f"{float(q):.12g},{q.a},{q.b}")
    _write(out_dir, "return_times.csv", "\n".join(lines) + "\n")

    return {
        "w0": str(w0),
        "horizon": str(horizon),
        "cocycle_trials": trials,
        "cocycle_failures": failures,
        "cross_section_hits": len(hits),
        "return_times": len(rt.points),
        "cover_constants": {
            "return_in_window2": k_rt_in_ms,
            "window2_in_return": k_ms_in_rt,
        },
        "equidistribution": {
            "epsilon": str(eps),
            "t_max": str(t_max),
            "measure": f"{float(equi.measure):.6f}",
            "expected": f"{float(equi.expected):.6f}",
            "within_5_percent": equi.within_5_percent,
        },
        "artifacts": ["cross_section_hits.csv", "return_times.csv"],
    }


def run_pipeline(cfg: ExperimentConfig, out_dir: str, with_timings: bool = False) -> dict:
    report: dict = {"version": __version__, "config": cfg.echo(), "stages": {}}
    timings: dict = {}
    patch = None
    order = ["generate", "analyze", "quasi", "hull"]
    for stage in order:
        if not cfg.stages.get(stage, False):
            continue
        t0 = time.monotonic()
        try:
            if stage == "generate":
                report["stages"]["generate"] = _stage_generate(cfg, out_dir)
                patch = enumerate_model_set(
                    make_scheme(cfg.d, cfg.window, cfg.dim), cfg.radius
                )
            elif stage == "analyze":
                if patch is None:
                    patch = enumerate_model_set(
                        make_scheme(cfg.d, cfg.window, cfg.dim), cfg.radius
                    )
                report["stages"]["analyze"] = _stage_analyze(cfg, patch, out_dir)
            elif stage == "quasi":
                report["stages"]["quasi"] = _stage_quasi(cfg, out_dir)
            elif stage == "hull":
                report["stages"]["hull"] = _stage_hull(cfg, out_dir)
        except Exception as exc:
            raise RuntimeError(f"stage {stage}: {exc}") from exc
        timings[stage] = round(time.monotonic() - t0, 3)
        print(f"[apxlat] stage {stage}: {timings[stage]}s", file=sys.stderr)
    if with_timings:
        report["timings"] = timings
    _write(out_dir, "report.json", report_json(report))
    return report


def _cmd_generate(args) -> int:
    cfg = ExperimentConfig.from_json(
        {
            "d": args.d,
            "window": args.window,
            "dim": args.dim,
            "radius": args.radius,
            "stages": {"generate": True, "analyze": False, "quasi": False, "hull": False},
        }
    )
    _stage_generate(cfg, args.out)
    return 0

def _cmd_analyze(args) -> int:
    with open(args.patch, "r", encoding="utf-8") as fh:
        patch = PointPatch.from_csv(fh.read())
    cfg = ExperimentConfig.from_json({"d": patch.scheme.d, "seed": args.seed})
    res = _stage_analyze(cfg, patch, args.out)
    _write(args.out, "analyze_report.json", report_json(res))
    print(report_json(res), end="")
    return 0


def _cmd_quasi(args) -> int:
    if args.spec:
        with open(args.spec, "r", encoding="utf-8") as fh:
            qm = json.load(fh)
    else:
        qm = {"terms": [{"pattern": args.pattern, "weight": "1"}]}
    cfg = ExperimentConfig.from_json(
        {
            "quasimorphism": qm,
            "quasi_params": {
                "twisted_window": args.window,
                "twisted_max_len": args.max_len,
                "defect_max_len": args.defect_len,
                "test_elements": args.tests.split(",") if args.tests else ["abAB"],
            },
        }
    )
    res = _stage_quasi(cfg, args.out)
    print(report_json({"verdict": res["probe"]["verdict"]}), end="")
    return 0


def _cmd_hull(args) -> int:
    cfg = ExperimentConfig.from_json(
        {
            "d": args.d,
            "seed": args.seed,
            "hull_params": {
                "w0": args.window,
                "horizon": args.horizon,
                "samples": args.samples,
                "epsilon": args.epsilon,
                "equi_t_max": args.t_max,
            },
        }
    )
    res = _stage_hull(cfg, args.out)
    _write(args.out, "hull_report.json", report_json(res))
    print(report_json({"return_times": res["return_times"],
                       "cover_constants": res["cover_constants"]}), end="")
    return 0


def _cmd_run(args) -> int:
    cfg = ExperimentConfig.load(args.config)
    run_pipeline(cfg, args.out, with_timings=args.timings)
    return 0


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="apxlat", description=__doc__)
    ap.add_argument("--version", action="version", version=f"apxlat {__version__}")
    sub = ap.add_subparsers(dest="command", required=True)

    g = sub.add_parser("generate", help="enumerate a model-set patch")
    g.add_argument("--d", type=int, default=2)
    g.add_argument("--window", default="1")
    g.add_argument("--dim", type=int, default=1)
    g.add_argument("--radius", default="100")
    g.add_argument("--out", default="out")
    g.set_defaults(func=_cmd_generate)

    a = sub.add_parser("analyze", help="analyze a PointPatch CSV")
    a.add_argument("--patch", required=True)
    a.add_argument("--seed", type=int, default=1)
    a.add_argument("--out", default="out")
    a.set_defaults(func=_cmd_analyze)

    q = sub.add_parser("quasi", help="quasimorphism suite")
    q.add_argument("--spec", help="QuasiMorphism JSON path")
    q.add_argument("--pattern", default="ab")
    q.add_argument("--window", default="1")
    q.add_argument("--max-len", type=int, default=6, dest="max_len")
    q.add_argument("--defect-len", type=int, default=8, dest="defect_len")
    q.add_argument("--tests", default="abAB")
    q.add_argument("--out", default="out")
    q.set_defaults(func=_cmd_quasi)

    h = sub.add_parser("hull", help="hull cross-section and return times")
    h.add_argument("--d", type=int, default=2)
    h.add_argument("--window", default="1")
    h.add_argument("--horizon", default="200")
    h.add_argument("--samples", type=int, default=3)
    h.add_argument("--epsilon", default="1/10")
    h.add_argument("--t-max", default="1000", dest="t_max")
    h.add_argument("--seed", type=int, default=1)
    h.add_argument("--out", default="out")
    h.set_defaults(func=_cmd_hull)

    r = sub.add_parser("run", help="run the full pipeline from a config")
    r.add_argument("--config", required=True)
    r.add_argument("--out", default="out")
    r.add_argument("--timings", action="store_true")
    r.set_defaults(func=_cmd_run)
    return ap


def main(argv=None) -> int:
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as exc:
        return 2 if exc.code not in (0, None) else 0
    try:
        return args.func(args)
    except ConfigError as exc:
        for p in exc.problems:
            print(f"config error: {p}", file=sys.stderr)
        return 2
    except (OSError, json.JSONDecodeError) as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    except Exception as exc:  # stage failure
        print(f"stage failure [{args.command}]: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    raise SystemExit(main())
