"""Command-line front end: single-point evaluations, figure-style sweeps with
CSV/JSON output, Monte Carlo validation columns, and a self-check battery.

dB <-> linear conversion happens only here; the library itself works in
linear SNR units throughout.
"""

from __future__ import annotations

import argparse
import concurrent.futures
import json
import math
import os
import sys

from . import apps, fading, incomplete, laplace, mixture, oracles
from .errors import AccuracyError, DomainError
from .fading import FadingModel, model_from_json

__all__ = ["main", "run_sweep", "selfcheck", "PRESETS"]

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_NUMERICAL = 3

_METRICS = ("imgf", "opsc", "spsc", "eps-capacity", "op-interference", "capacity", "aber")


# ---------------------------------------------------------------------------
# model argument plumbing
# ---------------------------------------------------------------------------

def _load_json_arg(text: str) -> dict:
    if text.startswith("@"):
        with open(text[1:], "r", encoding="utf-8") as fh:
            return json.load(fh)
    return json.loads(text)


def _model_from_flags(args, prefix: str = "") -> FadingModel:
    obj = {"kind": getattr(args, prefix + "model")}
    for name in ("kappa", "mu", "m", "eta", "K", "q"):
        val = getattr(args, prefix + name, None)
        if val is not None:
            obj[name] = val
    if getattr(args, prefix + "mean_snr_db", None) is not None:
        obj["mean_snr_db"] = getattr(args, prefix + "mean_snr_db")
    if getattr(args, prefix + "mean_snr", None) is not None:
        obj["mean_snr"] = getattr(args, prefix + "mean_snr")
    return model_from_json(obj)


def _add_model_flags(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--model", required=True, help="fading model kind, e.g. rayleigh, kappa-mu-shadowed")
    parser.add_argument("--kappa", type=float)
    parser.add_argument("--mu", type=float)
    parser.add_argument("--m", type=float)
    parser.add_argument("--eta", type=float)
    parser.add_argument("--K", type=float)
    parser.add_argument("--q", type=float)
    parser.add_argument("--mean-snr-db", dest="mean_snr_db", type=float)
    parser.add_argument("--mean-snr", dest="mean_snr", type=float)


def _fmt(x: float) -> str:
    return f"{x:.12g}"


# ---------------------------------------------------------------------------
# sweep machinery
# ---------------------------------------------------------------------------

def _set_path(tree: dict, dotted: str, value) -> None:
    parts = dotted.split(".")
    node = tree
    for p in parts[:-1]:
        if p not in node or not isinstance(node[p], dict):
            raise DomainError(f"axis field {dotted!r} does not resolve in 'fixed'")
        node = node[p]
    node[parts[-1]] = value


def _axis_values(axis: dict) -> list[float]:
    start, stop, step = float(axis["start"]), float(axis["stop"]), float(axis["step"])
    if step <= 0 or stop < start:
        raise DomainError("axis range must be nonempty with positive step")
    count = int(math.floor((stop - start) / step + 1e-9)) + 1
    return [start + i * step for i in range(count)]


def _eval_metric(metric: str, fixed: dict) -> float:
    if metric == "imgf":
        model = model_from_json(fixed["model"])
        q = incomplete.ImgfQuery(s=float(fixed["s"]), zeta=float(fixed["zeta"]),
                                 tail=fixed.get("tail", "lower"),
                                 deriv_order=int(fixed.get("deriv_order", 0)))
        return incomplete.evaluate(model, q)
    if metric in ("opsc", "spsc"):
        sc = apps.SecrecyScenario(
            bob=model_from_json(fixed["bob"]), eve=model_from_json(fixed["eve"]),
            rate_rs=0.0 if metric == "spsc" else float(fixed.get("rate_rs", 0.0)),
            n_eve_antennas=int(fixed.get("n_eve_antennas", 1)))
        return apps.opsc(sc)
    if metric == "eps-capacity":
        sc = apps.SecrecyScenario(
            bob=model_from_json(fixed["bob"]), eve=model_from_json(fixed["eve"]),
            n_eve_antennas=int(fixed.get("n_eve_antennas", 1)))
        val = apps.eps_outage_capacity(sc, float(fixed["epsilon"]))
        if fixed.get("normalize"):
            val /= math.log2(1.0 + sc.bob.mean_snr)
        return val
    if metric == "op-interference":
        return apps.outage_interference(
            model_from_json(fixed["desired"]), model_from_json(fixed["interference"]),
            float(fixed["gamma_th"]))
    if metric == "capacity":
        sc = apps.CapacityScenario(channel=model_from_json(fixed["channel"]),
                                   cutoff_snr=fixed.get("cutoff_snr"))
        return apps.capacity_side_info(sc)
    if metric == "aber":
        scheme = apps.AdaptiveModScheme(thresholds=tuple(fixed["thresholds"]),
                                        bits_per_region=tuple(fixed["bits_per_region"]))
        return apps.aber_adaptive(model_from_json(fixed["channel"]), scheme)
    raise DomainError(f"unknown metric {metric!r}")


def _eval_mc(metric: str, fixed: dict, validate: dict):
    cfg = oracles.McConfig(n_samples=int(validate.get("n_samples", 1_000_000)),
                           seed=int(validate.get("seed", 20_240_101)),
                           confidence_sigmas=float(validate.get("confidence_sigmas", 3.0)))
    if metric in ("opsc", "spsc"):
        sc = apps.SecrecyScenario(
            bob=model_from_json(fixed["bob"]), eve=model_from_json(fixed["eve"]),
            rate_rs=0.0 if metric == "spsc" else float(fixed.get("rate_rs", 0.0)),
            n_eve_antennas=int(fixed.get("n_eve_antennas", 1)))
        return oracles.mc_opsc(sc, cfg)
    if metric == "op-interference":
        # same computation under the threshold <-> rate substitution
        sc = apps.SecrecyScenario(
            bob=model_from_json(fixed["desired"]),
            eve=model_from_json(fixed["interference"]),
            rate_rs=math.log2(1.0 + float(fixed["gamma_th"])))
        return oracles.mc_opsc(sc, cfg)
    if metric == "aber":
        scheme = apps.AdaptiveModScheme(thresholds=tuple(fixed["thresholds"]),
                                        bits_per_region=tuple(fixed["bits_per_region"]))
        return oracles.mc_aber(model_from_json(fixed["channel"]), scheme, cfg)
    raise DomainError(f"Monte Carlo validation is not available for metric {metric!r}")


def _sweep_point(task: tuple):
    metric, fixed, axis_field, axis_value, validate, curve = task
    fixed = json.loads(json.dumps(fixed))  # deep copy, keeps workers independent
    _set_path(fixed, axis_field, axis_value)
    try:
        row = {"curve": curve, "axis": axis_value, "value": _eval_metric(metric, fixed)}
        if validate is not None:
            est, se = _eval_mc(metric, fixed, validate)
            row["mc_estimate"] = est
            row["mc_std_error"] = se
    except (AccuracyError, DomainError, OverflowError) as exc:
        raise AccuracyError(
            f"sweep failed at {axis_field}={axis_value} (curve {curve!r}): {exc}"
        ) from exc
    return row


def _worker_count() -> int:
    try:
        return max(1, int(os.environ.get("IMGFLIB_WORKERS", "1")))
    except ValueError:
        return 1


def run_sweep(spec: dict) -> list[dict]:
    """Evaluate a sweep specification and return its rows (sorted)."""
    metric = spec.get("metric")
    if metric not in _METRICS:
        raise DomainError(f"metric must be one of {_METRICS}, got {metric!r}")
    axis = spec["axis"]
    fixed = spec["fixed"]
    validate = spec.get("validate")
    curve = spec.get("curve", "")
    tasks = [(metric, fixed, axis["field"], v, validate, curve)
             for v in _axis_values(axis)]
    workers = _worker_count()
    if workers > 1 and len(tasks) > 1:
        with concurrent.futures.ProcessPoolExecutor(max_workers=workers) as pool:
            rows = list(pool.map(_sweep_point, tasks))
    else:
        rows = [_sweep_point(t) for t in tasks]
    rows.sort(key=lambda r: (r["curve"], r["axis"]))
    return rows


def _write_rows(rows: list[dict], path: str, fmt: str, axis_label: str) -> None:
    if fmt == "json":
        with open(path, "w", encoding="utf-8", newline="\n") as fh:
            json.dump(rows, fh, indent=2, sort_keys=True)
            fh.write("\n")
        return
    def quote(cell: str) -> str:
        if "," in cell or '"' in cell:
            return '"' + cell.replace('"', '""') + '"'
        return cell

    has_mc = any("mc_estimate" in r for r in rows)
    header = ["curve", axis_label, "value"] + (["mc_estimate", "mc_std_error"] if has_mc else [])
    lines = [",".join(header)]
    for r in rows:
        cells = [quote(str(r["curve"])), _fmt(r["axis"]), _fmt(r["value"])]
        if has_mc:
            cells += [_fmt(r.get("mc_estimate", math.nan)), _fmt(r.get("mc_std_error", math.nan))]
        lines.append(",".join(cells))
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write("\n".join(lines) + "\n")


# ---------------------------------------------------------------------------
# figure presets
# ---------------------------------------------------------------------------

def _secrecy_sweep(curve: str, bob: dict, eve_db: float, rs: float,
                   lo=0.0, hi=60.0, step=2.0) -> dict:
    return {
        "metric": "opsc",
        "curve": curve,
        "axis": {"field": "bob.mean_snr_db", "start": lo, "stop": hi, "step": step,
                 "unit": "db"},
        "fixed": {"bob": {**bob, "mean_snr_db": lo},
                  "eve": {"kind": "rayleigh", "mean_snr_db": eve_db},
                  "rate_rs": rs},
    }


def _eps_cap_sweep(curve: str, bob: dict, eve_db: float, eps: float,
                   lo=-10.0, hi=50.0, step=2.0) -> dict:
    return {
        "metric": "eps-capacity",
        "curve": curve,
        "axis": {"field": "bob.mean_snr_db", "start": lo, "stop": hi, "step": step,
                 "unit": "db"},
        "fixed": {"bob": {**bob, "mean_snr_db": lo},
                  "eve": {"kind": "rayleigh", "mean_snr_db": eve_db},
                  "epsilon": eps, "normalize": True},
    }


def _preset_specs(name: str) -> list[dict]:
    rs, eve_db = 0.1, 15.0
    if name == "fig1":
        return [
            _secrecy_sweep(f"mu={mu} m={m}",
                           {"kind": "kappa-mu-shadowed", "kappa": 1.5, "mu": mu, "m": m},
                           eve_db, rs)
            for mu in (1, 2, 6) for m in (0.5, 12)
        ]
    if name == "fig2":
        return [
            _secrecy_sweep(f"mu={mu} m={m}",
                           {"kind": "kappa-mu-shadowed", "kappa": 10, "mu": mu, "m": m},
                           eve_db, rs)
            for mu in (1, 2, 6) for m in (0.5, 12)
        ]
    if name == "fig3":
        return [
            _secrecy_sweep(f"K={K} m={m}",
                           {"kind": "rician-shadowed", "K": K, "m": m},
                           eve_db, rs)
            for K in (1.5, 10) for m in (0.5, 12)
        ]
    if name == "fig4":
        return [
            _secrecy_sweep(f"kappa={k} mu={mu}",
                           {"kind": "kappa-mu", "kappa": k, "mu": mu},
                           eve_db, rs)
            for k in (1.5, 10) for mu in (1, 2, 6)
        ]
    if name == "fig5":
        return [
            _secrecy_sweep(f"eta={eta} mu={mu}",
                           {"kind": "eta-mu", "eta": eta, "mu": mu},
                           eve_db, rs)
            for eta in (0.04, 0.9) for mu in (1, 2, 4)
        ]
    if name == "fig6":
        return [
            _eps_cap_sweep(f"kappa={k} mu={mu} eps={eps}",
                           {"kind": "kappa-mu-shadowed", "kappa": k, "mu": mu, "m": 2},
                           -10.0, eps)
            for (k, mu) in ((1.5, 1), (10, 6)) for eps in (0.1, 0.8)
        ]
    if name == "fig7":
        return [
            _eps_cap_sweep(f"eta={eta} mu={mu} eps={eps}",
                           {"kind": "eta-mu", "eta": eta, "mu": mu},
                           -10.0, eps)
            for (eta, mu) in ((0.04, 1), (0.9, 4)) for eps in (0.1, 0.8)
        ]
    if name == "fig8":
        out = []
        for ge_db in (-10.0, 0.0, 15.0):
            out.append({
                "metric": "eps-capacity",
                "curve": f"eve_snr_db={ge_db}",
                "axis": {"field": "epsilon", "start": 0.05, "stop": 0.95, "step": 0.05,
                         "unit": "linear"},
                "fixed": {"bob": {"kind": "kappa-mu", "kappa": 1.5, "mu": 2,
                                   "mean_snr_db": 10.0},
                          "eve": {"kind": "rayleigh", "mean_snr_db": ge_db},
                          "epsilon": 0.05, "normalize": True},
            })
        return out
    raise DomainError(f"unknown preset {name!r}; figures fig1..fig8 are available")


PRESETS = tuple(f"fig{i}" for i in range(1, 9))


# ---------------------------------------------------------------------------
# self-check battery
# ---------------------------------------------------------------------------

def _approx(a: float, b: float, tol: float) -> bool:
    return abs(a - b) <= tol * max(1.0, abs(a), abs(b))


def _selfcheck_list():
    kms = FadingModel.kappa_mu_shadowed(1.5, 2.3, 2.0, 5.0)
    km = FadingModel.kappa_mu(2.0, 1.7, 3.0)
    ray = FadingModel.rayleigh(10.0)

    def complementarity():
        worst = 0.0
        for model in (kms, km, ray):
            for s in (-2.0, -0.4, 0.0):
                for z in (0.5, 3.0, 12.0):
                    lo = incomplete.imgf_lower(model, s, z)
                    up = incomplete.imgf_upper(model, s, z)
                    mv = fading.mgf(model, s)
                    worst = max(worst, abs(lo + up - mv) / mv)
        return worst <= 1e-10, f"max rel defect {worst:.3e}"

    def cdf_identity():
        worst = 0.0
        for model in (kms, km, ray):
            for z in (0.3, 2.0, 9.0):
                worst = max(worst, abs(incomplete.imgf_lower(model, 0.0, z)
                                       - float(fading.cdf_grid(model, [z])[0])))
        return worst <= 1e-10, f"max abs defect {worst:.3e}"

    def reduction_rician_shadowed():
        rs_model = FadingModel.rician_shadowed(3.0, 2.0, 4.0)
        twin = FadingModel.kappa_mu_shadowed(3.0, 1.0, 2.0, 4.0)
        a = incomplete.imgf_lower(rs_model, -0.8, 2.0)
        b = incomplete.imgf_lower(twin, -0.8, 2.0)
        return abs(a - b) <= 1e-12 * abs(a), f"|diff| = {abs(a - b):.3e}"

    def reduction_eta_mu():
        em = FadingModel.eta_mu(0.5, 1.25, 2.0)
        a = incomplete.imgf_lower(em, -0.6, 1.7)
        b = incomplete.imgf_lower_eta_mu_direct(0.5, 1.25, 2.0, -0.6, 1.7)
        return _approx(a, b, 1e-10), f"{a:.15g} vs {b:.15g}"

    def inversion_vs_closed():
        worst = 0.0
        for model in (ray, kms):
            img = fading.laplace_image(model)
            for (s, z) in ((-0.5, 1.0), (-1.5, 4.0)):
                num = laplace.imgf_lower_numeric(img, s, z)
                ref = incomplete.imgf_lower(model, s, z)
                worst = max(worst, abs(num - ref) / abs(ref))
        return worst <= 1e-6, f"max rel diff {worst:.3e}"

    def mixture_vs_cdf():
        worst = 0.0
        for (k, mu, m) in ((0.5, 2, 3), (1.5, 3, 1), (10.0, 6, 2)):
            model = FadingModel.kappa_mu_shadowed(k, mu, m, 2.0)
            mix = mixture.mixture_from_model(model)
            for z in (0.2, 1.0, 4.0, 15.0):
                worst = max(worst, abs(mixture.mixture_cdf(mix, z)
                                       - incomplete.imgf_lower(model, 0.0, z)))
        return worst <= 1e-9, f"max abs diff {worst:.3e}"

    def opsc_rayleigh_closed():
        sc = apps.SecrecyScenario(bob=ray, eve=FadingModel.rayleigh(1.0), rate_rs=0.1)
        alpha = 2.0 ** 0.1 - 1.0
        ref = 1.0 - math.exp(-alpha / 10.0) * 10.0 / (10.0 + 2.0 ** 0.1)
        val = apps.opsc(sc)
        return abs(val - ref) <= 1e-12, f"{val:.12g} vs {ref:.12g}"

    def duality():
        eve = FadingModel.kappa_mu_shadowed(2.0, 2.0, 3.0, 2.0)
        rs = 0.37
        a = apps.opsc(apps.SecrecyScenario(bob=kms, eve=eve, rate_rs=rs))
        b = apps.outage_interference(kms, eve, 2.0 ** rs - 1.0)
        return a == b, f"{a!r} vs {b!r}"

    def capacity_dual_route():
        sc = apps.CapacityScenario(channel=ray)
        c1 = apps.capacity_side_info(sc)
        c2 = apps.capacity_direct(sc)
        return _approx(c1, c2, 1e-6), f"{c1:.10g} vs {c2:.10g}"

    def aber_single_region():
        ch = FadingModel.rayleigh(8.0)
        scheme = apps.AdaptiveModScheme(thresholds=(0.0,), bits_per_region=(4,))
        val = apps.aber_adaptive(ch, scheme)
        ref = 0.2 / (1.0 + 1.5 * 8.0 / 15.0)
        return abs(val - ref) <= 1e-12, f"{val:.12g} vs {ref:.12g}"

    def marcum_bridge():
        from .specfun import Phi3Args, marcum_q, phi3
        mu, aa, bb = 2.7, 5.0, 1.5
        lhs = phi3(Phi3Args(1.0, mu + 1.0, aa, bb)) / math.gamma(mu + 1.0)
        rhs = (math.exp(aa + bb / aa) * aa ** (-mu)
               * (1.0 - marcum_q(mu, math.sqrt(2.0 * bb / aa), math.sqrt(2.0 * aa))))
        return _approx(lhs, rhs, 1e-9), f"{lhs:.12g} vs {rhs:.12g}"

    def mgf_moment():
        worst = 0.0
        for model in (kms, km, ray):
            h = 1e-6
            d = (fading.mgf(model, h) - fading.mgf(model, -h)) / (2.0 * h)
            worst = max(worst, abs(d - model.mean_snr) / model.mean_snr)
        return worst <= 1e-5, f"max mean defect {worst:.3e}"

    return [
        ("complementarity", complementarity),
        ("cdf-identity", cdf_identity),
        ("reduction-rician-shadowed", reduction_rician_shadowed),
        ("reduction-eta-mu", reduction_eta_mu),
        ("inversion-vs-closed-form", inversion_vs_closed),
        ("mixture-vs-cdf", mixture_vs_cdf),
        ("secrecy-outage-closed-form", opsc_rayleigh_closed),
        ("interference-duality", duality),
        ("capacity-dual-route", capacity_dual_route),
        ("aber-single-region", aber_single_region),
        ("marcum-bridge", marcum_bridge),
        ("mgf-first-moment", mgf_moment),
    ]


def selfcheck(out=None) -> int:
    """Run the invariant battery; prints one PASS/FAIL line per check."""
    if out is None:
        out = sys.stdout
    failures = 0
    for name, fn in _selfcheck_list():
        try:
            ok, detail = fn()
        except Exception as exc:  # noqa: BLE001 - report, never hide
            ok, detail = False, f"raised {type(exc).__name__}: {exc}"
        print(f"{'PASS' if ok else 'FAIL'} {name}: {detail}", file=out)
        if not ok:
            failures += 1
    return EXIT_OK if failures == 0 else 1


# ---------------------------------------------------------------------------
# argument parser and entry point
# ---------------------------------------------------------------------------

def _build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="imgflib",
                                description="incomplete-MGF toolkit for generalized fading")
    sub = p.add_subparsers(dest="command", required=True)

    sp = sub.add_parser("imgf", help="evaluate one IMGF point")
    _add_model_flags(sp)
    sp.add_argument("--s", type=float, required=True)
    sp.add_argument("--zeta", type=float, required=True)
    sp.add_argument("--tail", choices=("lower", "upper"), default="lower")
    sp.add_argument("--deriv-order", type=int, default=0)

    for name in ("opsc", "spsc"):
        sp = sub.add_parser(name, help=f"{name} for a secrecy scenario")
        sp.add_argument("--bob", required=True, help="bob model JSON (or @file)")
        sp.add_argument("--eve", required=True, help="eve model JSON (or @file)")
        if name == "opsc":
            sp.add_argument("--rate", type=float, required=True, help="secrecy rate R_S")
        sp.add_argument("--eve-antennas", type=int, default=1)
        sp.add_argument("--validate", type=int, default=None, metavar="N",
                        help="also run Monte Carlo with N samples")
        sp.add_argument("--seed", type=int, default=20240101)

    sp = sub.add_parser("eps-capacity", help="epsilon-outage secrecy capacity")
    sp.add_argument("--bob", required=True)
    sp.add_argument("--eve", required=True)
    sp.add_argument("--epsilon", type=float, required=True)
    sp.add_argument("--eve-antennas", type=int, default=1)
    sp.add_argument("--normalize", action="store_true",
                    help="divide by log2(1 + mean bob SNR)")

    sp = sub.add_parser("op-interference", help="outage with interference and noise")
    sp.add_argument("--desired", required=True)
    sp.add_argument("--interference", required=True)
    sp.add_argument("--gamma-th", type=float, required=True)

    sp = sub.add_parser("capacity", help="capacity with TX/RX side information")
    sp.add_argument("--channel", required=True)
    sp.add_argument("--cutoff", type=float, default=None)

    sp = sub.add_parser("aber", help="adaptive-modulation average BER")
    sp.add_argument("--channel", required=True)
    sp.add_argument("--thresholds", required=True,
                    help="comma-separated ascending SNR thresholds (linear)")
    sp.add_argument("--bits", required=True, help="comma-separated bits per region")

    sp = sub.add_parser("sweep", help="grid sweep from a spec file or preset")
    group = sp.add_mutually_exclusive_group(required=True)
    group.add_argument("--spec", help="sweep spec JSON file")
    group.add_argument("--preset", choices=PRESETS)
    sp.add_argument("--out", help="output path (overrides the spec file)")
    sp.add_argument("--format", choices=("csv", "json"), default=None)
    sp.add_argument("--validate", type=int, default=None, metavar="N")
    sp.add_argument("--seed", type=int, default=20240101)

    sub.add_parser("selfcheck", help="run the invariant battery")
    return p


def _cmd_imgf(args) -> int:
    model = _model_from_flags(args)
    q = incomplete.ImgfQuery(s=args.s, zeta=args.zeta, tail=args.tail,
                             deriv_order=args.deriv_order)
    print(_fmt(incomplete.evaluate(model, q)))
    return EXIT_OK


def _cmd_secrecy(args, rate: float) -> int:
    sc = apps.SecrecyScenario(bob=model_from_json(_load_json_arg(args.bob)),
                              eve=model_from_json(_load_json_arg(args.eve)),
                              rate_rs=rate, n_eve_antennas=args.eve_antennas)
    val = apps.opsc(sc)
    if args.validate:
        est, se = oracles.mc_opsc(sc, oracles.McConfig(n_samples=args.validate,
                                                       seed=args.seed))
        print(f"{_fmt(val)} mc={_fmt(est)} mc_std_error={_fmt(se)}")
    else:
        print(_fmt(val))
    return EXIT_OK


def _dispatch(args) -> int:
    cmd = args.command
    if cmd == "imgf":
        return _cmd_imgf(args)
    if cmd == "opsc":
        return _cmd_secrecy(args, args.rate)
    if cmd == "spsc":
        return _cmd_secrecy(args, 0.0)
    if cmd == "eps-capacity":
        sc = apps.SecrecyScenario(bob=model_from_json(_load_json_arg(args.bob)),
                                  eve=model_from_json(_load_json_arg(args.eve)),
                                  n_eve_antennas=args.eve_antennas)
        val = apps.eps_outage_capacity(sc, args.epsilon)
        if args.normalize:
            val /= math.log2(1.0 + sc.bob.mean_snr)
        print(_fmt(val))
        return EXIT_OK
    if cmd == "op-interference":
        val = apps.outage_interference(
            model_from_json(_load_json_arg(args.desired)),
            model_from_json(_load_json_arg(args.interference)), args.gamma_th)
        print(_fmt(val))
        return EXIT_OK
    if cmd == "capacity":
        sc = apps.CapacityScenario(channel=model_from_json(_load_json_arg(args.channel)),
                                   cutoff_snr=args.cutoff)
        print(_fmt(apps.capacity_side_info(sc)))
        return EXIT_OK
    if cmd == "aber":
        scheme = apps.AdaptiveModScheme(
            thresholds=tuple(float(t) for t in args.thresholds.split(",")),
            bits_per_region=tuple(int(b) for b in args.bits.split(",")))
        print(_fmt(apps.aber_adaptive(model_from_json(_load_json_arg(args.channel)),
                                      scheme)))
        return EXIT_OK
    if cmd == "sweep":
        return _cmd_sweep(args)
    if cmd == "selfcheck":
        return selfcheck()
    raise DomainError(f"unknown command {cmd!r}")


def _cmd_sweep(args) -> int:
    if args.spec:
        with open(args.spec, "r", encoding="utf-8") as fh:
            spec = json.load(fh)
        specs = [spec]
        out_path = args.out or spec.get("output", {}).get("path")
        fmt = args.format or spec.get("output", {}).get("format", "csv")
    else:
        specs = _preset_specs(args.preset)
        out_path = args.out
        fmt = args.format or "csv"
    if not out_path:
        raise DomainError("an output path is required (--out or spec output.path)")
    if args.validate:
        for s in specs:
            s["validate"] = {"n_samples": args.validate, "seed": args.seed}
    rows = []
    for s in specs:
        rows.extend(run_sweep(s))
    rows.sort(key=lambda r: (r["curve"], r["axis"]))
    axis_label = specs[0]["axis"].get("field", "axis")
    _write_rows(rows, out_path, fmt, axis_label)
    print(f"wrote {len(rows)} rows to {out_path}")
    return EXIT_OK


def main(argv=None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_CONFIG if exc.code not in (0, None) else 0
    try:
        return _dispatch(args)
    except (json.JSONDecodeError, FileNotFoundError, KeyError, TypeError) as exc:
        print(f"configuration error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except DomainError as exc:
        print(f"configuration error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except (AccuracyError, OverflowError) as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL


if __name__ == "__main__":
    sys.exit(main())
