"""Batch verification harness: every check in the library as a subcommand.

Reports are JSON (optionally mirrored to CSV for the table-like runs)
and deterministic for a fixed config and seed, except for the timestamp
field.  Exit codes: 0 all checks passed, 1 a check missed its tolerance,
2 invalid configuration, 3 numerical failure.
"""

from __future__ import annotations

import argparse
import csv
import datetime
import json
import math
import os
import sys

import numpy as np

from .automorphic import PeriodicDistribution, p0_weighted_norm, whittaker_eval
from .coeffs import generate, parse_model_spec
from .errors import (BadParameterRange, CheckFailed, ConfigInvalid,
                     ConstantTermPresent, EpsilonBarrier, NormlabError,
                     OutOfRange, ParityMismatch, RangeTooLarge)
from .fourier import (series_coefficient_quadrature, signed_sin_power_series,
                      sin_power_series)
from .group import (KanCoords, decompose_kan, decompose_kna, measure_weight,
                    random_elements, rotation, diagonal, unipotent,
                    weyl_flip, weyl_flip_closed_form)
from .modular import CuspProfile
from .norms import (comp_norm, g_normalizer, g_normalizer_closed,
                    intertwine_apply, intertwine_constant, triple_norm)
from .principal import CayleySum, ReprParams, SmoothVector, ktype_eval
from .siegel import (ConstantFunction, RegionSpec, WhittakerModel,
                     eisenstein_scenario, floor_sandwich, main2_check,
                     omega_a_norm, region_norm_full, region_norm_minus,
                     region_norm_plus_direct, region_norm_plus_via_weyl,
                     region_norm_plus_weyl_exact)

TESTDATA = os.path.join(os.path.dirname(os.path.dirname(
    os.path.dirname(os.path.abspath(__file__)))), "testdata")


def _default_tol() -> float:
    return float(os.environ.get("NORMLAB_TOL", "1e-8"))


def _apply_thread_env():
    n = os.environ.get("NORMLAB_THREADS")
    if n:
        for var in ("OMP_NUM_THREADS", "OPENBLAS_NUM_THREADS",
                    "MKL_NUM_THREADS"):
            os.environ.setdefault(var, n)


def _check(name, value, bound, invariant):
    return {"name": name, "value": float(value), "bound": float(bound),
            "ok": bool(value <= bound), "invariant": invariant}


def _flag(name, ok, invariant):
    return {"name": name, "ok": bool(ok), "invariant": invariant}


def _parse_a1(text):
    if str(text).lower() in ("inf", "infinity"):
        return math.inf
    a1 = float(text)
    if a1 <= 0:
        raise ConfigInvalid(f"a1 must be positive or 'inf', got {text}")
    return a1


def _tau_from(p):
    dist = generate(parse_model_spec(p["model"]))
    u = complex(p["u0"], p["u1"])
    return PeriodicDistribution(dist.period, dist.coeffs,
                                ReprParams(u, p["parity"]))


def _vector_from(p):
    u = complex(p["u0"], p["u1"])
    return SmoothVector.single(p["m"], -u, p["parity"])


def _profile_from(p, tol):
    spec = p["profile"]
    if spec == "delta":
        return CuspProfile()
    if spec.startswith("constant"):
        c = float(spec.partition(":")[2] or 1.0)
        return ConstantFunction(c)
    if spec != "model":
        raise ConfigInvalid(f"unknown profile {spec!r} "
                            "(use delta, constant[:c], or model)")
    return WhittakerModel(_tau_from(p), _vector_from(p),
                          assert_weyl=bool(p["assert_weyl"]), tol=tol)


# ---------------------------------------------------------------------------
# subcommand handlers; each takes the merged parameter dict and the
# working tolerance, and returns a report dict
# ---------------------------------------------------------------------------

def cmd_decompose(p, tol):
    gs = random_elements(p["n"], p["seed"])
    kan_err = kna_err = chart_err = 0.0
    for g in gs:
        kan = decompose_kan(g)
        kna = decompose_kna(g)
        kan_err = max(kan_err, float(np.max(np.abs(
            kan.reconstruct().matrix - g.matrix))))
        kna_err = max(kna_err, float(np.max(np.abs(
            kna.reconstruct().matrix - g.matrix))))
        chart_err = max(chart_err, abs(kna.T - kan.a ** 2 * kan.t))
    checks = [
        _check("kan-roundtrip", kan_err, 1e-10,
               "KAN reconstruction reproduces g entrywise"),
        _check("kna-roundtrip", kna_err, 1e-10,
               "KNA reconstruction reproduces g entrywise"),
        _check("chart-relation", chart_err, 1e-10,
               "charts share (theta, a) with T = a^2 t"),
    ]
    return {"n": p["n"], "seed": p["seed"], "checks": checks}


def cmd_measure_check(p, tol):
    rng = np.random.default_rng(p["seed"])
    h = 1e-6
    jac_err = weyl_err = weight_err = 0.0
    for _ in range(p["n"]):
        th = rng.uniform(0.0, 2.0 * math.pi)
        a = math.exp(rng.normal(0.0, 0.7))
        t = rng.normal(0.0, 1.0)
        g0 = rotation(th) @ diagonal(a) @ unipotent(t)
        g1 = rotation(th) @ diagonal(a) @ unipotent(t + h)
        dT = decompose_kna(g1).T - decompose_kna(g0).T
        # dT/dt = a^2 is exactly the KAN/KNA density ratio
        jac_err = max(jac_err, abs(dT / h - a * a) / (a * a))
        kan = decompose_kan(g0)
        ratio = measure_weight("KAN", kan) / measure_weight(
            "KNA", decompose_kna(g0))
        weight_err = max(weight_err, abs(ratio - a * a) / (a * a))
        T = a * a * t
        fl = weyl_flip(T, a)
        Tc, ac = weyl_flip_closed_form(T, a)
        weyl_err = max(weyl_err, abs(fl.Tprime - Tc) + abs(fl.aprime - ac))
    checks = [
        _check("jacobian", jac_err, 1e-4,
               "dT = a^2 dt links the KAN and KNA densities"),
        _check("measure-weights", weight_err, 1e-12,
               "declared chart densities match the Jacobian"),
        _check("weyl-closed-form", weyl_err, 1e-9,
               "flip sends (T, a) to (-T, sqrt(T^2+1)/a)"),
    ]
    return {"n": p["n"], "seed": p["seed"], "checks": checks}


def cmd_intertwine(p, tol):
    u = complex(p["u"], p["u1"])
    m = p["m"]
    c = intertwine_constant(m, u)
    report = {"u": p["u"], "m": m,
              "c": [c.real, c.imag] if isinstance(c, complex) else
              [float(np.real(c)), float(np.imag(c))],
              "checks": [_flag("closed-forms-agree", True,
                               "the two Gamma closed forms agree to 1e-10")]}
    if p["numeric"]:
        xs = np.linspace(-2.0, 2.0, 9)
        av = intertwine_apply(SmoothVector.single(2 * m, u), u.real, xs, tol)
        target = ktype_eval(2 * m, -u, "+", xs)
        ratios = av / target
        spread = float(np.max(np.abs(ratios - np.mean(ratios)))
                       / abs(np.mean(ratios)))
        err = abs(np.mean(ratios) - c) / abs(c)
        report["numericRatio"] = [float(np.mean(ratios).real),
                                  float(np.mean(ratios).imag)]
        report["checks"] += [
            _check("x-independence", spread, 1e-5,
                   "intertwined K-type is a constant multiple of its dual"),
            _check("eigenvalue-match", err, 1e-5,
                   "numeric ratio matches the Gamma closed form"),
        ]
    return report


def cmd_gnorm(p, tol):
    u = p["u"]
    gq = g_normalizer(u)
    gc = g_normalizer_closed(u)
    err = abs(gq - gc) / (1.0 + abs(gc))
    return {"u": u, "G": gq, "G_closed": gc,
            "checks": [_check("pairing-vs-closed", err, 1e-8,
                              "Gaussian pairing reproduces the Gamma form")]}


def cmd_comp_norm_scan(p, tol):
    u = p["u"]
    rep_u = complex(p["u0"], p["u1"])
    rows = []
    for m in range(0, p["m_max"] + 1, 2 * max(1, p["step"])):
        nv = comp_norm(CayleySum.ktype(m, rep_u), u, tol)
        normalized = nv.value * max(m, 1) ** u
        rows.append({"m": m, "norm_sq": nv.value, "tail": nv.tailBound,
                     "normalized": normalized})
    vals = [r["normalized"] for r in rows if r["m"] > 0]
    spread = max(vals) / min(vals) if vals else 1.0
    return {"u": u, "rows": rows,
            "checks": [_check("normalized-spread", spread, 8.0,
                              "m^u * ||v_m||^2_{C_u} stays bounded "
                              "above and below")]}


def cmd_triple_norm(p, tol):
    rep_u = complex(p["u0"], p["u1"])
    ms = [int(x) for x in str(p["ms"]).split(",")]
    v = SmoothVector(ReprParams(rep_u, p["parity"]),
                     {m: 1.0 + 0.0j for m in ms})
    nv = triple_norm(v, p["u"], tol)
    return {"u": p["u"], "ms": ms, "norm_sq": nv.value,
            "tail": nv.tailBound,
            "checks": [_flag("tail-controlled", nv.tail_ok,
                             "declared tail below 1% of the value")]}


def cmd_sin_series(p, tol):
    s = complex(p["s"], p["s1"])
    fn = signed_sin_power_series if p["signed"] else sin_power_series
    table = fn(s, p["K"])
    rows = [{"j": j, "re": c.real, "im": c.imag,
             "err": table.errors.get(j, 0.0)}
            for j, c in sorted(table.coeffs.items())]
    j_probe = max(table.coeffs)
    oracle = series_coefficient_quadrature(s, j_probe)
    err = abs(table.coeffs[j_probe] - oracle)
    # the Richardson-declared error governs singular exponents, where
    # midpoint sampling converges like N^{-(1+Re s)}
    bound = 1e-7 + 4.0 * table.errors.get(j_probe, 0.0)
    return {"s": [s.real, s.imag], "K": p["K"], "signed": bool(p["signed"]),
            "decayConstant": table.decay_constant(), "rows": rows,
            "checks": [_check("quadrature-oracle", err, bound,
                              "FFT coefficient matches direct quadrature "
                              "within its declared error")]}


def cmd_whittaker_eval(p, tol):
    tau = _tau_from(p)
    v = _vector_from(p)
    ev = whittaker_eval(tau, v, KanCoords(p["theta"], p["a"], p["t"]), tol)
    return {"a": p["a"], "t": p["t"], "theta": p["theta"],
            "value": [ev.value.real, ev.value.imag],
            "truncation": ev.truncation, "tailEstimate": ev.tailEstimate,
            "checks": [_flag("tail-controlled", ev.tail_ok,
                             "coefficient tail below 1% of the value")]}


def cmd_verify_whittaker(p, tol):
    if p["eps"] == 0.0:
        raise EpsilonBarrier(
            "eps = 0 is outside both cases of the weighted estimate; "
            "the bound degenerates as eps -> 0")
    a1 = _parse_a1(p["a1"])
    tau = _tau_from(p)
    v = _vector_from(p)
    spectral = p0_weighted_norm(tau, v, a1, p["eps"], tol, "spectral")
    geometric = p0_weighted_norm(tau, v, a1, p["eps"], tol, "geometric")
    rel = abs(spectral - geometric) / max(abs(spectral), 1e-300)
    bound = 1e-6 if math.isfinite(a1) else 5e-3
    return {"eps": p["eps"], "a1": "inf" if math.isinf(a1) else a1,
            "spectral": spectral, "geometric": geometric,
            "relError": rel,
            "checks": [_check("dual-path", rel, bound,
                              "spectral identity equals direct quadrature")]}


def cmd_coeff_bounds(p, tol):
    tau = generate(parse_model_spec(p["model"]))
    eps = p["eps"]
    u0 = 0.0
    ks = sorted({abs(j) / tau.period for j in tau.coeffs})
    if len(ks) < 8:
        raise ConfigInvalid("need at least 8 support points for a slope fit")
    S, acc = [], 0.0
    seen = set()
    for k in ks:
        for j in tau.coeffs:
            if abs(j) / tau.period <= k and j not in seen:
                seen.add(j)
                acc += (abs(j) / tau.period) ** (0.5 * eps - 1.0 - u0) \
                    * abs(tau.coeffs[j]) ** 2
        S.append(acc)
    half = len(ks) // 2
    lk = np.log(ks[half:])
    lS = np.log(S[half:])
    slope = float(np.polyfit(lk, lS, 1)[0])
    C = max(s / k ** (0.5 * eps) for k, s in zip(ks, S))
    return {"eps": eps, "k_max": ks[-1], "slope": slope,
            "fittedConstant": C,
            "checks": [_check("partial-sum-slope", slope, 0.5 * eps + 0.1,
                              "partial sums grow no faster than k^{eps/2}")]}


def cmd_region_norm(p, tol):
    f = _profile_from(p, tol)
    spec = RegionSpec(p["T1"], p["eps"], f.period, p["a1"], p["side"])
    report = {"T1": p["T1"], "eps": p["eps"], "a1": p["a1"],
              "side": p["side"], "checks": []}
    if p["side"] == "minus":
        value = region_norm_minus(f, spec, tol)
        lo, hi = floor_sandwich(f, spec, tol)
        report.update(value=value, floorLower=lo, floorUpper=hi)
        slack = tol * max(abs(value), 1.0)
        report["checks"].append(_flag(
            "floor-sandwich", lo - slack <= value <= hi + slack,
            "exact value lies between the floor bounds"))
    elif p["side"] == "plus":
        if f.flags.hasWeyl:
            value = region_norm_plus_weyl_exact(f, spec, tol)
        else:
            value = region_norm_plus_direct(f, spec, tol)
        report.update(value=value)
    else:
        report.update(value=region_norm_full(f, spec, tol))
    return report


def cmd_weyl_bracket(p, tol):
    f = _profile_from(p, tol)
    if not f.flags.hasWeyl:
        raise ConfigInvalid("weyl-bracket needs a Weyl-symmetric profile")
    spec = RegionSpec(p["T1"], p["eps"], f.period, p["a1"], "plus")
    bracket = region_norm_plus_via_weyl(f, spec, tol)
    if isinstance(f, CuspProfile):
        value = region_norm_plus_direct(f, spec, tol)
    else:
        value = region_norm_plus_weyl_exact(f, spec, tol)
    slack = 1e-8 * max(abs(value), 1.0)
    inside = bracket["lower"] - slack <= value <= bracket["upper"] + slack
    return {"T1": p["T1"], "eps": p["eps"], "a1": p["a1"],
            "lower": bracket["lower"], "upper": bracket["upper"],
            "value": value,
            "checks": [_flag("bracket-encloses", inside,
                             "plus-region value sits inside the "
                             "Weyl-transported bounds")]}


def cmd_main2_scan(p, tol):
    eps_list = [float(x) for x in str(p["eps_list"]).split(",")]
    if any(e == 0.0 for e in eps_list):
        raise EpsilonBarrier(
            "the restriction-norm bound degenerates at eps = 0")
    tau = _tau_from(p)
    v = _vector_from(p)
    rows = []
    for eps in eps_list:
        rep = main2_check(tau, v, p["T1"], eps, tol)
        rows.append({"eps": eps, "lhs": rep["lhs"], "rhs": rep["rhsNorm"],
                     "ratio": rep["ratio"], "target_u": rep["target_u"]})
    ratios = [r["ratio"] for r in rows]
    monotone = all(r2 > r1 for r1, r2 in zip(ratios, ratios[1:]))
    return {"T1": p["T1"], "rows": rows, "monotoneIncreasing": monotone,
            "checks": [_flag("ratios-finite",
                             all(math.isfinite(r) for r in ratios),
                             "fitted ratio defined at every eps")]}


def cmd_omega_norm(p, tol):
    parts = [float(x) for x in str(p["omega"]).split(",")]
    if len(parts) != 4:
        raise ConfigInvalid("omega must be th_lo,th_hi,T_lo,T_hi")
    f = _profile_from(p, tol)
    value = omega_a_norm(f, tuple(parts), p["eps"], tol)
    return {"omega": parts, "eps": p["eps"], "value": value,
            "checks": [_flag("finite", math.isfinite(value),
                             "compact omega gives a finite weighted norm")]}


def cmd_eisenstein(p, tol):
    dist = generate(parse_model_spec(
        f"divisor:N={p['N']},lam={p['lam']}"))
    rep = eisenstein_scenario(dist, p["lam"], p["eps"], p["T1"], tol)
    return {"N": p["N"], "lam": p["lam"], "eps": p["eps"], "T1": p["T1"],
            "lhs": rep["lhs"], "rhs": rep["rhsNorm"], "ratio": rep["ratio"],
            "partialSum": rep["partial_sum"],
            "checks": [_flag("partial-sums-summable", rep["summable"],
                             "materialized coefficient sums converge")]}


def cmd_gen_coeffs(p, tol):
    if not p["out_coeffs"]:
        raise ConfigInvalid("gen-coeffs needs --out-coeffs PATH")
    dist = generate(parse_model_spec(p["model"]))
    dist.to_file(p["out_coeffs"])
    return {"model": p["model"], "path": p["out_coeffs"],
            "count": len(dist.coeffs), "checks": []}


def cmd_regress(p, tol):
    root = p["tables"] or TESTDATA
    names = sorted(n for n in os.listdir(root) if n.endswith(".json"))
    if not names:
        raise ConfigInvalid(f"no regression tables under {root}")
    checks = []
    for name in names:
        with open(os.path.join(root, name)) as fh:
            table = json.load(fh)
        worst = 0.0
        for entry in table["entries"]:
            pars, frozen = entry["params"], entry["value"]
            if table["kind"] == "intertwine":
                got = intertwine_constant(pars["m"], complex(*pars["u"]))
                err = abs(got - complex(*frozen)) / (1.0 + abs(got))
            elif table["kind"] == "gnorm":
                got = g_normalizer(pars["u"])
                err = abs(got - frozen) / (1.0 + abs(got))
            elif table["kind"] == "comp-norm":
                got = comp_norm(CayleySum.ktype(pars["m"],
                                                complex(*pars["rep_u"])),
                                pars["u"], tol).value
                err = abs(got - frozen) / (1.0 + abs(got))
            else:
                raise ConfigInvalid(f"unknown table kind {table['kind']!r}")
            worst = max(worst, err)
        checks.append(_check(name, worst, table["tol"],
                             "recomputed values match the frozen table"))
    return {"tables": names, "checks": checks}


# ---------------------------------------------------------------------------
# argument plumbing
# ---------------------------------------------------------------------------

_COMMON = [
    ("config", str, None, "JSON config file; flags override its values"),
    ("out", str, None, "write the JSON report here"),
    ("csv", str, None, "mirror tabular rows to this CSV file"),
    ("tol", float, None, "working tolerance (default env NORMLAB_TOL)"),
]

_MODEL_ARGS = [
    ("model", str, "finite:b1=1", "coefficient model spec"),
    ("u0", float, 0.0, "Re(u) of the distribution's representation"),
    ("u1", float, 1.0, "Im(u) of the distribution's representation"),
    ("parity", str, "+", "representation parity"),
    ("m", int, 0, "K-type weight of the pairing vector"),
]

_PROFILE_ARGS = _MODEL_ARGS + [
    ("profile", str, "model", "integrand: model | delta | constant[:c]"),
    ("assert-weyl", bool, False, "assert Weyl symmetry of the model"),
]

SUBCOMMANDS = {
    "decompose": (cmd_decompose, [
        ("n", int, 10000, "number of sampled group elements"),
        ("seed", int, 1, "RNG seed")]),
    "measure-check": (cmd_measure_check, [
        ("n", int, 200, "number of sampled points"),
        ("seed", int, 2, "RNG seed")]),
    "intertwine": (cmd_intertwine, [
        ("u", float, 0.5, "Re(u)"),
        ("u1", float, 0.0, "Im(u)"),
        ("m", int, 0, "half-index: acts on the weight-2m K-type"),
        ("numeric", bool, False, "also apply the kernel numerically")]),
    "gnorm": (cmd_gnorm, [
        ("u", float, 0.5, "normalizer argument")]),
    "comp-norm-scan": (cmd_comp_norm_scan, [
        ("u", float, -0.5, "norm index"),
        ("u0", float, 0.0, "Re(u) of the representation"),
        ("u1", float, 0.0, "Im(u) of the representation"),
        ("m-max", int, 16, "largest K-type weight"),
        ("step", int, 1, "weight stride (in units of 2)")]),
    "triple-norm": (cmd_triple_norm, [
        ("u", float, -0.25, "norm index"),
        ("u0", float, 0.0, "Re(u) of the representation"),
        ("u1", float, 1.0, "Im(u) of the representation"),
        ("parity", str, "+", "representation parity"),
        ("ms", str, "0", "comma-separated K-type weights, unit coeffs")]),
    "sin-series": (cmd_sin_series, [
        ("s", float, -0.5, "Re(s) of the multiplier exponent"),
        ("s1", float, 0.0, "Im(s)"),
        ("K", int, 8, "number of harmonics per side"),
        ("signed", bool, False, "sign-twisted odd-harmonic table")]),
    "whittaker-eval": (cmd_whittaker_eval, _MODEL_ARGS + [
        ("a", float, 1.0, "diagonal coordinate"),
        ("t", float, 0.0, "unipotent coordinate"),
        ("theta", float, 0.0, "K coordinate")]),
    "verify-whittaker": (cmd_verify_whittaker, _MODEL_ARGS + [
        ("eps", float, 1.0, "weight exponent (nonzero)"),
        ("a1", str, "1.0", "upper cutoff; 'inf' allowed")]),
    "coeff-bounds": (cmd_coeff_bounds, [
        ("model", str, "divisor:N=256,lam=0.5", "coefficient model spec"),
        ("eps", float, 0.5, "growth exponent to test")]),
    "region-norm": (cmd_region_norm, _PROFILE_ARGS + [
        ("T1", float, 1.0, "unipotent truncation"),
        ("eps", float, 0.5, "weight exponent"),
        ("a1", float, 1.0, "diagonal cutoff"),
        ("side", str, "minus", "minus | plus | full")]),
    "weyl-bracket": (cmd_weyl_bracket, _PROFILE_ARGS + [
        ("T1", float, 1.0, "unipotent truncation"),
        ("eps", float, 0.5, "weight exponent"),
        ("a1", float, 1.0, "diagonal cutoff")]),
    "main2-scan": (cmd_main2_scan, _MODEL_ARGS + [
        ("T1", float, 1.0, "unipotent truncation"),
        ("eps-list", str, "0.5,0.25,0.125,0.0625",
         "comma-separated eps values (no zeros)")]),
    "omega-norm": (cmd_omega_norm, _PROFILE_ARGS + [
        ("omega", str, "0,6.283185307179586,0,1",
         "window th_lo,th_hi,T_lo,T_hi"),
        ("eps", float, 0.5, "weight exponent")]),
    "eisenstein": (cmd_eisenstein, [
        ("N", int, 64, "materialized coefficient range"),
        ("lam", float, 0.5, "spectral parameter"),
        ("eps", float, 0.5, "weight exponent"),
        ("T1", float, 1.0, "unipotent truncation")]),
    "gen-coeffs": (cmd_gen_coeffs, [
        ("model", str, "ramanujan-tau:N=100", "coefficient model spec"),
        ("out-coeffs", str, None, "coefficient file to write")]),
    "regress": (cmd_regress, [
        ("tables", str, None, "directory of frozen tables "
         "(default: the packaged testdata)")]),
}


def _build_parser():
    parser = argparse.ArgumentParser(
        prog="normlab",
        description="verification harness for weighted L2 norms of "
                    "SL(2,R) principal-series data")
    subs = parser.add_subparsers(dest="subcommand", required=True)
    for name, (_, args) in SUBCOMMANDS.items():
        sp = subs.add_parser(name)
        for arg, typ, _, help_ in _COMMON + args:
            flag = "--" + arg.replace("_", "-")
            if typ is bool:
                sp.add_argument(flag, action=argparse.BooleanOptionalAction,
                                default=None, help=help_)
            else:
                sp.add_argument(flag, type=typ, default=None, help=help_)
    return parser


def _merge_params(ns):
    """defaults < config file < explicit flags."""
    _, declared = SUBCOMMANDS[ns.subcommand]
    params = {arg.replace("-", "_"): default
              for arg, _, default, _ in _COMMON + declared}
    if ns.config is not None:
        try:
            with open(ns.config) as fh:
                loaded = json.load(fh)
        except (OSError, json.JSONDecodeError) as exc:
            raise ConfigInvalid(f"cannot read config {ns.config}: {exc}")
        for key, val in loaded.items():
            key = key.replace("-", "_")
            if key == "subcommand":
                continue
            if key not in params:
                raise ConfigInvalid(f"unknown config key {key!r}")
            params[key] = val
    for key, val in vars(ns).items():
        if key != "subcommand" and val is not None:
            params[key] = val
    return params


def _emit(report, params):
    text = json.dumps(report, indent=1, sort_keys=True)
    if params["out"]:
        with open(params["out"], "w") as fh:
            fh.write(text + "\n")
    else:
        print(text)
    if params["csv"] and "rows" in report:
        rows = report["rows"]
        with open(params["csv"], "w", newline="") as fh:
            writer = csv.DictWriter(fh, fieldnames=list(rows[0]))
            writer.writeheader()
            writer.writerows(rows)
    for c in report["checks"]:
        status = "PASS" if c["ok"] else "FAIL"
        tail = "" if c["ok"] else f"  [{c['invariant']}]"
        print(f"{status} {report['subcommand']}:{c['name']}{tail}",
              file=sys.stderr)


def run(argv=None) -> int:
    ns = _build_parser().parse_args(argv)
    params = _merge_params(ns)
    tol = params["tol"] if params["tol"] is not None else _default_tol()
    handler, _ = SUBCOMMANDS[ns.subcommand]
    report = handler(params, tol)
    report["subcommand"] = ns.subcommand
    report["tol"] = tol
    report["ok"] = all(c["ok"] for c in report["checks"])
    report["timestamp"] = datetime.datetime.now(
        datetime.timezone.utc).isoformat()
    _emit(report, params)
    return 0 if report["ok"] else 1


def main(argv=None) -> int:
    _apply_thread_env()
    try:
        return run(argv)
    except (ConfigInvalid, EpsilonBarrier, OutOfRange, BadParameterRange,
            ParityMismatch, RangeTooLarge, ConstantTermPresent) as exc:
        print(f"normlab: invalid configuration: {exc}", file=sys.stderr)
        return 2
    except CheckFailed as exc:
        print(f"normlab: check failed: {exc}", file=sys.stderr)
        return 1
    except NormlabError as exc:
        print(f"normlab: numerical failure: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
