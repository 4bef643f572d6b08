"""Stage functions behind the command-line tool.

Each stage takes a resolved config (see :mod:`dnls_painleve.config`) and
returns plain data; file writing is left to the caller.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from . import __version__
from .asymptotic import OutOfRegionError, Predictor
from .config import config_hash
from .evolver import EvolutionState, EvolverParams, evolve, headline_params, sample_field
from .painleve import airy, solve_pii
from .phase import Case, audit_signature, fit_power, remainder_sup, x_from_s
from .scatdata import ScatteringData, assemble, default_real_samples
from .scattering import Scatterer, make_datum


def cases_of(cfg: dict, override: str | None = None) -> list[Case]:
    tag = override or cfg["case"]
    if tag == "both":
        return [Case.I, Case.II]
    return [Case.parse(tag)]


def build_datum(cfg: dict):
    d = cfg["datum"]
    return make_datum(d["kind"], L=d["L"], dx=d["dx"], amplitude=d["amplitude"], width=d["width"],
                      center=d["center"], background_tolerance=d["background_tolerance"])


def tolerances(cfg: dict) -> dict:
    return {"painleve_rtol": cfg["painleve"]["rtol"], "painleve_atol": cfg["painleve"]["atol"],
            "jost_step": cfg["scattering"]["jost_step"], "evolver_dt": cfg["evolver"]["dt"]}


def header(cfg: dict, **extra) -> dict:
    out = {"config_hash": config_hash(cfg), "version": __version__}
    out.update(tolerances(cfg))
    out.update(extra)
    return out


def scatter(cfg: dict) -> ScatteringData:
    sc_cfg = cfg["scattering"]
    sc = Scatterer(build_datum(cfg), h=sc_cfg["jost_step"], exclusion=sc_cfg["exclusion"], cutoff=sc_cfg["cutoff"])
    z = default_real_samples(int(sc_cfg["n_samples"]), sc_cfg["z_max"])
    return assemble(sc, z, extra={"config_hash": config_hash(cfg), "version": __version__})


def airy_footer(table, s_lo: float = 5.0, s_hi: float = 9.0) -> dict:
    """Relative deviation of u from kappa Ai on [s_lo, s_hi] (linear regime)."""
    if table.kappa == 0.0:
        return {"airy_check": "PASS", "airy_max_rel_dev": 0.0}
    s = np.linspace(s_lo, s_hi, 81)
    ai, _ = airy(s)
    dev = float(np.max(np.abs(table.u_at(s) / (table.kappa * ai) - 1.0)))
    return {"airy_check": "PASS" if dev < 1e-3 else "FAIL", "airy_max_rel_dev": dev}


def painleve(cfg: dict, kappa: float | None = None, s_min: float | None = None, s_max: float | None = None):
    p = cfg["painleve"]
    return solve_pii(p["kappa"] if kappa is None else kappa, p["s_min"] if s_min is None else s_min,
                     p["s_max"] if s_max is None else s_max, rtol=p["rtol"], atol=p["atol"], spacing=p["spacing"])


# --------------------------------------------------------------------------
# predictions


@dataclass
class PredictionRow:
    case: Case
    s: float
    t: float
    x: float
    pred: object | None
    identity_defect: float
    flag: str = ""


def predict(cfg: dict, sd: ScatteringData, case_override: str | None = None, **predictor_kw) -> list[PredictionRow]:
    rows = []
    for case in cases_of(cfg, case_override):
        P = Predictor(sd, case, cfg["region_C"], s_max=cfg["painleve"]["s_max"], **predictor_kw)
        defect = P.identity_defect()
        for s in cfg["s_values"]:
            for t in cfg["t_values"]:
                x = x_from_s(s, t, case)
                try:
                    rows.append(PredictionRow(case, s, t, x, P(x, t), defect))
                except OutOfRegionError as exc:
                    rows.append(PredictionRow(case, s, t, x, None, defect, f"out_of_region: {exc}"))
    return rows


PREDICT_COLUMNS = ("case", "x", "t", "xi", "s", "tau", "alpha_inf", "phi0", "re_beta", "im_beta", "re_q_pred",
                   "im_q_pred", "u", "tail", "identity_defect", "flag")


def predictions_table(rows: list[PredictionRow]) -> list[list]:
    out = []
    for r in rows:
        if r.pred is None:
            out.append([r.case.value, r.x, r.t, math.nan, r.s] + [math.nan] * 9 + [r.identity_defect, r.flag])
        else:
            p = r.pred
            out.append([r.case.value, *p.row(), p.u, p.tail, r.identity_defect, ";".join(p.flags) or "ok"])
    return out


# --------------------------------------------------------------------------
# evolution


def evolver_params(cfg: dict, t_end: float, workers: int = 1) -> EvolverParams:
    e = cfg["evolver"]
    if e["L"] is not None and e["N"] is not None:
        return EvolverParams(L=e["L"], N=int(e["N"]), dt=e["dt"], leakage_threshold=e["leakage_threshold"],
                             diag_every=e["diag_every"], workers=workers)
    return headline_params(t_end, v_max=e["v_max"], margin=e["margin"], dx_max=e["dx_max"], dt=e["dt"],
                           leakage_threshold=e["leakage_threshold"], diag_every=e["diag_every"], workers=workers)


def run_evolution(cfg: dict, workers: int = 1, on_snapshot=None) -> EvolutionState:
    ts = sorted(float(t) for t in cfg["t_values"])
    return evolve(build_datum(cfg), ts[-1], evolver_params(cfg, ts[-1], workers), snapshot_times=ts,
                  on_snapshot=on_snapshot)


# --------------------------------------------------------------------------
# comparison


@dataclass
class CompareCell:
    case: Case
    s: float
    t: float
    x: float
    q_num: complex
    q_pred: dict = field(default_factory=dict)  # variant -> complex

    def error(self, variant: str = "stated") -> float:
        return abs(self.q_num - self.q_pred[variant])


def _predictors(sd: ScatteringData, case: Case, cfg: dict) -> dict:
    """The stated prediction plus the competing sign readings it is compared with."""
    out = {}
    base = Predictor(sd, case, cfg["region_C"], s_max=cfg["painleve"]["s_max"])
    out["stated"] = base
    out["alpha_flipped"] = Predictor(sd, case, cfg["region_C"], s_max=cfg["painleve"]["s_max"], alpha_sign=-1,
                                     table=base.table)
    out["airy_flipped"] = Predictor(sd, case, cfg["region_C"], s_max=cfg["painleve"]["s_max"],
                                    airy_sign=-int(np.sign(base.kappa) or 1))
    if case is Case.II:
        out["phi_printed"] = Predictor(sd, case, cfg["region_C"], s_max=cfg["painleve"]["s_max"],
                                       phi_variant="printed", table=base.table)
    return out


def fit_exponent(ts, errs, floor: float) -> tuple[float | None, str]:
    ts = np.asarray(ts, dtype=float)
    errs = np.asarray(errs, dtype=float)
    if ts.size < 3:
        return None, "too_few_points"
    if np.any(errs <= floor):
        return (fit_power(ts, np.maximum(errs, 1e-300)) if np.all(errs > 0) else None), "inconclusive"
    return fit_power(ts, errs), "ok"


def aligned_errors(cells: list[CompareCell], variant: str = "stated") -> list[float]:
    """Errors after the single global phase that best aligns prediction with the field."""
    num = np.array([c.q_num for c in cells])
    pred = np.array([c.q_pred[variant] for c in cells])
    g = np.angle(np.vdot(pred, num))
    return list(map(float, np.abs(num - np.exp(1j * g) * pred)))


def compare(cfg: dict, sd: ScatteringData, case_override: str | None = None, workers: int = 1,
            state_hook=None) -> dict:
    cases = cases_of(cfg, case_override)
    ts = sorted(float(t) for t in cfg["t_values"])
    preds = {case: _predictors(sd, case, cfg) for case in cases}
    cells: list[CompareCell] = []
    skipped = []
    plan = []
    for case in cases:
        kap = preds[case]["stated"].kappa
        for s in cfg["s_values"]:
            if s < 0 and abs(kap) >= 0.999:
                skipped.append({"case": case.value, "s": s, "reason": "negative s needs |kappa| < 0.999"})
                continue
            for t in ts:
                plan.append((case, float(s), t, x_from_s(s, t, case)))

    sampled: dict = {}

    def snap(st: EvolutionState):
        todo = [p for p in plan if abs(p[2] - st.t) < 1e-9 * max(1.0, st.t) + 1e-9]
        if todo:
            xs = np.array([p[3] for p in todo])
            vals = np.atleast_1d(sample_field(st, xs))
            for p, v in zip(todo, vals):
                sampled[p] = complex(v)
        if state_hook:
            state_hook(st)

    state = run_evolution(cfg, workers, on_snapshot=snap)

    def evaluate(p):
        case, s, t, x = p
        cell = CompareCell(case, s, t, x, sampled[p])
        for name, P in preds[case].items():
            cell.q_pred[name] = P(x, t).q_pred
        return cell

    with ThreadPoolExecutor(max_workers=max(1, workers)) as pool:
        cells = list(pool.map(evaluate, plan))

    floor = cfg["compare"]["error_floor"]
    series = []
    for case in cases:
        P = preds[case]["stated"]
        for s in cfg["s_values"]:
            row = [c for c in cells if c.case is case and c.s == float(s)]
            if not row:
                continue
            row.sort(key=lambda c: c.t)
            tt = [c.t for c in row]
            entry = {"case": case.value, "s": float(s), "t": tt, "x": [c.x for c in row], "variants": {}}
            for name in preds[case]:
                e = [c.error(name) for c in row]
                ea = aligned_errors(row, name)
                expo, status = fit_exponent(tt, e, floor)
                expo_a, status_a = fit_exponent(tt, ea, floor)
                entry["variants"][name] = {
                    "errors": e, "fitted_exponent": expo, "fit_status": status,
                    "ratios": [e[i + 1] / e[i] for i in range(len(e) - 1)],
                    "aligned_errors": ea, "aligned_exponent": expo_a, "aligned_fit_status": status_a,
                }
            entry["q_num"] = [[c.q_num.real, c.q_num.imag] for c in row]
            entry["q_pred"] = [[c.q_pred["stated"].real, c.q_pred["stated"].imag] for c in row]
            entry["kappa"] = P.kappa
            entry["phi0"] = P.phi
            entry["alpha_inf"] = P.alpha
            entry["identity_defect"] = P.identity_defect()
            series.append(entry)
    diag = state.diagnostics
    return {
        "schema": "dnls-compare/1",
        "series": series,
        "skipped": skipped,
        "metadata": dict(header(cfg), evolver=state.params.as_dict(), max_leakage=max(diag.leakage),
                         mass_drift_rate=diag.max_mass_drift_rate(), t_values=ts,
                         s_values=[float(s) for s in cfg["s_values"]], error_floor=floor),
        "_cells": cells,
        "_state": state,
    }


# --------------------------------------------------------------------------
# signature audit


def signature(cfg: dict, seed: int = 0, case_override: str | None = None) -> dict:
    sig = cfg["signature"]
    rng = np.random.default_rng(seed)
    audits = []
    for xi in sig["xi"]:
        for a in audit_signature(xi, int(sig["n"]), rng, sig["phi"]):
            audits.append({"xi": a.xi, "sector": a.sector, "n": a.n, "violations": a.violations,
                           "worst_margin": a.worst_margin, "passed": a.passed})
    fits = []
    for case in cases_of(cfg, case_override):
        ts = [float(t) for t in sig["remainder_t"]]
        sups = [remainder_sup(t, case, sig["remainder_s"], sig["k_max"]) for t in ts]
        expo = fit_power(ts, sups)
        fits.append({"case": case.value, "t": ts, "sup": sups, "exponent": expo, "passed": expo <= -0.30})
    ok = all(a["passed"] for a in audits) and all(f["passed"] for f in fits)
    return {"schema": "dnls-signature/1", "status": "PASS" if ok else "FAIL", "seed": seed, "sectors": audits,
            "remainder": fits, "metadata": header(cfg)}
