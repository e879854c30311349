"""Named experiments behind the command-line runner.

Each scenario has a parameter schema (key -> type, default) and a runner
``run(params, seed) -> (results, files)`` where ``results`` is a JSON-able
summary and ``files`` maps output file names to CSV/JSON text. Runners are
pure: identical parameters and seed give byte-identical files.
"""

from __future__ import annotations

import json
import math
from importlib import resources
from typing import Any, Callable

import numpy as np

from . import histories as hist
from . import qbm, qstate, quantify, wigner
from .envmodels import measurement, recurrence, tomography
from .errors import GridError, ValidationError

ParamSpec = dict[str, tuple[type, Any]]


def load_preset(name: str) -> dict:
    try:
        text = resources.files("decolab.presets").joinpath(f"{name}.json").read_text()
    except FileNotFoundError:
        raise ValidationError(f"unknown preset {name!r}") from None
    return json.loads(text)


def available_presets() -> list[str]:
    return sorted(p.name[:-5] for p in resources.files("decolab.presets").iterdir() if p.name.endswith(".json"))


def resolve(schema: ParamSpec, params: dict) -> dict:
    """Fill defaults and coerce types; unknown keys are rejected."""
    unknown = set(params) - set(schema)
    if unknown:
        raise ValidationError(f"unknown parameter(s): {', '.join(sorted(unknown))}")
    out = {}
    for key, (typ, default) in schema.items():
        val = params.get(key, default)
        if val is None:
            out[key] = None
        elif typ is bool:
            if isinstance(val, str):
                val = val.lower() in ("1", "true", "yes", "on")
            out[key] = bool(val)
        elif typ in (list, dict):
            if isinstance(val, str):
                val = json.loads(val)
            if not isinstance(val, typ):
                raise ValidationError(f"parameter {key!r} must be a {typ.__name__}")
            out[key] = val
        else:
            try:
                out[key] = typ(val)
            except (TypeError, ValueError):
                raise ValidationError(f"parameter {key!r} must be {typ.__name__}, got {val!r}") from None
    return out


def _csv_rows(header: list[str], rows) -> str:
    lines = [",".join(header)]
    for row in rows:
        lines.append(",".join(repr(float(v)) if isinstance(v, (float, np.floating)) else str(v) for v in row))
    return "\n".join(lines) + "\n"


# --------------------------------------------------------------------------
# cat-wigner

CAT_WIGNER: ParamSpec = {
    "sigma": (float, 1.0),
    "L": (float, 6.0),
    "n": (int, 256),
    "x_min": (float, None),
    "x_max": (float, None),
    "L_sweep": (list, None),
}


def _cat_grid(p: dict) -> wigner.SpatialGrid:
    s, L = p["sigma"], p["L"]
    x_min = -8 * s if p.get("x_min") is None else p["x_min"]
    x_max = L + 8 * s if p.get("x_max") is None else p["x_max"]
    return wigner.SpatialGrid(p["n"], x_min, x_max)


def cat_oracle_error(cat: wigner.CatStateParams, grid: wigner.SpatialGrid) -> tuple[float, wigner.WignerField]:
    W = wigner.wigner_transform(wigner.cat_state_wavefunction(cat, grid))
    qq, pp = np.meshgrid(W.q, W.p, indexing="ij")
    return float(np.max(np.abs(W.values - wigner.cat_wigner_oracle(cat, qq, pp)))), W


def run_cat_wigner(p: dict, seed: int):
    cat = wigner.CatStateParams(p["sigma"], p["L"])
    grid = _cat_grid(p)
    oracle_err, W = cat_oracle_error(cat, grid)
    gauss = wigner.wigner_transform(wigner.gaussian_wavefunction(grid, 0.0, cat.sigma))
    mix = wigner.wigner_transform(wigner.incoherent_mixture(cat, grid))
    results = {
        "oracle_sup_error": oracle_err,
        "negativity_volume": wigner.negativity_volume(W),
        "gaussian_negativity_volume": wigner.negativity_volume(gauss),
        "mixture_negativity_volume": wigner.negativity_volume(mix),
        "interference_peak": wigner.interference_peak(W, cat),
        "oracle_interference_amplitude": wigner.interference_amplitude(cat),
        "purity": W.purity(),
        "normalization": W.total(),
    }
    if p.get("L_sweep"):
        by_L = {}
        for L in p["L_sweep"]:
            q = {**p, "L": float(L), "x_min": None, "x_max": None}
            by_L[repr(float(L))] = cat_oracle_error(wigner.CatStateParams(p["sigma"], float(L)), _cat_grid(q))[0]
        results["oracle_sup_error_by_L"] = by_L
        results["max_oracle_sup_error"] = max(by_L.values())
    files = {"wigner_field.csv": W.to_csv(), "wigner_field.json": json.dumps(W.to_json())}
    return results, files


# --------------------------------------------------------------------------
# qbm-decoherence

QBM: ParamSpec = {
    "preset": (str, "realistic"),
    "M": (float, None),
    "gamma": (float, None),
    "T": (float, None),
    "Lambda": (float, None),
    "s": (float, None),
    "potential": (dict, None),
    "sigma": (float, None),
    "L": (float, None),
    "n": (int, None),
    "x_min": (float, None),
    "x_max": (float, None),
    "dt": (float, None),
    "dt_fraction": (float, None),
    "sample_every": (int, None),
    "window_fraction": (float, None),
    "L_sweep": (list, None),
}


def qbm_settings(p: dict) -> dict:
    """Merge a preset with explicit overrides (explicit values win)."""
    base = load_preset(p.get("preset") or "realistic")
    merged = {**base, **{k: v for k, v in p.items() if v is not None and k != "preset"}}
    merged["preset"] = p.get("preset") or "realistic"
    return merged


def _qbm_grid(cfg: dict, L: float) -> wigner.SpatialGrid:
    s = cfg["sigma"]
    x_min = cfg.get("x_min")
    x_max = cfg.get("x_max")
    if x_min is None or x_max is None or L != cfg["L"]:
        pad = cfg.get("padding", 8.0) * s
        x_min, x_max = -pad, L + pad
    return wigner.SpatialGrid(int(cfg["n"]), float(x_min), float(x_max))


def _qbm_dt(cfg: dict, params: qbm.QbmParams, grid: wigner.SpatialGrid) -> float:
    if cfg.get("dt") is not None:
        return float(cfg["dt"])
    return float(cfg.get("dt_fraction", 0.9)) * qbm.stability_bound(params, grid)


def run_qbm(p: dict, seed: int):
    cfg = qbm_settings(p)
    params = qbm.QbmParams.from_config(cfg)
    files, runs = {}, []
    sweep = [float(L) for L in (cfg.get("L_sweep") or [cfg["L"]])]
    if cfg["L"] not in sweep:
        sweep.append(float(cfg["L"]))
    for L in sweep:
        cat = wigner.CatStateParams(cfg["sigma"], L)
        grid = _qbm_grid(cfg, L)
        dt = _qbm_dt(cfg, params, grid)
        series = qbm.decoherence_experiment(
            cat, params, grid, dt,
            sample_every=int(cfg.get("sample_every", 10)),
            window_fraction=float(cfg.get("window_fraction", 0.3)),
        )
        name = "timeseries.csv" if L == cfg["L"] else f"timeseries_L{L:g}.csv"
        files[name] = series.to_csv()
        runs.append({
            "L": L,
            "dt": dt,
            "fitted_rate": series.fitted_rate,
            "predicted_rate": series.predicted_rate,
            "relative_error": series.relative_error,
            "fit_window": list(series.fit_window),
            "min_eigenvalue": float(series.min_eigenvalues.min()),
            "max_trace_error": float(np.max(np.abs(series.trace_errors))),
            "file": name,
        })
    main = next(r for r in runs if r["L"] == cfg["L"])
    ref = main["fitted_rate"] / main["L"] ** 2
    for r in runs:
        r["rate_over_L2_relative_to_main"] = (r["fitted_rate"] / r["L"] ** 2) / ref
    results = {
        "resolved": cfg,
        "timescales": qbm.timescales(params, cfg["L"]).to_dict(),
        "fitted_rate": main["fitted_rate"],
        "predicted_rate": main["predicted_rate"],
        "relative_error": main["relative_error"],
        "runs": runs,
    }
    return results, files


# --------------------------------------------------------------------------
# two-slit

TWO_SLIT: ParamSpec = {
    "demo": (bool, False),
    "instances": (int, 500),
    "max_dim": (int, 8),
}


def demo_two_slit():
    """Four-dimensional example: two slits, each screen cell straddling both slits."""
    slits = hist.ProjectiveDecomposition.from_basis(np.eye(4), [[0, 1], [2, 3]])
    r = 1 / np.sqrt(2)
    screen_basis = np.array([[r, 0, r, 0], [r, 0, -r, 0], [0, r, 0, r], [0, r, 0, -r]], dtype=complex).T
    screen = hist.ProjectiveDecomposition.from_basis(screen_basis)
    psi = qstate.normalize([1, 0.5j, 0.8, 0.3])
    return psi, slits, screen


def random_two_slit(rng: np.random.Generator, max_dim: int):
    d = int(rng.integers(2, max_dim + 1))
    k = int(rng.integers(1, d))
    u = qstate.random_unitary(d, rng)
    slits = hist.ProjectiveDecomposition.from_basis(u, [list(range(k)), list(range(k, d))])
    v = qstate.random_unitary(d, rng)
    cuts = sorted(rng.choice(np.arange(1, d), size=int(rng.integers(0, d - 1)), replace=False).tolist()) if d > 2 else []
    bounds = [0] + cuts + [d]
    screen = hist.ProjectiveDecomposition.from_basis(v, [list(range(a, b)) for a, b in zip(bounds, bounds[1:])])
    return qstate.random_state_vector(d, rng), slits, screen


def two_slit_table(psi, slits, screen) -> str:
    table = hist.two_slit_probabilities(psi, slits, screen)
    pj = hist.screen_probabilities(psi, screen)
    rows = []
    for j in range(len(screen)):
        rows.append([j, table[0, j], table[1, j], pj[j], hist.additivity_defect(psi, slits, screen, j),
                     hist.interference_term(psi, slits, screen, j)])
    total = sum(r[4] for r in rows)
    rows.append(["sum", table[0].sum(), table[1].sum(), pj.sum(), total, sum(r[5] for r in rows)])
    return _csv_rows(["screen_index", "p_slit1", "p_slit2", "p_screen", "additivity_defect", "interference_term"], rows)


def run_two_slit(p: dict, seed: int):
    if p["demo"]:
        psi, slits, screen = demo_two_slit()
        defects = [hist.additivity_defect(psi, slits, screen, j) for j in range(len(screen))]
        hset = hist.two_slit_history_set(psi, slits, screen)
        report = hist.consistency_check(hset)
        results = {
            "defects": defects,
            "defect_sum": float(sum(defects)),
            "consistent": report.consistent,
            "max_offdiag": report.max_offdiag,
        }
        return results, {"two_slit_table.csv": two_slit_table(psi, slits, screen),
                         "defect_table.csv": report.to_csv()}
    rng = np.random.default_rng(seed)
    rows, worst_identity, worst_sum = [], 0.0, 0.0
    for i in range(p["instances"]):
        psi, slits, screen = random_two_slit(rng, p["max_dim"])
        defects = [hist.additivity_defect(psi, slits, screen, j) for j in range(len(screen))]
        terms = [hist.interference_term(psi, slits, screen, j) for j in range(len(screen))]
        ident = max(abs(a - b) for a, b in zip(defects, terms))
        worst_identity = max(worst_identity, ident)
        worst_sum = max(worst_sum, abs(sum(defects)))
        rows.append([i, slits.dim, len(screen), ident, sum(defects)])
    results = {"instances": p["instances"], "max_identity_error": worst_identity, "max_defect_sum": worst_sum}
    csv_text = _csv_rows(["instance", "dim", "n_screen", "identity_error", "defect_sum"], rows)
    return results, {"two_slit_instances.csv": f"# seed={seed}\n" + csv_text}


# --------------------------------------------------------------------------
# histories-check

HISTORIES: ParamSpec = {
    "kind": (str, "conserved"),
    "dim": (int, 6),
    "n_times": (int, 3),
    "epsilon": (float, 1e-8),
    "mode": (str, "absolute"),
}


def conserved_history_set(rng: np.random.Generator, dim: int, n_times: int) -> hist.HistorySet:
    """Histories of a conserved quantity: projectors commute with H, rho_0 diagonal in them."""
    v = qstate.random_unitary(dim, rng)
    n_groups = max(2, min(3, dim))
    labels = np.sort(rng.integers(0, n_groups, dim))
    labels[:n_groups] = np.arange(n_groups)
    labels = np.sort(labels)
    groups = [np.nonzero(labels == g)[0].tolist() for g in range(n_groups)]
    energies = rng.normal(size=dim)
    h = (v * energies) @ v.conj().T
    dec = hist.ProjectiveDecomposition.from_basis(v, groups)
    probs = rng.dirichlet(np.ones(dim))
    rho0 = (v * probs) @ v.conj().T
    times = np.cumsum(rng.uniform(0.2, 1.5, n_times))
    return hist.HistorySet(tuple(times), tuple([dec] * n_times), h, rho0)


def merge_last_slot(hset: hist.HistorySet, a: int, b: int) -> tuple[hist.HistorySet, list[list[int]]]:
    """Coarser set with alternatives ``a`` and ``b`` of the last slot merged, plus the grouping."""
    last = hset.decompositions[-1]
    keep = [i for i in range(len(last)) if i not in (a, b)]
    merged = [last.projectors[a] + last.projectors[b]] + [last.projectors[i] for i in keep]
    coarse = hist.HistorySet(hset.times, hset.decompositions[:-1] + (hist.ProjectiveDecomposition(tuple(merged)),),
                             hset.hamiltonian, hset.initial_state)
    fine = hset.histories()
    mapping = {a: 0, b: 0, **{i: j + 1 for j, i in enumerate(keep)}}
    groups = [[] for _ in coarse.histories()]
    index = {h: i for i, h in enumerate(coarse.histories())}
    for fi, h in enumerate(fine):
        groups[index[h[:-1] + (mapping[h[-1]],)]].append(fi)
    return coarse, groups


def run_histories(p: dict, seed: int):
    rng = np.random.default_rng(seed)
    if p["kind"] == "conserved":
        hset = conserved_history_set(rng, p["dim"], p["n_times"])
    elif p["kind"] == "two-slit":
        hset = hist.two_slit_history_set(*demo_two_slit())
    else:
        raise ValidationError(f"unknown histories kind {p['kind']!r}")
    report = hist.consistency_check(hset, p["epsilon"], p["mode"])
    results = {
        "consistent": report.consistent,
        "max_offdiag": report.max_offdiag,
        "n_histories": len(report.histories),
        "total_probability": float(np.real(np.trace(report.defect_table))),
    }
    if report.consistent and len(hset.decompositions[-1]) > 1:
        coarse, groups = merge_last_slot(hset, 0, 1)
        direct = hist.consistency_check(coarse, p["epsilon"], p["mode"])
        summed = np.array([report.probabilities[g].sum() for g in groups])
        results["coarse_grained_consistent"] = direct.consistent
        results["additivity_error"] = float(np.max(np.abs(np.real(np.diagonal(direct.defect_table)) - summed)))
    files = {"defect_table.csv": report.to_csv(), "consistency.json": json.dumps(report.to_json())}
    return results, files


# --------------------------------------------------------------------------
# measurement-chain (pre-measurement, reduction, dephasing)

CHAIN: ParamSpec = {
    "theta": (float, math.pi / 4),
    "n_max": (int, 30),
    "halo_radius": (float, 0.05),
    "halo_samples": (int, 20),
}


def run_measurement_chain(p: dict, seed: int):
    chain = measurement.MeasurementChain(2, 2, (0, 1), 0)
    psi = qstate.normalize([1, 1])
    entangled = measurement.pre_measurement(chain, psi)
    reduction = measurement.von_neumann_reduce(entangled, chain)
    plus = qstate.pure_state(psi)
    # apparatus prepared in a pointer superposition, system in |0>
    rho_sa = qstate.tensor(qstate.pure_state(qstate.ket(0, 2)), plus)
    basis = np.eye(2)
    rows, gaps, worst = [], [], 0.0
    for n in range(p["n_max"] + 1):
        env = measurement.DephasingEnvironment(n, p["theta"])
        exact = measurement.dephase(rho_sa, env, basis)
        closed = measurement.dephase_closed_form(rho_sa, env, basis)
        err = float(np.max(np.abs(exact - closed)))
        worst = max(worst, err)
        app = qstate.partial_trace(exact, [2, 2], keep=[1])
        gap = quantify.decoherence_gap(app, basis).gap
        gaps.append(gap)
        halo = quantify.halo_sweep(app, basis, p["halo_radius"], p["halo_samples"], seed + n)
        rows.append([n, abs(exact[0, 1]) * 2, env.suppression(), err, gap, max(r.gap for r in halo)])
    results = {
        "schmidt_rank_after_premeasurement": int(len(measurement.schmidt_coefficients(entangled, (2, 2)))),
        "reduction_leakage": reduction.leakage,
        "max_closed_form_error": worst,
        "gap_monotone_nonincreasing": bool(all(b <= a + 1e-12 for a, b in zip(gaps, gaps[1:]))),
        "final_gap": gaps[-1],
    }
    header = ["n", "offdiag_suppression", "closed_form", "abs_error", "apparatus_gap", "halo_max_gap"]
    return results, {"dephasing.csv": f"# seed={seed}\n" + _csv_rows(header, rows)}


# --------------------------------------------------------------------------
# recurrence

RECURRENCE: ParamSpec = {
    "omega": (float, 1.0),
    "n_modes": (int, 5),
    "coupling_ratio": (float, 0.5),
    "band_modes": (int, 40),
    "band_low": (float, 0.5),
    "band_high": (float, 1.5),
    "band_coupling_ratio": (float, 0.7),
    "periods": (float, 10.0),
    "samples": (int, 4001),
    "n_max": (int, 12),
}


def run_recurrence(p: dict, seed: int):
    w = p["omega"]
    period = 2 * math.pi / w
    t_max = p["periods"] * period
    samples = p["samples"]
    single = recurrence.FiniteBath.degenerate(1, w, p["coupling_ratio"] * w)
    degen = recurrence.FiniteBath.degenerate(p["n_modes"], w, p["coupling_ratio"] * w)
    band = recurrence.FiniteBath.band(p["band_modes"], p["band_low"] * w, p["band_high"] * w,
                                      p["band_coupling_ratio"], seed)
    t, c1 = recurrence.finite_bath_recurrence(single, t_max, samples, p["n_max"])
    _, cd = recurrence.finite_bath_recurrence(degen, t_max, samples, p["n_max"])
    _, cb = recurrence.finite_bath_recurrence(band, t_max, samples, p["n_max"])
    # |rho_01(t + period)| against |rho_01(t)| over the whole run
    revival = max(float(np.max(np.abs(recurrence.coherence_at(b, t + period, p["n_max"])
                                      - recurrence.coherence_at(b, t, p["n_max"]))))
                  for b in (single, degen))
    collapsed = np.nonzero(cb < 0.1 * cb[0])[0]
    # a revival of the degenerate bath would appear at the period; look from half a period on
    late = t >= period / 2
    results = {
        "period": period,
        "degenerate_periodicity_error": float(revival),
        "band_collapse_time": float(t[collapsed[0]]) if collapsed.size else None,
        "band_max_revival": float(cb[late].max() / cb[0]),
        "band_frequencies_seed": seed,
    }
    rows = zip(t, c1, cd, cb)
    return results, {"recurrence.csv": f"# seed={seed}\n" + _csv_rows(["t", "single_mode", "degenerate", "band"], rows)}


# --------------------------------------------------------------------------
# tomography-pipeline

TOMOGRAPHY: ParamSpec = {
    "theta": (float, math.pi / 8),
    "n_env_max": (int, 30),
    "n_env_step": (int, 2),
    "shots": (int, 10000),
    "bootstrap": (int, 100),
    "scaling_shots": (list, [100, 1000, 10000, 100000]),
    "repeats": (int, 50),
}


def tomography_scaling(rho, shots_list, repeats: int, seed: int) -> list[tuple[int, float]]:
    """Mean trace-distance error of Pauli tomography against shot number."""
    n_qubits = int(round(math.log2(rho.shape[0])))
    out = []
    children = np.random.SeedSequence(seed).spawn(len(shots_list))
    for n, child in zip(shots_list, children):
        errs = []
        for rep in child.spawn(repeats):
            plan = tomography.pauli_plan(n_qubits, int(n), int(rep.generate_state(1)[0]))
            rec = tomography.simulate_measurements(rho, plan)
            errs.append(tomography.reconstruct_state(rec, plan, reference=rho).diagnostics["trace_distance"])
        out.append((int(n), float(np.mean(errs))))
    return out


def scaling_slope(points) -> float:
    n = np.log([p[0] for p in points])
    e = np.log([p[1] for p in points])
    return float(np.polyfit(n, e, 1)[0])


def run_tomography(p: dict, seed: int):
    plus = qstate.pure_state(qstate.normalize([1, 1]))
    basis = np.eye(2)
    states = [(n, measurement.dephase(plus, measurement.DephasingEnvironment(n, p["theta"]), basis))
              for n in range(0, p["n_env_max"] + 1, p["n_env_step"])]
    plan = tomography.pauli_plan(1, p["shots"], seed)
    points = tomography.decoherence_detection_pipeline(states, plan, basis, p["bootstrap"], seed)
    bracketed = np.mean([abs(q.gap_estimate - q.gap_exact) <= 2 * q.gap_error + 1e-12 for q in points])
    exact_plan = tomography.pauli_plan(1, None)
    inf_rec = tomography.simulate_measurements(states[3][1], exact_plan)
    inf_err = float(np.max(np.abs(tomography.reconstruct_state(inf_rec, exact_plan).rho - states[3][1])))
    rng = np.random.default_rng(seed)
    mixed = qstate.random_density_matrix(2, rng)
    scaling = tomography_scaling(mixed, p["scaling_shots"], p["repeats"], seed)
    results = {
        "bracketed_fraction": float(bracketed),
        "infinite_shot_error": inf_err,
        "scaling": scaling,
        "scaling_slope": scaling_slope(scaling),
    }
    files = {
        "pipeline.csv": tomography.pipeline_csv(points, seed),
        "counts.csv": tomography.simulate_measurements(states[0][1], plan).to_csv(),
        "scaling.csv": f"# seed={seed}\n" + _csv_rows(["shots", "mean_trace_distance"], scaling),
        "plan.json": json.dumps(plan.to_json()),
    }
    return results, files


# --------------------------------------------------------------------------
# halo (basis-robustness sweep and gap-inequality suite)

HALO: ParamSpec = {
    "diag": (list, [0.9, 0.1]),
    "radius": (float, 0.1),
    "samples": (int, 100),
    "random_pairs": (int, 1000),
    "max_dim": (int, 8),
}


def gap_inequality_suite(n_pairs: int, max_dim: int, seed: int) -> dict:
    """Random (rho, basis) pairs: gap >= -1e-9; states built diagonal in the basis give gap <= 1e-9."""
    rng = np.random.default_rng(seed)
    min_gap, max_diag_gap = math.inf, 0.0
    for _ in range(n_pairs):
        d = int(rng.integers(1, max_dim + 1))
        rank = int(rng.integers(1, d + 1))
        rho = qstate.random_density_matrix(d, rng, rank)
        u = qstate.random_unitary(d, rng)
        min_gap = min(min_gap, quantify.decoherence_gap(rho, u).gap)
        p = rng.dirichlet(np.ones(d)) * (rng.uniform(size=d) > 0.3)
        p = p / p.sum() if p.sum() > 0 else np.eye(d)[0]
        diag_rho = (u * p) @ u.conj().T
        max_diag_gap = max(max_diag_gap, abs(quantify.decoherence_gap(diag_rho, u).gap))
    return {"pairs": n_pairs, "min_gap": float(min_gap), "max_gap_diagonal_case": float(max_diag_gap)}


def run_halo(p: dict, seed: int, workers: int = 1):
    diag = np.asarray(p["diag"], dtype=float)
    if np.any(diag < 0) or not math.isclose(diag.sum(), 1.0, abs_tol=1e-10):
        raise ValidationError("diag must be a probability vector")
    rho = np.diag(diag).astype(complex)
    basis = np.eye(len(diag))
    reports = quantify.halo_sweep(rho, basis, p["radius"], p["samples"], seed, workers)
    results = {
        "unperturbed": quantify.decoherence_gap(rho, basis).to_dict(),
        "max_halo_gap": max(r.gap for r in reports) if reports else 0.0,
    }
    if p["random_pairs"]:
        results["gap_inequality"] = gap_inequality_suite(p["random_pairs"], p["max_dim"], seed)
    return results, {"halo.csv": quantify.reports_csv(reports, seed)}


# --------------------------------------------------------------------------
# registry and validation


SCENARIOS: dict[str, tuple[ParamSpec, Callable]] = {
    "cat-wigner": (CAT_WIGNER, run_cat_wigner),
    "qbm-decoherence": (QBM, run_qbm),
    "two-slit": (TWO_SLIT, run_two_slit),
    "histories-check": (HISTORIES, run_histories),
    "tomography-pipeline": (TOMOGRAPHY, run_tomography),
    "recurrence": (RECURRENCE, run_recurrence),
    "measurement-chain": (CHAIN, run_measurement_chain),
    "halo": (HALO, run_halo),
}


def physical_violations(scenario: str, params: dict) -> tuple[list[str], dict]:
    """Range checks that do not run the experiment; returns (violations, info)."""
    violations, info = [], {}
    try:
        if scenario == "cat-wigner":
            grid = _cat_grid(params)
            wigner.cat_state_wavefunction(wigner.CatStateParams(params["sigma"], params["L"]), grid)
        elif scenario == "qbm-decoherence":
            cfg = qbm_settings(params)
            qp = qbm.QbmParams.from_config(cfg)
            ts = qbm.timescales(qp, cfg["L"])
            info["timescales"] = ts.to_dict()
            if not ts.ordered:
                violations.append("timescale hierarchy Lambda^-1 << t_cl << gamma^-1 not satisfied "
                                  f"with separation factor {ts.separation_factor:g}")
            if not math.isclose(qp.spectral.s, 1.0):
                violations.append("non-ohmic bath (s != 1): Kramers evolution refuses it")
            for L in [float(x) for x in (cfg.get("L_sweep") or [cfg["L"]])]:
                cat = wigner.CatStateParams(cfg["sigma"], L)
                grid = _qbm_grid(cfg, L)
                try:
                    wigner.cat_state_wavefunction(cat, grid)
                except GridError as exc:
                    violations.append(f"L={L:g}: grid too small for cat state: {exc}")
                bound = qbm.stability_bound(qp, grid)
                dt = _qbm_dt(cfg, qp, grid)
                if dt > bound:
                    violations.append(f"L={L:g}: dt = {dt:.6g} exceeds stability bound {bound:.6g}")
                info.setdefault("stability_bounds", {})[f"{L:g}"] = bound
        elif scenario == "halo":
            diag = np.asarray(params["diag"], dtype=float)
            if np.any(diag < 0) or not math.isclose(diag.sum(), 1.0, abs_tol=1e-10):
                violations.append("diag must be a probability vector")
            if params["radius"] < 0:
                violations.append("radius must be nonnegative")
        elif scenario == "histories-check":
            if params["kind"] not in ("conserved", "two-slit"):
                violations.append(f"unknown histories kind {params['kind']!r}")
            if params["mode"] not in ("absolute", "relative"):
                violations.append(f"unknown consistency mode {params['mode']!r}")
    except ValidationError as exc:
        violations.append(str(exc))
    return violations, info
