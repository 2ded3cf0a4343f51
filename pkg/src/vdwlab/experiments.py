"""Experiment implementations behind the CLI verbs.

Each experiment consumes an ExperimentConfig and returns an
ExperimentResult: JSON-lines records (every record tagged with the config
hash), summary key/value pairs for the fixed-schema CSV, and in-memory
artifacts such as colourings.  No wall-clock data enters the records, so
identical configs reproduce identical bytes.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field

import numpy as np

from . import coloring, cutoffs, diophantine, lattice, quadform, torus
from .config import ConfigError, ExperimentConfig, formula_defaults
from .reference import REFERENCE_TABLE
from .rng import substream
from .stats import wilson_interval

__all__ = [
    "ExperimentResult",
    "run",
    "search_best",
    "search_witness",
    "build_construction",
    "BudgetExceeded",
]

CSV_HEADER = ["schema", "experiment", "config_hash", "seed", "key", "value"]
CSV_SCHEMA = "v1"


class BudgetExceeded(RuntimeError):
    pass


@dataclass
class ExperimentResult:
    config: ExperimentConfig
    records: list[dict] = field(default_factory=list)
    summary: dict = field(default_factory=dict)
    artifacts: dict = field(default_factory=dict)

    def tagged_records(self) -> list[dict]:
        h = self.config.config_hash()
        out = []
        for rec in self.records:
            tagged = {"config_hash": h, "experiment": self.config.experiment}
            tagged.update(rec)
            out.append(_jsonable(tagged))
        return out

    def jsonl(self) -> str:
        return "".join(
            json.dumps(rec, sort_keys=True, separators=(",", ":")) + "\n"
            for rec in self.tagged_records()
        )

    def csv_rows(self) -> list[list[str]]:
        h = self.config.config_hash()
        rows = [list(CSV_HEADER)]
        for key in sorted(self.summary):
            rows.append(
                [CSV_SCHEMA, self.config.experiment, h, str(self.config.seed), key,
                 _csv_value(self.summary[key])]
            )
        return rows

    def csv(self) -> str:
        return "".join(",".join(row) + "\n" for row in self.csv_rows())


def _csv_value(v) -> str:
    if isinstance(v, float):
        return repr(v)
    return str(v)


def _jsonable(obj):
    if isinstance(obj, dict):
        return {str(k): _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return _jsonable(obj.tolist())
    if isinstance(obj, (np.integer,)):
        return int(obj)
    if isinstance(obj, (np.floating,)):
        return float(obj)
    if isinstance(obj, (np.bool_,)):
        return bool(obj)
    if isinstance(obj, frozenset):
        return sorted(obj)
    return obj


# ---------------------------------------------------------------------------
# constructions
# ---------------------------------------------------------------------------


def build_construction(name: str, params: dict, rng: np.random.Generator):
    """Build a colouring by construction name; returns (colouring, meta)."""
    if name == "folklore":
        n = int(params["N"])
        return torus.folklore_colouring(n), {"construction": name}
    if name == "behrend":
        n = int(params["N"])
        d = int(params.get("d", 5))
        digits = int(params.get("n_digits", 4))
        return torus.behrend_colouring(n, d, digits), {
            "construction": name, "d": d, "n_digits": digits,
        }
    if name == "green-wolf":
        n = int(params["N"])
        dim = int(params["D"])
        rho = float(params.get("rho", 0.25))
        return torus.green_wolf_colouring(n, dim, rng, rho=rho), {
            "construction": name, "D": dim, "rho": rho,
        }
    if name == "main":
        return _build_main_construction(params, rng)
    raise ConfigError(f"construction: unknown name {name!r}")


def _build_main_construction(params: dict, rng: np.random.Generator):
    n = int(params["N"])
    dim = int(params["D"])
    defaults = formula_defaults(n, dim)
    rho = float(params.get("rho") or defaults["rho"])
    width = float(params.get("width") or defaults["width"])
    m = int(params.get("M") or defaults["M"])
    r = int(params.get("r", 1))
    family_dim = int(params.get("family_dim", 0))
    xi_max = int(params.get("xi_max", 1))
    grid = int(params.get("grid", 5))
    budget = int(params.get("budget", 20))
    if width >= rho:
        raise ConfigError("width: must be smaller than rho")
    family = torus.coordinate_subspace_family(dim, family_dim) if family_dim else []
    try:
        centres, cert = torus.sample_centres(
            dim, r, rho, m, family, rng,
            xi_max=xi_max, grid_points=grid, budget=budget,
        )
    except torus.CentreSamplingError as exc:
        raise BudgetExceeded(str(exc)) from exc
    e = torus.SymCoeffs.random(dim, rng)
    theta = rng.integers(0, 2**64, size=dim, dtype=np.uint64)
    col = torus.build_colouring(n, theta, torus.AnnulusSystem(centres, rho, width, e))
    meta = {
        "construction": "main",
        "D": dim,
        "rho": rho,
        "width": width,
        "M": m,
        "certificate": cert.to_dict(),
        "theta_mantissa": [int(x) for x in theta],
        "system_json": torus.AnnulusSystem(centres, rho, width, e).to_json(),
    }
    return col, meta


def _verify_stats(col: coloring.Colouring, d_max: int) -> dict:
    witness = coloring.find_blue_3ap(col)
    red_len, red_wit = coloring.longest_mono_ap(col, coloring.RED, d_max)
    blue_len, blue_wit = coloring.longest_mono_ap(col, coloring.BLUE, d_max)
    return {
        "N": col.n_max,
        "blue_count": col.blue_count(),
        "blue_3ap": witness.to_dict() if witness else None,
        "has_blue_3ap": witness is not None,
        "d_max": d_max,
        "longest_red": red_len,
        "longest_red_witness": red_wit.to_dict() if red_wit else None,
        "longest_blue": blue_len,
        "longest_blue_witness": blue_wit.to_dict() if blue_wit else None,
    }


# ---------------------------------------------------------------------------
# experiments
# ---------------------------------------------------------------------------


def _exp_generate(cfg: ExperimentConfig) -> ExperimentResult:
    (construction,) = cfg.require("construction")
    cfg.require("N")
    cfg.validate_toy()
    rng = substream(cfg.seed, "generate", 0)
    col, meta = build_construction(construction, cfg.params, rng)
    d_max = int(cfg.get("d_max", min(col.n_max - 1, int(math.isqrt(col.n_max)))))
    stats = _verify_stats(col, d_max)
    rec = {"seed": cfg.seed, **meta, **stats}
    res = ExperimentResult(cfg, records=[rec], artifacts={"colouring": col})
    res.summary = {
        "N": col.n_max,
        "blue_count": stats["blue_count"],
        "has_blue_3ap": stats["has_blue_3ap"],
        "longest_red": stats["longest_red"],
    }
    return res


def _exp_verify(cfg: ExperimentConfig) -> ExperimentResult:
    (path,) = cfg.require("colouring")
    col = coloring.Colouring.load(path)
    d_max = cfg.get("d_max")
    if d_max is None:
        if col.n_max > 10**5:
            raise ConfigError("d_max: required for N > 1e5 (full scan is quadratic)")
        d_max = col.n_max - 1 if col.n_max > 1 else 1
    stats = _verify_stats(col, int(d_max))
    res = ExperimentResult(cfg, records=[{"colouring": str(path), **stats}])
    res.summary = {
        "N": col.n_max,
        "has_blue_3ap": stats["has_blue_3ap"],
        "longest_red": stats["longest_red"],
        "longest_blue": stats["longest_blue"],
    }
    return res


def _exp_verify_witness(cfg: ExperimentConfig) -> ExperimentResult:
    (path,) = cfg.require("witness")
    with open(path, "r", encoding="utf-8") as fh:
        payload = json.load(fh)
    kind = payload.get("kind")
    if kind == "ap":
        col = coloring.Colouring.load(payload["colouring"])
        wit = coloring.ApWitness.from_dict(payload["witness"])
        ok = coloring.ap_is_monochromatic(col, wit, payload["colour"])
        rec = {"kind": kind, "verified": ok, "witness": wit.to_dict()}
    elif kind in ("dio-cond1", "dio-cond2"):
        params = diophantine.DioParams(**payload["params"])
        theta = np.asarray(payload["theta_mantissa"], dtype=np.uint64)
        if kind == "dio-cond1":
            wit = diophantine.Cond1Witness(
                n=int(payload["witness"]["n"]),
                xis=tuple(tuple(x) for x in payload["witness"]["xis"]),
            )
            ok = diophantine.verify_condition_one_witness(theta, params, wit)
        else:
            wit = diophantine.Cond2Witness(
                d=int(payload["witness"]["d"]), count=int(payload["witness"]["count"])
            )
            ok = diophantine.verify_condition_two_witness(theta, params, wit)
        rec = {"kind": kind, "verified": ok, "witness": payload["witness"]}
    else:
        raise ConfigError(f"witness: unknown kind {kind!r}")
    res = ExperimentResult(cfg, records=[rec])
    res.summary = {"kind": kind, "verified": rec["verified"]}
    return res


def _exp_centres(cfg: ExperimentConfig) -> ExperimentResult:
    d, r, m = cfg.require("D", "r", "M")
    cfg.validate_toy()
    rho = float(cfg.get("rho") or formula_defaults(None, int(d))["rho"])
    family_dim = int(cfg.get("family_dim", 1))
    xi_max = int(cfg.get("xi_max", 1))
    grid = int(cfg.get("grid", 9))
    budget = int(cfg.get("budget", 20))
    family = torus.coordinate_subspace_family(int(d), family_dim) if family_dim else []
    rng = substream(cfg.seed, "centres", 0)
    try:
        centres, cert = torus.sample_centres(
            int(d), int(r), rho, int(m), family, rng,
            xi_max=xi_max, grid_points=grid, budget=budget,
        )
    except torus.CentreSamplingError as exc:
        raise BudgetExceeded(str(exc)) from exc
    rec = {"seed": cfg.seed, "D": int(d), "rho": rho, "M": int(m),
           "certificate": cert.to_dict(), "centres": centres.tolist()}
    res = ExperimentResult(cfg, records=[rec], artifacts={"centres": centres})
    res.summary = {
        "attempts": cert.attempts_used,
        "min_triple_norm": cert.min_triple_norm,
        "coverage_ok": cert.coverage_ok,
    }
    return res


def _exp_dio_check(cfg: ExperimentConfig) -> ExperimentResult:
    n, r, d = cfg.require("N", "r", "D")
    params = diophantine.DioParams.from_scale(
        int(n), int(r), int(d), c2=float(cfg.get("c2", 1.0))
    )
    trials = int(cfg.get("trials", 1))
    extra = int(cfg.get("n_samples", 32))
    d_limit = int(cfg.get("d_limit", 64))
    records = []
    passes = 0
    for t in range(trials):
        rng = substream(cfg.seed, "dio", t)
        theta = rng.integers(0, 2**64, size=int(d), dtype=np.uint64)
        ns = diophantine.condition_one_sample(int(n), rng, extra=extra)
        c1 = diophantine.check_condition_one(theta, params, ns)
        ds = diophantine.condition_two_differences(params, limit=d_limit)
        c2 = diophantine.check_condition_two(theta, params, ds)
        report = diophantine.DioReport(c1, c2, params)
        passes += report.passed
        records.append(
            {"trial": t, "theta_mantissa": [int(x) for x in theta], **report.to_dict()}
        )
    lo, hi = wilson_interval(passes, trials) if trials else (0.0, 1.0)
    res = ExperimentResult(cfg, records=records)
    res.summary = {
        "trials": trials,
        "passes": passes,
        "pass_rate": passes / trials if trials else 0.0,
        "wilson_lo": lo,
        "wilson_hi": hi,
    }
    return res


def _exp_bohr(cfg: ExperimentConfig) -> ExperimentResult:
    x_len, d_dim = cfg.require("X", "D")
    d_diff = int(cfg.get("d", 1))
    trials = int(cfg.get("trials", 1))
    c1 = float(cfg.get("c1", 2.0))
    records = []
    ok_count = 0
    for t in range(trials):
        rng = substream(cfg.seed, "bohr", t)
        theta = rng.integers(0, 2**64, size=int(d_dim), dtype=np.uint64)
        raw = lattice.bohr_structure(theta, d_diff, int(x_len), int(d_dim))
        rec = {
            "trial": t,
            "theta_mantissa": [int(x) for x in theta],
            "d": d_diff,
            "n": raw.n,
            "lengths": raw.lengths,
            "report": raw.report,
        }
        ok_count += raw.report["all_ok"]
        try:
            refined = lattice.refine_structure(raw, theta, d_diff, int(x_len), int(d_dim), c1=c1)
            rec["refined"] = refined.to_dict()
        except lattice.AllPrunedError as exc:
            rec["refined"] = None
            rec["refine_error"] = str(exc)
        records.append(rec)
    res = ExperimentResult(cfg, records=records)
    res.summary = {"trials": trials, "raw_all_ok": ok_count}
    return res


def _exp_quadgap(cfg: ExperimentConfig) -> ExperimentResult:
    s, q_bound, l_base, b_exp = cfg.require("s", "Q", "L", "B")
    trials = int(cfg.get("trials", 20))
    rng = substream(cfg.seed, "quadgap", 0)
    est = quadform.estimate_sigma_probability(
        int(s), float(q_bound), float(l_base), float(b_exp), None, trials, rng,
        grid_b=int(cfg.get("grid_b", 3)), grid_c=int(cfg.get("grid_c", 3)),
    )
    records = [{"trial": r["trial"], "pass": r["pass"], "worst_gap": r["worst_gap"]}
               for r in est.records]
    res = ExperimentResult(cfg, records=records)
    res.summary = est.to_dict()
    return res


def _exp_dettail(cfg: ExperimentConfig) -> ExperimentResult:
    n = int(cfg.get("n", 4))
    trials = int(cfg.get("trials", 100_000))
    deltas = cfg.get("deltas", [1e-4, 1e-5, 1e-6])
    rng = substream(cfg.seed, "dettail", 0)
    freqs = quadform.random_sym_det_tail(n, deltas, trials, rng)
    records = []
    summary = {"n": n, "trials": trials}
    for dlt, (freq, (lo, hi)) in sorted(freqs.items()):
        records.append(
            {"delta": dlt, "frequency": freq, "wilson_lo": lo, "wilson_hi": hi,
             "ratio": freq / dlt if dlt else None}
        )
        summary[f"freq_{dlt:g}"] = freq
    if cfg.get("fixed_diag"):
        m = int(cfg.get("m", 3))
        q_bound = float(cfg.get("Q", 1.0))
        delta = float(cfg.get("delta", 1e-4))
        diag = cfg.get("diag") or [1.0] * m
        freq = quadform.fixed_diag_det_tail(
            m, diag, q_bound, delta, trials, substream(cfg.seed, "dettail", 1)
        )
        records.append({"fixed_diag": True, "m": m, "delta": delta, "frequency": freq})
        summary["fixed_diag_freq"] = freq
    return ExperimentResult(cfg, records=records, summary=summary)


def _exp_cliquepack(cfg: ExperimentConfig) -> ExperimentResult:
    s, m = cfg.require("s", "m")
    packing = quadform.clique_pack(int(s), int(m))
    ok = packing.verify_edge_disjoint()
    rec = packing.to_dict()
    rec["edge_disjoint"] = ok
    res = ExperimentResult(cfg, records=[rec], artifacts={"packing": packing})
    res.summary = {"k": packing.k, "prime": packing.prime, "edge_disjoint": ok,
                   "k_bound_ok": packing.k >= int(s) / 16}
    return res


def _exp_cutoffs(cfg: ExperimentConfig) -> ExperimentResult:
    eta = float(cfg.get("eta", 0.1))
    fejer_x = float(cfg.get("X", 100.0))
    delta = float(cfg.get("delta", 0.05))
    box_x = float(cfg.get("box_X", 16.0))
    box_d = int(cfg.get("box_D", 2))
    ball_d = int(cfg.get("ball_D", 2))
    ball_rho = float(cfg.get("ball_rho", 0.95))
    ball_k = cfg.get("ball_k", 4)
    reports = [
        cutoffs.tent(eta).report(),
        cutoffs.fejer_weight(fejer_x).report(),
        cutoffs.interval_majorant(delta).report(),
        cutoffs.band_limited_minorant().report(),
        cutoffs.torus_box_cutoff(box_x, box_d).report(),
        cutoffs.torus_ball_minorant(ball_d, ball_rho, int(ball_k)).report(),
    ]
    res = ExperimentResult(cfg, records=reports)
    res.summary = {
        rep["kind"]: all(bool(v) for k, v in rep.items() if k.endswith("_ok"))
        for rep in reports
    }
    return res


def _exp_compare_st(cfg: ExperimentConfig) -> ExperimentResult:
    m = int(cfg.get("m", 2))
    l_base = float(cfg.get("L", 900.0))
    q_bound = float(cfg.get("Q", 5.0))
    n_forms = int(cfg.get("forms", 20))
    n_xi = int(cfg.get("xi_count", 10))
    eta = float(cfg.get("eta", 0.1))
    box = quadform.BoxSpec(
        lengths=tuple(l_base * (1.0 + 0.013 * i) for i in range(m)), base=l_base
    )
    w = cutoffs.tent(eta)
    xi_max = l_base ** (1.0 / 8.0)
    xis = np.linspace(-xi_max, xi_max, n_xi)
    records = []
    worst = 0.0
    for f in range(n_forms):
        rng = substream(cfg.seed, "compare-st", f)
        a = np.empty(quadform.tuple_len(m))
        for k, (i, j) in enumerate(quadform.index_pairs(m)):
            a[k] = rng.uniform(1.0, q_bound) if i == j else rng.uniform(-q_bound, q_bound)
        b = rng.uniform(-q_bound, q_bound, size=m)
        c = rng.uniform(-q_bound, q_bound)
        q = quadform.QuadForm(m, a, b, c)
        for xi in xis:
            s_val = quadform.exp_sum_discrete(q, box, w, float(xi))
            t_val = quadform.exp_sum_continuous(q, w, float(xi), order=128).value
            diff = abs(s_val - t_val)
            worst = max(worst, diff)
            records.append({"form": f, "xi": float(xi), "S": [s_val.real, s_val.imag],
                            "T": [t_val.real, t_val.imag], "diff": diff})
    bound = 10.0 * l_base**-0.5
    res = ExperimentResult(cfg, records=records)
    res.summary = {"max_diff": worst, "bound": bound, "bound_ok": worst <= bound,
                   "forms": n_forms, "xi_count": n_xi}
    return res


def _exp_blue_freq(cfg: ExperimentConfig) -> ExperimentResult:
    (construction,) = cfg.require("construction")
    trials = int(cfg.get("trials", 100))
    cfg.validate_toy()
    records = []
    hits = 0
    for t in range(trials):
        rng = substream(cfg.seed, "blue-freq", t)
        col, _meta = build_construction(construction, cfg.params, rng)
        wit = coloring.find_blue_3ap(col)
        hits += wit is not None
        records.append(
            {"trial": t, "has_blue_3ap": wit is not None, "blue_count": col.blue_count()}
        )
    lo, hi = wilson_interval(hits, trials) if trials else (0.0, 1.0)
    res = ExperimentResult(cfg, records=records)
    res.summary = {"trials": trials, "blue_3ap_fraction": hits / trials if trials else 0.0,
                   "wilson_lo": lo, "wilson_hi": hi}
    return res


def _exp_reference(cfg: ExperimentConfig) -> ExperimentResult:
    (k,) = cfg.require("k")
    entry = REFERENCE_TABLE.lookup(int(k))
    res = ExperimentResult(cfg, records=[entry.to_dict()])
    res.summary = entry.to_dict()
    return res


def _exp_search(cfg: ExperimentConfig) -> ExperimentResult:
    mode = cfg.get("mode", "best")
    if mode == "witness":
        n, k = cfg.require("N", "k")
        budget = int(cfg.get("budget", 200_000))
        out = search_witness(int(n), int(k), budget, cfg.seed)
        rec = {
            "mode": mode, "N": int(n), "k": int(k), "budget": budget,
            "found": out is not None,
        }
        artifacts = {}
        if out is not None:
            rec["colouring"] = out.dumps()
            artifacts["colouring"] = out
        res = ExperimentResult(cfg, records=[rec], artifacts=artifacts)
        res.summary = {"found": out is not None}
        return res
    (construction,) = cfg.require("construction")
    budget = int(cfg.get("budget", 10))
    grid_json = cfg.get("param_grid")
    grid = json.loads(grid_json) if isinstance(grid_json, str) else (grid_json or [{}])
    best, records = search_best(construction, budget, grid, cfg.seed, cfg.params)
    res = ExperimentResult(cfg, records=records)
    res.summary = {
        "evaluated": len(records),
        "best_longest_red": best["longest_red"] if best else None,
        "best_has_blue_3ap": best["has_blue_3ap"] if best else None,
    }
    return res


def search_best(
    construction: str, budget: int, param_grid: list[dict], seed: int, base_params: dict
) -> tuple[dict | None, list[dict]]:
    """Scan the parameter grid, scoring (no blue 3-AP, small longest red AP).

    The budget caps the number of colourings built.  Returns the best record
    and all evaluation records.
    """
    if not param_grid:
        raise ConfigError("param_grid: must contain at least one entry")
    if budget < 1:
        raise ConfigError("budget: must be >= 1")
    records = []
    best = None
    built = 0
    for gi, entry in enumerate(param_grid):
        if built >= budget:
            break
        params = dict(base_params)
        params.update(entry)
        rng = substream(seed, "search", gi)
        col, meta = build_construction(construction, params, rng)
        built += 1
        d_max = int(params.get("d_max", min(col.n_max - 1, int(math.isqrt(col.n_max)))))
        stats = _verify_stats(col, d_max)
        rec = {"grid_index": gi, "params": {k: v for k, v in entry.items()}, **stats}
        records.append(rec)
        key = (stats["has_blue_3ap"], stats["longest_red"])
        if best is None or key < (best["has_blue_3ap"], best["longest_red"]):
            best = rec
    return best, records


# ---------------------------------------------------------------------------
# simulated-annealing witness search
# ---------------------------------------------------------------------------


def _ap_tables(n: int, k: int):
    """Index tables for all 3-APs and all k-APs inside [n] (0-based)."""
    threes = []
    for d in range(1, (n - 1) // 2 + 1):
        for a in range(0, n - 2 * d):
            threes.append((a, a + d, a + 2 * d))
    kaps = []
    for d in range(1, (n - 1) // (k - 1) + 1):
        for a in range(0, n - (k - 1) * d):
            kaps.append(tuple(a + i * d for i in range(k)))
    return np.asarray(threes), np.asarray(kaps)


def search_witness(
    n: int, k: int, budget: int, seed: int, restarts: int = 40
) -> coloring.Colouring | None:
    """Simulated annealing for a colouring of [n] with no blue 3-AP and no
    red k-AP.  Returns None when the flip budget is exhausted."""
    threes, kaps = _ap_tables(n, k)
    member3 = [[] for _ in range(n)]
    for ap_id, tri in enumerate(threes):
        for e in tri:
            member3[e].append(ap_id)
    memberk = [[] for _ in range(n)]
    for ap_id, ap in enumerate(kaps):
        for e in ap:
            memberk[e].append(ap_id)
    member3 = [np.asarray(v, dtype=np.int64) for v in member3]
    memberk = [np.asarray(v, dtype=np.int64) for v in memberk]
    w3 = 3.0
    flips_used = 0
    for restart in range(restarts):
        if flips_used >= budget:
            break
        rng = substream(seed, "witness", restart)
        blue = rng.random(n) < 0.25
        cnt3 = blue[threes].sum(axis=1)
        cntk = blue[kaps].sum(axis=1)
        v3 = int((cnt3 == 3).sum())
        vk = int((cntk == 0).sum())
        energy = w3 * v3 + vk
        temp = 2.0
        cooling = 0.999995
        while flips_used < budget:
            flips_used += 1
            temp *= cooling
            e = int(rng.integers(0, n))
            delta = -1 if blue[e] else 1
            ids3 = member3[e]
            idsk = memberk[e]
            b3 = cnt3[ids3]
            bk = cntk[idsk]
            d_v3 = int(((b3 + delta) == 3).sum() - (b3 == 3).sum())
            d_vk = int(((bk + delta) == 0).sum() - (bk == 0).sum())
            d_energy = w3 * d_v3 + d_vk
            if d_energy <= 0 or rng.random() < math.exp(-d_energy / max(temp, 1e-9)):
                blue[e] = not blue[e]
                cnt3[ids3] = b3 + delta
                cntk[idsk] = bk + delta
                v3 += d_v3
                vk += d_vk
                energy += d_energy
                if energy == 0:
                    return coloring.Colouring(n, blue)
    return None


EXPERIMENTS = {
    "generate": _exp_generate,
    "verify": _exp_verify,
    "verify-witness": _exp_verify_witness,
    "centres": _exp_centres,
    "dio-check": _exp_dio_check,
    "bohr": _exp_bohr,
    "quadgap": _exp_quadgap,
    "dettail": _exp_dettail,
    "cliquepack": _exp_cliquepack,
    "cutoffs": _exp_cutoffs,
    "compare-st": _exp_compare_st,
    "blue-freq": _exp_blue_freq,
    "search": _exp_search,
    "reference": _exp_reference,
}


def run(cfg: ExperimentConfig) -> ExperimentResult:
    """Dispatch a validated config to its experiment."""
    if cfg.experiment not in EXPERIMENTS:
        raise ConfigError(f"experiment: unknown verb {cfg.experiment!r}")
    return EXPERIMENTS[cfg.experiment](cfg)
