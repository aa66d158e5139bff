"""Experiment orchestration: config parsing, solver dispatch, aggregation and CSV output.

A config is flat ``key = value`` text with dotted section names::

    model.type = villain
    model.L = 4
    method.name = qmc
    method.M = 16
    method.tau_list = 100, 300, 1000
    output.directory = results/villain_qmc

Per-run seeds are ``derive_seed(base_seed, disorder_index, tau, run_index)``,
so any single task can be reproduced in isolation.
"""

from __future__ import annotations

import csv
import logging
import math
from collections import defaultdict
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np
from scipy import stats

from . import exact, qmc, sa
from .groundstates import GroundStateSet, enumerate_exhaustive, enumerate_ground_states, lattice_ground_energy
from .groundstates import MAX_LATTICE_L, write_ground_states
from .model import CapabilityError, IsingProblem, build_problem, energies_of_indices, free_spin_count
from .model import known_ground_energy, pack_rows
from .seeding import derive_seed

log = logging.getLogger(__name__)

MODELS = ("villain", "pmj", "gaussian", "five_spin")
METHODS = ("enumerate", "spectrum", "exact_qa", "exact_sa", "qmc", "sa", "analyze")
EXACT_LIMIT = exact.MAX_EXACT_SPINS
REFERENCE_SCAN_LIMIT = 20

QMC_COLUMNS = ("model", "L", "disorder_seed", "M", "tau", "run_seed", "e_avg", "e_best")
SA_COLUMNS = ("model", "L", "disorder_seed", "tau", "run_seed", "e_final")
HITS_COLUMNS = ("gs_index", "hits", "rel_freq", "free_spins")
SPECTRUM_COLUMNS = ("s", "level", "energy")
PROBS_COLUMNS = ("tau", "gs_index", "probability")
RESIDUAL_COLUMNS = ("method", "tau", "residual_per_spin")
AGGREGATE_COLUMNS = (
    "method", "model", "L", "M", "tau", "effective_budget",
    "residual_avg_mean", "residual_avg_stderr", "residual_best_mean", "residual_best_stderr",
    "n_samples", "provisional",
)
FIT_COLUMNS = ("source", "method", "model", "L", "M", "exponent", "stderr", "prefactor", "n_points")


class ConfigError(ValueError):
    """Invalid configuration; ``key`` names the offending entry."""

    def __init__(self, key: str, message: str):
        super().__init__(f"{key}: {message}")
        self.key = key


class FitError(ValueError):
    pass


# ---------------------------------------------------------------- config

_DEFAULTS = {
    "model.type": None,
    "model.L": "4",
    "model.h": "0",
    "model.disorder_seeds": "0",
    "method.name": None,
    "method.driver": "transverse",
    "method.M": "16",
    "method.tau_list": "",
    "method.runs_per_tau": "100",
    "method.base_seed": "0",
    "method.pre_anneal_steps": "100",
    "method.gamma_pre": "",
    "method.final_quench": "true",
    "method.dt": "",
    "method.s_points": "101",
    "method.hits_tau": "",
    "output.directory": "",
    "output.formats": "csv",
    "analyze.inputs": "",
    "analyze.window": "",
}


def parse_config_text(text: str, source: str = "<config>") -> dict[str, str]:
    raw: dict[str, str] = {}
    for lineno, line in enumerate(text.splitlines(), 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"{source}:{lineno}", "expected 'key = value'")
        key, value = (part.strip() for part in line.split("=", 1))
        raw[key] = value
    return raw


def parse_overrides(items) -> dict[str, str]:
    out = {}
    for item in items or ():
        if "=" not in item:
            raise ConfigError(item, "override must look like key=value")
        key, value = (part.strip() for part in item.split("=", 1))
        out[key] = value
    return out


def _int(raw, key, lo=None):
    try:
        v = int(raw[key])
    except ValueError:
        raise ConfigError(key, f"expected an integer, got {raw[key]!r}") from None
    if lo is not None and v < lo:
        raise ConfigError(key, f"must be >= {lo}, got {v}")
    return v


def _float(raw, key, optional=False):
    if optional and raw[key] == "":
        return None
    try:
        v = float(raw[key])
    except ValueError:
        raise ConfigError(key, f"expected a number, got {raw[key]!r}") from None
    if not math.isfinite(v):
        raise ConfigError(key, "must be finite")
    return v


def _list(raw, key, conv=float):
    items = [s for s in (p.strip() for p in raw[key].split(",")) if s]
    try:
        return [conv(s) for s in items]
    except ValueError:
        raise ConfigError(key, f"cannot parse {raw[key]!r} as a comma-separated list") from None


def _bool(raw, key):
    v = raw[key].lower()
    if v in ("1", "true", "yes", "on"):
        return True
    if v in ("0", "false", "no", "off"):
        return False
    raise ConfigError(key, f"expected true/false, got {raw[key]!r}")


@dataclass(frozen=True)
class ExperimentConfig:
    model: str
    L: int
    h: float
    disorder_seeds: tuple[int, ...]
    method: str
    driver: exact.DriverKind
    M: int
    tau_list: tuple[float, ...]
    runs_per_tau: int
    base_seed: int
    pre_anneal_steps: int
    gamma_pre: float | None
    final_quench: bool
    dt: float | None
    s_points: int
    hits_tau: float | None
    directory: Path
    formats: tuple[str, ...]
    analyze_inputs: tuple[Path, ...] = ()
    window: tuple[float, float] | None = None
    raw: dict = field(default_factory=dict, compare=False, repr=False)

    @classmethod
    def from_mapping(cls, mapping: dict[str, str]) -> "ExperimentConfig":
        unknown = sorted(set(mapping) - set(_DEFAULTS))
        if unknown:
            raise ConfigError(unknown[0], "unknown key")
        raw = {**_DEFAULTS, **{k: str(v) for k, v in mapping.items()}}
        for key, value in raw.items():
            if value is None:
                raise ConfigError(key, "required")

        model = raw["model.type"]
        if model not in MODELS:
            raise ConfigError("model.type", f"expected one of {', '.join(MODELS)}, got {model!r}")
        method = raw["method.name"]
        if method not in METHODS:
            raise ConfigError("method.name", f"expected one of {', '.join(METHODS)}, got {method!r}")
        L = 0 if model == "five_spin" else _int(raw, "model.L", lo=2)
        if model == "villain" and L % 2:
            raise ConfigError("model.L", "the fully frustrated lattice needs even L")
        h = _float(raw, "model.h")
        if model in ("villain", "pmj") and h != 0.0:
            raise ConfigError("model.h", f"{model} instances are built without a field")
        seeds = _list(raw, "model.disorder_seeds", int)
        if not seeds or min(seeds) < 0:
            raise ConfigError("model.disorder_seeds", "need at least one non-negative seed")
        try:
            driver = exact.DriverKind.parse(raw["method.driver"])
        except ValueError as exc:
            raise ConfigError("method.driver", str(exc)) from None
        M = _int(raw, "method.M", lo=2)

        taus: list[float] = []
        if method not in ("enumerate", "spectrum", "analyze"):
            taus = _list(raw, "method.tau_list", float)
            if not taus:
                raise ConfigError("method.tau_list", "must not be empty")
            if any(b <= a for a, b in zip(taus, taus[1:])):
                raise ConfigError("method.tau_list", "must be strictly increasing")
            if method in ("qmc", "sa"):
                if any(t != int(t) for t in taus):
                    raise ConfigError("method.tau_list", "Monte Carlo tau values are sweep counts and must be integers")
                if taus[0] < 2:
                    raise ConfigError("method.tau_list", "tau must be >= 2 sweeps")
            elif taus[0] <= 0:
                raise ConfigError("method.tau_list", "tau must be positive")

        n_spins = 5 if model == "five_spin" else L * L
        if method in ("exact_qa", "exact_sa"):
            if n_spins > EXACT_LIMIT:
                raise ConfigError("model.L", f"exact methods need N <= {EXACT_LIMIT}, got N = {n_spins}")
            if len(seeds) != 1:
                raise ConfigError("model.disorder_seeds", "exact methods take a single disorder seed")

        hits_tau = _float(raw, "method.hits_tau", optional=True)
        if hits_tau is not None and hits_tau not in taus:
            raise ConfigError("method.hits_tau", "must be one of the tau_list values")
        formats = tuple(_list(raw, "output.formats", str))
        if formats != ("csv",):
            raise ConfigError("output.formats", "only 'csv' is supported")
        window = None
        if raw["analyze.window"]:
            w = _list(raw, "analyze.window", float)
            if len(w) != 2 or not 0 < w[0] < w[1]:
                raise ConfigError("analyze.window", "expected 'lo, hi' with 0 < lo < hi")
            window = (w[0], w[1])
        directory = Path(raw["output.directory"] or f"results/{method}")
        inputs = tuple(Path(p) for p in _list(raw, "analyze.inputs", str)) or (directory,)
        dt = _float(raw, "method.dt", optional=True)
        if dt is not None and dt <= 0:
            raise ConfigError("method.dt", "must be positive")

        return cls(
            model=model,
            L=L,
            h=h,
            disorder_seeds=tuple(seeds),
            method=method,
            driver=driver,
            M=M,
            tau_list=tuple(taus),
            runs_per_tau=_int(raw, "method.runs_per_tau", lo=1),
            base_seed=_int(raw, "method.base_seed", lo=0),
            pre_anneal_steps=_int(raw, "method.pre_anneal_steps", lo=0),
            gamma_pre=_float(raw, "method.gamma_pre", optional=True),
            final_quench=_bool(raw, "method.final_quench"),
            dt=dt,
            s_points=_int(raw, "method.s_points", lo=2),
            hits_tau=hits_tau,
            directory=directory,
            formats=formats,
            analyze_inputs=inputs,
            window=window,
            raw=raw,
        )

    @classmethod
    def load(cls, path: str | Path | None = None, overrides: dict[str, str] | None = None) -> "ExperimentConfig":
        mapping: dict[str, str] = {}
        if path is not None:
            try:
                text = Path(path).read_text()
            except OSError as exc:
                raise ConfigError("--config", f"cannot read {path}: {exc.strerror}") from None
            mapping = parse_config_text(text, str(path))
        mapping.update(overrides or {})
        return cls.from_mapping(mapping)

    def problem(self, disorder_seed: int) -> IsingProblem:
        return build_problem(self.model, self.L, self.h, disorder_seed)


# ---------------------------------------------------------------- statistics


@dataclass(frozen=True)
class PowerLawFit:
    exponent: float
    stderr: float
    prefactor: float
    n_points: int


def fit_power_law(points, window: tuple[float, float] | None = None) -> PowerLawFit:
    """Least-squares fit of ``log y = log c + a log tau`` over points inside ``window`` (inclusive)."""
    pts = sorted((float(t), float(y)) for t, y in points)
    if window is not None:
        lo, hi = window
        pts = [(t, y) for t, y in pts if lo <= t <= hi]
    if len(pts) < 4:
        raise FitError(f"need at least 4 points in the window, got {len(pts)}")
    if any(t <= 0 or y <= 0 for t, y in pts):
        raise FitError("power-law fit needs positive tau and residual values")
    x = np.log([t for t, _ in pts])
    y = np.log([y for _, y in pts])
    res = stats.linregress(x, y)
    return PowerLawFit(float(res.slope), float(res.stderr), float(np.exp(res.intercept)), len(pts))


@dataclass(frozen=True)
class AggregateRecord:
    key: tuple
    tau: float
    effective_budget: float
    residual_avg_mean: float
    residual_avg_stderr: float
    residual_best_mean: float
    residual_best_stderr: float
    n_samples: int
    provisional: bool = False


def _mean_stderr(values) -> tuple[float, float]:
    v = sorted(values)
    n = len(v)
    mean = math.fsum(v) / n
    if n < 2:
        return mean, 0.0
    var = math.fsum((x - mean) ** 2 for x in v) / (n - 1)
    return mean, math.sqrt(var / n)


def aggregate(records, keys=("method", "model", "L", "M", "tau")) -> list[AggregateRecord]:
    """Mean and standard error of ``residual_avg`` / ``residual_best`` per group, sorted by key.

    Each record is a mapping holding the group keys plus ``tau``,
    ``effective_budget``, ``residual_avg``, ``residual_best`` and optionally
    ``provisional``.
    """
    groups: dict[tuple, list] = defaultdict(list)
    for r in records:
        groups[tuple(r[k] for k in keys)].append(r)
    out = []
    for key in sorted(groups, key=lambda k: tuple((v is None, str(type(v)), v) for v in k)):
        rows = groups[key]
        avg_m, avg_s = _mean_stderr(r["residual_avg"] for r in rows)
        best_m, best_s = _mean_stderr(r["residual_best"] for r in rows)
        out.append(
            AggregateRecord(
                key=key,
                tau=rows[0]["tau"],
                effective_budget=rows[0]["effective_budget"],
                residual_avg_mean=avg_m,
                residual_avg_stderr=avg_s,
                residual_best_mean=best_m,
                residual_best_stderr=best_s,
                n_samples=len(rows),
                provisional=any(r.get("provisional", False) for r in rows),
            )
        )
    return out


def reference_energy(problem: IsingProblem) -> float | None:
    """Exact ground energy when it is cheap to obtain, else ``None``."""
    e0 = known_ground_energy(problem)
    if e0 is not None:
        return e0
    if problem.lattice is not None and problem.lattice.L <= MAX_LATTICE_L:
        return lattice_ground_energy(problem)
    if problem.n_spins <= REFERENCE_SCAN_LIMIT:
        return float(energies_of_indices(problem, np.arange(1 << problem.n_spins)).min())
    return None


# ---------------------------------------------------------------- output


def _fmt(v):
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, (float, np.floating)):
        v = float(v)
        return repr(int(v)) if v.is_integer() and abs(v) < 2**53 else repr(v)
    return str(v)


def write_csv(path: Path, columns, rows) -> Path:
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(columns)
        for row in rows:
            w.writerow([_fmt(v) for v in row])
    return path


def hit_rows(gs: GroundStateSet, problem: IsingProblem, counts: np.ndarray) -> list[tuple]:
    """``hits.csv`` rows sorted by decreasing hits, ties by ordinal."""
    total = int(counts.sum())
    order = np.lexsort((np.arange(counts.size), -counts))
    return [
        (int(k), int(counts[k]), counts[k] / total if total else 0.0, free_spin_count(problem, gs.states[k]))
        for k in order
    ]


def _tau_label(tau: float):
    return int(tau) if float(tau).is_integer() else tau


# ---------------------------------------------------------------- dispatch


def _ground_states(problem: IsingProblem) -> GroundStateSet | None:
    try:
        return enumerate_ground_states(problem, modulo_reversal=problem.field_h == 0.0)
    except CapabilityError as exc:
        log.warning("no ground-state set for %s: %s", problem.name or "problem", exc)
        return None


def _run_enumerate(cfg: ExperimentConfig) -> tuple[list[Path], list[str]]:
    files, errors = [], []
    for seed in cfg.disorder_seeds:
        problem = cfg.problem(seed)
        try:
            gs = enumerate_ground_states(problem, modulo_reversal=problem.field_h == 0.0)
        except CapabilityError as exc:
            errors.append(f"disorder_seed={seed}: {exc}")
            continue
        path = cfg.directory / f"ground_states_s{seed}.txt"
        path.parent.mkdir(parents=True, exist_ok=True)
        write_ground_states(gs, path)
        log.info("disorder_seed=%d: e0=%s, %d ground states", seed, gs.e0, len(gs))
        files.append(path)
    return files, errors


def _run_spectrum(cfg: ExperimentConfig) -> tuple[list[Path], list[str]]:
    problem = cfg.problem(cfg.disorder_seeds[0])
    s_grid = np.linspace(0.0, 1.0, cfg.s_points)
    try:
        levels = exact.instantaneous_spectrum(problem, cfg.driver, s_grid)
    except CapabilityError as exc:
        return [], [str(exc)]
    rows = ((float(s), k, float(e)) for s, row in zip(s_grid, levels) for k, e in enumerate(row))
    return [write_csv(cfg.directory / "spectrum.csv", SPECTRUM_COLUMNS, rows)], []


def _run_exact(cfg: ExperimentConfig) -> tuple[list[Path], list[str]]:
    problem = cfg.problem(cfg.disorder_seeds[0])
    # every state separately, so reversal partners appear as their own curves
    gs = enumerate_exhaustive(problem, modulo_reversal=False)
    quantum = cfg.method == "exact_qa"
    label = f"exact_qa_{cfg.driver.value}" if quantum else "exact_sa"
    probs, resid, errors = [], [], []
    for tau in cfg.tau_list:
        spec = exact.AnnealSpec(tau=tau, dt=cfg.dt, driver=cfg.driver)
        try:
            state = exact.evolve_schroedinger(problem, spec) if quantum else exact.evolve_master(problem, spec)
        except (CapabilityError, exact.IntegrationError) as exc:
            errors.append(f"tau={tau}: {exc}")
            continue
        t = _tau_label(tau)
        probs += [(t, k, p) for k, p in exact.ground_state_probabilities(state, gs).items()]
        resid.append((label, t, exact.residual_energy(state, problem, gs.e0)))
        log.info("%s tau=%s residual/N=%.3e", label, t, resid[-1][2])
    files = [
        write_csv(cfg.directory / "probs.csv", PROBS_COLUMNS, probs),
        write_csv(cfg.directory / "residual_exact.csv", RESIDUAL_COLUMNS, resid),
    ]
    return files, errors


def _run_monte_carlo(cfg: ExperimentConfig) -> tuple[list[Path], list[str]]:
    quantum = cfg.method == "qmc"
    hits_tau = cfg.hits_tau if cfg.hits_tau is not None else cfg.tau_list[-1]
    runs, records, counts, gs, gs_problem = [], [], None, None, None
    for d_idx, d_seed in enumerate(cfg.disorder_seeds):
        problem = cfg.problem(d_seed)
        n = problem.n_spins
        e_ref = reference_energy(problem)
        if d_idx == 0:
            gs, gs_problem = _ground_states(problem), problem
            if gs is not None:
                counts = np.zeros(len(gs), dtype=np.int64)
        energies = []  # (tau, e_avg, e_best) per run, for the provisional reference
        for tau in cfg.tau_list:
            tau_i = int(tau)
            seeds = [derive_seed(cfg.base_seed, d_idx, tau_i, r) for r in range(cfg.runs_per_tau)]
            want_hits = d_idx == 0 and tau == hits_tau and gs is not None
            if quantum:
                schedule = qmc.QmcSchedule(cfg.M, tau_i, cfg.pre_anneal_steps, cfg.gamma_pre, cfg.final_quench)
                for res in qmc.run_qa_batch(problem, schedule, seeds, gs if want_hits else None):
                    runs.append((cfg.model, cfg.L, d_seed, cfg.M, tau_i, res.seed, res.e_avg, res.e_best))
                    energies.append((tau_i, res.e_avg, res.e_best))
                    for k in res.hits:
                        counts[k] += 1
            else:
                finals, e_final = sa.run_sa_batch(problem, sa.SaSchedule(tau_i), seeds)
                for r, e in enumerate(e_final):
                    runs.append((cfg.model, cfg.L, d_seed, tau_i, seeds[r], float(e)))
                    energies.append((tau_i, float(e), float(e)))
                if want_hits:
                    for r, e in enumerate(e_final):
                        if abs(e - gs.e0) <= sa.ENERGY_TOL:
                            k = gs.lookup(pack_rows(finals[r : r + 1])[0])
                            if k is not None:
                                counts[k] += 1
        provisional = e_ref is None
        if provisional:
            e_ref = min(e for _, _, e in energies)
        for tau_i, e_avg, e_best in energies:
            records.append(
                {
                    "method": cfg.method,
                    "model": cfg.model,
                    "L": cfg.L,
                    "M": cfg.M if quantum else 1,
                    "tau": tau_i,
                    "effective_budget": tau_i * cfg.M if quantum else tau_i,
                    "residual_avg": (e_avg - e_ref) / n,
                    "residual_best": (e_best - e_ref) / n,
                    "provisional": provisional,
                }
            )
    name, cols = ("qmc_runs.csv", QMC_COLUMNS) if quantum else ("sa_runs.csv", SA_COLUMNS)
    files = [write_csv(cfg.directory / name, cols, runs)]
    if counts is not None:
        files.append(write_csv(cfg.directory / "hits.csv", HITS_COLUMNS, hit_rows(gs, gs_problem, counts)))
    files.append(write_aggregate(cfg.directory / "aggregate.csv", aggregate(records)))
    return files, []


def write_aggregate(path: Path, recs: list[AggregateRecord]) -> Path:
    rows = (
        (*r.key[:4], r.tau, r.effective_budget, r.residual_avg_mean, r.residual_avg_stderr,
         r.residual_best_mean, r.residual_best_stderr, r.n_samples, r.provisional)
        for r in recs
    )
    return write_csv(path, AGGREGATE_COLUMNS, rows)


def _read_csv(path: Path) -> list[dict[str, str]]:
    with open(path, newline="") as fh:
        return list(csv.DictReader(fh))


def _run_analyze(cfg: ExperimentConfig) -> tuple[list[Path], list[str]]:
    """Re-aggregate run CSVs from ``analyze.inputs`` against a shared reference and fit power laws."""
    mc_rows = []
    resid_exact = []
    for d in cfg.analyze_inputs:
        for method, name in (("qmc", "qmc_runs.csv"), ("sa", "sa_runs.csv")):
            if (d / name).exists():
                mc_rows += [(method, row) for row in _read_csv(d / name)]
        if (d / "residual_exact.csv").exists():
            resid_exact += _read_csv(d / "residual_exact.csv")
    if not mc_rows and not resid_exact:
        raise ConfigError("analyze.inputs", "no run CSVs found in " + ", ".join(map(str, cfg.analyze_inputs)))

    # one reference per disorder instance, shared across methods
    refs: dict[tuple, tuple[float, bool, int]] = {}
    observed: dict[tuple, float] = defaultdict(lambda: math.inf)
    for method, row in mc_rows:
        inst = (row["model"], int(row["L"]), int(row["disorder_seed"]))
        e = float(row["e_best"] if method == "qmc" else row["e_final"])
        observed[inst] = min(observed[inst], e)
    for inst in sorted(observed):
        problem = build_problem(inst[0], inst[1], cfg.h, inst[2])
        e0 = reference_energy(problem)
        refs[inst] = (observed[inst], True, problem.n_spins) if e0 is None else (e0, False, problem.n_spins)

    records = []
    for method, row in mc_rows:
        e_ref, prov, n = refs[(row["model"], int(row["L"]), int(row["disorder_seed"]))]
        tau = int(row["tau"])
        M = int(row["M"]) if method == "qmc" else 1
        e_avg = float(row["e_avg"] if method == "qmc" else row["e_final"])
        e_best = float(row["e_best"] if method == "qmc" else row["e_final"])
        records.append(
            {
                "method": method, "model": row["model"], "L": int(row["L"]), "M": M, "tau": tau,
                "effective_budget": tau * M, "residual_avg": (e_avg - e_ref) / n,
                "residual_best": (e_best - e_ref) / n, "provisional": prov,
            }
        )
    recs = aggregate(records) if records else []
    files = [write_aggregate(cfg.directory / "aggregate.csv", recs)]

    fits, errors = [], []
    series: dict[tuple, list] = defaultdict(list)
    for r in recs:
        series[r.key[:4]].append((r.effective_budget, r.residual_avg_mean))
    for row in resid_exact:
        series[(row["method"], "", "", "")].append((float(row["tau"]), float(row["residual_per_spin"])))
    for key in sorted(series, key=lambda k: tuple(map(str, k))):
        source = "exact" if key[1] == "" else "aggregate"
        try:
            f = fit_power_law(series[key], cfg.window)
        except FitError as exc:
            log.warning("no fit for %s: %s", key, exc)
            continue
        fits.append((source, *key, f.exponent, f.stderr, f.prefactor, f.n_points))
    files.append(write_csv(cfg.directory / "fit.csv", FIT_COLUMNS, fits))
    return files, errors


@dataclass
class ExperimentResult:
    files: list[Path]
    errors: list[str]


def run_experiment(cfg: ExperimentConfig) -> ExperimentResult:
    """Run the configured method and write its CSVs.

    Capability errors of individual tasks are collected in ``errors`` while
    the remaining tasks still run.
    """
    runner = {
        "enumerate": _run_enumerate,
        "spectrum": _run_spectrum,
        "exact_qa": _run_exact,
        "exact_sa": _run_exact,
        "qmc": _run_monte_carlo,
        "sa": _run_monte_carlo,
        "analyze": _run_analyze,
    }[cfg.method]
    files, errors = runner(cfg)
    return ExperimentResult(files, errors)
