"""Monte Carlo sweeps, expectation checks, mu studies and threshold tables.

Every command returns CSV text that starts with the schema line
``# stoch2c-csv v1`` followed by ``#`` comment lines describing the run.
Outputs depend only on the configuration: trial seeds come from
:func:`derive_seed`, work is merged in (cell, trial) order whatever the
thread count, and wall times go to a separate timing file.

Seeds are shared by all p-cells with the same ``n`` (common random numbers),
so outcomes at a fixed seed are monotone in every coordinate of ``p``.
"""

from __future__ import annotations

import csv
import io
import math
import os
import time
import warnings
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field, fields, replace
from fractions import Fraction
from pathlib import Path
from statistics import NormalDist

import numpy as np

from .complex import SimplicialComplex2, f_vector, from_maximal_simplices
from .embedding import (HostIndex, SearchBudgetExceeded, alpha_margin, count_embeddings,
                        expected_embedding_count, find_embedding, tetrahedron_boundary, torus_7)
from .minimize import DEFAULT_BUDGET, BudgetExceeded, NoSubcomplex, mu_min
from .model import ProbabilityTriple, draw_coupled, lower_masks
from .rng import colex_tables, derive_seed
from .s2c import load
from .subdivision import subdivide_k

CSV_VERSION = "# stoch2c-csv v1"
THREADS_ENV = "STOCH2C_THREADS"
INVALID_UNKNOWN_FRACTION = 0.01
Z_FLAG = 3.0

BUILTIN_SOURCES = {
    "torus7": torus_7,
    "triangle": lambda: from_maximal_simplices([(0, 1, 2)]),
    "edge": lambda: from_maximal_simplices([(0, 1)]),
    "tetrahedron": tetrahedron_boundary,
}


class ConfigError(ValueError):
    pass


def _fmt(x) -> str:
    if isinstance(x, bool):
        return str(int(x))
    if isinstance(x, Fraction):
        return str(x)
    if isinstance(x, float):
        return repr(x)
    return str(x)


def parse_number(text: str) -> Fraction:
    """Exact value of ``"0.45"``, ``"1/3"`` or ``"2"``."""
    try:
        return Fraction(text.strip())
    except (ValueError, ZeroDivisionError) as exc:
        raise ConfigError(f"not a number: {text!r}") from exc


def parse_triple(text: str) -> tuple[Fraction, Fraction, Fraction]:
    parts = text.split(",")
    if len(parts) != 3:
        raise ConfigError(f"expected three comma-separated values, got {text!r}")
    return tuple(parse_number(x) for x in parts)


@dataclass(frozen=True)
class ExperimentConfig:
    """One sweep: ``n`` values times a p-schedule.

    The schedule is either explicit triples (``p_values``, fixed across ``n``)
    or exponent triples (``alphas``, ``p_i = n ** -alpha_i`` per ``n``).
    """

    n_values: tuple[int, ...] = ()
    p_values: tuple[tuple, ...] = ()
    alphas: tuple[tuple, ...] = ()
    source: str = "torus7"
    k: int = 0
    trials: int = 100
    seed: int = 0
    budget: int | None = None
    count: bool = False
    verbose: bool = False
    out: str | None = None
    timing: str | None = None

    def __post_init__(self):
        if not self.n_values:
            raise ConfigError("at least one n is required")
        if any(n < 1 for n in self.n_values):
            raise ConfigError("n must be >= 1")
        if bool(self.p_values) == bool(self.alphas):
            raise ConfigError("give exactly one of an explicit p schedule or alpha")
        if self.trials < 1:
            raise ConfigError("trials must be >= 1")
        if self.k < 0:
            raise ConfigError("k must be >= 0")
        if self.budget is not None and self.budget < 0:
            raise ConfigError("budget must be >= 0")
        if not 0 <= self.seed < 1 << 64:
            raise ConfigError("master seed must lie in [0, 2^64)")
        for p in self.p_values:
            if len(p) != 3 or not all(0 <= x <= 1 for x in p):
                raise ConfigError(f"p triple {p} must have three entries in [0, 1]")
        for a in self.alphas:
            if len(a) != 3 or any(x < 0 for x in a):
                raise ConfigError(f"alpha triple {a} must have three entries >= 0")

    def cells(self) -> list[tuple[int, int, ProbabilityTriple, tuple | None]]:
        """``(n_index, n, p, alpha)`` in cell order (n-major)."""
        out = []
        for i, n in enumerate(self.n_values):
            if self.p_values:
                out.extend((i, n, ProbabilityTriple(*(float(x) for x in p)), None)
                           for p in self.p_values)
            else:
                out.extend((i, n, ProbabilityTriple.from_alpha(n, a), a) for a in self.alphas)
        return out

    def source_complex(self) -> SimplicialComplex2:
        if self.source in BUILTIN_SOURCES:
            s = BUILTIN_SOURCES[self.source]()
        else:
            try:
                s = load(self.source)
            except OSError as exc:
                raise ConfigError(f"cannot read source {self.source!r}: {exc}") from exc
        return subdivide_k(s, self.k).complex if self.k else s

    def describe(self) -> str:
        return f"source={self.source} k={self.k} trials={self.trials} seed={self.seed} budget={self.budget}"


_LIST_KEYS = {"n_values": int}
_SCALAR_KEYS = {"source": str, "k": int, "trials": int, "seed": int, "budget": int,
                "out": str, "timing": str}
_BOOL_KEYS = ("count", "verbose")
_ALIASES = {"n": "n_values", "p": "p_values", "alpha": "alphas"}


def parse_config_text(text: str) -> dict:
    """``key = value`` lines; ``#`` starts a comment.  Lists use commas
    (``n = 50, 60``) and triple lists use semicolons
    (``p = 1,1,0.1; 1,1,0.2``)."""
    out: dict = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"line {lineno}: expected key = value")
        key, value = (x.strip() for x in line.split("=", 1))
        key = _ALIASES.get(key, key).replace("-", "_")
        if key in _LIST_KEYS:
            out[key] = tuple(_LIST_KEYS[key](x) for x in value.split(",") if x.strip())
        elif key in ("p_values", "alphas"):
            out[key] = tuple(parse_triple(x) for x in value.split(";") if x.strip())
        elif key in _SCALAR_KEYS:
            out[key] = _SCALAR_KEYS[key](value)
        elif key in _BOOL_KEYS:
            if value.lower() not in ("1", "0", "true", "false", "yes", "no"):
                raise ConfigError(f"line {lineno}: {key} must be a boolean")
            out[key] = value.lower() in ("1", "true", "yes")
        else:
            raise ConfigError(f"line {lineno}: unknown key {key!r}")
    return out


def load_config(path: str | os.PathLike, **overrides) -> ExperimentConfig:
    values = parse_config_text(Path(path).read_text())
    values.update({k: v for k, v in overrides.items() if v is not None})
    return ExperimentConfig(**values)


def thread_count() -> int:
    raw = os.environ.get(THREADS_ENV)
    if raw is None:
        return os.cpu_count() or 1
    try:
        value = int(raw)
    except ValueError:
        raise ConfigError(f"{THREADS_ENV} must be a positive integer") from None
    if value < 1:
        raise ConfigError(f"{THREADS_ENV} must be a positive integer")
    return value


def _ordered_map(fn, items: list) -> list:
    """``map`` over a thread pool; results stay in input order."""
    threads = min(thread_count(), max(len(items), 1))
    if threads == 1:
        return [fn(x) for x in items]
    with ThreadPoolExecutor(max_workers=threads) as pool:
        return list(pool.map(fn, items))


def wilson_interval(successes: int, trials: int, confidence: float = 0.95) -> tuple[float, float]:
    if trials == 0:
        return (0.0, 1.0)
    z = NormalDist().inv_cdf(0.5 + confidence / 2)
    phat = successes / trials
    denom = 1 + z * z / trials
    centre = (phat + z * z / (2 * trials)) / denom
    half = z * math.sqrt(phat * (1 - phat) / trials + z * z / (4 * trials * trials)) / denom
    lo = 0.0 if successes == 0 else max(0.0, centre - half)
    hi = 1.0 if successes == trials else min(1.0, centre + half)
    return (lo, hi)


@dataclass
class TrialRecord:
    n: int
    p: ProbabilityTriple
    seed: int
    outcome: str  # embedded | not-embedded | unknown
    count: int | None
    fvector: tuple[int, int, int]
    wall_time: float = field(default=0.0, compare=False)


def host_from_sample(n: int, seed: int, ps: list[ProbabilityTriple]) -> list[HostIndex]:
    """Sampled hosts for every ``p`` in ``ps`` from one set of uniforms."""
    coupled = draw_coupled(n, seed)
    edges, tris, _ = colex_tables(n)
    out = []
    for p in ps:
        vm, em, tm = lower_masks(coupled, p)
        out.append(HostIndex.from_masks(np.flatnonzero(vm), edges[em], tris[tm]))
    return out


def _run_trial(source, host: HostIndex, n, p, seed, budget, counting) -> TrialRecord:
    start = time.perf_counter()
    f = (host.n, sum(host.degree) // 2, sum(host.tri_count) // 3)
    try:
        if counting:
            c = count_embeddings(source, host, budget)
            outcome = "embedded" if c else "not-embedded"
        else:
            c = None
            outcome = "embedded" if find_embedding(source, host, budget) is not None else "not-embedded"
    except SearchBudgetExceeded:
        c, outcome = None, "unknown"
    return TrialRecord(n, p, seed, outcome, c, f, time.perf_counter() - start)


def _seed_for(cfg: ExperimentConfig, n_index: int, trial: int) -> int:
    return derive_seed(cfg.seed, n_index, trial)


def collect_trials(cfg: ExperimentConfig, counting: bool) -> list[list[TrialRecord]]:
    """Per cell (in cell order), the trial records in trial order."""
    source = cfg.source_complex()
    cells = cfg.cells()
    by_n: dict[int, list[int]] = {}
    for ci, (ni, *_rest) in enumerate(cells):
        by_n.setdefault(ni, []).append(ci)
    units = [(ni, t) for ni in sorted(by_n) for t in range(cfg.trials)]

    def work(unit):
        ni, t = unit
        seed = _seed_for(cfg, ni, t)
        n = cfg.n_values[ni]
        ps = [cells[ci][2] for ci in by_n[ni]]
        hosts = host_from_sample(n, seed, ps)
        return [_run_trial(source, h, n, p, seed, cfg.budget, counting) for h, p in zip(hosts, ps)]

    results = _ordered_map(work, units)
    per_cell: list[list[TrialRecord]] = [[] for _ in cells]
    for (ni, _t), records in zip(units, results):
        for ci, rec in zip(by_n[ni], records):
            per_cell[ci].append(rec)
    return per_cell


def _write_csv(header: list[str], rows: list[dict], comments: list[str]) -> str:
    buf = io.StringIO()
    buf.write(CSV_VERSION + "\n")
    for c in comments:
        buf.write(f"# {c}\n")
    writer = csv.DictWriter(buf, fieldnames=header, lineterminator="\n", restval="")
    writer.writeheader()
    for row in rows:
        writer.writerow({k: _fmt(v) for k, v in row.items()})
    return buf.getvalue()


def read_csv(text: str) -> list[dict[str, str]]:
    """Parse output of this module, skipping ``#`` lines."""
    lines = [ln for ln in text.splitlines() if not ln.startswith("#")]
    return list(csv.DictReader(lines))


def _write_timing(path: str | None, cells, per_cell) -> None:
    if not path:
        return
    rows = []
    for ci, ((_, n, p, _a), records) in enumerate(zip(cells, per_cell)):
        rows.append({"cell": ci, "n": n, "p0": p.p0, "p1": p.p1, "p2": p.p2,
                     "wall_time": sum(r.wall_time for r in records)})
    Path(path).write_text(_write_csv(["cell", "n", "p0", "p1", "p2", "wall_time"], rows,
                                     ["wall times; not part of the deterministic output"]))


SWEEP_COLUMNS = ["row", "cell", "n", "p0", "p1", "p2", "alpha0", "alpha1", "alpha2",
                 "trials", "successes", "unknown", "frequency", "wilson_low", "wilson_high",
                 "valid", "trial", "seed", "outcome", "count", "f0", "f1", "f2"]


def _cell_summary(records: list[TrialRecord]) -> dict:
    unknown = sum(r.outcome == "unknown" for r in records)
    decided = len(records) - unknown
    successes = sum(r.outcome == "embedded" for r in records)
    lo, hi = wilson_interval(successes, decided)
    return {"trials": len(records), "successes": successes, "unknown": unknown,
            "frequency": successes / decided if decided else float("nan"),
            "wilson_low": lo, "wilson_high": hi,
            "valid": unknown <= INVALID_UNKNOWN_FRACTION * len(records)}


def sweep_rows(cfg: ExperimentConfig) -> tuple[list[dict], list]:
    cells = cfg.cells()
    per_cell = collect_trials(cfg, cfg.count)
    rows = []
    for ci, ((_ni, n, p, a), records) in enumerate(zip(cells, per_cell)):
        base = {"cell": ci, "n": n, "p0": float(p.p0), "p1": float(p.p1), "p2": float(p.p2)}
        if a is not None:
            base.update(alpha0=a[0], alpha1=a[1], alpha2=a[2])
        summary = _cell_summary(records)
        if not summary["valid"]:
            warnings.warn(f"cell {ci}: more than 1% of trials hit the search budget", RuntimeWarning)
        rows.append({"row": "cell", **base, **summary})
        if cfg.verbose:
            for t, r in enumerate(records):
                rows.append({"row": "trial", **base, "trial": t, "seed": r.seed,
                             "outcome": r.outcome, "count": "" if r.count is None else r.count,
                             "f0": r.fvector[0], "f1": r.fvector[1], "f2": r.fvector[2]})
    _write_timing(cfg.timing, cells, per_cell)
    return rows, per_cell


def run_mc_sweep(cfg: ExperimentConfig) -> str:
    """Embedding frequency per (n, p) cell with a Wilson 95% interval."""
    rows, _ = sweep_rows(cfg)
    return _write_csv(SWEEP_COLUMNS, rows, ["command=mc-sweep " + cfg.describe()])


EXPECT_COLUMNS = ["cell", "n", "p0", "p1", "p2", "trials", "used", "unknown", "mean",
                  "stderr", "expected", "z", "flagged"]


def expectation_rows(cfg: ExperimentConfig) -> list[dict]:
    cells = cfg.cells()
    per_cell = collect_trials(cfg, True)
    source = cfg.source_complex()
    rows = []
    for ci, ((_ni, n, p, _a), records) in enumerate(zip(cells, per_cell)):
        counts = np.array([r.count for r in records if r.outcome != "unknown"], dtype=float)
        unknown = len(records) - len(counts)
        if unknown:
            warnings.warn(f"cell {ci}: {unknown} trials hit the search budget and were excluded",
                          RuntimeWarning)
        expected = expected_embedding_count(source, n, p)
        if len(counts):
            mean = float(counts.mean())
            stderr = float(counts.std(ddof=1) / math.sqrt(len(counts))) if len(counts) > 1 else 0.0
        else:
            mean = stderr = float("nan")
        if stderr > 0:
            z = (mean - expected) / stderr
        elif math.isnan(mean):
            z = float("nan")
        else:
            z = 0.0 if mean == expected else math.copysign(math.inf, mean - expected)
        rows.append({"cell": ci, "n": n, "p0": float(p.p0), "p1": float(p.p1), "p2": float(p.p2),
                     "trials": len(records), "used": len(counts), "unknown": unknown,
                     "mean": mean, "stderr": stderr, "expected": expected, "z": z,
                     "flagged": not abs(z) <= Z_FLAG})
    _write_timing(cfg.timing, cells, per_cell)
    return rows


def run_expectation_check(cfg: ExperimentConfig) -> str:
    """Monte Carlo mean of the embedding count against its exact expectation."""
    return _write_csv(EXPECT_COLUMNS, expectation_rows(cfg),
                      ["command=expect-check " + cfg.describe()])


MU_COLUMNS = ["k", "i", "f0", "f1", "f2", "items", "mode", "min_mu", "min_mu_float",
              "evaluated", "witness_f0", "witness_f1", "witness_f2"]


def mu_study_rows(source: SimplicialComplex2, ks, *, budget: int = DEFAULT_BUDGET,
                  samples: int = 1000, seed: int = 0) -> list[dict]:
    rows = []
    for k in ks:
        c = subdivide_k(source, k).complex if k else source
        f = f_vector(c)
        for i in (1, 2):
            try:
                try:
                    res = mu_min(c, i, "exhaustive", budget=budget)
                except BudgetExceeded:
                    res = mu_min(c, i, "sampled", count=samples, seed=seed)
            except NoSubcomplex:
                continue
            w = f_vector(res.witness)
            rows.append({"k": k, "i": i, "f0": f.f0, "f1": f.f1, "f2": f.f2,
                         "items": f[i], "mode": res.mode, "min_mu": res.value,
                         "min_mu_float": float(res.value), "evaluated": res.evaluated,
                         "witness_f0": w.f0, "witness_f1": w.f1, "witness_f2": w.f2})
    return rows


def run_mu_study(source: SimplicialComplex2, ks, *, budget: int = DEFAULT_BUDGET,
                 samples: int = 1000, seed: int = 0, label: str = "") -> str:
    """Minimum ``mu_1`` and ``mu_2`` over subcomplexes of each subdivision;
    exhaustive within ``budget`` subsets, otherwise sampled with descent."""
    rows = mu_study_rows(source, ks, budget=budget, samples=samples, seed=seed)
    return _write_csv(MU_COLUMNS, rows,
                      [f"command=mu-study source={label} budget={budget} samples={samples} seed={seed}"])


THRESHOLD_COLUMNS = ["alpha0", "alpha1", "alpha2", "alpha_sum", "n", "p0", "p1", "p2",
                     "margin", "frequency"]


def threshold_rows(cfg: ExperimentConfig, mc: bool = False) -> list[dict]:
    if not cfg.alphas:
        raise ConfigError("threshold table needs alpha triples")
    freq = {}
    if mc:
        rows, _ = sweep_rows(replace(cfg, verbose=False))
        freq = {r["cell"]: r["frequency"] for r in rows}
    out = []
    for ci, (_ni, n, p, a) in enumerate(cfg.cells()):
        a = tuple(Fraction(x) for x in a)
        out.append({"alpha0": a[0], "alpha1": a[1], "alpha2": a[2],
                    "alpha_sum": a[0] + 3 * a[1] + 2 * a[2], "n": n,
                    "p0": float(p.p0), "p1": float(p.p1), "p2": float(p.p2),
                    "margin": alpha_margin(n, a), "frequency": freq.get(ci, "")})
    return out


def emit_threshold_table(cfg: ExperimentConfig, mc: bool = False) -> str:
    """Margin ``n p0 p1^3 p2^2`` over an alpha grid, with Monte Carlo
    frequencies when ``mc`` is set."""
    return _write_csv(THRESHOLD_COLUMNS, threshold_rows(cfg, mc),
                      ["command=threshold-table " + cfg.describe() + f" mc={int(mc)}"])


def alpha_grid(steps: int) -> tuple[tuple[Fraction, Fraction, Fraction], ...]:
    """All ``(a0, a1, a2)`` with entries in ``{0, 1/steps, ..., 1}``."""
    if steps < 1:
        raise ConfigError("grid steps must be >= 1")
    vals = [Fraction(j, steps) for j in range(steps + 1)]
    return tuple((a, b, c) for a in vals for b in vals for c in vals)


def config_fields() -> list[str]:
    return [f.name for f in fields(ExperimentConfig)]


# Frozen desk-scale configurations used by the regression checks.
SEPARATION_N = 60
SEPARATION_MARGINS = (Fraction(1, 4), Fraction(4))


def separation_config(trials: int = 2000, seed: int = 0) -> ExperimentConfig:
    """Torus in ``n = 60`` with ``p0 = p1 = 1`` and ``p2`` set so that
    ``n p2^2`` equals 1/4 (sub-critical cell 0) and 4 (super-critical cell 1)."""
    n = SEPARATION_N
    ps = tuple((1, 1, math.sqrt(float(m) / n)) for m in SEPARATION_MARGINS)
    return ExperimentConfig(n_values=(n,), p_values=ps, source="torus7", trials=trials, seed=seed)


def p2_sweep_config(n: int = 50, trials: int = 500, seed: int = 0) -> ExperimentConfig:
    """Torus with ``p0 = p1 = 1`` and ``p2 = 0.1, 0.2, ..., 0.9``."""
    ps = tuple((1, 1, Fraction(j, 10)) for j in range(1, 10))
    return ExperimentConfig(n_values=(n,), p_values=ps, source="torus7", trials=trials, seed=seed)
