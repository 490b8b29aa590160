"""Seeded Monte Carlo experiments with CSV output.

Each experiment is described by an ExperimentConfig and produces an
ExperimentResult whose CSV text is a pure function of the configuration:
sample i of cell c draws from the RNG stream keyed by
(seed, c * samples + i), so output is byte-identical for any worker count
and any aggregation order.
"""

import itertools
import json
import math
import time
from dataclasses import dataclass, field
from multiprocessing import Pool
from pathlib import Path

import numpy as np

from . import __version__
from .distribution import (
    additivity_score,
    dicke_delta_closed_form,
    theorem1_quantities,
)
from .linalg import num_qubits, partial_trace
from .measures import (
    L1,
    RELATIVE_ENTROPY,
    CoherenceKind,
    TRADEOFF_PAIRS,
    _entropy_of_probs,
    c_g,
    c_l1,
    c_l2,
    c_r,
    entropy_vn,
    m_g,
    m_l,
    purity,
    tradeoff,
)
from .states import (
    ValidationError,
    dicke,
    gghz_x_state,
    load_state_file,
    maximally_coherent,
    paper_violation_state,
    projector,
    random_density_matrix,
    stream,
    validate,
    VIOLATION_STATE_ATOL,
)

EXPERIMENTS = ("tradeoff_histograms", "additivity_table", "dicke_curves",
               "single_state")
PRESET_SAMPLES = {"paper": 20000, "ci": 2000}

# histogram panels: (label, coherence family, mixedness family, bin range)
HISTOGRAM_PANELS = (
    ("a", "l1", "von_neumann", 1.2),
    ("b", "l1", "geometric", 1.2),
    ("c", "relative_entropy", "linear", 2.0),
    ("d", "relative_entropy", "geometric", 1.2),
)

# additivity-table measure set: normalized l1 at powers 1..3 and normalized
# relative entropy at powers 1..2
TABLE_MEASURES = (("C_l1", 1), ("C_l1", 2), ("C_l1", 3), ("C_r", 1), ("C_r", 2))

_DEFAULT_GRID = {
    "tradeoff_histograms": {"n_qubits": (3, 4), "ranks": (2, 3)},
    "additivity_table": {"n_qubits": (3, 4, 5), "ranks": (1, 2, 3, 4)},
    "dicke_curves": {"n_qubits": tuple(range(3, 11)), "ranks": ()},
    "single_state": {"n_qubits": (), "ranks": ()},
}


class ConfigError(ValueError):
    """Experiment configuration is inconsistent."""


@dataclass(frozen=True)
class ExperimentConfig:
    """Full description of one seeded experiment run."""

    experiment: str
    n_qubits: tuple = ()
    ranks: tuple = ()
    samples: int = PRESET_SAMPLES["paper"]
    seed: int = 7
    bins: int = 50
    pivot: int = 0
    workers: int = 1
    out: str | None = None
    plot: bool = False
    preset: str = "paper"
    state: str | None = None
    state_file: str | None = None

    def validated(self) -> "ExperimentConfig":
        if self.experiment not in EXPERIMENTS:
            raise ConfigError(f"unknown experiment {self.experiment!r}; "
                              f"choose from {EXPERIMENTS}")
        if self.samples < 1:
            raise ConfigError(f"samples must be >= 1, got {self.samples}")
        if self.workers < 1:
            raise ConfigError(f"workers must be >= 1, got {self.workers}")
        if self.experiment == "tradeoff_histograms" and self.bins < 2:
            raise ConfigError(f"histograms need bins >= 2, got {self.bins}")
        if self.experiment in ("tradeoff_histograms", "additivity_table"):
            if not self.n_qubits or not self.ranks:
                raise ConfigError("qubit and rank lists must be nonempty")
            for n, r in itertools.product(self.n_qubits, self.ranks):
                if not 1 <= r <= 2 ** n:
                    raise ConfigError(f"rank {r} impossible for {n} qubits")
        if self.experiment == "additivity_table":
            for n in self.n_qubits:
                if n < 3:
                    raise ConfigError("additivity needs at least 3 qubits")
                if not 0 <= self.pivot < n:
                    raise ConfigError(f"pivot {self.pivot} out of range for "
                                      f"{n} qubits")
        if self.experiment == "dicke_curves":
            if not self.n_qubits or min(self.n_qubits) < 3:
                raise ConfigError("Dicke curves need qubit numbers >= 3")
        if self.experiment == "single_state":
            if not self.state and not self.state_file:
                raise ConfigError("single_state needs --state or --state-file")
        return self


def build_config(experiment: str, **overrides) -> ExperimentConfig:
    """Config with per-experiment grid defaults and preset sample counts."""
    preset = overrides.pop("preset", None) or "paper"
    if preset not in PRESET_SAMPLES:
        raise ConfigError(f"unknown preset {preset!r}")
    fields = dict(_DEFAULT_GRID.get(experiment, {}))
    fields["samples"] = PRESET_SAMPLES[preset]
    fields.update({k: v for k, v in overrides.items() if v is not None})
    return ExperimentConfig(experiment=experiment, preset=preset,
                            **fields).validated()


def parse_int_list(text: str) -> tuple:
    """Parse "3,4,5" / "1-4" / mixtures of both into a tuple of ints."""
    out = []
    for token in str(text).split(","):
        token = token.strip()
        if not token:
            continue
        if "-" in token[1:]:
            lo, hi = token.split("-", 1)
            out.extend(range(int(lo), int(hi) + 1))
        else:
            out.append(int(token))
    if not out:
        raise ConfigError(f"empty integer list {text!r}")
    return tuple(out)


_CONFIG_INT_KEYS = {"samples", "seed", "bins", "pivot", "workers"}
_CONFIG_LIST_KEYS = {"qubits", "ranks"}
_CONFIG_BOOL_KEYS = {"plot"}


def read_config_file(path) -> dict:
    """Flat key=value config file; '#' starts a comment."""
    overrides = {}
    for lineno, raw in enumerate(Path(path).read_text().splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"{path}:{lineno}: expected key=value")
        key, value = (s.strip() for s in line.split("=", 1))
        if key in _CONFIG_INT_KEYS:
            overrides[key] = int(value)
        elif key in _CONFIG_LIST_KEYS:
            overrides["n_qubits" if key == "qubits" else key] = \
                parse_int_list(value)
        elif key in _CONFIG_BOOL_KEYS:
            overrides[key] = value.lower() in ("1", "true", "yes", "on")
        elif key in ("experiment", "out", "preset", "state", "state_file"):
            overrides[key] = value
        else:
            raise ConfigError(f"{path}:{lineno}: unknown key {key!r}")
    return overrides


@dataclass
class ExperimentResult:
    """Rows plus metadata from one experiment run."""

    experiment: str
    columns: tuple
    rows: list
    metadata: dict
    extras: dict = field(default_factory=dict)

    def csv_text(self) -> str:
        def fmt(v):
            return repr(float(v)) if isinstance(v, float) else str(v)

        lines = [",".join(self.columns)]
        lines.extend(",".join(fmt(v) for v in row) for row in self.rows)
        return "\n".join(lines) + "\n"

    def write(self, out) -> tuple:
        """Write the CSV and its JSON metadata sidecar; returns both paths."""
        out = Path(out)
        out.parent.mkdir(parents=True, exist_ok=True)
        out.write_text(self.csv_text(), encoding="ascii")
        sidecar = out.with_name(out.stem + ".meta.json")
        sidecar.write_text(json.dumps(self.metadata, indent=2, sort_keys=True)
                           + "\n", encoding="ascii")
        return out, sidecar


def _cells(config: ExperimentConfig):
    """Canonical (cell_index, rank, n) enumeration shared by all workers."""
    return list(enumerate(itertools.product(config.ranks, config.n_qubits)))


def _chunks(samples: int, workers: int):
    """Contiguous index ranges covering range(samples)."""
    size = max(1, math.ceil(samples / workers))
    return [(lo, min(lo + size, samples)) for lo in range(0, samples, size)]


def _run_chunks(worker, tasks, workers: int):
    if workers > 1 and len(tasks) > 1:
        with Pool(processes=workers) as pool:
            return pool.starmap(worker, tasks)
    return [worker(*task) for task in tasks]


# ---------------------------------------------------------------------------
# trade-off histograms
# ---------------------------------------------------------------------------

def _tradeoff_values_chunk(n: int, rank: int, seed: int, base: int,
                           start: int, stop: int) -> np.ndarray:
    """Panel values (4, stop-start) for one contiguous block of samples."""
    d = 2 ** n
    log_d = math.log(d)
    out = np.empty((4, stop - start))
    for i in range(start, stop):
        rho = random_density_matrix(d, rank, stream(seed, base + i))
        lam = np.clip(np.linalg.eigvalsh(rho), 0.0, None)
        pos = lam[lam > 0]
        s_ratio = float(-(pos * np.log(pos)).sum()) / log_d
        mg = float(np.sqrt(lam).sum() ** 2) / d
        ml = d / (d - 1) * (1.0 - float((lam * lam).sum()))
        l1n_sq = (c_l1(rho) / (d - 1)) ** 2
        crr = _entropy_of_probs(np.diag(rho).real, "nats") / log_d - s_ratio
        j = i - start
        out[0, j] = l1n_sq + s_ratio
        out[1, j] = l1n_sq + mg
        out[2, j] = crr + ml
        out[3, j] = crr + mg
    return out


def run_tradeoff_histograms(config: ExperimentConfig) -> ExperimentResult:
    """Histogram the four trade-off panels over Haar-induced random states.

    The published panels use ranks {2, 3} on 3- and 4-qubit states; other
    grids run fine and are flagged as extensions in the metadata.
    """
    config = config.validated()
    t0 = time.perf_counter()
    rows = []
    exceed = {}
    peak = {}
    extension = not (set(config.ranks) <= {2, 3}
                     and set(config.n_qubits) <= {3, 4})
    for cell_idx, (rank, n) in _cells(config):
        base = cell_idx * config.samples
        tasks = [(n, rank, config.seed, base, lo, hi)
                 for lo, hi in _chunks(config.samples, config.workers)]
        values = np.concatenate(
            _run_chunks(_tradeoff_values_chunk, tasks, config.workers), axis=1)
        for panel_idx, (label, _, _, hi_edge) in enumerate(HISTOGRAM_PANELS):
            vals = values[panel_idx]
            edges = np.linspace(0.0, hi_edge, config.bins + 1)
            counts, _ = np.histogram(np.clip(vals, 0.0, hi_edge), bins=edges)
            freqs = counts / vals.size
            key = f"{label}:rank{rank}:n{n}"
            exceed[key] = float((vals > 1.0).mean())
            peak[key] = float(vals.max())
            rows.extend(
                (label, rank, n, float(edges[b]), float(edges[b + 1]),
                 float(freqs[b]))
                for b in range(config.bins))
    metadata = {
        "experiment": config.experiment,
        "seed": config.seed,
        "samples": config.samples,
        "version": __version__,
        "wall_time_s": round(time.perf_counter() - t0, 3),
        "exceed_fraction": exceed,
        "max_value": peak,
        "extension_grid": extension,
    }
    return ExperimentResult(
        experiment=config.experiment,
        columns=("panel", "rank", "n_qubits", "bin_lo", "bin_hi", "rel_freq"),
        rows=rows,
        metadata=metadata,
        extras={"exceed_fraction": exceed, "max_value": peak},
    )


# ---------------------------------------------------------------------------
# additivity table
# ---------------------------------------------------------------------------

def _table_counts_chunk(n: int, rank: int, seed: int, base: int, start: int,
                        stop: int, pivot: int) -> np.ndarray:
    """Satisfaction counts for the five table measures on one sample block."""
    d = 2 ** n
    tol = 1e-10
    counts = np.zeros(len(TABLE_MEASURES), dtype=np.int64)
    partners = [k for k in range(n) if k != pivot]
    for i in range(start, stop):
        rho = random_density_matrix(d, rank, stream(seed, base + i))
        l1_whole = c_l1(rho) / (d - 1)
        cr_whole = c_r(rho, "nats") / math.log(d)
        l1_pairs = np.empty(len(partners))
        cr_pairs = np.empty(len(partners))
        for j, k in enumerate(partners):
            pair = partial_trace(rho, (pivot, k))
            l1_pairs[j] = c_l1(pair) / 3.0
            cr_pairs[j] = c_r(pair, "nats") / math.log(4.0)
        for m_idx, (family, power) in enumerate(TABLE_MEASURES):
            whole, pairs = ((l1_whole, l1_pairs) if family == "C_l1"
                            else (cr_whole, cr_pairs))
            delta = whole ** power - (pairs ** power).sum()
            if delta >= -tol:
                counts[m_idx] += 1
    return counts


def run_additivity_table(config: ExperimentConfig) -> ExperimentResult:
    """Percentage of random states satisfying the additivity relation.

    One cell per (rank, n, measure): normalized l1 coherence at powers
    1..3 and normalized relative entropy at powers 1..2, pivot fixed by the
    config.
    """
    config = config.validated()
    t0 = time.perf_counter()
    rows = []
    percent = {}
    for cell_idx, (rank, n) in _cells(config):
        base = cell_idx * config.samples
        tasks = [(n, rank, config.seed, base, lo, hi, config.pivot)
                 for lo, hi in _chunks(config.samples, config.workers)]
        counts = sum(_run_chunks(_table_counts_chunk, tasks, config.workers))
        for m_idx, (family, power) in enumerate(TABLE_MEASURES):
            pct = 100.0 * counts[m_idx] / config.samples
            percent[(rank, n, family, power)] = pct
            rows.append((rank, n, family, power, float(pct), config.samples,
                         config.seed))
    metadata = {
        "experiment": config.experiment,
        "seed": config.seed,
        "samples": config.samples,
        "pivot": config.pivot,
        "version": __version__,
        "wall_time_s": round(time.perf_counter() - t0, 3),
        "percent_satisfied": {
            f"rank{rank}:n{n}:{family}^{power}": pct
            for (rank, n, family, power), pct in percent.items()},
    }
    return ExperimentResult(
        experiment=config.experiment,
        columns=("rank", "n_qubits", "measure", "power", "percent_satisfied",
                 "samples", "seed"),
        rows=rows,
        metadata=metadata,
        extras={"percent": percent},
    )


def table_trend_violations(percent: dict, slack: float = 0.0) -> list:
    """Deviations from the expected qualitative trends of the table.

    Checks that satisfaction percentages are non-decreasing in rank at
    fixed (n, measure), non-decreasing in power within a measure family at
    fixed (rank, n), and at least as large for the relative-entropy family
    as for the l1 family at equal power. Returns one message per violation
    exceeding ``slack`` percentage points.
    """
    issues = []
    keys = sorted(percent)
    ranks = sorted({k[0] for k in keys})
    cells = sorted({(k[1], k[2], k[3]) for k in keys})
    for n, family, power in cells:
        series = [percent[(r, n, family, power)] for r in ranks
                  if (r, n, family, power) in percent]
        for a, b in zip(series, series[1:]):
            if b < a - slack:
                issues.append(
                    f"{family}^{power} n={n}: {b:.3f} < {a:.3f} along rank")
    for rank, n in sorted({(k[0], k[1]) for k in keys}):
        for family, powers in (("C_l1", (1, 2, 3)), ("C_r", (1, 2))):
            series = [percent[(rank, n, family, p)] for p in powers
                      if (rank, n, family, p) in percent]
            for a, b in zip(series, series[1:]):
                if b < a - slack:
                    issues.append(
                        f"rank {rank} n={n} {family}: {b:.3f} < {a:.3f} "
                        f"along power")
        for power in (1, 2):
            lo = percent.get((rank, n, "C_l1", power))
            hi = percent.get((rank, n, "C_r", power))
            if lo is not None and hi is not None and hi < lo - slack:
                issues.append(
                    f"rank {rank} n={n} power {power}: C_r {hi:.3f} < "
                    f"C_l1 {lo:.3f}")
    return issues


# ---------------------------------------------------------------------------
# Dicke curves
# ---------------------------------------------------------------------------

def run_dicke_curves(config: ExperimentConfig) -> ExperimentResult:
    """Additivity scores of Dicke states, closed form and direct.

    Emits normalized and raw scores for the l1 and relative-entropy
    measures over r = 1 .. floor(n/2) for each configured n; the direct
    column evaluates additivity_score on the constructed state.
    """
    config = config.validated()
    t0 = time.perf_counter()
    rows = []
    worst_gap = 0.0
    for n in config.n_qubits:
        for r in range(1, n // 2 + 1):
            rho = projector(dicke(n, r))
            for family, normalized in itertools.product(
                    (L1, RELATIVE_ENTROPY), (True, False)):
                kind = CoherenceKind(family, normalized=normalized)
                closed = dicke_delta_closed_form(n, r, kind)
                direct = additivity_score(rho, config.pivot, kind,
                                          base="bits").delta
                worst_gap = max(worst_gap, abs(closed - direct))
                label = "C_l1" if family == L1 else "C_r"
                rows.append((n, r, label, normalized, float(closed),
                             float(direct)))
    metadata = {
        "experiment": config.experiment,
        "seed": config.seed,
        "samples": 0,
        "version": __version__,
        "wall_time_s": round(time.perf_counter() - t0, 3),
        "max_closed_vs_direct_gap": worst_gap,
    }
    return ExperimentResult(
        experiment=config.experiment,
        columns=("n", "r", "measure", "normalized", "delta_closed",
                 "delta_direct"),
        rows=rows,
        metadata=metadata,
        extras={"max_gap": worst_gap},
    )


# ---------------------------------------------------------------------------
# single-state inspection
# ---------------------------------------------------------------------------

def resolve_state(name: str | None, state_file: str | None) -> tuple:
    """Resolve --state / --state-file into (label, density matrix, atol)."""
    if state_file:
        return str(state_file), load_state_file(state_file), 1e-8
    if not name:
        raise ConfigError("no state given")
    try:
        if name == "eq11":
            return name, paper_violation_state(), VIOLATION_STATE_ATOL
        if name.startswith("mcs:"):
            d = int(name.split(":", 1)[1])
            return name, projector(maximally_coherent(d)), 1e-10
        if name.startswith("dicke:"):
            n, r = (int(t) for t in name.split(":", 1)[1].split(","))
            return name, projector(dicke(n, r)), 1e-10
        if name.startswith("ghzx:"):
            n, p = name.split(":", 1)[1].split(",")
            amp = 1.0 / math.sqrt(2.0)
            return name, gghz_x_state(int(n), amp, amp, float(p)), 1e-10
    except (ValueError, IndexError) as exc:
        raise ConfigError(f"malformed state name {name!r}: {exc}") from exc
    raise ConfigError(
        f"unknown state {name!r}; use eq11, mcs:<d>, dicke:<n>,<r> or "
        f"ghzx:<n>,<p>")


def inspect_report(rho: np.ndarray, label: str = "state",
                   pivot: int = 0, atol: float = 1e-10) -> dict:
    """All measures, trade-offs and (for >= 3 qubits) additivity scores."""
    rho = np.asarray(rho, dtype=complex)
    check = validate(rho, atol=atol)
    if not check.passed:
        raise ValidationError(
            f"{label}: not a density matrix within {atol:.1e} "
            f"(worst: {check.worst})")
    d = rho.shape[0]
    lam = np.linalg.eigvalsh((rho + rho.conj().T) / 2)[::-1]
    report = {
        "state": label,
        "dim": d,
        "validation": check,
        "purity": purity(rho),
        "eigenvalues": [float(x) for x in lam],
        "C_l1": c_l1(rho),
        "C_l2": c_l2(rho),
        "C_r_bits": c_r(rho, "bits"),
        "C_r_nats": c_r(rho, "nats"),
        "C_g": c_g(rho),
        "S_bits": entropy_vn(rho, "bits"),
        "S_nats": entropy_vn(rho, "nats"),
        "M_g": m_g(rho),
    }
    if d >= 2:
        report["M_l"] = m_l(rho)
        report["tradeoffs"] = {
            f"{coh}+{mix}": tradeoff(rho, coh, mix)
            for coh, mix in sorted(TRADEOFF_PAIRS)}
    try:
        n = num_qubits(d)
    except Exception:
        n = None
    report["n_qubits"] = n
    if n is not None and n >= 3:
        report["additivity"] = {
            kind.label + (" (normalized)" if kind.normalized else " (raw)"):
                additivity_score(rho, pivot, kind, base="bits")
            for kind in (CoherenceKind(L1), CoherenceKind(L1, normalized=True),
                         CoherenceKind(RELATIVE_ENTROPY),
                         CoherenceKind(RELATIVE_ENTROPY, normalized=True))}
        report["theorem1"] = theorem1_quantities(rho, pivot)
    return report


def format_report(report: dict) -> str:
    """Human-readable rendering of inspect_report output."""
    check = report["validation"]
    lines = [
        f"state: {report['state']}",
        f"dim: {report['dim']}"
        + (f" ({report['n_qubits']} qubits)" if report["n_qubits"] else ""),
        f"validation: {'pass' if check.passed else 'FAIL'} "
        f"(worst {check.worst})",
        f"purity: {report['purity']:.10g}",
        "eigenvalues: " + " ".join(f"{x:.10g}" for x in report["eigenvalues"]),
    ]
    for key in ("C_l1", "C_l2", "C_r_bits", "C_r_nats", "C_g",
                "M_l", "S_bits", "S_nats", "M_g"):
        if key in report:
            lines.append(f"{key}: {report[key]:.10g}")
    if "M_l" in report:
        half_cr = report["C_r_bits"] / 2.0
        lines.append(
            f"C_r(bits)/2 + M_l: {half_cr:.4f} + {report['M_l']:.4f} = "
            f"{half_cr + report['M_l']:.4f}")
    if "tradeoffs" in report:
        lines.append("tradeoffs (<= 1 satisfies the reciprocity relation):")
        lines.extend(f"  {name}: {val:.10g}"
                     for name, val in report["tradeoffs"].items())
    if "additivity" in report:
        lines.append(f"additivity scores (pivot qubit "
                     f"{next(iter(report['additivity'].values())).pivot}):")
        for name, rep in report["additivity"].items():
            pairs = " ".join(f"{v:.6g}" for v in rep.pair_values)
            lines.append(
                f"  {name}: whole={rep.whole_value:.10g} pairs=[{pairs}] "
                f"delta={rep.delta:.10g} satisfied={rep.satisfied}")
        t1 = report["theorem1"]
        lines.append(
            f"theorem-1 quantities (nats): delta1={t1.delta1:.10g} "
            f"delta2={t1.delta2:.10g} delta3={t1.delta3:.10g} "
            f"delta4={t1.delta4:.10g}")
    return "\n".join(lines) + "\n"


def run_single_state(config: ExperimentConfig) -> dict:
    """Resolve the configured state and build its inspection report."""
    config = config.validated()
    label, rho, atol = resolve_state(config.state, config.state_file)
    return inspect_report(rho, label=label, pivot=config.pivot, atol=atol)


def run_experiment(config: ExperimentConfig):
    """Dispatch on config.experiment."""
    runner = {
        "tradeoff_histograms": run_tradeoff_histograms,
        "additivity_table": run_additivity_table,
        "dicke_curves": run_dicke_curves,
        "single_state": run_single_state,
    }[config.validated().experiment]
    return runner(config)
