"""Monte-Carlo experiment harness.

A scenario bundles the link dimensions, the interference ensemble, and a
set of named curves (mitigation variants) swept over an Eb/N0 grid. Trials
are seeded counter-style from (base seed, scenario name, grid index, trial
index), so every curve within a scenario sees the same data, channels,
interferers, and noise: curve gaps are paired comparisons, and any cell of
the result table can be recomputed independently of execution order.
"""

from __future__ import annotations

import configparser
import csv
import time
import zlib
from dataclasses import dataclass, replace
from pathlib import Path

import numpy as np

from .nbi import (
    NbiScenario,
    NbiSource,
    calibrate_sir,
    draw_sources,
    gini_index,
    synthesize_nbi,
)
from .pipeline import (
    ToneSets,
    build_augmented_system,
    build_reserved_system,
    choose_reserved,
    measurement_noise_variance,
    mrc_combine,
    nbi_frequency_estimate,
    rank_carriers,
    recover_and_subtract,
    residual_variances,
    zf_noise_cancellation,
)
from .sabmp import SabmpParams, default_t_max, greedy_search, mmv_greedy_search
from .scfdma import (
    SystemConfig,
    build_equalizer,
    demodulate_hard,
    draw_channel,
    ebn0_to_noise_var,
    equalize,
    hard_decision,
    make_frame,
    qam_constellation,
    transmit_receive,
)
from .sparsify import Sparsifier

CSV_HEADER = (
    "scenario",
    "ebn0_db",
    "trials",
    "bit_errors",
    "total_bits",
    "ber",
    "wall_time_ms",
)
GINI_CSV_HEADER = (
    "sources",
    "runs",
    "gi_spread",
    "gi_window",
    "gi_haar",
    "se_spread",
    "se_window",
    "se_haar",
)

_MODES = ("plain", "reserved", "augmented", "noise_cancel", "simo_mmv", "simo_smv")
_SPARSIFIERS = ("none", "window", "haar")
_EQUALIZERS = ("zf", "mmse")
_METRICS = ("probabilistic", "distance")

# solver floor: greedy search needs noise_var > 0 even in noiseless setups
_SOLVER_NOISE_FLOOR = 1e-30
# expected deep-fade count assumed by the ZF noise cleanup
_NOISE_CANCEL_SOURCES = 4.0
# active-bin footprint of one fractionally offset source (straddling pair
# plus first sidelobe); calibrated against the transform-ordering experiments
_OFFSET_SOURCE_WIDTH = 3.0


class ScenarioError(ValueError):
    """Bad scenario configuration, detected before any simulation runs."""


@dataclass(frozen=True)
class CurveSpec:
    """One curve of a scenario: a mitigation mode plus optional overrides
    of scenario-level knobs (None inherits the scenario value)."""

    name: str
    mode: str
    nbi: bool = True
    equalizer: str | None = None
    sparsifier: str | None = None
    multiplier: float | None = None
    reserved_count: int | None = None
    reliable_count: int | None = None

    def __post_init__(self) -> None:
        if not self.name or any(c in self.name for c in ",/\n\r"):
            raise ScenarioError(f"bad curve name {self.name!r}")
        if self.mode not in _MODES:
            raise ScenarioError(f"unknown curve mode {self.mode!r}")
        if self.equalizer is not None and self.equalizer not in _EQUALIZERS:
            raise ScenarioError(f"unknown equalizer {self.equalizer!r}")
        if self.sparsifier is not None and self.sparsifier not in _SPARSIFIERS:
            raise ScenarioError(f"unknown sparsifier {self.sparsifier!r}")
        if self.multiplier is not None:
            _check_multiplier(self.multiplier)
        for count in (self.reserved_count, self.reliable_count):
            if count is not None and count < 0:
                raise ScenarioError("tone counts must be >= 0")


# Standard curve vocabulary shared by the presets and scenario files.
_CURVE_LIBRARY = {
    "nbi_free": CurveSpec("nbi_free", "plain", nbi=False),
    "impaired": CurveSpec("impaired", "plain"),
    "proposed": CurveSpec("proposed", "reserved"),
    "spread": CurveSpec("spread", "reserved", sparsifier="none"),
    "window": CurveSpec("window", "reserved", sparsifier="window"),
    "haar": CurveSpec("haar", "reserved", sparsifier="haar"),
    "zf": CurveSpec("zf", "plain", nbi=False, equalizer="zf"),
    "zf_cancel": CurveSpec("zf_cancel", "noise_cancel", nbi=False, equalizer="zf"),
    "mmse": CurveSpec("mmse", "plain", nbi=False, equalizer="mmse"),
    "reserved_only": CurveSpec("reserved_only", "reserved"),
    "augmented": CurveSpec("augmented", "augmented"),
    "smv": CurveSpec("smv", "simo_smv"),
    "mmv": CurveSpec("mmv", "simo_mmv"),
}


def library_curve(name: str) -> CurveSpec:
    """Look up a curve by its standard name."""
    try:
        return _CURVE_LIBRARY[name]
    except KeyError:
        known = ", ".join(sorted(_CURVE_LIBRARY))
        raise ScenarioError(f"unknown curve {name!r}; known curves: {known}") from None


def _check_multiplier(m: float) -> None:
    if not 0.2 <= float(m) <= 1.8:
        raise ScenarioError(f"sparsity multiplier {m} outside [0.2, 1.8]")


@dataclass(frozen=True)
class ScenarioConfig:
    """Everything run_scenario needs; immutable and fully explicit."""

    name: str
    system: SystemConfig
    nbi: NbiScenario
    curves: tuple[CurveSpec, ...]
    ebn0_grid: tuple[float, ...]
    trials: int
    base_seed: int = 1234
    reserved_count: int = 0
    reliable_count: int = 0
    sparsifier: str = "none"
    equalizer: str = "mmse"
    antennas: int = 1
    multiplier: float = 1.0
    metric: str = "probabilistic"

    def __post_init__(self) -> None:
        if not self.name or "," in self.name or "/" in self.name:
            raise ScenarioError(f"bad scenario name {self.name!r}")
        object.__setattr__(self, "curves", tuple(self.curves))
        object.__setattr__(
            self, "ebn0_grid", tuple(float(e) for e in self.ebn0_grid)
        )
        if not self.curves:
            raise ScenarioError("scenario needs at least one curve")
        if len({c.name for c in self.curves}) != len(self.curves):
            raise ScenarioError("curve names must be unique")
        if not self.ebn0_grid:
            raise ScenarioError("ebn0 grid must not be empty")
        if self.trials < 1:
            raise ScenarioError("trials must be >= 1")
        if self.antennas < 1:
            raise ScenarioError("antennas must be >= 1")
        _check_multiplier(self.multiplier)
        if self.sparsifier not in _SPARSIFIERS:
            raise ScenarioError(f"unknown sparsifier {self.sparsifier!r}")
        if self.equalizer not in _EQUALIZERS:
            raise ScenarioError(f"unknown equalizer {self.equalizer!r}")
        if self.metric not in _METRICS:
            raise ScenarioError(f"unknown reliability metric {self.metric!r}")
        p = self.system.per_user
        for curve in self.curves:
            self._check_curve(curve, p)

    def _check_curve(self, curve: CurveSpec, p: int) -> None:
        if curve.mode == "plain":
            return
        if self.antennas != 1 and curve.mode in (
            "reserved",
            "augmented",
            "noise_cancel",
        ):
            raise ScenarioError(f"curve {curve.name!r} is single-antenna only")
        reserved = self.curve_reserved(curve)
        if reserved < 1:
            raise ScenarioError(f"curve {curve.name!r} needs reserved tones")
        reliable = self.curve_reliable(curve)
        if curve.mode == "augmented" and reliable < 1:
            raise ScenarioError(f"curve {curve.name!r} needs reliable carriers")
        if reserved >= p or reserved + reliable > p:
            raise ScenarioError(
                f"curve {curve.name!r} tone counts exceed the {p} data positions"
            )
        if curve.mode == "noise_cancel" and curve.nbi and self.nbi.max_sources > 0:
            raise ScenarioError("noise cancellation assumes an interference-free link")

    def curve_reserved(self, curve: CurveSpec) -> int:
        if curve.reserved_count is not None:
            return curve.reserved_count
        return self.reserved_count

    def curve_reliable(self, curve: CurveSpec) -> int:
        if curve.reliable_count is not None:
            return curve.reliable_count
        return self.reliable_count


@dataclass(frozen=True)
class BerRecord:
    """One aggregated cell of the result table."""

    scenario: str
    ebn0_db: float
    trials: int
    bit_errors: int
    total_bits: int
    ber: float
    wall_time_ms: float


@dataclass(frozen=True)
class TrialResult:
    bit_errors: int
    success: float | None = None


# ---------------------------------------------------------------------------
# Per-trial simulation chain


def _trial_rngs(config: ScenarioConfig, ebn0_idx: int, trial: int):
    crc = zlib.crc32(config.name.encode("utf-8"))
    seq = np.random.SeedSequence((config.base_seed, crc, ebn0_idx, trial))
    return [np.random.default_rng(child) for child in seq.spawn(4)]


def _reserved_tones(config: ScenarioConfig, curve: CurveSpec) -> np.ndarray:
    """Reserved set for a curve: fixed per run, shared by curves that ask
    for the same count so their comparisons stay paired."""
    if curve.mode == "plain":
        return np.empty(0, dtype=np.int64)
    count = config.curve_reserved(curve)
    crc = zlib.crc32(config.name.encode("utf-8"))
    seed = np.random.SeedSequence((config.base_seed, crc, count))
    return choose_reserved(config.system.per_user, count, seed)


def _sparsifier_cache(config: ScenarioConfig) -> dict[str, Sparsifier]:
    kinds = {config.sparsifier}
    kinds.update(c.sparsifier for c in config.curves if c.sparsifier is not None)
    n = config.system.n_subcarriers
    return {kind: Sparsifier.create(kind, n) for kind in kinds}


def _redrawn_amplitudes(
    sources: list[NbiSource], rng: np.random.Generator
) -> list[NbiSource]:
    """Same support on every antenna, independent CN(0, 1) amplitudes."""
    k = len(sources)
    amps = (rng.standard_normal(k) + 1j * rng.standard_normal(k)) / np.sqrt(2)
    return [replace(s, amplitude=complex(a)) for s, a in zip(sources, amps)]


def _nbi_rate(config: ScenarioConfig) -> float:
    """Nominal per-bin activation estimate for the scenario's ensemble.

    An off-grid source smears across the band instead of occupying one bin;
    its energy is concentrated in roughly the two straddling bins plus the
    first sidelobe, so the expected active-bin count is the expected source
    count times _OFFSET_SOURCE_WIDTH (1 when sources sit on the grid).
    """
    mean_active = config.nbi.mean_active if config.nbi.max_sources else 0.5
    width = 1.0 if config.nbi.offset_mode == "on_grid" else _OFFSET_SOURCE_WIDTH
    return mean_active * width / config.system.n_subcarriers


def _nbi_lam(config: ScenarioConfig, curve: CurveSpec) -> float:
    """Prior fed to the solver: nominal rate times the robustness multiplier."""
    mult = curve.multiplier if curve.multiplier is not None else config.multiplier
    return mult * _nbi_rate(config)


def _nbi_t_max(config: ScenarioConfig, reserved: np.ndarray) -> int:
    """Chain-depth budget from the scenario's nominal activation rate.

    Kept independent of the robustness multiplier (the multiplier distorts
    the solver's prior, not the search budget, so a pessimistic sparsity
    estimate reweights supports instead of truncating the chain) and of the
    sparsifier kind (curves of one scenario get identical search depth, so
    their gaps measure the representations, not unequal budgets).
    """
    n = config.system.n_subcarriers
    return default_t_max(_nbi_rate(config), n, int(reserved.size))


def _solver_params(
    config: ScenarioConfig,
    curve: CurveSpec,
    equalizer,
    channel,
    point: SystemConfig,
    reserved: np.ndarray,
) -> SabmpParams:
    if curve.mode == "noise_cancel":
        # unknown = amplified noise bins on the comb; the residual scale is
        # the typical (median) equalized noise power, robust to deep fades
        inv_gain = 1.0 / np.abs(channel.freq_response[equalizer.comb]) ** 2
        nv = point.noise_var * float(np.median(inv_gain))
        lam = _NOISE_CANCEL_SOURCES / point.per_user
        t_max = None
    else:
        nv = measurement_noise_variance(equalizer, channel, point, reserved)
        lam = _nbi_lam(config, curve)
        t_max = _nbi_t_max(config, reserved)
    return SabmpParams(
        lam=lam, noise_var=max(nv, _SOLVER_NOISE_FLOOR), t_max=t_max
    )


def _bit_errors(
    estimate: np.ndarray,
    frame,
    point: SystemConfig,
    reserved: np.ndarray | None,
) -> int:
    got = demodulate_hard(estimate, point.qam_order, point.symbol_var)[1]
    got = got.reshape(point.per_user, -1)
    want = frame.bits.reshape(point.per_user, -1)
    if reserved is not None and len(reserved):
        keep = np.ones(point.per_user, dtype=bool)
        keep[np.asarray(reserved, dtype=np.int64)] = False
        got, want = got[keep], want[keep]
    return int(np.count_nonzero(got != want))


def _run_trial(
    config: ScenarioConfig,
    curve: CurveSpec,
    point: SystemConfig,
    ebn0_idx: int,
    trial: int,
    reserved: np.ndarray,
    sparsifiers: dict[str, Sparsifier],
    backend: str | None,
) -> TrialResult:
    bits_rng, chan_rng, nbi_rng, noise_rng = _trial_rngs(config, ebn0_idx, trial)
    n = point.n_subcarriers
    victim_reserved = reserved if reserved.size else None
    frames = [
        make_frame(u, point, bits_rng, victim_reserved if u == 0 else None)
        for u in range(point.n_users)
    ]
    channels = [
        [draw_channel(point, chan_rng) for _ in range(point.n_users)]
        for _ in range(config.antennas)
    ]
    sources = draw_sources(config.nbi, n, nbi_rng) if curve.nbi else []
    ys = []
    for t in range(config.antennas):
        y = transmit_receive(frames, channels[t], point)
        if sources:
            per_ant = sources if t == 0 else _redrawn_amplitudes(sources, nbi_rng)
            data_power = float(np.sum(np.abs(y) ** 2))
            scaled = calibrate_sir(per_ant, data_power, config.nbi.sir_db, n)
            y = y + synthesize_nbi(scaled, n)
        if point.noise_var > 0.0:
            z = noise_rng.standard_normal(n) + 1j * noise_rng.standard_normal(n)
            y = y + np.sqrt(point.noise_var / 2.0) * z
        ys.append(y)
    victim = [channels[t][0] for t in range(config.antennas)]
    frame = frames[0]
    eq_kind = curve.equalizer or config.equalizer
    sparsifier = sparsifiers[curve.sparsifier or config.sparsifier]

    if curve.mode == "plain":
        if config.antennas == 1:
            eqz = build_equalizer(eq_kind, victim[0], point, u=0)
            estimate = equalize(eqz, ys[0])
        else:
            estimate = mrc_combine(ys, victim, point)
        return TrialResult(_bit_errors(estimate, frame, point, None))

    if curve.mode == "noise_cancel":
        eqz = build_equalizer("zf", victim[0], point, u=0)
        x_hat = equalize(eqz, ys[0])
        params = _solver_params(config, curve, eqz, victim[0], point, reserved)
        cleaned, _ = zf_noise_cancellation(
            x_hat, victim[0], reserved, params, point, backend=backend
        )
        return TrialResult(_bit_errors(cleaned, frame, point, reserved))

    if curve.mode in ("simo_mmv", "simo_smv"):
        eqs = [build_equalizer(eq_kind, ch, point, u=0) for ch in victim]
        systems = [
            build_reserved_system(equalize(eqs[t], ys[t]), eqs[t], reserved, sparsifier)
            for t in range(config.antennas)
        ]
        noise = float(
            np.mean(
                [
                    measurement_noise_variance(eqs[t], victim[t], point, reserved)
                    for t in range(config.antennas)
                ]
            )
        )
        params = SabmpParams(
            lam=_nbi_lam(config, curve),
            noise_var=max(noise, _SOLVER_NOISE_FLOOR),
            t_max=_nbi_t_max(config, reserved),
        )
        if curve.mode == "simo_mmv":
            estimates = mmv_greedy_search(
                [(s.measurements, s.psi) for s in systems], params, backend=backend
            )
        else:
            estimates = [
                greedy_search(s.measurements, s.psi, params, backend=backend)
                for s in systems
            ]
        cleaned_ys = [
            ys[t] - nbi_frequency_estimate(systems[t], estimates[t])
            for t in range(config.antennas)
        ]
        estimate = mrc_combine(cleaned_ys, victim, point)
        return TrialResult(_bit_errors(estimate, frame, point, reserved))

    # reserved / augmented
    eqz = build_equalizer(eq_kind, victim[0], point, u=0)
    x_hat = equalize(eqz, ys[0])
    system = build_reserved_system(x_hat, eqz, reserved, sparsifier)
    params = _solver_params(config, curve, eqz, victim[0], point, reserved)
    cleaned, est = recover_and_subtract(system, params, x_hat, backend=backend)
    if curve.mode == "reserved":
        return TrialResult(_bit_errors(cleaned, frame, point, reserved))
    sigma_d = residual_variances(est.error_cov, system)
    constellation = qam_constellation(point.qam_order, point.symbol_var)
    table = rank_carriers(
        cleaned,
        sigma_d,
        constellation,
        reserved,
        config.curve_reliable(curve),
        config.metric,
    )
    tones = ToneSets(reserved=reserved, reliable=table.reliable)
    augmented = build_augmented_system(x_hat, cleaned, eqz, tones, sparsifier, point)
    cleaned2, _ = recover_and_subtract(augmented, params, x_hat, backend=backend)
    decisions = hard_decision(cleaned, point.qam_order, point.symbol_var)
    success = success_rate(table.reliable, decisions, frame.symbols)
    return TrialResult(_bit_errors(cleaned2, frame, point, reserved), success)


# ---------------------------------------------------------------------------
# Scenario drivers


def run_scenario(
    config: ScenarioConfig, backend: str | None = None
) -> list[BerRecord]:
    """Simulate every (curve, grid point) cell and aggregate bit errors.

    Deterministic for a fixed config: identical records (wall time aside)
    on every run.
    """
    records: list[BerRecord] = []
    sparsifiers = _sparsifier_cache(config)
    for curve in config.curves:
        reserved = _reserved_tones(config, curve)
        for idx, ebn0 in enumerate(config.ebn0_grid):
            point = replace(
                config.system, noise_var=ebn0_to_noise_var(ebn0, config.system)
            )
            start = time.perf_counter()
            errors = 0
            for trial in range(config.trials):
                result = _run_trial(
                    config, curve, point, idx, trial, reserved, sparsifiers, backend
                )
                errors += result.bit_errors
            wall = (time.perf_counter() - start) * 1e3
            total = config.trials * point.per_user * point.bits_per_symbol
            records.append(
                BerRecord(
                    scenario=f"{config.name}/{curve.name}",
                    ebn0_db=float(ebn0),
                    trials=config.trials,
                    bit_errors=errors,
                    total_bits=total,
                    ber=errors / total,
                    wall_time_ms=wall,
                )
            )
    return records


def run_success_curve(
    config: ScenarioConfig, curve_name: str, backend: str | None = None
) -> list[tuple[float, float]]:
    """Mean stage-1 decision success rate on the chosen reliable set, per
    grid point, for an augmented-mode curve."""
    curve = next((c for c in config.curves if c.name == curve_name), None)
    if curve is None:
        raise ScenarioError(f"scenario has no curve {curve_name!r}")
    if curve.mode != "augmented":
        raise ScenarioError("success rate is defined for augmented curves")
    sparsifiers = _sparsifier_cache(config)
    reserved = _reserved_tones(config, curve)
    out = []
    for idx, ebn0 in enumerate(config.ebn0_grid):
        point = replace(
            config.system, noise_var=ebn0_to_noise_var(ebn0, config.system)
        )
        rates = [
            _run_trial(
                config, curve, point, idx, trial, reserved, sparsifiers, backend
            ).success
            for trial in range(config.trials)
        ]
        out.append((float(ebn0), float(np.mean(rates))))
    return out


def success_rate(
    reliable: np.ndarray, decisions: np.ndarray, truth: np.ndarray
) -> float:
    """Fraction of the chosen carriers whose decision matches the
    transmitted symbol: an exact count over |R|."""
    reliable = np.asarray(reliable, dtype=np.int64)
    if reliable.size == 0:
        raise ValueError("reliable set is empty")
    decisions = np.asarray(decisions)
    truth = np.asarray(truth)
    if decisions.shape != truth.shape:
        raise ValueError("decisions/truth shape mismatch")
    hits = np.isclose(decisions[reliable], truth[reliable], rtol=0.0, atol=1e-9)
    return float(np.count_nonzero(hits)) / reliable.size


# ---------------------------------------------------------------------------
# Reporting


def emit_csv(records: list[BerRecord], path) -> None:
    """Pinned schema: UTF-8, LF endings, ber in %.6e."""
    with open(path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(CSV_HEADER)
        for r in records:
            writer.writerow(
                [
                    r.scenario,
                    f"{r.ebn0_db:g}",
                    r.trials,
                    r.bit_errors,
                    r.total_bits,
                    f"{r.ber:.6e}",
                    f"{r.wall_time_ms:.3f}",
                ]
            )


def emit_summary(records: list[BerRecord]) -> str:
    """Print an aligned text table of every record; returns the text."""
    width = max([len("scenario")] + [len(r.scenario) for r in records]) + 2
    header = (
        f"{'scenario':<{width}}{'ebn0_db':>8}{'trials':>8}"
        f"{'ber':>14}{'errors':>10}"
    )
    lines = [header, "-" * len(header)]
    for r in records:
        lines.append(
            f"{r.scenario:<{width}}{r.ebn0_db:>8g}{r.trials:>8d}"
            f"{r.ber:>14.6e}{r.bit_errors:>10d}"
        )
    text = "\n".join(lines)
    print(text)
    return text


# ---------------------------------------------------------------------------
# Transform comparison (sparsity of the interference representations)


@dataclass(frozen=True)
class GiniRecord:
    """Mean Gini index of one ensemble under the three representations."""

    sources: int
    runs: int
    gi_spread: float
    gi_window: float
    gi_haar: float
    se_spread: float
    se_window: float
    se_haar: float


def run_gini(
    source_counts: list[int], runs: int, n: int, seed: int = 1234
) -> list[GiniRecord]:
    """Sparsity comparison: draw `runs` interference symbols per source
    count (independent fractional offsets), measure the Gini index of the
    raw spread spectrum and of the window / Haar representations."""
    counts = [int(c) for c in source_counts]
    if not counts or any(c < 1 for c in counts):
        raise ScenarioError("source counts must be positive")
    if runs < 2:
        raise ScenarioError("need at least 2 runs for a standard error")
    rng = np.random.default_rng(
        np.random.SeedSequence((int(seed), zlib.crc32(b"gini")))
    )
    scenario = NbiScenario(
        max_sources=max(counts), offset_mode="independent_offsets"
    )
    window = Sparsifier.create("window", n)
    haar = Sparsifier.create("haar", n)
    records = []
    for count in counts:
        g = np.empty((runs, 3))
        for r in range(runs):
            spread = synthesize_nbi(draw_sources(scenario, n, rng, count=count), n)
            g[r, 0] = gini_index(spread)
            g[r, 1] = gini_index(window.forward(spread))
            g[r, 2] = gini_index(haar.forward(spread))
        mean = g.mean(axis=0)
        se = g.std(axis=0, ddof=1) / np.sqrt(runs)
        records.append(
            GiniRecord(
                sources=count,
                runs=runs,
                gi_spread=float(mean[0]),
                gi_window=float(mean[1]),
                gi_haar=float(mean[2]),
                se_spread=float(se[0]),
                se_window=float(se[1]),
                se_haar=float(se[2]),
            )
        )
    return records


def emit_gini_csv(records: list[GiniRecord], path) -> None:
    with open(path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(GINI_CSV_HEADER)
        for r in records:
            writer.writerow(
                [
                    r.sources,
                    r.runs,
                    f"{r.gi_spread:.6f}",
                    f"{r.gi_window:.6f}",
                    f"{r.gi_haar:.6f}",
                    f"{r.se_spread:.6e}",
                    f"{r.se_window:.6e}",
                    f"{r.se_haar:.6e}",
                ]
            )


# ---------------------------------------------------------------------------
# Scenario files


def parse_ebn0_grid(text: str) -> tuple[float, ...]:
    """'start:stop:step' (stop inclusive when on-grid) or a single value."""
    parts = str(text).strip().split(":")
    try:
        if len(parts) == 1:
            return (float(parts[0]),)
        if len(parts) != 3:
            raise ScenarioError(
                f"ebn0 grid {text!r} must be 'value' or 'start:stop:step'"
            )
        start, stop, step = (float(p) for p in parts)
    except ValueError:
        raise ScenarioError(f"bad ebn0 grid {text!r}") from None
    if step <= 0:
        raise ScenarioError("ebn0 step must be positive")
    count = int(np.floor((stop - start) / step + 1e-9)) + 1
    if count < 1:
        raise ScenarioError(f"ebn0 grid {text!r} is empty")
    return tuple(start + i * step for i in range(count))


_FILE_DEFAULTS = {
    "n": "128",
    "users": "2",
    "qam": "16",
    "sir_db": "-10",
    "max_sources": "4",
    "offsets": "independent",
    "reserved": "0",
    "reliable": "0",
    "sparsifier": "none",
    "equalizer": "mmse",
    "antennas": "1",
    "ebn0": "0:25:5",
    "trials": "1000",
    "seed": "1234",
    "multiplier": "1.0",
    "metric": "probabilistic",
}

_OFFSET_MODES = {
    "independent": "independent_offsets",
    "independent_offsets": "independent_offsets",
    "on_grid": "on_grid",
}


def load_config_file(path) -> ScenarioConfig:
    """Flat key = value scenario file with a [scenario] section.

    Curves are listed by their standard names (curves = nbi_free, impaired,
    proposed). Missing keys fall back to the documented defaults.
    """
    parser = configparser.ConfigParser(inline_comment_prefixes=("#", ";"))
    try:
        read = parser.read(path, encoding="utf-8")
    except configparser.Error as exc:
        raise ScenarioError(f"cannot parse {path}: {exc}") from None
    if not read:
        raise ScenarioError(f"cannot read scenario file {path}")
    if not parser.has_section("scenario"):
        raise ScenarioError(f"{path} has no [scenario] section")
    raw = dict(_FILE_DEFAULTS)
    raw.update(parser.items("scenario"))
    curves_text = raw.get("curves", "")
    names = [c.strip() for c in curves_text.split(",") if c.strip()]
    if not names:
        raise ScenarioError(f"{path} must list curves = name, name, ...")
    offsets = raw["offsets"].strip().lower()
    if offsets not in _OFFSET_MODES:
        raise ScenarioError(f"unknown offsets value {offsets!r}")
    try:
        system = SystemConfig(
            n_subcarriers=int(raw["n"]),
            n_users=int(raw["users"]),
            qam_order=int(raw["qam"]),
        )
        nbi = NbiScenario(
            max_sources=int(raw["max_sources"]),
            sir_db=float(raw["sir_db"]),
            offset_mode=_OFFSET_MODES[offsets],
        )
        return ScenarioConfig(
            name=raw.get("name") or Path(path).stem,
            system=system,
            nbi=nbi,
            curves=tuple(library_curve(name) for name in names),
            ebn0_grid=parse_ebn0_grid(raw["ebn0"]),
            trials=int(raw["trials"]),
            base_seed=int(raw["seed"]),
            reserved_count=int(raw["reserved"]),
            reliable_count=int(raw["reliable"]),
            sparsifier=raw["sparsifier"].strip(),
            equalizer=raw["equalizer"].strip(),
            antennas=int(raw["antennas"]),
            multiplier=float(raw["multiplier"]),
            metric=raw["metric"].strip(),
        )
    except ScenarioError:
        raise
    except (TypeError, ValueError) as exc:
        raise ScenarioError(f"bad scenario file {path}: {exc}") from None
