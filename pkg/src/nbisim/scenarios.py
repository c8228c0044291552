"""Preset experiment scenarios.

Each preset reproduces one of the standard evaluation setups at a desk
scale (128 subcarriers) that runs quickly; pass n=512 for the full-size
configuration. Two interleaved users share the band, the victim is user 0,
16-QAM throughout, quarter-band channels, and interference at -10 dB SIR
with up to four sources refreshed every symbol.
"""

from __future__ import annotations

from .harness import CurveSpec, ScenarioConfig, ScenarioError, library_curve
from .nbi import NbiScenario
from .scfdma import SystemConfig

DEFAULT_N = 128
FULL_SCALE_N = 512
DEFAULT_TRIALS = 400
DEFAULT_SEED = 1234
GINI_PRESET = "gini"

_GRID = (0.0, 5.0, 10.0, 15.0, 20.0, 25.0)


def _system(n: int) -> SystemConfig:
    return SystemConfig(n_subcarriers=n, n_users=2, qam_order=16)


def _nbi(on_grid: bool, max_sources: int = 4) -> NbiScenario:
    return NbiScenario(
        max_sources=max_sources,
        sir_db=-10.0,
        offset_mode="on_grid" if on_grid else "independent_offsets",
    )


def _curves(*names: str) -> tuple[CurveSpec, ...]:
    return tuple(library_curve(name) for name in names)


def _fig2(n, trials, seed, grid):
    p = n // 2
    return ScenarioConfig(
        name="fig2",
        system=_system(n),
        nbi=_nbi(on_grid=True),
        curves=_curves("nbi_free", "impaired", "proposed"),
        ebn0_grid=grid or _GRID,
        trials=trials,
        base_seed=seed,
        reserved_count=p // 4,
        sparsifier="none",
    )


def _fig3(n, trials, seed, grid):
    p = n // 2
    multipliers = (0.2, 0.6, 1.0, 1.4, 1.8)
    return ScenarioConfig(
        name="fig3",
        system=_system(n),
        nbi=_nbi(on_grid=True),
        curves=tuple(
            CurveSpec(f"mult_{m:g}", "reserved", multiplier=m) for m in multipliers
        ),
        ebn0_grid=grid or (17.5,),
        trials=trials,
        base_seed=seed,
        reserved_count=p // 4,
        sparsifier="none",
    )


def _fig5(n, trials, seed, grid):
    p = n // 2
    return ScenarioConfig(
        name="fig5",
        system=_system(n),
        nbi=_nbi(on_grid=False),
        curves=_curves("nbi_free", "impaired", "spread", "window", "haar"),
        ebn0_grid=grid or _GRID,
        trials=trials,
        base_seed=seed,
        reserved_count=p // 4,
    )


def _fig6(n, trials, seed, grid):
    p = n // 2
    counts = (p // 16, p // 8, p // 4, 3 * p // 8)
    kinds = (("spread", "none"), ("window", "window"), ("haar", "haar"))
    curves = tuple(
        CurveSpec(f"{label}_t{count}", "reserved", sparsifier=kind, reserved_count=count)
        for label, kind in kinds
        for count in counts
    )
    return ScenarioConfig(
        name="fig6",
        system=_system(n),
        nbi=_nbi(on_grid=False),
        curves=curves,
        ebn0_grid=grid or (22.5,),
        trials=trials,
        base_seed=seed,
        reserved_count=p // 4,
    )


def _fig7(n, trials, seed, grid):
    p = n // 2
    return ScenarioConfig(
        name="fig7",
        system=_system(n),
        nbi=_nbi(on_grid=True, max_sources=0),
        curves=_curves("zf", "zf_cancel", "mmse"),
        ebn0_grid=grid or _GRID,
        trials=trials,
        base_seed=seed,
        reserved_count=p // 4,
        equalizer="zf",
    )


def _fig8(n, trials, seed, grid):
    p = n // 2
    return ScenarioConfig(
        name="fig8",
        system=_system(n),
        nbi=_nbi(on_grid=False),
        curves=_curves("nbi_free", "reserved_only", "augmented"),
        ebn0_grid=grid or _GRID,
        trials=trials,
        base_seed=seed,
        reserved_count=p // 8,
        reliable_count=p // 8,
        sparsifier="haar",
    )


def _fig9(n, trials, seed, grid):
    p = n // 2
    return ScenarioConfig(
        name="fig9",
        system=_system(n),
        nbi=_nbi(on_grid=True),
        curves=_curves("nbi_free", "reserved_only", "augmented"),
        ebn0_grid=grid or _GRID,
        trials=trials,
        base_seed=seed,
        reserved_count=p // 8,
        reliable_count=p // 8,
        sparsifier="none",
    )


def _fig10(n, trials, seed, grid):
    p = n // 2
    curves = (
        CurveSpec("t25", "augmented", reserved_count=p // 4, reliable_count=p // 4),
        CurveSpec("t12.5", "augmented", reserved_count=p // 8, reliable_count=p // 8),
    )
    return ScenarioConfig(
        name="fig10",
        system=_system(n),
        nbi=_nbi(on_grid=False),
        curves=curves,
        ebn0_grid=grid or _GRID,
        trials=trials,
        base_seed=seed,
        reserved_count=p // 8,
        reliable_count=p // 8,
        sparsifier="haar",
    )


def _fig11(n, trials, seed, grid):
    p = n // 2
    return ScenarioConfig(
        name="fig11",
        system=_system(n),
        nbi=_nbi(on_grid=False),
        curves=_curves("nbi_free", "smv", "mmv"),
        ebn0_grid=grid or _GRID,
        trials=trials,
        base_seed=seed,
        reserved_count=p // 8,
        sparsifier="haar",
        antennas=2,
    )


_PRESETS = {
    "fig2": (_fig2, "BER vs Eb/N0, on-grid interference, reserved-tone recovery"),
    "fig3": (_fig3, "recovery BER vs sparsity-estimate multiplier at 17.5 dB"),
    "fig5": (_fig5, "BER vs Eb/N0, fractional offsets, spread/window/Haar domains"),
    "fig6": (_fig6, "BER vs reserved-tone count at 22.5 dB, offsets, all domains"),
    "fig7": (_fig7, "interference-free link: ZF vs ZF + noise cancellation vs MMSE"),
    "fig8": (_fig8, "decision-aided augmentation vs reserved-only, offsets + Haar"),
    "fig9": (_fig9, "decision-aided augmentation vs reserved-only, on-grid"),
    "fig10": (_fig10, "reliable-carrier success rate, 25% vs 12.5% reserved"),
    "fig11": (_fig11, "two-antenna joint (MMV) vs independent (SMV) recovery"),
}

_GINI_DESCRIPTION = "Gini sparsity of spread/window/Haar interference representations"


def preset_names() -> list[str]:
    return [*(_PRESETS), GINI_PRESET]


def preset_description(name: str) -> str:
    if name == GINI_PRESET:
        return _GINI_DESCRIPTION
    try:
        return _PRESETS[name][1]
    except KeyError:
        raise ScenarioError(f"unknown scenario {name!r}") from None


def build_preset(
    name: str,
    n: int = DEFAULT_N,
    trials: int = DEFAULT_TRIALS,
    seed: int = DEFAULT_SEED,
    ebn0_grid: tuple[float, ...] | None = None,
) -> ScenarioConfig:
    """Construct a preset scenario, optionally resized or re-seeded."""
    if name == GINI_PRESET:
        raise ScenarioError(
            "the gini preset compares transforms; run it through the gini flow"
        )
    try:
        builder = _PRESETS[name][0]
    except KeyError:
        known = ", ".join(preset_names())
        raise ScenarioError(f"unknown scenario {name!r}; presets: {known}") from None
    return builder(n, trials, seed, ebn0_grid)
