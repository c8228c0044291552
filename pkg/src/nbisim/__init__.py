"""Bayesian sparse NBI cancellation for interleaved SC-FDMA uplinks."""

from .scfdma import (
    SystemConfig,
    ChannelRealization,
    EqualizerMatrix,
    QamFrame,
    dft_matrix,
    ebn0_to_noise_var,
    modulate,
    demodulate_hard,
    hard_decision,
    qam_constellation,
    user_comb,
    map_user,
    mapping_matrix,
    draw_channel,
    make_frame,
    transmit_receive,
    build_equalizer,
    equalize,
)
from .nbi import (
    NbiSource,
    NbiScenario,
    synthesize_nbi,
    calibrate_sir,
    draw_sources,
    gini_index,
)
from .sparsify import Sparsifier, haar_matrix, hamming_window, window_operator
from .sabmp import (
    SabmpParams,
    SparseEstimate,
    DominantSupport,
    CompactCovariance,
    DegenerateSupportError,
    nu_metric,
    blue_estimate,
    greedy_search,
    ammse_combine,
    error_covariance,
    mmv_greedy_search,
    default_t_max,
)
from .pipeline import (
    ToneSets,
    SensingSystem,
    ReliabilityTable,
    choose_reserved,
    build_reserved_system,
    recover_and_subtract,
    nbi_frequency_estimate,
    residual_variances,
    reliability_metric,
    distance_reliability,
    select_reliable,
    rank_carriers,
    build_augmented_system,
    measurement_noise_variance,
    zf_noise_cancellation,
    mrc_combine,
)
from .harness import (
    BerRecord,
    CurveSpec,
    GiniRecord,
    ScenarioConfig,
    ScenarioError,
    emit_csv,
    emit_gini_csv,
    emit_summary,
    library_curve,
    load_config_file,
    parse_ebn0_grid,
    run_gini,
    run_scenario,
    run_success_curve,
    success_rate,
)
from .scenarios import build_preset, preset_description, preset_names

__version__ = "0.1.0"

__all__ = [name for name in dir() if not name.startswith("_")]
