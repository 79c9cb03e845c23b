"""Interference-alignment link simulation on constant MIMO channels.

The library builds monomial signal-direction tables from channel
coefficients, encodes integer symbol streams onto them, decodes with an
exact joint-antenna ML search, measures minimum constellation distances,
and evaluates the DoF region arithmetic — plus a seeded Monte Carlo
harness and a CLI tying it together.
"""

from .channel import (
    ChannelConfig,
    ChannelMatrix,
    NoiseModel,
    apply_channel,
    generate_channel,
    load_channel,
    save_channel,
)
from .codec import (
    DecodeResult,
    ModulationParams,
    ReceiveModel,
    build_receive_model,
    design_modulation,
    draw_symbols,
    encode_symbols,
    ml_decode,
    sample_weight_matrix,
    symbol_bound,
    worst_case_signal_scale,
)
from .diophantine import (
    DistanceRecord,
    ExponentFit,
    ProbeConfig,
    fit_distance_exponent,
    min_distance,
    min_distance_exact,
    min_distance_meet,
    min_distance_sample,
)
from .directions import (
    AlignmentReport,
    ClosureMap,
    DirectionTable,
    build_closure_map,
    closure_image_exponents,
    enumerate_interference_directions,
    enumerate_transmit_directions,
    sample_stream_deltas,
    scale_by_delta,
    stream_directions,
    table_size,
    verify_alignment,
)
from .dofregion import (
    StreamPlan,
    direction_budget,
    direction_counts,
    dof_gap,
    in_region,
    in_region_equal_antennas,
    region_report,
    region_vertices_2d,
    stream_plan,
    symmetric_point,
    total_dof,
)
from .errors import NumericRangeError, SizeLimitError
from .harness import (
    ExperimentConfig,
    RunSummary,
    estimate_dof_slope,
    guess_rate,
    predicted_user_slopes,
    probe_matrix,
    run_experiment,
    run_probe,
)

__version__ = "0.1.0"

__all__ = [
    "AlignmentReport",
    "ChannelConfig",
    "ChannelMatrix",
    "ClosureMap",
    "DecodeResult",
    "DirectionTable",
    "DistanceRecord",
    "ExperimentConfig",
    "ExponentFit",
    "ModulationParams",
    "NoiseModel",
    "NumericRangeError",
    "ProbeConfig",
    "ReceiveModel",
    "RunSummary",
    "SizeLimitError",
    "StreamPlan",
    "apply_channel",
    "build_closure_map",
    "build_receive_model",
    "closure_image_exponents",
    "design_modulation",
    "direction_budget",
    "direction_counts",
    "dof_gap",
    "draw_symbols",
    "encode_symbols",
    "enumerate_interference_directions",
    "enumerate_transmit_directions",
    "estimate_dof_slope",
    "fit_distance_exponent",
    "generate_channel",
    "guess_rate",
    "in_region",
    "in_region_equal_antennas",
    "load_channel",
    "min_distance",
    "min_distance_exact",
    "min_distance_meet",
    "min_distance_sample",
    "ml_decode",
    "predicted_user_slopes",
    "probe_matrix",
    "region_report",
    "region_vertices_2d",
    "run_experiment",
    "run_probe",
    "sample_stream_deltas",
    "sample_weight_matrix",
    "save_channel",
    "scale_by_delta",
    "stream_directions",
    "stream_plan",
    "symbol_bound",
    "symmetric_point",
    "table_size",
    "total_dof",
    "verify_alignment",
    "worst_case_signal_scale",
]
