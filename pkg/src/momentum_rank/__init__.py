"""Momentum leaders: Pareto frontiers over absolute and relative score gain."""

from .analytics import (
    FrontierSizeHistogram,
    InversionCurve,
    TopKBoxStat,
    WindowSpec,
    inversion_curves,
    powerlaw_diagnostic,
    sliding_frontier_sizes,
    topk_box_stats,
)
from .core import (
    DeltaSystem,
    ExclusionCertificate,
    FrontierMembership,
    FrontierReport,
    MOMENTUM_FUNCTIONS,
    GainVector,
    MomentumError,
    MomentumLeader,
    ScoreSnapshot,
    build_frontier_report,
    compute_delta_system,
    dominance_interval,
    explain_exclusion,
    momentum_score,
    pareto_dominates,
    pareto_frontier,
)
from .ingest import SnapshotStore, load_snapshot, save_snapshot
from .synth import SynthConfig, frontier_size_experiment, generate_population

__version__ = "0.1.0"

__all__ = [
    "DeltaSystem",
    "ExclusionCertificate",
    "FrontierMembership",
    "FrontierReport",
    "FrontierSizeHistogram",
    "GainVector",
    "InversionCurve",
    "MOMENTUM_FUNCTIONS",
    "MomentumError",
    "MomentumLeader",
    "ScoreSnapshot",
    "SnapshotStore",
    "SynthConfig",
    "TopKBoxStat",
    "WindowSpec",
    "build_frontier_report",
    "compute_delta_system",
    "dominance_interval",
    "explain_exclusion",
    "frontier_size_experiment",
    "generate_population",
    "inversion_curves",
    "load_snapshot",
    "momentum_score",
    "pareto_dominates",
    "pareto_frontier",
    "powerlaw_diagnostic",
    "save_snapshot",
    "sliding_frontier_sizes",
    "topk_box_stats",
]
