"""Feed-forward network regression over daily financial time series.

Thin wrapper over the compiled extension; everything lives in ffnet._core.
"""

from ._core import (
    EvaluationReport,
    FfnetError,
    MinMaxScaler,
    Network,
    SplitFrame,
    SyntheticColumn,
    SyntheticTarget,
    TimeSeriesFrame,
    TrainingConfig,
    TrainingReport,
    build_network,
    chronological_split,
    descriptive_stats,
    evaluate,
    generate_synthetic,
    gradient_check,
    hidden_neuron_count,
    hit_rate,
    load_csv,
    mae,
    mape,
    mse_loss,
    render_prediction_svg,
    rmse,
    run_experiment,
    run_predict,
    slice_regime,
    train,
    write_csv,
)

__all__ = [
    "EvaluationReport",
    "FfnetError",
    "MinMaxScaler",
    "Network",
    "SplitFrame",
    "SyntheticColumn",
    "SyntheticTarget",
    "TimeSeriesFrame",
    "TrainingConfig",
    "TrainingReport",
    "build_network",
    "chronological_split",
    "descriptive_stats",
    "evaluate",
    "generate_synthetic",
    "gradient_check",
    "hidden_neuron_count",
    "hit_rate",
    "load_csv",
    "mae",
    "mape",
    "mse_loss",
    "render_prediction_svg",
    "rmse",
    "run_experiment",
    "run_predict",
    "slice_regime",
    "train",
    "write_csv",
]

__version__ = "0.1.0"
