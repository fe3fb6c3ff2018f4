"""Cell-grid destination and arrival-time prediction for AIS streams."""

from ._core import (
    AisRecord,
    AiscellError,
    Coord,
    Dataset,
    Engine,
    EngineConfig,
    EvalReport,
    GridSpec,
    Port,
    PortRegistry,
    Prediction,
    PredictionRow,
    SynthConfig,
    TrainSummary,
    TruthRow,
    angular_diff,
    bearing_deg,
    cell_of,
    dimension_diagnostic,
    evaluate,
    format_record,
    gen_dataset,
    haversine_nm,
    load_ports,
    parse_record,
    read_records,
)

__all__ = [name for name in dir() if not name.startswith("_")]
