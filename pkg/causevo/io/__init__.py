from .schema import (
    SCHEMA_VERSION,
    CurveMeasureDocument,
    EvolutionDocument,
    FrameDocument,
    ModelDocument,
    SchemaError,
    curve_measure_to_dict,
    dump_curve_measure,
    dump_evolution,
    dumps,
    evolution_to_dict,
    is_curve_measure_document,
    load_curve_measure,
    load_document,
    load_evolution,
    parse_curve_measure,
    parse_evolution,
)

__all__ = [
    "SCHEMA_VERSION",
    "CurveMeasureDocument",
    "EvolutionDocument",
    "FrameDocument",
    "ModelDocument",
    "SchemaError",
    "curve_measure_to_dict",
    "dump_curve_measure",
    "dump_evolution",
    "dumps",
    "evolution_to_dict",
    "is_curve_measure_document",
    "load_curve_measure",
    "load_document",
    "load_evolution",
    "parse_curve_measure",
    "parse_evolution",
]
