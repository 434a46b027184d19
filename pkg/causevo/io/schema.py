import json
from pathlib import Path
from typing import Annotated, Any, Dict, List, Literal, Optional, Tuple, Union

from pydantic import BaseModel, BeforeValidator, ConfigDict, Field, ValidationError, model_validator

from causevo.config import CONFIG
from causevo.curves.model import CausalCurve
from causevo.curves.operations import validate_curve
from causevo.measures.model import Evolution, MarginalMismatchError, SliceMeasure
from causevo.paths.model import CurveMeasure
from causevo.spacetime.model import Event, SpacetimeModel
from causevo.spacetime.registry import SpacetimeRegistry
from causevo.spacetime.temporal import CANONICAL, TemporalFunction, temporal_from_descriptor
from causevo.utils.numerics import format_weight, is_unit_mass, parse_weight_literal

SCHEMA_VERSION = 1


class SchemaError(ValueError):
    """An input document that does not describe a valid object."""
    pass


def _weight_literal(value: Any) -> str:
    """Weights travel as strings: 'p/q' or a decimal."""
    if isinstance(value, bool):
        raise ValueError(f"Invalid weight {value!r}")
    if isinstance(value, (int, float)):
        value = repr(value)
    parse_weight_literal(value, rational=True)
    return str(value)


WeightLiteral = Annotated[str, BeforeValidator(_weight_literal)]


class Document(BaseModel):
    model_config = ConfigDict(populate_by_name=True, extra="forbid")


class ModelDocument(Document):
    kind: Literal["minkowski", "cylinder", "flrw"]
    scale: Optional[Dict[str, float]] = None


class FrameDocument(Document):
    kind: Literal["canonical", "boost", "sheared"]
    v: Optional[float] = None
    lam: Optional[float] = None

    @model_validator(mode="after")
    def check_parameters(self) -> "FrameDocument":
        if self.kind == "boost" and self.v is None:
            raise ValueError("A boost frame needs 'v'")
        if self.kind == "sheared" and self.lam is None:
            raise ValueError("A sheared frame needs 'lam'")
        return self

    def temporal(self) -> TemporalFunction:
        return temporal_from_descriptor(self.model_dump(exclude_none=True))


class AtomDocument(Document):
    event: Tuple[float, float]
    w: WeightLiteral


class SliceDocument(Document):
    time: float
    atoms: List[AtomDocument] = Field(min_length=1)


class EvolutionDocument(Document):
    schema_version: Literal[1] = Field(SCHEMA_VERSION, alias="schema")
    model: ModelDocument
    frame: Optional[FrameDocument] = None
    times: List[float] = Field(min_length=1)
    slices: List[SliceDocument]

    @model_validator(mode="after")
    def check_slices(self) -> "EvolutionDocument":
        if len(self.times) != len(self.slices):
            raise ValueError(f"{len(self.times)} times but {len(self.slices)} slices")
        for t, s in zip(self.times, self.slices):
            if s.time != t:
                raise ValueError(f"Slice time {s.time} does not match grid time {t}")
        return self


class CurveDocument(Document):
    times: List[float] = Field(min_length=1)
    points: List[Tuple[float, float]]
    frame: Optional[FrameDocument] = None

    @model_validator(mode="after")
    def check_points(self) -> "CurveDocument":
        if len(self.times) != len(self.points):
            raise ValueError(f"{len(self.times)} times but {len(self.points)} points")
        return self


class CurveAtomDocument(Document):
    w: WeightLiteral
    curve: CurveDocument


class CurveMeasureDocument(Document):
    schema_version: Literal[1] = Field(SCHEMA_VERSION, alias="schema")
    model: ModelDocument
    interval: Tuple[float, float]
    atoms: List[CurveAtomDocument] = Field(min_length=1)


def _rational(rational: Optional[bool]) -> bool:
    return CONFIG.ARITHMETIC_MODE == "rational" if rational is None else rational


def _frame(doc: Optional[FrameDocument]) -> TemporalFunction:
    return CANONICAL if doc is None else doc.temporal()


def _frame_doc(temporal: TemporalFunction) -> Optional[Dict[str, Any]]:
    return None if temporal.function_id == CANONICAL.function_id else temporal.descriptor()


def _parse(document_class, source: Union[str, bytes, Dict[str, Any]]):
    try:
        if isinstance(source, dict):
            return document_class.model_validate(source)
        return document_class.model_validate_json(source)
    except ValidationError as e:
        raise SchemaError(f"Invalid {document_class.__name__}: {e}") from e


def _read(path: Union[str, Path]) -> str:
    try:
        return Path(path).read_text(encoding="utf-8")
    except OSError as e:
        raise SchemaError(f"Cannot read {path}: {e}") from e


def dumps(document: Dict[str, Any]) -> str:
    return json.dumps(document, sort_keys=True, indent=2)


def model_from_document(doc: ModelDocument) -> SpacetimeModel:
    try:
        return SpacetimeRegistry.from_descriptor(doc.model_dump(exclude_none=True))
    except ValueError as e:
        raise SchemaError(str(e)) from e


# Evolutions

def evolution_to_dict(model: SpacetimeModel, ev: Evolution) -> Dict[str, Any]:
    doc: Dict[str, Any] = {
        "schema": SCHEMA_VERSION,
        "model": model.descriptor(),
        "times": [float(t) for t in ev.times],
        "slices": [
            {
                "time": float(s.time),
                "atoms": [{"event": [e.t, e.x], "w": format_weight(w)} for e, w in zip(s.events, s.weights)],
            }
            for s in ev.slices
        ],
    }
    frame = _frame_doc(ev.temporal)
    if frame is not None:
        doc["frame"] = frame
    return doc


def evolution_from_document(doc: EvolutionDocument, rational: Optional[bool] = None) -> Tuple[SpacetimeModel, Evolution]:
    rational = _rational(rational)
    model = model_from_document(doc.model)
    try:
        temporal = _frame(doc.frame)
        slices = [
            SliceMeasure.from_atoms(
                s.time,
                [(Event(*a.event), parse_weight_literal(a.w, rational)) for a in s.atoms],
                temporal,
            )
            for s in doc.slices
        ]
        ev = Evolution.from_slices(slices)
        ev.validate(model)
    except ValueError as e:
        raise SchemaError(f"Invalid evolution: {e}") from e
    return model, ev


def parse_evolution(source: Union[str, bytes, Dict[str, Any]], rational: Optional[bool] = None) -> Tuple[SpacetimeModel, Evolution]:
    return evolution_from_document(_parse(EvolutionDocument, source), rational)


def load_evolution(path: Union[str, Path], rational: Optional[bool] = None) -> Tuple[SpacetimeModel, Evolution]:
    return parse_evolution(_read(path), rational)


def dump_evolution(model: SpacetimeModel, ev: Evolution) -> str:
    return dumps(evolution_to_dict(model, ev))


# Curve measures

def curve_from_document(doc: CurveDocument) -> CausalCurve:
    try:
        return CausalCurve(doc.times, [list(p) for p in doc.points], _frame(doc.frame))
    except ValueError as e:
        raise SchemaError(f"Invalid curve: {e}") from e


def curve_measure_to_dict(model: SpacetimeModel, sigma: CurveMeasure) -> Dict[str, Any]:
    a, b = sigma.interval
    return {
        "schema": SCHEMA_VERSION,
        "model": model.descriptor(),
        "interval": [a, b],
        "atoms": [{"w": format_weight(w), "curve": c.to_dict()} for c, w in sigma.atoms()],
    }


def _check_structure(model: SpacetimeModel, sigma: CurveMeasure) -> None:
    """Unit mass and well-formed samples; whether the curves are causal is for the checks to report."""
    if not is_unit_mass(sigma.weights):
        raise MarginalMismatchError(f"Curve measure has total mass {sigma.total_mass}")
    for n, c in enumerate(sigma.curves):
        check = validate_curve(model, c)
        if not check and check.reason != "causal order":
            raise ValueError(f"Curve {n} is invalid at sample {check.first_violation}: {check.reason}")


def curve_measure_from_document(doc: CurveMeasureDocument, rational: Optional[bool] = None) -> Tuple[SpacetimeModel, CurveMeasure]:
    rational = _rational(rational)
    model = model_from_document(doc.model)
    curves = [curve_from_document(atom.curve) for atom in doc.atoms]
    for c in curves:
        if c.interval != tuple(doc.interval):
            raise SchemaError(f"Curve interval {c.interval} differs from the declared interval {tuple(doc.interval)}")
    try:
        sigma = CurveMeasure(tuple(curves), tuple(parse_weight_literal(atom.w, rational) for atom in doc.atoms))
        _check_structure(model, sigma)
    except ValueError as e:
        raise SchemaError(f"Invalid curve measure: {e}") from e
    return model, sigma


def parse_curve_measure(source: Union[str, bytes, Dict[str, Any]], rational: Optional[bool] = None) -> Tuple[SpacetimeModel, CurveMeasure]:
    return curve_measure_from_document(_parse(CurveMeasureDocument, source), rational)


def load_curve_measure(path: Union[str, Path], rational: Optional[bool] = None) -> Tuple[SpacetimeModel, CurveMeasure]:
    return parse_curve_measure(_read(path), rational)


def dump_curve_measure(model: SpacetimeModel, sigma: CurveMeasure) -> str:
    return dumps(curve_measure_to_dict(model, sigma))


def is_curve_measure_document(source: Dict[str, Any]) -> bool:
    """Evolutions carry slices, curve measures carry curve atoms."""
    return "slices" not in source and "atoms" in source


def load_document(path: Union[str, Path]) -> Dict[str, Any]:
    try:
        data = json.loads(_read(path))
    except json.JSONDecodeError as e:
        raise SchemaError(f"{path} is not valid JSON: {e}") from e
    if not isinstance(data, dict):
        raise SchemaError(f"{path} does not hold a JSON object")
    return data
