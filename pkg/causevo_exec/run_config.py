import json
from pathlib import Path
from typing import Any, Dict, List, Literal, Optional

from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

from causevo.config import CONFIG as CORE_CONFIG
from causevo.field.residuals import ToleranceSchedule
from causevo.spacetime.model import SpacetimeModel
from causevo.spacetime.registry import SpacetimeRegistry
from causevo.spacetime.temporal import TemporalFunction, temporal_from_literal
from .config import CONFIG

Command = Literal["check-causal", "build-sigma", "verify-field", "transform", "demo"]


def parse_model_literal(literal: str) -> Dict[str, Any]:
    """`minkowski`, `cylinder`, `flrw:0.1` or a JSON model descriptor."""
    text = literal.strip()
    if text.startswith("{"):
        descriptor = json.loads(text)
    else:
        kind, _, eps = text.partition(":")
        descriptor = {"kind": kind}
        if eps:
            descriptor["scale"] = {"eps": float(eps)}
    SpacetimeRegistry.from_descriptor(descriptor)
    return descriptor


class RunConfig(BaseModel):
    """Validated settings of one command run."""
    model_config = ConfigDict(extra="forbid")

    command: Command
    model: Optional[str] = None
    input_path: Optional[Path] = None
    example: Optional[Literal["example1", "example2"]] = None
    levels: List[int] = Field(default_factory=lambda: [1])
    dt: Optional[float] = Field(default=None, gt=0)
    frames: Optional[List[str]] = None
    output_dir: Path = Field(default_factory=lambda: Path(CONFIG.OUTPUT_BASE_PATH))
    seed: int = Field(default_factory=lambda: CORE_CONFIG.DEFAULT_SEED)
    arithmetic: Literal["rational", "float"] = Field(default_factory=lambda: CORE_CONFIG.ARITHMETIC_MODE)
    cont_factor: Optional[float] = Field(default=None, gt=0)
    quad_factor: Optional[float] = Field(default=None, gt=0)
    current_eps: Optional[float] = Field(default=None, gt=0)

    @field_validator("levels")
    @classmethod
    def check_levels(cls, levels: List[int]) -> List[int]:
        if not levels:
            raise ValueError("At least one level is needed")
        if any(level < 1 for level in levels):
            raise ValueError(f"Levels must be >= 1, got {levels}")
        return sorted(set(levels))

    @field_validator("model")
    @classmethod
    def check_model(cls, model: Optional[str]) -> Optional[str]:
        if model is not None:
            parse_model_literal(model)
        return model

    @field_validator("frames")
    @classmethod
    def check_frames(cls, frames: Optional[List[str]]) -> Optional[List[str]]:
        if frames is not None:
            if not frames:
                raise ValueError("The frame list is empty")
            for literal in frames:
                temporal_from_literal(literal)
        return frames

    @model_validator(mode="after")
    def check_inputs(self) -> "RunConfig":
        if self.command == "demo":
            if self.example is None:
                raise ValueError("demo needs an example: example1 or example2")
            return self
        if self.input_path is None:
            raise ValueError(f"{self.command} needs --input")
        if not self.input_path.is_file():
            raise ValueError(f"Input file {self.input_path} does not exist")
        return self

    @property
    def rational(self) -> bool:
        return self.arithmetic == "rational"

    def model_descriptor(self) -> Optional[Dict[str, Any]]:
        return None if self.model is None else parse_model_literal(self.model)

    def spacetime(self) -> Optional[SpacetimeModel]:
        descriptor = self.model_descriptor()
        return None if descriptor is None else SpacetimeRegistry.from_descriptor(descriptor)

    def temporal_functions(self) -> Optional[List[TemporalFunction]]:
        return None if self.frames is None else [temporal_from_literal(f) for f in self.frames]

    def schedule(self) -> ToleranceSchedule:
        return ToleranceSchedule(self.cont_factor, self.quad_factor)

    def as_record(self) -> Dict[str, Any]:
        """The run inputs as plain JSON values."""
        return json.loads(self.model_dump_json())
