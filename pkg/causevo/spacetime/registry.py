from dataclasses import dataclass
from typing import Any, Callable, Dict, Optional, Type

from pydantic import BaseModel, ValidationError

from causevo.logging_config import create_logger
from causevo.spacetime.model import SpacetimeModel


@dataclass
class SpacetimeEntry:
    """Information about a registered spacetime model class."""
    model_class: Type[SpacetimeModel]
    kind: str
    description: str
    param_model: Optional[Type[BaseModel]] = None


class SpacetimeRegistry:
    """Registry for closed-form spacetime models, keyed by descriptor kind."""

    _models: Dict[str, SpacetimeEntry] = {}
    logger = create_logger("SpacetimeRegistry")

    @classmethod
    def register(cls, kind: str, description: str, param_model: Optional[Type[BaseModel]] = None):
        """
        Decorator to register a spacetime model class.
        """
        def decorator(model_class: Type[SpacetimeModel]) -> Type[SpacetimeModel]:
            if not issubclass(model_class, SpacetimeModel):
                raise ValueError(f"{model_class.__name__} must subclass SpacetimeModel")
            if param_model is not None and not issubclass(param_model, BaseModel):
                raise ValueError(f"Parameter model {param_model.__name__} must be a Pydantic BaseModel")
            if kind in cls._models:
                cls.logger.warning(f"Spacetime kind '{kind}' registered twice; keeping {model_class.__name__}")

            cls._models[kind] = SpacetimeEntry(
                model_class=model_class,
                kind=kind,
                description=description,
                param_model=param_model,
            )
            return model_class
        return decorator

    @classmethod
    def create(cls, kind: str, params: Optional[Dict[str, Any]] = None) -> SpacetimeModel:
        """Instantiate a registered model, validating its parameters."""
        if kind not in cls._models:
            raise ValueError(f"Spacetime kind '{kind}' not found. Available kinds: {sorted(cls._models)}")

        entry = cls._models[kind]
        params = params or {}
        if entry.param_model is None:
            if params:
                raise ValueError(f"Spacetime kind '{kind}' takes no parameters, got {params}")
            return entry.model_class()

        try:
            validated = entry.param_model(**params)
        except ValidationError as e:
            raise ValueError(f"Invalid parameters for spacetime '{kind}': {e}") from e
        return entry.model_class(validated)

    @classmethod
    def from_descriptor(cls, descriptor: Dict[str, Any]) -> SpacetimeModel:
        """Build a model from `{"kind": ..., "scale": {...}}`."""
        if "kind" not in descriptor:
            raise ValueError(f"Model descriptor without 'kind': {descriptor}")
        return cls.create(descriptor["kind"], descriptor.get("scale"))

    @classmethod
    def get_all_models(cls) -> Dict[str, SpacetimeEntry]:
        models = cls._models.copy()
        if not models:
            raise ValueError("No spacetime models registered")
        return models

    @classmethod
    def get_model_by_kind(cls, kind: str) -> Optional[SpacetimeEntry]:
        return cls._models.get(kind)


def spacetime_model(kind: str, description: str, param_model: Optional[Type[BaseModel]] = None) -> Callable:
    """
    Decorator for registering spacetime model classes.

    Usage:
        @spacetime_model(kind="minkowski", description="Flat 1+1 Minkowski spacetime")
        class Minkowski1p1(SpacetimeModel):
            ...

        @spacetime_model(kind="flrw", description="...", param_model=FLRWScale)
        class FLRW1p1(SpacetimeModel):
            def __init__(self, scale: FLRWScale): ...
    """
    return SpacetimeRegistry.register(kind, description, param_model)
