"""Plan documents plus the concept-function library used by constraints."""

from .concepts import (
    CONCEPT_ALIASES,
    CONCEPT_REGISTRY,
    ConceptContext,
    concept,
    resolve_concept,
)
from .model import (
    ACTIVITY_TYPES,
    INTERCITY_TYPES,
    MEAL_TYPES,
    DayPlan,
    Plan,
    parse_plan,
    plan_from_obj,
    serialize_plan,
)

__all__ = [
    "ACTIVITY_TYPES",
    "CONCEPT_ALIASES",
    "CONCEPT_REGISTRY",
    "ConceptContext",
    "DayPlan",
    "INTERCITY_TYPES",
    "MEAL_TYPES",
    "Plan",
    "concept",
    "parse_plan",
    "plan_from_obj",
    "resolve_concept",
    "serialize_plan",
]
