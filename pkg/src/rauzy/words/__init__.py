from .morphism import Morphism, Primitivity, apply_morphism, is_primitive, parse_morphism_text, perron_estimate
from .oracle import DEFAULT_HORIZON, FactorOracle, factor_query
from .sources import (
    GOLDEN,
    DigitStream,
    EventuallyPeriodic,
    Morphic,
    PurelyMorphic,
    SturmianCF,
    WordSource,
    load_source,
    source_from_config,
    source_from_description,
)

__all__ = [
    "DEFAULT_HORIZON",
    "DigitStream",
    "EventuallyPeriodic",
    "FactorOracle",
    "GOLDEN",
    "Morphic",
    "Morphism",
    "Primitivity",
    "PurelyMorphic",
    "SturmianCF",
    "WordSource",
    "apply_morphism",
    "factor_query",
    "is_primitive",
    "load_source",
    "parse_morphism_text",
    "perron_estimate",
    "source_from_config",
    "source_from_description",
]
