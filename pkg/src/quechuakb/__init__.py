"""Keyboard layout analysis and optimization driven by character frequencies."""

from .effort import (
    ComparisonReport,
    EffortParams,
    LayoutMetrics,
    compare,
    evaluate,
    key_cost,
    percent_improvement,
)
from .errors import (
    CapacityError,
    ConfigError,
    DataIOError,
    DomainError,
    EncodingError,
    KeyboardError,
    ParseError,
    UnknownNameError,
    ValidationError,
)
from .frequency import (
    BigramTable,
    FrequencyTable,
    builtin_table,
    count_bigrams,
    count_unigrams,
    merge,
    relative,
    sorted_entries,
)
from .graphemes import LanguageProfile, TokenMode, builtin_profile, load_profile, normalize, tokenize
from .keyboard import (
    KeyboardGeometry,
    KeySlot,
    Layout,
    builtin_geometry,
    builtin_layout,
    parse_layout,
    serialize_layout,
    validate_layout,
)
from .optimize import (
    OptimizationResult,
    OptimizeConfig,
    anneal,
    brute_force,
    greedy_seed,
    optimize_free,
    optimize_qwerty_delta,
)

__version__ = "0.1.0"
