"""Substitution subshifts, ordered Bratteli diagrams, and Vershik dynamics at
desk scale: language and growth machinery, recognizability of finite windows,
the two substitution <-> diagram constructions, layered symbol codings, and
explicit phase-space windows."""

from .errors import (
    AlphabetError,
    CountExceedsImage,
    DecompositionFailure,
    DiagramError,
    GrammarError,
    ImproperOrdering,
    InsufficientGrowth,
    NoNesting,
    ScaleTooSmall,
    ShortLettersPresent,
    SpanMismatch,
    UnboundedShorts,
    WindowTooShort,
)
from .words import (
    FactorLanguage,
    LetterClassification,
    NestingClass,
    NoneUpToBounds,
    Substitution,
    Unbounded,
    Word,
    as_letters,
    classify_letters,
    expand,
    expansion_lengths,
    factor_language,
    incidence_matrix,
    nesting_class,
    norms,
    parse_substitution,
    periodicity_witness_search,
    short_block_bound,
    sorted_words,
)
from .recognize import (
    AmbiguityReport,
    ChainLevel,
    ParseChain,
    Tiling,
    TowerTable,
    chain_cut_positions,
    kr_tower_heights,
    one_word_tilings,
    recognize_window,
)
from .constructions import (
    EncodedSystem,
    MarkedWord,
    MinimalComponent,
    MPrimitiveDecomposition,
    NotMPrimitive,
    NotProperUpTo,
    ProperWitness,
    ReturnWordSystem,
    derivative_substitution,
    diagram_via_derivative,
    is_m_primitive,
    is_proper,
    minimal_components,
    multi_edge_encoding,
    nesting_diagram,
    nesting_matching_rule,
    nesting_vocabulary,
    return_words,
)
from .diagrams import (
    TOP,
    ExtremalPaths,
    FinitePath,
    Maximal,
    OrderedDiagram,
    PeriodicLabels,
    StationaryOrderedDiagram,
    enumerate_paths,
    export_dot,
    extremal_paths,
    maximal_path,
    minimal_path,
    read_substitution,
    stationary_from_substitution,
    telescope,
    validate,
    vershik_orbit_coding,
    vershik_successor,
)
from .phase import (
    ChainPrefix,
    CoreCheck,
    LambdaSeed,
    core_membership,
    lambda_seeds,
    lambda_window,
    m0_window,
)
from .symbols import (
    CompatibleWitness,
    DepthReport,
    EventualPeriod,
    JSequenceWindow,
    JSymbol,
    NoneWithinBudget,
    box_matrix_text,
    build_j_symbol,
    depth_and_cuts,
    eventually_periodic_check,
    expansiveness_witness_search,
    path_window,
    shift_down_path,
    tower_rank,
    window_from_parse,
)

__all__ = [name for name in dir() if not name.startswith("_")]
