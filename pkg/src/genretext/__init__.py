"""Bilingual genre-controlled instruction generation and corpus statistics.

A semantic task model and a genre profile jointly determine the
lexico-grammatical realization of French/English software instructions; the
statistics side recodes and tabulates corpora and checks the tables against
bundled reference distributions.
"""

from .corpus import CodedCorpus, CodedUnit, dump_corpus, load_corpus, validate_corpus
from .errors import (
    DanglingIdError,
    GenretextError,
    MissingDefaultError,
    NoDistributionError,
    NoPlanForGoalError,
    RenormalizationWarning,
    SchemaError,
    ShapeMismatchError,
    TooFewObservationsError,
    UnknownFeatureError,
    UnknownGoalError,
    UnknownSystemError,
    UnresolvedLexemeError,
)
from .generate import build_bundle, generate_corpus, generate_document
from .genre import (
    DETERMINISTIC,
    GENRES,
    STOCHASTIC,
    Distribution,
    DocumentPlan,
    GenreProfile,
    Stage,
    default_profiles,
    element_availability,
    load_profiles,
    select_feature,
    stage_structure,
)
from .lexicon import LexicalEntry, Lexicon, default_lexicon, load_lexicon
from .realize import (
    RuleSet,
    TemplateRule,
    default_rules,
    load_rules,
    realize_document,
    realize_unit,
)
from .recode import recode_surface
from .rng import SplitMix64, largest_remainder, sample_categorical
from .stats import (
    BY_ELEMENT,
    BY_GENRE,
    FrequencyTable,
    compare_tables,
    cross_tab,
    kwic,
    local_mean_table,
    parse_tsv,
    reference_table,
    render_pretty,
    render_tsv,
    t_test,
)
from .systems import (
    FeatureBundle,
    SystemNetwork,
    UnitContext,
    applicable_systems,
    complete_bundle,
    default_network,
    load_network,
    validate_bundle,
)
from .task_model import (
    ActionSpec,
    ELEMENT_KINDS,
    InterfaceObject,
    Plan,
    StateSpec,
    TaskElement,
    TaskModel,
    default_task_model,
    parse_task_model,
    plan_elements,
    serialize_task_model,
    validate_task_model,
)

__version__ = "0.1.0"
