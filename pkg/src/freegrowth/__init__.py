"""Exact product-set growth arithmetic in free products of groups."""

from .encoding import canonical_decode, canonical_encode
from .groups import (
    BaumslagSolitarGroup,
    CayleyTableGroup,
    CyclicGroup,
    DirectProductWithIntegers,
    FormatError,
    Group,
    GroupError,
    GroupLoadError,
    IntegerGroup,
    SL2ZGroup,
    WordParseError,
    load_group,
    load_group_file,
)
from .words import (
    FiniteOrderError,
    FreeProduct,
    PeriodicDecomposition,
    SyllableType,
    naive_reduce,
    syllable_length,
)
from .sets import (
    AmbientMismatchError,
    CoverResult,
    GrowthReport,
    SetFileError,
    WordSet,
    ball_words,
    growth_report,
    min_translate_cover,
    power_set,
    product,
    read_set_file,
    sample_ball,
    write_set_file,
)
from .decompose import (
    AnalysisIncomplete,
    Certificate,
    CollisionReport,
    DegenerateSetError,
    FactorConjugateCertificate,
    GrowthCertificate,
    StructureCertificate,
    SubgroupClass,
    XYWitness,
    classify_subgroup,
    collision_analysis,
    dichotomy,
    extract_xy,
    is_power_word,
    order_xy,
    reduce_majority_conjugate,
    short_word_dispatch,
    validate_certificate,
)
from .families import (
    FamilyReport,
    QuotientReport,
    bs_family,
    bs_window_collapse,
    f2xz_family,
    make_bs_group,
    make_f2xz_group,
    make_psl2_group,
    prop41_family,
    psl2_word_matrix,
    quotient_check,
    sl2_to_psl2_word,
)

__all__ = [name for name in dir() if not name.startswith("_")]
__version__ = "0.1.0"
