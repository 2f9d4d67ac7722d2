"""One-dimensional subshifts: finite-type and sofic presentations."""

from .alphabet import Alphabet, Word, join_tokens, join_words, product_alphabet, split_tokens, split_word
from .beta import beta_root, beta_shift, parry_admissible
from .entropy import NEG_INFINITY, EntropyValue
from .sft import (
    SftPresentation,
    build_sft,
    count_words,
    diagonal_shift,
    factors,
    full_shift,
    product_shift,
    with_window,
    word_in_shift,
)
from .sofic import (
    BlockCode,
    SoficPresentation,
    apply_block_code,
    as_sofic,
    canonical_form,
    find_separating_word,
    identity_code,
    language_contains,
    make_sofic,
    project_tracks,
    relabel,
    sofic_count_words,
    sofic_equal,
    sofic_factors,
    sofic_from_sft,
    sofic_intersection,
    sofic_word_in_language,
    trim_sofic,
)

from .entropy import sft_entropy as _sft_entropy
from .sofic import sofic_entropy as _sofic_entropy


def entropy(shift, tol: float = 1e-9) -> EntropyValue:
    """Entropy in bits per symbol of an SFT or sofic presentation."""
    if isinstance(shift, SftPresentation):
        return _sft_entropy(shift, tol)
    return _sofic_entropy(shift, tol)


__all__ = [
    "Alphabet",
    "BlockCode",
    "EntropyValue",
    "NEG_INFINITY",
    "SftPresentation",
    "SoficPresentation",
    "Word",
    "apply_block_code",
    "as_sofic",
    "beta_root",
    "beta_shift",
    "build_sft",
    "canonical_form",
    "count_words",
    "diagonal_shift",
    "entropy",
    "factors",
    "find_separating_word",
    "full_shift",
    "identity_code",
    "join_tokens",
    "join_words",
    "language_contains",
    "make_sofic",
    "parry_admissible",
    "product_alphabet",
    "product_shift",
    "project_tracks",
    "relabel",
    "sofic_count_words",
    "sofic_equal",
    "sofic_factors",
    "sofic_from_sft",
    "sofic_intersection",
    "sofic_word_in_language",
    "split_tokens",
    "split_word",
    "trim_sofic",
    "with_window",
    "word_in_shift",
]
