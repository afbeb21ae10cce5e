"""Desk-scale masked-language-model input pipeline.

Covers pair tokenization with special delimiters, the lookup/position/
sequence index functions, summed input embeddings, the 15% / 80-10-10
masking scheme, cross-entropy loss with its logit gradient, and mean
pooling. Whole words stand in for subword pieces; transformer layers and
training are out of scope. The next-sentence objective is deliberately
absent (the robustly optimized training recipe drops it); it appears only
as documentation here.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping, Sequence

import numpy as np

from .errors import DegenerateInputError, InputError

CLS, SEP, EOS, MASK = "[CLS]", "[SEP]", "[EOS]", "[MASK]"
SPECIAL_TOKENS = (CLS, SEP, EOS, MASK)

# Pre-training hyperparameters for the two encoder recipes, recorded as
# documentation constants; nothing in this module consumes them.
PRETRAINING_HYPERPARAMETERS: Mapping[str, Mapping[str, object]] = {
    "bert": {
        "layers": 24, "hidden_size": 1024, "feed_forward_size": 4096,
        "attention_heads": 16, "dropout": 0.1, "warmup_steps": 10_000,
        "weight_decay": 0.01, "peak_learning_rate": 1e-4,
        "learning_rate_decay": "linear", "gradient_clipping": 0.0,
        "max_tokens": 512, "minibatch_size": 256, "max_steps": 1_000_000,
        "activation": "gelu", "optimizer": "adam",
        "adam_beta1": 0.9, "adam_beta2": 0.999, "adam_epsilon": 1e-6,
    },
    "roberta": {
        "layers": 24, "hidden_size": 1024, "feed_forward_size": 4096,
        "attention_heads": 16, "dropout": 0.1, "warmup_steps": 30_000,
        "weight_decay": 0.01, "peak_learning_rate": 4e-4,
        "learning_rate_decay": "linear", "gradient_clipping": 0.0,
        "max_tokens": 512, "minibatch_size": 8_000, "max_steps": 500_000,
        "activation": "gelu", "optimizer": "adam",
        "adam_beta1": 0.9, "adam_beta2": 0.98, "adam_epsilon": 1e-6,
    },
}


@dataclass(frozen=True)
class Vocabulary:
    """Ordered token list with 1-based lookup; specials appear exactly once."""

    tokens: tuple[str, ...]

    def __post_init__(self):
        if len(set(self.tokens)) != len(self.tokens):
            raise InputError("vocabulary tokens must be unique")
        for special in SPECIAL_TOKENS:
            if self.tokens.count(special) != 1:
                raise InputError(f"vocabulary must contain {special} exactly once")

    @property
    def size(self) -> int:
        return len(self.tokens)

    def lookup(self, token: str) -> int:
        """1-based index of a token."""
        try:
            return self.tokens.index(token) + 1
        except ValueError:
            raise InputError(f"token {token!r} not in vocabulary") from None


def make_vocabulary(words: Sequence[str]) -> Vocabulary:
    """Vocabulary from plain words, with the special tokens prepended."""
    return Vocabulary(tokens=SPECIAL_TOKENS + tuple(words))


@dataclass(frozen=True)
class EmbeddingTables:
    token_table: np.ndarray  # (|V|, d)
    position_table: np.ndarray  # (max sequence length, d)
    sequence_table: np.ndarray  # (2, d)

    def __post_init__(self):
        d = self.token_table.shape[1]
        if self.position_table.shape[1] != d or self.sequence_table.shape != (2, d):
            raise InputError("embedding table dimensions disagree")
        for table in (self.token_table, self.position_table, self.sequence_table):
            if not np.all(np.isfinite(table)):
                raise InputError("embedding tables must be finite")


@dataclass(frozen=True)
class MaskingOutcome:
    selected_positions: tuple[int, ...]  # 1-based
    actions: Mapping[int, str]  # position -> masked | unchanged | random
    replacements: Mapping[int, str]  # position -> replacement token


def tokenize_pair(
    first: Sequence[str], second: Sequence[str], max_tokens: int
) -> tuple[str, ...]:
    """[CLS] first [SEP] second [EOS], length-checked against max_tokens."""
    if not first or not second:
        raise InputError("both token sequences must be nonempty")
    total = len(first) + len(second)
    if not total < max_tokens:
        raise InputError(
            f"combined length {total} must be below the limit {max_tokens}"
        )
    return (CLS, *first, SEP, *second, EOS)


def position_of(occurrence_index: int, sequence: Sequence[str]) -> int:
    """1-based position of a token occurrence in the concatenated sequence."""
    if not (1 <= occurrence_index <= len(sequence)):
        raise InputError(
            f"occurrence index {occurrence_index} outside [1, {len(sequence)}]"
        )
    return occurrence_index


def sequence_of(occurrence_index: int, sequence: Sequence[str]) -> int:
    """1 for tokens up to and including [SEP], 2 afterwards."""
    position_of(occurrence_index, sequence)
    try:
        sep_at = sequence.index(SEP) + 1
    except ValueError:
        raise InputError("sequence has no [SEP] delimiter") from None
    return 1 if occurrence_index <= sep_at else 2


def input_embedding(
    occurrence_index: int,
    sequence: Sequence[str],
    tables: EmbeddingTables,
    vocab: Vocabulary,
) -> np.ndarray:
    """Sum of token, position, and sequence table rows for one occurrence."""
    pos = position_of(occurrence_index, sequence)
    if pos > tables.position_table.shape[0]:
        raise InputError(
            f"position {pos} exceeds the position table "
            f"({tables.position_table.shape[0]} rows)"
        )
    token = sequence[occurrence_index - 1]
    lookup = vocab.lookup(token)
    seq = sequence_of(occurrence_index, sequence)
    return (
        tables.token_table[lookup - 1]
        + tables.position_table[pos - 1]
        + tables.sequence_table[seq - 1]
    )


def apply_mlm_mask(
    sequence: Sequence[str],
    vocab: Vocabulary,
    seed: int,
    select_rate: float = 0.15,
) -> MaskingOutcome:
    """Select non-special tokens independently; mask 80%, keep 10%, swap 10%."""
    if not any(tok not in SPECIAL_TOKENS for tok in sequence):
        raise InputError("sequence has no maskable tokens")
    rng = np.random.default_rng(seed)
    selected: list[int] = []
    actions: dict[int, str] = {}
    replacements: dict[int, str] = {}
    for pos, token in enumerate(sequence, start=1):
        if token in SPECIAL_TOKENS:
            continue
        if rng.random() >= select_rate:
            continue
        selected.append(pos)
        draw = rng.random()
        if draw < 0.8:
            actions[pos] = "masked"
            replacements[pos] = MASK
        elif draw < 0.9:
            actions[pos] = "unchanged"
        else:
            actions[pos] = "random"
            replacements[pos] = vocab.tokens[int(rng.integers(0, vocab.size))]
    return MaskingOutcome(
        selected_positions=tuple(selected),
        actions=actions,
        replacements=replacements,
    )


def apply_outcome(sequence: Sequence[str], outcome: MaskingOutcome) -> tuple[str, ...]:
    """The sequence after the masking outcome's replacements."""
    out = list(sequence)
    for pos, action in outcome.actions.items():
        if action in ("masked", "random"):
            out[pos - 1] = outcome.replacements[pos]
    return tuple(out)


def mlm_cross_entropy(
    probabilities: Sequence[float], true_token_index: int
) -> tuple[float, np.ndarray]:
    """Negative log-likelihood of the true token and its logit gradient.

    ``true_token_index`` is 1-based, matching ``Vocabulary.lookup``. The
    gradient with respect to the logits that produced ``probabilities``
    via softmax is (probabilities - one_hot).

    An alternative formulation sets the indicator from the argmax of the
    predicted distribution instead of the true label; that variant collapses
    to -log(max_c p_c), which is blind to the truth and cannot train a
    predictor, so the standard true-label form is implemented.
    """
    p = np.asarray(probabilities, dtype=np.float64)
    if p.ndim != 1 or len(p) < 2:
        raise InputError("probabilities must be a distribution over the vocabulary")
    if np.any(p < 0) or abs(p.sum() - 1.0) > 1e-9:
        raise InputError("probabilities must be nonnegative and sum to one")
    if not (1 <= true_token_index <= len(p)):
        raise InputError(f"true token index {true_token_index} outside [1, {len(p)}]")
    p_true = p[true_token_index - 1]
    if p_true == 0.0:
        raise DegenerateInputError("true token has probability zero: infinite loss")
    grad = p.copy()
    grad[true_token_index - 1] -= 1.0
    return float(-np.log(p_true)), grad


def mean_pool(word_vectors: Sequence[np.ndarray]) -> np.ndarray:
    """Componentwise arithmetic mean of the word vectors."""
    if len(word_vectors) == 0:
        raise InputError("cannot pool an empty list of vectors")
    stacked = np.stack([np.asarray(v, dtype=np.float64) for v in word_vectors])
    return stacked.mean(axis=0)
