"""Oracle-verifiable toy corpora.

Every generated document's labels are fully determined by which class
keywords it contains, so a perfect policy exists by construction and any
measured shortfall belongs to the learner. Keywords come from a vetted
list of words that survive the preprocessing pipeline unchanged (length
>= 3, not stop words, fixed points of the stemmer); noise words are
consonant-vowel pseudo-words that are likewise stem-stable.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .corpus import RawDocument
from .preprocess import is_stopword, porter_stem

__all__ = ["SyntheticSpec", "generate", "KEYWORDS"]

# Stem-stable, non-stop-word class keywords.
KEYWORDS = (
    "bravo", "delta", "echo", "foxtrot", "golf", "hotel", "kilo", "lima",
    "oscar", "papa", "quebec", "romeo", "sierra", "tango", "zulu", "cobra",
    "panda", "zebra", "lemur", "gecko",
)

_CONSONANTS = "bcdfgjklmnprstvz"
_FINAL_VOWELS = "aiou"
_VOWELS = "aeiou"


@dataclass(frozen=True)
class SyntheticSpec:
    n_categories: int = 4
    docs_per_class: int = 200
    sentences_per_doc: int = 6
    keyword_positions: tuple[int, ...] = (1, 2, 3)  # 1-based, drawn uniformly
    noise_vocab_size: int = 50
    words_per_sentence: int = 5
    labels_per_doc: tuple[int, int] = (1, 1)  # inclusive range, drawn uniformly
    # Each class may have several interchangeable evidence words; a small
    # training set then covers only part of the evidence vocabulary, which
    # is what forces longer reading at tiny training fractions.
    keyword_variants: int = 1
    # When set, non-evidence sentences are drawn from a fixed pool of this
    # many sentences instead of fresh word draws, so identical sentences
    # recur across classes and cannot be memorized per document.
    noise_sentence_pool: int | None = None
    seed: int = 0

    def __post_init__(self):
        if not 2 <= self.n_categories <= len(KEYWORDS):
            raise ValueError(f"n_categories must be in [2, {len(KEYWORDS)}]")
        if self.docs_per_class < 1 or self.sentences_per_doc < 1:
            raise ValueError("docs_per_class and sentences_per_doc must be >= 1")
        if not self.keyword_positions or any(
            not 1 <= p <= self.sentences_per_doc for p in self.keyword_positions
        ):
            raise ValueError("keyword positions must be 1-based sentence indices")
        lo, hi = self.labels_per_doc
        if not 1 <= lo <= hi <= self.n_categories:
            raise ValueError("labels_per_doc range must satisfy 1 <= lo <= hi <= C")
        if hi > len(self.keyword_positions) and hi > 1:
            # Several labels need several distinct keyword sentences.
            if len(self.keyword_positions) < hi:
                raise ValueError("not enough keyword positions for the label count")
        if self.keyword_variants < 1:
            raise ValueError("keyword_variants must be >= 1")
        if self.noise_sentence_pool is not None and self.noise_sentence_pool < 1:
            raise ValueError("noise_sentence_pool must be >= 1 when given")


def _noise_vocabulary(size: int, rng: np.random.Generator) -> list[str]:
    words: list[str] = []
    seen = set(KEYWORDS)
    while len(words) < size:
        n_syllables = int(rng.integers(2, 4))
        parts = []
        for s in range(n_syllables):
            c = _CONSONANTS[int(rng.integers(len(_CONSONANTS)))]
            vowels = _FINAL_VOWELS if s == n_syllables - 1 else _VOWELS
            v = vowels[int(rng.integers(len(vowels)))]
            parts.append(c + v)
        word = "".join(parts)
        if word in seen or is_stopword(word) or porter_stem(word) != word:
            continue
        seen.add(word)
        words.append(word)
    return words


def _variant_words(keyword: str, count: int, rng: np.random.Generator) -> list[str]:
    """Interchangeable evidence words for one class: the keyword itself plus
    stem-stable derived forms."""
    if count == 1:
        return [keyword]
    variants = [keyword]
    seen = {keyword}
    while len(variants) < count:
        syllable = (
            _CONSONANTS[int(rng.integers(len(_CONSONANTS)))]
            + _FINAL_VOWELS[int(rng.integers(len(_FINAL_VOWELS)))]
        )
        word = keyword + syllable
        if word in seen or is_stopword(word) or porter_stem(word) != word:
            continue
        seen.add(word)
        variants.append(word)
    return variants


def generate(spec: SyntheticSpec) -> list[RawDocument]:
    """Deterministic synthetic corpus for the given spec.

    Mono-label documents carry exactly one evidence sentence at a position
    drawn from ``keyword_positions``; documents with several labels place
    each label's evidence word in its own distinct position. All remaining
    sentences are noise.
    """
    rng = np.random.default_rng(spec.seed)
    noise = _noise_vocabulary(spec.noise_vocab_size, rng)
    keywords = KEYWORDS[: spec.n_categories]
    for keyword in keywords:
        assert len(keyword) >= 3 and not is_stopword(keyword) and porter_stem(keyword) == keyword
    variants = [_variant_words(kw, spec.keyword_variants, rng) for kw in keywords]

    pool: list[str] | None = None
    if spec.noise_sentence_pool is not None:
        pool = [
            " ".join(noise[i] for i in rng.integers(len(noise), size=spec.words_per_sentence))
            for _ in range(spec.noise_sentence_pool)
        ]

    def noise_sentence() -> str:
        if pool is not None:
            return pool[int(rng.integers(len(pool)))]
        picks = rng.integers(len(noise), size=spec.words_per_sentence)
        return " ".join(noise[i] for i in picks)

    docs: list[RawDocument] = []
    lo, hi = spec.labels_per_doc
    for primary_class in range(spec.n_categories):
        for i in range(spec.docs_per_class):
            n_labels = int(rng.integers(lo, hi + 1))
            others = [k for k in range(spec.n_categories) if k != primary_class]
            rng.shuffle(others)
            label_set = [primary_class] + others[: n_labels - 1]
            positions = list(spec.keyword_positions)
            rng.shuffle(positions)
            chosen_positions = positions[: len(label_set)]
            sentences = [noise_sentence() for _ in range(spec.sentences_per_doc)]
            for k, pos in zip(label_set, chosen_positions):
                evidence = variants[k][int(rng.integers(len(variants[k])))]
                words = [evidence] + [
                    noise[int(rng.integers(len(noise)))]
                    for _ in range(spec.words_per_sentence - 1)
                ]
                sentences[pos - 1] = " ".join(words)
            docs.append(
                RawDocument(
                    id=f"synth-{primary_class}-{i:04d}",
                    labels=frozenset(keywords[k] for k in label_set),
                    sentences=sentences,
                )
            )
    return docs
