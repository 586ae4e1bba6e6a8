"""Sequence evaluation metrics for candidate/reference intent sentences.

All four metrics share one tokenizer (lowercase, split on whitespace and
punctuation) so scores are internally comparable and all lie in [0, 1].
Corpus BLEU pools n-gram counts across items; the other corpus scores are
means of per-item scores.

METEOR here is the simplified exact+stem variant: unigram alignment with a
Porter-style stemmer, Fmean = PR/(0.9P + 0.1R), and a fragmentation penalty
of 0.5*(chunks/matches)^3. CIDEr uses smoothed IDF log((N+1)/(df+1)) over the
reference corpus and reports plain cosine means in [0, 1] (no 10x scaling).
"""

from __future__ import annotations

import logging
import math
import re
from collections import Counter
from dataclasses import dataclass, field

from . import kernels
from .errors import EmptyCorpus
from .stemmer import stem

log = logging.getLogger(__name__)

METEOR_ALPHA = 0.9
METEOR_BETA = 3.0
METEOR_GAMMA = 0.5

_TOKEN_RE = re.compile(r"[^\W_]+", re.UNICODE)


def tokenize(text: str) -> list[str]:
    """Lowercase tokens; punctuation and whitespace are separators."""
    return _TOKEN_RE.findall(text.lower())


def _ngrams(tokens: list[str], n: int) -> Counter:
    return Counter(tuple(tokens[i:i + n]) for i in range(len(tokens) - n + 1))


# --------------------------------------------------------------------------
# BLEU


def _closest_ref_length(c: int, references: list[list[str]]) -> int:
    return min((len(r) for r in references),
               key=lambda rl: (abs(rl - c), rl))


def _brevity_penalty(c: int, r: int) -> float:
    if c == 0:
        return 0.0
    return min(1.0, math.exp(1.0 - r / c))


def bleu_n(candidate: list[str], references: list[list[str]],
           n: int) -> float:
    """Clipped n-gram precision at order n times the brevity penalty."""
    if not 1 <= n <= 4:
        raise ValueError("n must be in 1..4")
    if not references:
        raise ValueError("at least one reference is required")
    if not candidate:
        log.info("empty candidate scored as 0")
        return 0.0
    if len(candidate) < n:
        return 0.0
    matched, total = _clipped_counts(candidate, references, n)
    if matched == 0:
        return 0.0
    r = _closest_ref_length(len(candidate), references)
    return (matched / total) * _brevity_penalty(len(candidate), r)


def _clipped_counts(candidate, references, n) -> tuple[int, int]:
    cand_counts = _ngrams(candidate, n)
    max_ref: Counter = Counter()
    for ref in references:
        for gram, count in _ngrams(ref, n).items():
            if count > max_ref[gram]:
                max_ref[gram] = count
    matched = sum(min(count, max_ref[gram])
                  for gram, count in cand_counts.items())
    return matched, max(1, len(candidate) - n + 1)


# --------------------------------------------------------------------------
# ROUGE-L


def _lcs(a: list[str], b: list[str]) -> int:
    vocab: dict[str, int] = {}
    ai = [vocab.setdefault(t, len(vocab)) for t in a]
    bi = [vocab.setdefault(t, len(vocab)) for t in b]
    return kernels.lcs_length(ai, bi)


def rouge_l(candidate: list[str], references: list[list[str]]) -> float:
    """LCS-based F-measure (beta = 1), maximized over references."""
    if not references:
        raise ValueError("at least one reference is required")
    if not candidate:
        return 0.0
    best = 0.0
    for ref in references:
        if not ref:
            continue
        lcs = _lcs(candidate, ref)
        if lcs == 0:
            continue
        p = lcs / len(candidate)
        r = lcs / len(ref)
        best = max(best, 2 * p * r / (p + r))
    return best


# --------------------------------------------------------------------------
# METEOR


def _align(candidate: list[str], reference: list[str]) -> list[tuple[int, int]]:
    """Greedy left-to-right unigram alignment: exact matches first, then
    stem matches over the leftovers. Each token matches at most once."""
    pairs: list[tuple[int, int]] = []
    used_ref = [False] * len(reference)
    matched_cand = [False] * len(candidate)
    for ci, tok in enumerate(candidate):
        for ri, rtok in enumerate(reference):
            if not used_ref[ri] and rtok == tok:
                pairs.append((ci, ri))
                used_ref[ri] = True
                matched_cand[ci] = True
                break
    cand_stems = [stem(t) for t in candidate]
    ref_stems = [stem(t) for t in reference]
    for ci, stok in enumerate(cand_stems):
        if matched_cand[ci]:
            continue
        for ri, rtok in enumerate(ref_stems):
            if not used_ref[ri] and rtok == stok:
                pairs.append((ci, ri))
                used_ref[ri] = True
                matched_cand[ci] = True
                break
    pairs.sort()
    return pairs


def _count_chunks(pairs: list[tuple[int, int]]) -> int:
    chunks = 0
    prev = None
    for ci, ri in pairs:
        if prev is None or ci != prev[0] + 1 or ri != prev[1] + 1:
            chunks += 1
        prev = (ci, ri)
    return chunks


def meteor(candidate: list[str], references: list[list[str]]) -> float:
    """Simplified METEOR (exact + stem matching), maximized over references."""
    if not references:
        raise ValueError("at least one reference is required")
    if not candidate:
        return 0.0
    best = 0.0
    for ref in references:
        if not ref:
            continue
        pairs = _align(candidate, ref)
        m = len(pairs)
        if m == 0:
            continue
        p = m / len(candidate)
        r = m / len(ref)
        fmean = p * r / (METEOR_ALPHA * p + (1 - METEOR_ALPHA) * r)
        chunks = _count_chunks(pairs)
        penalty = METEOR_GAMMA * (chunks / m) ** METEOR_BETA
        best = max(best, fmean * (1.0 - penalty))
    return best


# --------------------------------------------------------------------------
# CIDEr


def _reference_idf(references_per_item: list[list[list[str]]],
                   n: int) -> dict:
    num_items = len(references_per_item)
    df: Counter = Counter()
    for refs in references_per_item:
        grams = set()
        for ref in refs:
            grams.update(_ngrams(ref, n))
        for gram in grams:
            df[gram] += 1
    return {gram: math.log((num_items + 1) / (count + 1))
            for gram, count in df.items()}, num_items


def _tfidf_cosine(cand_counts: Counter, ref_counts: Counter,
                  idf: dict, default_idf: float) -> float:
    def vec(counts):
        return {g: c * idf.get(g, default_idf) for g, c in counts.items()}

    cv, rv = vec(cand_counts), vec(ref_counts)
    dot = sum(w * rv[g] for g, w in cv.items() if g in rv)
    nc = math.sqrt(sum(w * w for w in cv.values()))
    nr = math.sqrt(sum(w * w for w in rv.values()))
    if nc == 0.0 or nr == 0.0:
        return 0.0
    return dot / (nc * nr)


def cider_items(candidates: list[list[str]],
                references_per_item: list[list[list[str]]]) -> list[float]:
    """Per-item CIDEr scores over a corpus (IDF from the references).

    The item score averages cosine similarities over the n-gram orders
    (1..4) that apply to the pair; an order where neither side has any
    n-grams carries no signal and is skipped.
    """
    if not candidates or len(candidates) != len(references_per_item):
        raise ValueError("candidates and references must align, non-empty")
    scores = []
    per_n_idf = {}
    for n in range(1, 5):
        idf, num_items = _reference_idf(references_per_item, n)
        per_n_idf[n] = (idf, math.log(num_items + 1))
    for cand, refs in zip(candidates, references_per_item):
        total = 0.0
        applicable = 0
        for n in range(1, 5):
            idf, default_idf = per_n_idf[n]
            cand_counts = _ngrams(cand, n)
            sims = []
            for ref in refs:
                ref_counts = _ngrams(ref, n)
                if not cand_counts and not ref_counts:
                    continue  # order n says nothing about this pair
                if cand_counts == ref_counts:
                    # identical multisets: cosine is 1, kept exact here
                    sims.append(1.0)
                elif not cand_counts or not ref_counts:
                    sims.append(0.0)
                else:
                    sims.append(_tfidf_cosine(cand_counts, ref_counts, idf,
                                              default_idf))
            if sims:
                total += sum(sims) / len(sims)
                applicable += 1
        scores.append(total / applicable if applicable else 0.0)
    return scores


def cider(candidates: list[list[str]],
          references_per_item: list[list[list[str]]]) -> float:
    scores = cider_items(candidates, references_per_item)
    return sum(scores) / len(scores)


# --------------------------------------------------------------------------
# corpus evaluation


@dataclass(frozen=True)
class PairScores:
    bleu: tuple[float, float, float, float]
    cider: float
    meteor: float
    rouge_l: float


@dataclass(frozen=True)
class MetricReport:
    bleu1: float
    bleu2: float
    bleu3: float
    bleu4: float
    cider: float
    meteor: float
    rouge_l: float
    per_item: tuple[PairScores, ...] = field(default=())

    def as_dict(self) -> dict[str, float]:
        return {"bleu1": self.bleu1, "bleu2": self.bleu2, "bleu3": self.bleu3,
                "bleu4": self.bleu4, "cider": self.cider,
                "meteor": self.meteor, "rouge_l": self.rouge_l}


def evaluate_corpus(pairs: list[tuple[str, list[str]]]) -> MetricReport:
    """Score a corpus of (candidate text, reference texts) pairs."""
    if not pairs:
        raise EmptyCorpus("nothing to evaluate")
    cands = [tokenize(c) for c, _ in pairs]
    refs = [[tokenize(r) for r in rs] for _, rs in pairs]
    if any(not rs for rs in refs):
        raise ValueError("every item needs at least one reference")

    cider_scores = cider_items(cands, refs)
    per_item = []
    for cand, rs, cid in zip(cands, refs, cider_scores):
        per_item.append(PairScores(
            tuple(bleu_n(cand, rs, n) for n in range(1, 5)),
            cid, meteor(cand, rs), rouge_l(cand, rs)))

    corpus_bleu = []
    for n in range(1, 5):
        matched = total = 0
        c_len = r_len = 0
        for cand, rs in zip(cands, refs):
            if len(cand) >= n:
                m, t = _clipped_counts(cand, rs, n)
                matched += m
                total += t
            c_len += len(cand)
            r_len += _closest_ref_length(len(cand), rs)
        if matched == 0 or total == 0:
            corpus_bleu.append(0.0)
        else:
            corpus_bleu.append((matched / total)
                               * _brevity_penalty(c_len, r_len))

    def mean(values):
        return sum(values) / len(values)

    return MetricReport(
        corpus_bleu[0], corpus_bleu[1], corpus_bleu[2], corpus_bleu[3],
        mean(cider_scores),
        mean([s.meteor for s in per_item]),
        mean([s.rouge_l for s in per_item]),
        tuple(per_item))
