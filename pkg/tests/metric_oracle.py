"""Independent reference implementations of the evaluation metrics.

Deliberately naive (full DP tables, explicit dict loops) and written without
reusing any library internals except the shared tokenizer contract and the
stemmer, so the test suite can cross-check the production implementations.
"""

import math
import re

from testscribe.stemmer import stem


def toks(s):
    return re.findall(r"[^\W_]+", s.lower())


def ngram_counts(tokens, n):
    counts = {}
    for i in range(len(tokens) - n + 1):
        g = tuple(tokens[i:i + n])
        counts[g] = counts.get(g, 0) + 1
    return counts


def lcs_table(a, b):
    table = [[0] * (len(b) + 1) for _ in range(len(a) + 1)]
    for i in range(1, len(a) + 1):
        for j in range(1, len(b) + 1):
            if a[i - 1] == b[j - 1]:
                table[i][j] = table[i - 1][j - 1] + 1
            else:
                table[i][j] = max(table[i - 1][j], table[i][j - 1])
    return table[len(a)][len(b)]


def brevity(c_len, r_len):
    if c_len == 0:
        return 0.0
    return min(1.0, math.exp(1.0 - r_len / c_len))


def closest_ref_len(c_len, refs):
    best = None
    for r in refs:
        if best is None or abs(len(r) - c_len) < abs(best - c_len) or \
                (abs(len(r) - c_len) == abs(best - c_len) and len(r) < best):
            best = len(r)
    return best


def bleu_pair(cand, refs, n):
    if len(cand) < n:
        return 0.0
    cc = ngram_counts(cand, n)
    matched = 0
    for g, count in cc.items():
        best_ref = 0
        for r in refs:
            rc = ngram_counts(r, n).get(g, 0)
            if rc > best_ref:
                best_ref = rc
        matched += min(count, best_ref)
    if matched == 0:
        return 0.0
    p = matched / (len(cand) - n + 1)
    return p * brevity(len(cand), closest_ref_len(len(cand), refs))


def bleu_corpus(pairs, n):
    matched = total = 0
    c_len = r_len = 0
    for cand, refs in pairs:
        if len(cand) >= n:
            cc = ngram_counts(cand, n)
            for g, count in cc.items():
                best_ref = max(ngram_counts(r, n).get(g, 0) for r in refs)
                matched += min(count, best_ref)
            total += len(cand) - n + 1
        c_len += len(cand)
        r_len += closest_ref_len(len(cand), refs)
    if matched == 0 or total == 0:
        return 0.0
    return (matched / total) * brevity(c_len, r_len)


def rouge_pair(cand, refs):
    if not cand:
        return 0.0
    best = 0.0
    for r in refs:
        if not r:
            continue
        lcs = lcs_table(cand, r)
        if lcs == 0:
            continue
        p, rec = lcs / len(cand), lcs / len(r)
        best = max(best, 2 * p * rec / (p + rec))
    return best


def meteor_pair(cand, refs, alpha=0.9, beta=3.0, gamma=0.5):
    if not cand:
        return 0.0
    best = 0.0
    for ref in refs:
        if not ref:
            continue
        used = [False] * len(ref)
        pairs = []
        matched = [False] * len(cand)
        for stage in ("exact", "stem"):
            for ci in range(len(cand)):
                if matched[ci]:
                    continue
                for ri in range(len(ref)):
                    if used[ri]:
                        continue
                    if stage == "exact":
                        hit = cand[ci] == ref[ri]
                    else:
                        hit = stem(cand[ci]) == stem(ref[ri])
                    if hit:
                        used[ri] = True
                        matched[ci] = True
                        pairs.append((ci, ri))
                        break
        m = len(pairs)
        if m == 0:
            continue
        pairs.sort()
        chunks = 1
        for k in range(1, len(pairs)):
            if pairs[k][0] != pairs[k - 1][0] + 1 or \
                    pairs[k][1] != pairs[k - 1][1] + 1:
                chunks += 1
        p, r = m / len(cand), m / len(ref)
        fmean = p * r / (alpha * p + (1 - alpha) * r)
        penalty = gamma * (chunks / m) ** beta
        best = max(best, fmean * (1 - penalty))
    return best


def cider_scores(pairs):
    num = len(pairs)
    idf_by_n = {}
    for n in range(1, 5):
        df = {}
        for _, refs in pairs:
            grams = set()
            for r in refs:
                grams.update(ngram_counts(r, n))
            for g in grams:
                df[g] = df.get(g, 0) + 1
        idf_by_n[n] = ({g: math.log((num + 1) / (c + 1))
                        for g, c in df.items()}, math.log(num + 1))
    scores = []
    for cand, refs in pairs:
        acc = 0.0
        applicable = 0
        for n in range(1, 5):
            idf, default = idf_by_n[n]
            cc = ngram_counts(cand, n)
            sims = []
            for r in refs:
                rc = ngram_counts(r, n)
                if not cc and not rc:
                    continue
                if cc == rc:
                    sims.append(1.0)
                    continue
                if not cc or not rc:
                    sims.append(0.0)
                    continue
                cv = {g: c * idf.get(g, default) for g, c in cc.items()}
                rv = {g: c * idf.get(g, default) for g, c in rc.items()}
                dot = sum(w * rv[g] for g, w in cv.items() if g in rv)
                nc = math.sqrt(sum(w * w for w in cv.values()))
                nr = math.sqrt(sum(w * w for w in rv.values()))
                sims.append(dot / (nc * nr) if nc > 0 and nr > 0 else 0.0)
            if sims:
                acc += sum(sims) / len(sims)
                applicable += 1
        scores.append(acc / applicable if applicable else 0.0)
    return scores


def corpus_report(raw_pairs):
    """Full seven-column report for [(cand_text, [ref_texts])]."""
    pairs = [(toks(c), [toks(r) for r in refs]) for c, refs in raw_pairs]
    cider_list = cider_scores(pairs)
    return {
        "bleu1": bleu_corpus(pairs, 1),
        "bleu2": bleu_corpus(pairs, 2),
        "bleu3": bleu_corpus(pairs, 3),
        "bleu4": bleu_corpus(pairs, 4),
        "cider": sum(cider_list) / len(cider_list),
        "meteor": sum(meteor_pair(c, r) for c, r in pairs) / len(pairs),
        "rouge_l": sum(rouge_pair(c, r) for c, r in pairs) / len(pairs),
    }
