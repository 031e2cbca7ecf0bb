"""Straight-line reference implementations used only by the tests.

Nothing here imports the package's search or scoring code; each function
recomputes its quantity from raw tables with plain Python loops.
"""

import itertools
import math
from collections import Counter

BOS, EOS, UNK = 0, 1, 2


def log_normalize_rows(logits):
    """Row-wise log-softmax of a list-of-lists, computed with math only."""
    out = []
    for row in logits:
        m = max(row)
        z = math.log(sum(math.exp(x - m) for x in row))
        out.append([x - m - z for x in row])
    return out


def softmax(x):
    m = max(x)
    e = [math.exp(v - m) for v in x]
    s = sum(e)
    return [v / s for v in e]


# -- bigram (Markov) tables -------------------------------------------------


def bigram_sentence_logp(table, sentence):
    """log p(sentence, EOS) under a left-to-right bigram table table[prev][tok]."""
    prev = BOS
    total = 0.0
    for tok in list(sentence) + [EOS]:
        total += table[prev][tok]
        prev = tok
    return total


def bigram_backward_logp(table, sentence):
    """Same quantity for a table that reads sentences right to left."""
    return bigram_sentence_logp(table, list(reversed(sentence)))


def brute_force_fills(table, prefix, suffix, width, candidates):
    """Every completion with its forward joint, best first (ties: smaller ids)."""
    scored = []
    for fill in itertools.product(candidates, repeat=width):
        scored.append((bigram_sentence_logp(table, list(prefix) + list(fill) + list(suffix)), fill))
    scored.sort(key=lambda t: (-t[0], t[1]))
    return scored


def bidir_step_topk(tf, tb, prefix, suffix, live_read, fixed_ids, width, k, candidates, beam, mirrored=False):
    """Brute-force top-``beam`` of the bidirectional objective at forward step ``k``.

    ``tf`` reads left to right and ``tb`` right to left (both bigram tables).
    ``live_read`` are the live forward beams (each ``k`` tokens), ``fixed_ids``
    the complete opposite beams in sentence order. Returns a list of
    ``(score, live_index, token)`` sorted by (-score, new sentence ids).

    A backward step is the forward step of the mirrored problem (reversed
    context, swapped tables); ``mirrored`` then reverses the ids used for the
    tie-break so it still compares sentence order.

    Terms are added as ((live + own) + opposite) + fixed, each running sum in
    its beam's reading order, so exact ties stay exact.
    """
    def fwd_prev(beam_ids, pos):
        if pos > 0:
            return beam_ids[pos - 1]
        return prefix[-1] if prefix else BOS

    def bwd_next(fixed, pos):
        if pos < width - 1:
            return fixed[pos + 1]
        return suffix[0] if suffix else BOS

    best = {}
    for b, read in enumerate(live_read):
        live_sum = sum(tf[fwd_prev(read, i)][read[i]] for i in range(k))
        for y in candidates:
            own = tf[fwd_prev(read, k)][y]
            for fixed in fixed_ids:
                opp = tb[bwd_next(fixed, k)][y]
                # The fixed beam's own reading order runs from the far end inward.
                fixed_sum = sum(tb[bwd_next(fixed, i)][fixed[i]] for i in range(width - 1, k, -1))
                score = ((live_sum + own) + opp) + fixed_sum
                key = (b, y)
                if key not in best or score > best[key]:
                    best[key] = score
    ranked = sorted(
        ((s, b, y) for (b, y), s in best.items()),
        key=lambda t: (-t[0], (tuple(live_read[t[1]]) + (t[2],))[:: -1 if mirrored else 1]),
    )
    return ranked[:beam]


# -- n-gram counting ------------------------------------------------------------


def hand_ngram_counts(sentences, n):
    """{context tuple: Counter(next token)} with BOS padding and EOS at the end."""
    table = {}
    for s in sentences:
        padded = [BOS] * (n - 1) + list(s) + [EOS]
        for i in range(n - 1, len(padded)):
            ctx = tuple(padded[i - n + 1 : i])
            table.setdefault(ctx, Counter())[padded[i]] += 1
    return table


# -- metrics -------------------------------------------------------------------------


def grams(seq, n):
    return [tuple(seq[i : i + n]) for i in range(len(seq) - n + 1)]


def tfidf_cider(candidate, references, corpus_sentences):
    """CIDEr with idf = log((N + 1) / df), one document per corpus sentence."""
    N = len(corpus_sentences)
    total = 0.0
    for n in range(1, 5):
        df = {}
        for doc in corpus_sentences:
            for g in set(grams(doc, n)):
                df[g] = df.get(g, 0) + 1

        def vec(seq):
            v = {}
            for g in grams(seq, n):
                v[g] = v.get(g, 0) + 1
            return {g: c * math.log((N + 1) / max(df.get(g, 0), 1)) for g, c in v.items()}

        cv = vec(candidate)
        sims = []
        for ref in references:
            rv = vec(ref)
            dot = 0.0
            for g in cv:
                if g in rv:
                    dot += cv[g] * rv[g]
            na = math.sqrt(sum(x * x for x in cv.values()))
            nb = math.sqrt(sum(x * x for x in rv.values()))
            sims.append(0.0 if na == 0 or nb == 0 else dot / (na * nb))
        total += sum(sims) / len(sims)
    return 10.0 * total / 4


def sentence_bleu(candidate, reference, max_n):
    """Single-reference BLEU, written out longhand."""
    if not candidate:
        return 0.0
    logs = []
    for n in range(1, max_n + 1):
        cand = grams(candidate, n)
        if not cand:
            continue
        ref_counts = {}
        for g in grams(reference, n):
            ref_counts[g] = ref_counts.get(g, 0) + 1
        cand_counts = {}
        for g in cand:
            cand_counts[g] = cand_counts.get(g, 0) + 1
        hits = sum(min(c, ref_counts.get(g, 0)) for g, c in cand_counts.items())
        if hits == 0:
            return 0.0
        logs.append(math.log(hits / len(cand)))
    bp = 1.0 if len(candidate) > len(reference) else math.exp(1 - len(reference) / len(candidate))
    return bp * math.exp(sum(logs) / len(logs))
