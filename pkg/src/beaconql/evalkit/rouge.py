"""ROUGE-1 with clipped unigram counts.

This is the simplest variant that behaves sensibly on short label strings;
the matching threshold used elsewhere is configuration, so other variants
can slot in later.
"""
from __future__ import annotations

import re
from collections import Counter

_TOKEN_RE = re.compile(r"[a-z0-9]+")


def tokenize(text: str) -> list[str]:
    return _TOKEN_RE.findall(text.lower())


def rouge1_prf(candidate: str, reference: str) -> tuple[float, float, float]:
    """Clipped unigram precision/recall/F1.

    Two empty sides agree perfectly; exactly one empty side scores zero.
    """
    cand = Counter(tokenize(candidate))
    ref = Counter(tokenize(reference))
    n_cand = sum(cand.values())
    n_ref = sum(ref.values())
    if n_cand == 0 and n_ref == 0:
        return 1.0, 1.0, 1.0
    if n_cand == 0 or n_ref == 0:
        return 0.0, 0.0, 0.0
    matched = sum(min(count, ref[token]) for token, count in cand.items())
    precision = matched / n_cand
    recall = matched / n_ref
    f1 = 2 * precision * recall / (precision + recall) if precision + recall > 0 else 0.0
    return precision, recall, f1
