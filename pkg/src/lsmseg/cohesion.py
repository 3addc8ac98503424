"""Lexical links between sentences and per-sentence link sets.

Two sentences are linked once for every repetition of a lexical item
they share.  A shared item occurring ``a`` times in one sentence and
``b`` times in the other contributes ``min(a, b)`` links.
"""

from __future__ import annotations

import csv
import io
from collections import Counter
from dataclasses import dataclass

import numpy as np

LINK_CONVENTION = "per-type-min-multiplicity"


def count_links(a, b):
    """Number of links between two distinct sentences."""
    if a.index == b.index:
        raise ValueError(f"cannot link sentence {a.index} with itself")
    shared = Counter(a.lexical_items()) & Counter(b.lexical_items())
    return sum(shared.values())


class LinkMatrix:
    """Symmetric sentence-pair link counts, 1-based, diagonal undefined."""

    def __init__(self, counts):
        counts = np.asarray(counts, dtype=np.int64)
        if counts.ndim != 2 or counts.shape[0] != counts.shape[1]:
            raise ValueError("link counts must be a square matrix")
        if (counts < 0).any():
            raise ValueError("link counts must be non-negative")
        if not np.array_equal(counts, counts.T):
            raise ValueError("link counts must be symmetric")
        counts = counts.copy()
        np.fill_diagonal(counts, 0)
        counts.setflags(write=False)
        self._counts = counts

    @property
    def n(self):
        return self._counts.shape[0]

    def count(self, i, j):
        if i == j:
            raise ValueError(f"link count of sentence {i} with itself is undefined")
        if not (1 <= i <= self.n and 1 <= j <= self.n):
            raise IndexError(f"sentence index out of range 1..{self.n}: ({i}, {j})")
        return int(self._counts[i - 1, j - 1])

    __call__ = count

    def as_array(self):
        """Read-only ``n x n`` view; the diagonal is zero."""
        return self._counts

    def pairs(self):
        """Yield ``(i, j, count)`` for every linked pair with ``i < j``."""
        rows, cols = np.nonzero(np.triu(self._counts, k=1))
        for i, j in zip(rows.tolist(), cols.tolist()):
            yield i + 1, j + 1, int(self._counts[i, j])

    def total(self):
        return int(np.triu(self._counts, k=1).sum())

    def scaled(self, k):
        return LinkMatrix(self._counts * int(k))

    def to_csv(self):
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(["i", "j", "count"])
        writer.writerows(self.pairs())
        return buf.getvalue()

    def __eq__(self, other):
        if not isinstance(other, LinkMatrix):
            return NotImplemented
        return np.array_equal(self._counts, other._counts)

    def __repr__(self):
        return f"LinkMatrix(n={self.n}, links={self.total()})"


def build_link_matrix(doc):
    """Link counts for all sentence pairs of ``doc``."""
    vocab = {}
    rows = []
    for s in doc.sentences:
        c = Counter(s.lexical_items())
        rows.append(c)
        for item in c:
            vocab.setdefault(item, len(vocab))
    n = len(rows)
    occ = np.zeros((n, max(len(vocab), 1)), dtype=np.int64)
    for r, c in enumerate(rows):
        for item, k in c.items():
            occ[r, vocab[item]] = k
    counts = np.zeros((n, n), dtype=np.int64)
    for i in range(n - 1):
        counts[i, i + 1:] = np.minimum(occ[i], occ[i + 1:]).sum(axis=1)
    counts = counts + counts.T
    return LinkMatrix(counts)


@dataclass(frozen=True)
class LinkSet:
    """Partner sentences of ``owner``, one entry per link, sorted."""

    owner: int
    entries: tuple

    def __len__(self):
        return len(self.entries)

    def __bool__(self):
        return bool(self.entries)

    def multiplicity(self, j):
        return self.entries.count(j)


def build_link_sets(matrix, level=1):
    """Link set of every sentence at ``level``.

    A partner enters the set only when its pairwise count reaches
    ``level``; it then appears once per link.
    """
    if level < 1:
        raise ValueError("link level must be >= 1")
    counts = matrix.as_array()
    sets = []
    for i in range(matrix.n):
        entries = []
        for j in np.flatnonzero(counts[i] >= level).tolist():
            if j != i:
                entries.extend([j + 1] * int(counts[i, j]))
        sets.append(LinkSet(i + 1, tuple(entries)))
    return sets
