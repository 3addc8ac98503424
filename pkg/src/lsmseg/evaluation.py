"""Scoring segmentations against author section boundaries.

Recall is matched boundaries over reference boundaries, precision is
matched boundaries over inserted boundaries.  A section starting at
sentence 1 is never a reference boundary.
"""

from __future__ import annotations

import csv
import io
import math
from collections import defaultdict
from dataclasses import asdict, dataclass, field

import numpy as np
from scipy.optimize import linear_sum_assignment

PRECISION_READING = "matches / inserted"
MEASURES = ("recall", "precision")


@dataclass(frozen=True)
class ReferenceSegments:
    positions: tuple
    n: int | None = None

    def __post_init__(self):
        pos = tuple(sorted(set(int(p) for p in self.positions)))
        if pos and pos[0] < 2:
            raise ValueError("reference boundaries must be >= 2")
        if pos and self.n is not None and pos[-1] > self.n:
            raise ValueError(f"reference boundary {pos[-1]} beyond sentence {self.n}")
        object.__setattr__(self, "positions", pos)

    def __len__(self):
        return len(self.positions)


def extract_reference(doc):
    """Section starts of ``doc`` except a section opening the text."""
    return ReferenceSegments(tuple(p for p in doc.heading_positions if p != 1), doc.n)


@dataclass(frozen=True)
class EvalReport:
    doc_id: str
    method: str
    link_level: int | None
    matches: tuple
    recall: float | None
    precision: float | None
    inserted_count: int
    reference_count: int
    window: int = 0
    genre: str = "default"

    def to_dict(self):
        d = asdict(self)
        d["matches"] = list(self.matches)
        return d


def match_boundaries(inserted, reference, window=0):
    """Pair inserted boundaries with reference positions.

    Each reference position is used at most once and a pair is allowed
    only when the positions differ by at most ``window``.  Returns the
    ``(inserted, reference)`` pairs of a maximum matching; among maximum
    matchings the one with the smallest total distance is chosen.
    """
    if window < 0:
        raise ValueError("window must be >= 0")
    inserted = sorted(set(inserted))
    reference = sorted(set(reference))
    if window == 0:
        common = sorted(set(inserted) & set(reference))
        return [(p, p) for p in common]
    if not inserted or not reference:
        return []
    a = np.asarray(inserted)[:, None]
    b = np.asarray(reference)[None, :]
    dist = np.abs(a - b)
    feasible = dist <= window
    # Infeasible pairs cost more than any complete set of feasible ones,
    # so the assignment maximises the number of matches first.
    big = (window + 1) * min(len(inserted), len(reference)) + 1
    cost = np.where(feasible, dist, big)
    rows, cols = linear_sum_assignment(cost)
    return sorted((inserted[r], reference[c]) for r, c in zip(rows, cols) if feasible[r, c])


def score(seg, ref, window=0, genre=None):
    """Compare ``seg`` to reference boundaries ``ref``.

    ``ref`` may be a :class:`ReferenceSegments` or any iterable of
    positions.  Recall is ``None`` without reference boundaries and
    precision is ``None`` without inserted boundaries.
    """
    positions = ref.positions if isinstance(ref, ReferenceSegments) else tuple(sorted(set(ref)))
    if isinstance(ref, ReferenceSegments) and ref.n is not None and ref.n != seg.n:
        raise ValueError(f"segmentation covers {seg.n} sentences, reference {ref.n}")
    pairs = match_boundaries(seg.boundaries, positions, window)
    matched = tuple(sorted(r for _, r in pairs))
    n_ins, n_ref = len(seg.boundaries), len(positions)
    return EvalReport(
        doc_id=seg.doc_id,
        method=seg.method,
        link_level=seg.link_level,
        matches=matched,
        recall=len(matched) / n_ref if n_ref else None,
        precision=len(matched) / n_ins if n_ins else None,
        inserted_count=n_ins,
        reference_count=n_ref,
        window=window,
        genre=genre if genre is not None else "default",
    )


@dataclass(frozen=True)
class MeanScore:
    """Per-document scores averaged over random trials."""

    doc_id: str
    method: str
    link_level: int | None
    recall: float | None
    precision: float | None
    trials: int
    genre: str = "default"

    @classmethod
    def from_trials(cls, doc_id, scores, link_level=None, genre="default", method="random"):
        recalls = [r for r, _ in scores if r is not None]
        precisions = [p for _, p in scores if p is not None]
        return cls(
            doc_id, method, link_level,
            float(np.mean(recalls)) if recalls else None,
            float(np.mean(precisions)) if precisions else None,
            len(scores), genre,
        )

    def to_dict(self):
        return asdict(self)


def significance(lsm_scores, random_scores, seed=0, permutations=10_000):
    """One-sided permutation p-value for ``mean(lsm) > mean(random)``.

    Group labels are shuffled ``permutations`` times; the p-value counts
    the observed arrangement, so it lies in ``(0, 1]``.
    """
    x = np.asarray([s for s in lsm_scores if s is not None], dtype=float)
    y = np.asarray([s for s in random_scores if s is not None], dtype=float)
    if x.size == 0 or y.size == 0:
        raise ValueError("both score lists must be non-empty")
    if permutations < 1:
        raise ValueError("permutations must be >= 1")
    pooled = np.concatenate([x, y])
    observed = x.mean() - y.mean()
    rng = np.random.default_rng(seed)
    hits = 0
    tol = 1e-12 * max(1.0, float(np.abs(pooled).max()))
    # chunked to bound memory on large pools
    chunk = max(1, min(permutations, 2_000_000 // pooled.size))
    done = 0
    while done < permutations:
        m = min(chunk, permutations - done)
        perm = rng.permuted(np.broadcast_to(pooled, (m, pooled.size)), axis=1)
        stat = perm[:, : x.size].mean(axis=1) - perm[:, x.size:].mean(axis=1)
        hits += int(np.count_nonzero(stat >= observed - tol))
        done += m
    return (hits + 1) / (permutations + 1)


def _mean(values):
    values = [v for v in values if v is not None]
    return float(np.mean(values)) if values else None


@dataclass
class CorpusSummary:
    """Mean recall/precision per genre, method and link level.

    ``cells`` maps ``(genre, method, level)`` to ``{"recall", "precision",
    "n_recall", "n_precision"}``; ``by_genre`` and ``overall`` average the
    per-level means over levels.  ``p_values`` maps ``(genre, level,
    measure)`` to a permutation p-value, with ``"all"`` for pooled keys.
    """

    cells: dict = field(default_factory=dict)
    by_genre: dict = field(default_factory=dict)
    overall: dict = field(default_factory=dict)
    p_values: dict = field(default_factory=dict)
    metadata: dict = field(default_factory=dict)

    def is_empty(self):
        return not self.cells

    def to_dict(self):
        return {
            "cells": [
                {"genre": g, "method": m, "link_level": lvl, **v}
                for (g, m, lvl), v in sorted(self.cells.items(), key=_cell_key)
            ],
            "by_genre": [
                {"genre": g, "method": m, **v} for (g, m), v in sorted(self.by_genre.items())
            ],
            "overall": [{"method": m, **v} for m, v in sorted(self.overall.items())],
            "p_values": [
                {"genre": g, "link_level": lvl, "measure": meas, "p": p}
                for (g, lvl, meas), p in sorted(self.p_values.items(), key=_cell_key)
            ],
            "metadata": self.metadata,
        }

    def table1_rows(self):
        """``(measure, method, genre, value)`` rows, genre ``"all"`` last."""
        rows = []
        genres = sorted({g for g, _ in self.by_genre})
        methods = sorted({m for _, m in self.by_genre}, key=_method_order)
        for measure in MEASURES:
            for method in methods:
                for g in genres:
                    v = self.by_genre.get((g, method), {}).get(measure)
                    rows.append((measure, method, g, v))
                if method in self.overall:
                    rows.append((measure, method, "all", self.overall[method].get(measure)))
        return rows

    def table1_csv(self):
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["measure", "method", "genre", "value"])
        for measure, method, genre, v in self.table1_rows():
            w.writerow([measure, method, genre, "" if v is None else f"{v:.6f}"])
        return buf.getvalue()


def _method_order(m):
    order = {"lsm": 0, "random": 1, "combined": 2, "external": 3}
    return (order.get(m, 9), m)


def _cell_key(item):
    key = item[0]
    return tuple((1, "") if k is None else (0, k) if isinstance(k, str) else (0, f"{k:08d}")
                 for k in key)


def aggregate(reports, levels=None):
    """Unweighted per-document means; not-applicable scores are skipped."""
    reports = list(reports)
    summary = CorpusSummary()
    grid = defaultdict(lambda: {m: [] for m in MEASURES})
    for r in reports:
        if levels is not None and r.link_level not in levels:
            continue
        cell = grid[(r.genre, r.method, r.link_level)]
        cell["recall"].append(r.recall)
        cell["precision"].append(r.precision)
    for key, vals in grid.items():
        summary.cells[key] = {
            "recall": _mean(vals["recall"]),
            "precision": _mean(vals["precision"]),
            "n_recall": sum(v is not None for v in vals["recall"]),
            "n_precision": sum(v is not None for v in vals["precision"]),
        }
    per_genre = defaultdict(lambda: {m: [] for m in MEASURES})
    per_method = defaultdict(lambda: {m: [] for m in MEASURES})
    pooled = defaultdict(lambda: {m: [] for m in MEASURES})
    for r in reports:
        if levels is not None and r.link_level not in levels:
            continue
        for m in MEASURES:
            pooled[(r.method, r.link_level)][m].append(getattr(r, m))
    for (g, method, lvl), v in summary.cells.items():
        for m in MEASURES:
            per_genre[(g, method)][m].append(v[m])
    for (method, lvl), v in pooled.items():
        for m in MEASURES:
            per_method[method][m].append(_mean(v[m]))
    summary.by_genre = {k: {m: _mean(v[m]) for m in MEASURES} for k, v in per_genre.items()}
    summary.overall = {k: {m: _mean(v[m]) for m in MEASURES} for k, v in per_method.items()}
    return summary


def add_significance(summary, reports, seed=0, permutations=10_000,
                     treatment="lsm", control="random"):
    """Fill ``summary.p_values`` comparing ``treatment`` against ``control``.

    Tests run per (genre, level), per genre pooled over levels, per level
    pooled over genres, and once over everything.
    """
    groups = defaultdict(lambda: {treatment: defaultdict(list), control: defaultdict(list)})
    for r in reports:
        if r.method not in (treatment, control):
            continue
        for g in (r.genre, "all"):
            for lvl in (r.link_level, "all"):
                for m in MEASURES:
                    groups[(g, lvl, m)][r.method][m].append(getattr(r, m))
    for (g, lvl, m), by_method in groups.items():
        a = [v for v in by_method[treatment][m] if v is not None]
        b = [v for v in by_method[control][m] if v is not None]
        if a and b:
            summary.p_values[(g, lvl, m)] = significance(a, b, seed, permutations)
    summary.metadata.update({
        "significance_test": "one-sided label permutation, difference of means",
        "permutations": permutations,
        "seed": seed,
        "treatment": treatment,
        "control": control,
    })
    return summary


def reports_csv(reports):
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["doc_id", "genre", "method", "link_level", "recall", "precision",
                "inserted", "reference", "matches"])
    for r in reports:
        w.writerow([
            r.doc_id, r.genre, r.method, "" if r.link_level is None else r.link_level,
            _fmt(r.recall), _fmt(r.precision),
            getattr(r, "inserted_count", ""), getattr(r, "reference_count", ""),
            " ".join(map(str, getattr(r, "matches", ()))),
        ])
    return buf.getvalue()


def _fmt(v):
    if v is None or (isinstance(v, float) and math.isnan(v)):
        return ""
    return f"{v:.6f}"
