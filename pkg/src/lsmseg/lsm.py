"""Link Set Median segmentation.

Each sentence's link set is summarised by its median.  A boundary goes
before sentence ``i`` when the jump ``|median(i) - median(i-1)|`` is
strictly larger than the text's mean jump.  All arithmetic is exact
(:class:`fractions.Fraction`) so threshold ties are never decided by
rounding.
"""

from __future__ import annotations

import json
import warnings
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path

from .cohesion import LINK_CONVENTION, build_link_matrix, build_link_sets

EMPTY_SET_POLICIES = ("carry", "zero", "exclude")
METHODS = ("lsm", "random", "combined", "external")


class DegenerateTextWarning(UserWarning):
    """No median difference is defined, so no boundary can be placed."""


def median(entries):
    """Exact median of a non-empty multiset of integers."""
    xs = sorted(entries)
    if not xs:
        raise ValueError("median of an empty link set is undefined")
    mid = len(xs) // 2
    if len(xs) % 2:
        return Fraction(xs[mid])
    return Fraction(xs[mid - 1] + xs[mid], 2)


@dataclass(frozen=True)
class MedianSeries:
    """Per-sentence link-set medians; ``None`` marks an empty link set."""

    values: tuple

    @classmethod
    def from_link_sets(cls, link_sets):
        return cls(tuple(median(ls.entries) if ls else None for ls in link_sets))

    def __len__(self):
        return len(self.values)


def effective_medians(series, empty="carry"):
    values = list(series.values if isinstance(series, MedianSeries) else series)
    if empty == "carry":
        last = None
        for i, v in enumerate(values):
            if v is None:
                values[i] = last
            else:
                last = v
    elif empty == "zero":
        values = [Fraction(0) if v is None else v for v in values]
    elif empty != "exclude":
        raise ValueError(f"unknown empty link set policy {empty!r}; use one of {EMPTY_SET_POLICIES}")
    return values


def median_differences(series, empty="carry"):
    """Absolute median jumps for sentences ``2..n`` (list of length n-1).

    ``empty`` decides what a sentence without links contributes:

    ``carry``
        it inherits the previous effective median (leading empties stay
        undefined);
    ``zero``
        its median counts as 0;
    ``exclude``
        it gets no difference, and the next linked sentence is compared
        with the last linked sentence before it.
    """
    values = effective_medians(series, empty)
    diffs = []
    prev = values[0] if values else None
    for v in values[1:]:
        if v is None or prev is None:
            diffs.append(None)
        else:
            diffs.append(abs(v - prev))
        if v is not None or empty != "exclude":
            prev = v
    return diffs


def mean_median_difference(diffs):
    defined = [d for d in diffs if d is not None]
    if not defined:
        raise ValueError("no defined median difference")
    return Fraction(sum(defined), len(defined))


@dataclass(frozen=True)
class Segmentation:
    """Boundary positions for one document.

    A boundary ``i`` means sentence ``i`` opens a new segment, so valid
    positions are ``2..n``.
    """

    doc_id: str
    n: int
    boundaries: tuple
    method: str = "lsm"
    link_level: int | None = None
    params: dict = field(default_factory=dict, compare=False)
    flags: tuple = field(default=(), compare=False)

    def __post_init__(self):
        b = tuple(sorted(set(int(x) for x in self.boundaries)))
        if b and (b[0] < 2 or b[-1] > self.n):
            raise ValueError(f"boundaries must lie in 2..{self.n}, got {list(b)}")
        if self.method not in METHODS:
            raise ValueError(f"unknown segmentation method {self.method!r}")
        object.__setattr__(self, "boundaries", b)

    def segments(self):
        """``(first, last)`` sentence index of every induced segment."""
        starts = (1,) + self.boundaries
        ends = tuple(s - 1 for s in self.boundaries) + (self.n,)
        return list(zip(starts, ends))

    def to_dict(self):
        d = {
            "doc_id": self.doc_id,
            "method": self.method,
            "link_level": self.link_level,
            "n_sentences": self.n,
            "boundaries": list(self.boundaries),
            "params": self.params,
        }
        if self.flags:
            d["flags"] = list(self.flags)
        return d

    @classmethod
    def from_dict(cls, d):
        try:
            return cls(
                doc_id=str(d["doc_id"]),
                n=int(d["n_sentences"]),
                boundaries=tuple(d["boundaries"]),
                method=d.get("method", "external"),
                link_level=d.get("link_level"),
                params=dict(d.get("params") or {}),
                flags=tuple(d.get("flags") or ()),
            )
        except KeyError as exc:
            raise ValueError(f"segmentation JSON lacks field {exc.args[0]!r}") from None


def dump_segmentation(seg, path):
    Path(path).write_text(json.dumps(seg.to_dict(), indent=2, sort_keys=True) + "\n", "utf-8")


def load_segmentation(path):
    with open(path, encoding="utf-8") as fh:
        return Segmentation.from_dict(json.load(fh))


@dataclass
class LSMTrace:
    """Intermediate values of one LSM run, kept for inspection and plots."""

    link_sets: list
    medians: MedianSeries
    diffs: list
    mean_diff: Fraction | None
    boundaries: tuple


def trace_link_sets(link_sets, empty="carry"):
    medians = MedianSeries.from_link_sets(link_sets)
    diffs = median_differences(medians, empty)
    try:
        mean = mean_median_difference(diffs)
    except ValueError:
        return LSMTrace(link_sets, medians, diffs, None, ())
    boundaries = tuple(i for i, d in enumerate(diffs, 2) if d is not None and d > mean)
    return LSMTrace(link_sets, medians, diffs, mean, boundaries)


def trace(doc, level=1, empty="carry", matrix=None):
    if matrix is None:
        matrix = build_link_matrix(doc)
    return trace_link_sets(build_link_sets(matrix, level), empty)


def segment(doc, level=1, empty="carry", matrix=None):
    """LSM segmentation of ``doc`` at link ``level``.

    A text without any defined median difference yields no boundaries and
    the ``degenerate`` flag, and emits :class:`DegenerateTextWarning`.
    """
    t = trace(doc, level, empty, matrix)
    flags = ()
    if t.mean_diff is None:
        flags = ("degenerate",)
        warnings.warn(f"{doc.id}: no link-set medians to compare at level {level}",
                      DegenerateTextWarning, stacklevel=2)
    params = {
        "empty_link_sets": empty,
        "median_difference": "absolute",
        "threshold": "strictly-greater-than-mean",
        "link_convention": LINK_CONVENTION,
        "mean_median_difference": None if t.mean_diff is None else str(t.mean_diff),
    }
    if doc.config is not None:
        params["normalization"] = doc.config.metadata()
    return Segmentation(doc.id, doc.n, t.boundaries, "lsm", level, params, flags)


def combine(a, b):
    """Union of two segmentations of the same document."""
    if a.n != b.n:
        raise ValueError(f"cannot combine segmentations of {a.n} and {b.n} sentences")
    if a.doc_id != b.doc_id:
        raise ValueError(f"cannot combine segmentations of {a.doc_id!r} and {b.doc_id!r}")
    level = a.link_level if a.link_level == b.link_level else None
    params = {"sources": [_source_label(a), _source_label(b)]}
    return Segmentation(a.doc_id, a.n, a.boundaries + b.boundaries, "combined", level, params)


def _source_label(seg):
    if seg.method == "combined":
        return {"method": "combined", "sources": seg.params.get("sources", [])}
    return {"method": seg.method, "link_level": seg.link_level}
