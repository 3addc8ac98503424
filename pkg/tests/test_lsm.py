import json
import warnings
from fractions import Fraction

import pytest

from lsmseg.cohesion import LinkSet, build_link_matrix, build_link_sets
from lsmseg.lsm import (
    DegenerateTextWarning,
    MedianSeries,
    Segmentation,
    combine,
    dump_segmentation,
    load_segmentation,
    mean_median_difference,
    median,
    median_differences,
    segment,
    trace,
    trace_link_sets,
)
from lsmseg.text_model import parse_document

from conftest import DATA, make_doc
from test_cohesion import WORKED


class TestMedian:
    @pytest.mark.parametrize("entries, expected", [
        ((4, 4, 6, 6, 6), 6),
        ((2, 4), 3),
        ((7,), 7),
        ((6, 4, 6, 4, 6), 6),
        ((1, 2, 3, 4), Fraction(5, 2)),
    ])
    def test_values(self, entries, expected):
        assert median(entries) == expected

    def test_empty(self):
        with pytest.raises(ValueError):
            median(())


class TestMedianDifferences:
    def test_plain(self):
        assert median_differences(MedianSeries((6, 6, 10))) == [0, 4]

    def test_carry_forward(self):
        assert median_differences(MedianSeries((5, None, 5))) == [0, 0]

    def test_leading_empty_sets_undefined(self):
        assert median_differences(MedianSeries((None, None, 4, 6))) == [None, None, 2]

    def test_single_defined(self):
        assert median_differences(MedianSeries((None, 3, None)), "exclude") == [None, None]

    def test_zero_policy(self):
        assert median_differences(MedianSeries((5, None, 5)), "zero") == [5, 5]

    def test_exclude_policy(self):
        # linkless sentence gets no diff; next one compares with sentence 1
        assert median_differences(MedianSeries((5, None, 8)), "exclude") == [None, 3]

    def test_unknown_policy(self):
        with pytest.raises(ValueError):
            median_differences(MedianSeries((1, 2)), "drop")


class TestMean:
    @pytest.mark.parametrize("diffs, expected", [([0, 4], 2), ([3], 3), ([0, 0, 0], 0),
                                                 ([None, 1, 2], Fraction(3, 2))])
    def test_values(self, diffs, expected):
        assert mean_median_difference(diffs) == expected

    def test_no_defined(self):
        with pytest.raises(ValueError):
            mean_median_difference([None, None])


class TestSegment:
    def test_two_topic_fixture(self):
        doc = parse_document((DATA / "two_topic.txt").read_bytes(), "two")
        t = trace(doc, 1)
        # hand-traced: medians 3,3,2,3/2 | 13/2,6,11/2,6; mean diff 8/7
        assert t.medians.values == (3, 3, 2, Fraction(3, 2), Fraction(13, 2), 6, Fraction(11, 2), 6)
        assert t.mean_diff == Fraction(8, 7)
        seg = segment(doc, 1)
        assert seg.boundaries == (5,)
        assert seg.method == "lsm" and seg.link_level == 1

    def test_disjoint_blocks(self):
        a = "alpha beta gamma"
        b = "delta epsilon zeta"
        doc = make_doc([a] * 4 + [b] * 4)
        assert 5 in segment(doc, 1).boundaries

    def test_fully_linked_text(self):
        # every sentence links to every other: medians are positional
        # (4,4,4,3,3,3), so the single jump at 4 beats the mean of 1/5
        doc = make_doc(["same words here"] * 6)
        t = trace(doc, 1)
        assert t.medians.values == (4, 4, 4, 3, 3, 3)
        assert t.mean_diff == Fraction(1, 5)
        assert t.boundaries == (4,)

    def test_constant_differences_give_no_boundaries(self):
        sets = [LinkSet(i, (i + 1,) * 2) for i in range(1, 9)]
        t = trace_link_sets(sets)
        assert set(t.diffs) == {1}
        assert t.boundaries == ()

    def test_worked_link_set_survives(self):
        doc = make_doc(WORKED)
        t = trace(doc, 1)
        assert t.link_sets[0].entries == (4, 4, 6, 6, 6)
        assert t.medians.values[0] == 6

    def test_degenerate_text(self):
        doc = make_doc(["aa", "bb", "cc"])
        with pytest.warns(DegenerateTextWarning):
            seg = segment(doc, 1)
        assert seg.boundaries == ()
        assert "degenerate" in seg.flags

    def test_params_record_conventions(self):
        with warnings.catch_warnings():
            warnings.simplefilter("error")
            seg = segment(parse_document((DATA / "two_topic.txt").read_bytes()), 2)
        assert seg.params["empty_link_sets"] == "carry"
        assert seg.params["median_difference"] == "absolute"
        assert seg.params["link_convention"] == "per-type-min-multiplicity"

    def test_scaled_links_same_boundaries(self, guinea):
        m = build_link_matrix(guinea)
        base = trace_link_sets(build_link_sets(m, 1)).boundaries
        for k in (2, 3, 7):
            assert trace_link_sets(build_link_sets(m.scaled(k), 1)).boundaries == base

    def test_guinea_runs(self, guinea):
        seg = segment(guinea, 1)
        assert all(2 <= b <= guinea.n for b in seg.boundaries)


class TestSegmentation:
    def test_range_checked(self):
        with pytest.raises(ValueError):
            Segmentation("d", 5, (1,))
        with pytest.raises(ValueError):
            Segmentation("d", 5, (6,))

    def test_segments(self):
        s = Segmentation("d", 6, (3, 5))
        assert s.segments() == [(1, 2), (3, 4), (5, 6)]

    def test_json_round_trip(self, tmp_path):
        s = Segmentation("d", 9, (5, 2), "lsm", 2, {"empty_link_sets": "carry"})
        dump_segmentation(s, tmp_path / "s.json")
        back = load_segmentation(tmp_path / "s.json")
        assert back == s and back.params == s.params
        d = json.loads((tmp_path / "s.json").read_text())
        assert d["boundaries"] == [2, 5]
        assert set(d) >= {"doc_id", "method", "link_level", "boundaries", "params"}

    def test_missing_field(self):
        with pytest.raises(ValueError, match="n_sentences"):
            Segmentation.from_dict({"doc_id": "x", "boundaries": []})


class TestCombine:
    def test_union(self):
        c = combine(Segmentation("d", 12, (5,)), Segmentation("d", 12, (9,), "external"))
        assert c.boundaries == (5, 9) and c.method == "combined"

    def test_idempotent(self):
        a = Segmentation("d", 12, (5,))
        assert combine(a, a).boundaries == (5,)

    def test_length_mismatch(self):
        with pytest.raises(ValueError):
            combine(Segmentation("d", 10, (5,)), Segmentation("d", 11, (5,)))
