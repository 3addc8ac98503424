import numpy as np
import pytest

from lsmseg.cohesion import LinkMatrix, build_link_matrix, build_link_sets, count_links
from lsmseg.text_model import parse_document

from conftest import DATA, make_doc


def _multiset_intersection(a, b):
    # independent of Counter: remove matched items one at a time
    rest = list(b)
    n = 0
    for x in a:
        if x in rest:
            rest.remove(x)
            n += 1
    return n


# sentence 1 shares three items with sentence 6 and two with sentence 4
WORKED = [
    "kiwi mango papaya quince walnut",
    "zebra",
    "yak",
    "quince walnut rhubarb",
    "xylophone",
    "kiwi mango papaya",
    "violin",
]


class TestCountLinks:
    def test_shared_item(self):
        doc = parse_document("cacao is grown on Bioko\ncoffee is grown on the mainland\n")
        a, b = doc.sentences
        assert count_links(a, b) == 1

    def test_disjoint(self):
        doc = make_doc(["alpha beta", "gamma delta"])
        assert count_links(*doc.sentences) == 0

    def test_min_multiplicity(self):
        doc = make_doc(["cacao cacao", "cacao"])
        a, b = doc.sentences
        assert count_links(a, b) == 1 == _multiset_intersection(a.lexical_items(), b.lexical_items())

    def test_symmetric(self):
        doc = make_doc(["ant ant bee cat", "ant bee bee cat cat"])
        a, b = doc.sentences
        assert count_links(a, b) == count_links(b, a) == 3

    def test_same_sentence(self):
        doc = make_doc(["aa bb", "cc dd"])
        with pytest.raises(ValueError):
            count_links(doc.sentences[0], doc.sentences[0])

    def test_non_lexical_never_links(self):
        doc = parse_document("the of and 1990\nthe of and 1990\n")
        assert count_links(*doc.sentences) == 0


class TestLinkMatrix:
    def test_minimal(self):
        m = build_link_matrix(make_doc(["pear plum", "pear fig"]))
        assert m.n == 2
        assert m.count(1, 2) == m.count(2, 1) == 1
        assert list(m.pairs()) == [(1, 2, 1)]

    def test_disjoint_document(self):
        m = build_link_matrix(make_doc(["aa", "bb", "cc", "dd"]))
        assert m.total() == 0

    def test_matches_pairwise_oracle(self):
        doc = parse_document((DATA / "guinea.txt").read_bytes())
        m = build_link_matrix(doc)
        for a in doc.sentences:
            for b in doc.sentences:
                if a.index != b.index:
                    assert m.count(a.index, b.index) == _multiset_intersection(
                        a.lexical_items(), b.lexical_items())

    def test_diagonal_undefined(self):
        m = build_link_matrix(make_doc(["aa", "bb"]))
        with pytest.raises(ValueError):
            m.count(1, 1)
        with pytest.raises(IndexError):
            m.count(1, 3)

    def test_rejects_asymmetric(self):
        with pytest.raises(ValueError):
            LinkMatrix([[0, 1], [2, 0]])

    def test_csv_export(self):
        m = build_link_matrix(make_doc(WORKED))
        lines = m.to_csv().splitlines()
        assert lines[0] == "i,j,count"
        assert set(lines[1:]) == {"1,4,2", "1,6,3", "4,6,0"} - {"4,6,0"}

    def test_read_only(self):
        m = build_link_matrix(make_doc(["aa", "aa"]))
        with pytest.raises(ValueError):
            m.as_array()[0, 1] = 5


class TestLinkSets:
    def test_worked_example(self):
        sets = build_link_sets(build_link_matrix(make_doc(WORKED)), 1)
        assert sets[0].entries == (4, 4, 6, 6, 6)

    def test_level_filters_partners(self):
        sets = build_link_sets(build_link_matrix(make_doc(WORKED)), 3)
        assert sets[0].entries == (6, 6, 6)
        assert sets[3].entries == ()

    def test_isolated_sentence(self):
        m = build_link_matrix(make_doc(WORKED))
        for level in range(1, 7):
            assert build_link_sets(m, level)[1].entries == ()

    def test_conservation_level_one(self):
        m = build_link_matrix(parse_document((DATA / "guinea.txt").read_bytes()))
        sets = build_link_sets(m, 1)
        assert sum(len(s) for s in sets) == 2 * m.total()

    def test_owner_excluded(self):
        m = build_link_matrix(make_doc(["aa aa", "aa", "aa bb"]))
        for s in build_link_sets(m, 1):
            assert s.owner not in s.entries

    def test_invalid_level(self):
        with pytest.raises(ValueError):
            build_link_sets(LinkMatrix(np.zeros((2, 2))), 0)
