import re
from pathlib import Path

import pytest

from lsmseg.porter import stem

nltk_porter = pytest.importorskip("nltk.stem.porter")

ROOT = Path(__file__).resolve().parents[1]


@pytest.fixture(scope="module")
def reference():
    ps = nltk_porter.PorterStemmer(mode=nltk_porter.PorterStemmer.ORIGINAL_ALGORITHM)
    return ps.stem


def _vocabulary():
    words = set()
    for path in [ROOT / "tests" / "data" / "guinea.txt", *sorted((ROOT / "src").rglob("*.py"))]:
        words |= set(re.findall(r"[a-z]+", path.read_text("utf-8").lower()))
    words |= {
        "caresses", "ponies", "ties", "caress", "cats", "feed", "agreed", "plastered", "bled",
        "motoring", "sing", "conflated", "troubled", "sized", "hopping", "tanned", "falling",
        "hissing", "fizzed", "failing", "filing", "happy", "sky", "relational", "conditional",
        "rational", "valenci", "hesitanci", "digitizer", "conformabli", "radicalli",
        "differentli", "vileli", "analogousli", "vietnamization", "predication", "operator",
        "feudalism", "decisiveness", "hopefulness", "callousness", "formaliti", "sensitiviti",
        "sensibiliti", "triplicate", "formative", "formalize", "electriciti", "electrical",
        "hopeful", "goodness", "revival", "allowance", "inference", "airliner", "gyroscopic",
        "adjustable", "defensible", "irritant", "replacement", "adjustment", "dependent",
        "adoption", "homologou", "communism", "activate", "angulariti", "homologous",
        "effective", "bowdlerize", "probate", "rate", "cease", "controll", "roll", "generalizations",
        "oscillators", "principal", "manufacturing", "francs", "foods",
    }
    return sorted(w for w in words if len(w) > 2)


def test_matches_reference_stemmer(reference):
    words = _vocabulary()
    assert len(words) > 500
    mismatches = [(w, stem(w), reference(w)) for w in words if stem(w) != reference(w)]
    assert mismatches == []


@pytest.mark.parametrize("word", ["a", "is", "as", "us"])
def test_short_words_untouched(word):
    assert stem(word) == word


@pytest.mark.parametrize("word, expected", [
    ("principal", "princip"),
    ("caresses", "caress"),
    ("relational", "relat"),
    ("hopping", "hop"),
    ("controll", "control"),
])
def test_known_stems(word, expected):
    assert stem(word) == expected
