"""Planted-topic corpora for testing segmenters.

Every document is a run of topic blocks.  Blocks draw their content
words from private vocabularies (disjoint after normalization), mixed
with stoplist filler, and a section heading sits at every block seam.
"""

from __future__ import annotations

from pathlib import Path

import numpy as np

from .text_model import default_config, format_document, normalize, parse_document

_ONSETS = ("b", "d", "f", "g", "k", "l", "m", "n", "p", "r", "s", "t", "v", "z",
           "br", "dr", "gl", "kr", "pl", "st", "tr")
_NUCLEI = ("a", "e", "i", "o", "u")
_CODAS = ("k", "m", "n", "p", "r", "t", "x")
_FILLER = ("the", "of", "and", "in", "with", "for", "is", "was", "to", "by", "on", "its")


def _pseudo_word(rng):
    syllables = int(rng.integers(2, 4))
    parts = [_ONSETS[rng.integers(len(_ONSETS))] + _NUCLEI[rng.integers(len(_NUCLEI))]
             for _ in range(syllables)]
    return "".join(parts) + _CODAS[rng.integers(len(_CODAS))]


def vocabularies(rng, n_blocks, size, config=None):
    """``n_blocks`` word lists whose normalized forms never overlap."""
    config = config or default_config()
    taken = set(config.stoplist)
    out = []
    for _ in range(n_blocks):
        words = []
        while len(words) < size:
            w = _pseudo_word(rng)
            norm = normalize(w, config)
            if norm in taken or len(norm) < config.min_token_len:
                continue
            taken.add(norm)
            words.append(w)
        out.append(words)
    return out


def _block_sizes(rng, n, n_blocks, min_size):
    # random composition of n into n_blocks parts, each >= min_size
    spare = n - n_blocks * min_size
    if spare < 0:
        raise ValueError(f"{n} sentences cannot hold {n_blocks} blocks of {min_size}")
    cuts = np.sort(rng.integers(0, spare + 1, size=n_blocks - 1))
    parts = np.diff(np.concatenate([[0], cuts, [spare]]))
    return [int(p) + min_size for p in parts]


def _sentence(rng, vocab, words_per_sentence):
    k = int(rng.integers(words_per_sentence[0], words_per_sentence[1] + 1))
    content = [vocab[i] for i in rng.integers(len(vocab), size=k)]
    out = []
    for w in content:
        if rng.random() < 0.6:
            out.append(_FILLER[rng.integers(len(_FILLER))])
        out.append(w)
    out[0] = out[0].capitalize()
    return " ".join(out) + "."


def topic_document_text(rng, n_sentences, n_blocks, vocab_size=8,
                        words_per_sentence=(3, 6), min_block=4):
    """Corpus-format text and the planted seam positions."""
    sizes = _block_sizes(rng, n_sentences, n_blocks, min_block)
    vocabs = vocabularies(rng, n_blocks, vocab_size)
    lines = []
    seams = []
    pos = 1
    for b, (size, vocab) in enumerate(zip(sizes, vocabs), 1):
        if pos > 1:
            seams.append(pos)
        lines.append(f"## Topic {b}")
        lines.extend(_sentence(rng, vocab, words_per_sentence) for _ in range(size))
        pos += size
    return "\n".join(lines) + "\n", seams


def topic_corpus(n_docs=50, seed=0, sentences=(30, 60), blocks=(3, 6), genre="synthetic",
                 config=None, **kwargs):
    """Documents with ``blocks`` topic blocks over ``sentences`` sentences."""
    rng = np.random.default_rng(seed)
    docs = []
    for d in range(n_docs):
        n = int(rng.integers(sentences[0], sentences[1] + 1))
        k = int(rng.integers(blocks[0], blocks[1] + 1))
        text, _ = topic_document_text(rng, n, k, **kwargs)
        docs.append(parse_document(text, f"{genre}-{d:03d}", config, genre))
    return docs


def two_topic_corpus(n_docs=100, seed=0, sentences=(12, 40), genre="two-topic", config=None,
                     **kwargs):
    """Documents with exactly one vocabulary-disjoint seam."""
    return topic_corpus(n_docs, seed, sentences, (2, 2), genre, config, **kwargs)


def write_corpus(docs, root):
    """Write ``docs`` under ``root``, one sub-directory per genre."""
    root = Path(root)
    for doc in docs:
        d = root / doc.genre if doc.genre != "default" else root
        d.mkdir(parents=True, exist_ok=True)
        (d / f"{doc.id}.txt").write_text(format_document(doc), "utf-8")
    return root
