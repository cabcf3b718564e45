# Copyright 2026 The Unigraph Authors.
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#     http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.

"""Writes the annotation fixtures used by the tests.

Each sentence is a list of "text/POS/head/rel" entries; head is the
0-based position of the head within the sentence, -1 for the root.
Coreference mentions are (sentence, start, end) with sentence numbers local
to the document; they are shifted to document-set numbering on output.
"""

import json
import os

HERE = os.path.dirname(os.path.abspath(__file__))


def sentence(spec):
    tokens, deps = [], []
    for i, entry in enumerate(spec.split()):
        text, pos, head, rel = entry.rsplit("/", 3)
        tokens.append({"text": text, "pos": pos, "is_punct": pos == "PUNCT"})
        deps.append({"head": int(head), "dep": i, "rel": rel})
    return {"tokens": tokens, "dependencies": deps}


def document_set(docs):
    out, offset = [], 0
    for doc_id, sentences, chains in docs:
        out.append({
            "doc_id": doc_id,
            "sentences": [sentence(s) for s in sentences],
            "coref_chains": [[{"sentence": s + offset, "start": a, "end": b}
                              for s, a, b in chain] for chain in chains],
        })
        offset += len(sentences)
    return {"documents": out}


def write(name, docs):
    with open(os.path.join(HERE, name), "w") as f:
        json.dump(document_set(docs), f, indent=1)
        f.write("\n")


EINSTEIN = (
    "einstein",
    [
        "Albert/PROPN/1/compound Einstein/PROPN/2/nsubj won/VERB/-1/root "
        "the/DET/6/det physics/NOUN/6/compound Nobel/PROPN/6/compound "
        "Prize/PROPN/2/obj ./PUNCT/2/punct",
        "The/DET/2/det great/ADJ/2/amod prize/NOUN/3/nsubj "
        "honored/VERB/-1/root his/PRON/5/nmod:poss explanation/NOUN/3/obj "
        "of/ADP/9/case the/DET/9/det photoelectric/ADJ/9/amod "
        "effect/NOUN/5/nmod ./PUNCT/3/punct",
        "He/PRON/1/nsubj developed/VERB/-1/root the/DET/3/det "
        "theory/NOUN/1/obj of/ADP/5/case relativity/NOUN/3/nmod "
        "./PUNCT/1/punct",
    ],
    [[(0, 0, 1), (1, 4, 4), (2, 0, 0)], [(0, 3, 6), (1, 0, 2)]],
)

CURIE_SENTENCES = [
    "Marie/PROPN/1/compound Curie/PROPN/2/nsubj discovered/VERB/-1/root "
    "radium/NOUN/2/obj ./PUNCT/2/punct",
    "She/PRON/1/nsubj studied/VERB/-1/root radium/NOUN/1/obj "
    "./PUNCT/1/punct",
    "Pierre/PROPN/1/compound Curie/PROPN/2/nsubj helped/VERB/-1/root "
    "her/PRON/2/obj ./PUNCT/2/punct",
    "He/PRON/1/nsubj discovered/VERB/-1/root polonium/NOUN/1/obj "
    "./PUNCT/1/punct",
    "Marie/PROPN/1/compound Curie/PROPN/2/nsubj won/VERB/-1/root "
    "the/DET/5/det Nobel/PROPN/5/compound Prize/PROPN/2/obj "
    "./PUNCT/2/punct",
    "The/DET/1/det prize/NOUN/2/nsubj honored/VERB/-1/root "
    "her/PRON/4/nmod:poss work/NOUN/2/obj ./PUNCT/2/punct",
    "Pierre/PROPN/1/compound Curie/PROPN/2/nsubj praised/VERB/-1/root "
    "polonium/NOUN/2/obj ./PUNCT/2/punct",
    "She/PRON/1/nsubj measured/VERB/-1/root radium/NOUN/1/obj "
    "./PUNCT/1/punct",
]
CURIE_CHAINS = [
    [(0, 0, 1), (1, 0, 0), (2, 3, 3), (5, 3, 3), (7, 0, 0)],
    [(2, 0, 1), (3, 0, 0)],
    [(4, 3, 5), (5, 0, 1)],
]


def curie_prefix(k):
    chains = []
    for chain in CURIE_CHAINS:
        kept = [m for m in chain if m[0] < k]
        if len(kept) >= 2:
            chains.append(kept)
    return ("curie-%d" % k, CURIE_SENTENCES[:k], chains)


OTHERS = [
    (
        "bridge",
        [
            "The/DET/2/det old/ADJ/2/amod bridge/NOUN/3/nsubj "
            "crossed/VERB/-1/root the/DET/5/det river/NOUN/3/obj "
            "./PUNCT/3/punct",
            "Engineers/NOUN/1/nsubj inspected/VERB/-1/root it/PRON/1/obj "
            ",/PUNCT/1/punct and/CCONJ/5/cc repaired/VERB/1/conj "
            "the/DET/7/det river/NOUN/5/obl ./PUNCT/1/punct",
        ],
        [[(0, 0, 2), (1, 2, 2)]],
    ),
    (
        "market",
        [
            "Local/ADJ/1/amod farmers/NOUN/2/nsubj sell/VERB/-1/root "
            "fresh/ADJ/4/amod vegetables/NOUN/2/obj ./PUNCT/2/punct",
            "They/PRON/1/nsubj grow/VERB/-1/root them/PRON/1/obj "
            "nearby/ADV/1/advmod ./PUNCT/1/punct",
        ],
        # The outer mention contains the inner one and is skipped.
        [[(0, 0, 1), (1, 0, 0)], [(0, 3, 4), (1, 2, 2)],
         [(0, 0, 4), (1, 3, 3)]],
    ),
    ("empty", [], []),
]


def main():
    write("einstein.json", [EINSTEIN])
    write("corpus.json", [EINSTEIN, curie_prefix(8)] + OTHERS)
    write("nested_prefix.json", [curie_prefix(k) for k in (2, 4, 6, 8)])
    write("empty_doc.json", [("empty", [], [])])
    write("invalid_cycle.json", [(
        "cycle",
        ["a/NOUN/1/dep b/NOUN/0/dep"],
        [],
    )])


if __name__ == "__main__":
    main()
