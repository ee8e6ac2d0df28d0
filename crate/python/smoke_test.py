"""Smoke test for the title_miner extension module.

Build and install first, e.g. `pip install maturin && maturin develop`
from crates/python, then run `python python/smoke_test.py` from the
repository root.
"""

import json

import title_miner as tm


def main():
    r = tm.parse_title(
        "SemEval-2017 Task 5: Fine-Grained Sentiment Analysis on Financial Microblogs and News"
    )
    assert r.template == "colon_generic" and r.rule == 5
    assert r.research_problem == ["SemEval-2017 Task 5"]
    assert r.method == ["Fine-Grained Sentiment Analysis"]
    assert r.resource == ["Financial Microblogs and News"]
    assert json.loads(r.json)["template"] == "colon_generic"

    r = tm.parse_title("Adding Pronunciation Information to Wordnets", year=2008)
    assert r.concepts()["tool"] == ["Wordnets"]
    assert r.year == 2008

    records = tm.parse_corpus(["Zq Vb", "Parsing of Dutch", "Using WordNet for Building WordNets"], jobs=2)
    assert [x.template for x in records] == ["default", "default", "using_prefix"]
    assert records[1].language == ["Dutch"]

    assert tm.classify("GRAFON: A Grapheme-to-Phoneme Conversion System for Dutch")[:2] == ("special_word_colon", 1)
    assert tm.count_connectors("Using Multiple Knowledge Sources for Word Sense Discrimination") == 2
    segments, connectors, dropped = tm.split_on_connectors("Using WordNet for Building WordNets")
    assert (segments, connectors, dropped) == (["WordNet", "Building WordNets"], ["for"], ["using"])

    assert tm.five_way_concept_typing("Ancient Accadian")["language"] == ["Ancient Accadian"]
    try:
        tm.five_way_concept_typing("Parsing of Dutch")
    except ValueError:
        pass
    else:
        raise AssertionError("connector phrase accepted by five-way typing")
    assert tm.one_connector_heuristics("Learning Templates from Web Corpora")["resource"] == ["Web Corpora"]

    lex = tm.Lexicon()
    assert lex.is_tool("Wordnets") and lex.is_resource("WordNet")
    try:
        tm.Lexicon.from_dir("/nonexistent")
    except OSError:
        pass
    else:
        raise AssertionError("missing lexicon directory loaded")

    assert tm.normalize_title(r"Sch{\"u}tze") == "Schütze"
    out = tm.ingest_bibtex("@article{a, title={X Y}, year=1999}\n@article{b, title={x y}}")
    assert out["kept"] == 1 and out["duplicates"] == 1 and out["titles"][0] == ("X Y", 1999, "a")

    assert tm.precision(["a", "b"], ["A"]) == 0.5
    assert tm.recall(["x"], ["x", "y"]) == 0.5
    assert tm.precision([], ["a"]) is None

    print("title_miner smoke test passed")


if __name__ == "__main__":
    main()
