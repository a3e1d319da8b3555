import json
from collections import Counter

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from sbskit.corpus import (
    TABLE1_KEYWORDS,
    Area,
    Document,
    DocumentSet,
    Facet,
    FacetKey,
    OrgSize,
    Region,
    Seniority,
    exclude_ids,
    facet_counts,
    filter_by_keywords,
    load_corpus,
    partition_by_facet,
    partition_by_period,
    read_exclude_list,
    save_corpus_jsonl,
)
from sbskit.errors import DuplicateIdError, EmptyKeywordList, FormatError, IoError


def write_jsonl(path, records):
    path.write_text("".join(json.dumps(r) + "\n" for r in records), encoding="utf-8")
    return path


def docset(*docs):
    return DocumentSet(tuple(docs), "test")


class TestLoad:
    def test_empty_jsonl(self, tmp_path):
        p = tmp_path / "c.jsonl"
        p.write_text("")
        assert len(load_corpus(p)) == 0

    def test_missing_region_becomes_unknown(self, tmp_path):
        p = write_jsonl(
            tmp_path / "c.jsonl",
            [
                {"id": "a", "text": "one", "area": "operations", "region": "europe", "org_size": "small", "seniority": "high"},
                {"id": "b", "text": "two", "area": "supply_chain", "org_size": "big", "seniority": "minimum"},
                {"id": "c", "text": "three", "area": "x", "region": "north_america", "org_size": "medium", "seniority": "medium"},
            ],
        )
        docs = load_corpus(p, "jsonl")
        assert docs.ids == ["a", "b", "c"]
        a, b, c = docs
        assert (a.area, a.region, a.org_size, a.seniority) == (Area.OPERATIONS, Region.EUROPE, OrgSize.SMALL, Seniority.HIGH)
        assert (b.area, b.region, b.org_size, b.seniority) == (Area.SUPPLY_CHAIN, Region.UNKNOWN, OrgSize.BIG, Seniority.MINIMUM)
        assert (c.area, c.region, c.org_size, c.seniority) == (Area.UNKNOWN, Region.NORTH_AMERICA, OrgSize.MEDIUM, Seniority.MEDIUM)
        assert b.text == "two"

    def test_csv_duplicate_id(self, tmp_path):
        p = tmp_path / "c.csv"
        p.write_text("id,text,region\nj1,first,europe\nj1,second,europe\n", encoding="utf-8")
        with pytest.raises(DuplicateIdError):
            load_corpus(p, "csv")

    def test_csv_quoting(self, tmp_path):
        p = tmp_path / "c.csv"
        p.write_text('id,text,region\nj1,"multi\nline, with comma",europe\n', encoding="utf-8")
        (doc,) = load_corpus(p)
        assert doc.text == "multi\nline, with comma"
        assert doc.region is Region.EUROPE

    def test_bad_json_reports_line(self, tmp_path):
        p = tmp_path / "c.jsonl"
        p.write_text('{"id": "a", "text": "ok"}\n{oops\n', encoding="utf-8")
        with pytest.raises(FormatError) as err:
            load_corpus(p)
        assert err.value.line == 2

    def test_empty_text_rejected(self, tmp_path):
        p = write_jsonl(tmp_path / "c.jsonl", [{"id": "a", "text": "   "}])
        with pytest.raises(FormatError):
            load_corpus(p)

    def test_missing_file(self, tmp_path):
        with pytest.raises(IoError):
            load_corpus(tmp_path / "nope.jsonl")

    def test_roundtrip(self, tmp_path):
        src = docset(
            Document("x1", "Ünïcode text\twith tabs", Area.OPERATIONS, Region.REST_OF_WORLD, OrgSize.BIG, Seniority.MEDIUM),
            Document("x2", "plain", period="2021"),
        )
        p = tmp_path / "out.jsonl"
        save_corpus_jsonl(src, p)
        back = load_corpus(p, period_field="period")
        assert back.documents == src.documents


class TestFilter:
    def test_logistics_retained_as_supply_chain(self):
        out = filter_by_keywords(docset(Document("1", "Seeking a logistics planner")))
        assert out.ids == ["1"]
        assert out.documents[0].area is Area.SUPPLY_CHAIN

    def test_no_keyword_removed(self):
        assert len(filter_by_keywords(docset(Document("1", "Seeking a florist")))) == 0

    def test_both_families_unknown(self):
        out = filter_by_keywords(docset(Document("1", "Production and distribution lead")))
        assert out.documents[0].area is Area.UNKNOWN

    def test_word_boundaries(self):
        docs = docset(Document("1", "Head of Operations"), Document("2", "cooperations matter"))
        assert filter_by_keywords(docs).ids == ["1"]

    def test_phrase_keyword_spans_whitespace(self):
        out = filter_by_keywords(docset(Document("1", "global SUPPLY\n chain role")))
        assert out.documents[0].area is Area.SUPPLY_CHAIN

    def test_case_sensitive_mode(self):
        docs = docset(Document("1", "logistics"))
        assert len(filter_by_keywords(docs, ["Logistics"], case_insensitive=False)) == 0
        assert len(filter_by_keywords(docs, ["Logistics"], case_insensitive=True)) == 1

    def test_plain_list_keeps_area(self):
        docs = docset(Document("1", "warehouse logistics", area=Area.OPERATIONS))
        assert filter_by_keywords(docs, ["logistics"]).documents[0].area is Area.OPERATIONS

    def test_empty_keywords(self):
        with pytest.raises(EmptyKeywordList):
            filter_by_keywords(docset(Document("1", "x")), [])

    def test_table1(self):
        assert TABLE1_KEYWORDS[Area.OPERATIONS] == ("Maintenance", "Manufacturing", "Operations", "Production")
        assert TABLE1_KEYWORDS[Area.SUPPLY_CHAIN] == ("Distribution", "Logistics", "Supply Chain", "Transportation")

    @settings(max_examples=50, deadline=None)
    @given(st.lists(st.sampled_from(["logistics", "florist", "production", "chain", "supply chain", "ops", "x"]), max_size=6), st.integers(1, 8))
    def test_idempotent(self, words, n):
        docs = docset(*(Document(str(i), " ".join(words[i % max(1, len(words)):] + ["z"])) for i in range(n)))
        once = filter_by_keywords(docs)
        assert filter_by_keywords(once).documents == once.documents


class TestPartition:
    def test_region_sizes(self):
        regions = [Region.EUROPE, Region.EUROPE, Region.NORTH_AMERICA, Region.UNKNOWN]
        docs = docset(*(Document(str(i), "t", region=r) for i, r in enumerate(regions)))
        parts = partition_by_facet(docs, Facet.REGION)
        assert {str(k): len(v) for k, v in parts.items()} == {
            "region=europe": 2,
            "region=north_america": 1,
            "region=unknown": 1,
        }

    def test_single_value_identity(self):
        docs = docset(*(Document(str(i), "t", seniority=Seniority.HIGH) for i in range(3)))
        parts = partition_by_facet(docs, "seniority")
        assert list(parts) == [FacetKey(Facet.SENIORITY, Seniority.HIGH)]
        assert parts[FacetKey(Facet.SENIORITY, Seniority.HIGH)].documents == docs.documents

    @settings(max_examples=60, deadline=None)
    @given(st.lists(st.tuples(st.sampled_from(list(Region)), st.sampled_from(list(OrgSize))), max_size=30))
    def test_exhaustive_and_disjoint(self, facets):
        docs = docset(*(Document(f"d{i}", "t", region=r, org_size=s) for i, (r, s) in enumerate(facets)))
        for facet in Facet:
            parts = partition_by_facet(docs, facet)
            ids = [i for part in parts.values() for i in part.ids]
            assert Counter(ids) == Counter(docs.ids)
            assert sum(len(p) for p in parts.values()) == len(docs)

    def test_facet_key_checks_variant(self):
        with pytest.raises(ValueError):
            FacetKey(Facet.REGION, OrgSize.SMALL)

    def test_facet_aliases(self):
        assert Facet.parse("size") is Facet.ORG_SIZE
        assert Facet.parse("Discipline") is Facet.AREA
        with pytest.raises(ValueError):
            Facet.parse("colour")

    def test_counts(self):
        docs = docset(Document("1", "t", region=Region.EUROPE), Document("2", "t"))
        counts = facet_counts(docs)
        assert counts["region"] == {"europe": 1, "unknown": 1}
        assert counts["area"] == {"unknown": 2}

    def test_period(self):
        docs = docset(Document("1", "t", period="2020"), Document("2", "t"), Document("3", "t", period="2019"))
        assert list(partition_by_period(docs)) == ["2019", "2020", None]


def test_duplicate_ids_rejected_in_set():
    with pytest.raises(DuplicateIdError):
        docset(Document("a", "x"), Document("a", "y"))


def test_exclude_list(tmp_path):
    p = tmp_path / "drop.txt"
    p.write_text("# screened out\nb\n\n c  # trailing\n")
    docs = docset(Document("a", "x"), Document("b", "x"), Document("c", "x"))
    assert exclude_ids(docs, read_exclude_list(p)).ids == ["a"]
