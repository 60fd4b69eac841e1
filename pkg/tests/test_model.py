import pytest
from hypothesis import given, strategies as st

from biolit import (
    CoreEntityType,
    Document,
    Mention,
    RelationAnnotation,
    full_text,
    map_entity_type,
    validate_document,
)
from biolit.model import DEFAULT_TYPE_MAP, concept_types

from util import make_doc, make_mention


class TestFullText:
    def test_title_space_abstract(self):
        doc = Document("1", "Abc.", "Def ghi.")
        assert full_text(doc) == "Abc. Def ghi."
        assert full_text(doc).index("Def") == 5

    def test_figure_style_offsets(self, canonical_dir):
        # "A case of " is 10 characters, so the disease mention sits at 10..34
        from biolit import read_pubtator

        corpus = read_pubtator(canonical_dir / "figure1.pubtator")
        doc = corpus.documents[0]
        assert full_text(doc)[10:34] == "Bernard-Soulier Syndrome"
        m = doc.mentions[0]
        assert (m.start, m.end) == (10, 34)
        assert full_text(doc)[m.start : m.end] == m.surface

    def test_empty_abstract(self):
        doc = Document("1", "Title only", "")
        assert full_text(doc) == "Title only "
        report = validate_document(doc)
        assert any(w.code == "empty-abstract" for w in report.warnings)


class TestMapEntityType:
    @pytest.mark.parametrize(
        "raw,expected",
        [
            ("GeneOrGeneProduct", CoreEntityType.GENE),
            ("SequenceVariant", CoreEntityType.VARIANT),
            ("DiseaseOrPhenotypicFeature", CoreEntityType.DISEASE),
            ("ChemicalEntity", CoreEntityType.CHEMICAL),
            ("OrganismTaxon", None),
            ("CellLine", None),
            ("SomethingElse", None),
        ],
    )
    def test_default_table(self, raw, expected):
        assert map_entity_type(raw) is expected

    def test_override(self):
        custom = dict(DEFAULT_TYPE_MAP)
        custom["Drug"] = CoreEntityType.CHEMICAL
        assert map_entity_type("Drug", custom) is CoreEntityType.CHEMICAL
        assert map_entity_type("Drug") is None

    @given(st.text(min_size=1, max_size=30))
    def test_total_and_deterministic(self, raw):
        first = map_entity_type(raw)
        assert first is map_entity_type(raw)
        assert first is None or isinstance(first, CoreEntityType)


class TestMention:
    def test_concept_ids_parsing(self):
        assert Mention.of(0, 1, "x", "GeneOrGeneProduct", "10;20").concept_ids == ("10", "20")
        assert Mention.of(0, 1, "x", "GeneOrGeneProduct", "10,20").concept_ids == ("10", "20")
        assert Mention.of(0, 1, "x", "GeneOrGeneProduct", "-").concept_ids == ()
        assert Mention.of(0, 1, "x", "GeneOrGeneProduct", None).concept_ids == ()

    def test_mentions_sorted_on_construction(self):
        text = "aa bb cc"
        m1 = Mention.of(6, 8, "cc", "GeneOrGeneProduct", "1")
        m2 = Mention.of(0, 2, "aa", "GeneOrGeneProduct", "2")
        doc = Document("1", text, "", (m1, m2))
        assert [m.start for m in doc.mentions] == [0, 6]


class TestRelationAnnotation:
    def test_unordered_equality_and_dedup(self):
        a = RelationAnnotation("x", "y", "Association")
        b = RelationAnnotation("y", "x", "Association")
        assert a == b
        assert len({a, b}) == 1

    def test_label_and_extras_distinguish(self):
        a = RelationAnnotation("x", "y", "Association")
        b = RelationAnnotation("x", "y", "Bind")
        c = RelationAnnotation("x", "y", "Association", ("Novel",))
        assert a != b and a != c


class TestValidateDocument:
    def test_well_formed(self):
        doc = make_doc("123", "BRCA1 causes cancer.", "BRCA1 was studied.",
                       [("BRCA1", "GeneOrGeneProduct", "672"),
                        ("cancer", "DiseaseOrPhenotypicFeature", "D009369")])
        report = validate_document(doc)
        assert report.ok and not report.warnings

    def test_span_out_of_bounds(self):
        doc = Document("1", "short", "", (Mention.of(2, 99, "x", "GeneOrGeneProduct"),))
        report = validate_document(doc)
        assert [e.code for e in report.errors] == ["span-out-of-bounds"]

    def test_inverted_span_is_error(self):
        doc = Document("1", "short text", "", (Mention.of(5, 2, "x", "GeneOrGeneProduct"),))
        assert not validate_document(doc).ok

    def test_dangling_relation_warns(self):
        doc = make_doc("1", "BRCA1 matters.", "", [("BRCA1", "GeneOrGeneProduct", "672")],
                       relations=[RelationAnnotation("672", "D000", "Association")])
        report = validate_document(doc)
        assert report.ok
        assert any(w.code == "dangling-relation" for w in report.warnings)

    def test_surface_mismatch_warning_vs_strict(self):
        doc = Document("1", "abcdef ghij", "", (Mention.of(0, 6, "WRONG!", "GeneOrGeneProduct"),))
        assert validate_document(doc).ok
        assert any(w.code == "surface-mismatch" for w in validate_document(doc).warnings)
        strict = validate_document(doc, strict=True)
        assert not strict.ok
        assert any(e.code == "surface-mismatch" for e in strict.errors)

    def test_duplicate_mention_and_unknown_type(self):
        text = "abc def"
        doc = Document(
            "1",
            text,
            "",
            (
                Mention.of(0, 3, "abc", "GeneOrGeneProduct"),
                Mention.of(0, 3, "abc", "GeneOrGeneProduct"),
                Mention.of(4, 7, "def", "MadeUpType"),
            ),
        )
        codes = [w.code for w in validate_document(doc).warnings]
        assert "duplicate-mention" in codes
        assert "unknown-type" in codes

    def test_known_filtered_types_do_not_warn(self):
        doc = make_doc("1", "Mice were studied.", "", [("Mice", "OrganismTaxon", "10090")])
        assert not any(w.code == "unknown-type" for w in validate_document(doc).warnings)

    def test_nondigit_id_warns(self):
        doc = Document("PMC77", "title here", "abstract here")
        assert any(w.code == "nondigit-id" for w in validate_document(doc).warnings)

    def test_empty_id_is_error(self):
        doc = Document("", "title here", "abstract here")
        assert not validate_document(doc).ok

    def test_ambiguous_integer_relation_label(self):
        doc = make_doc("1", "BRCA1 and TP53 interact.", "",
                       [("BRCA1", "GeneOrGeneProduct", "672"),
                        ("TP53", "GeneOrGeneProduct", "7157")],
                       relations=[RelationAnnotation("672", "7157", "42")])
        report = validate_document(doc)
        assert any(e.code == "ambiguous-label" for e in report.errors)


class TestConceptTypes:
    def test_majority_and_tie(self):
        text = "LQTS affects LQTS and LQTS"
        doc = Document(
            "1",
            text,
            "",
            (
                make_mention(text, "LQTS", "DiseaseOrPhenotypicFeature", "D001", 1),
                make_mention(text, "LQTS", "GeneOrGeneProduct", "D001", 2),
                make_mention(text, "LQTS", "DiseaseOrPhenotypicFeature", "D001", 3),
            ),
        )
        assert concept_types(doc)["D001"] is CoreEntityType.DISEASE
        # 1-1 tie resolves alphabetically on the type name: Chemical < Disease
        doc2 = Document(
            "2",
            text,
            "",
            (
                make_mention(text, "LQTS", "DiseaseOrPhenotypicFeature", "D001", 1),
                make_mention(text, "LQTS", "ChemicalEntity", "D001", 2),
            ),
        )
        assert concept_types(doc2)["D001"] is CoreEntityType.CHEMICAL
