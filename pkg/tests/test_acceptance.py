"""Acceptance suite: one check per shipped guarantee, printed pass/fail lines.

Run with ``pytest tests/test_acceptance.py -v -s``. A2/A3 (corpus statistics
against the published split counts) need the real corpus splits; point
$BIORED_DIR at a directory containing train/dev/test .pubtator files or place
them under tests/data/biored/. Without the data those two checks are skipped
with an explicit message; everything else runs self-contained.
"""

import random
import time

import pytest

from biolit import (
    CoreEntityType,
    MatchMode,
    RelationAnnotation,
    corpus_stats,
    emit_bio,
    generate_re_instances,
    load_findings,
    load_reference_table,
    match_findings,
    match_mentions,
    parse_pubtator,
    read_pubtator,
    score_ner,
    segment_document,
    serialize_pubtator,
    window_reachability,
)
from biolit.pubtator import Corpus

import conftest
from util import make_doc, optimal_match_count, random_mini_corpus

PASS_LINE = "[acceptance] {name}: PASS {detail}"


def report_pass(name: str, detail: str = "") -> None:
    print(PASS_LINE.format(name=name, detail=detail).rstrip())


def _require_biored():
    root = conftest.biored_dir()
    if root is None:
        pytest.skip(
            "real corpus splits not available in this environment (no network "
            "to fetch them); set BIORED_DIR or add tests/data/biored/"
            "{train,dev,test}.pubtator to run this check"
        )
    return root


class TestA1ByteRoundTrip:
    def test_serialize_parse_is_identity_on_canonical_files(self, canonical_dir):
        fixtures = sorted(canonical_dir.glob("*.pubtator"))
        assert len(fixtures) >= 5, "need at least five canonical fixtures"
        multi_doc = with_relations = with_extras = 0
        started = time.perf_counter()
        for path in fixtures:
            raw = path.read_text(encoding="utf-8")
            corpus = parse_pubtator(raw)
            assert serialize_pubtator(corpus) == raw, f"byte drift in {path.name}"
            multi_doc += len(corpus.documents) > 1
            with_relations += any(d.relations for d in corpus.documents)
            with_extras += any(
                r.extras for d in corpus.documents for r in d.relations
            ) or any(m.extras for d in corpus.documents for m in d.mentions)
        elapsed = time.perf_counter() - started
        assert multi_doc >= 1 and with_relations >= 1 and with_extras >= 1
        assert elapsed < 1.0, f"round-trip took {elapsed:.3f}s"
        report_pass("A1 byte-round-trip", f"({len(fixtures)} files, {elapsed * 1000:.0f} ms)")


# Published per-split counts: (total mentions, unique surfaces) per type,
# abstracts, and relation totals for train/dev/test and the union.
SPLIT_EXPECTATIONS = {
    "train": {"abstracts": 400, "relations": 4178,
              CoreEntityType.GENE: (4430, 1141), CoreEntityType.VARIANT: (890, 420),
              CoreEntityType.DISEASE: (3646, 576), CoreEntityType.CHEMICAL: (2853, 486)},
    "dev": {"abstracts": 100, "relations": 1162,
            CoreEntityType.GENE: (1087, 268), CoreEntityType.VARIANT: (250, 135),
            CoreEntityType.DISEASE: (982, 244), CoreEntityType.CHEMICAL: (822, 184)},
    "test": {"abstracts": 100, "relations": 1163,
             CoreEntityType.GENE: (1180, 399), CoreEntityType.VARIANT: (241, 137),
             CoreEntityType.DISEASE: (917, 244), CoreEntityType.CHEMICAL: (754, 170)},
    "total": {"abstracts": 600, "relations": 6503,
              CoreEntityType.GENE: (6697, 1643), CoreEntityType.VARIANT: (1381, 678),
              CoreEntityType.DISEASE: (5545, 778), CoreEntityType.CHEMICAL: (4429, 651)},
}


def _load_biored_table(case_sensitive=True):
    root = _require_biored()
    named = [
        (split, read_pubtator(conftest.biored_split_path(split)))
        for split in ("train", "dev", "test")
    ]
    return corpus_stats(named, case_sensitive=case_sensitive)


class TestA2SplitCounts:
    def test_published_split_counts(self):
        started = time.perf_counter()
        table = _load_biored_table()
        convention = "case-sensitive"
        mismatched_uniques = [
            (split, t)
            for split, exp in SPLIT_EXPECTATIONS.items()
            for t in CoreEntityType
            if table.splits[split].mention_count(t).unique != exp[t][1]
        ]
        if mismatched_uniques:
            # one permitted fallback: unique surfaces counted case-insensitively
            table = _load_biored_table(case_sensitive=False)
            convention = "case-insensitive (fallback)"
            print(f"[acceptance] A2 unique-count convention fallback: {mismatched_uniques[:4]} ...")
        for split, exp in SPLIT_EXPECTATIONS.items():
            s = table.splits[split]
            assert s.abstracts == exp["abstracts"], (split, "abstracts", s.abstracts)
            assert s.relations == exp["relations"], (split, "relations", s.relations)
            for t in CoreEntityType:
                got = s.mention_count(t)
                assert got.total == exp[t][0], (split, t.value, got.total)
                assert got.unique == exp[t][1], (split, t.value, "unique", got.unique)
        elapsed = time.perf_counter() - started
        assert elapsed < 10.0, f"stats took {elapsed:.2f}s"
        report_pass("A2 split-counts", f"({convention}, {elapsed:.2f}s)")


class TestA3RelationTypeCells:
    def test_spot_cells(self):
        table = _load_biored_table()
        cells = table.splits["total"].pair_label_counts

        def cell(pair, label):
            key = label.replace(" ", "").replace("_", "").casefold()
            return sum(
                n for (p, lab), n in cells.items()
                if p == pair and lab.replace(" ", "").replace("_", "").casefold() == key
            )

        assert cell("G-D", "Association") == 1483
        assert cell("C-D", "Negative Correlation") == 446
        assert cell("D-V", "Positive Correlation") == 392
        report_pass("A3 relation-type-cells", "(3 cells exact)")


ITD_TAGS = ("B-Disease", "I-Disease", "I-Disease", "B-Disease", "O", "O", "O", "O")
CROCIN_MARKED = (
    "Crocin improves <e1> lipid </e1> dysregulation in subacute "
    "<e2> diazinon </e2> exposure through ERK1/2 pathways"
)


class TestA4SequenceAndMarkerFidelity:
    def test_bio_tags_exact(self, canonical_dir):
        corpus = read_pubtator(canonical_dir / "itd.pubtator")
        seq = emit_bio(corpus.documents[0])
        assert tuple(seq.tags[:8]) == ITD_TAGS
        report_pass("A4a bio-tags", "(8-tag sequence exact)")

    def test_marker_string_exact(self, canonical_dir):
        corpus = read_pubtator(canonical_dir / "crocin.pubtator")
        doc = corpus.documents[0]
        instances = [
            inst
            for inst in generate_re_instances(doc)
            if {inst.concept_a, inst.concept_b} == {"D008055", "D003976"}
        ]
        assert len(instances) == 1
        assert instances[0].window_text == CROCIN_MARKED
        assert instances[0].label is not None
        report_pass("A4b entity-markers", "(window text exact)")


class TestA5ScorerProperties:
    N_FIXTURES = 1000

    def test_scorer_properties_over_seeded_fixtures(self):
        started = time.perf_counter()
        greedy_mismatch_seeds = []
        for seed in range(self.N_FIXTURES):
            rng = random.Random(seed)
            gold, pred = random_mini_corpus(rng, max_docs=5, max_mentions=10)

            # (a) self-comparison scores all ones on populated categories
            for mode in MatchMode:
                self_report = score_ner(gold, gold, mode)
                for name, s in self_report.categories.items():
                    if s.tp + s.fn:
                        assert (s.precision, s.recall, s.f1) == (1.0, 1.0, 1.0), (
                            seed, mode, name,
                        )

            # (b) relaxed dominates strict for the same predictions
            strict = score_ner(gold, pred, MatchMode.STRICT)
            relaxed = score_ner(gold, pred, MatchMode.RELAXED)
            for name, s in strict.categories.items():
                r = relaxed.categories[name]
                assert r.tp >= s.tp, (seed, name)
                assert r.precision >= s.precision, (seed, name)
                assert r.recall >= s.recall, (seed, name)

            # (c) greedy relaxed matching vs exhaustive optimal matching
            greedy_tp = optimal_tp = 0
            for gold_doc, pred_doc in zip(gold.documents, pred.documents):
                text = gold_doc.full_text
                g, p = list(gold_doc.mentions), list(pred_doc.mentions)
                greedy_tp += len(match_mentions(g, p, MatchMode.RELAXED, text=text))
                optimal_tp += optimal_match_count(g, p, text)
            assert greedy_tp <= optimal_tp
            if greedy_tp != optimal_tp:
                greedy_mismatch_seeds.append((seed, greedy_tp, optimal_tp))

        elapsed = time.perf_counter() - started
        for seed, got, best in greedy_mismatch_seeds:
            print(
                f"[acceptance] A5c greedy/optimal divergence: seed={seed} "
                f"greedy={got} optimal={best}"
            )
        agreement = 1 - len(greedy_mismatch_seeds) / self.N_FIXTURES
        assert agreement >= 0.99, f"greedy matched optimal on {agreement:.1%}"
        assert elapsed < 30.0, f"scorer property run took {elapsed:.2f}s"
        report_pass(
            "A5 scorer-properties",
            f"({self.N_FIXTURES} fixtures, greedy/optimal agreement "
            f"{agreement:.1%}, {elapsed:.1f}s)",
        )


BB_ROWS = set(range(10, 24)) | set(range(32, 39))


class TestA6UseCaseCoverage:
    def test_bert_model_findings(self, package_data_dir):
        with open(package_data_dir / "oncokb_pik3ca_e545k_reference.csv", encoding="utf-8") as fh:
            table = load_reference_table(fh)
        with open(package_data_dir / "bb_findings.csv", encoding="utf-8") as fh:
            findings = load_findings(fh)
        report = match_findings(table, findings)
        assert (report.matched_count, report.total) == (21, 38)
        assert abs(report.coverage - 0.553) <= 0.001
        assert {r.row.index for r in report.rows if r.matched} == BB_ROWS
        report_pass("A6a use-case-bert", f"(21/38, coverage {report.coverage:.4f})")

    def test_annotation_service_findings(self, package_data_dir):
        with open(package_data_dir / "oncokb_pik3ca_e545k_reference.csv", encoding="utf-8") as fh:
            table = load_reference_table(fh)
        with open(package_data_dir / "pt_findings.csv", encoding="utf-8") as fh:
            findings = load_findings(fh)
        report = match_findings(table, findings)
        assert (report.matched_count, report.total) == (9, 38)
        report_pass("A6b use-case-service", "(9/38)")


class TestA7WindowReachability:
    def _brute_force_reachable(self, doc, window):
        sentences = segment_document(doc)

        def sentence_of(offset):
            idx = 0
            for s in sentences:
                if s.start <= offset:
                    idx = s.index
            return idx

        reachable = set()
        mentions = [m for m in doc.core_mentions() if m.concept_ids]
        for i, m1 in enumerate(mentions):
            for m2 in mentions[i + 1 :]:
                if m2.start < m1.end:
                    continue
                if abs(sentence_of(m1.start) - sentence_of(m2.start)) > window:
                    continue
                for a in m1.concept_ids:
                    for b in m2.concept_ids:
                        if a != b:
                            reachable.add((a, b) if a <= b else (b, a))
        return {rel.pair for rel in doc.relations if rel.pair in reachable}

    def test_property_on_fixture_corpus(self, canonical_dir):
        corpus = read_pubtator(canonical_dir / "biored_mini.pubtator")
        far = make_doc(
            "9909",
            "BRCA1 appears here.",
            "Filler one. Filler two. Filler three. Now cancer appears.",
            [("BRCA1", "GeneOrGeneProduct", "672"),
             ("cancer", "DiseaseOrPhenotypicFeature", "D009369")],
            relations=[RelationAnnotation("672", "D009369", "Association")],
        )
        docs = list(corpus.documents) + [far]
        report = window_reachability(docs, window=1)
        assert 0 < report.fraction <= 1.0
        assert report.total == 10
        assert report.unreachable == [("9909", ("672", "D009369"))]

        # independent enumeration agrees, and every reachable relation
        # produced at least one positive instance
        for doc in docs:
            expected = self._brute_force_reachable(doc, window=1)
            instances = generate_re_instances(doc, window=1)
            positive_pairs = {
                (i.concept_a, i.concept_b) if i.concept_a <= i.concept_b
                else (i.concept_b, i.concept_a)
                for i in instances if i.label is not None
            }
            assert positive_pairs == expected, doc.doc_id
        report_pass(
            "A7 window-reachability",
            f"(fixture fraction {report.fraction:.4f}, oracle agreement exact)",
        )

    def test_recorded_on_real_training_split(self):
        root = _require_biored()
        corpus = read_pubtator(conftest.biored_split_path("train"))
        report = window_reachability(corpus.documents, window=1)
        assert 0 < report.fraction <= 1.0
        report_pass(
            "A7 window-reachability (real data)",
            f"(train fraction {report.fraction:.4f}, "
            f"{report.reachable}/{report.total})",
        )
