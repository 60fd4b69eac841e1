"""Build a few-shot annotation prompt from annotated examples plus new records.

Run from the repository root: python3 demos/06_fewshot_prompt.py
"""

from biolit import Document, Mention, build_fewshot_prompt


def example(doc_id: str) -> Document:
    title = "BRCA1 p.V600E melanoma tamoxifen report."
    abstract = "A short record mentioning all four entity kinds."
    specs = [
        (0, 5, "BRCA1", "GeneOrGeneProduct"),
        (6, 13, "p.V600E", "SequenceVariant"),
        (14, 22, "melanoma", "DiseaseOrPhenotypicFeature"),
        (23, 32, "tamoxifen", "ChemicalEntity"),
    ]
    mentions = tuple(Mention.of(s, e, t, raw) for s, e, t, raw in specs)
    return Document(doc_id, title, abstract, mentions)


examples = [example(str(i)) for i in range(1, 6)]
queries = [
    Document("901", "New untitled record one.", "Its abstract text."),
    Document("902", "New untitled record two.", "More abstract text."),
]

bundle = build_fewshot_prompt(examples, queries)
print(bundle.rendered)
