"""Chat-endpoint mode: few-shot annotation of documents via an LLM API.

Documents go out in batches (default 5) with a fresh session per batch; the
prompt for each batch is produced by the scoring toolkit's ``biolit prompt``
command from a user-supplied annotated examples file. Response lines that do
not parse as annotation lines are dropped and counted, never emitted, so the
adapter's output is always parseable downstream.
"""

from __future__ import annotations

import os
import subprocess
import tempfile
from dataclasses import dataclass, field
from pathlib import Path

import httpx

from .config import AdapterConfig
from .encoder import AdapterError
from .pubtator_lite import Document, Mention, serialize, write


@dataclass
class LlmRunReport:
    """What came back from the endpoint and what survived parsing."""

    batches: int = 0
    requests: int = 0
    response_lines: int = 0
    accepted: int = 0
    dropped: int = 0
    repaired_offsets: int = 0
    offset_mismatches: list[str] = field(default_factory=list)
    output: str = ""

    def to_dict(self) -> dict:
        return {
            "batches": self.batches,
            "requests": self.requests,
            "response_lines": self.response_lines,
            "accepted": self.accepted,
            "dropped": self.dropped,
            "repaired_offsets": self.repaired_offsets,
            "offset_mismatches": self.offset_mismatches,
        }


def build_prompt(batch: list[Document], config: AdapterConfig) -> str:
    """Render the few-shot prompt for one batch via the toolkit CLI."""
    if not config.examples_path:
        raise AdapterError("llm-ner needs examples_path in the config")
    with tempfile.TemporaryDirectory() as tmp:
        queries = Path(tmp) / "queries.pubtator"
        prompt_path = Path(tmp) / "prompt.txt"
        write([Document(d.doc_id, d.title, d.abstract) for d in batch], queries)
        proc = subprocess.run(
            [
                "biolit", "prompt",
                "--examples", config.examples_path,
                "--queries", str(queries),
                "--out", str(prompt_path),
            ],
            capture_output=True,
            text=True,
        )
        if proc.returncode != 0:
            raise AdapterError(f"prompt construction failed: {proc.stderr.strip()}")
        return prompt_path.read_text(encoding="utf-8")


def _call_endpoint(
    client: httpx.Client, config: AdapterConfig, prompt: str, batch_index: int
) -> tuple[str, int]:
    """POST the prompt, retrying once; returns (response text, request count)."""
    headers = {}
    key = os.environ.get(config.api_key_env, "")
    if key:
        headers["Authorization"] = f"Bearer {key}"
    payload = {
        "model": config.model,
        "temperature": config.temperature,
        "max_tokens": config.max_generated_tokens,
        "messages": [{"role": "user", "content": prompt}],
    }
    last_error = None
    for attempt in (1, 2):
        try:
            response = client.post(config.endpoint, json=payload, headers=headers)
            response.raise_for_status()
            content = response.json()["choices"][0]["message"]["content"]
            return content, attempt
        except (httpx.HTTPError, KeyError, IndexError, ValueError) as exc:
            last_error = exc
    raise AdapterError(f"endpoint failed for batch {batch_index}: {last_error}")


def parse_response(
    text: str, batch: list[Document], report: LlmRunReport
) -> dict[str, list[Mention]]:
    """Keep response lines that parse as in-batch annotation lines.

    Offsets are checked against the document text. A span whose surface is
    found verbatim elsewhere exactly once is repaired to that occurrence
    (models copy surfaces reliably but miscount positions); otherwise a
    mismatched span is kept as reported and flagged, and an unusable span is
    dropped.
    """
    docs = {d.doc_id: d for d in batch}
    accepted: dict[str, list[Mention]] = {d.doc_id: [] for d in batch}
    for raw_line in text.splitlines():
        line = raw_line.strip()
        if not line:
            continue
        report.response_lines += 1
        fields = line.split("\t")
        if len(fields) < 5 or fields[0] not in docs:
            report.dropped += 1
            continue
        try:
            start, end = int(fields[1]), int(fields[2])
        except ValueError:
            report.dropped += 1
            continue
        surface, raw_type = fields[3], fields[4]
        if not surface or not raw_type:
            report.dropped += 1
            continue
        doc = docs[fields[0]]
        in_bounds = 0 <= start < end <= len(doc.text)
        if not (in_bounds and doc.text[start:end] == surface):
            if doc.text.count(surface) == 1:
                start = doc.text.index(surface)
                end = start + len(surface)
                report.repaired_offsets += 1
            elif in_bounds:
                report.offset_mismatches.append(
                    f"{doc.doc_id}: {start}..{end} != {surface!r}"
                )
            else:
                report.dropped += 1
                continue
        accepted[doc.doc_id].append(Mention(start, end, surface, raw_type))
        report.accepted += 1
    return accepted


def run_llm_ner(
    docs: list[Document],
    config: AdapterConfig,
    client: httpx.Client | None = None,
) -> LlmRunReport:
    """Annotate documents through a chat endpoint, one session per batch."""
    owns_client = client is None
    if client is None:
        client = httpx.Client(timeout=60.0)
    report = LlmRunReport()
    predicted: list[Document] = []
    try:
        for lo in range(0, len(docs), config.batch_size):
            batch = docs[lo : lo + config.batch_size]
            report.batches += 1
            prompt = build_prompt(batch, config)
            content, attempts = _call_endpoint(client, config, prompt, report.batches)
            report.requests += attempts
            mentions = parse_response(content, batch, report)
            for doc in batch:
                predicted.append(
                    Document(doc.doc_id, doc.title, doc.abstract, mentions[doc.doc_id])
                )
    finally:
        if owns_client:
            client.close()
    report.output = serialize(predicted)
    return report
