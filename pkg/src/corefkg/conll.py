"""Column-oriented coreference format for interoperability with the standard
CoNLL-style scorer.

Documents are delimited by ``#begin document <id>`` / ``#end document``; each
line carries one token, and the final column carries coreference chain
brackets: ``(k`` opens chain k at this token, ``k)`` closes it, ``(k)`` is a
single-token mention, ``-`` is none; several entries are separated by ``|``.

The format is token-indexed while the data model is character-indexed, so
the writer also emits a sidecar *token table* (TSV: doc_id, token index,
start, end) recording the character span of every token. Reading with the
table restores exact offsets; reading without it synthesizes text by joining
tokens with single spaces.
"""

from __future__ import annotations

import re
from typing import Iterable

from .errors import ParseError
from .model import (
    ConceptType,
    CoreferenceCluster,
    Corpus,
    Document,
    Mention,
    MentionSource,
    all_clusters,
)

__all__ = ["write_coref_columns", "read_coref_columns", "parse_token_table"]

_BEGIN = "#begin document "
_END = "#end document"

_OPEN = re.compile(r"^\((\d+)$")
_CLOSE = re.compile(r"^(\d+)\)$")
_SINGLE = re.compile(r"^\((\d+)\)$")


def _tokenize(text: str, boundaries: set[int]) -> list[tuple[int, int]]:
    """Whitespace tokens, additionally split at mention boundaries."""
    spans: list[tuple[int, int]] = []
    start = None
    for i, ch in enumerate(text):
        if ch.isspace():
            if start is not None:
                spans.append((start, i))
                start = None
        else:
            if start is None:
                start = i
            elif i in boundaries:
                spans.append((start, i))
                start = i
    if start is not None:
        spans.append((start, len(text)))
    return spans


def write_coref_columns(corpus: Corpus) -> tuple[str, str]:
    """Serialize a corpus; returns (column file, token table).

    Every mention appears in exactly one chain: annotated clusters plus
    implicit singletons. Mention boundaries must not fall inside whitespace,
    and two mentions of one document must not share a character span (the
    column format cannot represent either).
    """
    lines: list[str] = []
    table: list[str] = []
    for doc in corpus:
        if any(ch.isspace() for ch in doc.doc_id):
            raise ValueError(f"doc_id {doc.doc_id!r} contains whitespace")
        boundaries: set[int] = set()
        for m in doc.mentions:
            boundaries.update((m.start, m.end))
        tokens = _tokenize(doc.text, boundaries)
        tok_at_start = {s: i for i, (s, _) in enumerate(tokens)}
        tok_at_end = {e: i for i, (_, e) in enumerate(tokens)}

        # canonical chain numbering: by earliest member span (the reader
        # restores the same order, making write-read-write stable)
        chains = sorted(all_clusters(doc), key=CoreferenceCluster.span_key)
        spans_seen: dict[tuple[int, int], Mention] = {}
        opens: dict[int, list[tuple[int, int]]] = {}
        closes: dict[int, list[tuple[int, int]]] = {}
        singles: dict[int, list[int]] = {}
        for chain_id, cluster in enumerate(chains):
            for m in cluster.mentions:
                if (m.start, m.end) in spans_seen:
                    raise ValueError(
                        f"column format cannot represent two mentions sharing span {m.span()}"
                    )
                spans_seen[(m.start, m.end)] = m
                try:
                    ti, tj = tok_at_start[m.start], tok_at_end[m.end]
                except KeyError:
                    raise ValueError(
                        f"mention boundary inside whitespace @ {m.span()}"
                    ) from None
                if ti == tj:
                    singles.setdefault(ti, []).append(chain_id)
                else:
                    opens.setdefault(ti, []).append((tj, chain_id))
                    closes.setdefault(tj, []).append((ti, chain_id))

        lines.append(f"{_BEGIN}{doc.doc_id}")
        for idx, (s, e) in enumerate(tokens):
            cell: list[str] = []
            # outermost opens first; innermost closes first
            for end_tok, chain in sorted(opens.get(idx, ()), key=lambda x: (-x[0], x[1])):
                cell.append(f"({chain}")
            for chain in sorted(singles.get(idx, ())):
                cell.append(f"({chain})")
            for start_tok, chain in sorted(closes.get(idx, ()), key=lambda x: (-x[0], x[1])):
                cell.append(f"{chain})")
            coref = "|".join(cell) if cell else "-"
            lines.append(f"{doc.doc_id}\t{idx}\t{doc.text[s:e]}\t{coref}")
            table.append(f"{doc.doc_id}\t{idx}\t{s}\t{e}")
        lines.append(_END)
    return "\n".join(lines) + "\n", "\n".join(table) + ("\n" if table else "")


def parse_token_table(table: str) -> dict[tuple[str, int], tuple[int, int]]:
    """Parse a sidecar token table into {(doc_id, token index): (start, end)}."""
    out: dict[tuple[str, int], tuple[int, int]] = {}
    for lineno, line in enumerate(table.splitlines(), start=1):
        if not line.strip() or line.startswith("#"):
            continue
        parts = line.split("\t")
        if len(parts) != 4:
            raise ParseError(f"token table expects 4 columns, got {line!r}", lineno)
        try:
            out[(parts[0], int(parts[1]))] = (int(parts[2]), int(parts[3]))
        except ValueError:
            raise ParseError(f"non-numeric token table entry {line!r}", lineno) from None
    return out


def _token_column(cols: list[str]) -> int:
    # Our own files have 4 columns (doc, index, token, coref); full
    # CoNLL-2012 exports have 12+, with the word in column 3.
    return 3 if len(cols) >= 8 else len(cols) - 2


def read_coref_columns(
    stream: str | Iterable[str],
    token_table: str | dict[tuple[str, int], tuple[int, int]] | None = None,
) -> Corpus:
    """Parse a column file into a corpus of untyped (coreference-only) mentions.

    With a token table, character offsets are the recorded ones and the text
    is reconstructed with the original spacing; without it, tokens are joined
    by single spaces. Chain brackets must balance per document; a mention
    span may belong to at most one chain.
    """
    if isinstance(stream, str):
        lines = stream.splitlines()
    else:
        lines = [line.rstrip("\n") for line in stream]
    offsets = (
        parse_token_table(token_table) if isinstance(token_table, str) else token_table
    )

    documents: list[Document] = []
    doc_id: str | None = None
    tokens: list[str] = []
    stacks: dict[int, list[int]] = {}
    chain_spans: dict[int, list[tuple[int, int]]] = {}
    chain_order: list[int] = []
    begin_line = 0

    def finalize(end_lineno: int) -> None:
        nonlocal doc_id
        open_chains = sorted(k for k, v in stacks.items() if v)
        if open_chains:
            raise ParseError(
                f"unbalanced brackets: chains {open_chains} still open", end_lineno
            )
        assert doc_id is not None
        if offsets is not None:
            spans = []
            for i, tok in enumerate(tokens):
                try:
                    s, e = offsets[(doc_id, i)]
                except KeyError:
                    raise ParseError(
                        f"token table has no entry for token {i} of {doc_id!r}", end_lineno
                    ) from None
                if e - s != len(tok):
                    raise ParseError(
                        f"token table span [{s},{e}) does not fit token {tok!r}", end_lineno
                    )
                spans.append((s, e))
            length = max((e for _, e in spans), default=0)
            chars = [" "] * length
            for (s, e), tok in zip(spans, tokens):
                chars[s:e] = tok
            text = "".join(chars)
        else:
            spans = []
            pos = 0
            for tok in tokens:
                spans.append((pos, pos + len(tok)))
                pos += len(tok) + 1
            text = " ".join(tokens)

        mentions: list[Mention] = []
        seen_spans: set[tuple[int, int]] = set()
        clusters: list[CoreferenceCluster] = []
        for chain in chain_order:
            members = []
            for ti, tj in chain_spans[chain]:
                s, e = spans[ti][0], spans[tj][1]
                if (s, e) in seen_spans:
                    raise ParseError(
                        f"duplicate mention span [{s},{e}) in document {doc_id!r}", end_lineno
                    )
                seen_spans.add((s, e))
                members.append(
                    Mention(doc_id, s, e, ConceptType.NONE, text[s:e], MentionSource.COREF_ONLY)
                )
            members.sort(key=lambda m: (m.start, m.end))
            mentions.extend(members)
            clusters.append(CoreferenceCluster(doc_id, frozenset(members)))
        clusters.sort(key=CoreferenceCluster.span_key)
        mentions.sort(key=lambda m: (m.start, m.end))
        documents.append(
            Document(doc_id=doc_id, domain="", text=text,
                     mentions=tuple(mentions), clusters=tuple(clusters))
        )
        doc_id = None

    for lineno, line in enumerate(lines, start=1):
        if line.startswith(_BEGIN):
            if doc_id is not None:
                raise ParseError("nested document begin", lineno)
            doc_id = line[len(_BEGIN):].strip()
            if not doc_id:
                raise ParseError("document sentinel without an id", lineno)
            tokens, stacks, chain_spans, chain_order = [], {}, {}, []
            begin_line = lineno
            continue
        if line.strip() == _END:
            if doc_id is None:
                raise ParseError("end sentinel outside a document", lineno)
            finalize(lineno)
            continue
        if doc_id is None:
            if not line.strip() or line.startswith("#"):
                continue
            raise ParseError(f"token line outside a document: {line!r}", lineno)
        if not line.strip() or line.startswith("#"):
            continue  # sentence break or comment
        cols = line.split()
        if len(cols) < 2:
            raise ParseError(f"expected token and coreference columns, got {line!r}", lineno)
        token = cols[_token_column(cols)]
        coref = cols[-1]
        idx = len(tokens)
        tokens.append(token)
        if coref == "-" or coref == "_":
            continue
        for entry in coref.split("|"):
            if m := _SINGLE.match(entry):
                chain = int(m.group(1))
                if chain not in chain_spans:
                    chain_order.append(chain)
                chain_spans.setdefault(chain, []).append((idx, idx))
            elif m := _OPEN.match(entry):
                chain = int(m.group(1))
                if chain not in chain_spans:
                    chain_order.append(chain)
                chain_spans.setdefault(chain, [])
                stacks.setdefault(chain, []).append(idx)
            elif m := _CLOSE.match(entry):
                chain = int(m.group(1))
                stack = stacks.get(chain, [])
                if not stack:
                    raise ParseError(f"chain {chain} closed before opened", lineno)
                chain_spans[chain].append((stack.pop(), idx))
            else:
                raise ParseError(f"malformed coreference entry {entry!r}", lineno)

    if doc_id is not None:
        raise ParseError(
            f"missing end-of-document sentinel for document begun at line {begin_line}",
            len(lines),
        )
    return Corpus(tuple(documents))
