"""Cluster label normalization: acronym resolution, determiner stripping,
whitespace collapsing and plural-to-singular conversion.

Two clusters collapse into one KG concept exactly when their labels are
equal, so this module decides the granularity of the populated graph. The
label of a cluster is its longest mention (measured after acronym
expansion), normalized.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path
from typing import Mapping

from .model import CoreferenceCluster

__all__ = [
    "AcronymMap",
    "build_acronym_map",
    "load_lemma_exceptions",
    "set_default_lemma_exceptions",
    "singularize",
    "normalize_mention",
    "cluster_label",
]

DETERMINERS = frozenset({"a", "an", "the"})
DEMONSTRATIVES = frozenset({"this", "that", "these", "those"})
POSSESSIVES = frozenset({"its", "their", "our", "his", "her"})
_LEADING_STOP = DETERMINERS | DEMONSTRATIVES | POSSESSIVES

_PAREN = re.compile(r"\(([^()]{1,80})\)")
_WS = re.compile(r"\s+")


@dataclass(frozen=True)
class AcronymMap:
    """Document-scoped short form -> long form expansions."""

    expansions: dict[str, str] = field(default_factory=dict)

    def __post_init__(self):
        for short, long in self.expansions.items():
            if not short:
                raise ValueError("empty short form in acronym map")
            if short == long:
                raise ValueError(f"short form {short!r} maps to itself")

    def __contains__(self, short: str) -> bool:
        return short in self.expansions

    def __len__(self) -> int:
        return len(self.expansions)

    def get(self, short: str, default: str | None = None) -> str | None:
        return self.expansions.get(short, default)

    def items(self):
        return self.expansions.items()


EMPTY_ACRONYMS = AcronymMap({})


def _valid_short_form(candidate: str) -> bool:
    # Schwartz-Hearst candidate conditions: 2-10 characters, at most two
    # words, first character alphanumeric, at least one letter.
    if not (2 <= len(candidate) <= 10):
        return False
    if len(candidate.split()) > 2:
        return False
    if not candidate[0].isalnum():
        return False
    return any(ch.isalpha() for ch in candidate)


def _best_long_form(short: str, window: str) -> str | None:
    # Match the short form's alphanumeric characters right-to-left inside the
    # window; the first character must start a word of the long form.
    s = len(short) - 1
    l = len(window) - 1
    while s >= 0:
        ch = short[s].lower()
        if not ch.isalnum():
            s -= 1
            continue
        while (l >= 0 and window[l].lower() != ch) or (
            s == 0 and l > 0 and window[l - 1].isalnum()
        ):
            l -= 1
        if l < 0:
            return None
        s -= 1
        l -= 1
    start = window.rfind(" ", 0, l + 1) + 1
    return window[start:]


def build_acronym_map(doc_text: str) -> AcronymMap:
    """Extract `long form (SHORT)` definitions from a document.

    Standard Schwartz-Hearst extraction: the candidate inside parentheses
    must pass the short-form test, and each of its characters must be found
    in the window of min(|S|+5, 2|S|) words preceding the parenthesis. The
    first definition of a short form wins; a long form that already contains
    the short form is rejected.
    """
    expansions: dict[str, str] = {}
    for match in _PAREN.finditer(doc_text):
        short = match.group(1).strip()
        if not _valid_short_form(short) or short in expansions:
            continue
        before = _WS.split(doc_text[: match.start()].strip())
        window_words = before[-min(len(short) + 5, 2 * len(short)):]
        window = " ".join(w for w in window_words if w)
        if not window:
            continue
        long_form = _best_long_form(short, window)
        if not long_form:
            continue
        long_form = long_form.strip(" ,;:")
        if len(long_form) <= len(short) or short in long_form:
            continue
        expansions[short] = long_form
    return AcronymMap(expansions)


_DEFAULT_EXCEPTIONS: dict[str, str] | None = None


def load_lemma_exceptions(path: str | Path | None = None) -> dict[str, str]:
    """Load a plural -> singular exception table (two-column TSV).

    Without a path, the table shipped with the package is used. Lines
    starting with '#' are comments.
    """
    if path is None:
        text = resources.files("corefkg.data").joinpath("lemma_exceptions.tsv").read_text("utf-8")
    else:
        text = Path(path).read_text("utf-8")
    table: dict[str, str] = {}
    for lineno, line in enumerate(text.splitlines(), start=1):
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        parts = line.split("\t")
        if len(parts) != 2:
            raise ValueError(f"lemma exceptions line {lineno}: expected two columns, got {line!r}")
        table[parts[0].strip().lower()] = parts[1].strip().lower()
    return table


def _default_exceptions() -> dict[str, str]:
    global _DEFAULT_EXCEPTIONS
    if _DEFAULT_EXCEPTIONS is None:
        _DEFAULT_EXCEPTIONS = load_lemma_exceptions()
    return _DEFAULT_EXCEPTIONS


def set_default_lemma_exceptions(table: Mapping[str, str] | None) -> None:
    """Replace the packaged exception table process-wide; None restores it.

    Intended for process start-up (the CLI's --lemma-exceptions flag); for
    scoped overrides pass ``exceptions=`` to the functions instead.
    """
    global _DEFAULT_EXCEPTIONS
    _DEFAULT_EXCEPTIONS = dict(table) if table is not None else None


def singularize(token: str, exceptions: Mapping[str, str] | None = None) -> str:
    """Rule-based plural -> singular for a single token (returned lowercase).

    Falls back to conservative suffix rules after the exception table, so
    non-plural tokens come back unchanged.
    """
    tok = token.lower()
    table = exceptions if exceptions is not None else _default_exceptions()
    if tok in table:
        return table[tok]
    if len(tok) <= 3:
        return tok
    if tok.endswith(("ss", "us", "is")):
        return tok
    if tok.endswith("ies") and len(tok) >= 5:
        return tok[:-3] + "y"
    if tok.endswith("sses"):
        return tok[:-2]
    if tok.endswith(("xes", "ches", "shes", "oes")):
        return tok[:-2]
    if tok.endswith("s"):
        return tok[:-1]
    return tok


def _expand_acronyms(surface: str, acronyms: AcronymMap) -> str:
    stripped = surface.strip()
    expanded = acronyms.get(stripped)
    if expanded is not None:
        return expanded
    tokens = stripped.split()
    return " ".join(acronyms.get(t) or t for t in tokens)


def normalize_mention(surface: str, acronyms: AcronymMap = EMPTY_ACRONYMS,
                      exceptions: Mapping[str, str] | None = None) -> str:
    """Normalize a mention surface into a label.

    Pipeline: acronym expansion (whole surface or per token), lower-casing,
    stripping of leading determiners/demonstratives/possessives and trailing
    possessive markers, whitespace collapsing, and per-token singularization.
    Labels are idempotent under this function.
    """
    text = _expand_acronyms(surface, acronyms)
    tokens = text.lower().split()
    while tokens and tokens[0] in _LEADING_STOP:
        tokens = tokens[1:]
    cleaned: list[str] = []
    for tok in tokens:
        for suffix in ("'s", "’s", "'", "’"):
            if tok.endswith(suffix):
                tok = tok[: -len(suffix)]
                break
        if tok:
            cleaned.append(singularize(tok, exceptions))
    return " ".join(cleaned)


def cluster_label(cluster: CoreferenceCluster, acronyms: AcronymMap = EMPTY_ACRONYMS,
                  exceptions: Mapping[str, str] | None = None) -> str:
    """Label of a cluster: its longest mention, normalized.

    Length is measured in characters after acronym expansion, so an
    acronym-only cluster still yields an informative label; ties break by
    earliest start offset.
    """
    if not cluster.mentions:
        raise ValueError("cannot label an empty cluster")
    best = min(
        cluster.mentions,
        key=lambda m: (-len(_expand_acronyms(m.surface, acronyms)), m.start, m.end, m.surface),
    )
    return normalize_mention(best.surface, acronyms, exceptions)
