"""Mapping-quality classification against a hand-written ideal mapping.

Each query method lands in exactly one of five categories depending on how
the produced mapping agrees with the ideal one; the summary fractions are
P (a replacement exists at all) and C (the mapping is correct, including a
correct absence).

Ideal mappings travel in a line-delimited file: a header
``{"format":"cf-ideal","version":1}`` followed by one record per
(query class, candidate class) pair. Absent replacements are spelled null.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Mapping, Sequence

from .engine import RankedResult
from .methodmap import MethodMap

IDEAL_FORMAT = "cf-ideal"
IDEAL_VERSION = 1

CATEGORIES = ("C1", "C2", "E1", "E2", "E3")

BOTTOM_TOKENS = {None, "", "⊥", "bottom"}


class CoverageError(Exception):
    """The ideal mapping misses a method the produced mapping covers."""


class GroundTruthNotFoundError(Exception):
    pass


class IdealFormatError(Exception):
    pass


@dataclass(frozen=True)
class QualityBreakdown:
    c1: int
    c2: int
    e1: int
    e2: int
    e3: int

    @property
    def total(self) -> int:
        return self.c1 + self.c2 + self.e1 + self.e2 + self.e3

    @property
    def replaceable_fraction(self) -> float:
        """P: methods for which an ideal replacement exists (C1+E1+E3)."""
        return (self.c1 + self.e1 + self.e3) / self.total if self.total else 0.0

    @property
    def correct_fraction(self) -> float:
        """C: methods mapped correctly, including correct absence (C1+C2)."""
        return (self.c1 + self.c2) / self.total if self.total else 0.0

    def counts(self) -> dict[str, int]:
        return {"C1": self.c1, "C2": self.c2, "E1": self.e1, "E2": self.e2, "E3": self.e3}


def classify_mapping(
    alpha: MethodMap, ideal: Mapping[str, str | None]
) -> tuple[dict[str, str], QualityBreakdown]:
    """Assign each query method a category and tally the breakdown.

    C1: both map to the same method. C2: both map to nothing. E1: mapped to
    the wrong method. E2: mapped where the ideal has nothing. E3: missed a
    mapping the ideal has. Raises when the ideal does not cover a method.
    """
    categories: dict[str, str] = {}
    counts = dict.fromkeys(CATEGORIES, 0)
    for key, entry in alpha.entries:
        if key not in ideal:
            raise CoverageError(f"ideal mapping does not cover method '{key}'")
        expected = ideal[key]
        expected = None if expected in BOTTOM_TOKENS else expected
        actual = entry.target
        if expected is None and actual is None:
            cat = "C2"
        elif expected is None:
            cat = "E2"
        elif actual is None:
            cat = "E3"
        elif actual == expected:
            cat = "C1"
        else:
            cat = "E1"
        categories[key] = cat
        counts[cat] += 1
    return categories, QualityBreakdown(
        counts["C1"], counts["C2"], counts["E1"], counts["E2"], counts["E3"]
    )


def classify_document_entry(
    alpha_doc: Mapping[str, Mapping], ideal: Mapping[str, str | None]
) -> tuple[dict[str, str], QualityBreakdown]:
    """Like classify_mapping but over the alpha section of a result document."""
    categories: dict[str, str] = {}
    counts = dict.fromkeys(CATEGORIES, 0)
    for key, entry in sorted(alpha_doc.items()):
        if key not in ideal:
            raise CoverageError(f"ideal mapping does not cover method '{key}'")
        expected = ideal[key]
        expected = None if expected in BOTTOM_TOKENS else expected
        actual = entry.get("to")
        if expected is None and actual is None:
            cat = "C2"
        elif expected is None:
            cat = "E2"
        elif actual is None:
            cat = "E3"
        elif actual == expected:
            cat = "C1"
        else:
            cat = "E1"
        categories[key] = cat
        counts[cat] += 1
    return categories, QualityBreakdown(
        counts["C1"], counts["C2"], counts["E1"], counts["E2"], counts["E3"]
    )


def compare_rankings(
    results: Sequence[RankedResult] | Sequence[Mapping], ground_truth: str
) -> tuple[int, int]:
    """(final rank, embedding rank) of the ground-truth class, both 1-based."""
    for r in results:
        if isinstance(r, RankedResult):
            if r.class_name == ground_truth:
                return r.final_rank, r.embedding_rank
        else:
            if r.get("class") == ground_truth:
                return int(r["rank"]), int(r["embedding_rank"])
    raise GroundTruthNotFoundError(
        f"class '{ground_truth}' not present in the result list"
    )


# --- ideal-mapping file ----------------------------------------------------------


def save_ideal(entries: Mapping[tuple[str, str], Mapping[str, str | None]]) -> bytes:
    lines = [
        json.dumps(
            {"format": IDEAL_FORMAT, "version": IDEAL_VERSION},
            sort_keys=True, separators=(",", ":"),
        )
    ]
    for (query, candidate), mapping in entries.items():
        record = {
            "query": query,
            "candidate": candidate,
            "mapping": {
                k: (None if v in BOTTOM_TOKENS else v) for k, v in mapping.items()
            },
        }
        lines.append(json.dumps(record, sort_keys=True, separators=(",", ":")))
    return ("\n".join(lines) + "\n").encode("utf-8")


def load_ideal(data: bytes) -> dict[tuple[str, str], dict[str, str | None]]:
    lines = [ln for ln in data.decode("utf-8").splitlines() if ln.strip()]
    if not lines:
        raise IdealFormatError("empty ideal-mapping file")
    header = json.loads(lines[0])
    if header.get("format") != IDEAL_FORMAT:
        raise IdealFormatError("missing cf-ideal header")
    if header.get("version") != IDEAL_VERSION:
        raise IdealFormatError(f"unsupported version {header.get('version')!r}")
    out: dict[tuple[str, str], dict[str, str | None]] = {}
    for ln in lines[1:]:
        rec = json.loads(ln)
        mapping = {
            k: (None if v in BOTTOM_TOKENS else v)
            for k, v in rec["mapping"].items()
        }
        out[(rec["query"], rec["candidate"])] = mapping
    return out


def identity_ideal(alpha: MethodMap) -> dict[str, str]:
    """The ideal for a class queried against itself: every method to itself."""
    return {key: key for key, _ in alpha.entries}
