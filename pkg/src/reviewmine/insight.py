"""Sentence-level co-occurrence graph and descriptive statistics."""

from __future__ import annotations

import csv
import io
import itertools
from collections import Counter
from dataclasses import dataclass, field
from typing import Iterable, Sequence

from .errors import ReviewMineError
from .extract import ConceptKind, SentenceSummary

# DOT sizes are linear in the weights.
NODE_WIDTH_PER_UNIT = 0.25
EDGE_PEN_PER_UNIT = 1.0

Concept = tuple[str, str]  # (kind, case-folded normalized form)


def concept_key(kind: ConceptKind | str, normalized: str) -> Concept:
    kind = kind.value if isinstance(kind, ConceptKind) else kind
    return kind, " ".join(normalized.split()).casefold()


def _sort_key(c: Concept):
    return ConceptKind(c[0]).order, c[1]


def node_id(c: Concept) -> str:
    return f"{c[0]}:{c[1]}"


@dataclass
class CooccurrenceGraph:
    nodes: Counter = field(default_factory=Counter)
    edges: Counter = field(default_factory=Counter)

    def add_sentence(self, concepts: Iterable[Concept]) -> None:
        present = sorted(set(concepts), key=_sort_key)
        for c in present:
            self.nodes[c] += 1
        for u, v in itertools.combinations(present, 2):
            self.edges[(u, v)] += 1

    def edge(self, a: Concept, b: Concept) -> int:
        u, v = sorted((a, b), key=_sort_key)
        return self.edges.get((u, v), 0)

    def merge(self, other: "CooccurrenceGraph") -> "CooccurrenceGraph":
        return CooccurrenceGraph(self.nodes + other.nodes, self.edges + other.edges)

    def sorted_nodes(self) -> list[Concept]:
        return sorted(self.nodes, key=_sort_key)

    def sorted_edges(self) -> list[tuple[Concept, Concept]]:
        return sorted(self.edges, key=lambda e: (_sort_key(e[0]), _sort_key(e[1])))


def sentence_concepts(summary: SentenceSummary) -> set[Concept]:
    return {concept_key(a.kind, a.normalized) for a in summary.annotations}


def build_graph(summaries: Iterable[SentenceSummary]) -> CooccurrenceGraph:
    graph = CooccurrenceGraph()
    for s in summaries:
        graph.add_sentence(sentence_concepts(s))
    return graph


def merge_graphs(graphs: Iterable[CooccurrenceGraph]) -> CooccurrenceGraph:
    out = CooccurrenceGraph()
    for g in graphs:
        out = out.merge(g)
    return out


def _dot_quote(s: str) -> str:
    return '"' + s.replace("\\", "\\\\").replace('"', '\\"') + '"'


def export_graph(graph: CooccurrenceGraph, fmt: str) -> bytes:
    if fmt == "dot":
        lines = ["graph cooccurrence {", "  node [shape=ellipse];"]
        for c in graph.sorted_nodes():
            w = graph.nodes[c]
            lines.append(f"  {_dot_quote(node_id(c))} [label={_dot_quote(c[1])}, "
                         f"kind={c[0]}, weight={w}, width=\"{w * NODE_WIDTH_PER_UNIT:.2f}\"];")
        for u, v in graph.sorted_edges():
            w = graph.edges[(u, v)]
            lines.append(f"  {_dot_quote(node_id(u))} -- {_dot_quote(node_id(v))} "
                         f"[weight={w}, penwidth=\"{w * EDGE_PEN_PER_UNIT:.2f}\"];")
        lines.append("}")
        return ("\n".join(lines) + "\n").encode("utf-8")
    if fmt in ("csv", "edge-csv"):
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(["source", "target", "weight"])
        for u, v in graph.sorted_edges():
            writer.writerow([node_id(u), node_id(v), graph.edges[(u, v)]])
        return buf.getvalue().encode("utf-8")
    raise ReviewMineError(f"unknown graph format {fmt!r} (expected dot or csv)")


# ---------------------------------------------------------------------------
# statistics


@dataclass
class ConceptStats:
    counts: dict[str, int]
    distinct: dict[str, int]
    per_review: dict[str, dict[str, int]]
    sentences: int = 0

    def record(self) -> dict:
        return {"sentences": self.sentences, "counts": self.counts,
                "distinct": self.distinct, "per_review": self.per_review}

    def table(self) -> str:
        kinds = [k.field_name for k in ConceptKind]
        rows = [["", *kinds]]
        rows.append(["total", *(str(self.counts[k]) for k in kinds)])
        rows.append(["distinct", *(str(self.distinct[k]) for k in kinds)])
        for rid, counts in self.per_review.items():
            rows.append([f"review {rid}", *(str(counts[k]) for k in kinds)])
        widths = [max(len(r[i]) for r in rows) for i in range(len(rows[0]))]
        out = []
        for r in rows:
            cells = [r[0].ljust(widths[0])] + [c.rjust(w) for c, w in zip(r[1:], widths[1:])]
            out.append("  ".join(cells).rstrip())
        return "\n".join(out) + "\n"


def stats(summaries: Sequence[SentenceSummary]) -> ConceptStats:
    kinds = [k.field_name for k in ConceptKind]
    counts = dict.fromkeys(kinds, 0)
    forms: dict[str, set] = {k: set() for k in kinds}
    per_review: dict[str, dict[str, int]] = {}
    for s in summaries:
        rid = s.sentence.review_id
        review = per_review.setdefault(rid, dict.fromkeys(kinds, 0))
        for a in s.annotations:
            name = a.kind.field_name
            counts[name] += 1
            review[name] += 1
            forms[name].add(concept_key(a.kind, a.normalized)[1])
    distinct = {k: len(v) for k, v in forms.items()}
    return ConceptStats(counts, distinct, per_review, len(summaries))
