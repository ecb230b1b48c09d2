"""Independent reference computations used as test oracles."""

from fractions import Fraction
from itertools import permutations


def kappa_from_labels(labels, k):
    """Fleiss' kappa from an items x raters label table, by ordered rater-pair enumeration.

    Exact rational arithmetic; returns (K, pr_a, pr_e) as Fractions, K is None when
    chance agreement is 1.
    """
    n_items = len(labels)
    n = len(labels[0])
    agree = Fraction(0)
    for row in labels:
        pairs = [(a, b) for a, b in permutations(range(n), 2)]
        agree += Fraction(sum(row[a] == row[b] for a, b in pairs), len(pairs))
    pr_a = agree / n_items
    totals = [0] * k
    for row in labels:
        for label in row:
            totals[label] += 1
    pr_e = sum(Fraction(t, n_items * n) ** 2 for t in totals)
    if pr_e == 1:
        return None, pr_a, pr_e
    return (pr_a - pr_e) / (1 - pr_e), pr_a, pr_e


def labels_from_counts(counts):
    """Expand a count matrix into one label per rater (raters filled column by column)."""
    rows = []
    for row in counts:
        labels = []
        for j, c in enumerate(row):
            labels.extend([j] * int(c))
        rows.append(labels)
    return rows


def cooccurrence(sentences):
    """Node and edge weights by explicit loops; sentences are lists of (kind, text)."""
    norm = [{(k, " ".join(t.split()).casefold()) for k, t in s} for s in sentences]
    universe = sorted(set().union(*norm)) if norm else []
    nodes = {}
    for c in universe:
        nodes[c] = sum(1 for s in norm if c in s)
    edges = {}
    for i, u in enumerate(universe):
        for v in universe[i + 1:]:
            w = sum(1 for s in norm if u in s and v in s)
            if w:
                edges[frozenset((u, v))] = w
    return nodes, edges
