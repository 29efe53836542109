"""Deterministic resolution of curator name variants.

The same person shows up in the records as "J. Malmstedt", "Johan M.", or
"Johan Malmstedt".  Instead of probabilistic record linkage, this module uses
four ordered rules; every merge carries the label of the rule that fired so
each decision stays auditable.  Clustering is the connected components of the
pairwise compatibility graph, computed with a union-find and canonicalized so
that input order never matters.
"""

from __future__ import annotations

import hashlib
import re
import unicodedata
from dataclasses import dataclass
from typing import Iterable, Sequence

# a bare 2-4 capital token is shorthand initials, not a name variant; it is
# linked against the resolved roster instead of becoming an identity
_PURE_INITIALS_RE = re.compile(r"^[A-Z]{2,4}$")


@dataclass(frozen=True)
class NameToken:
    text: str
    is_initial: bool


@dataclass(frozen=True)
class NameVariant:
    """One observed spelling of a name, with its corpus frequency."""

    raw: str
    normalized: tuple[NameToken, ...]
    occurrences: int = 1

    def __post_init__(self) -> None:
        if self.occurrences < 1:
            raise ValueError("occurrences must be >= 1")


@dataclass(frozen=True)
class CuratorIdentity:
    """A resolved curator: stable id, display name, and the variant set.

    ``first_year``/``last_year`` stay unset until the index build fills them
    from the curator's events.
    """

    id: str
    canonical: str
    variants: tuple[NameVariant, ...]
    first_year: int | None = None
    last_year: int | None = None


@dataclass(frozen=True)
class MatchVerdict:
    matched: bool
    rule: str | None = None

    def __bool__(self) -> bool:
        return self.matched


NO_MATCH = MatchVerdict(False, None)


def normalize_name(raw: str) -> list[NameToken]:
    """Lowercase, fold diacritics, drop periods and commas, split on whitespace.

    Periods and commas count as token breaks (so "J.Malmstedt" still splits);
    single-letter tokens are marked as initials.
    """
    folded = unicodedata.normalize("NFKD", raw)
    folded = "".join(ch for ch in folded if not unicodedata.combining(ch))
    folded = folded.lower().replace(".", " ").replace(",", " ")
    return [NameToken(tok, len(tok) == 1) for tok in folded.split()]


def make_variant(raw: str, occurrences: int = 1) -> NameVariant:
    return NameVariant(raw=raw, normalized=tuple(normalize_name(raw)), occurrences=occurrences)


def initials_of(name: str) -> str:
    """Uppercase initial letters of a display name, in token order."""
    return "".join(tok.text[0] for tok in normalize_name(name)).upper()


def collect_variants(raw_names: Iterable[str]) -> list[NameVariant]:
    """Aggregate observed name spellings into variants with occurrence counts.

    Empty values and pure-initials tokens (e.g. "KR") are skipped: the former
    carry nothing, the latter are resolved against the roster later rather
    than being allowed to become identities of their own.
    """
    counts: dict[str, int] = {}
    for raw in raw_names:
        if not raw or _PURE_INITIALS_RE.match(raw):
            continue
        counts[raw] = counts.get(raw, 0) + 1
    return [make_variant(raw, n) for raw, n in sorted(counts.items())]


def _initial_compatible(a: NameToken, b: NameToken) -> bool:
    if a.text == b.text:
        return True
    if a.is_initial and not b.is_initial:
        return a.text == b.text[0]
    if b.is_initial and not a.is_initial:
        return b.text == a.text[0]
    return False


def damerau_levenshtein(a: str, b: str) -> int:
    """Optimal string alignment distance (single transpositions count as 1)."""
    if a == b:
        return 0
    rows, cols = len(a) + 1, len(b) + 1
    dist = [[0] * cols for _ in range(rows)]
    for i in range(rows):
        dist[i][0] = i
    for j in range(cols):
        dist[0][j] = j
    for i in range(1, rows):
        for j in range(1, cols):
            cost = 0 if a[i - 1] == b[j - 1] else 1
            dist[i][j] = min(dist[i - 1][j] + 1,
                             dist[i][j - 1] + 1,
                             dist[i - 1][j - 1] + cost)
            if i > 1 and j > 1 and a[i - 1] == b[j - 2] and a[i - 2] == b[j - 1]:
                dist[i][j] = min(dist[i][j], dist[i - 2][j - 2] + 1)
    return dist[-1][-1]


def compatible(a: NameVariant, b: NameVariant) -> MatchVerdict:
    """Decide whether two variants denote the same person.

    Rules, checked in order (the first that fires is the verdict's label):

    R1  normalized token lists are identical;
    R2  same token count, last tokens are equal full words, and every leading
        pair is initial-compatible ("R. A. Howard" ~ "Richard Alden Howard");
    R3  both names have exactly two tokens, each positional pair is
        initial-compatible, and at least one pair involves a full word
        ("J. Malmstedt" ~ "Johan M.");
    R4  same token count, last tokens are full words within edit distance 1,
        and leading pairs are initial-compatible (typo'd surnames).

    Empty variants never match anything.
    """
    ta, tb = a.normalized, b.normalized
    if not ta or not tb:
        return NO_MATCH

    if [t.text for t in ta] == [t.text for t in tb]:
        return MatchVerdict(True, "R1")

    same_len = len(ta) == len(tb)
    leading_ok = same_len and all(_initial_compatible(x, y) for x, y in zip(ta[:-1], tb[:-1]))

    if same_len and leading_ok:
        last_a, last_b = ta[-1], tb[-1]
        if not last_a.is_initial and not last_b.is_initial and last_a.text == last_b.text:
            return MatchVerdict(True, "R2")

    if len(ta) == 2 and len(tb) == 2:
        pairs = list(zip(ta, tb))
        if all(_initial_compatible(x, y) for x, y in pairs) and any(
                not (x.is_initial and y.is_initial) for x, y in pairs):
            return MatchVerdict(True, "R3")

    if same_len and leading_ok:
        last_a, last_b = ta[-1], tb[-1]
        if (not last_a.is_initial and not last_b.is_initial
                and damerau_levenshtein(last_a.text, last_b.text) <= 1):
            return MatchVerdict(True, "R4")

    return NO_MATCH


class _UnionFind:
    """Union-find with path compression; roots resolve to the smallest index."""

    def __init__(self, size: int) -> None:
        self.parent = list(range(size))

    def find(self, x: int) -> int:
        root = x
        while self.parent[root] != root:
            root = self.parent[root]
        while self.parent[x] != root:
            self.parent[x], x = root, self.parent[x]
        return root

    def union(self, x: int, y: int) -> None:
        rx, ry = self.find(x), self.find(y)
        if rx != ry:
            if ry < rx:
                rx, ry = ry, rx
            self.parent[ry] = rx


def cluster_variants(variants: Iterable[NameVariant]) -> list[tuple[NameVariant, ...]]:
    """Partition variants into connected components of the compatibility graph.

    The result is canonical: clusters are sorted by their smallest raw member
    and each cluster is sorted by raw, so permuting the input changes nothing.
    """
    ordered = sorted(variants, key=lambda v: v.raw)
    uf = _UnionFind(len(ordered))
    for i in range(len(ordered)):
        for j in range(i + 1, len(ordered)):
            if compatible(ordered[i], ordered[j]):
                uf.union(i, j)

    groups: dict[int, list[NameVariant]] = {}
    for i, variant in enumerate(ordered):
        groups.setdefault(uf.find(i), []).append(variant)
    clusters = [tuple(members) for members in groups.values()]
    clusters.sort(key=lambda c: c[0].raw)
    return clusters


def canonicalize(cluster: Sequence[NameVariant]) -> CuratorIdentity:
    """Pick a display name and mint a stable id for one cluster.

    The canonical variant has the most full-word tokens; ties break on higher
    occurrence count, then lexicographically smallest raw.  The id is a hash
    of the sorted raw spellings, so it is deterministic for a given cluster.
    """
    if not cluster:
        raise ValueError("cannot canonicalize an empty cluster")

    def word_count(v: NameVariant) -> int:
        return sum(1 for t in v.normalized if not t.is_initial)

    best = sorted(cluster, key=lambda v: (-word_count(v), -v.occurrences, v.raw))[0]
    raws = sorted(v.raw for v in cluster)
    digest = hashlib.sha256("\x1f".join(raws).encode("utf-8")).hexdigest()[:12]
    return CuratorIdentity(
        id=digest,
        canonical=best.raw,
        variants=tuple(sorted(cluster, key=lambda v: v.raw)),
    )
