"""Patterns: oriented subcubic triangle-free graphs and their decorations.

A pattern is a triangle-free graph of maximum valency three together with a
partial edge orientation in which every directed edge leaves a trivalent
vertex and every trivalent vertex has out-valency exactly 1 or 3.  A decorated
pattern additionally carries vertex-disjoint 4-vertex hyperedges, each
inducing a C4 that is attached to the rest of the pattern by at most one edge;
every trivalent vertex inside a hyperedge must have out-valency 1.

Enumeration is exhaustive with isomorph rejection: dedup keys are canonical
forms of a coloured encoding in which each directed edge is subdivided by a
tail-marker and a head-marker vertex and each hyperedge becomes a marker
vertex joined to its four members.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import lru_cache

from .graphs import (
    Graph,
    GraphError,
    bits,
    canonical_form,
    canonical_labeling,
    graph6_decode,
    graph6_encode,
    is_triangle_free,
    mask_of,
)


class PatternError(ValueError):
    """Raised for structures violating the pattern or decoration rules."""


MAX_PATTERN_VERTICES = 14

# Encoding colours for the canonical form of oriented / decorated patterns.
_COLOR_VERTEX = 0
_COLOR_TAIL = 1
_COLOR_HEAD = 2
_COLOR_HYPER = 3


@dataclass(frozen=True)
class UnderlyingGraph:
    """Triangle-free graph with maximum valency three."""

    graph: Graph

    def __post_init__(self):
        g = self.graph
        if g.n > MAX_PATTERN_VERTICES:
            raise PatternError(f"underlying graph too large (n={g.n})")
        if any(g.degree(v) > 3 for v in range(g.n)):
            raise PatternError("underlying graph has a vertex of valency > 3")
        if not is_triangle_free(g):
            raise PatternError("underlying graph contains a triangle")


@dataclass(frozen=True)
class Pattern:
    """Underlying graph plus directed edges as (tail, head) pairs."""

    graph: Graph
    arcs: frozenset[tuple[int, int]]

    def __post_init__(self):
        UnderlyingGraph(self.graph)
        g = self.graph
        seen = set()
        for t, h in self.arcs:
            if not g.has_edge(t, h):
                raise PatternError(f"arc ({t},{h}) is not an edge")
            if frozenset((t, h)) in seen:
                raise PatternError(f"edge {{{t},{h}}} carries two directions")
            seen.add(frozenset((t, h)))
            if g.degree(t) != 3:
                raise PatternError(f"arc tail {t} is not trivalent")
        for v in range(g.n):
            if g.degree(v) == 3 and self.outdeg(v) not in (1, 3):
                raise PatternError(f"trivalent vertex {v} has out-valency {self.outdeg(v)}")

    @property
    def n(self) -> int:
        return self.graph.n

    @property
    def e(self) -> int:
        return self.graph.e

    def outdeg(self, v: int) -> int:
        return sum(1 for t, _ in self.arcs if t == v)

    def out_neighbors(self, v: int) -> list[int]:
        return sorted(h for t, h in self.arcs if t == v)

    def degree_square_sum(self) -> int:
        return sum(self.graph.degree(v) ** 2 for v in range(self.n))


@dataclass(frozen=True)
class H13Pattern:
    """Pattern plus vertex-disjoint C4 hyperedges."""

    pattern: Pattern
    hyperedges: frozenset[frozenset[int]]

    def __post_init__(self):
        g = self.pattern.graph
        used = 0
        for hyper in self.hyperedges:
            hm = mask_of(hyper)
            if len(hyper) != 4:
                raise PatternError("hyperedge is not a 4-set")
            if hm & used:
                raise PatternError("hyperedges overlap")
            used |= hm
            if not _induces_c4(g, hm):
                raise PatternError(f"hyperedge {sorted(hyper)} does not induce a C4")
            if _boundary_edges(g, hm) > 1:
                raise PatternError(f"hyperedge {sorted(hyper)} has more than one outgoing edge")
            for v in hyper:
                if g.degree(v) == 3 and self.pattern.outdeg(v) != 1:
                    raise PatternError(
                        f"trivalent hyperedge vertex {v} has out-valency {self.pattern.outdeg(v)}"
                    )

    @property
    def n(self) -> int:
        return self.pattern.n

    def has_outward_arc(self, hyper: frozenset[int]) -> bool:
        return any(t in hyper and h not in hyper for t, h in self.pattern.arcs)

    def sorted_hyperedges(self) -> list[frozenset[int]]:
        return sorted(self.hyperedges, key=lambda h: sorted(h))


@dataclass(frozen=True)
class ContractionMap:
    """Auxiliary pattern obtained by contracting each hyperedge to one vertex.

    ``origin[i]`` is either ``("v", w)`` for an untouched pattern vertex ``w``
    or ``("h", j)`` for the contraction of ``sorted_hyperedges()[j]``;
    ``outward[j]`` records whether hyperedge ``j`` had an outward directed edge.
    """

    auxiliary: Pattern
    origin: tuple[tuple[str, int], ...]
    outward: tuple[bool, ...]

    def hyperedge_vertices(self) -> list[int]:
        return [i for i, (kind, _) in enumerate(self.origin) if kind == "h"]


def _induces_c4(g: Graph, hm: int) -> bool:
    if hm.bit_count() != 4:
        return False
    degs = sorted((g.adj[v] & hm).bit_count() for v in bits(hm))
    return degs == [2, 2, 2, 2]


def _boundary_edges(g: Graph, hm: int) -> int:
    return sum((g.adj[v] & ~hm).bit_count() for v in bits(hm))


# -- canonical forms of oriented / decorated structures ----------------------


def _encode(pattern: Pattern, hyperedges=frozenset()) -> tuple[Graph, list[int]]:
    g = pattern.graph
    n = g.n
    arcs = sorted(pattern.arcs)
    extra = 2 * len(arcs) + len(hyperedges)
    colors = [_COLOR_VERTEX] * n
    edges = []
    directed = {frozenset(a) for a in arcs}
    for u, v in g.edges():
        if frozenset((u, v)) not in directed:
            edges.append((u, v))
    nxt = n
    for t, h in arcs:
        tail_mark, head_mark = nxt, nxt + 1
        nxt += 2
        colors += [_COLOR_TAIL, _COLOR_HEAD]
        edges += [(t, tail_mark), (tail_mark, head_mark), (head_mark, h)]
    for hyper in sorted(hyperedges, key=lambda h: sorted(h)):
        mark = nxt
        nxt += 1
        colors.append(_COLOR_HYPER)
        edges += [(mark, v) for v in sorted(hyper)]
    enc = Graph(n + extra, edges)
    return enc, colors


def pattern_canonical_form(pattern: Pattern, hyperedges=frozenset()) -> bytes:
    """Dedup key invariant under structure-preserving isomorphism."""
    enc, colors = _encode(pattern, hyperedges)
    return canonical_labeling(enc, colors)[1]


def decorated_canonical_form(hp: H13Pattern) -> bytes:
    return pattern_canonical_form(hp.pattern, hp.hyperedges)


# -- enumeration --------------------------------------------------------------


@lru_cache(maxsize=None)
def _underlying_level(n: int) -> tuple[Graph, ...]:
    if n == 1:
        return (Graph(1),)
    out: dict[bytes, Graph] = {}
    for g in _underlying_level(n - 1):
        eligible = [v for v in range(g.n) if g.degree(v) <= 2]
        for size in (1, 2, 3):
            for combo in itertools.combinations(eligible, size):
                cm = mask_of(combo)
                if any(g.adj[v] & cm for v in combo):
                    continue  # new vertex would close a triangle
                bigger = g.with_new_vertices(1, [(g.n, v) for v in combo])
                out.setdefault(canonical_form(bigger), bigger)
    return tuple(out[k] for k in sorted(out))


def enumerate_underlying(n: int) -> list[UnderlyingGraph]:
    """All connected triangle-free graphs with max valency three, one per
    isomorphism class, built by vertex augmentation with canonical-form
    rejection."""
    if not 1 <= n <= MAX_PATTERN_VERTICES:
        raise PatternError(f"n={n} outside 1..{MAX_PATTERN_VERTICES}")
    return [UnderlyingGraph(g) for g in _underlying_level(n)]


def enumerate_orientations(underlying: UnderlyingGraph | Graph) -> list[Pattern]:
    """All valid partial orientations of the underlying graph, one per
    isomorphism class of the oriented structure."""
    g = underlying.graph if isinstance(underlying, UnderlyingGraph) else underlying
    UnderlyingGraph(g)
    trivalent = [v for v in range(g.n) if g.degree(v) == 3]
    seen: dict[bytes, Pattern] = {}

    def assign(idx: int, arcs: list[tuple[int, int]], taken: set[frozenset[int]]) -> None:
        if idx == len(trivalent):
            pattern = Pattern(g, frozenset(arcs))
            seen.setdefault(pattern_canonical_form(pattern), pattern)
            return
        v = trivalent[idx]
        nbrs = sorted(bits(g.adj[v]))
        choices = [[(v, u)] for u in nbrs] + [[(v, u) for u in nbrs]]
        for choice in choices:
            keys = [frozenset(arc) for arc in choice]
            if any(k in taken for k in keys):
                continue  # edge already directed the other way
            taken.update(keys)
            assign(idx + 1, arcs + choice, taken)
            taken.difference_update(keys)

    assign(0, [], set())
    return [seen[k] for k in sorted(seen)]


def decoration_candidates(pattern: Pattern) -> list[frozenset[int]]:
    """4-sets usable as hyperedges: induced C4, at most one boundary edge,
    trivalent members of out-valency 1."""
    g = pattern.graph
    out = []
    for combo in itertools.combinations(range(g.n), 4):
        hm = mask_of(combo)
        if not _induces_c4(g, hm):
            continue
        if _boundary_edges(g, hm) > 1:
            continue
        if any(g.degree(v) == 3 and pattern.outdeg(v) != 1 for v in combo):
            continue
        out.append(frozenset(combo))
    return out


def enumerate_decorations(pattern: Pattern) -> list[H13Pattern]:
    """All hyperedge sets (the empty one included), one per isomorphism class."""
    candidates = decoration_candidates(pattern)
    for h1, h2 in itertools.combinations(candidates, 2):
        if h1 & h2:
            # Cannot happen in a subcubic host: overlapping C4s force either a
            # valency above three or a second boundary edge.
            raise PatternError("overlapping hyperedge candidates")
    seen: dict[bytes, H13Pattern] = {}
    for size in range(len(candidates) + 1):
        for subset in itertools.combinations(candidates, size):
            hp = H13Pattern(pattern, frozenset(subset))
            seen.setdefault(decorated_canonical_form(hp), hp)
    return [seen[k] for k in sorted(seen)]


def contract_to_auxiliary(hp: H13Pattern) -> ContractionMap:
    """Contract each hyperedge to a single vertex.

    Edges inside a hyperedge vanish; the at-most-one boundary edge survives,
    losing its direction when it pointed outward.  Directions elsewhere are
    preserved."""
    g = hp.pattern.graph
    hypers = hp.sorted_hyperedges()
    where: dict[int, int] = {}
    origin: list[tuple[str, int]] = []
    for v in range(g.n):
        if any(v in h for h in hypers):
            continue
        where[v] = len(origin)
        origin.append(("v", v))
    hyper_vertex: dict[int, int] = {}
    for j, hyper in enumerate(hypers):
        idx = len(origin)
        origin.append(("h", j))
        hyper_vertex[j] = idx
        for v in hyper:
            where[v] = idx

    edges = set()
    for u, v in g.edges():
        a, b = where[u], where[v]
        if a != b:
            edges.add((min(a, b), max(a, b)))
    aux_graph = Graph(len(origin), sorted(edges))

    outward = tuple(hp.has_outward_arc(h) for h in hypers)
    arcs = set()
    for t, h in hp.pattern.arcs:
        a, b = where[t], where[h]
        if a == b:
            continue  # internal to a hyperedge
        if any(t in hyper for hyper in hypers):
            continue  # outward edge becomes undirected
        arcs.add((a, b))
    auxiliary = Pattern(aux_graph, frozenset(arcs))
    if auxiliary.n != hp.n - 3 * len(hypers):
        raise PatternError("contraction size mismatch")
    return ContractionMap(auxiliary=auxiliary, origin=tuple(origin), outward=outward)


# -- disjoint unions -----------------------------------------------------------


def union_patterns(parts: list[H13Pattern]) -> H13Pattern:
    """Disjoint union of decorated patterns, components in the given order."""
    adj: list[int] = []
    arcs = set()
    hypers = set()
    offset = 0
    for part in parts:
        adj.extend(a << offset for a in part.pattern.graph.adj)
        arcs.update((t + offset, h + offset) for t, h in part.pattern.arcs)
        hypers.update(frozenset(v + offset for v in h) for h in part.hyperedges)
        offset += part.n
    pattern = Pattern(Graph.from_adj(adj), frozenset(arcs))
    return H13Pattern(pattern, frozenset(hypers))


# -- serialization --------------------------------------------------------------


def pattern_to_line(hp: H13Pattern) -> str:
    """``<graph6>;t>h,t>h,...;a.b.c.d,...`` with vertex labels as stored."""
    arcs = ",".join(f"{t}>{h}" for t, h in sorted(hp.pattern.arcs))
    hypers = ",".join(".".join(str(v) for v in sorted(h)) for h in hp.sorted_hyperedges())
    return f"{graph6_encode(hp.pattern.graph)};{arcs};{hypers}"


def pattern_from_line(line: str) -> H13Pattern:
    parts = line.strip().split(";")
    if len(parts) != 3:
        raise PatternError(f"pattern line needs 3 ';'-separated fields, got {len(parts)}")
    try:
        g = graph6_decode(parts[0])
    except GraphError as exc:
        raise PatternError(f"bad graph6 field: {exc}") from exc
    arcs = set()
    if parts[1]:
        for item in parts[1].split(","):
            t, _, h = item.partition(">")
            if not _:
                raise PatternError(f"bad arc {item!r}")
            arcs.add((int(t), int(h)))
    hypers = set()
    if parts[2]:
        for item in parts[2].split(","):
            vs = tuple(int(x) for x in item.split("."))
            if len(vs) != 4:
                raise PatternError(f"bad hyperedge {item!r}")
            hypers.add(frozenset(vs))
    return H13Pattern(Pattern(g, frozenset(arcs)), frozenset(hypers))
