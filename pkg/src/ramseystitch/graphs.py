"""Immutable simple graphs on integer bitsets.

Vertices are 0..n-1 and every vertex set (neighbourhoods included) is an int
bitmask, so set algebra is plain integer arithmetic.  The module carries the
exact machinery everything else leans on: an exact independence-number solver,
triangle tests, destabiliser / stitch predicates, a canonical labelling for
vertex-coloured graphs, and graph6 text I/O.
"""

from __future__ import annotations

from typing import Iterable, Iterator, Optional, Sequence

MAX_VERTICES = 128


class GraphError(ValueError):
    """Raised for malformed graphs, vertex ranges, or bad encodings."""


def bits(mask: int) -> Iterator[int]:
    """Yield the set bit positions of ``mask`` in increasing order."""
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


def mask_of(vertices: Iterable[int]) -> int:
    m = 0
    for v in vertices:
        m |= 1 << v
    return m


class Graph:
    """Immutable undirected simple graph with bitset adjacency.

    ``adj[v]`` is the neighbour bitmask of ``v``; the structure is symmetric
    and irreflexive.  Instances hash and compare by labelled adjacency and
    memoise their independence number and canonical form.
    """

    __slots__ = ("n", "adj", "e", "_alpha", "_canon")

    def __init__(self, n: int, edges: Iterable[tuple[int, int]] = ()):
        if n < 0 or n > MAX_VERTICES:
            raise GraphError(f"vertex count {n} outside 0..{MAX_VERTICES}")
        adj = [0] * n
        for u, v in edges:
            if not (0 <= u < n and 0 <= v < n):
                raise GraphError(f"edge ({u},{v}) out of range for n={n}")
            if u == v:
                raise GraphError(f"loop at vertex {u}")
            adj[u] |= 1 << v
            adj[v] |= 1 << u
        object.__setattr__(self, "n", n)
        object.__setattr__(self, "adj", tuple(adj))
        object.__setattr__(self, "e", sum(a.bit_count() for a in adj) // 2)
        object.__setattr__(self, "_alpha", None)
        object.__setattr__(self, "_canon", None)

    @classmethod
    def from_adj(cls, adj: Sequence[int]) -> "Graph":
        g = cls.__new__(cls)
        n = len(adj)
        if n > MAX_VERTICES:
            raise GraphError(f"vertex count {n} exceeds {MAX_VERTICES}")
        full = (1 << n) - 1
        for v, a in enumerate(adj):
            if a & ~full or (a >> v) & 1:
                raise GraphError(f"adjacency row {v} out of range or reflexive")
        for v, a in enumerate(adj):
            for u in bits(a):
                if not (adj[u] >> v) & 1:
                    raise GraphError(f"asymmetric adjacency between {u} and {v}")
        object.__setattr__(g, "n", n)
        object.__setattr__(g, "adj", tuple(adj))
        object.__setattr__(g, "e", sum(a.bit_count() for a in adj) // 2)
        object.__setattr__(g, "_alpha", None)
        object.__setattr__(g, "_canon", None)
        return g

    def __setattr__(self, name, value):
        raise AttributeError("Graph is immutable")

    def __eq__(self, other):
        return isinstance(other, Graph) and self.n == other.n and self.adj == other.adj

    def __hash__(self):
        return hash((self.n, self.adj))

    def __repr__(self):
        return f"Graph(n={self.n}, e={self.e})"

    # -- basic queries ------------------------------------------------------

    def vertex_mask(self) -> int:
        return (1 << self.n) - 1

    def neighbors(self, v: int) -> int:
        self._check_vertex(v)
        return self.adj[v]

    def closed_neighborhood(self, v: int) -> int:
        self._check_vertex(v)
        return self.adj[v] | (1 << v)

    def degree(self, v: int) -> int:
        self._check_vertex(v)
        return self.adj[v].bit_count()

    def has_edge(self, u: int, v: int) -> bool:
        self._check_vertex(u)
        self._check_vertex(v)
        return (self.adj[u] >> v) & 1 == 1

    def edges(self) -> Iterator[tuple[int, int]]:
        for v in range(self.n):
            for u in bits(self.adj[v] & ((1 << v) - 1)):
                yield (u, v)

    def _check_vertex(self, v: int) -> None:
        if not (0 <= v < self.n):
            raise GraphError(f"vertex {v} out of range for n={self.n}")

    # -- derived graphs -----------------------------------------------------

    def with_new_vertices(self, count: int, new_edges: Iterable[tuple[int, int]]) -> "Graph":
        """Append ``count`` fresh vertices and the given edges."""
        n = self.n + count
        adj = list(self.adj) + [0] * count
        for u, v in new_edges:
            if not (0 <= u < n and 0 <= v < n) or u == v:
                raise GraphError(f"bad new edge ({u},{v})")
            adj[u] |= 1 << v
            adj[v] |= 1 << u
        return Graph.from_adj(adj)

    def delete_edge(self, u: int, v: int) -> "Graph":
        if not self.has_edge(u, v):
            raise GraphError(f"no edge ({u},{v})")
        adj = list(self.adj)
        adj[u] &= ~(1 << v)
        adj[v] &= ~(1 << u)
        return Graph.from_adj(adj)

    def induced_subgraph(self, keep: int) -> tuple["Graph", dict[int, int]]:
        """Induced subgraph on the bitmask ``keep``; also maps old -> new labels."""
        if keep & ~self.vertex_mask():
            raise GraphError("subgraph mask outside vertex range")
        old = list(bits(keep))
        relabel = {v: i for i, v in enumerate(old)}
        adj = [0] * len(old)
        for i, v in enumerate(old):
            for u in bits(self.adj[v] & keep):
                adj[i] |= 1 << relabel[u]
        return Graph.from_adj(adj), relabel

    def relabel(self, perm: Sequence[int]) -> "Graph":
        """Image under ``perm`` (``perm[v]`` is the new label of ``v``)."""
        if sorted(perm) != list(range(self.n)):
            raise GraphError("relabeling is not a permutation")
        adj = [0] * self.n
        for v in range(self.n):
            t = 0
            for u in bits(self.adj[v]):
                t |= 1 << perm[u]
            adj[perm[v]] = t
        return Graph.from_adj(adj)

    def disjoint_union(self, other: "Graph") -> "Graph":
        adj = list(self.adj) + [a << self.n for a in other.adj]
        return Graph.from_adj(adj)

    def components(self) -> list[int]:
        """Connected components as bitmasks, ordered by least vertex."""
        seen = 0
        out = []
        for v in range(self.n):
            if (seen >> v) & 1:
                continue
            comp = 1 << v
            frontier = 1 << v
            while frontier:
                grow = 0
                for u in bits(frontier):
                    grow |= self.adj[u]
                frontier = grow & ~comp
                comp |= grow
            out.append(comp)
            seen |= comp
        return out

    def is_connected(self) -> bool:
        return self.n <= 1 or len(self.components()) == 1


# -- elementary predicates ---------------------------------------------------


def is_triangle_free(g: Graph) -> bool:
    for u, v in g.edges():
        if g.adj[u] & g.adj[v]:
            return False
    return True


def closed_neighborhood_deletion(g: Graph, v: int) -> tuple[Graph, dict[int, int]]:
    """The graph ``G_v``: drop v, its neighbours, and all incident edges."""
    keep = g.vertex_mask() & ~g.closed_neighborhood(v)
    return g.induced_subgraph(keep)


# -- exact independence number -----------------------------------------------


def _mis_mask(adj: Sequence[int], avail: int) -> int:
    """Exact max independent set size inside ``avail``.

    Branch and bound: vertices of available degree <= 1 are always safe to
    take; otherwise branch on a maximum-degree vertex (include or exclude).
    """
    size = 0
    while True:
        reduced = False
        m = avail
        while m:
            low = m & -m
            v = low.bit_length() - 1
            m ^= low
            if (adj[v] & avail).bit_count() <= 1:
                size += 1
                avail &= ~(adj[v] | low)
                reduced = True
                break
        if not reduced:
            break
    if not avail:
        return size
    best_v = -1
    best_d = -1
    m = avail
    while m:
        low = m & -m
        v = low.bit_length() - 1
        m ^= low
        d = (adj[v] & avail).bit_count()
        if d > best_d:
            best_v, best_d = v, d
    v = best_v
    include = 1 + _mis_mask(adj, avail & ~(adj[v] | (1 << v)))
    exclude = _mis_mask(adj, avail & ~(1 << v))
    return size + max(include, exclude)


def independence_number(g: Graph) -> int:
    """Exact alpha(G), summed over connected components."""
    if g._alpha is not None:
        return g._alpha
    total = 0
    for comp in g.components():
        total += _mis_mask(g.adj, comp)
    object.__setattr__(g, "_alpha", total)
    return total


def maximum_independent_sets(g: Graph) -> list[int]:
    """All maximum independent sets, as bitmasks.  Intended for small graphs."""
    alpha = independence_number(g)
    out = []

    def grow(chosen: int, avail: int, size: int) -> None:
        if size == alpha:
            out.append(chosen)
            return
        if size + avail.bit_count() < alpha:
            return
        low = avail & -avail
        v = low.bit_length() - 1
        grow(chosen | low, avail & ~(g.adj[v] | low), size + 1)
        grow(chosen, avail ^ low, size)

    grow(0, g.vertex_mask(), 0)
    return out


# -- destabilisers and stitches ------------------------------------------------


def _as_mask(g: Graph, vertices) -> int:
    if isinstance(vertices, int):
        m = vertices
    else:
        m = mask_of(vertices)
    if m & ~g.vertex_mask():
        raise GraphError("vertex set outside graph range")
    return m


def is_destabiliser(g: Graph, m) -> bool:
    """True iff every maximum independent set of G meets the set."""
    mm = _as_mask(g, m)
    rest, _ = g.induced_subgraph(g.vertex_mask() & ~mm)
    return independence_number(rest) < independence_number(g)


def is_minimal_destabiliser(g: Graph, m) -> bool:
    mm = _as_mask(g, m)
    if not is_destabiliser(g, mm):
        return False
    for v in bits(mm):
        if is_destabiliser(g, mm & ~(1 << v)):
            return False
    return True


def classify_d_stitch(g: Graph, v: int) -> Optional[int]:
    """deg(v) if (G, v) is a d-stitch, else None.

    Requires alpha(G_v) = alpha(G) - 1 and that deleting any single edge at v
    raises alpha.
    """
    g._check_vertex(v)
    alpha = independence_number(g)
    gv, _ = closed_neighborhood_deletion(g, v)
    if independence_number(gv) != alpha - 1:
        return None
    for u in bits(g.adj[v]):
        if independence_number(g.delete_edge(v, u)) <= alpha:
            return None
    return g.degree(v)


def is_edge_critical(g: Graph) -> bool:
    alpha = independence_number(g)
    for u, v in g.edges():
        if independence_number(g.delete_edge(u, v)) <= alpha:
            return False
    return True


# -- canonical labelling -------------------------------------------------------


def _refine(adj: Sequence[int], cells: list[list[int]]) -> list[list[int]]:
    """Equitable refinement of an ordered partition by neighbour counts."""
    cells = [list(c) for c in cells]
    stable = False
    while not stable:
        stable = True
        for splitter_idx in range(len(cells)):
            smask = 0
            for v in cells[splitter_idx]:
                smask |= 1 << v
            new_cells: list[list[int]] = []
            changed = False
            for cell in cells:
                if len(cell) == 1:
                    new_cells.append(cell)
                    continue
                groups: dict[int, list[int]] = {}
                for v in cell:
                    groups.setdefault((adj[v] & smask).bit_count(), []).append(v)
                if len(groups) == 1:
                    new_cells.append(cell)
                else:
                    changed = True
                    for key in sorted(groups):
                        new_cells.append(groups[key])
            cells = new_cells
            if changed:
                stable = False
                break
    return cells


def _leaf_encoding(adj: Sequence[int], colors: Sequence[int], order: list[int]) -> bytes:
    pos = {v: i for i, v in enumerate(order)}
    n = len(order)
    out = bytearray()
    out.append(n)
    for v in order:
        out.append(colors[v])
    acc = 0
    nbits = 0
    for i in range(n):
        row = adj[order[i]]
        for j in range(i + 1, n):
            acc = (acc << 1) | ((row >> order[j]) & 1)
            nbits += 1
            if nbits == 8:
                out.append(acc)
                acc = 0
                nbits = 0
    if nbits:
        out.append(acc << (8 - nbits))
    return bytes(out)


def _canon_component(adj: Sequence[int], colors: Sequence[int], verts: list[int]) -> tuple[bytes, list[int]]:
    """Canonical form and ordering of one connected component.

    Individualisation-refinement: refine to an equitable partition, branch on
    the first non-singleton cell, and keep the lexicographically least leaf
    encoding.  Automorphisms discovered between equal leaves prune sibling
    branches (only those fixing the current individualised prefix are used).
    """
    initial: dict[int, list[int]] = {}
    for v in verts:
        initial.setdefault(colors[v], []).append(v)
    cells0 = [initial[c] for c in sorted(initial)]

    best: list = [None, None]  # encoding, order
    automorphisms: list[dict[int, int]] = []

    def search(cells: list[list[int]], fixed: tuple[int, ...]) -> None:
        cells = _refine(adj, cells)
        target = None
        for idx, cell in enumerate(cells):
            if len(cell) > 1:
                target = idx
                break
        if target is None:
            order = [c[0] for c in cells]
            enc = _leaf_encoding(adj, colors, order)
            if best[0] is None or enc < best[0]:
                best[0] = enc
                best[1] = order
            elif enc == best[0]:
                prev = best[1]
                automorphisms.append({prev[i]: order[i] for i in range(len(order))})
            return
        parent = {}
        for v in verts:
            parent[v] = v

        def find(x: int) -> int:
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        def merge_usable() -> None:
            for a in automorphisms:
                if all(a.get(f, f) == f for f in fixed):
                    for x, y in a.items():
                        rx, ry = find(x), find(y)
                        if rx != ry:
                            parent[rx] = ry

        tried: list[int] = []
        for v in cells[target]:
            merge_usable()
            if any(find(v) == find(t) for t in tried):
                continue
            tried.append(v)
            sub = (
                cells[:target]
                + [[v], [u for u in cells[target] if u != v]]
                + cells[target + 1 :]
            )
            search(sub, fixed + (v,))

    search(cells0, ())
    return best[0], best[1]


def canonical_labeling(g: Graph, colors: Optional[Sequence[int]] = None) -> tuple[tuple[int, ...], bytes]:
    """Canonical permutation and form of a (vertex-coloured) graph.

    Returns ``(perm, form)`` where ``perm[v]`` is the canonical position of
    ``v``.  The form is invariant under colour-preserving relabelling and
    distinguishes non-isomorphic coloured graphs.  Components are canonicalised
    separately and concatenated in sorted order of their forms.
    """
    n = g.n
    if colors is None:
        norm = [0] * n
    else:
        if len(colors) != n:
            raise GraphError("color sequence length mismatch")
        palette = {c: i for i, c in enumerate(sorted(set(colors)))}
        norm = [palette[c] for c in colors]
        if len(palette) > 255:
            raise GraphError("too many distinct colors")

    pieces = []
    for comp in g.components():
        verts = list(bits(comp))
        enc, order = _canon_component(g.adj, norm, verts)
        pieces.append((enc, order))
    pieces.sort(key=lambda p: p[0])

    perm = [0] * n
    pos = 0
    form = bytearray()
    form.append(len(pieces))
    for enc, order in pieces:
        form.extend(len(enc).to_bytes(2, "big"))
        form.extend(enc)
        for v in order:
            perm[v] = pos
            pos += 1
    return tuple(perm), bytes(form)


def canonical_form(g: Graph) -> bytes:
    if g._canon is None:
        object.__setattr__(g, "_canon", canonical_labeling(g)[1])
    return g._canon


def are_isomorphic(g1: Graph, g2: Graph) -> bool:
    if g1.n != g2.n or g1.e != g2.e:
        return False
    return canonical_form(g1) == canonical_form(g2)


# -- graph6 ---------------------------------------------------------------------


def graph6_encode(g: Graph) -> str:
    """Standard graph6 line: 6-bit chunks of the upper triangle, column-major."""
    n = g.n
    if n <= 62:
        head = chr(63 + n)
    else:
        head = "~" + "".join(chr(63 + ((n >> s) & 63)) for s in (12, 6, 0))
    bits_acc: list[int] = []
    for col in range(1, n):
        column = g.adj[col]
        for row in range(col):
            bits_acc.append((column >> row) & 1)
    chars = []
    for i in range(0, len(bits_acc), 6):
        chunk = bits_acc[i : i + 6]
        chunk += [0] * (6 - len(chunk))
        val = 0
        for b in chunk:
            val = (val << 1) | b
        chars.append(chr(63 + val))
    return head + "".join(chars)


def graph6_decode(text: str) -> Graph:
    s = text.strip()
    if not s:
        raise GraphError("empty graph6 string")
    for ch in s:
        if not (63 <= ord(ch) <= 126):
            raise GraphError(f"malformed graph6 character {ch!r}")
    if s[0] == "~":
        if len(s) < 4 or s[1] == "~":
            raise GraphError("unsupported graph6 size header")
        n = 0
        for ch in s[1:4]:
            n = (n << 6) | (ord(ch) - 63)
        body = s[4:]
    else:
        n = ord(s[0]) - 63
        body = s[1:]
    if n > MAX_VERTICES:
        raise GraphError(f"graph6 order {n} exceeds {MAX_VERTICES}")
    nbits = n * (n - 1) // 2
    expect = (nbits + 5) // 6
    if len(body) != expect:
        raise GraphError(f"graph6 body has {len(body)} chars, expected {expect}")
    stream = 0
    for ch in body:
        stream = (stream << 6) | (ord(ch) - 63)
    total = 6 * len(body)
    pad = total - nbits
    if pad and stream & ((1 << pad) - 1):
        raise GraphError("nonzero padding bits in graph6 body")
    edges = []
    idx = 0
    for col in range(1, n):
        for row in range(col):
            if (stream >> (total - 1 - idx)) & 1:
                edges.append((row, col))
            idx += 1
    return Graph(n, edges)


def read_graph6_lines(lines: Iterable[str]) -> list[Graph]:
    out = []
    for lineno, line in enumerate(lines, 1):
        line = line.strip()
        if not line or line.startswith(">>"):
            continue
        try:
            out.append(graph6_decode(line))
        except GraphError as exc:
            raise GraphError(f"line {lineno}: {exc}") from exc
    return out
