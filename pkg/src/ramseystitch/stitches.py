"""Stitch constructors.

Each constructor grows a host graph by a fixed gadget wired onto bipartite
base sets inside the host, and reports the distinguished new vertices.  Base
parts must be disjoint independent sets; when exactly one part of a base is a
singleton it must be the A part.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

from .graphs import Graph, bits


class StitchError(ValueError):
    """Raised when a base set is unusable for the requested stitch."""


@dataclass(frozen=True)
class BipartiteBase:
    """Base set M = A ∪ B of a stitch, both parts as vertex bitmasks."""

    a: int
    b: int

    @property
    def mask(self) -> int:
        return self.a | self.b


@dataclass(frozen=True)
class StitchResult:
    """New graph plus the distinguished vertices of the gadget.

    ``covers[i]`` lists, for base i, the new vertices joined onto its A part
    and onto its B part; later base resolutions at the host vertices read
    these off instead of searching the grown graph."""

    graph: Graph
    apex: int
    coapex: Optional[int]
    new_vertices: tuple[int, ...]
    covers: tuple[tuple[tuple[int, ...], tuple[int, ...]], ...] = ()


def _is_independent(g: Graph, mask: int) -> bool:
    for v in bits(mask):
        if g.adj[v] & mask:
            return False
    return True


def _check_base(g: Graph, base: BipartiteBase) -> None:
    if base.a == 0:
        raise StitchError("base part A is empty")
    if base.b == 0:
        raise StitchError("base part B is empty")
    if base.a & base.b:
        raise StitchError("base parts overlap")
    if base.mask & ~g.vertex_mask():
        raise StitchError("base outside vertex range")
    if not _is_independent(g, base.a):
        raise StitchError("base part A is not independent")
    if not _is_independent(g, base.b):
        raise StitchError("base part B is not independent")
    if base.b.bit_count() == 1 and base.a.bit_count() != 1:
        raise StitchError("singleton part must be A")


def _check_disjoint(bases: tuple[BipartiteBase, ...]) -> None:
    seen = 0
    for base in bases:
        if seen & base.mask:
            raise StitchError("bases overlap")
        seen |= base.mask


def star_base(g: Graph, u: int) -> BipartiteBase:
    """The closed-neighbourhood base N[u] with A = {u}."""
    if g.degree(u) == 0:
        raise StitchError(f"vertex {u} is isolated; N[u] has empty B part")
    return BipartiteBase(a=1 << u, b=g.adj[u])


def cr1(g: Graph) -> StitchResult:
    """Add an isolated edge; its endpoints are apex and coapex."""
    v1, v2 = g.n, g.n + 1
    out = g.with_new_vertices(2, [(v1, v2)])
    return StitchResult(out, apex=v1, coapex=v2, new_vertices=(v1, v2))


def cr2(g: Graph, base: BipartiteBase) -> StitchResult:
    """2-stitch: apex s plus a over A and b over B.

    The coapex (the apex neighbour adjacent to the base's A vertex) is only
    defined when A is a singleton; otherwise callers get both new neighbour
    vertices through ``new_vertices`` and no coapex.
    """
    _check_base(g, base)
    s, a, b = g.n, g.n + 1, g.n + 2
    edges = [(s, a), (s, b)]
    edges += [(a, x) for x in bits(base.a)]
    edges += [(b, y) for y in bits(base.b)]
    out = g.with_new_vertices(3, edges)
    coapex = a if base.a.bit_count() == 1 else None
    return StitchResult(out, apex=s, coapex=coapex, new_vertices=(s, a, b),
                        covers=(((a,), (b,)),))


def cr_c4(g: Graph, m1: BipartiteBase, m2: BipartiteBase) -> StitchResult:
    """C4 stitch: 4-cycle c1 c2 c3 c4 with c1-A1, c2-A2, c3-B1, c4-B2 joins."""
    _check_base(g, m1)
    _check_base(g, m2)
    _check_disjoint((m1, m2))
    c1, c2, c3, c4 = range(g.n, g.n + 4)
    edges = [(c1, c2), (c2, c3), (c3, c4), (c4, c1)]
    edges += [(c1, x) for x in bits(m1.a)]
    edges += [(c3, x) for x in bits(m1.b)]
    edges += [(c2, x) for x in bits(m2.a)]
    edges += [(c4, x) for x in bits(m2.b)]
    out = g.with_new_vertices(4, edges)
    return StitchResult(out, apex=c2, coapex=c1, new_vertices=(c1, c2, c3, c4),
                        covers=(((c1,), (c3,)), ((c2,), (c4,))))


def cr_triangle(g: Graph, m1: BipartiteBase, m2: BipartiteBase, m3: BipartiteBase) -> StitchResult:
    """Triangular stitch: star v1-(v2..v5); v2 over all A parts, v3/v4/v5 over the B parts."""
    for m in (m1, m2, m3):
        _check_base(g, m)
    _check_disjoint((m1, m2, m3))
    v1, v2, v3, v4, v5 = range(g.n, g.n + 5)
    edges = [(v1, v2), (v1, v3), (v1, v4), (v1, v5)]
    for m in (m1, m2, m3):
        edges += [(v2, x) for x in bits(m.a)]
    edges += [(v3, x) for x in bits(m1.b)]
    edges += [(v4, x) for x in bits(m2.b)]
    edges += [(v5, x) for x in bits(m3.b)]
    out = g.with_new_vertices(5, edges)
    return StitchResult(out, apex=v1, coapex=v2, new_vertices=(v1, v2, v3, v4, v5),
                        covers=(((v2,), (v3,)), ((v2,), (v4,)), ((v2,), (v5,))))


def cr_k23(
    g: Graph,
    m1: BipartiteBase,
    m2: BipartiteBase,
    m3: BipartiteBase,
    drop_v4_a3: bool = False,
) -> StitchResult:
    """K_{2,3} stitch on v1..v5 with joins v1-A1, v2-B1, v3-A2, v4-B2, v4-A3, v5-B3, v3-A3.

    The join list gives A3 two new neighbours (v3 and v4); ``drop_v4_a3``
    switches to the alternate reading without the v4-A3 join.  The default is
    validated against the worked five-step trace and the count tables.
    """
    for m in (m1, m2, m3):
        _check_base(g, m)
    _check_disjoint((m1, m2, m3))
    v1, v2, v3, v4, v5 = range(g.n, g.n + 5)
    edges = [(v1, v3), (v1, v4), (v1, v5), (v2, v3), (v2, v4), (v2, v5)]
    edges += [(v1, x) for x in bits(m1.a)]
    edges += [(v2, x) for x in bits(m1.b)]
    edges += [(v3, x) for x in bits(m2.a)]
    edges += [(v4, x) for x in bits(m2.b)]
    if not drop_v4_a3:
        edges += [(v4, x) for x in bits(m3.a)]
    edges += [(v5, x) for x in bits(m3.b)]
    edges += [(v3, x) for x in bits(m3.a)]
    out = g.with_new_vertices(5, edges)
    a3 = (v3,) if drop_v4_a3 else (v3, v4)
    return StitchResult(out, apex=v1, coapex=None, new_vertices=(v1, v2, v3, v4, v5),
                        covers=(((v1,), (v2,)), ((v3,), (v4,)), (a3, (v5,))))
