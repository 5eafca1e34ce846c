"""Recursive graph construction driven by a pattern.

Pattern vertices are consumed one at a time in a connected-prefix order; each
step applies one stitch chosen by the valency of the current vertex inside the
processed prefix, while bookkeeping maps (apex, coapex, active, faces) track
where the next bases live.

Besides the four maps, the engine records per pattern vertex the local gadget
structure its stitches created: the 4-cycle closed around its apex (used as
the base when its out-edge points at the vertex being processed) and the two
cover vertices that bound the 4-vertex path base of the all-edges-out case.
Searching the grown graph for these structures instead is not well defined:
later stitches can close additional 4-cycles through an apex, and which
substructure is meant depends on when it was created.

Decorated patterns are built by contracting every hyperedge, running the
ordinary construction on the auxiliary pattern, and then expanding each
contracted vertex into an embedded copy of the unique 13-vertex quartic
triangle-free extremal graph.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from typing import Optional, Sequence

from .graphs import (
    Graph,
    bits,
    canonical_labeling,
    independence_number,
    is_minimal_destabiliser,
    is_triangle_free,
)
from .patterns import ContractionMap, H13Pattern, Pattern, contract_to_auxiliary
from .stitches import (
    BipartiteBase,
    StitchError,
    cr1,
    cr2,
    cr_c4,
    cr_k23,
    cr_triangle,
    star_base,
)


class BuildError(RuntimeError):
    """A structural claim of the construction failed for the given input."""


# Differences (mod 13) realised as edges of the order-13 circulant; vertices at
# circle positions 1..13 are adjacent iff their positions differ by +-1 or +-5.
_CIRCULANT_DIFFS = frozenset((1, 5, 8, 12))


def h13_position_pairs() -> list[tuple[int, int]]:
    """Adjacent position pairs (i, j), 1 <= i < j <= 13, of the circulant."""
    return [
        (i, j)
        for i in range(1, 14)
        for j in range(i + 1, 14)
        if (j - i) % 13 in _CIRCULANT_DIFFS
    ]


def h13_graph() -> Graph:
    """The unique (3,5;13,26)-graph as a circulant on vertices 0..12."""
    return Graph(13, [(i - 1, j - 1) for i, j in h13_position_pairs()])


@dataclass
class BuildState:
    """State after processing a prefix of the pattern vertices.

    ``mate`` is the gadget vertex in apex position's A-cover role (equal to the
    coapex whenever that is defined), ``ladder`` the recorded 4-cycle through
    the apex, and ``path_x`` / ``path_y`` the cover vertices bounding the
    all-out path base (x adjacent to the apex, y to the mate)."""

    graph: Graph
    k: int = 0
    processed: list[int] = field(default_factory=list)
    processed_mask: int = 0
    apex: dict[int, int] = field(default_factory=dict)
    coapex: dict[int, Optional[int]] = field(default_factory=dict)
    active: dict[int, frozenset[int]] = field(default_factory=dict)
    faces: dict[tuple[int, int], Optional[int]] = field(default_factory=dict)
    mate: dict[int, Optional[int]] = field(default_factory=dict)
    ladder: dict[int, frozenset[int]] = field(default_factory=dict)
    path_x: dict[int, Optional[int]] = field(default_factory=dict)
    path_y: dict[int, Optional[int]] = field(default_factory=dict)


@dataclass(frozen=True)
class BaseResolution:
    """Outcome of the four-way case split for a processed neighbour."""

    case_tag: str  # "C1" | "C2" | "C3" | "C4"
    base: BipartiteBase


def _deg_k(pattern: Pattern, state: BuildState, v: int) -> int:
    return (pattern.graph.adj[v] & state.processed_mask).bit_count()


def resolve_case(pattern: Pattern, state: BuildState, q: int, current: int) -> str:
    """Which of the four conditions holds for processed neighbour q."""
    dq = _deg_k(pattern, state, q)
    if dq == 2:
        return "C1"
    if dq != 3:
        raise BuildError(f"vertex {q} has processed valency {dq}; no case applies")
    out = pattern.out_neighbors(q)
    if pattern.outdeg(q) == 3:
        return "C2"
    if len(out) != 1:
        raise BuildError(f"trivalent vertex {q} has out-valency {pattern.outdeg(q)}")
    r = out[0]
    if r == current:
        return "C4"
    if not (state.processed_mask >> r) & 1:
        raise BuildError(f"vertex {q} directs to unprocessed vertex {r}")
    apex = state.apex[q]
    coapex = state.coapex[q]
    c1 = apex in state.active[q] and state.faces.get((q, apex)) == r
    c3 = coapex is not None and coapex in state.active[q] and state.faces.get((q, coapex)) == r
    if c1 and c3:
        raise BuildError(f"vertex {q}: conditions C1 and C3 both hold")
    if c1:
        return "C1"
    if c3:
        return "C3"
    raise BuildError(f"vertex {q}: no case applies (faces at apex/coapex do not match {r})")


def _ladder_base(state: BuildState, q: int) -> BipartiteBase:
    cycle = state.ladder.get(q)
    if cycle is None:
        raise BuildError(f"vertex {q}: no recorded 4-cycle for its apex")
    apex = state.apex[q]
    g = state.graph
    a_mask = 1 << apex
    b_mask = 0
    for v in cycle:
        if v == apex:
            continue
        if (g.adj[apex] >> v) & 1:
            b_mask |= 1 << v
        else:
            a_mask |= 1 << v
    if a_mask.bit_count() != 2 or b_mask.bit_count() != 2:
        raise BuildError(f"vertex {q}: recorded cycle {sorted(cycle)} is not a chordless 4-cycle")
    return BipartiteBase(a=a_mask, b=b_mask)


def _path_base(state: BuildState, q: int) -> BipartiteBase:
    apex = state.apex[q]
    mate = state.mate.get(q)
    x = state.path_x.get(q)
    y = state.path_y.get(q)
    if mate is None or x is None or y is None:
        raise BuildError(f"vertex {q}: path base underdetermined (mate={mate}, x={x}, y={y})")
    verts = {x, apex, mate, y}
    if len(verts) != 4:
        raise BuildError(f"vertex {q}: degenerate path base {sorted(verts)}")
    g = state.graph
    for u, v in ((x, apex), (apex, mate), (mate, y)):
        if not (g.adj[u] >> v) & 1:
            raise BuildError(f"vertex {q}: recorded path is broken at ({u},{v})")
    return BipartiteBase(a=(1 << apex) | (1 << y), b=(1 << x) | (1 << mate))


def resolve_base(pattern: Pattern, state: BuildState, q: int, current: int) -> BaseResolution:
    """The stitch base contributed by processed neighbour q."""
    tag = resolve_case(pattern, state, q, current)
    g = state.graph
    if tag == "C1":
        return BaseResolution("C1", star_base(g, state.apex[q]))
    if tag == "C3":
        return BaseResolution("C3", star_base(g, state.coapex[q]))
    if tag == "C4":
        return BaseResolution("C4", _ladder_base(state, q))
    return BaseResolution("C2", _path_base(state, q))


def _resolve_single_vertex(pattern: Pattern, state: BuildState, q: int, current: int) -> int:
    """Apex or coapex of q, whichever of C1/C3 holds (the two trivalent cases
    take closed-neighbourhood bases at their side vertices)."""
    tag = resolve_case(pattern, state, q, current)
    if tag == "C1":
        return state.apex[q]
    if tag == "C3":
        coapex = state.coapex[q]
        if coapex is None:
            raise BuildError(f"C3 at {q}: coapex undefined")
        return coapex
    raise BuildError(f"vertex {q}: expected C1 or C3, got {tag}")


def _record_side_structures(
    state: BuildState,
    slot_info: list[tuple[int, BipartiteBase, int]],
    covers: tuple[tuple[tuple[int, ...], tuple[int, ...]], ...],
) -> None:
    """Record ladders and path covers for base-owning neighbours.

    ``slot_info`` holds (pattern vertex, base, its processed valency) per base
    slot, aligned with the stitch's ``covers``.  A vertex reaching processed
    valency 2 just closed the 4-cycle around its apex: the base there was its
    apex closed neighbourhood, so the cycle is apex + B part + the B cover.
    A vertex at processed valency 1 (the isolated-edge partner) gets its path
    tail: the new vertex covering its coapex."""
    for (q, base, dq), (a_cov, b_cov) in zip(slot_info, covers):
        if dq == 2:
            if base.a != 1 << state.apex[q] or base.b.bit_count() != 2 or len(b_cov) != 1:
                raise BuildError(f"vertex {q}: unexpected base shape at second edge")
            state.ladder[q] = frozenset([state.apex[q], b_cov[0], *bits(base.b)])
            state.path_x[q] = a_cov[0] if len(a_cov) == 1 else None
        elif dq == 1:
            state.path_y[q] = a_cov[0] if len(a_cov) == 1 else None


def _neighbor_side_effects(
    pattern: Pattern,
    state: BuildState,
    q: int,
    current: int,
    pre_active: dict[int, frozenset[int]],
    pre_faces: dict[tuple[int, int], Optional[int]],
) -> None:
    """Post-stitch map updates at an already processed neighbour q."""
    dq = _deg_k(pattern, state, q)
    if dq == 1:
        state.faces[(q, state.apex[q])] = None
        state.faces[(q, state.coapex[q])] = current
    elif dq == 2:
        apex = state.apex[q]
        if apex not in state.active[q]:
            raise BuildError(f"vertex {q}: apex not active at second neighbour")
        state.faces[(q, apex)] = current
    else:
        for r in pattern.out_neighbors(q):
            if r == current or not (state.processed_mask >> r) & 1:
                continue
            for v in pre_active.get(r, frozenset()):
                if pre_faces.get((r, v)) == q:
                    state.active[r] = state.active[r] - {v}
                    state.faces.pop((r, v), None)
        for v in state.active.get(q, frozenset()):
            state.faces.pop((q, v), None)
        state.active[q] = frozenset()


def step(
    pattern: Pattern,
    state: BuildState,
    p_k: int,
    verify: bool = False,
    k23_out_slot: int = 1,
) -> BuildState:
    """Process one pattern vertex, mutating and returning the state.

    ``k23_out_slot`` fixes which base slot of the K_{2,3} stitch receives the
    out-neighbour of a vertex handled by the final case (1 matches the worked
    trace, 3 the literal case listing; the outputs are isomorphic).
    """
    if (state.processed_mask >> p_k) & 1:
        raise BuildError(f"vertex {p_k} already processed")
    pre_graph = state.graph
    pre_active = dict(state.active)
    pre_faces = dict(state.faces)
    state.processed.append(p_k)
    state.processed_mask |= 1 << p_k
    state.k += 1

    nbrs = sorted(
        bits(pattern.graph.adj[p_k] & state.processed_mask),
        key=state.processed.index,
    )
    dk = len(nbrs)
    used_bases: list[BipartiteBase] = []

    try:
        if dk == 0:
            res = cr1(pre_graph)
            state.graph = res.graph
            v1, v2 = res.new_vertices
            state.apex[p_k] = v1
            state.coapex[p_k] = v2
            state.mate[p_k] = v2
            state.active[p_k] = frozenset((v1, v2))
            state.faces[(p_k, v1)] = None
            state.faces[(p_k, v2)] = None
        elif dk == 1:
            q = nbrs[0]
            if _deg_k(pattern, state, q) == 1:
                base = star_base(pre_graph, state.coapex[q])
                tag = "first"
            else:
                resolution = resolve_base(pattern, state, q, p_k)
                base, tag = resolution.base, resolution.case_tag
            used_bases.append(base)
            res = cr2(pre_graph, base)
            state.graph = res.graph
            state.apex[p_k] = res.apex
            a_cover = res.new_vertices[1]
            state.mate[p_k] = a_cover
            state.path_y[p_k] = _single_vertex_or_none(base.a)
            if tag in ("C2", "C4"):
                state.coapex[p_k] = None
                state.active[p_k] = frozenset({res.apex})
                state.faces[(p_k, res.apex)] = None
            else:
                state.coapex[p_k] = res.coapex
                state.active[p_k] = frozenset({res.apex, res.coapex})
                state.faces[(p_k, res.apex)] = None
                state.faces[(p_k, res.coapex)] = q
            _record_side_structures(state, [(q, base, _deg_k(pattern, state, q))], res.covers)
            _neighbor_side_effects(pattern, state, q, p_k, pre_active, pre_faces)
        elif dk == 2:
            q1, q2 = _order_case4_neighbors(pattern, state, nbrs, p_k)
            r1 = resolve_base(pattern, state, q1, p_k)
            r2 = resolve_base(pattern, state, q2, p_k)
            used_bases += [r1.base, r2.base]
            res = cr_c4(pre_graph, r1.base, r2.base)
            c1, c2 = res.new_vertices[0], res.new_vertices[1]
            state.graph = res.graph
            state.apex[p_k] = c2
            state.mate[p_k] = c1
            state.ladder[p_k] = frozenset(res.new_vertices)
            state.path_x[p_k] = _single_vertex_or_none(r2.base.a)
            state.path_y[p_k] = _single_vertex_or_none(r1.base.a)
            d1 = _deg_k(pattern, state, q1)
            d2 = _deg_k(pattern, state, q2)
            arrow1 = (q1, p_k) in pattern.arcs
            arrow2 = (q2, p_k) in pattern.arcs
            state.coapex[p_k] = c1 if (d1 < 3 or d2 < 3) else None
            if d1 == 3 and d2 == 3 and arrow1 and arrow2:
                act: frozenset[int] = frozenset()
            elif d1 == 3 and d2 == 3:
                act = frozenset({c2})
            elif d1 != 3 and d2 == 3 and arrow2:
                act = frozenset({c1})
            else:
                act = frozenset({c1, c2})
            state.active[p_k] = act
            for u in act:
                target = None
                for q, base in ((q1, r1.base), (q2, r2.base)):
                    if state.graph.adj[u] & base.mask:
                        target = q
                        break
                state.faces[(p_k, u)] = target
            slot_info = [
                (q1, r1.base, d1),
                (q2, r2.base, d2),
            ]
            _record_side_structures(state, slot_info, res.covers)
            for q in (q1, q2):
                _neighbor_side_effects(pattern, state, q, p_k, pre_active, pre_faces)
        else:
            outdeg = pattern.outdeg(p_k)
            if outdeg == 3:
                xs = [_resolve_single_vertex(pattern, state, q, p_k) for q in nbrs]
                bases = [star_base(pre_graph, x) for x in xs]
                used_bases += bases
                res = cr_triangle(pre_graph, *bases)
                state.graph = res.graph
                state.apex[p_k] = res.apex
                state.coapex[p_k] = res.coapex
                state.mate[p_k] = res.coapex
                state.active[p_k] = frozenset()
                slot_info = [
                    (q, base, _deg_k(pattern, state, q)) for q, base in zip(nbrs, bases)
                ]
                _record_side_structures(state, slot_info, res.covers)
            elif outdeg == 1:
                out = pattern.out_neighbors(p_k)[0]
                others = [q for q in nbrs if q != out]
                if len(others) != 2:
                    raise BuildError(f"vertex {p_k}: out-neighbour {out} not among processed")
                x3 = _resolve_single_vertex(pattern, state, out, p_k)
                out_base = star_base(pre_graph, x3)
                side = [(q, resolve_base(pattern, state, q, p_k).base) for q in others]
                if k23_out_slot == 1:
                    slots = [(out, out_base)] + side
                elif k23_out_slot == 3:
                    slots = side + [(out, out_base)]
                else:
                    raise BuildError(f"bad k23_out_slot {k23_out_slot}")
                used_bases += [b for _, b in slots]
                res = cr_k23(pre_graph, slots[0][1], slots[1][1], slots[2][1])
                state.graph = res.graph
                state.apex[p_k] = res.apex
                state.coapex[p_k] = None
                state.mate[p_k] = None
                state.active[p_k] = frozenset()
                slot_info = [
                    (q, base, _deg_k(pattern, state, q)) for q, base in slots
                ]
                _record_side_structures(state, slot_info, res.covers)
            else:
                raise BuildError(f"vertex {p_k}: unexpected out-valency {outdeg}")
            for q in nbrs:
                _neighbor_side_effects(pattern, state, q, p_k, pre_active, pre_faces)
    except StitchError as exc:
        raise BuildError(f"step {state.k} at vertex {p_k}: {exc}") from exc

    if verify:
        _verify_step(state, pre_graph, used_bases)
    return state


def _single_vertex_or_none(mask: int) -> Optional[int]:
    if mask.bit_count() != 1:
        return None
    return mask.bit_length() - 1


def _order_case4_neighbors(
    pattern: Pattern, state: BuildState, nbrs: Sequence[int], p_k: int
) -> tuple[int, int]:
    q1, q2 = nbrs
    d1, d2 = _deg_k(pattern, state, q1), _deg_k(pattern, state, q2)
    if d1 > d2:
        return q2, q1
    if d1 == d2 == 3:
        a1 = (q1, p_k) in pattern.arcs
        a2 = (q2, p_k) in pattern.arcs
        if a2 and not a1:
            return q2, q1
    return q1, q2


def _verify_step(state: BuildState, pre_graph: Graph, used_bases: list[BipartiteBase]) -> None:
    g = state.graph
    if not is_triangle_free(g):
        raise BuildError(f"step {state.k}: result contains a triangle")
    if independence_number(g) != state.k:
        raise BuildError(
            f"step {state.k}: independence number {independence_number(g)} != {state.k}"
        )
    for base in used_bases:
        if pre_graph.n and not is_minimal_destabiliser(pre_graph, base.mask):
            raise BuildError(f"step {state.k}: base {bin(base.mask)} not a minimal destabiliser")


def order_vertices(pattern: Pattern) -> tuple[int, ...]:
    """Deterministic connected-prefix order: breadth-first from the
    canonical-least vertex of each component, components by canonical rank."""
    g = pattern.graph
    perm, _ = canonical_labeling(g)
    order: list[int] = []
    seen = 0
    while len(order) < g.n:
        start = min((v for v in range(g.n) if not (seen >> v) & 1), key=lambda v: perm[v])
        queue = [start]
        seen |= 1 << start
        while queue:
            v = queue.pop(0)
            order.append(v)
            nxt = sorted(bits(g.adj[v] & ~seen), key=lambda u: perm[u])
            for u in nxt:
                seen |= 1 << u
                queue.append(u)
    return tuple(order)


def random_valid_order(pattern: Pattern, rng: random.Random) -> tuple[int, ...]:
    """Uniformly random connected-prefix order (components may interleave)."""
    g = pattern.graph
    comp_of = {}
    for idx, comp in enumerate(g.components()):
        for v in bits(comp):
            comp_of[v] = idx
    started: set[int] = set()
    processed = 0
    order = []
    remaining = set(range(g.n))
    while remaining:
        candidates = [
            v
            for v in remaining
            if (g.adj[v] & processed) or comp_of[v] not in started
        ]
        v = rng.choice(sorted(candidates))
        order.append(v)
        remaining.remove(v)
        processed |= 1 << v
        started.add(comp_of[v])
    return tuple(order)


def is_valid_order(pattern: Pattern, order: Sequence[int]) -> bool:
    """Connected-prefix check: every vertex after the first of its component
    must arrive with at least one processed neighbour."""
    g = pattern.graph
    comp_of = {}
    for idx, comp in enumerate(g.components()):
        for v in bits(comp):
            comp_of[v] = idx
    started: set[int] = set()
    processed = 0
    for v in order:
        if not (g.adj[v] & processed) and comp_of[v] in started:
            return False
        processed |= 1 << v
        started.add(comp_of[v])
    return True


def run_construction(
    pattern: Pattern,
    order: Optional[Sequence[int]] = None,
    verify: bool = False,
    k23_out_slot: int = 1,
) -> BuildState:
    if order is None:
        order = order_vertices(pattern)
    if sorted(order) != list(range(pattern.n)):
        raise BuildError("order is not a permutation of the pattern vertices")
    state = BuildState(graph=Graph(0))
    for p_k in order:
        step(pattern, state, p_k, verify=verify, k23_out_slot=k23_out_slot)
    return state


def build_ordinary(
    pattern: Pattern,
    order: Optional[Sequence[int]] = None,
    verify: bool = False,
    k23_out_slot: int = 1,
) -> Graph:
    """Graph of an ordinary (undecorated) pattern."""
    return run_construction(pattern, order, verify, k23_out_slot).graph


def decorate(
    state: BuildState,
    cmap: ContractionMap,
    hp: H13Pattern,
    coapex_fallback: Optional[dict[int, int]] = None,
) -> Graph:
    """Expand every contracted hyperedge vertex into an embedded 13-vertex
    circulant, wiring the replacement back onto the old neighbourhoods.

    With an outward directed edge the stitch-back uses position 7 over the
    apex neighbourhood and positions 6, 9 over the coapex neighbourhood;
    without one it uses positions 6, 13, 9 over the coapex neighbourhood.
    When the contracted vertex has no coapex, its lowest-labelled neighbour
    stands in (``coapex_fallback`` overrides per contracted vertex)."""
    g = state.graph
    pre_adj = g.adj
    hyper_vertices = cmap.hyperedge_vertices()
    edges: list[tuple[int, int]] = []
    nxt = g.n
    for j, v_h in enumerate(hyper_vertices):
        u1 = state.apex[v_h]
        u2 = state.coapex[v_h]
        if u2 is None:
            if coapex_fallback and v_h in coapex_fallback:
                u2 = coapex_fallback[v_h]
            else:
                u2 = min(bits(pre_adj[u1]))
        if not (pre_adj[u1] >> u2) & 1:
            raise BuildError(f"stand-in coapex {u2} not adjacent to apex {u1}")
        pos = {1: u1, 2: u2}
        for i in range(3, 14):
            pos[i] = nxt
            nxt += 1
        for i, jj in h13_position_pairs():
            if (i, jj) == (1, 2):
                continue
            edges.append((pos[i], pos[jj]))
        old_n1 = pre_adj[u1] & ~(1 << u2)
        old_n2 = pre_adj[u2] & ~(1 << u1)
        if cmap.outward[j]:
            edges += [(pos[7], x) for x in bits(old_n1)]
            edges += [(pos[6], x) for x in bits(old_n2)]
            edges += [(pos[9], x) for x in bits(old_n2)]
        else:
            edges += [(pos[6], x) for x in bits(old_n2)]
            edges += [(pos[13], x) for x in bits(old_n2)]
            edges += [(pos[9], x) for x in bits(old_n2)]
    return g.with_new_vertices(11 * len(hyper_vertices), edges)


def build(
    hp: H13Pattern,
    order: Optional[Sequence[int]] = None,
    verify: bool = False,
    k23_out_slot: int = 1,
    coapex_fallback: Optional[dict[int, int]] = None,
) -> Graph:
    """Full pipeline for one decorated pattern: contract, construct, decorate."""
    cmap = contract_to_auxiliary(hp)
    state = run_construction(cmap.auxiliary, order, verify, k23_out_slot)
    result = decorate(state, cmap, hp, coapex_fallback)
    if verify:
        if not is_triangle_free(result):
            raise BuildError("decorated result contains a triangle")
        if independence_number(result) != hp.n:
            raise BuildError("decorated result has wrong independence number")
    return result
