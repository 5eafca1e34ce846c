"""Dev experiment: worked-example trace and the K23 slot question."""
from ramseystitch.graphs import Graph, are_isomorphic, canonical_form, independence_number, is_triangle_free
from ramseystitch.patterns import Pattern, H13Pattern, enumerate_orientations, enumerate_decorations, union_patterns
from ramseystitch.builder import BuildState, run_construction, build, step, h13_graph

# Figure-4 pattern: p1..p5 -> 0..4
PG = Graph(5, [(0, 1), (0, 2), (0, 3), (4, 1), (4, 2), (4, 3)])
PAT = Pattern(PG, frozenset({(0, 1), (0, 2), (0, 3), (4, 1)}))

# paper-label fixtures; v1 v2 w1 w2 w3 u1 u2 u3 x1 x2 x3 y1..y5 -> 0..15
G3 = Graph(8, [(5, 6), (6, 0), (0, 4), (4, 2), (2, 3), (3, 1), (1, 7), (7, 5), (0, 1), (7, 4)])
G4 = Graph(11, list(G3.edges()) + [(9, 8), (8, 10), (6, 9), (9, 1), (0, 10), (10, 3)])
G5_fig = Graph(16, list(G4.edges()) + [
    (11, 13), (11, 14), (11, 15), (12, 13), (12, 14), (12, 15),
    (11, 2), (12, 4), (12, 3), (13, 5), (13, 8), (14, 6), (14, 7), (14, 8), (15, 9), (15, 10)])

for slot in (1, 3):
    st = BuildState(graph=Graph(0))
    graphs = []
    for pk in (0, 1, 2, 3, 4):
        step(PAT, st, pk, verify=True, k23_out_slot=slot)
        graphs.append(st.graph)
    g5 = graphs[-1]
    print(f"slot={slot}: n={g5.n} e={g5.e} alpha={independence_number(g5)} tf={is_triangle_free(g5)}")
    print("  G3 iso:", are_isomorphic(graphs[2], G3), " G4 iso:", are_isomorphic(graphs[3], G4),
          " G5 iso to figure:", are_isomorphic(g5, G5_fig))
    print("  maps:", {p: (st.apex[p], st.coapex[p], sorted(st.active[p])) for p in range(5)})
    print("  faces:", {k: v for k, v in sorted(st.faces.items())})

print("slot1 vs slot3 isomorphic:",
      are_isomorphic(run_construction(PAT, order=(0, 1, 2, 3, 4), k23_out_slot=1).graph,
                     run_construction(PAT, order=(0, 1, 2, 3, 4), k23_out_slot=3).graph))

# all four K23 orientation classes -> four distinct (16,32) graphs?
K23 = Graph(5, [(0, 2), (0, 3), (0, 4), (1, 2), (1, 3), (1, 4)])
pats = enumerate_orientations(K23)
print("K23 orientation classes:", len(pats))
for slot in (1, 3):
    forms = set()
    for p in pats:
        g = run_construction(p, verify=True, k23_out_slot=slot).graph
        assert (g.n, g.e) == (16, 32), (g.n, g.e)
        assert independence_number(g) == 5
        forms.add(canonical_form(g))
    print(f"slot={slot}: distinct (16,32) graphs: {len(forms)}")

# H13 fixture via C4 pattern with full hyperedge
C4 = Graph(4, [(0, 1), (1, 2), (2, 3), (3, 0)])
hp = H13Pattern(Pattern(C4, frozenset()), frozenset({frozenset({0, 1, 2, 3})}))
gh = build(hp, verify=True)
print("C4-hyper build:", gh.n, gh.e, "iso to circulant:", are_isomorphic(gh, h13_graph()))

# K23- decorated patterns -> (16,33) x2
K23M = Graph(5, [(0, 1), (1, 2), (2, 3), (3, 0), (0, 4)])  # C4 0123 + pendant 4 at 0
dec = []
for p in enumerate_orientations(K23M):
    for h in enumerate_decorations(p):
        if h.hyperedges:
            dec.append(h)
print("K23- decorated classes:", len(dec))
for h in dec:
    g = build(h, verify=True)
    print("  ->", g.n, g.e, independence_number(g), is_triangle_free(g))
