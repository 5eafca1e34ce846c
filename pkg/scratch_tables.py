"""Dev experiment: reproduce the k<=6 count tables."""
import itertools, sys, time
from collections import Counter
from ramseystitch.graphs import canonical_form, independence_number, is_triangle_free
from ramseystitch.patterns import enumerate_underlying, enumerate_orientations, enumerate_decorations, union_patterns
from ramseystitch.builder import build

def decorated_pool(s):
    out = []
    for u in enumerate_underlying(s):
        for p in enumerate_orientations(u):
            out.extend(enumerate_decorations(p))
    return out

def partitions(k, maxpart=None):
    maxpart = maxpart or k
    if k == 0:
        yield ()
        return
    for first in range(min(k, maxpart), 0, -1):
        for rest in partitions(k - first, first):
            yield (first,) + rest

def all_patterns(k, pools):
    for part in partitions(k):
        sizes = Counter(part)
        per_size = []
        for s, mult in sorted(sizes.items()):
            per_size.append(list(itertools.combinations_with_replacement(pools[s], mult)))
        for combo in itertools.product(*per_size):
            parts = [hp for group in combo for hp in group]
            yield union_patterns(parts)

EXPECTED = {
    3: {(4, 2): 1, (5, 5): 1},
    4: {(6, 3): 1, (7, 6): 1, (8, 10): 1},
    5: {(8, 4): 1, (9, 7): 1, (10, 10): 1, (10, 11): 1, (11, 15): 1, (11, 16): 2, (12, 20): 1, (13, 26): 1},
    6: {(10, 5): 1, (11, 8): 1, (12, 11): 1, (12, 12): 1, (13, 15): 1, (13, 16): 1, (13, 17): 2,
        (14, 20): 1, (14, 21): 4, (15, 25): 1, (15, 26): 3, (15, 27): 1, (16, 32): 4, (16, 33): 2},
}

pools = {}
for k in (2, 3, 4, 5):
    t0 = time.time()
    for s in range(1, k + 1):
        if s not in pools:
            pools[s] = decorated_pool(s)
    cells = Counter()
    forms = {}
    npat = 0
    for hp in all_patterns(k, pools):
        npat += 1
        g = build(hp)
        f = canonical_form(g)
        if f in forms:
            print(f"  DUP graph for k={k}: {g.n},{g.e}")
        forms[f] = g
        cells[(g.n, g.e)] += 1
    ok = dict(cells) == EXPECTED[k + 1]
    print(f"k={k} (j={k+1}): patterns={npat} graphs={len(forms)} cells_ok={ok} [{time.time()-t0:.1f}s]")
    if not ok:
        exp = EXPECTED[k + 1]
        for key in sorted(set(cells) | set(exp)):
            if cells.get(key, 0) != exp.get(key, 0):
                print("   mismatch", key, "got", cells.get(key, 0), "want", exp.get(key, 0))
