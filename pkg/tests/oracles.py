"""Independent brute-force references and frozen reference values."""
import itertools

from fibergraphs.fibergraph import FiberGraph

# Metropolis SLEM for the three graphs on F((1,1,2), 3), from dense eigvalsh
# of the hand-assembled 6x6 matrices; times are -1/ln(slem)
FIG1_SLEM = {"lex": 0.8413318906526349, "ugb": 0.8538509376029435, "graver": 0.640388203202208}
FIG1_TIME = {"lex": 5.78807, "ugb": 6.32917, "graver": 2.24376}
FIG1_EDGES = {"lex": 6, "ugb": 8, "graver": 10}

# (k, slem_graver, slem_groebner) on F(A_k, e_{2k+1}), frozen from a direct
# byte-keyed pairwise construction independent of the package graph builder
FIG4_SLEM = {
    1: (0.333333, 0.707107), 2: (0.333333, 0.901363), 3: (0.454545, 0.961312),
    4: (0.6, 0.98367), 5: (0.72973, 0.992831), 6: (0.828571, 0.996781),
    7: (0.896296, 0.998535), 8: (0.939394, 0.999327),
}
FIG5_SIZES = {1: 16, 2: 118, 3: 560, 4: 2003, 5: 5888, 6: 14988}


def _connected(n, edges, removed_vertices=()):
    gone = set(removed_vertices)
    alive = [v for v in range(n) if v not in gone]
    if not alive:
        return True
    adj = {v: set() for v in alive}
    for u, v in edges:
        if u in adj and v in adj:
            adj[u].add(v)
            adj[v].add(u)
    seen, stack = {alive[0]}, [alive[0]]
    while stack:
        u = stack.pop()
        for w in adj[u] - seen:
            seen.add(w)
            stack.append(w)
    return len(seen) == len(alive)


def brute_edge_connectivity(G: FiberGraph) -> int:
    """Smallest edge subset whose removal disconnects ``G`` (exhaustive)."""
    edges = G.edges()
    if not _connected(G.n_vertices, edges):
        return 0
    for size in range(len(edges) + 1):
        for cut in itertools.combinations(edges, size):
            rest = set(edges) - set(cut)
            if not _connected(G.n_vertices, rest):
                return size
    return len(edges)


def brute_vertex_connectivity(G: FiberGraph) -> int:
    n, edges = G.n_vertices, G.edges()
    if not _connected(n, edges):
        return 0
    for size in range(n - 1):
        for sep in itertools.combinations(range(n), size):
            if not _connected(n, edges, sep):
                return size
    return n - 1
