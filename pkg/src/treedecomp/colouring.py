"""T-equitable edge colourings: checking, exact search, planted generation."""

from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple, Sequence

from .copies import PseudoCopy
from .errors import BudgetExhausted, EmbeddingFailed
from .graph import Graph, check_colouring, load_graph
from .seeds import rng_for
from .tree import LabelledTree

# A colouring is a tuple indexed by edge id holding labels 1..m.
Colouring = tuple[int, ...]


def compatible(g: Graph, t: LabelledTree, v: int, tv: int) -> bool:
    return g.side[v] == t.side[tv]


class EquitableViolation(NamedTuple):
    vertex: int
    tree_vertex: int
    colour_j: int
    colour_k: int
    degree_j: int
    degree_k: int


def verify_equitable(g: Graph, t: LabelledTree, col: Sequence[int | None]) -> list[EquitableViolation]:
    """Every unequal pair d_j(v) != d_k(v) with j, k in S(tv), v ~ tv.

    An empty list means the colouring is T-equitable.
    """
    col = check_colouring(g, col)
    out = []
    for v in range(g.n):
        deg = [0] * (t.m + 1)
        for k in g.incident[v]:
            deg[col[k]] += 1
        for tv in t.class_vertices(g.side[v]):
            cols = sorted(t.incident[tv])
            for a in range(len(cols)):
                for b in range(a + 1, len(cols)):
                    j, k = cols[a], cols[b]
                    if deg[j] != deg[k]:
                        out.append(EquitableViolation(v, tv, j, k, deg[j], deg[k]))
    return out


def is_equitable(g: Graph, t: LabelledTree, col: Sequence[int | None]) -> bool:
    return not verify_equitable(g, t, col)


def find_equitable(g: Graph, t: LabelledTree, budget: int = 2_000_000) -> Colouring | None:
    """Backtracking search for a T-equitable colouring.

    Returns None when the search space is exhausted (UNSAT); raises
    BudgetExhausted after ``budget`` colour assignments.

    A partial colouring is kept only while every vertex v satisfies
    sum over compatible t of |S(t)| * max_{j in S(t)} c_j(v) <= deg(v),
    which is necessary for completion and forces equality once v is done.
    """
    m = t.m
    # group[v][c]: compatible tree vertex whose star holds colour c at v
    group = [[t.endpoint_in(c, g.side[v]) if c else -1 for c in range(m + 1)] for v in range(g.n)]
    ssize = [len(t.incident[j]) for j in range(m + 1)]
    members = [sorted(t.incident[j]) for j in range(m + 1)]

    counts = [[0] * (m + 1) for _ in range(g.n)]
    load = [0] * g.n
    deg = [g.degree(v) for v in range(g.n)]

    def gmax(v: int, tv: int) -> int:
        cv = counts[v]
        return max(cv[j] for j in members[tv])

    def bump(v: int, c: int, delta: int) -> None:
        tv = group[v][c]
        before = gmax(v, tv)
        counts[v][c] += delta
        load[v] += ssize[tv] * (gmax(v, tv) - before)

    order = sorted(range(g.size), key=lambda k: (min(deg[g.edges[k][0]], deg[g.edges[k][1]]), k))
    col = [0] * g.size
    nodes = 0
    pos = 0
    while True:
        if pos == len(order):
            return tuple(col)
        k = order[pos]
        u, w = g.edges[k]
        start = col[k] + 1
        if col[k]:
            bump(u, col[k], -1)
            bump(w, col[k], -1)
            col[k] = 0
        placed = False
        for c in range(start, m + 1):
            nodes += 1
            if nodes > budget:
                raise BudgetExhausted(f"colouring search exceeded {budget} nodes")
            bump(u, c, 1)
            bump(w, c, 1)
            if load[u] <= deg[u] and load[w] <= deg[w]:
                col[k] = c
                placed = True
                break
            bump(u, c, -1)
            bump(w, c, -1)
        if placed:
            pos += 1
        else:
            pos -= 1
            if pos < 0:
                return None


@dataclass(frozen=True)
class SynthInstance:
    graph: Graph
    colouring: Colouring
    planted: tuple[PseudoCopy, ...]


def synth_instance(
    t: LabelledTree, copies: int, a_pool: int, b_pool: int, seed: int, retries: int = 100
) -> SynthInstance:
    """Edge-disjoint union of ``copies`` random embeddings of T.

    T_A vertices land in the pool a0..a{a_pool-1}, T_B in b0..b{b_pool-1}.
    Each copy is drawn vertex by vertex over unused edges and redrawn up to
    ``retries`` times when a draw gets stuck; the colouring is the tree
    labelling of every embedded edge.
    """
    if copies < 1:
        raise ValueError("copies must be at least 1")
    if a_pool < 1 or b_pool < 1:
        raise ValueError("pools must be positive")
    ta, tb = t.class_vertices(0), t.class_vertices(1)
    if len(ta) > a_pool or len(tb) > b_pool:
        raise EmbeddingFailed(f"T needs {len(ta)}/{len(tb)} pool vertices, have {a_pool}/{b_pool}")
    rng = rng_for(seed, "synth")
    used: set[tuple[str, str]] = set()
    pairs: list[tuple[str, str]] = []
    maps: list[list[str]] = []
    pool_names = ([f"a{k}" for k in range(a_pool)], [f"b{k}" for k in range(b_pool)])
    for n in range(copies):
        for _ in range(retries):
            img = _draw_embedding(t, pool_names, used, rng)
            if img is not None:
                break
        else:
            raise EmbeddingFailed(f"copy {n}: no edge-disjoint embedding after {retries} tries")
        new = [_oriented(t, img, i) for i in range(1, t.m + 1)]
        used.update(new)
        pairs.extend(new)
        maps.append(img)
    partition = {name: ("A" if name[0] == "a" else "B") for pair in pairs for name in pair}
    g = load_graph(pairs, partition)
    col = tuple((k % t.m) + 1 for k in range(g.size))
    planted = tuple(
        PseudoCopy(
            tuple(g.index[x] for x in img),
            tuple(n * t.m + i - 1 for i in range(1, t.m + 1)),
        )
        for n, img in enumerate(maps)
    )
    return SynthInstance(g, col, planted)


def _draw_embedding(t: LabelledTree, pool_names, used, rng) -> list[str] | None:
    """Place t_0, t_1, ... in turn on fresh pool vertices over unused edges."""
    img: list[str] = []
    taken: set[str] = set()
    for j in range(t.m + 1):
        cands = [x for x in pool_names[t.side[j]] if x not in taken]
        if j:
            up = img[t.parent[j]]
            cands = [x for x in cands if _pair(t.side[j], x, up) not in used]
        if not cands:
            return None
        x = rng.choice(cands)
        img.append(x)
        taken.add(x)
    return img


def _pair(side: int, x: str, y: str) -> tuple[str, str]:
    return (x, y) if side == 0 else (y, x)


def _oriented(t: LabelledTree, img: list[str], i: int) -> tuple[str, str]:
    a = t.endpoint_in(i, 0)
    b = i if a != i else t.parent[i]
    return img[a], img[b]
