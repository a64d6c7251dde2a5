"""Independent checks of pseudo-copies and decompositions, and an exact oracle."""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from typing import Sequence

from .copies import PseudoCopy
from .errors import BudgetExhausted, ParameterOutOfRange
from .graph import Graph
from .tree import LabelledTree

KINDS = ("NotPartition", "NotHomomorphism", "NotInjective", "WrongBipartition", "ColourMismatch")


@dataclass(frozen=True)
class Violation:
    kind: str
    copy: int | None
    detail: str

    def record(self) -> dict[str, str]:
        return {"kind": self.kind, "copy": "-" if self.copy is None else str(self.copy), "detail": self.detail}


def verify_pseudo(
    g: Graph, t: LabelledTree, h: PseudoCopy, col: Sequence[int] | None = None, index: int | None = None
) -> list[Violation]:
    """Structural check of one pseudo-copy; an empty list means valid."""
    out: list[Violation] = []
    if len(h.image) != t.m + 1 or len(h.edges) != t.m:
        return [Violation("NotHomomorphism", index, f"expected {t.m + 1} images and {t.m} edges")]
    if any(not 0 <= v < g.n for v in h.image) or any(not 0 <= k < g.size for k in h.edges):
        return [Violation("NotHomomorphism", index, "image or edge id outside the graph")]
    dup = [k for k, n in Counter(h.edges).items() if n > 1]
    if dup:
        out.append(Violation("NotInjective", index, f"graph edge {dup[0]} carries several tree edges"))
    for i in range(1, t.m + 1):
        k = h.edges[i - 1]
        ends = {h.image[i], h.image[t.parent[i]]}
        if set(g.edges[k]) != ends:
            out.append(Violation("NotHomomorphism", index, f"e_{i} -> edge {k} does not join the images of its ends"))
        if col is not None and col[k] != i:
            out.append(Violation("ColourMismatch", index, f"edge {k} has colour {col[k]}, carries e_{i}"))
    for j, v in enumerate(h.image):
        if g.side[v] != t.side[j]:
            out.append(Violation("WrongBipartition", index, f"t_{j} mapped to {g.names[v]} in the other class"))
    return out


def verify_decomposition(
    g: Graph, t: LabelledTree, copies: Sequence[PseudoCopy], col: Sequence[int] | None = None
) -> list[Violation]:
    """Empty iff ``copies`` partition E(g) into genuine copies of T."""
    out: list[Violation] = []
    for n, h in enumerate(copies):
        out.extend(verify_pseudo(g, t, h, col, n))
        if len(h.image) == t.m + 1 and h.goodness() < t.m:
            out.append(Violation("NotInjective", n, f"vertex images repeat: goodness {h.goodness()} < {t.m}"))
    used = Counter(k for h in copies for k in h.edges)
    for k, n in sorted(used.items()):
        if n > 1:
            out.append(Violation("NotPartition", None, f"edge {k} used {n} times"))
    missing = [k for k in range(g.size) if k not in used]
    if missing:
        out.append(Violation("NotPartition", None, f"{len(missing)} edges uncovered, first {missing[0]}"))
    return out


def _extension_order(t: LabelledTree, i: int) -> list[tuple[int, int]]:
    """(tree vertex, already-placed neighbour) after seeding with e_i."""
    adj: list[list[int]] = [[] for _ in range(t.m + 1)]
    for e in range(1, t.m + 1):
        adj[e].append(t.parent[e])
        adj[t.parent[e]].append(e)
    placed = {i, t.parent[i]}
    order = []
    frontier = sorted(placed)
    while frontier:
        nxt = []
        for y in frontier:
            for x in sorted(adj[y]):
                if x not in placed:
                    placed.add(x)
                    order.append((x, y))
                    nxt.append(x)
        frontier = sorted(nxt)
    return order


def embeddings_through(g: Graph, t: LabelledTree, k: int) -> list[PseudoCopy]:
    """All class-respecting injective copies of T in g that use edge k.

    Copies with the same edge set are reported once.
    """
    adj = [sorted(g.other(e, v) for e in g.incident[v]) for v in range(g.n)]
    u0, w0 = g.edges[k]
    found: dict[frozenset[int], PseudoCopy] = {}
    for i in range(1, t.m + 1):
        a, b = i, t.parent[i]
        if t.side[a] != g.side[u0]:
            a, b = b, a
        order = _extension_order(t, i)
        image = [-1] * (t.m + 1)
        image[a], image[b] = u0, w0

        def extend(pos: int, used: set[int]) -> None:
            if pos == len(order):
                edges = tuple(g.edge_id[(image[e], image[t.parent[e]])] for e in range(1, t.m + 1))
                key = frozenset(edges)
                if key not in found:
                    found[key] = PseudoCopy(tuple(image), edges)
                return
            x, y = order[pos]
            for cand in adj[image[y]]:
                if cand in used:
                    continue
                image[x] = cand
                used.add(cand)
                extend(pos + 1, used)
                used.discard(cand)
            image[x] = -1

        extend(0, {u0, w0})
    return list(found.values())


def brute_force_decompose(
    g: Graph, t: LabelledTree, max_edges: int = 24, node_budget: int = 2_000_000
) -> list[PseudoCopy] | None:
    """Exact search for a T-decomposition respecting the bipartition.

    Returns the copies, or None when none exists. Raises BudgetExhausted when
    ``node_budget`` embeddings have been tried without a verdict.
    """
    if g.size > max_edges:
        raise ParameterOutOfRange(f"oracle limited to {max_edges} edges, graph has {g.size}")
    if g.size % t.m:
        return None
    if g.size == 0:
        return []
    memo: dict[int, list[tuple[frozenset[int], PseudoCopy]]] = {}
    covered = [False] * g.size
    chosen: list[PseudoCopy] = []
    nodes = 0

    def through(k: int):
        if k not in memo:
            memo[k] = [(frozenset(h.edges), h) for h in embeddings_through(g, t, k)]
        return memo[k]

    def solve() -> bool:
        nonlocal nodes
        try:
            k = covered.index(False)
        except ValueError:
            return True
        for es, h in through(k):
            if any(covered[e] for e in es):
                continue
            nodes += 1
            if nodes > node_budget:
                raise BudgetExhausted(f"oracle exceeded {node_budget} nodes")
            for e in es:
                covered[e] = True
            chosen.append(h)
            if solve():
                return True
            chosen.pop()
            for e in es:
                covered[e] = False
        return False

    return list(chosen) if solve() else None
