"""Random rainbow-star grouping into a T-pseudo-decomposition, plus metrics.

At every vertex v and compatible tree vertex t the edges coloured by S(t)
are cut into blades (one colour each), blades of equal size are grouped into
fans, and each fan is cut into rainbow stars by one random permutation per
colour. Every edge lies in two stars, one per endpoint; gluing stars along
shared edges yields one pseudo-copy of T per star-graph component.
"""

from __future__ import annotations

import math
import random
from collections import Counter, defaultdict
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence

from .colouring import verify_equitable
from .copies import PseudoCopy, PseudoDecomposition, as_copies, degree_table
from .errors import (
    DegreeTooSmall,
    MalformedComponent,
    NotEquitable,
    ParameterOutOfRange,
    ProfileMismatch,
    TreeDecompError,
)
from .graph import Graph, colour_edges
from .seeds import derive_seed, rng_for
from .tree import LabelledTree


class StarCoverError(TreeDecompError):
    """Some edge is not covered by exactly two stars."""


def as_fraction(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, float):
        return Fraction(repr(x))
    return Fraction(x)


def choose_c(m: int, eps, delta) -> int:
    """ceil((10m)^9 / (eps*delta)^3) in exact arithmetic.

    eps and delta may be ints, Fractions, decimal strings or floats (floats
    are read through their shortest repr, so 0.1 means 1/10).
    """
    e, d = as_fraction(eps), as_fraction(delta)
    if m < 1:
        raise ParameterOutOfRange("m must be positive")
    if not (0 < e <= 1 and 0 < d <= 1):
        raise ParameterOutOfRange(f"eps={eps}, delta={delta} must lie in (0, 1]")
    return math.ceil(Fraction((10 * m) ** 9) / (e * d) ** 3)


@dataclass(frozen=True)
class Blade:
    vertex: int
    colour: int
    edges: tuple[int, ...]

    @property
    def size(self) -> int:
        return len(self.edges)


@dataclass(frozen=True)
class Fan:
    vertex: int
    tree_vertex: int
    blades: tuple[Blade, ...]  # one per colour of S(t), ascending colour

    @property
    def size(self) -> int:
        return self.blades[0].size

    def edges(self) -> list[int]:
        return [k for b in self.blades for k in b.edges]


@dataclass(frozen=True)
class Star:
    vertex: int
    tree_vertex: int
    edges: tuple[tuple[int, int], ...]  # (colour, edge id), ascending colour


def blade_sizes(d: int, c: int) -> tuple[int, int]:
    """(r, k): r blades of size c and k of size c-1 with r*c + k*(c-1) = d."""
    r = d % (c - 1)
    k = (d - r * c) // (c - 1)
    return r, k


def make_blades(
    g: Graph,
    col: Sequence[int],
    v: int,
    i: int,
    c: int | None,
    rng: random.Random,
    fallback: bool = False,
) -> list[Blade]:
    """Randomly cut N_i(v) into blades.

    ``c=None`` keeps the whole colour class as one blade. Otherwise the class
    needs d_i(v) > c^2 (strict) and is cut into r blades of size c and the
    rest of size c-1, where r = d_i(v) mod (c-1); with ``fallback`` a class
    too small for that is kept whole instead of raising DegreeTooSmall.
    """
    edges = colour_edges(g, col, v, i)
    d = len(edges)
    if d == 0:
        return []
    if c is None:
        return [Blade(v, i, tuple(edges))]
    if c < 2:
        raise ParameterOutOfRange("blade size c must be at least 2")
    if d <= c * c:
        if fallback:
            return [Blade(v, i, tuple(edges))]
        raise DegreeTooSmall(f"d_{i}({v}) = {d} <= c^2 = {c * c}")
    r, k = blade_sizes(d, c)
    pool = list(edges)
    rng.shuffle(pool)
    out = []
    pos = 0
    for size in [c] * r + [c - 1] * k:
        out.append(Blade(v, i, tuple(sorted(pool[pos : pos + size]))))
        pos += size
    return out


def make_fans(
    t: LabelledTree, v: int, tv: int, blades: dict[int, list[Blade]], rng: random.Random
) -> list[Fan]:
    """Group one blade per colour of S(tv) into fans of equal blade size.

    Within each size class the blades of every colour are paired uniformly at
    random.
    """
    colours = sorted(t.incident[tv])
    profiles = {i: Counter(b.size for b in blades.get(i, [])) for i in colours}
    first = profiles[colours[0]]
    for i in colours[1:]:
        if profiles[i] != first:
            raise ProfileMismatch(f"blade sizes at vertex {v} differ between colours {colours[0]} and {i}")
    fans = []
    for size in sorted(first):
        lists = []
        for i in colours:
            same = [b for b in blades[i] if b.size == size]
            rng.shuffle(same)
            lists.append(same)
        for group in zip(*lists):
            fans.append(Fan(v, tv, tuple(group)))
    return fans


def draw_stars(
    fan: Fan, rng: random.Random | None = None, perms: Sequence[Sequence[int]] | None = None
) -> list[Star]:
    """Cut a fan into rainbow stars, one random permutation per blade.

    Star k takes position ``perm[k]`` of every blade. ``perms`` overrides the
    random draw (one permutation per blade, in blade order).
    """
    s = fan.size
    if perms is None:
        if rng is None:
            raise ValueError("draw_stars needs rng or perms")
        perms = [rng.sample(range(s), s) for _ in fan.blades]
    if len(perms) != len(fan.blades) or any(sorted(p) != list(range(s)) for p in perms):
        raise ValueError("perms must hold one permutation of range(size) per blade")
    return [
        Star(fan.vertex, fan.tree_vertex, tuple((b.colour, b.edges[p[k]]) for b, p in zip(fan.blades, perms)))
        for k in range(s)
    ]


def stars_at(
    g: Graph,
    t: LabelledTree,
    col: Sequence[int],
    v: int,
    tv: int,
    rng: random.Random,
    c: int | None = None,
    fallback: bool = True,
) -> list[Star]:
    blades = {i: make_blades(g, col, v, i, c, rng, fallback) for i in sorted(t.incident[tv])}
    stars = []
    for fan in make_fans(t, v, tv, blades, rng):
        stars.extend(draw_stars(fan, rng))
    return stars


def assemble(g: Graph, t: LabelledTree, col: Sequence[int], stars: Sequence[Star]) -> PseudoDecomposition:
    """Glue stars sharing an edge; each component becomes one pseudo-copy.

    Components are rooted at their unique t_0 star and emitted in star order.
    """
    holders: list[list[int]] = [[] for _ in range(g.size)]
    for s_idx, st in enumerate(stars):
        for colour, k in st.edges:
            if col[k] != colour:
                raise MalformedComponent(f"star {s_idx} lists edge {k} under colour {colour}")
            holders[k].append(s_idx)
    for k, h in enumerate(holders):
        if len(h) != 2:
            raise StarCoverError(f"edge {k} lies in {len(h)} stars, expected 2")

    def across(s_idx: int, k: int) -> int:
        a, b = holders[k]
        return b if a == s_idx else a

    used = [False] * len(stars)
    copies = []
    for root, st in enumerate(stars):
        if st.tree_vertex != 0:
            continue
        image = [-1] * (t.m + 1)
        edge_of = [-1] * t.m
        image[0] = st.vertex
        used[root] = True
        queue = [root]
        while queue:
            s_idx = queue.pop()
            cur = stars[s_idx]
            for colour, k in cur.edges:
                if edge_of[colour - 1] != -1:
                    continue
                nxt = across(s_idx, k)
                other = stars[nxt]
                tj = other.tree_vertex
                expect = t.parent[colour] if cur.tree_vertex == colour else colour
                if tj != expect or other.vertex != g.other(k, cur.vertex):
                    raise MalformedComponent(f"edge {k} joins stars that do not match e_{colour}")
                if used[nxt] or image[tj] != -1:
                    raise MalformedComponent(f"component of star {root} revisits t_{tj}")
                used[nxt] = True
                image[tj] = other.vertex
                edge_of[colour - 1] = k
                queue.append(nxt)
        if -1 in image:
            raise MalformedComponent(f"component of star {root} misses tree vertices")
        copies.append(PseudoCopy(tuple(image), tuple(edge_of)))
    if not all(used):
        raise MalformedComponent("some star component has no t_0 star")
    return PseudoDecomposition(tuple(copies))


def build_pseudo_decomposition(
    g: Graph,
    t: LabelledTree,
    col: Sequence[int],
    seed: int = 0,
    c: int | None = None,
    fallback: bool = True,
    check: bool = True,
) -> PseudoDecomposition:
    """Blades -> fans -> stars -> assemble, with per-(v, t) derived seeds."""
    if check:
        bad = verify_equitable(g, t, col)
        if bad:
            raise NotEquitable(bad)
    stars: list[Star] = []
    for v in range(g.n):
        for tv in t.class_vertices(g.side[v]):
            rng = rng_for(seed, "stars", v, tv)
            stars.extend(stars_at(g, t, col, v, tv, rng, c, fallback))
    return assemble(g, t, col, stars)


# --- metrics -------------------------------------------------------------


def conflict_table(p: PseudoDecomposition | Sequence[PseudoCopy]) -> dict[tuple[int, int], Fraction]:
    """conf_P(v|t) for every (v, t) with d_P(v|t) > 0."""
    hits: dict[tuple[int, int], Counter] = defaultdict(Counter)
    deg: Counter = Counter()
    for h in as_copies(p):
        verts = h.vertices()
        for j, v in enumerate(h.image):
            deg[(v, j)] += 1
            hits[(v, j)].update(verts - {v})
    return {key: Fraction(max(hits[key].values(), default=0), d) for key, d in deg.items()}


def conflict(p: PseudoDecomposition | Sequence[PseudoCopy], v: int, t: int) -> Fraction:
    """Largest share of N_P(v|t) containing one fixed u != v (0 if empty)."""
    members = [h for h in as_copies(p) if h.image[t] == v]
    if not members:
        return Fraction(0)
    counts: Counter = Counter()
    for h in members:
        counts.update(h.vertices() - {v})
    return Fraction(max(counts.values(), default=0), len(members))


def conflict_global(p: PseudoDecomposition | Sequence[PseudoCopy]) -> Fraction:
    return max(conflict_table(p).values(), default=Fraction(0))


@dataclass
class LemmaReport:
    """Outcome of checking d_H <= eps*d_I everywhere and conf(I) <= delta."""

    eps: Fraction
    delta: Fraction
    ratios: dict[tuple[int, int], Fraction | None]
    violations: list[tuple[int, int, int, int]]
    conf_iso: Fraction
    n_bad: int
    n_iso: int
    degree_ok: bool = field(init=False)
    conf_ok: bool = field(init=False)

    def __post_init__(self):
        self.degree_ok = not self.violations
        self.conf_ok = self.conf_iso <= self.delta

    @property
    def holds(self) -> bool:
        return self.degree_ok and self.conf_ok


def check_lemma_dense(p: PseudoDecomposition | Sequence[PseudoCopy], eps, delta) -> LemmaReport:
    """Ratios d_H(v|t)/d_I(v|t) (None when d_I = 0), violations and conf(I)."""
    e, d = as_fraction(eps), as_fraction(delta)
    copies = as_copies(p)
    bad = [h for h in copies if not h.is_isomorphic()]
    iso = [h for h in copies if h.is_isomorphic()]
    dh, di = degree_table(bad), degree_table(iso)
    ratios: dict[tuple[int, int], Fraction | None] = {}
    violations = []
    for key in sorted(set(dh) | set(di)):
        h_, i_ = dh.get(key, 0), di.get(key, 0)
        ratios[key] = Fraction(h_, i_) if i_ else None
        if h_ > e * i_:
            violations.append((key[0], key[1], h_, i_))
    return LemmaReport(e, d, ratios, violations, conflict_global(iso), len(bad), len(iso))


def dense_pseudo_decomposition(
    g: Graph,
    t: LabelledTree,
    col: Sequence[int],
    eps,
    delta,
    seed: int = 0,
    retries: int = 64,
    c: int | None = None,
    fallback: bool = True,
) -> tuple[PseudoDecomposition, LemmaReport, int]:
    """Reseed the star drawing until the dense check passes.

    Returns (decomposition, report, attempts used). When no attempt passes
    within ``retries``, the attempt with the fewest non-isomorphic copies
    (then fewest violations, then lowest conf) is returned.
    """
    bad = verify_equitable(g, t, col)
    if bad:
        raise NotEquitable(bad)
    best = None
    for attempt in range(retries):
        sub = derive_seed(seed, "dense", attempt)
        p = build_pseudo_decomposition(g, t, col, sub, c, fallback, check=False)
        report = check_lemma_dense(p, eps, delta)
        if report.holds:
            return p, report, attempt + 1
        key = (report.n_bad, len(report.violations), report.conf_iso, attempt)
        if best is None or key < best[0]:
            best = (key, p, report)
    assert best is not None, "retries must be positive"
    return best[1], best[2], retries


def goodness_histogram(copies: Iterable[PseudoCopy]) -> Counter:
    return Counter(h.goodness() for h in copies)
