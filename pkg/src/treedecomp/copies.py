"""Pseudo-copies of T and collections of them."""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from typing import Iterable, Sequence


@dataclass(frozen=True)
class PseudoCopy:
    """Homomorphic image of T.

    ``image[j]`` is the graph vertex hit by t_j; ``edges[i - 1]`` is the graph
    edge id carrying tree edge e_i.
    """

    image: tuple[int, ...]
    edges: tuple[int, ...]

    @property
    def m(self) -> int:
        return len(self.edges)

    def vertices(self) -> frozenset[int]:
        return frozenset(self.image)

    def edge_of(self, i: int) -> int:
        return self.edges[i - 1]

    def goodness(self) -> int:
        return goodness(self)

    def is_isomorphic(self) -> bool:
        return len(set(self.image)) == len(self.image)


def goodness(h: PseudoCopy) -> int:
    """Largest i such that v_0..v_i are pairwise distinct (m when injective)."""
    seen = set()
    for j, v in enumerate(h.image):
        if v in seen:
            return j - 1
        seen.add(v)
    return len(h.image) - 1


@dataclass(frozen=True)
class PseudoDecomposition:
    copies: tuple[PseudoCopy, ...]

    @property
    def iso_flags(self) -> tuple[bool, ...]:
        return tuple(h.is_isomorphic() for h in self.copies)

    def split(self) -> tuple[list[PseudoCopy], list[PseudoCopy]]:
        """(non-isomorphic, isomorphic) in copy order."""
        bad = [h for h in self.copies if not h.is_isomorphic()]
        iso = [h for h in self.copies if h.is_isomorphic()]
        return bad, iso

    def __len__(self) -> int:
        return len(self.copies)

    def __iter__(self):
        return iter(self.copies)


def degree_table(copies: Iterable[PseudoCopy]) -> Counter:
    """(v, t) -> d_P(v|t), the number of copies placing v at t."""
    table: Counter = Counter()
    for h in copies:
        for j, v in enumerate(h.image):
            table[(v, j)] += 1
    return table


def edge_multiset(copies: Iterable[PseudoCopy]) -> Counter:
    out: Counter = Counter()
    for h in copies:
        out.update(h.edges)
    return out


def as_copies(p: PseudoDecomposition | Sequence[PseudoCopy]) -> Sequence[PseudoCopy]:
    return p.copies if isinstance(p, PseudoDecomposition) else p
