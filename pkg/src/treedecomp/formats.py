"""Text formats: edge lists, tree files, colourings, decompositions, reports.

Graph files hold one edge per line as two whitespace-separated names.
Blank lines and lines starting with '#' are skipped. A line ``A: n1 n2 ...``
or ``B: ...`` declares vertex classes; declarations are checked against the
computed 2-colouring.

Tree files use the same edge lines, optionally preceded by
``root <name> [A|B]`` (class of the root, default A).

Colouring files hold ``u v colour`` per edge, colour in 1..m.

Decomposition files hold one line per copy::

    copy <n> image 0:<vertex> 1:<vertex> ... edges 1:<edge id> 2:<edge id> ...

where edge ids count edge lines of the graph file from 0.

Reports are ``key=value`` lines in a fixed order.
"""

from __future__ import annotations

import json
from pathlib import Path
from typing import Iterable, Sequence

from .copies import PseudoCopy
from .errors import FormatError, UncolouredEdge
from .graph import CLASS_NAMES, Graph, load_graph
from .tree import LabelledTree, auto_root, label_tree


def _lines(text: str):
    for n, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        yield n, line


def parse_graph(text: str, path: str | None = None) -> Graph:
    pairs: list[tuple[str, str]] = []
    partition: dict[str, str] = {}
    for n, line in _lines(text):
        head = line.split(":", 1)
        if len(head) == 2 and head[0].strip().upper() in CLASS_NAMES and " " not in head[0].strip():
            cls = head[0].strip().upper()
            for name in head[1].split():
                partition[name] = cls
            continue
        toks = line.split()
        if len(toks) != 2:
            raise FormatError(f"expected two vertex names, got {len(toks)} tokens", path, n)
        pairs.append((toks[0], toks[1]))
    return load_graph(pairs, partition or None)


def parse_tree(text: str, path: str | None = None) -> LabelledTree:
    pairs: list[tuple[str, str]] = []
    root = None
    root_class = "A"
    for n, line in _lines(text):
        toks = line.split()
        if toks[0] == "root" and not pairs and root is None and len(toks) in (2, 3):
            root = toks[1]
            if len(toks) == 3:
                if toks[2].upper() not in CLASS_NAMES:
                    raise FormatError(f"root class must be A or B, got {toks[2]}", path, n)
                root_class = toks[2].upper()
            continue
        if len(toks) != 2:
            raise FormatError(f"expected two vertex names, got {len(toks)} tokens", path, n)
        pairs.append((toks[0], toks[1]))
    if root is None:
        return auto_root(pairs, root_class)
    return label_tree(pairs, root, root_class)


def parse_colouring(text: str, g: Graph, m: int, path: str | None = None) -> tuple[int, ...]:
    col: list[int | None] = [None] * g.size
    for n, line in _lines(text):
        toks = line.split()
        if len(toks) != 3:
            raise FormatError("expected 'u v colour'", path, n)
        u, v, c = toks
        if u not in g.index or v not in g.index:
            raise FormatError(f"unknown vertex in edge {u} {v}", path, n)
        k = g.edge_id.get((g.index[u], g.index[v]))
        if k is None:
            raise FormatError(f"{u} {v} is not an edge of the graph", path, n)
        try:
            ci = int(c)
        except ValueError:
            raise FormatError(f"colour {c!r} is not an integer", path, n) from None
        if not 1 <= ci <= m:
            raise FormatError(f"colour {ci} outside 1..{m}", path, n)
        if col[k] is not None:
            raise FormatError(f"edge {u} {v} coloured twice", path, n)
        col[k] = ci
    missing = [k for k, c in enumerate(col) if c is None]
    if missing:
        u, v = g.edge_names(missing[0])
        raise UncolouredEdge(f"{path or 'colouring'}: edge {u} {v} has no colour ({len(missing)} missing)")
    return tuple(col)  # type: ignore[arg-type]


def parse_decomposition(text: str, g: Graph, t: LabelledTree, path: str | None = None) -> list[PseudoCopy]:
    copies = []
    for n, line in _lines(text):
        toks = line.split()
        try:
            if toks[0] != "copy" or "image" not in toks or "edges" not in toks:
                raise ValueError
            a, b = toks.index("image"), toks.index("edges")
            image = [-1] * (t.m + 1)
            for tok in toks[a + 1 : b]:
                j, name = tok.split(":", 1)
                image[int(j)] = g.index[name]
            edges = [-1] * t.m
            for tok in toks[b + 1 :]:
                i, k = tok.split(":", 1)
                edges[int(i) - 1] = int(k)
        except (ValueError, KeyError, IndexError):
            raise FormatError("malformed copy record", path, n) from None
        if -1 in image or -1 in edges:
            raise FormatError("copy record is incomplete", path, n)
        copies.append(PseudoCopy(tuple(image), tuple(edges)))
    return copies


def format_graph(g: Graph) -> str:
    out = []
    for cls in (0, 1):
        names = [g.names[v] for v in range(g.n) if g.side[v] == cls]
        if names:
            out.append(f"{CLASS_NAMES[cls]}: " + " ".join(names))
    out.extend(f"{g.names[u]} {g.names[v]}" for u, v in g.edges)
    return "\n".join(out) + "\n"


def format_tree(t: LabelledTree) -> str:
    lines = [f"root {t.names[0]} {CLASS_NAMES[t.side[0]]}"]
    lines.extend(f"{a} {b}" for a, b in t.edges())
    return "\n".join(lines) + "\n"


def format_colouring(g: Graph, col: Sequence[int]) -> str:
    return "".join(f"{g.names[u]} {g.names[v]} {col[k]}\n" for k, (u, v) in enumerate(g.edges))


def format_decomposition(g: Graph, copies: Iterable[PseudoCopy]) -> str:
    lines = []
    for n, h in enumerate(copies):
        image = " ".join(f"{j}:{g.names[v]}" for j, v in enumerate(h.image))
        edges = " ".join(f"{i}:{k}" for i, k in enumerate(h.edges, 1))
        lines.append(f"copy {n} image {image} edges {edges}")
    return "\n".join(lines) + ("\n" if lines else "")


def format_records(records: Sequence[tuple[str, object]]) -> str:
    return "".join(f"{k}={_value(v)}\n" for k, v in records)


def records_json(records: Sequence[tuple[str, object]]) -> str:
    return json.dumps({k: _value(v) for k, v in records}, indent=2) + "\n"


def _value(v) -> str:
    if isinstance(v, bool):
        return "true" if v else "false"
    return str(v)


def read_text(path: str | Path) -> str:
    return Path(path).read_text()


def write_text(path: str | Path, text: str) -> None:
    Path(path).write_text(text)
