"""Benchmark fixture generators: graph reachability over synthetic graphs."""

from __future__ import annotations

RULES = """\
:- table path/2.

path(X, Z) :- edge(X, Y), path(Y, Z).
path(X, Z) :- edge(X, Z).
"""


def gen_fixture(kind: str, size: int) -> str:
    """Program text: the reachability rules plus a generated edge relation.

    chain: edges i -> i+1 for i in 1..size (size+1 nodes).
    cycle: the chain plus the closing edge size+1 -> 1.
    grid:  a size x size lattice with right and down edges; node (i, j) is
           numbered (i-1)*size + j.
    """
    if size < 1:
        raise ValueError("fixture size must be >= 1")
    edges = []
    if kind == "chain":
        edges = [(i, i + 1) for i in range(1, size + 1)]
    elif kind == "cycle":
        edges = [(i, i + 1) for i in range(1, size + 1)] + [(size + 1, 1)]
    elif kind == "grid":
        def node(i, j):
            return (i - 1) * size + j

        for i in range(1, size + 1):
            for j in range(1, size + 1):
                if j < size:
                    edges.append((node(i, j), node(i, j + 1)))
                if i < size:
                    edges.append((node(i, j), node(i + 1, j)))
    else:
        raise ValueError(f"unknown fixture kind: {kind!r} (want chain, cycle or grid)")
    lines = [RULES]
    for a, b in edges:
        lines.append(f"edge({a}, {b}).")
    return "\n".join(lines) + "\n"
