"""Shared helpers for the test modules: fixture loading and random lattices."""

from __future__ import annotations

import random
from itertools import product
from pathlib import Path

from tdtypes import build_graph, parse_source

HERE = Path(__file__).parent
FIXTURES = HERE / "fixtures"
LISTINGS = HERE / "corpus" / "listings"
GRAMMAR = HERE / "corpus" / "grammar"


def graph_of(source: str, **options):
    parse_opts = {k: v for k, v in options.items() if k in ("strict", "inheritance", "allow_null_attributes")}
    build_opts = {k: v for k, v in options.items() if k in ("strict", "inheritance", "assume_declared")}
    result = parse_source(source, **parse_opts)
    assert result.ok, [str(d) for d in result.diagnostics]
    return build_graph(result.declarations, **build_opts)


def fixture_graph(name: str, **options):
    return graph_of((FIXTURES / name).read_text(), **options)


def random_dag(rng: random.Random, max_types: int = 12, max_parents: int = 3) -> dict[str, list[str]]:
    """Random inheritance DAG with no redundant edges, as name -> immediate parents."""
    n = rng.randint(1, max_types)
    names = [f"T{i}" for i in range(n)]
    parents: dict[str, list[str]] = {}
    ancestors: dict[str, set[str]] = {}
    for i, name in enumerate(names):
        k = rng.randint(0, min(max_parents, i))
        picked = rng.sample(names[:i], k)
        # drop a pick that is already reachable from another pick
        kept = [p for p in picked if not any(p in ancestors[q] for q in picked if q != p)]
        parents[name] = kept
        ancestors[name] = set(kept).union(*(ancestors[p] for p in kept)) if kept else set()
    return parents


def dag_source(parents: dict[str, list[str]]) -> str:
    lines = []
    for name, ps in parents.items():
        if not ps:
            lines.append(f"TYPE {name} POSSREP {{X INTEGER}};")
        elif len(ps) == 1:
            lines.append(f"TYPE {name} IS {{{ps[0]} CONSTRAINT THE_X({ps[0]}) > 0 POSSREP {{X = THE_X({ps[0]})}}}};")
        else:
            lines.append(f"TYPE {name} IS {{{', '.join(ps)} POSSREP {{X = THE_X({ps[0]})}}}};")
    return "\n".join(lines) + "\n"


def closure_oracle(parents: dict[str, list[str]]) -> set[tuple[str, str]]:
    """Reflexive-transitive closure by Floyd-Warshall over the parent relation."""
    nodes = list(parents)
    reach = {(a, b): a == b or b in parents[a] for a, b in product(nodes, nodes)}
    for k in nodes:
        for i in nodes:
            if not reach[i, k]:
                continue
            for j in nodes:
                if reach[k, j]:
                    reach[i, j] = True
    return {pair for pair, ok in reach.items() if ok}
