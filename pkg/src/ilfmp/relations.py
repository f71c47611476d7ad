"""Small helpers for finite binary relations given as sets of pairs."""

from __future__ import annotations

from functools import lru_cache
from itertools import combinations, product
from typing import Hashable, Iterable, Iterator, Sequence

Pair = tuple[Hashable, Hashable]


def image(rel: Iterable[Pair], x: Hashable) -> set:
    return {b for a, b in rel if a == x}


def successor_map(rel: Iterable[Pair]) -> dict:
    out: dict = {}
    for a, b in rel:
        out.setdefault(a, set()).add(b)
    return out


def transitivity_failures(rel: Iterable[Pair]) -> list[tuple]:
    rel = set(rel)
    succ = successor_map(rel)
    return sorted(
        ((a, b, c) for a, b in rel for c in succ.get(b, ()) if (a, c) not in rel),
        key=repr,
    )


def is_transitive(rel: Iterable[Pair]) -> bool:
    rel = set(rel)
    succ = successor_map(rel)
    return all((a, c) in rel for a, b in rel for c in succ.get(b, ()))


def transitive_closure(rel: Iterable[Pair]) -> frozenset:
    """Pairs joined by a path of one or more steps."""
    succ = successor_map(rel)
    out = set()
    for start in list(succ):
        stack = list(succ[start])
        seen = set()
        while stack:
            node = stack.pop()
            if node in seen:
                continue
            seen.add(node)
            out.add((start, node))
            stack.extend(succ.get(node, ()))
    return frozenset(out)


def find_cycle(nodes: Sequence[Hashable], rel: Iterable[Pair]) -> list | None:
    """Some cycle of ``rel`` as a node list, or None when ``rel`` is acyclic."""
    succ = successor_map(rel)
    colour = {v: 0 for v in nodes}
    parent: dict = {}
    for root in nodes:
        if colour[root]:
            continue
        stack = [(root, iter(sorted(succ.get(root, ()), key=repr)))]
        colour[root] = 1
        while stack:
            node, it = stack[-1]
            nxt = next(it, None)
            if nxt is None:
                colour[node] = 2
                stack.pop()
                continue
            if colour.get(nxt, 0) == 1:
                cycle = [nxt]
                cur = node
                while cur != nxt:
                    cycle.append(cur)
                    cur = parent[cur]
                cycle.append(nxt)
                return cycle[::-1]
            if colour.get(nxt, 0) == 0:
                colour[nxt] = 1
                parent[nxt] = node
                stack.append((nxt, iter(sorted(succ.get(nxt, ()), key=repr))))
    return None


def strict_partial_orders(nodes: Sequence[Hashable]) -> Iterator[frozenset]:
    """All transitive irreflexive relations on ``nodes``, in a fixed order.

    Each unordered pair is either unrelated or related one way, so only
    3^(n(n-1)/2) candidates are tested for transitivity.
    """
    return iter(_strict_partial_orders(tuple(nodes)))


@lru_cache(maxsize=16)
def _strict_partial_orders(nodes: tuple) -> tuple[frozenset, ...]:
    pairs = list(combinations(nodes, 2))
    out = []
    for choice in product((0, 1, 2), repeat=len(pairs)):
        rel = set()
        for (a, b), c in zip(pairs, choice):
            if c == 1:
                rel.add((a, b))
            elif c == 2:
                rel.add((b, a))
        if is_transitive(rel):
            out.append(frozenset(rel))
    return tuple(out)


def subsets(items: Sequence) -> Iterator[frozenset]:
    for k in range(len(items) + 1):
        for combo in combinations(items, k):
            yield frozenset(combo)
