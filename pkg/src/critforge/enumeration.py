"""Exhaustive search for arithmetical structures on small trees.

The search assigns r values in a depth-first vertex order rooted at a
highest-degree vertex.  Leaf values must divide their neighbor's value,
and once all but one member of some vertex's neighborhood is fixed the
last member is pinned to a residue class, which prunes hard enough to
finish on every tree this module accepts.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import gcd

from .arithstruct import ArithmeticalStructure, structure_from_r
from .graphcore import Tree


class EnumerationError(Exception):
    """Base class for errors raised by this module."""


class TreeTooLarge(EnumerationError):
    pass


@dataclass(frozen=True)
class EnumerationConfig:
    """Knobs for the exhaustive search.

    ``r_bound`` caps every r value.  ``vertex_cap`` refuses trees too
    large to finish in reasonable time; it cannot be raised past 12.
    """

    r_bound: int = 60
    vertex_cap: int = 12

    def __post_init__(self) -> None:
        if not isinstance(self.r_bound, int) or self.r_bound < 1:
            raise ValueError(f"r_bound must be a positive integer, got {self.r_bound!r}")
        if not isinstance(self.vertex_cap, int) or not 1 <= self.vertex_cap <= 12:
            raise ValueError(f"vertex_cap must lie in 1..12, got {self.vertex_cap!r}")


def _divisor_table(bound: int) -> list[list[int]]:
    divs: list[list[int]] = [[] for _ in range(bound + 1)]
    for d in range(1, bound + 1):
        for mult in range(d, bound + 1, d):
            divs[mult].append(d)
    return divs


def enumerate_structures(t: Tree, config: EnumerationConfig | None = None,
                         ) -> list[ArithmeticalStructure]:
    """All structures on t with every r value at most the bound.

    Results are sorted by their r vectors in canonical vertex order.
    A large enough bound makes the list complete for the tree: every
    structure at all appears once the bound passes the tree's largest
    reachable r value.
    """
    cfg = config or EnumerationConfig()
    if t.vertex_count > cfg.vertex_cap:
        raise TreeTooLarge(
            f"{t.vertex_count} vertices exceed the cap {cfg.vertex_cap}"
        )
    bound = cfg.r_bound
    n = t.vertex_count

    if n == 1:
        return [structure_from_r(t, {t.vertices[0]: 1})]

    root = min(t.vertices, key=lambda v: (-t.degree(v), v))
    # depth-first order, leaf children last so residue pinning kicks in early
    order: list[str] = []
    parent: dict[str, str | None] = {root: None}
    stack = [root]
    seen = {root}
    while stack:
        v = stack.pop()
        order.append(v)
        kids = [w for w in t.neighbors(v) if w not in seen]
        kids.sort(key=lambda w: (t.degree(w) == 1, w), reverse=True)
        for w in kids:
            seen.add(w)
            parent[w] = v
        stack.extend(kids)
    pos = {v: i for i, v in enumerate(order)}

    # the step at which each vertex's whole neighborhood becomes known
    complete_at: dict[str, int] = {
        u: max(pos[w] for w in (u, *t.neighbors(u))) for u in t.vertices
    }
    checks: list[list[str]] = [[] for _ in range(n)]
    for u, i in complete_at.items():
        checks[i].append(u)
    pinners: list[list[str]] = [[] for _ in range(n)]
    for i, v in enumerate(order):
        for u in t.neighbors(v):
            if complete_at[u] == i:
                pinners[i].append(u)

    divs = _divisor_table(bound)
    r: dict[str, int] = {}
    found: list[tuple[int, ...]] = []

    def candidates(i: int, v: str) -> list[int]:
        base: list[int] | range
        pinned_to_parent = t.degree(v) == 1 and parent[v] is not None
        if pinned_to_parent:
            base = divs[r[parent[v]]]  # type: ignore[index]
        else:
            base = range(1, bound + 1)
        residue = []
        for u in pinners[i]:
            need = (-sum(r[w] for w in t.neighbors(u) if w != v)) % r[u]
            residue.append((r[u], need))
        if not residue:
            return list(base)
        m0, a0 = residue[0]
        start = a0 if a0 else m0
        hits = [x for x in range(start, bound + 1, m0)]
        if pinned_to_parent:
            allowed = set(base)
            hits = [x for x in hits if x in allowed]
        for m, a in residue[1:]:
            hits = [x for x in hits if x % m == a]
        return hits

    def ok_after(i: int, v: str) -> bool:
        for u in checks[i]:
            total = sum(r[w] for w in t.neighbors(u))
            if total % r[u]:
                return False
        return True

    def walk(i: int) -> None:
        if i == n:
            if gcd(*(r[v] for v in order)) == 1:
                found.append(tuple(r[v] for v in t.vertices))
            return
        v = order[i]
        for val in candidates(i, v):
            r[v] = val
            if ok_after(i, v):
                walk(i + 1)
        r.pop(v, None)

    walk(0)
    found.sort()
    out = []
    for vec in found:
        out.append(structure_from_r(t, dict(zip(t.vertices, vec))))
    return out


def count_structures(t: Tree, config: EnumerationConfig | None = None) -> int:
    return len(enumerate_structures(t, config))
