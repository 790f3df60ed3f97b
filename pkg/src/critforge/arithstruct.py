"""Arithmetical structures on connected graphs.

A structure is a pair of positive integer labellings (d, r) with
(diag(d) - A) r = 0 and gcd of r equal to 1.  The usual graph Laplacian
is the special case r identically 1, d the degree map.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import gcd
from typing import Mapping

from .exactlinalg import AbelianGroup, IntegerMatrix, smith_normal_form
from .graphcore import Graph, Tree, UnknownVertex, fresh_name


class ArithStructError(Exception):
    """Base class for errors raised by this module."""


class MissingVertexValue(ArithStructError):
    pass


class DivisibilityViolation(ArithStructError):
    pass


class RankDefect(ArithStructError):
    pass


class NonIntegralOrder(ArithStructError):
    pass


@dataclass
class ArithmeticalStructure:
    """Container for the two labellings of one structure on one graph."""

    graph: Graph
    r: dict[str, int]
    d: dict[str, int]

    def __post_init__(self) -> None:
        self.r = {v: int(x) for v, x in self.r.items()}
        self.d = {v: int(x) for v, x in self.d.items()}

    def r_vector(self) -> tuple[int, ...]:
        return tuple(self.r[v] for v in self.graph.vertices)

    def d_vector(self) -> tuple[int, ...]:
        return tuple(self.d[v] for v in self.graph.vertices)

    @property
    def is_laplacian(self) -> bool:
        return all(x == 1 for x in self.r.values())


def _require_values(g: Graph, values: Mapping[str, int], label: str) -> None:
    for v in g.vertices:
        if v not in values:
            raise MissingVertexValue(f"no {label} value for vertex {v}")


def validate(g: Graph, d: Mapping[str, int], r: Mapping[str, int]) -> tuple[bool, list[str]]:
    """Check the pair (d, r) against the structure conditions.

    Returns validity plus diagnostics, reported in canonical vertex
    order with the first offender first; an empty list means valid.
    """
    _require_values(g, r, "r")
    _require_values(g, d, "d")
    problems = []
    for v in g.vertices:
        if r[v] < 1:
            problems.append(f"r({v}) = {r[v]} is not positive")
        if d[v] < 0:
            problems.append(f"d({v}) = {d[v]} is negative")
    if not problems:
        if gcd(*(r[v] for v in g.vertices)) != 1:
            problems.append("gcd of r values exceeds 1")
        rows = g.adjacency_rows()
        for i, v in enumerate(g.vertices):
            total = sum(mult * r[w] for w, mult in zip(g.vertices, rows[i]))
            if d[v] * r[v] != total:
                problems.append(
                    f"balance fails at {v}: d*r = {d[v] * r[v]}, "
                    f"neighbor sum = {total}"
                )
    return not problems, problems


def structure_from_r(g: Graph, r: Mapping[str, int]) -> ArithmeticalStructure:
    """Derive the d labelling from a positive r labelling.

    The r values are first divided by their gcd, so any positive
    multiple of a valid labelling is accepted.  A vertex whose value
    fails to divide its weighted neighbor sum raises, naming the first
    such vertex in canonical order.
    """
    _require_values(g, r, "r")
    vals = {v: int(r[v]) for v in g.vertices}
    for v in g.vertices:
        if vals[v] < 1:
            raise ArithStructError(f"r({v}) = {vals[v]} is not positive")
    g0 = gcd(*vals.values())
    if g0 > 1:
        vals = {v: x // g0 for v, x in vals.items()}
    rows = g.adjacency_rows()
    d = {}
    for i, v in enumerate(g.vertices):
        total = sum(
            mult * vals[w] for w, mult in zip(g.vertices, rows[i]) if mult
        )
        q, rem = divmod(total, vals[v])
        if rem:
            raise DivisibilityViolation(
                f"r({v}) = {vals[v]} does not divide its neighbor sum {total}"
            )
        d[v] = q
    if g.vertex_count > 1:
        assert all(x >= 1 for x in d.values())
    return ArithmeticalStructure(graph=g, r=vals, d=d)


def laplacian_structure(g: Graph) -> ArithmeticalStructure:
    """The classical structure: r identically 1, d the degree map."""
    return structure_from_r(g, {v: 1 for v in g.vertices})


def laplacian(g: Graph, d: Mapping[str, int]) -> IntegerMatrix:
    """The matrix diag(d) - A in canonical vertex order."""
    _require_values(g, d, "d")
    rows = g.adjacency_rows()
    n = g.vertex_count
    return IntegerMatrix(
        [
            [
                (int(d[v]) if i == j else 0) - rows[i][j]
                for j in range(n)
            ]
            for i, v in enumerate(g.vertices)
        ]
    )


def critical_group(g: Graph, s: ArithmeticalStructure) -> AbelianGroup:
    """Torsion of the cokernel of diag(d) - A, from its Smith form.

    For a valid structure on a connected graph the kernel is spanned by
    r, so exactly one diagonal entry of the Smith form vanishes.
    """
    ok, problems = validate(g, s.d, s.r)
    if not ok:
        raise ArithStructError(f"invalid structure: {problems[0]}")
    diag = smith_normal_form(laplacian(g, s.d)).diagonal
    zeros = sum(1 for x in diag if x == 0)
    if zeros != 1:
        raise RankDefect(f"expected corank 1, found {zeros} zero entries")
    return AbelianGroup(tuple(x for x in diag if x > 1))


def tree_order_formula(t: Tree, r: Mapping[str, int]) -> int:
    """Order of the critical group of a tree as a product of r powers.

    Each vertex contributes r(v) to the power (degree - 2); leaves
    therefore divide rather than multiply, and an excess of leaf weight
    that does not cancel signals that r came from no valid structure.
    """
    _require_values(t, r, "r")
    num = 1
    den = 1
    for v in t.vertices:
        e = t.degree(v) - 2
        if e >= 0:
            num *= int(r[v]) ** e
        else:
            den *= int(r[v]) ** (-e)
    q, rem = divmod(num, den)
    if rem:
        raise NonIntegralOrder(f"{num} not divisible by {den}")
    return q


def extend_at(g: Graph, s: ArithmeticalStructure, v: str) -> tuple[Graph, ArithmeticalStructure]:
    """Attach a fresh leaf at ``v`` carrying a copy of its r value.

    The old structure extends: the new leaf gets d = 1 and r = r(v), and
    d(v) grows by one.  Validity is preserved, which is re-checked.
    """
    if not g.has_vertex(v):
        raise UnknownVertex(f"no vertex {v!r}")
    leaf = fresh_name(f"{v}+", g.vertices)
    adj = {u: {w: g.multiplicity(u, w) for w in g.neighbors(u)} for u in g.vertices}
    adj[v][leaf] = 1
    adj[leaf] = {v: 1}
    g2 = Tree(adj) if isinstance(g, Tree) else Graph(adj)
    r2 = dict(s.r)
    d2 = dict(s.d)
    r2[leaf] = s.r[v]
    d2[leaf] = 1
    d2[v] = s.d[v] + 1
    s2 = ArithmeticalStructure(graph=g2, r=r2, d=d2)
    ok, bad = validate(g2, d2, r2)
    if not ok:
        raise ArithStructError(f"extension broke the structure: {bad[0]}")
    return g2, s2
