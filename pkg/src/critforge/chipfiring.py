"""Chip firing relative to an arithmetical structure.

Firing at v costs d(v) chips and sends one along each incident edge;
negative fire counts borrow.  Degree is weighted by r, so it is
conserved by every move.  Divisors are plain vertex-to-int dicts.
Most operations need only the d labelling; the full structure shows up
where r does (degree and order computations).
"""

from __future__ import annotations

from math import gcd, lcm
from typing import Mapping, Sequence

from .arithstruct import ArithmeticalStructure, laplacian
from .exactlinalg import determinantal_divisor, smith_normal_form, solve_integer
from .graphcore import Graph, Tentacle, Tree, UnknownVertex, path_as_tentacle, tentacles
from .treedecomp import StarlikeDecomposition

Divisor = dict[str, int]


class ChipFiringError(Exception):
    """Base class for errors raised by this module."""


class NonzeroDegree(ChipFiringError):
    pass


class SizeViolation(ChipFiringError):
    pass


def full_divisor(g: Graph, delta: Mapping[str, int]) -> Divisor:
    """Copy a divisor, filling unmentioned vertices with zero chips."""
    for v in delta:
        if not g.has_vertex(v):
            raise UnknownVertex(f"divisor mentions unknown vertex {v!r}")
    return {v: int(delta.get(v, 0)) for v in g.vertices}


def _diagonal(g: Graph, d: Mapping[str, int], v: str) -> int:
    try:
        return int(d[v])
    except KeyError:
        raise ChipFiringError(f"d labelling lacks vertex {v!r}") from None


def fire(g: Graph, d: Mapping[str, int], delta: Mapping[str, int], v: str,
         times: int = 1) -> Divisor:
    """Fire ``times`` times at v; negative counts borrow."""
    out = full_divisor(g, delta)
    if not g.has_vertex(v):
        raise UnknownVertex(f"no vertex {v!r}")
    out[v] -= times * _diagonal(g, d, v)
    for w in g.neighbors(v):
        out[w] += times * g.multiplicity(v, w)
    return out


def divisor_degree(delta: Mapping[str, int], r: Mapping[str, int]) -> int:
    """Total chip count weighted by the r labelling."""
    return sum(int(r[v]) * int(c) for v, c in delta.items())


def equivalent(g: Graph, d: Mapping[str, int], d1: Mapping[str, int],
               d2: Mapping[str, int]) -> Divisor | None:
    """A firing vector taking d1 to d2, or None when they are inequivalent.

    The witness x satisfies d1 - L x = d2 entrywise, where L is the
    structure matrix diag(d) - A.
    """
    a = full_divisor(g, d1)
    b = full_divisor(g, d2)
    rhs = [a[v] - b[v] for v in g.vertices]
    x = solve_integer(laplacian(g, d), rhs)
    if x is None:
        return None
    return {v: xi for v, xi in zip(g.vertices, x)}


def order_in_group(g: Graph, s: ArithmeticalStructure, delta: Mapping[str, int]) -> int:
    """Order of a degree-zero divisor in the critical group."""
    out = full_divisor(g, delta)
    deg = divisor_degree(out, s.r)
    if deg != 0:
        raise NonzeroDegree(f"divisor has degree {deg}, not 0")
    dec = smith_normal_form(laplacian(g, s.d))
    c = dec.left.apply([out[v] for v in g.vertices])
    n = g.vertex_count
    order = 1
    for i in range(n):
        di = dec.d.entry(i, i)
        if di == 0:
            # the zero row of the Smith form pairs with the r vector,
            # so a degree-zero divisor always lands on zero here
            assert c[i] == 0
        else:
            order = lcm(order, di // gcd(di, c[i]))
    return order


def _check_chain(g: Graph, ten: Tentacle) -> None:
    verts = ten.vertices
    if len(set(verts)) != len(verts):
        raise ChipFiringError("tentacle repeats a vertex")
    for v in verts:
        if not g.has_vertex(v):
            raise UnknownVertex(f"tentacle mentions unknown vertex {v!r}")
    if ten.attachment is not None and g.multiplicity(ten.attachment, verts[0]) != 1:
        raise ChipFiringError(
            f"attachment {ten.attachment} not simply adjacent to {verts[0]}"
        )
    for a, b in zip(verts, verts[1:]):
        if g.multiplicity(a, b) != 1:
            raise ChipFiringError(f"{a} and {b} are not simply adjacent")


def sweep_tentacle(g: Graph, d: Mapping[str, int], delta: Mapping[str, int],
                   ten: Tentacle, direction: str) -> tuple[Divisor, Divisor]:
    """Concentrate a tentacle's chips at one of its ends.

    Inward zeroes every tentacle vertex except the first by borrowing
    along the chain toward the attachment; a length-one tentacle is
    untouched.  Outward zeroes the attachment (when present) and all
    tentacle vertices except the leaf, pushing everything onto the leaf
    end.  Returns the new divisor and the net firing vector, negative
    entries meaning borrows.
    """
    if direction not in ("inward", "outward"):
        raise ValueError(f"direction must be 'inward' or 'outward', not {direction!r}")
    _check_chain(g, ten)
    cur = full_divisor(g, delta)
    fired = {v: 0 for v in g.vertices}
    verts = ten.vertices

    def borrow_to_zero(at: str, target: str) -> None:
        nonlocal cur
        amount = cur[target]
        if amount:
            cur = fire(g, d, cur, at, -amount)
            fired[at] -= amount

    if direction == "inward":
        for idx in range(len(verts) - 1, 0, -1):
            borrow_to_zero(verts[idx - 1], verts[idx])
    else:
        if ten.attachment is not None:
            borrow_to_zero(verts[0], ten.attachment)
        for idx in range(1, len(verts)):
            borrow_to_zero(verts[idx], verts[idx - 1])
    return cur, fired


def clearable(g: Graph, d: Mapping[str, int], xs: Sequence[str],
              ys: Sequence[str]) -> bool:
    """Can any chip pile on xs be cleared by firing only at ys?

    True exactly when the xs-by-ys block of the structure matrix has a
    right integer inverse, which its top determinantal divisor detects.
    """
    for v in list(xs) + list(ys):
        if not g.has_vertex(v):
            raise UnknownVertex(f"no vertex {v!r}")
    xs = sorted(set(xs), key=g.index)
    ys = sorted(set(ys), key=g.index)
    if not xs:
        return True
    if len(xs) > len(ys):
        raise SizeViolation(
            f"{len(xs)} target vertices but only {len(ys)} firing sites"
        )
    lap = laplacian(g, d)
    block = lap.submatrix([g.index(v) for v in xs], [g.index(v) for v in ys])
    return determinantal_divisor(block, len(xs)) == 1


def _piece_tentacles(piece: Tree, merge_leaf: str | None) -> tuple[str, list[Tentacle]]:
    """Center and sorted non-merge tentacles of a starlike piece."""
    (center,) = piece.branch_vertices
    tens = [t for t in tentacles(piece) if merge_leaf is None or t.leaf != merge_leaf]
    return center, tens


def reduce_support(t: Tree, d: Mapping[str, int], delta: Mapping[str, int],
                   decomposition: StarlikeDecomposition) -> Divisor:
    """Push a divisor onto few leaves by sweeping piece by piece.

    Works through the decomposition front to back, parking each piece's
    weight near its center, concentrates the last piece onto its leaves,
    then unwinds back to front, sweeping every parked pile out to a
    leaf.  The result is equivalent to the input and supported on at
    most one more vertex than the sum of the per-piece leaf budgets,
    every support vertex a leaf.
    """
    cur = full_divisor(t, delta)
    fired = {v: 0 for v in t.vertices}

    def run(ten: Tentacle, direction: str) -> None:
        nonlocal cur
        nxt, f = sweep_tentacle(t, d, cur, ten, direction)
        cur = nxt
        for v, x in f.items():
            fired[v] += x

    def borrow_at(v: str, amount: int) -> None:
        nonlocal cur
        if amount:
            cur = fire(t, d, cur, v, -amount)
            fired[v] -= amount

    if t.is_path:
        if t.vertex_count > 1:
            end = sorted(t.leaves)[0]
            run(path_as_tentacle(t, end), "inward")
            allowed = {end}
        else:
            allowed = set(t.vertices)
    else:
        pieces = decomposition.pieces
        k = len(pieces)
        allowed = set()

        # forward pass: flatten one tentacle per piece and park the rest
        piece_info = []
        for i in range(k - 1):
            center, tens = _piece_tentacles(
                pieces[i], decomposition.merge_leaf(i)
            )
            piece_info.append((center, tens))
            run(tens[0], "inward")
            borrow_at(center, cur[tens[0].vertices[0]])

        # the last piece carries no merge leaf
        last = pieces[-1]
        if last.is_path:
            end = sorted(last.leaves)[0]
            run(path_as_tentacle(last, end), "inward")
            allowed.add(end)
        else:
            center, tens = _piece_tentacles(last, None)
            run(tens[0], "inward")
            borrow_at(center, cur[tens[0].vertices[0]])
            for ten in tens[1:]:
                run(ten, "outward")
                allowed.add(ten.leaf)

        # backward pass: sweep each parked pile out to its leaves
        for i in range(k - 2, -1, -1):
            center, tens = piece_info[i]
            for ten in tens[1:]:
                run(ten, "outward")
                allowed.add(ten.leaf)

    base = full_divisor(t, delta)
    moved = laplacian(t, d).apply([fired[v] for v in t.vertices])
    assert all(
        base[v] - moved[i] == cur[v] for i, v in enumerate(t.vertices)
    ), "firing vector does not reproduce the reduced divisor"
    budget = sum(max(len(p.leaves) - 2, 0) for p in decomposition.pieces) + 1
    support = [v for v in t.vertices if cur[v]]
    assert len(support) <= budget
    assert all(v in allowed for v in support)
    assert t.vertex_count == 1 or all(t.degree(v) == 1 for v in support)
    return cur
