"""Building trees and structures that hit a prescribed critical group.

The workhorse is a broom: a starlike tree with a fan of length-one
prong tentacles and one long tail.  Prong values encode the wanted
invariant factors; the tail is a remainder cascade that winds the
center value down to one, keeping the labelling primitive.  Brooms are
then planted onto the pieces of a starlike decomposition to realize a
group on a subdivision of an arbitrary tree.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import gcd

from .arithstruct import (
    ArithmeticalStructure,
    critical_group,
    laplacian_structure,
    structure_from_r,
)
from .exactlinalg import AbelianGroup
from .graphcore import Tentacle, Tree, build_tree, subdivide, tentacles
from .mergestar import merge_structures, starlike_critical_group
from .treedecomp import InternalInconsistency, iota, starlike_decomposition


class ConstructError(Exception):
    """Base class for errors raised by this module."""


class TooManyFactors(ConstructError):
    pass


class BetaOutOfRange(ConstructError):
    pass


class PathWithNontrivialTarget(ConstructError):
    pass


@dataclass(frozen=True)
class BroomPlan:
    """Numeric layout of a broom realizing a group.

    ``prong_values`` lists the r values of the length-one tentacles,
    the final one always 1; ``tail_values`` runs from the vertex next
    to the center out to the tail leaf, strictly decreasing to 1.
    """

    target: AbelianGroup
    center_value: int
    prong_values: tuple[int, ...]
    tail_values: tuple[int, ...]


def plan_broom(target: AbelianGroup, prongs: int) -> BroomPlan:
    """Lay out a broom with ``prongs`` + 1 prong tentacles and a tail.

    The target's invariant factors are padded with ones to length
    ``prongs``; the center carries the square of the top factor and
    each prong divides it by one factor.  The tail alternates the
    negated remainder cascade down to 1, so consecutive tail values
    are coprime and the whole labelling is primitive.
    """
    if not isinstance(prongs, int) or prongs < 1:
        raise ConstructError(f"prong count must be a positive integer, got {prongs!r}")
    factors = target.invariant_factors
    if len(factors) > prongs:
        raise TooManyFactors(
            f"{len(factors)} invariant factors need at least that many prongs, "
            f"got {prongs}"
        )
    padded = (1,) * (prongs - len(factors)) + factors
    top = padded[-1]
    center = top * top
    prong_values = tuple(center // a for a in padded) + (1,)
    if center == 1:
        tail = (1,)
    else:
        prev, cur = center, (-(sum(prong_values))) % center
        tail = [cur]
        while cur != 1:
            prev, cur = cur, (-prev) % cur
            tail.append(cur)
        tail = tuple(tail)
    for a, b in zip((center,) + tail, tail):
        assert gcd(a, b) == 1
    return BroomPlan(
        target=target,
        center_value=center,
        prong_values=prong_values,
        tail_values=tail,
    )


def broom_with_group(target: AbelianGroup, prongs: int) -> tuple[Tree, ArithmeticalStructure]:
    """A starlike tree and structure whose critical group is ``target``.

    The tree has ``prongs`` + 1 leaves at distance one from the center
    and a tail path; its leaf count is ``prongs`` + 2.
    """
    plan = plan_broom(target, prongs)
    width = max(2, len(str(len(plan.prong_values))), len(str(len(plan.tail_values))))
    center = "c"
    prong_names = [f"p{i + 1:0{width}d}" for i in range(len(plan.prong_values))]
    tail_names = [f"t{i + 1:0{width}d}" for i in range(len(plan.tail_values))]
    edges = [(center, p) for p in prong_names]
    chain = [center] + tail_names
    edges += list(zip(chain, chain[1:]))
    tree = build_tree(edges)
    r = {center: plan.center_value}
    for name, val in zip(prong_names, plan.prong_values):
        r[name] = val
    for name, val in zip(tail_names, plan.tail_values):
        r[name] = val
    s = structure_from_r(tree, r)
    assert s.r == r, "broom labelling was not primitive"
    got = starlike_critical_group(tree, s)
    assert got == target, f"broom produced {got}, wanted {target}"
    return tree, s


def realize_group(target: AbelianGroup) -> tuple[Tree, ArithmeticalStructure]:
    """Some tree and structure with the given critical group.

    The trivial group comes from the Laplacian on a single edge; any
    other group comes from a broom with one prong per invariant factor.
    """
    if target.is_trivial:
        tree = build_tree([("a", "b")])
        return tree, laplacian_structure(tree)
    return broom_with_group(target, len(target.invariant_factors))


def _lowest_branch_edge(t: Tree) -> tuple[str, str]:
    for u, v, _ in t.edges():
        if t.degree(u) >= 3 and t.degree(v) >= 3:
            return (u, v)
    raise InternalInconsistency("no adjacent branch vertices left to separate")


def _tail_spread(piece: Tree, ten: Tentacle, center: str,
                 values: tuple[int, ...]) -> tuple[Tree, dict[str, int]]:
    """Stretch a tentacle to carry the tail values, subdividing if short.

    Returns the possibly grown tree and the value assignment for the
    tentacle's final vertex set.  The original leaf keeps its name and
    always carries the last value, which is 1.
    """
    a = ten.length
    b = len(values)
    if b <= a:
        vals = values[: b - 1] + (1,) * (a - b + 1)
        return piece, dict(zip(ten.vertices, vals))
    before_leaf = ten.vertices[-2] if a >= 2 else center
    grown = subdivide(piece, (before_leaf, ten.leaf), b - a + 1)
    fresh = set(grown.vertices) - set(piece.vertices)
    # walk the subdivided stretch from the old neighbor out to the leaf
    stretch = []
    back, node = None, before_leaf
    while node != ten.leaf:
        (nxt,) = [
            w for w in grown.neighbors(node)
            if w != back and (w in fresh or w == ten.leaf)
        ]
        stretch.append(nxt)
        back, node = node, nxt
    full = list(ten.vertices[: a - 1]) + stretch
    assert len(full) == b
    return grown, dict(zip(full, values))


def _realize_piece(piece: Tree, merge_leaf: str | None, target: AbelianGroup,
                   ) -> tuple[Tree, ArithmeticalStructure]:
    """Put a broom labelling onto one decomposition piece."""
    if piece.is_path:
        assert target.is_trivial
        return piece, laplacian_structure(piece)
    (center,) = piece.branch_vertices
    tens = tentacles(piece)
    non_merge = [t for t in tens if t.leaf != merge_leaf]
    prongs = len(tens) - 2
    plan = plan_broom(target, prongs)
    ordered = sorted(non_merge, key=lambda ten: (-ten.length, ten.vertices))
    tail_ten, prong_tens = ordered[0], ordered[1:]
    grown, r = _tail_spread(piece, tail_ten, center, plan.tail_values)
    r[center] = plan.center_value
    for ten, val in zip(prong_tens, plan.prong_values):
        for v in ten.vertices:
            r[v] = val
    if merge_leaf is not None:
        r[merge_leaf] = plan.prong_values[-1]
    s = structure_from_r(grown, r)
    assert s.r == r, "piece labelling was not primitive"
    got = starlike_critical_group(grown, s)
    assert got == target, f"piece produced {got}, wanted {target}"
    return grown, s


def _suppress_fresh(big: Tree, original: Tree) -> bool:
    """Does contracting the non-original degree-two vertices give back the tree?"""
    fresh = set(big.vertices) - set(original.vertices)
    if any(big.degree(v) != 2 for v in fresh):
        return False
    adj = {v: {w: 1 for w in big.neighbors(v)} for v in big.vertices}
    for f in sorted(fresh):
        a, b = sorted(adj[f])
        del adj[a][f]
        del adj[b][f]
        del adj[f]
        if b in adj[a]:
            return False
        adj[a][b] = 1
        adj[b][a] = 1
    return Tree(adj) == original


def realize_on_subdivision(t: Tree, target: AbelianGroup, beta: int,
                           ) -> tuple[Tree, ArithmeticalStructure]:
    """A structure with the given group on a subdivision of ``t``.

    ``beta`` prescribes the irregularity count of the subdivision; it
    can be anything from 0 up to the irregularity of ``t`` itself.
    Adjacent branch vertices are separated until the count lands on
    ``beta``, then each starlike piece receives a broom labelling
    carrying its share of the invariant factors, and the pieces are
    merged back along the original tree.  The subdivision relation, the final
    irregularity, and the critical group are all re-checked.
    """
    base_iota = iota(t)
    if not isinstance(beta, int) or not 0 <= beta <= base_iota:
        raise BetaOutOfRange(
            f"beta must lie in 0..{base_iota}, got {beta!r}"
        )
    factors = target.invariant_factors
    if t.is_path:
        if factors:
            raise PathWithNontrivialTarget(
                "paths only carry the trivial critical group"
            )
        return t, laplacian_structure(t)

    cur = t
    while True:
        cnt = iota(cur)
        if cnt == beta:
            break
        # Separating a branch pair drops the count by at most one and
        # never raises it, and each pass removes one pair, so the loop
        # walks through beta exactly before the pairs run out.
        grown = subdivide(cur, _lowest_branch_edge(cur), 2)
        after = iota(grown)
        if after not in (cnt, cnt - 1):
            raise InternalInconsistency(
                f"separating one branch pair moved the count {cnt} -> {after}"
            )
        cur = grown

    dec = starlike_decomposition(cur)
    caps = [max(len(p.leaves) - 2, 0) for p in dec.pieces]
    if len(factors) > sum(caps):
        raise TooManyFactors(
            f"{len(factors)} factors exceed the budget {sum(caps)} "
            f"of this subdivision"
        )
    buckets: list[list[int]] = [[] for _ in dec.pieces]
    remaining = caps[:]
    for f in sorted(factors, reverse=True):
        i = max(range(len(caps)), key=lambda j: (remaining[j], -j))
        assert remaining[i] > 0
        remaining[i] -= 1
        buckets[i].append(f)
    piece_targets = [AbelianGroup(tuple(sorted(b))) for b in buckets]

    k = len(dec.pieces)
    acc_tree, acc_struct = _realize_piece(dec.pieces[-1], None, piece_targets[-1])
    for i in range(k - 2, -1, -1):
        p_tree, p_struct = _realize_piece(
            dec.pieces[i], dec.merge_leaf(i), piece_targets[i]
        )
        acc_tree, acc_struct = merge_structures(
            acc_tree, dec.target(i), acc_struct,
            p_tree, dec.merge_leaf(i), p_struct,
        )

    assert isinstance(acc_tree, Tree)
    if not _suppress_fresh(acc_tree, t):
        raise InternalInconsistency("result does not contract back onto the input tree")
    got_iota = iota(acc_tree)
    if got_iota != beta:
        raise InternalInconsistency(f"irregularity {got_iota} != requested {beta}")
    got = critical_group(acc_tree, acc_struct)
    if got != target:
        raise InternalInconsistency(f"critical group {got} != target {target}")
    return acc_tree, acc_struct
