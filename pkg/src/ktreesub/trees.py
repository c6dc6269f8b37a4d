"""Rooted k-trees on labelled leaves, the contraction order, the bijection
with nested families of single-block partitions, and the enumeration of the
k-tree complex.

A tree is stored as nested tuples: leaves are the integers 1..m, internal
vertices are tuples of children sorted by minimal leaf.  Equality is
structural.
"""

from __future__ import annotations

from itertools import combinations

import numpy as np

from . import _kernels as kernels
from .errors import FaceNotPresent, NotNested, ResourceLimit
from .complexes import SimplicialComplex
from .partitions import Partition, PartitionPoset, g_set


def _leafset(node) -> frozenset:
    if isinstance(node, int):
        return frozenset((node,))
    out = set()
    for c in node:
        out |= _leafset(c)
    return frozenset(out)


def _canonize(node):
    if isinstance(node, int):
        return node
    kids = tuple(sorted((_canonize(c) for c in node), key=lambda c: min(_leafset(c))))
    return kids


class KTree:
    """Rooted tree with leaves 1..m and every internal outdegree > 1 and
    ≡ 1 (mod k)."""

    __slots__ = ("m", "k", "root")

    def __init__(self, m: int, k: int, root):
        root = _canonize(root)
        leaves = _leafset(root)
        if leaves != frozenset(range(1, m + 1)) or not isinstance(root, tuple):
            raise ValueError("leaves must be exactly 1..m under an internal root")
        self.m = m
        self.k = k
        self.root = root
        for node in self.internal_nodes():
            out = len(node)
            if out <= 1 or (out - 1) % k != 0:
                raise ValueError(
                    f"internal outdegree {out} violates >1 and ≡1 (mod {k})"
                )

    def internal_nodes(self):
        """All internal vertices (root included), depth first."""
        out = []
        stack = [self.root]
        while stack:
            node = stack.pop()
            if isinstance(node, tuple):
                out.append(node)
                stack.extend(node)
        return out

    def internal_leafsets(self):
        """Leaf sets below the non-root internal vertices."""
        return [_leafset(n) for n in self.internal_nodes() if n is not self.root]

    def __eq__(self, other):
        return (
            isinstance(other, KTree)
            and (self.m, self.k, self.root) == (other.m, other.k, other.root)
        )

    def __hash__(self):
        return hash((self.m, self.k, self.root))

    def __repr__(self):
        return f"KTree({self.m}, {self.k}, {self.to_newick()!r})"

    def to_newick(self) -> str:
        def render(node):
            if isinstance(node, int):
                return str(node)
            return "(" + ",".join(render(c) for c in node) + ")"

        return render(self.root) + ";"


def star_tree(m: int, k: int) -> KTree:
    return KTree(m, k, tuple(range(1, m + 1)))


def tree_to_nested(t: KTree) -> frozenset:
    """Leaf sets of the non-root internal vertices, as single-block
    partitions."""
    return frozenset(Partition.atom(t.m, ls) for ls in t.internal_leafsets())


def nested_to_tree(m: int, k: int, family) -> KTree:
    """Tree whose non-root internal vertices carry the family's blocks.

    The covering relation puts U2 below U1 exactly when U2 is maximal among
    the blocks strictly inside U1; leaves attach to the smallest block
    containing them.  Raises NotNested when the blocks are neither disjoint
    nor nested pairwise, or when a block is the whole ground set.
    """
    blocks = set()
    for x in family:
        ns = x.nonsingleton_blocks()
        if len(ns) != 1 or (len(ns[0]) - 1) % k != 0:
            raise NotNested(f"{x.text()} is not a building-set element for k={k}")
        blocks.add(frozenset(ns[0]))
    root = frozenset(range(1, m + 1))
    if root in blocks:
        raise NotNested("the one-block partition cannot appear in a tree family")
    for a, b in combinations(blocks, 2):
        inter = a & b
        if inter and inter != a and inter != b:
            raise NotNested(f"blocks {sorted(a)} and {sorted(b)} overlap without nesting")

    children_blocks = {b: [] for b in blocks}
    children_blocks[root] = []
    for b in blocks:
        strict_supers = [c for c in blocks if b < c]
        parent = min(strict_supers, key=len) if strict_supers else root
        children_blocks[parent].append(b)

    def build(block):
        covered = set()
        for c in children_blocks[block]:
            covered |= c
        kids = [build(c) for c in children_blocks[block]]
        kids += [x for x in sorted(block - covered)]
        return tuple(kids)

    return KTree(m, k, build(root))


def contract(t: KTree, leafsets) -> KTree:
    """Contract the internal edges above the internal vertices with the given
    leaf sets (each given as an iterable of leaves or a single-block
    partition)."""
    wanted = set()
    for ls in leafsets:
        if isinstance(ls, Partition):
            ns = ls.nonsingleton_blocks()
            if len(ns) != 1:
                raise FaceNotPresent(f"{ls.text()} does not name an internal vertex")
            wanted.add(frozenset(ns[0]))
        else:
            wanted.add(frozenset(ls))
    present = set(t.internal_leafsets())
    missing = wanted - present
    if missing:
        raise FaceNotPresent(f"no internal vertex with leaves {sorted(map(sorted, missing))}")

    def rebuild(node):
        kids = []
        for c in node:
            if isinstance(c, int):
                kids.append(c)
                continue
            sub = rebuild(c)
            if _leafset(c) in wanted:
                kids.extend(sub)
            else:
                kids.append(sub)
        return tuple(kids)

    return KTree(t.m, t.k, rebuild(t.root))


def is_k_nested(pk: PartitionPoset, members) -> bool:
    """Nestedness of a family of building-set elements, checked literally:
    every subset of >= 2 pairwise-incomparable members must have exactly one
    minimal upper bound in the restricted poset, lying outside G."""
    parts = sorted(set(members), key=Partition.sort_key)
    gset = set(pk.g_partitions())
    for x in parts:
        if x not in gset:
            raise ValueError(f"{x.text()} is not a G-element")
    if Partition.one(pk.m) in parts:
        return False
    idx = [pk.index(x) for x in parts]
    leq = pk.poset.leq
    n = len(idx)
    for size in range(2, n + 1):
        for sub in combinations(range(n), size):
            antichain = all(
                not leq[idx[a], idx[b]] and not leq[idx[b], idx[a]]
                for a, b in combinations(sub, 2)
            )
            if not antichain:
                continue
            mubs = pk.poset.minimal_upper_bounds([idx[a] for a in sub])
            if len(mubs) != 1 or pk.partition(mubs[0]) in gset:
                return False
    return True


def enumerate_ktree_complex(n: int, k: int, max_faces: int = 200_000) -> SimplicialComplex:
    """The complex of k-trees on m = (n-1)k+1 leaves: vertices are the
    building-set elements below the top, faces are the nested families.

    Faces are generated as subsets whose blocks are pairwise disjoint or
    nested, which coincides with the minimal-upper-bound condition (the
    content of the structural lemma on G, checked exhaustively in the test
    suite)."""
    if n < 3 or k < 1:
        raise ValueError("need n >= 3 and k >= 1")
    m = (n - 1) * k + 1
    verts = [x for x in g_set(m, k) if x != Partition.one(m)]
    masks = np.array(
        [_mask_of(x) for x in verts],
        dtype=np.uint64,
    )
    compat = kernels.block_compat(masks)
    nv = len(verts)
    faces = []

    def grow(face, start):
        for j in range(start, nv):
            if all(compat[i, j] for i in face):
                new = face + (j,)
                faces.append(frozenset(new))
                if len(faces) > max_faces:
                    raise ResourceLimit(f"k-tree complex exceeds {max_faces} faces")
                grow(new, j + 1)

    grow((), 0)
    return SimplicialComplex(verts, faces)


def _mask_of(x: Partition) -> int:
    block = x.nonsingleton_blocks()[0]
    msk = 0
    for v in block:
        msk |= 1 << (v - 1)
    return msk
