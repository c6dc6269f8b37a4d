"""Set partitions of {1..m} and the posets of partitions with block sizes
congruent to 1 modulo k, ordered by refinement.

The full partition lattice is the k = 1 case.  Blocks are kept in canonical
form (each block ascending, blocks sorted by least element) and mirrored as
bitmasks, so m is capped at 64.
"""

from __future__ import annotations

import re
from itertools import combinations

import numpy as np

from . import _kernels as kernels
from .errors import ResourceLimit
from .poset import Poset

MAX_GROUND_SET = 64


class Partition:
    """A set partition of {1..m} in canonical block form."""

    __slots__ = ("m", "blocks", "_masks", "_hash")

    def __init__(self, m: int, blocks):
        if m < 1:
            raise ValueError("ground set must be nonempty")
        if m > MAX_GROUND_SET:
            raise ResourceLimit(f"ground sets beyond {MAX_GROUND_SET} elements are out of scope")
        canon = tuple(sorted((tuple(sorted(b)) for b in blocks), key=lambda b: b[0]))
        seen = set()
        for b in canon:
            for x in b:
                if not 1 <= x <= m or x in seen:
                    raise ValueError(f"blocks do not partition 1..{m}")
                seen.add(x)
        if len(seen) != m:
            raise ValueError(f"blocks do not partition 1..{m}")
        self.m = m
        self.blocks = canon
        self._masks = tuple(_mask(b) for b in canon)
        self._hash = hash((m, canon))

    # construction helpers ------------------------------------------------

    @classmethod
    def zero(cls, m: int) -> "Partition":
        return cls(m, [(i,) for i in range(1, m + 1)])

    @classmethod
    def one(cls, m: int) -> "Partition":
        return cls(m, [tuple(range(1, m + 1))])

    @classmethod
    def from_rgs(cls, rgs) -> "Partition":
        """From a restricted growth string (block id per element, 0-based)."""
        groups = {}
        for pos, c in enumerate(rgs):
            groups.setdefault(int(c), []).append(pos + 1)
        return cls(len(rgs), groups.values())

    @classmethod
    def atom(cls, m: int, block) -> "Partition":
        """Partition with the given block and singletons elsewhere."""
        block = tuple(sorted(block))
        rest = [(i,) for i in range(1, m + 1) if i not in set(block)]
        return cls(m, [block] + rest)

    # basic data -----------------------------------------------------------

    @property
    def rank(self) -> int:
        """m minus the number of blocks."""
        return self.m - len(self.blocks)

    @property
    def masks(self):
        return self._masks

    def block_of(self, x: int):
        for b, msk in zip(self.blocks, self._masks):
            if msk >> (x - 1) & 1:
                return b
        raise ValueError(f"{x} not in ground set")

    def nonsingleton_blocks(self):
        return tuple(b for b in self.blocks if len(b) > 1)

    def is_mod_k(self, k: int) -> bool:
        return all((len(b) - 1) % k == 0 for b in self.blocks)

    def sort_key(self):
        return (self.rank, self.blocks)

    # order and joins -------------------------------------------------------

    def refines(self, other: "Partition") -> bool:
        """True iff every block of self is contained in a block of other."""
        if self.m != other.m:
            raise ValueError("partitions live on different ground sets")
        return all(any(bm & om == bm for om in other._masks) for bm in self._masks)

    def join(self, other: "Partition") -> "Partition":
        """Finest common coarsening (union-find over the two block sets)."""
        if self.m != other.m:
            raise ValueError("partitions live on different ground sets")
        parent = list(range(self.m + 1))

        def find(x):
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        for p in (self, other):
            for b in p.blocks:
                for y in b[1:]:
                    parent[find(y)] = find(b[0])
        groups = {}
        for x in range(1, self.m + 1):
            groups.setdefault(find(x), []).append(x)
        return Partition(self.m, groups.values())

    def permute(self, perm) -> "Partition":
        """Relabel by the permutation (perm[i-1] is the image of i) and
        recanonicalize."""
        if len(perm) != self.m:
            raise ValueError("permutation length does not match ground set")
        return Partition(self.m, [[perm[x - 1] for x in b] for b in self.blocks])

    # dunder ----------------------------------------------------------------

    def __eq__(self, other):
        return (
            isinstance(other, Partition)
            and self.m == other.m
            and self.blocks == other.blocks
        )

    def __hash__(self):
        return self._hash

    def __lt__(self, other):
        return self.sort_key() < other.sort_key()

    def __repr__(self):
        return f"Partition({self.m}, {self.text()!r})"

    def text(self) -> str:
        """Shorthand like ``(123)4567``; comma form beyond single digits."""
        if self.m <= 9:
            out = []
            for b in self.blocks:
                s = "".join(str(x) for x in b)
                out.append(f"({s})" if len(b) > 1 else s)
            return "".join(out)
        return "".join("(" + ",".join(str(x) for x in b) + ")" for b in self.blocks)

    def to_json(self):
        return [list(b) for b in self.blocks]


def _mask(block) -> int:
    msk = 0
    for x in block:
        msk |= 1 << (x - 1)
    return msk


def parse_partition(text: str, m: int) -> Partition:
    """Parse CLI shorthand: ``(123)4567`` or ``(1,2,3)(4)(5)``; elements not
    mentioned are taken as singletons."""
    text = text.strip()
    blocks = []
    seen = set()
    pos = 0
    while pos < len(text):
        ch = text[pos]
        if ch == "(":
            end = text.index(")", pos)
            body = text[pos + 1 : end]
            if "," in body or " " in body:
                elems = [int(t) for t in re.split(r"[,\s]+", body.strip()) if t]
            elif m <= 9:
                elems = [int(c) for c in body]
            else:
                elems = [int(body)]
            blocks.append(elems)
            seen.update(elems)
            pos = end + 1
        elif ch.isdigit():
            blocks.append([int(ch)])
            seen.add(int(ch))
            pos += 1
        elif ch in ", ":
            pos += 1
        else:
            raise ValueError(f"cannot parse partition text {text!r}")
    for x in range(1, m + 1):
        if x not in seen:
            blocks.append([x])
    return Partition(m, blocks)


class PartitionPoset:
    """The poset of partitions of {1..m} with all block sizes ≡ 1 (mod k),
    under refinement.  k = 1 gives the full partition lattice."""

    def __init__(self, m: int, k: int, poset: Poset):
        self.m = m
        self.k = k
        self.poset = poset
        self._factors_cache = {}
        self._g_indices = None

    @property
    def kind(self) -> str:
        return "full" if self.k == 1 else "restricted"

    def index(self, x: Partition) -> int:
        return self.poset.index(x)

    def partition(self, i: int) -> Partition:
        return self.poset.labels[i]

    @property
    def zero_index(self) -> int:
        return self.poset.min_index

    @property
    def one_index(self):
        return self.poset.max_index

    def g_indices(self):
        """Indices of the building-set analogue G: single-nonsingleton-block
        partitions of rank divisible by k."""
        if self._g_indices is None:
            self._g_indices = [
                i
                for i, x in enumerate(self.poset.labels)
                if len(x.nonsingleton_blocks()) == 1 and x.rank % self.k == 0
            ]
        return self._g_indices

    def g_partitions(self):
        return [self.poset.labels[i] for i in self.g_indices()]

    def factors(self, x: Partition) -> frozenset:
        """Maximal G-elements below x, computed against the poset order."""
        i = self.index(x)
        got = self._factors_cache.get(i)
        if got is None:
            below = [g for g in self.g_indices() if self.poset.leq[g, i]]
            got = frozenset(self.poset.labels[j] for j in self.poset.maximal_in(below))
            self._factors_cache[i] = got
        return got

    def chain_factors(self, chain) -> frozenset:
        """Union of factors over a chain of proper-part partitions."""
        out = set()
        for x in chain:
            out |= self.factors(x)
        return frozenset(out)

    def minimal_upper_bounds(self, parts) -> list:
        """All minimal upper bounds within this poset, as partitions."""
        idx = [self.index(x) for x in parts]
        return sorted(
            (self.poset.labels[i] for i in self.poset.minimal_upper_bounds(idx)),
            key=Partition.sort_key,
        )


def enumerate_partitions(m: int, k: int, max_elements: int = 100_000) -> PartitionPoset:
    """All partitions of {1..m} with block sizes ≡ 1 (mod k), with refinement
    order, canonical element order, and designated bounds.

    The element count is checked against ``max_elements`` before any
    enumeration happens.
    """
    if m < 1 or k < 1:
        raise ValueError("m and k must be positive")
    if m > MAX_GROUND_SET:
        raise ResourceLimit(f"ground sets beyond {MAX_GROUND_SET} elements are out of scope")
    count = kernels.count_partitions_modk(m, k)
    if count > max_elements:
        raise ResourceLimit(
            f"poset would have {count} elements (cap {max_elements})"
        )
    rgs = kernels.rgs_filtered(m, k)
    parts = [Partition.from_rgs(row) for row in rgs]
    order = sorted(range(len(parts)), key=lambda i: parts[i].sort_key())
    leq = kernels.refinement_leq(rgs)
    leq = leq[np.ix_(order, order)]
    labels = [parts[i] for i in order]
    min_index = labels.index(Partition.zero(m))
    one = Partition.one(m)
    max_index = labels.index(one) if (m - 1) % k == 0 or m == 1 else None
    poset = Poset(labels, leq, min_index=min_index, max_index=max_index, validate=False)
    return PartitionPoset(m, k, poset)


def partition_join(a: Partition, b: Partition) -> Partition:
    return a.join(b)


def join_all(parts) -> Partition:
    """Join of a nonempty family in the full partition lattice."""
    parts = list(parts)
    out = parts[0]
    for p in parts[1:]:
        out = out.join(p)
    return out


def k_minimal_upper_bounds(pk: PartitionPoset, parts) -> list:
    """The set of minimal upper bounds taken inside the restricted poset."""
    return pk.minimal_upper_bounds(parts)


def building_set_I(m: int) -> list:
    """All partitions of {1..m} with exactly one block of size > 1 (the
    minimal building set of the full partition lattice), canonically sorted."""
    out = []
    universe = range(1, m + 1)
    for size in range(2, m + 1):
        for c in combinations(universe, size):
            out.append(Partition.atom(m, c))
    return sorted(out, key=Partition.sort_key)


def g_set(m: int, k: int) -> list:
    """Members of the minimal building set whose rank is divisible by k,
    i.e. whose non-singleton block has size ≡ 1 (mod k)."""
    return [x for x in building_set_I(m) if x.rank % k == 0]


def factors_I(x: Partition) -> frozenset:
    """Factors of x in the minimal building set: one single-block partition
    per non-singleton block of x."""
    return frozenset(Partition.atom(x.m, b) for b in x.nonsingleton_blocks())


def factors_k(pk: PartitionPoset, x: Partition) -> frozenset:
    """Maximal G-elements below x inside the restricted poset."""
    return pk.factors(x)


def factors_k_of_chain(pk: PartitionPoset, chain) -> frozenset:
    return pk.chain_factors(chain)


def apply_permutation(x: Partition, perm) -> Partition:
    return x.permute(perm)
