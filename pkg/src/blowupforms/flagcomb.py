"""Ordered set partitions (flags) of simplex vertex sets.

A flag on a vertex set ``V`` is an ordered partition ``(V_0, ..., V_{n-k})``
of ``V`` into nonempty blocks, where ``n = |V| - 1`` and ``k`` is the
complement of the block count.  Flags index basis forms, degrees of freedom,
and faces of the blown-up simplex, so they are immutable and hashable.

Vertex ids are global non-negative integers; every block is kept internally
sorted and the block order is significant.  The canonical enumeration order
is lexicographic on the tuple of blocks, which fixes all matrix/report
layouts byte-for-byte.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from itertools import permutations


def vertex_set(ids) -> tuple[int, ...]:
    """Canonicalize a collection of vertex ids to a sorted distinct tuple."""
    vs = tuple(sorted(ids))
    if not vs:
        raise ValueError("vertex set must be nonempty")
    for v in vs:
        if not isinstance(v, int) or isinstance(v, bool) or v < 0:
            raise ValueError(f"vertex ids must be non-negative integers, got {v!r}")
    if len(set(vs)) != len(vs):
        raise ValueError(f"vertex ids must be distinct, got {ids!r}")
    return vs


class Flag:
    """An ordered partition of a vertex set into nonempty blocks.

    Immutable value type: equality, hashing, and ordering are structural.
    """

    __slots__ = ("blocks",)

    def __init__(self, blocks):
        bs = tuple(vertex_set(b) for b in blocks)
        if not bs:
            raise ValueError("flag needs at least one block")
        seen: set[int] = set()
        for b in bs:
            if seen.intersection(b):
                raise ValueError(f"blocks must be disjoint, got {blocks!r}")
            seen.update(b)
        object.__setattr__(self, "blocks", bs)

    def __setattr__(self, name, value):
        raise AttributeError("Flag is immutable")

    # -- derived data ------------------------------------------------------

    @property
    def vertices(self) -> tuple[int, ...]:
        return tuple(sorted(v for b in self.blocks for v in b))

    @property
    def n(self) -> int:
        return len(self.vertices) - 1

    @property
    def k(self) -> int:
        """Complement of the block count: k = |V| - (number of blocks)."""
        return len(self.vertices) - len(self.blocks)

    @property
    def block_sizes(self) -> tuple[int, ...]:
        return tuple(len(b) for b in self.blocks)

    @property
    def block_factorial(self) -> int:
        """Product of n_j! over blocks, with n_j = |V_j| - 1."""
        out = 1
        for b in self.blocks:
            out *= math.factorial(len(b) - 1)
        return out

    def block_of(self, v: int) -> int:
        for j, b in enumerate(self.blocks):
            if v in b:
                return j
        raise KeyError(f"vertex {v} not in flag {self}")

    # -- operations --------------------------------------------------------

    def coarsen(self, j: int) -> "Flag":
        """Merge blocks V_{j-1} and V_j; valid for 1 <= j <= (block count)-1."""
        if not 1 <= j <= len(self.blocks) - 1:
            raise ValueError(f"merge index {j} out of range for {self}")
        merged = tuple(sorted(self.blocks[j - 1] + self.blocks[j]))
        return Flag(self.blocks[: j - 1] + (merged,) + self.blocks[j + 1:])

    def refines(self, other: "Flag") -> bool:
        """True iff self subdivides other's blocks in order (trivially allowed)."""
        if self.vertices != other.vertices:
            raise ValueError("flags must share the same vertex set")
        i = 0
        for target in other.blocks:
            acc: set[int] = set()
            while acc != set(target):
                if i >= len(self.blocks) or not set(self.blocks[i]) <= set(target):
                    return False
                acc.update(self.blocks[i])
                i += 1
        return i == len(self.blocks)

    def permuted(self, perm: dict[int, int]) -> "Flag":
        """Relabel every vertex through a bijection of the vertex set."""
        vs = self.vertices
        if sorted(perm) != list(vs) or sorted(perm.values()) != list(vs):
            raise ValueError("perm must be a bijection of the flag's vertex set")
        return Flag(tuple(tuple(sorted(perm[v] for v in b)) for b in self.blocks))

    # -- text forms ---------------------------------------------------------

    def __str__(self) -> str:
        return "|".join(",".join(str(v) for v in b) for b in self.blocks)

    def compact(self) -> str:
        """Short display like ``01{23}`` when every id is a single digit."""
        if any(v > 9 for v in self.vertices):
            return str(self)
        out = []
        for b in self.blocks:
            s = "".join(str(v) for v in b)
            out.append(s if len(b) == 1 else "{" + s + "}")
        return "".join(out)

    @staticmethod
    def parse(text: str) -> "Flag":
        """Parse ``0|1|2,3`` (blocks by ``|``, vertices by ``,``)."""
        blocks = []
        for part in text.strip().split("|"):
            part = part.strip().strip("{}")
            if not part:
                raise ValueError(f"empty block in flag text {text!r}")
            if "," in part:
                blocks.append(tuple(int(t) for t in part.split(",")))
            else:
                # tolerate compact digit runs like "2" or "23"
                blocks.append(tuple(int(ch) for ch in part.replace(" ", "")))
        return Flag(blocks)

    def __repr__(self) -> str:
        return f"Flag({self})"

    def __eq__(self, other) -> bool:
        return isinstance(other, Flag) and self.blocks == other.blocks

    def __hash__(self) -> int:
        return hash(self.blocks)

    def __lt__(self, other: "Flag") -> bool:
        return (len(self.blocks), self.blocks) < (len(other.blocks), other.blocks)


def enumerate_flags(V, k: int) -> list[Flag]:
    """All flags on V with the given k, in canonical lexicographic order."""
    vs = vertex_set(V)
    n = len(vs) - 1
    if not 0 <= k <= n:
        raise ValueError(f"k={k} out of range for |V|={len(vs)}")
    m = len(vs) - k  # number of blocks
    out = [Flag(p) for part in _set_partitions(vs, m) for p in permutations(part)]
    out.sort()
    return out


def _set_partitions(elems: tuple[int, ...], m: int):
    """Unordered partitions of elems into exactly m blocks (blocks sorted)."""
    if m == 1:
        yield (elems,)
        return
    if len(elems) == m:
        yield tuple((e,) for e in elems)
        return
    if len(elems) < m:
        return
    first, rest = elems[0], elems[1:]
    # first element joins an existing block of a smaller partition, or is alone
    for part in _set_partitions(rest, m):
        for i in range(m):
            yield part[:i] + (tuple(sorted((first,) + part[i])),) + part[i + 1:]
    for part in _set_partitions(rest, m - 1):
        yield ((first,),) + part


def enumerate_arrival_sequences(flag: Flag) -> list[tuple[int, ...]]:
    """All admissible interleavings of block-labeled particle receipts.

    Block j contributes |V_j| particles of label j.  A word is admissible
    when, for every j >= 1, the final particle of label j-1 precedes the
    final particle of label j (blocks complete in flag order).  Words are
    returned in lexicographic order.
    """
    counts = list(flag.block_sizes)
    out: list[tuple[int, ...]] = []

    def rec(prefix: list[int], remaining: list[int]):
        if not any(remaining):
            out.append(tuple(prefix))
            return
        for j, c in enumerate(remaining):
            if c == 0:
                continue
            # completing block j is only allowed once all earlier blocks are done
            if c == 1 and any(remaining[i] for i in range(j)):
                continue
            remaining[j] -= 1
            prefix.append(j)
            rec(prefix, remaining)
            prefix.pop()
            remaining[j] += 1

    rec([], counts)
    return out


@dataclass(frozen=True)
class ArrivalSequence:
    """Outcome record of a repeated receive-r-then-silence experiment.

    rounds:   per round, a sorted tuple of (vertex id, particles received);
              counts in a round sum to r.
    silenced: per round, the vertex set silenced afterwards (the sources
              with count >= 1 that round).
    r:        number of particles received per round.
    """

    r: int
    rounds: tuple[tuple[tuple[int, int], ...], ...]
    silenced: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        if self.r < 1:
            raise ValueError("degree r must be positive")
        if len(self.rounds) != len(self.silenced):
            raise ValueError("one silenced set per round required")
        seen: set[int] = set()
        for rnd, sil in zip(self.rounds, self.silenced):
            if sum(c for _, c in rnd) != self.r:
                raise ValueError(f"round counts must sum to r={self.r}")
            hit = tuple(sorted(v for v, c in rnd if c >= 1))
            if hit != tuple(sorted(sil)):
                raise ValueError("silenced set must equal the sources hit that round")
            if seen.intersection(sil):
                raise ValueError("silenced sets must be disjoint")
            seen.update(sil)

    @property
    def flag(self) -> Flag:
        """The flag recording the silencing order."""
        return Flag(self.silenced)

    def compact(self) -> str:
        """Digit-string display like ``001|222`` (single-digit ids only)."""
        parts = []
        for rnd in self.rounds:
            parts.append("".join(str(v) * c for v, c in rnd))
        return "|".join(parts)
