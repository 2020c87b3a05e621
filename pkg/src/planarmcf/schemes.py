"""Routing schemes: four-interval partitions and their enumeration.

The search over behaviour patterns is compressed per demand pair: each of
the two demands partitions its path indices into four consecutive cyclic
intervals A, B, C, D, and a fixed 4x4 table maps the interval labels of two
paths to their mutual behaviour at their first common vertex. Enumerating
all pairs of such partitions for every demand pair covers every behaviour
pattern an uncrossed solution can realize.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import lru_cache
from typing import Dict, Iterator, List, Sequence, Tuple

from .embedding import Behaviour

LABELS = ("A", "B", "C", "D")

#: Mutual behaviours by (label of first path, label of second path):
#: (first relative to second, second relative to first).
BEHAVIOUR_MATRIX: Dict[Tuple[str, str], Tuple[Behaviour, Behaviour]] = {
    ("A", "A"): (Behaviour.CROSS, Behaviour.CROSS),
    ("A", "B"): (Behaviour.CROSS, Behaviour.CROSS),
    ("A", "C"): (Behaviour.LEFT, Behaviour.LEFT),
    ("A", "D"): (Behaviour.LEFT, Behaviour.RIGHT),
    ("B", "A"): (Behaviour.CROSS, Behaviour.CROSS),
    ("B", "B"): (Behaviour.CROSS, Behaviour.CROSS),
    ("B", "C"): (Behaviour.RIGHT, Behaviour.LEFT),
    ("B", "D"): (Behaviour.RIGHT, Behaviour.RIGHT),
    ("C", "A"): (Behaviour.LEFT, Behaviour.LEFT),
    ("C", "B"): (Behaviour.LEFT, Behaviour.RIGHT),
    ("C", "C"): (Behaviour.CROSS, Behaviour.CROSS),
    ("C", "D"): (Behaviour.CROSS, Behaviour.CROSS),
    ("D", "A"): (Behaviour.RIGHT, Behaviour.LEFT),
    ("D", "B"): (Behaviour.RIGHT, Behaviour.RIGHT),
    ("D", "C"): (Behaviour.CROSS, Behaviour.CROSS),
    ("D", "D"): (Behaviour.CROSS, Behaviour.CROSS),
}


@dataclass(frozen=True)
class IntervalPartition4:
    """Partition of the cyclic index set {0..r-1} into labeled intervals.

    The canonical identity is the label tuple; several (start, lengths)
    encodings can denote the same labeling when intervals are empty.
    """

    labels: tuple  # labels[i] in LABELS for each path index i

    @property
    def r(self) -> int:
        return len(self.labels)

    def label_of(self, i: int) -> str:
        return self.labels[i]

    def members(self, label: str) -> tuple:
        return tuple(i for i, l in enumerate(self.labels) if l == label)

    def __str__(self) -> str:
        return " ".join(
            f"{l}={','.join(map(str, self.members(l)))}" for l in LABELS
        )


def _labels_from_encoding(r: int, start: int, lengths: Tuple[int, int, int]) -> tuple:
    la, lb, lc = lengths
    ld = r - la - lb - lc
    labels = [""] * r
    i = start
    for label, ln in zip(LABELS, (la, lb, lc, ld)):
        for _ in range(ln):
            labels[i % r] = label
            i += 1
    return tuple(labels)


@lru_cache(maxsize=None)
def partitions_of(r: int) -> tuple:
    """All distinct four-interval labelings of {0..r-1}, canonically sorted.

    Deduplicates encodings by their label tuple and orders the result
    lexicographically with A < B < C < D, so the all-A partition comes
    first. Count is at most (r+1)**4.
    """
    if r < 1:
        raise ValueError("request must be at least 1")
    seen = set()
    for start in range(r):
        for la in range(r + 1):
            for lb in range(r + 1 - la):
                for lc in range(r + 1 - la - lb):
                    seen.add(_labels_from_encoding(r, start, (la, lb, lc)))
    return tuple(IntervalPartition4(t) for t in sorted(seen))


def behaviour_lookup(p1: IntervalPartition4, p2: IntervalPartition4,
                     i: int, j: int) -> Tuple[Behaviour, Behaviour]:
    """Mutual behaviour of path i of the first demand and path j of the second."""
    if not 0 <= i < p1.r:
        raise IndexError(f"path index {i} out of range for request {p1.r}")
    if not 0 <= j < p2.r:
        raise IndexError(f"path index {j} out of range for request {p2.r}")
    return BEHAVIOUR_MATRIX[p1.label_of(i), p2.label_of(j)]


@dataclass(frozen=True)
class RoutingScheme:
    """One guess of first-meeting behaviours for every demand pair.

    ``entries`` maps each ordered demand-id pair (h1 < h2) to the interval
    partitions of the two demands. Same-demand pairs carry no entry; their
    first common vertex is the shared source where relative position is
    fixed by the rotation.
    """

    entries: tuple  # tuple[((h1, h2), (IntervalPartition4, IntervalPartition4)), ...]

    def partition_pair(self, h1: int, h2: int):
        for key, val in self.entries:
            if key == (h1, h2):
                return val
        raise KeyError((h1, h2))

    def lookup(self, h1: int, i: int, h2: int, j: int) -> Tuple[Behaviour, Behaviour]:
        """Mutual behaviour of path i of demand h1 and path j of demand h2."""
        if h1 < h2:
            p1, p2 = self.partition_pair(h1, h2)
            return behaviour_lookup(p1, p2, i, j)
        first, second = self.partition_pair(h2, h1)
        b2, b1 = behaviour_lookup(first, second, j, i)
        return b1, b2

    def to_text(self) -> str:
        segments = []
        for (h1, h2), (p1, p2) in self.entries:
            seg = f"{h1}:{h2} " + ",".join(
                f"{l}={'/'.join(map(str, p1.members(l)))}" for l in LABELS
            ) + " | " + ",".join(
                f"{l}={'/'.join(map(str, p2.members(l)))}" for l in LABELS
            )
            segments.append(seg)
        return "  ".join(segments) if segments else "(no demand pairs)"


class SchemeSpace:
    """The full scheme enumeration for a set of requests, indexable by rank.

    Schemes form the cartesian product, over all demand-id pairs, of the
    partition pairs available to that pair. Enumeration order is the
    mixed-radix odometer over that product with the last pair varying
    fastest, which makes the all-A scheme rank zero.
    """

    def __init__(self, requests: Dict[int, int]):
        self.requests = dict(sorted(requests.items()))
        for h, r in self.requests.items():
            if r < 1:
                raise ValueError(f"demand {h}: request must be >= 1")
        ids = list(self.requests)
        self.pairs: List[Tuple[int, int]] = [
            (a, b) for idx, a in enumerate(ids) for b in ids[idx + 1:]
        ]
        self._options: List[list] = []
        for h1, h2 in self.pairs:
            opts1 = partitions_of(self.requests[h1])
            opts2 = partitions_of(self.requests[h2])
            self._options.append([opts1, opts2])
        self.count = 1
        for opts1, opts2 in self._options:
            self.count *= len(opts1) * len(opts2)

    def pair_options(self, pair_index: int) -> list:
        """All (partition, partition) choices for one demand pair."""
        opts1, opts2 = self._options[pair_index]
        return [(p1, p2) for p1 in opts1 for p2 in opts2]

    def scheme_at(self, rank: int) -> RoutingScheme:
        if not 0 <= rank < self.count:
            raise IndexError(f"scheme rank {rank} out of range [0, {self.count})")
        digits = []
        rest = rank
        for opts1, opts2 in reversed(self._options):
            radix = len(opts1) * len(opts2)
            rest, digit = divmod(rest, radix)
            digits.append(digit)
        digits.reverse()
        entries = []
        for (pair, (opts1, opts2)), digit in zip(zip(self.pairs, self._options), digits):
            d1, d2 = divmod(digit, len(opts2))
            entries.append((pair, (opts1[d1], opts2[d2])))
        return RoutingScheme(tuple(entries))

    def __iter__(self) -> Iterator[RoutingScheme]:
        if not self.pairs:
            yield RoutingScheme(())
            return
        choice_lists = [
            [(pair, (p1, p2)) for p1 in opts1 for p2 in opts2]
            for pair, (opts1, opts2) in zip(self.pairs, self._options)
        ]
        for combo in itertools.product(*choice_lists):
            yield RoutingScheme(tuple(combo))

    def __len__(self) -> int:
        return self.count


def enumerate_schemes(requests: Dict[int, int]) -> Iterator[RoutingScheme]:
    """Deterministic stream of all routing schemes for the given requests."""
    return iter(SchemeSpace(requests))


def scheme_count(requests: Dict[int, int]) -> int:
    """Cardinality of enumerate_schemes without materializing it."""
    return SchemeSpace(requests).count


def scheme_count_bound(requests: Dict[int, int]) -> int:
    """The R**(4k(k-1)) ceiling on the scheme count, with R = max request + 1."""
    k = len(requests)
    if k == 0:
        return 1
    big_r = max(requests.values()) + 1
    return big_r ** (4 * k * (k - 1))


def partitions_matching(observed: Dict[Tuple[int, int], Tuple[Behaviour, Behaviour]],
                        r1: int, r2: int) -> list:
    """All partition pairs whose matrix cells reproduce observed behaviours.

    ``observed`` maps (i, j) path-index pairs to the mutual behaviour seen
    at their first common vertex; unobserved cells are unconstrained.
    """
    out = []
    for p1 in partitions_of(r1):
        for p2 in partitions_of(r2):
            if all(behaviour_lookup(p1, p2, i, j) == b for (i, j), b in observed.items()):
                out.append((p1, p2))
    return out
